//! Closed-form catalogue entries.

use crate::error::{Error, Result};
use crate::profiles::pow43;

/// u(x, y) = |x|^{4/3} - |y|^{4/3}, the classical C^{1,1/3} solution.
pub fn closed_aronsson(x: f64, y: f64) -> f64 {
    pow43(x) - pow43(y)
}

/// u(r, θ) = r^{-1/3} (cos^{4/3}((θ+c)/2) - sin^{4/3}((θ+c)/2)).
pub fn closed_aronsson_negexp(r: f64, theta: f64, c: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("r = {r} must be positive")));
    }
    let half = 0.5 * (theta + c);
    Ok(r.powf(-1.0 / 3.0) * (pow43(half.cos()) - pow43(half.sin())))
}

/// Closed-form spherical polar factor of the (B, C) family:
/// h(α) = e^{±(B asin(B cot α/√(C²-B²)) - C atan(C cot α/√(C²-B²/sin²α)))},
/// normalized to 1 at α0. Its log-derivative is ±√(C²-B²/sin²α).
pub fn thm4_case3_h(alpha: f64, b: f64, c: f64, sign: i8, alpha0: f64) -> Result<f64> {
    if c * c <= b * b {
        return Err(Error::Domain("requires C² > B²".into()));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::Spec("sign must be +1 or -1".into()));
    }
    let e = case3_exponent(alpha, b, c)?;
    let e0 = case3_exponent(alpha0, b, c)?;
    Ok(((sign as f64) * (e - e0)).exp())
}

fn case3_exponent(alpha: f64, b: f64, c: f64) -> Result<f64> {
    let s = alpha.sin();
    if s <= 0.0 {
        return Err(Error::Domain("polar angle outside (0, π)".into()));
    }
    let w2 = c * c - b * b / (s * s);
    if w2 <= 0.0 {
        return Err(Error::Domain(format!(
            "sin α = {s} must exceed |B|/|C| = {}",
            (b / c).abs()
        )));
    }
    let cot = alpha.cos() / s;
    let arg = b * cot / (c * c - b * b).sqrt();
    if arg.abs() > 1.0 {
        return Err(Error::Domain("arcsine argument outside [-1, 1]".into()));
    }
    Ok(b * arg.asin() - c * (c * cot / w2.sqrt()).atan())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn aronsson_values() {
        assert_eq!(closed_aronsson(1.0, 0.0), 1.0);
        // -2^{4/3}, frozen from direct arithmetic
        let v = closed_aronsson(0.0, 2.0);
        assert!((v + 2.5198420997897464).abs() <= 1e-14);
    }

    #[test]
    fn aronsson_diagonal_vanishes() {
        for t in [-3.0, -0.7, 0.0, 0.2, 1.9] {
            assert_eq!(closed_aronsson(t, t), 0.0);
        }
    }

    #[test]
    fn negexp_values() {
        assert_eq!(closed_aronsson_negexp(1.0, 0.0, 0.0).unwrap(), 1.0);
        let v = closed_aronsson_negexp(1.0, PI, 0.0).unwrap();
        assert!((v + 1.0).abs() <= 1e-14, "got {v}");
        let v = closed_aronsson_negexp(8.0, 0.0, 0.0).unwrap();
        assert!((v - 0.5).abs() <= 1e-14, "got {v}");
        assert!(closed_aronsson_negexp(0.0, 0.0, 0.0).is_err());
        assert!(closed_aronsson_negexp(-1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn case3_anchor_is_one() {
        for alpha0 in [1.0, FRAC_PI_2, 2.0] {
            let v = thm4_case3_h(alpha0, 0.2, 0.5, 1, alpha0).unwrap();
            assert!((v - 1.0).abs() <= 1e-15);
        }
        let v = thm4_case3_h(FRAC_PI_2, 0.2, 0.5, -1, FRAC_PI_2).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn case3_log_derivative_matches_radicand() {
        // central differences of ln h against ±sqrt(C² - B²/sin²α)
        let (b, c) = (0.2, 0.5);
        let h = 1e-4;
        for sign in [1i8, -1] {
            let mut alpha = 1.0;
            while alpha <= PI - 1.0 {
                let lp = thm4_case3_h(alpha + h, b, c, sign, FRAC_PI_2).unwrap().ln();
                let lm = thm4_case3_h(alpha - h, b, c, sign, FRAC_PI_2).unwrap().ln();
                let got = (lp - lm) / (2.0 * h);
                let s = alpha.sin();
                let want = (sign as f64) * (c * c - b * b / (s * s)).sqrt();
                assert!(
                    (got - want).abs() <= 1e-6,
                    "sign {sign}, α = {alpha}: {got} vs {want}"
                );
                alpha += 0.05;
            }
        }
    }

    #[test]
    fn case3_sign_symmetry() {
        let (b, c) = (0.2, 0.5);
        let mut alpha = 0.7;
        while alpha < PI - 0.7 {
            let p = thm4_case3_h(alpha, b, c, 1, FRAC_PI_2).unwrap();
            let m = thm4_case3_h(alpha, b, c, -1, FRAC_PI_2).unwrap();
            assert!((p * m - 1.0).abs() <= 1e-12, "α = {alpha}: {p} · {m}");
            alpha += 0.1;
        }
    }

    #[test]
    fn case3_domain_guards() {
        assert!(thm4_case3_h(1.2, 0.5, 0.2, 1, FRAC_PI_2).is_err()); // C² <= B²
        assert!(thm4_case3_h(0.05, 0.2, 0.5, 1, FRAC_PI_2).is_err()); // sin α too small
    }
}
