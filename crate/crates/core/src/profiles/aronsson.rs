//! Closed form of the angular profile ratio for exponent 4/3.
//!
//! Solving the a = 4/3 implicit relation as a cubic in G gives
//!
//!   G(t) = -(4/3) (tan^{1/3}(t+c) + tan^{5/3}(t+c) + tan(t+c)) / (1 - tan²(t+c)),
//!
//! the profile whose integrated factor reproduces cos^{4/3} - sin^{4/3}.
//! Fractional powers of negative arguments use the real odd-root convention
//! sign(x)|x|^p.

use crate::error::{Error, Result};

/// Real cube root preserving sign.
pub fn odd_cbrt(x: f64) -> f64 {
    x.cbrt()
}

/// x^{4/3} under the real odd-root convention; always nonnegative.
pub fn pow43(x: f64) -> f64 {
    let c = x.cbrt();
    let c2 = c * c;
    c2 * c2
}

/// Closed-form angular profile ratio for exponent 4/3.
///
/// Poles at tan²(t+c) = 1 and cos(t+c) = 0 are rejected.
pub fn aronsson_g(t: f64, c: f64) -> Result<f64> {
    let arg = t + c;
    if !arg.is_finite() {
        return Err(Error::Domain("non-finite angle".into()));
    }
    if arg.cos() == 0.0 {
        return Err(Error::Pole(format!("cos(t+c) = 0 at t+c = {arg}")));
    }
    let tau = arg.tan();
    let denom = 1.0 - tau * tau;
    if denom.abs() <= 1e-12 * (1.0 + tau * tau) {
        return Err(Error::Pole(format!("tan²(t+c) = 1 at t+c = {arg}")));
    }
    let cb = odd_cbrt(tau);
    let t13 = cb;
    let t53 = cb * cb * cb * cb * cb;
    Ok(-(4.0 / 3.0) * (t13 + t53 + tau) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::ode::{ode_rhs, OdeSpec};
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    // 50-digit evaluation of the closed form, frozen.
    const G_AT_PI_8: f64 = -2.236867598405413273283525;

    #[test]
    fn zero_at_origin() {
        assert_eq!(aronsson_g(0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn pole_at_quarter_turn() {
        assert!(matches!(aronsson_g(FRAC_PI_4, 0.0), Err(Error::Pole(_))));
    }

    #[test]
    fn high_precision_value() {
        let g = aronsson_g(FRAC_PI_8, 0.0).unwrap();
        assert!((g - G_AT_PI_8).abs() <= 1e-13 * G_AT_PI_8.abs(), "got {g}");
    }

    #[test]
    fn satisfies_profile_ode() {
        // dG/dt by central differences equals the a=4/3 right-hand side,
        // on a grid keeping 0.05 away from the tan poles
        let spec = OdeSpec::PolarAngularG { a: 4.0 / 3.0 };
        let h = 1e-5;
        let mut t = -FRAC_PI_4 + 0.05;
        while t < FRAC_PI_4 - 0.05 {
            if t.abs() > 0.05 {
                let g = aronsson_g(t, 0.0).unwrap();
                let d = (aronsson_g(t + h, 0.0).unwrap() - aronsson_g(t - h, 0.0).unwrap())
                    / (2.0 * h);
                let rhs = ode_rhs(&spec, t, g).unwrap();
                assert!(
                    (d - rhs).abs() <= 1e-6 * (1.0 + rhs.abs()),
                    "t={t}: fd {d} vs rhs {rhs}"
                );
            }
            t += 0.01;
        }
    }

    #[test]
    fn pow43_matches_abs_power() {
        for x in [-2.0, -0.3, 0.0, 0.7, 5.0] {
            assert!((pow43(x) - x.abs().powf(4.0 / 3.0)).abs() <= 1e-14 * (1.0 + pow43(x)));
        }
    }
}
