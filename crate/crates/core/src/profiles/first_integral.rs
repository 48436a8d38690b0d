//! First integral of the spherical polar profile ODE.
//!
//! Along trajectories of the H-equation the quantity
//!
//!   c = |a²-a + b²/sin²t + H²| · e^{2a ∫ 1/H} / (a² + b²/sin²t + H²)
//!
//! is conserved, where the integral of 1/H accumulates along the trajectory
//! from its anchor. No closed form for c in terms of (a, b, anchor) is used
//! anywhere; conservation itself is the checkable property.

use crate::error::{Error, Result};

/// Evaluate the conserved quantity at a trajectory point.
///
/// `int_inv_h` is the accumulated integral of 1/H from the anchor to `t`.
pub fn first_integral_thm4i(a: f64, b: f64, t: f64, h: f64, int_inv_h: f64) -> Result<f64> {
    for v in [a, b, t, h, int_inv_h] {
        if !v.is_finite() {
            return Err(Error::Domain("non-finite argument".into()));
        }
    }
    let st = t.sin();
    if st == 0.0 {
        return Err(Error::Domain("sin t = 0 on the polar axis".into()));
    }
    let m = b * b / (st * st);
    let denom = a * a + m + h * h;
    if denom <= 0.0 {
        return Err(Error::Domain(format!("a² + b²/sin²t + H² = {denom} not positive")));
    }
    let num = (a * a - a + m + h * h).abs();
    Ok(num * (2.0 * a * int_inv_h).exp() / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn a_zero_gives_unity() {
        // a = 0 kills both the -a term and the exponential
        for (t, h, i) in [(1.0, 0.7, 0.3), (2.2, -1.4, -0.8), (FRAC_PI_2, 0.01, 12.0)] {
            let c = first_integral_thm4i(0.0, 0.4, t, h, i).unwrap();
            assert!((c - 1.0).abs() <= 1e-15, "got {c}");
        }
    }

    #[test]
    fn cot_branch_vanishes_at_equator() {
        // a=1, b=0 admits H = cot t; at t = pi/2 the numerator vanishes
        let t = FRAC_PI_2;
        let h = t.cos() / t.sin(); // = cot(pi/2) = 0 up to rounding
        let c = first_integral_thm4i(1.0, 0.0, t, h, 0.0).unwrap();
        assert!(c.abs() <= 1e-30, "got {c}");
    }

    #[test]
    fn axis_rejected() {
        assert!(first_integral_thm4i(0.5, 0.2, 0.0, 1.0, 0.0).is_err());
    }
}
