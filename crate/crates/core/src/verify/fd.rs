//! Finite-difference ∞-Laplacian operators.
//!
//! Second-order central stencils in each coordinate system. Stencil points
//! are symmetrized exactly: with xp = fl(x + h) and xm = 2x - xp the two
//! offsets are identical reals (the subtraction is exact by Sterbenz), so a
//! function that is affine in one coordinate produces second differences
//! that cancel to exactly zero in floating point. Gradients and Hessians of
//! raw coordinate partials are also returned for residual normalization.

use crate::error::{Error, Result};

/// Scalar field over coordinates, evaluable with domain errors.
pub trait Field {
    fn eval(&self, point: &[f64]) -> Result<f64>;
}

impl<F> Field for F
where
    F: Fn(&[f64]) -> Result<f64>,
{
    fn eval(&self, point: &[f64]) -> Result<f64> {
        self(point)
    }
}

/// Exactly symmetric stencil offsets around x: returns (xp, xm, offset)
/// with xp - x == x - xm == offset exactly.
pub fn symmetric_offsets(x: f64, h: f64) -> (f64, f64, f64) {
    let xp = x + h;
    let xm = 2.0 * x - xp;
    (xp, xm, xp - x)
}

/// Raw ∞-Laplacian value together with the normalization ingredients.
#[derive(Debug, Clone, Copy)]
pub struct FdInfty {
    /// Σ uᵢ uⱼ uᵢⱼ in the native coordinates.
    pub raw: f64,
    /// Σ uᵢ² over coordinate partials.
    pub grad_sq: f64,
    /// Frobenius norm of the coordinate Hessian.
    pub hess_frob: f64,
}

const NORM_EPS: f64 = 1e-14;

impl FdInfty {
    /// |raw| / (|∇u|² ‖D²u‖_F + ε).
    pub fn normalized(&self) -> f64 {
        self.raw.abs() / (self.grad_sq * self.hess_frob + NORM_EPS)
    }
}

struct Stencil<'a, F: Field + ?Sized> {
    u: &'a F,
    point: Vec<f64>,
}

impl<'a, F: Field + ?Sized> Stencil<'a, F> {
    fn at(&self, shifts: &[(usize, f64)]) -> Result<f64> {
        let mut p = self.point.clone();
        for &(i, v) in shifts {
            p[i] = v;
        }
        self.u.eval(&p)
    }

    /// (first derivative, second derivative) along coordinate i.
    fn d1_d2(&self, i: usize, h: f64) -> Result<(f64, f64)> {
        let x = self.point[i];
        let (xp, xm, ha) = symmetric_offsets(x, h);
        let up = self.at(&[(i, xp)])?;
        let um = self.at(&[(i, xm)])?;
        let u0 = self.at(&[])?;
        let d1 = (up - um) / (2.0 * ha);
        let d2 = ((up + um) - 2.0 * u0) / (ha * ha);
        Ok((d1, d2))
    }

    /// Mixed second derivative via the 4-point cross stencil.
    fn d2_cross(&self, i: usize, j: usize, h: f64) -> Result<f64> {
        let (xp, xm, ha) = symmetric_offsets(self.point[i], h);
        let (yp, ym, hb) = symmetric_offsets(self.point[j], h);
        let upp = self.at(&[(i, xp), (j, yp)])?;
        let upm = self.at(&[(i, xp), (j, ym)])?;
        let ump = self.at(&[(i, xm), (j, yp)])?;
        let umm = self.at(&[(i, xm), (j, ym)])?;
        Ok(((upp - upm) - (ump - umm)) / (4.0 * ha * hb))
    }
}

fn check_h(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("step h = {h} must be positive")))
    }
}

/// Cartesian operator Σ uᵢ uⱼ uᵢⱼ with full normalization data.
pub fn fd_infty_cartesian_full<F: Field + ?Sized>(
    u: &F,
    x: &[f64],
    h: f64,
) -> Result<FdInfty> {
    check_h(h)?;
    let n = x.len();
    let st = Stencil { u, point: x.to_vec() };
    let mut grad = vec![0.0; n];
    let mut hess = vec![vec![0.0; n]; n];
    for i in 0..n {
        let (d1, d2) = st.d1_d2(i, h)?;
        grad[i] = d1;
        hess[i][i] = d2;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let m = st.d2_cross(i, j, h)?;
            hess[i][j] = m;
            hess[j][i] = m;
        }
    }
    let mut raw = 0.0;
    let mut grad_sq = 0.0;
    let mut frob = 0.0;
    for i in 0..n {
        grad_sq += grad[i] * grad[i];
        for j in 0..n {
            raw += grad[i] * grad[j] * hess[i][j];
            frob += hess[i][j] * hess[i][j];
        }
    }
    Ok(FdInfty { raw, grad_sq, hess_frob: frob.sqrt() })
}

/// Cartesian ∞-Laplacian residual (raw value).
pub fn fd_infty_cartesian<F: Field + ?Sized>(u: &F, x: &[f64], h: f64) -> Result<f64> {
    Ok(fd_infty_cartesian_full(u, x, h)?.raw)
}

/// Polar operator u_r²u_rr + (2/r²)u_r u_θ u_rθ + (1/r⁴)u_θ²u_θθ
/// - (1/r³)u_r u_θ².
pub fn fd_infty_polar_full<F: Field + ?Sized>(
    u: &F,
    point: (f64, f64),
    h: f64,
) -> Result<FdInfty> {
    check_h(h)?;
    let (r, _theta) = point;
    if r - h <= 0.0 {
        return Err(Error::Domain(format!("stencil leaves r > 0 (r = {r}, h = {h})")));
    }
    let st = Stencil { u, point: vec![point.0, point.1] };
    let (ur, urr) = st.d1_d2(0, h)?;
    let (ut, utt) = st.d1_d2(1, h)?;
    let urt = st.d2_cross(0, 1, h)?;
    let r2 = r * r;
    let raw = ur * ur * urr + 2.0 / r2 * ur * ut * urt + ut * ut * utt / (r2 * r2)
        - ur * ut * ut / (r2 * r);
    let grad_sq = ur * ur + ut * ut;
    let frob = (urr * urr + 2.0 * urt * urt + utt * utt).sqrt();
    Ok(FdInfty { raw, grad_sq, hess_frob: frob })
}

pub fn fd_infty_polar<F: Field + ?Sized>(u: &F, point: (f64, f64), h: f64) -> Result<f64> {
    Ok(fd_infty_polar_full(u, point, h)?.raw)
}

/// Spherical operator (nine terms; α is the polar angle, θ azimuthal).
pub fn fd_infty_spherical_full<F: Field + ?Sized>(
    u: &F,
    point: (f64, f64, f64),
    h: f64,
) -> Result<FdInfty> {
    check_h(h)?;
    let (r, _theta, alpha) = point;
    if r - h <= 0.0 {
        return Err(Error::Domain(format!("stencil leaves r > 0 (r = {r}, h = {h})")));
    }
    if alpha - h <= 0.0 || alpha + h >= std::f64::consts::PI {
        return Err(Error::Domain(format!(
            "stencil leaves alpha in (0, π) (alpha = {alpha}, h = {h})"
        )));
    }
    let st = Stencil { u, point: vec![point.0, point.1, point.2] };
    let (ur, urr) = st.d1_d2(0, h)?;
    let (ut, utt) = st.d1_d2(1, h)?;
    let (ua, uaa) = st.d1_d2(2, h)?;
    let urt = st.d2_cross(0, 1, h)?;
    let ura = st.d2_cross(0, 2, h)?;
    let uta = st.d2_cross(1, 2, h)?;
    let s = alpha.sin();
    let c = alpha.cos();
    let (r2, s2) = (r * r, s * s);
    let r3 = r2 * r;
    let r4 = r2 * r2;
    let raw = ur * ur * urr
        + 2.0 / (r2 * s2) * ur * ut * urt
        + ut * ut * utt / (r4 * s2 * s2)
        - ur * ut * ut / (r3 * s2)
        + 2.0 / r2 * ur * ua * ura
        + ua * ua * uaa / r4
        - ur * ua * ua / r3
        + 2.0 / (r4 * s2) * ut * ua * uta
        - c / (r4 * s2 * s) * ua * ut * ut;
    let grad_sq = ur * ur + ut * ut + ua * ua;
    let frob = (urr * urr
        + utt * utt
        + uaa * uaa
        + 2.0 * (urt * urt + ura * ura + uta * uta))
        .sqrt();
    Ok(FdInfty { raw, grad_sq, hess_frob: frob })
}

pub fn fd_infty_spherical<F: Field + ?Sized>(
    u: &F,
    point: (f64, f64, f64),
    h: f64,
) -> Result<f64> {
    Ok(fd_infty_spherical_full(u, point, h)?.raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Result;

    fn f(g: impl Fn(&[f64]) -> f64) -> impl Fn(&[f64]) -> Result<f64> {
        move |p: &[f64]| Ok(g(p))
    }

    #[test]
    fn linear_field_is_exactly_zero() {
        let u = f(|p| p[0]);
        for (x, y) in [(1.0, 0.5), (0.37, -1.9), (2.31, 0.113)] {
            let raw = fd_infty_cartesian(&u, &[x, y], 1.25e-3).unwrap();
            assert_eq!(raw, 0.0, "at ({x}, {y})");
        }
    }

    #[test]
    fn paraboloid_value() {
        // u = x² + y² at (1, 0): u_x²u_xx = 4·2 = 8 (only surviving term)
        let u = f(|p| p[0] * p[0] + p[1] * p[1]);
        let raw = fd_infty_cartesian(&u, &[1.0, 0.0], 1e-3).unwrap();
        assert!((raw - 8.0).abs() <= 1e-8, "got {raw}");
    }

    #[test]
    fn aronsson_residual_second_order() {
        let u = f(|p| crate::solutions::closed_aronsson(p[0], p[1]));
        let hs = [1e-2, 5e-3, 2.5e-3];
        let res: Vec<f64> = hs
            .iter()
            .map(|&h| fd_infty_cartesian(&u, &[1.0, 0.5], h).unwrap().abs())
            .collect();
        assert!(res[0] > res[1] && res[1] > res[2], "{res:?}");
        let order = crate::verify::observed_order(&hs, &res).unwrap();
        assert!((1.7..=2.3).contains(&order), "order {order}");
    }

    #[test]
    fn polar_theta_linear_exactly_zero() {
        let u = f(|p| p[1]);
        let raw = fd_infty_polar(&u, (1.3, 0.45), 1.25e-3).unwrap();
        assert_eq!(raw, 0.0);
    }

    #[test]
    fn polar_on_circle_small_residual() {
        let u = f(|p| p[0].sqrt() * (0.5 * p[1]).exp());
        let full = fd_infty_polar_full(&u, (1.0, 0.0), 1e-3).unwrap();
        assert!(full.normalized() <= 1e-6, "normalized {}", full.normalized());
    }

    #[test]
    fn polar_off_circle_bounded_away() {
        let u = f(|p| p[0].sqrt() * (0.6 * p[1]).exp());
        let full = fd_infty_polar_full(&u, (1.0, 0.0), 1e-3).unwrap();
        assert!(full.normalized() >= 1e-2, "normalized {}", full.normalized());
        // analytic residual (A²+B²)(A²-A+B²) = 0.61 · 0.11
        assert!((full.raw - 0.0671).abs() <= 1e-4, "raw {}", full.raw);
    }

    #[test]
    fn polar_requires_radial_margin() {
        let u = f(|p| p[0]);
        assert!(fd_infty_polar(&u, (1e-4, 0.0), 1e-3).is_err());
    }

    #[test]
    fn spherical_linear_and_radial() {
        // u = r sin α cos θ is the Cartesian coordinate x
        let u = f(|p: &[f64]| p[0] * p[2].sin() * p[1].cos());
        let raw = fd_infty_spherical(&u, (1.2, 0.4, 1.1), 1e-3).unwrap();
        assert!(raw.abs() <= 1e-7, "got {raw}");
        let tighter = fd_infty_spherical(&u, (1.2, 0.4, 1.1), 2.5e-4).unwrap();
        assert!(tighter.abs() < raw.abs(), "no decay: {tighter} vs {raw}");
        // u = r is exactly linear along the radial stencil line
        let u = f(|p: &[f64]| p[0]);
        let raw = fd_infty_spherical(&u, (1.0, 0.0, std::f64::consts::FRAC_PI_2), 1e-3).unwrap();
        assert_eq!(raw, 0.0);
    }

    #[test]
    fn spherical_requires_alpha_margin() {
        let u = f(|p: &[f64]| p[0]);
        assert!(fd_infty_spherical(&u, (1.0, 0.0, 1e-4), 1e-3).is_err());
        assert!(fd_infty_spherical(&u, (1.0, 0.0, std::f64::consts::PI - 1e-4), 1e-3).is_err());
    }

    #[test]
    fn domain_error_propagates() {
        let u = |p: &[f64]| -> Result<f64> {
            if p[0] <= 1.0 {
                Err(crate::error::Error::Domain("left half".into()))
            } else {
                Ok(p[0])
            }
        };
        assert!(fd_infty_cartesian(&u, &[1.0005, 0.0], 1e-2).is_err());
    }
}
