//! Profile-ratio ODE right-hand sides.
//!
//! Every separated family reduces to one first-order ODE for the logarithmic
//! derivative of a single factor (the "profile ratio"): G = g'/g over the
//! polar angle, Phi = r f'/f over log-radius, F = f'/f along a Cartesian
//! axis, H = h'/h over the spherical polar angle. All right-hand sides carry
//! a 1/y^2 factor, so y = 0 is a singular point of the flow unless the
//! numerator vanishes with it.

use crate::error::{Error, Result};

/// Declarative description of one profile ODE.
///
/// * `PolarAngularG { a }`: y' = -(a²+y²)(a²-a+y²)/y²  (independent variable: angle)
/// * `PolarRadialPhi { b }`: y' = -(y²+b²)(y²-y+b²)/y²  (independent variable: s = ln r)
/// * `CartesianF { s }`: y' = -(s+y²)²/y²  with s = Σ squared exponential rates
/// * `SphericalPolarH { a, b }`:
///   y' = [b² cos t/sin³t · y - (a²-a + b²/sin²t + y²)(a² + b²/sin²t + y²)]/y²
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OdeSpec {
    PolarAngularG { a: f64 },
    PolarRadialPhi { b: f64 },
    CartesianF { s: f64 },
    SphericalPolarH { a: f64, b: f64 },
}

impl OdeSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            OdeSpec::PolarAngularG { a } => a.is_finite(),
            OdeSpec::PolarRadialPhi { b } => b.is_finite(),
            OdeSpec::CartesianF { s } => s.is_finite() && s >= 0.0,
            OdeSpec::SphericalPolarH { a, b } => a.is_finite() && b.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid ODE coefficients: {self:?}")))
        }
    }

    /// Coefficient of the 1/y² part of the right-hand side. When it is zero
    /// the flow crosses y = 0 with bounded slope (or holds an equilibrium
    /// there) and integration may continue through the crossing.
    pub fn singular_zero_coefficient(&self, t: f64) -> f64 {
        match *self {
            OdeSpec::PolarAngularG { a } => a * a * (a * a - a),
            OdeSpec::PolarRadialPhi { b } => b.powi(4),
            OdeSpec::CartesianF { s } => s * s,
            OdeSpec::SphericalPolarH { a, b } => {
                let m = b * b / sin_sq(t);
                (a * a - a + m) * (a * a + m)
            }
        }
    }

    /// Hard bounds on the independent variable, if any.
    pub fn t_bounds(&self) -> Option<(f64, f64)> {
        match self {
            OdeSpec::SphericalPolarH { .. } => Some((0.0, std::f64::consts::PI)),
            _ => None,
        }
    }

    pub(crate) fn rhs_unchecked(&self, t: f64, y: f64) -> f64 {
        match *self {
            OdeSpec::PolarAngularG { a } => {
                let k = a * a * (a * a - a);
                let w = 2.0 * a * a - a;
                if k == 0.0 {
                    -(y * y + w)
                } else {
                    -(y * y + w + k / (y * y))
                }
            }
            OdeSpec::PolarRadialPhi { b } => {
                let b2 = b * b;
                if b2 == 0.0 {
                    -(y * y - y)
                } else {
                    -(y * y - y + 2.0 * b2 - b2 / y + b2 * b2 / (y * y))
                }
            }
            OdeSpec::CartesianF { s } => {
                if s == 0.0 {
                    -(y * y)
                } else {
                    -(y * y + 2.0 * s + s * s / (y * y))
                }
            }
            OdeSpec::SphericalPolarH { a, b } => {
                let st = t.sin();
                let m = b * b / (st * st);
                let cot_term = b * b * t.cos() / (st * st * st);
                let p = y * y + a * a - a + m;
                let q = y * y + a * a + m;
                (cot_term * y - p * q) / (y * y)
            }
        }
    }

    /// Total derivative d(rhs)/dt along the flow, used for C²-matching
    /// interpolation of tabulated trajectories.
    pub(crate) fn rhs_jet(&self, t: f64, y: f64) -> (f64, f64) {
        let v = self.rhs_unchecked(t, y);
        let ddy = match *self {
            OdeSpec::PolarAngularG { a } => {
                let k = a * a * (a * a - a);
                if k == 0.0 {
                    -2.0 * y
                } else {
                    -(2.0 * y - 2.0 * k / (y * y * y))
                }
            }
            OdeSpec::PolarRadialPhi { b } => {
                let b2 = b * b;
                if b2 == 0.0 {
                    -(2.0 * y - 1.0)
                } else {
                    -(2.0 * y - 1.0 + b2 / (y * y) - 2.0 * b2 * b2 / (y * y * y))
                }
            }
            OdeSpec::CartesianF { s } => {
                if s == 0.0 {
                    -2.0 * y
                } else {
                    -(2.0 * y - 2.0 * s * s / (y * y * y))
                }
            }
            OdeSpec::SphericalPolarH { a, b } => {
                let st = t.sin();
                let m = b * b / (st * st);
                let mp = -2.0 * b * b * t.cos() / (st * st * st);
                let sum2 = 2.0 * y * y + (a * a - a + m) + (a * a + m);
                let n_y = -(mp / 2.0) - 2.0 * y * sum2;
                let n = -(mp / 2.0) * y
                    - (y * y + a * a - a + m) * (y * y + a * a + m);
                n_y / (y * y) - 2.0 * n / (y * y * y)
            }
        };
        let ddt = match *self {
            OdeSpec::SphericalPolarH { a, b } => {
                let st = t.sin();
                let ct = t.cos();
                let s2 = st * st;
                let m = b * b / s2;
                let mp = -2.0 * b * b * ct / (st * s2);
                let mpp = 2.0 * b * b * (1.0 + 2.0 * ct * ct) / (s2 * s2);
                let sum2 = 2.0 * y * y + (a * a - a + m) + (a * a + m);
                (-(mpp / 2.0) * y - mp * sum2) / (y * y)
            }
            _ => 0.0,
        };
        (v, ddt + ddy * v)
    }
}

fn sin_sq(t: f64) -> f64 {
    let s = t.sin();
    s * s
}

/// Right-hand side of the profile ODE described by `spec` at `(t, y)`.
///
/// All families divide by y², so y = 0 is rejected; the spherical family
/// additionally requires sin t ≠ 0.
pub fn ode_rhs(spec: &OdeSpec, t: f64, y: f64) -> Result<f64> {
    spec.validate()?;
    if y == 0.0 {
        return Err(Error::Domain("profile ratio y = 0".into()));
    }
    if let OdeSpec::SphericalPolarH { .. } = spec {
        if t.sin() == 0.0 {
            return Err(Error::Domain("sin t = 0 on the spherical polar axis".into()));
        }
    }
    let v = spec.rhs_unchecked(t, y);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain(format!("non-finite slope at t={t}, y={y}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rhs_direct_substitution() {
        let g = OdeSpec::PolarAngularG { a: 1.0 };
        assert_eq!(ode_rhs(&g, 0.3, 1.0).unwrap(), -2.0);

        let g0 = OdeSpec::PolarAngularG { a: 0.0 };
        assert_eq!(ode_rhs(&g0, 0.0, 2.0).unwrap(), -4.0);

        let f = OdeSpec::CartesianF { s: 0.0 };
        assert_eq!(ode_rhs(&f, 0.0, 1.0).unwrap(), -1.0);

        let h = OdeSpec::SphericalPolarH { a: 0.0, b: 0.0 };
        assert_eq!(ode_rhs(&h, std::f64::consts::FRAC_PI_2, 1.0).unwrap(), -1.0);
    }

    #[test]
    fn rhs_rejects_zero_ratio() {
        let g = OdeSpec::PolarAngularG { a: 1.0 };
        assert!(matches!(ode_rhs(&g, 0.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn rhs_rejects_polar_axis() {
        let h = OdeSpec::SphericalPolarH { a: 0.5, b: 0.2 };
        assert!(matches!(ode_rhs(&h, 0.0, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn factored_forms_match_product_forms() {
        // the factored right-hand sides must agree with the literal products
        let cases = [
            (OdeSpec::PolarAngularG { a: 1.3333333333333333 }, 0.0),
            (OdeSpec::PolarAngularG { a: -0.15 }, 0.0),
            (OdeSpec::PolarRadialPhi { b: 0.5 }, 0.0),
            (OdeSpec::PolarRadialPhi { b: 1.0 }, 0.0),
            (OdeSpec::CartesianF { s: 0.13 }, 0.0),
            (OdeSpec::SphericalPolarH { a: 0.5, b: 0.2 }, 1.1),
        ];
        for (spec, t) in cases {
            for y in [0.37, -1.8, 2.4] {
                let got = ode_rhs(&spec, t, y).unwrap();
                let want = match spec {
                    OdeSpec::PolarAngularG { a } => {
                        -(a * a + y * y) * (a * a - a + y * y) / (y * y)
                    }
                    OdeSpec::PolarRadialPhi { b } => {
                        -(y * y + b * b) * (y * y - y + b * b) / (y * y)
                    }
                    OdeSpec::CartesianF { s } => -(s + y * y) * (s + y * y) / (y * y),
                    OdeSpec::SphericalPolarH { a, b } => {
                        let st = t.sin();
                        let m = b * b / (st * st);
                        (b * b * t.cos() / (st * st * st) * y
                            - (a * a - a + m + y * y) * (a * a + m + y * y))
                            / (y * y)
                    }
                };
                assert!(
                    (got - want).abs() <= 1e-12 * (1.0 + want.abs()),
                    "{spec:?} y={y}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn jet_matches_finite_difference() {
        let cases = [
            (OdeSpec::PolarAngularG { a: 1.3333333333333333 }, 0.4, -1.2),
            (OdeSpec::PolarRadialPhi { b: 0.5 }, 0.0, 1.4),
            (OdeSpec::CartesianF { s: 0.25 }, 0.0, 0.8),
            (OdeSpec::SphericalPolarH { a: 0.5, b: 0.2 }, 1.2, 0.9),
        ];
        for (spec, t, y) in cases {
            let (v, ypp) = spec.rhs_jet(t, y);
            assert_eq!(v, spec.rhs_unchecked(t, y));
            // d/dt rhs(t, y(t)) along the flow by central differences
            let dt = 1e-6;
            let step = |h: f64| {
                // one Euler substep to move along the flow
                let ym = y + h * spec.rhs_unchecked(t, y)
                    + 0.5 * h * h * ypp;
                spec.rhs_unchecked(t + h, ym)
            };
            let fd = (step(dt) - step(-dt)) / (2.0 * dt);
            assert!(
                (fd - ypp).abs() <= 1e-4 * (1.0 + ypp.abs()),
                "{spec:?}: jet {ypp} vs fd {fd}"
            );
        }
    }
}
