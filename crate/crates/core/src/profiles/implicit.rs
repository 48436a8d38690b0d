//! Antiderivative (implicit) forms of the profile ODEs and their inversion.
//!
//! Each profile ODE has a closed antiderivative Psi with t + c = Psi(y),
//! branching on the sign of a discriminant (a²-a for the angular family,
//! b²-1/4 for the log-radial family, S = 0 vs S > 0 for the Cartesian one).
//! Psi is strictly monotone between its poles, which makes bracketed
//! inversion well posed branch by branch.

use crate::error::{Error, Result};
use crate::profiles::ode::OdeSpec;

/// Tolerance for classifying a parameter onto a sub-case boundary.
pub const SUBCASE_TOL: f64 = 1e-12;
/// Target accuracy of `invert_implicit`: |t + c - Psi(y)| below this.
pub const INVERT_TOL: f64 = 1e-12;

/// Which branch formula of the antiderivative applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    /// angular, a²-a > 0 (two arctan terms)
    Thm1iiPos,
    /// angular, a = 0 (reciprocal)
    Thm1iiZero,
    /// angular, a = 1 (single arctan)
    Thm1iiOne,
    /// angular, a²-a < 0 (arctan plus log)
    Thm1iiNeg,
    /// log-radial, b²-1/4 > 0
    Thm1iiiPos,
    /// log-radial, b²-1/4 = 0
    Thm1iiiZero,
    /// log-radial, b²-1/4 < 0
    Thm1iiiNeg,
    /// Cartesian, S = 0 (reciprocal)
    Thm23Zero,
    /// Cartesian, S > 0
    Thm23Pos,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Family {
    Angular { a: f64 },
    Radial { b: f64 },
    Cartesian { s: f64 },
}

/// An implicit relation t + c = Psi(y) for one profile family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImplicitRelation {
    family: Family,
    tag: CaseTag,
    c: f64,
}

/// One maximal y-interval on which Psi is monotone and pole-free.
#[derive(Debug, Clone, Copy)]
pub struct Branch {
    pub y_lo: f64,
    pub y_hi: f64,
    /// Psi evaluated just inside `y_lo` (clamped representative).
    pub psi_lo: f64,
    /// Psi evaluated just inside `y_hi`.
    pub psi_hi: f64,
}

impl Branch {
    pub fn psi_range(&self) -> (f64, f64) {
        (self.psi_lo.min(self.psi_hi), self.psi_lo.max(self.psi_hi))
    }

    pub fn contains_target(&self, target: f64, margin: f64) -> bool {
        let (lo, hi) = self.psi_range();
        target > lo + margin && target < hi - margin
    }

    /// Clamped y-bracket usable for inversion inside this branch.
    pub fn bracket(&self) -> (f64, f64) {
        (self.y_lo, self.y_hi)
    }
}

const Y_CLAMP: f64 = 1e8;
const POLE_OFFSET: f64 = 1e-6;

impl ImplicitRelation {
    /// Relation for the polar angular family, sub-case chosen by a²-a.
    pub fn angular(a: f64, c: f64) -> Result<Self> {
        check_finite(&[a, c])?;
        let tag = if a.abs() <= SUBCASE_TOL {
            CaseTag::Thm1iiZero
        } else if (a - 1.0).abs() <= SUBCASE_TOL {
            CaseTag::Thm1iiOne
        } else if a * a - a > 0.0 {
            CaseTag::Thm1iiPos
        } else {
            CaseTag::Thm1iiNeg
        };
        Ok(Self { family: Family::Angular { a }, tag, c })
    }

    /// Relation for the log-radial family, sub-case chosen by b²-1/4.
    pub fn radial(b: f64, c: f64) -> Result<Self> {
        check_finite(&[b, c])?;
        let d = b * b - 0.25;
        let tag = if d.abs() <= SUBCASE_TOL {
            CaseTag::Thm1iiiZero
        } else if d > 0.0 {
            CaseTag::Thm1iiiPos
        } else {
            CaseTag::Thm1iiiNeg
        };
        Ok(Self { family: Family::Radial { b }, tag, c })
    }

    /// Relation for the Cartesian family with S = sum of squared rates.
    pub fn cartesian(s: f64, c: f64) -> Result<Self> {
        check_finite(&[s, c])?;
        if s < 0.0 {
            return Err(Error::Domain(format!("S = {s} must be nonnegative")));
        }
        let tag = if s <= SUBCASE_TOL { CaseTag::Thm23Zero } else { CaseTag::Thm23Pos };
        Ok(Self { family: Family::Cartesian { s }, tag, c })
    }

    /// Construct with an explicit tag, validating tag/parameter consistency.
    pub fn with_tag(tag: CaseTag, param: f64, c: f64) -> Result<Self> {
        let auto = match tag {
            CaseTag::Thm1iiPos | CaseTag::Thm1iiZero | CaseTag::Thm1iiOne | CaseTag::Thm1iiNeg => {
                Self::angular(param, c)?
            }
            CaseTag::Thm1iiiPos | CaseTag::Thm1iiiZero | CaseTag::Thm1iiiNeg => {
                Self::radial(param, c)?
            }
            CaseTag::Thm23Zero | CaseTag::Thm23Pos => Self::cartesian(param, c)?,
        };
        if auto.tag != tag {
            return Err(Error::Spec(format!(
                "case tag {tag:?} inconsistent with parameter {param} (expected {:?})",
                auto.tag
            )));
        }
        Ok(auto)
    }

    /// Relation matching a profile ODE, if the family has one.
    pub fn for_spec(spec: &OdeSpec, c: f64) -> Result<Self> {
        match *spec {
            OdeSpec::PolarAngularG { a } => Self::angular(a, c),
            OdeSpec::PolarRadialPhi { b } => Self::radial(b, c),
            OdeSpec::CartesianF { s } => Self::cartesian(s, c),
            OdeSpec::SphericalPolarH { .. } => Err(Error::Spec(
                "the spherical polar family has a first integral, not an antiderivative".into(),
            )),
        }
    }

    pub fn tag(&self) -> CaseTag {
        self.tag
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Psi(y) of the branch formula for this relation.
    pub fn psi(&self, y: f64) -> Result<f64> {
        if !y.is_finite() {
            return Err(Error::Domain("non-finite profile ratio".into()));
        }
        match self.family {
            Family::Angular { a } => match self.tag {
                CaseTag::Thm1iiZero => {
                    guard_nonzero(y, "1/G pole at G = 0")?;
                    Ok(1.0 / y)
                }
                CaseTag::Thm1iiOne => Ok(-y.atan()),
                CaseTag::Thm1iiPos => {
                    let d = (a * a - a).sqrt();
                    Ok(-(y / a).atan() + (a - 1.0) / d * (y / d).atan())
                }
                CaseTag::Thm1iiNeg => {
                    let q = (a - a * a).sqrt();
                    let num = y - q;
                    let den = y + q;
                    guard_log_arg(num, den)?;
                    Ok(-(y / a).atan() + (a - 1.0) / (2.0 * q) * (num / den).abs().ln())
                }
                _ => unreachable!(),
            },
            Family::Radial { b } => {
                let q1 = y * y + b * b;
                // (y - 1/2)^2 + (b^2 - 1/4) avoids cancellation near the roots
                let q2 = (y - 0.5) * (y - 0.5) + (b * b - 0.25);
                if q1 == 0.0 || q2 == 0.0 {
                    return Err(Error::Domain("log argument vanishes".into()));
                }
                let common = 0.5 * (q1 / q2).abs().ln();
                match self.tag {
                    CaseTag::Thm1iiiPos => {
                        let p = (b * b - 0.25).sqrt();
                        Ok(common - ((y - 0.5) / p).atan() / (2.0 * p))
                    }
                    CaseTag::Thm1iiiZero => {
                        guard_nonzero(y - 0.5, "pole at Phi = 1/2")?;
                        Ok(common + 0.5 / (y - 0.5))
                    }
                    CaseTag::Thm1iiiNeg => {
                        let p = (0.25 - b * b).sqrt();
                        let num = y - 0.5 - p;
                        let den = y - 0.5 + p;
                        guard_log_arg(num, den)?;
                        Ok(common - (num / den).abs().ln() / (4.0 * p))
                    }
                    _ => unreachable!(),
                }
            }
            Family::Cartesian { s } => match self.tag {
                CaseTag::Thm23Zero => {
                    guard_nonzero(y, "1/F pole at F = 0")?;
                    Ok(1.0 / y)
                }
                CaseTag::Thm23Pos => {
                    let r = s.sqrt();
                    Ok(-(y / r).atan() / (2.0 * r) + y / (2.0 * (s + y * y)))
                }
                _ => unreachable!(),
            },
        }
    }

    /// Psi(0), finite for every branch formula (the zero-crossing location
    /// satisfies t = Psi(0) - c).
    pub fn psi_at_zero(&self) -> Result<f64> {
        match self.tag {
            CaseTag::Thm1iiZero | CaseTag::Thm23Zero => {
                Err(Error::Domain("reciprocal relation has a pole at y = 0".into()))
            }
            _ => self.psi(0.0),
        }
    }

    /// Interior y-breakpoints (poles of Psi or singular zero crossings).
    fn breakpoints(&self) -> Vec<f64> {
        match self.family {
            Family::Angular { a } => match self.tag {
                CaseTag::Thm1iiZero => vec![0.0],
                CaseTag::Thm1iiOne => vec![],
                CaseTag::Thm1iiPos => vec![0.0],
                CaseTag::Thm1iiNeg => {
                    let q = (a - a * a).sqrt();
                    vec![-q, 0.0, q]
                }
                _ => unreachable!(),
            },
            Family::Radial { b } => {
                let d = b * b - 0.25;
                if b == 0.0 {
                    // equilibria at 0 and 1; zero crossing is benign
                    vec![0.0, 1.0]
                } else if d.abs() <= SUBCASE_TOL {
                    vec![0.0, 0.5]
                } else if d > 0.0 {
                    vec![0.0]
                } else {
                    let p = (0.25 - b * b).sqrt();
                    vec![0.0, 0.5 - p, 0.5 + p]
                }
            }
            Family::Cartesian { .. } => vec![0.0],
        }
    }

    /// Monotone branches with clamped representative Psi values at the ends.
    pub fn branches(&self) -> Vec<Branch> {
        let mut pts = self.breakpoints();
        pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let mut edges = vec![-Y_CLAMP];
        edges.extend(pts.iter().copied());
        edges.push(Y_CLAMP);
        let mut out = Vec::new();
        for w in edges.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi - lo <= 4.0 * POLE_OFFSET {
                continue;
            }
            let off = |edge: f64, inward: f64| -> f64 {
                if edge.abs() >= Y_CLAMP {
                    edge
                } else {
                    edge + inward * POLE_OFFSET.max(1e-9 * edge.abs())
                }
            };

            let rl = off(lo, 1.0);
            let rh = off(hi, -1.0);
            let (pl, ph) = match (self.psi(rl), self.psi(rh)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => continue,
            };
            out.push(Branch { y_lo: lo, y_hi: hi, psi_lo: pl, psi_hi: ph });
        }
        out
    }
}

fn check_finite(vals: &[f64]) -> Result<()> {
    if vals.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Domain("non-finite parameter".into()))
    }
}

fn guard_nonzero(v: f64, msg: &str) -> Result<()> {
    if v.abs() < 1e-300 {
        Err(Error::Domain(msg.into()))
    } else {
        Ok(())
    }
}

fn guard_log_arg(num: f64, den: f64) -> Result<()> {
    if num == 0.0 || den == 0.0 {
        Err(Error::Domain("log argument vanishes at a branch pole".into()))
    } else {
        Ok(())
    }
}

/// Signed distance of (t, y) from the relation: t + c - Psi(y). Exact
/// trajectories yield zero.
pub fn implicit_residual(rel: &ImplicitRelation, t: f64, y: f64) -> Result<f64> {
    Ok(t + rel.c() - rel.psi(y)?)
}

/// Invert t + c = Psi(y) for y on a monotone bracket.
///
/// Psi is probed at 16 points for strict monotonicity, then the root of
/// Psi(y) - (t + c) is found by a bisection/secant hybrid to |t+c-Psi(y)|
/// below `INVERT_TOL`.
pub fn invert_implicit(rel: &ImplicitRelation, t: f64, bracket: (f64, f64)) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(Error::Bracket(format!("bad bracket ({lo}, {hi})")));
    }
    let target = t + rel.c();

    // monotonicity probe
    let mut prev: Option<f64> = None;
    let mut dir = 0i8;
    for i in 0..16 {
        let y = lo + (hi - lo) * (i as f64) / 15.0;
        let v = rel
            .psi(y)
            .map_err(|e| Error::NonMonotone(format!("probe failed at y={y}: {e}")))?;
        if let Some(p) = prev {
            let step = if v > p {
                1
            } else if v < p {
                -1
            } else {
                0
            };
            if step == 0 || (dir != 0 && step != dir) {
                return Err(Error::NonMonotone(format!(
                    "Psi is not strictly monotone near y={y}"
                )));
            }
            dir = step;
        }
        prev = Some(v);
    }

    let mut f_lo = rel.psi(lo)? - target;
    let mut f_hi = rel.psi(hi)? - target;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket(format!(
            "Psi({lo})={:.6e}, Psi({hi})={:.6e} do not straddle t+c={target:.6e}",
            f_lo + target,
            f_hi + target
        )));
    }

    let mut y = 0.5 * (lo + hi);
    for _ in 0..200 {
        // secant through (lo, f_lo), (hi, f_hi); fall back to midpoint
        let sec = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        y = if sec.is_finite() && sec > lo && sec < hi {
            sec
        } else {
            0.5 * (lo + hi)
        };
        let f = rel.psi(y)? - target;
        if f.abs() <= INVERT_TOL {
            return Ok(y);
        }
        if f.signum() == f_lo.signum() {
            lo = y;
            f_lo = f;
        } else {
            hi = y;
            f_hi = f;
        }
        if hi - lo <= f64::EPSILON * (1.0 + y.abs()) {
            break;
        }
        // keep bisection progress when the secant stalls on one side
        let mid = 0.5 * (lo + hi);
        let fm = rel.psi(mid)? - target;
        if fm.abs() <= INVERT_TOL {
            return Ok(mid);
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
    }
    let f = rel.psi(y)? - target;
    if f.abs() <= 1e-9 {
        Ok(y)
    } else {
        Err(Error::Bracket(format!(
            "inversion stalled at y={y}, residual {f:.3e}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::aronsson::aronsson_g;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

    #[test]
    fn invert_single_arctan_case() {
        let rel = ImplicitRelation::angular(1.0, 0.0).unwrap();
        let y = invert_implicit(&rel, FRAC_PI_4, (-10.0, 0.0)).unwrap();
        assert!((y + 1.0).abs() <= 1e-10, "got {y}");
    }

    #[test]
    fn invert_reciprocal_case() {
        let rel = ImplicitRelation::angular(0.0, 0.0).unwrap();
        let y = invert_implicit(&rel, 2.0, (0.1, 10.0)).unwrap();
        assert!((y - 0.5).abs() <= 1e-10, "got {y}");
    }

    #[test]
    fn invert_matches_closed_form() {
        let rel = ImplicitRelation::angular(4.0 / 3.0, 0.0).unwrap();
        let want = aronsson_g(FRAC_PI_8, 0.0).unwrap();
        let y = invert_implicit(&rel, FRAC_PI_8, (-30.0, -1e-6)).unwrap();
        assert!((y - want).abs() <= 1e-10, "got {y}, want {want}");
    }

    #[test]
    fn residual_examples() {
        let rel = ImplicitRelation::angular(1.0, 0.0).unwrap();
        assert!(implicit_residual(&rel, FRAC_PI_4, -1.0).unwrap().abs() <= 1e-15);

        let rel = ImplicitRelation::angular(0.0, 0.0).unwrap();
        assert!(implicit_residual(&rel, 2.0, 0.5).unwrap().abs() <= 1e-15);

        let rel = ImplicitRelation::angular(4.0 / 3.0, 0.0).unwrap();
        let g = aronsson_g(FRAC_PI_8, 0.0).unwrap();
        assert!(implicit_residual(&rel, FRAC_PI_8, g).unwrap().abs() <= 1e-10);
    }

    #[test]
    fn residual_rejects_log_pole() {
        // a²-a < 0 with |y| = sqrt(a-a²) makes the log argument vanish
        let a = 0.5;
        let rel = ImplicitRelation::angular(a, 0.0).unwrap();
        let q = (a - a * a).sqrt();
        assert!(matches!(rel.psi(q), Err(Error::Domain(_))));
    }

    #[test]
    fn tag_consistency_enforced() {
        assert!(ImplicitRelation::with_tag(CaseTag::Thm1iiPos, 0.5, 0.0).is_err());
        assert!(ImplicitRelation::with_tag(CaseTag::Thm1iiNeg, 0.5, 0.0).is_ok());
        assert!(ImplicitRelation::with_tag(CaseTag::Thm1iiiZero, 0.5, 0.0).is_ok());
        assert!(ImplicitRelation::with_tag(CaseTag::Thm23Pos, 0.0, 0.0).is_err());
    }

    #[test]
    fn bracket_error_when_target_outside() {
        let rel = ImplicitRelation::angular(1.0, 0.0).unwrap();
        // Psi = -atan(y) on (0.1, 0.2) cannot reach 1.0
        assert!(matches!(
            invert_implicit(&rel, 1.0, (0.1, 0.2)),
            Err(Error::Bracket(_))
        ));
    }

    #[test]
    fn non_monotone_detected_across_pole() {
        // bracket straddling the log pole of the a²-a<0 case
        let rel = ImplicitRelation::angular(0.5, 0.0).unwrap();
        assert!(matches!(
            invert_implicit(&rel, 0.1, (0.3, 0.7)),
            Err(Error::NonMonotone(_)) | Err(Error::Domain(_))
        ));
    }

    #[test]
    fn branch_enumeration_covers_target() {
        // for 0<a<1 the sub-branch (0, q) alone reaches every positive t
        let rel = ImplicitRelation::angular(1.0 / 3.0, 0.0).unwrap();
        let hit = rel
            .branches()
            .iter()
            .any(|b| b.y_lo == 0.0 && b.contains_target(1.7, 1e-9));
        assert!(hit, "no branch covers t=1.7: {:?}", rel.branches());
        // and inversion on that sub-branch is the inverse of Psi
        let q = (1.0f64 / 3.0 - 1.0 / 9.0).sqrt();
        let y0 = 0.3 * q;
        let t = rel.psi(y0).unwrap();
        let y = invert_implicit(&rel, t, (1e-9, q - 1e-9)).unwrap();
        assert!((y - y0).abs() <= 1e-9);
    }
}
