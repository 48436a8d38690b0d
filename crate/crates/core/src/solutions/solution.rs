//! Assembled separated solutions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::solutions::factor::Factor;

/// Coordinate system a solution lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CoordSystem {
    Polar2D,
    Spherical3D,
    CartesianNd(usize),
}

impl CoordSystem {
    pub fn dim(&self) -> usize {
        match self {
            CoordSystem::Polar2D => 2,
            CoordSystem::Spherical3D => 3,
            CoordSystem::CartesianNd(n) => *n,
        }
    }

    /// Column names used in exports, matching the factor order.
    pub fn coord_names(&self) -> Vec<String> {
        match self {
            CoordSystem::Polar2D => vec!["r".into(), "theta".into()],
            CoordSystem::Spherical3D => vec!["r".into(), "theta".into(), "alpha".into()],
            CoordSystem::CartesianNd(2) => vec!["x".into(), "y".into()],
            CoordSystem::CartesianNd(3) => vec!["x".into(), "y".into(), "z".into()],
            CoordSystem::CartesianNd(n) => (1..=*n).map(|i| format!("x{i}")).collect(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            CoordSystem::Polar2D => "polar2d".into(),
            CoordSystem::Spherical3D => "spherical3d".into(),
            CoordSystem::CartesianNd(n) => format!("cartesian{n}d"),
        }
    }
}

/// Identification and provenance of a built solution.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CaseMeta {
    pub case: String,
    pub params: Vec<(String, f64)>,
    pub c: f64,
    /// Effective normalization anchors per coordinate (after any shifts).
    pub anchors: Vec<(String, f64)>,
    pub notes: Vec<String>,
}

/// A product-form solution: one factor per coordinate.
#[derive(Debug, Clone)]
pub struct SeparatedSolution {
    pub system: CoordSystem,
    pub factors: Vec<Factor>,
    pub meta: CaseMeta,
}

impl SeparatedSolution {
    pub fn new(system: CoordSystem, factors: Vec<Factor>, meta: CaseMeta) -> Result<Self> {
        if factors.len() != system.dim() {
            return Err(Error::Spec(format!(
                "{} factors for a {}-coordinate system",
                factors.len(),
                system.dim()
            )));
        }
        for f in &factors {
            let (lo, hi) = f.interval();
            if !(lo < hi) {
                return Err(Error::Spec("factor has an empty validity interval".into()));
            }
        }
        Ok(Self { system, factors, meta })
    }

    /// Per-coordinate open validity intervals.
    pub fn domain(&self) -> Vec<(f64, f64)> {
        self.factors.iter().map(|f| f.interval()).collect()
    }

    /// Value at a point, as the product of factor values. If the direct
    /// product over- or underflows while every factor is finite and nonzero,
    /// the sign · e^{Σ log|f|} route is used instead.
    pub fn evaluate(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.system.dim() {
            return Err(Error::Spec(format!(
                "point has {} coordinates, solution needs {}",
                point.len(),
                self.system.dim()
            )));
        }
        let mut product = 1.0f64;
        let mut any_zero = false;
        for (f, &x) in self.factors.iter().zip(point) {
            let v = f.value(x)?;
            if v == 0.0 {
                any_zero = true;
            }
            product *= v;
        }
        if product.is_finite() && (product != 0.0 || any_zero) {
            return Ok(product);
        }
        // overflow-safe fallback
        let mut sign = 1.0f64;
        let mut log_sum = 0.0f64;
        for (f, &x) in self.factors.iter().zip(point) {
            sign *= f.sign();
            log_sum += f.log_abs(x)?;
        }
        Ok(sign * log_sum.exp())
    }

    /// Recommended per-coordinate sampling box for residual verification,
    /// away from blow-ups, factor extrema and coordinate singularities.
    ///
    /// Factors backed by tables can offer several candidate windows; the
    /// candidates are scored by probing the native stencil residual and the
    /// best window wins, coordinate by coordinate.
    pub fn sample_box(&self) -> Vec<(f64, f64)> {
        let defaults: Vec<(f64, f64)> = match self.system {
            CoordSystem::Polar2D => vec![(1.0, 2.0), (0.1, 1.1)],
            CoordSystem::Spherical3D => {
                vec![(1.0, 2.0), (0.1, 1.1), (0.4, std::f64::consts::PI - 0.4)]
            }
            CoordSystem::CartesianNd(n) => vec![(0.3, 1.3); n],
        };
        let cands: Vec<Vec<(f64, f64)>> = self
            .factors
            .iter()
            .zip(&defaults)
            .map(|(f, d)| f.sample_window_candidates(*d))
            .collect();
        let mut chosen: Vec<(f64, f64)> = cands.iter().map(|c| c[0]).collect();
        for i in 0..chosen.len() {
            if cands[i].len() < 2 {
                continue;
            }
            let mut best = (f64::INFINITY, cands[i][0]);
            for &c in &cands[i] {
                let mut trial = chosen.clone();
                trial[i] = c;
                let score = self.probe_box(&trial, i);
                if score < best.0 {
                    best = (score, c);
                }
            }
            chosen[i] = best.1;
        }
        chosen
    }

    /// Worst normalized stencil residual over a few deterministic probe
    /// points spread along coordinate `vary` of `bounds`.
    fn probe_box(&self, bounds: &[(f64, f64)], vary: usize) -> f64 {
        use crate::verify::{
            fd_infty_cartesian_full, fd_infty_polar_full, fd_infty_spherical_full,
        };
        let field = |p: &[f64]| self.evaluate(p);
        let mut worst = 0.0f64;
        for frac in [0.02, 0.5, 0.98] {
            let point: Vec<f64> = bounds
                .iter()
                .enumerate()
                .map(|(d, &(lo, hi))| {
                    let f = if d == vary { frac } else { 0.5 };
                    lo + (hi - lo) * f
                })
                .collect();
            // feasibility at the widest ladder step, score at the narrowest
            for h in [1e-2, 1.25e-3] {
                let full = match self.system {
                    CoordSystem::Polar2D => fd_infty_polar_full(&field, (point[0], point[1]), h),
                    CoordSystem::Spherical3D => {
                        fd_infty_spherical_full(&field, (point[0], point[1], point[2]), h)
                    }
                    CoordSystem::CartesianNd(_) => fd_infty_cartesian_full(&field, &point, h),
                };
                match full {
                    Ok(v) if h < 1e-2 => worst = worst.max(v.normalized()),
                    Ok(_) => {}
                    Err(_) => return f64::INFINITY,
                }
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_count_enforced() {
        let meta = CaseMeta::default();
        assert!(SeparatedSolution::new(
            CoordSystem::Polar2D,
            vec![Factor::Constant],
            meta
        )
        .is_err());
    }

    #[test]
    fn power_exponential_product() {
        let sol = SeparatedSolution::new(
            CoordSystem::Polar2D,
            vec![
                Factor::Power { exponent: 0.5 },
                Factor::Exponential { rate: 0.5, center: 0.0 },
            ],
            CaseMeta::default(),
        )
        .unwrap();
        assert!((sol.evaluate(&[4.0, 0.0]).unwrap() - 2.0).abs() <= 1e-12);
        let e = std::f64::consts::E;
        assert!((sol.evaluate(&[1.0, 2.0]).unwrap() - e).abs() <= 1e-12 * e);
        assert_eq!(sol.evaluate(&[1.0, 0.0]).unwrap(), 1.0);
    }

    #[test]
    fn out_of_domain_point_rejected() {
        let sol = SeparatedSolution::new(
            CoordSystem::Polar2D,
            vec![
                Factor::Power { exponent: 0.5 },
                Factor::Exponential { rate: 0.5, center: 0.0 },
            ],
            CaseMeta::default(),
        )
        .unwrap();
        assert!(sol.evaluate(&[-1.0, 0.0]).is_err());
        assert!(sol.evaluate(&[1.0]).is_err());
    }
}
