//! Catalogue of buildable cases: identifiers, constraints, defaults, and a
//! single dispatch point used by the command-line tool and the test suites.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::solutions::builders::{
    build_thm1_i, build_thm1_ii, build_thm1_iii, build_thm2, build_thm3, build_thm4_i,
    build_thm4_ii, build_thm4_iii, BuildOptions, Thm2Which,
};
use crate::solutions::closed::{closed_aronsson, closed_aronsson_negexp};
use crate::solutions::solution::{CaseMeta, CoordSystem, SeparatedSolution};

pub const SQRT3_OVER_4: f64 = 0.43301270189221932;

/// One row of the catalogue listing.
#[derive(Debug, Clone, Serialize)]
pub struct CaseInfo {
    pub id: &'static str,
    pub description: &'static str,
    pub constraint: &'static str,
    pub defaults: &'static str,
}

pub fn catalogue() -> Vec<CaseInfo> {
    vec![
        CaseInfo {
            id: "thm1.i",
            description: "polar: r^A times e^{B theta}",
            constraint: "requires A^2 - A + B^2 = 0 (within 1e-9)",
            defaults: "A=0.5 B=0.5",
        },
        CaseInfo {
            id: "thm1.ii",
            description: "polar: r^A times integrated angular profile",
            constraint: "A finite; sub-case by sign of A^2 - A",
            defaults: "A=4/3 c=0",
        },
        CaseInfo {
            id: "thm1.iii",
            description: "polar: integrated radial profile times e^{B theta}",
            constraint: "B finite; sub-case by sign of B^2 - 1/4",
            defaults: "B=1/3 c=0",
        },
        CaseInfo {
            id: "thm2.i",
            description: "cartesian 2d: e^{A x} times integrated profile in y",
            constraint: "A finite",
            defaults: "A=0.25 c=0",
        },
        CaseInfo {
            id: "thm2.ii",
            description: "cartesian 2d: integrated profile in x times e^{B y}",
            constraint: "B finite",
            defaults: "B=0.25 c=0",
        },
        CaseInfo {
            id: "thm3",
            description: "cartesian nd: exponentials except one integrated profile",
            constraint: "n >= 2, j in 1..=n; S = sum A_i^2; S = 0 is the degenerate branch",
            defaults: "n=3 A=0.3,0.2 j=3 c=0",
        },
        CaseInfo {
            id: "thm4.i",
            description: "spherical: r^A e^{B theta} times integrated polar profile",
            constraint: "A, B finite; polar profile anchored at (pi/2, 1)",
            defaults: "A=0.5 B=0.2",
        },
        CaseInfo {
            id: "thm4.ii",
            description: "spherical: (r sin alpha)^A times angular profile",
            constraint: "A finite; sub-case by sign of A^2 - A",
            defaults: "A=4/3 c=0",
        },
        CaseInfo {
            id: "thm4.iii",
            description: "spherical: radial profile, e^{B theta}, closed-form polar factor",
            constraint: "requires C^2 > B^2; sign in {+1,-1}",
            defaults: "B=0.2 C=0.5 sign=+1 c=0",
        },
        CaseInfo {
            id: "aronsson",
            description: "closed form |x|^{4/3} - |y|^{4/3}",
            constraint: "none",
            defaults: "",
        },
        CaseInfo {
            id: "aronsson-neg",
            description: "closed form r^{-1/3}(cos^{4/3}((theta+c)/2) - sin^{4/3}((theta+c)/2))",
            constraint: "r > 0",
            defaults: "c=0",
        },
    ]
}

/// Parameters accepted by `build_case`; unset fields fall back to the
/// documented defaults of the case.
#[derive(Debug, Clone, Default)]
pub struct BuildParams {
    /// Values passed as A (repeatable; the vector form feeds thm3).
    pub a: Vec<f64>,
    pub b: Option<f64>,
    pub c_big: Option<f64>,
    pub c: Option<f64>,
    pub n: Option<usize>,
    pub j: Option<usize>,
    pub sign: Option<i8>,
}

impl BuildParams {
    fn a_scalar(&self, default: f64) -> f64 {
        self.a.first().copied().unwrap_or(default)
    }
    fn c_or0(&self) -> f64 {
        self.c.unwrap_or(0.0)
    }
}

/// A built catalogue entry: either an assembled separated solution or one of
/// the closed forms.
#[derive(Debug, Clone)]
pub enum Built {
    Separated(SeparatedSolution),
    /// |x|^{4/3} - |y|^{4/3} on the plane.
    Aronsson,
    /// r^{-1/3} profile with integration constant c.
    AronssonNeg { c: f64 },
}

impl Built {
    pub fn system(&self) -> CoordSystem {
        match self {
            Built::Separated(s) => s.system,
            Built::Aronsson => CoordSystem::CartesianNd(2),
            Built::AronssonNeg { .. } => CoordSystem::Polar2D,
        }
    }

    pub fn evaluate(&self, point: &[f64]) -> Result<f64> {
        match self {
            Built::Separated(s) => s.evaluate(point),
            Built::Aronsson => {
                if point.len() != 2 {
                    return Err(Error::Spec("need (x, y)".into()));
                }
                Ok(closed_aronsson(point[0], point[1]))
            }
            Built::AronssonNeg { c } => {
                if point.len() != 2 {
                    return Err(Error::Spec("need (r, theta)".into()));
                }
                closed_aronsson_negexp(point[0], point[1], *c)
            }
        }
    }

    pub fn domain(&self) -> Vec<(f64, f64)> {
        match self {
            Built::Separated(s) => s.domain(),
            Built::Aronsson => vec![
                (f64::NEG_INFINITY, f64::INFINITY),
                (f64::NEG_INFINITY, f64::INFINITY),
            ],
            Built::AronssonNeg { .. } => {
                vec![(0.0, f64::INFINITY), (f64::NEG_INFINITY, f64::INFINITY)]
            }
        }
    }

    /// Pole-avoiding sampling box for residual verification.
    pub fn sample_box(&self) -> Vec<(f64, f64)> {
        match self {
            Built::Separated(s) => s.sample_box(),
            // keep 0.05-plus margins from the axes where u is only C^{1,1/3}
            Built::Aronsson => vec![(0.3, 1.3), (0.3, 1.3)],
            Built::AronssonNeg { c } => vec![(1.0, 2.0), (0.3 - c, 1.3 - c)],
        }
    }

    pub fn meta(&self) -> CaseMeta {
        match self {
            Built::Separated(s) => s.meta.clone(),
            Built::Aronsson => CaseMeta {
                case: "aronsson".into(),
                ..Default::default()
            },
            Built::AronssonNeg { c } => CaseMeta {
                case: "aronsson-neg".into(),
                c: *c,
                ..Default::default()
            },
        }
    }
}

/// Build a catalogue case from parameters (falling back to its defaults).
pub fn build_case(id: &str, p: &BuildParams, opts: &BuildOptions) -> Result<Built> {
    match id {
        "thm1.i" => {
            let a = p.a_scalar(0.5);
            let b = p.b.unwrap_or(0.5);
            Ok(Built::Separated(build_thm1_i(a, b, opts)?))
        }
        "thm1.ii" => {
            let a = p.a_scalar(4.0 / 3.0);
            Ok(Built::Separated(build_thm1_ii(a, p.c_or0(), opts)?))
        }
        "thm1.iii" => {
            let b = p.b.unwrap_or(1.0 / 3.0);
            Ok(Built::Separated(build_thm1_iii(b, p.c_or0(), opts)?))
        }
        "thm2.i" => {
            let a = p.a_scalar(0.25);
            Ok(Built::Separated(build_thm2(Thm2Which::I, a, p.c_or0(), opts)?))
        }
        "thm2.ii" => {
            let b = p.b.unwrap_or(0.25);
            Ok(Built::Separated(build_thm2(Thm2Which::Ii, b, p.c_or0(), opts)?))
        }
        "thm3" => {
            let rates: Vec<f64> = if p.a.is_empty() { vec![0.3, 0.2] } else { p.a.clone() };
            let n = p.n.unwrap_or(rates.len() + 1);
            if n != rates.len() + 1 {
                return Err(Error::Spec(format!(
                    "n = {n} but {} rates were given (need n-1)",
                    rates.len()
                )));
            }
            let j = p.j.unwrap_or(n);
            Ok(Built::Separated(build_thm3(&rates, j, p.c_or0(), opts)?))
        }
        "thm4.i" => {
            let a = p.a_scalar(0.5);
            let b = p.b.unwrap_or(0.2);
            Ok(Built::Separated(build_thm4_i(a, b, opts)?))
        }
        "thm4.ii" => {
            let a = p.a_scalar(4.0 / 3.0);
            Ok(Built::Separated(build_thm4_ii(a, p.c_or0(), opts)?))
        }
        "thm4.iii" => {
            let b = p.b.unwrap_or(0.2);
            let cc = p.c_big.unwrap_or(0.5);
            let sign = p.sign.unwrap_or(1);
            Ok(Built::Separated(build_thm4_iii(b, cc, sign, p.c_or0(), opts)?))
        }
        "aronsson" => Ok(Built::Aronsson),
        "aronsson-neg" => Ok(Built::AronssonNeg { c: p.c_or0() }),
        other => Err(Error::Spec(format!("unknown case id '{other}'"))),
    }
}
