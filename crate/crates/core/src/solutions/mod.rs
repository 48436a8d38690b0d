//! Assembled separated solutions and the closed-form catalogue.

mod builders;
mod catalogue;
mod closed;
mod factor;
mod solution;

pub use builders::{
    build_thm1_i, build_thm1_ii, build_thm1_iii, build_thm2, build_thm3, build_thm4_i,
    build_thm4_ii, build_thm4_iii, thm3_degenerate_candidates, validate_case_i, BuildOptions,
    Thm2Which, CASE_I_TOL,
};
pub use catalogue::{build_case, catalogue, BuildParams, Built, CaseInfo, SQRT3_OVER_4};
pub use closed::{closed_aronsson, closed_aronsson_negexp, thm4_case3_h};
pub use factor::{Factor, Segment, DOMAIN_PAD};
pub use solution::{CaseMeta, CoordSystem, SeparatedSolution};
