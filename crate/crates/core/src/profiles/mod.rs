//! Profile ODEs, implicit relations, trajectory tables and closed forms.

mod aronsson;
mod first_integral;
mod implicit;
mod integrate;
mod ode;
mod table;

pub use aronsson::{aronsson_g, odd_cbrt, pow43};
pub use first_integral::first_integral_thm4i;
pub use implicit::{
    implicit_residual, invert_implicit, Branch, CaseTag, ImplicitRelation, INVERT_TOL,
    SUBCASE_TOL,
};
pub use integrate::{
    integrate_bidirectional, integrate_profile, integrate_profile_with, IntegrateOptions,
    DEFAULT_SPAN, DEFAULT_TOL, H_MIN, MAX_DT, Y_MAX,
};
pub use ode::{ode_rhs, OdeSpec};
pub use table::{ProfileTable, StopReason};
