//! Builders for every solution family in the catalogue.
//!
//! Tabulated factors are seeded from the implicit relation: the anchor's
//! t + c is located inside a monotone branch (shifting deterministically to
//! the nearest branch interior when it sits on a boundary), inverted for the
//! starting ratio, and integrated both ways. A trajectory that stops at a
//! singular zero crossing is extended by a partner trajectory on the other
//! side of the crossing, seeded from the same relation; the two segments
//! meet at an interior extremum of the factor.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::profiles::{
    integrate_bidirectional, invert_implicit, Branch, ImplicitRelation, IntegrateOptions,
    OdeSpec, StopReason, DEFAULT_SPAN, DEFAULT_TOL, MAX_DT, SUBCASE_TOL,
};
use crate::solutions::factor::{Factor, Segment};
use crate::solutions::solution::{CaseMeta, CoordSystem, SeparatedSolution};

/// Tolerance on the case-i circle constraint A² - A + B² = 0.
pub const CASE_I_TOL: f64 = 1e-9;

/// Smallest usable seed ratio: keeps the 1/y² part of the slope below ~50x
/// the regular part, i.e. outside the cube-root throat of a singular zero.
fn seed_floor(spec: &OdeSpec, t: f64) -> f64 {
    let k = spec.singular_zero_coefficient(t).abs();
    (k.sqrt() / 7.0).clamp(1e-4, 0.3)
}

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    pub tol: (f64, f64),
    pub max_dt: f64,
    /// One-sided trajectory span from the seed.
    pub span: f64,
    /// Explicit (t0, y0) seed for the tabulated factor, overriding
    /// relation-based resolution.
    pub profile_anchor: Option<(f64, f64)>,
    /// Anchor of the spherical polar trajectory for the (A, B) family.
    pub h_anchor: (f64, f64),
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_dt: MAX_DT,
            span: DEFAULT_SPAN,
            profile_anchor: None,
            h_anchor: (std::f64::consts::FRAC_PI_2, 1.0),
        }
    }
}

fn iopts(opts: &BuildOptions, span: f64) -> IntegrateOptions {
    IntegrateOptions { tol: opts.tol, max_dt: opts.max_dt, span }
}

#[derive(Debug, Clone, Copy)]
struct Seed {
    t: f64,
    y: f64,
}

fn branch_bracket(br: &Branch) -> (f64, f64) {
    let off = |e: f64, inward: f64| {
        if e.abs() >= 1e8 {
            e
        } else {
            e + inward * (1e-6f64).max(1e-9 * e.abs())
        }
    };
    (off(br.y_lo, 1.0), off(br.y_hi, -1.0))
}

fn resolve_seed(rel: &ImplicitRelation, anchor_t: f64) -> Result<Seed> {
    let target = anchor_t + rel.c();
    let margin = 1e-9 * (1.0 + target.abs());
    let mut best: Option<Seed> = None;
    for br in rel.branches() {
        if br.contains_target(target, margin) {
            if let Ok(y) = invert_implicit(rel, anchor_t, branch_bracket(&br)) {
                if best.as_ref().map_or(true, |s| y.abs() < s.y.abs()) {
                    best = Some(Seed { t: anchor_t, y });
                }
            }
        }
    }
    if let Some(s) = best {
        return Ok(s);
    }
    // anchor sits outside (or on the boundary of) every branch range: shift
    // to the nearest branch interior, preferring the smallest shift and then
    // the tamest ratio
    let mut shifted: Option<(f64, Seed)> = None;
    for br in rel.branches() {
        let (lo, hi) = br.psi_range();
        let width = (hi - lo).min(1e9);
        let inset = (width * 0.25).clamp(1e-3, 1.0);
        let t_target = target.clamp(lo + inset, hi - inset);
        if !(t_target > lo && t_target < hi) {
            continue;
        }
        if let Ok(y) = invert_implicit(rel, t_target - rel.c(), branch_bracket(&br)) {
            let shift = (t_target - target).abs();
            let cand = (shift, Seed { t: t_target - rel.c(), y });
            let better = match &shifted {
                None => true,
                Some((s0, seed0)) => {
                    shift < s0 - 1e-12 || (shift <= s0 + 1e-12 && y.abs() < seed0.y.abs())
                }
            };
            if better {
                shifted = Some(cand);
            }
        }
    }
    shifted.map(|(_, s)| s).ok_or_else(|| {
        Error::Constraint(format!(
            "no branch of the implicit relation admits a seed near t = {anchor_t}"
        ))
    })
}

/// Partner seed on the far side of a singular zero crossing at t_z.
///
/// Offsets are tried both as absolute distances and as fractions of the
/// candidate branch's own range width, so relations whose natural t-scale
/// is large (small S) still seed outside the cube-root throat.
fn partner_seed(
    spec: &OdeSpec,
    rel: &ImplicitRelation,
    t_z: f64,
    side: f64,
    edge_sign: f64,
) -> Option<Seed> {
    let psi0 = rel.psi_at_zero().ok()?;
    for br in rel.branches() {
        // the partner ratio has the opposite sign of the approaching edge
        let br_sign = 0.5 * (br.y_lo + br.y_hi);
        if br_sign.signum() == edge_sign.signum() {
            continue;
        }
        let (lo, hi) = br.psi_range();
        let room = if side > 0.0 { hi - psi0 } else { psi0 - lo };
        if room <= 1e-6 {
            continue;
        }
        let w = room.min(40.0);
        let mut offsets = vec![0.02, 0.05, 0.1, 0.2, 0.4];
        offsets.extend([0.1 * w, 0.25 * w, 0.5 * w]);
        offsets.retain(|d| *d < room);
        // smallest viable offset first: it must only clear the seed floor
        offsets.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for d in offsets {
            let target = psi0 + side * d;
            if !br.contains_target(target, 1e-9) {
                continue;
            }
            if let Ok(y) = invert_implicit(rel, target - rel.c(), branch_bracket(&br)) {
                let t = t_z + side * d;
                if y.abs() >= seed_floor(spec, t) {
                    return Some(Seed { t, y });
                }
            }
        }
    }
    None
}

struct TabulatedParts {
    segments: Vec<Segment>,
    notes: Vec<String>,
}

/// Build the table segments of one relation-backed factor, anchored (for
/// normalization) at `anchor_t`.
fn build_tabulated(
    spec: &OdeSpec,
    rel: &ImplicitRelation,
    anchor_t: f64,
    opts: &BuildOptions,
) -> Result<TabulatedParts> {
    let mut notes = Vec::new();
    let mut seed = match opts.profile_anchor {
        Some((t, y)) => Seed { t, y },
        None => resolve_seed(rel, anchor_t)?,
    };

    let singular = |t: f64| spec.singular_zero_coefficient(t) != 0.0;
    let mut tables: Vec<Arc<crate::profiles::ProfileTable>> = Vec::new();
    notes.push(format!("profile seeded at (t, y) = ({:.6}, {:.6})", seed.t, seed.y));

    if seed.y.abs() < seed_floor(spec, seed.t) && opts.profile_anchor.is_none() {
        if singular(seed.t) {
            // seed sits at the singular crossing: build the two sides directly
            let t_z = rel.psi_at_zero()? - rel.c();
            let right = partner_seed(spec, rel, t_z, 1.0, 1.0)
                .or_else(|| partner_seed(spec, rel, t_z, 1.0, -1.0));
            let left = partner_seed(spec, rel, t_z, -1.0, 1.0)
                .or_else(|| partner_seed(spec, rel, t_z, -1.0, -1.0));
            let mut any = false;
            for s in [left, right].into_iter().flatten() {
                let span = opts.span + (anchor_t - s.t).abs();
                if let Ok(tb) = integrate_bidirectional(spec, (s.t, s.y), &iopts(opts, span)) {
                    tables.push(Arc::new(tb));
                    any = true;
                }
            }
            if !any {
                return Err(Error::Constraint(
                    "could not integrate either side of the zero crossing".into(),
                ));
            }
            notes.push(format!(
                "factor has an extremum at t = {t_z:.6}; two trajectory segments stitched there"
            ));
        } else {
            // benign crossing: nudge the seed off the zero and integrate once
            for dt in [0.25, -0.25, 0.5, -0.5] {
                if let Ok(s) = resolve_seed(rel, seed.t + dt) {
                    if s.y.abs() >= seed_floor(spec, s.t) {
                        seed = s;
                        break;
                    }
                }
            }
            if seed.y.abs() < seed_floor(spec, seed.t) {
                return Err(Error::Constraint("could not seed away from the zero".into()));
            }
            let span = opts.span + (anchor_t - seed.t).abs();
            tables.push(Arc::new(integrate_bidirectional(
                spec,
                (seed.t, seed.y),
                &iopts(opts, span),
            )?));
        }
    } else {
        let span = opts.span + (anchor_t - seed.t).abs();
        let primary = integrate_bidirectional(spec, (seed.t, seed.y), &iopts(opts, span))?;
        let (p_lo, p_hi) = primary.interval();
        let left_zero = primary.left_stop() == StopReason::ZeroCross;
        let right_zero = primary.right_stop() == StopReason::ZeroCross;
        let edge_sign_left = *primary.values().first().unwrap();
        let edge_sign_right = *primary.values().last().unwrap();
        tables.push(Arc::new(primary));
        if left_zero {
            if let Some(s) = partner_seed(spec, rel, p_lo, -1.0, edge_sign_left) {
                let span = opts.span + (anchor_t - s.t).abs();
                if let Ok(tb) = integrate_bidirectional(spec, (s.t, s.y), &iopts(opts, span)) {
                    if tb.interval().1 <= p_lo + 0.05 {
                        notes.push(format!(
                            "extended across the factor extremum at t = {p_lo:.6}"
                        ));
                        tables.push(Arc::new(tb));
                    }
                }
            }
        }
        if right_zero {
            if let Some(s) = partner_seed(spec, rel, p_hi, 1.0, edge_sign_right) {
                let span = opts.span + (anchor_t - s.t).abs();
                if let Ok(tb) = integrate_bidirectional(spec, (s.t, s.y), &iopts(opts, span)) {
                    if tb.interval().0 >= p_hi - 0.05 {
                        notes.push(format!(
                            "extended across the factor extremum at t = {p_hi:.6}"
                        ));
                        tables.push(Arc::new(tb));
                    }
                }
            }
        }
    }

    tables.sort_by(|a, b| a.interval().0.partial_cmp(&b.interval().0).unwrap());
    // continuity offsets across segment boundaries
    let mut segments = Vec::with_capacity(tables.len());
    let mut off = 0.0f64;
    for (i, tb) in tables.iter().enumerate() {
        if i > 0 {
            let prev = &tables[i - 1];
            let l_prev = prev.log_at(prev.interval().1)?;
            let l_here = tb.log_at(tb.interval().0)?;
            off += l_prev - l_here;
        } else {
            off = 0.0;
        }
        segments.push(Segment { table: Arc::clone(tb), log_offset: off });
    }

    // normalize: factor value 1 at the anchor when covered, else at the seed
    let outer_lo = segments[0].table.interval().0;
    let outer_hi = segments.last().unwrap().table.interval().1;
    let norm_t = if anchor_t > outer_lo + 0.02 && anchor_t < outer_hi - 0.02 {
        anchor_t
    } else {
        let s = seed.t.clamp(outer_lo + 0.02, outer_hi - 0.02);
        notes.push(format!(
            "normalization anchor moved to t = {s:.6} (requested {anchor_t:.6} not covered)"
        ));
        s
    };
    let probe = Factor::Tabulated { segments: segments.clone(), sign: 1.0 };
    let base = probe.log_abs(norm_t)?;
    for seg in &mut segments {
        seg.log_offset -= base;
    }
    Ok(TabulatedParts { segments, notes })
}

fn angular_factor(a: f64, c: f64, theta0: f64, opts: &BuildOptions) -> Result<(Factor, Vec<String>)> {
    if a.abs() <= SUBCASE_TOL {
        // t + c = 1/G integrates to |t + c|; anchor moves off the kink
        let mut notes = Vec::new();
        let scale = if (theta0 + c).abs() < 0.05 {
            notes.push(format!(
                "anchor moved to theta = {} (requested {theta0} sits at the factor kink)",
                1.0 - c
            ));
            1.0
        } else {
            1.0 / (theta0 + c).abs()
        };
        return Ok((Factor::AbsLinear { offset: c, scale }, notes));
    }
    let a = if (a - 1.0).abs() <= SUBCASE_TOL { 1.0 } else { a };
    let spec = OdeSpec::PolarAngularG { a };
    let rel = ImplicitRelation::angular(a, c)?;
    let parts = build_tabulated(&spec, &rel, theta0, opts)?;
    Ok((Factor::Tabulated { segments: parts.segments, sign: 1.0 }, parts.notes))
}

fn cartesian_factor(s: f64, c: f64, x0: f64, opts: &BuildOptions) -> Result<(Factor, Vec<String>)> {
    let spec = OdeSpec::CartesianF { s };
    let rel = ImplicitRelation::cartesian(s, c)?;
    let parts = build_tabulated(&spec, &rel, x0, opts)?;
    Ok((Factor::Tabulated { segments: parts.segments, sign: 1.0 }, parts.notes))
}

fn radial_factor(b: f64, c: f64, r0: f64, opts: &BuildOptions) -> Result<(Factor, Vec<String>)> {
    if r0 <= 0.0 {
        return Err(Error::Domain("radial anchor must be positive".into()));
    }
    let spec = OdeSpec::PolarRadialPhi { b };
    let rel = ImplicitRelation::radial(b, c)?;
    let parts = build_tabulated(&spec, &rel, r0.ln(), opts)?;
    Ok((
        Factor::TabulatedLogRadial { segments: parts.segments, sign: 1.0 },
        parts.notes,
    ))
}

/// Power-times-exponential polar family on the circle A² - A + B² = 0.
pub fn build_thm1_i(a: f64, b: f64, opts: &BuildOptions) -> Result<SeparatedSolution> {
    let _ = opts;
    if !validate_case_i(a, b) {
        return Err(Error::Constraint(format!(
            "A² - A + B² = {:.3e} must vanish (|.| <= {CASE_I_TOL})",
            a * a - a + b * b
        )));
    }
    SeparatedSolution::new(
        CoordSystem::Polar2D,
        vec![
            Factor::Power { exponent: a },
            Factor::Exponential { rate: b, center: 0.0 },
        ],
        CaseMeta {
            case: "thm1.i".into(),
            params: vec![("A".into(), a), ("B".into(), b)],
            c: 0.0,
            anchors: vec![("r".into(), 1.0), ("theta".into(), 0.0)],
            notes: vec![],
        },
    )
}

/// True iff (A, B) lies on the constraint circle (A - 1/2)² + B² = 1/4.
pub fn validate_case_i(a: f64, b: f64) -> bool {
    (a * a - a + b * b).abs() <= CASE_I_TOL
}

/// Power radial factor with a tabulated angular profile.
pub fn build_thm1_ii(a: f64, c: f64, opts: &BuildOptions) -> Result<SeparatedSolution> {
    if !a.is_finite() {
        return Err(Error::Domain("A must be finite".into()));
    }
    let theta0 = 0.0;
    let (g, notes) = angular_factor(a, c, theta0, opts)?;
    let f_exp = if a.abs() <= SUBCASE_TOL { 0.0 } else { a };
    SeparatedSolution::new(
        CoordSystem::Polar2D,
        vec![Factor::Power { exponent: f_exp }, g],
        CaseMeta {
            case: "thm1.ii".into(),
            params: vec![("A".into(), a)],
            c,
            anchors: vec![("r".into(), 1.0), ("theta".into(), theta0)],
            notes,
        },
    )
}

/// Exponential angular factor with a tabulated log-radial profile.
pub fn build_thm1_iii(b: f64, c: f64, opts: &BuildOptions) -> Result<SeparatedSolution> {
    if !b.is_finite() {
        return Err(Error::Domain("B must be finite".into()));
    }
    let (f, notes) = radial_factor(b, c, 1.0, opts)?;
    SeparatedSolution::new(
        CoordSystem::Polar2D,
        vec![f, Factor::Exponential { rate: b, center: 0.0 }],
        CaseMeta {
            case: "thm1.iii".into(),
            params: vec![("B".into(), b)],
            c,
            anchors: vec![("r".into(), 1.0), ("theta".into(), 0.0)],
            notes,
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Thm2Which {
    I,
    Ii,
}

/// Two-dimensional Cartesian family; the n = 2 slice of the n-dimensional one.
pub fn build_thm2(which: Thm2Which, coeff: f64, c: f64, opts: &BuildOptions) -> Result<SeparatedSolution> {
    let j = match which {
        Thm2Which::I => 2,
        Thm2Which::Ii => 1,
    };
    let mut sol = build_thm3(&[coeff], j, c, opts)?;
    sol.meta.case = match which {
        Thm2Which::I => "thm2.i".into(),
        Thm2Which::Ii => "thm2.ii".into(),
    };
    sol.meta.params = vec![(
        match which {
            Thm2Which::I => "A".into(),
            Thm2Which::Ii => "B".into(),
        },
        coeff,
    )];
    Ok(sol)
}

/// n-dimensional Cartesian family: exponentials on all axes but one, the
/// remaining profile tabulated from S = Σ Aᵢ².
pub fn build_thm3(rates: &[f64], j: usize, c: f64, opts: &BuildOptions) -> Result<SeparatedSolution> {
    let n = rates.len() + 1;
    if n < 2 {
        return Err(Error::Spec("need n >= 2 (supply n-1 rates)".into()));
    }
    if !(1..=n).contains(&j) {
        return Err(Error::Spec(format!("j = {j} outside 1..={n}")));
    }
    if rates.iter().any(|r| !r.is_finite()) {
        return Err(Error::Domain("rates must be finite".into()));
    }
    let s: f64 = rates.iter().map(|r| r * r).sum();
    let mut notes = Vec::new();
    let profile = if s <= SUBCASE_TOL {
        let (chosen, note) = degenerate_branch(c);
        notes.push(note);
        chosen
    } else {
        let (f, fnotes) = cartesian_factor(s, c, 0.0, opts)?;
        notes.extend(fnotes);
        f
    };
    let mut factors = Vec::with_capacity(n);
    let mut k = 0usize;
    for i in 1..=n {
        if i == j {
            factors.push(profile.clone());
        } else {
            factors.push(Factor::Exponential { rate: rates[k], center: 0.0 });
            k += 1;
        }
    }
    let mut params: Vec<(String, f64)> =
        rates.iter().enumerate().map(|(i, r)| (format!("A{}", i + 1), *r)).collect();
    params.push(("j".into(), j as f64));
    SeparatedSolution::new(
        CoordSystem::CartesianNd(n),
        factors,
        CaseMeta {
            case: "thm3".into(),
            params,
            c,
            anchors: (1..=n).map(|i| (format!("x{i}"), 0.0)).collect(),
            notes,
        },
    )
}

/// Both sign candidates of the degenerate S = 0 profile: |x+c| (ratio
/// +1/(x+c)) and 1/|x+c| (ratio -1/(x+c)).
pub fn thm3_degenerate_candidates(c: f64) -> [Factor; 2] {
    [
        Factor::AbsLinear { offset: c, scale: 1.0 },
        Factor::RecipAbs { offset: c, scale: 1.0 },
    ]
}

/// Pick the degenerate branch by a one-dimensional residual check: for a
/// single-variable factor the operator reduces to u'² u''.
fn degenerate_branch(c: f64) -> (Factor, String) {
    let [plus, minus] = thm3_degenerate_candidates(c);
    // raw 1D residual u'²u''; the valid branch is flat to rounding noise,
    // the other is O(1) at unit distance from the pole
    let resid = |f: &Factor| -> f64 {
        let h = 1e-3;
        let mut worst = 0.0f64;
        for x in [0.9 - c, 1.3 - c, 1.7 - c] {
            let v = |t: f64| f.value(t).unwrap_or(f64::NAN);
            let up = (v(x + h) - v(x - h)) / (2.0 * h);
            let upp = ((v(x + h) + v(x - h)) - 2.0 * v(x)) / (h * h);
            worst = worst.max((up * up * upp).abs());
        }
        worst
    };
    let (rp, rm) = (resid(&plus), resid(&minus));
    if rp <= rm {
        (
            plus,
            format!("degenerate S=0 branch: +1/(x+c) selected (residual {rp:.2e} vs {rm:.2e})"),
        )
    } else {
        (
            minus,
            format!("degenerate S=0 branch: -1/(x+c) selected (residual {rm:.2e} vs {rp:.2e})"),
        )
    }
}

/// Spherical family (i): power × exponential × tabulated polar profile.
pub fn build_thm4_i(a: f64, b: f64, opts: &BuildOptions) -> Result<SeparatedSolution> {
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain("A, B must be finite".into()));
    }
    let (alpha0, h0) = opts.h_anchor;
    if h0 == 0.0 {
        return Err(Error::Domain("polar profile anchor ratio must be nonzero".into()));
    }
    let spec = OdeSpec::SphericalPolarH { a, b };
    let span = std::f64::consts::PI; // bounded by the polar domain anyway
    let table = integrate_bidirectional(&spec, (alpha0, h0), &iopts(opts, span))?;
    let h = Factor::Tabulated {
        segments: vec![Segment { table: Arc::new(table), log_offset: 0.0 }],
        sign: 1.0,
    };
    SeparatedSolution::new(
        CoordSystem::Spherical3D,
        vec![
            Factor::Power { exponent: a },
            Factor::Exponential { rate: b, center: 0.0 },
            h,
        ],
        CaseMeta {
            case: "thm4.i".into(),
            params: vec![("A".into(), a), ("B".into(), b)],
            c: 0.0,
            anchors: vec![
                ("r".into(), 1.0),
                ("theta".into(), 0.0),
                ("alpha".into(), alpha0),
            ],
            notes: vec![format!("polar profile anchored at H({alpha0:.6}) = {h0}")],
        },
    )
}

/// Spherical family (ii): the polar angular profile lifted onto the
/// cylindrical radius r sin α.
pub fn build_thm4_ii(a: f64, c: f64, opts: &BuildOptions) -> Result<SeparatedSolution> {
    if !a.is_finite() {
        return Err(Error::Domain("A must be finite".into()));
    }
    let theta0 = 0.0;
    let (g, notes) = angular_factor(a, c, theta0, opts)?;
    let exp_eff = if a.abs() <= SUBCASE_TOL { 0.0 } else { a };
    SeparatedSolution::new(
        CoordSystem::Spherical3D,
        vec![
            Factor::Power { exponent: exp_eff },
            g,
            Factor::SinPower { exponent: exp_eff },
        ],
        CaseMeta {
            case: "thm4.ii".into(),
            params: vec![("A".into(), a)],
            c,
            anchors: vec![
                ("r".into(), 1.0),
                ("theta".into(), theta0),
                ("alpha".into(), std::f64::consts::FRAC_PI_2),
            ],
            notes,
        },
    )
}

/// Spherical family (iii): tabulated log-radial profile (coefficient C),
/// exponential azimuthal factor (rate B), closed-form polar factor.
pub fn build_thm4_iii(
    b: f64,
    c_coef: f64,
    sign: i8,
    c: f64,
    opts: &BuildOptions,
) -> Result<SeparatedSolution> {
    if !b.is_finite() || !c_coef.is_finite() {
        return Err(Error::Domain("B, C must be finite".into()));
    }
    if c_coef * c_coef <= b * b {
        return Err(Error::Constraint(format!(
            "C² = {} must exceed B² = {} for the polar radicand",
            c_coef * c_coef,
            b * b
        )));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::Spec("sign must be +1 or -1".into()));
    }
    let (f, notes) = radial_factor(c_coef, c, 1.0, opts)?;
    let alpha0 = std::f64::consts::FRAC_PI_2;
    SeparatedSolution::new(
        CoordSystem::Spherical3D,
        vec![
            f,
            Factor::Exponential { rate: b, center: 0.0 },
            Factor::SphericalHClosed { b, c: c_coef, sign, alpha0 },
        ],
        CaseMeta {
            case: "thm4.iii".into(),
            params: vec![("B".into(), b), ("C".into(), c_coef), ("sign".into(), sign as f64)],
            c,
            anchors: vec![
                ("r".into(), 1.0),
                ("theta".into(), 0.0),
                ("alpha".into(), alpha0),
            ],
            notes,
        },
    )
}
