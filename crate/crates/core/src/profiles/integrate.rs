//! Adaptive integration of profile ODEs.
//!
//! Dormand-Prince 5(4) with the embedded pair driving step control. The
//! profile flows blow up in finite time (|y| -> Y_MAX), run into singular
//! zero crossings (y -> 0 with unbounded slope), or settle onto equilibria
//! (capped by span); each stop is recorded rather than treated as failure,
//! since it marks the honest end of the factor's validity interval.

use crate::error::{Error, Result};
use crate::profiles::ode::OdeSpec;
use crate::profiles::table::{ProfileTable, StopReason};

/// Blow-up cap on |y|; beyond it the factor has effectively reached a zero
/// of the underlying function.
pub const Y_MAX: f64 = 1e8;
/// Step-size floor.
pub const H_MIN: f64 = 1e-13;
/// Default absolute/relative tolerance pair.
pub const DEFAULT_TOL: (f64, f64) = (1e-10, 1e-10);
/// Step ceiling; keeps node spacing fine enough for the interpolant and the
/// node-residual conditioning near equilibria.
pub const MAX_DT: f64 = 0.01;
/// Default one-sided span from the anchor.
pub const DEFAULT_SPAN: f64 = 2.8;

const MAX_STEPS: usize = 400_000;
const SAFETY: f64 = 0.9;

#[derive(Debug, Clone, Copy)]
pub struct IntegrateOptions {
    pub tol: (f64, f64),
    pub max_dt: f64,
    /// One-sided span cap measured from the anchor.
    pub span: f64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, max_dt: MAX_DT, span: DEFAULT_SPAN }
    }
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

struct Node {
    t: f64,
    y: f64,
    d: f64,
    k: f64,
}

/// Integrate a profile ODE from `anchor` in one direction with default span.
///
/// Early stopping (blow-up, zero crossing, step underflow, span) is recorded
/// in the table's stop reasons, not reported as an error.
pub fn integrate_profile(
    spec: &OdeSpec,
    anchor: (f64, f64),
    direction: i8,
    tol: (f64, f64),
) -> Result<ProfileTable> {
    let opts = IntegrateOptions { tol, ..Default::default() };
    integrate_profile_with(spec, anchor, direction, &opts)
}

/// Integrate with explicit options.
pub fn integrate_profile_with(
    spec: &OdeSpec,
    anchor: (f64, f64),
    direction: i8,
    opts: &IntegrateOptions,
) -> Result<ProfileTable> {
    let run = integrate_run(spec, anchor, direction, opts)?;
    let nodes: Vec<Node> = run.0;
    let stop = run.1;
    let mut ts: Vec<f64> = nodes.iter().map(|n| n.t).collect();
    let mut ys: Vec<f64> = nodes.iter().map(|n| n.y).collect();
    let mut ds: Vec<f64> = nodes.iter().map(|n| n.d).collect();
    let mut ks: Vec<f64> = nodes.iter().map(|n| n.k).collect();
    let anchor_idx = if direction >= 0 {
        0
    } else {
        ts.reverse();
        ys.reverse();
        ds.reverse();
        ks.reverse();
        ts.len() - 1
    };
    let (left, right) = if direction >= 0 {
        (StopReason::SpanCap, stop)
    } else {
        (stop, StopReason::SpanCap)
    };
    ProfileTable::from_nodes(*spec, ts, ys, ds, ks, anchor_idx, left, right)
}

/// Integrate both directions from the anchor and merge into one table.
pub fn integrate_bidirectional(
    spec: &OdeSpec,
    anchor: (f64, f64),
    opts: &IntegrateOptions,
) -> Result<ProfileTable> {
    let (fwd, fstop) = integrate_run(spec, anchor, 1, opts)?;
    let (bwd, bstop) = integrate_run(spec, anchor, -1, opts)?;
    let mut ts = Vec::with_capacity(fwd.len() + bwd.len() - 1);
    let mut ys = Vec::with_capacity(ts.capacity());
    let mut ds = Vec::with_capacity(ts.capacity());
    let mut ks = Vec::with_capacity(ts.capacity());
    for n in bwd.iter().rev() {
        ts.push(n.t);
        ys.push(n.y);
        ds.push(n.d);
        ks.push(n.k);
    }
    let anchor_idx = ts.len() - 1;
    for n in fwd.iter().skip(1) {
        ts.push(n.t);
        ys.push(n.y);
        ds.push(n.d);
        ks.push(n.k);
    }
    ProfileTable::from_nodes(*spec, ts, ys, ds, ks, anchor_idx, bstop, fstop)
}

fn integrate_run(
    spec: &OdeSpec,
    anchor: (f64, f64),
    direction: i8,
    opts: &IntegrateOptions,
) -> Result<(Vec<Node>, StopReason)> {
    spec.validate()?;
    let (t0, y0) = anchor;
    if !t0.is_finite() || !y0.is_finite() || y0 == 0.0 {
        return Err(Error::Domain(format!("invalid anchor ({t0}, {y0})")));
    }
    let (atol, rtol) = opts.tol;
    if !(atol > 0.0 && rtol > 0.0) {
        return Err(Error::Domain("tolerances must be positive".into()));
    }
    if let Some((blo, bhi)) = spec.t_bounds() {
        if t0 <= blo || t0 >= bhi {
            return Err(Error::Domain(format!(
                "anchor t = {t0} outside the variable's domain ({blo}, {bhi})"
            )));
        }
    }
    let dir = if direction >= 0 { 1.0 } else { -1.0 };
    // rhs guard: at a benign zero the factored form carries no 1/y term and
    // evaluates cleanly; at a singular zero the stage is refused
    let eval = |t: f64, y: f64| -> Option<f64> {
        if y == 0.0 && spec.singular_zero_coefficient(t) != 0.0 {
            return None;
        }
        let v = spec.rhs_unchecked(t, y);
        v.is_finite().then_some(v)
    };

    let d0 = eval(t0, y0).ok_or_else(|| Error::Domain("slope undefined at anchor".into()))?;
    let (_, k0) = spec.rhs_jet(t0, y0);
    let mut nodes = vec![Node { t: t0, y: y0, d: d0, k: k0 }];

    let mut t = t0;
    let mut y = y0;
    let mut f0 = d0;
    let mut h = (opts.max_dt).min(1e-4 * (1.0 + y0.abs()) / (1.0 + d0.abs())).max(1e-10);
    let singular_zero = |tt: f64| spec.singular_zero_coefficient(tt) != 0.0;

    let mut stop = StopReason::SpanCap;
    let mut steps = 0usize;
    'outer: loop {
        steps += 1;
        if steps > MAX_STEPS {
            stop = StopReason::StepLimit;
            break;
        }
        // clip against span and hard bounds so the last node lands exactly
        let mut clipped_span = false;
        let remaining_span = opts.span - (t - t0).abs();
        if remaining_span <= 1e-12 {
            stop = StopReason::SpanCap;
            break;
        }
        if h > remaining_span {
            h = remaining_span;
            clipped_span = true;
        }
        let mut clipped_edge = false;
        if let Some((blo, bhi)) = spec.t_bounds() {
            let margin = 1e-6;
            let dist = if dir > 0.0 { bhi - margin - t } else { t - (blo + margin) };
            if dist <= 1e-9 {
                let _ = stop;
                stop = StopReason::DomainEdge;
                break;
            }
            if h > dist {
                h = dist;
                clipped_edge = true;
            }
        }
        if h < H_MIN {
            stop = if y.abs() < 1e-3 { StopReason::ZeroCross } else { StopReason::StepUnderflow };
            break;
        }

        // one DP45 step
        let hs = dir * h;
        let mut k = [0.0f64; 7];
        k[0] = f0;
        let mut failed_stage = false;
        for i in 1..7 {
            let mut acc = 0.0;
            for (j, kj) in k.iter().enumerate().take(i) {
                acc += A[i][j] * kj;
            }
            let yi = y + hs * acc;
            let ti = t + hs * C[i];
            if yi == 0.0 && singular_zero(ti) {
                failed_stage = true;
                break;
            }
            match eval(ti, yi) {
                Some(v) => k[i] = v,
                None => {
                    failed_stage = true;
                    break;
                }
            }
        }
        if failed_stage {
            h *= 0.5;
            continue;
        }
        let mut y5 = 0.0;
        let mut y4 = 0.0;
        for i in 0..7 {
            y5 += B5[i] * k[i];
            y4 += B4[i] * k[i];
        }
        let y_new = y + hs * y5;
        let err_raw = (hs * (y5 - y4)).abs();
        let scale = atol + rtol * y.abs().max(y_new.abs());
        let err = err_raw / scale;
        if !y_new.is_finite() || err > 1.0 {
            let shrink = if y_new.is_finite() {
                (SAFETY * err.powf(-0.2)).max(0.2)
            } else {
                0.2
            };
            h *= shrink;
            if h < H_MIN {
                stop = if y.abs() < 1e-3 {
                    StopReason::ZeroCross
                } else {
                    StopReason::StepUnderflow
                };
                break;
            }
            continue;
        }

        // blow-up cap: bisect the step until the node lands inside the band
        if y_new.abs() > Y_MAX {
            h *= 0.5;
            if h < H_MIN {
                stop = StopReason::StepUnderflow;
                break;
            }
            continue;
        }

        // singular zero crossing: refuse to step across, shrink instead
        let t_new = t + hs;
        if (y_new == 0.0 || y_new.signum() != y.signum()) && singular_zero(t_new) {
            h *= 0.5;
            if h < H_MIN {
                stop = StopReason::ZeroCross;
                break;
            }
            continue;
        }

        // accept
        let d_new = match eval(t_new, y_new) {
            Some(v) => v,
            None => {
                stop = StopReason::ZeroCross;
                break;
            }
        };
        let (_, k_new) = spec.rhs_jet(t_new, y_new);
        nodes.push(Node { t: t_new, y: y_new, d: d_new, k: k_new });
        t = t_new;
        y = y_new;
        f0 = d_new;

        if y.abs() >= 0.8 * Y_MAX {
            stop = StopReason::Blowup;
            break 'outer;
        }
        if clipped_span && remaining_span - h <= 1e-12 {
            stop = StopReason::SpanCap;
            break;
        }
        if clipped_edge {
            stop = StopReason::DomainEdge;
            break;
        }

        let grow = if err > 0.0 { (SAFETY * err.powf(-0.2)).min(5.0) } else { 5.0 };
        h = (h * grow).min(opts.max_dt);
    }

    if nodes.len() < 2 {
        // make the table well formed even for immediate stops
        let tiny = dir * 1e-9;
        let t1 = t0 + tiny;
        if let Some(d1) = eval(t1, y0 + tiny * d0) {
            let (_, k1) = spec.rhs_jet(t1, y0 + tiny * d0);
            nodes.push(Node { t: t1, y: y0 + tiny * d0, d: d1, k: k1 });
        } else {
            return Err(Error::Domain(
                "trajectory stopped immediately at the anchor".into(),
            ));
        }
    }
    Ok((nodes, stop))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reciprocal_closed_solution() {
        // y' = -y² from (0, 1): y(t) = 1/(1+t), L(t) = ln(1+t)
        let spec = OdeSpec::CartesianF { s: 0.0 };
        let table = integrate_profile(&spec, (0.0, 1.0), 1, DEFAULT_TOL).unwrap();
        let (lo, hi) = table.interval();
        assert!(lo == 0.0 && hi >= 2.0, "interval ({lo}, {hi})");
        let mut t = 0.0;
        while t <= 2.0 {
            let (y, l) = table.ratio_and_log(t).unwrap();
            assert!((y - 1.0 / (1.0 + t)).abs() <= 1e-9, "y({t}) = {y}");
            assert!((l - (1.0 + t).ln()).abs() <= 1e-9, "L({t}) = {l}");
            t += 0.17;
        }
    }

    #[test]
    fn anchor_at_zero_rejected() {
        let spec = OdeSpec::PolarAngularG { a: 1.0 };
        assert!(matches!(
            integrate_profile(&spec, (0.0, 0.0), 1, DEFAULT_TOL),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn bad_tolerances_rejected() {
        let spec = OdeSpec::CartesianF { s: 0.0 };
        assert!(integrate_profile(&spec, (0.0, 1.0), 1, (0.0, 1e-10)).is_err());
    }

    #[test]
    fn blowup_cap_and_monotone_tail() {
        // y' = -y² backward from (0, 1) blows up at t = -1
        let spec = OdeSpec::CartesianF { s: 0.0 };
        let table = integrate_profile(&spec, (0.0, 1.0), -1, DEFAULT_TOL).unwrap();
        assert_eq!(table.left_stop(), StopReason::Blowup);
        let v = table.values();
        assert!(v[0].abs() >= 0.8 * Y_MAX && v[0].abs() <= Y_MAX);
        for w in v[..5.min(v.len())].windows(2) {
            assert!(w[0].abs() > w[1].abs(), "tail not increasing toward the cap");
        }
        let (lo, _) = table.interval();
        assert!((lo + 1.0).abs() < 1e-6, "blow-up location {lo}");
    }

    #[test]
    fn matches_closed_form_profile() {
        // anchor on the closed-form 4/3 trajectory, compare on the overlap
        use crate::profiles::aronsson::aronsson_g;
        let spec = OdeSpec::PolarAngularG { a: 4.0 / 3.0 };
        let t_star = 0.3;
        let g_star = aronsson_g(t_star, 0.0).unwrap();
        let opts = IntegrateOptions::default();
        let table = integrate_bidirectional(&spec, (t_star, g_star), &opts).unwrap();
        let (lo, hi) = table.interval();
        let mut t = (lo + 1e-3).max(0.05);
        while t < hi.min(std::f64::consts::FRAC_PI_4 - 0.05) {
            let want = aronsson_g(t, 0.0).unwrap();
            let got = table.ratio(t).unwrap();
            assert!(
                (got - want).abs() <= 1e-8 * (1.0 + want.abs()),
                "t={t}: {got} vs {want}"
            );
            t += 0.02;
        }
    }

    #[test]
    fn benign_zero_crossing_tangent() {
        // a = 1: y' = -(1+y²), trajectory -tan crosses zero harmlessly
        let spec = OdeSpec::PolarAngularG { a: 1.0 };
        let opts = IntegrateOptions { span: 3.0, ..Default::default() };
        let table =
            integrate_bidirectional(&spec, (std::f64::consts::FRAC_PI_4, -1.0), &opts).unwrap();
        let (lo, hi) = table.interval();
        assert!(lo < -1.4 && hi > 1.4, "interval ({lo}, {hi})");
        for t in [-1.2, -0.4, 0.0, 0.9] {
            let got = table.ratio(t).unwrap();
            let want = -f64::tan(t);
            assert!((got - want).abs() <= 1e-8, "t={t}: {got} vs {want}");
        }
        // the log-integral reproduces ln cos up to the anchor offset
        let l0 = table.log_at(0.0).unwrap();
        let l1 = table.log_at(0.9).unwrap();
        assert!(((l1 - l0) - (0.9f64.cos().ln() - 0.0f64.cos().ln())).abs() <= 1e-8);
    }

    #[test]
    fn singular_zero_stop() {
        // 4/3 trajectory heading into y = 0 stops short of the crossing
        let spec = OdeSpec::PolarAngularG { a: 4.0 / 3.0 };
        let g = crate::profiles::aronsson::aronsson_g(0.3, 0.0).unwrap();
        let table = integrate_profile(&spec, (0.3, g), -1, DEFAULT_TOL).unwrap();
        assert!(matches!(
            table.left_stop(),
            StopReason::ZeroCross | StopReason::StepUnderflow
        ));
        let (lo, _) = table.interval();
        assert!(lo > -1e-6 && lo < 1e-3, "stopped at {lo}");
    }

    #[test]
    fn spherical_stays_within_polar_bounds() {
        let spec = OdeSpec::SphericalPolarH { a: 0.5, b: 0.2 };
        let opts = IntegrateOptions { span: 10.0, ..Default::default() };
        let table =
            integrate_bidirectional(&spec, (std::f64::consts::FRAC_PI_2, 1.0), &opts).unwrap();
        let (lo, hi) = table.interval();
        assert!(lo > 0.0 && hi < std::f64::consts::PI);
    }
}
