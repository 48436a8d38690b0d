//! Per-coordinate factors of a separated solution.
//!
//! A factor is one f(coordinate) in the product u = Π fᵢ. Simple families
//! are closed forms (powers, exponentials, |t+c|); the generic families are
//! backed by integrated profile tables, reconstructing the factor as
//! sign · e^{offset + L(t)} from the accumulated log-integral. A factor may
//! consist of two table segments meeting at an interior extremum where the
//! profile ratio crosses zero with unbounded slope (the solution is only
//! C^{1,1/3} there); the microscopic gap between segments is clamped.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::profiles::{pow43, ProfileTable};

/// Margin excluded at the outer endpoints of tabulated validity intervals
/// (the log-integral diverges there).
pub const DOMAIN_PAD: f64 = 1e-6;

/// Table segment with the log offset placing it on the common factor scale.
#[derive(Debug, Clone)]
pub struct Segment {
    pub table: Arc<ProfileTable>,
    pub log_offset: f64,
}

/// One coordinate factor.
#[derive(Debug, Clone)]
pub enum Factor {
    /// Exactly 1.
    Constant,
    /// t^exponent on t > 0.
    Power { exponent: f64 },
    /// e^{rate (t - center)}.
    Exponential { rate: f64, center: f64 },
    /// scale · |t + offset| (scale is 1 for default anchors).
    AbsLinear { offset: f64, scale: f64 },
    /// scale / |t + offset| — the rejected sign of the degenerate branch.
    RecipAbs { offset: f64, scale: f64 },
    /// |sin t|^exponent on (0, π).
    SinPower { exponent: f64 },
    /// Table-backed factor over the raw coordinate.
    Tabulated { segments: Vec<Segment>, sign: f64 },
    /// Table-backed radial factor; tables live in s = ln r.
    TabulatedLogRadial { segments: Vec<Segment>, sign: f64 },
    /// Closed-form spherical polar factor h(α) with log-derivative
    /// ±sqrt(c² - b²/sin²α), anchored at alpha0.
    SphericalHClosed { b: f64, c: f64, sign: i8, alpha0: f64 },
}

fn segment_for(segments: &[Segment], t: f64) -> Result<(usize, f64)> {
    let n = segments.len();
    let outer_lo = segments[0].table.interval().0;
    let outer_hi = segments[n - 1].table.interval().1;
    if !(t > outer_lo + DOMAIN_PAD && t < outer_hi - DOMAIN_PAD) {
        return Err(Error::Domain(format!(
            "t = {t} outside factor interval ({outer_lo}, {outer_hi}) with padding"
        )));
    }
    for (i, seg) in segments.iter().enumerate() {
        let (lo, hi) = seg.table.interval();
        if t >= lo && t <= hi {
            return Ok((i, t));
        }
    }
    // t sits in a microscopic inter-segment gap: clamp to the nearest edge
    for (i, seg) in segments.iter().enumerate() {
        let (lo, hi) = seg.table.interval();
        if t < lo {
            return Ok((i, lo));
        }
        if i + 1 == segments.len() {
            return Ok((i, hi));
        }
        let next_lo = segments[i + 1].table.interval().0;
        if t > hi && t < next_lo {
            return Ok(if t - hi < next_lo - t { (i, hi) } else { (i + 1, next_lo) });
        }
    }
    Err(Error::Domain(format!("t = {t} not covered by any segment")))
}

fn spherical_h_exponent(b: f64, c: f64, alpha: f64) -> Result<f64> {
    let s = alpha.sin();
    if s <= 0.0 {
        return Err(Error::Domain("polar angle outside (0, π)".into()));
    }
    let w2 = c * c - b * b / (s * s);
    if w2 <= 0.0 {
        return Err(Error::Domain(format!(
            "radicand c² - b²/sin²α = {w2} not positive at α = {alpha}"
        )));
    }
    let cot = alpha.cos() / s;
    let asin_arg = b * cot / (c * c - b * b).sqrt();
    if asin_arg.abs() > 1.0 {
        return Err(Error::Domain("arcsine argument outside [-1, 1]".into()));
    }
    Ok(b * asin_arg.asin() - c * (c * cot / w2.sqrt()).atan())
}

impl Factor {
    /// Open validity interval of the factor's coordinate.
    pub fn interval(&self) -> (f64, f64) {
        match self {
            Factor::Constant | Factor::Exponential { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            Factor::Power { .. } => (0.0, f64::INFINITY),
            Factor::AbsLinear { .. } | Factor::RecipAbs { .. } => {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
            Factor::SinPower { .. } => (0.0, std::f64::consts::PI),
            Factor::Tabulated { segments, .. } => {
                let lo = segments[0].table.interval().0 + DOMAIN_PAD;
                let hi = segments.last().unwrap().table.interval().1 - DOMAIN_PAD;
                (lo, hi)
            }
            Factor::TabulatedLogRadial { segments, .. } => {
                let lo = segments[0].table.interval().0 + DOMAIN_PAD;
                let hi = segments.last().unwrap().table.interval().1 - DOMAIN_PAD;
                (lo.exp(), hi.exp())
            }
            Factor::SphericalHClosed { b, c, .. } => {
                let s_min = (b / c).abs();
                let a0 = s_min.asin();
                (a0, std::f64::consts::PI - a0)
            }
        }
    }

    /// Factor value at `t`. Closed forms are computed directly so that exact
    /// cancellations (linear factors under second differences) survive.
    pub fn value(&self, t: f64) -> Result<f64> {
        match self {
            Factor::Constant => Ok(1.0),
            Factor::Power { exponent } => {
                if t <= 0.0 {
                    return Err(Error::Domain(format!("radial coordinate {t} must be positive")));
                }
                if *exponent == 0.0 {
                    Ok(1.0)
                } else if *exponent == 1.0 {
                    Ok(t)
                } else if *exponent == 4.0 / 3.0 {
                    Ok(pow43(t))
                } else {
                    Ok(t.powf(*exponent))
                }
            }
            Factor::Exponential { rate, center } => {
                if *rate == 0.0 {
                    Ok(1.0)
                } else {
                    Ok((rate * (t - center)).exp())
                }
            }
            Factor::AbsLinear { offset, scale } => {
                let v = (t + offset).abs();
                Ok(if *scale == 1.0 { v } else { scale * v })
            }
            Factor::RecipAbs { offset, scale } => {
                let d = (t + offset).abs();
                if d < 1e-12 {
                    return Err(Error::Domain("evaluation at the reciprocal pole".into()));
                }
                Ok(scale / d)
            }
            Factor::SinPower { exponent } => {
                let s = t.sin();
                if s <= 0.0 {
                    return Err(Error::Domain("polar angle outside (0, π)".into()));
                }
                if *exponent == 0.0 {
                    Ok(1.0)
                } else {
                    Ok(s.powf(*exponent))
                }
            }
            Factor::Tabulated { segments, sign } => {
                let (i, tc) = segment_for(segments, t)?;
                let l = segments[i].table.log_at(tc)?;
                Ok(sign * (segments[i].log_offset + l).exp())
            }
            Factor::TabulatedLogRadial { segments, sign } => {
                if t <= 0.0 {
                    return Err(Error::Domain(format!("radial coordinate {t} must be positive")));
                }
                let s = t.ln();
                let (i, sc) = segment_for(segments, s)?;
                let l = segments[i].table.log_at(sc)?;
                Ok(sign * (segments[i].log_offset + l).exp())
            }
            Factor::SphericalHClosed { b, c, sign, alpha0 } => {
                let e = spherical_h_exponent(*b, *c, t)?;
                let e0 = spherical_h_exponent(*b, *c, *alpha0)?;
                Ok(((*sign as f64) * (e - e0)).exp())
            }
        }
    }

    /// ln |value|; kept alongside `value` for overflow-safe products.
    pub fn log_abs(&self, t: f64) -> Result<f64> {
        match self {
            Factor::Constant => Ok(0.0),
            Factor::Power { exponent } => {
                if t <= 0.0 {
                    return Err(Error::Domain(format!("radial coordinate {t} must be positive")));
                }
                Ok(exponent * t.ln())
            }
            Factor::Exponential { rate, center } => Ok(rate * (t - center)),
            Factor::AbsLinear { offset, scale } => {
                Ok(scale.ln() + (t + offset).abs().ln())
            }
            Factor::RecipAbs { offset, scale } => {
                Ok(scale.ln() - (t + offset).abs().ln())
            }
            Factor::SinPower { exponent } => {
                let s = t.sin();
                if s <= 0.0 {
                    return Err(Error::Domain("polar angle outside (0, π)".into()));
                }
                Ok(exponent * s.ln())
            }
            Factor::Tabulated { segments, .. } => {
                let (i, tc) = segment_for(segments, t)?;
                Ok(segments[i].log_offset + segments[i].table.log_at(tc)?)
            }
            Factor::TabulatedLogRadial { segments, .. } => {
                if t <= 0.0 {
                    return Err(Error::Domain(format!("radial coordinate {t} must be positive")));
                }
                let s = t.ln();
                let (i, sc) = segment_for(segments, s)?;
                Ok(segments[i].log_offset + segments[i].table.log_at(sc)?)
            }
            Factor::SphericalHClosed { b, c, sign, alpha0 } => {
                let e = spherical_h_exponent(*b, *c, t)?;
                let e0 = spherical_h_exponent(*b, *c, *alpha0)?;
                Ok((*sign as f64) * (e - e0))
            }
        }
    }

    /// Sign of the factor (constant across its interval).
    pub fn sign(&self) -> f64 {
        match self {
            Factor::Tabulated { sign, .. } | Factor::TabulatedLogRadial { sign, .. } => *sign,
            _ => 1.0,
        }
    }

    /// Logarithmic derivative d ln|f|/dt at `t` (the profile ratio).
    pub fn ratio(&self, t: f64) -> Result<f64> {
        match self {
            Factor::Constant => Ok(0.0),
            Factor::Power { exponent } => {
                if t <= 0.0 {
                    return Err(Error::Domain("radial coordinate must be positive".into()));
                }
                Ok(exponent / t)
            }
            Factor::Exponential { rate, .. } => Ok(*rate),
            Factor::AbsLinear { offset, .. } => Ok(1.0 / (t + offset)),
            Factor::RecipAbs { offset, .. } => Ok(-1.0 / (t + offset)),
            Factor::SinPower { exponent } => {
                let s = t.sin();
                if s <= 0.0 {
                    return Err(Error::Domain("polar angle outside (0, π)".into()));
                }
                Ok(exponent * t.cos() / s)
            }
            Factor::Tabulated { segments, .. } => {
                let (i, tc) = segment_for(segments, t)?;
                segments[i].table.ratio(tc)
            }
            Factor::TabulatedLogRadial { segments, .. } => {
                if t <= 0.0 {
                    return Err(Error::Domain("radial coordinate must be positive".into()));
                }
                let s = t.ln();
                let (i, sc) = segment_for(segments, s)?;
                // d ln f / dr = Phi / r
                Ok(segments[i].table.ratio(sc)? / t)
            }
            Factor::SphericalHClosed { b, c, sign, .. } => {
                let s = t.sin();
                if s <= 0.0 {
                    return Err(Error::Domain("polar angle outside (0, π)".into()));
                }
                let w2 = c * c - b * b / (s * s);
                if w2 <= 0.0 {
                    return Err(Error::Domain("outside the radicand domain".into()));
                }
                Ok((*sign as f64) * w2.sqrt())
            }
        }
    }

    /// Recommended sampling window (first candidate).
    pub fn sample_window(&self, coord_default: (f64, f64)) -> (f64, f64) {
        self.sample_window_candidates(coord_default)[0]
    }

    /// Candidate sampling windows, best-guess first. Tabulated factors offer
    /// both a moderate-slope window and windows adjacent to blow-up ends
    /// (where the factor approaches a simple zero and is locally linear, so
    /// stencil truncation is smallest); the caller probes and picks.
    pub fn sample_window_candidates(&self, coord_default: (f64, f64)) -> Vec<(f64, f64)> {
        const INSET: f64 = 0.1;
        const RATIO_CAP: f64 = 4.0;
        let clip = |w: (f64, f64)| -> (f64, f64) {
            let lo = w.0.max(coord_default.0);
            let hi = w.1.min(coord_default.1);
            if lo < hi {
                (lo, hi)
            } else {
                w
            }
        };
        match self {
            Factor::Constant | Factor::Exponential { .. } | Factor::Power { .. } => {
                vec![coord_default]
            }
            Factor::AbsLinear { offset, .. } | Factor::RecipAbs { offset, .. } => {
                // stay away from the kink/pole at -offset
                let k = -offset;
                let (lo, hi) = coord_default;
                if k <= lo - INSET || k >= hi + INSET {
                    vec![(lo, hi)]
                } else {
                    vec![(k + INSET.max(0.3), k + 1.3)]
                }
            }
            Factor::SinPower { .. } => vec![clip((0.6, std::f64::consts::PI - 0.6))],
            Factor::Tabulated { segments, .. } => {
                tabulated_window_candidates(segments, RATIO_CAP, INSET, |t| t, coord_default)
            }
            Factor::TabulatedLogRadial { segments, .. } => {
                tabulated_window_candidates(segments, RATIO_CAP, INSET, |s| s.exp(), coord_default)
            }
            Factor::SphericalHClosed { .. } => {
                let (lo, hi) = self.interval();
                vec![clip((lo + 0.25, hi - 0.25))]
            }
        }
    }
}

/// Window candidates for table-backed factors: per segment, the longest
/// moderate-ratio run plus a band next to each blow-up end. The moderate run
/// overlapping the default box is ordered first.
fn tabulated_window_candidates(
    segments: &[Segment],
    cap: f64,
    inset: f64,
    map: impl Fn(f64) -> f64,
    dflt: (f64, f64),
) -> Vec<(f64, f64)> {
    use crate::profiles::StopReason;
    let mut moderate: Vec<(f64, f64)> = Vec::new();
    let mut blowup: Vec<(f64, f64)> = Vec::new();
    for seg in segments {
        if let Some(w) = seg.table.window_where(|_t, y| y.abs() <= cap) {
            let (lo, hi) = (map(w.0 + inset), map(w.1 - inset));
            if hi > lo {
                moderate.push((lo, hi));
            }
        }
        // a blow-up end marks a simple zero of the factor: the band where
        // the ratio runs from ~cap to ~10·cap is locally near-linear
        for (reason, end_is_left) in
            [(seg.table.left_stop(), true), (seg.table.right_stop(), false)]
        {
            if reason != StopReason::Blowup {
                continue;
            }
            if let Some(w) = seg.table.end_band(end_is_left, 2.0 * cap, 1e3, 0.021) {
                let (lo, hi) = (map(w.0), map(w.1));
                if hi > lo {
                    blowup.push((lo, hi));
                }
            }
        }
    }
    if moderate.is_empty() && blowup.is_empty() {
        let lo = segments[0].table.interval().0;
        let hi = segments.last().unwrap().table.interval().1;
        return vec![(map(lo + inset), map(hi - inset))];
    }
    let overlap = |c: &(f64, f64)| (c.1.min(dflt.1) - c.0.max(dflt.0)).max(0.0);
    moderate.sort_by(|a, b| {
        overlap(b)
            .partial_cmp(&overlap(a))
            .unwrap()
            .then((b.1 - b.0).partial_cmp(&(a.1 - a.0)).unwrap())
    });
    let mut out = Vec::new();
    if let Some(&m) = moderate.first() {
        out.push(if overlap(&m) > 0.0 { (m.0.max(dflt.0), m.1.min(dflt.1)) } else { m });
    }
    out.extend(moderate.into_iter().skip(1));
    out.extend(blowup);
    out.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
    out.truncate(4);
    out
}
