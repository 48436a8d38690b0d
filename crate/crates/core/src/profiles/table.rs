//! Tabulated profile trajectories.
//!
//! A `ProfileTable` stores one ODE trajectory as nodes with value, slope and
//! curvature (the slope from the right-hand side, the curvature from its
//! total derivative). Between nodes the ratio is the quintic Hermite
//! interpolant matching all six boundary data; the accumulated log-integral
//! is the running exact integral of those quintics, so the reconstructed
//! factor e^{L} is C³ across nodes by construction.

use crate::error::{Error, Result};
use crate::profiles::ode::OdeSpec;

/// Why integration ended on one side of the trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// |y| reached the blow-up cap.
    Blowup,
    /// the trajectory headed into y = 0 with unbounded slope
    ZeroCross,
    /// step size underflowed the floor
    StepUnderflow,
    /// reached the requested span from the anchor
    SpanCap,
    /// reached a hard bound of the independent variable
    DomainEdge,
    /// safety limit on accepted steps
    StepLimit,
}

/// One integrated profile-ratio trajectory with its quadrature state.
#[derive(Debug, Clone)]
pub struct ProfileTable {
    pub spec: OdeSpec,
    nodes: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
    curvatures: Vec<f64>,
    log_integral: Vec<f64>,
    anchor: (f64, f64),
    left_stop: StopReason,
    right_stop: StopReason,
}

/// Quintic Hermite coefficients on a normalized cell s in [0,1].
struct Cell {
    p0: f64,
    m0: f64,
    q0h: f64, // q0/2
    c3: f64,
    c4: f64,
    c5: f64,
    dt: f64,
}

impl Cell {
    fn new(dt: f64, y0: f64, d0: f64, k0: f64, y1: f64, d1: f64, k1: f64) -> Self {
        let m0 = d0 * dt;
        let m1 = d1 * dt;
        let q0 = k0 * dt * dt;
        let q1 = k1 * dt * dt;
        let e0 = y1 - y0 - m0 - 0.5 * q0;
        let e1 = m1 - m0 - q0;
        let e2 = q1 - q0;
        let c5 = 0.5 * (e2 + 12.0 * e0 - 6.0 * e1);
        let c4 = e1 - 3.0 * e0 - 2.0 * c5;
        let c3 = e0 - c4 - c5;
        Cell { p0: y0, m0, q0h: 0.5 * q0, c3, c4, c5, dt }
    }

    fn value(&self, s: f64) -> f64 {
        self.p0
            + s * (self.m0
                + s * (self.q0h + s * (self.c3 + s * (self.c4 + s * self.c5))))
    }

    /// Integral of the quintic from 0 to s, in units of t (scaled by dt).
    fn integral(&self, s: f64) -> f64 {
        let v = s
            * (self.p0
                + s * (self.m0 / 2.0
                    + s * (self.q0h / 3.0
                        + s * (self.c3 / 4.0 + s * (self.c4 / 5.0 + s * self.c5 / 6.0)))));
        v * self.dt
    }
}

// 7-point Gauss-Legendre rule on [-1, 1].
const GAUSS_X: [f64; 7] = [
    -0.9491079123427585,
    -0.7415311855993945,
    -0.4058451513773972,
    0.0,
    0.4058451513773972,
    0.7415311855993945,
    0.9491079123427585,
];
const GAUSS_W: [f64; 7] = [
    0.1294849661688697,
    0.2797053914892766,
    0.3818300505051189,
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892766,
    0.1294849661688697,
];

impl ProfileTable {
    /// Assemble a table from sorted node data. `anchor_idx` selects the node
    /// where the log-integral is zero.
    pub(crate) fn from_nodes(
        spec: OdeSpec,
        nodes: Vec<f64>,
        values: Vec<f64>,
        slopes: Vec<f64>,
        curvatures: Vec<f64>,
        anchor_idx: usize,
        left_stop: StopReason,
        right_stop: StopReason,
    ) -> Result<Self> {
        let n = nodes.len();
        if n < 2 || values.len() != n || slopes.len() != n || curvatures.len() != n {
            return Err(Error::Degenerate(format!("table needs >= 2 nodes, got {n}")));
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Degenerate("nodes must be strictly increasing".into()));
        }
        let anchor = (nodes[anchor_idx], values[anchor_idx]);
        // cumulative exact integrals of the per-cell quintics, re-based so the
        // anchor node carries exactly zero
        let mut log_integral = vec![0.0; n];
        for i in 1..n {
            let dt = nodes[i] - nodes[i - 1];
            let cell = Cell::new(
                dt,
                values[i - 1],
                slopes[i - 1],
                curvatures[i - 1],
                values[i],
                slopes[i],
                curvatures[i],
            );
            log_integral[i] = log_integral[i - 1] + cell.integral(1.0);
        }
        let base = log_integral[anchor_idx];
        for v in &mut log_integral {
            *v -= base;
        }
        Ok(Self {
            spec,
            nodes,
            values,
            slopes,
            curvatures,
            log_integral,
            anchor,
            left_stop,
            right_stop,
        })
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.nodes[0], *self.nodes.last().unwrap())
    }

    pub fn anchor(&self) -> (f64, f64) {
        self.anchor
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn log_integrals(&self) -> &[f64] {
        &self.log_integral
    }

    pub fn left_stop(&self) -> StopReason {
        self.left_stop
    }

    pub fn right_stop(&self) -> StopReason {
        self.right_stop
    }

    fn cell_index(&self, t: f64) -> Result<usize> {
        let (lo, hi) = self.interval();
        if !(t >= lo && t <= hi) {
            return Err(Error::Domain(format!(
                "t = {t} outside trajectory interval [{lo}, {hi}]"
            )));
        }
        let i = match self
            .nodes
            .binary_search_by(|x| x.partial_cmp(&t).unwrap())
        {
            Ok(i) => i.min(self.nodes.len() - 2),
            Err(i) => i - 1,
        };
        Ok(i)
    }

    fn cell(&self, i: usize) -> Cell {
        Cell::new(
            self.nodes[i + 1] - self.nodes[i],
            self.values[i],
            self.slopes[i],
            self.curvatures[i],
            self.values[i + 1],
            self.slopes[i + 1],
            self.curvatures[i + 1],
        )
    }

    /// Interpolated profile ratio and accumulated log-integral at `t`.
    pub fn ratio_and_log(&self, t: f64) -> Result<(f64, f64)> {
        let i = self.cell_index(t)?;
        let cell = self.cell(i);
        let s = (t - self.nodes[i]) / cell.dt;
        Ok((cell.value(s), self.log_integral[i] + cell.integral(s)))
    }

    pub fn ratio(&self, t: f64) -> Result<f64> {
        Ok(self.ratio_and_log(t)?.0)
    }

    pub fn log_at(&self, t: f64) -> Result<f64> {
        Ok(self.ratio_and_log(t)?.1)
    }

    /// Accumulated integral of 1/y from the anchor to `t` (per-cell Gauss
    /// quadrature on the interpolated ratio).
    pub fn integral_of_inverse(&self, t: f64) -> Result<f64> {
        let (t0, _) = self.anchor;
        let (a, b, sign) = if t >= t0 { (t0, t, 1.0) } else { (t, t0, -1.0) };
        let ia = self.cell_index(a)?;
        let ib = self.cell_index(b)?;
        let mut total = 0.0;
        for i in ia..=ib {
            let lo = self.nodes[i].max(a);
            let hi = self.nodes[i + 1].min(b);
            if hi <= lo {
                continue;
            }
            let cell = self.cell(i);
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            let mut acc = 0.0;
            for (x, w) in GAUSS_X.iter().zip(GAUSS_W.iter()) {
                let tt = mid + half * x;
                let s = (tt - self.nodes[i]) / cell.dt;
                let y = cell.value(s);
                if y == 0.0 {
                    return Err(Error::Domain("1/y integrand hits zero".into()));
                }
                acc += w / y;
            }
            total += acc * half;
        }
        Ok(sign * total)
    }

    /// Widest sub-interval containing the anchor on which |y| stays at or
    /// below `cap`. Returns None if the anchor itself violates the cap.
    pub fn window_below(&self, cap: f64) -> Option<(f64, f64)> {
        let idx = self
            .nodes
            .iter()
            .position(|&t| t == self.anchor.0)
            .unwrap_or(0);
        if self.values[idx].abs() > cap {
            return None;
        }
        let mut lo = idx;
        while lo > 0 && self.values[lo - 1].abs() <= cap {
            lo -= 1;
        }
        let mut hi = idx;
        while hi + 1 < self.nodes.len() && self.values[hi + 1].abs() <= cap {
            hi += 1;
        }
        Some((self.nodes[lo], self.nodes[hi]))
    }

    /// Band attached to one end of the table where |y| lies in
    /// [lo_cap, hi_cap]; nodes closer than `end_inset` to the end (in the
    /// independent variable) are excluded so widest stencils stay covered.
    pub fn end_band(
        &self,
        left: bool,
        lo_cap: f64,
        hi_cap: f64,
        end_inset: f64,
    ) -> Option<(f64, f64)> {
        let n = self.nodes.len();
        let t_end = if left { self.nodes[0] } else { self.nodes[n - 1] };
        let idx: Vec<usize> = if left { (0..n).collect() } else { (0..n).rev().collect() };
        let mut start = None;
        let mut stop = None;
        for &i in &idx {
            let a = self.values[i].abs();
            if (self.nodes[i] - t_end).abs() < end_inset {
                continue;
            }
            if start.is_none() {
                if a <= hi_cap {
                    if a < lo_cap {
                        return None;
                    }
                    start = Some(i);
                    stop = Some(i);
                }
            } else if a >= lo_cap && a <= hi_cap {
                stop = Some(i);
            } else {
                break;
            }
        }
        match (start, stop) {
            (Some(a), Some(b)) if a != b => {
                let (lo, hi) = if left { (a, b) } else { (b, a) };
                Some((self.nodes[lo.min(hi)], self.nodes[lo.max(hi)]))
            }
            _ => None,
        }
    }

    /// Longest contiguous node run satisfying `pred(t, y)`.
    pub fn window_where(&self, pred: impl Fn(f64, f64) -> bool) -> Option<(f64, f64)> {
        let mut best: Option<(usize, usize)> = None;
        let mut run_start: Option<usize> = None;
        for (i, (&t, &y)) in self.nodes.iter().zip(&self.values).enumerate() {
            if pred(t, y) {
                if run_start.is_none() {
                    run_start = Some(i);
                }
                let s = run_start.unwrap();
                let better = match best {
                    None => true,
                    Some((a, b)) => self.nodes[i] - self.nodes[s] > self.nodes[b] - self.nodes[a],
                };
                if better {
                    best = Some((s, i));
                }
            } else {
                run_start = None;
            }
        }
        best.map(|(a, b)| (self.nodes[a], self.nodes[b]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear_table() -> ProfileTable {
        // y(t) = 2 - t on [0, 1]: slopes -1, curvature 0
        let nodes = vec![0.0, 0.5, 1.0];
        let values = vec![2.0, 1.5, 1.0];
        let slopes = vec![-1.0, -1.0, -1.0];
        let curv = vec![0.0, 0.0, 0.0];
        ProfileTable::from_nodes(
            OdeSpec::CartesianF { s: 0.0 },
            nodes,
            values,
            slopes,
            curv,
            0,
            StopReason::SpanCap,
            StopReason::SpanCap,
        )
        .unwrap()
    }

    #[test]
    fn quintic_reproduces_polynomial_data() {
        let t = linear_table();
        let (y, l) = t.ratio_and_log(0.25).unwrap();
        assert!((y - 1.75).abs() < 1e-15);
        // L(0.25) = int_0^0.25 (2 - t) = 0.5 - 0.03125/...
        let want = 2.0 * 0.25 - 0.25 * 0.25 / 2.0;
        assert!((l - want).abs() < 1e-15);
    }

    #[test]
    fn inverse_integral_of_constant() {
        let nodes = vec![0.0, 1.0];
        let t = ProfileTable::from_nodes(
            OdeSpec::CartesianF { s: 0.0 },
            nodes,
            vec![2.0, 2.0],
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            0,
            StopReason::SpanCap,
            StopReason::SpanCap,
        )
        .unwrap();
        let v = t.integral_of_inverse(1.0).unwrap();
        assert!((v - 0.5).abs() < 1e-14);
        let v = t.integral_of_inverse(0.0).unwrap();
        assert!(v.abs() < 1e-15);
    }

    #[test]
    fn out_of_range_rejected() {
        let t = linear_table();
        assert!(t.ratio(1.5).is_err());
        assert!(t.ratio(-0.1).is_err());
    }
}
