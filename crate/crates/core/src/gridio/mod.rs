//! Grid sampling and bit-stable export.
//!
//! Grids are rectangular lattices over the native coordinates of a solution;
//! lattice points outside the validity domain carry a NaN sentinel so the
//! exported shape stays rectangular. CSV output renders every float as its
//! shortest round-trip decimal, making repeated exports byte-identical; the
//! JSON sidecar carries the metadata and a SHA-256 digest of the CSV bytes.

mod coords;

pub use coords::{from_cartesian, to_cartesian};

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::solutions::{Built, CoordSystem};

/// One grid axis: `count` points from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn new(min: f64, max: f64, count: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || min >= max {
            return Err(Error::Spec(format!("bad axis range [{min}, {max}]")));
        }
        if count < 2 {
            return Err(Error::Spec(format!("axis count {count} must be >= 2")));
        }
        Ok(Self { min, max, count })
    }

    pub fn coord(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.max
        } else {
            self.min + (self.max - self.min) * (i as f64) / ((self.count - 1) as f64)
        }
    }
}

/// Metadata exported verbatim in the JSON sidecar.
#[derive(Debug, Clone, Serialize)]
pub struct GridMeta {
    pub case: String,
    pub system: String,
    pub params: Vec<ParamValue>,
    pub c: f64,
    pub anchors: Vec<ParamValue>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamValue {
    pub name: String,
    pub value: f64,
}

/// A sampled field: row-major values, last axis fastest.
#[derive(Debug, Clone)]
pub struct Grid {
    pub system: CoordSystem,
    pub axes: Vec<AxisSpec>,
    pub values: Vec<f64>,
    pub meta: GridMeta,
}

/// Evaluate `sol` on the lattice; out-of-domain points become NaN.
pub fn sample_grid(sol: &Built, axes: &[AxisSpec]) -> Result<Grid> {
    let dim = sol.system().dim();
    if axes.len() != dim {
        return Err(Error::Spec(format!("{} axes for a {dim}-coordinate system", axes.len())));
    }
    let total: usize = axes.iter().map(|a| a.count).product();
    let mut values = Vec::with_capacity(total);
    let mut point = vec![0.0f64; dim];
    let mut any_finite = false;
    for flat in 0..total {
        let mut rem = flat;
        for (d, ax) in axes.iter().enumerate().rev() {
            point[d] = ax.coord(rem % ax.count);
            rem /= ax.count;
        }
        let v = match sol.evaluate(&point) {
            Ok(v) if v.is_finite() => {
                any_finite = true;
                v
            }
            _ => f64::NAN,
        };
        values.push(v);
    }
    if !any_finite {
        return Err(Error::EmptyDomain);
    }
    let m = sol.meta();
    Ok(Grid {
        system: sol.system(),
        axes: axes.to_vec(),
        values,
        meta: GridMeta {
            case: m.case,
            system: sol.system().label(),
            params: m
                .params
                .into_iter()
                .map(|(name, value)| ParamValue { name, value })
                .collect(),
            c: m.c,
            anchors: m
                .anchors
                .into_iter()
                .map(|(name, value)| ParamValue { name, value })
                .collect(),
            notes: m.notes,
        },
    })
}

/// Shortest round-trip decimal; NaN renders as `nan`.
pub fn fmt_value(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v}")
    }
}

/// CSV payload: header of coordinate names then `u`, one row per lattice
/// point in sampling order, LF line endings.
pub fn export_csv(grid: &Grid) -> Vec<u8> {
    let names = grid.system.coord_names();
    let mut out = Vec::with_capacity(grid.values.len() * 24);
    for n in &names {
        out.extend_from_slice(n.as_bytes());
        out.push(b',');
    }
    out.extend_from_slice(b"u\n");
    let dim = grid.axes.len();
    let mut idx = vec![0usize; dim];
    for &v in &grid.values {
        for (d, ax) in grid.axes.iter().enumerate() {
            let _ = write!(out, "{},", fmt_value(ax.coord(idx[d])));
        }
        let _ = write!(out, "{}\n", fmt_value(v));
        // advance the odometer, last axis fastest
        for d in (0..dim).rev() {
            idx[d] += 1;
            if idx[d] < grid.axes[d].count {
                break;
            }
            idx[d] = 0;
        }
    }
    out
}

#[derive(Serialize)]
struct Sidecar<'a> {
    meta: &'a GridMeta,
    axes: &'a [AxisSpec],
    values_sha256: String,
}

/// JSON sidecar: metadata plus a SHA-256 digest of the CSV payload.
pub fn export_json_meta(grid: &Grid, csv_bytes: &[u8]) -> Vec<u8> {
    let mut hasher = Sha256::new();
    hasher.update(csv_bytes);
    let digest = hasher.finalize();
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    let side = Sidecar { meta: &grid.meta, axes: &grid.axes, values_sha256: hex };
    let mut bytes = serde_json::to_vec_pretty(&side).expect("sidecar serialization");
    bytes.push(b'\n');
    bytes
}

/// File-name stem `<case>_<params>_<N0xN1...>`.
pub fn grid_stem(grid: &Grid) -> String {
    let mut stem = grid.meta.case.clone();
    for p in &grid.meta.params {
        stem.push('_');
        stem.push_str(&p.name);
        stem.push_str(&fmt_value(p.value));
    }
    stem.push('_');
    let counts: Vec<String> = grid.axes.iter().map(|a| a.count.to_string()).collect();
    stem.push_str(&counts.join("x"));
    stem
}

/// Write the CSV and JSON pair into `dir`, returning the two paths.
pub fn write_pair(grid: &Grid, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(dir)?;
    let stem = grid_stem(grid);
    let csv = export_csv(grid);
    let json = export_json_meta(grid, &csv);
    let csv_path = dir.join(format!("{stem}.csv"));
    let json_path = dir.join(format!("{stem}.json"));
    std::fs::write(&csv_path, &csv)?;
    std::fs::write(&json_path, &json)?;
    Ok((csv_path, json_path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solutions::{build_case, BuildOptions, BuildParams};

    fn case_i() -> Built {
        build_case("thm1.i", &BuildParams::default(), &BuildOptions::default()).unwrap()
    }

    #[test]
    fn axis_validation() {
        assert!(AxisSpec::new(1.0, 1.0, 4).is_err());
        assert!(AxisSpec::new(0.0, 1.0, 1).is_err());
        assert!(AxisSpec::new(0.0, 1.0, 2).is_ok());
    }

    #[test]
    fn two_by_two_has_five_lines() {
        let axes = [AxisSpec::new(1.0, 2.0, 2).unwrap(), AxisSpec::new(0.0, 1.0, 2).unwrap()];
        let grid = sample_grid(&case_i(), &axes).unwrap();
        let csv = export_csv(&grid);
        let text = String::from_utf8(csv).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(text.starts_with("r,theta,u\n"));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn export_is_deterministic() {
        let axes = [AxisSpec::new(1.0, 2.0, 7).unwrap(), AxisSpec::new(-0.5, 0.5, 5).unwrap()];
        let grid = sample_grid(&case_i(), &axes).unwrap();
        let a = export_csv(&grid);
        let b = export_csv(&grid);
        assert_eq!(a, b);
        assert_eq!(export_json_meta(&grid, &a), export_json_meta(&grid, &b));
    }

    #[test]
    fn aronsson_grid_antisymmetric() {
        let sol = build_case("aronsson", &BuildParams::default(), &BuildOptions::default())
            .unwrap();
        let ax = AxisSpec::new(-1.0, 1.0, 11).unwrap();
        let grid = sample_grid(&sol, &[ax, ax]).unwrap();
        // u(x, y) = -u(y, x)
        for i in 0..11 {
            for j in 0..11 {
                let a = grid.values[i * 11 + j];
                let b = grid.values[j * 11 + i];
                assert_eq!(a, -b, "({i}, {j})");
            }
        }
    }

    #[test]
    fn nan_sentinel_outside_domain() {
        // radial axis extending into r < 0 region is impossible per axis
        // validation, but a tabulated theta-interval is finite
        let sol = build_case(
            "thm1.ii",
            &BuildParams { a: vec![4.0 / 3.0], ..Default::default() },
            &BuildOptions::default(),
        )
        .unwrap();
        let axes = [
            AxisSpec::new(0.5, 1.0, 3).unwrap(),
            AxisSpec::new(-2.0, 2.0, 9).unwrap(), // far beyond (-pi/4, pi/4)
        ];
        let grid = sample_grid(&sol, &axes).unwrap();
        assert!(grid.values.iter().any(|v| v.is_nan()));
        assert!(grid.values.iter().any(|v| v.is_finite()));
        let text = String::from_utf8(export_csv(&grid)).unwrap();
        assert!(text.contains(",nan\n"));
    }

    #[test]
    fn constant_solution_grid() {
        let sol = build_case(
            "thm3",
            &BuildParams { a: vec![0.0, 0.0], ..Default::default() },
            &BuildOptions::default(),
        )
        .unwrap();
        // degenerate branch: u = |x3 + c| times constants; constant along x1
        let axes = [
            AxisSpec::new(0.0, 1.0, 3).unwrap(),
            AxisSpec::new(0.0, 1.0, 3).unwrap(),
            AxisSpec::new(2.0, 3.0, 2).unwrap(),
        ];
        let grid = sample_grid(&sol, &axes).unwrap();
        // values depend only on the x3 coordinate
        for i in 0..9 {
            assert_eq!(grid.values[2 * i], grid.values[0]);
            assert_eq!(grid.values[2 * i + 1], grid.values[1]);
        }
    }
}
