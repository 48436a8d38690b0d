//! Coordinate transforms. α is the polar angle measured from the +z axis,
//! θ the azimuth; polar 2D uses (r, θ).

use crate::error::{Error, Result};
use crate::solutions::CoordSystem;

pub fn to_cartesian(system: CoordSystem, p: &[f64]) -> Result<Vec<f64>> {
    if p.len() != system.dim() {
        return Err(Error::Spec(format!(
            "point has {} coordinates, expected {}",
            p.len(),
            system.dim()
        )));
    }
    match system {
        CoordSystem::Polar2D => {
            let (r, th) = (p[0], p[1]);
            Ok(vec![r * th.cos(), r * th.sin()])
        }
        CoordSystem::Spherical3D => {
            let (r, th, al) = (p[0], p[1], p[2]);
            let s = al.sin();
            Ok(vec![r * s * th.cos(), r * s * th.sin(), r * al.cos()])
        }
        CoordSystem::CartesianNd(_) => Ok(p.to_vec()),
    }
}

pub fn from_cartesian(system: CoordSystem, p: &[f64]) -> Result<Vec<f64>> {
    match system {
        CoordSystem::Polar2D => {
            if p.len() != 2 {
                return Err(Error::Spec("need (x, y)".into()));
            }
            let r = p[0].hypot(p[1]);
            if r == 0.0 {
                return Err(Error::Domain("angle undefined at the origin".into()));
            }
            Ok(vec![r, p[1].atan2(p[0])])
        }
        CoordSystem::Spherical3D => {
            if p.len() != 3 {
                return Err(Error::Spec("need (x, y, z)".into()));
            }
            let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            if r == 0.0 {
                return Err(Error::Domain("angles undefined at the origin".into()));
            }
            let alpha = (p[2] / r).clamp(-1.0, 1.0).acos();
            Ok(vec![r, p[1].atan2(p[0]), alpha])
        }
        CoordSystem::CartesianNd(n) => {
            if p.len() != n {
                return Err(Error::Spec(format!("need {n} coordinates")));
            }
            Ok(p.to_vec())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn polar_quarter_turn() {
        let xy = to_cartesian(CoordSystem::Polar2D, &[1.0, FRAC_PI_2]).unwrap();
        assert!(xy[0].abs() <= 1e-12 && (xy[1] - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn spherical_equator() {
        let xyz = to_cartesian(CoordSystem::Spherical3D, &[1.0, 0.0, FRAC_PI_2]).unwrap();
        assert!((xyz[0] - 1.0).abs() <= 1e-12 && xyz[1].abs() <= 1e-12 && xyz[2].abs() <= 1e-12);
    }

    #[test]
    fn origin_rejected() {
        assert!(from_cartesian(CoordSystem::Polar2D, &[0.0, 0.0]).is_err());
        assert!(from_cartesian(CoordSystem::Spherical3D, &[0.0, 0.0, 0.0]).is_err());
    }
}
