//! Spherical measures: exact on S^1 and S^2, exact boundary areas and
//! quadrature volumes on S^3, Monte Carlo in any dimension, and Crofton
//! great-circle estimators.
//!
//! The canonical unit is the fraction of the whole sphere; natural units
//! (radians, steradians) are derived with [`total_measure`].

mod crofton;
mod exact;
mod mc;
mod quadrature;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use crofton::{
    crofton_hit_probability, crofton_polarity_check, random_plane, ConeConstraints, CroftonEstimate, PolarityReport,
};
pub use exact::{
    boundary_area_s3, plane_angle, polygon_of_cone, solid_angle_exact, solid_angle_exact_3d, spherical_polygon_area,
    spherical_polygon_perimeter,
};
pub use mc::{paired_difference_mc, solid_angle_mc, solid_angles_mc, DirectionSet, PairedDifference};
pub use quadrature::volume_s3_quadrature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    MonteCarlo,
    Crofton,
    Quadrature,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::MonteCarlo => "monte-carlo",
            Method::Crofton => "crofton",
            Method::Quadrature => "quadrature",
        }
    }

    /// Deterministic methods carry no sampling error.
    pub fn is_deterministic(self) -> bool {
        matches!(self, Method::Exact | Method::Quadrature)
    }
}

/// A measure as a fraction of the total sphere measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureEstimate {
    #[serde(rename = "value")]
    pub normalized: f64,
    pub stderr: f64,
    pub method: Method,
    pub samples: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

impl MeasureEstimate {
    pub fn exact(normalized: f64) -> Self {
        Self { normalized, stderr: 0.0, method: Method::Exact, samples: 0, seed: None }
    }

    /// Binomial estimate from `hits` out of `samples`.
    pub fn from_counts(hits: u64, samples: u64, method: Method, seed: u64) -> Self {
        let p = hits as f64 / samples as f64;
        let stderr = (p * (1.0 - p) / samples as f64).sqrt();
        Self { normalized: p, stderr, method, samples, seed: Some(seed) }
    }

    /// Value in natural units on S^{sphere_dim}.
    pub fn natural(&self, sphere_dim: usize) -> Result<f64> {
        Ok(self.normalized * total_measure(sphere_dim)?)
    }

    /// Whether `target` (normalized) lies within `k` standard errors; exact
    /// estimates use an absolute tolerance of `1e-12`.
    pub fn agrees_with(&self, target: f64, k: f64) -> bool {
        let tol = if self.method.is_deterministic() { 1e-12 } else { k * self.stderr };
        (self.normalized - target).abs() <= tol
    }
}

/// Total measure of S^{sphere_dim}: 2π, 4π, 2π².
pub fn total_measure(sphere_dim: usize) -> Result<f64> {
    match sphere_dim {
        1 => Ok(2.0 * PI),
        2 => Ok(4.0 * PI),
        3 => Ok(2.0 * PI * PI),
        d => Err(Error::BadDim(d)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totals() {
        assert_eq!(total_measure(1).unwrap(), 2.0 * PI);
        assert_eq!(total_measure(2).unwrap(), 4.0 * PI);
        assert_eq!(total_measure(3).unwrap(), 2.0 * PI * PI);
        assert!(matches!(total_measure(4), Err(Error::BadDim(4))));
    }

    #[test]
    fn estimate_serializes_with_value_key() {
        let e = MeasureEstimate::from_counts(25, 100, Method::MonteCarlo, 3);
        let j = serde_json::to_value(e).unwrap();
        assert_eq!(j["value"], 0.25);
        assert_eq!(j["method"], "monte-carlo");
        assert_eq!(j["seed"], 3);
    }
}
