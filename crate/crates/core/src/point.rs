use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A point of R^d. Coordinates are always finite; construction rejects
/// NaN and infinities so that downstream arithmetic never has to check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::MalformedSpec("point must have dimension >= 1".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::MalformedSpec("point has non-finite coordinate".into()));
        }
        Ok(Point(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Point(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.sub(other).norm()
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: f64) -> Point {
        Point(self.0.iter().map(|a| a * s).collect())
    }

    /// self + s * other
    pub fn axpy(&self, s: f64, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + s * b).collect())
    }

    pub fn neg(&self) -> Point {
        self.scale(-1.0)
    }

    pub fn lerp(&self, other: &Point, t: f64) -> Point {
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + t * (b - a))
                .collect(),
        )
    }
}

impl From<Point> for nalgebra::DVector<f64> {
    fn from(p: Point) -> Self {
        nalgebra::DVector::from_vec(p.0)
    }
}

impl Point {
    pub fn as_dvector(&self) -> nalgebra::DVector<f64> {
        nalgebra::DVector::from_column_slice(&self.0)
    }

    pub fn from_dvector(v: &nalgebra::DVector<f64>) -> Point {
        Point(v.iter().copied().collect())
    }
}
