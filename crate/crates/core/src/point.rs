//! Points of `R^d` stored as owned coordinate vectors.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in `R^d`. The dimension is carried by the coordinate count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    /// Builds a point, rejecting non-finite coordinates.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite coordinate {bad}"
            )));
        }
        Ok(Point { coords })
    }

    pub fn origin(dim: usize) -> Self {
        Point {
            coords: vec![0.0; dim],
        }
    }

    /// The `axis`-th canonical basis vector scaled by `length`.
    pub fn on_axis(dim: usize, axis: usize, length: f64) -> Self {
        let mut coords = vec![0.0; dim];
        coords[axis] = length;
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Returns `self + scale * dir`.
    pub fn offset(&self, dir: &Point, scale: f64) -> Point {
        Point {
            coords: self
                .coords
                .iter()
                .zip(&dir.coords)
                .map(|(a, b)| a + scale * b)
                .collect(),
        }
    }

    pub fn to_dvector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.coords)
    }

    pub fn from_dvector(v: &DVector<f64>) -> Point {
        Point {
            coords: v.iter().copied().collect(),
        }
    }
}

impl From<Vec<f64>> for Point {
    /// Unchecked conversion; prefer [`Point::new`] for external data.
    fn from(coords: Vec<f64>) -> Self {
        Point { coords }
    }
}

impl<const N: usize> From<[f64; N]> for Point {
    fn from(coords: [f64; N]) -> Self {
        Point {
            coords: coords.to_vec(),
        }
    }
}

impl Index<usize> for Point {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

impl Sub for &Point {
    type Output = Point;

    fn sub(self, rhs: &Point) -> Point {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Add for &Point {
    type Output = Point;

    fn add(self, rhs: &Point) -> Point {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point {
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Mul<f64> for &Point {
    type Output = Point;

    fn mul(self, s: f64) -> Point {
        Point {
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Checks that every point has dimension `dim`.
pub(crate) fn check_dims(points: &[Point], dim: usize) -> Result<()> {
    match points.iter().find(|p| p.dim() != dim) {
        Some(p) => Err(Error::DimensionMismatch {
            expected: dim,
            found: p.dim(),
        }),
        None => Ok(()),
    }
}

/// Largest pairwise distance.
pub fn diameter(points: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            best = best.max(p.distance(q));
        }
    }
    best
}
