//! Symmetric bilinear forms anchored at a point of the punctured space.

use crate::error::{Error, Result};
use serde::Serialize;

/// A point of `R^n \ {O}`. The origin is rejected at construction, so every
/// downstream formula may divide by `|x|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Point {
    coords: Vec<f64>,
    #[serde(skip)]
    norm: f64,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidPoint(format!(
                "need at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinate".into()));
        }
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm <= 0.0 || !norm.is_finite() {
            return Err(Error::InvalidPoint(
                "the origin is not part of the manifold".into(),
            ));
        }
        Ok(Self { coords, norm })
    }

    /// Point `radius * direction / |direction|`.
    pub fn along(direction: &[f64], radius: f64) -> Result<Self> {
        let len = direction.iter().map(|c| c * c).sum::<f64>().sqrt();
        if len <= 0.0 || !(radius > 0.0) {
            return Err(Error::InvalidPoint(
                "direction must be non-zero and radius positive".into(),
            ));
        }
        Self::new(direction.iter().map(|c| c * radius / len).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Euclidean norm `|x|`.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Unit vector `x / |x|`.
    pub fn unit(&self) -> Vec<f64> {
        self.coords.iter().map(|c| c / self.norm).collect()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.coords.iter().map(|c| c * factor).collect())
    }
}

/// Symmetric `n x n` matrix of Euclidean components of a (0,2)-tensor at a
/// base point. Only the lower triangle is stored, so symmetry is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTensor {
    base: Point,
    lower: Vec<f64>,
}

#[inline]
fn tri_index(i: usize, j: usize) -> usize {
    let (r, c) = if i >= j { (i, j) } else { (j, i) };
    r * (r + 1) / 2 + c
}

impl SymTensor {
    pub fn zeros(base: Point) -> Self {
        let n = base.dim();
        Self {
            base,
            lower: vec![0.0; n * (n + 1) / 2],
        }
    }

    /// Builds the tensor from `entry(i, j)` evaluated on the lower triangle.
    pub fn from_fn(base: Point, mut entry: impl FnMut(usize, usize) -> f64) -> Self {
        let n = base.dim();
        let mut lower = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in 0..=i {
                lower.push(entry(i, j));
            }
        }
        Self { base, lower }
    }

    pub fn identity(base: Point, scale: f64) -> Self {
        Self::from_fn(base, |i, j| if i == j { scale } else { 0.0 })
    }

    /// Builds from a full row-major matrix, symmetrizing `(A + A^T)/2`.
    pub fn from_rows(base: Point, rows: &[Vec<f64>]) -> Result<Self> {
        let n = base.dim();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument(format!("expected a {n}x{n} matrix")));
        }
        Ok(Self::from_fn(base, |i, j| 0.5 * (rows[i][j] + rows[j][i])))
    }

    /// `a * delta + b * v v^T` for a vector `v`.
    pub fn identity_plus_outer(base: Point, a: f64, b: f64, v: &[f64]) -> Self {
        Self::from_fn(base, |i, j| {
            let d = if i == j { a } else { 0.0 };
            d + b * v[i] * v[j]
        })
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.lower[tri_index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let k = tri_index(i, j);
        self.lower[k] = value;
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            base: self.base.clone(),
            lower: self.lower.iter().map(|v| v * factor).collect(),
        }
    }

    /// `self + factor * other`. Panics if the dimensions differ.
    pub fn add_scaled(&self, other: &SymTensor, factor: f64) -> Self {
        assert_eq!(self.dim(), other.dim(), "tensor dimensions differ");
        Self {
            base: self.base.clone(),
            lower: self
                .lower
                .iter()
                .zip(&other.lower)
                .map(|(a, b)| a + factor * b)
                .collect(),
        }
    }

    /// Evaluates the bilinear form on two vectors, `T_ij v^i w^j`.
    pub fn apply(&self, v: &[f64], w: &[f64]) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += self.get(i, j) * v[i] * w[j];
            }
        }
        acc
    }

    /// Matrix-vector product with the component matrix.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn max_abs_diff(&self, other: &SymTensor) -> f64 {
        self.lower
            .iter()
            .zip(&other.lower)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.lower.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// Sum of squared entries over the full matrix.
    pub fn frobenius_sq(&self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += self.get(i, j).powi(2);
            }
        }
        acc
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
