//! Dense square matrices over ℝ, ℂ or ℍ acting on the right vector space `𝔽ⁿ⁺¹`.

use std::ops::Mul;

use crate::scalars::{FieldTag, Scalar};

/// Row-major square matrix with [`Scalar`] entries.
#[derive(Debug, Clone, PartialEq)]
pub struct FMatrix {
    size: usize,
    field: FieldTag,
    data: Vec<Scalar>,
}

impl FMatrix {
    pub fn zeros(field: FieldTag, size: usize) -> Self {
        FMatrix {
            size,
            field,
            data: vec![Scalar::zero(field); size * size],
        }
    }

    pub fn identity(field: FieldTag, size: usize) -> Self {
        let mut m = FMatrix::zeros(field, size);
        for i in 0..size {
            m.set(i, i, Scalar::one(field));
        }
        m
    }

    pub fn from_fn(
        field: FieldTag,
        size: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut data = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                data.push(f(i, j));
            }
        }
        FMatrix { size, field, data }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.size + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Scalar) {
        self.data[i * self.size + j] = z;
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> FMatrix {
        FMatrix::from_fn(self.field, self.size, |i, j| self.get(j, i).conj())
    }

    /// `A z` for a column vector `z`.
    pub fn apply(&self, z: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(z.len(), self.size, "vector length mismatch");
        (0..self.size)
            .map(|i| {
                let mut acc = Scalar::zero(self.field);
                for (j, zj) in z.iter().enumerate() {
                    acc += self.get(i, j) * *zj;
                }
                acc
            })
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.size).map(|i| self.get(i, j)).collect()
    }

    /// Largest component-wise difference.
    pub fn max_diff(&self, other: &FMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.max_diff(b))
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.abs()).fold(0.0, f64::max)
    }
}

impl Mul for &FMatrix {
    type Output = FMatrix;

    fn mul(self, rhs: &FMatrix) -> FMatrix {
        assert_eq!(self.size, rhs.size, "matrix size mismatch");
        let n = self.size;
        FMatrix::from_fn(self.field, n, |i, j| {
            let mut acc = Scalar::zero(self.field);
            for k in 0..n {
                acc += self.get(i, k) * rhs.get(k, j);
            }
            acc
        })
    }
}

/// Standard inner product `Σ z̄ᵢ wᵢ`.
pub fn inner(z: &[Scalar], w: &[Scalar]) -> Scalar {
    let field = z[0].field;
    z.iter()
        .zip(w)
        .fold(Scalar::zero(field), |acc, (a, b)| acc + a.conj() * *b)
}

pub fn norm_sqr(z: &[Scalar]) -> f64 {
    z.iter().map(Scalar::norm_sqr).sum()
}

/// Right scalar multiplication `z λ`.
pub fn scale_right(z: &[Scalar], lambda: Scalar) -> Vec<Scalar> {
    z.iter().map(|zi| *zi * lambda).collect()
}

/// Flattens to real coordinates, `field.dim()` per entry.
pub fn to_real(z: &[Scalar]) -> Vec<f64> {
    z.iter().flat_map(|zi| zi.field_components()).collect()
}

pub fn from_real(field: FieldTag, r: &[f64]) -> Vec<Scalar> {
    r.chunks(field.dim())
        .map(|c| Scalar::from_components(field, c))
        .collect()
}
