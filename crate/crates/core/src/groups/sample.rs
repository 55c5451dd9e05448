//! Random elements of the groups and random points of the disk and sphere.

use rand::Rng;

use super::matrix::{inner, norm_sqr, scale_right, FMatrix};
use super::{BoundaryPoint, DiskPoint, GroupElement, GroupParams};
use crate::heisenberg::random_heis;
use crate::scalars::{random_scalar, FieldTag, Scalar};

fn random_unit_scalar<R: Rng + ?Sized>(field: FieldTag, rng: &mut R) -> Scalar {
    let z = random_scalar(field, rng);
    z.scale(1.0 / z.abs())
}

/// A random `size × size` unitary over 𝔽 by Gram–Schmidt on Gaussian columns.
/// Over ℝ the determinant is forced to `+1`.
pub fn random_unitary<R: Rng + ?Sized>(field: FieldTag, size: usize, rng: &mut R) -> FMatrix {
    let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(size);
    while cols.len() < size {
        let mut v: Vec<Scalar> = (0..size).map(|_| random_scalar(field, rng)).collect();
        for u in &cols {
            let c = inner(u, &v);
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= *ui * c;
            }
        }
        let len = norm_sqr(&v).sqrt();
        if len < 1e-6 {
            continue;
        }
        cols.push(scale_right(&v, Scalar::real(field, 1.0 / len)));
    }
    let mut q = FMatrix::from_fn(field, size, |i, j| cols[j][i]);
    if field == FieldTag::Real && size > 0 {
        let real = nalgebra::DMatrix::from_fn(size, size, |i, j| q.get(i, j).re());
        if real.determinant() < 0.0 {
            for i in 0..size {
                q.set(i, 0, -q.get(i, 0));
            }
        }
    }
    q
}

/// A random element `diag(λ, Q)` of `K`. Over ℝ, `λ = 1` and `det Q = 1`.
pub fn random_k<R: Rng + ?Sized>(params: &GroupParams, rng: &mut R) -> GroupElement {
    let f = params.field;
    let n = params.n;
    let q = random_unitary(f, n, rng);
    let lambda = if f == FieldTag::Real {
        Scalar::one(f)
    } else {
        random_unit_scalar(f, rng)
    };
    let mut m = FMatrix::identity(f, n + 1);
    m.set(0, 0, lambda);
    for i in 0..n {
        for j in 0..n {
            m.set(i + 1, j + 1, q.get(i, j));
        }
    }
    GroupElement {
        matrix: m,
        params: *params,
    }
}

/// A random element `diag(λ, Q′, λ)` of `M`, the centralizer of `A` in `K`.
pub fn random_m<R: Rng + ?Sized>(params: &GroupParams, rng: &mut R) -> GroupElement {
    let f = params.field;
    let n = params.n;
    let lambda = if f == FieldTag::Real {
        Scalar::one(f)
    } else {
        random_unit_scalar(f, rng)
    };
    let mut m = FMatrix::identity(f, n + 1);
    m.set(0, 0, lambda);
    m.set(n, n, lambda);
    if n > 1 {
        let q = random_unitary(f, n - 1, rng);
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                m.set(i + 1, j + 1, q.get(i, j));
            }
        }
    }
    GroupElement {
        matrix: m,
        params: *params,
    }
}

/// A random `m · a(t) · n(x, y) ∈ P` with `|t| ≤ scale` and `(x, y)` of size `scale`.
pub fn random_p<R: Rng + ?Sized>(params: &GroupParams, scale: f64, rng: &mut R) -> GroupElement {
    let m = random_m(params, rng);
    let t = rng.gen_range(-scale..=scale);
    let h = random_heis(params, scale, rng);
    let n = GroupElement::n(params, &h).expect("sampled element of V is valid");
    m.mul(&GroupElement::a(params, t)).mul(&n)
}

/// A random `k a(t) k′` with `0 ≤ t ≤ max_t`.
pub fn random_element<R: Rng + ?Sized>(
    params: &GroupParams,
    max_t: f64,
    rng: &mut R,
) -> GroupElement {
    let t = rng.gen_range(0.0..=max_t);
    random_k(params, rng)
        .mul(&GroupElement::a(params, t))
        .mul(&random_k(params, rng))
}

/// A random disk point at hyperbolic distance at most `max_dist` from the origin.
pub fn random_disk_point<R: Rng + ?Sized>(
    params: &GroupParams,
    max_dist: f64,
    rng: &mut R,
) -> DiskPoint {
    let t: f64 = rng.gen_range(0.0..max_dist);
    let u = random_boundary_point(params, rng);
    DiskPoint {
        z: u.z.into_iter().map(|zi| zi.scale(t.tanh())).collect(),
    }
}

/// A point of `S^{dn−1}` distributed by the round measure.
pub fn random_boundary_point<R: Rng + ?Sized>(params: &GroupParams, rng: &mut R) -> BoundaryPoint {
    loop {
        let z: Vec<Scalar> = (0..params.n)
            .map(|_| random_scalar(params.field, rng))
            .collect();
        if norm_sqr(&z) > 1e-12 {
            return BoundaryPoint::normalized(z);
        }
    }
}
