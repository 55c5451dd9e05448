//! The matrix groups `O(q)` preserving `q(z, w) = −z̄₀w₀ + Σⱼ z̄ⱼwⱼ` on the
//! right vector space `𝔽ⁿ⁺¹`, their distinguished elements, and the actions
//! on the unit disk `Z = G/K` and on the boundary sphere `G/P = S^{dn−1}`.
//!
//! Coordinates are indexed `0, 1, …, n`. The middle block `1..n` has size
//! `n − 1`. A disk or sphere point `z ∈ 𝔽ⁿ` is identified with the line
//! through `[1, z₁, …, zₙ]ᵀ`, and `g·z = (c + d z)(a + b z)⁻¹`.

pub mod matrix;
mod sample;

pub use sample::{
    random_boundary_point, random_disk_point, random_element, random_k, random_m, random_p,
    random_unitary,
};

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heisenberg::HeisElement;
use crate::scalars::{FieldTag, Scalar};
use matrix::{inner, norm_sqr, scale_right, FMatrix};

/// Global tolerance for membership in `O(q)`.
pub const MEMBERSHIP_TOL: f64 = 1e-10;

/// Which rank-one group, and its size parameter `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupParams {
    pub field: FieldTag,
    pub n: usize,
}

impl GroupParams {
    /// Validates `n` against the group family (`n ≥ 2` for SO, `n ≥ 1` otherwise).
    pub fn new(field: FieldTag, n: usize) -> Result<Self> {
        let min = if field == FieldTag::Real { 2 } else { 1 };
        if n < min {
            return Err(Error::Usage(format!(
                "{} needs n ≥ {min}, got {n}",
                group_name(field)
            )));
        }
        Ok(GroupParams { field, n })
    }

    pub fn so(n: usize) -> Self {
        GroupParams::new(FieldTag::Real, n).expect("invalid SO parameters")
    }

    pub fn su(n: usize) -> Self {
        GroupParams::new(FieldTag::Complex, n).expect("invalid SU parameters")
    }

    pub fn sp(n: usize) -> Self {
        GroupParams::new(FieldTag::Quaternion, n).expect("invalid Sp parameters")
    }

    pub fn d(&self) -> usize {
        self.field.dim()
    }

    /// Homogeneous dimension `r = d(n+1) − 2`.
    pub fn r(&self) -> usize {
        self.d() * (self.n + 1) - 2
    }

    /// Dimension of the boundary sphere, `dn − 1`.
    pub fn sphere_dim(&self) -> usize {
        self.d() * self.n - 1
    }

    /// Real dimension of the first stratum `𝔬 = 𝔽ⁿ⁻¹`.
    pub fn horizontal_dim(&self) -> usize {
        self.d() * (self.n - 1)
    }

    /// Real dimension of `V`.
    pub fn heis_dim(&self) -> usize {
        self.horizontal_dim() + self.field.imag_dim()
    }

    pub fn label(&self) -> String {
        format!("{}({},1)", group_name(self.field), self.n)
    }
}

fn group_name(field: FieldTag) -> &'static str {
    match field {
        FieldTag::Real => "SO0",
        FieldTag::Complex => "SU",
        FieldTag::Quaternion => "Sp",
    }
}

/// An `(n+1)×(n+1)` matrix meant to lie in `O(q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub matrix: FMatrix,
    pub params: GroupParams,
}

/// A point of the open disk `Z = G/K ⊂ 𝔽ⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskPoint {
    pub z: Vec<Scalar>,
}

/// A point of the boundary sphere `S^{dn−1} ⊂ 𝔽ⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPoint {
    pub z: Vec<Scalar>,
}

impl DiskPoint {
    pub fn new(z: Vec<Scalar>) -> Result<Self> {
        let r2 = norm_sqr(&z);
        if !(r2 < 1.0) {
            return Err(Error::Domain(format!("disk point has Σ|zⱼ|² = {r2} ≥ 1")));
        }
        Ok(DiskPoint { z })
    }

    pub fn origin(params: &GroupParams) -> Self {
        DiskPoint {
            z: vec![Scalar::zero(params.field); params.n],
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.z)
    }

    /// The lift `[1, z₁, …, zₙ]ᵀ`.
    pub fn lift(&self) -> Vec<Scalar> {
        lift(&self.z)
    }

    pub fn max_diff(&self, other: &DiskPoint) -> f64 {
        max_diff(&self.z, &other.z)
    }
}

impl BoundaryPoint {
    pub fn new(z: Vec<Scalar>) -> Result<Self> {
        let r2 = norm_sqr(&z);
        if (r2 - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "boundary point has Σ|zⱼ|² = {r2} ≠ 1"
            )));
        }
        Ok(BoundaryPoint { z })
    }

    /// Projects an arbitrary nonzero vector to the sphere.
    pub fn normalized(z: Vec<Scalar>) -> Self {
        let r = norm_sqr(&z).sqrt();
        BoundaryPoint {
            z: z.into_iter().map(|zi| zi.scale(1.0 / r)).collect(),
        }
    }

    /// `o = (0, …, 0, 1)`.
    pub fn o(params: &GroupParams) -> Self {
        let mut z = vec![Scalar::zero(params.field); params.n];
        z[params.n - 1] = Scalar::one(params.field);
        BoundaryPoint { z }
    }

    /// `−o = (0, …, 0, −1)`.
    pub fn minus_o(params: &GroupParams) -> Self {
        let mut z = vec![Scalar::zero(params.field); params.n];
        z[params.n - 1] = -Scalar::one(params.field);
        BoundaryPoint { z }
    }

    pub fn lift(&self) -> Vec<Scalar> {
        lift(&self.z)
    }

    pub fn real_coords(&self) -> Vec<f64> {
        matrix::to_real(&self.z)
    }

    pub fn from_real(field: FieldTag, r: &[f64]) -> Self {
        BoundaryPoint {
            z: matrix::from_real(field, r),
        }
    }

    pub fn max_diff(&self, other: &BoundaryPoint) -> f64 {
        max_diff(&self.z, &other.z)
    }
}

fn lift(z: &[Scalar]) -> Vec<Scalar> {
    let mut v = Vec::with_capacity(z.len() + 1);
    v.push(Scalar::one(z[0].field));
    v.extend_from_slice(z);
    v
}

fn max_diff(a: &[Scalar], b: &[Scalar]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| p.max_diff(q))
        .fold(0.0, f64::max)
}

/// The sesquilinear form `q(z, w) = −z̄₀w₀ + Σⱼ z̄ⱼwⱼ`.
pub fn q_form(z: &[Scalar], w: &[Scalar]) -> Result<Scalar> {
    if z.len() != w.len() || z.is_empty() {
        return Err(Error::Usage(format!(
            "q_form: lengths {} and {}",
            z.len(),
            w.len()
        )));
    }
    let field = z[0].field;
    if z.iter().chain(w).any(|s| s.field != field) {
        return Err(Error::Usage("q_form: mixed fields".into()));
    }
    Ok(q_unchecked(z, w))
}

#[inline]
pub(crate) fn q_unchecked(z: &[Scalar], w: &[Scalar]) -> Scalar {
    let head = z[0].conj() * w[0];
    let tail = if z.len() > 1 {
        inner(&z[1..], &w[1..])
    } else {
        Scalar::zero(head.field)
    };
    tail - head
}

impl GroupElement {
    pub fn identity(params: &GroupParams) -> Self {
        GroupElement {
            matrix: FMatrix::identity(params.field, params.n + 1),
            params: *params,
        }
    }

    pub fn from_matrix(params: &GroupParams, matrix: FMatrix) -> Result<Self> {
        if matrix.size() != params.n + 1 || matrix.field() != params.field {
            return Err(Error::Usage(
                "matrix shape or field does not match group".into(),
            ));
        }
        Ok(GroupElement {
            matrix,
            params: *params,
        })
    }

    /// `a(t)` with `cosh t` and `sinh t` in the corners.
    pub fn a(params: &GroupParams, t: f64) -> Self {
        let f = params.field;
        let n = params.n;
        let mut m = FMatrix::identity(f, n + 1);
        let (c, s) = (t.cosh(), t.sinh());
        m.set(0, 0, Scalar::real(f, c));
        m.set(0, n, Scalar::real(f, s));
        m.set(n, 0, Scalar::real(f, s));
        m.set(n, n, Scalar::real(f, c));
        GroupElement {
            matrix: m,
            params: *params,
        }
    }

    /// `w₀ = diag(−1, 1, …, 1)`.
    pub fn w0(params: &GroupParams) -> Self {
        let mut m = FMatrix::identity(params.field, params.n + 1);
        m.set(0, 0, -Scalar::one(params.field));
        GroupElement {
            matrix: m,
            params: *params,
        }
    }

    /// The matrix `U = U* = U⁻¹` diagonalizing `A`. It is not in `O(q)`.
    pub fn u_matrix(params: &GroupParams) -> FMatrix {
        let f = params.field;
        let n = params.n;
        let h = 1.0 / SQRT_2;
        let mut m = FMatrix::identity(f, n + 1);
        m.set(0, 0, Scalar::real(f, -h));
        m.set(0, n, Scalar::real(f, h));
        m.set(n, 0, Scalar::real(f, h));
        m.set(n, n, Scalar::real(f, h));
        m
    }

    /// `v(x, y)` from its explicit entries.
    pub fn v(params: &GroupParams, h: &HeisElement) -> Result<Self> {
        check_heis(params, h)?;
        let f = params.field;
        let n = params.n;
        let xx = h.x_norm_sqr();
        let y = h.y;
        let one = Scalar::one(f);
        let q = Scalar::real(f, xx / 4.0);
        let y4 = y.scale(0.25);
        let mut m = FMatrix::identity(f, n + 1);
        m.set(0, 0, one + q - y4);
        m.set(0, n, q - y4);
        m.set(n, 0, y4 - q);
        m.set(n, n, one - q + y4);
        for (j, xj) in h.x.iter().enumerate() {
            let col = j + 1;
            let xs = xj.scale(1.0 / SQRT_2);
            m.set(0, col, xs.conj());
            m.set(n, col, -xs.conj());
            m.set(col, 0, xs);
            m.set(col, n, xs);
        }
        Ok(GroupElement {
            matrix: m,
            params: *params,
        })
    }

    /// `n(x, y) = v(−x, −y)*`.
    pub fn n(params: &GroupParams, h: &HeisElement) -> Result<Self> {
        let neg = crate::heisenberg::v_inv(h);
        let v = GroupElement::v(params, &neg)?;
        Ok(GroupElement {
            matrix: v.matrix.adjoint(),
            params: *params,
        })
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            matrix: &self.matrix * &other.matrix,
            params: self.params,
        }
    }

    /// Inverse through the form: `g⁻¹ = J g* J` with `J = diag(−1, 1, …, 1)`.
    pub fn inverse(&self) -> GroupElement {
        let mut m = self.matrix.adjoint();
        let size = m.size();
        for k in 1..size {
            m.set(0, k, -m.get(0, k));
            m.set(k, 0, -m.get(k, 0));
        }
        GroupElement {
            matrix: m,
            params: self.params,
        }
    }

    /// `max_{i,j} |q(Aeᵢ, Aeⱼ) − q(eᵢ, eⱼ)|`.
    pub fn q_residual(&self) -> f64 {
        let size = self.matrix.size();
        let cols: Vec<Vec<Scalar>> = (0..size).map(|j| self.matrix.column(j)).collect();
        let mut worst: f64 = 0.0;
        for i in 0..size {
            for j in 0..size {
                let mut target = Scalar::zero(self.params.field);
                if i == j {
                    target = Scalar::real(self.params.field, if i == 0 { -1.0 } else { 1.0 });
                }
                worst = worst.max(q_unchecked(&cols[i], &cols[j]).max_diff(&target));
            }
        }
        worst
    }

    pub fn is_in_g(&self) -> bool {
        self.q_residual() <= MEMBERSHIP_TOL
    }

    /// Residual of `g* g = 1` (Euclidean preservation).
    pub fn unitary_residual(&self) -> f64 {
        let size = self.matrix.size();
        let gg = &self.matrix.adjoint() * &self.matrix;
        gg.max_diff(&FMatrix::identity(self.params.field, size))
    }

    /// Membership in `K = G ∩ O(|,|)`.
    pub fn is_in_k(&self) -> bool {
        self.q_residual() <= MEMBERSHIP_TOL && self.unitary_residual() <= MEMBERSHIP_TOL
    }

    pub fn max_diff(&self, other: &GroupElement) -> f64 {
        self.matrix.max_diff(&other.matrix)
    }

    /// Projective action on a lifted vector: returns `(c + d z)(a + b z)⁻¹`.
    fn act(&self, z: &[Scalar]) -> Result<Vec<Scalar>> {
        let w = self.matrix.apply(&lift(z));
        let denom = w[0];
        if denom.abs() < 1e-13 {
            return Err(Error::Numerical {
                what: "denominator a + b z vanished in group action".into(),
                residual: denom.abs(),
            });
        }
        Ok(scale_right(&w[1..], denom.inv()))
    }
}

fn check_heis(params: &GroupParams, h: &HeisElement) -> Result<()> {
    if h.x.len() != params.n - 1 || h.field() != params.field {
        return Err(Error::Usage(format!(
            "element of V has |x| = {} entries over {}, expected {} over {}",
            h.x.len(),
            h.field(),
            params.n - 1,
            params.field
        )));
    }
    if h.y.re() != 0.0 {
        return Err(Error::Usage("y must be purely imaginary".into()));
    }
    Ok(())
}

pub fn make_a(params: &GroupParams, t: f64) -> GroupElement {
    GroupElement::a(params, t)
}

pub fn make_w0(params: &GroupParams) -> GroupElement {
    GroupElement::w0(params)
}

pub fn make_v(params: &GroupParams, h: &HeisElement) -> Result<GroupElement> {
    GroupElement::v(params, h)
}

pub fn make_n(params: &GroupParams, h: &HeisElement) -> Result<GroupElement> {
    GroupElement::n(params, h)
}

pub fn act_disk(g: &GroupElement, z: &DiskPoint) -> Result<DiskPoint> {
    Ok(DiskPoint { z: g.act(&z.z)? })
}

pub fn act_boundary(g: &GroupElement, z: &BoundaryPoint) -> Result<BoundaryPoint> {
    Ok(BoundaryPoint { z: g.act(&z.z)? })
}

/// Hyperbolic distance `arccosh(|q(x̃, ỹ)| / (|q(x̃, x̃)| |q(ỹ, ỹ)|)^{1/2})`.
pub fn dist(x: &DiskPoint, y: &DiskPoint) -> f64 {
    let (xl, yl) = (x.lift(), y.lift());
    let num = q_unchecked(&xl, &yl).abs();
    let den = (q_unchecked(&xl, &xl).abs() * q_unchecked(&yl, &yl).abs()).sqrt();
    let ratio = num / den;
    if ratio <= 1.0 {
        0.0
    } else {
        ratio.acosh()
    }
}

/// Cayley transform `𝒞(v) = v(x, y)·o`, evaluated in closed form.
pub fn cayley(params: &GroupParams, h: &HeisElement) -> BoundaryPoint {
    let f = params.field;
    let half = h.x_norm_sqr() / 2.0;
    let y2 = h.y.scale(0.5);
    let denom = Scalar::real(f, 1.0 + half) - y2;
    let inv = denom.inv();
    let mut z: Vec<Scalar> = h.x.iter().map(|xi| xi.scale(SQRT_2) * inv).collect();
    z.push((Scalar::real(f, 1.0 - half) + y2) * inv);
    BoundaryPoint { z }
}

/// Inverse Cayley transform on `S^{dn−1} ∖ {−o}`.
pub fn cayley_inv(params: &GroupParams, z: &BoundaryPoint) -> Result<HeisElement> {
    let f = params.field;
    let n = params.n;
    let zn = z.z[n - 1];
    let one_plus = Scalar::one(f) + zn;
    let gap = one_plus.abs();
    if gap <= 1e-8 {
        return Err(Error::Domain(format!(
            "point lies within {gap:.1e} of −o, outside the chart"
        )));
    }
    // z_n = 2 D⁻¹ − 1 with D = 1 + x*x/2 − y/2.
    let denom = one_plus.inv().scale(2.0);
    let x: Vec<Scalar> = z.z[..n - 1]
        .iter()
        .map(|zi| (*zi * denom).scale(1.0 / SQRT_2))
        .collect();
    let y = denom.im().scale(-2.0);
    Ok(HeisElement { x, y })
}

/// Surface area of the unit sphere `S^{k−1} ⊂ ℝᵏ`.
pub fn sphere_area(k: usize) -> f64 {
    // 2 π^{k/2} / Γ(k/2), with Γ at half-integers done by recursion.
    let mut gamma = if k % 2 == 0 { 1.0 } else { PI.sqrt() };
    let mut a = if k % 2 == 0 { 1.0 } else { 0.5 };
    while a < k as f64 / 2.0 - 1e-12 {
        gamma *= a;
        a += 1.0;
    }
    2.0 * PI.powf(k as f64 / 2.0) / gamma
}

/// Jacobian of `𝒞: V → S^{dn−1}` against `dμ_V = dx dy` and the normalized
/// round measure: `2^{d(n−1)/2} |1 + x*x/2 − y/2|^{−r} / |S^{dn−1}|`.
pub fn cayley_jacobian(params: &GroupParams, h: &HeisElement) -> f64 {
    let half = h.x_norm_sqr() / 2.0;
    let d_abs = ((1.0 + half).powi(2) + h.y.norm_sqr() / 4.0).sqrt();
    let scale = 2f64.powf(params.horizontal_dim() as f64 / 2.0);
    scale * d_abs.powf(-(params.r() as f64)) / sphere_area(params.sphere_dim() + 1)
}

/// Components of `g = k · n(x, y) · a(t)`.
#[derive(Debug, Clone)]
pub struct Iwasawa {
    pub k: GroupElement,
    pub n: HeisElement,
    pub t: f64,
}

impl Iwasawa {
    /// Unitarity residual of the recovered `k`.
    pub fn k_residual(&self) -> f64 {
        self.k.unitary_residual()
    }
}

/// Decomposes `g = k n(x, y) a(t)`.
///
/// `n(x, y)` fixes `õ = e₀ + eₙ` and `a(t) õ = eᵗ õ`, so `‖g õ‖ = eᵗ √2` for
/// the Euclidean norm preserved by `K`. The `N` part is read off from
/// `a(t) g⁻¹ e₀`, which must be proportional to `n(x, y)⁻¹ e₀`.
pub fn iwasawa(g: &GroupElement) -> Result<Iwasawa> {
    let params = g.params;
    let f = params.field;
    let n = params.n;
    let q_res = g.q_residual();
    if q_res > 1e-8 {
        return Err(Error::Usage(format!(
            "iwasawa: element not in O(q), residual {q_res:.2e}"
        )));
    }
    let mut o_tilde = vec![Scalar::zero(f); n + 1];
    o_tilde[0] = Scalar::one(f);
    o_tilde[n] = Scalar::one(f);
    let t = (norm_sqr(&g.matrix.apply(&o_tilde)).sqrt() / SQRT_2).ln();

    let mut e0 = vec![Scalar::zero(f); n + 1];
    e0[0] = Scalar::one(f);
    let w = GroupElement::a(&params, t)
        .matrix
        .apply(&g.inverse().matrix.apply(&e0));
    let lambda = w[0] - w[n];
    if lambda.abs() < 1e-300 {
        return Err(Error::Numerical {
            what: "iwasawa: degenerate N component".into(),
            residual: 0.0,
        });
    }
    let w = scale_right(&w, lambda.inv());
    let x: Vec<Scalar> = w[1..n].iter().map(|wi| wi.scale(SQRT_2)).collect();
    let xx = norm_sqr(&x);
    let y_full = w[n].scale(4.0) - Scalar::real(f, xx);
    let nh = HeisElement { x, y: y_full.im() };
    let n_inv = GroupElement::n(&params, &crate::heisenberg::v_inv(&nh))?;
    let k = g.mul(&GroupElement::a(&params, -t)).mul(&n_inv);
    let parts = Iwasawa { k, n: nh, t };
    let res = parts.k_residual().max(y_full.re().abs());
    if res > 1e-6 {
        return Err(Error::Numerical {
            what: "iwasawa: recovered K part is not unitary".into(),
            residual: res,
        });
    }
    Ok(parts)
}

/// The `A`-exponent `t` of `g = k n a(t)`.
pub fn iwasawa_t(g: &GroupElement) -> Result<f64> {
    Ok(iwasawa(g)?.t)
}

/// The character `ρ(a(t)) = exp(r t / 2)`.
pub fn rho(params: &GroupParams, t: f64) -> f64 {
    (params.r() as f64 * t / 2.0).exp()
}

/// An element `k a(t)` of `G` moving the origin of the disk to `x`.
pub fn translation_to(x: &DiskPoint) -> Result<GroupElement> {
    let field = x.z[0].field;
    let n = x.z.len();
    let params = GroupParams { field, n };
    let radius = x.norm_sqr().sqrt();
    if radius >= 1.0 {
        return Err(Error::Domain(
            "translation_to: point outside the disk".into(),
        ));
    }
    let t = radius.atanh();
    if radius == 0.0 {
        return Ok(GroupElement::identity(&params));
    }
    let u: Vec<Scalar> = x.z.iter().map(|zi| zi.scale(1.0 / radius)).collect();
    let q = unitary_with_last_column(&u);
    let mut k = FMatrix::identity(field, n + 1);
    for i in 0..n {
        for j in 0..n {
            k.set(i + 1, j + 1, q.get(i, j));
        }
    }
    Ok(GroupElement { matrix: k, params }.mul(&GroupElement::a(&params, t)))
}

/// A unitary `Q` over 𝔽 with `Q eₙ = u` for a unit vector `u`.
pub(crate) fn unitary_with_last_column(u: &[Scalar]) -> FMatrix {
    let field = u[0].field;
    let n = u.len();
    let un = u[n - 1];
    let phase = if un.abs() > 1e-300 {
        un.scale(1.0 / un.abs())
    } else {
        Scalar::one(field)
    };
    // u′ = u λ̄ has a real nonnegative last entry; reflect eₙ onto it.
    let u_rot: Vec<Scalar> = u.iter().map(|ui| *ui * phase.conj()).collect();
    let mut w: Vec<Scalar> = u_rot.iter().map(|ui| -*ui).collect();
    w[n - 1] += Scalar::one(field);
    let ww = norm_sqr(&w);
    let mut h = FMatrix::identity(field, n);
    if ww > 1e-300 {
        for i in 0..n {
            for j in 0..n {
                let corr = (w[i] * w[j].conj()).scale(2.0 / ww);
                h.set(i, j, h.get(i, j) - corr);
            }
        }
    }
    let mut diag = FMatrix::identity(field, n);
    diag.set(n - 1, n - 1, phase);
    &h * &diag
}

/// `a(t)·0 = (0, …, 0, tanh t)`.
pub fn a_origin(params: &GroupParams, t: f64) -> DiskPoint {
    let mut z = vec![Scalar::zero(params.field); params.n];
    z[params.n - 1] = Scalar::real(params.field, t.tanh());
    DiskPoint { z }
}
