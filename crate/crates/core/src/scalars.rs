//! Arithmetic over the three base fields ℝ, ℂ and ℍ behind one value type.
//!
//! A [`Scalar`] always carries four real components `s + t𝐢 + u𝐣 + v𝐤` plus a
//! [`FieldTag`]. Components that do not belong to the field are forced to
//! exactly zero on construction, so matrix code can stay generic over the
//! field without branching.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which of ℝ, ℂ, ℍ a scalar lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldTag {
    Real,
    Complex,
    Quaternion,
}

impl FieldTag {
    /// Real dimension of the field.
    pub const fn dim(self) -> usize {
        match self {
            FieldTag::Real => 1,
            FieldTag::Complex => 2,
            FieldTag::Quaternion => 4,
        }
    }

    /// Real dimension of `Im 𝔽`.
    pub const fn imag_dim(self) -> usize {
        self.dim() - 1
    }

    pub fn name(self) -> &'static str {
        match self {
            FieldTag::Real => "real",
            FieldTag::Complex => "complex",
            FieldTag::Quaternion => "quaternion",
        }
    }

    pub(crate) fn code(self) -> u8 {
        match self {
            FieldTag::Real => 1,
            FieldTag::Complex => 2,
            FieldTag::Quaternion => 4,
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An element `s + t𝐢 + u𝐣 + v𝐤` of ℝ, ℂ or ℍ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scalar {
    pub s: f64,
    pub t: f64,
    pub u: f64,
    pub v: f64,
    pub field: FieldTag,
}

impl Scalar {
    /// Builds a scalar, zeroing every component outside `field`.
    pub fn new(field: FieldTag, s: f64, t: f64, u: f64, v: f64) -> Self {
        let (t, u, v) = match field {
            FieldTag::Real => (0.0, 0.0, 0.0),
            FieldTag::Complex => (t, 0.0, 0.0),
            FieldTag::Quaternion => (t, u, v),
        };
        Scalar { s, t, u, v, field }
    }

    pub fn zero(field: FieldTag) -> Self {
        Scalar::new(field, 0.0, 0.0, 0.0, 0.0)
    }

    pub fn one(field: FieldTag) -> Self {
        Scalar::new(field, 1.0, 0.0, 0.0, 0.0)
    }

    pub fn real(field: FieldTag, s: f64) -> Self {
        Scalar::new(field, s, 0.0, 0.0, 0.0)
    }

    /// The `k`-th real basis unit (1, 𝐢, 𝐣, 𝐤); `k < field.dim()`.
    pub fn unit(field: FieldTag, k: usize) -> Self {
        let mut c = [0.0; 4];
        c[k] = 1.0;
        Scalar::from_components(field, &c)
    }

    /// Builds from the first `field.dim()` entries of `c`.
    pub fn from_components(field: FieldTag, c: &[f64]) -> Self {
        let get = |k: usize| if k < c.len() { c[k] } else { 0.0 };
        Scalar::new(field, get(0), get(1), get(2), get(3))
    }

    /// Purely imaginary scalar from `field.imag_dim()` components.
    pub fn from_imag(field: FieldTag, c: &[f64]) -> Self {
        let get = |k: usize| if k < c.len() { c[k] } else { 0.0 };
        Scalar::new(field, 0.0, get(0), get(1), get(2))
    }

    pub fn components(&self) -> [f64; 4] {
        [self.s, self.t, self.u, self.v]
    }

    /// Real components belonging to the field, in `(s, t, u, v)` order.
    pub fn field_components(&self) -> Vec<f64> {
        self.components()[..self.field.dim()].to_vec()
    }

    /// Imaginary components belonging to the field, in `(t, u, v)` order.
    pub fn imag_components(&self) -> Vec<f64> {
        self.components()[1..self.field.dim()].to_vec()
    }

    pub fn conj(self) -> Self {
        Scalar {
            t: -self.t,
            u: -self.u,
            v: -self.v,
            ..self
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.s * self.s + self.t * self.t + self.u * self.u + self.v * self.v
    }

    pub fn abs(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn re(&self) -> f64 {
        self.s
    }

    pub fn im(self) -> Self {
        Scalar { s: 0.0, ..self }
    }

    pub fn scale(self, k: f64) -> Self {
        Scalar {
            s: self.s * k,
            t: self.t * k,
            u: self.u * k,
            v: self.v * k,
            ..self
        }
    }

    /// Multiplicative inverse `z̄ / |z|²`.
    pub fn inv(self) -> Self {
        let n = self.norm_sqr();
        self.conj().scale(1.0 / n)
    }

    pub fn is_zero(&self) -> bool {
        self.norm_sqr() == 0.0
    }

    /// Product that reports a field mismatch instead of panicking.
    pub fn checked_mul(self, rhs: Scalar) -> Result<Scalar> {
        if self.field != rhs.field {
            return Err(Error::Usage(format!(
                "cannot multiply {} scalar by {} scalar",
                self.field, rhs.field
            )));
        }
        Ok(self.hamilton(rhs))
    }

    fn hamilton(self, b: Scalar) -> Scalar {
        let a = self;
        Scalar {
            s: a.s * b.s - a.t * b.t - a.u * b.u - a.v * b.v,
            t: a.s * b.t + a.t * b.s + a.u * b.v - a.v * b.u,
            u: a.s * b.u - a.t * b.v + a.u * b.s + a.v * b.t,
            v: a.s * b.v + a.t * b.u - a.u * b.t + a.v * b.s,
            field: a.field,
        }
    }

    /// Max-norm distance between component vectors.
    pub fn max_diff(&self, other: &Scalar) -> f64 {
        let a = self.components();
        let b = other.components();
        (0..4).map(|k| (a[k] - b[k]).abs()).fold(0.0, f64::max)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.field {
            FieldTag::Real => write!(f, "{}", self.s),
            FieldTag::Complex => write!(f, "{}{:+}i", self.s, self.t),
            FieldTag::Quaternion => {
                write!(f, "{}{:+}i{:+}j{:+}k", self.s, self.t, self.u, self.v)
            }
        }
    }
}

/// Panics on field mismatch; use [`Scalar::checked_mul`] at API boundaries.
impl Mul for Scalar {
    type Output = Scalar;

    fn mul(self, rhs: Scalar) -> Scalar {
        assert_eq!(self.field, rhs.field, "scalar field mismatch");
        self.hamilton(rhs)
    }
}

impl Mul<f64> for Scalar {
    type Output = Scalar;

    fn mul(self, rhs: f64) -> Scalar {
        self.scale(rhs)
    }
}

impl Div<f64> for Scalar {
    type Output = Scalar;

    fn div(self, rhs: f64) -> Scalar {
        self.scale(1.0 / rhs)
    }
}

impl Add for Scalar {
    type Output = Scalar;

    fn add(self, b: Scalar) -> Scalar {
        debug_assert_eq!(self.field, b.field);
        Scalar {
            s: self.s + b.s,
            t: self.t + b.t,
            u: self.u + b.u,
            v: self.v + b.v,
            ..self
        }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, b: Scalar) {
        *self = *self + b;
    }
}

impl Sub for Scalar {
    type Output = Scalar;

    fn sub(self, b: Scalar) -> Scalar {
        debug_assert_eq!(self.field, b.field);
        Scalar {
            s: self.s - b.s,
            t: self.t - b.t,
            u: self.u - b.u,
            v: self.v - b.v,
            ..self
        }
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, b: Scalar) {
        *self = *self - b;
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        self.scale(-1.0)
    }
}

/// Standard-normal random scalar in the given field.
pub fn random_scalar<R: rand::Rng + ?Sized>(field: FieldTag, rng: &mut R) -> Scalar {
    let mut c = [0.0; 4];
    for x in c.iter_mut() {
        *x = rng.sample(StandardNormal);
    }
    Scalar::from_components(field, &c)
}

/// Standard-normal random purely imaginary scalar.
pub fn random_imag<R: rand::Rng + ?Sized>(field: FieldTag, rng: &mut R) -> Scalar {
    Scalar {
        s: 0.0,
        ..random_scalar(field, rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const H: FieldTag = FieldTag::Quaternion;

    #[test]
    fn quaternion_units() {
        let i = Scalar::unit(H, 1);
        let j = Scalar::unit(H, 2);
        let k = Scalar::unit(H, 3);
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(j * i, -k);
        assert_eq!(i * i, -Scalar::one(H));
    }

    #[test]
    fn identity_and_conj_basics() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let z = random_scalar(H, &mut rng);
        assert_eq!(z * Scalar::one(H), z);
        assert_eq!(Scalar::one(H).conj(), Scalar::one(H));
        let i = Scalar::unit(H, 1);
        assert_eq!(i.im(), i);
        assert_eq!(i.re(), 0.0);
    }

    #[test]
    fn foreign_components_are_zeroed() {
        let z = Scalar::new(FieldTag::Real, 1.0, 2.0, 3.0, 4.0);
        assert_eq!(z.components(), [1.0, 0.0, 0.0, 0.0]);
        let z = Scalar::new(FieldTag::Complex, 1.0, 2.0, 3.0, 4.0);
        assert_eq!(z.components(), [1.0, 2.0, 0.0, 0.0]);
    }

    #[test]
    fn field_mismatch_is_usage_error() {
        let a = Scalar::one(FieldTag::Real);
        let b = Scalar::one(FieldTag::Complex);
        assert!(matches!(a.checked_mul(b), Err(Error::Usage(_))));
    }

    #[test]
    fn modulus_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let z = random_scalar(H, &mut rng);
            let w = random_scalar(H, &mut rng);
            let lhs = (z * w).abs();
            let rhs = z.abs() * w.abs();
            assert!((lhs - rhs).abs() <= 1e-13 * rhs, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn conjugation_is_anti_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..1000 {
            let z = random_scalar(H, &mut rng);
            let w = random_scalar(H, &mut rng);
            let r = (z * w).conj().max_diff(&(w.conj() * z.conj()));
            assert!(r <= 1e-13, "{r}");
        }
    }

    #[test]
    fn re_im_split_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let z = random_scalar(H, &mut rng);
            assert_eq!(Scalar::real(H, z.re()) + z.im(), z);
            assert_eq!((z + z.conj()).scale(0.5).s, z.re());
            assert_eq!((z - z.conj()).scale(0.5), z.im());
            assert_eq!(z.conj().conj(), z);
            let zz = z.conj() * z;
            assert!((zz.s - z.norm_sqr()).abs() <= 1e-14 * z.norm_sqr());
        }
    }

    #[test]
    fn complex_is_commutative_quaternion_is_not() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let a = random_scalar(FieldTag::Complex, &mut rng);
        let b = random_scalar(FieldTag::Complex, &mut rng);
        assert!((a * b).max_diff(&(b * a)) < 1e-15);
        let a = random_scalar(H, &mut rng);
        let b = random_scalar(H, &mut rng);
        assert!((a * b).max_diff(&(b * a)) > 1e-6);
    }
}
