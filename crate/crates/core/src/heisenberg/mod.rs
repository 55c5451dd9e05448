//! The stratified nilpotent group `V = 𝔽ⁿ⁻¹ ⊕ Im 𝔽`.
//!
//! Elements are stored in exponential coordinates `(x, y)`. The group law is
//! `(x′, y′)(x, y) = (x′ + x, y′ + y − 2 Im(x′* x))`, which is abelian for
//! 𝔽 = ℝ. Dilations act by `δ_s(x, y) = (s x, s² y)` and the homogeneous
//! norm `𝒩(x, y) = (|x*x|² + |y|²)^{1/4}` has degree one under them.

mod cache;
mod grid;
mod operator;

pub use cache::{read_spectrum_cache, spectrum_cache_path, write_spectrum_cache, CacheKey};
pub use grid::{Grid, GridField, DEFAULT_NODE_BUDGET};
pub use operator::{
    d_horizontal_at, left_invariant_field, left_invariant_field_at, left_invariant_field_fn,
    sublaplacian_matrix, SubLaplacian,
};

use rand::Rng;

use crate::error::{Error, Result};
use crate::groups::matrix::{from_real, inner, norm_sqr, to_real};
use crate::groups::GroupParams;
use crate::scalars::{random_imag, random_scalar, FieldTag, Scalar};

/// A point `(x, y)` of `V` with `x ∈ 𝔽ⁿ⁻¹` and `y ∈ Im 𝔽`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisElement {
    pub x: Vec<Scalar>,
    pub y: Scalar,
}

impl HeisElement {
    /// Fails unless `y` is purely imaginary.
    pub fn new(x: Vec<Scalar>, y: Scalar) -> Result<Self> {
        if y.re() != 0.0 {
            return Err(Error::Usage(format!(
                "y must be purely imaginary, got Re(y) = {}",
                y.re()
            )));
        }
        if x.iter().any(|xi| xi.field != y.field) {
            return Err(Error::Usage("x and y live in different fields".into()));
        }
        Ok(HeisElement { x, y })
    }

    pub fn identity(params: &GroupParams) -> Self {
        HeisElement {
            x: vec![Scalar::zero(params.field); params.n - 1],
            y: Scalar::zero(params.field),
        }
    }

    pub fn field(&self) -> FieldTag {
        self.y.field
    }

    /// Real coordinates: `x` components first, then the imaginary part of `y`.
    pub fn coords(&self) -> Vec<f64> {
        let mut c = to_real(&self.x);
        c.extend(self.y.imag_components());
        c
    }

    pub fn from_coords(params: &GroupParams, c: &[f64]) -> Self {
        let field = params.field;
        let split = params.horizontal_dim();
        debug_assert_eq!(c.len(), params.heis_dim());
        HeisElement {
            x: from_real(field, &c[..split]),
            y: Scalar::from_imag(field, &c[split..]),
        }
    }

    /// `x* x = |x|²`.
    pub fn x_norm_sqr(&self) -> f64 {
        norm_sqr(&self.x)
    }

    pub fn max_diff(&self, other: &HeisElement) -> f64 {
        self.coords()
            .iter()
            .zip(other.coords())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Group law of `V`.
pub fn v_mul(a: &HeisElement, b: &HeisElement) -> HeisElement {
    let x = a.x.iter().zip(&b.x).map(|(p, q)| *p + *q).collect();
    let twist = if a.x.is_empty() {
        Scalar::zero(a.field())
    } else {
        inner(&a.x, &b.x).im()
    };
    HeisElement {
        x,
        y: a.y + b.y - twist.scale(2.0),
    }
}

pub fn v_inv(a: &HeisElement) -> HeisElement {
    HeisElement {
        x: a.x.iter().map(|xi| -*xi).collect(),
        y: -a.y,
    }
}

/// Anisotropic dilation `(x, y) ↦ (s x, s² y)`.
pub fn dilate(s: f64, a: &HeisElement) -> Result<HeisElement> {
    if !(s > 0.0) {
        return Err(Error::Usage(format!(
            "dilation factor must be positive, got {s}"
        )));
    }
    Ok(HeisElement {
        x: a.x.iter().map(|xi| xi.scale(s)).collect(),
        y: a.y.scale(s * s),
    })
}

/// Homogeneous norm `(|x*x|² + |y|²)^{1/4}`.
pub fn hom_norm(a: &HeisElement) -> f64 {
    let xx = a.x_norm_sqr();
    (xx * xx + a.y.norm_sqr()).powf(0.25)
}

/// Gaussian random element (coordinates i.i.d. normal scaled by `scale`).
pub fn random_heis<R: Rng + ?Sized>(params: &GroupParams, scale: f64, rng: &mut R) -> HeisElement {
    let field = params.field;
    HeisElement {
        x: (0..params.n - 1)
            .map(|_| random_scalar(field, rng).scale(scale))
            .collect(),
        y: random_imag(field, rng).scale(scale),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_params() -> Vec<GroupParams> {
        vec![
            GroupParams::so(3),
            GroupParams::su(2),
            GroupParams::su(3),
            GroupParams::sp(2),
        ]
    }

    #[test]
    fn inverse_cancels() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in all_params() {
            let a = random_heis(&p, 1.0, &mut rng);
            let e = v_mul(&a, &v_inv(&a));
            assert!(e.max_diff(&HeisElement::identity(&p)) < 1e-15);
        }
    }

    #[test]
    fn associativity_over_quaternions() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = GroupParams::sp(3);
        for _ in 0..100 {
            let a = random_heis(&p, 1.0, &mut rng);
            let b = random_heis(&p, 1.0, &mut rng);
            let c = random_heis(&p, 1.0, &mut rng);
            let l = v_mul(&v_mul(&a, &b), &c);
            let r = v_mul(&a, &v_mul(&b, &c));
            assert!(l.max_diff(&r) < 1e-13);
        }
    }

    #[test]
    fn real_case_is_abelian() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = GroupParams::so(4);
        let a = random_heis(&p, 1.0, &mut rng);
        let b = random_heis(&p, 1.0, &mut rng);
        assert_eq!(v_mul(&a, &b), v_mul(&b, &a));
    }

    #[test]
    fn dilation_is_automorphism_and_norm_is_homogeneous() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for p in all_params() {
            for _ in 0..20 {
                let a = random_heis(&p, 1.0, &mut rng);
                let b = random_heis(&p, 1.0, &mut rng);
                let s = 0.3 + 2.0 * rng.gen::<f64>();
                let l = dilate(s, &v_mul(&a, &b)).unwrap();
                let r = v_mul(&dilate(s, &a).unwrap(), &dilate(s, &b).unwrap());
                assert!(l.max_diff(&r) < 1e-12);
                let ratio = hom_norm(&dilate(s, &a).unwrap()) / hom_norm(&a);
                assert!((ratio - s).abs() < 1e-13 * s);
                let ss = dilate(s, &dilate(1.7, &a).unwrap()).unwrap();
                assert!(ss.max_diff(&dilate(1.7 * s, &a).unwrap()) < 1e-12);
            }
            let a = random_heis(&p, 1.0, &mut rng);
            assert_eq!(dilate(1.0, &a).unwrap(), a);
            assert!((hom_norm(&dilate(2.0, &a).unwrap()) / hom_norm(&a) - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn hom_norm_values() {
        let p = GroupParams::su(2);
        assert_eq!(hom_norm(&HeisElement::identity(&p)), 0.0);
        let a = HeisElement::new(
            vec![Scalar::one(FieldTag::Complex)],
            Scalar::unit(FieldTag::Complex, 1),
        )
        .unwrap();
        assert!((hom_norm(&a) - 2f64.powf(0.25)).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_arguments() {
        let f = FieldTag::Complex;
        assert!(HeisElement::new(vec![], Scalar::one(f)).is_err());
        let p = GroupParams::su(2);
        assert!(dilate(0.0, &HeisElement::identity(&p)).is_err());
        assert!(dilate(-1.0, &HeisElement::identity(&p)).is_err());
    }

    #[test]
    fn coords_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = GroupParams::sp(2);
        let a = random_heis(&p, 1.0, &mut rng);
        let c = a.coords();
        assert_eq!(c.len(), p.heis_dim());
        assert_eq!(HeisElement::from_coords(&p, &c), a);
    }
}
