//! The Busemann cocycle `γ_{x,y}(z) = β_z(x, y)` in closed form.

use crate::groups::{cayley, q_unchecked, BoundaryPoint, DiskPoint, GroupParams};
use crate::heisenberg::{hom_norm, HeisElement};
use crate::scalars::Scalar;

/// `log |q(ỹ, z̃)/q(x̃, z̃) · q(x̃, x̃)^{1/2}/q(ỹ, ỹ)^{1/2}|`.
pub fn busemann(x: &DiskPoint, y: &DiskPoint, z: &BoundaryPoint) -> f64 {
    let (xl, yl, zl) = (x.lift(), y.lift(), z.lift());
    q_unchecked(&yl, &zl).abs().ln() - q_unchecked(&xl, &zl).abs().ln()
        + 0.5 * q_unchecked(&xl, &xl).abs().ln()
        - 0.5 * q_unchecked(&yl, &yl).abs().ln()
}

/// The pair `(x, y)` with `z ↦ γ_{x,y}(z)` as a value.
#[derive(Debug, Clone, PartialEq)]
pub struct BusemannValue {
    pub x: DiskPoint,
    pub y: DiskPoint,
}

impl BusemannValue {
    pub fn new(x: DiskPoint, y: DiskPoint) -> Self {
        BusemannValue { x, y }
    }

    pub fn eval(&self, z: &BoundaryPoint) -> f64 {
        busemann(&self.x, &self.y, z)
    }
}

/// `γ_{0, a_t·0}(z) = log|1 − z_n tanh t| + log cosh t`.
pub fn busemann_along_a(t: f64, z: &BoundaryPoint) -> f64 {
    let zn = z.z[z.z.len() - 1];
    (Scalar::one(zn.field) - zn.scale(t.tanh())).abs().ln() + log_cosh(t)
}

/// `log cosh t` without overflow.
pub fn log_cosh(t: f64) -> f64 {
    let a = t.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// The `t`-dependent term `log|(1 + x*x/2 − y/2) − tanh t (1 − x*x/2 + y/2)|`
/// of `log|1 − z_n tanh t| ∘ 𝒞`.
pub fn chart_busemann_main(t: f64, v: &HeisElement) -> f64 {
    let f = v.field();
    let half = v.x_norm_sqr() / 2.0;
    let y2 = v.y.scale(0.5);
    let d = Scalar::real(f, 1.0 + half) - y2;
    let a = Scalar::real(f, 1.0 - half) + y2;
    (d - a.scale(t.tanh())).abs().ln()
}

/// `log|x*x − y|`, the pointwise limit of [`chart_busemann_main`].
pub fn chart_busemann_limit(v: &HeisElement) -> f64 {
    (Scalar::real(v.field(), v.x_norm_sqr()) - v.y).abs().ln()
}

/// `log|1 + x*x/2 − y/2|`, the `t`-independent term.
pub fn chart_busemann_smooth(v: &HeisElement) -> f64 {
    let f = v.field();
    (Scalar::real(f, 1.0 + v.x_norm_sqr() / 2.0) - v.y.scale(0.5))
        .abs()
        .ln()
}

/// One row of [`busemann_limit_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitRow {
    pub t: f64,
    /// `sup |main term(t) − log|x*x − y||` over the samples.
    pub max_deviation: f64,
    /// `sup |log|1 − z_n tanh t|∘𝒞 − (main − smooth)|`.
    pub split_residual: f64,
}

/// Convergence of the chart Busemann function to `log|x*x − y|` on samples
/// with `𝒩 ≥ ε`. Samples closer to the origin are skipped.
pub fn busemann_limit_check(
    params: &GroupParams,
    t_list: &[f64],
    samples: &[HeisElement],
    eps: f64,
) -> Vec<LimitRow> {
    let kept: Vec<&HeisElement> = samples.iter().filter(|v| hom_norm(v) >= eps).collect();
    t_list
        .iter()
        .map(|&t| {
            let mut dev: f64 = 0.0;
            let mut split: f64 = 0.0;
            for v in &kept {
                let main = chart_busemann_main(t, v);
                dev = dev.max((main - chart_busemann_limit(v)).abs());
                let direct = busemann_along_a(t, &cayley(params, v)) - log_cosh(t);
                split = split.max((direct - (main - chart_busemann_smooth(v))).abs());
            }
            LimitRow {
                t,
                max_deviation: dev,
                split_residual: split,
            }
        })
        .collect()
}
