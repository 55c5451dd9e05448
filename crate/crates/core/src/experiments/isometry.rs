//! The compact and noncompact pictures of the scalar principal series:
//! `∫_K |f|^p = C_G ∫_V |f|^p`, and the conjugation scaling of `dμ_V`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::report::{CocycleReport, Criterion};
use super::{check_list, gate_growth};
use crate::error::{Error, Result};
use crate::groups::{
    act_boundary, cayley, cayley_inv, cayley_jacobian, iwasawa_t, rho, sphere_area, GroupElement,
    GroupParams,
};
use crate::heisenberg::{random_heis, HeisElement};
use crate::spectral::quad::gauss_legendre;

/// Product rule on `S^{k−1} ⊂ ℝᵏ` for the normalized measure. The last
/// coordinate is the polar axis.
pub fn sphere_rule(k: usize, order: usize) -> Vec<(Vec<f64>, f64)> {
    if k == 2 {
        let n = 4 * order;
        return (0..n)
            .map(|j| {
                let th = 2.0 * PI * j as f64 / n as f64;
                (vec![th.sin(), th.cos()], 1.0 / n as f64)
            })
            .collect();
    }
    let sub = sphere_rule(k - 1, order);
    let mut out = Vec::with_capacity(sub.len() * order);
    for (x, w) in gauss_legendre(order) {
        let th = FRAC_PI_2 * (x + 1.0);
        let (s, c) = th.sin_cos();
        let wt = FRAC_PI_2 * w * s.powi(k as i32 - 2);
        for (p, pw) in &sub {
            let mut pt: Vec<f64> = p.iter().map(|v| s * v).collect();
            pt.push(c);
            out.push((pt, wt * pw));
        }
    }
    let total: f64 = out.iter().map(|(_, w)| w).sum();
    out.into_iter().map(|(p, w)| (p, w / total)).collect()
}

/// Random polynomial of degree ≤ 3 in the ambient coordinates.
#[derive(Debug, Clone)]
struct Poly {
    terms: Vec<(Vec<usize>, f64)>,
}

impl Poly {
    fn random(k: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut terms = vec![(vec![], rng.gen_range(-1.0..1.0))];
        for a in 0..k {
            terms.push((vec![a], rng.gen_range(-1.0..1.0)));
            for b in a..k {
                terms.push((vec![a, b], rng.gen_range(-1.0..1.0)));
                for c in b..k {
                    terms.push((vec![a, b, c], rng.gen_range(-1.0..1.0)));
                }
            }
        }
        Poly { terms }
    }

    fn one() -> Self {
        Poly {
            terms: vec![(vec![], 1.0)],
        }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(idx, c)| c * idx.iter().map(|&i| x[i]).product::<f64>())
            .sum()
    }
}

/// Tensor Gauss–Legendre rule on `V` after `xᵢ = tan uᵢ`.
fn v_rule(params: &GroupParams, order: usize) -> Vec<(HeisElement, f64)> {
    let dim = params.heis_dim();
    let base: Vec<(f64, f64)> = gauss_legendre(order)
        .into_iter()
        .map(|(x, w)| (FRAC_PI_2 * x, FRAC_PI_2 * w))
        .collect();
    let total = order.pow(dim as u32);
    (0..total)
        .map(|mut idx| {
            let mut c = Vec::with_capacity(dim);
            let mut w = 1.0;
            for _ in 0..dim {
                let (u, wu) = base[idx % order];
                idx /= order;
                let sec = 1.0 / u.cos();
                c.push(u.tan());
                w *= wu * sec * sec;
            }
            (HeisElement::from_coords(params, &c), w)
        })
        .collect()
}

fn v_order(params: &GroupParams) -> usize {
    match params.heis_dim() {
        1 => 400,
        2 => 120,
        _ => 56,
    }
}

/// `log J(v) + r t(v)` where `v = k n a(t)`; constant in `v`.
fn jacobian_iwasawa_offset(params: &GroupParams, v: &HeisElement) -> Result<f64> {
    let t = iwasawa_t(&GroupElement::v(params, v)?)?;
    Ok(cayley_jacobian(params, v).ln() + params.r() as f64 * t)
}

/// Ratio `∫_K |f|^p / ∫_V |f|^p` for `f` induced from sphere data `h` with
/// `f(v) = h(𝒞 v) e^{−(λ+r) t(v)/2}` and `1/p = λ/(2r) + 1/2`.
pub fn lp_isometry_check(
    params: &GroupParams,
    n_h: usize,
    lambda: f64,
    seed: u64,
) -> Result<CocycleReport> {
    gate_growth(params, "lp_isometry_check")?;
    let r = params.r() as f64;
    if !(lambda > -r && lambda < r) {
        return Err(Error::Usage(format!(
            "λ must lie in (−r, r) = (−{r}, {r}), got {lambda}"
        )));
    }
    if n_h == 0 {
        return Err(Error::Usage("need at least one sphere function".into()));
    }
    let p = 1.0 / (lambda / (2.0 * r) + 0.5);
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = CocycleReport::new(
        "lp-isometry",
        params,
        &["sample", "integral_k", "integral_v", "ratio"],
    );
    rep.note(format!("λ = {lambda}, p = {p}"));

    // Jacobian–Iwasawa sub-check
    let offsets: Vec<f64> = (0..50)
        .map(|_| jacobian_iwasawa_offset(params, &random_heis(params, 1.5, &mut rng)))
        .collect::<Result<_>>()?;
    let (olo, ohi) = offsets
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| {
            (l.min(*v), h.max(*v))
        });
    rep.check(Criterion::at_most(
        "jacobian_iwasawa_offset_spread",
        ohi - olo,
        1e-4,
        "log J(v) + r t(v) over 50 random v",
    ));

    let k = params.sphere_dim() + 1;
    let srule = sphere_rule(k, 28);
    // e^{−r t(v)} = J(v)/J(0); far nodes are outside the range where the
    // matrix Iwasawa decomposition is well conditioned
    let j0 = cayley_jacobian(params, &HeisElement::identity(params));
    let vnodes: Vec<(Vec<f64>, f64)> = v_rule(params, v_order(params))
        .into_par_iter()
        .map(|(v, w)| {
            let rt = -(cayley_jacobian(params, &v) / j0).ln();
            (
                cayley(params, &v).real_coords(),
                w * (-(lambda + r) / (2.0 * r) * p * rt).exp(),
            )
        })
        .collect();
    let mut hs = vec![Poly::one()];
    hs.extend((0..n_h).map(|_| Poly::random(k, &mut rng)));
    let mut ratios = Vec::new();
    for (i, h) in hs.iter().enumerate() {
        let ik: f64 = srule.iter().map(|(z, w)| w * h.eval(z).abs().powf(p)).sum();
        let iv: f64 = vnodes
            .iter()
            .map(|(z, w)| w * h.eval(z).abs().powf(p))
            .sum();
        let ratio = ik / iv;
        rep.push_row(vec![i as f64, ik, iv, ratio]);
        ratios.push(ratio);
    }
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), v| (l.min(*v), h.max(*v)));
    let c_g = 2f64.powf(params.horizontal_dim() as f64 / 2.0) / sphere_area(k);
    rep.note(format!(
        "empirical C_G in [{lo:.10}, {hi:.10}]; 2^(d(n−1)/2)/|S^(dn−1)| = {c_g:.10}"
    ));
    rep.check(Criterion::at_most(
        "ratio_spread",
        hi / lo - 1.0,
        0.01,
        "max/min − 1 of ∫_K/∫_V over h, h ≡ 1 included",
    ));
    rep.check(Criterion::at_most(
        "ratio_vs_jacobian_constant",
        (ratios[0] - c_g).abs() / c_g,
        0.01,
        "h ≡ 1 against the Cayley Jacobian constant",
    ));
    rep.runtime_seconds = start.elapsed().as_secs_f64();
    Ok(rep)
}

/// Half widths of a box outside which `|f| ≤ 1e−16 |f(0)|` along each axis.
fn axis_extents<F: Fn(&[f64]) -> f64>(dim: usize, f: &F) -> Vec<f64> {
    let f0 = f(&vec![0.0; dim]).abs();
    (0..dim)
        .map(|a| {
            let mut l = 1e-3;
            loop {
                let mut c = vec![0.0; dim];
                c[a] = l;
                let plus = f(&c).abs();
                c[a] = -l;
                let minus = f(&c).abs();
                if plus.max(minus) <= 1e-16 * f0 || l > 1e6 {
                    return l;
                }
                l *= 1.25;
            }
        })
        .collect()
}

fn box_integral<F: Fn(&[f64]) -> f64 + Sync>(dim: usize, f: &F, order: usize) -> f64 {
    let ext = axis_extents(dim, f);
    let base = gauss_legendre(order);
    let total = order.pow(dim as u32);
    let vals: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let mut c = Vec::with_capacity(dim);
            let mut w = 1.0;
            for e in &ext {
                let (x, wx) = base[idx % order];
                idx /= order;
                c.push(e * x);
                w *= e * wx;
            }
            w * f(&c)
        })
        .collect();
    vals.iter().sum()
}

/// `∫_V f(a⁻¹ v a) ρ(a)² dμ_V` against `∫_V f dμ_V` for Gaussian-type `f`,
/// with `a⁻¹ v a` computed through the boundary action (`a` fixes `o`).
pub fn conjugation_scaling_check(params: &GroupParams, t_list: &[f64]) -> Result<CocycleReport> {
    gate_growth(params, "conjugation_scaling_check")?;
    check_list("t", t_list)?;
    let start = Instant::now();
    let dim = params.heis_dim();
    let hd = params.horizontal_dim();
    let order = match dim {
        1 => 200,
        2 => 96,
        _ => 48,
    };
    let fs: [fn(&[f64], usize) -> f64; 2] = [
        |c, _| (-c.iter().map(|v| v * v).sum::<f64>()).exp(),
        |c, hd| {
            (1.0 + c[0] * c[0])
                * (-c[..hd].iter().map(|v| v * v).sum::<f64>()
                    - 2.0 * c[hd..].iter().map(|v| v * v).sum::<f64>())
                .exp()
        },
    ];
    let mut rep = CocycleReport::new(
        "conjugation-scaling",
        params,
        &["t", "family", "plain", "conjugated", "rel_err"],
    );
    let mut worst: f64 = 0.0;
    for &t in t_list {
        let a_inv = GroupElement::a(params, -t);
        let rho2 = rho(params, t).powi(2);
        for (fi, f) in fs.iter().enumerate() {
            let plain = box_integral(dim, &|c: &[f64]| f(c, hd), order);
            let conj = |c: &[f64]| -> f64 {
                let v = HeisElement::from_coords(params, c);
                let moved =
                    act_boundary(&a_inv, &cayley(params, &v)).and_then(|z| cayley_inv(params, &z));
                match moved {
                    Ok(w) => f(&w.coords(), hd) * rho2,
                    Err(_) => f64::NAN,
                }
            };
            let conjugated = box_integral(dim, &conj, order);
            if !conjugated.is_finite() {
                return Err(Error::Numerical {
                    what: "conjugated integrand left the chart".into(),
                    residual: f64::NAN,
                });
            }
            let rel = (conjugated - plain).abs() / plain.abs();
            worst = worst.max(rel);
            rep.push_row(vec![t, fi as f64, plain, conjugated, rel]);
        }
    }
    rep.check(Criterion::at_most(
        "conjugation_rel_err",
        worst,
        0.005,
        "∫ f(a⁻¹va) ρ(a)² dv against ∫ f dv",
    ));
    rep.runtime_seconds = start.elapsed().as_secs_f64();
    Ok(rep)
}
