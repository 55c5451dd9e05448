//! Local integrability of `𝒩^{s−r}` near the origin of `V`.

use std::f64::consts::FRAC_PI_2;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::check_list;
use super::report::{CocycleReport, Criterion};
use crate::error::{Error, Result};
use crate::groups::{sphere_area, GroupParams};
use crate::scalars::FieldTag;

const QUAD_TOL: f64 = 1e-12;

/// `∫_{ε ≤ 𝒩 ≤ 1} f(|x|, |y|) dμ_V`, reduced to the radii `a = |x|`,
/// `b = |y|` and then to `a = ν cos^{1/2}φ`, `b = ν² sin φ` with `ν = 𝒩`.
pub fn reduced_integral<F>(params: &GroupParams, eps: f64, f: F) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::Usage(format!(
            "cutoff must lie in [0, 1), got {eps}"
        )));
    }
    let hd = params.horizontal_dim();
    let wa = sphere_area(hd);
    if params.field == FieldTag::Real {
        let out = quadrature::integrate(
            |a| wa * a.powi(hd as i32 - 1) * f(a, 0.0),
            eps,
            1.0,
            QUAD_TOL,
        );
        return Ok(out.integral);
    }
    let im = params.d() - 1;
    let wb = sphere_area(im);
    let out = quadrature::integrate(
        |nu| {
            quadrature::integrate(
                |phi| {
                    let (s, c) = phi.sin_cos();
                    let c = c.max(0.0);
                    let (a, b) = (nu * c.sqrt(), nu * nu * s);
                    wa * a.powi(hd as i32 - 1) * wb * b.powi(im as i32 - 1) * nu * nu / c.sqrt()
                        * f(a, b)
                },
                0.0,
                FRAC_PI_2,
                QUAD_TOL,
            )
            .integral
        },
        eps,
        1.0,
        QUAD_TOL,
    );
    Ok(out.integral)
}

/// Monte Carlo estimate of `|{𝒩 ≤ 1}|` from uniform samples of the
/// enclosing box `|xᵢ|, |yᵢ| ≤ 1`. Returns the estimate and its standard error.
pub fn homogeneous_ball_volume_mc(params: &GroupParams, samples: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (hd, im) = (params.horizontal_dim(), params.d() - 1);
    let mut hits = 0usize;
    for _ in 0..samples {
        let a2: f64 = (0..hd).map(|_| rng.gen_range(-1.0f64..1.0).powi(2)).sum();
        let b2: f64 = (0..im).map(|_| rng.gen_range(-1.0f64..1.0).powi(2)).sum();
        if a2 * a2 + b2 <= 1.0 {
            hits += 1;
        }
    }
    let box_vol = 2f64.powi((hd + im) as i32);
    let p = hits as f64 / samples as f64;
    (
        box_vol * p,
        box_vol * (p * (1.0 - p) / samples as f64).sqrt(),
    )
}

/// `∫_{ε ≤ 𝒩 ≤ 1} 𝒩^{s−r} dμ_V` for every `s` and `ε`, against the
/// homogeneity closed form `|{𝒩 ≤ 1}|·r·(1 − εˢ)/s` (`r log(1/ε)` at `s = 0`).
pub fn integrability_scan(
    params: &GroupParams,
    s_list: &[f64],
    cutoffs: &[f64],
    seed: u64,
) -> Result<CocycleReport> {
    check_list("s", s_list)?;
    check_list("cutoff", cutoffs)?;
    let r = params.r() as f64;
    if params.n < 2 {
        return Err(Error::Unsupported(format!(
            "{}: V is trivial for n = 1",
            params.label()
        )));
    }
    if s_list.iter().any(|s| *s < 0.0 || *s > r) {
        return Err(Error::Usage(format!(
            "exponents s must lie in [0, r] = [0, {r}]"
        )));
    }
    if cutoffs.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Usage("cutoffs must be strictly decreasing".into()));
    }
    let start = Instant::now();
    let mut rep = CocycleReport::new(
        "integrability",
        params,
        &[
            "s",
            "eps",
            "integral",
            "closed_form",
            "limit_mc",
            "rel_err_limit",
        ],
    );
    let vol = reduced_integral(params, 0.0, |_, _| 1.0)?;
    let (vol_mc, vol_se) = homogeneous_ball_volume_mc(params, 1_000_000, seed);
    rep.note(format!(
        "|{{𝒩 ≤ 1}}| = {vol:.12} by quadrature, {vol_mc:.6} ± {vol_se:.1e} by Monte Carlo"
    ));
    let mut homogeneity: f64 = 0.0;
    for &s in s_list {
        let vals: Vec<f64> = cutoffs
            .iter()
            .map(|&e| {
                reduced_integral(params, e, |a, b| {
                    ((a.powi(4) + b * b).powf(0.25)).powf(s - r)
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        for (&e, &v) in cutoffs.iter().zip(&vals) {
            let (closed, limit) = if s > 0.0 {
                (vol * r * (1.0 - e.powf(s)) / s, vol_mc * r / s)
            } else {
                (vol * r * (1.0 / e).ln(), f64::INFINITY)
            };
            homogeneity = homogeneity.max((v - closed).abs() / closed.abs().max(1e-300));
            let rel = if limit.is_finite() {
                (v - limit).abs() / limit
            } else {
                f64::NAN
            };
            rep.push_row(vec![s, e, v, closed, limit, rel]);
        }
        let last = *vals.last().unwrap();
        if s > 0.0 {
            let limit = vol_mc * r / s;
            rep.check(Criterion::at_most(
                &format!("limit_s_{s}"),
                (last - limit).abs() / limit,
                0.01,
                format!(
                    "ε = {:.0e} against |{{𝒩≤1}}|_MC·r/s",
                    cutoffs.last().unwrap()
                ),
            ));
        } else {
            let incr: Vec<f64> = cutoffs
                .windows(2)
                .zip(vals.windows(2))
                .map(|(e, v)| (v[1] - v[0]) / (e[0] / e[1]).log10())
                .collect();
            if incr.len() >= 2 {
                let (lo, hi) = incr
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| {
                        (l.min(*v), h.max(*v))
                    });
                rep.check(Criterion::at_most(
                    "log_divergence_increment_spread",
                    hi / lo - 1.0,
                    0.10,
                    "increments per decade of ε",
                ));
                let per_decade = vol_mc * r * std::f64::consts::LN_10;
                rep.check(Criterion::at_most(
                    "log_divergence_rate",
                    (incr[0] - per_decade).abs() / per_decade,
                    0.01,
                    "increment per decade against |{𝒩≤1}|_MC·r·ln 10",
                ));
            }
        }
    }
    rep.check(Criterion::at_most(
        "homogeneity_closed_form",
        homogeneity,
        1e-6,
        "quadrature against vol·r(1 − εˢ)/s",
    ));
    rep.check(Criterion::at_most(
        "volume_mc_vs_quadrature",
        (vol_mc - vol).abs() / vol,
        0.01,
        "Monte Carlo volume",
    ));
    rep.runtime_seconds = start.elapsed().as_secs_f64();
    Ok(rep)
}
