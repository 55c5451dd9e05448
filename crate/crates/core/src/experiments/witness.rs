//! Unboundedness of `ev₀` on `ℋ^{r/2}(V)` through an explicit witness family.

use std::time::Instant;

use super::report::{CocycleReport, Criterion, TrendFit};
use super::{check_list, gate_growth, radial_cutoff, strictly_increasing, ChartGrid, CHART_CUTOFF};
use crate::error::{Error, Result};
use crate::groups::GroupParams;
use crate::heisenberg::{hom_norm, sublaplacian_matrix, Grid, GridField, HeisElement};
use crate::spectral::{sobolev_norm_v, NormBackend};

/// `φ_k(v) = χ(𝒩)·min(k, log(e^{−K₀}/𝒩))` with the minimum smoothed:
/// `χ(𝒩)·(S_{k+K₀}(𝒩) − K₀)`, `S_K(𝒩) = −¼ log(e^{−4K} + 𝒩⁴)`.
///
/// `φ_k(0) = k`. Up to the dilation `δ_{e^{K₀}}` this is `χ·min(k, log(1/𝒩))`
/// for a cutoff of radius `e^{K₀}` past `𝒩 = 1`, so the negative tail of the
/// logarithm keeps `φ_k` from degenerating into `k·χ` at small `k`.
pub fn witness_function(k: f64, log_radius: f64, v: &HeisElement) -> f64 {
    let nrm = hom_norm(v);
    let chi = radial_cutoff(nrm, CHART_CUTOFF.0, CHART_CUTOFF.1);
    if chi == 0.0 {
        return 0.0;
    }
    let big_k = k + log_radius;
    let n4 = nrm.powi(4);
    let s = if n4 == 0.0 {
        big_k
    } else {
        -0.25 * ((-4.0 * big_k).exp() + n4).ln()
    };
    chi * (s - log_radius)
}

/// Largest `k + K₀` whose plateau `𝒩 ≤ e^{−(k+K₀)}` spans three steps on
/// every axis (`x` axes scale like `𝒩`, `y` axes like `𝒩²`).
pub fn feasible_height(grid: &Grid) -> f64 {
    let hd = grid.params.horizontal_dim();
    (0..grid.dim())
        .map(|a| {
            let h = grid.step(a);
            if a < hd {
                (1.0 / (3.0 * h)).ln()
            } else {
                0.5 * (1.0 / (3.0 * h)).ln()
            }
        })
        .fold(f64::INFINITY, f64::min)
}

/// Default `(k_list, K₀, grid)` per group: the plateau of the largest `k`
/// stays resolved and the list spans four doublings.
pub fn witness_defaults(params: &GroupParams) -> Result<(Vec<f64>, f64, ChartGrid)> {
    gate_growth(params, "witness_sequence")?;
    match (params.field, params.n) {
        (crate::scalars::FieldTag::Real, 2) => Ok((
            vec![0.125, 0.25, 0.5, 1.0, 2.0],
            2.0,
            ChartGrid {
                half_widths: vec![1.0],
                m: 801,
            },
        )),
        (crate::scalars::FieldTag::Complex, 2) => Ok((
            vec![0.0625, 0.125, 0.25, 0.5, 1.0],
            0.25,
            ChartGrid {
                half_widths: vec![0.9, 0.9, 0.81],
                m: 59,
            },
        )),
        _ => Err(Error::Unsupported(format!(
            "no default witness setup for {}",
            params.label()
        ))),
    }
}

/// `ev₀(φ_k) / ‖φ_k‖_{ℋ^{r/2}}` over `k_list`.
pub fn witness_sequence(
    params: &GroupParams,
    k_list: &[f64],
    log_radius: f64,
    grid: &ChartGrid,
) -> Result<CocycleReport> {
    gate_growth(params, "witness_sequence")?;
    check_list("k", k_list)?;
    if k_list.iter().any(|k| *k < 0.0) {
        return Err(Error::Usage("witness heights k must be nonnegative".into()));
    }
    let start = Instant::now();
    let g = grid.build(params)?;
    let lap = sublaplacian_matrix(&g)?;
    let alpha = params.r() as f64 / 2.0;
    let spec = if alpha.fract() != 0.0 {
        Some(super::spectrum(&lap)?)
    } else {
        None
    };
    let backend = match &spec {
        Some(s) => NormBackend::Spectral(s),
        None => NormBackend::Direct(&lap),
    };
    let kmax = feasible_height(&g) - log_radius;
    let mut rep = CocycleReport::new(
        "witness",
        params,
        &["k", "ev0", "norm", "ratio", "feasible"],
    );
    rep.note(format!(
        "grid {}^{} with half widths {:?}; cutoff radius e^{log_radius}; plateau resolved for k ≤ {kmax:.3}",
        grid.m,
        params.heis_dim(),
        grid.half_widths
    ));
    let mut ratios = Vec::new();
    let mut ev_err: f64 = 0.0;
    let origin = g.origin_index();
    for &k in k_list {
        let f = GridField::from_real_fn(&g, |c| {
            witness_function(k, log_radius, &HeisElement::from_coords(params, c))
        });
        let ev0 = f.values[origin].re;
        ev_err = ev_err.max((ev0 - k).abs());
        let norm = sobolev_norm_v(&f, alpha, false, backend)?;
        let ratio = if k == 0.0 { 0.0 } else { k / norm };
        if k > kmax {
            rep.note(format!("k = {k} exceeds the resolved range k ≤ {kmax:.3}"));
        }
        rep.push_row(vec![k, ev0, norm, ratio, f64::from(u8::from(k <= kmax))]);
        ratios.push(ratio);
    }
    rep.check(Criterion::at_most(
        "ev0_equals_k",
        ev_err,
        1e-12,
        "φ_k(0) = k",
    ));
    rep.check(Criterion::new(
        "strictly_increasing",
        strictly_increasing(&ratios),
        ratios.len() as f64,
        0.0,
        "ratio over k",
    ));
    let mut worst_growth = f64::INFINITY;
    let mut doublings = 0usize;
    for i in 0..k_list.len() {
        for j in i + 1..k_list.len() {
            if k_list[i] > 0.0 && (k_list[j] / k_list[i] - 2.0).abs() < 1e-12 {
                doublings += 1;
                worst_growth = worst_growth.min(ratios[j] / ratios[i] - 1.0);
            }
        }
    }
    rep.check(Criterion::at_least(
        "doublings",
        doublings as f64,
        4.0,
        "pairs (k, 2k) in the list",
    ));
    rep.check(Criterion::at_least(
        "growth_per_doubling",
        worst_growth,
        0.25,
        "min ratio(2k)/ratio(k) − 1",
    ));
    let xs: Vec<f64> = k_list.iter().map(|k| k.sqrt()).collect();
    rep.fits.push(TrendFit::fit("sqrt(k)", &xs, &ratios));
    rep.runtime_seconds = start.elapsed().as_secs_f64();
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_shape() {
        let p = GroupParams::su(2);
        let o = HeisElement::identity(&p);
        for k0 in [0.0, 1.5] {
            assert!((witness_function(3.0, k0, &o) - 3.0).abs() < 1e-14);
            assert_eq!(witness_function(0.0, k0, &o), 0.0);
            let v = HeisElement::from_coords(&p, &[0.1, 0.0, 0.0]);
            assert!((witness_function(8.0, k0, &v) - (10f64.ln() - k0)).abs() < 1e-3);
        }
    }
}
