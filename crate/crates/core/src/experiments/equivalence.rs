//! Uniform boundedness of the action on `W₀`, equivalence of the compact and
//! chart norms, and the Cowling composition on `SO₀(2,1)`.

use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::growth::busemann_norm_sq_so21;
use super::report::{CocycleReport, Criterion};
use super::{check_list, next_pow2_at_least, require_real, ChartGrid};
use crate::cocycles::pi_action;
use crate::error::{Error, Result};
use crate::groups::{cayley_inv, random_k, BoundaryPoint, GroupElement, GroupParams};
use crate::heisenberg::{sublaplacian_matrix, GridField};
use crate::scalars::FieldTag;
use crate::spectral::{
    circle_nodes, circle_transform_real, sobolev_norm_v, w0_norm_sphere, NormBackend,
};

/// Trigonometric polynomial `Σ_{1≤m≤band} aₘ cos mθ + bₘ sin mθ`, in angle
/// from `o`.
#[derive(Debug, Clone)]
struct TrigPoly {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TrigPoly {
    fn random(band: usize, rng: &mut ChaCha8Rng) -> Self {
        TrigPoly {
            a: (0..band).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            b: (0..band).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        }
    }

    fn eval(&self, z: &BoundaryPoint) -> f64 {
        let c = z.real_coords();
        let theta = c[0].atan2(c[1]);
        self.a
            .iter()
            .zip(&self.b)
            .enumerate()
            .map(|(k, (a, b))| {
                let (s, co) = ((k + 1) as f64 * theta).sin_cos();
                a * co + b * s
            })
            .sum()
    }

    /// `‖φ‖_{W₀}² = Σ |m| |φ̂_m|²` in closed form.
    fn w0_norm(&self) -> f64 {
        self.a
            .iter()
            .zip(&self.b)
            .enumerate()
            .map(|(k, (a, b))| (k + 1) as f64 * (a * a + b * b) / 2.0)
            .sum::<f64>()
            .sqrt()
    }
}

fn circle_points(n: usize) -> Vec<BoundaryPoint> {
    circle_nodes(n)
        .into_iter()
        .map(|th| BoundaryPoint::from_real(FieldTag::Real, &[th.sin(), th.cos()]))
        .collect()
}

/// `‖π(g)φ‖_{W₀}` on `S¹` with enough samples for `g` of size `cosh t`.
fn acted_norm(
    params: &GroupParams,
    g: &GroupElement,
    phi: &TrigPoly,
    pts: &[BoundaryPoint],
) -> Result<f64> {
    let n = pts.len();
    let vals = pi_action(g, |z| phi.eval(z), pts)?;
    w0_norm_sphere(&circle_transform_real(&vals, n / 2 - 1)?, params)
}

fn circle_points_for(t: f64) -> Vec<BoundaryPoint> {
    circle_points(next_pow2_at_least(64.0 * t.abs().exp(), 1024))
}

/// `sup ‖π(g)φ‖_{W₀}/‖φ‖_{W₀}` over `g ∈ {a(t)} ∪ {k a(t) k′}` and random
/// band-limited `φ`, against the Busemann cocycle norm over the same `t`.
pub fn uniform_boundedness_sample(
    params: &GroupParams,
    t_list: &[f64],
    n_phi: usize,
    n_k: usize,
    seed: u64,
) -> Result<CocycleReport> {
    require_real(params, &[2], "uniform_boundedness_sample")?;
    check_list("t", t_list)?;
    if n_phi == 0 {
        return Err(Error::Usage("need at least one test function".into()));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phis: Vec<TrigPoly> = (0..n_phi).map(|_| TrigPoly::random(8, &mut rng)).collect();
    let mut rep = CocycleReport::new(
        "uniform-bounded",
        params,
        &["t", "sup_ratio", "min_ratio", "cocycle_norm"],
    );
    let mut sups = Vec::new();
    let mut cocycle = Vec::new();
    for &t in t_list {
        let a = GroupElement::a(params, t);
        let mut gs = vec![a.clone()];
        for _ in 0..n_k {
            gs.push(
                random_k(params, &mut rng)
                    .mul(&a)
                    .mul(&random_k(params, &mut rng)),
            );
        }
        let pts = circle_points_for(t);
        let ratios: Vec<f64> = gs
            .par_iter()
            .flat_map(|g| phis.par_iter().map(move |phi| (g, phi)))
            .map(|(g, phi)| Ok(acted_norm(params, g, phi, &pts)? / phi.w0_norm()))
            .collect::<Result<_>>()?;
        let (hi, lo) = ratios
            .iter()
            .fold((0.0f64, f64::INFINITY), |(h, l), r| (h.max(*r), l.min(*r)));
        let c = busemann_norm_sq_so21(t).sqrt();
        rep.push_row(vec![t, hi, lo, c]);
        sups.push(hi);
        cocycle.push(c);
    }
    // K and the identity
    let pts = circle_points_for(0.0);
    let mut k_dev: f64 = 0.0;
    for _ in 0..n_k.max(1) {
        let k = random_k(params, &mut rng);
        for phi in &phis {
            k_dev = k_dev.max((acted_norm(params, &k, phi, &pts)? / phi.w0_norm() - 1.0).abs());
        }
    }
    let e = GroupElement::identity(params);
    let e_dev = (acted_norm(params, &e, &phis[0], &pts)? / phis[0].w0_norm() - 1.0).abs();
    rep.check(Criterion::at_most(
        "k_invariance",
        k_dev,
        0.01,
        "|ratio − 1| for g ∈ K",
    ));
    rep.check(Criterion::at_most(
        "identity",
        e_dev,
        1e-10,
        "|ratio − 1| for g = e",
    ));
    let t_max = t_list.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let upper: Vec<f64> = t_list
        .iter()
        .zip(&sups)
        .filter(|(t, _)| **t >= t_max / 2.0)
        .map(|(_, s)| *s)
        .collect();
    let (ulo, uhi) = upper
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), v| (l.min(*v), h.max(*v)));
    rep.check(Criterion::at_most(
        "plateau_variation",
        uhi / ulo,
        2.0,
        "max/min of the sup ratio over the upper half of the t range",
    ));
    let sup_all = sups.iter().cloned().fold(0.0, f64::max);
    let c_max = cocycle.iter().cloned().fold(0.0, f64::max);
    rep.check(Criterion::at_least(
        "contrast",
        c_max / sup_all,
        3.0,
        "max cocycle norm / max action ratio",
    ));
    rep.runtime_seconds = start.elapsed().as_secs_f64();
    Ok(rep)
}

/// `exp(1 − 1/(1 − u²))` on `|u| < 1`, peak value `1`.
fn bump(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }
}

/// Translated and scaled bumps `b((x − c)/w)` on the chart `V = ℝ`.
fn bump_family(count: usize) -> Vec<(f64, f64)> {
    let widths = [0.4, 0.6, 0.8, 1.0];
    let per = count.div_ceil(widths.len()).max(1);
    let mut out = Vec::new();
    for k in 0..count {
        let w = widths[k % widths.len()];
        let j = k / widths.len();
        let c = if per == 1 {
            0.0
        } else {
            -1.5 + 3.0 * j as f64 / (per - 1) as f64
        };
        out.push((c, w));
    }
    out
}

/// `‖(1 + Δ)^{1/4} b‖_{L²(ℝ)}` on a grid, for each bump.
fn chart_norms(params: &GroupParams, grid: &ChartGrid, bumps: &[(f64, f64)]) -> Result<Vec<f64>> {
    let g = grid.build(params)?;
    let spec = super::spectrum(&sublaplacian_matrix(&g)?)?;
    let alpha = params.r() as f64 / 2.0;
    bumps
        .iter()
        .map(|&(c, w)| {
            let f = GridField::from_real_fn(&g, |x| bump((x[0] - c) / w));
            let edge = f.values[0].norm().max(f.values[g.len() - 1].norm());
            if edge > 1e-6 {
                return Err(Error::Domain(format!(
                    "bump centered at {c} leaks to the grid edge ({edge:.2e})"
                )));
            }
            sobolev_norm_v(&f, alpha, true, NormBackend::Spectral(&spec))
        })
        .collect()
}

/// `‖w‖_{W₀}` for `w = b∘𝒞⁻¹`, extended by zero near `−o`.
fn sphere_norm(params: &GroupParams, c: f64, w: f64, n: usize) -> Result<f64> {
    let vals: Vec<f64> = circle_points(n)
        .iter()
        .map(|z| match cayley_inv(params, z) {
            Ok(v) => bump((v.coords()[0] - c) / w),
            Err(_) => 0.0,
        })
        .collect();
    w0_norm_sphere(&circle_transform_real(&vals, n / 2 - 1)?, params)
}

/// Sphere-spectral `W₀` norm against the chart norm `‖(1 + Δ)^{r/4} w∘𝒞‖_{L²}`
/// on a family of chart-supported bumps, at grid sizes `m` and `2m − 1`.
pub fn norm_equivalence_check(
    params: &GroupParams,
    n_bumps: usize,
    grid: &ChartGrid,
) -> Result<CocycleReport> {
    require_real(params, &[2], "norm_equivalence_check")?;
    let start = Instant::now();
    let bumps = bump_family(n_bumps);
    let fine = ChartGrid {
        half_widths: grid.half_widths.clone(),
        m: 2 * grid.m - 1,
    };
    let coarse_norms = chart_norms(params, grid, &bumps)?;
    let fine_norms = chart_norms(params, &fine, &bumps)?;
    let mut rep = CocycleReport::new(
        "norm-equivalence",
        params,
        &[
            "center",
            "width",
            "sphere_norm",
            "chart_norm",
            "chart_norm_fine",
            "ratio",
            "ratio_fine",
        ],
    );
    let mut ratios = Vec::new();
    let mut drift: f64 = 0.0;
    for (i, &(c, w)) in bumps.iter().enumerate() {
        let s = sphere_norm(params, c, w, 8192)?;
        let (r0, r1) = (coarse_norms[i] / s, fine_norms[i] / s);
        drift = drift.max((r1 - r0).abs() / r1);
        rep.push_row(vec![c, w, s, coarse_norms[i], fine_norms[i], r0, r1]);
        ratios.push(r1);
    }
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), v| (l.min(*v), h.max(*v)));
    rep.note(format!(
        "equivalence constants: chart/sphere ratio in [{lo:.4}, {hi:.4}]"
    ));
    rep.note("translations and dilations of the chart act on S¹ by Möbius maps, which preserve the W₀ seminorm; the sphere column is constant up to quadrature");
    let constant = w0_norm_sphere(&circle_transform_real(&vec![1.0; 1024], 511)?, params)?;
    rep.check(Criterion::at_most(
        "constant_vanishes",
        constant,
        1e-12,
        "W₀ norm of a constant",
    ));
    rep.check(Criterion::at_least(
        "family_size",
        bumps.len() as f64,
        20.0,
        "bumps in the family",
    ));
    rep.check(Criterion::at_most(
        "ratio_spread",
        hi / lo,
        10.0,
        "max/min of chart/sphere ratios",
    ));
    rep.check(Criterion::at_most(
        "refinement_drift",
        drift,
        0.05,
        format!("ratio change from m = {} to {}", grid.m, fine.m),
    ));
    rep.runtime_seconds = start.elapsed().as_secs_f64();
    Ok(rep)
}

/// `∫_a^b |s|^p ds` for `p > −1`.
fn power_integral(a: f64, b: f64, p: f64) -> f64 {
    let prim = |s: f64| s.signum() * s.abs().powf(p + 1.0) / (p + 1.0);
    prim(b) - prim(a)
}

/// Largest singular value of `Δ^{r/4} ∘ (∗ 𝒩^{ξ−r})` on `V = ℝ` over grid
/// refinements. Convolution weights integrate the kernel exactly over cells.
pub fn cowling_operator_scan(
    params: &GroupParams,
    xi_list: &[f64],
    m_list: &[usize],
    half_width: f64,
) -> Result<CocycleReport> {
    require_real(params, &[2], "cowling_operator_scan")?;
    check_list("ξ", xi_list)?;
    if m_list.is_empty() {
        return Err(Error::Usage("empty grid list".into()));
    }
    let r = params.r() as f64;
    if xi_list.iter().any(|x| *x <= 0.0) {
        return Err(Error::Usage(
            "ξ must be positive for a locally integrable kernel".into(),
        ));
    }
    let start = Instant::now();
    let mut rep = CocycleReport::new(
        "cowling-scan",
        params,
        &["xi", "m", "sigma_max", "symmetry_residual"],
    );
    let mut spectra = Vec::new();
    for &m in m_list {
        let g = ChartGrid {
            half_widths: vec![half_width],
            m,
        }
        .build(params)?;
        spectra.push((g.clone(), super::spectrum(&sublaplacian_matrix(&g)?)?));
    }
    for &xi in xi_list {
        let mut sigmas = Vec::new();
        for (g, spec) in &spectra {
            let m = g.len();
            let h = g.step(0);
            let p = xi - r;
            let conv = DMatrix::from_fn(m, m, |i, j| {
                let d = (i as f64 - j as f64) * h;
                power_integral(d - h / 2.0, d + h / 2.0, p)
            });
            let sym = (&conv - conv.transpose()).amax() / conv.amax();
            let q = &spec.eigenvectors;
            let scale = DMatrix::from_diagonal(&spec.eigenvalues.map(|l| l.max(0.0).powf(r / 4.0)));
            let op = q * scale * q.transpose() * &conv;
            let sigma = op.singular_values().max();
            rep.push_row(vec![xi, m as f64, sigma, sym]);
            sigmas.push(sigma);
            rep.check(Criterion::at_most(
                &format!("symmetry_xi_{xi}_m_{m}"),
                sym,
                1e-8,
                "convolution matrix asymmetry",
            ));
        }
        let (lo, hi) = sigmas
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(l, h), v| (l.min(*v), h.max(*v)));
        rep.check(Criterion::at_most(
            &format!("refinement_stability_xi_{xi}"),
            hi / lo,
            2.0,
            "max/min σ_max over grids",
        ));
        rep.check(Criterion::new(
            &format!("finite_xi_{xi}"),
            hi.is_finite(),
            hi,
            f64::INFINITY,
            "σ_max finite",
        ));
    }
    rep.runtime_seconds = start.elapsed().as_secs_f64();
    Ok(rep)
}
