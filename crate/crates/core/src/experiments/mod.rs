//! Theorem-level numerical checks. Each experiment returns a [`CocycleReport`]
//! holding one row per parameter point and its pass/fail criteria.

mod equivalence;
mod growth;
mod integrability;
mod isometry;
mod report;
mod verify;
mod witness;

pub use equivalence::{cowling_operator_scan, norm_equivalence_check, uniform_boundedness_sample};
pub use growth::{
    busemann_norm_chart, growth_busemann, growth_visual, lr_properness, BusemannBackend,
};
pub use integrability::{homogeneous_ball_volume_mc, integrability_scan, reduced_integral};
pub use isometry::{conjugation_scaling_check, lp_isometry_check};
pub use report::{CocycleReport, Criterion, TrendFit};
pub use verify::{verify_cocycle, verify_group};
pub use witness::{feasible_height, witness_defaults, witness_function, witness_sequence};

use std::path::PathBuf;
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::groups::GroupParams;
use crate::heisenberg::{Grid, SubLaplacian, DEFAULT_NODE_BUDGET};
use crate::scalars::FieldTag;
use crate::spectral::OperatorSpectrum;

static SPECTRUM_CACHE: RwLock<Option<PathBuf>> = RwLock::new(None);

/// Directory for cached grid eigendecompositions used by the experiments.
/// `None` disables the cache.
pub fn set_spectrum_cache(dir: Option<PathBuf>) {
    *SPECTRUM_CACHE.write().unwrap_or_else(|e| e.into_inner()) = dir;
}

pub(crate) fn spectrum(lap: &SubLaplacian) -> Result<OperatorSpectrum> {
    let dir = SPECTRUM_CACHE
        .read()
        .unwrap_or_else(|e| e.into_inner())
        .clone();
    OperatorSpectrum::compute_cached(lap, dir.as_deref())
}

/// Box grid on `V` used by the chart-picture experiments.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartGrid {
    pub half_widths: Vec<f64>,
    pub m: usize,
}

impl ChartGrid {
    pub fn isotropic(params: &GroupParams, l: f64, m: usize) -> Self {
        ChartGrid {
            half_widths: vec![l; params.heis_dim()],
            m,
        }
    }

    pub fn build(&self, params: &GroupParams) -> Result<Grid> {
        Grid::with_budget(params, &self.half_widths, self.m, DEFAULT_NODE_BUDGET)
    }
}

/// `0` below `0`, `1` above `1`, smooth in between.
pub fn smooth_step(u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / u).exp();
    let b = (-1.0 / (1.0 - u)).exp();
    a / (a + b)
}

/// Radial cutoff `χ(𝒩)`: `1` for `𝒩 ≤ inner`, `0` for `𝒩 ≥ outer`.
pub fn radial_cutoff(nrm: f64, inner: f64, outer: f64) -> f64 {
    smooth_step((outer - nrm) / (outer - inner))
}

/// Inner and outer radius of the cutoff used by the chart experiments.
pub const CHART_CUTOFF: (f64, f64) = (0.5, 0.9);

pub(crate) fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0])
}

pub(crate) fn next_pow2_at_least(x: f64, min: usize) -> usize {
    let n = if x.is_finite() && x > 1.0 {
        x.ceil() as usize
    } else {
        1
    };
    n.next_power_of_two().max(min)
}

pub(crate) fn require_real(params: &GroupParams, dims: &[usize], what: &str) -> Result<()> {
    if params.field != FieldTag::Real || !dims.contains(&params.n) {
        return Err(Error::Unsupported(format!(
            "{what} runs on SO₀(n,1) with n ∈ {dims:?}, not {}",
            params.label()
        )));
    }
    Ok(())
}

/// Growth experiments need a grid of dimension at most 3 off the real case.
pub fn gate_growth(params: &GroupParams, what: &str) -> Result<()> {
    if params.field == FieldTag::Quaternion {
        return Err(Error::Unsupported(format!(
            "{what} is gated off for {}: the chart grid would have dimension {} ≥ 7",
            params.label(),
            params.heis_dim()
        )));
    }
    Ok(())
}

pub(crate) fn check_list(name: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::Usage(format!("empty {name} list")));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Usage(format!("non-finite value in {name} list")));
    }
    Ok(())
}

/// Amplification `value(last) / value(first positive parameter)`.
pub(crate) fn amplification(params: &[f64], values: &[f64]) -> f64 {
    let first = params
        .iter()
        .zip(values)
        .find(|(p, _)| **p > 0.0)
        .map(|(_, v)| *v)
        .unwrap_or(0.0);
    let last = *values.last().unwrap_or(&0.0);
    if first > 0.0 {
        last / first
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_shape() {
        assert_eq!(radial_cutoff(0.2, 0.5, 0.9), 1.0);
        assert_eq!(radial_cutoff(0.95, 0.5, 0.9), 0.0);
        assert!((radial_cutoff(0.7, 0.5, 0.9) - 0.5).abs() < 1e-15);
        let mut prev = 1.0;
        for k in 0..100 {
            let v = radial_cutoff(0.5 + 0.004 * k as f64, 0.5, 0.9);
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn powers_of_two() {
        assert_eq!(next_pow2_at_least(3.0, 1024), 1024);
        assert_eq!(next_pow2_at_least(1500.2, 1024), 2048);
    }
}
