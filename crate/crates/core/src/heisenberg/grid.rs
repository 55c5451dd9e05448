//! Box grids on `V` and sampled fields.
//!
//! Nodes are stored in row-major order over the real coordinates returned by
//! [`HeisElement::coords`]: the `x` components first, then `Im y`.

use num_complex::Complex64;
use rayon::prelude::*;

use super::HeisElement;
use crate::error::{Error, Result};
use crate::groups::GroupParams;

/// Default cap on the number of grid nodes. It admits `59³` for `SU(2,1)`.
pub const DEFAULT_NODE_BUDGET: usize = 220_000;

/// A uniform box grid `Π [−Lᵢ, Lᵢ]` with `m` nodes per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub params: GroupParams,
    pub half_widths: Vec<f64>,
    pub m: usize,
    steps: Vec<f64>,
    strides: Vec<usize>,
}

impl Grid {
    /// An isotropic grid of half width `l`, checked against [`DEFAULT_NODE_BUDGET`].
    pub fn new(params: &GroupParams, l: f64, m: usize) -> Result<Self> {
        Grid::with_budget(params, &vec![l; params.heis_dim()], m, DEFAULT_NODE_BUDGET)
    }

    /// Per-axis half widths, same node count per axis.
    pub fn with_budget(
        params: &GroupParams,
        half_widths: &[f64],
        m: usize,
        budget: usize,
    ) -> Result<Self> {
        let dim = params.heis_dim();
        if params.n < 2 {
            return Err(Error::Unsupported(format!(
                "{}: the first stratum is trivial for n = 1, no grid analysis",
                params.label()
            )));
        }
        if half_widths.len() != dim {
            return Err(Error::Usage(format!(
                "expected {dim} half widths, got {}",
                half_widths.len()
            )));
        }
        if m < 3 || m % 2 == 0 {
            return Err(Error::Usage(format!(
                "points per axis must be odd and ≥ 3, got {m}"
            )));
        }
        if half_widths.iter().any(|l| !(*l > 0.0) || !l.is_finite()) {
            return Err(Error::Usage("grid half widths must be positive".into()));
        }
        let needed = (m as f64).powi(dim as i32);
        if needed > budget as f64 {
            return Err(Error::Budget {
                what: format!("{} grid {m}^{dim}", params.label()),
                needed: needed as usize,
                limit: budget,
            });
        }
        let steps = half_widths
            .iter()
            .map(|l| 2.0 * l / (m - 1) as f64)
            .collect();
        let mut strides = vec![1; dim];
        for a in (0..dim.saturating_sub(1)).rev() {
            strides[a] = strides[a + 1] * m;
        }
        Ok(Grid {
            params: *params,
            half_widths: half_widths.to_vec(),
            m,
            steps,
            strides,
        })
    }

    pub fn dim(&self) -> usize {
        self.half_widths.len()
    }

    pub fn len(&self) -> usize {
        self.m.pow(self.dim() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Spacing along axis `a`.
    pub fn step(&self, a: usize) -> f64 {
        self.steps[a]
    }

    pub fn stride(&self, a: usize) -> usize {
        self.strides[a]
    }

    pub fn is_isotropic(&self) -> bool {
        self.half_widths.iter().all(|l| *l == self.half_widths[0])
    }

    /// Volume element `Π hᵢ` of the Riemann sum.
    pub fn cell_volume(&self) -> f64 {
        self.steps.iter().product()
    }

    /// Integer position of node `idx` along axis `a`.
    #[inline]
    pub fn axis_index(&self, idx: usize, a: usize) -> usize {
        (idx / self.strides[a]) % self.m
    }

    pub fn multi_index(&self, idx: usize) -> Vec<usize> {
        (0..self.dim()).map(|a| self.axis_index(idx, a)).collect()
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi.iter().zip(&self.strides).map(|(i, s)| i * s).sum()
    }

    #[inline]
    pub fn axis_coord(&self, a: usize, i: usize) -> f64 {
        -self.half_widths[a] + i as f64 * self.steps[a]
    }

    pub fn coords(&self, idx: usize) -> Vec<f64> {
        (0..self.dim())
            .map(|a| self.axis_coord(a, self.axis_index(idx, a)))
            .collect()
    }

    pub fn point(&self, idx: usize) -> HeisElement {
        HeisElement::from_coords(&self.params, &self.coords(idx))
    }

    /// Index of the node at the origin.
    pub fn origin_index(&self) -> usize {
        self.flat_index(&vec![(self.m - 1) / 2; self.dim()])
    }

    /// Neighbor of `idx` shifted by `offset` along axis `a`, if it is a node.
    #[inline]
    pub fn neighbor(&self, idx: usize, a: usize, offset: isize) -> Option<usize> {
        let i = self.axis_index(idx, a) as isize + offset;
        if i < 0 || i >= self.m as isize {
            None
        } else {
            Some((idx as isize + offset * self.strides[a] as isize) as usize)
        }
    }

    /// True when every axis index lies at least `layer` nodes from the faces.
    pub fn is_interior(&self, idx: usize, layer: usize) -> bool {
        (0..self.dim()).all(|a| {
            let i = self.axis_index(idx, a);
            i >= layer && i + layer < self.m
        })
    }
}

/// Complex samples of a function on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub grid: Grid,
    pub values: Vec<Complex64>,
}

impl GridField {
    pub fn zeros(grid: &Grid) -> Self {
        GridField {
            grid: grid.clone(),
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Samples `f` at every node, given real coordinates.
    pub fn from_fn<F>(grid: &Grid, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64 + Sync,
    {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|i| f(&grid.coords(i)))
            .collect();
        GridField {
            grid: grid.clone(),
            values,
        }
    }

    /// Real-valued variant of [`GridField::from_fn`].
    pub fn from_real_fn<F>(grid: &Grid, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        GridField::from_fn(grid, |c| Complex64::new(f(c), 0.0))
    }

    pub fn from_values(grid: &Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Usage(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(GridField {
            grid: grid.clone(),
            values,
        })
    }

    /// Riemann sum `Σ f · Π hᵢ` for the Haar measure `dx dy`.
    pub fn haar_integral(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() * self.grid.cell_volume()
    }

    /// `⟨f, g⟩ = Σ f̄ g · Π hᵢ`.
    pub fn inner(&self, other: &GridField) -> Complex64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * self.grid.cell_volume()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.cell_volume()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_diff(&self, other: &GridField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, alpha: Complex64) -> GridField {
        GridField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * alpha).collect(),
        }
    }

    pub fn add(&self, other: &GridField) -> GridField {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        GridField {
            grid: self.grid.clone(),
            values,
        }
    }

    pub fn sub(&self, other: &GridField) -> GridField {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        GridField {
            grid: self.grid.clone(),
            values,
        }
    }

    pub fn pointwise_mul(&self, other: &GridField) -> GridField {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        GridField {
            grid: self.grid.clone(),
            values,
        }
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn value_at_origin(&self) -> Complex64 {
        self.values[self.grid.origin_index()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::{v_mul, HeisElement};
    use crate::scalars::Scalar;

    #[test]
    fn layout_round_trip() {
        let g = Grid::new(&GroupParams::su(2), 1.0, 5).unwrap();
        assert_eq!(g.dim(), 3);
        assert_eq!(g.len(), 125);
        for idx in [0, 7, 62, 124] {
            assert_eq!(g.flat_index(&g.multi_index(idx)), idx);
        }
        assert_eq!(g.coords(g.origin_index()), vec![0.0; 3]);
        assert!((g.step(0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn budget_and_shape_errors() {
        assert!(matches!(
            Grid::new(&GroupParams::su(2), 1.0, 4),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            Grid::new(&GroupParams::su(2), 1.0, 61),
            Err(Error::Budget { .. })
        ));
        assert!(Grid::new(&GroupParams::su(2), 1.0, 59).is_ok());
        assert!(matches!(
            Grid::new(&GroupParams::sp(1), 1.0, 5),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn gaussian_integral() {
        // ∫ exp(−|x|² − |y|²) over ℝ³ = π^{3/2}.
        let g = Grid::new(&GroupParams::su(2), 6.0, 41).unwrap();
        let f = GridField::from_real_fn(&g, |c| (-c.iter().map(|v| v * v).sum::<f64>()).exp());
        let exact = std::f64::consts::PI.powf(1.5);
        assert!((f.haar_integral().re - exact).abs() < 1e-3 * exact);
        assert_eq!(
            GridField::zeros(&g).haar_integral(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn left_translation_preserves_integral() {
        let p = GroupParams::su(2);
        let g = Grid::new(&p, 6.0, 49).unwrap();
        let bump = |v: &HeisElement| {
            (-(v.x_norm_sqr() + v.y.norm_sqr() * 0.5)).exp() * (1.0 + v.x[0].re())
        };
        let f = GridField::from_real_fn(&g, |c| bump(&HeisElement::from_coords(&p, c)));
        // Shift by a grid-commensurate element u = (h, 0): f(u⁻¹ v).
        let shift = HeisElement {
            x: vec![Scalar::real(p.field, 2.0 * g.step(0))],
            y: Scalar::zero(p.field),
        };
        let inv = crate::heisenberg::v_inv(&shift);
        let ft =
            GridField::from_real_fn(&g, |c| bump(&v_mul(&inv, &HeisElement::from_coords(&p, c))));
        let (a, b) = (f.haar_integral().re, ft.haar_integral().re);
        assert!((a - b).abs() < 1e-3 * a.abs());
    }
}
