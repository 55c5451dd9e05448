//! Left-invariant fields `E_j` on the first stratum and the sub-Laplacian
//! `Δ_𝔬 = −Σ E_j²`.
//!
//! The flow of `E_j` is `(x, y)·(sE, 0) = (x + sE, y − 2s Im(x*E))`, so
//! `E_j = ∂_{x_j} + Σ_k cₖ(x) ∂_{y_k}` with `c = −2 Im(x*E)` linear in `x`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use sprs::{CsMat, TriMat};

use super::grid::{Grid, GridField};
use super::{v_mul, HeisElement};
use crate::error::{Error, Result};
use crate::groups::GroupParams;
use crate::scalars::Scalar;

/// Basis vector `E_j` of `𝔬 = 𝔽ⁿ⁻¹` as an element of `V`, scaled by `s`.
fn basis_step(params: &GroupParams, j: usize, s: f64) -> HeisElement {
    let d = params.d();
    let mut h = HeisElement::identity(params);
    h.x[j / d] = Scalar::unit(params.field, j % d).scale(s);
    h
}

/// Coefficients `cₖ(x)` of `∂_{y_k}` in `E_j`, evaluated at real coordinates.
pub fn left_invariant_field_at(params: &GroupParams, j: usize, coords: &[f64]) -> Vec<f64> {
    let d = params.d();
    let xi = Scalar::from_components(params.field, &coords[(j / d) * d..(j / d) * d + d]);
    let e = Scalar::unit(params.field, j % d);
    (xi.conj() * e).im().scale(-2.0).imag_components()
}

fn check_index(params: &GroupParams, j: usize) -> Result<()> {
    if j >= params.horizontal_dim() {
        return Err(Error::Usage(format!(
            "field index {j} out of range for a first stratum of dimension {}",
            params.horizontal_dim()
        )));
    }
    Ok(())
}

/// `E_j f` by the centered stencil with Dirichlet ghost zeros.
pub fn left_invariant_field(j: usize, f: &GridField) -> Result<GridField> {
    let grid = &f.grid;
    let params = grid.params;
    check_index(&params, j)?;
    let hd = params.horizontal_dim();
    let zero = Complex64::new(0.0, 0.0);
    let at = |idx: Option<usize>| idx.map_or(zero, |i| f.values[i]);
    let values = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let mut out = (at(grid.neighbor(idx, j, 1)) - at(grid.neighbor(idx, j, -1)))
                / (2.0 * grid.step(j));
            let c = left_invariant_field_at(&params, j, &grid.coords(idx));
            for (k, ck) in c.iter().enumerate() {
                if *ck != 0.0 {
                    let a = hd + k;
                    out += (at(grid.neighbor(idx, a, 1)) - at(grid.neighbor(idx, a, -1)))
                        * (*ck / (2.0 * grid.step(a)));
                }
            }
            out
        })
        .collect();
    Ok(GridField {
        grid: grid.clone(),
        values,
    })
}

/// `E_j f(v)` by the explicit coordinate stencil with step `h`.
pub fn left_invariant_field_fn<F>(
    params: &GroupParams,
    j: usize,
    f: F,
    v: &HeisElement,
    h: f64,
) -> Result<f64>
where
    F: Fn(&HeisElement) -> f64,
{
    check_index(params, j)?;
    let c0 = v.coords();
    let hd = params.horizontal_dim();
    let diff = |a: usize| {
        let mut plus = c0.clone();
        let mut minus = c0.clone();
        plus[a] += h;
        minus[a] -= h;
        (f(&HeisElement::from_coords(params, &plus)) - f(&HeisElement::from_coords(params, &minus)))
            / (2.0 * h)
    };
    let mut out = diff(j);
    for (k, ck) in left_invariant_field_at(params, j, &c0).iter().enumerate() {
        if *ck != 0.0 {
            out += ck * diff(hd + k);
        }
    }
    Ok(out)
}

/// `(E_1 f, …, E_{d(n−1)} f)(v)` by central differences of the group flow.
pub fn d_horizontal_at<F>(params: &GroupParams, f: F, v: &HeisElement, step: f64) -> Vec<f64>
where
    F: Fn(&HeisElement) -> f64,
{
    (0..params.horizontal_dim())
        .map(|j| {
            let plus = f(&v_mul(v, &basis_step(params, j, step)));
            let minus = f(&v_mul(v, &basis_step(params, j, -step)));
            (plus - minus) / (2.0 * step)
        })
        .collect()
}

/// The assembled sub-Laplacian `Σ G_jᵀ G_j` on a grid.
///
/// `G_j` sends node values to values on the edges along `x_j`. It uses the
/// forward difference in `x_j` and the endpoint average of centered `y`
/// differences, with the coefficients taken at the edge midpoint. Faces
/// carry ghost zeros, and the edges into the ghost layer are kept.
#[derive(Debug, Clone)]
pub struct SubLaplacian {
    pub grid: Grid,
    pub matrix: CsMat<f64>,
    pub gradients: Vec<CsMat<f64>>,
}

fn edge_operator(grid: &Grid, j: usize) -> CsMat<f64> {
    let params = grid.params;
    let hd = params.horizontal_dim();
    let m = grid.m;
    let hj = grid.step(j);
    let edges = grid.len() / m * (m + 1);
    let mut tri = TriMat::new((edges, grid.len()));
    let mut e = 0;
    for idx in 0..grid.len() {
        let i = grid.axis_index(idx, j);
        // Edge on the low side of every node, plus the closing edge after the last one.
        let mut sides = vec![(grid.neighbor(idx, j, -1), Some(idx))];
        if i == m - 1 {
            sides.push((Some(idx), None));
        }
        for (left, right) in sides {
            if let Some(l) = left {
                tri.add_triplet(e, l, -1.0 / hj);
            }
            if let Some(r) = right {
                tri.add_triplet(e, r, 1.0 / hj);
            }
            let mut mid = grid.coords(left.or(right).unwrap());
            mid[j] += if left.is_some() { 0.5 * hj } else { -0.5 * hj };
            let c = left_invariant_field_at(&params, j, &mid);
            for node in [left, right].into_iter().flatten() {
                for (k, ck) in c.iter().enumerate() {
                    if *ck == 0.0 {
                        continue;
                    }
                    let a = hd + k;
                    let w = 0.5 * ck / (2.0 * grid.step(a));
                    if let Some(p) = grid.neighbor(node, a, 1) {
                        tri.add_triplet(e, p, w);
                    }
                    if let Some(q) = grid.neighbor(node, a, -1) {
                        tri.add_triplet(e, q, -w);
                    }
                }
            }
            e += 1;
        }
    }
    debug_assert_eq!(e, edges);
    tri.to_csr()
}

/// Assembles `Δ_𝔬` on `grid`.
pub fn sublaplacian_matrix(grid: &Grid) -> Result<SubLaplacian> {
    let params = grid.params;
    if params.horizontal_dim() == 0 {
        return Err(Error::Unsupported(format!(
            "{}: the first stratum is trivial",
            params.label()
        )));
    }
    let gradients: Vec<CsMat<f64>> = (0..params.horizontal_dim())
        .into_par_iter()
        .map(|j| edge_operator(grid, j))
        .collect();
    let mut matrix: Option<CsMat<f64>> = None;
    for g in &gradients {
        let gt: CsMat<f64> = g.transpose_view().to_csr();
        let term = &gt * g;
        matrix = Some(match matrix {
            None => term,
            Some(acc) => &acc + &term,
        });
    }
    Ok(SubLaplacian {
        grid: grid.clone(),
        matrix: matrix.expect("nonempty stratum"),
        gradients,
    })
}

fn csr_apply(mat: &CsMat<f64>, x: &[Complex64]) -> Vec<Complex64> {
    (0..mat.rows())
        .into_par_iter()
        .map(|i| {
            let row = mat.outer_view(i).expect("row in range");
            row.iter().map(|(k, v)| x[k] * *v).sum()
        })
        .collect()
}

impl SubLaplacian {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `Δ f`.
    pub fn apply(&self, f: &GridField) -> GridField {
        GridField {
            grid: self.grid.clone(),
            values: csr_apply(&self.matrix, &f.values),
        }
    }

    /// `(1 + Δ) f`.
    pub fn apply_shifted(&self, f: &GridField) -> GridField {
        self.apply(f).add(f)
    }

    /// `Δᵏ f` for an integer power.
    pub fn apply_power(&self, f: &GridField, k: u32, shifted: bool) -> GridField {
        let mut out = f.clone();
        for _ in 0..k {
            out = if shifted {
                self.apply_shifted(&out)
            } else {
                self.apply(&out)
            };
        }
        out
    }

    /// Staggered gradient components `G_j f`, one vector of edge values per `j`.
    pub fn edge_gradient(&self, f: &GridField) -> Vec<Vec<Complex64>> {
        self.gradients
            .iter()
            .map(|g| csr_apply(g, &f.values))
            .collect()
    }

    /// `⟨f, Δ f⟩ = Σ_j ‖G_j f‖²`, with the cell volume as weight.
    pub fn dirichlet_energy(&self, f: &GridField) -> f64 {
        let w = self.grid.cell_volume();
        self.edge_gradient(f)
            .iter()
            .flatten()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            * w
    }

    /// Dense copy for eigendecomposition.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut out = DMatrix::zeros(n, n);
        for (i, row) in self.matrix.outer_iterator().enumerate() {
            for (k, v) in row.iter() {
                out[(i, k)] = *v;
            }
        }
        out
    }

    /// `max |Δᵢₖ − Δₖᵢ|`.
    pub fn symmetry_residual(&self) -> f64 {
        let t: CsMat<f64> = self.matrix.transpose_view().to_csr();
        let diff = &self.matrix - &t;
        diff.data().iter().fold(0.0, |a: f64, v| a.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::hom_norm;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn real_case_is_plain_derivative() {
        let p = GroupParams::so(3);
        let g = Grid::new(&p, 1.0, 41).unwrap();
        let f = GridField::from_real_fn(&g, |c| c[0] * c[0]);
        let e = left_invariant_field(0, &f).unwrap();
        for idx in 0..g.len() {
            if g.is_interior(idx, 1) {
                assert!((e.values[idx].re - 2.0 * g.coords(idx)[0]).abs() < 1e-12);
            }
        }
        assert!(left_invariant_field(2, &f).is_err());
    }

    #[test]
    fn stencil_matches_flow_on_su21() {
        let p = GroupParams::su(2);
        let g = Grid::new(&p, 1.5, 29).unwrap();
        let func = |v: &HeisElement| (-hom_norm(v).powi(4)).exp();
        let f = GridField::from_real_fn(&g, |c| func(&HeisElement::from_coords(&p, c)));
        // The stencil error is O(h²) with h = 0.075, so compare on a smooth function
        // at two resolutions and demand second-order decay.
        let mut worst = 0.0_f64;
        for j in 0..2 {
            let e = left_invariant_field(j, &f).unwrap();
            for idx in (0..g.len()).step_by(7) {
                if !g.is_interior(idx, 2) {
                    continue;
                }
                let flow = d_horizontal_at(&p, func, &g.point(idx), 1e-5)[j];
                worst = worst.max((e.values[idx].re - flow).abs());
            }
        }
        assert!(worst < 0.1, "{worst}");

        let fine = Grid::new(&p, 1.5, 57).unwrap();
        let ff = GridField::from_real_fn(&fine, |c| func(&HeisElement::from_coords(&p, c)));
        let mut worst_fine = 0.0_f64;
        for j in 0..2 {
            let e = left_invariant_field(j, &ff).unwrap();
            for idx in (0..fine.len()).step_by(13) {
                if !fine.is_interior(idx, 2) {
                    continue;
                }
                let flow = d_horizontal_at(&p, func, &fine.point(idx), 1e-5)[j];
                worst_fine = worst_fine.max((e.values[idx].re - flow).abs());
            }
        }
        assert!(worst_fine < worst / 3.0, "{worst} {worst_fine}");
    }

    #[test]
    fn pointwise_stencil_matches_flow() {
        let p = GroupParams::su(2);
        let func = |v: &HeisElement| (-hom_norm(v).powi(4)).exp();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let c: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.5..1.5)).collect();
            let v = HeisElement::from_coords(&p, &c);
            let flow = d_horizontal_at(&p, func, &v, 1e-4);
            for j in 0..2 {
                let st = left_invariant_field_fn(&p, j, func, &v, 1e-4).unwrap();
                assert!((st - flow[j]).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn flow_is_exact_for_linear_coefficients() {
        // f = Im y is linear along the flow, so the flow difference is exact.
        let p = GroupParams::su(2);
        let v = HeisElement::from_coords(&p, &[0.3, -0.7, 0.2]);
        let f = |h: &HeisElement| h.coords()[2];
        let d = d_horizontal_at(&p, f, &v, 1e-3);
        let c0 = left_invariant_field_at(&p, 0, &v.coords());
        let c1 = left_invariant_field_at(&p, 1, &v.coords());
        assert!((d[0] - c0[0]).abs() < 1e-10);
        assert!((d[1] - c1[0]).abs() < 1e-10);
    }

    #[test]
    fn linearity() {
        let p = GroupParams::su(2);
        let g = Grid::new(&p, 1.0, 9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = GridField::from_fn(&g, |_| Complex64::new(0.0, 0.0));
        let a = GridField {
            values: (0..g.len())
                .map(|_| Complex64::new(rng.gen(), rng.gen()))
                .collect(),
            ..f.clone()
        };
        let b = GridField {
            values: (0..g.len())
                .map(|_| Complex64::new(rng.gen(), rng.gen()))
                .collect(),
            ..f
        };
        let alpha = Complex64::new(0.5, -2.0);
        let lhs = left_invariant_field(1, &a.scale(alpha).add(&b)).unwrap();
        let rhs = left_invariant_field(1, &a)
            .unwrap()
            .scale(alpha)
            .add(&left_invariant_field(1, &b).unwrap());
        assert!(lhs.max_diff(&rhs) < 1e-12);
    }

    #[test]
    fn real_sublaplacian_is_standard_stencil() {
        let p = GroupParams::so(2);
        let g = Grid::new(&p, 1.0, 7).unwrap();
        let lap = sublaplacian_matrix(&g).unwrap();
        let dense = lap.to_dense();
        let h2 = g.step(0).powi(2);
        for i in 0..7 {
            assert!((dense[(i, i)] - 2.0 / h2).abs() < 1e-10);
            if i + 1 < 7 {
                assert!((dense[(i, i + 1)] + 1.0 / h2).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn sublaplacian_symmetric_psd_and_kills_constants() {
        let p = GroupParams::su(2);
        let g = Grid::new(&p, 1.0, 11).unwrap();
        let lap = sublaplacian_matrix(&g).unwrap();
        assert!(lap.symmetry_residual() < 1e-12);
        let eig = nalgebra::SymmetricEigen::new(lap.to_dense());
        assert!(eig.eigenvalues.min() > -1e-10);
        let one = GridField::from_real_fn(&g, |_| 1.0);
        let r = lap.apply(&one);
        for idx in 0..g.len() {
            if g.is_interior(idx, 2) {
                assert!(r.values[idx].norm() < 1e-10);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = GridField {
            values: (0..g.len())
                .map(|_| Complex64::new(rng.gen(), 0.0))
                .collect(),
            grid: g.clone(),
        };
        let h = GridField {
            values: (0..g.len())
                .map(|_| Complex64::new(rng.gen(), 0.0))
                .collect(),
            grid: g.clone(),
        };
        let lhs = lap.apply(&f).inner(&h);
        let rhs = f.inner(&lap.apply(&h));
        assert!((lhs - rhs).norm() < 1e-11 * lhs.norm().max(1.0));
        assert!(
            (lap.dirichlet_energy(&f) - f.inner(&lap.apply(&f)).re).abs()
                < 1e-9 * lap.dirichlet_energy(&f)
        );
    }

    #[test]
    fn sublaplacian_matches_minus_sum_of_squares() {
        // On a smooth compactly concentrated function, Δf ≈ −Σ E_j² f.
        let p = GroupParams::su(2);
        let func = |c: &[f64]| (-(c[0] * c[0] + c[1] * c[1]) * 2.0 - c[2] * c[2]).exp();
        let mut errs = vec![];
        for m in [29, 57] {
            let g = Grid::new(&p, 3.0, m).unwrap();
            let f = GridField::from_real_fn(&g, func);
            let lap = sublaplacian_matrix(&g).unwrap();
            let lf = lap.apply(&f);
            let mut ref_ = GridField::zeros(&g);
            for j in 0..2 {
                let e = left_invariant_field(j, &left_invariant_field(j, &f).unwrap()).unwrap();
                ref_ = ref_.sub(&e);
            }
            let mut worst = 0.0_f64;
            for idx in 0..g.len() {
                if g.is_interior(idx, 3) {
                    worst = worst.max((lf.values[idx] - ref_.values[idx]).norm());
                }
            }
            errs.push(worst);
        }
        assert!(errs[1] < errs[0] / 3.0, "{errs:?}");
    }

    #[test]
    fn unsupported_for_trivial_stratum() {
        assert!(Grid::new(&GroupParams::su(1), 1.0, 5).is_err());
    }
}
