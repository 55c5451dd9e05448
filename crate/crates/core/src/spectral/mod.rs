//! Fractional powers of the grid sub-Laplacian, Sobolev norms on `V`, and
//! harmonic analysis on the boundary spheres.

pub mod quad;
pub mod sphere;

pub use sphere::{
    circle_inverse, circle_nodes, circle_transform, circle_transform_real, dual_norm_w,
    dual_norm_w_tol, harmonic_inverse, harmonic_transform, normalized_legendre, real_harmonic,
    w0_norm_sphere, zonal_evaluate, zonal_rule, zonal_transform, zonal_values, S2Grid, SphereBasis,
    SphereSpectrum, ZERO_MASS_TOL,
};

use std::path::Path;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::heisenberg::{
    read_spectrum_cache, spectrum_cache_path, write_spectrum_cache, CacheKey, Grid, GridField,
    SubLaplacian,
};

/// Largest grid handed to the dense eigensolver.
pub const DENSE_EIGEN_LIMIT: usize = 4500;

/// Tolerance for a nonzero component along the kernel under negative powers.
const KERNEL_COMPONENT_TOL: f64 = 1e-9;

/// Eigendecomposition `Δ = Q Λ Qᵀ` of an assembled grid operator, ascending.
#[derive(Debug, Clone)]
pub struct OperatorSpectrum {
    pub grid: Grid,
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl OperatorSpectrum {
    /// Dense symmetric eigensolve of `lap`.
    pub fn compute(lap: &SubLaplacian) -> Result<Self> {
        let n = lap.len();
        if n > DENSE_EIGEN_LIMIT {
            return Err(Error::Budget {
                what: "dense eigendecomposition".into(),
                needed: n,
                limit: DENSE_EIGEN_LIMIT,
            });
        }
        let eig = SymmetricEigen::new(lap.to_dense());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
        let eigenvectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        Ok(OperatorSpectrum {
            grid: lap.grid.clone(),
            eigenvalues,
            eigenvectors,
        })
    }

    /// [`OperatorSpectrum::compute`] through the on-disk cache in `dir`.
    /// Anisotropic grids bypass the cache.
    pub fn compute_cached(lap: &SubLaplacian, dir: Option<&Path>) -> Result<Self> {
        let Some(dir) = dir.filter(|_| lap.grid.is_isotropic()) else {
            return OperatorSpectrum::compute(lap);
        };
        let key = CacheKey {
            params: lap.grid.params,
            half_width: lap.grid.half_widths[0],
            m: lap.grid.m,
        };
        let path = spectrum_cache_path(dir, &key);
        if let Some((eigenvalues, eigenvectors)) = read_spectrum_cache(&path, &key)? {
            if eigenvectors.nrows() == lap.len() {
                return Ok(OperatorSpectrum {
                    grid: lap.grid.clone(),
                    eigenvalues,
                    eigenvectors,
                });
            }
        }
        let spec = OperatorSpectrum::compute(lap)?;
        write_spectrum_cache(&path, &key, &spec.eigenvalues, &spec.eigenvectors)?;
        Ok(spec)
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    fn kernel_cut(&self) -> f64 {
        1e-10 * self.eigenvalues.amax().max(1.0)
    }

    /// `‖Δ − QΛQᵀ‖_max`.
    pub fn reconstruction_residual(&self, lap: &SubLaplacian) -> f64 {
        let scaled = DMatrix::from_fn(self.len(), self.len(), |r, c| {
            self.eigenvectors[(r, c)] * self.eigenvalues[c]
        });
        let rebuilt = &scaled * self.eigenvectors.transpose();
        (rebuilt - lap.to_dense()).amax()
    }

    /// `‖QᵀQ − I‖_max`.
    pub fn orthonormality_residual(&self) -> f64 {
        let n = self.len();
        (self.eigenvectors.tr_mul(&self.eigenvectors) - DMatrix::identity(n, n)).amax()
    }

    fn split(f: &GridField) -> (DVector<f64>, DVector<f64>) {
        let n = f.values.len();
        (
            DVector::from_iterator(n, f.values.iter().map(|v| v.re)),
            DVector::from_iterator(n, f.values.iter().map(|v| v.im)),
        )
    }

    /// Coefficients `Qᵀ f` split into real and imaginary parts.
    pub fn coefficients(&self, f: &GridField) -> (DVector<f64>, DVector<f64>) {
        let (re, im) = OperatorSpectrum::split(f);
        (self.eigenvectors.tr_mul(&re), self.eigenvectors.tr_mul(&im))
    }

    /// `Δ^α f`, or `(1 + Δ)^α f` when `shifted`.
    pub fn apply_power(&self, alpha: f64, f: &GridField, shifted: bool) -> Result<GridField> {
        self.check_grid(f)?;
        let (mut cr, mut ci) = self.coefficients(f);
        let cut = self.kernel_cut();
        for k in 0..self.len() {
            let lam = self.eigenvalues[k].max(0.0);
            let factor = if shifted {
                (1.0 + lam).powf(alpha)
            } else if lam <= cut {
                if alpha < 0.0
                    && (cr[k].abs() > KERNEL_COMPONENT_TOL || ci[k].abs() > KERNEL_COMPONENT_TOL)
                {
                    return Err(Error::Domain(format!(
                        "negative power {alpha} applied to a field with kernel component {:.2e}",
                        cr[k].hypot(ci[k])
                    )));
                }
                if alpha == 0.0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                lam.powf(alpha)
            };
            cr[k] *= factor;
            ci[k] *= factor;
        }
        let (re, im) = (&self.eigenvectors * cr, &self.eigenvectors * ci);
        let values = re
            .iter()
            .zip(im.iter())
            .map(|(a, b)| Complex64::new(*a, *b))
            .collect();
        Ok(GridField {
            grid: f.grid.clone(),
            values,
        })
    }

    /// `‖Δ^{α/2} f‖` (or shifted) straight from the coefficients.
    pub fn power_norm(&self, alpha: f64, f: &GridField, shifted: bool) -> Result<f64> {
        self.check_grid(f)?;
        let (cr, ci) = self.coefficients(f);
        let cut = self.kernel_cut();
        let mut sum = 0.0;
        for k in 0..self.len() {
            let lam = self.eigenvalues[k].max(0.0);
            let w = if shifted {
                (1.0 + lam).powf(alpha)
            } else if lam <= cut {
                if alpha == 0.0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                lam.powf(alpha)
            };
            sum += w * (cr[k] * cr[k] + ci[k] * ci[k]);
        }
        Ok((sum * self.grid.cell_volume()).sqrt())
    }

    fn check_grid(&self, f: &GridField) -> Result<()> {
        if f.grid != self.grid {
            return Err(Error::Usage(
                "field and spectrum live on different grids".into(),
            ));
        }
        Ok(())
    }
}

/// `Δ^α f` via a precomputed spectrum.
pub fn frac_power_apply(spec: &OperatorSpectrum, alpha: f64, f: &GridField) -> Result<GridField> {
    spec.apply_power(alpha, f, false)
}

/// How `ℋ^α(V)` norms are evaluated.
#[derive(Debug, Clone, Copy)]
pub enum NormBackend<'a> {
    /// Eigendecomposition: any real `α`.
    Spectral(&'a OperatorSpectrum),
    /// Sparse products: integer `α` only. Odd `α` uses `⟨g, Δ g⟩ = Σ‖G_j g‖²`.
    Direct(&'a SubLaplacian),
}

/// `‖Δ^{α/2} f‖_{L²}`, or `‖(1 + Δ)^{α/2} f‖_{L²}` when `shifted`.
pub fn sobolev_norm_v(
    f: &GridField,
    alpha: f64,
    shifted: bool,
    backend: NormBackend<'_>,
) -> Result<f64> {
    if alpha < 0.0 {
        return Err(Error::Usage(format!(
            "Sobolev order must be nonnegative, got {alpha}"
        )));
    }
    match backend {
        NormBackend::Spectral(spec) => spec.power_norm(alpha, f, shifted),
        NormBackend::Direct(lap) => {
            if alpha.fract() != 0.0 {
                return Err(Error::Usage(format!(
                    "the direct backend needs an integer order, got {alpha}"
                )));
            }
            if f.grid != lap.grid {
                return Err(Error::Usage(
                    "field and operator live on different grids".into(),
                ));
            }
            let a = alpha as u32;
            let g = lap.apply_power(f, a / 2, shifted);
            if a % 2 == 0 {
                Ok(g.l2_norm())
            } else {
                let base = if shifted { g.l2_norm().powi(2) } else { 0.0 };
                Ok((base + lap.dirichlet_energy(&g)).sqrt())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupParams;
    use crate::heisenberg::sublaplacian_matrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn setup(p: GroupParams, l: f64, m: usize) -> (SubLaplacian, OperatorSpectrum) {
        let g = Grid::new(&p, l, m).unwrap();
        let lap = sublaplacian_matrix(&g).unwrap();
        let spec = OperatorSpectrum::compute(&lap).unwrap();
        (lap, spec)
    }

    fn random_field(g: &Grid, seed: u64) -> GridField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        GridField {
            grid: g.clone(),
            values: (0..g.len())
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        }
    }

    #[test]
    fn decomposition_residuals() {
        let (lap, spec) = setup(GroupParams::su(2), 1.0, 9);
        assert!(spec.reconstruction_residual(&lap) < 1e-8);
        assert!(spec.orthonormality_residual() < 1e-10);
        assert!(spec.eigenvalues[0] > -1e-10);
        assert!(spec.eigenvalues.as_slice().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn powers_agree_with_direct_products() {
        let (lap, spec) = setup(GroupParams::su(2), 1.0, 9);
        let f = random_field(&lap.grid, 1);
        let scale = f.max_abs() * spec.eigenvalues.amax();
        assert!(
            frac_power_apply(&spec, 1.0, &f)
                .unwrap()
                .max_diff(&lap.apply(&f))
                < 1e-10 * scale
        );
        assert!(frac_power_apply(&spec, 0.0, &f).unwrap().max_diff(&f) < 1e-12);
        let half = frac_power_apply(&spec, 0.5, &f).unwrap();
        let twice = frac_power_apply(&spec, 0.5, &half).unwrap();
        assert!(twice.max_diff(&lap.apply(&f)) < 1e-9 * scale);
        let inv = frac_power_apply(&spec, -1.0, &lap.apply(&f)).unwrap();
        assert!(inv.max_diff(&f) < 1e-8);
    }

    #[test]
    fn sobolev_norm_backends_agree() {
        let (lap, spec) = setup(GroupParams::so(3), 2.0, 21);
        let f = GridField::from_real_fn(&lap.grid, |c| (-(c[0] * c[0] + c[1] * c[1]) * 3.0).exp());
        for alpha in [0.0, 1.0, 2.0, 3.0, 4.0] {
            for shifted in [false, true] {
                let a = sobolev_norm_v(&f, alpha, shifted, NormBackend::Spectral(&spec)).unwrap();
                let b = sobolev_norm_v(&f, alpha, shifted, NormBackend::Direct(&lap)).unwrap();
                assert!(
                    (a - b).abs() < 1e-9 * a.max(1.0),
                    "{alpha} {shifted} {a} {b}"
                );
            }
        }
        assert_eq!(
            sobolev_norm_v(&f, 0.0, false, NormBackend::Direct(&lap)).unwrap(),
            f.l2_norm()
        );
        assert!(sobolev_norm_v(&f, 0.5, false, NormBackend::Direct(&lap)).is_err());
        let s = sobolev_norm_v(&f, 0.5, true, NormBackend::Spectral(&spec)).unwrap();
        let u = sobolev_norm_v(&f, 0.5, false, NormBackend::Spectral(&spec)).unwrap();
        assert!(s >= u);
    }

    #[test]
    fn eigenfunction_norms() {
        let (_, spec) = setup(GroupParams::so(2), 1.0, 41);
        let k = 5;
        let vals = spec
            .eigenvectors
            .column(k)
            .iter()
            .map(|v| Complex64::new(*v, 0.0))
            .collect();
        let f = GridField {
            grid: spec.grid.clone(),
            values: vals,
        };
        let lam = spec.eigenvalues[k];
        let n = sobolev_norm_v(&f, 0.7, false, NormBackend::Spectral(&spec)).unwrap();
        assert!((n - lam.powf(0.35) * f.l2_norm()).abs() < 1e-10 * n);
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid::new(&GroupParams::so(2), 1.0, 21).unwrap();
        let lap = sublaplacian_matrix(&g).unwrap();
        let a = OperatorSpectrum::compute_cached(&lap, Some(dir.path())).unwrap();
        let b = OperatorSpectrum::compute_cached(&lap, Some(dir.path())).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.eigenvectors, b.eigenvectors);
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn too_large_for_dense() {
        let g = Grid::new(&GroupParams::so(3), 1.0, 71).unwrap();
        let lap = sublaplacian_matrix(&g).unwrap();
        assert!(matches!(
            OperatorSpectrum::compute(&lap),
            Err(Error::Budget { .. })
        ));
    }
}
