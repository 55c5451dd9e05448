//! Visual measures `μ_x = (g⁻¹)^* μ₀` for `g·0 = x`, the cocycle
//! `c(x, y) = μ_y − μ_x`, and the action of `G` on boundary functions and
//! densities.
//!
//! Functions transform by `(π(g)φ)(z) = φ(g⁻¹z)`. Densities against the
//! normalized round measure transform by `(π(g)μ)(z) = μ(g⁻¹z) J_{g⁻¹}(z)`,
//! which is the push-forward by `g`.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::groups::{act_boundary, translation_to, BoundaryPoint, DiskPoint, GroupElement};

/// Base step of the central differences, scaled down by `|g₀₀| = cosh d(0, g⁻¹0)`.
pub const JACOBIAN_STEP: f64 = 1e-5;

/// Orthonormal frame of `T_z S^{k−1}` from the Householder reflection sending `e₀` to `±z`.
fn tangent_frame(z: &[f64]) -> Vec<Vec<f64>> {
    let k = z.len();
    let sign = if z[0] > 0.0 { -1.0 } else { 1.0 };
    let mut v: Vec<f64> = z.iter().map(|c| sign * c).collect();
    v[0] += 1.0;
    let vv: f64 = v.iter().map(|c| c * c).sum();
    (1..k)
        .map(|col| {
            (0..k)
                .map(|row| f64::from(u8::from(row == col)) - 2.0 * v[row] * v[col] / vv)
                .collect()
        })
        .collect()
}

/// Volume Jacobian of `z ↦ g·z` on the sphere at `z`, for the round measure.
pub fn sphere_jacobian(g: &GroupElement, z: &BoundaryPoint) -> Result<f64> {
    let field = g.params.field;
    let zr = z.real_coords();
    let frame = tangent_frame(&zr);
    let step = JACOBIAN_STEP / g.matrix.get(0, 0).abs().max(1.0);
    let image = |s: f64, e: &[f64]| -> Result<Vec<f64>> {
        let (c, sn) = (s.cos(), s.sin());
        let p: Vec<f64> = zr.iter().zip(e).map(|(a, b)| c * a + sn * b).collect();
        Ok(act_boundary(g, &BoundaryPoint::from_real(field, &p))?.real_coords())
    };
    let mut cols = Vec::with_capacity(frame.len());
    for e in &frame {
        let (plus, minus) = (image(step, e)?, image(-step, e)?);
        cols.push(
            plus.iter()
                .zip(&minus)
                .map(|(a, b)| (a - b) / (2.0 * step))
                .collect::<Vec<f64>>(),
        );
    }
    let k = cols.len();
    let gram = DMatrix::from_fn(k, k, |i, j| {
        cols[i]
            .iter()
            .zip(&cols[j])
            .map(|(a, b)| a * b)
            .sum::<f64>()
    });
    let det = gram.determinant();
    if !(det > 0.0) {
        return Err(Error::Numerical {
            what: "sphere Jacobian Gram determinant not positive".into(),
            residual: det,
        });
    }
    Ok(det.sqrt())
}

/// Samples of `dμ_x/dμ₀` on a set of boundary points.
#[derive(Debug, Clone)]
pub struct VisualDensity {
    pub basepoint: DiskPoint,
    pub density: Vec<f64>,
}

/// `dμ_x/dμ₀(z) = J_{g⁻¹}(z)` for a `g` with `g·0 = x`.
pub fn visual_density_with(g: &GroupElement, points: &[BoundaryPoint]) -> Result<Vec<f64>> {
    let gi = g.inverse();
    points.par_iter().map(|z| sphere_jacobian(&gi, z)).collect()
}

/// [`visual_density_with`] for the element `k a(t)` of [`translation_to`].
pub fn visual_density(x: &DiskPoint, points: &[BoundaryPoint]) -> Result<VisualDensity> {
    let g = translation_to(x)?;
    Ok(VisualDensity {
        basepoint: x.clone(),
        density: visual_density_with(&g, points)?,
    })
}

/// A signed density sampled on boundary points.
#[derive(Debug, Clone)]
pub struct CocycleValue {
    pub samples: Vec<f64>,
}

impl CocycleValue {
    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |a: f64, v| a.max(v.abs()))
    }
}

/// `c(x, y) = μ_y − μ_x`.
pub fn c_cocycle(x: &DiskPoint, y: &DiskPoint, points: &[BoundaryPoint]) -> Result<CocycleValue> {
    let mx = visual_density(x, points)?;
    let my = visual_density(y, points)?;
    Ok(CocycleValue {
        samples: my
            .density
            .iter()
            .zip(&mx.density)
            .map(|(a, b)| a - b)
            .collect(),
    })
}

/// `b_g = c(g·0, 0) = μ₀ − μ_{g0}`, with `μ_{g0}` computed through `g` itself.
pub fn b_cocycle(g: &GroupElement, points: &[BoundaryPoint]) -> Result<CocycleValue> {
    let mg = visual_density_with(g, points)?;
    Ok(CocycleValue {
        samples: mg.iter().map(|v| 1.0 - v).collect(),
    })
}

/// `(π(g)φ)(z) = φ(g⁻¹z)` on the given points.
pub fn pi_action<F>(g: &GroupElement, phi: F, points: &[BoundaryPoint]) -> Result<Vec<f64>>
where
    F: Fn(&BoundaryPoint) -> f64 + Sync,
{
    let gi = g.inverse();
    points
        .par_iter()
        .map(|z| Ok(phi(&act_boundary(&gi, z)?)))
        .collect()
}

/// `(π(g)μ)(z) = μ(g⁻¹z) J_{g⁻¹}(z)` on the given points.
pub fn pi_action_density<F>(g: &GroupElement, mu: F, points: &[BoundaryPoint]) -> Result<Vec<f64>>
where
    F: Fn(&BoundaryPoint) -> Result<f64> + Sync,
{
    let gi = g.inverse();
    points
        .par_iter()
        .map(|z| Ok(mu(&act_boundary(&gi, z)?)? * sphere_jacobian(&gi, z)?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::matrix::inner;
    use crate::groups::{
        a_origin, act_disk, random_boundary_point, random_disk_point, random_element, random_k,
        GroupParams,
    };
    use crate::spectral::{circle_nodes, circle_transform_real};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// `((1 − |x|²)^{1/2} / |1 − ⟨x, z⟩|)^r`, the closed-form visual density.
    fn poisson(x: &DiskPoint, z: &BoundaryPoint, r: usize) -> f64 {
        let one = crate::scalars::Scalar::one(x.z[0].field);
        ((1.0 - x.norm_sqr()).sqrt() / (one - inner(&x.z, &z.z)).abs()).powi(r as i32)
    }

    fn circle_points(n: usize) -> Vec<BoundaryPoint> {
        let f = GroupParams::so(2).field;
        circle_nodes(n)
            .iter()
            .map(|t| BoundaryPoint::from_real(f, &[t.sin(), t.cos()]))
            .collect()
    }

    #[test]
    fn origin_density_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in [GroupParams::so(3), GroupParams::su(2), GroupParams::sp(2)] {
            let pts: Vec<BoundaryPoint> = (0..20)
                .map(|_| random_boundary_point(&p, &mut rng))
                .collect();
            let d = visual_density(&DiskPoint::origin(&p), &pts).unwrap();
            assert!(d.density.iter().all(|v| (v - 1.0).abs() < 1e-9));
        }
    }

    #[test]
    fn matches_closed_form_in_every_field() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for p in [
            GroupParams::so(2),
            GroupParams::so(3),
            GroupParams::su(2),
            GroupParams::su(3),
            GroupParams::sp(2),
        ] {
            let expo = p.r();
            for _ in 0..10 {
                let x = random_disk_point(&p, 2.5, &mut rng);
                let pts: Vec<BoundaryPoint> = (0..10)
                    .map(|_| random_boundary_point(&p, &mut rng))
                    .collect();
                let d = visual_density(&x, &pts).unwrap();
                for (z, v) in pts.iter().zip(&d.density) {
                    let exact = poisson(&x, z, expo);
                    assert!(
                        (v - exact).abs() < 1e-7 * exact.max(1.0),
                        "{} {v} {exact}",
                        p.label()
                    );
                }
            }
        }
    }

    #[test]
    fn independent_of_the_chosen_element() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in [GroupParams::so(3), GroupParams::su(2), GroupParams::sp(2)] {
            let x = random_disk_point(&p, 2.0, &mut rng);
            let g = translation_to(&x).unwrap();
            let g2 = g.mul(&random_k(&p, &mut rng));
            assert!(act_disk(&g2, &DiskPoint::origin(&p)).unwrap().max_diff(&x) < 1e-12);
            let pts: Vec<BoundaryPoint> = (0..30)
                .map(|_| random_boundary_point(&p, &mut rng))
                .collect();
            let a = visual_density_with(&g, &pts).unwrap();
            let b = visual_density_with(&g2, &pts).unwrap();
            let diff = a
                .iter()
                .zip(&b)
                .map(|(u, v)| (u - v).abs() / u.max(1.0))
                .fold(0.0, f64::max);
            assert!(diff < 1e-8, "{diff}");
        }
    }

    #[test]
    fn circle_fourier_coefficients_are_powers_of_rho() {
        let p = GroupParams::so(2);
        let pts = circle_points(1024);
        for t in [0.5, 1.5, 3.0] {
            let d = visual_density(&a_origin(&p, t), &pts).unwrap();
            let s = circle_transform_real(&d.density, 20).unwrap();
            let rho = (t / 2.0).tanh();
            for m in -20isize..=20 {
                assert!((s.circle_mode(m).norm() - rho.powi(m.unsigned_abs() as i32)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn cocycle_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = GroupParams::su(2);
        let pts: Vec<BoundaryPoint> = (0..40)
            .map(|_| random_boundary_point(&p, &mut rng))
            .collect();
        let (x, y, w) = (
            random_disk_point(&p, 1.5, &mut rng),
            random_disk_point(&p, 1.5, &mut rng),
            random_disk_point(&p, 1.5, &mut rng),
        );
        let cxy = c_cocycle(&x, &y, &pts).unwrap();
        let cyw = c_cocycle(&y, &w, &pts).unwrap();
        let cxw = c_cocycle(&x, &w, &pts).unwrap();
        for i in 0..pts.len() {
            assert!((cxy.samples[i] + cyw.samples[i] - cxw.samples[i]).abs() < 1e-9);
        }
        assert_eq!(c_cocycle(&x, &x, &pts).unwrap().max_abs(), 0.0);

        // π(g) c(x, y) = c(gx, gy), with c(x, y) evaluated through closed-form-free densities.
        let g = random_element(&p, 1.0, &mut rng);
        let (gx, gy) = (act_disk(&g, &x).unwrap(), act_disk(&g, &y).unwrap());
        let lhs = pi_action_density(
            &g,
            |z| {
                let a = visual_density(&y, std::slice::from_ref(z))?.density[0];
                let b = visual_density(&x, std::slice::from_ref(z))?.density[0];
                Ok(a - b)
            },
            &pts,
        )
        .unwrap();
        let rhs = c_cocycle(&gx, &gy, &pts).unwrap();
        for (a, b) in lhs.iter().zip(&rhs.samples) {
            assert!((a - b).abs() < 1e-7 * b.abs().max(1.0));
        }

        // b_{gh} = π(g) b_h + b_g.
        let h = random_element(&p, 1.0, &mut rng);
        let bgh = b_cocycle(&g.mul(&h), &pts).unwrap();
        let bg = b_cocycle(&g, &pts).unwrap();
        let pib = pi_action_density(
            &g,
            |z| Ok(b_cocycle(&h, std::slice::from_ref(z))?.samples[0]),
            &pts,
        )
        .unwrap();
        for i in 0..pts.len() {
            assert!(
                (bgh.samples[i] - pib[i] - bg.samples[i]).abs()
                    < 1e-7 * bgh.samples[i].abs().max(1.0)
            );
        }
    }

    #[test]
    fn function_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = GroupParams::so(3);
        let pts: Vec<BoundaryPoint> = (0..30)
            .map(|_| random_boundary_point(&p, &mut rng))
            .collect();
        let phi = |z: &BoundaryPoint| z.z[0].re() * z.z[2].re() + z.z[1].re();
        let e = GroupElement::identity(&p);
        let same = pi_action(&e, phi, &pts).unwrap();
        assert!(same
            .iter()
            .zip(&pts)
            .all(|(v, z)| (v - phi(z)).abs() < 1e-15));
        let g = random_element(&p, 1.0, &mut rng);
        let h = random_element(&p, 1.0, &mut rng);
        let two_step = pi_action(
            &g,
            |z| pi_action(&h, phi, std::slice::from_ref(z)).unwrap()[0],
            &pts,
        )
        .unwrap();
        let one_step = pi_action(&g.mul(&h), phi, &pts).unwrap();
        assert!(two_step
            .iter()
            .zip(&one_step)
            .all(|(a, b)| (a - b).abs() < 1e-8));
        let c = pi_action(&g, |_| 4.0, &pts).unwrap();
        assert!(c.iter().all(|v| *v == 4.0));
    }
}
