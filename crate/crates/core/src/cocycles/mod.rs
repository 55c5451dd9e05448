//! The Busemann cocycle and the visual-measure cocycle.

mod busemann;
mod visual;

pub use busemann::{
    busemann, busemann_along_a, busemann_limit_check, chart_busemann_limit, chart_busemann_main,
    chart_busemann_smooth, log_cosh, BusemannValue, LimitRow,
};
pub use visual::{
    b_cocycle, c_cocycle, pi_action, pi_action_density, sphere_jacobian, visual_density,
    visual_density_with, CocycleValue, VisualDensity, JACOBIAN_STEP,
};

use crate::error::Result;
use crate::heisenberg::{left_invariant_field, GridField};

/// `d_𝔬 φ = (E_1 φ, …, E_{d(n−1)} φ)` on a chart grid.
pub fn d_chart_gradient(phi: &GridField) -> Result<Vec<GridField>> {
    (0..phi.grid.params.horizontal_dim())
        .map(|j| left_invariant_field(j, phi))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::GroupParams;
    use crate::heisenberg::{d_horizontal_at, dilate, hom_norm, random_heis, Grid};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gradient_of_constant_vanishes_inside() {
        let g = Grid::new(&GroupParams::su(2), 1.0, 11).unwrap();
        let one = GridField::from_real_fn(&g, |_| 1.0);
        for comp in d_chart_gradient(&one).unwrap() {
            for idx in 0..g.len() {
                if g.is_interior(idx, 1) {
                    assert_eq!(comp.values[idx].norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn real_case_is_euclidean_gradient() {
        let g = Grid::new(&GroupParams::so(3), 1.0, 21).unwrap();
        let f = GridField::from_real_fn(&g, |c| 3.0 * c[0] - 2.0 * c[1]);
        let d = d_chart_gradient(&f).unwrap();
        let idx = g.origin_index();
        assert!((d[0].values[idx].re - 3.0).abs() < 1e-12);
        assert!((d[1].values[idx].re + 2.0).abs() < 1e-12);
    }

    #[test]
    fn limit_gradient_is_homogeneous_of_degree_minus_one() {
        let p = GroupParams::su(2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let v = random_heis(&p, 1.0, &mut rng);
            if hom_norm(&v) < 0.2 {
                continue;
            }
            let norm = |w: &crate::heisenberg::HeisElement| {
                d_horizontal_at(&p, chart_busemann_limit, w, 1e-6 * hom_norm(w))
                    .iter()
                    .map(|a| a * a)
                    .sum::<f64>()
                    .sqrt()
            };
            for s in [0.5, 2.0] {
                let dv = dilate(s, &v).unwrap();
                let ratio = norm(&dv) / norm(&v);
                assert!((ratio - 1.0 / s).abs() < 0.01 / s);
            }
        }
    }
}
