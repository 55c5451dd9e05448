use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rankone::cocycles::busemann;
use rankone::groups::{
    act_boundary, act_disk, random_boundary_point, random_disk_point, random_element,
};
use rankone::heisenberg::{dilate, hom_norm, random_heis, v_inv, v_mul};
use rankone::{FieldTag, GroupParams, Scalar};

fn quaternion() -> impl Strategy<Value = Scalar> {
    prop::array::uniform4(-3.0..3.0f64)
        .prop_map(|c| Scalar::from_components(FieldTag::Quaternion, &c))
}

fn family() -> impl Strategy<Value = GroupParams> {
    prop_oneof![
        (2usize..5).prop_map(GroupParams::so),
        (1usize..4).prop_map(GroupParams::su),
        (1usize..3).prop_map(GroupParams::sp),
    ]
}

proptest! {
    #[test]
    fn quaternion_algebra(a in quaternion(), b in quaternion(), c in quaternion()) {
        let scale = (a.abs() * b.abs() * c.abs()).max(1.0);
        prop_assert!(((a * b) * c).max_diff(&(a * (b * c))) <= 1e-12 * scale);
        prop_assert!(((a * b).abs() - a.abs() * b.abs()).abs() <= 1e-12 * scale);
        prop_assert!((a * b).conj().max_diff(&(b.conj() * a.conj())) <= 1e-12 * scale);
        if a.abs() > 1e-3 {
            prop_assert!((a * a.inv()).max_diff(&Scalar::one(FieldTag::Quaternion)) <= 1e-12);
        }
    }

    #[test]
    fn heisenberg_law(p in family(), seed in any::<u64>(), s in 0.1..10.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (random_heis(&p, 1.0, &mut rng), random_heis(&p, 1.0, &mut rng), random_heis(&p, 1.0, &mut rng));
        prop_assert!(v_mul(&v_mul(&a, &b), &c).max_diff(&v_mul(&a, &v_mul(&b, &c))) <= 1e-12);
        prop_assert!(v_mul(&a, &v_inv(&a)).max_diff(&rankone::HeisElement::identity(&p)) <= 1e-12);
        // dilations are automorphisms and scale the gauge
        let (da, db) = (dilate(s, &a).unwrap(), dilate(s, &b).unwrap());
        prop_assert!(v_mul(&da, &db).max_diff(&dilate(s, &v_mul(&a, &b)).unwrap()) <= 1e-10 * s * s);
        prop_assert!((hom_norm(&da) - s * hom_norm(&a)).abs() <= 1e-12 * s * hom_norm(&a).max(1.0));
    }

    #[test]
    fn busemann_cocycle(p in family(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_disk_point(&p, 3.0, &mut rng);
        let y = random_disk_point(&p, 3.0, &mut rng);
        let w = random_disk_point(&p, 3.0, &mut rng);
        let z = random_boundary_point(&p, &mut rng);
        let sum = busemann(&x, &y, &z) + busemann(&y, &w, &z);
        prop_assert!((sum - busemann(&x, &w, &z)).abs() <= 1e-10);
        let g = random_element(&p, 1.0, &mut rng);
        let moved = busemann(&act_disk(&g, &x).unwrap(), &act_disk(&g, &y).unwrap(), &act_boundary(&g, &z).unwrap());
        prop_assert!((moved - busemann(&x, &y, &z)).abs() <= 1e-10);
    }
}
