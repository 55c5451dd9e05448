//! Group-axiom and cocycle-identity suites on random instances.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::{CocycleReport, Criterion};
use crate::cocycles::{b_cocycle, busemann, c_cocycle, pi_action_density, visual_density};
use crate::error::{Error, Result};
use crate::groups::{
    act_boundary, act_disk, random_boundary_point, random_disk_point, random_element, random_k,
    BoundaryPoint, GroupElement, GroupParams,
};
use crate::heisenberg::{random_heis, v_mul};
use crate::scalars::random_scalar;

/// Relative form residual, scaled by the squared entry size.
fn q_rel(g: &GroupElement) -> f64 {
    g.q_residual() / g.matrix.max_abs().powi(2).max(1.0)
}

fn random_generator(params: &GroupParams, rng: &mut ChaCha8Rng) -> Result<GroupElement> {
    Ok(match rng.gen_range(0..5) {
        0 => GroupElement::a(params, rng.gen_range(-0.5..0.5)),
        1 => GroupElement::w0(params),
        2 => random_k(params, rng),
        3 => GroupElement::v(params, &random_heis(params, 0.3, rng))?,
        _ => GroupElement::n(params, &random_heis(params, 0.3, rng))?,
    })
}

/// Scalar algebra, form preservation of generators and long products,
/// `w₀ v w₀ = n` and the group law of `V` against matrix products.
pub fn verify_group(params: &GroupParams, samples: usize, seed: u64) -> Result<CocycleReport> {
    if samples == 0 {
        return Err(Error::Usage("need at least one sample".into()));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = params.field;
    let mut rep = CocycleReport::new("verify-group", params, &["check", "residual"]);
    let record =
        |rep: &mut CocycleReport, id: usize, name: &str, residual: f64, tol: f64, what: &str| {
            rep.push_row(vec![id as f64, residual]);
            rep.check(Criterion::at_most(name, residual, tol, what));
        };

    let (mut modulus, mut conj): (f64, f64) = (0.0, 0.0);
    for _ in 0..samples.max(1000) {
        let (z, w) = (random_scalar(f, &mut rng), random_scalar(f, &mut rng));
        let zw = z * w;
        modulus = modulus
            .max((zw.abs() - z.abs() * w.abs()).abs() / (z.abs() * w.abs()).max(f64::MIN_POSITIVE));
        conj = conj.max(zw.conj().max_diff(&(w.conj() * z.conj())));
    }
    record(
        &mut rep,
        0,
        "modulus_multiplicative",
        modulus,
        1e-13,
        "||zw| − |z||w|| / |z||w|",
    );
    record(
        &mut rep,
        1,
        "conjugation_antihomomorphism",
        conj,
        1e-14,
        "conj(zw) − conj(w)conj(z)",
    );

    let u = GroupElement::u_matrix(params);
    let id = GroupElement::identity(params);
    let w0 = GroupElement::w0(params);
    let involutions = (&u * &u)
        .max_diff(&id.matrix)
        .max(w0.mul(&w0).max_diff(&id));
    let mut gens = vec![w0];
    for t in [0.5, 3.0, 5.0, -2.0] {
        gens.push(GroupElement::a(params, t));
    }
    let (mut vn, mut law, mut inv_res): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..samples {
        let h = random_heis(params, 1.0, &mut rng);
        let h2 = random_heis(params, 1.0, &mut rng);
        let (v, n) = (GroupElement::v(params, &h)?, GroupElement::n(params, &h)?);
        let w0 = &gens[0];
        vn = vn.max(w0.mul(&v).mul(w0).max_diff(&n));
        let v2 = GroupElement::v(params, &h2)?;
        law = law.max(
            v2.mul(&v)
                .max_diff(&GroupElement::v(params, &v_mul(&h2, &h))?),
        );
        let k = random_k(params, &mut rng);
        inv_res = inv_res.max(k.mul(&k.inverse()).max_diff(&id));
        gens.extend([v, n, k]);
    }
    let gen_q = gens.iter().map(q_rel).fold(0.0, f64::max);
    record(
        &mut rep,
        2,
        "generators_preserve_q",
        gen_q,
        1e-9,
        "a(t), w₀, v, n and K samples",
    );

    let mut prod_q: f64 = 0.0;
    for _ in 0..samples {
        let mut g = GroupElement::identity(params);
        for _ in 0..20 {
            g = g.mul(&random_generator(params, &mut rng)?);
        }
        prod_q = prod_q.max(q_rel(&g));
    }
    record(
        &mut rep,
        3,
        "products_preserve_q",
        prod_q,
        1e-9,
        "20-fold products of generators",
    );
    record(
        &mut rep,
        4,
        "w0_conjugation",
        vn,
        1e-9,
        "w₀ v(x, y) w₀ − n(x, y)",
    );
    record(&mut rep, 5, "v_group_law", law, 1e-9, "v(h′) v(h) − v(h′h)");
    let a = GroupElement::a(params, 3.0)
        .mul(&GroupElement::a(params, -3.0))
        .max_diff(&id);
    record(&mut rep, 6, "a_one_parameter", a, 1e-9, "a(3) a(−3) − 1");
    record(
        &mut rep,
        7,
        "inverse_through_form",
        inv_res,
        1e-9,
        "k k⁻¹ − 1",
    );
    record(
        &mut rep,
        8,
        "involutions",
        involutions,
        1e-12,
        "w₀² − 1 and U² − 1",
    );
    rep.runtime_seconds = start.elapsed().as_secs_f64();
    Ok(rep)
}

/// Cocycle identity and `G`-equivariance of the Busemann and visual-measure
/// cocycles on `samples` random instances.
pub fn verify_cocycle(params: &GroupParams, samples: usize, seed: u64) -> Result<CocycleReport> {
    if samples == 0 {
        return Err(Error::Usage("need at least one sample".into()));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = CocycleReport::new("verify-cocycle", params, &["check", "residual"]);

    let (mut b_id, mut b_eq): (f64, f64) = (0.0, 0.0);
    for _ in 0..samples {
        let x = random_disk_point(params, 3.0, &mut rng);
        let y = random_disk_point(params, 3.0, &mut rng);
        let w = random_disk_point(params, 3.0, &mut rng);
        let z = random_boundary_point(params, &mut rng);
        b_id = b_id.max((busemann(&x, &y, &z) + busemann(&y, &w, &z) - busemann(&x, &w, &z)).abs());
        let g = random_element(params, 1.0, &mut rng);
        let moved = busemann(
            &act_disk(&g, &x)?,
            &act_disk(&g, &y)?,
            &act_boundary(&g, &z)?,
        );
        b_eq = b_eq.max((moved - busemann(&x, &y, &z)).abs());
    }

    // visual: c(x,y) + c(y,w) = c(x,w), π(g)c(x,y) = c(gx,gy), b_{gh} = π(g)b_h + b_g
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
    let (mut c_id, mut c_eq, mut b_co): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..samples {
        let pts: Vec<BoundaryPoint> = (0..2)
            .map(|_| random_boundary_point(params, &mut rng))
            .collect();
        let x = random_disk_point(params, 1.5, &mut rng);
        let y = random_disk_point(params, 1.5, &mut rng);
        let w = random_disk_point(params, 1.5, &mut rng);
        let (cxy, cyw, cxw) = (
            c_cocycle(&x, &y, &pts)?,
            c_cocycle(&y, &w, &pts)?,
            c_cocycle(&x, &w, &pts)?,
        );
        for i in 0..pts.len() {
            c_id = c_id.max(rel(cxy.samples[i] + cyw.samples[i], cxw.samples[i]));
        }
        let g = random_element(params, 1.0, &mut rng);
        let lhs = pi_action_density(
            &g,
            |z| {
                let s = std::slice::from_ref(z);
                Ok(visual_density(&y, s)?.density[0] - visual_density(&x, s)?.density[0])
            },
            &pts,
        )?;
        let rhs = c_cocycle(&act_disk(&g, &x)?, &act_disk(&g, &y)?, &pts)?;
        for (a, b) in lhs.iter().zip(&rhs.samples) {
            c_eq = c_eq.max(rel(*a, *b));
        }
        let h = random_element(params, 1.0, &mut rng);
        let bgh = b_cocycle(&g.mul(&h), &pts)?;
        let bg = b_cocycle(&g, &pts)?;
        let pib = pi_action_density(
            &g,
            |z| Ok(b_cocycle(&h, std::slice::from_ref(z))?.samples[0]),
            &pts,
        )?;
        for i in 0..pts.len() {
            b_co = b_co.max(rel(pib[i] + bg.samples[i], bgh.samples[i]));
        }
    }
    for (id, (name, res, tol, what)) in [
        (
            "busemann_cocycle_identity",
            b_id,
            1e-11,
            "γ_{x,y} + γ_{y,w} − γ_{x,w}",
        ),
        (
            "busemann_equivariance",
            b_eq,
            1e-11,
            "γ_{gx,gy}(gz) − γ_{x,y}(z)",
        ),
        (
            "visual_cocycle_identity",
            c_id,
            1e-7,
            "c(x,y) + c(y,w) − c(x,w), relative",
        ),
        (
            "visual_equivariance",
            c_eq,
            1e-7,
            "π(g)c(x,y) − c(gx,gy), relative",
        ),
        (
            "visual_b_cocycle",
            b_co,
            1e-7,
            "b_{gh} − π(g)b_h − b_g, relative",
        ),
    ]
    .into_iter()
    .enumerate()
    {
        rep.push_row(vec![id as f64, res]);
        rep.check(Criterion::at_most(name, res, tol, what));
    }
    rep.note(format!("{samples} random instances per identity"));
    rep.runtime_seconds = start.elapsed().as_secs_f64();
    Ok(rep)
}
