//! End-to-end check of the exact-to-finite pipeline on one small case:
//! genus 1, p = 7, reduced at the split prime q = 29 (29 = 4 * 7 + 1).
//!
//! The torus image is finite: the two twist matrices generate a central
//! extension of PSL(2, 7) by the scalar subgroup of order 7 (order
//! 1176 = 7 * 168), and determinant normalization cuts the image down to a
//! copy of PSL(2, 7) inside SL(3, q).  Reduction modulo a split prime is
//! injective on this group whenever q does not divide 1176, so the orders
//! below are the same at every admissible q.  In particular the mod-q image
//! is a proper subgroup of SL(3, q), and the certificate says so.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use skeinrep::finite_groups::{
    group_order, irreducibility, reduce_matrix, sl_order, stabilizer_chain, verify_surjectivity,
    ChainBudget, IrredOutcome, SurjectivityMode,
};
use skeinrep::tqft_rep::normalize_det;
use skeinrep::{FqMatrix, Rep, SplitPrime};

fn reduced_generators(g: u64, p: u64, q: u64, normalize: bool) -> Vec<FqMatrix> {
    let rep = Rep::new(g, p).unwrap();
    let sp = SplitPrime::new(p, q).unwrap();
    rep.generators()
        .unwrap()
        .into_iter()
        .map(|(_, m)| {
            let m = if normalize {
                normalize_det(&m).unwrap().0
            } else {
                m
            };
            reduce_matrix(&m, &sp).unwrap()
        })
        .collect()
}

#[test]
fn genus1_p7_image_mod_29_is_a_proper_subgroup() {
    let gens = reduced_generators(1, 7, 29, true);
    assert_eq!(gens.len(), 2);
    for m in &gens {
        assert_eq!(m.rows(), 3);
        assert_eq!(m.det().v, 1, "normalized generators reduce into SL");
    }
    let target = sl_order(3, 29);
    assert_eq!(target, BigUint::parse_bytes(b"499631102880", 10).unwrap());
    let chain = stabilizer_chain(&gens, 20260825, &ChainBudget::default(), Some(&target)).unwrap();
    assert_eq!(chain.order(), BigUint::from(168u32), "image is PSL(2, 7)");
    // finite but still irreducible on the natural module
    assert_eq!(
        irreducibility(&gens, 1, 64).unwrap(),
        IrredOutcome::Irreducible
    );
    // the certificate records the honest outcome
    let mut ctx = BTreeMap::new();
    ctx.insert("genus".into(), "1".into());
    ctx.insert("p".into(), "7".into());
    let cert = verify_surjectivity(
        &gens,
        SurjectivityMode::Exact,
        20260825,
        &ChainBudget::default(),
        ctx,
    )
    .unwrap();
    assert_eq!(cert.verdict, "proper-subgroup");
    assert_eq!(cert.computed_order.as_deref(), Some("168"));
    assert_eq!(cert.sl_order, "499631102880");
}

#[test]
fn genus1_p7_raw_image_order_is_stable_across_split_primes() {
    // Without determinant normalization the image keeps its order-7 center
    // (the twists have determinant zeta^2, a 7th root of unity), giving
    // 7 * |PSL(2, 7)| = 1176.  The order is identical at every split prime
    // coprime to 1176 because reduction is injective on a finite group.
    for q in [29u64, 43, 71] {
        let gens = reduced_generators(1, 7, q, false);
        let order = group_order(&gens, 7, &ChainBudget::default()).unwrap();
        assert_eq!(order, BigUint::from(1176u32), "order changed at q = {q}");
    }
}

#[test]
fn genus1_p11_image_mod_23_is_a_proper_subgroup() {
    // Same phenomenon one prime up: 7260 = 11 * |PSL(2, 11)|, far below
    // |SL(5, 23)|.
    let gens = reduced_generators(1, 11, 23, false);
    let order = group_order(&gens, 11, &ChainBudget::default()).unwrap();
    assert_eq!(order, BigUint::from(7260u32));
}
