//! Checks against values computed independently of the library's own
//! bookkeeping: norms from the native Zorn formula, the Fano table from its
//! lines, exhaustive enumeration over F_3.

use octo_rank_core::exterior::scalar_multiple_witness;
use octo_rank_core::forms::form_on;
use octo_rank_core::matrix::span_rank;
use octo_rank_core::symmetry::{fano_index_shift, invariance_audit, is_automorphism};
use octo_rank_core::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn split(p: u64) -> OctonionAlgebra {
    OctonionAlgebra::build(FieldSpec::prime(p).unwrap(), Construction::SplitZorn).unwrap()
}

/// `αβ - v·w` from native Zorn coordinates.
fn zorn_norm(a: &OctonionAlgebra, x: &Octonion) -> FieldElement {
    let n = a.to_native(x);
    let mut out = &n[0] * &n[7];
    for i in 0..3 {
        out = &out - &(&n[1 + i] * &n[4 + i]);
    }
    out
}

fn residues(p: u64, len: usize, mut t: u64) -> Vec<i64> {
    (0..len)
        .map(|_| {
            let r = t % p;
            t /= p;
            r as i64
        })
        .collect()
}

#[test]
fn f3_pure_ranks_follow_the_zorn_norm() {
    let a = split(3);
    let f = a.field();
    let (mut isotropic, mut rank4, mut rank6) = (0u64, 0u64, 0u64);
    for t in 1..3u64.pow(7) {
        let coeffs: Vec<FieldElement> = residues(3, 7, t)
            .into_iter()
            .map(|r| f.from_i64(r))
            .collect();
        let x = a.pure_from_coords(&coeffs);
        let n = zorn_norm(&a, &x);
        assert_eq!(n, a.norm(&x));
        let rank = form_on(&a, &x, Space::C0).unwrap().rank();
        if n.is_zero() {
            isotropic += 1;
            assert_eq!(rank, 4);
            rank4 += 1;
        } else {
            assert_eq!(rank, 6);
            rank6 += 1;
        }
    }
    assert_eq!((rank4, rank6), (728, 1458));
    assert_eq!(isotropic, rank4);

    let fam = FormFamily::new(&a, Space::C0).unwrap();
    let census = rank_census(&a, &fam, CensusMode::Affine).unwrap();
    assert!(census.is_clean());
    assert_eq!(census.tally.rank_count(4), rank4);
    assert_eq!(census.tally.rank_count(6), rank6);
    assert_eq!(census.tally.isotropic, isotropic);
    assert_eq!(census.square_classes_met(), 2);
}

#[test]
fn f3_non_invertible_profiles() {
    let a = split(3);
    let mut count = 0;
    for t in 1..3u64.pow(8) {
        let c = residues(3, 8, t);
        let x = a.from_i64(c.try_into().unwrap());
        if !zorn_norm(&a, &x).is_zero() {
            assert!(a.inverse(&x).is_ok());
            continue;
        }
        count += 1;
        let p = a.kernel_image_profile(&x).unwrap();
        assert_eq!(p.dims(), (4, 4, 3, 3));
        assert!(p.image_totally_isotropic && p.kernel_totally_isotropic);
    }
    // q^7 + q^4 - q^3 - 1 nonzero isotropic vectors of a split 8-dimensional form.
    assert_eq!(count, 3u64.pow(7) + 3u64.pow(4) - 3u64.pow(3) - 1);
}

#[test]
fn fano_table_matches_its_lines() {
    let a = OctonionAlgebra::build(FieldSpec::rationals(), Construction::DivisionFano).unwrap();
    let e = |i: usize| a.basis(i);
    let neg = |x: &Octonion| -x;
    for t in 0..7 {
        let line = [t % 7 + 1, (t + 1) % 7 + 1, (t + 3) % 7 + 1];
        for k in 0..3 {
            let (i, j, l) = (line[k], line[(k + 1) % 3], line[(k + 2) % 3]);
            assert_eq!(a.mul(&e(i), &e(j)), e(l));
            assert_eq!(a.mul(&e(j), &e(i)), neg(&e(l)));
        }
    }
    for i in 1..8 {
        assert_eq!(a.mul(&e(i), &e(i)), neg(a.identity()));
    }
    let shift = fano_index_shift(&a).unwrap();
    assert!(is_automorphism(&a, &shift.matrix));
}

#[test]
fn witness_matches_dependence() {
    let a = OctonionAlgebra::build(FieldSpec::rationals(), Construction::DivisionFano).unwrap();
    let fam = FormFamily::new(&a, Space::C0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for round in 0..200 {
        let y = a.random_nonzero_pure(&mut rng);
        let z = if round % 4 == 0 {
            y.scale(&a.field().random_nonzero(&mut rng))
        } else {
            a.random_nonzero_pure(&mut rng)
        };
        let (yc, zc) = (y.pure_coords(), z.pure_coords());
        let vanishing: Vec<bool> = fam
            .generators
            .iter()
            .map(|g| g.evaluate(&yc, &zc).is_zero())
            .collect();
        let dependent = span_rank(a.field(), 7, &[yc.clone(), zc.clone()]) == 1;
        let w = scalar_multiple_witness(&a, &y, &z).unwrap();
        assert_eq!(w.all_forms_vanish, dependent);
        assert_eq!(vanishing.iter().all(|v| *v), dependent);
        if let Some(i) = w.witness {
            assert!(!vanishing[i - 1]);
        }
    }
}

#[test]
fn fano_index_shift_invariance_over_q() {
    let a = OctonionAlgebra::build(FieldSpec::rationals(), Construction::DivisionFano).unwrap();
    let shift = fano_index_shift(&a).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for space in [Space::C, Space::C0] {
        let fam = FormFamily::new(&a, space).unwrap();
        let omega = OmegaMap::new(&fam).unwrap();
        assert_eq!(omega.kernel.len(), if space == Space::C { 21 } else { 14 });
        let report =
            invariance_audit(&a, &fam, &omega, std::slice::from_ref(&shift), 20, &mut rng).unwrap();
        assert!(report.passed(), "{report:?}");
    }
}
