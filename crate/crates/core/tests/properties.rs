use std::sync::OnceLock;

use octo_rank_core::exterior::{form_star, is_decomposable, wedge};
use octo_rank_core::forms::{form_on, restriction_rank_check};
use octo_rank_core::matrix::{intersection_dim, span_rank};
use octo_rank_core::symmetry::{act_on_form, derivation_from_pair, random_sl3, sl3_automorphism};
use octo_rank_core::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ALGEBRAS: &[(&str, &str)] = &[
    ("Q", "division-fano"),
    ("Q", "split-zorn"),
    ("Q", "cayley-dickson:-1,-1,-1"),
    ("Q", "cayley-dickson:1,-1,2"),
    ("Fp:3", "split-zorn"),
    ("Fp:5", "division-fano"),
    ("Fp:7", "cayley-dickson:-1,-1,-1"),
];

fn algebras() -> &'static [OctonionAlgebra] {
    static CELL: OnceLock<Vec<OctonionAlgebra>> = OnceLock::new();
    CELL.get_or_init(|| {
        ALGEBRAS
            .iter()
            .map(|(f, a)| OctonionAlgebra::from_spec(f.parse().unwrap(), a).unwrap())
            .collect()
    })
}

fn families(space: Space) -> &'static [FormFamily] {
    static C: OnceLock<Vec<FormFamily>> = OnceLock::new();
    static C0: OnceLock<Vec<FormFamily>> = OnceLock::new();
    let cell = match space {
        Space::C => &C,
        Space::C0 => &C0,
    };
    cell.get_or_init(|| {
        algebras()
            .iter()
            .map(|a| FormFamily::new(a, space).unwrap())
            .collect()
    })
}

fn fields() -> Vec<FieldSpec> {
    ["Q", "Fp:3", "Fp:5", "Fp:7", "Fp:4294967291"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(seed in any::<u64>(), which in 0usize..5) {
        let f = fields()[which];
        let mut r = rng(seed);
        let (a, b, c) = (f.random(&mut r), f.random(&mut r), f.random(&mut r));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn rank_nullity_and_transpose(seed in any::<u64>(), which in 0usize..5, rows in 1usize..7, cols in 1usize..7) {
        let f = fields()[which];
        let mut r = rng(seed);
        // Low-rank products exercise the degenerate paths.
        let inner = rows.min(cols).max(2) - 1;
        let m = if seed % 2 == 0 {
            Matrix::from_fn(f, rows, cols, |_, _| f.random(&mut r))
        } else {
            let a = Matrix::from_fn(f, rows, inner, |_, _| f.random(&mut r));
            let b = Matrix::from_fn(f, inner, cols, |_, _| f.random(&mut r));
            a.mul(&b)
        };
        let rank = m.rank();
        let kernel = m.kernel_basis();
        prop_assert_eq!(rank + kernel.len(), cols);
        prop_assert_eq!(rank, m.transpose().rank());
        prop_assert_eq!(rank, m.rank_by_rref());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn composition_and_alternativity(seed in any::<u64>(), which in 0usize..7) {
        let a = &algebras()[which];
        let mut r = rng(seed);
        let (x, y) = (a.random(&mut r), a.random(&mut r));
        let xy = a.mul(&x, &y);
        prop_assert_eq!(a.norm(&xy), &a.norm(&x) * &a.norm(&y));
        prop_assert_eq!(a.mul(&x, &xy), a.mul(&a.mul(&x, &x), &y));
        prop_assert_eq!(a.mul(&xy, &y), a.mul(&x, &a.mul(&y, &y)));
        prop_assert_eq!(a.conjugate(&xy), a.mul(&a.conjugate(&y), &a.conjugate(&x)));
        prop_assert_eq!(a.mul(&x, &a.conjugate(&x)), a.identity().scale(&a.norm(&x)));
    }

    #[test]
    fn form_is_norm_pairing(seed in any::<u64>(), which in 0usize..7) {
        let a = &algebras()[which];
        let mut r = rng(seed);
        let x = a.random_pure(&mut r);
        let (y, z) = (a.random(&mut r), a.random(&mut r));
        let big = form_on(a, &x, Space::C).unwrap();
        let value = big.evaluate(y.coords(), z.coords());
        prop_assert_eq!(&value, &a.polarize(&a.mul(&x, &y), &z));
        let yz = a.mul(&y, &a.conjugate(&z));
        prop_assert_eq!(&value, &-a.polarize(&x, &yz));
        prop_assert!(big.is_alternating());
    }

    #[test]
    fn radical_is_kernel_of_left_multiplication(seed in any::<u64>(), which in 0usize..7) {
        let a = &algebras()[which];
        let mut r = rng(seed);
        let x = a.random_nonzero_pure(&mut r);
        let radical = form_on(a, &x, Space::C).unwrap().radical();
        let kernel = a.left_mult_matrix(&x).kernel_basis();
        prop_assert_eq!(radical.len(), kernel.len());
        prop_assert_eq!(intersection_dim(a.field(), 8, &radical, &kernel), kernel.len());
    }

    #[test]
    fn ranks_follow_the_norm(seed in any::<u64>(), which in 0usize..7) {
        let a = &algebras()[which];
        let mut r = rng(seed);
        let x = a.random_nonzero_pure(&mut r);
        let (full, pure) = (
            form_on(a, &x, Space::C).unwrap().rank(),
            form_on(a, &x, Space::C0).unwrap().rank(),
        );
        if a.norm(&x).is_zero() {
            prop_assert_eq!((full, pure), (4, 4));
        } else {
            prop_assert_eq!((full, pure), (8, 6));
        }
    }

    #[test]
    fn family_combination_is_form_of_combination(seed in any::<u64>(), which in 0usize..7) {
        let a = &algebras()[which];
        let mut r = rng(seed);
        let coeffs: Vec<FieldElement> = (0..7).map(|_| a.field().random(&mut r)).collect();
        let x = a.pure_from_coords(&coeffs);
        for space in [Space::C, Space::C0] {
            let fam = &families(space)[which];
            let direct = form_on(a, &x, space).unwrap();
            prop_assert_eq!(&fam.combination(&coeffs), &direct);
            prop_assert!(fam.contains(&direct));
        }
    }

    #[test]
    fn epsilon_is_linear_with_even_rank(seed in any::<u64>(), which in 0usize..7) {
        let f = algebras()[which].field();
        let mut r = rng(seed);
        let n = 7;
        let bi = |r: &mut ChaCha8Rng| {
            Bivector::new((0..21).map(|_| f.random(r)).collect(), Space::C0).unwrap()
        };
        let (z1, z2) = (bi(&mut r), bi(&mut r));
        let (c1, c2) = (f.random(&mut r), f.random(&mut r));
        let combo = z1.scale(&c1).add(&z2.scale(&c2));
        let expect = z1.epsilon_matrix().scale(&c1).add(&z2.epsilon_matrix().scale(&c2));
        prop_assert_eq!(combo.epsilon_matrix(), expect);
        prop_assert_eq!(combo.epsilon_rank() % 2, 0);
        prop_assert_eq!(is_decomposable(&combo), combo.epsilon_rank() == 2);

        let x: Vec<FieldElement> = (0..n).map(|_| f.random(&mut r)).collect();
        let y: Vec<FieldElement> = (0..n).map(|_| f.random(&mut r)).collect();
        let w = wedge(&x, &y).unwrap();
        let independent = span_rank(f, n, &[x, y]) == 2;
        prop_assert_eq!(w.epsilon_rank(), if independent { 2 } else { 0 });
        prop_assert_eq!(is_decomposable(&w), independent);
    }

    #[test]
    fn omega_on_wedges_evaluates_the_generators(seed in any::<u64>(), which in 0usize..7) {
        let a = &algebras()[which];
        let mut r = rng(seed);
        for space in [Space::C, Space::C0] {
            let fam = &families(space)[which];
            let omega = OmegaMap::new(fam).unwrap();
            let (x, y) = match space {
                Space::C => (a.random(&mut r).into_coords(), a.random(&mut r).into_coords()),
                Space::C0 => (a.random(&mut r).pure_coords(), a.random(&mut r).pure_coords()),
            };
            let z = wedge(&x, &y).unwrap();
            let image = omega.apply(&z).unwrap();
            for (i, g) in fam.generators.iter().enumerate() {
                prop_assert_eq!(&image[i], &g.evaluate(&x, &y));
                prop_assert_eq!(&image[i], &form_star(g, &z).unwrap());
            }
            let k = omega.random_kernel_element(&mut r);
            prop_assert!(omega.annihilates(&k));
        }
    }

    #[test]
    fn duality_round_trip(seed in any::<u64>(), which in 0usize..7) {
        let a = &algebras()[which];
        let f = a.field();
        let mut r = rng(seed);
        for space in [Space::C, Space::C0] {
            let d = Duality::new(a, space).unwrap();
            let len = space.dim() * (space.dim() - 1) / 2;
            let z = Bivector::new((0..len).map(|_| f.random(&mut r)).collect(), space).unwrap();
            let form = d.bivector_to_altform(&z).unwrap();
            prop_assert_eq!(form.rank(), z.epsilon_rank());
            prop_assert_eq!(d.altform_to_bivector(&form).unwrap(), z);
        }
    }

    #[test]
    fn restriction_drops_rank_iff_radical_inside(seed in any::<u64>(), which in 0usize..5, n in 2usize..9) {
        let f = fields()[which];
        let mut r = rng(seed);
        let half = Matrix::from_fn(f, n, n, |i, j| if i < j { f.random(&mut r) } else { f.zero() });
        let skew = half.sub(&half.transpose());
        let hyperplane = loop {
            let h: Vec<Vector> = (0..n - 1)
                .map(|_| (0..n).map(|_| f.random(&mut r)).collect())
                .collect();
            if span_rank(f, n, &h) == n - 1 {
                break h;
            }
        };
        let report = restriction_rank_check(&skew, &hyperplane).unwrap();
        prop_assert!(report.is_consistent(), "{:?}", report);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn sl3_automorphisms_move_forms_covariantly(seed in any::<u64>(), which in 0usize..3) {
        let field: FieldSpec = ["Q", "Fp:3", "Fp:5"][which].parse().unwrap();
        let a = OctonionAlgebra::build(field, Construction::SplitZorn).unwrap();
        let mut r = rng(seed);
        let s = sl3_automorphism(&a, &random_sl3(field, &mut r)).unwrap();
        let t = sl3_automorphism(&a, &random_sl3(field, &mut r)).unwrap();
        prop_assert!(s.is_isometry(&a) && s.preserves_pure());
        let x = a.random_pure(&mut r);
        for space in [Space::C, Space::C0] {
            let fx = form_on(&a, &x, space).unwrap();
            let moved = act_on_form(&s, &fx).unwrap();
            prop_assert_eq!(&moved, &form_on(&a, &s.apply(&a, &x), space).unwrap());
            prop_assert_eq!(moved.rank(), fx.rank());
            let st = s.compose(&a, &t).unwrap();
            prop_assert_eq!(
                act_on_form(&st, &fx).unwrap(),
                act_on_form(&s, &act_on_form(&t, &fx).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn derivations_are_skew_and_fix_pure_space(seed in any::<u64>(), which in 0usize..7) {
        let a = &algebras()[which];
        let mut r = rng(seed);
        let d = derivation_from_pair(a, &a.random(&mut r), &a.random(&mut r)).unwrap();
        prop_assert!(d.is_skew(a));
        prop_assert!(d.preserves_pure());
        prop_assert!(d.apply(a, a.identity()).is_zero());
    }
}

fn as_big(x: &FieldElement) -> num_rational::BigRational {
    x.as_rational().unwrap()
}

proptest! {
    #[test]
    fn rationals_agree_with_bigrational(
        an in any::<i64>(), ad in 1i64..=i64::MAX,
        bn in any::<i64>(), bd in 1i64..=i64::MAX,
    ) {
        let f = FieldSpec::rationals();
        let a = &f.from_i64(an) * &f.from_i64(ad).inv().unwrap();
        let b = &f.from_i64(bn) * &f.from_i64(bd).inv().unwrap();
        let (ra, rb) = (as_big(&a), as_big(&b));
        prop_assert_eq!(as_big(&(&a + &b)), &ra + &rb);
        prop_assert_eq!(as_big(&(&a - &b)), &ra - &rb);
        prop_assert_eq!(as_big(&(&a * &b)), &ra * &rb);
        prop_assert_eq!(as_big(&-&a), -&ra);
        // Canonical storage: equal values compare equal regardless of route.
        let roundabout = &(&(&a * &b) + &a) - &(&a * &b);
        prop_assert_eq!(&roundabout, &a);
        if !a.is_zero() {
            prop_assert_eq!(as_big(&a.inv().unwrap()), ra.recip());
        }
    }
}
