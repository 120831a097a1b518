use corner::heis::{multi_indices, omega, GPlus, Heis};
use corner::words::{FiniteGroup, FreeWord};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = (u64, usize)> {
    prop::sample::select(vec![(3u64, 1usize), (5, 1), (3, 2), (7, 1)])
}

proptest! {
    #[test]
    fn group_axioms(((p, g), a, b, c) in params().prop_flat_map(|(p, g)| {
        let n = (p as usize).pow(2 * g as u32 + 1);
        (Just((p, g)), 0..n, 0..n, 0..n)
    })) {
        let h = Heis::new(p, g).unwrap();
        prop_assert_eq!(h.mul(h.mul(a, b), c), h.mul(a, h.mul(b, c)));
        prop_assert_eq!(h.mul(a, h.inv(a)), h.identity());
        prop_assert_eq!(h.mul(h.identity(), a), a);
    }

    #[test]
    fn normal_words_evaluate_back(((p, g), a) in params().prop_flat_map(|(p, g)| {
        (Just((p, g)), 0..(p as usize).pow(2 * g as u32 + 1))
    })) {
        let h = Heis::new(p, g).unwrap();
        prop_assert_eq!(h.quotient().eval(&h.normal_word(a)), a);
        let (e, m) = h.decode(a);
        prop_assert_eq!(h.encode(&e, m), a);
    }

    #[test]
    fn collection_matches_products(letters in prop::collection::vec(prop::sample::select(vec![-4i32, -3, -2, -1, 1, 2, 3, 4]), 0..30)) {
        let h = Heis::new(3, 2).unwrap();
        let w = FreeWord::from_letters(letters.iter().copied());
        prop_assert_eq!(h.collect(&letters), h.quotient().eval(&w));
    }

    #[test]
    fn twist_is_an_involutive_automorphism(a in 0usize..243, b in 0usize..243) {
        let gp = GPlus::new(Heis::new(3, 2).unwrap());
        let h = &gp.heis;
        prop_assert_eq!(gp.sigma(gp.sigma(a)), a);
        prop_assert_eq!(gp.sigma(h.mul(a, b)), h.mul(gp.sigma(a), gp.sigma(b)));
    }
}

#[test]
fn orders_and_class_counts() {
    for (p, g, order, classes) in [(3u64, 1usize, 27usize, 11usize), (5, 1, 125, 29), (3, 2, 243, 83)] {
        let h = Heis::new(p, g).unwrap();
        assert_eq!(h.order(), order);
        assert_eq!(h.conjugacy_classes(), classes);
    }
}

#[test]
fn commutators_follow_omega() {
    let h = Heis::new(5, 2).unwrap();
    for i in 1..=4 {
        for j in 1..=4 {
            let comm = h.mul(h.mul(h.x(i), h.x(j)), h.mul(h.inv(h.x(i)), h.inv(h.x(j))));
            assert_eq!(comm, h.c_pow(omega(i, j)), "({i}, {j})");
        }
    }
}

#[test]
fn extension_has_twice_the_order() {
    let gp = GPlus::new(Heis::new(3, 1).unwrap());
    assert_eq!(gp.order(), 54);
    for j in 1..=3 {
        assert_eq!(gp.mul(gp.y(j), gp.y(j)), gp.identity());
    }
    assert_eq!(gp.sigma(gp.heis.x(1)), gp.heis.inv(gp.heis.x(1)));
}

#[test]
fn matrix_units_are_scaled_by_p_to_the_minus_g() {
    // E_ij as a product of averages satisfies E_ii^2 = p^-g E_ii in C[G].
    use corner::cyclo::Cyc;
    let h = Heis::new(3, 1).unwrap();
    let idx = multi_indices(3, 1);
    for i in &idx {
        let e = h.matrix_unit(i, i);
        assert_eq!(e.mul(&e, &h).scale(&Cyc::from_int(3, 3)), e);
    }
}

#[test]
fn guard_rejects_huge_groups() {
    assert!(Heis::new(101, 3).is_err());
    assert!(Heis::new(3, 0).is_err());
}
