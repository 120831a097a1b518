use corner::heis::Heis;
use corner::words::{
    boundary, delta_squared, delta_squared_commutators, fox_derive, magnus_add, magnus_left, FiniteGroup, FreeWord,
    GroupAlg,
};
use proptest::prelude::*;

fn word(n: i32, max_len: usize) -> impl Strategy<Value = FreeWord> {
    prop::collection::vec((1..=n, any::<bool>()), 0..=max_len)
        .prop_map(|ls| FreeWord::from_letters(ls.into_iter().map(|(l, s)| if s { l } else { -l })))
}

proptest! {
    #[test]
    fn parse_round_trip(w in word(4, 20)) {
        let text = w.to_string();
        prop_assert_eq!(text.parse::<FreeWord>().unwrap(), w);
    }

    #[test]
    fn inverse_cancels(w in word(4, 20)) {
        prop_assert!(w.mul(&w.inv()).is_identity());
        prop_assert_eq!(w.inv().inv(), w);
    }

    #[test]
    fn fox_is_a_crossed_homomorphism(a in word(2, 16), b in word(2, 16)) {
        let h = Heis::new(3, 1).unwrap();
        let q = h.quotient();
        let lhs = fox_derive(&a.mul(&b), &q);
        let rhs = magnus_add(&fox_derive(&a, &q), &magnus_left(&GroupAlg::monomial(q.eval(&a), 1), &fox_derive(&b, &q), &h));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn boundary_of_fox(w in word(4, 20)) {
        let h = Heis::new(3, 2).unwrap();
        let q = h.quotient();
        let want = GroupAlg::monomial(q.eval(&w), 1).sub(&GroupAlg::monomial(h.identity(), 1));
        prop_assert_eq!(boundary(&fox_derive(&w, &q), &q), want);
    }
}

#[test]
fn fox_derivative_of_commutator() {
    // d/dx1 (x1 x2 x1^-1 x2^-1) = 1 - x1 x2 x1^-1 and d/dx2 = x1 - x1 x2 x1^-1 x2^-1.
    let h = Heis::new(5, 1).unwrap();
    let q = h.quotient();
    let w: FreeWord = "x1 x2 x1^-1 x2^-1".parse().unwrap();
    let fd = fox_derive(&w, &q);
    let e = |s: &str| GroupAlg::monomial(q.eval(&s.parse::<FreeWord>().unwrap()), 1i64);
    assert_eq!(fd[0], e("").sub(&e("x1 x2 x1^-1")));
    assert_eq!(fd[1], e("x1").sub(&e("x1 x2 x1^-1 x2^-1")));
}

#[test]
fn parse_rejects_garbage() {
    for bad in ["x0", "x1^", "x1^a", "1x", "x-1"] {
        assert!(bad.parse::<FreeWord>().is_err(), "{bad}");
    }
    assert!("1".parse::<FreeWord>().unwrap().is_identity());
    assert_eq!("y2^2".parse::<FreeWord>().unwrap(), FreeWord::from_letters([2, 2]));
}

#[test]
fn delta_squared_is_a_product_of_commutators() {
    for g in 1..=5 {
        assert_eq!(delta_squared(g), delta_squared_commutators(g), "g = {g}");
    }
}
