use corner::braidrep::{braid_relation_failures, jordan, LPlus, Lg};
use corner::cyclo::Cyc;
use corner::linalg::Matrix;
use proptest::prelude::*;

fn vector(p: u64, n: usize) -> impl Strategy<Value = Vec<Cyc>> {
    prop::collection::vec(-3i64..=3, n).prop_map(move |v| v.into_iter().map(|x| Cyc::from_int(p, x)).collect())
}

#[test]
fn relations_on_v_and_l() {
    for (p, g) in [(3u64, 1usize), (3, 2), (5, 1)] {
        let lg = Lg::new(p, g).unwrap();
        let v: Vec<Matrix<Cyc>> = (1..=2 * g).map(|l| lg.psi_v(l).unwrap()).collect();
        let l: Vec<Matrix<Cyc>> = (1..=2 * g).map(|l| lg.psi_hat(l).unwrap()).collect();
        assert!(braid_relation_failures(&v).is_empty(), "V at ({p},{g})");
        assert!(braid_relation_failures(&l).is_empty(), "L at ({p},{g})");
        let id = Matrix::identity(lg.vdim, lg.one());
        for m in &v {
            assert_eq!(m.pow(p, &lg.one()), id);
        }
    }
}

#[test]
fn a_non_braid_family_is_caught() {
    // Two non-commuting involutions fail the braid relation: a b a = b a b has order-3 product.
    let one = Cyc::one(3);
    let a = Matrix::from_rows(vec![vec![Cyc::zero(), one.clone()], vec![one.clone(), Cyc::zero()]]);
    let b = Matrix::from_rows(vec![vec![one.clone(), one.clone()], vec![Cyc::zero(), Cyc::from_int(3, -1)]]);
    assert_eq!(braid_relation_failures(&[a, b]), vec![(1, 2)]);
}

#[test]
fn dimensions() {
    let lg = Lg::new(3, 1).unwrap();
    assert_eq!((lg.vdim, lg.dim), (3, 6));
    let lg = Lg::new(5, 2).unwrap();
    assert_eq!((lg.vdim, lg.dim), (25, 100));
}

#[test]
fn jordan_of_a_unipotent_block() {
    let p = 5;
    let one = Cyc::one(p);
    let eta = Cyc::eta(p, 2);
    let m = Matrix::from_rows(vec![vec![eta.clone(), eta.clone()], vec![Cyc::zero(), eta.clone()]]);
    let (ss, uni) = jordan(&m, p, "block").unwrap();
    assert_eq!(ss, Matrix::scalar(2, eta));
    assert_eq!(uni, Matrix::from_rows(vec![vec![one.clone(), one.clone()], vec![Cyc::zero(), one]]));
}

#[test]
fn good_basis_transition_has_full_rank() {
    let lp = LPlus::new(3, 1).unwrap();
    let t = lp.transition_matrix();
    assert_eq!(t.rows(), 81);
    assert_eq!(corner::linalg::rank_mod_q(&t), 81);
    for i in 1..=2 {
        assert_eq!(lp.cross_validate(i), None);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn jordan_parts_recombine(v in vector(5, 10), l in 1usize..=2) {
        let lg = Lg::new(5, 1).unwrap();
        let gen = lg.generator(l).unwrap();
        prop_assert_eq!(gen.ss.apply(&gen.uni.apply(&v)), gen.psi.apply(&v));
        prop_assert_eq!(gen.inverse.apply(&gen.psi.apply(&v)), v);
    }

    #[test]
    fn fourier_round_trip(v in vector(5, 25)) {
        let lg = Lg::new(5, 2).unwrap();
        prop_assert_eq!(lg.fourier_inverse().apply(&lg.fourier().apply(&v)), v);
    }
}
