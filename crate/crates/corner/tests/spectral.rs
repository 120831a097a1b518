use corner::cyclo::Cyc;
use corner::linalg::Matrix;
use corner::spectral::{expected_a_minpoly, is_idempotent, minimal_polynomial, AForm, Norm, SpectralError, ZeroBlock};

#[test]
fn operators_vanish_at_three() {
    assert!(matches!(ZeroBlock::new(3, 1, Norm::Consistent), Err(SpectralError::Vanishing(_))));
}

#[test]
fn block_at_five_one() {
    let zb = ZeroBlock::new(5, 1, Norm::Consistent).unwrap();
    assert_eq!((zb.block.dim(), zb.block.n_odd()), (4, 2));
    assert!(is_idempotent(zb.proj()));
    assert!(zb.check_operator_b().is_empty());
    assert!(zb.check_operator_b_dag(1).is_empty());
    assert!(zb.check_unil().is_empty());
    assert!(zb.check_phi_even_expansion().is_empty());
    assert!(zb.check_theta().unwrap());
}

#[test]
fn displayed_and_consistent_readings_at_five_two() {
    let zc = ZeroBlock::new(5, 2, Norm::Consistent).unwrap();
    let zd = ZeroBlock::new(5, 2, Norm::Displayed).unwrap();
    let pp = &zc.lg.pp;
    assert!(zc.check_operator_b().is_empty());
    assert!(!zd.check_operator_b().is_empty());
    assert!(zc.check_a(&AForm::consistent(pp)).is_empty());
    assert!(!zd.check_a(&AForm::displayed(pp)).is_empty());
    // D_l squares to -D_l, and T_g vanishes.
    for d in &zc.ops.d {
        assert_eq!(d.mul(d), d.neg());
    }
    assert!(zc.ops.t.is_zero());
}

#[test]
fn a_minimal_polynomial_at_five_two_is_cubic() {
    let zb = ZeroBlock::new(5, 2, Norm::Consistent).unwrap();
    let one = zb.lg.one();
    let m = minimal_polynomial(&zb.on_odd(&zb.ops.a[0]).unwrap(), &one);
    // t^3 - t
    let want = vec![Cyc::zero(), Cyc::from_int(5, -1), Cyc::zero(), one.clone()];
    assert_eq!(m, want);
    assert_ne!(m, expected_a_minpoly(&corner::cyclo::h_const(&zb.lg.pp)));
}

#[test]
fn minimal_polynomial_of_small_matrices() {
    let one = Cyc::one(5);
    let two = Cyc::from_int(5, 2);
    let diag = Matrix::from_rows(vec![vec![one.clone(), Cyc::zero()], vec![Cyc::zero(), two.clone()]]);
    // (t - 1)(t - 2) = t^2 - 3t + 2
    assert_eq!(minimal_polynomial(&diag, &one), vec![two.clone(), Cyc::from_int(5, -3), one.clone()]);
    assert_eq!(minimal_polynomial(&Matrix::scalar(3, two.clone()), &one), vec![Cyc::from_int(5, -2), one]);
}
