use corner::closure::{algebra_dimension, corner_dimension, span_closure, ClosureError, Multipliers};
use corner::linalg::{Fq, Matrix};
use proptest::prelude::*;

fn fq(rows: Vec<Vec<i64>>) -> Matrix<Fq> {
    Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(Fq::new).collect()).collect())
}

fn unit(n: usize, i: usize, j: usize) -> Matrix<Fq> {
    fq((0..n).map(|a| (0..n).map(|b| i64::from(a == i && b == j)).collect()).collect())
}

fn small_matrix() -> impl Strategy<Value = Matrix<Fq>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 3).prop_map(fq)
}

#[test]
fn left_ideal_of_a_matrix_unit() {
    let units: Vec<Matrix<Fq>> = (0..2).flat_map(|i| (0..2).map(move |j| unit(2, i, j))).collect();
    assert_eq!(span_closure(&[unit(2, 0, 0)], &units, 4).unwrap().dim(), 2);
}

#[test]
fn full_and_triangular_algebras() {
    let one = Fq::new(1);
    assert_eq!(algebra_dimension(2, &one, &[unit(2, 0, 1), unit(2, 1, 0)]).unwrap(), 4);
    assert_eq!(algebra_dimension(3, &one, &[unit(3, 0, 1), unit(3, 1, 2)]).unwrap(), 4);
    assert_eq!(algebra_dimension(3, &one, &[]).unwrap(), 1);
}

#[test]
fn corner_dimensions_outside_the_hypothesis() {
    let r = corner_dimension(3, 1, Multipliers::Forward, 5000).unwrap();
    assert_eq!((r.ambient_dim, r.corner_dim, r.full_dim), (24, 6, 16));
    let w = corner_dimension(3, 1, Multipliers::WithInverses, 5000).unwrap();
    assert_eq!(w.corner_dim, r.corner_dim);
    assert_eq!(w.left_ideal_dim, r.left_ideal_dim);
}

#[test]
fn guard_is_enforced() {
    assert!(matches!(corner_dimension(5, 2, Multipliers::Forward, 100), Err(ClosureError::Guard(1600, 100))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn order_of_multipliers_is_irrelevant(seed in small_matrix(), a in small_matrix(), b in small_matrix()) {
        let x = span_closure(std::slice::from_ref(&seed), &[a.clone(), b.clone()], 9).unwrap();
        let y = span_closure(&[seed], &[b, a], 9).unwrap();
        let (rx, ry) = (x.basis.rref(), y.basis.rref());
        prop_assert_eq!(rx.rows(), ry.rows());
    }

    #[test]
    fn larger_seeds_give_larger_spans(s in small_matrix(), t in small_matrix(), a in small_matrix()) {
        let small = span_closure(std::slice::from_ref(&s), std::slice::from_ref(&a), 9).unwrap();
        let large = span_closure(&[s, t], &[a], 9).unwrap();
        prop_assert!(small.dim() <= large.dim());
        for m in small.matrices() {
            prop_assert!(large.basis.contains(m.data()));
        }
    }
}

/// Independent route: close the whole algebra generated by the `Psi^_l`, then cut each element
/// down to the block. Agrees with the left-ideal computation.
fn corner_via_full_algebra(p: u64, g: usize) -> (usize, usize) {
    use corner::braidrep::Lg;
    use corner::linalg::{Echelon, FqEmbedding};
    use corner::spectral::Block;

    let lg = Lg::new(p, g).unwrap();
    let gens = lg.generators().unwrap();
    let block = Block::new(&lg, &gens, &vec![0; g]).unwrap();
    let emb = FqEmbedding::new(p).unwrap();
    let mults: Vec<Matrix<Fq>> = gens.iter().map(|x| emb.map_matrix(&x.psi).unwrap()).collect();
    let one = Matrix::identity(lg.dim, Fq::new(1));
    let algebra = span_closure(&[one], &mults, lg.dim * lg.dim).unwrap();
    let proj = emb.map_matrix(&block.proj).unwrap();
    let basis = emb.map_matrix(&block.basis).unwrap();
    let pivots = block.pivot_rows().to_vec();
    let cols: Vec<usize> = (0..basis.cols()).collect();
    let mut corner = Echelon::<Fq>::new(pivots.len() * cols.len());
    for m in algebra.matrices() {
        corner.insert(proj.mul(&m).mul(&basis).select(&pivots, &cols).into_data());
    }
    (algebra.dim(), corner.rank())
}

#[test]
fn corner_agrees_with_full_algebra_route() {
    for (p, g) in [(3, 1), (5, 1), (3, 2)] {
        let direct = corner_dimension(p, g, Multipliers::Forward, 5000).unwrap();
        let (_, via_algebra) = corner_via_full_algebra(p, g);
        assert_eq!(via_algebra, direct.corner_dim, "({p},{g})");
    }
}
