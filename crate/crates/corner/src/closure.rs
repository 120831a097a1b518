//! Span closure of a set of matrices under left multiplication, the corner dimension of the
//! algebra generated by the braid action on the `0`-block, and the dimensions of the algebras
//! induced on the two factors of `0 < L_odd(0) < L(0)`.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::braidrep::Lg;
use crate::cyclo::Cyc;
use crate::linalg::{Echelon, Fq, FqEmbedding, Matrix, Scalar};
use crate::spectral::{Block, SpectralError, ZeroBlock};

#[derive(Debug, Error)]
pub enum ClosureError {
    #[error("span reached dimension {0}, over the cap {1}")]
    CapExceeded(usize, usize),
    #[error("matrix shapes differ")]
    Shape,
    #[error("ambient size {0} over the guard {1}")]
    Guard(usize, usize),
    #[error("no {0}-th roots of unity modulo the working prime")]
    NoEmbedding(u64),
    #[error("a constant has a denominator divisible by the working prime")]
    BadReduction,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Result of a span closure.
#[derive(Debug, Clone)]
pub struct Closure<T> {
    pub rows: usize,
    pub cols: usize,
    pub basis: Echelon<T>,
    /// Dimension after each round; entry 0 is the seed span.
    pub growth: Vec<usize>,
    /// Set when the run stopped because `stop` returned `true`.
    pub stopped_early: bool,
}

impl<T: Scalar> Closure<T> {
    pub fn dim(&self) -> usize {
        self.basis.rank()
    }

    pub fn matrices(&self) -> Vec<Matrix<T>> {
        self.basis.rows().iter().map(|r| Matrix::from_data(self.rows, self.cols, r.clone())).collect()
    }
}

/// Smallest subspace containing `seed` and closed under `X -> M X` for every multiplier.
///
/// Rounds work on the frontier of vectors added in the previous round. Candidates of a round
/// are formed and reduced against the basis in parallel; they are then inserted one at a time
/// in a fixed order, so the basis is the same for every thread count. `on_insert` sees each new
/// basis matrix; when it returns `true` the closure stops.
pub fn span_closure_with<T: Scalar>(
    seed: &[Matrix<T>],
    multipliers: &[Matrix<T>],
    cap: usize,
    mut on_insert: impl FnMut(&Matrix<T>) -> bool,
) -> Result<Closure<T>, ClosureError> {
    let Some(first) = seed.first() else {
        return Ok(Closure { rows: 0, cols: 0, basis: Echelon::new(0), growth: vec![0], stopped_early: false });
    };
    let (rows, cols) = (first.rows(), first.cols());
    if seed.iter().any(|s| s.rows() != rows || s.cols() != cols)
        || multipliers.iter().any(|m| m.rows() != rows || m.cols() != rows)
    {
        return Err(ClosureError::Shape);
    }
    let mut basis = Echelon::new(rows * cols);
    let mut frontier = Vec::new();
    let mut stopped = false;
    for s in seed {
        if basis.insert(s.data().to_vec()) {
            let m = Matrix::from_data(rows, cols, basis.rows().last().expect("just inserted").clone());
            stopped = on_insert(&m);
            frontier.push(m);
            if stopped {
                break;
            }
        }
    }
    let mut growth = vec![basis.rank()];
    while !frontier.is_empty() && !stopped {
        if basis.rank() > cap {
            return Err(ClosureError::CapExceeded(basis.rank(), cap));
        }
        let snapshot = basis.rank();
        let candidates: Vec<Vec<T>> = frontier
            .par_iter()
            .flat_map_iter(|f| multipliers.iter().map(move |m| m.mul(f)))
            .map(|c| {
                let mut v = c.into_data();
                basis.reduce_from(&mut v, 0);
                v
            })
            .collect();
        let mut next = Vec::new();
        for mut v in candidates {
            if v.iter().all(T::is_zero) {
                continue;
            }
            basis.reduce_from(&mut v, snapshot);
            if basis.push_reduced(v) {
                let m = Matrix::from_data(rows, cols, basis.rows().last().expect("just inserted").clone());
                stopped = on_insert(&m);
                next.push(m);
                if stopped {
                    break;
                }
            }
        }
        growth.push(basis.rank());
        frontier = next;
        if basis.rank() > cap {
            return Err(ClosureError::CapExceeded(basis.rank(), cap));
        }
    }
    Ok(Closure { rows, cols, basis, growth, stopped_early: stopped })
}

/// [`span_closure_with`] without early stop.
pub fn span_closure<T: Scalar>(
    seed: &[Matrix<T>],
    multipliers: &[Matrix<T>],
    cap: usize,
) -> Result<Closure<T>, ClosureError> {
    span_closure_with(seed, multipliers, cap, |_| false)
}

/// Dimension of the unital algebra generated by `gens` (square matrices of size `n`).
pub fn algebra_dimension<T: Scalar>(n: usize, one: &T, gens: &[Matrix<T>]) -> Result<usize, ClosureError> {
    let closure = span_closure(&[Matrix::identity(n, one.clone())], gens, n * n)?;
    Ok(closure.dim())
}

/// Which braid generators act by left multiplication in the corner computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Multipliers {
    /// `Psi^_l` and `Psi^_l^-1`.
    WithInverses,
    /// `Psi^_l` only. Each inverse is a polynomial in `Psi^_l`, so the closure is the same.
    Forward,
}

/// Outcome of a corner computation.
#[derive(Debug, Clone, Serialize)]
pub struct CornerReport {
    pub p: u64,
    pub g: usize,
    /// Dimension of `Hom(L(0), L_g^eta)`, the space the closure runs in.
    pub ambient_dim: usize,
    pub block_dim: usize,
    pub corner_dim: usize,
    /// `dim End(eta; 0) = dim L(0)^2`.
    pub full_dim: usize,
    /// Dimension of the left ideal when the run ended.
    pub left_ideal_dim: usize,
    pub rounds: usize,
    pub growth: Vec<usize>,
    /// Whether the run stopped as soon as the corner was full.
    pub stopped_early: bool,
    pub multipliers: Multipliers,
    pub wall_time_ms: u128,
}

/// The dimension of `e B e`, with `B` the algebra generated by the braid action and
/// `e = Proj(odd; 0)`, computed modulo the working prime.
///
/// The left ideal `B e`, restricted to `L(0)`, is the closure of `e|_L(0)` under left
/// multiplication by the generators; the corner is its image under `e`. Ranks of reduced
/// matrices never exceed the ranks over `Q(eta)`, and the corner sits in `End(eta; 0)`, so a
/// full corner modulo the prime is a full corner over `Q(eta)`. A smaller value is only a lower
/// bound. The run stops as soon as the corner is full.
pub fn corner_dimension(
    p: u64,
    g: usize,
    multipliers: Multipliers,
    max_ambient: usize,
) -> Result<CornerReport, ClosureError> {
    let start = Instant::now();
    let lg = Lg::new(p, g).map_err(SpectralError::from)?;
    let block_dim = 2 * g * (1usize << g);
    let ambient = lg.dim * block_dim;
    if ambient > max_ambient {
        return Err(ClosureError::Guard(ambient, max_ambient));
    }
    let gens = lg.generators().map_err(SpectralError::from)?;
    let block = Block::new(&lg, &gens, &vec![0; g])?;
    let emb = FqEmbedding::new(p).ok_or(ClosureError::NoEmbedding(p))?;
    let map = |m: &Matrix<Cyc>| emb.map_matrix(m).ok_or(ClosureError::BadReduction);
    let mut mults = Vec::new();
    for gen in &gens {
        mults.push(map(&gen.psi)?);
        if multipliers == Multipliers::WithInverses {
            mults.push(map(&gen.inverse)?);
        }
    }
    let seed = map(&block.basis)?;
    let proj = map(&block.proj)?;
    // Corner vectors are recorded in coordinates: `e X` restricted to `L(0)` is determined by
    // its rows at the pivot rows of the block basis.
    let pivots = block.pivot_rows().to_vec();
    let full = block_dim * block_dim;
    let mut corner = Echelon::<Fq>::new(pivots.len() * block_dim);
    let cols: Vec<usize> = (0..block_dim).collect();
    let closure = span_closure_with(&[seed], &mults, ambient, |x| {
        let ex = proj.mul(x).select(&pivots, &cols);
        corner.insert(ex.into_data());
        corner.rank() == full
    })?;
    Ok(CornerReport {
        p,
        g,
        ambient_dim: ambient,
        block_dim,
        corner_dim: corner.rank(),
        full_dim: full,
        left_ideal_dim: closure.dim(),
        rounds: closure.growth.len() - 1,
        growth: closure.growth,
        stopped_early: closure.stopped_early,
        multipliers,
        wall_time_ms: start.elapsed().as_millis(),
    })
}

/// Dimensions of the algebras induced on `L_odd(0)` and on `L(0) / L_odd(0)`.
#[derive(Debug, Clone, Serialize)]
pub struct FiltrationReport {
    pub p: u64,
    pub g: usize,
    pub factor_dim: usize,
    pub odd_algebra_dim: usize,
    pub even_algebra_dim: usize,
}

/// The algebra on `L_odd(0)` generated by `A_k (k < g)`, `B_k`, `D_l`, `T_g`, and the one on
/// the quotient generated by `A_k (k < g)`, `B+_k`, `D+_l`, `T+_g`, exactly over `Q(eta)`.
pub fn filtration_check(zb: &ZeroBlock) -> Result<FiltrationReport, ClosureError> {
    let g = zb.lg.g;
    let ops = &zb.ops;
    let mut odd = Vec::new();
    let mut even = Vec::new();
    for a in &ops.a[..g - 1] {
        odd.push(zb.on_odd(a)?);
        even.push(zb.on_quotient(a)?);
    }
    for m in ops.b.iter().chain(&ops.d).chain(std::iter::once(&ops.t)) {
        odd.push(zb.on_odd(m)?);
    }
    for m in ops.b_dag.iter().chain(&ops.d_dag).chain(std::iter::once(&ops.t_dag)) {
        even.push(zb.on_quotient(m)?);
    }
    let n = zb.block.n_odd();
    let one = zb.lg.one();
    Ok(FiltrationReport {
        p: zb.lg.p(),
        g,
        factor_dim: n,
        odd_algebra_dim: algebra_dimension(n, &one, &odd)?,
        even_algebra_dim: algebra_dimension(zb.block.dim() - n, &one, &even)?,
    })
}
