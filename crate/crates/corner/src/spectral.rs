//! Simultaneous spectral projections of the odd generators on `L_g^eta`, the distinguished
//! basis of each block `L(a)`, and the operators `B_k, D_l, B+_k, D+_l, A_k, T_g, T+_g` of
//! the `0`-block together with checks of their action formulas.
//!
//! A `+` suffix (`B+`, `D+`, `T+`) stands for the dagger operators.

use num_rational::BigRational;
use rayon::prelude::*;
use thiserror::Error;

use crate::braidrep::{spectral_average, BraidError, Generator, Lg};
use crate::cyclo::{b_hat, c_hat, gamma, gamma_root_sum, h_const, mixing_ratio, Cyc};
use crate::linalg::{Matrix, Scalar};

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error("index {0} is not in I_p")]
    NotInImage(u64),
    #[error("block index has length {0}, expected {1}")]
    BadLength(usize, usize),
    #[error("the operators are only defined on the 0-block")]
    NotZeroBlock,
    #[error("vanishing constant {0}")]
    Vanishing(&'static str),
    #[error("operator does not preserve the subspace")]
    NotInvariant,
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `Proj(odd; a) = prod_k phi(Psi^_{2k-1,ss}; a_k)`.
pub fn proj_odd(lg: &Lg, gens: &[Generator], a: &[u64]) -> Result<Matrix<Cyc>, SpectralError> {
    if a.len() != lg.g {
        return Err(SpectralError::BadLength(a.len(), lg.g));
    }
    let p = lg.p();
    let mut acc = Matrix::identity(lg.dim, lg.one());
    for (k, &ak) in a.iter().enumerate() {
        if !lg.pp.in_image(ak % p) {
            return Err(SpectralError::NotInImage(ak));
        }
        acc = acc.mul(&spectral_average(&gens[2 * k].ss, ak % p, p));
    }
    Ok(acc)
}

/// Kind of a distinguished basis vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    /// `w^j_{2k-1}`
    W,
    /// `v^j_{2k}`
    V,
}

/// `w^j_{2k-1} = e_j (u_{2k-1} - u_{2k-3})` with `u_{-1} = 0`; zero when `k > g`.
pub fn w_vec(lg: &Lg, k: usize, j: &[u64]) -> Vec<Cyc> {
    let mut out = vec![Cyc::zero(); lg.dim];
    if k == 0 || k > lg.g {
        return out;
    }
    let c = lg.jidx(j);
    out[lg.lidx(c, 2 * k - 1)] = lg.one();
    if k > 1 {
        out[lg.lidx(c, 2 * k - 3)] = -lg.one();
    }
    out
}

/// `v^j_2k = eta^(-(j_1+..+j_{k-1})) e_j u_2k - d(j_k != 0) (1 - eta^(-j_k))^-1 w^(j - e_k)_{2k-1}`;
/// zero when `k > g`.
pub fn v_vec(lg: &Lg, k: usize, j: &[u64]) -> Vec<Cyc> {
    let mut out = vec![Cyc::zero(); lg.dim];
    if k == 0 || k > lg.g {
        return out;
    }
    out[lg.lidx(lg.jidx(j), 2 * k)] = lg.eta(-Lg::prefix_sum(j, k - 1));
    if j[k - 1] != 0 {
        let den = lg.one() - lg.eta(-(j[k - 1] as i64));
        let c = lg.one().checked_div(&den).expect("nonzero");
        let w = w_vec(lg, k, &lg.bump(j, k, -1));
        axpy(&mut out, &-&c, &w);
    }
    out
}

/// `y += c x`.
pub fn axpy(y: &mut [Cyc], c: &Cyc, x: &[Cyc]) {
    for (a, b) in y.iter_mut().zip(x) {
        if !b.is_zero() {
            *a = &*a + &(c * b);
        }
    }
}

fn vsub(a: &[Cyc], b: &[Cyc]) -> Vec<Cyc> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// One block `L(a)` with its distinguished basis, `w`-vectors first.
#[derive(Debug, Clone)]
pub struct Block {
    pub a: Vec<u64>,
    pub proj: Matrix<Cyc>,
    pub labels: Vec<(Kind, usize, Vec<u64>)>,
    /// `dim(L_g) x dim(L(a))`, one column per basis vector.
    pub basis: Matrix<Cyc>,
    pivot_rows: Vec<usize>,
    pivot_inv: Matrix<Cyc>,
}

impl Block {
    pub fn new(lg: &Lg, gens: &[Generator], a: &[u64]) -> Result<Self, SpectralError> {
        let proj = proj_odd(lg, gens, a)?;
        let p = lg.p();
        let mut js: Vec<Vec<u64>> = vec![vec![]];
        for &ak in a {
            let pre = lg.pp.tau_preimage(ak % p);
            js = pre.iter().flat_map(|&x| js.iter().map(move |j| [j.clone(), vec![x]].concat())).collect();
        }
        js.sort();
        let mut labels = Vec::new();
        let mut cols = Vec::new();
        for kind in [Kind::W, Kind::V] {
            for k in 1..=lg.g {
                for j in &js {
                    labels.push((kind, k, j.clone()));
                    cols.push(match kind {
                        Kind::W => w_vec(lg, k, j),
                        Kind::V => v_vec(lg, k, j),
                    });
                }
            }
        }
        let basis = Matrix::from_cols(lg.dim, &cols);
        let mut e = crate::linalg::Echelon::new(lg.dim);
        for c in &cols {
            e.insert(c.clone());
        }
        let pivot_rows = e.rref().pivots().to_vec();
        if pivot_rows.len() != cols.len() {
            return Err(SpectralError::NotInvariant);
        }
        let all: Vec<usize> = (0..cols.len()).collect();
        let pivot_inv = basis.select(&pivot_rows, &all).inverse(&lg.one()).ok_or(SpectralError::NotInvariant)?;
        Ok(Self { a: a.to_vec(), proj, labels, basis, pivot_rows, pivot_inv })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Rows of `L_g^eta` at which the block basis restricts to an invertible matrix.
    pub fn pivot_rows(&self) -> &[usize] {
        &self.pivot_rows
    }

    /// Number of `w`-vectors; they occupy coordinates `0..n_odd`.
    pub fn n_odd(&self) -> usize {
        self.labels.iter().filter(|l| l.0 == Kind::W).count()
    }

    /// Coordinates of `x` in the distinguished basis, or `None` when `x` is outside `L(a)`.
    pub fn coords(&self, x: &[Cyc]) -> Option<Vec<Cyc>> {
        let sub: Vec<Cyc> = self.pivot_rows.iter().map(|&r| x[r].clone()).collect();
        let c = self.pivot_inv.apply(&sub);
        (self.basis.apply(&c) == x).then_some(c)
    }

    /// Matrix of an operator preserving `L(a)` in the distinguished basis.
    pub fn restrict(&self, op: &Matrix<Cyc>) -> Result<Matrix<Cyc>, SpectralError> {
        let cols: Option<Vec<Vec<Cyc>>> =
            (0..self.dim()).into_par_iter().map(|c| self.coords(&op.apply(&self.basis.col(c)))).collect();
        let cols = cols.ok_or(SpectralError::NotInvariant)?;
        Ok(Matrix::from_cols(self.dim(), &cols))
    }

    pub fn label_string(&self, i: usize) -> String {
        let (kind, k, j) = &self.labels[i];
        match kind {
            Kind::W => format!("w^{j:?}_{}", 2 * k - 1),
            Kind::V => format!("v^{j:?}_{}", 2 * k),
        }
    }
}

/// How congruences between the two sides of a formula are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Congruence {
    Exact,
    /// modulo the other blocks: apply `Proj(odd; 0)` first
    ModPerp,
    /// modulo the global odd subspace `V (x) <u_1, u_3, ..>`: compare `u_even` coordinates
    ModOdd,
    /// modulo odd plus the other blocks
    ModOddPerp,
}

/// Which constants normalize `B_k`, `D_l` and `A_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    /// The constants as displayed: `-p / C^0_0` for `B_k`, `p / C^0_0` for `D_l`, and
    /// `p / gamma_1` with the shift `gamma_0` for `A_k`, where `gamma` uses the two-term reading
    /// of `B^(-1/8)`.
    Displayed,
    /// `-p` for `B_k`, `p` for `D_l`, and `p / gamma_1` with the shift `gamma_0 / p` for `A_k`,
    /// where `gamma` uses the root-sum reading that the action theorem for even generators
    /// needs. These are the constants under which the `e`-terms of the action formulas carry
    /// the displayed coefficients.
    Consistent,
}

/// Coefficient data of the `A_k` action formulas; see [`ZeroBlock::check_a`].
#[derive(Debug, Clone)]
pub struct AForm {
    pub f: Cyc,
    pub eu_sign: i64,
    pub odd_sign: i64,
    /// In `A_k(v^j_{2k+2})` the half-exponents of the two `v_{2k+2}` terms are exchanged,
    /// as the prefactor `eta^(-(j_1+..+j_k))` of `v_{2k+2}` forces.
    pub next_swapped: bool,
}

impl AForm {
    /// The coefficients as displayed: `f = 1 + h`, with `+` in the `e_j u`-formula and the
    /// `w`/`v`-formulas written as if it were `-`.
    pub fn displayed(pp: &crate::cyclo::PrimeParams) -> Self {
        Self { f: &Cyc::one(pp.p) + &h_const(pp), eu_sign: 1, odd_sign: -1, next_swapped: false }
    }

    /// `f = 1`, `-` throughout and the `v_{2k+2}` exponents exchanged: the form the operators
    /// take under [`Norm::Consistent`].
    pub fn consistent(pp: &crate::cyclo::PrimeParams) -> Self {
        Self { f: Cyc::one(pp.p), eu_sign: -1, odd_sign: -1, next_swapped: true }
    }
}

/// The operators of the `0`-block.
#[derive(Debug, Clone)]
pub struct Operators {
    pub b: Vec<Matrix<Cyc>>,
    pub d: Vec<Matrix<Cyc>>,
    pub b_dag: Vec<Matrix<Cyc>>,
    pub d_dag: Vec<Matrix<Cyc>>,
    pub a: Vec<Matrix<Cyc>>,
    pub t: Matrix<Cyc>,
    pub t_dag: Matrix<Cyc>,
    pub theta: Matrix<Cyc>,
    pub theta_dag: Matrix<Cyc>,
}

/// The `0`-block, the generator data and the operators built from them.
#[derive(Debug, Clone)]
pub struct ZeroBlock {
    pub lg: Lg,
    pub gens: Vec<Generator>,
    pub block: Block,
    pub unil: Vec<Matrix<Cyc>>,
    pub ops: Operators,
    pub norm: Norm,
}

impl ZeroBlock {
    pub fn new(p: u64, g: usize, norm: Norm) -> Result<Self, SpectralError> {
        let lg = Lg::new(p, g)?;
        let gens = lg.generators()?;
        let block = Block::new(&lg, &gens, &vec![0; g])?;
        let unil: Vec<Matrix<Cyc>> = gens.iter().map(Generator::unil).collect();
        let ops = build_operators(&lg, &gens, &block.proj, &unil, norm)?;
        Ok(Self { lg, gens, block, unil, ops, norm })
    }

    pub fn proj(&self) -> &Matrix<Cyc> {
        &self.block.proj
    }

    fn e_u(&self, j: &[u64], m: usize) -> Vec<Cyc> {
        let mut out = vec![Cyc::zero(); self.lg.dim];
        if m >= 1 && m <= 2 * self.lg.g {
            out[self.lg.lidx(self.lg.jidx(j), m)] = self.lg.one();
        }
        out
    }

    /// Compares `lhs` and `rhs` under the given congruence.
    pub fn congruent(&self, lhs: &[Cyc], rhs: &[Cyc], mode: Congruence) -> bool {
        let mut diff = vsub(lhs, rhs);
        if matches!(mode, Congruence::ModPerp | Congruence::ModOddPerp) {
            diff = self.proj().apply(&diff);
        }
        if matches!(mode, Congruence::ModOdd | Congruence::ModOddPerp) {
            let vd = self.lg.vdim;
            return (0..self.lg.dim).filter(|i| (i / vd) % 2 == 1).all(|i| diff[i].is_zero());
        }
        diff.iter().all(Cyc::is_zero)
    }

    /// `{0, -1}^g` in a fixed order.
    pub fn zero_indices(&self) -> Vec<Vec<u64>> {
        let p = self.lg.p();
        (0..1usize << self.lg.g)
            .map(|mask| (0..self.lg.g).map(|b| if mask >> b & 1 == 1 { p - 1 } else { 0 }).collect())
            .collect()
    }

    fn neg1(&self) -> u64 {
        self.lg.p() - 1
    }

    fn ep(&self, e: i64) -> Cyc {
        self.lg.eta(e)
    }

    fn half(&self, sign: i64) -> Cyc {
        self.lg.eta(sign * self.lg.pp.inv2 as i64)
    }

    /// Names of the cases whose two sides disagree, in case order.
    fn check_all(&self, cases: Vec<(String, Vec<Cyc>, Vec<Cyc>, Congruence)>) -> Vec<String> {
        let bad: Vec<Option<String>> =
            cases.into_par_iter().map(|(name, l, r, mode)| (!self.congruent(&l, &r, mode)).then_some(name)).collect();
        bad.into_iter().flatten().collect()
    }

    /// `B_k(e_j u_{2l-1})` and `D_k(e_j u_{2l-1})` on the `0`-block.
    pub fn check_operator_b(&self) -> Vec<String> {
        let g = self.lg.g;
        let m1 = self.neg1();
        let mut cases = Vec::new();
        for j in self.zero_indices() {
            for k in 1..=g {
                for l in 1..=g {
                    let lhs = self.ops.b[k - 1].apply(&self.e_u(&j, 2 * l - 1));
                    let mut rhs = vec![Cyc::zero(); self.lg.dim];
                    if k == l {
                        let (jk, jk1) = (j[k - 1], if k < g { j[k] } else { 0 });
                        if jk == m1 {
                            rhs = w_vec(&self.lg, k, &j);
                        } else if k == g {
                            rhs = w_vec(&self.lg, k, &self.lg.bump(&j, k, -1));
                        } else if jk1 == m1 {
                            rhs = w_vec(&self.lg, k, &self.lg.shift(&j, k, -1));
                        }
                    }
                    cases.push((format!("B_{k}(e^{j:?} u_{})", 2 * l - 1), lhs, rhs, Congruence::Exact));
                }
            }
            for k in 1..g {
                for l in 1..=g {
                    let lhs = self.ops.d[k - 1].apply(&self.e_u(&j, 2 * l - 1));
                    let mut rhs = vec![Cyc::zero(); self.lg.dim];
                    if k == l {
                        let (jk, jk1) = (j[k - 1], j[k]);
                        if jk1 == m1 {
                            rhs = w_vec(&self.lg, k + 1, &j);
                        } else if jk == m1 {
                            rhs = w_vec(&self.lg, k + 1, &self.lg.shift(&j, k, 1));
                        }
                    }
                    cases.push((format!("D_{k}(e^{j:?} u_{})", 2 * l - 1), lhs, rhs, Congruence::Exact));
                }
            }
        }
        self.check_all(cases)
    }

    /// `B+_k(v^j_2l)` and `D+_k(v^j_2l)` modulo `L_odd(0)`, and their vanishing on `L_odd(0)`.
    /// `bg_sign` is the sign in front of `eta v^(j - e_g)_2g` in the `k = g` case.
    pub fn check_operator_b_dag(&self, bg_sign: i64) -> Vec<String> {
        let g = self.lg.g;
        let lg = &self.lg;
        let m1 = self.neg1();
        let zero = vec![Cyc::zero(); lg.dim];
        let mut cases = Vec::new();
        for j in self.zero_indices() {
            for k in 1..=g {
                for l in 1..=g {
                    let w = w_vec(lg, l, &j);
                    cases.push((
                        format!("B+_{k}(w^{j:?}_{})", 2 * l - 1),
                        self.ops.b_dag[k - 1].apply(&w),
                        zero.clone(),
                        Congruence::Exact,
                    ));
                    let lhs = self.ops.b_dag[k - 1].apply(&v_vec(lg, l, &j));
                    let mut rhs = zero.clone();
                    if k == l && j[k - 1] == 0 {
                        if k == g {
                            rhs = v_vec(lg, g, &j);
                            axpy(&mut rhs, &self.ep(1).scale_int(bg_sign), &v_vec(lg, g, &lg.bump(&j, g, -1)));
                        } else {
                            rhs = vsub(&v_vec(lg, k, &j), &v_vec(lg, k + 1, &j));
                            if j[k] == m1 {
                                let j2 = lg.shift(&j, k, -1);
                                axpy(&mut rhs, &self.ep(1), &v_vec(lg, k, &j2));
                                axpy(&mut rhs, &-lg.one(), &v_vec(lg, k + 1, &j2));
                            }
                        }
                    }
                    cases.push((format!("B+_{k}(v^{j:?}_{})", 2 * l), lhs, rhs, Congruence::ModOdd));
                }
            }
            for k in 2..=g {
                for l in 1..=g {
                    let w = w_vec(lg, l, &j);
                    cases.push((
                        format!("D+_{k}(w^{j:?}_{})", 2 * l - 1),
                        self.ops.d_dag[k - 2].apply(&w),
                        zero.clone(),
                        Congruence::Exact,
                    ));
                    let lhs = self.ops.d_dag[k - 2].apply(&v_vec(lg, l, &j));
                    let mut rhs = zero.clone();
                    if k == l && j[k - 1] == 0 {
                        if j[k - 2] == 0 {
                            rhs = vsub(&v_vec(lg, k, &j), &v_vec(lg, k - 1, &j));
                        } else {
                            let j2 = lg.shift(&j, k - 1, 1);
                            rhs = v_vec(lg, k, &j);
                            axpy(&mut rhs, &-self.ep(1), &v_vec(lg, k - 1, &j));
                            axpy(&mut rhs, &lg.one(), &v_vec(lg, k, &j2));
                            axpy(&mut rhs, &-lg.one(), &v_vec(lg, k - 1, &j2));
                        }
                    }
                    cases.push((format!("D+_{k}(v^{j:?}_{})", 2 * l), lhs, rhs, Congruence::ModOdd));
                }
            }
        }
        self.check_all(cases)
    }

    /// `T_g(w^j_{2l-1})`, exact.
    pub fn check_t(&self) -> Vec<String> {
        let g = self.lg.g;
        let lg = &self.lg;
        let mut cases = Vec::new();
        for j in self.zero_indices() {
            for l in 1..=g {
                let rhs = if l < g {
                    vec![Cyc::zero(); lg.dim]
                } else if j[g - 1] == 0 {
                    w_vec(lg, g, &j)
                } else {
                    w_vec(lg, g, &lg.bump(&j, g, 1))
                };
                cases.push((
                    format!("T_g(w^{j:?}_{})", 2 * l - 1),
                    self.ops.t.apply(&w_vec(lg, l, &j)),
                    rhs,
                    Congruence::Exact,
                ));
            }
        }
        self.check_all(cases)
    }

    /// `T+_g(w^j_{2l-1}) = 0` and `T+_g(v^j_2l)` modulo `L_odd(0)`.
    pub fn check_t_dag(&self) -> Vec<String> {
        let g = self.lg.g;
        let lg = &self.lg;
        let m1 = self.neg1();
        let zero = vec![Cyc::zero(); lg.dim];
        let h_inv = h_const(&lg.pp).inv().expect("nonzero");
        let mut cases = Vec::new();
        for j in self.zero_indices() {
            for l in 1..=g {
                let w = w_vec(lg, l, &j);
                cases.push((
                    format!("T+_g(w^{j:?}_{})", 2 * l - 1),
                    self.ops.t_dag.apply(&w),
                    zero.clone(),
                    Congruence::Exact,
                ));
                let mut rhs = zero.clone();
                if l == g && j[g - 1] != m1 {
                    rhs = v_vec(lg, g, &j);
                    axpy(&mut rhs, &-&h_inv, &v_vec(lg, g, &lg.bump(&j, g, -1)));
                }
                cases.push((
                    format!("T+_g(v^{j:?}_{})", 2 * l),
                    self.ops.t_dag.apply(&v_vec(lg, l, &j)),
                    rhs,
                    Congruence::ModOdd,
                ));
            }
        }
        self.check_all(cases)
    }

    /// The action formulas of `A_k` with the mixing factor `form.f` (displayed as `1 + h`) and
    /// the sign `form.eu_sign` of the `w^(j + e_k - e_{k+1})_{2k-1}` term of `A_k(e_j u_{2k-1})`.
    /// The `w`- and `v`-formulas are those that follow from the `e_j u`-formula with
    /// `form.odd_sign` in place of `form.eu_sign`.
    ///
    /// `A_k(e_j u_{2l-1})` and `A_k(w^j_{2l-1})` are read modulo the other blocks,
    /// `A_k(v^j_2l)` modulo odd plus the other blocks.
    pub fn check_a(&self, form: &AForm) -> Vec<String> {
        let g = self.lg.g;
        let lg = &self.lg;
        let one = lg.one();
        let f = &form.f;
        let (em, ep) = (self.half(-1), self.half(1));
        let v_coef = &(f * &(&em - &ep)) * &self.ep(1);
        let jp_eu = f.scale_int(form.eu_sign);
        let jp_odd = &one + &f.scale_int(form.odd_sign);
        let jm_odd = &one - f;
        let mut cases = Vec::new();
        for j in self.zero_indices() {
            for k in 1..=g {
                let a = &self.ops.a[k - 1];
                // j + e_k - e_{k+1} and j - e_k + e_{k+1}, with e_{g+1} = 0 when k = g
                let jp = lg.shift(&j, k, 1);
                let jm = lg.shift(&j, k, -1);
                for l in 1..=g {
                    let mut rhs = vec![Cyc::zero(); lg.dim];
                    axpy(&mut rhs, &em, &self.e_u(&jp, 2 * l - 1));
                    axpy(&mut rhs, &ep, &self.e_u(&jm, 2 * l - 1));
                    if k == l {
                        axpy(&mut rhs, &(&jp_eu * &em), &w_vec(lg, k, &jp));
                        if k < g {
                            axpy(&mut rhs, &(f * &ep), &w_vec(lg, k + 1, &jm));
                        } else {
                            axpy(&mut rhs, &v_coef, &v_vec(lg, g, &jm));
                        }
                    }
                    cases.push((
                        format!("A_{k}(e^{j:?} u_{})", 2 * l - 1),
                        a.apply(&self.e_u(&j, 2 * l - 1)),
                        rhs,
                        Congruence::ModPerp,
                    ));

                    let mut rhs = vec![Cyc::zero(); lg.dim];
                    if l != k && l != k + 1 {
                        axpy(&mut rhs, &em, &w_vec(lg, l, &jp));
                        axpy(&mut rhs, &ep, &w_vec(lg, l, &jm));
                    } else if l == k {
                        axpy(&mut rhs, &ep, &w_vec(lg, k, &jm));
                        axpy(&mut rhs, &(&jp_odd * &em), &w_vec(lg, k, &jp));
                        if k < g {
                            axpy(&mut rhs, &(f * &ep), &w_vec(lg, k + 1, &jm));
                        } else {
                            axpy(&mut rhs, &v_coef, &v_vec(lg, g, &jm));
                        }
                    } else {
                        axpy(&mut rhs, &em, &w_vec(lg, k + 1, &jp));
                        axpy(&mut rhs, &(&jm_odd * &ep), &w_vec(lg, k + 1, &jm));
                        axpy(&mut rhs, &(&f.scale_int(-form.odd_sign) * &em), &w_vec(lg, k, &jp));
                    }
                    cases.push((
                        format!("A_{k}(w^{j:?}_{})", 2 * l - 1),
                        a.apply(&w_vec(lg, l, &j)),
                        rhs,
                        Congruence::ModPerp,
                    ));

                    let mut rhs = vec![Cyc::zero(); lg.dim];
                    if l != k && l != k + 1 {
                        axpy(&mut rhs, &em, &v_vec(lg, l, &jp));
                        axpy(&mut rhs, &ep, &v_vec(lg, l, &jm));
                    } else if l == k {
                        axpy(&mut rhs, &ep, &v_vec(lg, k, &jm));
                        axpy(&mut rhs, &(&jm_odd * &em), &v_vec(lg, k, &jp));
                        if k < g {
                            axpy(&mut rhs, &(f * &em), &v_vec(lg, k + 1, &jp));
                        }
                    } else {
                        let (cp, cm) = if form.next_swapped { (&ep, &em) } else { (&em, &ep) };
                        axpy(&mut rhs, cp, &v_vec(lg, k + 1, &jp));
                        axpy(&mut rhs, &(&jm_odd * cm), &v_vec(lg, k + 1, &jm));
                        axpy(&mut rhs, &(f * &ep), &v_vec(lg, k, &jm));
                    }
                    cases.push((
                        format!("A_{k}(v^{j:?}_{})", 2 * l),
                        a.apply(&v_vec(lg, l, &j)),
                        rhs,
                        Congruence::ModOddPerp,
                    ));
                }
            }
        }
        self.check_all(cases)
    }

    /// `Psi^_{2k-1,unil}` on `w`/`v` (exact) and `Psi^_{2k,unil}(e_j u_{2l-1})` modulo odd,
    /// over all `j`.
    pub fn check_unil(&self) -> Vec<String> {
        let g = self.lg.g;
        let lg = &self.lg;
        let p = lg.p();
        let zero = vec![Cyc::zero(); lg.dim];
        let mut cases = Vec::new();
        for j in lg.indices() {
            for k in 1..=g {
                for l in 1..=g {
                    let odd = &self.unil[2 * k - 2];
                    cases.push((
                        format!("unil_{}(w^{j:?}_{})", 2 * k - 1, 2 * l - 1),
                        odd.apply(&w_vec(lg, l, &j)),
                        zero.clone(),
                        Congruence::Exact,
                    ));
                    let mut rhs = zero.clone();
                    if k == l && j[k - 1] == 0 {
                        rhs = w_vec(lg, k, &lg.bump(&j, k, -1)).iter().map(|x| -x).collect();
                    }
                    cases.push((
                        format!("unil_{}(v^{j:?}_{})", 2 * k - 1, 2 * l),
                        odd.apply(&v_vec(lg, l, &j)),
                        rhs,
                        Congruence::Exact,
                    ));
                    let mut rhs = zero.clone();
                    if k == l {
                        for s in 0..p as i64 {
                            let t = lg.bump(&lg.bump(&j, k, s), k + 1, 1 - s);
                            let c = self.ep(-(j[k - 1] as i64 + s)).scale(&ratio(1, p as i64));
                            axpy(&mut rhs, &c, &v_vec(lg, k, &t));
                            axpy(&mut rhs, &lg.one().scale(&ratio(-1, p as i64)), &v_vec(lg, k + 1, &t));
                        }
                    }
                    let lhs = self.unil[2 * k - 1].apply(&self.e_u(&j, 2 * l - 1));
                    cases.push((format!("unil_{}(e^{j:?} u_{})", 2 * k, 2 * l - 1), lhs, rhs, Congruence::ModOdd));
                }
            }
        }
        self.check_all(cases)
    }

    /// `phi(Psi^_{2k,ss}; a)(e_j u_{2l-1})` expanded in `w`/`v`-vectors, exact, over all
    /// `a` and `j`; `w_{2g+1}` and `v_{2g+2}` read as zero.
    pub fn check_phi_even_expansion(&self) -> Vec<String> {
        let g = self.lg.g;
        let lg = &self.lg;
        let pp = &lg.pp;
        let p = lg.p();
        let inv_p = ratio(1, p as i64);
        let mut cases = Vec::new();
        for k in 1..=g {
            for a in 0..p {
                let phi = spectral_average(&self.gens[2 * k - 1].ss, a, p);
                for j in lg.indices() {
                    for l in 1..=g {
                        let mut rhs = vec![Cyc::zero(); lg.dim];
                        for s in 0..p {
                            let bh = b_hat(pp, a, s);
                            let c = (&self.ep(-((pp.inv2 * s % p) as i64)) * &bh).scale(&inv_p);
                            axpy(&mut rhs, &c, &self.e_u(&lg.shift(&j, k, s as i64), 2 * l - 1));
                            if k != l {
                                continue;
                            }
                            let js = lg.shift(&j, k, s as i64);
                            let e1 = (s + j[k - 1] + 1) % p;
                            if e1 != 0 {
                                let c = c_hat(pp, a, (s + 1) % p)
                                    .scale(&inv_p)
                                    .checked_div(&(self.ep(e1 as i64) - lg.one()))
                                    .expect("nonzero");
                                axpy(&mut rhs, &c, &w_vec(lg, k, &js));
                            }
                            let jn = if k < g { j[k] } else { 0 };
                            let e2 = pp.md(s as i64 - jn as i64 - 1);
                            if e2 != 0 {
                                let c = c_hat(pp, a, s)
                                    .scale(&inv_p)
                                    .checked_div(&(self.ep(e2 as i64) - lg.one()))
                                    .expect("nonzero");
                                axpy(&mut rhs, &c, &w_vec(lg, k + 1, &js));
                            }
                            let t = lg.bump(&lg.bump(&j, k, s as i64), k + 1, 1 - s as i64);
                            let ch = c_hat(pp, a, s).scale(&inv_p);
                            axpy(&mut rhs, &(&ch * &self.ep(-(j[k - 1] as i64 + s as i64))), &v_vec(lg, k, &t));
                            axpy(&mut rhs, &-&ch, &v_vec(lg, k + 1, &t));
                        }
                        let lhs = phi.apply(&self.e_u(&j, 2 * l - 1));
                        cases.push((
                            format!("phi(Psi^_{},{a})(e^{j:?} u_{})", 2 * k, 2 * l - 1),
                            lhs,
                            rhs,
                            Congruence::Exact,
                        ));
                    }
                }
            }
        }
        self.check_all(cases)
    }

    /// The `0`-block restriction of an operator and its blocks `[[oo, oe], [eo, ee]]`.
    pub fn restricted(&self, op: &Matrix<Cyc>) -> Result<Matrix<Cyc>, SpectralError> {
        self.block.restrict(op)
    }

    fn sub_block(&self, m: &Matrix<Cyc>, odd_rows: bool, odd_cols: bool) -> Matrix<Cyc> {
        let n = self.block.n_odd();
        let pick = |odd: bool| -> Vec<usize> {
            if odd {
                (0..n).collect()
            } else {
                (n..m.rows()).collect()
            }
        };
        m.select(&pick(odd_rows), &pick(odd_cols))
    }

    /// The action on `L_odd(0)` of an operator preserving it.
    pub fn on_odd(&self, op: &Matrix<Cyc>) -> Result<Matrix<Cyc>, SpectralError> {
        let m = self.restricted(op)?;
        if !self.sub_block(&m, false, true).is_zero() {
            return Err(SpectralError::NotInvariant);
        }
        Ok(self.sub_block(&m, true, true))
    }

    /// The action on `L(0) / L_odd(0)` of an operator preserving `L_odd(0)`.
    pub fn on_quotient(&self, op: &Matrix<Cyc>) -> Result<Matrix<Cyc>, SpectralError> {
        let m = self.restricted(op)?;
        if !self.sub_block(&m, false, true).is_zero() {
            return Err(SpectralError::NotInvariant);
        }
        Ok(self.sub_block(&m, false, false))
    }

    /// `Image(Theta) in L_odd(0) in Ker(Theta)`, the induced map `L(0)/L_odd(0) -> L_odd(0)`
    /// is nonzero, and `L_odd(0) -> L(0) -> L(0)/L_odd(0)` through `Theta+` is nonzero.
    pub fn check_theta(&self) -> Result<bool, SpectralError> {
        let m = self.restricted(&self.ops.theta)?;
        let md = self.restricted(&self.ops.theta_dag)?;
        let image_odd = self.sub_block(&m, false, true).is_zero() && self.sub_block(&m, false, false).is_zero();
        let kills_odd = self.sub_block(&m, true, true).is_zero();
        let induced = !self.sub_block(&m, true, false).is_zero();
        let dag = !self.sub_block(&md, false, true).is_zero();
        Ok(image_odd && kills_odd && induced && dag)
    }
}

/// All operators of the `0`-block from their defining expressions.
pub fn build_operators(
    lg: &Lg,
    gens: &[Generator],
    proj: &Matrix<Cyc>,
    unil: &[Matrix<Cyc>],
    norm: Norm,
) -> Result<Operators, SpectralError> {
    let g = lg.g;
    let p = lg.p();
    let pp = &lg.pp;
    let c00 = c_hat(pp, 0, 0);
    if c00.is_zero() {
        return Err(SpectralError::Vanishing("C^0_0"));
    }
    let pc = match norm {
        Norm::Displayed => Cyc::from_int(p, p as i64).checked_div(&c00).expect("nonzero"),
        Norm::Consistent => Cyc::from_int(p, p as i64),
    };
    let sandwich = |x: &Matrix<Cyc>, y: &Matrix<Cyc>| proj.mul(&x.mul(&proj.mul(&y.mul(proj))));
    let u = |l: usize| &unil[l - 1];
    let b: Vec<_> = (1..=g).map(|k| sandwich(u(2 * k - 1), u(2 * k)).scale(&-&pc)).collect();
    let d: Vec<_> = (1..g).map(|l| sandwich(u(2 * l + 1), u(2 * l)).scale(&pc)).collect();
    let mp = Cyc::from_int(p, -(p as i64));
    let b_dag: Vec<_> = (1..=g).map(|k| sandwich(u(2 * k), u(2 * k - 1)).scale(&mp)).collect();
    let d_dag: Vec<_> = (2..=g).map(|l| sandwich(u(2 * l - 2), u(2 * l - 1)).scale(&mp)).collect();

    let (g1, shift) = match norm {
        Norm::Displayed => (gamma(pp, 1), gamma(pp, 0)),
        Norm::Consistent => (gamma_root_sum(pp, 1), gamma_root_sum(pp, 0).scale(&ratio(1, p as i64))),
    };
    if g1.is_zero() {
        return Err(SpectralError::Vanishing("gamma_1"));
    }
    let scale = Cyc::from_int(p, p as i64).checked_div(&g1).expect("nonzero");
    let mix = mixing_ratio(pp);
    let a: Vec<_> = (1..=g)
        .map(|k| {
            let ss = &gens[2 * k - 1].ss;
            let inner = spectral_average(ss, 0, p)
                .sub(&spectral_average(ss, pp.minus_eighth(), p).scale(&mix))
                .sub(&Matrix::scalar(lg.dim, shift.clone()));
            proj.mul(&inner.mul(proj)).scale(&scale)
        })
        .collect();
    let h = h_const(pp);
    let eta_half = |s: i64| lg.eta(s * pp.inv2 as i64);
    let t_coef = (-&(&eta_half(-1) * &h)).inv().map_err(|_| SpectralError::Vanishing("h"))?;
    let td_coef = (-&(&eta_half(1) * &h)).inv().map_err(|_| SpectralError::Vanishing("h"))?;
    let t = a[g - 1].mul(&b[g - 1]).scale(&t_coef);
    let t_dag = a[g - 1].mul(&b_dag[g - 1]).scale(&td_coef);
    let theta = proj.mul(&u(2 * g - 1).mul(proj));
    let theta_dag = proj.mul(&u(2 * g).mul(proj));
    Ok(Operators { b, d, b_dag, d_dag, a, t, t_dag, theta, theta_dag })
}

/// Monic minimal polynomial of a square matrix, coefficients from the constant term up.
pub fn minimal_polynomial<T: Scalar>(m: &Matrix<T>, one: &T) -> Vec<T> {
    let n = m.rows();
    let mut powers = vec![Matrix::identity(n, one.clone())];
    loop {
        let d = powers.len();
        let cols: Vec<Vec<T>> = powers.iter().map(|x| x.data().to_vec()).collect();
        let stacked = Matrix::from_cols(n * n, &cols);
        if let Some(mut ker) = stacked.kernel(one).into_iter().next() {
            let lead = ker[d - 1].inverse().expect("kernel vector of minimal degree has a nonzero top coefficient");
            for x in ker.iter_mut() {
                *x = x.times(&lead);
            }
            return ker;
        }
        let next = powers[d - 1].mul(m);
        powers.push(next);
    }
}

/// Coefficients of `t (t^2 - h^2)(t^2 - 1) = t^5 - (1 + h^2) t^3 + h^2 t`.
pub fn expected_a_minpoly(h: &Cyc) -> Vec<Cyc> {
    let p = h.prime().unwrap_or(3);
    let h2 = h * h;
    let one = Cyc::one(p);
    vec![Cyc::zero(), h2.clone(), Cyc::zero(), -&(&one + &h2), Cyc::zero(), one]
}

/// Exponents `a` for which `eta^a` is an eigenvalue of `ss`, from exact kernel ranks.
pub fn spectrum(ss: &Matrix<Cyc>, p: u64) -> Vec<u64> {
    let n = ss.rows();
    (0..p).filter(|&a| ss.sub(&Matrix::scalar(n, Cyc::eta(p, a as i64))).rank() < n).collect()
}

/// `true` when `m^2 = m`.
pub fn is_idempotent(m: &Matrix<Cyc>) -> bool {
    m.mul(m) == *m
}
