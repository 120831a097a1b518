//! Dense matrices over an exact field, echelon forms, and the word-size prime field `F_Q`
//! used for modular certificates.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::cyclo::{modpow, Cyc, ExactAlgebra};

/// An exact field element usable in [`Matrix`] and [`Echelon`].
pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Option<Self>;

    /// `dst += c * src`, entrywise.
    fn axpy(dst: &mut [Self], c: &Self, src: &[Self]) {
        for (d, s) in dst.iter_mut().zip(src) {
            if !s.is_zero() {
                *d = d.plus(&c.times(s));
            }
        }
    }
}

impl Scalar for Cyc {
    fn zero() -> Self {
        Cyc::zero()
    }
    fn is_zero(&self) -> bool {
        Cyc::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        self.inv().ok()
    }
}

/// The prime modulus of [`Fq`]: `Q = 1 mod 2*3*5*7*11*13`, so `F_Q` holds a primitive `p`-th root
/// of unity for every odd prime `p <= 13`.
pub const Q: u64 = 2_147_475_331;
const Q_GENERATOR: u64 = 3;

/// An element of `F_Q`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fq(pub u32);

impl Fq {
    pub fn new(x: i64) -> Self {
        Fq(x.rem_euclid(Q as i64) as u32)
    }

    fn from_bigint(x: &BigInt) -> Self {
        let r = x.mod_floor(&BigInt::from(Q));
        Fq(r.to_u32().expect("reduced below Q"))
    }

    pub fn pow(self, e: u64) -> Self {
        Fq(modpow(self.0 as u64, e, Q) as u32)
    }

    /// A primitive `p`-th root of unity in `F_Q`.
    pub fn root_of_unity(p: u64) -> Option<Self> {
        if !(Q - 1).is_multiple_of(p) {
            return None;
        }
        Some(Fq(Q_GENERATOR as u32).pow((Q - 1) / p))
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Scalar for Fq {
    fn zero() -> Self {
        Fq(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn plus(&self, o: &Self) -> Self {
        Fq(((self.0 as u64 + o.0 as u64) % Q) as u32)
    }
    fn minus(&self, o: &Self) -> Self {
        Fq(((self.0 as u64 + Q - o.0 as u64) % Q) as u32)
    }
    fn times(&self, o: &Self) -> Self {
        Fq((self.0 as u64 * o.0 as u64 % Q) as u32)
    }
    fn negated(&self) -> Self {
        Fq(((Q - self.0 as u64) % Q) as u32)
    }
    fn inverse(&self) -> Option<Self> {
        (self.0 != 0).then(|| self.pow(Q - 2))
    }
    fn axpy(dst: &mut [Self], c: &Self, src: &[Self]) {
        let c = c.0 as u64;
        if c == 0 {
            return;
        }
        for (d, s) in dst.iter_mut().zip(src) {
            d.0 = ((d.0 as u64 + c * s.0 as u64) % Q) as u32;
        }
    }
}

/// Reduction `Z[1/d][eta] -> F_Q` sending `eta` to a fixed primitive `p`-th root of unity.
///
/// Ranks can only drop under this map, which is what makes a full rank modulo `Q` a certificate
/// of full rank over `Q(eta)`.
#[derive(Debug, Clone)]
pub struct FqEmbedding {
    pub p: u64,
    eta_pows: Vec<Fq>,
}

impl FqEmbedding {
    pub fn new(p: u64) -> Option<Self> {
        let eta = Fq::root_of_unity(p)?;
        let eta_pows = (0..p).map(|k| eta.pow(k)).collect();
        Some(Self { p, eta_pows })
    }

    pub fn eta(&self) -> Fq {
        self.eta_pows[1]
    }

    pub fn rational(&self, r: &BigRational) -> Option<Fq> {
        let den = Fq::from_bigint(r.denom());
        Some(Fq::from_bigint(r.numer()).times(&den.inverse()?))
    }

    pub fn map(&self, c: &Cyc) -> Option<Fq> {
        if c.is_zero() {
            return Some(Fq(0));
        }
        let mut acc = Fq(0);
        for (k, coeff) in c.coeffs(self.p).iter().enumerate() {
            if !Zero::is_zero(coeff) {
                acc = acc.plus(&self.rational(coeff)?.times(&self.eta_pows[k]));
            }
        }
        Some(acc)
    }

    pub fn map_matrix(&self, m: &Matrix<Cyc>) -> Option<Matrix<Fq>> {
        let data = m.data.iter().map(|c| self.map(c)).collect::<Option<Vec<_>>>()?;
        Some(Matrix { rows: m.rows, cols: m.cols, data })
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

/// A dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Below this many output entries products run on one thread.
const PAR_THRESHOLD: usize = 4096;

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize, one: T) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = one.clone();
        }
        m
    }

    pub fn scalar(n: usize, c: T) -> Self {
        Self::identity(n, c)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds the matrix whose columns are the given vectors.
    pub fn from_cols(n_rows: usize, cols: &[Vec<T>]) -> Self {
        Self::from_fn(n_rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    /// Adds `v` to entry `(i, j)`.
    pub fn add_at(&mut self, i: usize, j: usize, v: &T) {
        let e = &mut self.data[i * self.cols + j];
        *e = e.plus(v);
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.plus(b)).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.minus(b)).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| if x.is_zero() { T::zero() } else { c.times(x) })
    }

    pub fn neg(&self) -> Self {
        self.map(T::negated)
    }

    /// Matrix product; zero entries of the left factor are skipped.
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let (n, m) = (self.rows, o.cols);
        let mut out = vec![T::zero(); n * m];
        let row_job = |(i, out_row): (usize, &mut [T])| {
            for (k, a) in self.row(i).iter().enumerate() {
                if !a.is_zero() {
                    T::axpy(out_row, a, o.row(k));
                }
            }
        };
        if n * m >= PAR_THRESHOLD && m > 0 {
            out.par_chunks_mut(m).enumerate().for_each(row_job);
        } else if m > 0 {
            out.chunks_mut(m).enumerate().for_each(row_job);
        }
        Self { rows: n, cols: m, data: out }
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.plus(&a.times(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, mut e: u64, one: &T) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut r = Self::identity(self.rows, one.clone());
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        r
    }

    /// Submatrix of the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.cols);
        for i in 0..self.rows {
            e.insert(self.row(i).to_vec());
        }
        e.rank()
    }

    /// Inverse by Gauss-Jordan elimination, `None` if singular.
    pub fn inverse(&self, one: &T) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a: Vec<Vec<T>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { one.clone() } else { T::zero() }));
                r
            })
            .collect();
        for c in 0..n {
            let piv = (c..n).find(|&r| !a[r][c].is_zero())?;
            a.swap(c, piv);
            let inv = a[c][c].inverse()?;
            a[c] = a[c].iter().map(|x| if x.is_zero() { T::zero() } else { x.times(&inv) }).collect();
            let pivot_row = a[c].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != c && !row[c].is_zero() {
                    let f = row[c].negated();
                    T::axpy(row, &f, &pivot_row);
                }
            }
        }
        Some(Self::from_fn(n, n, |i, j| a[i][n + j].clone()))
    }

    /// A basis of the right kernel `{x : A x = 0}`.
    pub fn kernel(&self, one: &T) -> Vec<Vec<T>> {
        let mut e = Echelon::new(self.cols);
        for i in 0..self.rows {
            e.insert(self.row(i).to_vec());
        }
        let rref = e.rref();
        let pivots: Vec<usize> = rref.pivots().to_vec();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![T::zero(); self.cols];
                x[f] = one.clone();
                for (r, &pc) in pivots.iter().enumerate() {
                    x[pc] = rref.rows[r][f].negated();
                }
                x
            })
            .collect()
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

impl Matrix<Cyc> {
    pub fn scale_ratio(&self, r: &BigRational) -> Self {
        self.map(|x| x.scale(r))
    }

    /// One line per nonzero entry: `row col c0/d0,c1/d1,...`.
    pub fn to_coordinate_text(&self, p: u64) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                if !x.is_zero() {
                    s.push_str(&format!("{i} {j} {}\n", x.coeff_string(p)));
                }
            }
        }
        s
    }
}

impl ExactAlgebra for Matrix<Cyc> {
    fn alg_one(&self) -> Self {
        let p = self.data.iter().find_map(Cyc::prime).expect("nonzero matrix carries its prime");
        Self::identity(self.rows, Cyc::one(p))
    }
    fn alg_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn alg_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn alg_scale(&self, r: &BigRational) -> Self {
        self.scale_ratio(r)
    }
}

/// A row-echelon basis of a subspace of `T^dim`.
///
/// Rows are kept in insertion order, each with leading entry `1` at its pivot and zeros at the
/// pivots of all earlier rows; this is enough for one-pass reduction.
#[derive(Clone, Debug)]
pub struct Echelon<T> {
    dim: usize,
    rows: Vec<Vec<T>>,
    pivots: Vec<usize>,
}

impl<T: Scalar> Echelon<T> {
    pub fn new(dim: usize) -> Self {
        Self { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` in place against every row.
    pub fn reduce(&self, v: &mut [T]) {
        self.reduce_from(v, 0);
    }

    /// Reduces `v` against rows `start..`.
    pub fn reduce_from(&self, v: &mut [T], start: usize) {
        for (row, &pc) in self.rows[start..].iter().zip(&self.pivots[start..]) {
            if !v[pc].is_zero() {
                let f = v[pc].negated();
                T::axpy(&mut v[pc..], &f, &row[pc..]);
            }
        }
    }

    pub fn contains(&self, v: &[T]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(T::is_zero)
    }

    /// Inserts an already reduced vector; returns `false` if it is zero.
    pub fn push_reduced(&mut self, mut v: Vec<T>) -> bool {
        let Some(pc) = v.iter().position(|x| !x.is_zero()) else { return false };
        let inv = v[pc].inverse().expect("nonzero pivot");
        for x in v[pc..].iter_mut() {
            if !x.is_zero() {
                *x = x.times(&inv);
            }
        }
        self.rows.push(v);
        self.pivots.push(pc);
        true
    }

    /// Reduces and inserts `v`; returns whether the span grew.
    pub fn insert(&mut self, mut v: Vec<T>) -> bool {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        self.reduce(&mut v);
        self.push_reduced(v)
    }

    /// The reduced row echelon form, rows sorted by pivot. It depends only on the span.
    pub fn rref(&self) -> Self {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let mut rows: Vec<Vec<T>> = order.iter().map(|&i| self.rows[i].clone()).collect();
        let pivots: Vec<usize> = order.iter().map(|&i| self.pivots[i]).collect();
        for r in (0..rows.len()).rev() {
            let (head, tail) = rows.split_at_mut(r);
            let pivot_row = &tail[0];
            for other in head.iter_mut() {
                let pc = pivots[r];
                if !other[pc].is_zero() {
                    let f = other[pc].negated();
                    T::axpy(&mut other[pc..], &f, &pivot_row[pc..]);
                }
            }
        }
        Self { dim: self.dim, rows, pivots }
    }
}

/// Rank of an integer matrix modulo the working prime `Q`. It never exceeds the rational rank,
/// so full rank modulo `Q` certifies full rank over the rationals; a smaller value is only a lower bound.
pub fn rank_mod_q(m: &Matrix<i64>) -> usize {
    let f = Matrix { rows: m.rows, cols: m.cols, data: m.data.iter().map(|&x| Fq::new(x)).collect() };
    f.rank()
}

impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn plus(&self, o: &Self) -> Self {
        self.checked_add(*o).expect("integer overflow")
    }
    fn minus(&self, o: &Self) -> Self {
        self.checked_sub(*o).expect("integer overflow")
    }
    fn times(&self, o: &Self) -> Self {
        self.checked_mul(*o).expect("integer overflow")
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        (self.abs() == 1).then_some(*self)
    }
}

/// Rational matrix from integer entries.
pub fn to_rational(m: &Matrix<i64>) -> Matrix<BigRational> {
    m.map(|&x| BigRational::from_integer(x.into()))
}

/// True if every entry is an integer of absolute value below `2^62`.
pub fn fits_i64(m: &Matrix<BigRational>) -> bool {
    m.data.iter().all(|x| x.is_integer() && x.numer().abs() < BigInt::from(1i64 << 62))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fq_roots_of_unity() {
        for p in [3u64, 5, 7, 11, 13] {
            let z = Fq::root_of_unity(p).unwrap();
            assert_eq!(z.pow(p), Fq(1));
            assert_ne!(z, Fq(1));
        }
    }

    #[test]
    fn embedding_respects_arithmetic() {
        let emb = FqEmbedding::new(5).unwrap();
        let a = Cyc::one(5) + Cyc::eta(5, 2).scale_int(3);
        let b = Cyc::eta(5, 1) - Cyc::from_int(5, 7);
        let ab = emb.map(&(&a * &b)).unwrap();
        assert_eq!(ab, emb.map(&a).unwrap().times(&emb.map(&b).unwrap()));
        let ainv = emb.map(&a.inv().unwrap()).unwrap();
        assert_eq!(ainv.times(&emb.map(&a).unwrap()), Fq(1));
    }

    #[test]
    fn inverse_and_kernel() {
        let one = BigRational::from_integer(1.into());
        let m = Matrix::from_rows(vec![vec![2i64, 1], vec![1, 1]]);
        let r = to_rational(&m);
        let inv = r.inverse(&one).unwrap();
        assert_eq!(r.mul(&inv), Matrix::identity(2, one.clone()));
        let s = to_rational(&Matrix::from_rows(vec![vec![1i64, 2, 3], vec![2, 4, 6]]));
        let ker = s.kernel(&one);
        assert_eq!(ker.len(), 2);
        for v in ker {
            assert!(s.apply(&v).iter().all(Zero::is_zero));
        }
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn rref_is_canonical() {
        let rows = [vec![1i64, 2, 3], vec![0, 1, 1], vec![1, 3, 4]];
        let mut a = Echelon::new(3);
        let mut b = Echelon::new(3);
        for r in &rows {
            a.insert(r.iter().map(|&x| Fq::new(x)).collect());
        }
        for r in rows.iter().rev() {
            b.insert(r.iter().map(|&x| Fq::new(x)).collect());
        }
        assert_eq!(a.rank(), 2);
        assert_eq!(a.rref().rows(), b.rref().rows());
    }
}
