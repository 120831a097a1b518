//! Free groups, finite quotients, group rings and Fox calculus.
//!
//! A finite quotient `rho: F_n -> G` is given by a [`FiniteGroup`] whose elements are indices
//! `0..order` together with the images of the free generators.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::cyclo::Cyc;
use crate::linalg::{Echelon, Matrix, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("cannot parse letter `{0}`")]
    BadLetter(String),
    #[error("generator index {index} outside 1..={rank}")]
    OutOfRange { index: usize, rank: usize },
    #[error("lambda must be a root of unity different from 1")]
    TrivialEigenvalue,
    #[error("rho(h) is not central")]
    NotCentral,
}

/// A freely reduced word. Letter `+k` is `x_k`, letter `-k` is `x_k^-1`, with `k >= 1`.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct FreeWord {
    letters: Vec<i32>,
}

impl FreeWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(k: usize) -> Self {
        assert!(k >= 1, "generators are numbered from 1");
        Self { letters: vec![k as i32] }
    }

    /// Builds a word from signed letters and reduces it.
    pub fn from_letters(letters: impl IntoIterator<Item = i32>) -> Self {
        let mut out: Vec<i32> = Vec::new();
        for l in letters {
            assert!(l != 0, "letter 0 is not a generator");
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self { letters: out }
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// The largest generator index used.
    pub fn max_generator(&self) -> usize {
        self.letters.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::from_letters(self.letters.iter().chain(&o.letters).copied())
    }

    pub fn inv(&self) -> Self {
        Self { letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv() } else { self.clone() };
        (0..e.unsigned_abs()).fold(Self::identity(), |acc, _| acc.mul(&base))
    }

    /// `[a, b] = a b a^-1 b^-1`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.mul(b).mul(&a.inv()).mul(&b.inv())
    }

    pub fn product<'a>(words: impl IntoIterator<Item = &'a FreeWord>) -> Self {
        words.into_iter().fold(Self::identity(), |acc, w| acc.mul(w))
    }

    /// Replaces every generator `x_k` by `images[k-1]`.
    pub fn substitute(&self, images: &[FreeWord]) -> Self {
        let mut out = Self::identity();
        for &l in &self.letters {
            let img = &images[l.unsigned_abs() as usize - 1];
            out = if l > 0 { out.mul(img) } else { out.mul(&img.inv()) };
        }
        out
    }

    /// Text form with an arbitrary generator letter, e.g. `y1 y2^-1`.
    pub fn display_with(&self, prefix: char) -> String {
        self.letters
            .iter()
            .map(|&l| if l > 0 { format!("{prefix}{l}") } else { format!("{prefix}{}^-1", -l) })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// A uniformly random reduced-or-not word of length at most `max_len` in `n` generators,
    /// reduced afterwards.
    pub fn random<R: Rng>(rng: &mut R, n: usize, max_len: usize) -> Self {
        let len = rng.gen_range(0..=max_len);
        Self::from_letters((0..len).map(|_| {
            let k = rng.gen_range(1..=n) as i32;
            if rng.gen_bool(0.5) {
                k
            } else {
                -k
            }
        }))
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        f.write_str(&self.display_with('x'))
    }
}

impl fmt::Debug for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeWord({self})")
    }
}

impl FromStr for FreeWord {
    type Err = WordError;

    /// Parses whitespace-separated letters `x3`, `x3^-1`, `y2^2`; `1` or the empty string is the
    /// identity. The letter prefix is any single alphabetic character.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let bad = || WordError::BadLetter(tok.to_string());
            let mut chars = tok.chars();
            if !chars.next().is_some_and(|c| c.is_ascii_alphabetic()) {
                return Err(bad());
            }
            let rest = chars.as_str();
            let (idx, exp) = match rest.split_once('^') {
                Some((i, e)) => (i, e.parse::<i64>().map_err(|_| bad())?),
                None => (rest, 1),
            };
            let k: i32 = idx.parse().map_err(|_| bad())?;
            if k < 1 {
                return Err(bad());
            }
            let l = if exp < 0 { -k } else { k };
            letters.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
        }
        Ok(Self::from_letters(letters))
    }
}

/// A finite group with elements numbered `0..order`.
pub trait FiniteGroup: Send + Sync {
    fn order(&self) -> usize;
    fn identity(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    fn inv(&self, a: usize) -> usize;

    fn pow(&self, a: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv(a) } else { a };
        (0..e.unsigned_abs()).fold(self.identity(), |acc, _| self.mul(acc, base))
    }

    fn conj(&self, g: usize, a: usize) -> usize {
        self.mul(self.mul(g, a), self.inv(g))
    }
}

/// A homomorphism `F_n -> G` fixed by the images of the generators.
pub struct Quotient<'a, G: FiniteGroup> {
    pub group: &'a G,
    pub images: Vec<usize>,
}

impl<'a, G: FiniteGroup> Quotient<'a, G> {
    pub fn new(group: &'a G, images: Vec<usize>) -> Self {
        Self { group, images }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn letter(&self, l: i32) -> usize {
        let x = self.images[l.unsigned_abs() as usize - 1];
        if l > 0 {
            x
        } else {
            self.group.inv(x)
        }
    }

    pub fn eval(&self, w: &FreeWord) -> usize {
        w.letters().iter().fold(self.group.identity(), |acc, &l| self.group.mul(acc, self.letter(l)))
    }
}

/// A finitely supported element of the group ring `T[G]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupAlg<T> {
    terms: BTreeMap<usize, T>,
}

impl<T: Scalar> Default for GroupAlg<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> GroupAlg<T> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    /// `c * g`.
    pub fn monomial(g: usize, c: T) -> Self {
        let mut s = Self::zero();
        s.add_term(g, &c);
        s
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &T)> {
        self.terms.iter().map(|(&g, c)| (g, c))
    }

    pub fn coeff(&self, g: usize) -> T {
        self.terms.get(&g).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, g: usize, c: &T) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&g) {
            Some(old) => old.plus(c),
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&g);
        } else {
            self.terms.insert(g, sum);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut s = self.clone();
        for (g, c) in o.terms() {
            s.add_term(g, c);
        }
        s
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(T::negated)
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        self.map(|x| x.times(c))
    }

    fn map(&self, f: impl Fn(&T) -> T) -> Self {
        let mut s = Self::zero();
        for (g, c) in self.terms() {
            s.add_term(g, &f(c));
        }
        s
    }

    pub fn mul<G: FiniteGroup + ?Sized>(&self, o: &Self, grp: &G) -> Self {
        let mut s = Self::zero();
        for (a, x) in self.terms() {
            for (b, y) in o.terms() {
                s.add_term(grp.mul(a, b), &x.times(y));
            }
        }
        s
    }

    /// `g * self`.
    pub fn left_mul<G: FiniteGroup + ?Sized>(&self, g: usize, grp: &G) -> Self {
        Self { terms: self.terms.iter().map(|(&a, c)| (grp.mul(g, a), c.clone())).collect() }
    }

    /// `self * g`.
    pub fn right_mul<G: FiniteGroup + ?Sized>(&self, g: usize, grp: &G) -> Self {
        Self { terms: self.terms.iter().map(|(&a, c)| (grp.mul(a, g), c.clone())).collect() }
    }

    /// Image under a map of group elements, e.g. an automorphism.
    pub fn map_elements(&self, f: impl Fn(usize) -> usize) -> Self {
        let mut s = Self::zero();
        for (g, c) in self.terms() {
            s.add_term(f(g), c);
        }
        s
    }

    /// The augmentation `eps(sum c_g g) = sum c_g`.
    pub fn augmentation(&self) -> T {
        self.terms.values().fold(T::zero(), |acc, c| acc.plus(c))
    }

    /// Dense coordinates in the basis of group elements.
    pub fn to_dense(&self, order: usize) -> Vec<T> {
        let mut v = vec![T::zero(); order];
        for (g, c) in self.terms() {
            v[g] = c.clone();
        }
        v
    }

    pub fn from_dense(v: &[T]) -> Self {
        let mut s = Self::zero();
        for (g, c) in v.iter().enumerate() {
            s.add_term(g, c);
        }
        s
    }
}

impl GroupAlg<i64> {
    pub fn to_cyc(&self, p: u64) -> GroupAlg<Cyc> {
        let mut s = GroupAlg::zero();
        for (g, &c) in self.terms() {
            s.add_term(g, &Cyc::from_int(p, c));
        }
        s
    }
}

/// An element of the Magnus module `L_N = (+)_i T[G] e_i`.
pub type MagnusVector<T> = Vec<GroupAlg<T>>;

pub fn magnus_zero<T: Scalar>(n: usize) -> MagnusVector<T> {
    vec![GroupAlg::zero(); n]
}

pub fn magnus_add<T: Scalar>(a: &[GroupAlg<T>], b: &[GroupAlg<T>]) -> MagnusVector<T> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn magnus_sub<T: Scalar>(a: &[GroupAlg<T>], b: &[GroupAlg<T>]) -> MagnusVector<T> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

/// `r * m` for a group-ring scalar `r` acting on the left.
pub fn magnus_left<T: Scalar, G: FiniteGroup + ?Sized>(r: &GroupAlg<T>, m: &[GroupAlg<T>], grp: &G) -> MagnusVector<T> {
    m.iter().map(|x| r.mul(x, grp)).collect()
}

/// Dense coordinates, block `i` holding the coefficients of `e_i`.
pub fn magnus_dense<T: Scalar>(m: &[GroupAlg<T>], order: usize) -> Vec<T> {
    m.iter().flat_map(|x| x.to_dense(order)).collect()
}

pub fn magnus_from_dense<T: Scalar>(v: &[T], order: usize) -> MagnusVector<T> {
    v.chunks(order).map(GroupAlg::from_dense).collect()
}

/// The Fox derivative `fd(w)`, the crossed homomorphism with `fd(x_i) = e_i`.
pub fn fox_derive<G: FiniteGroup>(w: &FreeWord, q: &Quotient<'_, G>) -> MagnusVector<i64> {
    let mut out = magnus_zero(q.rank());
    let mut prefix = q.group.identity();
    for &l in w.letters() {
        let i = l.unsigned_abs() as usize - 1;
        let next = q.group.mul(prefix, q.letter(l));
        if l > 0 {
            out[i].add_term(prefix, &1);
        } else {
            out[i].add_term(next, &-1);
        }
        prefix = next;
    }
    out
}

/// `boundary(sum m_i e_i) = sum m_i (rho(x_i) - 1)`.
pub fn boundary<G: FiniteGroup>(m: &[GroupAlg<i64>], q: &Quotient<'_, G>) -> GroupAlg<i64> {
    let mut out = GroupAlg::zero();
    for (i, mi) in m.iter().enumerate() {
        let xi = q.images[i];
        out = out.add(&mi.right_mul(xi, q.group)).sub(mi);
    }
    out
}

/// The endomorphism induced by conjugation with `h`:
/// `m -> -rho(h) boundary(m) rho(h)^-1 fd(h) + rho(h) m`.
pub fn adjoint_action<G: FiniteGroup>(h: &FreeWord, m: &[GroupAlg<i64>], q: &Quotient<'_, G>) -> MagnusVector<i64> {
    let grp = q.group;
    let rh = q.eval(h);
    let d = boundary(m, q).left_mul(rh, grp).right_mul(grp.inv(rh), grp);
    let corr = magnus_left(&d, &fox_derive(h, q), grp);
    let shifted: MagnusVector<i64> = m.iter().map(|x| x.left_mul(rh, grp)).collect();
    magnus_sub(&shifted, &corr)
}

/// `Delta^2` as a word in `x_1..x_2g`: `x1 x3 .. x_{2g-1} (x1 .. x_2g)^-1 x2 x4 .. x_2g`.
pub fn delta_squared(g: usize) -> FreeWord {
    let odd = FreeWord::from_letters((0..g).map(|k| (2 * k + 1) as i32));
    let all = FreeWord::from_letters((1..=2 * g).map(|k| k as i32));
    let even = FreeWord::from_letters((1..=g).map(|k| (2 * k) as i32));
    odd.mul(&all.inv()).mul(&even)
}

/// `Delta = y1 y2 .. y_{2g+1}` over the `y` alphabet.
pub fn delta_y(g: usize) -> FreeWord {
    FreeWord::from_letters((1..=2 * g + 1).map(|k| k as i32))
}

/// The surface generators `a_1..a_2g`: `a_1 = x1`, `a_2i = x_2i^-1` and
/// `a_{2i+1} = (x2 x4 .. x_2i)^-1 x1 x2 .. x_{2i+1}` for `1 <= i < g`.
pub fn surface_generators(g: usize) -> Vec<FreeWord> {
    let mut a = Vec::with_capacity(2 * g);
    for j in 1..=2 * g {
        let w = if j == 1 {
            FreeWord::generator(1)
        } else if j % 2 == 0 {
            FreeWord::generator(j).inv()
        } else {
            let i = (j - 1) / 2;
            let evens = FreeWord::from_letters((1..=i).map(|k| (2 * k) as i32));
            let run = FreeWord::from_letters((1..=j).map(|k| k as i32));
            evens.inv().mul(&run)
        };
        a.push(w);
    }
    a
}

/// `[a1, a2][a3, a4] .. [a_{2g-1}, a_2g]`.
pub fn delta_squared_commutators(g: usize) -> FreeWord {
    let a = surface_generators(g);
    (0..g).fold(FreeWord::identity(), |acc, k| acc.mul(&FreeWord::commutator(&a[2 * k], &a[2 * k + 1])))
}

/// All three forms returned by one call: `Delta`, `Delta^2` and the surface generators.
pub fn delta_words(g: usize) -> (FreeWord, FreeWord, Vec<FreeWord>) {
    (delta_y(g), delta_squared(g), surface_generators(g))
}

/// Matrix of left multiplication by `r` on `C[G]`, columns indexed by the basis element acted on.
pub fn left_mult_matrix<G: FiniteGroup + ?Sized>(r: &GroupAlg<Cyc>, grp: &G) -> Matrix<Cyc> {
    let n = grp.order();
    let mut m = Matrix::zeros(n, n);
    for b in 0..n {
        for (a, c) in r.terms() {
            m.add_at(grp.mul(a, b), b, c);
        }
    }
    m
}

/// The boundary map `L_N -> C[G]` as a matrix on dense coordinates.
pub fn boundary_matrix<G: FiniteGroup>(q: &Quotient<'_, G>, p: u64) -> Matrix<Cyc> {
    let n = q.group.order();
    let mut m = Matrix::zeros(n, n * q.rank());
    for i in 0..q.rank() {
        for g in 0..n {
            let col = i * n + g;
            m.add_at(q.group.mul(g, q.images[i]), col, &Cyc::one(p));
            m.add_at(g, col, &Cyc::from_int(p, -1));
        }
    }
    m
}

/// The adjoint endomorphism `adj(h)` of `L_N` as a matrix on dense coordinates.
pub fn adjoint_matrix<G: FiniteGroup>(h: &FreeWord, q: &Quotient<'_, G>) -> Matrix<i64> {
    let n = q.group.order();
    let dim = n * q.rank();
    let mut m = Matrix::zeros(dim, dim);
    for col in 0..dim {
        let mut basis = magnus_zero::<i64>(q.rank());
        basis[col / n].add_term(col % n, &1);
        let img = magnus_dense(&adjoint_action(h, &basis, q), n);
        for (row, c) in img.into_iter().enumerate() {
            m.set(row, col, c);
        }
    }
    m
}

/// The splitting of the `lambda`-eigenspace of `L_N` under left multiplication by a central
/// `rho(h)`.
#[derive(Debug, Clone)]
pub struct Separation {
    /// Dimension of `L_lambda`.
    pub eigenspace_dim: usize,
    /// A basis of `Ker(boundary)` inside `L_lambda`.
    pub kernel_part: Vec<Vec<Cyc>>,
    /// The vectors `a fd(h)` for `a` running over a basis of `M_lambda`.
    pub free_part: Vec<Vec<Cyc>>,
    /// Rank of the union of both bases.
    pub joint_rank: usize,
}

/// Splits `L_lambda = Ker(boundary|L_lambda) (+) M_lambda fd(h)`.
pub fn separation_decompose<G: FiniteGroup>(
    lambda: &Cyc,
    h: &FreeWord,
    q: &Quotient<'_, G>,
) -> Result<Separation, WordError> {
    let grp = q.group;
    let p = lambda.prime().ok_or(WordError::TrivialEigenvalue)?;
    let one = Cyc::one(p);
    if lambda.is_one() || lambda.pow(p) != one {
        return Err(WordError::TrivialEigenvalue);
    }
    let rh = q.eval(h);
    if (0..grp.order()).any(|g| grp.mul(g, rh) != grp.mul(rh, g)) {
        return Err(WordError::NotCentral);
    }
    let n = grp.order();
    let rank = q.rank();
    let shift = left_mult_matrix(&GroupAlg::monomial(rh, one.clone()), grp).sub(&Matrix::scalar(n, lambda.clone()));
    let m_lambda = shift.kernel(&one);
    let eigen_dim = m_lambda.len() * rank;

    // L_lambda is M_lambda e_1 (+) ... (+) M_lambda e_n.
    let mut eigen_basis = Vec::with_capacity(eigen_dim);
    for i in 0..rank {
        for a in &m_lambda {
            let mut v = vec![Cyc::zero(); n * rank];
            v[i * n..(i + 1) * n].clone_from_slice(a);
            eigen_basis.push(v);
        }
    }
    let bd = boundary_matrix(q, p);
    let images: Vec<Vec<Cyc>> = eigen_basis.iter().map(|v| bd.apply(v)).collect();
    let image_matrix = Matrix::from_cols(n, &images);
    let kernel_part: Vec<Vec<Cyc>> = image_matrix
        .kernel(&one)
        .into_iter()
        .map(|coef| {
            let mut v = vec![Cyc::zero(); n * rank];
            for (c, b) in coef.iter().zip(&eigen_basis) {
                if !c.is_zero() {
                    Scalar::axpy(&mut v, c, b);
                }
            }
            v
        })
        .collect();

    let fdh = fox_derive(h, q);
    let fdh_c: MagnusVector<Cyc> = fdh.iter().map(|x| x.to_cyc(p)).collect();
    let free_part: Vec<Vec<Cyc>> =
        m_lambda.iter().map(|a| magnus_dense(&magnus_left(&GroupAlg::from_dense(a), &fdh_c, grp), n)).collect();

    let mut joint = Echelon::new(n * rank);
    for v in kernel_part.iter().chain(&free_part) {
        joint.insert(v.clone());
    }
    Ok(Separation { eigenspace_dim: eigen_dim, kernel_part, free_part, joint_rank: joint.rank() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        let w: FreeWord = "x1 x2^-1 x1^-1 x2".parse().unwrap();
        assert_eq!(w.to_string(), "x1 x2^-1 x1^-1 x2");
        assert_eq!("x1 x2 x2^-1 x3".parse::<FreeWord>().unwrap().to_string(), "x1 x3");
        assert_eq!("x2^3".parse::<FreeWord>().unwrap().len(), 3);
        assert!("x0".parse::<FreeWord>().is_err());
        assert!("z".parse::<FreeWord>().is_err());
        assert!("1".parse::<FreeWord>().unwrap().is_identity());
    }

    #[test]
    fn commutator_convention() {
        let c = FreeWord::commutator(&FreeWord::generator(1), &FreeWord::generator(2));
        assert_eq!(c.to_string(), "x1 x2 x1^-1 x2^-1");
        let x = FreeWord::generator(1);
        assert!(x.mul(&x.inv()).is_identity());
    }

    #[test]
    fn delta_forms_agree_freely() {
        assert_eq!(delta_squared(1).to_string(), "x1 x2^-1 x1^-1 x2");
        for g in 1..=4 {
            assert_eq!(delta_squared(g), delta_squared_commutators(g), "g = {g}");
        }
    }
}
