//! The braid group action at every level: on `y`-words, on the module `L_N+` in the `t` and
//! `u` bases, on `V_g^eta` and its dual, and on `L_g^eta = V_g^eta (x) <u_1..u_2g>`.
//!
//! Matrices act on column vectors: column `c` holds the image of basis vector `c`.

use num_rational::BigRational;

use crate::cyclo::{b_hat, c_hat, gauss_sum, Cyc, PrimeParams};
use crate::heis::{multi_indices, psi_on_group, GPlus, Heis, HeisError};
use crate::linalg::{Matrix, Scalar};
use crate::words::{FiniteGroup, FreeWord, GroupAlg};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BraidError {
    #[error(transparent)]
    Heis(#[from] HeisError),
    #[error("generator index {0} outside 1..=2g")]
    BadGenerator(usize),
    #[error("(A^p - 1)^2 != 0 for {0}")]
    NotQuasiUnipotent(String),
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Images of `y_1..y_n` under `sigma_i`: `y_i -> y_{i+1}`, `y_{i+1} -> y_{i+1} y_i y_{i+1}`.
pub fn sigma_images(i: usize, n: usize) -> Vec<FreeWord> {
    (1..=n)
        .map(|j| {
            if j == i {
                FreeWord::generator(i + 1)
            } else if j == i + 1 {
                FreeWord::from_letters([(i + 1) as i32, i as i32, (i + 1) as i32])
            } else {
                FreeWord::generator(j)
            }
        })
        .collect()
}

/// `sigma_i` applied to a word over `y_1..y_n`.
pub fn sigma_on_words(i: usize, w: &FreeWord, n: usize) -> FreeWord {
    w.substitute(&sigma_images(i, n))
}

/// A vector of `L_N+` (or of the `u`-span) as one group-ring coefficient per basis vector.
pub type RingVec<T> = Vec<GroupAlg<T>>;

/// The module `L_N+ = (+) Z[G+] t_j / sum Z[G+](1 + y_j) t_j`, coordinatized by the free
/// `Z[G]`-basis `t_1..t_{2g+1}`.
pub struct LPlus {
    pub gp: GPlus,
    /// `psi[i - 1]` is the automorphism table of `Psi_i` on `G`.
    psi: Vec<Vec<usize>>,
}

impl LPlus {
    pub fn new(p: u64, g: usize) -> Result<Self, BraidError> {
        let gp = GPlus::new(Heis::new(p, g)?);
        let psi = (1..=2 * g).map(|i| psi_on_group(&gp, i)).collect();
        Ok(Self { gp, psi })
    }

    pub fn g(&self) -> usize {
        self.gp.heis.g
    }

    /// Number of `t` generators, `2g + 1`.
    pub fn n(&self) -> usize {
        2 * self.g() + 1
    }

    pub fn psi_table(&self, i: usize) -> &[usize] {
        &self.psi[i - 1]
    }

    pub fn zero(&self) -> RingVec<i64> {
        vec![GroupAlg::zero(); self.n()]
    }

    /// `t_j`, numbered from 1.
    pub fn t(&self, j: usize) -> RingVec<i64> {
        let mut v = self.zero();
        v[j - 1].add_term(self.gp.heis.identity(), &1);
        v
    }

    /// Left action of an element of `G+`, using `(k, 1) t_j = -((k, 1) y_j) t_j`.
    pub fn act(&self, a: usize, v: &[GroupAlg<i64>]) -> RingVec<i64> {
        let mut out = self.zero();
        for (j, coeff) in v.iter().enumerate() {
            for (h, c) in coeff.terms() {
                let (k, odd) = self.gp.split(self.gp.mul(a, h));
                if odd {
                    let (base, _) = self.gp.split(self.gp.mul(self.gp.join(k, true), self.gp.y(j + 1)));
                    out[j].add_term(base, &-c);
                } else {
                    out[j].add_term(k, c);
                }
            }
        }
        out
    }

    fn add_into(dst: &mut [GroupAlg<i64>], src: &[GroupAlg<i64>]) {
        for (d, s) in dst.iter_mut().zip(src) {
            *d = d.add(s);
        }
    }

    /// `r v` for `r` in `Z[G]`.
    pub fn act_ring(&self, r: &GroupAlg<i64>, v: &[GroupAlg<i64>]) -> RingVec<i64> {
        let mut out = self.zero();
        for (h, c) in r.terms() {
            let part: RingVec<i64> = self.act(h, v).iter().map(|x| x.scale(c)).collect();
            Self::add_into(&mut out, &part);
        }
        out
    }

    /// The crossed homomorphism `fd+` on words over `y_1..y_{2g+1}`.
    pub fn fd_plus(&self, w: &FreeWord) -> RingVec<i64> {
        let q = self.gp.quotient();
        let mut out = self.zero();
        let mut prefix = self.gp.identity();
        for &l in w.letters() {
            let j = l.unsigned_abs() as usize;
            let next = self.gp.mul(prefix, q.letter(l));
            let term = if l > 0 {
                self.act(prefix, &self.t(j))
            } else {
                self.act(next, &self.t(j)).iter().map(GroupAlg::neg).collect()
            };
            Self::add_into(&mut out, &term);
            prefix = next;
        }
        out
    }

    /// `Psi_i` applied to the coefficients of a vector.
    fn twist(&self, i: usize, v: &[GroupAlg<i64>]) -> RingVec<i64> {
        let table = self.psi_table(i);
        v.iter().map(|x| x.map_elements(|h| table[h])).collect()
    }

    /// `Psi^_i(sum a_j t_j) = sum Psi_i(a_j) fd+(sigma_i(y_j))`.
    pub fn psi_hat_t(&self, i: usize, v: &[GroupAlg<i64>]) -> RingVec<i64> {
        let images = sigma_images(i, self.n());
        let tv = self.twist(i, v);
        let mut out = self.zero();
        for (j, a) in tv.iter().enumerate() {
            if !a.is_zero() {
                Self::add_into(&mut out, &self.act_ring(a, &self.fd_plus(&images[j])));
            }
        }
        out
    }

    /// `u_m` in `t`-coordinates:
    /// `u_2i = y1 .. y_{2i-1} fd+(y_2i .. y_{2g+1})`,
    /// `u_{2i-1} = -y_{2g+1} .. y_{2i+1} fd+(y_2i y_{2i-1} .. y_1)`.
    pub fn u(&self, m: usize) -> RingVec<i64> {
        let n = self.n();
        let q = self.gp.quotient();
        if m.is_multiple_of(2) {
            let prefix = q.eval(&FreeWord::from_letters((1..m).map(|k| k as i32)));
            self.act(prefix, &self.fd_plus(&FreeWord::from_letters((m..=n).map(|k| k as i32))))
        } else {
            let i = m.div_ceil(2);
            let prefix = q.eval(&FreeWord::from_letters((2 * i + 1..=n).rev().map(|k| k as i32)));
            let inner = self.fd_plus(&FreeWord::from_letters((1..=2 * i).rev().map(|k| k as i32)));
            self.act(prefix, &inner).iter().map(GroupAlg::neg).collect()
        }
    }

    /// `w_0 = fd+(y1 .. y_{2g+1})`.
    pub fn w0(&self) -> RingVec<i64> {
        self.fd_plus(&FreeWord::from_letters((1..=self.n()).map(|k| k as i32)))
    }

    /// The basis `u_1, .., u_2g, w_0` in `t`-coordinates.
    pub fn good_basis(&self) -> Vec<RingVec<i64>> {
        (1..=2 * self.g()).map(|m| self.u(m)).chain([self.w0()]).collect()
    }

    /// Converts `u`-coordinates to `t`-coordinates.
    pub fn to_t(&self, coords: &[GroupAlg<i64>], basis: &[RingVec<i64>]) -> RingVec<i64> {
        let mut out = self.zero();
        for (a, b) in coords.iter().zip(basis) {
            if !a.is_zero() {
                Self::add_into(&mut out, &self.act_ring(a, b));
            }
        }
        out
    }

    /// `Psi^_i` in the basis `u_1..u_2g, w_0`, from the closed formulas
    /// `Psi^_{2i-1}(u_2i) = u_2i - X (u_{2i-1} - u_{2i-3})`,
    /// `Psi^_2i(u_{2i-1}) = u_{2i-1} + Y^-1 (u_2i - u_{2i+2})`, all other basis vectors fixed.
    pub fn psi_hat_u<T: Scalar>(&self, i: usize, v: &[GroupAlg<T>], one: &T) -> RingVec<T> {
        let g = self.g();
        let grp = &self.gp.heis;
        let table = self.psi_table(i);
        let tv: RingVec<T> = v.iter().map(|x| x.map_elements(|h| table[h])).collect();
        let mut out = tv.clone();
        let half = i.div_ceil(2);
        let (src, factor, plus, minus) = if i % 2 == 1 {
            // source u_2k, correction -X (u_{2k-1} - u_{2k-3})
            (2 * half, GroupAlg::monomial(x_factor(grp, half), one.negated()), 2 * half - 1, 2 * half as i64 - 3)
        } else {
            let y_inv = grp.inv(y_factor(grp, half));
            (2 * half - 1, GroupAlg::monomial(y_inv, one.clone()), 2 * half, 2 * half as i64 + 2)
        };
        let coeff = &tv[src - 1];
        if !coeff.is_zero() {
            let corr = coeff.mul(&factor, grp);
            out[plus - 1] = out[plus - 1].add(&corr);
            if minus >= 1 && minus as usize <= 2 * g {
                let m = minus as usize;
                out[m - 1] = out[m - 1].sub(&corr);
            }
        }
        out
    }

    /// Dense integer matrix of `f` on the `Q`-basis `{h b_j}`, with `b` given in `t`-coordinates
    /// or `u`-coordinates depending on `f`. Column `j |G| + h` is `f(h e_j)`.
    pub fn dense_matrix(&self, dim_blocks: usize, f: impl Fn(&RingVec<i64>) -> RingVec<i64>) -> Matrix<i64> {
        let order = self.gp.heis.order();
        let dim = dim_blocks * order;
        let mut m = Matrix::zeros(dim, dim);
        for j in 0..dim_blocks {
            for h in 0..order {
                let mut e = vec![GroupAlg::zero(); dim_blocks];
                e[j].add_term(h, &1);
                for (r, coeff) in f(&e).iter().enumerate() {
                    for (k, c) in coeff.terms() {
                        m.set(r * order + k, j * order + h, *c);
                    }
                }
            }
        }
        m
    }

    /// Columns `h b` for every good basis vector `b` and `h` in `G`, in `t`-coordinates.
    pub fn transition_matrix(&self) -> Matrix<i64> {
        let basis = self.good_basis();
        self.dense_matrix(self.n(), |coords| self.to_t(coords, &basis))
    }

    /// Compares `T Psi^_u` with `Psi^_t T` on every `Q`-basis vector `h b`; returns the first
    /// mismatch as `(generator, basis index, group element)`.
    pub fn cross_validate(&self, i: usize) -> Option<(usize, usize, usize)> {
        let basis = self.good_basis();
        let order = self.gp.heis.order();
        for (j, b) in basis.iter().enumerate() {
            for h in 0..order {
                let hb = self.act(h, b);
                let lhs = self.psi_hat_t(i, &hb);
                let mut coords = vec![GroupAlg::zero(); self.n()];
                coords[j].add_term(h, &1);
                let rhs = self.to_t(&self.psi_hat_u(i, &coords, &1), &basis);
                if lhs != rhs {
                    return Some((i, j + 1, h));
                }
            }
        }
        None
    }
}

/// Multiplicative Jordan decomposition `A = ss uni` of an operator with `(A^p - 1)^2 = 0`:
/// `ss = A (1 - (A^p - 1)/p)`, `uni = 1 + (A^p - 1)/p`.
pub fn jordan(a: &Matrix<Cyc>, p: u64, name: &str) -> Result<(Matrix<Cyc>, Matrix<Cyc>), BraidError> {
    let one = Cyc::one(p);
    let id = Matrix::identity(a.rows(), one.clone());
    let n = a.pow(p, &one).sub(&id);
    if !n.mul(&n).is_zero() {
        return Err(BraidError::NotQuasiUnipotent(name.to_string()));
    }
    let np = n.scale_ratio(&ratio(1, p as i64));
    let ss = a.mul(&id.sub(&np));
    let uni = id.add(&np);
    Ok((ss, uni))
}

/// `phi(A; a) = (1/p) sum_n eta^(-a n) A^n` for an operator of order `p`.
pub fn spectral_average(ss: &Matrix<Cyc>, a: u64, p: u64) -> Matrix<Cyc> {
    let one = Cyc::one(p);
    let mut acc = Matrix::zeros(ss.rows(), ss.cols());
    let mut power = Matrix::identity(ss.rows(), one);
    for n in 0..p {
        acc = acc.add(&power.scale(&Cyc::eta(p, -((a * n % p) as i64))));
        if n + 1 < p {
            power = power.mul(ss);
        }
    }
    acc.scale_ratio(&ratio(1, p as i64))
}

/// `A^-1 = ss^(p-1) (2 - uni)`.
pub fn inverse_from_jordan(ss: &Matrix<Cyc>, uni: &Matrix<Cyc>, p: u64) -> Matrix<Cyc> {
    let one = Cyc::one(p);
    let two = Matrix::scalar(uni.rows(), Cyc::from_int(p, 2));
    ss.pow(p - 1, &one).mul(&two.sub(uni))
}

/// The Jordan data of one generator `Psi^_l` on `L_g^eta`.
#[derive(Debug, Clone)]
pub struct Generator {
    pub psi: Matrix<Cyc>,
    pub ss: Matrix<Cyc>,
    pub uni: Matrix<Cyc>,
    pub inverse: Matrix<Cyc>,
}

impl Generator {
    /// `uni - 1`.
    pub fn unil(&self) -> Matrix<Cyc> {
        let p = self.psi.data().iter().find_map(Cyc::prime).expect("nonzero operator");
        self.uni.sub(&Matrix::identity(self.uni.rows(), Cyc::one(p)))
    }
}

/// The spaces `V_g^eta`, its dual, and `L_g^eta`, with all generator matrices.
///
/// `e_j` has index `j_1 + p j_2 + .. + p^(g-1) j_g`; `e_j (x) u_m` has index
/// `(m - 1) p^g + index(j)`.
#[derive(Debug, Clone)]
pub struct Lg {
    pub pp: PrimeParams,
    pub g: usize,
    pub heis: Heis,
    pub vdim: usize,
    pub dim: usize,
}

impl Lg {
    pub fn new(p: u64, g: usize) -> Result<Self, BraidError> {
        let heis = Heis::new(p, g)?;
        let vdim = (p as usize).pow(g as u32);
        Ok(Self { pp: heis.pp, g, heis, vdim, dim: 2 * g * vdim })
    }

    pub fn p(&self) -> u64 {
        self.pp.p
    }

    pub fn one(&self) -> Cyc {
        Cyc::one(self.p())
    }

    pub fn eta(&self, e: i64) -> Cyc {
        Cyc::eta(self.p(), e)
    }

    pub fn jvec(&self, mut idx: usize) -> Vec<u64> {
        let p = self.p() as usize;
        (0..self.g)
            .map(|_| {
                let d = idx % p;
                idx /= p;
                d as u64
            })
            .collect()
    }

    pub fn jidx(&self, j: &[u64]) -> usize {
        let p = self.p();
        j.iter().rev().fold(0usize, |acc, &x| acc * p as usize + (x % p) as usize)
    }

    /// `j + s (e_k - e_{k+1})` with `e_{g+1} = 0`, `k` numbered from 1.
    pub fn shift(&self, j: &[u64], k: usize, s: i64) -> Vec<u64> {
        let mut out = j.to_vec();
        out[k - 1] = self.pp.md(out[k - 1] as i64 + s);
        if k < self.g {
            out[k] = self.pp.md(out[k] as i64 - s);
        }
        out
    }

    /// `j + d e_k` with `e_{g+1} = 0`.
    pub fn bump(&self, j: &[u64], k: usize, d: i64) -> Vec<u64> {
        let mut out = j.to_vec();
        if k <= self.g {
            out[k - 1] = self.pp.md(out[k - 1] as i64 + d);
        }
        out
    }

    /// `j_1 + .. + j_k` as an integer.
    pub fn prefix_sum(j: &[u64], k: usize) -> i64 {
        j[..k].iter().map(|&x| x as i64).sum()
    }

    pub fn lidx(&self, j: usize, m: usize) -> usize {
        (m - 1) * self.vdim + j
    }

    pub fn indices(&self) -> Vec<Vec<u64>> {
        multi_indices(self.p(), self.g)
    }

    fn check_gen(&self, l: usize) -> Result<(), BraidError> {
        if l == 0 || l > 2 * self.g {
            Err(BraidError::BadGenerator(l))
        } else {
            Ok(())
        }
    }

    /// `Psi_l` on `V_g^eta`:
    /// `Psi_{2k-1} e_j = eta^(tau(j_k)) e_j`,
    /// `Psi_2k e_j = (G(1/2)/p) sum_s eta^(-(s + 1/2)^2 / 2) e_{j + s(e_k - e_{k+1})}`.
    pub fn psi_v(&self, l: usize) -> Result<Matrix<Cyc>, BraidError> {
        self.check_gen(l)?;
        Ok(self.psi_on(l, false))
    }

    /// `Psi_l` on the dual `V_g^eta*`:
    /// `Psi_{2k-1} e'_i = eta^(-tau(i_k)) e'_i`,
    /// `Psi_2k e'_i = (G(-1/2)/p) sum_t eta^((t + 1/2)^2 / 2) e'_{i + t(e_k - e_{k+1})}`.
    pub fn psi_vdual(&self, l: usize) -> Result<Matrix<Cyc>, BraidError> {
        self.check_gen(l)?;
        Ok(self.psi_on(l, true))
    }

    fn psi_on(&self, l: usize, dual: bool) -> Matrix<Cyc> {
        let p = self.p();
        let pp = &self.pp;
        let k = l.div_ceil(2);
        let sign: i64 = if dual { -1 } else { 1 };
        let mut m = Matrix::zeros(self.vdim, self.vdim);
        if l % 2 == 1 {
            for (c, j) in self.indices().iter().enumerate() {
                m.set(c, c, self.eta(sign * pp.tau(j[k - 1]) as i64));
            }
            return m;
        }
        let gauss_arg = if dual { p - pp.inv2 } else { pp.inv2 };
        let lead = gauss_sum(pp, gauss_arg).scale(&ratio(1, p as i64));
        for (c, j) in self.indices().iter().enumerate() {
            for s in 0..p {
                let sh = (s + pp.inv2) % p;
                let e = (pp.inv2 * (sh * sh % p)) % p;
                let coeff = &lead * &self.eta(-sign * e as i64);
                m.set(self.jidx(&self.shift(j, k, s as i64)), c, coeff);
            }
        }
        m
    }

    /// Right action on `V_g^eta`: `e_j h = eta^e e_j'`, returned as `(e, j')`.
    /// `e_j x_{2k-1} = eta^(j_k) e_j`, `e_j x_2k = e_{j - e_k + e_{k+1}}`, `c` acts by `eta`.
    pub fn right_act(&self, j: &[u64], h: usize) -> (u64, Vec<u64>) {
        let p = self.p();
        let (a, m) = self.heis.decode(h);
        let mut e = 0u64;
        let mut cur = j.to_vec();
        for (i, &times) in a.iter().enumerate() {
            let k = i / 2 + 1;
            for _ in 0..times {
                if i % 2 == 0 {
                    e = (e + cur[k - 1]) % p;
                } else {
                    cur = self.shift(&cur, k, -1);
                }
            }
        }
        ((e + m) % p, cur)
    }

    /// Left action on `V_g^eta*`: `x_{2k-1} e'_i = eta^(i_k) e'_i`, `x_2k e'_i = e'_{i + e_k -
    /// e_{k+1}}`, `c` acts by `eta`.
    pub fn left_act_dual(&self, i: &[u64], h: usize) -> (u64, Vec<u64>) {
        let p = self.p();
        let (a, m) = self.heis.decode(h);
        let mut e = m % p;
        let mut cur = i.to_vec();
        for (idx, &times) in a.iter().enumerate().rev() {
            let k = idx / 2 + 1;
            for _ in 0..times {
                if idx % 2 == 0 {
                    e = (e + cur[k - 1]) % p;
                } else {
                    cur = self.shift(&cur, k, 1);
                }
            }
        }
        (e, cur)
    }

    /// Matrix of `v -> v h` on `V_g^eta`.
    pub fn right_act_matrix(&self, h: usize) -> Matrix<Cyc> {
        let mut m = Matrix::zeros(self.vdim, self.vdim);
        for (c, j) in self.indices().iter().enumerate() {
            let (e, j2) = self.right_act(j, h);
            m.set(self.jidx(&j2), c, self.eta(e as i64));
        }
        m
    }

    /// Matrix of `w -> h w` on `V_g^eta*`.
    pub fn left_act_dual_matrix(&self, h: usize) -> Matrix<Cyc> {
        let mut m = Matrix::zeros(self.vdim, self.vdim);
        for (c, i) in self.indices().iter().enumerate() {
            let (e, i2) = self.left_act_dual(i, h);
            m.set(self.jidx(&i2), c, self.eta(e as i64));
        }
        m
    }

    /// `n . Omega j = sum_k n_k (j_1 + .. + j_k)`.
    fn omega_pair(&self, n: &[u64], j: &[u64]) -> i64 {
        (0..self.g).map(|k| n[k] as i64 * Self::prefix_sum(j, k + 1)).sum()
    }

    /// Columns `e*_n = alpha_g sum_j eta^(n . Omega j) e_j`.
    pub fn fourier(&self) -> Matrix<Cyc> {
        let alpha = crate::cyclo::alpha(&self.pp, self.g as u32);
        let idx = self.indices();
        Matrix::from_fn(self.vdim, self.vdim, |r, c| &alpha * &self.eta(self.omega_pair(&idx[c], &idx[r])))
    }

    /// `e_j = alpha_bar_g sum_n eta^(-n . Omega j) e*_n`, as the matrix taking `e`-coordinates
    /// to `e*`-coordinates.
    pub fn fourier_inverse(&self) -> Matrix<Cyc> {
        let alpha_bar = crate::cyclo::alpha_bar(&self.pp, self.g as u32);
        let idx = self.indices();
        Matrix::from_fn(self.vdim, self.vdim, |r, c| &alpha_bar * &self.eta(-self.omega_pair(&idx[r], &idx[c])))
    }

    /// `Psi^_l` on `L_g^eta`:
    /// `Psi^_{2k-1}(v u_l) = Psi(v) u_l - d(l, 2k) Psi(v) X (u_{2k-1} - u_{2k-3})`,
    /// `Psi^_2k(v u_l) = Psi(v) u_l + d(l, 2k-1) Psi(v) Y^-1 (u_2k - u_{2k+2})`,
    /// with `u_{-1} = u_{2g+2} = 0`.
    pub fn psi_hat(&self, l: usize) -> Result<Matrix<Cyc>, BraidError> {
        let psi = self.psi_v(l)?;
        let g = self.g;
        let k = l.div_ceil(2);
        let (src, factor, plus, minus, sign) = if l % 2 == 1 {
            (2 * k, x_factor(&self.heis, k), 2 * k - 1, 2 * k as i64 - 3, -1i64)
        } else {
            (2 * k - 1, self.heis.inv(y_factor(&self.heis, k)), 2 * k, 2 * k as i64 + 2, 1)
        };
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (c, _) in self.indices().iter().enumerate() {
            let image = psi.col(c);
            for um in 1..=2 * g {
                let col = self.lidx(c, um);
                for (r, coeff) in image.iter().enumerate() {
                    if coeff.is_zero() {
                        continue;
                    }
                    m.add_at(self.lidx(r, um), col, coeff);
                    if um == src {
                        let (e, r2) = self.right_act(&self.jvec(r), factor);
                        let val = (coeff * &self.eta(e as i64)).scale_int(sign);
                        let r2 = self.jidx(&r2);
                        m.add_at(self.lidx(r2, plus), col, &val);
                        if minus >= 1 && minus as usize <= 2 * g {
                            m.add_at(self.lidx(r2, minus as usize), col, &-&val);
                        }
                    }
                }
            }
        }
        Ok(m)
    }

    /// Jordan data for `Psi^_l`.
    pub fn generator(&self, l: usize) -> Result<Generator, BraidError> {
        let psi = self.psi_hat(l)?;
        let (ss, uni) = jordan(&psi, self.p(), &format!("Psi^_{l}"))?;
        let inverse = inverse_from_jordan(&ss, &uni, self.p());
        Ok(Generator { psi, ss, uni, inverse })
    }

    pub fn generators(&self) -> Result<Vec<Generator>, BraidError> {
        (1..=2 * self.g).map(|l| self.generator(l)).collect()
    }

    /// Sets `vector(j, m) += c` in a column of `out`.
    fn put(&self, out: &mut Matrix<Cyc>, col: usize, j: &[u64], m: i64, c: &Cyc) {
        if m >= 1 && m as usize <= 2 * self.g && !c.is_zero() {
            out.add_at(self.lidx(self.jidx(j), m as usize), col, c);
        }
    }

    /// Closed form of `Psi^_{l,uni} - 1`:
    /// odd `l = 2k-1`: `e_i u_m -> -d(m,2k) d(i_k,0) eta^(i_1+..+i_{k-1}) e_{i-e_k}(u_{2k-1} - u_{2k-3})`;
    /// even `l = 2k`: `e_i u_m -> d(m,2k-1) (1/p) eta^(-(i_1+..+i_k)) sum_s eta^(-s)
    /// e_{i + s e_k + (1-s) e_{k+1}} (u_2k - u_{2k+2})`.
    pub fn closed_unil(&self, l: usize) -> Result<Matrix<Cyc>, BraidError> {
        self.check_gen(l)?;
        let p = self.p();
        let k = l.div_ceil(2);
        let mut out = Matrix::zeros(self.dim, self.dim);
        for i in self.indices() {
            let ci = self.jidx(&i);
            if l % 2 == 1 {
                if i[k - 1] != 0 {
                    continue;
                }
                let col = self.lidx(ci, 2 * k);
                let c = -self.eta(Self::prefix_sum(&i, k - 1));
                let target = self.bump(&i, k, -1);
                self.put(&mut out, col, &target, 2 * k as i64 - 1, &c);
                self.put(&mut out, col, &target, 2 * k as i64 - 3, &-&c);
            } else {
                let col = self.lidx(ci, 2 * k - 1);
                for s in 0..p as i64 {
                    let c = self.eta(-Self::prefix_sum(&i, k) - s).scale(&ratio(1, p as i64));
                    let target = self.bump(&self.bump(&i, k, s), k + 1, 1 - s);
                    self.put(&mut out, col, &target, 2 * k as i64, &c);
                    self.put(&mut out, col, &target, 2 * k as i64 + 2, &-&c);
                }
            }
        }
        Ok(out)
    }

    /// Closed form of `phi(Psi^_{l,ss}; a)`.
    ///
    /// Odd `l = 2k-1`: `e_j u_n -> d(a, tau(j_k)) { e_j u_n - d(n,2k) d(j_k != 0)
    /// (1 - eta^(-j_k))^-1 eta^(j_1+..+j_{k-1}) e_{j-e_k} (u_{2k-1} - u_{2k-3}) }`.
    ///
    /// Even `l = 2k`: `e_i u_m -> (1/p) sum_s eta^(-s/2) B^a_s e_{i + s(e_k - e_{k+1})} u_m +
    /// d(m,2k-1) (1/p) sum_s eta^(-(i_1+..+i_k)) eta^(-s) C^a_s e_{i + s e_k + (1-s) e_{k+1}}
    /// (u_2k - u_{2k+2})`.
    pub fn closed_phi(&self, l: usize, a: u64) -> Result<Matrix<Cyc>, BraidError> {
        self.closed_phi_impl(l, a, false)
    }

    /// `closed_phi` with the odd case completed by the term the displayed form omits:
    /// `+ d(a, tau(j_k - 1)) d(n,2k) d(j_k != 0) (1 - eta^(-j_k))^-1 eta^(j_1+..+j_{k-1})
    /// e_{j-e_k} (u_{2k-1} - u_{2k-3})`. It comes from
    /// `(1/p) sum_m eta^(-am) eta^(tau(j) m) (1 - eta^(-mj)) = d(a,tau(j)) - d(a,tau(j-1))`.
    /// The even case is unchanged.
    pub fn closed_phi_complete(&self, l: usize, a: u64) -> Result<Matrix<Cyc>, BraidError> {
        self.closed_phi_impl(l, a, true)
    }

    fn closed_phi_impl(&self, l: usize, a: u64, complete: bool) -> Result<Matrix<Cyc>, BraidError> {
        self.check_gen(l)?;
        let p = self.p();
        let pp = &self.pp;
        let k = l.div_ceil(2);
        let a = a % p;
        let inv_p = ratio(1, p as i64);
        let mut out = Matrix::zeros(self.dim, self.dim);
        for i in self.indices() {
            let ci = self.jidx(&i);
            for m in 1..=2 * self.g {
                let col = self.lidx(ci, m);
                if l % 2 == 1 {
                    if complete && m == 2 * k && i[k - 1] != 0 && pp.tau(pp.md(i[k - 1] as i64 - 1)) == a {
                        let den = self.one() - self.eta(-(i[k - 1] as i64));
                        let c = (self.eta(Self::prefix_sum(&i, k - 1)).checked_div(&den)).expect("nonzero");
                        let target = self.bump(&i, k, -1);
                        self.put(&mut out, col, &target, 2 * k as i64 - 1, &c);
                        self.put(&mut out, col, &target, 2 * k as i64 - 3, &-&c);
                    }
                    if pp.tau(i[k - 1]) != a {
                        continue;
                    }
                    self.put(&mut out, col, &i, m as i64, &self.one());
                    if m == 2 * k && i[k - 1] != 0 {
                        let den = self.one() - self.eta(-(i[k - 1] as i64));
                        let c = (self.eta(Self::prefix_sum(&i, k - 1)).checked_div(&den)).expect("nonzero");
                        let target = self.bump(&i, k, -1);
                        self.put(&mut out, col, &target, 2 * k as i64 - 1, &-&c);
                        self.put(&mut out, col, &target, 2 * k as i64 - 3, &c);
                    }
                } else {
                    for s in 0..p {
                        let bh = b_hat(pp, a, s);
                        if !bh.is_zero() {
                            let c = (&self.eta(-((pp.inv2 * s % p) as i64)) * &bh).scale(&inv_p);
                            self.put(&mut out, col, &self.shift(&i, k, s as i64), m as i64, &c);
                        }
                        if m == 2 * k - 1 {
                            let ch = c_hat(pp, a, s);
                            if !ch.is_zero() {
                                let c = (&self.eta(-Self::prefix_sum(&i, k) - s as i64) * &ch).scale(&inv_p);
                                let target = self.bump(&self.bump(&i, k, s as i64), k + 1, 1 - s as i64);
                                self.put(&mut out, col, &target, 2 * k as i64, &c);
                                self.put(&mut out, col, &target, 2 * k as i64 + 2, &-&c);
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `X_k = x1 x3 .. x_{2k-3} x_2k x_{2k+2} .. x_2g`.
pub fn x_factor(h: &Heis, k: usize) -> usize {
    let gens = (1..k).map(|i| 2 * i - 1).chain((k..=h.g).map(|i| 2 * i));
    gens.fold(h.identity(), |acc, j| h.mul(acc, h.x(j)))
}

/// `Y_k = x1 x3 .. x_{2k-1} x_2k x_{2k+2} .. x_2g`.
pub fn y_factor(h: &Heis, k: usize) -> usize {
    let gens = (1..=k).map(|i| 2 * i - 1).chain((k..=h.g).map(|i| 2 * i));
    gens.fold(h.identity(), |acc, j| h.mul(acc, h.x(j)))
}

/// Checks every braid relation among `ops[0..]`, read as `Psi_1, Psi_2, ...`: adjacent
/// `ABA = BAB` and distant `AB = BA`. Returns the failing pairs.
pub fn braid_relation_failures(ops: &[Matrix<Cyc>]) -> Vec<(usize, usize)> {
    let mut bad = Vec::new();
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            let (a, b) = (&ops[i], &ops[j]);
            let ok = if j == i + 1 { a.mul(b).mul(a) == b.mul(a).mul(b) } else { a.mul(b) == b.mul(a) };
            if !ok {
                bad.push((i + 1, j + 1));
            }
        }
    }
    bad
}

/// Same as [`braid_relation_failures`] for integer matrices.
pub fn braid_relation_failures_int(ops: &[Matrix<i64>]) -> Vec<(usize, usize)> {
    let mut bad = Vec::new();
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            let (a, b) = (&ops[i], &ops[j]);
            let ok = if j == i + 1 { a.mul(b).mul(a) == b.mul(a).mul(b) } else { a.mul(b) == b.mul(a) };
            if !ok {
                bad.push((i + 1, j + 1));
            }
        }
    }
    bad
}

/// Image of `e'_i (x) e_j (x) u_m` in the `u`-span of `C[G] (x) L_N+`: `E_ij u_m`.
pub struct TensorCheck<'a> {
    pub lg: &'a Lg,
    pub lplus: &'a LPlus,
    units: Vec<Vec<GroupAlg<Cyc>>>,
}

impl<'a> TensorCheck<'a> {
    pub fn new(lg: &'a Lg, lplus: &'a LPlus, omega_sign: i64) -> Self {
        let idx = lg.indices();
        let units =
            idx.iter().map(|i| idx.iter().map(|j| lg.heis.matrix_unit_rewritten(i, j, omega_sign)).collect()).collect();
        Self { lg, lplus, units }
    }

    /// `iota(sum_{i, j, m} c e'_i e_j u_m)` for a dual index `i` and an `L_g` vector.
    fn iota(&self, dual: &[Cyc], lvec: &[Cyc]) -> RingVec<Cyc> {
        let lg = self.lg;
        let mut out = vec![GroupAlg::zero(); 2 * lg.g + 1];
        for (i, a) in dual.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (r, b) in lvec.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let (m, j) = (r / lg.vdim, r % lg.vdim);
                let term = self.units[i][j].scale(&(a * b));
                out[m] = out[m].add(&term);
            }
        }
        out
    }

    /// Checks `iota((Psi (x) Psi^)(x)) = Psi^(iota(x))` on every basis vector for generator
    /// `l`; returns the first failing `(i, j, m)`.
    pub fn check(&self, l: usize) -> Option<(usize, usize, usize)> {
        let lg = self.lg;
        let dual = lg.psi_vdual(l).ok()?;
        let psi_hat = lg.psi_hat(l).ok()?;
        let one = lg.one();
        for i in 0..lg.vdim {
            let di = dual.col(i);
            let mut unit_i = vec![Cyc::zero(); lg.vdim];
            unit_i[i] = one.clone();
            for col in 0..lg.dim {
                let lhs = self.iota(&di, &psi_hat.col(col));
                let mut basis = vec![Cyc::zero(); lg.dim];
                basis[col] = one.clone();
                let rhs = self.lplus.psi_hat_u(l, &self.iota(&unit_i, &basis), &one);
                if lhs != rhs {
                    return Some((i, col % lg.vdim, col / lg.vdim + 1));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_examples() {
        let y1 = FreeWord::generator(1);
        assert_eq!(sigma_on_words(1, &y1, 3).display_with('y'), "y2");
        let y2 = FreeWord::generator(2);
        assert_eq!(sigma_on_words(1, &y2, 3).display_with('y'), "y2 y1 y2");
    }

    #[test]
    fn psi_hat_t_on_generators() {
        let lp = LPlus::new(3, 1).unwrap();
        assert_eq!(lp.psi_hat_t(1, &lp.t(1)), lp.t(2));
        assert_eq!(lp.psi_hat_t(1, &lp.t(3)), lp.t(3));
        assert_eq!(lp.psi_hat_t(2, &lp.w0()), lp.w0());
    }

    #[test]
    fn v_generators_have_order_p() {
        let lg = Lg::new(3, 1).unwrap();
        let one = lg.one();
        for l in 1..=2 {
            let m = lg.psi_v(l).unwrap();
            assert_eq!(m.pow(3, &one), Matrix::identity(3, one.clone()));
        }
    }
}
