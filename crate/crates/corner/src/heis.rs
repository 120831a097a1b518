//! The finite Heisenberg group `H(p, 2g)`, its degree-two extension `G+`, and the averaging
//! idempotents and matrix units of the block `M^eta` of its group algebra.
//!
//! An element `x1^n1 .. x2g^n2g c^m` is stored as the index `n1 + p n2 + .. + p^(2g-1) n2g +
//! p^(2g) m`.

use crate::cyclo::{Cyc, PrimeParams};
use crate::words::{FiniteGroup, FreeWord, GroupAlg, Quotient};
use num_rational::BigRational;

/// Largest group order for which exhaustive enumeration is allowed.
pub const MAX_ORDER: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HeisError {
    #[error(transparent)]
    Prime(#[from] crate::cyclo::CycloError),
    #[error("genus must be at least 1")]
    ZeroGenus,
    #[error("group order p^(2g+1) exceeds the enumeration limit {MAX_ORDER}")]
    TooLarge,
}

/// `omega(i, j) = j - i` when `|i - j| = 1`, else `0`.
pub fn omega(i: usize, j: usize) -> i64 {
    if i.abs_diff(j) == 1 {
        j as i64 - i as i64
    } else {
        0
    }
}

#[derive(Debug, Clone)]
pub struct Heis {
    pub pp: PrimeParams,
    pub g: usize,
    order: usize,
}

impl Heis {
    pub fn new(p: u64, g: usize) -> Result<Self, HeisError> {
        let pp = PrimeParams::new(p)?;
        if g == 0 {
            return Err(HeisError::ZeroGenus);
        }
        let order =
            (p as usize).checked_pow(2 * g as u32 + 1).filter(|&o| o <= MAX_ORDER).ok_or(HeisError::TooLarge)?;
        Ok(Self { pp, g, order })
    }

    pub fn p(&self) -> u64 {
        self.pp.p
    }

    /// Number of generators `2g`.
    pub fn rank(&self) -> usize {
        2 * self.g
    }

    pub fn encode(&self, a: &[u64], m: u64) -> usize {
        let p = self.p() as usize;
        let mut idx = (m % self.p()) as usize;
        for &x in a.iter().rev() {
            idx = idx * p + (x % self.p()) as usize;
        }
        idx
    }

    /// Exponents `(n1..n2g)` and the central exponent `m`.
    pub fn decode(&self, mut idx: usize) -> (Vec<u64>, u64) {
        let p = self.p() as usize;
        let a = (0..self.rank())
            .map(|_| {
                let d = idx % p;
                idx /= p;
                d as u64
            })
            .collect();
        (a, idx as u64)
    }

    /// `x_i`, numbered from 1.
    pub fn x(&self, i: usize) -> usize {
        let mut a = vec![0; self.rank()];
        a[i - 1] = 1;
        self.encode(&a, 0)
    }

    pub fn c(&self) -> usize {
        self.encode(&vec![0; self.rank()], 1)
    }

    pub fn c_pow(&self, m: i64) -> usize {
        self.encode(&vec![0; self.rank()], self.pp.md(m))
    }

    /// The exponent `m` of `g = c^m`, if `g` is central in `<c>`.
    pub fn central_exponent(&self, g: usize) -> Option<u64> {
        let (a, m) = self.decode(g);
        a.iter().all(|&x| x == 0).then_some(m)
    }

    /// `rho: F_2g -> G` sending `x_i` to `x_i`.
    pub fn quotient(&self) -> Quotient<'_, Self> {
        Quotient::new(self, (1..=self.rank()).map(|i| self.x(i)).collect())
    }

    /// `x_odd^a = x1^a1 x3^a2 .. x_{2g-1}^ag`.
    pub fn x_odd(&self, a: &[u64]) -> usize {
        let mut e = vec![0; self.rank()];
        for (k, &v) in a.iter().enumerate() {
            e[2 * k] = v;
        }
        self.encode(&e, 0)
    }

    /// `x_even^a = x2^a1 x4^a2 .. x_2g^ag`.
    pub fn x_even(&self, a: &[u64]) -> usize {
        let mut e = vec![0; self.rank()];
        for (k, &v) in a.iter().enumerate() {
            e[2 * k + 1] = v;
        }
        self.encode(&e, 0)
    }

    /// The normal-form word `x1^n1 .. x2g^n2g [x1, x2]^m`.
    pub fn normal_word(&self, idx: usize) -> FreeWord {
        let (a, m) = self.decode(idx);
        let mut w = FreeWord::identity();
        for (i, &e) in a.iter().enumerate() {
            w = w.mul(&FreeWord::generator(i + 1).pow(e as i64));
        }
        let c = FreeWord::commutator(&FreeWord::generator(1), &FreeWord::generator(2));
        w.mul(&c.pow(m as i64))
    }

    /// Normal form of a word in `x_1^(+-1)..x_2g^(+-1)` and `c` by collecting letters with
    /// `x_j^e x_i^f = c^(e f omega(j, i)) x_i^f x_j^e`, independent of [`FiniteGroup::mul`].
    /// Letter `0` stands for `c`.
    pub fn collect(&self, letters: &[i32]) -> usize {
        let mut m: i64 = 0;
        let mut xs: Vec<i32> = Vec::new();
        for &l in letters {
            if l == 0 {
                m += 1;
            } else {
                xs.push(l);
            }
        }
        let mut swapped = true;
        while swapped {
            swapped = false;
            for k in 1..xs.len() {
                let (j, i) = (xs[k - 1].unsigned_abs() as usize, xs[k].unsigned_abs() as usize);
                if j > i {
                    let (e, f) = (xs[k - 1].signum() as i64, xs[k].signum() as i64);
                    m += e * f * omega(j, i);
                    xs.swap(k - 1, k);
                    swapped = true;
                }
            }
        }
        let mut a = vec![0i64; self.rank()];
        for l in xs {
            a[l.unsigned_abs() as usize - 1] += l.signum() as i64;
        }
        let a: Vec<u64> = a.into_iter().map(|x| self.pp.md(x)).collect();
        self.encode(&a, self.pp.md(m))
    }

    /// Conjugacy classes by orbit enumeration under conjugation by the generators.
    pub fn conjugacy_classes(&self) -> usize {
        let mut seen = vec![false; self.order];
        let gens: Vec<usize> = (1..=self.rank()).map(|i| self.x(i)).collect();
        let mut classes = 0;
        for start in 0..self.order {
            if seen[start] {
                continue;
            }
            classes += 1;
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(a) = stack.pop() {
                for &s in &gens {
                    let b = self.conj(s, a);
                    if !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        classes
    }

    /// An automorphism table from the images of `x_1..x_2g`, extended through normal forms.
    pub fn automorphism_from_images(&self, images: &[usize]) -> Vec<usize> {
        let cimg = self.mul(self.mul(images[0], images[1]), self.mul(self.inv(images[0]), self.inv(images[1])));
        (0..self.order)
            .map(|idx| {
                let (a, m) = self.decode(idx);
                let mut acc = self.identity();
                for (i, &e) in a.iter().enumerate() {
                    acc = self.mul(acc, self.pow(images[i], e as i64));
                }
                self.mul(acc, self.pow(cimg, m as i64))
            })
            .collect()
    }

    /// `phi(c; eta^t) = (1/p) sum_n eta^(-t n) c^n`.
    pub fn phi_central(&self, t: u64) -> GroupAlg<Cyc> {
        let p = self.p();
        let inv_p = BigRational::new(1.into(), (p as i64).into());
        let mut s = GroupAlg::zero();
        for n in 0..p {
            s.add_term(self.c_pow(n as i64), &Cyc::eta(p, -((t * n) as i64)).scale(&inv_p));
        }
        s
    }

    /// `phi(i; x_odd) = (1/p^g) sum_a eta^(-i.a) x_odd^a`.
    pub fn phi_odd(&self, i: &[u64]) -> GroupAlg<Cyc> {
        self.phi_family(i, |a| self.x_odd(a))
    }

    /// `phi(i; x_even) = (1/p^g) sum_a eta^(-i.a) x_even^a`.
    pub fn phi_even(&self, i: &[u64]) -> GroupAlg<Cyc> {
        self.phi_family(i, |a| self.x_even(a))
    }

    fn phi_family(&self, i: &[u64], elem: impl Fn(&[u64]) -> usize) -> GroupAlg<Cyc> {
        let p = self.p();
        let scale = BigRational::new(1.into(), (p as i64).pow(self.g as u32).into());
        let mut s = GroupAlg::zero();
        for a in multi_indices(p, self.g) {
            let dot: u64 = i.iter().zip(&a).map(|(x, y)| x * y).sum::<u64>() % p;
            s.add_term(elem(&a), &Cyc::eta(p, -(dot as i64)).scale(&scale));
        }
        s
    }

    /// `E_ij = phi(c; eta) phi(i; x_odd) phi(0; x_even) phi(j; x_odd)`.
    pub fn matrix_unit(&self, i: &[u64], j: &[u64]) -> GroupAlg<Cyc> {
        let zero = vec![0; self.g];
        self.phi_central(1).mul(&self.phi_odd(i), self).mul(&self.phi_even(&zero), self).mul(&self.phi_odd(j), self)
    }

    /// `(1/p^g) x_even^(Omega (sign (i - j))) phi(j; x_odd) phi(c; eta)`, with `Omega` the
    /// lower-triangular all-ones matrix.
    pub fn matrix_unit_rewritten(&self, i: &[u64], j: &[u64], sign: i64) -> GroupAlg<Cyc> {
        let p = self.p();
        let mut b = Vec::with_capacity(self.g);
        let mut run = 0i64;
        for k in 0..self.g {
            run += sign * (i[k] as i64 - j[k] as i64);
            b.push(self.pp.md(run));
        }
        let scale = BigRational::new(1.into(), (p as i64).pow(self.g as u32).into());
        GroupAlg::monomial(self.x_even(&b), Cyc::one(p).scale(&scale))
            .mul(&self.phi_odd(j), self)
            .mul(&self.phi_central(1), self)
    }

    /// The exponent `k` with `rho(Delta^2) = c^k`.
    pub fn delta_squared_exponent(&self) -> Option<u64> {
        self.central_exponent(self.quotient().eval(&crate::words::delta_squared(self.g)))
    }
}

impl FiniteGroup for Heis {
    fn order(&self) -> usize {
        self.order
    }

    fn identity(&self) -> usize {
        0
    }

    /// `(a, m)(b, m') = (a + b, m + m' - sum_i a_{i+1} b_i)`.
    fn mul(&self, x: usize, y: usize) -> usize {
        let p = self.p();
        let (a, m) = self.decode(x);
        let (b, n) = self.decode(y);
        let cross: u64 = (0..self.rank() - 1).map(|i| a[i + 1] * b[i] % p).sum::<u64>() % p;
        let s: Vec<u64> = a.iter().zip(&b).map(|(u, v)| (u + v) % p).collect();
        self.encode(&s, (m + n + p - cross) % p)
    }

    fn inv(&self, x: usize) -> usize {
        let p = self.p();
        let (a, m) = self.decode(x);
        let twist: u64 = (0..self.rank() - 1).map(|i| a[i + 1] * a[i] % p).sum::<u64>() % p;
        let neg: Vec<u64> = a.iter().map(|u| (p - u) % p).collect();
        self.encode(&neg, (2 * p - m - twist) % p)
    }
}

/// All vectors in `(Z/p)^g`, first coordinate fastest.
pub fn multi_indices(p: u64, g: usize) -> Vec<Vec<u64>> {
    let total = (p as usize).pow(g as u32);
    (0..total)
        .map(|mut idx| {
            (0..g)
                .map(|_| {
                    let d = idx % p as usize;
                    idx /= p as usize;
                    d as u64
                })
                .collect()
        })
        .collect()
}

/// The group `G+ = G x Z/2` with product `(g, e)(h, d) = (g sigma^e(h), e + d)`, where `sigma` is
/// conjugation by `y1`: `sigma(x_j) = P_{j-1} x_j^-1 P_{j-1}^-1`, `P_k = x1 .. xk`.
///
/// Elements are `base + parity * |G|`.
#[derive(Debug, Clone)]
pub struct GPlus {
    pub heis: Heis,
    sigma: Vec<usize>,
}

impl GPlus {
    pub fn new(heis: Heis) -> Self {
        let images: Vec<usize> = (1..=heis.rank())
            .map(|j| {
                let prefix = (1..j).fold(heis.identity(), |acc, i| heis.mul(acc, heis.x(i)));
                heis.conj(prefix, heis.inv(heis.x(j)))
            })
            .collect();
        let sigma = heis.automorphism_from_images(&images);
        Self { heis, sigma }
    }

    pub fn sigma(&self, g: usize) -> usize {
        self.sigma[g]
    }

    pub fn base_order(&self) -> usize {
        self.heis.order()
    }

    pub fn split(&self, a: usize) -> (usize, bool) {
        let n = self.base_order();
        (a % n, a >= n)
    }

    pub fn join(&self, g: usize, odd: bool) -> usize {
        g + if odd { self.base_order() } else { 0 }
    }

    /// `y_j = (sigma(P_{j-1}), 1)`, numbered from 1 up to `2g + 1`.
    pub fn y(&self, j: usize) -> usize {
        let h = &self.heis;
        let prefix = (1..j).fold(h.identity(), |acc, i| h.mul(acc, h.x(i)));
        self.join(self.sigma(prefix), true)
    }

    /// `rho+: T_{2g+1} -> G+` sending `y_j` to `y_j`.
    pub fn quotient(&self) -> Quotient<'_, Self> {
        Quotient::new(self, (1..=2 * self.heis.g + 1).map(|j| self.y(j)).collect())
    }
}

impl FiniteGroup for GPlus {
    fn order(&self) -> usize {
        2 * self.base_order()
    }

    fn identity(&self) -> usize {
        0
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        let (g, e) = self.split(a);
        let (h, d) = self.split(b);
        let twisted = if e { self.sigma(h) } else { h };
        self.join(self.heis.mul(g, twisted), e ^ d)
    }

    fn inv(&self, a: usize) -> usize {
        let (g, e) = self.split(a);
        if e {
            // (g, 1)^-1 = (sigma(g^-1), 1)
            self.join(self.sigma(self.heis.inv(g)), true)
        } else {
            self.join(self.heis.inv(g), false)
        }
    }
}

/// Images of `y_1..y_{2g+1}` under the half twist `Psi_i`: `y_i -> y_{i+1}`,
/// `y_{i+1} -> y_{i+1} y_i y_{i+1}`, other `y_j` fixed.
pub fn psi_y_images(gp: &GPlus, i: usize) -> Vec<usize> {
    let n = 2 * gp.heis.g + 1;
    (1..=n)
        .map(|j| {
            if j == i {
                gp.y(i + 1)
            } else if j == i + 1 {
                gp.mul(gp.mul(gp.y(i + 1), gp.y(i)), gp.y(i + 1))
            } else {
                gp.y(j)
            }
        })
        .collect()
}

/// The automorphism `Psi_i` of `G`, derived from its action on the `y` generators through
/// `x_j = y_j y_{j+1}`.
pub fn psi_on_group(gp: &GPlus, i: usize) -> Vec<usize> {
    let ys = psi_y_images(gp, i);
    let images: Vec<usize> = (0..gp.heis.rank())
        .map(|j| {
            let (base, odd) = gp.split(gp.mul(ys[j], ys[j + 1]));
            debug_assert!(!odd);
            base
        })
        .collect();
    gp.heis.automorphism_from_images(&images)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presentation_relations() {
        for (p, g) in [(3, 1), (3, 2), (5, 1)] {
            let h = Heis::new(p, g).unwrap();
            for i in 1..=2 * g {
                assert_eq!(h.pow(h.x(i), p as i64), h.identity());
                for j in 1..=2 * g {
                    let comm = h.mul(h.mul(h.x(i), h.x(j)), h.mul(h.inv(h.x(i)), h.inv(h.x(j))));
                    assert_eq!(comm, h.c_pow(omega(i, j)), "[x{i}, x{j}]");
                }
            }
            assert_eq!(h.pow(h.c(), p as i64), h.identity());
        }
    }

    #[test]
    fn census_matches_class_formula() {
        for (p, g, classes) in [(3, 1, 11), (5, 1, 29), (3, 2, 83)] {
            let h = Heis::new(p, g).unwrap();
            assert_eq!(h.conjugacy_classes(), classes);
            let pg = (p as usize).pow(2 * g as u32);
            assert_eq!(classes, pg - 1 + p as usize);
        }
    }

    #[test]
    fn sigma_is_an_involution_and_inverts_x1() {
        let gp = GPlus::new(Heis::new(3, 2).unwrap());
        let h = &gp.heis;
        assert_eq!(gp.sigma(h.x(1)), h.inv(h.x(1)));
        for a in 0..h.order() {
            assert_eq!(gp.sigma(gp.sigma(a)), a);
        }
        for j in 1..=5 {
            assert_eq!(gp.mul(gp.y(j), gp.y(j)), gp.identity());
        }
        for j in 1..=4 {
            assert_eq!(gp.mul(gp.y(j), gp.y(j + 1)), h.x(j));
        }
    }

    #[test]
    fn psi_matches_x_formulas() {
        let gp = GPlus::new(Heis::new(3, 2).unwrap());
        let h = &gp.heis;
        for i in 1..=4 {
            let psi = psi_on_group(&gp, i);
            assert_eq!(psi[h.x(i)], h.x(i));
            if i > 1 {
                assert_eq!(psi[h.x(i - 1)], h.mul(h.x(i - 1), h.x(i)));
            }
            if i < 4 {
                assert_eq!(psi[h.x(i + 1)], h.mul(h.inv(h.x(i)), h.x(i + 1)));
            }
        }
    }
}
