//! Exact arithmetic in the cyclotomic field `Q(eta)`, `eta` a primitive `p`-th root of unity,
//! together with the scalar constants (Gauss sums, `B`, `C`, `lambda`, `gamma`, `h`, `alpha_g`)
//! used by the braid representation.
//!
//! Elements are stored in the power basis `1, eta, ..., eta^(p-2)` with a single positive common
//! denominator, so equality is structural.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycloError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("division by zero in Q(zeta_{0})")]
    DivisionByZero(u64),
    #[error("denominator {den} is not invertible modulo {p}")]
    BadDenominator { den: i64, p: u64 },
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// An odd prime `p` together with the inverse of 2 modulo `p`.
///
/// Fractional exponents such as `eta^(1/2)` or `eta^(-1/8)` are read as `eta^e` with `e` computed
/// in `Z/p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeParams {
    pub p: u64,
    pub inv2: u64,
}

impl PrimeParams {
    pub fn new(p: u64) -> Result<Self, CycloError> {
        if p < 3 || !is_prime(p) {
            return Err(CycloError::NotOddPrime(p));
        }
        Ok(Self { p, inv2: p.div_ceil(2) })
    }

    /// Canonical representative of `x mod p` in `0..p`.
    pub fn md(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    /// `num / den` in `Z/p`.
    pub fn frac(&self, num: i64, den: i64) -> Result<u64, CycloError> {
        let d = self.md(den);
        if d == 0 {
            return Err(CycloError::BadDenominator { den, p: self.p });
        }
        Ok(self.md(num) * modpow(d, self.p - 2, self.p) % self.p)
    }

    /// `tau(i) = i(i+1)/2` in `Z/p`.
    pub fn tau(&self, i: u64) -> u64 {
        let i = i % self.p;
        i * (i + 1) % self.p * self.inv2 % self.p
    }

    /// The image `I_p` of `tau`, sorted.
    pub fn image_tau(&self) -> Vec<u64> {
        let mut v: Vec<u64> = (0..self.p).map(|i| self.tau(i)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn in_image(&self, a: u64) -> bool {
        (0..self.p).any(|i| self.tau(i) == a % self.p)
    }

    pub fn tau_preimage(&self, a: u64) -> Vec<u64> {
        (0..self.p).filter(|&i| self.tau(i) == a % self.p).collect()
    }

    /// The square roots of `x` in `Z/p`, ascending.
    pub fn sqrt_all(&self, x: u64) -> Vec<u64> {
        (0..self.p).filter(|&m| m * m % self.p == x % self.p).collect()
    }

    /// `-1/8` in `Z/p`.
    pub fn minus_eighth(&self) -> u64 {
        self.frac(-1, 8).expect("p is odd")
    }
}

pub(crate) fn modpow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// An element of `Q(eta)`.
///
/// Zero is the empty coefficient vector, so it needs no `p`; every nonzero value carries exactly
/// `p - 1` numerators.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Cyc {
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyc {
    pub fn zero() -> Self {
        Self { num: Vec::new(), den: BigInt::one() }
    }

    pub fn from_int(p: u64, n: i64) -> Self {
        Self::from_ratio(p, &BigRational::from_integer(n.into()))
    }

    pub fn one(p: u64) -> Self {
        Self::from_int(p, 1)
    }

    pub fn from_ratio(p: u64, r: &BigRational) -> Self {
        let mut num = vec![BigInt::zero(); p as usize - 1];
        num[0] = r.numer().clone();
        Self::normalized(num, r.denom().clone())
    }

    /// `eta^e` for an integer exponent read modulo `p`.
    pub fn eta(p: u64, e: i64) -> Self {
        let e = e.rem_euclid(p as i64) as usize;
        let mut acc = vec![BigInt::zero(); p as usize];
        acc[e] = BigInt::one();
        Self::from_full(acc, BigInt::one())
    }

    /// `eta^(num/den)`, the exponent evaluated in `Z/p`.
    pub fn eta_frac(pp: &PrimeParams, num: i64, den: i64) -> Result<Self, CycloError> {
        Ok(Self::eta(pp.p, pp.frac(num, den)? as i64))
    }

    /// Builds a value from power-basis rationals `c_0, ..., c_{p-2}`.
    pub fn from_coeffs(p: u64, coeffs: &[BigRational]) -> Self {
        assert_eq!(coeffs.len(), p as usize - 1, "expected p - 1 coefficients");
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Self::normalized(num, den)
    }

    /// Reduces a length-`p` vector in the basis `1, ..., eta^(p-1)` using
    /// `eta^(p-1) = -(1 + ... + eta^(p-2))`.
    fn from_full(mut acc: Vec<BigInt>, den: BigInt) -> Self {
        let last = acc.pop().expect("nonempty");
        if !last.is_zero() {
            for c in acc.iter_mut() {
                *c -= &last;
            }
        }
        Self::normalized(acc, den)
    }

    fn normalized(mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if num.iter().all(Zero::is_zero) {
            return Self::zero();
        }
        if den.is_negative() {
            den = -den;
            num.iter_mut().for_each(|c| *c = -&*c);
        }
        if !den.is_one() {
            let mut g = den.clone();
            for c in &num {
                if g.is_one() {
                    break;
                }
                if !c.is_zero() {
                    g = g.gcd(c);
                }
            }
            if !g.is_one() {
                num.iter_mut().for_each(|c| *c = &*c / &g);
                den /= g;
            }
        }
        Self { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        !self.is_zero() && self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The prime of the ambient field, unknown for zero.
    pub fn prime(&self) -> Option<u64> {
        (!self.is_zero()).then(|| self.num.len() as u64 + 1)
    }

    /// Power-basis coefficients `c_0, ..., c_{p-2}`.
    pub fn coeffs(&self, p: u64) -> Vec<BigRational> {
        if self.is_zero() {
            return vec![BigRational::zero(); p as usize - 1];
        }
        self.num.iter().map(|c| BigRational::new(c.clone(), self.den.clone())).collect()
    }

    /// The value as a rational number, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        self.num[1..].iter().all(Zero::is_zero).then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    /// Coordinate-text encoding `c0/d0,c1/d1,...`.
    pub fn coeff_string(&self, p: u64) -> String {
        self.coeffs(p).iter().map(|c| format!("{}/{}", c.numer(), c.denom())).collect::<Vec<_>>().join(",")
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if self.is_zero() || r.is_zero() {
            return Self::zero();
        }
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        Self::normalized(num, &self.den * r.denom())
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&BigRational::from_integer(n.into()))
    }

    /// The Galois conjugate `eta -> eta^k`.
    pub fn galois(&self, k: u64) -> Self {
        let Some(p) = self.prime() else { return Self::zero() };
        let mut acc = vec![BigInt::zero(); p as usize];
        for (i, c) in self.num.iter().enumerate() {
            acc[(i as u64 * k % p) as usize] += c;
        }
        Self::from_full(acc, self.den.clone())
    }

    /// Multiplicative inverse via the norm: `a^{-1} = prod_{k>1} sigma_k(a) / N(a)`.
    pub fn inv(&self) -> Result<Self, CycloError> {
        let Some(p) = self.prime() else { return Err(CycloError::DivisionByZero(0)) };
        let mut conj = Self::one(p);
        for k in 2..p {
            conj = &conj * &self.galois(k);
        }
        let norm = (self * &conj).as_rational().expect("norm is rational");
        Ok(conj.scale(&norm.recip()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, CycloError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let Some(p) = self.prime() else {
            return if e == 0 { panic!("0^0 has no prime context") } else { Self::zero() };
        };
        let mut base = self.clone();
        let mut r = Self::one(p);
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        r
    }

    fn add_impl(&self, other: &Self, sign: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if sign { other.clone() } else { -other };
        }
        debug_assert_eq!(self.num.len(), other.num.len(), "field mismatch");
        let num: Vec<BigInt> = if self.den == other.den {
            self.num.iter().zip(&other.num).map(|(a, b)| if sign { a + b } else { a - b }).collect()
        } else {
            self.num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| {
                    let (x, y) = (a * &other.den, b * &self.den);
                    if sign {
                        x + y
                    } else {
                        x - y
                    }
                })
                .collect()
        };
        let den = if self.den == other.den { self.den.clone() } else { &self.den * &other.den };
        Self::normalized(num, den)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        debug_assert_eq!(self.num.len(), other.num.len(), "field mismatch");
        let p = self.num.len() + 1;
        let mut acc = vec![BigInt::zero(); p];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    acc[(i + j) % p] += a * b;
                }
            }
        }
        Self::from_full(acc, &self.den * &other.den)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Cyc> for &Cyc {
            type Output = Cyc;
            fn $m(self, o: &Cyc) -> Cyc {
                $body(self, o)
            }
        }
        impl $tr<Cyc> for Cyc {
            type Output = Cyc;
            fn $m(self, o: Cyc) -> Cyc {
                $body(&self, &o)
            }
        }
        impl $tr<&Cyc> for Cyc {
            type Output = Cyc;
            fn $m(self, o: &Cyc) -> Cyc {
                $body(&self, o)
            }
        }
    };
}

forward_binop!(Add, add, |a: &Cyc, b: &Cyc| a.add_impl(b, true));
forward_binop!(Sub, sub, |a: &Cyc, b: &Cyc| a.add_impl(b, false));
forward_binop!(Mul, mul, |a: &Cyc, b: &Cyc| a.mul_impl(b));

impl Neg for &Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc { num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

impl Neg for Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        -&self
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let r = BigRational::new(c.clone(), self.den.clone());
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{r}")?,
                1 => write!(f, "({r})e")?,
                _ => write!(f, "({r})e^{k}")?,
            }
        }
        Ok(())
    }
}

/// Quadratic Gauss sum `G(a) = sum_t eta^(a t^2)`.
pub fn gauss_sum(pp: &PrimeParams, a: u64) -> Cyc {
    (0..pp.p).fold(Cyc::zero(), |acc, t| acc + Cyc::eta(pp.p, ((a % pp.p) * t % pp.p * t % pp.p) as i64))
}

/// `eta^(x) + eta^(-x)` for `x` in `Z/p`.
fn eta_sym(pp: &PrimeParams, x: u64) -> Cyc {
    Cyc::eta(pp.p, x as i64) + Cyc::eta(pp.p, -(x as i64))
}

/// `eta^(x) - eta^(-x)`.
fn eta_anti(pp: &PrimeParams, x: u64) -> Cyc {
    Cyc::eta(pp.p, x as i64) - Cyc::eta(pp.p, -(x as i64))
}

/// The representative `m` in `{0, ..., (p-1)/2}` with `m^2 = 2a + 1/4`, if `a` lies in `I_p`.
pub fn half_root(pp: &PrimeParams, a: u64) -> Option<u64> {
    let quarter = pp.inv2 * pp.inv2 % pp.p;
    let target = (2 * a + quarter) % pp.p;
    pp.sqrt_all(target).into_iter().find(|&m| m <= (pp.p - 1) / 2)
}

/// `B^a_s = sum over m with m^2 = 2a + 1/4 of eta^(m s)`.
///
/// This is the reading under which `sum_{tau(n) = a} eta^(n s) = eta^(-s/2) B^a_s` holds. At
/// `a = -1/8` the only root is `m = 0` and the value is `1`.
pub fn b_hat(pp: &PrimeParams, a: u64, s: u64) -> Cyc {
    match half_root(pp, a) {
        None => Cyc::zero(),
        Some(0) => Cyc::one(pp.p),
        Some(m) => eta_sym(pp, m * (s % pp.p) % pp.p),
    }
}

/// `B^a_s` evaluated as the two-term expression `eta^(ms) + eta^(-ms)` for every root,
/// which gives `2` at `a = -1/8`.
pub fn b_hat_two_term(pp: &PrimeParams, a: u64, s: u64) -> Cyc {
    match half_root(pp, a) {
        None => Cyc::zero(),
        Some(m) => eta_sym(pp, m * (s % pp.p) % pp.p),
    }
}

/// `C^a_s` from its three-case closed form.
pub fn c_hat(pp: &PrimeParams, a: u64, s: u64) -> Cyc {
    let p = pp.p;
    let a = a % p;
    let Some(m) = half_root(pp, a) else { return Cyc::zero() };
    let h = pp.inv2;
    let s_half = pp.md(s as i64 - h as i64);
    if a == 0 {
        let den = eta_anti(pp, p - h);
        return eta_sym(pp, s_half).checked_div(&den).expect("nonzero");
    }
    if a == pp.minus_eighth() {
        let quarter = h * h % p;
        let den = eta_anti(pp, p - quarter);
        return eta_sym(pp, h * s_half % p).checked_div(&den).expect("nonzero");
    }
    let term = |r: u64| {
        let num = eta_sym(pp, r * s_half % p);
        let den = eta_anti(pp, h * r % p);
        num.checked_div(&den).expect("nonzero")
    };
    term(pp.md(m as i64 - h as i64)) - term((m + h) % p)
}

/// The pair `(B^a_s, C^a_s)`.
pub fn spectral_constants(pp: &PrimeParams, a: u64, s: u64) -> (Cyc, Cyc) {
    (b_hat(pp, a, s), c_hat(pp, a, s))
}

/// `(1 + eta) / (1 + eta^(1/2))^2`.
pub fn mixing_ratio(pp: &PrimeParams) -> Cyc {
    let p = pp.p;
    let one = Cyc::one(p);
    let r = &one + &Cyc::eta(p, pp.inv2 as i64);
    (&one + &Cyc::eta(p, 1)).checked_div(&(&r * &r)).expect("nonzero")
}

/// `lambda_s = C^0_s - ratio * C^(-1/8)_s`.
pub fn lambda(pp: &PrimeParams, s: u64) -> Cyc {
    c_hat(pp, 0, s) - mixing_ratio(pp) * c_hat(pp, pp.minus_eighth(), s)
}

/// `gamma_s = B^0_s - ratio * B^(-1/8)_s` with the two-term reading of `B^(-1/8)`.
pub fn gamma(pp: &PrimeParams, s: u64) -> Cyc {
    b_hat_two_term(pp, 0, s) - mixing_ratio(pp) * b_hat_two_term(pp, pp.minus_eighth(), s)
}

/// `gamma_s` built from the root-sum reading of `B`.
pub fn gamma_root_sum(pp: &PrimeParams, s: u64) -> Cyc {
    b_hat(pp, 0, s) - mixing_ratio(pp) * b_hat(pp, pp.minus_eighth(), s)
}

/// `h = (eta^(-1/2) + eta^(1/2))^(-1)`.
pub fn h_const(pp: &PrimeParams) -> Cyc {
    eta_sym(pp, pp.inv2).inv().expect("nonzero")
}

/// `alpha_g = (G(1/2) / p)^g`.
pub fn alpha(pp: &PrimeParams, g: u32) -> Cyc {
    let base = gauss_sum(pp, pp.inv2).scale(&BigRational::new(1.into(), (pp.p as i64).into()));
    base.pow(g as u64)
}

/// `alpha_bar_g = (G(-1/2) / p)^g`.
pub fn alpha_bar(pp: &PrimeParams, g: u32) -> Cyc {
    let base = gauss_sum(pp, pp.p - pp.inv2).scale(&BigRational::new(1.into(), (pp.p as i64).into()));
    base.pow(g as u64)
}

/// A unital algebra over `Q` with exact operations; the domain of [`phi_p_poly`].
pub trait ExactAlgebra: Clone {
    fn alg_one(&self) -> Self;
    fn alg_add(&self, other: &Self) -> Self;
    fn alg_mul(&self, other: &Self) -> Self;
    fn alg_scale(&self, r: &BigRational) -> Self;
}

impl ExactAlgebra for Cyc {
    fn alg_one(&self) -> Self {
        Cyc::one(self.prime().expect("nonzero element carries its prime"))
    }
    fn alg_add(&self, other: &Self) -> Self {
        self + other
    }
    fn alg_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn alg_scale(&self, r: &BigRational) -> Self {
        self.scale(r)
    }
}

/// `phi_p(x) = (1/p) sum_{i=1}^{p-1} x^i`.
pub fn phi_p_poly<A: ExactAlgebra>(x: &A, p: u64) -> A {
    let mut power = x.clone();
    let mut acc = x.clone();
    for _ in 2..p {
        power = power.alg_mul(x);
        acc = acc.alg_add(&power);
    }
    acc.alg_scale(&BigRational::new(1.into(), (p as i64).into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(p: u64) -> PrimeParams {
        PrimeParams::new(p).unwrap()
    }

    #[test]
    fn rejects_non_primes() {
        assert!(PrimeParams::new(2).is_err());
        assert!(PrimeParams::new(9).is_err());
        assert!(PrimeParams::new(7).is_ok());
    }

    #[test]
    fn eta_times_eta_pow_p_minus_one_is_one() {
        for p in [3, 5, 7, 11] {
            assert!((Cyc::eta(p, 1) * Cyc::eta(p, p as i64 - 1)).is_one());
        }
    }

    #[test]
    fn small_products() {
        let a = Cyc::one(3) + Cyc::eta(3, 1).scale_int(2);
        let b = Cyc::one(3) + Cyc::eta(3, 2).scale_int(2);
        assert_eq!(a * b, Cyc::from_int(3, 3));
        let x = Cyc::one(5) + Cyc::eta(5, 1);
        assert!((&x * &x.inv().unwrap()).is_one());
        assert!(Cyc::zero().inv().is_err());
    }

    #[test]
    fn fractional_exponents() {
        let p5 = pp(5);
        assert_eq!(Cyc::eta_frac(&p5, 1, 2).unwrap(), Cyc::eta(5, 3));
        assert_eq!(Cyc::eta_frac(&pp(3), -1, 8).unwrap(), Cyc::eta(3, 1));
        assert_eq!(Cyc::eta_frac(&p5, 0, 1).unwrap(), Cyc::one(5));
        assert!(p5.frac(1, 5).is_err());
    }

    #[test]
    fn gauss_sums() {
        assert_eq!(gauss_sum(&pp(3), 0), Cyc::from_int(3, 3));
        assert_eq!(gauss_sum(&pp(3), 1), Cyc::one(3) + Cyc::eta(3, 1).scale_int(2));
        for p in [3, 5, 7, 11] {
            let q = pp(p);
            for a in 1..p {
                assert_eq!(gauss_sum(&q, a) * gauss_sum(&q, p - a), Cyc::from_int(p, p as i64));
            }
        }
    }

    #[test]
    fn tau_image_and_fibres() {
        for p in [3, 5, 7, 11, 13] {
            let q = pp(p);
            assert_eq!(q.image_tau().len() as u64, p.div_ceil(2));
            assert_eq!(q.tau_preimage(0), vec![0, p - 1]);
            assert_eq!(q.tau_preimage(q.minus_eighth()), vec![q.inv2 * (p - 1) % p]);
            for a in 0..p {
                for b in 0..p {
                    let same = q.tau(a) == q.tau(b);
                    assert_eq!(same, a == b || (a + b + 1) % p == 0, "p={p} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn b_hat_example() {
        let q = pp(5);
        assert_eq!(half_root(&q, 0), Some(2));
        assert_eq!(b_hat(&q, 0, 0), Cyc::from_int(5, 2));
    }

    #[test]
    fn tau_sum_matches_b_hat() {
        for p in [3, 5, 7, 11] {
            let q = pp(p);
            for a in 0..p {
                for s in 0..p {
                    let lhs =
                        q.tau_preimage(a).into_iter().fold(Cyc::zero(), |acc, n| acc + Cyc::eta(p, (n * s % p) as i64));
                    let rhs = Cyc::eta(p, -((q.inv2 * s % p) as i64)) * b_hat(&q, a, s);
                    assert_eq!(lhs, rhs, "p={p} a={a} s={s}");
                }
            }
        }
    }

    #[test]
    fn c_hat_two_sided_sum() {
        for p in [3, 5, 7, 11] {
            let q = pp(p);
            for a in 0..p {
                for s in 0..p {
                    let mut lhs = Cyc::zero();
                    for n in q.tau_preimage(a) {
                        if n != 0 {
                            let den = Cyc::eta(p, n as i64) - Cyc::one(p);
                            lhs = lhs + Cyc::eta(p, (n as i64 - 1) * s as i64).checked_div(&den).unwrap();
                        }
                        if n != p - 1 {
                            let den = Cyc::eta(p, n as i64 + 1) - Cyc::one(p);
                            lhs = lhs - Cyc::eta(p, (n * s) as i64).checked_div(&den).unwrap();
                        }
                    }
                    assert_eq!(lhs, Cyc::eta(p, -(s as i64)) * c_hat(&q, a, s), "p={p} a={a} s={s}");
                }
            }
        }
    }

    #[test]
    fn constant_symmetries() {
        for p in [3, 5, 7, 11] {
            let q = pp(p);
            for a in 0..p {
                for s in 0..p {
                    assert_eq!(b_hat(&q, a, s), b_hat(&q, a, (p - s) % p));
                    assert_eq!(c_hat(&q, a, s), c_hat(&q, a, (p + 1 - s) % p));
                    if !q.in_image(a) {
                        assert!(b_hat(&q, a, s).is_zero() && c_hat(&q, a, s).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn lambda_gamma_h() {
        for p in [3, 5, 7, 11] {
            let q = pp(p);
            assert!(lambda(&q, 0).is_zero());
            assert!(lambda(&q, 1).is_zero());
            assert_eq!(lambda(&q, 2), lambda(&q, p - 1));
            let half = q.inv2 as i64;
            let quarter = (q.inv2 * q.inv2 % p) as i64;
            let x = Cyc::eta(p, -half) + Cyc::eta(p, half);
            let y = Cyc::eta(p, -quarter) + Cyc::eta(p, quarter);
            assert_eq!(gamma(&q, 1), (&x * &x).checked_div(&(&y * &y)).unwrap());
            let h = h_const(&q);
            let diff = Cyc::eta(p, -half) - Cyc::eta(p, half);
            let rhs = diff * (Cyc::one(p) + &h) * gamma(&q, 1);
            assert_eq!(lambda(&q, 2), rhs);
            let one = Cyc::one(p);
            // eta^(1/2) = eta^2 when p = 3, so h = (eta + eta^2)^(-1) = -1 there.
            assert_eq!(h == -one.clone(), p == 3);
            assert_ne!(h, one);
        }
    }

    #[test]
    fn alpha_product() {
        for p in [3, 5, 7] {
            let q = pp(p);
            for g in 1..=3u32 {
                let prod = alpha(&q, g) * alpha_bar(&q, g);
                assert_eq!(prod.as_rational().unwrap(), BigRational::new(1.into(), (p as i64).pow(g).into()));
            }
        }
    }

    #[test]
    fn phi_p_values() {
        for p in [3, 5, 7] {
            assert_eq!(
                phi_p_poly(&Cyc::one(p), p).as_rational().unwrap(),
                BigRational::new((p as i64 - 1).into(), (p as i64).into())
            );
            assert_eq!(
                phi_p_poly(&Cyc::eta(p, 1), p).as_rational().unwrap(),
                BigRational::new((-1).into(), (p as i64).into())
            );
            let avg = |x: &Cyc| Cyc::one(p).scale(&BigRational::new(1.into(), (p as i64).into())) + phi_p_poly(x, p);
            for k in 0..p as i64 {
                let e = avg(&Cyc::eta(p, k));
                assert_eq!(&e * &e, e);
            }
            let e = Cyc::one(p) + phi_p_poly(&Cyc::eta(p, 1), p);
            assert_ne!(&e * &e, e);
        }
    }
}
