use corner::cyclo::{gauss_sum, Cyc, PrimeParams};
use num_rational::BigRational;
use proptest::prelude::*;

fn cyc(p: u64, coeffs: &[i64]) -> Cyc {
    let rs: Vec<BigRational> = coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect();
    Cyc::from_coeffs(p, &rs)
}

fn element(p: u64) -> impl Strategy<Value = Cyc> {
    prop::collection::vec(-6i64..=6, (p - 1) as usize).prop_map(move |c| cyc(p, &c))
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7])
}

proptest! {
    #[test]
    fn ring_laws((a, b, c) in prime().prop_flat_map(|p| (element(p), element(p), element(p)))) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&(&a - &b) + &b - a.clone()).is_zero());
    }

    #[test]
    fn nonzero_elements_invert(a in prime().prop_flat_map(element)) {
        prop_assume!(!a.is_zero());
        let p = a.prime().unwrap();
        prop_assert_eq!(&a * &a.inv().unwrap(), Cyc::one(p));
    }

    #[test]
    fn galois_is_a_ring_map((a, b, k) in prime().prop_flat_map(|p| (element(p), element(p), 1..p))) {
        prop_assert_eq!((&a * &b).galois(k), &a.galois(k) * &b.galois(k));
        prop_assert_eq!((&a + &b).galois(k), &a.galois(k) + &b.galois(k));
    }
}

#[test]
fn roots_of_unity() {
    for p in [3u64, 5, 7, 11] {
        assert!(Cyc::eta(p, p as i64).is_one());
        assert_eq!(Cyc::eta(p, 1).pow(p), Cyc::one(p));
        let sum = (0..p).fold(Cyc::zero(), |acc, k| acc + Cyc::eta(p, k as i64));
        assert!(sum.is_zero());
    }
}

#[test]
fn gauss_sum_squares_to_signed_prime() {
    // G(1)^2 = (-1)^((p-1)/2) p.
    for (p, want) in [(3u64, -3i64), (5, 5), (7, -7), (11, -11), (13, 13)] {
        let pp = PrimeParams::new(p).unwrap();
        let g = gauss_sum(&pp, 1);
        assert_eq!(&g * &g, Cyc::from_int(p, want), "p = {p}");
    }
}

#[test]
fn quadratic_image_has_half_the_residues() {
    for p in [3u64, 5, 7, 11] {
        let pp = PrimeParams::new(p).unwrap();
        let image = pp.image_tau();
        assert_eq!(image.len() as u64, p.div_ceil(2));
        for i in 0..p {
            assert!(pp.in_image(pp.tau(i)));
            assert!(pp.tau_preimage(pp.tau(i)).contains(&i));
        }
    }
}

#[test]
fn rejects_non_primes() {
    for n in [0u64, 1, 2, 4, 9, 15] {
        assert!(PrimeParams::new(n).is_err(), "{n}");
    }
}
