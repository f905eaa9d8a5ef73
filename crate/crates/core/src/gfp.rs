//! Arithmetic mod an odd prime, as needed by the quasi-cyclic base matrix.

use crate::error::{Error, Result};

/// Deterministic primality test, sufficient for the small moduli used here.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Multiplicative order of `sigma` in the unit group mod `p`.
pub fn multiplicative_order(sigma: u64, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if sigma >= p {
        return Err(Error::OutOfRange { x: sigma, p });
    }
    if sigma == 0 {
        return Err(Error::ZeroElement(p));
    }
    let mut x = sigma % p;
    let mut order = 1u64;
    while x != 1 {
        x = x * sigma % p;
        order += 1;
    }
    Ok(order)
}

/// `sigma^e mod p` by repeated squaring.
pub fn pow_mod(sigma: u64, mut e: u64, p: u64) -> u64 {
    let mut base = sigma % p;
    let mut acc = 1u64 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// The cyclic subgroup generated by `sigma`, listed as successive powers
/// starting from `sigma^0 = 1`.
pub fn cyclic_subgroup(sigma: u64, p: u64) -> Result<Vec<u64>> {
    let order = multiplicative_order(sigma, p)?;
    let mut powers = Vec::with_capacity(order as usize);
    let mut x = 1u64;
    for _ in 0..order {
        powers.push(x);
        x = x * sigma % p;
    }
    Ok(powers)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_cases() {
        let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29];
        for p in primes {
            assert!(is_prime(p), "{p} should be prime");
        }
        for q in [0u64, 1, 4, 6, 9, 15, 21, 25, 27, 49, 121] {
            assert!(!is_prime(q), "{q} should be composite");
        }
    }

    #[test]
    fn order_of_two_mod_seven_is_three() {
        // 2, 4, 8=1: order 3, which is odd and therefore rejected by the
        // quasi-cyclic parameter check downstream.
        assert_eq!(multiplicative_order(2, 7).unwrap(), 3);
    }

    #[test]
    fn order_of_three_mod_seven_is_six() {
        assert_eq!(multiplicative_order(3, 7).unwrap(), 6);
    }

    #[test]
    fn orders_for_all_preset_parameters() {
        // (p, sigma, expected order): the five quasi-cyclic presets.
        for (p, sigma, ell) in [(7, 3, 6), (11, 2, 10), (13, 2, 12), (17, 3, 16), (19, 3, 18)] {
            assert_eq!(multiplicative_order(sigma, p).unwrap(), ell);
            // The order always divides p - 1.
            assert_eq!((p - 1) % ell, 0);
        }
    }

    #[test]
    fn order_brute_force_oracle() {
        // Compare against the definition: the least t >= 1 with sigma^t = 1.
        for p in [5u64, 7, 11, 13, 17, 19, 23] {
            for sigma in 1..p {
                let t = multiplicative_order(sigma, p).unwrap();
                assert_eq!(pow_mod(sigma, t, p), 1);
                for s in 1..t {
                    assert_ne!(pow_mod(sigma, s, p), 1, "sigma={sigma} p={p} s={s}");
                }
            }
        }
    }

    #[test]
    fn subgroup_of_two_mod_five() {
        assert_eq!(cyclic_subgroup(2, 5).unwrap(), vec![1, 2, 4, 3]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(multiplicative_order(2, 9), Err(Error::NotPrime(9))));
        assert!(matches!(
            multiplicative_order(7, 7),
            Err(Error::OutOfRange { x: 7, p: 7 })
        ));
        assert!(matches!(multiplicative_order(0, 7), Err(Error::ZeroElement(7))));
    }
}
