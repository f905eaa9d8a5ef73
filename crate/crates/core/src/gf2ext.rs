//! Binary extension fields GF(2^s) for s up to 5, with fixed moduli so the
//! geometry constructions downstream are byte-reproducible.

use crate::error::{Error, Result};

/// Irreducible polynomials, bit i = coefficient of x^i.
/// s = 1..=5: x+1, x^2+x+1, x^3+x+1, x^4+x+1, x^5+x^2+1.
const MODULI: [u32; 5] = [0b11, 0b111, 0b1011, 0b1_0011, 0b10_0101];

/// GF(2^s) in polynomial basis; elements are integers in `0..2^s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gf2Ext {
    s: usize,
    modulus: u32,
}

impl Gf2Ext {
    pub fn new(s: usize) -> Result<Gf2Ext> {
        if !(1..=5).contains(&s) {
            return Err(Error::ExtensionDegree(s));
        }
        Ok(Gf2Ext {
            s,
            modulus: MODULI[s - 1],
        })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.s
    }

    /// Field size q = 2^s.
    #[inline]
    pub fn size(&self) -> usize {
        1 << self.s
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < 1 << self.s && b < 1 << self.s);
        // Carry-less multiply, then reduce by the modulus.
        let mut acc = 0u32;
        for i in 0..self.s {
            if b >> i & 1 == 1 {
                acc ^= a << i;
            }
        }
        for bit in (self.s..2 * self.s).rev() {
            if acc >> bit & 1 == 1 {
                acc ^= self.modulus << (bit - self.s);
            }
        }
        acc
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "zero has no inverse");
        // a^(q-2) in the cyclic unit group of size q-1.
        self.pow(a, (self.size() - 2) as u64)
    }

    /// All field elements in increasing integer order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.size() as u32
    }
}
