//! The four-element Galois field and its trace inner product.
//!
//! Symbols are stored as a pair of bits `(alpha, beta)` packed into a `u8`,
//! with `0 <-> (0,0)`, `omega <-> (1,0)`, `omega_bar <-> (0,1)` and
//! `1 <-> (1,1)`, so that field addition is a plain XOR of the packed values
//! and the trace inner product reduces to a two-term AND/XOR formula.

use std::fmt;

/// An element of GF(4) = {0, 1, omega, omega_bar}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Gf4(u8);

impl Gf4 {
    pub const ZERO: Gf4 = Gf4(0);
    pub const ONE: Gf4 = Gf4(1);
    pub const OMEGA: Gf4 = Gf4(2);
    pub const OMEGA_BAR: Gf4 = Gf4(3);

    /// All symbols in the canonical order 0 < 1 < omega < omega_bar.
    ///
    /// This order is used for hard-decision tie breaks and for the four
    /// decimation guesses of the ensemble decoder.
    pub const ALL: [Gf4; 4] = [Gf4::ZERO, Gf4::ONE, Gf4::OMEGA, Gf4::OMEGA_BAR];

    pub fn from_index(v: u8) -> Gf4 {
        assert!(v < 4, "GF(4) symbol index out of range: {v}");
        Gf4(v)
    }

    /// Index into the canonical order; also the packed bit-pair value.
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The pair encoding: this symbol equals `alpha*omega + beta*omega_bar`.
    #[inline]
    pub fn bit_pair(self) -> (u8, u8) {
        // alpha bits per symbol [0, 1, omega, omega_bar] = [0,1,1,0],
        // beta bits = [0,1,0,1].
        let v = self.0;
        ((v ^ (v >> 1)) & 1, v & 1)
    }

    #[inline]
    pub fn from_bit_pair(alpha: u8, beta: u8) -> Gf4 {
        debug_assert!(alpha < 2 && beta < 2);
        // Inverse of `bit_pair`.
        Gf4(((alpha ^ beta) << 1) | beta)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Field addition (characteristic 2, so also subtraction).
    #[inline]
    pub fn add(self, other: Gf4) -> Gf4 {
        Gf4(self.0 ^ other.0)
    }

    /// Field multiplication.
    #[inline]
    pub fn mul(self, other: Gf4) -> Gf4 {
        // Nonzero symbols form the cyclic group omega^0=1, omega^1, omega^2.
        const MUL: [[u8; 4]; 4] = [
            [0, 0, 0, 0],
            [0, 1, 2, 3],
            [0, 2, 3, 1],
            [0, 3, 1, 2],
        ];
        Gf4(MUL[self.index()][other.index()])
    }

    /// Trace inner product `<x, y>` mapping into GF(2).
    ///
    /// Computed as the symplectic form `alpha_x*beta_y XOR beta_x*alpha_y`
    /// on the bit-pair encoding, which is 1 exactly when both symbols are
    /// nonzero and distinct. A 1 encodes Pauli anticommutation.
    #[inline]
    pub fn trace_inner_product(self, other: Gf4) -> u8 {
        let (ax, bx) = self.bit_pair();
        let (ay, by) = other.bit_pair();
        (ax & by) ^ (bx & ay)
    }
}

impl fmt::Debug for Gf4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Gf4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match *self {
            Gf4::ZERO => "0",
            Gf4::ONE => "1",
            Gf4::OMEGA => "w",
            _ => "W",
        };
        f.write_str(s)
    }
}
