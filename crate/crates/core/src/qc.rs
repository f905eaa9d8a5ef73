//! Quasi-cyclic construction of parity-check pairs with all-ones product.
//!
//! Base matrix: rows of the circulant M_{r,c} = sigma^((c-r) mod ell) mod p,
//! one block per coset representative tau_i, prefixed by an all-ones column.
//! Any two distinct rows of the base matrix differ (mod p) in a permutation
//! vector of F_p; expanding with circulant permutation blocks then gives
//! Cyc(top)·Cyc(bottom)ᵀ = all-ones and a Tanner graph of girth at least 6.

use crate::binmat::BinaryMatrix;
use crate::error::{Error, Result};
use crate::gfp;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QcParams {
    pub p: u64,
    pub sigma: u64,
    /// Multiplicative order of sigma; always even here.
    pub ell: u64,
    /// Coset representatives, tau_0 = 1 first.
    pub taus: Vec<u64>,
    /// Rows of the base matrix that go into the first half.
    pub ell1: usize,
    pub ell2: usize,
}

impl QcParams {
    /// Number of cosets T = (p-1)/ell.
    pub fn coset_count(&self) -> usize {
        self.taus.len()
    }

    /// Override the default equal split of base rows between the halves.
    pub fn with_partition(mut self, ell1: usize) -> Result<QcParams> {
        let ell = self.ell as usize;
        if ell1 == 0 || ell1 >= ell {
            return Err(Error::Dimension {
                context: "base matrix partition size",
                got: ell1,
                expected: ell / 2,
            });
        }
        self.ell1 = ell1;
        self.ell2 = ell - ell1;
        Ok(self)
    }
}

/// Pick coset representatives of the subgroup generated by `sigma`:
/// tau_0 = 1, then repeatedly the smallest unit not yet covered.
pub fn choose_coset_representatives(p: u64, sigma: u64) -> Result<QcParams> {
    let ell = gfp::multiplicative_order(sigma, p)?;
    if ell % 2 != 0 {
        return Err(Error::OddOrder { sigma, order: ell, p });
    }
    let subgroup = gfp::cyclic_subgroup(sigma, p)?;
    let mut covered = vec![false; p as usize];
    let mut taus = Vec::new();
    for tau in 1..p {
        if covered[tau as usize] {
            continue;
        }
        taus.push(tau);
        for &g in &subgroup {
            covered[(tau * g % p) as usize] = true;
        }
    }
    debug_assert_eq!(taus.len() as u64 * ell, p - 1);
    debug_assert_eq!(taus[0], 1);
    Ok(QcParams {
        p,
        sigma,
        ell,
        taus,
        ell1: (ell / 2) as usize,
        ell2: (ell / 2) as usize,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseMatrix {
    /// ell rows, p columns, entries in [p].
    pub entries: Vec<Vec<u64>>,
    pub params: QcParams,
}

impl BaseMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.params.p as usize
    }

    /// True iff the difference mod p of every distinct row pair hits each
    /// element of F_p exactly once.
    pub fn pairwise_row_differences_are_permutations(&self) -> bool {
        let p = self.params.p;
        for a in 0..self.entries.len() {
            for b in 0..self.entries.len() {
                if a == b {
                    continue;
                }
                let mut seen = vec![false; p as usize];
                for (x, y) in self.entries[a].iter().zip(&self.entries[b]) {
                    let d = ((x + p - y) % p) as usize;
                    if seen[d] {
                        return false;
                    }
                    seen[d] = true;
                }
                if seen.iter().any(|&s| !s) {
                    return false;
                }
            }
        }
        true
    }
}

pub fn build_base_matrix(params: &QcParams) -> BaseMatrix {
    let (p, ell) = (params.p, params.ell);
    let mut entries = Vec::with_capacity(ell as usize);
    for r in 0..ell {
        let mut row = Vec::with_capacity(p as usize);
        row.push(1u64);
        for &tau in &params.taus {
            for c in 0..ell {
                let e = (c + ell - r % ell) % ell;
                row.push(tau * gfp::pow_mod(params.sigma, e, p) % p);
            }
        }
        entries.push(row);
    }
    BaseMatrix {
        entries,
        params: params.clone(),
    }
}

/// Split the base matrix into its two halves and expand both with circulant
/// permutation blocks of size p.
pub fn qc_pair(params: &QcParams) -> Result<(BinaryMatrix, BinaryMatrix)> {
    let base = build_base_matrix(params);
    let h1 = BinaryMatrix::cyc_expand(&base.entries[..params.ell1], params.p)?;
    let h2 = BinaryMatrix::cyc_expand(&base.entries[params.ell1..], params.p)?;
    Ok((h1, h2))
}

/// Check the all-ones product criterion on base matrices directly: for every
/// row pair (a from A, b from B), the multiset {a_i - b_i mod p} must cover
/// each element of F_p an odd number of times.
pub fn verify_lemma1(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Result<bool> {
    let cols = a.first().or(b.first()).map_or(0, Vec::len);
    for row in a.iter().chain(b) {
        if row.len() != cols {
            return Err(Error::Dimension {
                context: "difference check row length",
                got: row.len(),
                expected: cols,
            });
        }
    }
    for ra in a {
        for rb in b {
            let mut counts = vec![0u64; p as usize];
            for (x, y) in ra.iter().zip(rb) {
                counts[((x % p + p - y % p) % p) as usize] += 1;
            }
            if counts.iter().any(|&c| c % 2 == 0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
