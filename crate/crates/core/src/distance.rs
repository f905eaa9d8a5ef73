//! Bounded-weight minimum distance search for CSS codes.
//!
//! A weight-w logical exists iff some weight-w binary vector lies in
//! ker(H_X)\rowspace(H_Z) or ker(H_Z)\rowspace(H_X). Supports are
//! enumerated depth-first with incremental column XOR into both partial
//! syndromes, so each node costs a few word operations; the rare kernel
//! hits fall through to a row-space membership test.

use crate::css::CssCode;
use crate::error::{Error, Result};

/// Enumeration cap on the total number of visited supports.
const NODE_BUDGET: u128 = 600_000_000;

/// Smallest logical weight up to `w_max`, or None if no logical vector of
/// weight <= w_max exists. When Some(w) is returned the code distance is
/// exactly w, because all lighter supports were exhausted first.
pub fn bounded_distance_search(code: &CssCode, w_max: usize) -> Result<Option<usize>> {
    let n = code.n();
    let mut nodes: u128 = 0;
    for w in 1..=w_max {
        nodes = nodes.saturating_add(binomial(n, w));
    }
    if nodes > NODE_BUDGET {
        return Err(Error::SearchBudget { w_max, n });
    }
    let w_max = w_max.min(n);

    let hxt = code.hx().transpose();
    let hzt = code.hz().transpose();
    let col_x: Vec<&[u64]> = (0..n).map(|c| hxt.row_packed(c)).collect();
    let col_z: Vec<&[u64]> = (0..n).map(|c| hzt.row_packed(c)).collect();

    let mut search = Search {
        code,
        col_x,
        col_z,
        sx: vec![0u64; hxt.row_packed(0).len()],
        sz: vec![0u64; hzt.row_packed(0).len()],
        v: vec![0u64; n.div_ceil(64)],
    };
    for w in 1..=w_max {
        if search.descend(0, w) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

struct Search<'a> {
    code: &'a CssCode,
    col_x: Vec<&'a [u64]>,
    col_z: Vec<&'a [u64]>,
    /// Partial H_X·v and H_Z·v over the chosen support.
    sx: Vec<u64>,
    sz: Vec<u64>,
    /// Packed candidate vector.
    v: Vec<u64>,
}

impl Search<'_> {
    fn descend(&mut self, start: usize, remaining: usize) -> bool {
        let n = self.code.n();
        // Leave room for the columns still to be chosen.
        for c in start..=n - remaining {
            for (acc, col) in self.sx.iter_mut().zip(self.col_x[c]) {
                *acc ^= col;
            }
            for (acc, col) in self.sz.iter_mut().zip(self.col_z[c]) {
                *acc ^= col;
            }
            self.v[c / 64] ^= 1u64 << (c % 64);

            let found = if remaining == 1 {
                self.leaf_is_logical()
            } else {
                self.descend(c + 1, remaining - 1)
            };
            if found {
                return true;
            }

            for (acc, col) in self.sx.iter_mut().zip(self.col_x[c]) {
                *acc ^= col;
            }
            for (acc, col) in self.sz.iter_mut().zip(self.col_z[c]) {
                *acc ^= col;
            }
            self.v[c / 64] ^= 1u64 << (c % 64);
        }
        false
    }

    fn leaf_is_logical(&self) -> bool {
        let in_ker_x = self.sx.iter().all(|&word| word == 0);
        if in_ker_x && !self.code.row_space_z().contains_packed(&self.v) {
            return true;
        }
        let in_ker_z = self.sz.iter().all(|&word| word == 0);
        in_ker_z && !self.code.row_space_x().contains_packed(&self.v)
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
        if acc > NODE_BUDGET * 2 {
            return acc;
        }
    }
    acc
}
