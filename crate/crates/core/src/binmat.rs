//! Dense GF(2) matrices packed 64 bits per word, plus row-space queries.
//!
//! The constructions and validity checks want dense bit algebra (products,
//! ranks, all-ones tests); the decoder converts to sparse adjacency
//! separately. Trailing bits past `cols` in the last word of a row are kept
//! at zero so popcount-based products need no masking.

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

/// Pack a 0/1 byte slice into little-endian 64-bit words.
pub fn pack_bits(bits: &[u8]) -> Vec<u64> {
    let words = bits.len().div_ceil(64);
    let mut out = vec![0u64; words.max(1)];
    for (i, &b) in bits.iter().enumerate() {
        debug_assert!(b <= 1);
        if b == 1 {
            out[i / 64] |= 1u64 << (i % 64);
        }
    }
    out
}

/// Parity of the AND of two equal-length packed vectors.
#[inline]
pub fn packed_dot(a: &[u64], b: &[u64]) -> u8 {
    let mut acc = 0u32;
    for (x, y) in a.iter().zip(b) {
        acc ^= (x & y).count_ones();
    }
    (acc & 1) as u8
}

#[inline]
pub fn packed_xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

#[inline]
pub fn packed_get(v: &[u64], i: usize) -> u8 {
    (v[i / 64] >> (i % 64) & 1) as u8
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> BinaryMatrix {
        let words_per_row = cols.div_ceil(64).max(1);
        BinaryMatrix {
            rows,
            cols,
            words_per_row,
            bits: vec![0u64; rows * words_per_row],
        }
    }

    pub fn identity(n: usize) -> BinaryMatrix {
        let mut m = BinaryMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn all_ones(rows: usize, cols: usize) -> BinaryMatrix {
        let mut m = BinaryMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, true);
            }
        }
        m
    }

    /// Build from 0/1 entries; all rows must share one length.
    pub fn from_rows(rows: &[Vec<u8>]) -> BinaryMatrix {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = BinaryMatrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, &b) in row.iter().enumerate() {
                debug_assert!(b <= 1);
                if b == 1 {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.bits[r * self.words_per_row + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let word = &mut self.bits[r * self.words_per_row + c / 64];
        let mask = 1u64 << (c % 64);
        if bit {
            *word |= mask;
        } else {
            *word &= !mask;
        }
    }

    #[inline]
    pub fn row_packed(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_packed(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn column_weight(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    pub fn row_support(&self, r: usize) -> Vec<usize> {
        (0..self.cols).filter(|&c| self.get(r, c)).collect()
    }

    /// Circulant permutation matrix: identity with every row shifted right
    /// by `x`, so row r has its single one at column (r + x) mod p.
    pub fn circulant_permutation(x: u64, p: u64) -> Result<BinaryMatrix> {
        if x >= p {
            return Err(Error::OutOfRange { x, p });
        }
        let p = p as usize;
        let mut m = BinaryMatrix::zeros(p, p);
        for r in 0..p {
            m.set(r, (r + x as usize) % p, true);
        }
        Ok(m)
    }

    /// Expand a J×L base matrix over [p] into the Jp×Lp binary matrix whose
    /// (i,j) block is the circulant permutation for base[i][j].
    pub fn cyc_expand(base: &[Vec<u64>], p: u64) -> Result<BinaryMatrix> {
        let big_l = base.first().map_or(0, Vec::len);
        let pu = p as usize;
        let mut m = BinaryMatrix::zeros(base.len() * pu, big_l * pu);
        for (i, row) in base.iter().enumerate() {
            if row.len() != big_l {
                return Err(Error::Dimension {
                    context: "cyc_expand base row length",
                    got: row.len(),
                    expected: big_l,
                });
            }
            for (j, &x) in row.iter().enumerate() {
                if x >= p {
                    return Err(Error::OutOfRange { x, p });
                }
                for r in 0..pu {
                    m.set(i * pu + r, j * pu + (r + x as usize) % pu, true);
                }
            }
        }
        Ok(m)
    }

    /// GF(2) product A·Bᵀ; needs matching column counts.
    pub fn mul_transpose(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension {
                context: "mul_transpose column count",
                got: other.cols,
                expected: self.cols,
            });
        }
        let mut out = BinaryMatrix::zeros(self.rows, other.rows);
        for i in 0..self.rows {
            let a = self.row_packed(i);
            for j in 0..other.rows {
                if packed_dot(a, other.row_packed(j)) == 1 {
                    out.set(i, j, true);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> BinaryMatrix {
        let mut out = BinaryMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out.set(c, r, true);
                }
            }
        }
        out
    }

    /// Matrix-vector product over GF(2); `v` is a packed length-`cols` vector.
    pub fn mul_packed_vector(&self, v: &[u64]) -> Vec<u8> {
        debug_assert_eq!(v.len(), self.words_per_row);
        (0..self.rows).map(|r| packed_dot(self.row_packed(r), v)).collect()
    }

    pub fn is_all_ones(&self) -> bool {
        (0..self.rows).all(|r| self.row_weight(r) == self.cols)
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// GF(2) rank by elimination on a scratch copy.
    pub fn rank(&self) -> usize {
        RowSpace::new(self).rank()
    }

    /// New matrix with one extra all-ones column on the right.
    pub fn append_all_ones_column(&self) -> BinaryMatrix {
        let mut out = BinaryMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out.set(r, c, true);
                }
            }
            out.set(r, self.cols, true);
        }
        out
    }

    /// Stack `self` on top of `other`; column counts must match.
    pub fn vstack(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension {
                context: "vstack column count",
                got: other.cols,
                expected: self.cols,
            });
        }
        let mut out = BinaryMatrix::zeros(self.rows + other.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out.set(r, c, true);
                }
            }
        }
        for r in 0..other.rows {
            for c in 0..self.cols {
                if other.get(r, c) {
                    out.set(self.rows + r, c, true);
                }
            }
        }
        Ok(out)
    }
}

impl std::fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(16) {
            for c in 0..self.cols.min(80) {
                f.write_str(if self.get(r, c) { "1" } else { "." })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Reduced row-echelon basis of the row space, kept with pivot columns so
/// membership tests are a pivot-driven XOR sweep.
pub struct RowSpace {
    cols: usize,
    words: usize,
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(m: &BinaryMatrix) -> RowSpace {
        let words = m.words_per_row;
        let mut basis: Vec<Vec<u64>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for r in 0..m.rows {
            let mut v = m.row_packed(r).to_vec();
            Self::reduce(&mut v, &basis, &pivots);
            if let Some(p) = first_set_bit(&v, m.cols) {
                // Keep the basis reduced above the new pivot as well.
                for i in 0..basis.len() {
                    if packed_get(&basis[i], p) == 1 {
                        let vv = v.clone();
                        packed_xor_into(&mut basis[i], &vv);
                    }
                }
                basis.push(v);
                pivots.push(p);
            }
        }
        RowSpace {
            cols: m.cols,
            words,
            basis,
            pivots,
        }
    }

    fn reduce(v: &mut [u64], basis: &[Vec<u64>], pivots: &[usize]) {
        for (b, &p) in basis.iter().zip(pivots) {
            if packed_get(v, p) == 1 {
                packed_xor_into(v, b);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// True iff the packed vector lies in the row space.
    pub fn contains_packed(&self, v: &[u64]) -> bool {
        debug_assert_eq!(v.len(), self.words);
        let mut scratch = v.to_vec();
        Self::reduce(&mut scratch, &self.basis, &self.pivots);
        scratch.iter().all(|&w| w == 0)
    }

    pub fn contains_bits(&self, v: &[u8]) -> Result<bool> {
        if v.len() != self.cols {
            return Err(Error::Dimension {
                context: "row space vector length",
                got: v.len(),
                expected: self.cols,
            });
        }
        let mut packed = pack_bits(v);
        packed.resize(self.words, 0);
        Ok(self.contains_packed(&packed))
    }
}

fn first_set_bit(v: &[u64], cols: usize) -> Option<usize> {
    for (i, &w) in v.iter().enumerate() {
        if w != 0 {
            let bit = i * 64 + w.trailing_zeros() as usize;
            return (bit < cols).then_some(bit);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Textbook row reduction over byte matrices, used as the rank oracle.
    fn naive_rank(rows: &[Vec<u8>]) -> usize {
        let mut m: Vec<Vec<u8>> = rows.to_vec();
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            if let Some(pivot) = (rank..m.len()).find(|&r| m[r][c] == 1) {
                m.swap(rank, pivot);
                for r in 0..m.len() {
                    if r != rank && m[r][c] == 1 {
                        for j in 0..cols {
                            m[r][j] ^= m[rank][j];
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    fn naive_mul_transpose(a: &[Vec<u8>], b: &[Vec<u8>]) -> Vec<Vec<u8>> {
        a.iter()
            .map(|ra| {
                b.iter()
                    .map(|rb| ra.iter().zip(rb).map(|(x, y)| x & y).sum::<u8>() & 1)
                    .collect()
            })
            .collect()
    }

    #[test]
    fn cpm_zero_shift_is_identity() {
        assert_eq!(
            BinaryMatrix::circulant_permutation(0, 5).unwrap(),
            BinaryMatrix::identity(5)
        );
    }

    #[test]
    fn cpm_unit_shift() {
        let m = BinaryMatrix::circulant_permutation(1, 3).unwrap();
        assert_eq!(
            m,
            BinaryMatrix::from_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]])
        );
    }

    #[test]
    fn cpm_shift_addition() {
        for p in [3u64, 5, 7] {
            for x in 0..p {
                for y in 0..p {
                    let a = BinaryMatrix::circulant_permutation(x, p).unwrap();
                    let b = BinaryMatrix::circulant_permutation(y, p).unwrap();
                    let prod = a.mul_transpose(&b.transpose()).unwrap();
                    let expect = BinaryMatrix::circulant_permutation((x + y) % p, p).unwrap();
                    assert_eq!(prod, expect, "p={p} x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn cpm_rejects_out_of_range_shift() {
        assert!(matches!(
            BinaryMatrix::circulant_permutation(5, 5),
            Err(Error::OutOfRange { x: 5, p: 5 })
        ));
    }

    #[test]
    fn cyc_expand_single_zero_block() {
        let m = BinaryMatrix::cyc_expand(&[vec![0]], 3).unwrap();
        assert_eq!(m, BinaryMatrix::identity(3));
    }

    #[test]
    fn cyc_expand_weights() {
        let base = vec![vec![0, 1, 2], vec![2, 0, 1]];
        let m = BinaryMatrix::cyc_expand(&base, 3).unwrap();
        assert_eq!((m.rows(), m.cols()), (6, 9));
        for r in 0..m.rows() {
            assert_eq!(m.row_weight(r), 3);
        }
        for c in 0..m.cols() {
            assert_eq!(m.column_weight(c), 2);
        }
    }

    #[test]
    fn rank_simple_cases() {
        assert_eq!(BinaryMatrix::identity(4).rank(), 4);
        assert_eq!(BinaryMatrix::all_ones(3, 3).rank(), 1);
        assert_eq!(BinaryMatrix::zeros(3, 5).rank(), 0);
    }

    #[test]
    fn rank_matches_naive_oracle_on_random_matrices() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        for _ in 0..200 {
            let rows = rng.random_range(1..=20);
            let cols = rng.random_range(1..=20);
            let data: Vec<Vec<u8>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.random_range(0..=1u8)).collect())
                .collect();
            let m = BinaryMatrix::from_rows(&data);
            assert_eq!(m.rank(), naive_rank(&data), "{data:?}");
        }
    }

    #[test]
    fn mul_transpose_matches_naive_oracle() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.random_range(1..=12);
            let ra = rng.random_range(1..=12);
            let rb = rng.random_range(1..=12);
            let a: Vec<Vec<u8>> = (0..ra)
                .map(|_| (0..n).map(|_| rng.random_range(0..=1u8)).collect())
                .collect();
            let b: Vec<Vec<u8>> = (0..rb)
                .map(|_| (0..n).map(|_| rng.random_range(0..=1u8)).collect())
                .collect();
            let got = BinaryMatrix::from_rows(&a)
                .mul_transpose(&BinaryMatrix::from_rows(&b))
                .unwrap();
            let expect = BinaryMatrix::from_rows(&naive_mul_transpose(&a, &b));
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn mul_transpose_dimension_mismatch() {
        let a = BinaryMatrix::zeros(2, 3);
        let b = BinaryMatrix::zeros(2, 4);
        assert!(a.mul_transpose(&b).is_err());
    }

    #[test]
    fn rowspace_membership() {
        let m = BinaryMatrix::from_rows(&[
            vec![1, 0, 1, 0],
            vec![0, 1, 1, 0],
            vec![1, 1, 0, 0],
        ]);
        let space = RowSpace::new(&m);
        assert_eq!(space.rank(), 2);
        assert!(space.contains_bits(&[0, 0, 0, 0]).unwrap());
        assert!(space.contains_bits(&[1, 0, 1, 0]).unwrap());
        assert!(space.contains_bits(&[1, 1, 0, 0]).unwrap());
        assert!(!space.contains_bits(&[0, 0, 0, 1]).unwrap());
        assert!(!space.contains_bits(&[1, 0, 0, 0]).unwrap());
        assert!(space.contains_bits(&[1, 0, 0]).is_err());
    }

    #[test]
    fn rowspace_membership_matches_rank_oracle() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(13);
        for _ in 0..100 {
            let rows = rng.random_range(1..=10);
            let cols = rng.random_range(1..=16);
            let data: Vec<Vec<u8>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.random_range(0..=1u8)).collect())
                .collect();
            let m = BinaryMatrix::from_rows(&data);
            let space = RowSpace::new(&m);
            let v: Vec<u8> = (0..cols).map(|_| rng.random_range(0..=1u8)).collect();
            // v is in the row space iff appending it leaves the rank unchanged.
            let mut augmented = data.clone();
            augmented.push(v.clone());
            let expect = naive_rank(&augmented) == naive_rank(&data);
            assert_eq!(space.contains_bits(&v).unwrap(), expect);
        }
    }

    #[test]
    fn append_all_ones_column_and_stack() {
        let h = BinaryMatrix::from_rows(&[vec![1, 0], vec![0, 1]]);
        let hx = h.append_all_ones_column();
        assert_eq!(hx.cols(), 3);
        assert!(hx.get(0, 2) && hx.get(1, 2));
        let s = hx.vstack(&hx).unwrap();
        assert_eq!(s.rows(), 4);
        assert_eq!(s.row_support(3), vec![1, 2]);
    }

    #[test]
    fn pack_round_trip() {
        let bits: Vec<u8> = (0..130).map(|i| (i % 3 == 0) as u8).collect();
        let packed = pack_bits(&bits);
        for (i, &b) in bits.iter().enumerate() {
            assert_eq!(packed_get(&packed, i), b);
        }
        assert_eq!(packed_dot(&packed, &packed) as usize, bits.iter().filter(|&&b| b == 1).count() % 2);
    }

    #[test]
    fn transpose_involution() {
        let m = BinaryMatrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1]]);
        assert_eq!(m.transpose().transpose(), m);
        assert_eq!(m.transpose().rows(), 3);
    }
}
