//! CSS code assembly from a matrix pair with all-ones product, syndrome
//! computation, stabilizer membership, and short-cycle localization.
//!
//! Appending an all-ones column to both halves turns H_1·H_2ᵀ = all-ones
//! into H_X·H_Zᵀ = 0, at the price of 4-cycles that all pass through the
//! appended qubit (plus, when H_X = H_Z, the mirrored-row overlaps).

use crate::binmat::{pack_bits, packed_get, BinaryMatrix, RowSpace};
use crate::error::{Error, Result};
use crate::fg::{GeometryKind, IncidenceMatrix};
use crate::gf4::Gf4;

/// How a code was built; drives descriptor serialization and the expected
/// shape of the 4-cycle report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstructionParams {
    QuasiCyclic { p: u64, sigma: u64 },
    Geometry { kind: GeometryKind, s: usize },
    Explicit,
}

impl ConstructionParams {
    pub fn family(&self) -> &'static str {
        match self {
            ConstructionParams::QuasiCyclic { .. } => "qc",
            ConstructionParams::Geometry { kind: GeometryKind::Euclidean, .. } => "eg",
            ConstructionParams::Geometry { kind: GeometryKind::Projective, .. } => "pg",
            ConstructionParams::Explicit => "explicit",
        }
    }
}

pub struct CssCode {
    hx: BinaryMatrix,
    hz: BinaryMatrix,
    k: usize,
    params: ConstructionParams,
    claimed_d: Option<usize>,
    row_space_x: RowSpace,
    row_space_z: RowSpace,
}

impl std::fmt::Debug for CssCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "CssCode {{ family: {}, n: {}, k: {}, m_x: {}, m_z: {} }}",
            self.family(),
            self.n(),
            self.k,
            self.m_x(),
            self.m_z()
        )
    }
}

/// Nonzero-symbol count of a GF(4) vector.
pub fn error_weight(e: &[Gf4]) -> usize {
    e.iter().filter(|s| !s.is_zero()).count()
}

impl CssCode {
    /// Append the all-ones column to both halves and validate the result.
    /// `h1`, `h2` must satisfy h1·h2ᵀ = all-ones.
    pub fn assemble(
        h1: &BinaryMatrix,
        h2: &BinaryMatrix,
        params: ConstructionParams,
        claimed_d: Option<usize>,
    ) -> Result<CssCode> {
        if h1.rows() == 0 || h2.rows() == 0 || h1.cols() == 0 {
            return Err(Error::DegenerateCode(h1.rows().min(h2.rows()), h1.cols() + 1));
        }
        if h2.cols() != h1.cols() {
            return Err(Error::Dimension {
                context: "assembly column count",
                got: h2.cols(),
                expected: h1.cols(),
            });
        }
        for a in 0..h1.rows() {
            for b in 0..h2.rows() {
                let overlap: usize = h1
                    .row_packed(a)
                    .iter()
                    .zip(h2.row_packed(b))
                    .map(|(x, y)| (x & y).count_ones() as usize)
                    .sum();
                if overlap % 2 == 0 {
                    return Err(Error::NotAllOnes { row_a: a, row_b: b, overlap });
                }
            }
        }
        let hx = h1.append_all_ones_column();
        let hz = h2.append_all_ones_column();
        Self::finish(hx, hz, params, claimed_d)
    }

    /// H_X = H_Z = (H | 1) for a point-line incidence matrix H.
    pub fn from_incidence(inc: &IncidenceMatrix, claimed_d: Option<usize>) -> Result<CssCode> {
        let params = ConstructionParams::Geometry {
            kind: inc.geometry.kind,
            s: inc.geometry.s,
        };
        CssCode::assemble(&inc.h, &inc.h, params, claimed_d)
    }

    /// Validate already-assembled H_X, H_Z (both ending in an all-ones
    /// column) and compute k. Used by the deserialization path.
    pub fn from_check_matrices(
        hx: BinaryMatrix,
        hz: BinaryMatrix,
        params: ConstructionParams,
        claimed_d: Option<usize>,
    ) -> Result<CssCode> {
        let n = hx.cols();
        if hx.rows() == 0 || hz.rows() == 0 || n < 2 {
            return Err(Error::DegenerateCode(hx.rows().min(hz.rows()), n));
        }
        if hz.cols() != n {
            return Err(Error::Dimension {
                context: "check matrix column count",
                got: hz.cols(),
                expected: n,
            });
        }
        for (m, name) in [(&hx, "H_X"), (&hz, "H_Z")] {
            for r in 0..m.rows() {
                if !m.get(r, n - 1) {
                    return Err(Error::Descriptor(format!(
                        "{name} row {r} lacks the all-ones final column"
                    )));
                }
            }
        }
        Self::finish(hx, hz, params, claimed_d)
    }

    fn finish(
        hx: BinaryMatrix,
        hz: BinaryMatrix,
        params: ConstructionParams,
        claimed_d: Option<usize>,
    ) -> Result<CssCode> {
        for x in 0..hx.rows() {
            for z in 0..hz.rows() {
                let parity: u32 = hx
                    .row_packed(x)
                    .iter()
                    .zip(hz.row_packed(z))
                    .map(|(a, b)| (a & b).count_ones())
                    .sum();
                if parity % 2 == 1 {
                    return Err(Error::TwistedCondition { row_x: x, row_z: z });
                }
            }
        }
        let row_space_x = RowSpace::new(&hx);
        let row_space_z = RowSpace::new(&hz);
        let n = hx.cols();
        let rank_sum = row_space_x.rank() + row_space_z.rank();
        // rank(H_X) + rank(H_Z) <= n whenever H_X·H_Zᵀ = 0.
        debug_assert!(rank_sum <= n);
        Ok(CssCode {
            k: n - rank_sum,
            hx,
            hz,
            params,
            claimed_d,
            row_space_x,
            row_space_z,
        })
    }

    #[inline]
    pub fn hx(&self) -> &BinaryMatrix {
        &self.hx
    }

    #[inline]
    pub fn hz(&self) -> &BinaryMatrix {
        &self.hz
    }

    /// Block length (qubit count), including the appended qubit.
    #[inline]
    pub fn n(&self) -> usize {
        self.hx.cols()
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn params(&self) -> ConstructionParams {
        self.params
    }

    pub fn family(&self) -> &'static str {
        self.params.family()
    }

    pub fn claimed_d(&self) -> Option<usize> {
        self.claimed_d
    }

    /// Number of X-block check rows.
    pub fn m_x(&self) -> usize {
        self.hx.rows()
    }

    pub fn m_z(&self) -> usize {
        self.hz.rows()
    }

    /// Total stabilizer rows 2m (all kept, including dependent ones).
    pub fn syndrome_len(&self) -> usize {
        self.hx.rows() + self.hz.rows()
    }

    pub fn rank_x(&self) -> usize {
        self.row_space_x.rank()
    }

    pub fn rank_z(&self) -> usize {
        self.row_space_z.rank()
    }

    pub fn row_space_x(&self) -> &RowSpace {
        &self.row_space_x
    }

    pub fn row_space_z(&self) -> &RowSpace {
        &self.row_space_z
    }

    /// Sparse stabilizer rows: X-block rows carry omega, Z-block rows carry
    /// omega_bar, in stacked order.
    pub fn stabilizer_rows(&self) -> Vec<Vec<(usize, Gf4)>> {
        let mut rows = Vec::with_capacity(self.syndrome_len());
        for r in 0..self.hx.rows() {
            rows.push(self.hx.row_support(r).into_iter().map(|c| (c, Gf4::OMEGA)).collect());
        }
        for r in 0..self.hz.rows() {
            rows.push(self.hz.row_support(r).into_iter().map(|c| (c, Gf4::OMEGA_BAR)).collect());
        }
        rows
    }

    /// Row j of the stabilizer matrix read as an error vector.
    pub fn stabilizer_row_error(&self, j: usize) -> Vec<Gf4> {
        let mut e = vec![Gf4::ZERO; self.n()];
        let (m, sym, r) = if j < self.hx.rows() {
            (&self.hx, Gf4::OMEGA, j)
        } else {
            (&self.hz, Gf4::OMEGA_BAR, j - self.hx.rows())
        };
        for c in m.row_support(r) {
            e[c] = sym;
        }
        e
    }

    /// Syndrome bit j is the XOR over row support of trace inner products
    /// with the error. With the bit-pair encoding this collapses to
    /// H_X·beta(e) stacked on H_Z·alpha(e).
    pub fn compute_syndrome(&self, e: &[Gf4]) -> Result<Vec<u8>> {
        let (alpha, beta) = self.split_bits(e)?;
        let mut z = self.hx.mul_packed_vector(&pack_bits(&beta));
        z.extend(self.hz.mul_packed_vector(&pack_bits(&alpha)));
        Ok(z)
    }

    /// True iff the residual error acts trivially on the code space:
    /// its omega part lies in rowspace(H_X) and its omega_bar part in
    /// rowspace(H_Z).
    pub fn residual_in_stabilizer(&self, r: &[Gf4]) -> Result<bool> {
        let (alpha, beta) = self.split_bits(r)?;
        Ok(self.row_space_x.contains_bits(&alpha)? && self.row_space_z.contains_bits(&beta)?)
    }

    fn split_bits(&self, e: &[Gf4]) -> Result<(Vec<u8>, Vec<u8>)> {
        if e.len() != self.n() {
            return Err(Error::Dimension {
                context: "error vector length",
                got: e.len(),
                expected: self.n(),
            });
        }
        let mut alpha = vec![0u8; e.len()];
        let mut beta = vec![0u8; e.len()];
        for (i, s) in e.iter().enumerate() {
            let (a, b) = s.bit_pair();
            alpha[i] = a;
            beta[i] = b;
        }
        Ok((alpha, beta))
    }

    /// Scan all stabilizer row pairs for supports sharing at least two
    /// qubits (each such pair is a 4-cycle in the Tanner graph of S).
    pub fn four_cycle_localization(&self) -> FourCycleReport {
        let total_rows = self.syndrome_len();
        let n = self.n();
        let packed: Vec<&[u64]> = (0..self.hx.rows())
            .map(|r| self.hx.row_packed(r))
            .chain((0..self.hz.rows()).map(|r| self.hz.row_packed(r)))
            .collect();
        let mut pair_count = 0usize;
        let mut appended_pair_count = 0usize;
        let mut residual = Vec::new();
        for a in 0..total_rows {
            for b in a + 1..total_rows {
                let overlap: usize = packed[a]
                    .iter()
                    .zip(packed[b])
                    .map(|(x, y)| (x & y).count_ones() as usize)
                    .sum();
                if overlap < 2 {
                    continue;
                }
                pair_count += 1;
                let has_appended =
                    packed_get(packed[a], n - 1) == 1 && packed_get(packed[b], n - 1) == 1;
                if overlap == 2 && has_appended {
                    appended_pair_count += 1;
                } else {
                    let columns: Vec<usize> = (0..n)
                        .filter(|&c| {
                            packed_get(packed[a], c) == 1 && packed_get(packed[b], c) == 1
                        })
                        .collect();
                    residual.push(OverlapPair { row_a: a, row_b: b, columns });
                }
            }
        }
        FourCycleReport {
            pair_count,
            appended_pair_count,
            residual,
        }
    }
}

/// A stabilizer row pair whose supports share `columns` (at least two).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapPair {
    pub row_a: usize,
    pub row_b: usize,
    pub columns: Vec<usize>,
}

/// 4-cycle census over the stabilizer matrix. Pairs whose overlap is
/// exactly two columns, one of them the appended qubit, are only counted;
/// anything else is kept with its column list.
#[derive(Clone, Debug)]
pub struct FourCycleReport {
    pub pair_count: usize,
    pub appended_pair_count: usize,
    pub residual: Vec<OverlapPair>,
}

impl FourCycleReport {
    /// Every 4-cycle runs through the appended qubit and no row pair
    /// overlaps in more than two columns.
    pub fn nested_on_appended(&self) -> bool {
        self.residual.is_empty()
    }

    /// All residual overlaps join row j with row j+m, the two copies of
    /// one incidence row.
    pub fn residual_only_between_mirrored_rows(&self, m: usize) -> bool {
        self.residual.iter().all(|o| o.row_a + m == o.row_b)
    }
}
