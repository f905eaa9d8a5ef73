//! Binary sum-product baseline: the two bit planes of a GF(4) error are
//! decoded independently, one run against the Z-type check matrix and one
//! against the X-type matrix, each seeing half of the syndrome. The
//! marginal flip probability of each plane under depolarizing noise of
//! strength eps is 2*eps/3.

use super::DecoderConfig;
use crate::binmat::BinaryMatrix;
use crate::css::CssCode;
use crate::gf4::Gf4;

/// Lower clamp applied to pair entries before final normalization.
const PAIR_FLOOR: f64 = 1e-300;

/// Sparse parity-check graph over bits.
pub struct BinaryGraph {
    vn_count: usize,
    cn_count: usize,
    cn_start: Vec<u32>,
    cn_vn: Vec<u32>,
    vn_start: Vec<u32>,
    vn_edge: Vec<u32>,
    max_cn_degree: usize,
    max_vn_degree: usize,
}

impl BinaryGraph {
    pub fn from_matrix(h: &BinaryMatrix) -> BinaryGraph {
        let cn_count = h.rows();
        let vn_count = h.cols();
        let mut cn_start = Vec::with_capacity(cn_count + 1);
        let mut cn_vn = Vec::new();
        cn_start.push(0u32);
        for r in 0..cn_count {
            for c in h.row_support(r) {
                cn_vn.push(c as u32);
            }
            cn_start.push(cn_vn.len() as u32);
        }
        let mut vn_degree = vec![0u32; vn_count];
        for &vn in &cn_vn {
            vn_degree[vn as usize] += 1;
        }
        let mut vn_start = Vec::with_capacity(vn_count + 1);
        vn_start.push(0u32);
        for &d in &vn_degree {
            vn_start.push(vn_start.last().unwrap() + d);
        }
        let mut cursor: Vec<u32> = vn_start[..vn_count].to_vec();
        let mut vn_edge = vec![0u32; cn_vn.len()];
        for (e, &vn) in cn_vn.iter().enumerate() {
            vn_edge[cursor[vn as usize] as usize] = e as u32;
            cursor[vn as usize] += 1;
        }
        let max_cn_degree = (0..cn_count)
            .map(|j| (cn_start[j + 1] - cn_start[j]) as usize)
            .max()
            .unwrap_or(0);
        let max_vn_degree = vn_degree.iter().copied().max().unwrap_or(0) as usize;
        BinaryGraph {
            vn_count,
            cn_count,
            cn_start,
            cn_vn,
            vn_start,
            vn_edge,
            max_cn_degree,
            max_vn_degree,
        }
    }

    fn cn_range(&self, j: usize) -> std::ops::Range<usize> {
        self.cn_start[j] as usize..self.cn_start[j + 1] as usize
    }

    fn vn_range(&self, i: usize) -> std::ops::Range<usize> {
        self.vn_start[i] as usize..self.vn_start[i + 1] as usize
    }

    pub fn syndrome_of(&self, bits: &[u8]) -> Vec<u8> {
        (0..self.cn_count)
            .map(|j| {
                self.cn_range(j)
                    .fold(0u8, |acc, e| acc ^ bits[self.cn_vn[e] as usize])
            })
            .collect()
    }

    fn bits_match(&self, bits: &[u8], syndrome: &[u8]) -> bool {
        (0..self.cn_count).all(|j| {
            let parity = self
                .cn_range(j)
                .fold(0u8, |acc, e| acc ^ bits[self.cn_vn[e] as usize]);
            parity == syndrome[j]
        })
    }
}

#[derive(Clone, Debug)]
pub struct BitOutcome {
    pub bits: Vec<u8>,
    pub satisfied: bool,
    pub iterations: usize,
}

#[inline]
fn rescale_pair(m: &mut [f64; 2]) {
    let max = m[0].max(m[1]);
    if max > 0.0 && max < 1e-100 {
        let inv = 1.0 / max;
        m[0] *= inv;
        m[1] *= inv;
    }
}

#[inline]
fn finalize_pair(m: &mut [f64; 2]) {
    if m[0] == 0.0 && m[1] == 0.0 {
        *m = [0.5, 0.5];
        return;
    }
    m[0] = m[0].max(PAIR_FLOOR);
    m[1] = m[1].max(PAIR_FLOOR);
    let inv = 1.0 / (m[0] + m[1]);
    m[0] *= inv;
    m[1] *= inv;
}

/// Flooded binary sum-product with syndrome targets; `flip_prob` is the
/// prior probability that a bit is 1. Ties in the hard decision go to 0.
pub fn binary_bp(
    graph: &BinaryGraph,
    syndrome: &[u8],
    flip_prob: f64,
    config: &DecoderConfig,
) -> BitOutcome {
    assert_eq!(syndrome.len(), graph.cn_count);
    let ne = graph.cn_vn.len();
    let prior = [1.0 - flip_prob, flip_prob];
    let mut v2c = vec![prior; ne];
    let mut c2v = vec![[0.0f64; 2]; ne];
    let mut deltas = vec![0.0f64; graph.max_cn_degree];
    let mut gather = vec![[0.0f64; 2]; graph.max_vn_degree];
    let mut suf = vec![[0.0f64; 2]; graph.max_vn_degree + 1];

    let mut bits = vec![u8::from(flip_prob > 0.5); graph.vn_count];
    if config.early_stop && graph.bits_match(&bits, syndrome) {
        return BitOutcome {
            bits,
            satisfied: true,
            iterations: 0,
        };
    }

    for iter in 1..=config.max_iterations {
        for j in 0..graph.cn_count {
            let range = graph.cn_range(j);
            let d = range.len();
            let s = 1.0 - 2.0 * f64::from(syndrome[j]);
            for (t, m) in v2c[range.clone()].iter().enumerate() {
                deltas[t] = m[0] - m[1];
            }
            let out = &mut c2v[range];
            let mut prefix = 1.0f64;
            for t in 0..d {
                out[t][0] = prefix;
                prefix *= deltas[t];
            }
            let mut suffix = 1.0f64;
            for t in (0..d).rev() {
                let excl = (out[t][0] * suffix).clamp(-1.0, 1.0);
                suffix *= deltas[t];
                out[t] = [0.5 * (1.0 + s * excl), 0.5 * (1.0 - s * excl)];
            }
        }
        for i in 0..graph.vn_count {
            let range = graph.vn_range(i);
            let d = range.len();
            for (t, &e) in graph.vn_edge[range.clone()].iter().enumerate() {
                gather[t] = c2v[e as usize];
            }
            // Exclusive products against the prior through rescaled
            // prefix/suffix chains; the appended column can reach degree
            // in the thousands, where raw products would underflow.
            suf[d] = [1.0, 1.0];
            for t in (0..d).rev() {
                let mut next = [
                    suf[t + 1][0] * gather[t][0],
                    suf[t + 1][1] * gather[t][1],
                ];
                rescale_pair(&mut next);
                suf[t] = next;
            }
            let mut pre = prior;
            for (t, &e) in graph.vn_edge[range].iter().enumerate() {
                let mut m = [pre[0] * suf[t + 1][0], pre[1] * suf[t + 1][1]];
                finalize_pair(&mut m);
                v2c[e as usize] = m;
                pre = [pre[0] * gather[t][0], pre[1] * gather[t][1]];
                rescale_pair(&mut pre);
            }
            bits[i] = u8::from(pre[1] > pre[0]);
        }
        if config.early_stop && graph.bits_match(&bits, syndrome) {
            return BitOutcome {
                bits,
                satisfied: true,
                iterations: iter,
            };
        }
    }
    let satisfied = graph.bits_match(&bits, syndrome);
    BitOutcome {
        bits,
        satisfied,
        iterations: config.max_iterations,
    }
}

/// Pair of binary decoders covering both bit planes of the quaternary
/// error: the Z-type matrix with the second syndrome half recovers the
/// first plane, the X-type matrix with the first half the second plane.
pub struct Bp2Decoder {
    graph_x: BinaryGraph,
    graph_z: BinaryGraph,
    m_x: usize,
}

#[derive(Clone, Debug)]
pub struct Bp2Outcome {
    pub estimate: Vec<Gf4>,
    pub satisfied: bool,
    pub iterations: usize,
}

impl Bp2Decoder {
    pub fn new(code: &CssCode) -> Bp2Decoder {
        Bp2Decoder {
            graph_x: BinaryGraph::from_matrix(code.hx()),
            graph_z: BinaryGraph::from_matrix(code.hz()),
            m_x: code.m_x(),
        }
    }

    pub fn decode(&self, syndrome: &[u8], eps: f64, config: &DecoderConfig) -> Bp2Outcome {
        assert_eq!(syndrome.len(), self.m_x + self.graph_z.cn_count);
        let (zx, zz) = syndrome.split_at(self.m_x);
        let flip = 2.0 * eps / 3.0;
        let alpha = binary_bp(&self.graph_z, zz, flip, config);
        let beta = binary_bp(&self.graph_x, zx, flip, config);
        let estimate = alpha
            .bits
            .iter()
            .zip(&beta.bits)
            .map(|(&a, &b)| Gf4::from_bit_pair(a, b))
            .collect();
        Bp2Outcome {
            estimate,
            satisfied: alpha.satisfied && beta.satisfied,
            iterations: alpha.iterations.max(beta.iterations),
        }
    }
}
