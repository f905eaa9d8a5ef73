//! Quaternary sum-product syndrome decoding on the stabilizer Tanner graph,
//! the decimated single-guess variant, and the four-path ensemble with
//! lightest-in-the-list selection.
//!
//! Messages are probability vectors over GF(4). Check updates use the
//! delta form: per incoming edge, delta = P(commute) - P(anticommute);
//! the outgoing entry for symbol a is (1 +- s·D)/4 where D is the product
//! of the other deltas and s encodes the syndrome bit. Variable updates
//! take exclusive products of incoming messages against the channel prior
//! through prefix/suffix chains that are rescaled whenever they grow too
//! small, so high-degree nodes cannot underflow to zero.

pub mod binary;

use crate::css::{error_weight, CssCode};
use crate::gf4::Gf4;
use crate::graph::girth_from_supports;

/// Lower clamp applied to message entries just before final normalization.
pub const MESSAGE_FLOOR: f64 = 1e-300;

/// SIGN[sym][a] = +1 when a commutes with sym, -1 otherwise.
const SIGN: [[f64; 4]; 4] = [
    [1.0, 1.0, 1.0, 1.0],
    [1.0, 1.0, -1.0, -1.0],
    [1.0, -1.0, 1.0, -1.0],
    [1.0, -1.0, -1.0, 1.0],
];

#[derive(Clone, Copy, Debug)]
pub struct DecoderConfig {
    pub max_iterations: usize,
    pub early_stop: bool,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig {
            max_iterations: 15,
            early_stop: true,
        }
    }
}

/// Per-qubit channel prior for depolarizing noise of strength eps.
pub fn depolarizing_prior(eps: f64) -> [f64; 4] {
    [1.0 - eps, eps / 3.0, eps / 3.0, eps / 3.0]
}

/// Sparse bipartite graph of stabilizer rows (checks) against qubits
/// (variables), stored check-major with a variable-major edge index.
pub struct DecodingGraph {
    vn_count: usize,
    cn_count: usize,
    cn_start: Vec<u32>,
    cn_vn: Vec<u32>,
    cn_sym: Vec<Gf4>,
    vn_start: Vec<u32>,
    vn_edge: Vec<u32>,
    max_vn_degree: usize,
}

impl DecodingGraph {
    pub fn from_rows(rows: &[Vec<(usize, Gf4)>], vn_count: usize) -> DecodingGraph {
        let cn_count = rows.len();
        let edge_count: usize = rows.iter().map(Vec::len).sum();
        let mut cn_start = Vec::with_capacity(cn_count + 1);
        let mut cn_vn = Vec::with_capacity(edge_count);
        let mut cn_sym = Vec::with_capacity(edge_count);
        cn_start.push(0u32);
        for row in rows {
            debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0), "unsorted row support");
            for &(vn, sym) in row {
                debug_assert!(vn < vn_count && !sym.is_zero());
                cn_vn.push(vn as u32);
                cn_sym.push(sym);
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
        let mut vn_edge = vec![0u32; edge_count];
        for (e, &vn) in cn_vn.iter().enumerate() {
            vn_edge[cursor[vn as usize] as usize] = e as u32;
            cursor[vn as usize] += 1;
        }
        let max_vn_degree = vn_degree.iter().copied().max().unwrap_or(0) as usize;
        DecodingGraph {
            vn_count,
            cn_count,
            cn_start,
            cn_vn,
            cn_sym,
            vn_start,
            vn_edge,
            max_vn_degree,
        }
    }

    /// Full graph of all 2m stabilizer rows.
    pub fn from_code(code: &CssCode) -> DecodingGraph {
        DecodingGraph::from_rows(&code.stabilizer_rows(), code.n())
    }

    /// Graph with the appended qubit (last variable) and its edges removed.
    pub fn reduced(code: &CssCode) -> DecodingGraph {
        let keep = code.n() - 1;
        let rows: Vec<Vec<(usize, Gf4)>> = code
            .stabilizer_rows()
            .into_iter()
            .map(|row| row.into_iter().filter(|&(vn, _)| vn < keep).collect())
            .collect();
        DecodingGraph::from_rows(&rows, keep)
    }

    #[inline]
    pub fn vn_count(&self) -> usize {
        self.vn_count
    }

    #[inline]
    pub fn cn_count(&self) -> usize {
        self.cn_count
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.cn_vn.len()
    }

    fn cn_range(&self, j: usize) -> std::ops::Range<usize> {
        self.cn_start[j] as usize..self.cn_start[j + 1] as usize
    }

    fn vn_range(&self, i: usize) -> std::ops::Range<usize> {
        self.vn_start[i] as usize..self.vn_start[i + 1] as usize
    }

    pub fn girth(&self) -> Option<usize> {
        let supports: Vec<Vec<usize>> = (0..self.cn_count)
            .map(|j| self.cn_range(j).map(|e| self.cn_vn[e] as usize).collect())
            .collect();
        girth_from_supports(&supports, self.vn_count)
    }

    /// Syndrome of a full assignment under this graph's rows.
    pub fn syndrome_of(&self, assignment: &[Gf4]) -> Vec<u8> {
        assert_eq!(assignment.len(), self.vn_count);
        (0..self.cn_count)
            .map(|j| {
                self.cn_range(j).fold(0u8, |acc, e| {
                    acc ^ assignment[self.cn_vn[e] as usize].trace_inner_product(self.cn_sym[e])
                })
            })
            .collect()
    }

    fn assignment_matches(&self, assignment: &[Gf4], syndrome: &[u8]) -> bool {
        (0..self.cn_count).all(|j| {
            let parity = self.cn_range(j).fold(0u8, |acc, e| {
                acc ^ assignment[self.cn_vn[e] as usize].trace_inner_product(self.cn_sym[e])
            });
            parity == syndrome[j]
        })
    }
}

/// Parity predicate of one check: true iff the assignment's trace products
/// against the row symbols XOR to the syndrome bit.
pub fn check_function(symbols: &[Gf4], assignment: &[Gf4], syndrome_bit: u8) -> bool {
    assert_eq!(symbols.len(), assignment.len());
    let parity = symbols
        .iter()
        .zip(assignment)
        .fold(0u8, |acc, (s, t)| acc ^ t.trace_inner_product(*s));
    parity == syndrome_bit
}

/// Running products are rescaled once their largest entry drops below
/// this; scaling by a positive constant leaves the eventual normalized
/// message unchanged and keeps exact zeros exact.
const RESCALE_THRESHOLD: f64 = 1e-100;

#[inline]
fn rescale_step(m: &mut [f64; 4]) {
    let max = m[0].max(m[1]).max(m[2]).max(m[3]);
    // All-zero products are left untouched here and resolved by the
    // fallback in `finalize`.
    if max > 0.0 && max < RESCALE_THRESHOLD {
        let inv = 1.0 / max;
        for v in m {
            *v *= inv;
        }
    }
}

#[inline]
fn finalize(m: &mut [f64; 4], prior: &[f64; 4]) {
    if m.iter().all(|&v| v == 0.0) {
        // Conflicting evidence: fall back to uniform over the symbols the
        // prior allows, which for a pinned prior is the indicator itself.
        let support = prior.iter().filter(|&&p| p > 0.0).count().max(1) as f64;
        for (v, &p) in m.iter_mut().zip(prior) {
            *v = if p > 0.0 { 1.0 / support } else { 0.0 };
        }
        return;
    }
    let mut sum = 0.0;
    for v in m.iter_mut() {
        *v = v.max(MESSAGE_FLOOR);
        sum += *v;
    }
    let inv = 1.0 / sum;
    for v in m {
        *v *= inv;
    }
}

#[inline]
fn argmax4(m: &[f64; 4]) -> Gf4 {
    let mut best = 0usize;
    for a in 1..4 {
        if m[a] > m[best] {
            best = a;
        }
    }
    Gf4::from_index(best as u8)
}

/// Check-node update in the delta form. `incoming` and the result are
/// indexed like `symbols`; entries of the result sum to one exactly.
pub fn cn_update(symbols: &[Gf4], syndrome_bit: u8, incoming: &[[f64; 4]]) -> Vec<[f64; 4]> {
    let mut out = vec![[0.0f64; 4]; symbols.len()];
    let mut deltas = vec![0.0f64; symbols.len()];
    cn_update_into(symbols, syndrome_bit, incoming, &mut deltas, &mut out);
    out
}

fn cn_update_into(
    symbols: &[Gf4],
    syndrome_bit: u8,
    incoming: &[[f64; 4]],
    deltas: &mut [f64],
    out: &mut [[f64; 4]],
) {
    let d = symbols.len();
    let s = 1.0 - 2.0 * f64::from(syndrome_bit);
    for t in 0..d {
        let sign = &SIGN[symbols[t].index()];
        let m = &incoming[t];
        deltas[t] = sign[0] * m[0] + sign[1] * m[1] + sign[2] * m[2] + sign[3] * m[3];
    }
    // Exclusive products via a forward sweep and a running suffix.
    let mut prefix = 1.0f64;
    for t in 0..d {
        out[t][0] = prefix;
        prefix *= deltas[t];
    }
    let mut suffix = 1.0f64;
    for t in (0..d).rev() {
        let excl = (out[t][0] * suffix).clamp(-1.0, 1.0);
        suffix *= deltas[t];
        let sign = &SIGN[symbols[t].index()];
        for a in 0..4 {
            out[t][a] = 0.25 * (1.0 + s * sign[a] * excl);
        }
    }
}

/// Variable-node update: per-edge exclusive products against the prior,
/// plus the full marginal. Returns (per-edge messages, marginal).
pub fn vn_update(prior: &[f64; 4], incoming: &[[f64; 4]]) -> (Vec<[f64; 4]>, [f64; 4]) {
    let d = incoming.len();
    let mut out = vec![[0.0f64; 4]; d];
    let mut pre = vec![[0.0f64; 4]; d + 1];
    let mut suf = vec![[0.0f64; 4]; d + 1];
    let mut marginal = [0.0f64; 4];
    vn_update_into(prior, incoming, &mut pre, &mut suf, &mut out, &mut marginal);
    (out, marginal)
}

fn vn_update_into(
    prior: &[f64; 4],
    incoming: &[[f64; 4]],
    pre: &mut [[f64; 4]],
    suf: &mut [[f64; 4]],
    out: &mut [[f64; 4]],
    marginal: &mut [f64; 4],
) {
    let d = incoming.len();
    pre[0] = *prior;
    for t in 0..d {
        let mut next = pre[t];
        for a in 0..4 {
            next[a] *= incoming[t][a];
        }
        rescale_step(&mut next);
        pre[t + 1] = next;
    }
    suf[d] = [1.0; 4];
    for t in (0..d).rev() {
        let mut next = suf[t + 1];
        for a in 0..4 {
            next[a] *= incoming[t][a];
        }
        rescale_step(&mut next);
        suf[t] = next;
    }
    for t in 0..d {
        let mut m = pre[t];
        for a in 0..4 {
            m[a] *= suf[t + 1][a];
        }
        finalize(&mut m, prior);
        out[t] = m;
    }
    *marginal = pre[d];
    finalize(marginal, prior);
}

#[derive(Clone, Debug)]
pub struct BpOutcome {
    pub estimate: Vec<Gf4>,
    pub satisfied: bool,
    pub iterations: usize,
}

/// One snapshot per iteration: messages keyed by (check, variable) in
/// check-major edge order, plus the hard decision after the iteration.
#[derive(Default)]
pub struct MessageTrace {
    pub iterations: Vec<TraceIteration>,
}

pub struct TraceIteration {
    pub c2v: Vec<((u32, u32), [f64; 4])>,
    pub v2c: Vec<((u32, u32), [f64; 4])>,
    pub hard_decision: Vec<Gf4>,
}

pub fn bp_decode(
    graph: &DecodingGraph,
    syndrome: &[u8],
    priors: &[[f64; 4]],
    config: &DecoderConfig,
) -> BpOutcome {
    run_bp(graph, syndrome, priors, config, None)
}

pub fn bp_decode_traced(
    graph: &DecodingGraph,
    syndrome: &[u8],
    priors: &[[f64; 4]],
    config: &DecoderConfig,
    trace: &mut MessageTrace,
) -> BpOutcome {
    run_bp(graph, syndrome, priors, config, Some(trace))
}

fn run_bp(
    graph: &DecodingGraph,
    syndrome: &[u8],
    priors: &[[f64; 4]],
    config: &DecoderConfig,
    mut trace: Option<&mut MessageTrace>,
) -> BpOutcome {
    assert_eq!(syndrome.len(), graph.cn_count);
    assert_eq!(priors.len(), graph.vn_count);
    let ne = graph.edge_count();

    let mut v2c: Vec<[f64; 4]> = (0..ne).map(|e| priors[graph.cn_vn[e] as usize]).collect();
    let mut c2v = vec![[0.0f64; 4]; ne];
    let mut deltas = vec![0.0f64; graph.max_cn_degree()];
    let mut pre = vec![[0.0f64; 4]; graph.max_vn_degree + 1];
    let mut suf = vec![[0.0f64; 4]; graph.max_vn_degree + 1];
    let mut gather = vec![[0.0f64; 4]; graph.max_vn_degree];
    let mut scatter = vec![[0.0f64; 4]; graph.max_vn_degree];

    // Iteration zero: hard decision straight from the priors.
    let mut estimate: Vec<Gf4> = priors.iter().map(argmax4).collect();
    if config.early_stop && graph.assignment_matches(&estimate, syndrome) {
        return BpOutcome {
            estimate,
            satisfied: true,
            iterations: 0,
        };
    }

    for iter in 1..=config.max_iterations {
        for j in 0..graph.cn_count {
            let range = graph.cn_range(j);
            let d = range.len();
            let (inc, out) = (&v2c[range.clone()], &mut c2v[range]);
            cn_update_into(&graph.cn_sym[graph.cn_range(j)], syndrome[j], inc, &mut deltas[..d], out);
        }
        for i in 0..graph.vn_count {
            let range = graph.vn_range(i);
            let d = range.len();
            for (t, &e) in graph.vn_edge[range.clone()].iter().enumerate() {
                gather[t] = c2v[e as usize];
            }
            let mut marginal = [0.0f64; 4];
            vn_update_into(
                &priors[i],
                &gather[..d],
                &mut pre[..d + 1],
                &mut suf[..d + 1],
                &mut scatter[..d],
                &mut marginal,
            );
            for (t, &e) in graph.vn_edge[range].iter().enumerate() {
                v2c[e as usize] = scatter[t];
            }
            estimate[i] = argmax4(&marginal);
        }
        if let Some(t) = trace.as_deref_mut() {
            t.iterations.push(TraceIteration {
                c2v: (0..ne)
                    .map(|e| ((edge_cn(graph, e), graph.cn_vn[e]), c2v[e]))
                    .collect(),
                v2c: (0..ne)
                    .map(|e| ((edge_cn(graph, e), graph.cn_vn[e]), v2c[e]))
                    .collect(),
                hard_decision: estimate.clone(),
            });
        }
        if config.early_stop && graph.assignment_matches(&estimate, syndrome) {
            return BpOutcome {
                estimate,
                satisfied: true,
                iterations: iter,
            };
        }
    }
    let satisfied = graph.assignment_matches(&estimate, syndrome);
    BpOutcome {
        estimate,
        satisfied,
        iterations: config.max_iterations,
    }
}

fn edge_cn(graph: &DecodingGraph, e: usize) -> u32 {
    // Binary search over the check offsets.
    match graph.cn_start.binary_search(&(e as u32)) {
        Ok(mut j) => {
            // Skip empty checks that share the offset.
            while graph.cn_start[j + 1] as usize == e {
                j += 1;
            }
            j as u32
        }
        Err(j) => (j - 1) as u32,
    }
}

impl DecodingGraph {
    fn max_cn_degree(&self) -> usize {
        (0..self.cn_count).map(|j| self.cn_range(j).len()).max().unwrap_or(0)
    }
}

/// One decimated decoding path: the appended qubit is fixed to `guess`,
/// its edges are gone, and the syndrome is re-targeted accordingly.
#[derive(Clone, Debug)]
pub struct PathOutcome {
    pub guess: Gf4,
    /// Full-length estimate with the guess written on the last qubit.
    pub estimate: Vec<Gf4>,
    pub satisfied: bool,
    pub iterations: usize,
}

/// Ensemble outcome over the four guesses, in canonical symbol order.
#[derive(Clone, Debug)]
pub struct EnsembleOutcome {
    pub paths: Vec<PathOutcome>,
    /// Index of the lightest satisfying path, if any.
    pub chosen: Option<usize>,
}

impl EnsembleOutcome {
    pub fn is_failure(&self) -> bool {
        self.chosen.is_none()
    }

    pub fn chosen_estimate(&self) -> Option<&[Gf4]> {
        self.chosen.map(|i| self.paths[i].estimate.as_slice())
    }
}

/// Ensemble decoder state for one code: the reduced graph plus the
/// bookkeeping needed to redirect syndromes per guess.
pub struct CamelDecoder {
    reduced: DecodingGraph,
    m_x: usize,
}

impl CamelDecoder {
    pub fn new(code: &CssCode) -> CamelDecoder {
        CamelDecoder {
            reduced: DecodingGraph::reduced(code),
            m_x: code.m_x(),
        }
    }

    pub fn reduced_graph(&self) -> &DecodingGraph {
        &self.reduced
    }

    /// Syndrome seen by the reduced graph when the appended qubit is
    /// assumed to hold `guess`: every X row carries omega there and every
    /// Z row omega_bar, so the adjustment is one trace product per block.
    pub fn adjusted_syndrome(&self, syndrome: &[u8], guess: Gf4) -> Vec<u8> {
        let flip_x = guess.trace_inner_product(Gf4::OMEGA);
        let flip_z = guess.trace_inner_product(Gf4::OMEGA_BAR);
        syndrome
            .iter()
            .enumerate()
            .map(|(j, &z)| z ^ if j < self.m_x { flip_x } else { flip_z })
            .collect()
    }

    pub fn decode_path(
        &self,
        syndrome: &[u8],
        eps: f64,
        guess: Gf4,
        config: &DecoderConfig,
    ) -> PathOutcome {
        let adjusted = self.adjusted_syndrome(syndrome, guess);
        let priors = vec![depolarizing_prior(eps); self.reduced.vn_count()];
        let out = bp_decode(&self.reduced, &adjusted, &priors, config);
        let mut estimate = out.estimate;
        estimate.push(guess);
        PathOutcome {
            guess,
            estimate,
            satisfied: out.satisfied,
            iterations: out.iterations,
        }
    }

    /// Run all four guesses and pick the lightest satisfying estimate;
    /// ties go to the earlier guess in canonical order.
    pub fn decode(&self, syndrome: &[u8], eps: f64, config: &DecoderConfig) -> EnsembleOutcome {
        let paths: Vec<PathOutcome> = Gf4::ALL
            .iter()
            .map(|&guess| self.decode_path(syndrome, eps, guess, config))
            .collect();
        let chosen = paths
            .iter()
            .enumerate()
            .filter(|(_, p)| p.satisfied)
            .min_by_key(|(idx, p)| (error_weight(&p.estimate), *idx))
            .map(|(idx, _)| idx);
        EnsembleOutcome { paths, chosen }
    }
}
