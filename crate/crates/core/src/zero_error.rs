//! Zero-error machinery: confusability graphs, exact independence numbers,
//! graph powers, and the quantum independence number of a channel.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{Channel, KrausChannel};
use crate::error::{arg, Error, Result};
use crate::linalg::{self, c, tol, ComplexMatrix, DensityMatrix, PureState, C64, MAX_DIM};
use crate::seed;

/// Default vertex cap for the exact independence-number solver.
pub const EXACT_CAP: usize = 64;

/// Simple undirected graph stored as adjacency bitsets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<RawGraph> for Graph {
    type Error = Error;
    fn try_from(raw: RawGraph) -> Result<Self> {
        for (i, e) in raw.edges.iter().enumerate() {
            if e[0] >= raw.n || e[1] >= raw.n {
                return Err(Error::Schema {
                    path: format!("edges[{i}]"),
                    message: format!("vertex index out of range for n = {}", raw.n),
                });
            }
            if e[0] == e[1] {
                return Err(Error::Schema { path: format!("edges[{i}]"), message: "self-loop".into() });
            }
        }
        Graph::new(raw.n, raw.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<Graph> for RawGraph {
    fn from(g: Graph) -> Self {
        RawGraph { n: g.n, edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect() }
    }
}

fn words(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return arg(format!("edge ({u}, {v}) out of range for n = {n}"));
            }
            if u == v {
                return arg(format!("self-loop at vertex {u}"));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        Graph { n, adj: vec![vec![0; words(n)]; n] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::empty(n);
        if n >= 3 {
            for u in 0..n {
                g.add_edge(u, (u + 1) % n);
            }
        } else if n == 2 {
            g.add_edge(0, 1);
        }
        g
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u][v / 64] |= 1 << (v % 64);
        self.adj[v][u / 64] |= 1 << (u % 64);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u][v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    /// Sorted `(u, v)` pairs with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| {
            u < self.n && set[i + 1..].iter().all(|&v| v != u && !self.has_edge(u, v))
        })
    }
}

/// Discrete memoryless channel given by its transition matrix `p[x][y] = p(y|x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawClassical", into = "RawClassical")]
pub struct ClassicalChannel {
    p: Vec<Vec<f64>>,
    outputs: usize,
}

#[derive(Serialize, Deserialize)]
struct RawClassical {
    inputs: usize,
    outputs: usize,
    p: Vec<Vec<f64>>,
}

impl TryFrom<RawClassical> for ClassicalChannel {
    type Error = Error;
    fn try_from(raw: RawClassical) -> Result<Self> {
        if raw.p.len() != raw.inputs {
            return Err(Error::Schema {
                path: "p".into(),
                message: format!("{} rows for {} inputs", raw.p.len(), raw.inputs),
            });
        }
        for (x, row) in raw.p.iter().enumerate() {
            if row.len() != raw.outputs {
                return Err(Error::Schema {
                    path: format!("p[{x}]"),
                    message: format!("{} entries for {} outputs", row.len(), raw.outputs),
                });
            }
        }
        ClassicalChannel::new(raw.p).map_err(|e| match e {
            Error::Argument(m) => Error::Schema { path: "p".into(), message: m },
            other => other,
        })
    }
}

impl From<ClassicalChannel> for RawClassical {
    fn from(ch: ClassicalChannel) -> Self {
        RawClassical { inputs: ch.p.len(), outputs: ch.outputs, p: ch.p }
    }
}

impl ClassicalChannel {
    pub fn new(p: Vec<Vec<f64>>) -> Result<Self> {
        let Some(outputs) = p.first().map(Vec::len) else {
            return arg("channel needs at least one input");
        };
        if outputs == 0 {
            return arg("channel needs at least one output");
        }
        for (x, row) in p.iter().enumerate() {
            if row.len() != outputs {
                return arg(format!("row {x} has {} entries, expected {outputs}", row.len()));
            }
            if row.iter().any(|&v| !v.is_finite() || v < 0.0) {
                return arg(format!("row {x} has a negative or non-finite entry"));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > tol::ALGEBRAIC {
                return arg(format!("row {x} sums to {s}"));
            }
        }
        Ok(ClassicalChannel { p, outputs })
    }

    pub fn identity(n: usize) -> Self {
        let p = (0..n).map(|x| (0..n).map(|y| f64::from(u8::from(x == y))).collect()).collect();
        ClassicalChannel { p, outputs: n }
    }

    pub fn inputs(&self) -> usize {
        self.p.len()
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.p
    }

    pub fn prob(&self, x: usize, y: usize) -> f64 {
        self.p[x][y]
    }
}

/// Inputs `x != x'` are adjacent iff some output has `p(y|x) p(y|x') > threshold`.
pub fn confusability_graph(ch: &ClassicalChannel, threshold: f64) -> Graph {
    let n = ch.inputs();
    let mut g = Graph::empty(n);
    for x in 0..n {
        for x2 in x + 1..n {
            if (0..ch.outputs()).any(|y| ch.prob(x, y) * ch.prob(x2, y) > threshold) {
                g.add_edge(x, x2);
            }
        }
    }
    g
}

/// Strong product: vertex `(v, u)` has index `v * h.n() + u`.
pub fn graph_tensor_product(g: &Graph, h: &Graph) -> Result<Graph> {
    let n = g
        .n
        .checked_mul(h.n)
        .filter(|&n| n <= MAX_DIM)
        .ok_or(Error::Capacity { dim: g.n.saturating_mul(h.n), cap: MAX_DIM })?;
    let close = |gr: &Graph, a: usize, b: usize| a == b || gr.has_edge(a, b);
    let mut out = Graph::empty(n);
    for a in 0..n {
        for b in a + 1..n {
            let (v1, u1) = (a / h.n, a % h.n);
            let (v2, u2) = (b / h.n, b % h.n);
            if close(g, v1, v2) && close(h, u1, u2) {
                out.add_edge(a, b);
            }
        }
    }
    Ok(out)
}

pub fn graph_power(g: &Graph, t: usize) -> Result<Graph> {
    if t == 0 {
        return Ok(Graph::empty(1));
    }
    let mut acc = g.clone();
    for _ in 1..t {
        acc = graph_tensor_product(&acc, g)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Independence {
    pub alpha: usize,
    /// Sorted vertex indices.
    pub witness: Vec<usize>,
    /// `false` when produced by the heuristic (a lower bound only).
    pub certified: bool,
}

/// Exact maximum independent set for graphs up to [`EXACT_CAP`] vertices.
pub fn independence_number(g: &Graph) -> Result<Independence> {
    independence_number_capped(g, EXACT_CAP)
}

pub fn independence_number_capped(g: &Graph, cap: usize) -> Result<Independence> {
    let cap = cap.min(64);
    if g.n > cap {
        return Err(Error::Capacity { dim: g.n, cap });
    }
    if g.n == 0 {
        return Ok(Independence { alpha: 0, witness: vec![], certified: true });
    }
    // Max clique in the complement, vertices relabelled by descending
    // complement degree (ties: lowest original index).
    let n = g.n;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (g.degree(v), v));
    let mut cadj = vec![0u64; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && !g.has_edge(order[i], order[j]) {
                cadj[i] |= 1 << j;
            }
        }
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let alpha = max_clique(&cadj, all);
    // Lexicographically smallest maximum set: include each vertex in index
    // order whenever a maximum set is still reachable.
    let rank: Vec<usize> = {
        let mut r = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            r[v] = i;
        }
        r
    };
    let mut witness = Vec::with_capacity(alpha as usize);
    let mut cand = all;
    for v in 0..n {
        let bit = 1u64 << rank[v];
        if cand & bit == 0 {
            continue;
        }
        let rest = cand & cadj[rank[v]];
        let need = alpha - witness.len() as u32 - 1;
        if need == 0 || max_clique(&cadj, rest) >= need {
            witness.push(v);
            cand = rest;
            if need == 0 {
                break;
            }
        } else {
            cand &= !bit;
        }
    }
    Ok(Independence { alpha: witness.len(), witness, certified: true })
}

fn max_clique(adj: &[u64], cand: u64) -> u32 {
    if cand == 0 {
        return 0;
    }
    let mut search = CliqueSearch { adj, best: 0, best_len: 0 };
    search.expand(cand, 0, 0);
    search.best_len
}

struct CliqueSearch<'a> {
    adj: &'a [u64],
    best: u64,
    best_len: u32,
}

impl CliqueSearch<'_> {
    fn expand(&mut self, mut cand: u64, current: u64, depth: u32) {
        let (verts, bounds) = self.color(cand);
        for idx in (0..verts.len()).rev() {
            if depth + bounds[idx] <= self.best_len {
                return;
            }
            let v = verts[idx];
            let next = current | 1 << v;
            let sub = cand & self.adj[v];
            if sub == 0 {
                if depth + 1 > self.best_len {
                    self.best_len = depth + 1;
                    self.best = next;
                }
            } else {
                self.expand(sub, next, depth + 1);
            }
            cand &= !(1 << v);
        }
    }

    /// Greedy sequential colouring; `bounds[i]` is the colour count up to `verts[i]`.
    fn color(&self, cand: u64) -> (Vec<usize>, Vec<u32>) {
        let mut verts = Vec::with_capacity(cand.count_ones() as usize);
        let mut bounds = Vec::with_capacity(verts.capacity());
        let mut uncolored = cand;
        let mut color = 0;
        while uncolored != 0 {
            color += 1;
            let mut avail = uncolored;
            while avail != 0 {
                let v = avail.trailing_zeros() as usize;
                verts.push(v);
                bounds.push(color);
                uncolored &= !(1 << v);
                avail &= !(1 << v) & !self.adj[v];
            }
        }
        (verts, bounds)
    }
}

/// Greedy minimum-degree independent set; any size, lower bound only.
pub fn independence_number_heuristic(g: &Graph) -> Independence {
    let mut alive = vec![true; g.n];
    let mut witness = Vec::new();
    loop {
        let pick = (0..g.n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| ((0..g.n).filter(|&u| alive[u] && g.has_edge(v, u)).count(), v));
        let Some(v) = pick else { break };
        witness.push(v);
        alive[v] = false;
        for u in 0..g.n {
            if g.has_edge(v, u) {
                alive[u] = false;
            }
        }
    }
    witness.sort_unstable();
    Independence { alpha: witness.len(), witness, certified: false }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerBound {
    pub power: usize,
    pub alpha: usize,
    /// `alpha^(1/power)`.
    pub bound: f64,
}

/// `alpha(G^t)^(1/t)` for `t = 1..=max_power`, each a lower bound on the Shannon capacity.
pub fn shannon_capacity_lower_bound(g: &Graph, max_power: usize) -> Result<Vec<PowerBound>> {
    if max_power == 0 {
        return arg("max_power must be at least 1");
    }
    let mut size = 1usize;
    for _ in 0..max_power {
        size = size.saturating_mul(g.n);
    }
    if size > EXACT_CAP {
        return Err(Error::Capacity { dim: size, cap: EXACT_CAP });
    }
    let mut out = Vec::with_capacity(max_power);
    let mut power = g.clone();
    for t in 1..=max_power {
        if t > 1 {
            power = graph_tensor_product(&power, g)?;
        }
        let alpha = independence_number(&power)?.alpha;
        out.push(PowerBound { power: t, alpha, bound: (alpha as f64).powf(1.0 / t as f64) });
    }
    Ok(out)
}

/// Pure input states claimed to be perfectly distinguishable after the channel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaCertificate {
    pub states: Vec<PureState>,
    /// For search output: `sum_{i<j} tr(Phi(psi_i) Phi(psi_j))`.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateCheck {
    /// `max_{i != j, k, l} |<psi_i| E_k^dagger E_l |psi_j>|`.
    pub residual: f64,
    /// `max_{i != j} tr(Phi(psi_i) Phi(psi_j))`.
    pub max_output_overlap: f64,
    pub pass: bool,
}

pub fn alpha_certificate_check(ch: &KrausChannel, cert: &AlphaCertificate, tol: f64) -> Result<CertificateCheck> {
    let d = ch.dim_in();
    if let Some(bad) = cert.states.iter().find(|s| s.dim() != d) {
        return arg(format!("certificate state has dim {}, channel input is {d}", bad.dim()));
    }
    // E_l |psi_j> for every (l, j).
    let images: Vec<Vec<_>> = cert
        .states
        .iter()
        .map(|s| ch.kraus().iter().map(|e| e.apply_vec(s.as_na())).collect())
        .collect();
    let mut residual = 0.0f64;
    let mut overlap = 0.0f64;
    for i in 0..images.len() {
        for j in 0..images.len() {
            if i == j {
                continue;
            }
            let mut sum = 0.0;
            for a in &images[i] {
                for b in &images[j] {
                    let z = a.dotc(b).norm();
                    residual = residual.max(z);
                    sum += z * z;
                }
            }
            overlap = overlap.max(sum);
        }
    }
    Ok(CertificateCheck { residual, max_output_overlap: overlap, pass: residual <= tol })
}

fn pair_overlap(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    // tr(AB) for Hermitian A, B.
    let (a, b) = (a.as_na(), b.as_na());
    let mut acc = 0.0;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    acc
}

fn overlap_sum(outputs: &[ComplexMatrix]) -> f64 {
    let mut s = 0.0;
    for i in 0..outputs.len() {
        for j in i + 1..outputs.len() {
            s += pair_overlap(&outputs[i], &outputs[j]);
        }
    }
    s.max(0.0)
}

const ALPHA_SWEEPS: usize = 300;

/// Multistart block-coordinate search for `k` pure inputs with orthogonal outputs.
///
/// Each sweep replaces `psi_i` by a lowest eigenvector of
/// `sum_{j != i} Phi^dagger(Phi(psi_j))`, which never increases the overlap sum.
pub fn alpha_search(ch: &Channel, k: usize, restarts: usize, seed: u64) -> Result<AlphaCertificate> {
    let d = ch.dim_in();
    if d > 16 {
        return Err(Error::Capacity { dim: d, cap: 16 });
    }
    if k == 0 || restarts == 0 {
        return arg("alpha_search needs k >= 1 and restarts >= 1");
    }
    let runs: Vec<(f64, usize, Vec<PureState>)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = seed::rng(seed, r as u64);
            let mut states: Vec<PureState> = (0..k).map(|_| linalg::random::pure_state(d, &mut rng)).collect();
            let mut outs: Vec<ComplexMatrix> = states.iter().map(|s| ch.apply_pure_unchecked(s)).collect();
            let mut value = overlap_sum(&outs);
            for _ in 0..ALPHA_SWEEPS {
                if value < 1e-15 {
                    break;
                }
                for i in 0..k {
                    let mut field = ComplexMatrix::zeros(ch.dim_out(), ch.dim_out());
                    for (j, o) in outs.iter().enumerate() {
                        if j != i {
                            field = &field + o;
                        }
                    }
                    let back = ch.adjoint_apply_unchecked(&field).hermitian_part();
                    let (_, vecs) = linalg::eigh_blocked(back.as_na());
                    states[i] = PureState::from_na_normalizing(vecs.column(0).into_owned());
                    outs[i] = ch.apply_pure_unchecked(&states[i]);
                }
                let next = overlap_sum(&outs);
                let stalled = value - next <= 1e-13 * value.max(1e-300);
                value = next;
                if stalled {
                    break;
                }
            }
            (value, r, states)
        })
        .collect();
    let (residual, _, states) = runs
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .expect("restarts >= 1");
    Ok(AlphaCertificate { states, residual })
}

/// `tr(S Phi(rho_i) (x) Phi(rho_j))` for one pair, via the swap trick when it fits.
fn swap_pair(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let d = a.rows();
    if d * d <= MAX_DIM {
        Ok(linalg::swap_expectation(&linalg::tensor(a, b)?, d)?.re)
    } else {
        Ok(pair_overlap(a, b))
    }
}

/// Score of a product witness: sum over unordered pairs `i < j`.
pub fn clique_score(ch: &Channel, states: &[DensityMatrix]) -> Result<f64> {
    let outs = states.iter().map(|s| ch.apply(s).map(DensityMatrix::into_matrix)).collect::<Result<Vec<_>>>()?;
    let mut total = 0.0;
    for i in 0..outs.len() {
        for j in i + 1..outs.len() {
            total += swap_pair(&outs[i], &outs[j])?;
        }
    }
    Ok(total)
}

/// Reduced state of parties `(i, j)` of a `k`-party state with local dimension `d`.
pub fn pair_marginal(joint: &DensityMatrix, d: usize, k: usize, i: usize, j: usize) -> Result<DensityMatrix> {
    if i == j || i >= k || j >= k {
        return arg(format!("bad pair ({i}, {j}) for {k} parties"));
    }
    if d.checked_pow(k as u32) != Some(joint.dim()) {
        return arg(format!("joint state of dim {} is not {d}^{k}", joint.dim()));
    }
    let m = joint.matrix();
    let place = |x: usize| d.pow((k - 1 - x) as u32);
    let (pi, pj) = (place(i), place(j));
    let rest = d.pow(k as u32 - 2);
    // Enumerate the other parties' digits by skipping positions i and j.
    let others: Vec<usize> = (0..rest)
        .map(|mut r| {
            let mut idx = 0;
            for x in (0..k).rev() {
                if x == i || x == j {
                    continue;
                }
                idx += (r % d) * place(x);
                r /= d;
            }
            idx
        })
        .collect();
    let mut out = ComplexMatrix::zeros(d * d, d * d).into_na();
    for a in 0..d {
        for b in 0..d {
            for a2 in 0..d {
                for b2 in 0..d {
                    let mut acc: C64 = c(0.0, 0.0);
                    for &o in &others {
                        acc += m[(o + a * pi + b * pj, o + a2 * pi + b2 * pj)];
                    }
                    out[(a * d + b, a2 * d + b2)] = acc;
                }
            }
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(ComplexMatrix::from_na(out)))
}

/// Score of a possibly entangled `k`-party witness, using reduced pairwise marginals.
pub fn clique_score_joint(ch: &Channel, joint: &DensityMatrix, k: usize) -> Result<f64> {
    let d = ch.dim_in();
    let mut total = 0.0;
    for i in 0..k {
        for j in i + 1..k {
            let pair = pair_marginal(joint, d, k, i, j)?;
            let out = ch.tensor_square_apply(&pair)?;
            total += linalg::swap_expectation(out.matrix(), ch.dim_out())?.re;
        }
    }
    Ok(total)
}

/// Clique instance: yes if some witness scores at most `a`, no if all score at least `b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawClique")]
pub struct CliqueInstance {
    pub channel: Channel,
    pub k: usize,
    pub a: f64,
    pub b: f64,
}

#[derive(Deserialize)]
struct RawClique {
    channel: Channel,
    k: usize,
    a: f64,
    b: f64,
}

impl TryFrom<RawClique> for CliqueInstance {
    type Error = Error;
    fn try_from(raw: RawClique) -> Result<Self> {
        CliqueInstance::new(raw.channel, raw.k, raw.a, raw.b)
    }
}

impl CliqueInstance {
    pub fn new(channel: Channel, k: usize, a: f64, b: f64) -> Result<Self> {
        if !(0.0 <= a && a < b) {
            return Err(Error::Invariant(format!("clique thresholds need 0 <= a < b, got a = {a}, b = {b}")));
        }
        if !channel.is_measure_prepare() {
            return Err(Error::Invariant("clique instance needs an entanglement-breaking channel".into()));
        }
        Ok(CliqueInstance { channel, k, a, b })
    }
}
