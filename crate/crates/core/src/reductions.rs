//! Executable reductions: local Hamiltonian and quantum SAT to the quantum
//! clique problem, 2-out-of-4-SAT to minimum output entropy, and minimum
//! entropy to Holevo capacity through the covariant lift. Each source problem
//! has an exact oracle, and [`verify_gap`] runs both sides and records a verdict.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::{self, LiftReport, Payload};
use crate::channels::{
    self, build_cube_channel, build_h_channel, build_swap_channel, build_trace_channel, orthomix,
    Channel, MeasPrepChannel,
};
use crate::doc;
use crate::error::{arg, Error, Result};
use crate::linalg::{self, c, tol, ComplexMatrix, PureState, C64};
use crate::seed;
use crate::zero_error::{alpha_search, CliqueInstance};

pub const LOCALHAM_MAX_QUBITS: usize = 12;
pub const CLIQUE_MAX_QUBITS: usize = 10;
pub const SAT24_MAX_VARS: usize = 24;
pub const SAT24_CHANNEL_MAX_VARS: usize = 5;
/// Slack used when comparing estimates against theorem thresholds.
pub const VERDICT_TOL: f64 = 1e-6;

/// A Hermitian operator acting on the listed qubits; the first listed qubit is
/// the most significant index of `matrix`. Qubit 0 is the most significant
/// qubit of the full register.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalTerm {
    pub support: Vec<usize>,
    pub matrix: ComplexMatrix,
}

fn schema<T>(path: impl Into<String>, message: impl Into<String>) -> Result<T> {
    Err(Error::Schema { path: path.into(), message: message.into() })
}

fn check_term(t: &LocalTerm, qubits: usize, max_support: usize, path: &str) -> Result<()> {
    let k = t.support.len();
    if k == 0 || k > max_support {
        return schema(format!("{path}.support"), format!("support size must be in 1..={max_support}"));
    }
    for (i, &q) in t.support.iter().enumerate() {
        if q >= qubits {
            return schema(format!("{path}.support"), format!("qubit {q} out of range for {qubits} qubits"));
        }
        if t.support[..i].contains(&q) {
            return schema(format!("{path}.support"), format!("repeated qubit {q}"));
        }
    }
    if t.matrix.rows() != 1 << k || !t.matrix.is_square() {
        return schema(format!("{path}.matrix"), format!("expected a {0}x{0} matrix", 1 << k));
    }
    if !t.matrix.is_hermitian(tol::ALGEBRAIC) {
        return schema(format!("{path}.matrix"), "not Hermitian");
    }
    Ok(())
}

/// `sum_i term_i (x) I` on `qubits` qubits.
fn embed_sum(terms: &[LocalTerm], qubits: usize) -> ComplexMatrix {
    let dim = 1usize << qubits;
    let mut out = nalgebra::DMatrix::<C64>::zeros(dim, dim);
    for t in terms {
        let k = t.support.len();
        let shifts: Vec<usize> = t.support.iter().map(|&q| qubits - 1 - q).collect();
        let mask: usize = shifts.iter().map(|s| 1 << s).sum();
        let place = |local: usize| -> usize {
            (0..k).filter(|&j| local >> (k - 1 - j) & 1 == 1).map(|j| 1 << shifts[j]).sum()
        };
        let spread: Vec<usize> = (0..1 << k).map(place).collect();
        for row in 0..dim {
            let local_r = (0..k).fold(0, |acc, j| acc << 1 | (row >> shifts[j] & 1));
            let base = row & !mask;
            for (local_c, &bits) in spread.iter().enumerate() {
                let v = t.matrix[(local_r, local_c)];
                if v != c(0.0, 0.0) {
                    out[(row, base | bits)] += v;
                }
            }
        }
    }
    ComplexMatrix::from_na(out)
}

/// Local Hamiltonian instance: yes if `lambda_min(sum H_i) <= a`, no if `>= b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLocalHam")]
pub struct LocalHamInstance {
    pub qubits: usize,
    pub terms: Vec<LocalTerm>,
    pub a: f64,
    pub b: f64,
}

#[derive(Deserialize)]
struct RawLocalHam {
    qubits: usize,
    terms: Vec<LocalTerm>,
    a: f64,
    b: f64,
}

impl TryFrom<RawLocalHam> for LocalHamInstance {
    type Error = Error;
    fn try_from(r: RawLocalHam) -> Result<Self> {
        LocalHamInstance::new(r.qubits, r.terms, r.a, r.b)
    }
}

impl LocalHamInstance {
    pub fn new(qubits: usize, terms: Vec<LocalTerm>, a: f64, b: f64) -> Result<Self> {
        if qubits == 0 || qubits > LOCALHAM_MAX_QUBITS {
            return schema("qubits", format!("qubit count must be in 1..={LOCALHAM_MAX_QUBITS}"));
        }
        if !(0.0 <= a && a < b) {
            return schema("b", format!("thresholds need 0 <= a < b, got a = {a}, b = {b}"));
        }
        for (i, t) in terms.iter().enumerate() {
            let path = format!("terms[{i}]");
            check_term(t, qubits, qubits, &path)?;
            let spec = linalg::hermitian_spectrum(t.matrix.hermitian_part().as_na());
            if spec[0] < -tol::ALGEBRAIC {
                return schema(format!("{path}.matrix"), format!("not positive semidefinite (eigenvalue {})", spec[0]));
            }
            if spec[spec.len() - 1] > 1.0 + tol::ALGEBRAIC {
                return schema(format!("{path}.matrix"), format!("norm {} exceeds 1", spec[spec.len() - 1]));
            }
        }
        Ok(LocalHamInstance { qubits, terms, a, b })
    }

    /// Full `2^n x 2^n` Hamiltonian.
    pub fn hamiltonian(&self) -> ComplexMatrix {
        embed_sum(&self.terms, self.qubits)
    }

    /// Normalization `s` (term count, at least 1).
    pub fn scale(&self) -> usize {
        self.terms.len().max(1)
    }
}

/// Quantum SAT instance: satisfiable if a common zero-energy state exists,
/// no instance if every state has energy at least `epsilon`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawQSat")]
pub struct QSatInstance {
    pub qubits: usize,
    pub projections: Vec<LocalTerm>,
    pub epsilon: f64,
}

#[derive(Deserialize)]
struct RawQSat {
    qubits: usize,
    projections: Vec<LocalTerm>,
    epsilon: f64,
}

impl TryFrom<RawQSat> for QSatInstance {
    type Error = Error;
    fn try_from(r: RawQSat) -> Result<Self> {
        QSatInstance::new(r.qubits, r.projections, r.epsilon)
    }
}

impl QSatInstance {
    pub fn new(qubits: usize, projections: Vec<LocalTerm>, epsilon: f64) -> Result<Self> {
        if qubits == 0 || qubits > LOCALHAM_MAX_QUBITS {
            return schema("qubits", format!("qubit count must be in 1..={LOCALHAM_MAX_QUBITS}"));
        }
        if !(epsilon > 0.0) {
            return schema("epsilon", "epsilon must be positive");
        }
        for (i, p) in projections.iter().enumerate() {
            let path = format!("projections[{i}]");
            check_term(p, qubits, 4, &path)?;
            if (&p.matrix * &p.matrix).max_abs_diff(&p.matrix) > tol::SPECTRAL {
                return schema(format!("{path}.matrix"), "not a projector");
            }
        }
        Ok(QSatInstance { qubits, projections, epsilon })
    }

    pub fn projector_sum(&self) -> ComplexMatrix {
        embed_sum(&self.projections, self.qubits)
    }

    pub fn scale(&self) -> usize {
        self.projections.len().max(1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub vars: [usize; 4],
    pub signs: [i8; 4],
}

/// 2-out-of-4-SAT: `x in {+1,-1}^n` with `sum_j signs_j x_{vars_j} = 0` for every clause.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSat24")]
pub struct Sat24Instance {
    pub n: usize,
    pub clauses: Vec<Clause>,
}

#[derive(Deserialize)]
struct RawSat24 {
    n: usize,
    clauses: Vec<Clause>,
}

impl TryFrom<RawSat24> for Sat24Instance {
    type Error = Error;
    fn try_from(r: RawSat24) -> Result<Self> {
        Sat24Instance::new(r.n, r.clauses)
    }
}

impl Sat24Instance {
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self> {
        if n == 0 || n > SAT24_MAX_VARS {
            return schema("n", format!("variable count must be in 1..={SAT24_MAX_VARS}"));
        }
        for (k, cl) in clauses.iter().enumerate() {
            for (j, &v) in cl.vars.iter().enumerate() {
                if v >= n {
                    return schema(format!("clauses[{k}].vars"), format!("variable {v} out of range"));
                }
                if cl.vars[..j].contains(&v) {
                    return schema(format!("clauses[{k}].vars"), format!("repeated variable {v}"));
                }
            }
            if cl.signs.iter().any(|&s| s != 1 && s != -1) {
                return schema(format!("clauses[{k}].signs"), "signs must be +1 or -1");
            }
        }
        Ok(Sat24Instance { n, clauses })
    }

    /// Unit vector with entries `sign/2` on the clause's variables.
    pub fn clause_vector(&self, k: usize) -> PureState {
        let cl = &self.clauses[k];
        let mut v = vec![c(0.0, 0.0); self.n];
        for (&var, &s) in cl.vars.iter().zip(&cl.signs) {
            v[var] = c(f64::from(s) / 2.0, 0.0);
        }
        PureState::new(v).expect("four entries of magnitude 1/2")
    }

    /// `(1/m) sum_k |A_k><A_k| (x) |A_k><A_k|`, zero when there are no clauses.
    pub fn penalty(&self) -> Result<ComplexMatrix> {
        let n = self.n;
        let mut h = ComplexMatrix::zeros(n * n, n * n);
        let m = self.clauses.len();
        for k in 0..m {
            let a = self.clause_vector(k);
            let aa = a.tensor(&a)?;
            h = &h + &ComplexMatrix::outer(&aa, &aa).scale_re(1.0 / m as f64);
        }
        Ok(h)
    }
}

/// `sum_i x_i |i> / sqrt n` for a sign vector.
pub fn assignment_state(x: &[i8]) -> PureState {
    let s = (x.len() as f64).sqrt();
    PureState::new(x.iter().map(|&v| c(f64::from(v) / s, 0.0)).collect()).expect("unit norm")
}

fn clause_sum(cl: &Clause, x: &[i8]) -> i64 {
    cl.vars.iter().zip(&cl.signs).map(|(&v, &s)| i64::from(s) * i64::from(x[v])).sum()
}

fn lambda_min_with_vector(m: &ComplexMatrix) -> Result<(f64, PureState)> {
    let e = linalg::eig_hermitian(m)?;
    Ok((e.values[0], e.vector(0)))
}

/// Smallest eigenvalue of the instance's Hamiltonian.
pub fn localham_min_eig(inst: &LocalHamInstance) -> Result<f64> {
    Ok(localham_ground_state(inst)?.0)
}

pub fn localham_ground_state(inst: &LocalHamInstance) -> Result<(f64, PureState)> {
    lambda_min_with_vector(&inst.hamiltonian())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QSatSolution {
    pub satisfiable: bool,
    pub energy: f64,
}

/// Exact: `energy = lambda_min(sum Pi_i)`, satisfiable iff `energy <= 1e-9`.
pub fn qsat_satisfiable(inst: &QSatInstance) -> Result<QSatSolution> {
    let energy = linalg::hermitian_spectrum(inst.projector_sum().as_na())[0];
    Ok(QSatSolution { satisfiable: energy <= tol::SPECTRAL, energy })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sat24Solution {
    pub satisfiable: bool,
    /// `min_x sum_k <A_k|psi_x>^2`.
    pub best_violation: f64,
    /// A minimizing sign vector (satisfying when `satisfiable`), with `x_0 = +1`.
    pub assignment: Vec<i8>,
}

/// Exhaustive search over sign vectors up to global sign.
pub fn sat24_brute_force(inst: &Sat24Instance) -> Sat24Solution {
    let n = inst.n;
    let decode = |bits: u64| -> Vec<i8> {
        (0..n).map(|i| if i > 0 && bits >> (i - 1) & 1 == 1 { -1 } else { 1 }).collect()
    };
    let (total, bits) = (0..1u64 << (n - 1))
        .into_par_iter()
        .map(|bits| {
            let x = decode(bits);
            let t: i64 = inst.clauses.iter().map(|cl| clause_sum(cl, &x).pow(2)).sum();
            (t, bits)
        })
        .min()
        .expect("at least one assignment");
    Sat24Solution {
        satisfiable: total == 0,
        best_violation: total as f64 / (4 * n) as f64,
        assignment: decode(bits),
    }
}

/// Measure-and-prepare channel on `dim * 2` inputs (ancilla qubit last) with
/// POVM `{P/s (x) I, M (x) |0><0|, M (x) |1><1|}`, `M = I - P/s`, preparing
/// `|00>`, `|11>`, `|10>` respectively.
pub fn flagged_penalty_channel(p: &ComplexMatrix, s: usize) -> Result<MeasPrepChannel> {
    let dim = p.rows();
    let scaled = p.scale_re(1.0 / s as f64);
    let m = &ComplexMatrix::identity(dim) - &scaled;
    let proj = |i: usize| PureState::basis(2, i).projector().into_matrix();
    let effects = vec![
        linalg::tensor(&scaled, &ComplexMatrix::identity(2))?,
        linalg::tensor(&m, &proj(0))?,
        linalg::tensor(&m, &proj(1))?,
    ];
    let mut completeness = ComplexMatrix::zeros(2 * dim, 2 * dim);
    for e in &effects {
        completeness = &completeness + e;
    }
    let residual = completeness.max_abs_diff(&ComplexMatrix::identity(2 * dim));
    if residual > tol::SPECTRAL {
        return Err(Error::Construction(format!("POVM completeness residual {residual}")));
    }
    let preps = [0, 3, 2].iter().map(|&i| PureState::basis(4, i).projector()).collect();
    MeasPrepChannel::new(effects, preps)
}

/// `(|psi>|0>, |psi>|1>)`, the witness pair built from a low-energy state.
pub fn flagged_witness_pair(psi: &PureState) -> Result<[PureState; 2]> {
    Ok([psi.tensor(&PureState::basis(2, 0))?, psi.tensor(&PureState::basis(2, 1))?])
}

pub fn ham_to_clique(inst: &LocalHamInstance) -> Result<CliqueInstance> {
    if inst.qubits > CLIQUE_MAX_QUBITS {
        return Err(Error::Capacity { dim: inst.qubits, cap: CLIQUE_MAX_QUBITS });
    }
    let s = inst.scale() as f64;
    let ch = flagged_penalty_channel(&inst.hamiltonian(), inst.scale())?;
    CliqueInstance::new(ch.into(), 2, inst.a * inst.a / (s * s), inst.b * inst.b / (s * s))
}

/// Thresholds `a = 0`, `b = epsilon / s^2` as printed for this reduction.
pub fn qsat_to_clique(inst: &QSatInstance) -> Result<CliqueInstance> {
    if inst.qubits > CLIQUE_MAX_QUBITS {
        return Err(Error::Capacity { dim: inst.qubits, cap: CLIQUE_MAX_QUBITS });
    }
    let s = inst.scale() as f64;
    let ch = flagged_penalty_channel(&inst.projector_sum(), inst.scale())?;
    CliqueInstance::new(ch.into(), 2, 0.0, inst.epsilon / (s * s))
}

fn sat24_parts(inst: &Sat24Instance) -> Result<(Channel, Channel, Channel)> {
    let n = inst.n;
    if n < 2 {
        return arg("the entropy reduction needs at least 2 variables");
    }
    if n > SAT24_CHANNEL_MAX_VARS {
        return Err(Error::Capacity { dim: n, cap: SAT24_CHANNEL_MAX_VARS });
    }
    let flags = (PureState::basis(n * n, 0), PureState::basis(n * n, 1));
    let swap: Channel = build_swap_channel(n).into();
    let cube: Channel = build_cube_channel(n, &flags.0, &flags.1)?.into();
    let pen: Channel = build_h_channel(&inst.penalty()?, 0.5, &flags.0, &flags.1)?.into();
    Ok((swap, cube, pen))
}

/// `1/4 trace (+) 1/4 swap-test (+) 1/4 cube (+) 1/4 clause penalty` on `C^n (x) C^n`.
/// Its minimum output entropy is 2 iff the instance is satisfiable.
pub fn sat24_to_minentropy(inst: &Sat24Instance) -> Result<Channel> {
    let (swap, cube, pen) = sat24_parts(inst)?;
    let trace: Channel = build_trace_channel(inst.n).into();
    orthomix(vec![(0.25, trace), (0.25, swap), (0.25, cube), (0.25, pen)])
}

/// Variant with the partial trace replaced by its noisy version
/// `rho -> tr_2((1 - eps) I/n^2 + eps rho)`. The minimum becomes
/// [`sat24_eb_target`] instead of 2.
pub fn sat24_to_minentropy_eb(inst: &Sat24Instance, epsilon: f64) -> Result<Channel> {
    let (swap, cube, pen) = sat24_parts(inst)?;
    let trace = channels::build_trace_channel_eb(inst.n, epsilon)?.channel();
    orthomix(vec![(0.25, trace), (0.25, swap), (0.25, cube), (0.25, pen)])
}

/// `2 + H((1 - eps) I/n + eps |phi><phi|) / 4`.
pub fn sat24_eb_target(n: usize, epsilon: f64) -> f64 {
    let low = (1.0 - epsilon) / n as f64;
    let mut spec = vec![low; n];
    spec[0] += epsilon;
    2.0 + linalg::entropy_of_spectrum(&spec) / 4.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftComparison {
    pub lift: Channel,
    pub report: LiftReport,
    /// `|chi_ensemble - (log2 n - H_min)| <= 1e-3`.
    pub pass: bool,
}

pub fn minentropy_to_holevo(ch: &Channel, samples: usize, seed: u64) -> Result<LiftComparison> {
    let report = capacity::lift_capacity_identity_check(ch, samples, seed)?;
    Ok(LiftComparison { lift: capacity::covariant_lift(ch)?, pass: report.residual <= 1e-3, report })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionKind {
    Ham2clique,
    Qsat2clique,
    Sat24entropy,
    LiftHolevo,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum SourceInstance {
    Localham(LocalHamInstance),
    Qsat(QSatInstance),
    Sat24(Sat24Instance),
    Channel(Channel),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    /// Random samples for witness or state search.
    pub samples: usize,
    /// Multistart count for local searches.
    pub restarts: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { samples: capacity::ORACLE_SAMPLES, restarts: capacity::ASCENT_RESTARTS }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    YesConsistent,
    NoConsistent,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub construction: f64,
    pub algebraic: f64,
    pub spectral: f64,
    pub optimizer: f64,
    pub verdict: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            construction: tol::CONSTRUCTION,
            algebraic: tol::ALGEBRAIC,
            spectral: tol::SPECTRAL,
            optimizer: tol::OPTIMIZER,
            verdict: VERDICT_TOL,
        }
    }
}

/// Target-side thresholds: yes instances reach `yes_at_most`, no instances stay at or above `no_at_least`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub yes_at_most: f64,
    pub no_at_least: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SourceResult {
    /// `None` when the instance lies inside the promise gap.
    pub yes: Option<bool>,
    /// Ground energy, SAT energy, best violation, or minimum entropy, by reduction.
    pub value: f64,
    pub oracle: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetResult {
    /// Best (lowest) value found by any method.
    pub value: f64,
    /// Value of the search alone, without the source witness.
    pub search_value: f64,
    /// Value at the witness constructed from the source oracle, when one exists.
    pub constructed_value: Option<f64>,
    pub estimator: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    States(Vec<PureState>),
    Lift(LiftReport),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub reduction: ReductionKind,
    pub tool_version: String,
    /// SHA-256 of the canonical JSON of `instance`.
    pub instance_digest: String,
    pub instance: SourceInstance,
    pub seed: u64,
    pub budgets: Budgets,
    pub tolerances: Tolerances,
    pub thresholds: Thresholds,
    pub source: SourceResult,
    pub target: TargetResult,
    /// Attached whenever the target estimate contradicts the theorem direction.
    pub witness: Option<Witness>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
    pub channel: Channel,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyRequest {
    pub reduction: ReductionKind,
    pub instance: SourceInstance,
    pub seed: u64,
    pub budgets: Budgets,
}

impl ReductionReport {
    /// Request that reproduces this report.
    pub fn request(&self) -> VerifyRequest {
        VerifyRequest {
            reduction: self.reduction,
            instance: self.instance.clone(),
            seed: self.seed,
            budgets: self.budgets,
        }
    }
}

pub fn replay(report: &ReductionReport) -> Result<ReductionReport> {
    verify_gap(&report.request())
}

fn pair_score(ch: &Channel, a: &PureState, b: &PureState) -> f64 {
    let x = ch.apply_pure_unchecked(a);
    let y = ch.apply_pure_unchecked(b);
    (&x * &y).trace().re
}

struct CliqueSearch {
    value: f64,
    states: Vec<PureState>,
    method: String,
}

/// Lowest two-state score found by random product pairs and, when the input is
/// small enough, the alternating search.
fn clique_search(ch: &Channel, budgets: &Budgets, seed: u64) -> Result<CliqueSearch> {
    let d = ch.dim_in();
    let (value, index) = (0..budgets.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed::rng(seed, i as u64);
            let a = linalg::random::pure_state(d, &mut rng);
            let b = linalg::random::pure_state(d, &mut rng);
            (pair_score(ch, &a, &b), i)
        })
        .min_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)))
        .unwrap_or((f64::INFINITY, 0));
    let mut rng = seed::rng(seed, index as u64);
    let sampled = vec![linalg::random::pure_state(d, &mut rng), linalg::random::pure_state(d, &mut rng)];
    let mut best = CliqueSearch { value, states: sampled, method: format!("{} random product pairs", budgets.samples) };
    if d <= 16 && budgets.restarts > 0 {
        let cert = alpha_search(ch, 2, budgets.restarts, seed)?;
        best.method.push_str(&format!(" + alternating search ({} restarts)", budgets.restarts));
        if cert.residual < best.value {
            best.value = cert.residual;
            best.states = cert.states;
        }
    }
    Ok(best)
}

fn digest(instance: &SourceInstance) -> Result<String> {
    use sha2::{Digest, Sha256};
    let text = doc::canonical_json(instance)?;
    let hash = Sha256::digest(text.as_bytes());
    Ok(hash.iter().map(|b| format!("{b:02x}")).collect())
}

struct Outcome {
    thresholds: Thresholds,
    source: SourceResult,
    target: TargetResult,
    witness: Option<Witness>,
    verdict: Verdict,
    notes: Vec<String>,
    channel: Channel,
}

/// Runs the source oracle and the target estimator and classifies the pair.
pub fn verify_gap(req: &VerifyRequest) -> Result<ReductionReport> {
    let out = match (req.reduction, &req.instance) {
        (ReductionKind::Ham2clique, SourceInstance::Localham(inst)) => verify_ham(inst, req)?,
        (ReductionKind::Qsat2clique, SourceInstance::Qsat(inst)) => verify_qsat(inst, req)?,
        (ReductionKind::Sat24entropy, SourceInstance::Sat24(inst)) => verify_sat24(inst, req)?,
        (ReductionKind::LiftHolevo, SourceInstance::Channel(ch)) => verify_lift(ch, req)?,
        (kind, _) => return arg(format!("instance kind does not match reduction {kind:?}")),
    };
    Ok(ReductionReport {
        reduction: req.reduction,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        instance_digest: digest(&req.instance)?,
        instance: req.instance.clone(),
        seed: req.seed,
        budgets: req.budgets,
        tolerances: Tolerances::default(),
        thresholds: out.thresholds,
        source: out.source,
        target: out.target,
        witness: out.witness,
        verdict: out.verdict,
        notes: out.notes,
        channel: out.channel,
    })
}

/// Shared classification for the two clique reductions.
fn clique_outcome(
    clique: CliqueInstance,
    source: SourceResult,
    constructed: Option<[PureState; 2]>,
    req: &VerifyRequest,
    mut notes: Vec<String>,
) -> Result<Outcome> {
    let ch = clique.channel;
    let search = clique_search(&ch, &req.budgets, req.seed)?;
    let constructed_value = constructed.as_ref().map(|[a, b]| pair_score(&ch, a, b));
    let value = constructed_value.map_or(search.value, |v| v.min(search.value));
    let thresholds = Thresholds { yes_at_most: clique.a, no_at_least: clique.b };
    let mut witness = None;
    let verdict = match source.yes {
        None => {
            notes.push("source instance lies inside the promise gap".into());
            Verdict::Inconclusive
        }
        Some(true) if value <= clique.a + VERDICT_TOL => Verdict::YesConsistent,
        Some(true) => {
            notes.push("no witness reached the yes threshold within budget".into());
            Verdict::Inconclusive
        }
        Some(false) if search.value >= clique.b - VERDICT_TOL => Verdict::NoConsistent,
        Some(false) => {
            notes.push(format!(
                "apparent violation: witness scores {} below the no threshold {}",
                search.value, clique.b
            ));
            witness = Some(Witness::States(search.states.clone()));
            Verdict::Inconclusive
        }
    };
    Ok(Outcome {
        thresholds,
        source,
        target: TargetResult { value, search_value: search.value, constructed_value, estimator: search.method },
        witness,
        verdict,
        notes,
        channel: ch,
    })
}

fn verify_ham(inst: &LocalHamInstance, req: &VerifyRequest) -> Result<Outcome> {
    let clique = ham_to_clique(inst)?;
    let (lambda, ground) = localham_ground_state(inst)?;
    let yes = if lambda <= inst.a + tol::SPECTRAL {
        Some(true)
    } else if lambda >= inst.b - tol::SPECTRAL {
        Some(false)
    } else {
        None
    };
    let source = SourceResult { yes, value: lambda, oracle: "dense eigensolver".into() };
    clique_outcome(clique, source, Some(flagged_witness_pair(&ground)?), req, vec![])
}

fn verify_qsat(inst: &QSatInstance, req: &VerifyRequest) -> Result<Outcome> {
    let clique = qsat_to_clique(inst)?;
    let (energy, ground) = lambda_min_with_vector(&inst.projector_sum())?;
    let yes = if energy <= tol::SPECTRAL {
        Some(true)
    } else if energy >= inst.epsilon - tol::SPECTRAL {
        Some(false)
    } else {
        None
    };
    let s = inst.scale() as f64;
    let notes = vec![format!(
        "no threshold is the printed epsilon/s^2 = {}; the score argument alone guarantees epsilon^2/s^2 = {}",
        inst.epsilon / (s * s),
        inst.epsilon * inst.epsilon / (s * s)
    )];
    let source = SourceResult { yes, value: energy, oracle: "dense eigensolver".into() };
    clique_outcome(clique, source, Some(flagged_witness_pair(&ground)?), req, notes)
}

fn verify_sat24(inst: &Sat24Instance, req: &VerifyRequest) -> Result<Outcome> {
    let ch = sat24_to_minentropy(inst)?;
    let sol = sat24_brute_force(inst);
    let oracle = capacity::min_entropy_oracle(&ch, req.budgets.samples, req.seed)?;
    let Payload::State(found) = oracle.payload else { unreachable!("oracle returns a state") };
    let constructed = if sol.satisfiable {
        let phi = assignment_state(&sol.assignment);
        Some((capacity::output_entropy(&ch, &phi.tensor(&phi)?)?, phi))
    } else {
        None
    };
    let constructed_value = constructed.as_ref().map(|c| c.0);
    let value = constructed_value.map_or(oracle.value, |v| v.min(oracle.value));
    let mut notes = vec![];
    let mut witness = None;
    let verdict = if oracle.value < 2.0 - VERDICT_TOL {
        notes.push(format!("apparent violation: entropy {} below 2", oracle.value));
        witness = Some(Witness::States(vec![found]));
        Verdict::Inconclusive
    } else if sol.satisfiable {
        if value <= 2.0 + VERDICT_TOL {
            Verdict::YesConsistent
        } else {
            notes.push("no state reached entropy 2 within budget".into());
            Verdict::Inconclusive
        }
    } else {
        let delta = oracle.value - 2.0;
        notes.push(format!("measured gap delta = {delta} with {} samples", req.budgets.samples));
        if delta > tol::SPECTRAL {
            Verdict::NoConsistent
        } else {
            notes.push("gap not resolved at spectral tolerance".into());
            Verdict::Inconclusive
        }
    };
    Ok(Outcome {
        thresholds: Thresholds { yes_at_most: 2.0, no_at_least: 2.0 },
        source: SourceResult {
            yes: Some(sol.satisfiable),
            value: sol.best_violation,
            oracle: "exhaustive sign enumeration".into(),
        },
        target: TargetResult {
            value,
            search_value: oracle.value,
            constructed_value,
            estimator: format!("min-entropy oracle ({} samples)", req.budgets.samples),
        },
        witness,
        verdict,
        notes,
        channel: ch,
    })
}

fn verify_lift(ch: &Channel, req: &VerifyRequest) -> Result<Outcome> {
    let cmp = minentropy_to_holevo(ch, req.budgets.samples, req.seed)?;
    let r = &cmp.report;
    let mut notes = vec![format!("lift weights each of the n^2 labels by {}", r.label_weight)];
    let verdict = if cmp.pass {
        Verdict::YesConsistent
    } else {
        notes.push(format!("identity residual {} exceeds 1e-3", r.residual));
        Verdict::Inconclusive
    };
    Ok(Outcome {
        thresholds: Thresholds { yes_at_most: r.logn_minus_min_h, no_at_least: r.logn_minus_min_h },
        source: SourceResult { yes: None, value: r.min_entropy, oracle: "min-entropy ascent + oracle".into() },
        target: TargetResult {
            value: r.chi_estimate,
            search_value: r.chi_estimate,
            constructed_value: Some(r.chi_estimate),
            estimator: "Holevo quantity on the uniform Pauli ensemble".into(),
        },
        witness: if cmp.pass { None } else { Some(Witness::Lift(r.clone())) },
        verdict,
        notes,
        channel: cmp.lift,
    })
}

/// Seeded generators for test and demo instances.
pub mod random {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::Rng;

    /// `m` clauses all satisfied by a hidden sign vector.
    pub fn satisfiable_sat24<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Sat24Instance {
        assert!(n >= 4);
        let x: Vec<i8> = (0..n).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
        let clauses = (0..m)
            .map(|_| {
                let mut idx: Vec<usize> = (0..n).collect();
                idx.shuffle(rng);
                let vars = [idx[0], idx[1], idx[2], idx[3]];
                // Two products +1 and two -1, in random positions.
                let mut prod = [1i8, 1, -1, -1];
                prod.shuffle(rng);
                let signs = [0, 1, 2, 3].map(|j| prod[j] * x[vars[j]]);
                Clause { vars, signs }
            })
            .collect();
        Sat24Instance::new(n, clauses).expect("valid clauses")
    }

    /// Random clauses, redrawn until the instance is unsatisfiable.
    pub fn unsatisfiable_sat24<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Sat24Instance {
        assert!(n >= 4);
        loop {
            let clauses = (0..m)
                .map(|_| {
                    let mut idx: Vec<usize> = (0..n).collect();
                    idx.shuffle(rng);
                    Clause {
                        vars: [idx[0], idx[1], idx[2], idx[3]],
                        signs: [0; 4].map(|_: i8| if rng.random_bool(0.5) { 1 } else { -1 }),
                    }
                })
                .collect();
            let inst = Sat24Instance::new(n, clauses).expect("valid clauses");
            if !sat24_brute_force(&inst).satisfiable {
                return inst;
            }
        }
    }

    /// PSD term with norm at most one on a random support of size `k`.
    pub fn local_term<R: Rng + ?Sized>(qubits: usize, k: usize, rng: &mut R) -> LocalTerm {
        let mut idx: Vec<usize> = (0..qubits).collect();
        idx.shuffle(rng);
        let mut support = idx[..k].to_vec();
        support.sort_unstable();
        let g = linalg::random::gaussian_matrix(1 << k, 1 << k, rng);
        let p = &g * &g.adjoint();
        let top = linalg::hermitian_spectrum(p.as_na()).last().copied().unwrap_or(1.0);
        let scale = rng.random_range(0.2..1.0) / top;
        LocalTerm { support, matrix: p.scale_re(scale).hermitian_part() }
    }

    pub fn local_ham<R: Rng + ?Sized>(qubits: usize, terms: usize, k: usize, rng: &mut R) -> LocalHamInstance {
        let terms = (0..terms).map(|_| local_term(qubits, k.min(qubits), rng)).collect();
        LocalHamInstance::new(qubits, terms, 0.0, 1.0).expect("valid instance")
    }
}

#[cfg(test)]
mod tests;
