//! Minimum output entropy, Holevo quantity, the covariant lift and the
//! classical Arimoto-Blahut iteration.
//!
//! Pure inputs are parameterized by `2d` real coordinates
//! `theta = [Re psi_0 .. Re psi_{d-1}, Im psi_0 .. Im psi_{d-1}]` and normalized
//! on use, so objectives are scale invariant and their gradients are tangent
//! to the sphere.

use std::f64::consts::LN_2;

use nalgebra::DVector;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{build_pauli_generalized, Channel, KrausChannel, MeasPrepChannel};
use crate::error::{arg, Error, Result};
use crate::linalg::{self, c, tol, ComplexMatrix, DensityMatrix, PureState, C64};
use crate::seed;
use crate::zero_error::ClassicalChannel;

pub const ASCENT_RESTARTS: usize = 64;
pub const ORACLE_SAMPLES: usize = 20_000;
/// Eigenvalues at or below this are left out of entropy gradients.
pub const SUPPORT_CUTOFF: f64 = 1e-12;
/// Input-dimension caps.
pub const ASCENT_MAX_DIM: usize = 64;
pub const MIN_ENTROPY_ORACLE_MAX_DIM: usize = 16;
pub const HOLEVO_ASCENT_MAX_DIM: usize = 16;
pub const HOLEVO_ORACLE_MAX_DIM: usize = 4;
pub const LIFT_MAX_OUTPUT: usize = 8;

const LOCAL_MAX_ITERS: usize = 500;
/// Oracle polish: every kept sample gets a short polish, the best few a long one.
const POLISH_SHORT_ITERS: usize = 20;
const POLISH_LONG_ITERS: usize = 1000;
const POLISH_FINALISTS: usize = 4;
/// A polish step that gains less than this ends the polish.
const POLISH_MIN_GAIN: f64 = 1e-13;

/// Input ensemble `{p_i, rho_i}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEnsemble")]
pub struct Ensemble {
    probs: Vec<f64>,
    states: Vec<DensityMatrix>,
}

#[derive(Deserialize)]
struct RawEnsemble {
    probs: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl TryFrom<RawEnsemble> for Ensemble {
    type Error = Error;
    fn try_from(raw: RawEnsemble) -> Result<Self> {
        Ensemble::new(raw.probs, raw.states)
    }
}

impl Ensemble {
    pub fn new(probs: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        if probs.len() != states.len() || probs.is_empty() {
            return arg("ensemble needs one probability per state and at least one state");
        }
        if probs.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return arg("ensemble probabilities must be non-negative");
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > tol::ALGEBRAIC {
            return arg(format!("ensemble probabilities sum to {total}"));
        }
        let d = states[0].dim();
        if states.iter().any(|s| s.dim() != d) {
            return arg("ensemble states must share a dimension");
        }
        if states.len() > d * d {
            return arg(format!("{} states exceed dim^2 = {}", states.len(), d * d));
        }
        Ok(Ensemble { probs, states })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    fn from_pure(probs: Vec<f64>, states: &[PureState]) -> Self {
        Ensemble { probs, states: states.iter().map(PureState::projector).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    State(PureState),
    Ensemble(Ensemble),
    Distribution(Vec<f64>),
}

/// Outcome of any optimizer in this module; `value` is in bits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub value: f64,
    pub payload: Payload,
    pub iterations: usize,
    pub seed: u64,
    pub converged: bool,
}

fn check_dim(d: usize, cap: usize) -> Result<()> {
    if d > cap {
        return Err(Error::Capacity { dim: d, cap });
    }
    Ok(())
}

/// Entropy of a Hermitian PSD operator and the support-restricted gradient
/// operator `-log2(sigma) - I/ln 2`.
fn entropy_and_gradient(sigma: &ComplexMatrix) -> (f64, ComplexMatrix) {
    let (vals, vecs) = linalg::eigh_blocked(sigma.hermitian_part().as_na());
    let h = linalg::entropy_of_spectrum(&vals).max(0.0);
    let n = vals.len();
    let mut g = nalgebra::DMatrix::<C64>::zeros(n, n);
    for (k, &l) in vals.iter().enumerate() {
        if l > SUPPORT_CUTOFF {
            let v = vecs.column(k);
            g += (&v * v.adjoint()) * c(-l.log2() - 1.0 / LN_2, 0.0);
        }
    }
    (h, ComplexMatrix::from_na(g))
}

fn entropy_of(sigma: &ComplexMatrix) -> f64 {
    linalg::entropy_of_spectrum(&linalg::hermitian_spectrum(sigma.as_na())).max(0.0)
}

/// `H(Phi(|psi><psi|))`.
pub fn output_entropy(ch: &Channel, psi: &PureState) -> Result<f64> {
    if psi.dim() != ch.dim_in() {
        return arg(format!("channel expects dim {}, state has dim {}", ch.dim_in(), psi.dim()));
    }
    Ok(entropy_of(&ch.apply_pure_unchecked(psi)))
}

fn theta_to_vec(theta: &[f64], d: usize) -> DVector<C64> {
    DVector::from_fn(d, |i, _| c(theta[i], theta[d + i]))
}

fn vec_to_theta(v: &DVector<C64>) -> Vec<f64> {
    v.iter().map(|z| z.re).chain(v.iter().map(|z| z.im)).collect()
}

/// Complex gradient of `psi -> <psi|A|psi>` restricted to the sphere's tangent space.
fn tangent(a: &ComplexMatrix, psi: &DVector<C64>) -> DVector<C64> {
    let w = a.as_na() * psi * c(2.0, 0.0);
    let radial = psi.dotc(&w).re;
    w - psi * c(radial, 0.0)
}

/// Value and gradient of `theta -> H(Phi(psi psi^dagger))`, `psi = theta / |theta|`.
pub fn min_entropy_objective(ch: &Channel, theta: &[f64]) -> Result<(f64, Vec<f64>)> {
    let d = ch.dim_in();
    if theta.len() != 2 * d {
        return arg(format!("expected {} coordinates, got {}", 2 * d, theta.len()));
    }
    let v = theta_to_vec(theta, d);
    let r = v.norm();
    if !(r > 0.0) {
        return arg("parameter vector must be non-zero");
    }
    let psi = PureState::from_na_normalizing(v);
    let (h, g) = entropy_and_gradient(&ch.apply_pure_unchecked(&psi));
    let grad = tangent(&ch.adjoint_apply_unchecked(&g), psi.as_na()) / c(r, 0.0);
    Ok((h, vec_to_theta(&grad)))
}

struct Local {
    value: f64,
    psi: PureState,
    iterations: usize,
    converged: bool,
}

/// Riemannian gradient descent with Armijo backtracking and normalization as retraction.
fn descend(ch: &Channel, start: PureState, tol: f64) -> Local {
    let mut psi = start;
    let mut value = entropy_of(&ch.apply_pure_unchecked(&psi));
    let mut step = 1.0;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < LOCAL_MAX_ITERS {
        iterations += 1;
        let (_, g) = entropy_and_gradient(&ch.apply_pure_unchecked(&psi));
        let mut dir = tangent(&ch.adjoint_apply_unchecked(&g), psi.as_na());
        if dir.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            dir = finite_difference_direction(ch, &psi);
        }
        let gnorm2 = dir.norm_squared();
        if gnorm2.sqrt() <= tol {
            converged = true;
            break;
        }
        let mut accepted = false;
        while step > 1e-16 {
            let cand = PureState::from_na_normalizing(psi.as_na() - &dir * c(step, 0.0));
            let fc = entropy_of(&ch.apply_pure_unchecked(&cand));
            if fc <= value - 1e-4 * step * gnorm2 {
                psi = cand;
                value = fc;
                step = (step * 2.0).min(1e3);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // No descent left at working precision.
            converged = true;
            break;
        }
    }
    Local { value, psi, iterations, converged }
}

fn finite_difference_direction(ch: &Channel, psi: &PureState) -> DVector<C64> {
    let d = psi.dim();
    let theta = vec_to_theta(psi.as_na());
    let h = 1e-6;
    let f = |t: &[f64]| entropy_of(&ch.apply_pure_unchecked(&PureState::from_na_normalizing(theta_to_vec(t, d))));
    let mut grad = vec![0.0; 2 * d];
    for i in 0..2 * d {
        let mut plus = theta.clone();
        let mut minus = theta.clone();
        plus[i] += h;
        minus[i] -= h;
        grad[i] = (f(&plus) - f(&minus)) / (2.0 * h);
    }
    theta_to_vec(&grad, d)
}

fn best_of<T>(runs: Vec<(f64, usize, T)>, maximize: bool) -> (f64, usize, T) {
    runs.into_iter()
        .min_by(|a, b| {
            let by_value = if maximize { b.0.total_cmp(&a.0) } else { a.0.total_cmp(&b.0) };
            by_value.then(a.1.cmp(&b.1))
        })
        .expect("at least one run")
}

/// Multistart local minimization of the output entropy over pure inputs.
///
/// c-q channels take the exact path `min_i H(sigma_i)`.
pub fn min_entropy_ascent(ch: &Channel, restarts: usize, seed: u64, tol: f64) -> Result<OptResult> {
    let d = ch.dim_in();
    check_dim(d, ASCENT_MAX_DIM)?;
    if let Channel::Cq(cq) = ch {
        let (value, i) = cq
            .preps()
            .iter()
            .enumerate()
            .map(|(i, s)| (linalg::entropy_of_spectrum(&s.spectrum()).max(0.0), i))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .expect("c-q channel has preps");
        return Ok(OptResult {
            value,
            payload: Payload::State(PureState::basis(d, i)),
            iterations: 0,
            seed,
            converged: true,
        });
    }
    if restarts == 0 {
        return arg("restarts must be at least 1");
    }
    let runs: Vec<_> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let start = linalg::random::pure_state(d, &mut seed::rng(seed, r as u64));
            let local = descend(ch, start, tol);
            (local.value, r, local)
        })
        .collect();
    let iterations = runs.iter().map(|r| r.2.iterations).sum();
    let (value, _, best) = best_of(runs, false);
    Ok(OptResult { value, payload: Payload::State(best.psi), iterations, seed, converged: best.converged })
}

/// Majorize-minimize polish: entropy is concave, so jumping to the lowest
/// eigenvector of `Phi^dagger(G)` never increases the linear upper bound.
fn mm_polish(ch: &Channel, start: PureState, max_iters: usize) -> (f64, PureState, usize) {
    let mut psi = start;
    let mut value = entropy_of(&ch.apply_pure_unchecked(&psi));
    let mut iters = 0;
    while iters < max_iters {
        iters += 1;
        let sigma = ch.apply_pure_unchecked(&psi);
        let (vals, vecs) = linalg::eigh_blocked(sigma.hermitian_part().as_na());
        let n = vals.len();
        let mut g = nalgebra::DMatrix::<C64>::zeros(n, n);
        for (k, &l) in vals.iter().enumerate() {
            let v = vecs.column(k);
            g += (&v * v.adjoint()) * c(-l.max(1e-15).log2(), 0.0);
        }
        let a = ch.adjoint_apply_unchecked(&ComplexMatrix::from_na(g)).hermitian_part();
        let (_, ev) = linalg::eigh_blocked(a.as_na());
        let cand = PureState::from_na_normalizing(ev.column(0).into_owned());
        let fc = entropy_of(&ch.apply_pure_unchecked(&cand));
        if fc >= value - 1e-15 {
            break;
        }
        let gain = value - fc;
        psi = cand;
        value = fc;
        if gain < POLISH_MIN_GAIN {
            break;
        }
    }
    (value, psi, iters)
}

fn sample_state(d: usize, seed: u64, index: usize) -> PureState {
    linalg::random::pure_state(d, &mut seed::rng(seed, index as u64))
}

/// Brute-force companion: Haar samples, then the best 1% are polished.
/// The value is an upper bound on the true minimum.
pub fn min_entropy_oracle(ch: &Channel, samples: usize, seed: u64) -> Result<OptResult> {
    let d = ch.dim_in();
    check_dim(d, MIN_ENTROPY_ORACLE_MAX_DIM)?;
    if samples == 0 {
        return arg("samples must be at least 1");
    }
    let mut scored: Vec<(f64, usize)> = (0..samples)
        .into_par_iter()
        .map(|i| (entropy_of(&ch.apply_pure_unchecked(&sample_state(d, seed, i))), i))
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let keep = (samples / 100).max(1);
    let mut short: Vec<_> = scored[..keep]
        .par_iter()
        .map(|&(_, i)| {
            let (v, psi, it) = mm_polish(ch, sample_state(d, seed, i), POLISH_SHORT_ITERS);
            (v, i, psi, it)
        })
        .collect();
    short.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut iterations = samples + short.iter().map(|r| r.3).sum::<usize>();
    short.truncate(POLISH_FINALISTS);
    let runs: Vec<_> = short
        .into_par_iter()
        .map(|(_, i, psi, _)| {
            let (v, psi, it) = mm_polish(ch, psi, POLISH_LONG_ITERS);
            (v, i, (psi, it))
        })
        .collect();
    iterations += runs.iter().map(|r| r.2 .1).sum::<usize>();
    let (value, _, (psi, _)) = best_of(runs, false);
    Ok(OptResult { value, payload: Payload::State(psi), iterations, seed, converged: true })
}

/// `chi = H(sum p_i Phi(rho_i)) - sum p_i H(Phi(rho_i))`.
pub fn holevo_value(ch: &Channel, ensemble: &Ensemble) -> Result<f64> {
    let outs =
        ensemble.states.iter().map(|s| ch.apply(s).map(DensityMatrix::into_matrix)).collect::<Result<Vec<_>>>()?;
    Ok(chi_of(&ensemble.probs, &outs))
}

fn mix(probs: &[f64], outs: &[ComplexMatrix]) -> ComplexMatrix {
    let mut avg = ComplexMatrix::zeros(outs[0].rows(), outs[0].rows());
    for (p, o) in probs.iter().zip(outs) {
        avg = &avg + &o.scale_re(*p);
    }
    avg
}

fn chi_of(probs: &[f64], outs: &[ComplexMatrix]) -> f64 {
    let avg = mix(probs, outs);
    entropy_of(&avg) - probs.iter().zip(outs).map(|(p, o)| p * entropy_of(o)).sum::<f64>()
}

fn softmax(z: &[f64]) -> Vec<f64> {
    let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = z.iter().map(|x| (x - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// Value and gradient of the Holevo quantity of an `m`-element pure ensemble,
/// parameterized as `[z_0 .. z_{m-1}, theta_0, .., theta_{m-1}]` with
/// `p = softmax(z)` and each `theta_i` as in [`min_entropy_objective`].
pub fn holevo_objective(ch: &Channel, params: &[f64], m: usize) -> Result<(f64, Vec<f64>)> {
    let d = ch.dim_in();
    if m == 0 || params.len() != m + 2 * d * m {
        return arg(format!("expected {} parameters for {m} states", m + 2 * d * m));
    }
    let probs = softmax(&params[..m]);
    let raw: Vec<DVector<C64>> = (0..m).map(|i| theta_to_vec(&params[m + 2 * d * i..m + 2 * d * (i + 1)], d)).collect();
    if raw.iter().any(|v| !(v.norm() > 0.0)) {
        return arg("state parameters must be non-zero");
    }
    let states: Vec<PureState> = raw.iter().map(|v| PureState::from_na_normalizing(v.clone())).collect();
    let outs: Vec<ComplexMatrix> = states.iter().map(|s| ch.apply_pure_unchecked(s)).collect();
    let (h_avg, g_avg) = entropy_and_gradient(&mix(&probs, &outs));
    let mut value = h_avg;
    let mut grad = vec![0.0; params.len()];
    let mut dchi_dp = Vec::with_capacity(m);
    for i in 0..m {
        let (h_i, g_i) = entropy_and_gradient(&outs[i]);
        value -= probs[i] * h_i;
        dchi_dp.push(trace_product(&g_avg, &outs[i]) - h_i);
        let a = ch.adjoint_apply_unchecked(&(&g_avg - &g_i)).scale_re(probs[i]);
        let gi = tangent(&a, states[i].as_na()) / c(raw[i].norm(), 0.0);
        grad[m + 2 * d * i..m + 2 * d * (i + 1)].copy_from_slice(&vec_to_theta(&gi));
    }
    let mean: f64 = probs.iter().zip(&dchi_dp).map(|(p, g)| p * g).sum();
    for j in 0..m {
        grad[j] = probs[j] * (dchi_dp[j] - mean);
    }
    Ok((value, grad))
}

fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a * b).trace().re
}

/// `D(rho || sigma)` in bits, with the log of `sigma` taken on its support.
fn relative_entropy(rho: &ComplexMatrix, log_sigma: &ComplexMatrix) -> f64 {
    -entropy_of(rho) - trace_product(rho, log_sigma)
}

fn log2_on_support(sigma: &ComplexMatrix) -> ComplexMatrix {
    let (vals, vecs) = linalg::eigh_blocked(sigma.hermitian_part().as_na());
    let n = vals.len();
    let mut out = nalgebra::DMatrix::<C64>::zeros(n, n);
    for (k, &l) in vals.iter().enumerate() {
        if l > SUPPORT_CUTOFF {
            let v = vecs.column(k);
            out += (&v * v.adjoint()) * c(l.log2(), 0.0);
        }
    }
    ComplexMatrix::from_na(out)
}

/// One Blahut-Arimoto reweighting `p_i <- p_i 2^{D(sigma_i || sigma_bar)}`.
fn reweight(probs: &[f64], outs: &[ComplexMatrix]) -> Vec<f64> {
    let log_avg = log2_on_support(&mix(probs, outs));
    let w: Vec<f64> = probs
        .iter()
        .zip(outs)
        .map(|(p, o)| if *p > 0.0 { p * relative_entropy(o, &log_avg).exp2() } else { 0.0 })
        .collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

struct HolevoRun {
    value: f64,
    probs: Vec<f64>,
    states: Vec<PureState>,
    history: Vec<f64>,
    converged: bool,
}

fn holevo_local(ch: &Channel, m: usize, seed: u64, index: usize, tol: f64) -> HolevoRun {
    let d = ch.dim_in();
    let mut rng = seed::rng(seed, index as u64);
    let mut states: Vec<PureState> = (0..m).map(|_| linalg::random::pure_state(d, &mut rng)).collect();
    let mut probs = vec![1.0 / m as f64; m];
    let mut outs: Vec<ComplexMatrix> = states.iter().map(|s| ch.apply_pure_unchecked(s)).collect();
    let mut value = chi_of(&probs, &outs);
    let mut history = vec![value];
    let mut step = 1.0;
    let mut converged = false;
    for _ in 0..LOCAL_MAX_ITERS {
        let before = value;
        let p2 = reweight(&probs, &outs);
        let v2 = chi_of(&p2, &outs);
        if v2 >= value {
            probs = p2;
            value = v2;
        }
        // Gradient step on the states with probabilities held fixed.
        let (_, g_avg) = entropy_and_gradient(&mix(&probs, &outs));
        let dirs: Vec<DVector<C64>> = (0..m)
            .map(|i| {
                let (_, g_i) = entropy_and_gradient(&outs[i]);
                let a = ch.adjoint_apply_unchecked(&(&g_avg - &g_i)).scale_re(probs[i]);
                tangent(&a, states[i].as_na())
            })
            .collect();
        let gnorm2: f64 = dirs.iter().map(DVector::norm_squared).sum();
        while gnorm2 > 0.0 && step > 1e-16 {
            let cand: Vec<PureState> = states
                .iter()
                .zip(&dirs)
                .map(|(s, g)| PureState::from_na_normalizing(s.as_na() + g * c(step, 0.0)))
                .collect();
            let cand_outs: Vec<ComplexMatrix> = cand.iter().map(|s| ch.apply_pure_unchecked(s)).collect();
            let vc = chi_of(&probs, &cand_outs);
            if vc >= value + 1e-4 * step * gnorm2 {
                states = cand;
                outs = cand_outs;
                value = vc;
                step = (step * 2.0).min(1e3);
                break;
            }
            step *= 0.5;
        }
        debug_assert!(value >= before);
        history.push(value);
        if value - before <= tol {
            converged = true;
            break;
        }
        if step <= 1e-16 {
            step = 1e-3;
        }
    }
    HolevoRun { value, probs, states, history, converged }
}

fn default_ensemble_size(d: usize, requested: usize) -> Result<usize> {
    let m = if requested == 0 { d * d } else { requested };
    if m > d * d {
        return arg(format!("ensemble size {m} exceeds dim^2 = {}", d * d));
    }
    Ok(m)
}

/// Alternating ascent on the Holevo quantity; each run is monotone and the
/// result is a lower bound on the Holevo capacity. `ensemble_size = 0` means `dim^2`.
pub fn holevo_ascent(ch: &Channel, ensemble_size: usize, restarts: usize, seed: u64, tol: f64) -> Result<OptResult> {
    Ok(holevo_ascent_traced(ch, ensemble_size, restarts, seed, tol)?.0)
}

/// As [`holevo_ascent`], also returning the per-iteration objective of the winning run.
pub fn holevo_ascent_traced(
    ch: &Channel,
    ensemble_size: usize,
    restarts: usize,
    seed: u64,
    tol: f64,
) -> Result<(OptResult, Vec<f64>)> {
    let d = ch.dim_in();
    check_dim(d, HOLEVO_ASCENT_MAX_DIM)?;
    let m = default_ensemble_size(d, ensemble_size)?;
    if restarts == 0 {
        return arg("restarts must be at least 1");
    }
    let runs: Vec<_> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let run = holevo_local(ch, m, seed, r, tol);
            (run.value, r, run)
        })
        .collect();
    let iterations = runs.iter().map(|r| r.2.history.len() - 1).sum();
    let (value, _, best) = best_of(runs, true);
    let result = OptResult {
        value: value.max(0.0),
        payload: Payload::Ensemble(Ensemble::from_pure(best.probs, &best.states)),
        iterations,
        seed,
        converged: best.converged,
    };
    Ok((result, best.history))
}

/// Brute-force companion: random ensembles (flat Dirichlet weights, Haar
/// states) followed by a derivative-free polish of the best one.
pub fn holevo_oracle(ch: &Channel, samples: usize, seed: u64) -> Result<OptResult> {
    let d = ch.dim_in();
    check_dim(d, HOLEVO_ORACLE_MAX_DIM)?;
    if samples == 0 {
        return arg("samples must be at least 1");
    }
    let m = d * d;
    let draw = |i: usize| {
        let mut rng = seed::rng(seed, i as u64);
        let probs = linalg::random::simplex(m, &mut rng);
        let states: Vec<PureState> = (0..m).map(|_| linalg::random::pure_state(d, &mut rng)).collect();
        (probs, states)
    };
    let scored: Vec<(f64, usize, ())> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let (p, s) = draw(i);
            let outs: Vec<ComplexMatrix> = s.iter().map(|x| ch.apply_pure_unchecked(x)).collect();
            (chi_of(&p, &outs), i, ())
        })
        .collect();
    let (_, best_index, ()) = best_of(scored, true);
    let (mut probs, mut states) = draw(best_index);
    let mut outs: Vec<ComplexMatrix> = states.iter().map(|x| ch.apply_pure_unchecked(x)).collect();
    let mut value = chi_of(&probs, &outs);
    let mut rng = seed::rng(seed, samples as u64);
    let mut scale = 0.5;
    let mut iterations = samples;
    for _ in 0..60 {
        for _ in 0..20 {
            let p2 = reweight(&probs, &outs);
            let v2 = chi_of(&p2, &outs);
            if v2 <= value {
                break;
            }
            probs = p2;
            value = v2;
        }
        let mut improved = false;
        for _ in 0..40 {
            iterations += 1;
            let i = rng.random_range(0..m);
            let kick = DVector::from_fn(d, |_, _| linalg::random::gaussian_c64(&mut rng) * c(scale, 0.0));
            let cand = PureState::from_na_normalizing(states[i].as_na() + kick);
            let old = std::mem::replace(&mut outs[i], ch.apply_pure_unchecked(&cand));
            let vc = chi_of(&probs, &outs);
            if vc > value {
                states[i] = cand;
                value = vc;
                improved = true;
            } else {
                outs[i] = old;
            }
        }
        if !improved {
            scale *= 0.5;
        }
    }
    Ok(OptResult {
        value: value.max(0.0),
        payload: Payload::Ensemble(Ensemble::from_pure(probs, &states)),
        iterations,
        seed,
        converged: true,
    })
}

/// Lift of `Phi` covariant under the generalized Paulis on its `n`-dimensional
/// output: the `n^2`-dimensional index register (second tensor factor) is
/// read in the computational basis and `X_i` conjugates the output. Off-diagonal
/// index blocks are discarded, which extends the product-input rule
/// `rho (x) |i><i| -> X_i Phi(rho) X_i^dagger` to a channel.
pub fn covariant_lift(ch: &Channel) -> Result<Channel> {
    let n = ch.dim_out();
    check_dim(n, LIFT_MAX_OUTPUT)?;
    let d = ch.dim_in();
    let labels = n * n;
    let paulis = build_pauli_generalized(n);
    let embed = |i: usize, op: &ComplexMatrix| {
        ComplexMatrix::from_fn(op.rows(), d * labels, |r, col| {
            if col % labels == i {
                op[(r, col / labels)]
            } else {
                c(0.0, 0.0)
            }
        })
    };
    if let Some(mp) = ch.to_meas_prep() {
        let mut effects = Vec::new();
        let mut preps = Vec::new();
        for (i, x) in paulis.iter().enumerate() {
            let flag = PureState::basis(labels, i).projector();
            for (eff, sigma) in mp.effects().iter().zip(mp.preps()) {
                effects.push(linalg::tensor(eff, flag.matrix())?);
                preps.push(sigma.conjugate(x));
            }
        }
        return Ok(MeasPrepChannel::new(effects, preps)?.into());
    }
    let kraus = ch.to_kraus();
    let mut ops = Vec::with_capacity(labels * kraus.kraus().len());
    for (i, x) in paulis.iter().enumerate() {
        for e in kraus.kraus() {
            ops.push(embed(i, &(x * e)));
        }
    }
    Ok(KrausChannel::with_dims(d * labels, n, ops)?.into())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftReport {
    /// Holevo quantity of the lift on the uniform Pauli ensemble.
    pub chi_estimate: f64,
    pub logn_minus_min_h: f64,
    pub min_entropy: f64,
    pub residual: f64,
    /// The lift weights each of the `n^2` labels by `1/n^2`.
    pub label_weight: f64,
    pub achiever: PureState,
}

/// Evaluates the lift's Holevo quantity on `{1/n^2, psi* (x) |i>}` where `psi*`
/// is the best minimum-entropy input found, and compares it with `log2 n - H_min`.
pub fn lift_capacity_identity_check(ch: &Channel, samples: usize, seed: u64) -> Result<LiftReport> {
    let n = ch.dim_out();
    check_dim(n, LIFT_MAX_OUTPUT)?;
    let lift = covariant_lift(ch)?;
    let mut candidates = vec![min_entropy_ascent(ch, 16, seed, 1e-10)?];
    if ch.dim_in() <= MIN_ENTROPY_ORACLE_MAX_DIM {
        candidates.push(min_entropy_oracle(ch, samples, seed)?);
    }
    let best = candidates
        .into_iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("non-empty");
    let Payload::State(psi) = best.payload else { unreachable!("min-entropy payload is a state") };
    let labels = n * n;
    let states = (0..labels)
        .map(|i| psi.tensor(&PureState::basis(labels, i)).map(|s| s.projector()))
        .collect::<Result<Vec<_>>>()?;
    let ensemble = Ensemble { probs: vec![1.0 / labels as f64; labels], states };
    let chi = holevo_value(&lift, &ensemble)?;
    let target = (n as f64).log2() - best.value;
    Ok(LiftReport {
        chi_estimate: chi,
        logn_minus_min_h: target,
        min_entropy: best.value,
        residual: (chi - target).abs(),
        label_weight: 1.0 / labels as f64,
        achiever: psi,
    })
}

/// Mutual information `I(r; p)` and the per-input divergences `D(p(.|x) || q)`.
fn ab_terms(ch: &ClassicalChannel, r: &[f64]) -> (f64, Vec<f64>) {
    let q: Vec<f64> = (0..ch.outputs()).map(|y| (0..ch.inputs()).map(|x| r[x] * ch.prob(x, y)).sum()).collect();
    let div: Vec<f64> = (0..ch.inputs())
        .map(|x| {
            (0..ch.outputs())
                .filter(|&y| ch.prob(x, y) > 0.0)
                .map(|y| ch.prob(x, y) * (ch.prob(x, y) / q[y]).log2())
                .sum()
        })
        .collect();
    let info = r.iter().zip(&div).map(|(a, b)| a * b).sum();
    (info, div)
}

/// Classical capacity by Arimoto-Blahut; stops once the standard upper bound
/// `max_x D(p(.|x) || q)` is within `tol` of the current mutual information.
pub fn arimoto_blahut(ch: &ClassicalChannel, tol: f64, max_iters: usize) -> Result<OptResult> {
    if !(tol > 0.0) {
        return arg("tol must be positive");
    }
    let nx = ch.inputs();
    let mut r = vec![1.0 / nx as f64; nx];
    let mut iterations = 0;
    let mut converged = false;
    let mut info;
    loop {
        let (i, div) = ab_terms(ch, &r);
        info = i;
        let upper = div.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if upper - info <= tol {
            converged = true;
            break;
        }
        if iterations >= max_iters {
            break;
        }
        iterations += 1;
        let w: Vec<f64> = r.iter().zip(&div).map(|(a, b)| a * b.exp2()).collect();
        let s: f64 = w.iter().sum();
        r = w.into_iter().map(|x| x / s).collect();
    }
    Ok(OptResult {
        value: info.max(0.0),
        payload: Payload::Distribution(r),
        iterations,
        seed: 0,
        converged,
    })
}

#[cfg(test)]
mod tests;
