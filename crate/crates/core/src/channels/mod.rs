//! Quantum channel representations.
//!
//! A [`Channel`] is one of four standard forms (Kraus, measure-and-prepare,
//! quantum-classical, classical-quantum) or a flagged direct sum of channels
//! sharing an input space. Every form can be applied to states and to
//! arbitrary operators, has an adjoint (Heisenberg picture), converts to Kraus
//! form, and can be CPTP-checked through its Choi matrix.

mod build;

pub use build::*;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::linalg::{
    self, c, eig_hermitian, partial_trace_matrix, tensor, tol, ComplexMatrix, DensityMatrix,
    PureState, TraceOut, C64,
};

fn schema<T>(path: impl Into<String>, message: impl Into<String>) -> Result<T> {
    Err(Error::Schema { path: path.into(), message: message.into() })
}

fn min_eigenvalue(m: &ComplexMatrix) -> f64 {
    linalg::hermitian_spectrum(m.hermitian_part().as_na()).first().copied().unwrap_or(0.0)
}

fn identity_residual(m: &ComplexMatrix) -> f64 {
    m.max_abs_diff(&ComplexMatrix::identity(m.rows()))
}

/// Operator-sum channel `rho -> sum_k E_k rho E_k^dagger`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawKraus")]
pub struct KrausChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
}

#[derive(Deserialize)]
struct RawKraus {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
}

impl TryFrom<RawKraus> for KrausChannel {
    type Error = Error;
    fn try_from(raw: RawKraus) -> Result<Self> {
        Self::with_dims(raw.dim_in, raw.dim_out, raw.kraus)
    }
}

impl KrausChannel {
    /// Dimensions are taken from the first operator.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = kraus.first() else {
            return schema("kraus", "at least one Kraus operator is required");
        };
        Self::with_dims(first.cols(), first.rows(), kraus)
    }

    pub fn with_dims(dim_in: usize, dim_out: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        if kraus.is_empty() {
            return schema("kraus", "at least one Kraus operator is required");
        }
        for (k, e) in kraus.iter().enumerate() {
            if e.rows() != dim_out || e.cols() != dim_in {
                return schema(
                    format!("kraus[{k}]"),
                    format!("expected {dim_out}x{dim_in}, got {}x{}", e.rows(), e.cols()),
                );
            }
        }
        let ch = Self { dim_in, dim_out, kraus };
        let residual = identity_residual(&ch.completeness());
        if residual > tol::SPECTRAL {
            return schema("kraus", format!("sum E^dagger E deviates from I by {residual:.3e}"));
        }
        Ok(ch)
    }

    /// Skips the trace-preservation check; used for diagnostics on broken inputs.
    pub fn new_unchecked(kraus: Vec<ComplexMatrix>) -> Self {
        let (dim_out, dim_in) = (kraus[0].rows(), kraus[0].cols());
        Self { dim_in, dim_out, kraus }
    }

    pub fn identity(d: usize) -> Self {
        Self { dim_in: d, dim_out: d, kraus: vec![ComplexMatrix::identity(d)] }
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    /// `sum_k E_k^dagger E_k`
    pub fn completeness(&self) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for e in &self.kraus {
            acc = &acc + &(&e.adjoint() * e);
        }
        acc
    }
}

/// Entanglement-breaking channel `rho -> sum_i tr(M_i rho) sigma_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasPrep")]
pub struct MeasPrepChannel {
    dim_in: usize,
    dim_out: usize,
    effects: Vec<ComplexMatrix>,
    preps: Vec<DensityMatrix>,
}

#[derive(Deserialize)]
struct RawMeasPrep {
    dim_in: usize,
    dim_out: usize,
    effects: Vec<ComplexMatrix>,
    preps: Vec<ComplexMatrix>,
}

impl TryFrom<RawMeasPrep> for MeasPrepChannel {
    type Error = Error;
    fn try_from(raw: RawMeasPrep) -> Result<Self> {
        let preps = raw
            .preps
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                DensityMatrix::new(m).map_err(|e| Error::Schema {
                    path: format!("preps[{i}]"),
                    message: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let ch = MeasPrepChannel::new(raw.effects, preps)?;
        if ch.dim_in != raw.dim_in || ch.dim_out != raw.dim_out {
            return schema("dim_in", "declared dimensions disagree with the operators");
        }
        Ok(ch)
    }
}

fn validate_povm(effects: &[ComplexMatrix], dim_in: usize) -> Result<()> {
    if effects.is_empty() {
        return schema("effects", "POVM must have at least one effect");
    }
    let mut sum = ComplexMatrix::zeros(dim_in, dim_in);
    for (i, m) in effects.iter().enumerate() {
        if m.rows() != dim_in || !m.is_square() {
            return schema(format!("effects[{i}]"), "effect has the wrong shape");
        }
        if !m.is_hermitian(tol::ALGEBRAIC) {
            return schema(format!("effects[{i}]"), "effect is not Hermitian");
        }
        let min = min_eigenvalue(m);
        if min < -tol::ALGEBRAIC {
            return schema(format!("effects[{i}]"), format!("effect has eigenvalue {min:.3e}"));
        }
        sum = &sum + m;
    }
    let residual = identity_residual(&sum);
    if residual > tol::SPECTRAL {
        return schema("effects", format!("POVM sums to I only within {residual:.3e}"));
    }
    Ok(())
}

impl MeasPrepChannel {
    pub fn new(effects: Vec<ComplexMatrix>, preps: Vec<DensityMatrix>) -> Result<Self> {
        let dim_in = effects.first().map_or(0, ComplexMatrix::rows);
        validate_povm(&effects, dim_in)?;
        if preps.len() != effects.len() {
            return schema("preps", format!("{} preps for {} effects", preps.len(), effects.len()));
        }
        let dim_out = preps[0].dim();
        if let Some(i) = preps.iter().position(|p| p.dim() != dim_out) {
            return schema(format!("preps[{i}]"), "prepared states differ in dimension");
        }
        Ok(Self { dim_in, dim_out, effects, preps })
    }

    /// Completely depolarizing: every input goes to `I/d`.
    pub fn depolarizing(d: usize) -> Self {
        Self::constant(d, DensityMatrix::maximally_mixed(d))
    }

    /// `rho -> sigma` for a fixed `sigma`.
    pub fn constant(dim_in: usize, sigma: DensityMatrix) -> Self {
        Self {
            dim_in,
            dim_out: sigma.dim(),
            effects: vec![ComplexMatrix::identity(dim_in)],
            preps: vec![sigma],
        }
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn preps(&self) -> &[DensityMatrix] {
        &self.preps
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }
}

/// Quantum-classical channel: measure, then record outcome `i` as `|i><i|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawQc")]
pub struct QcChannel {
    dim_in: usize,
    effects: Vec<ComplexMatrix>,
}

#[derive(Deserialize)]
struct RawQc {
    dim_in: usize,
    effects: Vec<ComplexMatrix>,
}

impl TryFrom<RawQc> for QcChannel {
    type Error = Error;
    fn try_from(raw: RawQc) -> Result<Self> {
        let ch = QcChannel::new(raw.effects)?;
        if ch.dim_in != raw.dim_in {
            return schema("dim_in", "declared dimension disagrees with the effects");
        }
        Ok(ch)
    }
}

impl QcChannel {
    pub fn new(effects: Vec<ComplexMatrix>) -> Result<Self> {
        let dim_in = effects.first().map_or(0, ComplexMatrix::rows);
        validate_povm(&effects, dim_in)?;
        Ok(Self { dim_in, effects })
    }

    /// Measurement in the computational basis.
    pub fn basis_measurement(d: usize) -> Self {
        let effects = (0..d).map(|i| PureState::basis(d, i).projector().into_matrix()).collect();
        Self { dim_in: d, effects }
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.effects.len()
    }
}

/// Classical-quantum channel `rho -> sum_i <i|rho|i> sigma_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCq")]
pub struct CqChannel {
    dim_in: usize,
    preps: Vec<DensityMatrix>,
}

#[derive(Deserialize)]
struct RawCq {
    dim_in: usize,
    preps: Vec<ComplexMatrix>,
}

impl TryFrom<RawCq> for CqChannel {
    type Error = Error;
    fn try_from(raw: RawCq) -> Result<Self> {
        let preps = raw
            .preps
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                DensityMatrix::new(m).map_err(|e| Error::Schema {
                    path: format!("preps[{i}]"),
                    message: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if preps.len() != raw.dim_in {
            return schema("preps", format!("{} preps for dim_in {}", preps.len(), raw.dim_in));
        }
        CqChannel::new(preps)
    }
}

impl CqChannel {
    pub fn new(preps: Vec<DensityMatrix>) -> Result<Self> {
        if preps.is_empty() {
            return schema("preps", "at least one prepared state is required");
        }
        let d = preps[0].dim();
        if let Some(i) = preps.iter().position(|p| p.dim() != d) {
            return schema(format!("preps[{i}]"), "prepared states differ in dimension");
        }
        Ok(Self { dim_in: preps.len(), preps })
    }

    pub fn preps(&self) -> &[DensityMatrix] {
        &self.preps
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.preps[0].dim()
    }
}

/// Weighted direct sum `rho -> (+)_i p_i Phi_i(rho)`: every part writes into
/// its own orthogonal block of the output, which acts as a flag register.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawOrthoMix")]
pub struct OrthoMix {
    parts: Vec<WeightedPart>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedPart {
    pub weight: f64,
    pub channel: Channel,
}

#[derive(Deserialize)]
struct RawOrthoMix {
    parts: Vec<WeightedPart>,
}

impl TryFrom<RawOrthoMix> for OrthoMix {
    type Error = Error;
    fn try_from(raw: RawOrthoMix) -> Result<Self> {
        OrthoMix::new(raw.parts.into_iter().map(|p| (p.weight, p.channel)).collect())
    }
}

impl OrthoMix {
    pub fn new(parts: Vec<(f64, Channel)>) -> Result<Self> {
        if parts.is_empty() {
            return schema("parts", "orthomix needs at least one part");
        }
        if let Some(i) = parts.iter().position(|(w, _)| !(*w >= 0.0) || !w.is_finite()) {
            return schema(format!("parts[{i}].weight"), "weights must be non-negative");
        }
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > tol::ALGEBRAIC {
            return schema("parts", format!("weights sum to {total}"));
        }
        let d = parts[0].1.dim_in();
        if let Some(i) = parts.iter().position(|(_, ch)| ch.dim_in() != d) {
            return schema(format!("parts[{i}].channel"), "parts must share the input dimension");
        }
        Ok(Self {
            parts: parts.into_iter().map(|(weight, channel)| WeightedPart { weight, channel }).collect(),
        })
    }

    pub fn parts(&self) -> &[WeightedPart] {
        &self.parts
    }

    pub fn weights(&self) -> Vec<f64> {
        self.parts.iter().map(|p| p.weight).collect()
    }

    /// Row offset of each part's block in the output.
    pub fn offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.parts
            .iter()
            .map(|p| {
                let o = acc;
                acc += p.channel.dim_out();
                o
            })
            .collect()
    }

    /// Extracts part `i`'s (unweighted) output block from a full output operator.
    pub fn block(&self, out: &ComplexMatrix, i: usize) -> ComplexMatrix {
        let o = self.offsets()[i];
        let d = self.parts[i].channel.dim_out();
        ComplexMatrix::from_na(out.as_na().view((o, o), (d, d)).into_owned())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Channel {
    Kraus(KrausChannel),
    MeasPrep(MeasPrepChannel),
    Qc(QcChannel),
    Cq(CqChannel),
    #[serde(rename = "orthomix")]
    OrthoMix(OrthoMix),
}

impl From<KrausChannel> for Channel {
    fn from(c: KrausChannel) -> Self {
        Channel::Kraus(c)
    }
}

impl From<MeasPrepChannel> for Channel {
    fn from(c: MeasPrepChannel) -> Self {
        Channel::MeasPrep(c)
    }
}

impl From<QcChannel> for Channel {
    fn from(c: QcChannel) -> Self {
        Channel::Qc(c)
    }
}

impl From<CqChannel> for Channel {
    fn from(c: CqChannel) -> Self {
        Channel::Cq(c)
    }
}

impl From<OrthoMix> for Channel {
    fn from(c: OrthoMix) -> Self {
        Channel::OrthoMix(c)
    }
}

/// Outcome of [`Channel::validate_cptp`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CptpReport {
    /// Max-entry norm of `Phi^dagger(I) - I`.
    pub completeness_residual: f64,
    pub choi_min_eigenvalue: f64,
    pub pass: bool,
}

fn block_diag(blocks: &[(f64, ComplexMatrix)]) -> ComplexMatrix {
    let n: usize = blocks.iter().map(|(_, b)| b.rows()).sum();
    let mut out = DMatrix::zeros(n, n);
    let mut o = 0;
    for (w, b) in blocks {
        let d = b.rows();
        out.view_mut((o, o), (d, d)).copy_from(&(b.as_na() * c(*w, 0.0)));
        o += d;
    }
    ComplexMatrix::from_na(out)
}

impl Channel {
    pub fn dim_in(&self) -> usize {
        match self {
            Channel::Kraus(k) => k.dim_in,
            Channel::MeasPrep(m) => m.dim_in,
            Channel::Qc(q) => q.dim_in,
            Channel::Cq(c) => c.dim_in,
            Channel::OrthoMix(o) => o.parts[0].channel.dim_in(),
        }
    }

    pub fn dim_out(&self) -> usize {
        match self {
            Channel::Kraus(k) => k.dim_out,
            Channel::MeasPrep(m) => m.dim_out,
            Channel::Qc(q) => q.dim_out(),
            Channel::Cq(c) => c.dim_out(),
            Channel::OrthoMix(o) => o.parts.iter().map(|p| p.channel.dim_out()).sum(),
        }
    }

    pub fn identity(d: usize) -> Self {
        KrausChannel::identity(d).into()
    }

    /// Whether the form is manifestly entanglement breaking.
    pub fn is_measure_prepare(&self) -> bool {
        match self {
            Channel::Kraus(_) => false,
            Channel::MeasPrep(_) | Channel::Qc(_) | Channel::Cq(_) => true,
            Channel::OrthoMix(o) => o.parts.iter().all(|p| p.channel.is_measure_prepare()),
        }
    }

    /// Linear extension of the channel to arbitrary `dim_in x dim_in` operators.
    pub fn apply_operator(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if !x.is_square() || x.rows() != self.dim_in() {
            return arg(format!(
                "channel expects {}-dimensional input, got {}x{}",
                self.dim_in(),
                x.rows(),
                x.cols()
            ));
        }
        Ok(self.apply_operator_unchecked(x))
    }

    fn apply_operator_unchecked(&self, x: &ComplexMatrix) -> ComplexMatrix {
        match self {
            Channel::Kraus(k) => {
                let mut acc = ComplexMatrix::zeros(k.dim_out, k.dim_out);
                for e in &k.kraus {
                    acc = &acc + &(&(e * x) * &e.adjoint());
                }
                acc
            }
            Channel::MeasPrep(m) => {
                let mut acc = ComplexMatrix::zeros(m.dim_out, m.dim_out);
                for (eff, sigma) in m.effects.iter().zip(&m.preps) {
                    let w = (eff * x).trace();
                    acc = &acc + &sigma.matrix().scale(w);
                }
                acc
            }
            Channel::Qc(q) => {
                let probs: Vec<C64> = q.effects.iter().map(|eff| (eff * x).trace()).collect();
                ComplexMatrix::diagonal(&probs)
            }
            Channel::Cq(cq) => {
                let mut acc = ComplexMatrix::zeros(cq.dim_out(), cq.dim_out());
                for (i, sigma) in cq.preps.iter().enumerate() {
                    acc = &acc + &sigma.matrix().scale(x[(i, i)]);
                }
                acc
            }
            Channel::OrthoMix(o) => {
                let blocks: Vec<(f64, ComplexMatrix)> = o
                    .parts
                    .iter()
                    .map(|p| (p.weight, p.channel.apply_operator_unchecked(x)))
                    .collect();
                block_diag(&blocks)
            }
        }
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.apply_operator(rho.matrix()).map(DensityMatrix::from_matrix_unchecked)
    }

    /// Output for a pure input; avoids forming `|psi><psi|` where the form allows.
    pub fn apply_pure(&self, psi: &PureState) -> Result<DensityMatrix> {
        if psi.dim() != self.dim_in() {
            return arg(format!("channel expects dim {}, state has dim {}", self.dim_in(), psi.dim()));
        }
        Ok(DensityMatrix::from_matrix_unchecked(self.apply_pure_unchecked(psi)))
    }

    pub(crate) fn apply_pure_unchecked(&self, psi: &PureState) -> ComplexMatrix {
        let v = psi.as_na();
        match self {
            Channel::Kraus(k) => {
                let mut acc = DMatrix::zeros(k.dim_out, k.dim_out);
                for e in &k.kraus {
                    let w = e.as_na() * v;
                    acc += &w * w.adjoint();
                }
                ComplexMatrix::from_na(acc)
            }
            Channel::MeasPrep(m) => {
                let mut acc = DMatrix::zeros(m.dim_out, m.dim_out);
                for (eff, sigma) in m.effects.iter().zip(&m.preps) {
                    let w = eff.expectation(psi).re;
                    if w != 0.0 {
                        acc += sigma.matrix().as_na() * c(w, 0.0);
                    }
                }
                ComplexMatrix::from_na(acc)
            }
            Channel::Qc(q) => {
                let probs: Vec<C64> =
                    q.effects.iter().map(|eff| c(eff.expectation(psi).re, 0.0)).collect();
                ComplexMatrix::diagonal(&probs)
            }
            Channel::Cq(cq) => {
                let mut acc = DMatrix::zeros(cq.dim_out(), cq.dim_out());
                for (i, sigma) in cq.preps.iter().enumerate() {
                    acc += sigma.matrix().as_na() * c(v[i].norm_sqr(), 0.0);
                }
                ComplexMatrix::from_na(acc)
            }
            Channel::OrthoMix(o) => {
                let blocks: Vec<(f64, ComplexMatrix)> = o
                    .parts
                    .iter()
                    .map(|p| (p.weight, p.channel.apply_pure_unchecked(psi)))
                    .collect();
                block_diag(&blocks)
            }
        }
    }

    /// Heisenberg-picture map `Y -> Phi^dagger(Y)` on `dim_out x dim_out` operators.
    pub fn adjoint_apply(&self, y: &ComplexMatrix) -> Result<ComplexMatrix> {
        if !y.is_square() || y.rows() != self.dim_out() {
            return arg("adjoint expects a dim_out x dim_out operator");
        }
        Ok(self.adjoint_apply_unchecked(y))
    }

    pub(crate) fn adjoint_apply_unchecked(&self, y: &ComplexMatrix) -> ComplexMatrix {
        match self {
            Channel::Kraus(k) => {
                let mut acc = ComplexMatrix::zeros(k.dim_in, k.dim_in);
                for e in &k.kraus {
                    acc = &acc + &(&(&e.adjoint() * y) * e);
                }
                acc
            }
            Channel::MeasPrep(m) => {
                let mut acc = ComplexMatrix::zeros(m.dim_in, m.dim_in);
                for (eff, sigma) in m.effects.iter().zip(&m.preps) {
                    acc = &acc + &eff.scale((sigma.matrix() * y).trace());
                }
                acc
            }
            Channel::Qc(q) => {
                let mut acc = ComplexMatrix::zeros(q.dim_in, q.dim_in);
                for (i, eff) in q.effects.iter().enumerate() {
                    acc = &acc + &eff.scale(y[(i, i)]);
                }
                acc
            }
            Channel::Cq(cq) => {
                let diag: Vec<C64> = cq.preps.iter().map(|s| (s.matrix() * y).trace()).collect();
                ComplexMatrix::diagonal(&diag)
            }
            Channel::OrthoMix(o) => {
                let mut acc = ComplexMatrix::zeros(self.dim_in(), self.dim_in());
                for (i, p) in o.parts.iter().enumerate() {
                    let block = o.block(y, i);
                    acc = &acc + &p.channel.adjoint_apply_unchecked(&block).scale_re(p.weight);
                }
                acc
            }
        }
    }

    /// Equivalent Kraus representation.
    pub fn to_kraus(&self) -> KrausChannel {
        match self {
            Channel::Kraus(k) => k.clone(),
            Channel::MeasPrep(m) => kraus_from_meas_prepare(m),
            Channel::Qc(q) => {
                let preps = (0..q.dim_out())
                    .map(|i| PureState::basis(q.dim_out(), i).projector())
                    .collect();
                kraus_from_meas_prepare(&MeasPrepChannel {
                    dim_in: q.dim_in,
                    dim_out: q.dim_out(),
                    effects: q.effects.clone(),
                    preps,
                })
            }
            Channel::Cq(cq) => {
                let effects = (0..cq.dim_in)
                    .map(|i| PureState::basis(cq.dim_in, i).projector().into_matrix())
                    .collect();
                kraus_from_meas_prepare(&MeasPrepChannel {
                    dim_in: cq.dim_in,
                    dim_out: cq.dim_out(),
                    effects,
                    preps: cq.preps.clone(),
                })
            }
            Channel::OrthoMix(o) => {
                let total = self.dim_out();
                let offsets = o.offsets();
                let mut kraus = Vec::new();
                for (p, &off) in o.parts.iter().zip(&offsets) {
                    if p.weight == 0.0 {
                        continue;
                    }
                    let s = p.weight.sqrt();
                    for e in p.channel.to_kraus().kraus {
                        let mut big = DMatrix::zeros(total, self.dim_in());
                        big.view_mut((off, 0), (e.rows(), e.cols())).copy_from(&(e.as_na() * c(s, 0.0)));
                        kraus.push(ComplexMatrix::from_na(big));
                    }
                }
                KrausChannel { dim_in: self.dim_in(), dim_out: total, kraus }
            }
        }
    }

    /// Equivalent measure-and-prepare form for manifestly entanglement-breaking channels.
    pub fn to_meas_prep(&self) -> Option<MeasPrepChannel> {
        match self {
            Channel::Kraus(_) => None,
            Channel::MeasPrep(m) => Some(m.clone()),
            Channel::Qc(q) => Some(MeasPrepChannel {
                dim_in: q.dim_in,
                dim_out: q.dim_out(),
                effects: q.effects.clone(),
                preps: (0..q.dim_out()).map(|i| PureState::basis(q.dim_out(), i).projector()).collect(),
            }),
            Channel::Cq(cq) => Some(MeasPrepChannel {
                dim_in: cq.dim_in,
                dim_out: cq.dim_out(),
                effects: (0..cq.dim_in)
                    .map(|i| PureState::basis(cq.dim_in, i).projector().into_matrix())
                    .collect(),
                preps: cq.preps.clone(),
            }),
            Channel::OrthoMix(o) => {
                let total = self.dim_out();
                let mut effects = Vec::new();
                let mut preps = Vec::new();
                for (p, off) in o.parts.iter().zip(o.offsets()) {
                    let part = p.channel.to_meas_prep()?;
                    for (eff, sigma) in part.effects.into_iter().zip(part.preps) {
                        let d = sigma.dim();
                        let mut big = DMatrix::zeros(total, total);
                        big.view_mut((off, off), (d, d)).copy_from(sigma.matrix().as_na());
                        effects.push(eff.scale_re(p.weight));
                        preps.push(DensityMatrix::from_matrix_unchecked(ComplexMatrix::from_na(big)));
                    }
                }
                Some(MeasPrepChannel { dim_in: self.dim_in(), dim_out: total, effects, preps })
            }
        }
    }

    /// Choi matrix `sum_{a,b} Phi(|a><b|) (x) |a><b|` (unnormalized).
    pub fn choi(&self) -> Result<ComplexMatrix> {
        let (din, dout) = (self.dim_in(), self.dim_out());
        let big = dout * din;
        if big > linalg::MAX_DIM {
            return Err(Error::Capacity { dim: big, cap: linalg::MAX_DIM });
        }
        let mut out = DMatrix::zeros(big, big);
        for a in 0..din {
            for b in 0..din {
                let mut eab = ComplexMatrix::zeros(din, din);
                let mut m = eab.clone().into_na();
                m[(a, b)] = c(1.0, 0.0);
                eab = ComplexMatrix::from_na(m);
                let phi = self.apply_operator_unchecked(&eab);
                for i in 0..dout {
                    for j in 0..dout {
                        out[(i * din + a, j * din + b)] = phi[(i, j)];
                    }
                }
            }
        }
        Ok(ComplexMatrix::from_na(out))
    }

    /// Trace-preservation residual and complete-positivity check via the Choi matrix.
    pub fn validate_cptp(&self) -> Result<CptpReport> {
        let residual = identity_residual(&self.adjoint_apply_unchecked(&ComplexMatrix::identity(self.dim_out())));
        let choi_min = min_eigenvalue(&self.choi()?);
        Ok(CptpReport {
            completeness_residual: residual,
            choi_min_eigenvalue: choi_min,
            pass: residual <= tol::SPECTRAL && choi_min >= -tol::SPECTRAL,
        })
    }

    /// `(Phi (x) Phi)(rho12)`.
    pub fn tensor_square_apply(&self, rho12: &DensityMatrix) -> Result<DensityMatrix> {
        let d = self.dim_in();
        if rho12.dim() != d * d {
            return arg(format!("expected a {}-dimensional two-party state, got {}", d * d, rho12.dim()));
        }
        let k = self.to_kraus();
        let dout = k.dim_out;
        let mut acc = ComplexMatrix::zeros(dout * dout, dout * dout);
        for a in &k.kraus {
            for b in &k.kraus {
                let ab = tensor(a, b)?;
                acc = &acc + &(&(&ab * rho12.matrix()) * &ab.adjoint());
            }
        }
        Ok(DensityMatrix::from_matrix_unchecked(acc))
    }
}

/// Spectral factorization of a measure-and-prepare channel into Kraus form:
/// `M = sum mu |u><u|`, `sigma = sum lambda |v><v|` gives `sqrt(lambda mu) |v><u|`.
pub fn kraus_from_meas_prepare(ch: &MeasPrepChannel) -> KrausChannel {
    let mut kraus = Vec::new();
    for (eff, sigma) in ch.effects.iter().zip(&ch.preps) {
        let em = eig_hermitian(&eff.hermitian_part()).expect("effects are Hermitian");
        let es = eig_hermitian(sigma.matrix()).expect("states are Hermitian");
        for (i, &mu) in em.values.iter().enumerate() {
            if mu <= 1e-14 {
                continue;
            }
            let u = em.vector(i);
            for (j, &lam) in es.values.iter().enumerate() {
                if lam <= 1e-14 {
                    continue;
                }
                let v = es.vector(j);
                kraus.push(ComplexMatrix::outer(&v, &u).scale_re((lam * mu).sqrt()));
            }
        }
    }
    if kraus.is_empty() {
        kraus.push(ComplexMatrix::zeros(ch.dim_out, ch.dim_in));
    }
    KrausChannel { dim_in: ch.dim_in, dim_out: ch.dim_out, kraus }
}

/// Unitary dilation of a Kraus channel on `C^dim_out (x) C^r`.
#[derive(Clone, Debug)]
pub struct Stinespring {
    pub unitary: ComplexMatrix,
    pub dim_out: usize,
    pub ancilla: usize,
    /// Column of the dilation space that input basis vector `a` occupies.
    pub input_embedding: Vec<usize>,
}

impl Stinespring {
    /// `tr_anc(U (rho embedded) U^dagger)`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let n = self.unitary.rows();
        let din = self.input_embedding.len();
        if rho.dim() != din {
            return arg("input dimension mismatch");
        }
        let emb = ComplexMatrix::from_fn(n, din, |row, a| {
            if self.input_embedding[a] == row {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let v = &self.unitary * &emb;
        let big = &(&v * rho.matrix()) * &v.adjoint();
        partial_trace_matrix(&big, (self.dim_out, self.ancilla), TraceOut::Second)
            .map(DensityMatrix::from_matrix_unchecked)
    }
}

/// Completes the isometry `|a> -> sum_k E_k|a>|k>` to a unitary.
pub fn stinespring_unitary(ch: &KrausChannel) -> Result<Stinespring> {
    let r = ch.kraus.len();
    let (din, dout) = (ch.dim_in, ch.dim_out);
    let n = dout * r;
    if n < din {
        return arg("dilation space smaller than the input space");
    }
    if n > linalg::MAX_DIM {
        return Err(Error::Capacity { dim: n, cap: linalg::MAX_DIM });
    }
    let input_embedding: Vec<usize> = if din <= dout { (0..din).map(|a| a * r).collect() } else { (0..din).collect() };
    let mut u: DMatrix<C64> = DMatrix::zeros(n, n);
    let mut filled = vec![false; n];
    for (a, &col) in input_embedding.iter().enumerate() {
        for (k, e) in ch.kraus.iter().enumerate() {
            for b in 0..dout {
                u[(b * r + k, col)] = e[(b, a)];
            }
        }
        filled[col] = true;
    }
    // Gram-Schmidt the remaining columns against everything placed so far.
    let mut basis: Vec<nalgebra::DVector<C64>> =
        input_embedding.iter().map(|&col| u.column(col).into_owned()).collect();
    let mut candidate = 0;
    for col in 0..n {
        if filled[col] {
            continue;
        }
        loop {
            let mut v = nalgebra::DVector::zeros(n);
            v[candidate] = c(1.0, 0.0);
            candidate += 1;
            for _ in 0..2 {
                for q in &basis {
                    let proj = q.dotc(&v);
                    v -= q * proj;
                }
            }
            let norm = v.norm();
            if norm > 1e-8 {
                let v = v / c(norm, 0.0);
                u.set_column(col, &v);
                basis.push(v);
                break;
            }
            if candidate >= n {
                return Err(Error::Construction("could not complete isometry".into()));
            }
        }
    }
    Ok(Stinespring { unitary: ComplexMatrix::from_na(u), dim_out: dout, ancilla: r, input_embedding })
}
