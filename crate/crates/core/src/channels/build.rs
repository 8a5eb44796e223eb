//! Constructors for the named channels: swap test, partial trace and its
//! entanglement-breaking smoothing, the "cube" channel, the Hamiltonian
//! penalty channel, generalized Paulis, flagged mixtures and a few textbook
//! channels used as fixtures.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{Channel, CqChannel, KrausChannel, MeasPrepChannel, OrthoMix, QcChannel};
use crate::error::{arg, Error, Result};
use crate::linalg::{c, tensor, tol, ComplexMatrix, DensityMatrix, PureState, C64};

/// Single-row Kraus operator `|out><v|`.
fn row_op(out_dim: usize, out: usize, v: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(out_dim, v.len(), |i, j| if i == out { v[j].conj() } else { c(0.0, 0.0) })
}

/// Orthonormal bases of the symmetric and antisymmetric subspaces of `C^d (x) C^d`.
fn sym_antisym_bases(d: usize) -> (Vec<Vec<C64>>, Vec<Vec<C64>>) {
    let r = 1.0 / 2f64.sqrt();
    let mut sym = Vec::new();
    let mut anti = Vec::new();
    for a in 0..d {
        let mut v = vec![c(0.0, 0.0); d * d];
        v[a * d + a] = c(1.0, 0.0);
        sym.push(v);
        for b in (a + 1)..d {
            let mut s = vec![c(0.0, 0.0); d * d];
            s[a * d + b] = c(r, 0.0);
            s[b * d + a] = c(r, 0.0);
            sym.push(s);
            let mut t = vec![c(0.0, 0.0); d * d];
            t[a * d + b] = c(r, 0.0);
            t[b * d + a] = c(-r, 0.0);
            anti.push(t);
        }
    }
    (sym, anti)
}

/// Swap-test channel on `C^d (x) C^d`: outcome `|1>` with probability
/// `tr(Pi_antisym rho) = (1 - tr(S rho)) / 2`, otherwise `|0>`.
pub fn build_swap_channel(d: usize) -> KrausChannel {
    assert!(d >= 1);
    let (sym, anti) = sym_antisym_bases(d);
    let mut kraus: Vec<ComplexMatrix> = sym.iter().map(|v| row_op(2, 0, v)).collect();
    kraus.extend(anti.iter().map(|v| row_op(2, 1, v)));
    KrausChannel { dim_in: d * d, dim_out: 2, kraus }
}

/// `rho12 -> tr_2(rho12)`.
pub fn build_trace_channel(d: usize) -> KrausChannel {
    assert!(d >= 1);
    let kraus = (0..d)
        .map(|k| {
            ComplexMatrix::from_fn(d, d * d, |a, col| if col == a * d + k { c(1.0, 0.0) } else { c(0.0, 0.0) })
        })
        .collect();
    KrausChannel { dim_in: d * d, dim_out: d, kraus }
}

/// Identity, `sigma_x`, `sigma_y`, `sigma_z`.
pub fn pauli_matrices() -> [ComplexMatrix; 4] {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        ComplexMatrix::identity(2),
        ComplexMatrix::new(2, 2, vec![z, o, o, z]).unwrap(),
        ComplexMatrix::new(2, 2, vec![z, -i, i, z]).unwrap(),
        ComplexMatrix::new(2, 2, vec![o, z, z, -o]).unwrap(),
    ]
}

/// Largest epsilon for which every effect of the two-qubit Pauli expansion is
/// positive semidefinite: the effect for `(i, j, s, t)` has eigenvalues
/// `(1/9 + eps (s a / 3 + t b / 3 + s t a b)) / 4` with `a, b = +-1`, whose
/// minimum is `(1/9 - eps) / 4`.
pub const PAULI_EXPANSION_MAX_EPSILON: f64 = 1.0 / 9.0;

/// Smoothed partial trace `rho -> (1 - eps) I/d + eps tr_2(rho)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EbTraceChannel {
    pub d: usize,
    pub epsilon: f64,
    pub kraus: KrausChannel,
    /// Present for `d = 2` when every expansion effect is PSD.
    pub meas_prep: Option<MeasPrepChannel>,
    /// Smallest eigenvalue across the 36 expansion effects (`d = 2` only).
    pub min_effect_eigenvalue: Option<f64>,
    /// `true` when a measure-and-prepare realization was produced and checked.
    pub entanglement_breaking_verified: bool,
}

impl EbTraceChannel {
    /// The measure-and-prepare form when available, otherwise the Kraus form.
    pub fn channel(&self) -> Channel {
        match &self.meas_prep {
            Some(m) => m.clone().into(),
            None => self.kraus.clone().into(),
        }
    }
}

/// The 36 effects and prepared states of the two-qubit Pauli expansion for
/// `tr_2((1 - eps) I/4 + eps rho)`. Effects are returned even when not PSD.
pub fn pauli_expansion_terms(epsilon: f64) -> Vec<(ComplexMatrix, DensityMatrix)> {
    let p = pauli_matrices();
    let id = ComplexMatrix::identity(2);
    let mut out = Vec::with_capacity(36);
    for i in 1..=3 {
        for j in 1..=3 {
            for s in [1.0, -1.0] {
                for t in [1.0, -1.0] {
                    let si = tensor(&p[i], &id).unwrap();
                    let sj = tensor(&id, &p[j]).unwrap();
                    let sij = tensor(&p[i], &p[j]).unwrap();
                    let m = &(&(&ComplexMatrix::identity(4).scale_re(1.0 / 9.0)
                        + &si.scale_re(epsilon * s / 3.0))
                        + &sj.scale_re(epsilon * t / 3.0))
                        + &sij.scale_re(epsilon * s * t);
                    let prep = (&id + &p[i].scale_re(s)).scale_re(0.5);
                    out.push((m.scale_re(0.25), DensityMatrix::from_matrix_unchecked(prep)));
                }
            }
        }
    }
    out
}

pub fn build_trace_channel_eb(d: usize, epsilon: f64) -> Result<EbTraceChannel> {
    if d < 1 {
        return arg("d must be at least 1");
    }
    let upper = 1.0 / (d * d) as f64;
    if !(epsilon > 0.0 && epsilon < upper) {
        return arg(format!("epsilon must lie in (0, {upper}), got {epsilon}"));
    }
    let dd = d * d;
    let mut kraus: Vec<ComplexMatrix> =
        build_trace_channel(d).kraus.into_iter().map(|e| e.scale_re(epsilon.sqrt())).collect();
    let w = ((1.0 - epsilon) / d as f64).sqrt();
    for a in 0..d {
        for j in 0..dd {
            kraus.push(ComplexMatrix::from_fn(d, dd, |r, col| {
                if r == a && col == j {
                    c(w, 0.0)
                } else {
                    c(0.0, 0.0)
                }
            }));
        }
    }
    let kraus = KrausChannel::with_dims(dd, d, kraus)?;
    let (mut meas_prep, mut min_eig) = (None, None);
    if d == 2 {
        let terms = pauli_expansion_terms(epsilon);
        let min = terms.iter().map(|(m, _)| super::min_eigenvalue(m)).fold(f64::INFINITY, f64::min);
        min_eig = Some(min);
        if min >= -tol::ALGEBRAIC {
            let (effects, preps) = terms.into_iter().unzip();
            meas_prep = Some(MeasPrepChannel::new(effects, preps)?);
        }
    }
    let verified = meas_prep.is_some();
    Ok(EbTraceChannel {
        d,
        epsilon,
        kraus,
        meas_prep,
        min_effect_eigenvalue: min_eig,
        entanglement_breaking_verified: verified,
    })
}

/// Generalized Pauli operators `X_{m n + k} = T^m R^k` with `T|j> = |j+1 mod n>`
/// and `R|j> = exp(2 pi i j / n)|j>`.
pub fn build_pauli_generalized(n: usize) -> Vec<ComplexMatrix> {
    assert!(n >= 1);
    let mut out = Vec::with_capacity(n * n);
    for m in 0..n {
        for k in 0..n {
            // T^m R^k |j> = exp(2 pi i j k / n) |j + m mod n>
            out.push(ComplexMatrix::from_fn(n, n, |row, j| {
                if row == (j + m) % n {
                    C64::from_polar(1.0, 2.0 * PI * (j * k) as f64 / n as f64)
                } else {
                    c(0.0, 0.0)
                }
            }));
        }
    }
    out
}

/// Projector onto `(|i> + sign |j>)/sqrt 2`.
fn pair_projector(n: usize, i: usize, j: usize, sign: f64) -> ComplexMatrix {
    let mut v = vec![c(0.0, 0.0); n];
    v[i] = c(1.0, 0.0);
    v[j] = c(sign, 0.0);
    let psi = PureState::normalized(v).unwrap();
    psi.projector().into_matrix()
}

/// The "cube" channel: POVM `{Pi_ij (x) Pi'_ij / (d(d-1))}_{i<j}` preparing
/// `|v><v|`, completed by `M = I - sum / (d(d-1))` preparing `|v'><v'|`.
/// Its output is pure exactly on `|psi>|psi>` with `|psi>` of equal-magnitude
/// real-sign amplitudes.
pub fn build_cube_channel(d: usize, v: &PureState, v_prime: &PureState) -> Result<MeasPrepChannel> {
    if d < 2 {
        return arg("cube channel needs d >= 2");
    }
    if v.dim() != v_prime.dim() {
        return arg("flag states differ in dimension");
    }
    if v.inner(v_prime).norm() > tol::ALGEBRAIC {
        return arg("flag states must be orthogonal");
    }
    let norm = 1.0 / (d * (d - 1)) as f64;
    let mut effects = Vec::new();
    let mut sum = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in (i + 1)..d {
            let e = tensor(&pair_projector(d, i, j, 1.0), &pair_projector(d, i, j, -1.0))?.scale_re(norm);
            sum = &sum + &e;
            effects.push(e);
        }
    }
    let m = &ComplexMatrix::identity(d * d) - &sum;
    let min = super::min_eigenvalue(&m);
    if min <= 0.0 {
        return Err(Error::Construction(format!("cube completion has eigenvalue {min}")));
    }
    let mut preps = vec![v.projector(); effects.len()];
    effects.push(m);
    preps.push(v_prime.projector());
    MeasPrepChannel::new(effects, preps)
}

/// Penalty channel `rho -> tr(s H rho)|w><w| + tr((I - s H) rho)|w'><w'|`.
pub fn build_h_channel(
    hmat: &ComplexMatrix,
    scale: f64,
    w: &PureState,
    w_prime: &PureState,
) -> Result<MeasPrepChannel> {
    if !hmat.is_hermitian(tol::ALGEBRAIC) {
        return arg("H must be Hermitian");
    }
    if w.dim() != w_prime.dim() || w.inner(w_prime).norm() > tol::ALGEBRAIC {
        return arg("flag states must be orthogonal and equally sized");
    }
    let scaled = hmat.hermitian_part().scale_re(scale);
    let spec = crate::linalg::hermitian_spectrum(scaled.as_na());
    let (lo, hi) = (spec[0], spec[spec.len() - 1]);
    if lo < -tol::ALGEBRAIC {
        return arg(format!("scale * H has negative eigenvalue {lo}"));
    }
    if hi > 1.0 + tol::ALGEBRAIC {
        return arg(format!("scale * H has eigenvalue {hi} above 1"));
    }
    let rest = &ComplexMatrix::identity(hmat.rows()) - &scaled;
    MeasPrepChannel::new(vec![scaled, rest], vec![w.projector(), w_prime.projector()])
}

/// Weighted flagged direct sum of channels sharing an input space.
pub fn orthomix(parts: Vec<(f64, Channel)>) -> Result<Channel> {
    OrthoMix::new(parts).map(Channel::OrthoMix)
}

/// Computational-basis dephasing `{|i><i|}`.
pub fn dephasing(d: usize) -> KrausChannel {
    let kraus = (0..d).map(|i| PureState::basis(d, i).projector().into_matrix()).collect();
    KrausChannel { dim_in: d, dim_out: d, kraus }
}

/// Qubit depolarizing channel `rho -> (1-p) rho + p I/2` in Kraus form.
pub fn depolarizing_qubit(p: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&p) {
        return arg("depolarizing parameter must lie in [0, 1]");
    }
    let [i, x, y, z] = pauli_matrices();
    KrausChannel::new(vec![
        i.scale_re((1.0 - 3.0 * p / 4.0).sqrt()),
        x.scale_re((p / 4.0).sqrt()),
        y.scale_re((p / 4.0).sqrt()),
        z.scale_re((p / 4.0).sqrt()),
    ])
}

/// Unitary channel.
pub fn unitary_channel(u: ComplexMatrix) -> Result<KrausChannel> {
    KrausChannel::new(vec![u])
}

/// Classical channel `p(y|x)` embedded as a c-q channel with diagonal outputs.
pub fn cq_from_stochastic(rows: &[Vec<f64>]) -> Result<CqChannel> {
    let preps = rows.iter().map(|r| DensityMatrix::diagonal(r)).collect::<Result<Vec<_>>>()?;
    CqChannel::new(preps)
}

/// Classical channel embedded as a q-c channel with diagonal effects:
/// effect `y` is `diag_x p(y|x)`.
pub fn qc_from_stochastic(rows: &[Vec<f64>]) -> Result<QcChannel> {
    let outputs = rows.first().map_or(0, Vec::len);
    let effects = (0..outputs)
        .map(|y| ComplexMatrix::diagonal(&rows.iter().map(|r| c(r[y], 0.0)).collect::<Vec<_>>()))
        .collect();
    QcChannel::new(effects)
}

/// Seeded random channels for property tests and fixtures.
pub mod random {
    use super::*;
    use crate::linalg::random as lr;
    use rand::Rng;

    /// Kraus channel from the blocks of a Haar-ish random isometry; needs
    /// `rank * dim_out >= dim_in`.
    pub fn kraus_channel<R: Rng + ?Sized>(dim_in: usize, dim_out: usize, rank: usize, rng: &mut R) -> KrausChannel {
        assert!(rank * dim_out >= dim_in, "an isometry needs rank * dim_out >= dim_in");
        let g = lr::gaussian_matrix(dim_out * rank, dim_in, rng);
        // Orthonormalize columns: V = G (G^dagger G)^{-1/2}.
        let gram = &g.adjoint() * &g;
        let e = crate::linalg::eig_hermitian(&gram).unwrap();
        let inv_sqrt = ComplexMatrix::diagonal(&e.values.iter().map(|&x| c(1.0 / x.sqrt(), 0.0)).collect::<Vec<_>>());
        let v = &g * &(&(&e.vectors * &inv_sqrt) * &e.vectors.adjoint());
        let kraus = (0..rank)
            .map(|k| ComplexMatrix::from_fn(dim_out, dim_in, |b, a| v[(k * dim_out + b, a)]))
            .collect();
        KrausChannel { dim_in, dim_out, kraus }
    }

    /// Measure-and-prepare channel with a random rank-one POVM; needs `outcomes >= dim_in`.
    pub fn meas_prep_channel<R: Rng + ?Sized>(dim_in: usize, dim_out: usize, outcomes: usize, rng: &mut R) -> MeasPrepChannel {
        assert!(outcomes >= dim_in, "a rank-one POVM needs at least dim_in outcomes");
        let k = kraus_channel(dim_in, 1, outcomes, rng);
        let effects = k.kraus.iter().map(|e| &e.adjoint() * e).collect();
        let preps = (0..outcomes).map(|_| lr::density(dim_out, rng)).collect();
        MeasPrepChannel::new(effects, preps).expect("random POVM is complete")
    }
}
