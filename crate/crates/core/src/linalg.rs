//! Dense complex linear algebra: matrices, pure states, density matrices and
//! the handful of spectral routines everything else is built on.
//!
//! Storage is backed by `nalgebra`; the wrappers here enforce the validity
//! invariants (finite entries, normalization, Hermiticity, unit trace) and the
//! desk-scale dimension cap.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{arg, Error, Result};

pub type C64 = Complex64;

/// Largest admissible row/column count of any matrix.
pub const MAX_DIM: usize = 4096;

/// Tolerance ladder shared across the crate.
pub mod tol {
    pub const CONSTRUCTION: f64 = 1e-12;
    pub const ALGEBRAIC: f64 = 1e-10;
    pub const SPECTRAL: f64 = 1e-9;
    pub const OPTIMIZER: f64 = 1e-6;
}

pub const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn check_dim(dim: usize) -> Result<()> {
    if dim > MAX_DIM {
        Err(Error::Capacity { dim, cap: MAX_DIM })
    } else {
        Ok(())
    }
}

/// Dense complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        check_dim(rows)?;
        check_dim(cols)?;
        if entries.len() != rows * cols {
            return arg(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            ));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invariant("matrix has non-finite entries".into()));
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, &entries)))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let cols = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != cols) {
            return arg("ragged rows");
        }
        let entries = rows.iter().flat_map(|row| row.iter().map(|&x| c(x, 0.0))).collect();
        Self::new(r, cols, entries)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    pub fn diagonal(values: &[C64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { C64::new(0.0, 0.0) })
    }

    /// `|a><b|`
    pub fn outer(a: &PureState, b: &PureState) -> Self {
        Self(&a.0 * b.0.adjoint())
    }

    pub(crate) fn from_na(m: DMatrix<C64>) -> Self {
        Self(m)
    }

    pub fn as_na(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_na(self) -> DMatrix<C64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(c(s, 0.0))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-entry distance between two equally shaped matrices.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.0.shape(), other.0.shape(), "shape mismatch");
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// `(A + A^dagger) / 2`
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * c(0.5, 0.0))
    }

    /// Applies the matrix to a state vector (unnormalized result).
    pub fn apply_vec(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.0 * v
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols() != other.rows() {
            return arg(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            ));
        }
        Ok(Self(&self.0 * &other.0))
    }

    /// Expectation `<psi|A|psi>`.
    pub fn expectation(&self, psi: &PureState) -> C64 {
        psi.0.dotc(&(&self.0 * &psi.0))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| [self.0[(i, j)].re, self.0[(i, j)].im]).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(D::Error::custom("matrix rows have unequal lengths"));
        }
        let entries = rows.iter().flatten().map(|&[re, im]| c(re, im)).collect();
        ComplexMatrix::new(rows.len(), cols, entries).map_err(D::Error::custom)
    }
}

/// Normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState(DVector<C64>);

impl PureState {
    /// Wraps amplitudes that must already have unit norm (within 1e-12).
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        check_dim(amplitudes.len())?;
        if amplitudes.is_empty() {
            return arg("pure state needs at least one amplitude");
        }
        let v = DVector::from_vec(amplitudes);
        if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invariant("state has non-finite amplitudes".into()));
        }
        let norm_sq = v.norm_squared();
        if (norm_sq - 1.0).abs() > tol::CONSTRUCTION {
            return Err(Error::Invariant(format!("state norm^2 is {norm_sq}, expected 1")));
        }
        Ok(Self(v))
    }

    /// Rescales arbitrary non-zero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let v = DVector::from_vec(amplitudes);
        let n = v.norm();
        if !(n.is_finite() && n > 0.0) {
            return arg("cannot normalize a zero or non-finite vector");
        }
        Self::new((v / c(n, 0.0)).iter().copied().collect())
    }

    pub(crate) fn from_na_normalizing(v: DVector<C64>) -> Self {
        let n = v.norm();
        Self(v / c(n, 0.0))
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::normalized(amplitudes.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut v = DVector::zeros(dim);
        v[index] = c(1.0, 0.0);
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.0.as_slice()
    }

    pub fn as_na(&self) -> &DVector<C64> {
        &self.0
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Self) -> C64 {
        self.0.dotc(&other.0)
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim() * other.dim())?;
        Ok(Self(self.0.kronecker(&other.0)))
    }

    pub fn with_phase(&self, phase: f64) -> Self {
        Self(&self.0 * C64::from_polar(1.0, phase))
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix(ComplexMatrix(&self.0 * self.0.adjoint()))
    }
}

impl Serialize for PureState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let amps: Vec<[f64; 2]> = self.0.iter().map(|z| [z.re, z.im]).collect();
        amps.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PureState {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let amps: Vec<[f64; 2]> = Vec::deserialize(d)?;
        PureState::new(amps.into_iter().map(|[re, im]| c(re, im)).collect()).map_err(D::Error::custom)
    }
}

/// Positive semidefinite, unit-trace Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return arg(format!("density matrix must be square, got {}x{}", m.rows(), m.cols()));
        }
        if !m.is_hermitian(tol::CONSTRUCTION) {
            return Err(Error::Invariant("density matrix is not Hermitian".into()));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > tol::ALGEBRAIC || tr.im.abs() > tol::ALGEBRAIC {
            return Err(Error::Invariant(format!("density matrix trace is {tr}")));
        }
        let m = m.hermitian_part();
        let min = hermitian_spectrum(m.as_na()).first().copied().unwrap_or(0.0);
        if min < -tol::ALGEBRAIC {
            return Err(Error::Invariant(format!("density matrix has eigenvalue {min}")));
        }
        Ok(Self(m))
    }

    /// Wraps an operator produced by a trusted construction (channel output,
    /// partial trace of a valid state); only Hermiticity is enforced.
    pub(crate) fn from_matrix_unchecked(m: ComplexMatrix) -> Self {
        Self(m.hermitian_part())
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64))
    }

    /// Diagonal state from a probability vector.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::diagonal(&probs.iter().map(|&p| c(p, 0.0)).collect::<Vec<_>>()))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self(tensor(&self.0, &other.0)?))
    }

    /// Eigenvalues in ascending order.
    pub fn spectrum(&self) -> Vec<f64> {
        hermitian_spectrum(self.0.as_na())
    }

    pub fn purity(&self) -> f64 {
        (&self.0 * &self.0).trace().re
    }

    /// `rho -> U rho U^dagger`
    pub fn conjugate(&self, u: &ComplexMatrix) -> Self {
        Self::from_matrix_unchecked(&(u * &self.0) * &u.adjoint())
    }
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        DensityMatrix::new(ComplexMatrix::deserialize(d)?).map_err(D::Error::custom)
    }
}

/// Kronecker product.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dim(a.rows() * b.rows())?;
    check_dim(a.cols() * b.cols())?;
    Ok(ComplexMatrix(a.0.kronecker(&b.0)))
}

/// Which factor of a bipartite space to trace out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceOut {
    First,
    Second,
}

/// Partial trace of an arbitrary operator on `d1 x d2`.
pub fn partial_trace_matrix(
    m: &ComplexMatrix,
    dims: (usize, usize),
    which: TraceOut,
) -> Result<ComplexMatrix> {
    let (d1, d2) = dims;
    if !m.is_square() || m.rows() != d1 * d2 {
        return arg(format!(
            "operator of size {}x{} does not factor as {d1}*{d2}",
            m.rows(),
            m.cols()
        ));
    }
    let a = m.as_na();
    Ok(match which {
        TraceOut::Second => ComplexMatrix::from_fn(d1, d1, |i, j| {
            (0..d2).map(|k| a[(i * d2 + k, j * d2 + k)]).sum()
        }),
        TraceOut::First => ComplexMatrix::from_fn(d2, d2, |i, j| {
            (0..d1).map(|k| a[(k * d2 + i, k * d2 + j)]).sum()
        }),
    })
}

pub fn partial_trace(rho: &DensityMatrix, dims: (usize, usize), which: TraceOut) -> Result<DensityMatrix> {
    partial_trace_matrix(rho.matrix(), dims, which).map(DensityMatrix::from_matrix_unchecked)
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct Eigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> PureState {
        PureState::from_na_normalizing(self.vectors.0.column(k).into_owned())
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let lam = DMatrix::from_diagonal(&DVector::from_iterator(
            self.values.len(),
            self.values.iter().map(|&x| c(x, 0.0)),
        ));
        ComplexMatrix(&self.vectors.0 * lam * self.vectors.0.adjoint())
    }
}

pub fn eig_hermitian(m: &ComplexMatrix) -> Result<Eigen> {
    let scale = m.max_abs().max(1.0);
    if !m.is_square() || !m.is_hermitian(1e-10 * scale) {
        return arg("eig_hermitian requires a Hermitian matrix");
    }
    let (values, vectors) = eigh_blocked(&m.hermitian_part().0);
    Ok(Eigen { values, vectors: ComplexMatrix(vectors) })
}

/// Connected components of the non-zero pattern of a square matrix.
/// A Hermitian matrix is permutation-similar to the direct sum of these blocks.
fn components(m: &DMatrix<C64>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if m[(i, j)] != C64::new(0.0, 0.0) || m[(j, i)] != C64::new(0.0, 0.0) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

fn eigh_dense(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = m.nrows();
    if n == 1 {
        return (vec![m[(0, 0)].re], DMatrix::identity(1, 1));
    }
    let se = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| se.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Full eigendecomposition exploiting block structure; values ascending.
pub(crate) fn eigh_blocked(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = m.nrows();
    let groups = components(m);
    if groups.len() == 1 {
        return eigh_dense(m);
    }
    let mut pairs: Vec<(f64, DVector<C64>)> = Vec::with_capacity(n);
    for g in &groups {
        let block = DMatrix::from_fn(g.len(), g.len(), |i, j| m[(g[i], g[j])]);
        let (vals, vecs) = eigh_dense(&block);
        for (k, v) in vals.into_iter().enumerate() {
            let mut full = DVector::zeros(n);
            for (i, &row) in g.iter().enumerate() {
                full[row] = vecs[(i, k)];
            }
            pairs.push((v, full));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let values = pairs.iter().map(|p| p.0).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| pairs[j].1[i]);
    (values, vectors)
}

/// Eigenvalues only, ascending; block structure is exploited.
pub(crate) fn hermitian_spectrum(m: &DMatrix<C64>) -> Vec<f64> {
    let groups = components(m);
    let mut values = Vec::with_capacity(m.nrows());
    for g in &groups {
        if g.len() == 1 {
            values.push(m[(g[0], g[0])].re);
            continue;
        }
        let block = DMatrix::from_fn(g.len(), g.len(), |i, j| m[(g[i], g[j])]);
        values.extend(block.symmetric_eigenvalues().iter().copied());
    }
    values.sort_by(f64::total_cmp);
    values
}

/// `-sum x log2 x` over a spectrum, with `0 log 0 = 0`.
pub(crate) fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let spec = rho.spectrum();
    if let Some(&min) = spec.first() {
        if min < -tol::ALGEBRAIC {
            return Err(Error::Invariant(format!("negative eigenvalue {min} in entropy")));
        }
    }
    Ok(entropy_of_spectrum(&spec).max(0.0))
}

/// Shannon entropy in bits.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if p.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
        return arg("probabilities must be finite and non-negative");
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > tol::ALGEBRAIC {
        return arg(format!("probabilities sum to {total}"));
    }
    Ok(entropy_of_spectrum(p))
}

#[derive(Clone, Debug)]
pub struct Schmidt {
    /// Descending, strictly positive (numerical rank).
    pub coefficients: Vec<f64>,
    /// `d1 x r`, orthonormal columns.
    pub left: ComplexMatrix,
    /// `d2 x r`, orthonormal columns.
    pub right: ComplexMatrix,
}

impl Schmidt {
    pub fn reassemble(&self) -> Vec<C64> {
        let (d1, d2) = (self.left.rows(), self.right.rows());
        let mut out = vec![c(0.0, 0.0); d1 * d2];
        for (k, &s) in self.coefficients.iter().enumerate() {
            for a in 0..d1 {
                for b in 0..d2 {
                    out[a * d2 + b] += self.left[(a, k)] * self.right[(b, k)] * s;
                }
            }
        }
        out
    }
}

pub fn schmidt_decompose(psi: &PureState, dims: (usize, usize)) -> Result<Schmidt> {
    let (d1, d2) = dims;
    if psi.dim() != d1 * d2 {
        return arg(format!("state of dim {} does not factor as {d1}*{d2}", psi.dim()));
    }
    let coeffs = DMatrix::from_fn(d1, d2, |a, b| psi.0[a * d2 + b]);
    let svd = coeffs.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^dagger");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let kept: Vec<usize> = order.into_iter().filter(|&k| svd.singular_values[k] > 1e-12).collect();
    let coefficients = kept.iter().map(|&k| svd.singular_values[k]).collect();
    let left = ComplexMatrix::from_fn(d1, kept.len(), |a, j| u[(a, kept[j])]);
    let right = ComplexMatrix::from_fn(d2, kept.len(), |b, j| v_t[(kept[j], b)]);
    Ok(Schmidt { coefficients, left, right })
}

/// Permutation `|a>|b> -> |b>|a>` on `C^d (x) C^d`.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    assert!(d >= 1, "swap needs d >= 1");
    ComplexMatrix::from_fn(d * d, d * d, |row, col| {
        let (a, b) = (col / d, col % d);
        if row == b * d + a {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

/// `tr(S rho)` for an operator on `C^d (x) C^d`, without building `S`.
pub fn swap_expectation(m: &ComplexMatrix, d: usize) -> Result<C64> {
    if !m.is_square() || m.rows() != d * d {
        return arg("swap expectation needs a d^2 x d^2 operator");
    }
    let mut acc = c(0.0, 0.0);
    for a in 0..d {
        for b in 0..d {
            acc += m[(a * d + b, b * d + a)];
        }
    }
    Ok(acc)
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows() {
            let row: Vec<String> = (0..self.cols())
                .map(|j| {
                    let z = self.0[(i, j)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Seeded samplers for states, unitaries and Hermitian matrices.
pub mod random {
    use super::*;
    use rand::Rng;
    use rand_distr::StandardNormal;

    pub fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    }

    /// Haar-random pure state (normalized complex Gaussian).
    pub fn pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
        loop {
            let v = DVector::from_fn(dim, |_, _| gaussian_c64(rng));
            if v.norm() > 1e-8 {
                return PureState::from_na_normalizing(v);
            }
        }
    }

    pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| gaussian_c64(rng))
    }

    /// Haar-random unitary from the QR decomposition of a Ginibre matrix.
    pub fn unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
        let g = gaussian_matrix(dim, dim, rng).0;
        let qr = g.qr();
        let (q, r) = (qr.q(), qr.r());
        let phases = DMatrix::from_fn(dim, dim, |i, j| {
            if i == j && r[(i, i)].norm() > 0.0 {
                r[(i, i)] / r[(i, i)].norm()
            } else if i == j {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        ComplexMatrix(q * phases)
    }

    pub fn hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
        gaussian_matrix(dim, dim, rng).hermitian_part()
    }

    /// Full-rank mixed state `G G^dagger / tr`.
    pub fn density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
        let g = gaussian_matrix(dim, dim, rng);
        let m = &g * &g.adjoint();
        let tr = m.trace().re;
        DensityMatrix::from_matrix_unchecked(m.scale_re(1.0 / tr))
    }

    /// Probability vector drawn from the flat Dirichlet distribution.
    pub fn simplex<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
        let mut w: Vec<f64> = (0..k).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        w
    }
}
