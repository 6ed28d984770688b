//! Classical–quantum states, density-matrix utilities, and the sufficient
//! conditions for quantum-conditional majorization.
//!
//! A CQ state pairs outcome probabilities `q_x` with memory states
//! `sigma_x`. A two-branch bound state
//! `omega |0><0| (x) |0><0| + (1 - omega) |1><1| (x) |psi><psi|`
//! conditionally majorizes the CQ state whenever `omega` stays below a
//! threshold computed from one decomposition of each memory state; for
//! pure conditionals the threshold is simply `q_j` and `psi` depends on a
//! single overlap constant.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::probcore::{majorizes_slices, ProbVector};
use crate::tol::{EPS_PROB, EPS_PSD};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

#[derive(Debug, Error)]
pub enum QuantumError {
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("conditional state {0} is not pure (second eigenvalue {1})")]
    NotPure(usize, f64),
    #[error("memory dimension {0} exceeds the supported maximum of {1}")]
    DimensionTooLarge(usize, usize),
    #[error(transparent)]
    Prob(#[from] crate::probcore::ProbError),
}

/// `<a|b>` with the physics convention (conjugate-linear in the first
/// argument).
pub fn inner(a: &CVector, b: &CVector) -> Complex64 {
    a.dotc(b)
}

/// Computational basis vector `|i>` in dimension `d`.
pub fn basis_vector(d: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(d);
    v[i] = Complex64::new(1.0, 0.0);
    v
}

/// `|v><v|`.
pub fn projector(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// A validated density matrix: Hermitian, positive semidefinite, unit
/// trace (all within [`EPS_PSD`]).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix) -> Result<Self, QuantumError> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(QuantumError::InvalidState(format!(
                "density matrix must be square and nonempty, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let herm_dev = (&mat - mat.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if herm_dev > EPS_PSD {
            return Err(QuantumError::InvalidState(format!(
                "not Hermitian (deviation {herm_dev})"
            )));
        }
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > EPS_PSD || trace.im.abs() > EPS_PSD {
            return Err(QuantumError::InvalidState(format!(
                "trace is {trace}, expected 1"
            )));
        }
        let min_eig = hermitian_eigenvalues(&mat)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -EPS_PSD {
            return Err(QuantumError::InvalidState(format!(
                "negative eigenvalue {min_eig}"
            )));
        }
        Ok(Self { mat })
    }

    /// `|v><v|` for a unit vector.
    pub fn pure_state(v: &CVector) -> Result<Self, QuantumError> {
        let norm = v.norm();
        if (norm - 1.0).abs() > EPS_PSD {
            return Err(QuantumError::InvalidState(format!(
                "pure state must be unit norm, got {norm}"
            )));
        }
        Ok(Self { mat: projector(v) })
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            mat: CMatrix::identity(d, d) * Complex64::new(1.0 / d as f64, 0.0),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// Eigenvalues in non-increasing order, clamped at zero.
    pub fn eigenvalues_desc(&self) -> Vec<f64> {
        let mut vals = hermitian_eigenvalues(&self.mat);
        vals.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
        vals.into_iter().map(|v| v.max(0.0)).collect()
    }

    /// Eigenvalues (non-increasing) paired with their eigenvectors.
    pub fn eigen_desc(&self) -> (Vec<f64>, Vec<CVector>) {
        hermitian_eigen_desc(&self.mat)
    }

    /// Largest eigenvalue's eigenvector.
    pub fn top_eigenvector(&self) -> CVector {
        self.eigen_desc().1.remove(0)
    }

    /// Second-largest eigenvalue; zero means the state is pure.
    pub fn second_eigenvalue(&self) -> f64 {
        let vals = self.eigenvalues_desc();
        vals.get(1).copied().unwrap_or(0.0)
    }
}

pub fn hermitian_eigenvalues(mat: &CMatrix) -> Vec<f64> {
    nalgebra::SymmetricEigen::new(mat.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect()
}

pub fn hermitian_eigen_desc(mat: &CMatrix) -> (Vec<f64>, Vec<CVector>) {
    let eig = nalgebra::SymmetricEigen::new(mat.clone());
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = idx
        .iter()
        .map(|&i| CVector::from(eig.eigenvectors.column(i).clone_owned()))
        .collect();
    (vals, vecs)
}

/// A classical–quantum state: outcome probabilities paired with memory
/// states of a common dimension.
#[derive(Debug, Clone)]
pub struct CQState {
    probs: ProbVector,
    states: Vec<DensityMatrix>,
}

impl CQState {
    pub fn new(probs: ProbVector, states: Vec<DensityMatrix>) -> Result<Self, QuantumError> {
        if probs.len() != states.len() {
            return Err(QuantumError::InvalidState(format!(
                "{} probabilities but {} states",
                probs.len(),
                states.len()
            )));
        }
        if states.is_empty() {
            return Err(QuantumError::InvalidState("empty CQ state".into()));
        }
        let d = states[0].dim();
        if states.iter().any(|s| s.dim() != d) {
            return Err(QuantumError::InvalidState(
                "memory states have mixed dimensions".into(),
            ));
        }
        Ok(Self { probs, states })
    }

    pub fn n_outcomes(&self) -> usize {
        self.probs.len()
    }

    pub fn memory_dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn probs(&self) -> &ProbVector {
        &self.probs
    }

    pub fn state(&self, x: usize) -> &DensityMatrix {
        &self.states[x]
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    /// The averaged memory state `sum_x q_x sigma_x`.
    pub fn average_state(&self) -> CMatrix {
        let d = self.memory_dim();
        let mut acc = CMatrix::zeros(d, d);
        for (q, s) in self.probs.as_slice().iter().zip(&self.states) {
            acc += s.matrix() * Complex64::new(*q, 0.0);
        }
        acc
    }
}

/// A (not necessarily orthogonal) pure-state decomposition
/// `sigma = sum_y w_y |u_y><u_y|`.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub weights: ProbVector,
    pub vectors: Vec<CVector>,
}

impl Decomposition {
    pub fn new(weights: ProbVector, vectors: Vec<CVector>) -> Result<Self, QuantumError> {
        if weights.len() != vectors.len() {
            return Err(QuantumError::InvalidState(
                "decomposition weight/vector count mismatch".into(),
            ));
        }
        for (y, (w, v)) in weights.as_slice().iter().zip(&vectors).enumerate() {
            if *w > EPS_PROB && (v.norm() - 1.0).abs() > EPS_PSD {
                return Err(QuantumError::InvalidState(format!(
                    "decomposition vector {y} is not unit norm"
                )));
            }
        }
        Ok(Self { weights, vectors })
    }

    /// Max-abs deviation of `sum_y w_y |u_y><u_y|` from `sigma`.
    pub fn reconstruction_error(&self, sigma: &DensityMatrix) -> f64 {
        let d = sigma.dim();
        let mut acc = CMatrix::zeros(d, d);
        for (w, v) in self.weights.as_slice().iter().zip(&self.vectors) {
            if *w > 0.0 {
                acc += projector(v) * Complex64::new(*w, 0.0);
            }
        }
        (acc - sigma.matrix())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

/// The eigendecomposition, weights sorted non-increasingly.
pub fn eigendecomposition(sigma: &DensityMatrix) -> Decomposition {
    let (vals, vecs) = sigma.eigen_desc();
    let weights = ProbVector::new(vals.into_iter().map(|v| v.max(0.0)).collect())
        .expect("eigenvalues of a density matrix form a distribution");
    Decomposition {
        weights,
        vectors: vecs,
    }
}

/// Whether `sigma` admits a pure-state decomposition with the given
/// weights: true iff the eigenvalue vector majorizes `q`.
pub fn decomposition_exists(sigma: &DensityMatrix, q: &ProbVector) -> bool {
    let lambda = sigma.eigenvalues_desc();
    majorizes_slices(&lambda, q.as_slice(), EPS_PROB)
}

/// Threshold data for the two-branch bound along one index pair `(j, k)`.
#[derive(Debug, Clone)]
pub struct TqBound {
    pub omega_star: f64,
    /// Per-index overlap masses `r_y = w_{y|k} |<u_{y|j}|u_{y|k}>|^2`.
    pub r_y: Vec<f64>,
    /// Their total.
    pub r_total: f64,
    q_k: f64,
    dim: usize,
}

impl TqBound {
    /// The memory vector of the bound at weight `omega <= omega_star`,
    /// embedded in the full memory dimension.
    pub fn psi_of_omega(&self, omega: f64) -> Result<CVector, QuantumError> {
        if !(0.0..=1.0).contains(&omega) || omega > self.omega_star + EPS_PSD {
            return Err(QuantumError::DomainError(format!(
                "omega {omega} outside [0, {}]",
                self.omega_star
            )));
        }
        let radicand = 1.0 - omega - self.r_total * self.q_k;
        if radicand < -EPS_PSD {
            return Err(QuantumError::DomainError(format!(
                "negative radicand {radicand} in bound vector"
            )));
        }
        let c0 = (self.q_k * self.r_total).sqrt();
        let c1 = radicand.max(0.0).sqrt();
        Ok(two_component_state(self.dim, c0, c1, omega))
    }
}

fn two_component_state(dim: usize, c0: f64, c1: f64, omega: f64) -> CVector {
    let d = dim.max(2);
    let mut v = CVector::zeros(d);
    let denom = (1.0 - omega).sqrt();
    if denom <= EPS_PSD {
        // The certain branch carries all the weight; the memory vector is
        // immaterial, returned as |1> by convention.
        v[1] = Complex64::new(1.0, 0.0);
        return v;
    }
    v[0] = Complex64::new(c0 / denom, 0.0);
    v[1] = Complex64::new(c1 / denom, 0.0);
    v
}

/// Compute the bound threshold along `(j, k)` for the given decompositions
/// of `sigma_j` and `sigma_k`:
/// `omega* = r q_j min_{y : r_y > 0} (w_{y|j} / r_y)`.
pub fn tq_bound(
    sigma: &CQState,
    j: usize,
    k: usize,
    decomp_j: &Decomposition,
    decomp_k: &Decomposition,
) -> Result<TqBound, QuantumError> {
    if j == k || j >= sigma.n_outcomes() || k >= sigma.n_outcomes() {
        return Err(QuantumError::DomainError(format!(
            "indices ({j}, {k}) must be distinct outcomes of the state"
        )));
    }
    if decomp_j.reconstruction_error(sigma.state(j)) > 100.0 * EPS_PSD {
        return Err(QuantumError::InvalidState(
            "decomposition does not reconstruct sigma_j".into(),
        ));
    }
    if decomp_k.reconstruction_error(sigma.state(k)) > 100.0 * EPS_PSD {
        return Err(QuantumError::InvalidState(
            "decomposition does not reconstruct sigma_k".into(),
        ));
    }
    let len = decomp_j.vectors.len().min(decomp_k.vectors.len());
    let w_j = decomp_j.weights.as_slice();
    let w_k = decomp_k.weights.as_slice();
    let mut r_y = Vec::with_capacity(len);
    for y in 0..len {
        let ov = inner(&decomp_j.vectors[y], &decomp_k.vectors[y]).norm_sqr();
        r_y.push(w_k[y] * ov);
    }
    let r_total: f64 = r_y.iter().sum();
    let q_j = sigma.probs().as_slice()[j];
    let q_k = sigma.probs().as_slice()[k];
    // Indices with overlap mass below this play no role in the minimum;
    // keeping them would only inject huge ratios from roundoff dust.
    let floor = 1e-12 * r_y.iter().cloned().fold(0.0, f64::max);
    let omega_star = if r_total <= 0.0 {
        0.0
    } else {
        let min_ratio = r_y
            .iter()
            .enumerate()
            .filter(|(_, &r)| r > floor && r > 0.0)
            .map(|(y, &r)| w_j[y] / r)
            .fold(f64::INFINITY, f64::min);
        if min_ratio.is_finite() {
            r_total * q_j * min_ratio
        } else {
            0.0
        }
    };
    Ok(TqBound {
        omega_star,
        r_y,
        r_total,
        q_k,
        dim: sigma.memory_dim(),
    })
}

/// The assembled two-branch bound state: flag outcome 0 carries weight
/// `omega` with memory `|0>`, flag outcome 1 carries the rest with memory
/// `psi`.
#[derive(Debug, Clone)]
pub struct OmegaBoundQuantum {
    pub omega: f64,
    pub flag0_state: CVector,
    pub psi: CVector,
}

impl OmegaBoundQuantum {
    pub fn to_cq_state(&self) -> Result<CQState, QuantumError> {
        let probs = ProbVector::new(vec![self.omega, 1.0 - self.omega])?;
        let states = vec![
            DensityMatrix::pure_state(&self.flag0_state)?,
            DensityMatrix::pure_state(&self.psi)?,
        ];
        CQState::new(probs, states)
    }
}

/// The pure-conditional specialization: when every `sigma_x` is pure with
/// vector `phi_x`, the bound holds for any `omega in [0, q_j]` with
/// `c_j = max_{k != j} |<phi_j|phi_k>| sqrt(q_k)` and
/// `psi = (c_j |0> + sqrt(1 - omega - c_j^2) |1>) / sqrt(1 - omega)`.
pub fn pure_case_bound(
    sigma: &CQState,
    j: usize,
    omega: f64,
) -> Result<OmegaBoundQuantum, QuantumError> {
    let n = sigma.n_outcomes();
    if n < 2 {
        return Err(QuantumError::DomainError(
            "the pure-case bound needs at least two outcomes".into(),
        ));
    }
    if j >= n {
        return Err(QuantumError::DomainError(format!("index {j} out of range")));
    }
    let q = sigma.probs().as_slice();
    if omega < -EPS_PSD || omega > q[j] + EPS_PSD {
        return Err(QuantumError::DomainError(format!(
            "omega {omega} outside [0, q_j = {}]",
            q[j]
        )));
    }
    let mut phis = Vec::with_capacity(n);
    for x in 0..n {
        let second = sigma.state(x).second_eigenvalue();
        if second > EPS_PSD {
            return Err(QuantumError::NotPure(x, second));
        }
        phis.push(sigma.state(x).top_eigenvector());
    }
    let c_j = (0..n)
        .filter(|&k| k != j)
        .map(|k| inner(&phis[j], &phis[k]).norm() * q[k].sqrt())
        .fold(0.0_f64, f64::max);
    let radicand = 1.0 - omega - c_j * c_j;
    debug_assert!(
        radicand >= -EPS_PSD,
        "radicand {radicand} must be nonnegative"
    );
    let d = sigma.memory_dim();
    let psi = two_component_state(d, c_j, radicand.max(0.0).sqrt(), omega.min(1.0));
    Ok(OmegaBoundQuantum {
        omega: omega.clamp(0.0, 1.0),
        flag0_state: basis_vector(d.max(2), 0),
        psi,
    })
}
