//! Universal uncertainty bounds for the two application scenarios.
//!
//! Tripartite: two remote parties observe separate copies of a pure state
//! while a third measures each copy with one of two bases. Whatever the
//! state and the remote measurements, the joint outcome matrix is
//! conditionally majorized by a two-column bound whose shape depends only
//! on the maximal overlap `c` of the two bases, through
//! `eta = (1 + c)^2 / 4`.
//!
//! Bipartite: for a pure state in Schmidt form measured in two bases, the
//! product of the two post-measurement CQ states is conditionally
//! majorized by a two-branch CQ bound whose memory vector has an explicit
//! three-part coefficient structure.

use num_complex::Complex64;
use thiserror::Error;

use crate::closedform::OmegaBoundClassical;
use crate::probcore::ProbVector;
use crate::quantum::{
    basis_vector, inner, CQState, CVector, DensityMatrix, QuantumError,
};
use crate::sampling;
use crate::tol::EPS_PSD;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("basis vectors are not orthonormal (deviation {0})")]
    NotOrthonormal(f64),
    #[error("bases have different dimensions: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("index out of range or index pairs coincide")]
    IndexError,
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("outcome probability p_x1 q_z1 vanishes; the bound interval is empty")]
    DegenerateOutcome,
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

/// An orthonormal basis of measurement directions.
#[derive(Debug, Clone)]
pub struct MeasurementBasis {
    vectors: Vec<CVector>,
}

impl MeasurementBasis {
    pub fn new(vectors: Vec<CVector>) -> Result<Self, BoundsError> {
        let n = vectors.len();
        if n == 0 || vectors.iter().any(|v| v.len() != n) {
            return Err(BoundsError::DimensionMismatch(
                n,
                vectors.first().map_or(0, |v| v.len()),
            ));
        }
        let mut dev = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let ip = inner(&vectors[i], &vectors[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((ip - Complex64::new(target, 0.0)).norm());
            }
        }
        if dev > EPS_PSD {
            return Err(BoundsError::NotOrthonormal(dev));
        }
        Ok(Self { vectors })
    }

    pub fn computational(n: usize) -> Self {
        Self {
            vectors: (0..n).map(|i| basis_vector(n, i)).collect(),
        }
    }

    /// The qubit Hadamard basis.
    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            vectors: vec![
                CVector::from_vec(vec![Complex64::new(h, 0.0), Complex64::new(h, 0.0)]),
                CVector::from_vec(vec![Complex64::new(h, 0.0), Complex64::new(-h, 0.0)]),
            ],
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }
}

/// Maximal overlap `c = max |<a1|a2>|` between two bases; lies in
/// `[1/sqrt(n), 1]`.
pub fn overlap_constant(basis1: &MeasurementBasis, basis2: &MeasurementBasis) -> f64 {
    let mut c = 0.0_f64;
    for a in basis1.vectors() {
        for b in basis2.vectors() {
            c = c.max(inner(a, b).norm());
        }
    }
    c
}

fn overlap_argmax(basis1: &MeasurementBasis, basis2: &MeasurementBasis) -> (usize, usize) {
    let mut best = (0, 0);
    let mut c = -1.0;
    for (i, a) in basis1.vectors().iter().enumerate() {
        for (j, b) in basis2.vectors().iter().enumerate() {
            let v = inner(a, b).norm();
            if v > c {
                c = v;
                best = (i, j);
            }
        }
    }
    best
}

/// The state-independent tripartite bound for a given first-column weight
/// `alpha`.
#[derive(Debug, Clone)]
pub struct TripartiteBound {
    pub c: f64,
    /// `(1 + c)^2 / 4`.
    pub eta: f64,
    pub alpha: f64,
    /// `eta / alpha`.
    pub beta: f64,
    /// Largest integer with `beta * l <= 1`.
    pub l: usize,
    pub omega_matrix: OmegaBoundClassical,
    /// Set when `alpha` lies outside `(eta, 1)`, where the bound carries no
    /// information: the flat part of `omega` collapses onto a point mass.
    pub trivial: bool,
}

/// Build the tripartite bound on `n1 * n2` joint outcomes: `beta` solves
/// `alpha beta = eta`, and the flat vector `omega` spreads `l` plateaus of
/// height `beta` plus the remainder.
pub fn tripartite_bound(
    basis1: &MeasurementBasis,
    basis2: &MeasurementBasis,
    alpha: f64,
) -> Result<TripartiteBound, BoundsError> {
    if basis1.dim() != basis2.dim() {
        return Err(BoundsError::DimensionMismatch(basis1.dim(), basis2.dim()));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(BoundsError::DomainError(format!(
            "alpha {alpha} outside (0, 1]"
        )));
    }
    let c = overlap_constant(basis1, basis2);
    let eta = 0.25 * (1.0 + c) * (1.0 + c);
    let beta = eta / alpha;
    let n = basis1.dim() * basis2.dim();
    let l = if beta > 1.0 {
        0
    } else {
        // Nudge before truncating so beta * l = 1 resolves to l, not l - 1.
        ((1.0 / beta) + 1e-12).floor() as usize
    };
    let l = l.min(n.saturating_sub(1)).max(if beta <= 1.0 { 1 } else { 0 });
    let mut omega = vec![0.0; n];
    for slot in omega.iter_mut().take(l) {
        *slot = beta;
    }
    let remainder = 1.0 - l as f64 * beta;
    if l < n {
        omega[l] = remainder.max(0.0);
    }
    let omega = ProbVector::new(omega).expect("plateau vector is a distribution");
    let trivial = !(alpha > eta && alpha < 1.0);
    Ok(TripartiteBound {
        c,
        eta,
        alpha,
        beta,
        l,
        omega_matrix: OmegaBoundClassical::from_parts(alpha, omega),
        trivial,
    })
}

/// Monte-Carlo lower bound on the maximal product-guessing quantity: the
/// best value of `max_{a1} |<a1|psi>|^2 * max_{a2} |<a2|psi>|^2` over
/// sampled pure states, refined by a golden-section search along the
/// geodesic between the two closest basis vectors. Approaches
/// `(1 + c)^2 / 4` from below.
pub fn eta_monte_carlo(
    basis1: &MeasurementBasis,
    basis2: &MeasurementBasis,
    samples: usize,
    seed: u64,
) -> f64 {
    let d = basis1.dim();
    let product_guess = |psi: &CVector| -> f64 {
        let g1 = basis1
            .vectors()
            .iter()
            .map(|a| inner(a, psi).norm_sqr())
            .fold(0.0_f64, f64::max);
        let g2 = basis2
            .vectors()
            .iter()
            .map(|a| inner(a, psi).norm_sqr())
            .fold(0.0_f64, f64::max);
        g1 * g2
    };

    let mut rng = sampling::rng(seed);
    let mut best = 0.0_f64;
    for _ in 0..samples {
        let psi = sampling::haar_state(d, &mut rng);
        best = best.max(product_guess(&psi));
    }

    // Refinement: the optimizer lies in the plane of the two closest basis
    // vectors, at the bisector. Sweep the geodesic between them.
    let (i, j) = overlap_argmax(basis1, basis2);
    let u = basis1.vectors()[i].clone();
    let raw = basis2.vectors()[j].clone();
    let ov = inner(&u, &raw);
    let c_tilde = ov.norm();
    if c_tilde >= 1.0 - 1e-12 {
        // Shared direction: the product reaches 1 at psi = u.
        return best.max(product_guess(&u));
    }
    // Align the phase so the geodesic is a real rotation.
    let v = &raw * (ov / Complex64::new(c_tilde.max(f64::MIN_POSITIVE), 0.0)).conj();
    let w = (&v - &u * Complex64::new(c_tilde, 0.0))
        / Complex64::new((1.0 - c_tilde * c_tilde).sqrt(), 0.0);
    let alpha_angle = c_tilde.clamp(-1.0, 1.0).acos();
    let at = |theta: f64| -> f64 {
        let psi = &u * Complex64::new(theta.cos(), 0.0) + &w * Complex64::new(theta.sin(), 0.0);
        product_guess(&psi)
    };
    let golden = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0_f64, alpha_angle);
    let mut x1 = hi - golden * (hi - lo);
    let mut x2 = lo + golden * (hi - lo);
    let (mut f1, mut f2) = (at(x1), at(x2));
    for _ in 0..100 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = at(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = at(x1);
        }
    }
    best.max(f1).max(f2)
}

/// The state-dependent bipartite bound for a chosen index pair.
#[derive(Debug, Clone)]
pub struct BipartiteBound {
    pub schmidt: ProbVector,
    pub px: Vec<f64>,
    pub qz: Vec<f64>,
    /// Post-measurement memory vectors `phi_x` (first basis).
    pub phi_states: Vec<CVector>,
    /// Post-measurement memory vectors for the second basis.
    pub varphi_states: Vec<CVector>,
    pub x1: usize,
    pub z1: usize,
    pub x2: usize,
    pub z2: usize,
    pub omega: f64,
    /// The combined memory vector, dimension `n^2`, unit norm.
    pub psi: CVector,
}

fn post_measurement(
    schmidt: &[f64],
    basis: &MeasurementBasis,
) -> (Vec<f64>, Vec<CVector>) {
    let n = basis.dim();
    let mut probs = Vec::with_capacity(n);
    let mut states = Vec::with_capacity(n);
    for s in basis.vectors() {
        let p: f64 = (0..n).map(|y| schmidt[y] * s[y].norm_sqr()).sum();
        probs.push(p);
        let state = if p > 0.0 {
            CVector::from_fn(n, |y, _| {
                s[y].conj() * Complex64::new((schmidt[y] / p).sqrt(), 0.0)
            })
        } else {
            basis_vector(n, 0)
        };
        states.push(state);
    }
    (probs, states)
}

#[allow(clippy::too_many_arguments)]
fn assemble_psi(
    px: &[f64],
    qz: &[f64],
    phi: &[CVector],
    varphi: &[CVector],
    x1: usize,
    z1: usize,
    x2: usize,
    z2: usize,
    omega: f64,
) -> Result<CVector, BoundsError> {
    let n = px.len();
    let top = px[x1] * qz[z1];
    if top <= EPS_PSD {
        return Err(BoundsError::DegenerateOutcome);
    }
    if omega < -EPS_PSD || omega > top + EPS_PSD {
        return Err(BoundsError::DomainError(format!(
            "omega {omega} outside [0, {top}]"
        )));
    }
    let omega = omega.clamp(0.0, top);
    let ov = (inner(&phi[x1], &phi[x2]) * inner(&varphi[z1], &varphi[z2])).norm();
    let mut psi = CVector::zeros(n * n);
    for x in 0..n {
        for z in 0..n {
            if (x, z) == (x1, z1) || (x, z) == (x2, z2) {
                continue;
            }
            psi[x * n + z] = Complex64::new((px[x] * qz[z]).sqrt(), 0.0);
        }
    }
    psi[x1 * n + z1] = Complex64::new(ov * (px[x2] * qz[z2]).sqrt(), 0.0);
    let radicand = px[x1] * qz[z1] + (1.0 - ov * ov) * px[x2] * qz[z2] - omega;
    psi[x2 * n + z2] = Complex64::new(radicand.max(0.0).sqrt(), 0.0);
    let denom = (1.0 - omega).sqrt();
    Ok(psi / Complex64::new(denom, 0.0))
}

/// Build the bipartite bound from a Schmidt vector and two measurement
/// bases, for index choices `(x1, z1) != (x2, z2)` and a branch weight
/// `omega in [0, p_x1 q_z1]`.
#[allow(clippy::too_many_arguments)]
pub fn bipartite_bound(
    schmidt: &ProbVector,
    sbasis: &MeasurementBasis,
    tbasis: &MeasurementBasis,
    x1: usize,
    z1: usize,
    x2: usize,
    z2: usize,
    omega: f64,
) -> Result<BipartiteBound, BoundsError> {
    let n = sbasis.dim();
    if tbasis.dim() != n || schmidt.len() != n {
        return Err(BoundsError::DimensionMismatch(n, tbasis.dim()));
    }
    if x1 >= n || x2 >= n || z1 >= n || z2 >= n || (x1, z1) == (x2, z2) {
        return Err(BoundsError::IndexError);
    }
    let (px, phi) = post_measurement(schmidt.as_slice(), sbasis);
    let (qz, varphi) = post_measurement(schmidt.as_slice(), tbasis);
    let psi = assemble_psi(&px, &qz, &phi, &varphi, x1, z1, x2, z2, omega)?;
    Ok(BipartiteBound {
        schmidt: schmidt.clone(),
        px,
        qz,
        phi_states: phi,
        varphi_states: varphi,
        x1,
        z1,
        x2,
        z2,
        omega,
        psi,
    })
}

impl BipartiteBound {
    /// The two-branch bound as a CQ state on the doubled memory: flag 0
    /// carries `|x1 z1>`, flag 1 carries `psi`.
    pub fn omega_state(&self) -> Result<CQState, BoundsError> {
        let n = self.px.len();
        let probs = ProbVector::new(vec![self.omega, 1.0 - self.omega])
            .map_err(QuantumError::from)?;
        let flag0 = basis_vector(n * n, self.x1 * n + self.z1);
        let states = vec![
            DensityMatrix::pure_state(&flag0)?,
            DensityMatrix::pure_state(&self.psi)?,
        ];
        Ok(CQState::new(probs, states)?)
    }

    /// The actual product of the two post-measurement CQ states, as one CQ
    /// state on `n^2` outcomes with pure memory conditionals
    /// `phi_x (x) varphi_z`.
    pub fn product_state(&self) -> Result<CQState, BoundsError> {
        let n = self.px.len();
        let mut probs = Vec::with_capacity(n * n);
        let mut states = Vec::with_capacity(n * n);
        for x in 0..n {
            for z in 0..n {
                probs.push(self.px[x] * self.qz[z]);
                states.push(DensityMatrix::pure_state(&kron_vec(
                    &self.phi_states[x],
                    &self.varphi_states[z],
                ))?);
            }
        }
        let probs = ProbVector::new(probs).map_err(QuantumError::from)?;
        Ok(CQState::new(probs, states)?)
    }
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    let (la, lb) = (a.len(), b.len());
    CVector::from_fn(la * lb, |i, _| a[i / lb] * b[i % lb])
}

/// Floor on a conditional-uncertainty measure of the product state: the
/// best measure value of the bound state over all index choices and a
/// grid of branch weights. An empty grid defaults to 33 evenly spaced
/// points per index choice.
///
/// The floor extends to convex mixtures of Schmidt-form states only for
/// jointly concave measures, by averaging the per-component floors; the
/// caller owns that flag.
pub fn guu_lower_bound(
    bound: &BipartiteBound,
    measure: &dyn Fn(&CQState) -> f64,
    omega_grid: &[f64],
) -> f64 {
    let n = bound.px.len();
    let mut best = f64::NEG_INFINITY;
    for x1 in 0..n {
        for z1 in 0..n {
            for x2 in 0..n {
                for z2 in 0..n {
                    if (x1, z1) == (x2, z2) {
                        continue;
                    }
                    let top = bound.px[x1] * bound.qz[z1];
                    if top <= EPS_PSD {
                        continue;
                    }
                    let points: Vec<f64> = if omega_grid.is_empty() {
                        (0..33).map(|i| top * i as f64 / 32.0).collect()
                    } else {
                        omega_grid
                            .iter()
                            .copied()
                            .filter(|&w| (0.0..=top).contains(&w))
                            .collect()
                    };
                    for omega in points {
                        let Ok(psi) = assemble_psi(
                            &bound.px,
                            &bound.qz,
                            &bound.phi_states,
                            &bound.varphi_states,
                            x1,
                            z1,
                            x2,
                            z2,
                            omega,
                        ) else {
                            continue;
                        };
                        let flag0 = basis_vector(n * n, x1 * n + z1);
                        let Ok(state) = ProbVector::new(vec![omega, 1.0 - omega])
                            .map_err(|_| ())
                            .and_then(|p| {
                                let s0 = DensityMatrix::pure_state(&flag0).map_err(|_| ())?;
                                let s1 = DensityMatrix::pure_state(&psi).map_err(|_| ())?;
                                CQState::new(p, vec![s0, s1]).map_err(|_| ())
                            })
                        else {
                            continue;
                        };
                        best = best.max(measure(&state));
                    }
                }
            }
        }
    }
    best
}
