//! Conditional-uncertainty measures.
//!
//! A symmetric concave function `Phi` on distributions induces the measure
//! `U_Phi(P) = sum_y p_y Phi(p^{|y})`, monotone under conditioned
//! relabelings. For a classical–quantum state the minimum classical
//! uncertainty is the infimum of `U_Phi` over the distributions produced
//! by measuring the memory; rank-1 POVMs suffice, so the search runs over
//! projective grids plus random rank-1 refinements. Grid results are upper
//! bounds on the true minimum and shrink as the budget grows.

use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::probcore::{JointDistribution, Matrix};
use crate::quantum::{hermitian_eigen_desc, CMatrix, CQState, CVector, QuantumError};
use crate::sampling;
use crate::tol::EPS_PSD;

/// Largest memory dimension the measurement search supports.
pub const MAX_MEMORY_DIM: usize = 4;

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error("memory dimension {0} exceeds the search limit of {MAX_MEMORY_DIM}")]
    DimensionTooLarge(usize),
    #[error("Renyi order {0} must lie in (0, 1) for a concave entropy")]
    InvalidOrder(f64),
    #[error("POVM element {index} is not positive semidefinite (min eigenvalue {min_eig})")]
    NotPsd { index: usize, min_eig: f64 },
    #[error("POVM elements sum to identity only within {0}, beyond tolerance")]
    Incomplete(f64),
    #[error("POVM is empty or has mismatched dimensions")]
    BadShape,
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

/// A user-supplied symmetric concave function on probability vectors.
pub type CustomPhi = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A symmetric concave function on probability vectors.
#[derive(Clone)]
pub enum PhiFunction {
    /// Shannon entropy in bits.
    ShannonEntropy,
    /// Negated largest component (negated guessing probability).
    NegMaxComponent,
    /// Renyi entropy of the given order, concave for orders in (0, 1).
    RenyiEntropy(f64),
    Custom(CustomPhi),
}

impl std::fmt::Debug for PhiFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::ShannonEntropy => write!(f, "ShannonEntropy"),
            Self::NegMaxComponent => write!(f, "NegMaxComponent"),
            Self::RenyiEntropy(a) => write!(f, "RenyiEntropy({a})"),
            Self::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl PhiFunction {
    pub fn validate(&self) -> Result<(), MeasureError> {
        if let Self::RenyiEntropy(a) = self {
            if !(*a > 0.0 && *a < 1.0) {
                return Err(MeasureError::InvalidOrder(*a));
            }
        }
        Ok(())
    }

    pub fn eval(&self, v: &[f64]) -> f64 {
        match self {
            Self::ShannonEntropy => shannon_entropy_bits(v),
            Self::NegMaxComponent => -v.iter().fold(0.0_f64, |m, &x| m.max(x)),
            Self::RenyiEntropy(a) => {
                let s: f64 = v.iter().filter(|&&x| x > 0.0).map(|&x| x.powf(*a)).sum();
                s.log2() / (1.0 - a)
            }
            Self::Custom(f) => f(v),
        }
    }
}

pub fn shannon_entropy_bits(v: &[f64]) -> f64 {
    -v.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.log2())
        .sum::<f64>()
}

/// `U_Phi(P) = sum_y p_y Phi(p^{|y})`; with Shannon entropy this is the
/// conditional entropy of the register given the memory, in bits.
pub fn u_phi(p: &JointDistribution, phi: &PhiFunction) -> f64 {
    let marginals = p.marginals();
    let mut total = 0.0;
    for y in 0..p.cols() {
        if let Some(cond) = p.conditional(y) {
            total += marginals[y] * phi.eval(&cond);
        }
    }
    total
}

/// A positive-operator-valued measure on the memory.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<CMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<CMatrix>) -> Result<Self, MeasureError> {
        let Some(first) = elements.first() else {
            return Err(MeasureError::BadShape);
        };
        let d = first.nrows();
        if elements.iter().any(|e| e.nrows() != d || e.ncols() != d) {
            return Err(MeasureError::BadShape);
        }
        let mut sum = CMatrix::zeros(d, d);
        for (index, e) in elements.iter().enumerate() {
            let min_eig = hermitian_eigen_desc(e)
                .0
                .last()
                .copied()
                .unwrap_or(0.0);
            if min_eig < -EPS_PSD {
                return Err(MeasureError::NotPsd { index, min_eig });
            }
            sum += e;
        }
        let dev = (sum - CMatrix::identity(d, d))
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        if dev > EPS_PSD {
            return Err(MeasureError::Incomplete(dev));
        }
        Ok(Self { elements })
    }

    /// Unchecked constructor for internally generated measurements, which
    /// are complete by construction.
    fn from_parts(elements: Vec<CMatrix>) -> Self {
        Self { elements }
    }

    pub fn rank1_from_vectors(vectors: &[CVector]) -> Self {
        Self::from_parts(vectors.iter().map(crate::quantum::projector).collect())
    }

    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }

    pub fn n_outcomes(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    /// Split every element into its rank-1 eigenpieces (eigenvalues below
    /// 1e-12 dropped). Refinement is a post-processing of the original, so
    /// it can only lower any conditioned-uncertainty measure.
    pub fn refine_to_rank1(&self) -> Self {
        let mut pieces = Vec::new();
        for e in &self.elements {
            let (vals, vecs) = hermitian_eigen_desc(e);
            for (v, vec) in vals.iter().zip(&vecs) {
                if *v > 1e-12 {
                    pieces.push(crate::quantum::projector(vec) * Complex64::new(*v, 0.0));
                }
            }
        }
        Self::from_parts(pieces)
    }
}

/// The joint distribution from measuring the memory of `sigma`:
/// `p_xy = q_x tr(sigma_x M_y)`.
pub fn measure_cq(sigma: &CQState, povm: &Povm) -> JointDistribution {
    let n = sigma.n_outcomes();
    let k = povm.n_outcomes();
    let q = sigma.probs().as_slice();
    let mut data = vec![0.0; n * k];
    for x in 0..n {
        let s = sigma.state(x).matrix();
        for (y, m) in povm.elements().iter().enumerate() {
            let tr = (s * m).trace().re;
            data[x * k + y] = (q[x] * tr).max(0.0);
        }
    }
    JointDistribution::new(Matrix {
        rows: n,
        cols: k,
        data,
    })
    .expect("measurement statistics form a distribution")
}

/// Search budget for the measurement minimization. For a fixed seed and
/// budget the result is bit-reproducible: candidates are evaluated in a
/// fixed order.
#[derive(Debug, Clone, Copy)]
pub struct SearchBudget {
    /// Projective-grid size: Fibonacci-sphere directions for qubit
    /// memories, Haar-random orthonormal bases above.
    pub grid: usize,
    /// Extra random rank-1 POVMs with more outcomes than the dimension.
    pub extra_povms: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            grid: 4096,
            extra_povms: 2048,
            seed: 0,
        }
    }
}

/// Evenly spread unit directions on the Bloch sphere.
pub fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let golden = std::f64::consts::PI * (3.0 - 5.0_f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// The two-outcome projective measurement along a Bloch direction.
pub fn bloch_projective(dir: [f64; 3]) -> Povm {
    let [x, y, z] = dir;
    let half = |sign: f64| {
        CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.5 * (1.0 + sign * z), 0.0),
                Complex64::new(0.5 * sign * x, -0.5 * sign * y),
                Complex64::new(0.5 * sign * x, 0.5 * sign * y),
                Complex64::new(0.5 * (1.0 - sign * z), 0.0),
            ],
        )
    };
    Povm::from_parts(vec![half(1.0), half(-1.0)])
}

pub(crate) fn candidate_povms(d: usize, budget: &SearchBudget) -> Vec<Povm> {
    // Independent streams for the projective grid and the extra POVMs, so
    // each budget axis is prefix-nested: growing a budget only adds
    // candidates, and the reported minimum can only drop.
    let mut rng_grid = sampling::rng(budget.seed);
    let mut rng_extra = sampling::rng(budget.seed ^ 0x9e3779b97f4a7c15);
    let mut povms = Vec::new();
    if d == 1 {
        povms.push(Povm::from_parts(vec![CMatrix::identity(1, 1)]));
        return povms;
    }
    if d == 2 {
        // Fibonacci spheres of different sizes are not nested; include the
        // halved sizes as well so doubling the grid keeps every previous
        // candidate.
        let mut size = budget.grid.max(1);
        loop {
            for dir in fibonacci_sphere(size) {
                povms.push(bloch_projective(dir));
            }
            if size <= 32 {
                break;
            }
            size /= 2;
        }
        for i in 0..budget.extra_povms {
            let outcomes = if i % 2 == 0 { 3 } else { 4 };
            let vs = sampling::random_rank1_povm_vectors(2, outcomes, &mut rng_extra);
            povms.push(Povm::rank1_from_vectors(&vs));
        }
    } else {
        for _ in 0..budget.grid.max(1) {
            let basis = sampling::haar_basis(d, &mut rng_grid);
            povms.push(Povm::rank1_from_vectors(&basis));
        }
        for i in 0..budget.extra_povms {
            let outcomes = d + 1 + (i % 2);
            let vs = sampling::random_rank1_povm_vectors(d, outcomes, &mut rng_extra);
            povms.push(Povm::rank1_from_vectors(&vs));
        }
    }
    povms
}

/// Extend orthonormal `seed` vectors to a full basis of dimension `d` by
/// Gram-Schmidt over the computational basis.
fn complete_basis(seed: &[CVector], d: usize) -> Vec<CVector> {
    let mut basis: Vec<CVector> = seed.to_vec();
    let mut i = 0;
    while basis.len() < d && i < d {
        let mut v = crate::quantum::basis_vector(d, i);
        for b in &basis {
            let ov = b.dotc(&v);
            v -= b * ov;
        }
        let norm = v.norm();
        if norm > 1e-8 {
            v /= Complex64::new(norm, 0.0);
            basis.push(v);
        }
        i += 1;
    }
    basis
}

/// A one-parameter family of projective measurements rotating inside the
/// plane spanned by two conditional eigenvectors, completed to a full
/// basis outside the plane.
pub(crate) struct PlaneSweep {
    u: CVector,
    w: CVector,
    d: usize,
}

impl PlaneSweep {
    pub(crate) fn povm_at(&self, theta: f64) -> Option<Povm> {
        let b1 = &self.u * Complex64::new(theta.cos(), 0.0)
            + &self.w * Complex64::new(theta.sin(), 0.0);
        let b2 = &self.u * Complex64::new(-theta.sin(), 0.0)
            + &self.w * Complex64::new(theta.cos(), 0.0);
        let basis = complete_basis(&[b1, b2], self.d);
        (basis.len() == self.d).then(|| Povm::rank1_from_vectors(&basis))
    }
}

/// The sweep families for a state: one per pair of distinct top conditional
/// eigenvectors. For states with few, nearly pure conditionals the optimal
/// rank-1 measurement lies in such a plane.
pub(crate) fn plane_sweeps(sigma: &CQState) -> Vec<PlaneSweep> {
    let d = sigma.memory_dim();
    let mut sweeps = Vec::new();
    if d < 2 {
        return sweeps;
    }
    let tops: Vec<CVector> = sigma.states().iter().map(|s| s.top_eigenvector()).collect();
    for a in 0..tops.len() {
        for b in (a + 1)..tops.len() {
            let u = tops[a].clone();
            let ov = u.dotc(&tops[b]);
            // Phase-align so the plane sweep is a real rotation.
            let v = if ov.norm() > 1e-12 {
                &tops[b] * (ov / Complex64::new(ov.norm(), 0.0)).conj()
            } else {
                tops[b].clone()
            };
            let mut w = &v - &u * u.dotc(&v);
            let norm = w.norm();
            if norm < 1e-8 {
                continue; // parallel conditionals span no plane
            }
            w /= Complex64::new(norm, 0.0);
            sweeps.push(PlaneSweep { u, w, d });
        }
    }
    sweeps
}

/// Minimize over the adapted candidates: the averaged-state eigenbasis,
/// plus each plane sweep scanned coarsely and then polished by a
/// golden-section search around the best angle.
fn min_over_adapted(sigma: &CQState, phi: &PhiFunction, sweep: usize) -> f64 {
    let d = sigma.memory_dim();
    let mut best = f64::INFINITY;
    if d < 2 {
        return best;
    }
    let avg_basis = hermitian_eigen_desc(&sigma.average_state()).1;
    best = best.min(u_phi(
        &measure_cq(sigma, &Povm::rank1_from_vectors(&avg_basis)),
        phi,
    ));
    for fam in plane_sweeps(sigma) {
        let eval = |theta: f64| -> f64 {
            fam.povm_at(theta)
                .map_or(f64::INFINITY, |povm| u_phi(&measure_cq(sigma, &povm), phi))
        };
        let k = sweep.max(8);
        let step = std::f64::consts::PI / k as f64;
        let mut best_theta = 0.0;
        let mut best_val = f64::INFINITY;
        for t in 0..k {
            let theta = step * t as f64;
            let v = eval(theta);
            if v < best_val {
                best_val = v;
                best_theta = theta;
            }
        }
        // Golden-section polish on the bracketing interval.
        let golden = (5.0_f64.sqrt() - 1.0) / 2.0;
        let (mut lo, mut hi) = (best_theta - step, best_theta + step);
        let mut x1 = hi - golden * (hi - lo);
        let mut x2 = lo + golden * (hi - lo);
        let (mut f1, mut f2) = (eval(x1), eval(x2));
        for _ in 0..60 {
            if f1 > f2 {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + golden * (hi - lo);
                f2 = eval(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - golden * (hi - lo);
                f1 = eval(x1);
            }
        }
        best = best.min(best_val).min(f1).min(f2);
    }
    best
}

/// Minimum of `U_Phi` over the rank-1 measurement grid (plus deterministic
/// state-adapted sweeps): an upper bound on the true minimum classical-
/// conditioned uncertainty. Doubling the grid or adding extra POVMs keeps
/// every previous candidate, so the bound is non-increasing along such
/// budget growth.
pub fn min_classical_uncertainty(
    sigma: &CQState,
    phi: &PhiFunction,
    budget: &SearchBudget,
) -> Result<f64, MeasureError> {
    phi.validate()?;
    let d = sigma.memory_dim();
    if d > MAX_MEMORY_DIM {
        return Err(MeasureError::DimensionTooLarge(d));
    }
    let mut best = f64::INFINITY;
    for povm in candidate_povms(d, budget) {
        let p = measure_cq(sigma, &povm);
        best = best.min(u_phi(&p, phi));
    }
    let sweep = (budget.grid / 16).clamp(32, 256);
    Ok(best.min(min_over_adapted(sigma, phi, sweep)))
}

/// Evaluate the grid minimum against a precomputed candidate list (shared
/// across many states) plus the state-adapted sweeps; agrees with
/// [`min_classical_uncertainty`] for the same budget.
pub(crate) fn min_u_phi_over(
    povms: &[Povm],
    sigma: &CQState,
    phi: &PhiFunction,
    sweep: usize,
) -> f64 {
    let mut best = f64::INFINITY;
    for povm in povms {
        best = best.min(u_phi(&measure_cq(sigma, povm), phi));
    }
    best.min(min_over_adapted(sigma, phi, sweep))
}

/// A user-supplied measure of joint classical uncertainty.
pub type CustomJointMeasure =
    Arc<dyn Fn(&JointDistribution, &JointDistribution) -> f64 + Send + Sync>;

/// A measure of the joint uncertainty of two classical joint
/// distributions.
#[derive(Clone)]
pub enum JointMeasure {
    /// Sum of per-state measures; the minimization then separates.
    SumPhi(PhiFunction, PhiFunction),
    Custom(CustomJointMeasure),
}

impl Default for JointMeasure {
    fn default() -> Self {
        Self::SumPhi(PhiFunction::ShannonEntropy, PhiFunction::ShannonEntropy)
    }
}

/// Minimum joint classical uncertainty over pairs of rank-1 measurement
/// grids. For the separable default this is the sum of the two individual
/// grid minima; a custom objective triggers a (budget-truncated) product
/// search.
pub fn joint_uncertainty(
    sigma: &CQState,
    gamma: &CQState,
    jcl: &JointMeasure,
    budget: &SearchBudget,
) -> Result<f64, MeasureError> {
    if sigma.memory_dim() > MAX_MEMORY_DIM {
        return Err(MeasureError::DimensionTooLarge(sigma.memory_dim()));
    }
    if gamma.memory_dim() > MAX_MEMORY_DIM {
        return Err(MeasureError::DimensionTooLarge(gamma.memory_dim()));
    }
    match jcl {
        JointMeasure::SumPhi(phi1, phi2) => Ok(min_classical_uncertainty(sigma, phi1, budget)?
            + min_classical_uncertainty(gamma, phi2, budget)?),
        JointMeasure::Custom(f) => {
            // The product search squares the candidate count; cap each side.
            let capped = SearchBudget {
                grid: budget.grid.min(64),
                extra_povms: budget.extra_povms.min(32),
                seed: budget.seed,
            };
            let left = candidate_povms(sigma.memory_dim(), &capped);
            let right = candidate_povms(gamma.memory_dim(), &capped);
            let mut best = f64::INFINITY;
            for my in &left {
                let p = measure_cq(sigma, my);
                for mw in &right {
                    let q = measure_cq(gamma, mw);
                    best = best.min(f(&p, &q));
                }
            }
            Ok(best)
        }
    }
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy_bits(m: &CMatrix) -> f64 {
    let vals = hermitian_eigen_desc(m).0;
    shannon_entropy_bits(&vals.into_iter().map(|v| v.max(0.0)).collect::<Vec<_>>())
}

/// The Holevo quantity `S(sum_x q_x sigma_x) - sum_x q_x S(sigma_x)`: an
/// upper bound on the information any memory measurement can extract
/// about the register.
pub fn holevo_bound(sigma: &CQState) -> f64 {
    let avg = von_neumann_entropy_bits(&sigma.average_state());
    let parts: f64 = sigma
        .probs()
        .as_slice()
        .iter()
        .zip(sigma.states())
        .map(|(q, s)| q * von_neumann_entropy_bits(s.matrix()))
        .sum();
    avg - parts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probcore::ProbVector;
    use crate::quantum::{basis_vector, DensityMatrix};
    use approx::assert_abs_diff_eq;

    fn jd(rows: &[&[f64]]) -> JointDistribution {
        JointDistribution::from_rows(rows).unwrap()
    }

    fn cq(probs: &[f64], states: Vec<DensityMatrix>) -> CQState {
        CQState::new(ProbVector::new(probs.to_vec()).unwrap(), states).unwrap()
    }

    fn pure(v: &CVector) -> DensityMatrix {
        DensityMatrix::pure_state(v).unwrap()
    }

    fn plus() -> CVector {
        CVector::from_vec(vec![
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            2
        ])
    }

    #[test]
    fn u_phi_diagonal_coupling_is_certain() {
        // p_xy = p_y delta_xy: every conditional is a point mass.
        let p = jd(&[&[0.3, 0.0], &[0.0, 0.7]]);
        assert_abs_diff_eq!(u_phi(&p, &PhiFunction::ShannonEntropy), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn u_phi_binary_conditionals() {
        let p = jd(&[&[0.4, 0.1], &[0.1, 0.4]]);
        let h = u_phi(&p, &PhiFunction::ShannonEntropy);
        let expect = -(0.2_f64 * 0.2_f64.log2() + 0.8 * 0.8_f64.log2());
        assert_abs_diff_eq!(h, expect, epsilon = 1e-12);
        assert_abs_diff_eq!(h, 0.7219280948873623, epsilon = 1e-12);
    }

    #[test]
    fn u_phi_uniform_single_column() {
        for n in [2usize, 4, 8] {
            let p = JointDistribution::from_prob_vector(&ProbVector::uniform(n));
            assert_abs_diff_eq!(
                u_phi(&p, &PhiFunction::ShannonEntropy),
                (n as f64).log2(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn renyi_validates_order() {
        assert!(PhiFunction::RenyiEntropy(0.5).validate().is_ok());
        assert!(PhiFunction::RenyiEntropy(2.0).validate().is_err());
        assert!(PhiFunction::RenyiEntropy(1.0).validate().is_err());
    }

    #[test]
    fn min_uncertainty_distinguishable_memory() {
        let sigma = cq(
            &[0.5, 0.5],
            vec![pure(&basis_vector(2, 0)), pure(&basis_vector(2, 1))],
        );
        let budget = SearchBudget {
            grid: 256,
            extra_povms: 0,
            seed: 0,
        };
        let v = min_classical_uncertainty(&sigma, &PhiFunction::ShannonEntropy, &budget).unwrap();
        // The computational-basis measurement identifies x perfectly; the
        // Fibonacci grid gets within grid resolution of zero.
        assert!(v < 5e-4, "got {v}");
    }

    #[test]
    fn min_uncertainty_useless_memory() {
        let s = pure(&basis_vector(2, 0));
        let sigma = cq(&[0.5, 0.5], vec![s.clone(), s]);
        let budget = SearchBudget {
            grid: 128,
            extra_povms: 16,
            seed: 0,
        };
        let v = min_classical_uncertainty(&sigma, &PhiFunction::ShannonEntropy, &budget).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn min_uncertainty_partial_overlap_brackets() {
        let sigma = cq(&[0.5, 0.5], vec![pure(&basis_vector(2, 0)), pure(&plus())]);
        let budget = SearchBudget {
            grid: 4096,
            extra_povms: 0,
            seed: 0,
        };
        let v = min_classical_uncertainty(&sigma, &PhiFunction::ShannonEntropy, &budget).unwrap();
        assert!(v > 0.0 && v < 1.0);
        let floor = shannon_entropy_bits(sigma.probs().as_slice()) - holevo_bound(&sigma);
        assert!(v >= floor - 1e-7, "grid value {v} fell below floor {floor}");
    }

    #[test]
    fn refine_to_rank1_never_hurts() {
        let sigma = cq(&[0.5, 0.5], vec![pure(&basis_vector(2, 0)), pure(&plus())]);
        // A rank-2 lump plus its complement.
        let lump = CMatrix::identity(2, 2) * Complex64::new(0.5, 0.0);
        let povm = Povm::new(vec![lump.clone(), lump]).unwrap();
        let coarse = u_phi(&measure_cq(&sigma, &povm), &PhiFunction::ShannonEntropy);
        let fine = u_phi(
            &measure_cq(&sigma, &povm.refine_to_rank1()),
            &PhiFunction::ShannonEntropy,
        );
        assert!(fine <= coarse + 1e-12);
    }

    #[test]
    fn povm_validation_catches_incomplete_sets() {
        let half = CMatrix::identity(2, 2) * Complex64::new(0.5, 0.0);
        assert!(Povm::new(vec![half]).is_err());
    }

    #[test]
    fn dimension_limit_enforced() {
        let mut r = sampling::rng(3);
        let sigma = sampling::random_cq(2, 5, &mut r);
        let budget = SearchBudget {
            grid: 4,
            extra_povms: 0,
            seed: 0,
        };
        assert!(matches!(
            min_classical_uncertainty(&sigma, &PhiFunction::ShannonEntropy, &budget),
            Err(MeasureError::DimensionTooLarge(5))
        ));
    }

    #[test]
    fn joint_uncertainty_point_mass_parts() {
        let sigma = cq(&[1.0], vec![pure(&basis_vector(2, 0))]);
        let budget = SearchBudget {
            grid: 32,
            extra_povms: 0,
            seed: 0,
        };
        let v = joint_uncertainty(&sigma, &sigma, &JointMeasure::default(), &budget).unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn joint_uncertainty_separable_default() {
        let sigma = cq(&[0.5, 0.5], vec![pure(&basis_vector(2, 0)), pure(&plus())]);
        let budget = SearchBudget {
            grid: 64,
            extra_povms: 8,
            seed: 1,
        };
        let joint = joint_uncertainty(&sigma, &sigma, &JointMeasure::default(), &budget).unwrap();
        let single =
            min_classical_uncertainty(&sigma, &PhiFunction::ShannonEntropy, &budget).unwrap();
        assert_abs_diff_eq!(joint, 2.0 * single, epsilon = 1e-12);
    }
}
