//! Closed-form conditional-majorization theory for two-column sources, and
//! the elementary constructions used by the application bounds.
//!
//! For a source with exactly two memory outcomes, feasibility of the
//! decision LP collapses to four scalar inequalities (`W0`, `W1`, `W+`,
//! `W-`), all derived from the prefix-sum gaps between the source
//! conditionals and between each target conditional and the second source
//! conditional.

use serde::Serialize;
use thiserror::Error;

use crate::probcore::{majorizes_slices, JointDistribution, Matrix, ProbVector};
use crate::tol::{EPS_PROB, EPS_WIT};

/// Prefix gaps with magnitude at or below this count as zero when
/// classifying indices into `I+`, `I0`, `I-`.
const TOL_MU: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ClosedFormError {
    #[error("source must have exactly 2 columns, got {0}")]
    ShapeError(usize),
    #[error("source marginal p must lie strictly inside (0, 1), got {0}")]
    DegenerateMarginal(f64),
    #[error("precondition violated: conditional {0:?} is not majorized by the first source conditional")]
    PreconditionViolated(Option<usize>),
    #[error(transparent)]
    Prob(#[from] crate::probcore::ProbError),
}

/// All intermediate quantities of the two-column decision. Prefix index `i`
/// (0-based) refers to the prefix of length `i + 1`.
#[derive(Debug, Clone, Serialize)]
pub struct L2Workspace {
    /// Marginal of the first source column.
    pub p: f64,
    /// Prefix gaps between the two source conditionals; the last entry is
    /// exactly zero.
    pub mu: Vec<f64>,
    /// Per target column `w`: prefix gaps between its conditional and the
    /// second source conditional.
    pub nu: Vec<Vec<f64>>,
    pub iplus: Vec<usize>,
    pub izero: Vec<usize>,
    pub iminus: Vec<usize>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub w_plus: f64,
    pub w_minus: f64,
    /// `+inf` when `I0` is empty (condition vacuous).
    pub w_zero: f64,
    pub w_one: f64,
}

fn conditionals(q: &JointDistribution) -> Result<(Vec<f64>, Vec<Vec<f64>>), ClosedFormError> {
    let marginals = q.marginals();
    let mut conds = Vec::with_capacity(q.cols());
    for (w, &m) in marginals.iter().enumerate() {
        if m <= EPS_PROB {
            // Standard-form inputs have no zero columns.
            return Err(ClosedFormError::DegenerateMarginal(m));
        }
        conds.push(q.conditional(w).expect("positive marginal"));
    }
    Ok((marginals, conds))
}

/// Decide whether the two-column source `p` conditionally majorizes `q`.
///
/// Both matrices must be given in standard form (sorted columns, no
/// proportional columns, canonical column order); `p` must have exactly two
/// columns. The verdict holds iff all four workspace quantities are
/// nonnegative (within [`EPS_WIT`]).
pub fn decide_l2(
    p: &JointDistribution,
    q: &JointDistribution,
) -> Result<(bool, L2Workspace), ClosedFormError> {
    decide_l2_with(p, q, EPS_WIT)
}

pub fn decide_l2_with(
    p: &JointDistribution,
    q: &JointDistribution,
    eps: f64,
) -> Result<(bool, L2Workspace), ClosedFormError> {
    let ws = l2_workspace(p, q)?;
    let verdict = ws.w_plus >= -eps && ws.w_minus >= -eps && ws.w_zero >= -eps && ws.w_one >= -eps;
    Ok((verdict, ws))
}

pub fn l2_workspace(
    p: &JointDistribution,
    q: &JointDistribution,
) -> Result<L2Workspace, ClosedFormError> {
    if p.cols() != 2 {
        return Err(ClosedFormError::ShapeError(p.cols()));
    }
    let n = p.rows().max(q.rows());
    let (p_marg, p_conds) = conditionals(p)?;
    let (q_marg, q_conds) = conditionals(q)?;
    let pm = p_marg[0];
    if pm <= EPS_PROB || pm >= 1.0 - EPS_PROB {
        return Err(ClosedFormError::DegenerateMarginal(pm));
    }

    let pad = |v: &[f64]| {
        let mut out = v.to_vec();
        out.resize(n, 0.0);
        out
    };
    let p1 = pad(&p_conds[0]);
    let p2 = pad(&p_conds[1]);

    let mut mu = Vec::with_capacity(n);
    let mut acc = 0.0;
    for x in 0..n {
        acc += p1[x] - p2[x];
        mu.push(acc);
    }
    // Both conditionals sum to one, so the full-prefix gap vanishes; pin it
    // so the classification below cannot waver.
    mu[n - 1] = 0.0;

    let mut iplus = Vec::new();
    let mut izero = Vec::new();
    let mut iminus = Vec::new();
    for (i, &m) in mu.iter().enumerate() {
        if m > TOL_MU {
            iplus.push(i);
        } else if m < -TOL_MU {
            iminus.push(i);
        } else {
            izero.push(i);
        }
    }

    let m_cols = q.cols();
    let mut nu = Vec::with_capacity(m_cols);
    for cond in &q_conds {
        let c = pad(cond);
        let mut gaps = Vec::with_capacity(n);
        let mut acc = 0.0;
        for x in 0..n {
            acc += c[x] - p2[x];
            gaps.push(acc);
        }
        gaps[n - 1] = 0.0;
        nu.push(gaps);
    }

    let mut alpha = Vec::with_capacity(m_cols);
    let mut beta = Vec::with_capacity(m_cols);
    for (w, gaps) in nu.iter().enumerate() {
        let ratio_max = iplus
            .iter()
            .map(|&k| gaps[k] / mu[k])
            .fold(0.0_f64, f64::max); // empty I+ leaves the inner max at 0
        alpha.push(q_marg[w] / pm * ratio_max);
        let ratio_min = iminus
            .iter()
            .map(|&k| gaps[k] / mu[k])
            .fold(1.0_f64, f64::min); // empty I- leaves the inner min at 1
        beta.push(q_marg[w] / pm * ratio_min);
    }

    let w_plus = 1.0 - alpha.iter().sum::<f64>();
    let w_minus = beta.iter().sum::<f64>() - 1.0;
    let w_zero = if izero.is_empty() {
        f64::INFINITY
    } else {
        -nu.iter()
            .flat_map(|gaps| izero.iter().map(move |&k| gaps[k]))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let w_one = alpha
        .iter()
        .zip(&beta)
        .map(|(a, b)| b - a)
        .fold(f64::INFINITY, f64::min);

    Ok(L2Workspace {
        p: pm,
        mu,
        nu,
        iplus,
        izero,
        iminus,
        alpha,
        beta,
        w_plus,
        w_minus,
        w_zero,
        w_one,
    })
}

/// Build the row-stochastic `T` realizing a positive two-column verdict:
/// the first row interpolates between the alpha and beta vectors so that it
/// sums to one, and the second row is forced by the column marginals.
pub fn l2_witness_t(ws: &L2Workspace, q_marginals: &[f64]) -> Matrix {
    let m = ws.alpha.len();
    let sum_a: f64 = ws.alpha.iter().sum();
    let sum_b: f64 = ws.beta.iter().sum();
    let t = if sum_b - sum_a > 1e-15 {
        ((1.0 - sum_a) / (sum_b - sum_a)).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let mut row1: Vec<f64> = (0..m)
        .map(|w| {
            let gap = (ws.beta[w] - ws.alpha[w]).max(0.0);
            (ws.alpha[w] + t * gap).max(0.0)
        })
        .collect();
    let s: f64 = row1.iter().sum();
    if s > 0.0 {
        for v in &mut row1 {
            *v /= s;
        }
    }
    let mut data = Vec::with_capacity(2 * m);
    data.extend_from_slice(&row1);
    for w in 0..m {
        data.push(((q_marginals[w] - ws.p * row1[w]) / (1.0 - ws.p)).max(0.0));
    }
    Matrix::new(2, m, data).expect("2 x m witness")
}

/// Decision under the stronger hypotheses that the second source
/// conditional and every target conditional are majorized by the first
/// source conditional. In that regime only `W+` can fail, and the verdict
/// reduces to `p >= sum_w q_w max(0, h_w)`.
pub fn decide_gorol(
    p: &JointDistribution,
    q: &JointDistribution,
) -> Result<bool, ClosedFormError> {
    if p.cols() != 2 {
        return Err(ClosedFormError::ShapeError(p.cols()));
    }
    let n = p.rows().max(q.rows());
    let (p_marg, p_conds) = conditionals(p)?;
    let (q_marg, q_conds) = conditionals(q)?;
    let pm = p_marg[0];

    if !majorizes_slices(&p_conds[0], &p_conds[1], EPS_PROB) {
        return Err(ClosedFormError::PreconditionViolated(None));
    }
    for (w, cond) in q_conds.iter().enumerate() {
        if !majorizes_slices(&p_conds[0], cond, EPS_PROB) {
            return Err(ClosedFormError::PreconditionViolated(Some(w)));
        }
    }

    let pad = |v: &[f64]| {
        let mut out = v.to_vec();
        out.resize(n, 0.0);
        out
    };
    let p1 = pad(&p_conds[0]);
    let p2 = pad(&p_conds[1]);

    // Detect the point-mass special case p^{|1} = e_1, which admits the
    // simplified ratio in terms of the second conditional's prefix sums.
    let is_point_mass = (p1[0] - 1.0).abs() <= EPS_PROB;

    let mut budget = 0.0;
    for (w, cond) in q_conds.iter().enumerate() {
        let qc = pad(cond);
        let h_w = if is_point_mass {
            let mut pi = 0.0;
            let mut qk = 0.0;
            let mut h = f64::NEG_INFINITY;
            for x in 0..n {
                pi += p2[x];
                qk += qc[x];
                if pi < 1.0 - TOL_MU {
                    h = h.max((qk - pi) / (1.0 - pi));
                }
            }
            h
        } else {
            let mut mu = 0.0;
            let mut nu = 0.0;
            let mut h = f64::NEG_INFINITY;
            for x in 0..n {
                mu += p1[x] - p2[x];
                nu += qc[x] - p2[x];
                if mu > TOL_MU {
                    h = h.max(nu / mu);
                }
            }
            h
        };
        budget += q_marg[w] * h_w.max(0.0);
    }
    Ok(pm >= budget - EPS_WIT)
}

/// The universal two-column bound built from a weight `alpha` and a sorted
/// distribution `omega`: first column `alpha * e_1`, second column
/// `(1 - alpha) * omega`.
#[derive(Debug, Clone)]
pub struct OmegaBoundClassical {
    pub alpha: f64,
    pub omega: ProbVector,
    pub as_matrix: JointDistribution,
}

impl OmegaBoundClassical {
    /// Assemble the two-column matrix from its parts; `omega` is used in
    /// non-increasing order.
    pub fn from_parts(alpha: f64, omega: ProbVector) -> Self {
        assert!((0.0..=1.0).contains(&alpha), "alpha must lie in [0, 1]");
        let w_sorted = omega.sorted_desc();
        let n = w_sorted.len();
        let mut data = vec![0.0; n * 2];
        data[0] = alpha;
        for x in 0..n {
            data[x * 2 + 1] = (1.0 - alpha) * w_sorted[x];
        }
        let as_matrix = JointDistribution::new(Matrix {
            rows: n,
            cols: 2,
            data,
        })
        .expect("bound matrix is a valid joint distribution");
        Self {
            alpha,
            omega: ProbVector::new(w_sorted).expect("sorted distribution"),
            as_matrix,
        }
    }
}

/// Construct the bound when it is valid for `q`: the target columns whose
/// conditionals are majorized by `omega` must carry mass at least
/// `1 - alpha`. Returns `None` when that mass condition fails.
pub fn build_omega(
    omega: &ProbVector,
    alpha: f64,
    q: &JointDistribution,
) -> Option<OmegaBoundClassical> {
    assert!((0.0..=1.0).contains(&alpha), "alpha must lie in [0, 1]");
    let n = omega.len().max(q.rows());
    let mut w_sorted = omega.sorted_desc();
    w_sorted.resize(n, 0.0);

    let marginals = q.marginals();
    let mut covered = 0.0;
    for w in 0..q.cols() {
        if let Some(cond) = q.conditional(w) {
            if majorizes_slices(&w_sorted, &cond, EPS_PROB) {
                covered += marginals[w];
            }
        }
    }
    if covered < 1.0 - alpha - EPS_WIT {
        return None;
    }
    Some(OmegaBoundClassical::from_parts(
        alpha,
        ProbVector::new(w_sorted).expect("sorted omega"),
    ))
}

/// Columns whose peak conditional probability is at most `beta`, plus their
/// total mass. When the caller guarantees
/// `sum_w q_w max_x q_{x|w} <= r`, Markov's inequality puts the returned
/// mass at `1 - r / beta` or above.
pub fn markov_tail(q: &JointDistribution, r: f64, beta: f64) -> (Vec<usize>, f64) {
    assert!(r > 0.0 && beta > 0.0, "r and beta must be positive");
    let marginals = q.marginals();
    let mut indices = Vec::new();
    let mut mass = 0.0;
    let mut expected_peak = 0.0;
    for w in 0..q.cols() {
        let Some(cond) = q.conditional(w) else {
            continue;
        };
        let peak = cond.iter().fold(0.0_f64, |m, &v| m.max(v));
        expected_peak += marginals[w] * peak;
        if peak <= beta + EPS_PROB {
            indices.push(w);
            mass += marginals[w];
        }
    }
    if expected_peak <= r + EPS_PROB {
        debug_assert!(mass >= 1.0 - r / beta - EPS_WIT);
    }
    (indices, mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn jd(rows: &[&[f64]]) -> JointDistribution {
        JointDistribution::from_rows(rows).unwrap()
    }

    #[test]
    fn decide_l2_worked_instance() {
        // Source columns (0.5, 0) and (0.25, 0.25); target single column
        // (0.75, 0.25).
        let p = jd(&[&[0.5, 0.25], &[0.0, 0.25]]);
        let q = jd(&[&[0.75], &[0.25]]);
        let (verdict, ws) = decide_l2(&p, &q).unwrap();
        assert!(verdict);
        assert_abs_diff_eq!(ws.mu[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(ws.mu[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ws.nu[0][0], 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(ws.alpha[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ws.beta[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ws.w_plus, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ws.w_minus, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ws.w_zero, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ws.w_one, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn decide_l2_reflexive() {
        let p = jd(&[&[0.4, 0.2], &[0.25, 0.15]]);
        let (verdict, _) = decide_l2(&p, &p).unwrap();
        assert!(verdict);
    }

    #[test]
    fn decide_l2_uniform_conditionals_cannot_sharpen() {
        let p = jd(&[&[0.25, 0.25], &[0.25, 0.25]]);
        // A target whose lone conditional is sharper than uniform.
        let q = jd(&[&[0.6], &[0.4]]);
        let (verdict, _) = decide_l2(&p, &q).unwrap();
        assert!(!verdict);
    }

    #[test]
    fn decide_l2_rejects_wrong_shape() {
        let p = jd(&[&[0.5], &[0.5]]);
        let q = jd(&[&[1.0], &[0.0]]);
        assert!(matches!(
            decide_l2(&p, &q),
            Err(ClosedFormError::ShapeError(1))
        ));
    }

    #[test]
    fn gorol_matches_l2_on_worked_instance() {
        let p = jd(&[&[0.5, 0.25], &[0.0, 0.25]]);
        let q = jd(&[&[0.75], &[0.25]]);
        assert!(decide_gorol(&p, &q).unwrap());
        assert!(decide_l2(&p, &q).unwrap().0);
    }

    #[test]
    fn gorol_true_when_targets_match_second_conditional() {
        // Every target conditional equals p^{|2}: the required budget is 0.
        let p = jd(&[&[0.3, 0.35], &[0.0, 0.35]]);
        let q = jd(&[&[0.3, 0.2], &[0.3, 0.2]]);
        assert!(decide_gorol(&p, &q).unwrap());
    }

    #[test]
    fn gorol_point_mass_counterexample() {
        // p^{|1} = e1, p^{|2} = (0.5, 0.5), p = 0.2; the lone target
        // conditional (0.9, 0.1) needs h = 0.8 > 0.2.
        let p = jd(&[&[0.2, 0.4], &[0.0, 0.4]]);
        let q = jd(&[&[0.9], &[0.1]]);
        assert!(!decide_gorol(&p, &q).unwrap());
    }

    #[test]
    fn gorol_rejects_violated_precondition() {
        // p^{|2} = (0.5, 0.5) not majorized by p^{|1} = (0.5, 0.5)? It is;
        // make p^{|1} strictly weaker instead.
        let p = jd(&[&[0.25, 0.4], &[0.25, 0.1]]);
        let q = jd(&[&[0.5], &[0.5]]);
        assert!(matches!(
            decide_gorol(&p, &q),
            Err(ClosedFormError::PreconditionViolated(None))
        ));
    }

    #[test]
    fn build_omega_point_mass_always_succeeds() {
        let omega = ProbVector::point_mass(3, 0);
        let q = jd(&[&[0.2, 0.1], &[0.2, 0.1], &[0.2, 0.2]]);
        let bound = build_omega(&omega, 0.3, &q).unwrap();
        assert_abs_diff_eq!(
            bound.as_matrix.matrix().data.iter().sum::<f64>(),
            1.0,
            epsilon = 1e-12
        );
        // Column 1 carries alpha in its first entry only.
        assert_abs_diff_eq!(bound.as_matrix.get(0, 0), 0.3, epsilon = 1e-15);
        assert_eq!(bound.as_matrix.get(1, 0), 0.0);
    }

    #[test]
    fn build_omega_alpha_one_vacuous() {
        let omega = ProbVector::uniform(2);
        let q = jd(&[&[0.9], &[0.1]]);
        // Uniform omega majorizes nothing sharp, but alpha = 1 demands no
        // coverage at all.
        assert!(build_omega(&omega, 1.0, &q).is_some());
        assert!(build_omega(&omega, 0.5, &q).is_none());
    }

    #[test]
    fn markov_tail_trivial_beta() {
        let q = jd(&[&[0.45, 0.05], &[0.05, 0.45]]);
        let (idx, mass) = markov_tail(&q, 1.0, 1.0);
        assert_eq!(idx, vec![0, 1]);
        assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn markov_tail_sharp_conditionals_empty() {
        let q = jd(&[&[0.5, 0.0], &[0.0, 0.5]]);
        let (idx, mass) = markov_tail(&q, 1.0, 0.5);
        // Each conditional is a point mass: peak 1 > 0.5.
        assert!(idx.is_empty());
        assert_eq!(mass, 0.0);
    }

    #[test]
    fn markov_tail_worked_instance() {
        let q = jd(&[&[0.45, 0.05], &[0.05, 0.45]]);
        // Peaks are 0.9 in both columns; expected peak r = 0.9.
        let (idx, mass) = markov_tail(&q, 0.9, 0.95);
        assert_eq!(idx, vec![0, 1]);
        assert!(mass >= 1.0 - 0.9 / 0.95 - 1e-12);
        assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-12);
    }
}
