//! The conditional-majorization decision engine.
//!
//! After canonicalizing both matrices, `P` conditionally majorizes `Q` iff
//! there is a row-stochastic `T` with `L Q <= L P T` entrywise, where `L`
//! is the lower-triangular all-ones matrix. That feasibility question is
//! dispatched to closed forms when the canonical dimensions allow (single
//! register outcome, single target column, one or two source columns) and
//! otherwise to a Phase-I simplex on the block LP
//!
//! ```text
//!   Gamma t <= b,  t >= 0,
//!   Gamma = [ -LP            ]      b = [ -L q_1 ]
//!           [      -LP       ]          [  ...   ]
//!           [           ...  ]          [ -L q_m ]
//!           [ I_l  I_l  ...  ]          [   e    ]
//! ```
//!
//! Positive verdicts carry a witness `(T, {D^(w)})` reconstructing `Q`
//! column by column; negative verdicts carry a nonnegative matrix `A`
//! violating the dual inequality by a reported gap.

use thiserror::Error;

use crate::closedform::{self, ClosedFormError};
use crate::probcore::{
    majorizes_slices, standard_form, transfer_matrix_raw, DoublyStochasticMatrix,
    JointDistribution, Matrix, ProbError, RowStochasticMatrix,
};
use crate::simplex::{self, LpOutcome, SimplexError};
use crate::tol::{EPS_LP, EPS_PROB, EPS_WIT};

#[derive(Debug, Error)]
pub enum CmError {
    #[error("register dimensions differ ({p_rows} vs {q_rows}); enable row padding to compare")]
    DimensionMismatch { p_rows: usize, q_rows: usize },
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error(transparent)]
    Prob(#[from] ProbError),
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
}

impl From<SimplexError> for CmError {
    fn from(e: SimplexError) -> Self {
        CmError::NumericalFailure(e.to_string())
    }
}

/// Which decision route produced the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Method {
    Lp,
    SpecialN1,
    SpecialM1,
    SpecialL1,
    SpecialL2,
}

/// Constructive evidence for a positive verdict, relative to the canonical
/// forms: `q_w = D^(w) (P T) e_w` for every target column `w`.
#[derive(Debug, Clone)]
pub struct Witness {
    pub t: RowStochasticMatrix,
    pub dlist: Vec<DoublyStochasticMatrix>,
}

/// Evidence for a negative verdict: a nonnegative `n x m` matrix whose
/// columns are non-increasing, violating the dual support-function
/// inequality by at least `gap`.
#[derive(Debug, Clone)]
pub struct FarkasCertificate {
    pub a_matrix: Matrix,
    pub gap: f64,
}

#[derive(Debug, Clone)]
pub struct CmDecision {
    pub verdict: bool,
    pub witness: Option<Witness>,
    pub certificate: Option<FarkasCertificate>,
    pub method: Method,
    /// Canonical form of the source; the witness reconstructs the canonical
    /// target from it.
    pub canonical_p: JointDistribution,
    pub canonical_q: JointDistribution,
}

impl CmDecision {
    /// Max-abs reconstruction error of the witness against the canonical
    /// target, when a witness is present.
    pub fn witness_error(&self) -> Option<f64> {
        let w = self.witness.as_ref()?;
        let pt = self.canonical_p.matrix().matmul(w.t.matrix());
        let m = self.canonical_q.cols();
        let n = self.canonical_q.rows();
        let mut worst = 0.0_f64;
        for wcol in 0..m {
            let a_w = pt.column(wcol);
            let rebuilt = w.dlist[wcol].apply(&a_w);
            for x in 0..n {
                worst = worst.max((rebuilt[x] - self.canonical_q.get(x, wcol)).abs());
            }
        }
        Some(worst)
    }

    /// Recompute the dual-inequality violation of the certificate, when one
    /// is present: positive means the certificate is sound.
    pub fn certificate_violation(&self) -> Option<f64> {
        let c = self.certificate.as_ref()?;
        Some(mr2_violation(
            &c.a_matrix,
            &self.canonical_p,
            &self.canonical_q,
        ))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DecideOptions {
    /// Route everything through the LP, bypassing special cases.
    pub force_lp: bool,
    /// Zero-pad the register dimension of the smaller matrix instead of
    /// rejecting mismatched shapes.
    pub allow_row_padding: bool,
    /// Witness-verification tolerance.
    pub eps_wit: f64,
}

impl Default for DecideOptions {
    fn default() -> Self {
        Self {
            force_lp: false,
            allow_row_padding: false,
            eps_wit: EPS_WIT,
        }
    }
}

/// The LP feasibility instance for canonical `P`, `Q`.
#[derive(Debug, Clone)]
pub struct LpInstance {
    pub gamma: Matrix,
    pub b: Vec<f64>,
}

/// Prefix-sum matrix `L M`: row `i` holds the column prefix sums of `M` up
/// to row `i`.
fn prefix_rows(m: &Matrix) -> Matrix {
    let mut out = m.clone();
    for r in 1..m.rows {
        for c in 0..m.cols {
            let above = out.get(r - 1, c);
            let v = out.get(r, c) + above;
            out.set(r, c, v);
        }
    }
    out
}

/// Assemble the block LP for canonical `P` (n x l) and `Q` (n x m).
pub fn lp_instance(p: &JointDistribution, q: &JointDistribution) -> LpInstance {
    let n = p.rows();
    let l = p.cols();
    let m = q.cols();
    let lp = prefix_rows(p.matrix());
    let lq = prefix_rows(q.matrix());

    let rows = n * m + l;
    let cols = l * m;
    let mut gamma = Matrix::zeros(rows, cols);
    let mut b = vec![0.0; rows];
    for w in 0..m {
        for i in 0..n {
            for y in 0..l {
                gamma.set(w * n + i, w * l + y, -lp.get(i, y));
            }
            b[w * n + i] = -lq.get(i, w);
        }
    }
    for y in 0..l {
        for w in 0..m {
            gamma.set(n * m + y, w * l + y, 1.0);
        }
        b[n * m + y] = 1.0;
    }
    LpInstance { gamma, b }
}

/// Decide `P >=_c Q` with default options.
pub fn conditionally_majorizes(
    p: &JointDistribution,
    q: &JointDistribution,
) -> Result<CmDecision, CmError> {
    conditionally_majorizes_with(p, q, DecideOptions::default())
}

pub fn conditionally_majorizes_with(
    p: &JointDistribution,
    q: &JointDistribution,
    opts: DecideOptions,
) -> Result<CmDecision, CmError> {
    let (p, q) = match p.rows().cmp(&q.rows()) {
        std::cmp::Ordering::Equal => (p.clone(), q.clone()),
        _ if !opts.allow_row_padding => {
            return Err(CmError::DimensionMismatch {
                p_rows: p.rows(),
                q_rows: q.rows(),
            })
        }
        std::cmp::Ordering::Less => (p.pad_rows(q.rows() - p.rows()), q.clone()),
        std::cmp::Ordering::Greater => (p.clone(), q.pad_rows(p.rows() - q.rows())),
    };

    let cp = standard_form(&p)?.canonical;
    let cq = standard_form(&q)?.canonical;
    let n = cp.rows();

    if opts.force_lp {
        return lp_decide(&cp, &cq, opts.eps_wit);
    }

    if n == 1 {
        // A one-outcome register is always maximally certain; both
        // canonical forms reduce to the 1 x 1 unit matrix.
        let witness = assemble_witness(&cp, &cq, Matrix::identity(1), opts.eps_wit)?;
        return Ok(CmDecision {
            verdict: true,
            witness: Some(witness),
            certificate: None,
            method: Method::SpecialN1,
            canonical_p: cp,
            canonical_q: cq,
        });
    }

    if cq.cols() == 1 {
        // Single target column: marginal vector majorization.
        let p_marginal = cp.register_marginal();
        let q_col = cq.column(0);
        let verdict = majorizes_slices(&p_marginal, &q_col, EPS_PROB);
        return finish_special(&cp, &cq, verdict, Method::SpecialM1, ones_column(cp.cols()), opts);
    }

    if cp.cols() == 1 {
        // Single source column: every target conditional must be majorized
        // by it.
        let p_col = cp.column(0);
        let verdict = (0..cq.cols()).all(|w| {
            cq.conditional(w)
                .is_none_or(|cond| majorizes_slices(&p_col, &cond, EPS_PROB))
        });
        let t = Matrix::new(1, cq.cols(), cq.marginals()).expect("1 x m");
        return finish_special(&cp, &cq, verdict, Method::SpecialL1, t, opts);
    }

    if cp.cols() == 2 {
        let (verdict, ws) = closedform::decide_l2_with(&cp, &cq, opts.eps_wit)?;
        let t = closedform::l2_witness_t(&ws, &cq.marginals());
        return finish_special(&cp, &cq, verdict, Method::SpecialL2, t, opts);
    }

    lp_decide(&cp, &cq, opts.eps_wit)
}

fn ones_column(l: usize) -> Matrix {
    Matrix::new(l, 1, vec![1.0; l]).expect("l x 1")
}

fn finish_special(
    cp: &JointDistribution,
    cq: &JointDistribution,
    verdict: bool,
    method: Method,
    t: Matrix,
    opts: DecideOptions,
) -> Result<CmDecision, CmError> {
    if verdict {
        let witness = assemble_witness(cp, cq, complete_rows(t), opts.eps_wit)?;
        Ok(CmDecision {
            verdict: true,
            witness: Some(witness),
            certificate: None,
            method,
            canonical_p: cp.clone(),
            canonical_q: cq.clone(),
        })
    } else {
        // The certificate comes from the LP dual ray; the closed form only
        // decides. If the LP finds the instance feasible after all (a
        // tolerance-boundary case), the LP evidence wins.
        let mut decision = lp_decide(cp, cq, opts.eps_wit)?;
        if !decision.verdict {
            decision.method = method;
        }
        Ok(decision)
    }
}

fn lp_decide(
    cp: &JointDistribution,
    cq: &JointDistribution,
    eps_wit: f64,
) -> Result<CmDecision, CmError> {
    let inst = lp_instance(cp, cq);
    let l = cp.cols();
    let m = cq.cols();
    let n = cp.rows();
    match simplex::feasibility(&inst.gamma, &inst.b, EPS_LP)? {
        LpOutcome::Feasible { t } => {
            let mut t_mat = Matrix::zeros(l, m);
            for w in 0..m {
                for y in 0..l {
                    t_mat.set(y, w, t[w * l + y].max(0.0));
                }
            }
            let witness = assemble_witness(cp, cq, complete_rows(t_mat), eps_wit)?;
            Ok(CmDecision {
                verdict: true,
                witness: Some(witness),
                certificate: None,
                method: Method::Lp,
                canonical_p: cp.clone(),
                canonical_q: cq.clone(),
            })
        }
        LpOutcome::Infeasible { ray, violation } => {
            // a_w = L^T s_w: suffix sums of each dual block, nonnegative and
            // non-increasing by construction.
            let mut a = Matrix::zeros(n, m);
            for w in 0..m {
                let block = &ray[w * n..(w + 1) * n];
                let mut suffix = 0.0;
                for x in (0..n).rev() {
                    suffix += block[x];
                    a.set(x, w, suffix);
                }
            }
            let peak = a.data.iter().fold(0.0_f64, |acc, &v| acc.max(v));
            if peak > 0.0 {
                for v in &mut a.data {
                    *v /= peak;
                }
            }
            let gap = mr2_violation(&a, cp, cq);
            if gap <= 0.0 {
                return Err(CmError::NumericalFailure(format!(
                    "infeasible LP (artificial objective {violation}) produced a certificate \
                     with nonpositive gap {gap}"
                )));
            }
            Ok(CmDecision {
                verdict: false,
                witness: None,
                certificate: Some(FarkasCertificate { a_matrix: a, gap }),
                method: Method::Lp,
                canonical_p: cp.clone(),
                canonical_q: cq.clone(),
            })
        }
    }
}

/// Turn a sub-stochastic `T` into a row-stochastic one: row deficits go to
/// the first column (the source prefix matrix is entrywise nonnegative, so
/// raising an entry of `T` preserves `LQ <= LPT`); row excesses from solver
/// noise are normalized away.
fn complete_rows(mut t: Matrix) -> Matrix {
    let cols = t.cols;
    for y in 0..t.rows {
        let sum: f64 = t.row(y).iter().sum();
        if sum < 1.0 {
            t.data[y * cols] += 1.0 - sum;
        } else if sum > 1.0 {
            for w in 0..cols {
                t.data[y * cols + w] /= sum;
            }
        }
    }
    t
}

fn assemble_witness(
    cp: &JointDistribution,
    cq: &JointDistribution,
    t: Matrix,
    eps_wit: f64,
) -> Result<Witness, CmError> {
    let t = RowStochasticMatrix::new(t)?;
    let pt = cp.matrix().matmul(t.matrix());
    let n = cp.rows();
    let mut dlist = Vec::with_capacity(cq.cols());
    for w in 0..cq.cols() {
        let q_col = cq.column(w);
        let a_col = pt.column(w);
        let d = transfer_matrix_raw(&q_col, &a_col)
            .map_err(|e| CmError::NumericalFailure(format!("witness column {w}: {e}")))?;
        dlist.push(DoublyStochasticMatrix::new(d)?);
    }
    let witness = Witness { t, dlist };
    // Self-check the reconstruction before handing the witness out.
    let mut worst = 0.0_f64;
    for w in 0..cq.cols() {
        let rebuilt = witness.dlist[w].apply(&pt.column(w));
        for x in 0..n {
            worst = worst.max((rebuilt[x] - cq.get(x, w)).abs());
        }
    }
    if worst > eps_wit {
        return Err(CmError::NumericalFailure(format!(
            "witness reconstruction error {worst} exceeds {eps_wit}"
        )));
    }
    Ok(witness)
}

/// The sub-linear functional `Phi_A(v) = max_k (a_k sorted)^T (v sorted)`
/// over the columns `a_k` of `A`.
pub fn phi_a(a: &Matrix, v: &[f64]) -> f64 {
    let mut vs = v.to_vec();
    vs.sort_unstable_by(|x, y| y.partial_cmp(x).unwrap());
    let mut best = f64::NEG_INFINITY;
    for k in 0..a.cols {
        let mut col = a.column(k);
        col.sort_unstable_by(|x, y| y.partial_cmp(x).unwrap());
        let dot: f64 = col.iter().zip(&vs).map(|(x, y)| x * y).sum();
        best = best.max(dot);
    }
    best
}

/// Support function of the set of matrices conditionally majorized by `P`:
/// `sum_y p_y Phi_A(p^{|y})`.
pub fn support_function(p: &JointDistribution, a: &Matrix) -> f64 {
    debug_assert!(a.data.iter().all(|&x| x >= 0.0));
    let marginals = p.marginals();
    let mut total = 0.0;
    for y in 0..p.cols() {
        if let Some(cond) = p.conditional(y) {
            total += marginals[y] * phi_a(a, &cond);
        }
    }
    total
}

/// Averaged-functional gap `sum_y p_y Phi_A(p^{|y}) - sum_w q_w
/// Phi_A(q^{|w})` for a nonnegative matrix `A`. A negative value exhibits a
/// violated necessary condition for `Q <=_c P`.
pub fn check_phi_certificate(
    a: &Matrix,
    p: &JointDistribution,
    q: &JointDistribution,
) -> f64 {
    support_function(p, a) - support_function(q, a)
}

/// Violation of the dual inequality `sum_y p_y Phi_A(p^{|y}) >= sum_w
/// a_w^T q_w` (positive = violated, certifying non-majorization).
fn mr2_violation(a: &Matrix, p: &JointDistribution, q: &JointDistribution) -> f64 {
    let lhs = support_function(p, a);
    let mut rhs = 0.0;
    for w in 0..q.cols() {
        let q_col = q.column(w);
        for x in 0..q.rows() {
            rhs += a.get(x, w) * q_col[x];
        }
    }
    rhs - lhs
}
