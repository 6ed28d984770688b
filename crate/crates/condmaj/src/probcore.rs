//! Probability vectors, joint-distribution matrices, vector majorization,
//! doubly stochastic constructions, and standard-form canonicalization.
//!
//! The standard form of a joint matrix sorts every column in non-increasing
//! order, merges proportional columns, and orders the surviving columns by
//! non-increasing marginal (ties broken lexicographically on partial sums).
//! Two matrices are conditionally equivalent exactly when their standard
//! forms coincide, so every decision routine in this crate canonicalizes
//! first.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tol::{EPS_PROB, EPS_PROP};

#[derive(Debug, Error)]
pub enum ProbError {
    #[error("entry {index} is {value}; entries must be >= -{tolerance}")]
    NegativeEntry {
        index: usize,
        value: f64,
        tolerance: f64,
    },
    #[error("entries sum to {sum}, expected {expected} within {tolerance}")]
    BadSum {
        sum: f64,
        expected: f64,
        tolerance: f64,
    },
    #[error("matrix data length {len} does not match {rows}x{cols}")]
    ShapeMismatch { len: usize, rows: usize, cols: usize },
    #[error("matrix row {row} sums to {sum}, expected 1")]
    BadRowSum { row: usize, sum: f64 },
    #[error("matrix column {col} sums to {sum}, expected 1")]
    BadColSum { col: usize, sum: f64 },
    #[error("zero total mass")]
    ZeroMass,
    #[error("target vector is not majorized by the source vector")]
    MajorizationViolation,
    #[error("vectors have mismatched totals: {0} vs {1}")]
    SumMismatch(f64, f64),
}

/// Plain dense row-major real matrix. This is the wire type for the JSON
/// exchange format `{"rows": n, "cols": l, "data": [row-major floats]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, ProbError> {
        if data.len() != rows * cols {
            return Err(ProbError::ShapeMismatch {
                len: data.len(),
                rows,
                cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Column sums.
    pub fn col_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.cols];
        for r in 0..self.rows {
            for c in 0..self.cols {
                sums[c] += self.get(r, c);
            }
        }
        sums
    }

    /// Row sums.
    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.rows).map(|r| self.row(r).iter().sum()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0.0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs.get(k, c);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn max_abs_diff(&self, rhs: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// A probability vector: nonnegative entries summing to one.
///
/// Entries may undershoot zero by at most [`EPS_PROB`] on input and are
/// clamped; the sum must be one within the same tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProbVector {
    entries: Vec<f64>,
}

impl ProbVector {
    pub fn new(entries: Vec<f64>) -> Result<Self, ProbError> {
        let clamped = clamp_nonnegative(entries, EPS_PROB)?;
        let sum: f64 = clamped.iter().sum();
        if (sum - 1.0).abs() > EPS_PROB {
            return Err(ProbError::BadSum {
                sum,
                expected: 1.0,
                tolerance: EPS_PROB,
            });
        }
        Ok(Self { entries: clamped })
    }

    /// Uniform distribution on `n` outcomes.
    pub fn uniform(n: usize) -> Self {
        Self {
            entries: vec![1.0 / n as f64; n],
        }
    }

    /// Point mass on outcome `i` of `n`.
    pub fn point_mass(n: usize, i: usize) -> Self {
        let mut entries = vec![0.0; n];
        entries[i] = 1.0;
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    /// Entries rearranged in non-increasing order.
    pub fn sorted_desc(&self) -> Vec<f64> {
        sorted_desc(&self.entries)
    }
}

/// An `n x l` joint distribution matrix: nonnegative entries with total
/// mass one. Rows index the classical register, columns the memory.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    mat: Matrix,
}

impl JointDistribution {
    pub fn new(mat: Matrix) -> Result<Self, ProbError> {
        let Matrix { rows, cols, data } = mat;
        let data = clamp_nonnegative(data, EPS_PROB)?;
        let sum: f64 = data.iter().sum();
        if sum <= EPS_PROB {
            return Err(ProbError::ZeroMass);
        }
        if (sum - 1.0).abs() > EPS_PROB {
            return Err(ProbError::BadSum {
                sum,
                expected: 1.0,
                tolerance: EPS_PROB,
            });
        }
        Ok(Self {
            mat: Matrix { rows, cols, data },
        })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self, ProbError> {
        let n = rows.len();
        let l = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(n * l);
        for r in rows {
            if r.len() != l {
                return Err(ProbError::ShapeMismatch {
                    len: r.len(),
                    rows: n,
                    cols: l,
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(Matrix {
            rows: n,
            cols: l,
            data,
        })
    }

    /// Single-column distribution from a probability vector.
    pub fn from_prob_vector(p: &ProbVector) -> Self {
        Self {
            mat: Matrix {
                rows: p.len(),
                cols: 1,
                data: p.as_slice().to_vec(),
            },
        }
    }

    pub fn rows(&self) -> usize {
        self.mat.rows
    }

    pub fn cols(&self) -> usize {
        self.mat.cols
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.mat.get(x, y)
    }

    pub fn column(&self, y: usize) -> Vec<f64> {
        self.mat.column(y)
    }

    /// Memory marginals `p_y = sum_x p_xy`.
    pub fn marginals(&self) -> Vec<f64> {
        self.mat.col_sums()
    }

    /// Register marginal `p_x = sum_y p_xy`.
    pub fn register_marginal(&self) -> Vec<f64> {
        self.mat.row_sums()
    }

    /// Conditional distribution of the register given memory outcome `y`,
    /// or `None` when the marginal vanishes.
    pub fn conditional(&self, y: usize) -> Option<Vec<f64>> {
        let col = self.column(y);
        let p_y: f64 = col.iter().sum();
        if p_y <= EPS_PROB {
            return None;
        }
        Some(col.into_iter().map(|v| v / p_y).collect())
    }

    /// Append `extra` zero rows (conditional-majorization instances must
    /// share the register dimension).
    pub fn pad_rows(&self, extra: usize) -> Self {
        let mut data = self.mat.data.clone();
        data.extend(std::iter::repeat_n(0.0, extra * self.cols()));
        Self {
            mat: Matrix {
                rows: self.rows() + extra,
                cols: self.cols(),
                data,
            },
        }
    }
}

/// A square matrix with nonnegative entries whose rows and columns each sum
/// to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DoublyStochasticMatrix {
    mat: Matrix,
}

impl DoublyStochasticMatrix {
    pub fn new(mat: Matrix) -> Result<Self, ProbError> {
        if mat.rows != mat.cols {
            return Err(ProbError::ShapeMismatch {
                len: mat.data.len(),
                rows: mat.rows,
                cols: mat.cols,
            });
        }
        let data = clamp_nonnegative(mat.data, EPS_PROB)?;
        let mat = Matrix {
            rows: mat.rows,
            cols: mat.cols,
            data,
        };
        for (r, s) in mat.row_sums().iter().enumerate() {
            if (s - 1.0).abs() > EPS_PROB {
                return Err(ProbError::BadRowSum { row: r, sum: *s });
            }
        }
        for (c, s) in mat.col_sums().iter().enumerate() {
            if (s - 1.0).abs() > EPS_PROB {
                return Err(ProbError::BadColSum { col: c, sum: *s });
            }
        }
        Ok(Self { mat })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mat: Matrix::identity(n),
        }
    }

    pub fn n(&self) -> usize {
        self.mat.rows
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.mat.matvec(v)
    }
}

/// A rectangular matrix with nonnegative entries whose rows each sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct RowStochasticMatrix {
    mat: Matrix,
}

impl RowStochasticMatrix {
    pub fn new(mat: Matrix) -> Result<Self, ProbError> {
        let data = clamp_nonnegative(mat.data, EPS_PROB)?;
        let mat = Matrix {
            rows: mat.rows,
            cols: mat.cols,
            data,
        };
        for (r, s) in mat.row_sums().iter().enumerate() {
            if (s - 1.0).abs() > EPS_PROB {
                return Err(ProbError::BadRowSum { row: r, sum: *s });
            }
        }
        Ok(Self { mat })
    }

    pub fn rows(&self) -> usize {
        self.mat.rows
    }

    pub fn cols(&self) -> usize {
        self.mat.cols
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }
}

fn clamp_nonnegative(mut data: Vec<f64>, tolerance: f64) -> Result<Vec<f64>, ProbError> {
    for (index, v) in data.iter_mut().enumerate() {
        if *v < -tolerance || !v.is_finite() {
            return Err(ProbError::NegativeEntry {
                index,
                value: *v,
                tolerance,
            });
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(data)
}

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// `true` iff `p` majorizes `q`: every prefix sum of the non-increasing
/// rearrangement of `p` dominates the corresponding prefix sum of `q`,
/// within [`EPS_PROB`]. Vectors of different length are zero-padded.
pub fn majorizes(p: &ProbVector, q: &ProbVector) -> bool {
    majorizes_slices(p.as_slice(), q.as_slice(), EPS_PROB)
}

/// Prefix-sum dominance on raw nonnegative slices (zero-padded to equal
/// length); callers pick the slack.
pub fn majorizes_slices(p: &[f64], q: &[f64], slack: f64) -> bool {
    let n = p.len().max(q.len());
    let mut ps = sorted_desc(p);
    let mut qs = sorted_desc(q);
    ps.resize(n, 0.0);
    qs.resize(n, 0.0);
    let mut acc_p = 0.0;
    let mut acc_q = 0.0;
    for k in 0..n {
        acc_p += ps[k];
        acc_q += qs[k];
        if acc_p < acc_q - slack {
            return false;
        }
    }
    true
}

/// Provenance for one proportional-column comparison that landed close to
/// the detection threshold (either side), recorded because the merge rule
/// is tolerance-based.
#[derive(Debug, Clone, PartialEq)]
pub struct ProportionalityFlag {
    /// Original indices of one member from each compared group.
    pub columns: (usize, usize),
    /// Largest cross-product residual `|u_i v_j - u_j v_i|` observed.
    pub residual: f64,
    /// Threshold the residual was compared against.
    pub threshold: f64,
    pub merged: bool,
}

/// Output of [`standard_form`]: the canonical matrix plus full provenance
/// of the three standardization steps.
#[derive(Debug, Clone)]
pub struct StandardFormResult {
    /// The canonical matrix: columns sorted non-increasingly, no two
    /// columns proportional, columns in canonical order.
    pub canonical: JointDistribution,
    /// For each original column `y`, the permutation applied in step 1:
    /// `row_permutations[y][i]` is the original row whose entry landed at
    /// sorted position `i`.
    pub row_permutations: Vec<Vec<usize>>,
    /// Partition of the surviving original column indices into merged
    /// groups, listed in canonical column order.
    pub merge_groups: Vec<Vec<usize>>,
    /// Step-3 ordering: `column_order[k]` is the position (in the merge
    /// pass) of the group that became canonical column `k`.
    pub column_order: Vec<usize>,
    /// Original columns dropped for having zero marginal.
    pub dropped_columns: Vec<usize>,
    /// Proportionality comparisons that landed near the threshold.
    pub near_threshold: Vec<ProportionalityFlag>,
}

/// Canonicalize a joint distribution: sort within columns, merge
/// proportional columns, order columns by non-increasing marginal with
/// partial-sum tie-breaking. Zero-marginal columns are dropped.
///
/// The canonical matrix is invariant, bit for bit, under any permutation of
/// the input's columns and any permutation within its columns: sorting and
/// merge accumulation both run in an ordering derived from entry values
/// alone.
pub fn standard_form(p: &JointDistribution) -> Result<StandardFormResult, ProbError> {
    let n = p.rows();
    let l = p.cols();

    // Step 1: sort within columns, recording permutations.
    let mut sorted_cols: Vec<Vec<f64>> = Vec::with_capacity(l);
    let mut row_permutations: Vec<Vec<usize>> = Vec::with_capacity(l);
    let mut dropped_columns = Vec::new();
    for y in 0..l {
        let col = p.column(y);
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| col[b].partial_cmp(&col[a]).unwrap());
        let sorted: Vec<f64> = idx.iter().map(|&i| col[i]).collect();
        row_permutations.push(idx);
        let marginal: f64 = sorted.iter().sum();
        if marginal <= EPS_PROB {
            dropped_columns.push(y);
            sorted_cols.push(Vec::new()); // placeholder, never used
        } else {
            sorted_cols.push(sorted);
        }
    }
    let kept: Vec<usize> = (0..l).filter(|y| !dropped_columns.contains(y)).collect();
    if kept.is_empty() {
        return Err(ProbError::ZeroMass);
    }

    // Canonical processing order: columns compared by entries alone, so the
    // merge history does not depend on the input's column indexing.
    let mut order = kept.clone();
    order.sort_by(|&a, &b| lex_cmp(&sorted_cols[b], &sorted_cols[a]));

    // Step 2: merge proportional columns. Groups accumulate member columns
    // in canonical order; representatives are re-summed from scratch on
    // each change so the floats do not depend on merge history.
    struct Group {
        members: Vec<usize>,   // original column indices, canonical order
        rep: Vec<f64>,         // sum of member columns
    }
    let mut groups: Vec<Group> = Vec::new();
    let mut near_threshold = Vec::new();
    for &y in &order {
        let col = &sorted_cols[y];
        let mut target = None;
        for (gi, g) in groups.iter().enumerate() {
            let (prop, residual, threshold) = proportional(&g.rep, col);
            if residual / threshold > 1e-2 && residual / threshold < 1e2 {
                near_threshold.push(ProportionalityFlag {
                    columns: (g.members[0], y),
                    residual,
                    threshold,
                    merged: prop,
                });
            }
            if prop {
                target = Some(gi);
                break;
            }
        }
        match target {
            Some(gi) => {
                groups[gi].members.push(y);
                let members = groups[gi].members.clone();
                groups[gi].rep = sum_columns(&sorted_cols, &members);
            }
            None => groups.push(Group {
                members: vec![y],
                rep: col.clone(),
            }),
        }
    }
    // Fixpoint: merged representatives may themselves have become
    // proportional.
    loop {
        let mut merged_any = false;
        'outer: for i in 0..groups.len() {
            for j in (i + 1)..groups.len() {
                let (prop, residual, threshold) = proportional(&groups[i].rep, &groups[j].rep);
                if prop {
                    if residual / threshold > 1e-2 {
                        near_threshold.push(ProportionalityFlag {
                            columns: (groups[i].members[0], groups[j].members[0]),
                            residual,
                            threshold,
                            merged: true,
                        });
                    }
                    let absorbed = groups.remove(j);
                    groups[i].members.extend(absorbed.members);
                    // Restore canonical member order before re-summing.
                    let mut members = groups[i].members.clone();
                    members.sort_by(|&a, &b| lex_cmp(&sorted_cols[b], &sorted_cols[a]));
                    groups[i].members = members.clone();
                    groups[i].rep = sum_columns(&sorted_cols, &members);
                    merged_any = true;
                    break 'outer;
                }
            }
        }
        if !merged_any {
            break;
        }
    }

    // Step 3: order groups by non-increasing marginal; ties resolved by
    // non-increasing partial sums (first component, first two, ...).
    let mut final_order: Vec<usize> = (0..groups.len()).collect();
    final_order.sort_by(|&a, &b| {
        let ka = column_sort_key(&groups[a].rep);
        let kb = column_sort_key(&groups[b].rep);
        lex_cmp(&kb, &ka) // non-increasing marginal, then partial sums
    });
    // Fully identical tie-break keys are impossible once proportional
    // columns are merged: equal partial sums entrywise means equal columns,
    // which would have merged.
    for w in final_order.windows(2) {
        assert_ne!(
            column_sort_key(&groups[w[0]].rep),
            column_sort_key(&groups[w[1]].rep),
            "distinct canonical columns cannot tie on all partial sums"
        );
    }

    let l_prime = groups.len();
    let mut data = vec![0.0; n * l_prime];
    for (k, &gi) in final_order.iter().enumerate() {
        for x in 0..n {
            data[x * l_prime + k] = groups[gi].rep[x];
        }
    }
    let canonical = JointDistribution::new(Matrix {
        rows: n,
        cols: l_prime,
        data,
    })?;
    let merge_groups: Vec<Vec<usize>> = final_order
        .iter()
        .map(|&gi| groups[gi].members.clone())
        .collect();

    Ok(StandardFormResult {
        canonical,
        row_permutations,
        merge_groups,
        column_order: final_order,
        dropped_columns,
        near_threshold,
    })
}

/// Cross-product proportionality test: `u` and `v` are proportional iff
/// `|u_i v_j - u_j v_i| <= EPS_PROP * max_entry` for all `i < j`.
fn proportional(u: &[f64], v: &[f64]) -> (bool, f64, f64) {
    debug_assert_eq!(u.len(), v.len());
    let max_entry = u
        .iter()
        .chain(v.iter())
        .fold(0.0_f64, |m, &x| m.max(x.abs()))
        .max(f64::MIN_POSITIVE);
    let threshold = EPS_PROP * max_entry;
    let mut residual = 0.0_f64;
    for i in 0..u.len() {
        for j in (i + 1)..u.len() {
            residual = residual.max((u[i] * v[j] - u[j] * v[i]).abs());
        }
    }
    (residual <= threshold, residual, threshold)
}

fn sum_columns(cols: &[Vec<f64>], members: &[usize]) -> Vec<f64> {
    let n = cols[members[0]].len();
    let mut rep = vec![0.0; n];
    for &m in members {
        for (r, v) in rep.iter_mut().zip(&cols[m]) {
            *r += v;
        }
    }
    rep
}

/// Sort key for step 3: marginal first, then the prefix sums.
fn column_sort_key(col: &[f64]) -> Vec<f64> {
    let marginal: f64 = col.iter().sum();
    let mut key = Vec::with_capacity(col.len() + 1);
    key.push(marginal);
    let mut acc = 0.0;
    for &v in col {
        acc += v;
        key.push(acc);
    }
    key
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.partial_cmp(y).unwrap() {
            std::cmp::Ordering::Equal => continue,
            ord => return ord,
        }
    }
    a.len().cmp(&b.len())
}

/// Construct a doubly stochastic `D` with `q = D a`, given `q` majorized by
/// `a`, via a finite chain of T-transforms (at most `n - 1`).
pub fn transfer_matrix(
    q: &ProbVector,
    a: &ProbVector,
) -> Result<DoublyStochasticMatrix, ProbError> {
    let d = transfer_matrix_raw(q.as_slice(), a.as_slice())?;
    DoublyStochasticMatrix::new(d)
}

/// As [`transfer_matrix`], on raw nonnegative slices with equal totals
/// (zero-padded to a common length). Used internally on unnormalized matrix
/// columns, whose totals are marginals rather than one.
pub fn transfer_matrix_raw(q: &[f64], a: &[f64]) -> Result<Matrix, ProbError> {
    let n = q.len().max(a.len()).max(1);
    let mut q_pad = q.to_vec();
    let mut a_pad = a.to_vec();
    q_pad.resize(n, 0.0);
    a_pad.resize(n, 0.0);

    let sum_q: f64 = q_pad.iter().sum();
    let sum_a: f64 = a_pad.iter().sum();
    if (sum_q - sum_a).abs() > EPS_PROB * sum_a.max(1.0) {
        return Err(ProbError::SumMismatch(sum_q, sum_a));
    }
    if !majorizes_slices(&a_pad, &q_pad, EPS_PROB * sum_a.max(1.0)) {
        return Err(ProbError::MajorizationViolation);
    }

    // Work in sorted frames; conjugate by the sorting permutations at the
    // end. sort_q maps sorted position -> original index.
    let mut sort_q: Vec<usize> = (0..n).collect();
    sort_q.sort_by(|&i, &j| q_pad[j].partial_cmp(&q_pad[i]).unwrap());
    let mut sort_a: Vec<usize> = (0..n).collect();
    sort_a.sort_by(|&i, &j| a_pad[j].partial_cmp(&a_pad[i]).unwrap());
    let qs: Vec<f64> = sort_q.iter().map(|&i| q_pad[i]).collect();
    let mut work: Vec<f64> = sort_a.iter().map(|&i| a_pad[i]).collect();

    // Residual mismatches below this are left to the final verification;
    // they stem from callers feeding LP-accurate rather than exact data.
    let tau = 1e-13 * sum_a.max(1.0);

    let mut d_sorted = Matrix::identity(n);
    for _ in 0..2 * n {
        // j: largest index where work still exceeds the target.
        let Some(j) = (0..n).rev().find(|&i| work[i] > qs[i] + tau) else {
            break;
        };
        // k: smallest index past j where work falls short.
        let Some(k) = ((j + 1)..n).find(|&i| work[i] < qs[i] - tau) else {
            break;
        };
        let delta = (work[j] - qs[j]).min(qs[k] - work[k]);
        let lambda = delta / (work[j] - work[k]);
        // T-transform on coordinates (j, k): premultiply the accumulated
        // matrix by (1 - lambda) I + lambda P_jk.
        for c in 0..n {
            let row_j = d_sorted.get(j, c);
            let row_k = d_sorted.get(k, c);
            d_sorted.set(j, c, (1.0 - lambda) * row_j + lambda * row_k);
            d_sorted.set(k, c, (1.0 - lambda) * row_k + lambda * row_j);
        }
        work[j] -= delta;
        work[k] += delta;
    }

    // q = S_q^T D_sorted S_a a  where S_q, S_a map original -> sorted.
    let mut d = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            d.set(sort_q[i], sort_a[j], d_sorted.get(i, j));
        }
    }
    Ok(d)
}
