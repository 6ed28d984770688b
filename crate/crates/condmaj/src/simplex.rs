//! Phase-I primal simplex for the feasibility question
//! `exists t >= 0 with Gamma t <= b`, with a Farkas ray on infeasibility.
//!
//! Rows with negative right-hand sides are negated and given artificial
//! variables; the artificial objective is driven to zero. Bland's rule
//! (lowest-index entering column, lowest-index leaving basic variable)
//! guards against cycling. On infeasibility the reduced costs of the slack
//! columns at the Phase-I optimum form a vector `s >= 0` with
//! `s^T Gamma >= 0` and `s^T b = -objective < 0`, which is exactly the dual
//! ray the certificate construction needs.

use thiserror::Error;

use crate::probcore::Matrix;

#[derive(Debug, Error)]
pub enum SimplexError {
    #[error("simplex exceeded the iteration cap of {0}")]
    IterationCap(usize),
    #[error("dimension mismatch: gamma has {rows} rows, b has {len}")]
    Dimension { rows: usize, len: usize },
}

#[derive(Debug, Clone)]
pub enum LpOutcome {
    /// A nonnegative solution of `Gamma t <= b`.
    Feasible { t: Vec<f64> },
    /// A ray `s >= 0` with `s^T Gamma >= 0` and `s^T b < 0`.
    Infeasible { ray: Vec<f64>, violation: f64 },
}

const EPS_PIVOT: f64 = 1e-11;

/// Decide feasibility of `{t >= 0 : Gamma t <= b}`. `eps_feasible` is the
/// artificial-objective level at or below which feasibility is declared.
pub fn feasibility(
    gamma: &Matrix,
    b: &[f64],
    eps_feasible: f64,
) -> Result<LpOutcome, SimplexError> {
    let m = gamma.rows;
    let nvars = gamma.cols;
    if b.len() != m {
        return Err(SimplexError::Dimension {
            rows: m,
            len: b.len(),
        });
    }

    let signs: Vec<f64> = b.iter().map(|&bi| if bi < 0.0 { -1.0 } else { 1.0 }).collect();
    let art_rows: Vec<usize> = (0..m).filter(|&i| signs[i] < 0.0).collect();
    let n_art = art_rows.len();
    let n_total = nvars + m + n_art;

    // Dense tableau rows: [t columns | slack columns | artificial columns].
    let mut tab = vec![0.0; m * n_total];
    let mut rhs = vec![0.0; m];
    let mut basis = vec![0usize; m];
    let mut art_col_of_row = vec![usize::MAX; m];
    for (a_idx, &i) in art_rows.iter().enumerate() {
        art_col_of_row[i] = nvars + m + a_idx;
    }
    for i in 0..m {
        let d = signs[i];
        for j in 0..nvars {
            tab[i * n_total + j] = d * gamma.get(i, j);
        }
        tab[i * n_total + nvars + i] = d; // slack
        rhs[i] = d * b[i];
        if d < 0.0 {
            let ac = art_col_of_row[i];
            tab[i * n_total + ac] = 1.0;
            basis[i] = ac;
        } else {
            basis[i] = nvars + i;
        }
    }

    // Reduced-cost row for the artificial objective: c_j - sum over rows
    // whose basic variable is artificial.
    let mut red = vec![0.0; n_total];
    for j in nvars + m..n_total {
        red[j] = 1.0;
    }
    for &i in &art_rows {
        for j in 0..n_total {
            red[j] -= tab[i * n_total + j];
        }
    }

    let cap = 200_000 + 200 * (m + n_total);
    let mut iterations = 0usize;
    // Bland: lowest-index improving column enters.
    while let Some(enter) = (0..n_total).find(|&j| red[j] < -EPS_PIVOT) {
        // Ratio test; ties resolved by lowest basic-variable index.
        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for i in 0..m {
            let a = tab[i * n_total + enter];
            if a > EPS_PIVOT {
                let ratio = rhs[i] / a;
                let better = ratio < best_ratio - EPS_PIVOT
                    || (ratio < best_ratio + EPS_PIVOT
                        && leave.is_none_or(|l| basis[i] < basis[l]));
                if better {
                    best_ratio = ratio.min(best_ratio);
                    leave = Some(i);
                }
            }
        }
        // The feasibility Phase-I objective is bounded below by zero, so an
        // improving column always admits a leaving row.
        let Some(li) = leave else {
            return Err(SimplexError::IterationCap(iterations));
        };

        // Pivot on (li, enter).
        let piv = tab[li * n_total + enter];
        for j in 0..n_total {
            tab[li * n_total + j] /= piv;
        }
        rhs[li] /= piv;
        for i in 0..m {
            if i == li {
                continue;
            }
            let f = tab[i * n_total + enter];
            if f != 0.0 {
                for j in 0..n_total {
                    tab[i * n_total + j] -= f * tab[li * n_total + j];
                }
                rhs[i] -= f * rhs[li];
                if rhs[i] < 0.0 && rhs[i] > -1e-12 {
                    rhs[i] = 0.0;
                }
            }
        }
        let f = red[enter];
        if f != 0.0 {
            for j in 0..n_total {
                red[j] -= f * tab[li * n_total + j];
            }
        }
        basis[li] = enter;

        iterations += 1;
        if iterations > cap {
            return Err(SimplexError::IterationCap(cap));
        }
    }

    // Artificial objective at optimum.
    let objective: f64 = (0..m)
        .filter(|&i| basis[i] >= nvars + m)
        .map(|i| rhs[i])
        .sum();

    if objective <= eps_feasible {
        let mut t = vec![0.0; nvars];
        for i in 0..m {
            if basis[i] < nvars {
                t[basis[i]] = rhs[i].max(0.0);
            }
        }
        Ok(LpOutcome::Feasible { t })
    } else {
        let ray: Vec<f64> = (0..m).map(|i| red[nvars + i].max(0.0)).collect();
        Ok(LpOutcome::Infeasible {
            ray,
            violation: objective,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: usize, cols: usize, data: &[f64]) -> Matrix {
        Matrix::new(rows, cols, data.to_vec()).unwrap()
    }

    #[test]
    fn feasible_box() {
        // t1 <= 1, t2 <= 1, -t1 - t2 <= -1 (i.e. t1 + t2 >= 1).
        let gamma = mat(3, 2, &[1.0, 0.0, 0.0, 1.0, -1.0, -1.0]);
        let b = [1.0, 1.0, -1.0];
        match feasibility(&gamma, &b, 1e-9).unwrap() {
            LpOutcome::Feasible { t } => {
                assert!(t.iter().all(|&v| v >= 0.0));
                assert!(t[0] + t[1] >= 1.0 - 1e-9);
                assert!(t[0] <= 1.0 + 1e-9 && t[1] <= 1.0 + 1e-9);
            }
            LpOutcome::Infeasible { .. } => panic!("expected feasible"),
        }
    }

    #[test]
    fn infeasible_with_valid_ray() {
        // t1 + t2 <= 1 and t1 + t2 >= 2: infeasible.
        let gamma = mat(2, 2, &[1.0, 1.0, -1.0, -1.0]);
        let b = [1.0, -2.0];
        match feasibility(&gamma, &b, 1e-9).unwrap() {
            LpOutcome::Feasible { .. } => panic!("expected infeasible"),
            LpOutcome::Infeasible { ray, violation } => {
                assert!(violation > 0.5);
                assert!(ray.iter().all(|&s| s >= 0.0));
                // s^T Gamma >= 0 and s^T b < 0.
                for j in 0..2 {
                    let col: f64 = (0..2).map(|i| ray[i] * gamma.get(i, j)).sum();
                    assert!(col >= -1e-9, "ray fails s^T Gamma >= 0");
                }
                let sb: f64 = ray.iter().zip(&b).map(|(s, bi)| s * bi).sum();
                assert!(sb < -1e-9, "ray fails s^T b < 0, got {sb}");
            }
        }
    }

    #[test]
    fn degenerate_equality_boundary() {
        // t1 <= 0.5, -t1 <= -0.5 forces t1 = 0.5 exactly.
        let gamma = mat(2, 1, &[1.0, -1.0]);
        let b = [0.5, -0.5];
        match feasibility(&gamma, &b, 1e-9).unwrap() {
            LpOutcome::Feasible { t } => assert!((t[0] - 0.5).abs() < 1e-9),
            LpOutcome::Infeasible { .. } => panic!("expected feasible"),
        }
    }
}
