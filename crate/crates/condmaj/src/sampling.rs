//! Seeded random generators for distributions, stochastic matrices,
//! quantum states, channels, and measurements.
//!
//! Everything here is driven by an explicit ChaCha stream so that search
//! grids, Monte-Carlo bounds, and the self-check suite reproduce exactly
//! for a fixed seed.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::probcore::{
    DoublyStochasticMatrix, JointDistribution, Matrix, ProbVector, RowStochasticMatrix,
};
use crate::quantum::{CMatrix, CQState, CVector, DensityMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(normal(rng), normal(rng))
}

/// Uniform point on the probability simplex.
pub fn random_prob_vector(n: usize, rng: &mut ChaCha8Rng) -> ProbVector {
    let mut v: Vec<f64> = (0..n)
        .map(|_| -(rng.random::<f64>().max(f64::MIN_POSITIVE)).ln())
        .collect();
    let s: f64 = v.iter().sum();
    for x in &mut v {
        *x /= s;
    }
    ProbVector::new(v).expect("normalized simplex sample")
}

/// Joint distribution with independent simplex mass over all cells.
pub fn random_joint(n: usize, l: usize, rng: &mut ChaCha8Rng) -> JointDistribution {
    let flat = random_prob_vector(n * l, rng);
    JointDistribution::new(Matrix {
        rows: n,
        cols: l,
        data: flat.as_slice().to_vec(),
    })
    .expect("simplex sample is a joint distribution")
}

pub fn random_permutation(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        p.swap(i, j);
    }
    p
}

/// Convex combination of `k` random permutation matrices.
pub fn random_doubly_stochastic(
    n: usize,
    k: usize,
    rng: &mut ChaCha8Rng,
) -> DoublyStochasticMatrix {
    let weights = random_prob_vector(k, rng);
    let mut m = Matrix::zeros(n, n);
    for &w in weights.as_slice() {
        let perm = random_permutation(n, rng);
        for (row, &col) in perm.iter().enumerate() {
            m.data[row * n + col] += w;
        }
    }
    DoublyStochasticMatrix::new(m).expect("convex combination of permutations")
}

pub fn random_row_stochastic(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> RowStochasticMatrix {
    let mut m = Matrix::zeros(rows, cols);
    for r in 0..rows {
        let row = random_prob_vector(cols, rng);
        m.data[r * cols..(r + 1) * cols].copy_from_slice(row.as_slice());
    }
    RowStochasticMatrix::new(m).expect("rows are simplex samples")
}

/// Apply a random conditioned relabeling `Q = sum_j D^(j) P R^(j)` with
/// `j_count` branches and `m` output columns. The branch matrices `R^(j)`
/// are nonnegative with row-stochastic total, each `D^(j)` doubly
/// stochastic, so the output is conditionally majorized by `P` by
/// construction.
pub fn random_ccr(
    p: &JointDistribution,
    m: usize,
    j_count: usize,
    rng: &mut ChaCha8Rng,
) -> JointDistribution {
    let n = p.rows();
    let l = p.cols();
    // For each input column y, split unit mass across (branch, output) slots.
    let mut r_mats = vec![Matrix::zeros(l, m); j_count];
    for y in 0..l {
        let split = random_prob_vector(j_count * m, rng);
        for j in 0..j_count {
            for w in 0..m {
                r_mats[j].data[y * m + w] = split.as_slice()[j * m + w];
            }
        }
    }
    let mut q = Matrix::zeros(n, m);
    for r_mat in r_mats.iter() {
        let d = random_doubly_stochastic(n, 3.min(n.max(1)), rng);
        let dp = d.matrix().matmul(p.matrix());
        let dpr = dp.matmul(r_mat);
        for (acc, v) in q.data.iter_mut().zip(&dpr.data) {
            *acc += v;
        }
    }
    JointDistribution::new(q).expect("conditioned relabeling preserves total mass")
}

/// Haar-random pure state in dimension `d`.
pub fn haar_state(d: usize, rng: &mut ChaCha8Rng) -> CVector {
    loop {
        let v = CVector::from_fn(d, |_, _| complex_normal(rng));
        let norm = v.norm();
        if norm > 1e-6 {
            return v / Complex64::new(norm, 0.0);
        }
    }
}

/// Haar-random unitary via QR of a Ginibre matrix with the phase fix that
/// makes the distribution exactly Haar.
pub fn haar_unitary(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = DMatrix::from_fn(d, d, |_, _| complex_normal(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for i in 0..d {
        let rii = r[(i, i)];
        let phase = if rii.norm() > 0.0 {
            rii / Complex64::new(rii.norm(), 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        };
        for row in 0..d {
            q[(row, i)] *= phase.conj();
        }
    }
    q
}

/// Haar-random orthonormal basis (the columns of a Haar unitary).
pub fn haar_basis(d: usize, rng: &mut ChaCha8Rng) -> Vec<CVector> {
    let u = haar_unitary(d, rng);
    (0..d).map(|i| CVector::from(u.column(i).clone_owned())).collect()
}

/// Random full-support density matrix `G G^dag / tr`.
pub fn random_density_matrix(d: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let g = DMatrix::from_fn(d, d, |_, _| complex_normal(rng));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m / Complex64::new(tr, 0.0)).expect("Wishart sample is a state")
}

/// CQ state with pure memory conditionals.
pub fn random_pure_cq(n: usize, d: usize, rng: &mut ChaCha8Rng) -> CQState {
    let probs = random_prob_vector(n, rng);
    let states = (0..n)
        .map(|_| DensityMatrix::pure_state(&haar_state(d, rng)).expect("unit vector"))
        .collect();
    CQState::new(probs, states).expect("matching dimensions")
}

/// CQ state with mixed memory conditionals.
pub fn random_cq(n: usize, d: usize, rng: &mut ChaCha8Rng) -> CQState {
    let probs = random_prob_vector(n, rng);
    let states = (0..n).map(|_| random_density_matrix(d, rng)).collect();
    CQState::new(probs, states).expect("matching dimensions")
}

/// A random set of `j_count` Kraus operators with
/// `sum_j K_j^dag K_j = I_d`: blocks of the first `d` columns of a Haar
/// unitary on dimension `j_count * d`.
pub fn random_kraus_set(d: usize, j_count: usize, rng: &mut ChaCha8Rng) -> Vec<CMatrix> {
    let big = haar_unitary(j_count * d, rng);
    (0..j_count)
        .map(|j| {
            CMatrix::from_fn(d, d, |r, c| big[(j * d + r, c)])
        })
        .collect()
}

/// Vectors `v_i` of a random `k`-outcome rank-1 POVM on dimension `d`:
/// `sum_i v_i v_i^dag = I_d`. Requires `k >= d`.
pub fn random_rank1_povm_vectors(d: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<CVector> {
    assert!(k >= d, "a rank-1 POVM needs at least d outcomes");
    let u = haar_unitary(k, rng);
    (0..k)
        .map(|i| CVector::from_fn(d, |a, _| u[(i, a)].conj()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::projector;

    #[test]
    fn doubly_stochastic_sample_validates() {
        let mut r = rng(7);
        for _ in 0..20 {
            let d = random_doubly_stochastic(5, 3, &mut r);
            assert_eq!(d.n(), 5);
        }
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut r = rng(11);
        for d in 2..=4 {
            let u = haar_unitary(d, &mut r);
            let dev = (u.adjoint() * &u - CMatrix::identity(d, d))
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max);
            assert!(dev < 1e-10, "unitarity deviation {dev}");
        }
    }

    #[test]
    fn kraus_set_is_trace_preserving() {
        let mut r = rng(13);
        let ks = random_kraus_set(3, 4, &mut r);
        let mut acc = CMatrix::zeros(3, 3);
        for k in &ks {
            acc += k.adjoint() * k;
        }
        let dev = (acc - CMatrix::identity(3, 3))
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-10);
    }

    #[test]
    fn rank1_povm_vectors_complete() {
        let mut r = rng(17);
        for k in 2..=4 {
            let vs = random_rank1_povm_vectors(2, k, &mut r);
            let mut acc = CMatrix::zeros(2, 2);
            for v in &vs {
                acc += projector(v);
            }
            let dev = (acc - CMatrix::identity(2, 2))
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max);
            assert!(dev < 1e-10);
        }
    }

    #[test]
    fn ccr_output_is_valid_distribution() {
        let mut r = rng(19);
        let p = random_joint(3, 2, &mut r);
        let q = random_ccr(&p, 3, 2, &mut r);
        assert_eq!(q.rows(), 3);
        assert_eq!(q.cols(), 3);
    }

    #[test]
    fn fixed_seed_reproduces() {
        let a = random_joint(3, 3, &mut rng(42));
        let b = random_joint(3, 3, &mut rng(42));
        assert_eq!(a.matrix().data, b.matrix().data);
    }
}
