//! Centralized numerical tolerances.
//!
//! All stochasticity checks, witness verifications, and feasibility
//! thresholds in this crate go through the constants below rather than
//! ad-hoc magic numbers.

/// Stochasticity validation: entries of probability vectors and joint
/// matrices may undershoot zero by this much (and are clamped), and sums
/// must equal their target within this much. f64 carries ~15.9 significant
/// digits; 1e-9 leaves headroom for a few thousand accumulated additions.
pub const EPS_PROB: f64 = 1e-9;

/// Proportional-column detection during standardization. Columns `u`, `v`
/// are proportional iff `|u_i v_j - u_j v_i| <= EPS_PROP * max_entry` for
/// all `i, j`, where `max_entry` is the largest entry of either column.
pub const EPS_PROP: f64 = 1e-9;

/// Witness verification: reconstructing `Q` from `(T, {D^(w)})`, checking
/// certificate inequalities, and closed-form verdict thresholds. Looser
/// than `EPS_PROB` because witnesses pass through an LP solve and a chain
/// of transfer constructions.
pub const EPS_WIT: f64 = 1e-7;

/// Phase-I simplex declares feasibility when the artificial objective
/// reaches this value or below.
pub const EPS_LP: f64 = 1e-8;

/// Positive semidefiniteness, Hermiticity, unit-trace, and POVM
/// completeness checks on complex matrices.
pub const EPS_PSD: f64 = 1e-9;

/// Eigenvalues closer than this are treated as one degenerate block; any
/// orthonormal basis of the block is acceptable.
pub const EPS_DEGENERATE: f64 = 1e-10;
