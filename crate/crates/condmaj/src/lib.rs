//! Conditional majorization toolkit.
//!
//! Ordinary majorization compares the uncertainty of two probability vectors
//! through their sorted prefix sums. Conditional majorization extends the
//! comparison to a classical register correlated with a memory: a joint
//! distribution `P` conditionally majorizes `Q` when `Q` is reachable from `P`
//! by doubly stochastic relabelings of the register, conditioned on classical
//! processing of the memory. The relation is a partial order on standard
//! forms, decidable by a linear program, and every verdict here is backed by
//! evidence: a constructive witness `(T, {D^(w)})` when the relation holds, or
//! a nonnegative certificate matrix violating the dual inequality when it
//! does not.
//!
//! Module map:
//!
//! * [`probcore`] — probability vectors, joint matrices, vector majorization,
//!   doubly stochastic transfer constructions, standard form.
//! * [`cmdecide`] — the decision engine: LP feasibility, special-case
//!   dispatch, witnesses and infeasibility certificates.
//! * [`closedform`] — the complete two-column theory and the elementary
//!   bound-construction lemmas.
//! * [`quantum`] — density matrices, classical–quantum states, and the
//!   sufficient conditions for quantum-conditional majorization.
//! * [`measures`] — conditional-uncertainty measures and minimum
//!   classical-conditioned uncertainty over measurement grids.
//! * [`bounds`] — the tripartite state-independent bound and the bipartite
//!   state-dependent bound.
//! * [`sampling`] — seeded random generators used by the search grids and the
//!   self-check suite.
//! * [`selfcheck`] — the property suite behind `condmaj selftest`.
//! * [`jsonio`] — file formats for matrices, CQ states, and bases.
//!
//! ```
//! use condmaj::{conditionally_majorizes, JointDistribution};
//!
//! // A single-column source whose conditional dominates both target
//! // conditionals.
//! let p = JointDistribution::from_rows(&[&[0.7], &[0.3]]).unwrap();
//! let q = JointDistribution::from_rows(&[&[0.35, 0.3], &[0.15, 0.2]]).unwrap();
//! let decision = conditionally_majorizes(&p, &q).unwrap();
//! assert!(decision.verdict);
//! // The witness reconstructs the canonical target exactly.
//! assert!(decision.witness_error().unwrap() <= 1e-7);
//! ```

// Dense index arithmetic over small matrices reads better with explicit
// loops; the range-loop lint fires on nearly all of it.
#![allow(clippy::needless_range_loop)]

pub mod bounds;
pub mod closedform;
pub mod cmdecide;
pub mod jsonio;
pub mod measures;
pub mod probcore;
pub mod quantum;
pub mod sampling;
pub mod selfcheck;
mod simplex;
pub mod tol;

pub use cmdecide::{conditionally_majorizes, CmDecision, DecideOptions, Method};
pub use probcore::{
    majorizes, standard_form, transfer_matrix, JointDistribution, Matrix, ProbVector,
};
