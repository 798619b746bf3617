//! Self-contained dense LP and small dense SDP solving.
//!
//! The LP side is a two-phase revised simplex with Bland's rule (deterministic,
//! anti-cycling, Farkas certificates on infeasibility). The SDP side is an
//! infeasible-start primal-dual interior point method with Nesterov-Todd
//! scaling and a Mehrotra predictor-corrector, plus a Dykstra
//! alternating-projection fallback for pure feasibility questions.
//!
//! Infeasibility is only ever reported together with a certificate whose
//! margin exceeds the tolerance; anything weaker comes back as
//! [`SdpStatus::Inconclusive`] and callers must treat that distinctly.

mod eigen;
mod sdp;
mod simplex;

pub use eigen::{jacobi_eigenvalues, min_eigenvalue_symmetric};
pub use sdp::{
    solve_sdp, solve_sdp_feasibility, sym_from_entries, SdpError, SdpFeasibility, SdpResult,
    SdpStatus, SemidefiniteProgram, SymMatrix,
};
pub use simplex::{solve_lp, Constraint, ConstraintOp, LinearProgram, LpResult, LpStatus};

/// Absolute feasibility tolerance shared by the LP routines.
pub const LP_TOL: f64 = 1e-9;

/// Constraint-residual tolerance for SDP feasibility answers.
pub const SDP_FEAS_TOL: f64 = 1e-7;

/// Margin an SDP infeasibility certificate must clear before the verdict
/// "infeasible" is issued.
pub const SDP_INFEAS_MARGIN: f64 = 1e-6;
