//! Exclusivity workbench: where does a behaviour for a Bell or Kochen-Specker
//! scenario sit in the chain of correlation sets
//! STAB (classical) ⊆ TH (quantum) ⊆ E^n ⊆ E^1 = QSTAB?
//!
//! The crate models scenarios and behaviours ([`scenario`]), derives their
//! graphs of exclusivity ([`exgraph`]), decides combinatorial membership with
//! re-checkable certificates ([`polytope`]), handles the semidefinite side of
//! the theta body ([`thetabody`]), and searches for / refutes projective
//! quantum realizations ([`quantum`]). All solvers live in [`numerics`];
//! [`suite`] bundles the reproducible end-to-end checks.

pub mod exgraph;
pub mod numerics;
pub mod polytope;
pub mod quantum;
pub mod scenario;
pub mod suite;
pub mod thetabody;
