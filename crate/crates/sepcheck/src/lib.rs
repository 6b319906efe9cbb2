//! Separability criteria and entanglement certificates for finite-dimensional
//! density matrices.
//!
//! A state of a composite quantum system is *separable* when it is a convex
//! mixture of product states; otherwise it is entangled. This crate implements
//! a battery of necessary conditions for separability — a purity chain over
//! reduced states, a family of block transforms on the qubit factor of a
//! 2×N system, spectrum and majorization comparisons, and the partial
//! transpose — and turns any violation into a machine-readable certificate of
//! entanglement. For 2×2 and 2×3 systems the partial transpose condition is
//! also sufficient, so a definitive `Separable` verdict is possible there.
//!
//! # Quick start
//!
//! ```
//! use sepcheck::criteria::{full_verdict, Conclusion, CriteriaConfig};
//! use sepcheck::states::{bell_state, projector, BellKind};
//!
//! // A Bell state is maximally entangled.
//! let rho = projector(&bell_state(BellKind::PhiPlus)).unwrap();
//! let verdict = full_verdict(&rho, &CriteriaConfig::default()).unwrap();
//! assert_eq!(verdict.conclusion, Conclusion::Entangled);
//! assert!(!verdict.certificates.is_empty());
//! ```
//!
//! Separable states of two qubits get a definitive verdict:
//!
//! ```
//! use sepcheck::criteria::{full_verdict, Conclusion, CriteriaConfig};
//! use sepcheck::states::phi_mixture;
//!
//! // The even mixture of |phi+> and |phi-> equals a classical mixture of
//! // |00> and |11>, which is separable.
//! let rho = phi_mixture(0.5).unwrap();
//! let verdict = full_verdict(&rho, &CriteriaConfig::default()).unwrap();
//! assert_eq!(verdict.conclusion, Conclusion::Separable);
//! ```
//!
//! Individual criteria report a margin — the distance to violation — and a
//! witness describing where the worst case occurred:
//!
//! ```
//! use sepcheck::criteria::{ppt_check, CriteriaConfig};
//! use sepcheck::states::{bell_state, projector, BellKind};
//!
//! let rho = projector(&bell_state(BellKind::PsiMinus)).unwrap();
//! let report = ppt_check(&rho, 1, &CriteriaConfig::default()).unwrap();
//! assert!(!report.satisfied);
//! assert!((report.margin + 0.5).abs() < 1e-9); // partial transpose eigenvalue -1/2
//! ```
//!
//! All randomness is seeded: the same seed gives the same samples, reports,
//! and serialized output on every platform.

pub mod cli;
pub mod criteria;
pub mod diagnostics;
pub mod error;
pub mod linalg;
pub mod rng;
pub mod states;

pub use error::{Error, Result};
