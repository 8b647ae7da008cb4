//! Exact reduced and full Wigner coefficients for the Lie superalgebra
//! gl(m|n) in the Gelfand–Tsetlin basis, with an independent brute-force
//! matrix oracle.
//!
//! Everything is exact: values live in ℚ or are tracked as a sign times the
//! square root of a rational ([`exact::CoefficientValue`]).  No floats, ever.
//!
//! The crate has two independent routes to the same numbers:
//!
//! * **Closed forms** ([`rwc`], [`wigner`]): rational-product formulas in the
//!   characteristic roots of a highest weight, assembled into reduced
//!   (one-step) and full (pattern-to-pattern) Wigner coefficients.
//! * **Oracle** ([`oracle`]): explicit matrices. Small modules are built as
//!   submodules of tensor powers of the vector module, a Gelfand–Tsetlin
//!   basis is constructed from scratch, and the same coefficients are
//!   extracted by linear algebra alone — no formula from the closed-form
//!   route is reused.
//!
//! The two routes are kept strictly separate so that agreement between them
//! is evidence, not tautology.
//!
//! # Example
//!
//! Reduced Wigner coefficients for the vector branching gl(1|1) ⊃ gl(1):
//!
//! ```
//! use superwig::algebra::HighestWeight;
//! use superwig::rwc::{BranchContext, Direction, RWCKey};
//! use superwig::exact::rat;
//!
//! let parent = HighestWeight::from_parts(1, 1, &[1, 0]).unwrap();
//! let child = HighestWeight::from_parts(1, 0, &[0]).unwrap();
//! let ctx = BranchContext::new(parent, child).unwrap();
//!
//! // Squared u-present coefficients obey the sum rule Σ_r ρ̄_{r,u} = 1.
//! assert_eq!(ctx.rho_bar(1, 1).unwrap() + ctx.rho_bar(2, 1).unwrap(), rat(1, 1));
//!
//! // The phased coefficient itself: +√(1/2).
//! let key = RWCKey { direction: Direction::Covariant, r: 2, u: Some(1) };
//! let value = ctx.rwc(&key).unwrap();
//! assert_eq!(value.sign(), 1);
//! assert_eq!(*value.radicand(), rat(1, 2));
//! ```

pub mod algebra;
pub mod branching;
pub mod cache;
pub mod error;
pub mod exact;
pub mod linalg;
pub mod oracle;
pub mod rwc;
pub mod verify;
pub mod wigner;

pub use error::Error;
