//! Exact operator calculus for the causal perturbation expansion of the
//! Dirac sea at fixed mass.
//!
//! The engine constructs the perturbation series of the interacting Dirac
//! sea — k̃, p̃, X, Y, t̃, the fermionic projector P, and the rescaled
//! residual operators p̃^res, k̃^res — to arbitrary truncation order with
//! exact ℚ[π²] coefficients, expands them into the fully resolved layer
//! of 𝓑-separated words over {p, k, s}, and verifies the order-by-order
//! identities of the calculus: idempotence of the projector, equivalence
//! of the independent derivation routes, the combinatorial occurrence
//! counts behind the closed-form residual series, the coefficient
//! identities, the p→k replacement rule, and exact agreement with the
//! embedded third-order reference tables.
//!
//! Layer overview:
//! - [`coeff`]: exact rationals and the coefficient ring ℚ[π²].
//! - [`pk`]: the fixed-mass word algebra over {p, k} with p² = k² = p,
//!   pk = kp = k, and truncated polynomials over it.
//! - [`series`]: builders for every named series, in both the normalized
//!   and the plain wrapper convention.
//! - [`expand`]: resolution of b-lines and wrappers into {p, k, s} words.
//! - [`golden`]: the embedded reference tables and their file format.
//! - [`verify`]: the identity suite with structured reports.
//! - [`render`], [`config`]: output formats and CLI configuration.

pub mod coeff;
pub mod config;
pub mod expand;
pub mod golden;
pub mod pk;
pub mod render;
pub mod series;
pub mod verify;

pub use coeff::{Coefficient, Rational};
pub use expand::{expand_core, expand_named, replace_p_by_k, BLetter, BPoly, BWord};
pub use pk::{apply_power_series, PkLetter, PkPoly, PkWord};
pub use series::{op_mul, Engine, Mutation, SeriesId, SubsetQ};
pub use verify::{run_suite, Status, Suite, SuiteOptions, VerifyReport};
