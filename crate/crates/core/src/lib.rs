//! High-precision evaluation of the dyadic almost identities
//!
//! ```text
//! u_n = ln(2) · Σ_{k∈ℤ} (2^{k/2} + 2^{-k/2})^{-n}   ≈ π, 1, π/8, 1/6, 3π/128, 1/30, …
//! ```
//!
//! together with their base-`m` generalisation, the exact targets, the
//! hyperbolic correction series that accounts for the gap, and numerical
//! checks of the Mellin-transform identities behind them.
//!
//! * [`precision`]: contexts, [`BigReal`], elementary functions
//! * [`rational`]: exact rationals and targets
//! * [`series`]: sums, targets, corrections, verification
//! * [`mellin`]: transform quadrature, residue expansions, antiderivative check
//! * [`gallery`]: classical near-integer constants

mod damped;
mod quadrature;

pub mod error;
pub mod gallery;
pub mod mellin;
pub mod precision;
pub mod rational;
pub mod series;

pub use error::{Error, Result};
pub use precision::{const_pi, elem, BigReal, ElemFn, PrecisionContext};
pub use rational::{ExactRational, ExactTarget};
pub use series::{
    check_recurrence, coeff_b, coeff_c, predicted_delta, r_correction, scan, target, u_direct,
    verify_identity, verify_uncorrected, IdentityReport, RecurrenceCheck, ScanEntry, SeriesValue,
};
