//! Optimal strength-1 locating arrays.
//!
//! * [`combinatorics`]: exact `Λ(N, v)` and the LAK value of each variant.
//! * [`spread_types`]: shapes, types, the optimal type and its variants.
//! * [`baranyai`]: realizing an admissible type as a disjoint partial spread
//!   system, one ground element at a time.
//! * [`locating`]: arrays, row sets and definition-level verifiers, plus the
//!   end-to-end generator.
//! * [`oracle`]: exhaustive search and literal quantifier checks for tiny
//!   parameters, independent of the rest.
//! * [`cli`]: the command-line front end.

pub mod baranyai;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod flow;
pub mod format;
pub mod locating;
pub mod oracle;
pub mod sampling;
pub mod spread_types;

pub use combinatorics::{lak, lambda_bound, VariantTag};
pub use error::{Error, Result};
