//! Exact counting and certified asymptotics for t-core partitions.
//!
//! A partition is a *t-core* when none of its hook lengths equals `t`.
//! The crate is organised bottom-up:
//!
//! - [`exact`]: arbitrary-precision `p(N)` and `c_t(N)` series plus a
//!   hook-length enumeration oracle.
//! - [`modular`]: double-precision evaluation of `log η`, `log f_t`, the
//!   functions `φ_k` and `φ_k'`, and their polynomial tables.
//! - [`saddle`]: the saddle-point equation for `y(t, N)` and the constants
//!   `v, A(κ), B(κ)`.
//! - [`asymptotics`]: log-space estimates of `c_t(N)` with explicit relative
//!   error bounds, and numerical checks of the underlying integral bounds.
//! - [`stanton`]: exhaustive and certified verification of
//!   `c_t(N) ≤ c_{t+1}(N)`.
//! - [`lemmas`]: the property suites behind `tcore selftest`.

// Negated float comparisons are used deliberately so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod error;
pub mod exact;
pub mod lemmas;
pub mod modular;
pub mod saddle;
pub mod stanton;

pub use error::{Error, Result};
