//! Mixed orthogonal arrays over products of finite-field extensions and
//! `F_q`-linear error-block codes.
//!
//! The crate is organised bottom-up:
//!
//! - [`field`]: `F_q` and `F_{q^m}` arithmetic, traces, bases and Gram matrices.
//! - [`linalg`]: dense matrices over `F_q` with exact elimination.
//! - [`error_block`]: partitions, error-block codes, duals and π-distance.
//! - [`moa`]: mixed orthogonal arrays, strength, indices and Singleton analysis.
//! - [`duality`]: the coordinate isomorphism ρ, the trace dual and the
//!   code ↔ array conversions.
//! - [`format`]: the text file formats for codes, arrays and field descriptors.

pub mod duality;
pub mod error;
pub mod error_block;
pub mod field;
pub mod format;
pub mod linalg;
pub mod moa;

pub use error::{Error, Result};
