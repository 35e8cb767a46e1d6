//! Exact arithmetic in `F_q = F_{p^r}` and its extensions `F_{q^m}`:
//! trace maps, Gram matrices, coordinate maps and self-dual bases.

mod base;
mod ext;
pub mod poly;

pub use base::{is_prime, BaseField, PrimePower, MAX_BASE_ORDER};
pub use ext::{
    self_dual_basis_exists, Basis, ExtField, MAX_EXT_ORDER, SELF_DUAL_SEARCH_CAP, TABLE_LIMIT,
};
