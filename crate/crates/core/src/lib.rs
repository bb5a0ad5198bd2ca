//! Exact modular invariant theory of finite matrix groups over finite fields.
//!
//! Fields and linear algebra live in [`field`] and [`linalg`], the polynomial
//! ring in [`poly`], group enumeration in [`group`], the explicit group
//! families in [`families`] and the invariant-theoretic decisions in
//! [`invariants`].

pub mod error;
pub mod families;
pub mod field;
pub mod group;
pub mod invariants;
pub mod linalg;
pub mod poly;

pub use error::{Error, Result};
pub use field::{Fe, Field};
pub use group::MatrixGroup;
pub use linalg::{Matrix, Subspace};
pub use poly::Polynomial;
