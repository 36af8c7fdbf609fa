//! Verification and symbolic re-derivation toolkit for sparse permutation
//! polynomials over cubic extension fields F_{q^3}, q = p^k, p odd.
//!
//! The crate is organized around four subsystems:
//!
//! - [`ff`]: exact arithmetic for the tower F_p ⊂ F_q ⊂ F_{q^3}, with a
//!   precomputed Frobenius action, norms, enumeration and root-of-unity tests.
//! - [`symbolic`]: sparse multivariate polynomials over arbitrary-precision
//!   integers, Sylvester/subresultant resultants, a fixpoint monomial rewrite,
//!   and the elimination pipelines that replay the resultant identities behind
//!   each polynomial family.
//! - [`families`]: the nine polynomial families, their evaluation over
//!   F_{q^3}, and per-family hypothesis checkers.
//! - [`permcheck`]: exhaustive bijectivity verification, coefficient-space
//!   search and soundness sweeps.

pub mod error;
pub mod families;
pub mod ff;
pub mod permcheck;
pub mod symbolic;

pub use error::Error;

/// Crate result alias.
pub type Result<T> = std::result::Result<T, Error>;
