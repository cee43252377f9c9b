//! Numerical kernel for the Borel cocycle on complete flags.
//!
//! The crate evaluates `B_n` on quadruples of flags in `C^n` as a sum of
//! ideal tetrahedron volumes over quotient configurations, together with
//! the machinery needed to check its cocycle, invariance, boundedness and
//! maximality properties numerically.

pub mod borel;
pub mod completion;
pub mod config;
pub mod error;
pub mod exec;
pub mod flag;
pub mod hypvol;
pub mod invariant;
pub mod mathcore;
pub mod projective;
pub mod sample;
pub mod suites;
pub mod veronese;

pub use error::{BorelError, Result};
