//! Symbolic computation for pure mapping class groups of locally finite
//! infinite graphs.
//!
//! The crate is organised bottom-up:
//!
//! * [`freegrp`] reduced words, Stallings graphs, automorphism inversion and
//!   windowed free factors of infinite-rank free groups.
//! * [`blueprint`] finite terms denoting infinite graphs, their end profiles
//!   and finite truncations.
//! * [`classify`] coarse-boundedness, local coarse-boundedness and
//!   asymptotic-dimension verdicts read off an end profile.
//! * [`mcg`] normal forms for mapping classes on the registered graph families.
//! * [`cbwitness`] certified factorizations over `F ∪ V_K`.
//! * [`fluxdim`] flux homomorphisms and the displacement pseudo-norm.
//! * [`lengthtree`] the comb length function, ultrametric trees, the leveled
//!   tree action and hyperbolicity checks.

pub mod blueprint;
pub mod cbwitness;
pub mod classify;
pub mod fluxdim;
pub mod freegrp;
pub mod lengthtree;
pub mod mcg;

mod halfint;

pub use halfint::HalfInt;

/// Errors shared by every module.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Input text or JSON could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// The input is well formed but outside the domain of the operation.
    #[error("rejected: {0}")]
    Rejected(String),
    /// The request is meaningful but not covered by the registered families.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// An internal consistency check failed.
    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn reject<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Rejected(msg.into()))
}

pub(crate) fn unsupported<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Unsupported(msg.into()))
}
