//! Exact nilpotency-class arithmetic for wreath products of finite p-groups.
//!
//! The symbolic side ([`abelian`], [`kp`], [`shield`], [`variety`]) works on
//! structure descriptions only and uses arbitrary-precision integers
//! throughout. The [`oracle`] module builds small groups explicitly, measures
//! their lower central series by brute force and is used to cross-check the
//! closed forms.

pub mod abelian;
mod error;
pub mod kp;
pub mod oracle;
mod primes;
pub mod shield;
pub mod variety;

pub use abelian::AbelianPGroup;
pub use error::{Error, Result};
pub use kp::{KpRun, ShieldParams};
pub use shield::{ActiveProfile, LemmaInputs};
pub use variety::{AbelianGroupSpec, Multiplicity};
