//! Brute-force engine over explicit finite groups.
//!
//! Groups are small enough to enumerate, so subgroups are element sets and
//! every series is computed from its definition. This is the independent
//! check on the closed forms in [`crate::kp`] and [`crate::shield`].

mod group;
mod series;
mod subgroup;
mod verify;

pub use group::{Element, FiniteGroup, DEFAULT_SIZE_LIMIT};
pub use series::{
    kp_series_definitional, lower_central_series, nilpotency_class, profile_extract, series_report, subgroup_exponent,
    Nilpotency,
};
pub use subgroup::{commutator_subgroup, subgroup_closure, Subgroup};
pub use verify::{abelian_structure, baumslag_agrees, verify_shield, ShieldCheck};
