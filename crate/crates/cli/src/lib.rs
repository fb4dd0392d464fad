//! Command-line front end for `wreathlab`: text syntaxes for groups and
//! profiles, JSON job requests, and batch execution.

pub mod batch;
pub mod job;
pub mod parse;
