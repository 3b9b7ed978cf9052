//! Sign hyperfield evaluation of Pascal forms, the contraction onto the
//! outer ring, and the symbolic case analysis built on it.

pub mod contraction;
pub mod pipeline;
pub mod sign;
pub mod symbolic;

pub use sign::{hyperfield_excludes, HyperSum, Sign, SignConfiguration, SignForm};
