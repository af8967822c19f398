//! Finite local neighborhoods on which the charge bounds are checked.

pub mod consistency;
pub mod rings;
pub mod star;
pub mod triangle;

pub use consistency::{consistency_check, Constraint, Violation, CONSTRAINT_SET_VERSION};
