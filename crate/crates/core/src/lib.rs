//! Mechanical verification of a discharging argument for cyclic colorings
//! of plane graphs with faces of size at most 6.
//!
//! The crate parses the configuration-string DSL, applies the discharging
//! rules with exact integer arithmetic (in sixtieths of a unit), enumerates
//! the admissible local neighborhoods and checks the charge bounds on them.

#![allow(clippy::needless_range_loop)]

pub mod charge;
pub mod classes;
pub mod datasets;
pub mod local;
pub mod pattern;
pub mod report;
pub mod ring;
pub mod rules;
pub mod symmetry;
pub mod verify;

pub use charge::{initial_charge, Charge, ChargeBreakdown, ElementId, Transfer};
pub use classes::{
    char_matches, FaceClass, FacePatternChar, FaceSet, MatchOptions, Semantics, VertexClass, VertexPatternChar,
    VertexSet,
};
pub use datasets::{ConfigSet, Provenance};
pub use pattern::{closure_expand, parse_pattern, FaceKind, FacePattern, Pattern, TRulePattern};
pub use ring::{canonical_form, match_ring, RingDescriptor};
pub use rules::{overlap_audit, Rule, RuleEngine, RuleKind, RuleTable};
