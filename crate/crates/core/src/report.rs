//! Verification reports: a fixed JSON layout and a plain-text rendering.
//!
//! Reports carry no timing data, so identical runs give identical bytes.

use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::charge::{Charge, Transfer};
use crate::classes::MatchOptions;
use crate::datasets::ConfigSet;
use crate::local::CONSTRAINT_SET_VERSION;
use crate::rules::RuleTable;

pub const SCHEMA_VERSION: &str = "discharge-report/1";

/// Hex SHA-256 of a string.
pub fn content_hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Parameters {
    pub semantics: String,
    pub reflection: bool,
    /// Exclusion patterns as listed in the configuration set.
    pub exclusions: Vec<String>,
    pub constraint_set: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dmax: Option<u32>,
    /// Most violations listed; the count is always exact.
    pub max_violations: usize,
}

impl Parameters {
    pub fn new(options: MatchOptions, configs: &ConfigSet, max_violations: usize) -> Parameters {
        Parameters {
            semantics: options.semantics.name().to_string(),
            reflection: options.reflection,
            exclusions: configs.entries().iter().map(|e| e.pattern.render_short()).collect(),
            constraint_set: CONSTRAINT_SET_VERSION.to_string(),
            size: None,
            dmax: None,
            max_violations,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Versions {
    pub rules: String,
    pub configs: String,
}

impl Versions {
    pub fn of(table: &RuleTable, configs: &ConfigSet) -> Versions {
        Versions {
            rules: content_hash(&table.serialize()),
            configs: content_hash(&configs.save()),
        }
    }
}

/// One sub-check of a multi-part verification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub checked_count: u64,
    pub violation_count: u64,
}

/// An element whose final change of charge `net` (received minus sent) is
/// below `required`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ViolationEntry {
    pub descriptor: String,
    pub net: Charge,
    pub required: Charge,
    pub transfers: Vec<Transfer>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub schema: String,
    pub lemma: String,
    pub parameters: Parameters,
    pub versions: Versions,
    pub checked_count: u64,
    pub violation_count: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    pub violations: Vec<ViolationEntry>,
}

impl VerificationReport {
    pub fn new(lemma: &str, parameters: Parameters, versions: Versions) -> VerificationReport {
        VerificationReport {
            schema: SCHEMA_VERSION.to_string(),
            lemma: lemma.to_string(),
            parameters,
            versions,
            checked_count: 0,
            violation_count: 0,
            checks: Vec::new(),
            violations: Vec::new(),
        }
    }

    pub fn verified(&self) -> bool {
        self.violation_count == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let p = &self.parameters;
        let mut s = String::new();
        let _ = write!(s, "{}", self.lemma);
        if let Some(d) = p.size {
            let _ = write!(s, " (size {d})");
        }
        if let Some(d) = p.dmax {
            let _ = write!(s, " (dmax {d})");
        }
        s.push('\n');
        let _ = writeln!(
            s,
            "  semantics {}, reflection {}, constraints {}",
            p.semantics,
            if p.reflection { "on" } else { "off" },
            p.constraint_set
        );
        let ex = if p.exclusions.is_empty() {
            "none".to_string()
        } else {
            p.exclusions.join(" ")
        };
        let _ = writeln!(s, "  exclusions ({}): {}", p.exclusions.len(), ex);
        let _ = writeln!(s, "  rules {}", &self.versions.rules[..16]);
        let _ = writeln!(s, "  configs {}", &self.versions.configs[..16]);
        for c in &self.checks {
            let _ = writeln!(s, "  check {}: {} checked, {} violations", c.name, c.checked_count, c.violation_count);
        }
        let _ = writeln!(s, "checked {}", self.checked_count);
        let _ = write!(s, "violations {}", self.violation_count);
        if (self.violations.len() as u64) < self.violation_count {
            let _ = write!(s, " (first {} listed)", self.violations.len());
        }
        s.push('\n');
        for v in &self.violations {
            let _ = writeln!(s, "  {}  net {} < {}", v.descriptor, v.net, v.required);
            for t in &v.transfers {
                let _ = writeln!(s, "      {}", render_transfer(t));
            }
        }
        let _ = writeln!(s, "{}", if self.verified() { "VERIFIED" } else { "NOT VERIFIED" });
        s
    }
}

pub fn render_transfer(t: &Transfer) -> String {
    let via = t.relay.map(|r| format!(" via {r}")).unwrap_or_default();
    format!("{} -> {}{via}  {}  {}", t.payer, t.payee, t.amount, t.rule)
}
