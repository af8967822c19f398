//! Reducible-configuration data: file format, closure expansion and
//! integrity checks.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::classes::Semantics;
use crate::pattern::{closure_expand, FacePattern, ParseError};
use crate::ring::CompiledPattern;

const SHIPPED: &str = include_str!("../data/configs.txt");

/// Number of configurations in the complete published list, counted before
/// the u/v/w closure.
pub const COMPLETE_COUNT: usize = 193;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    PaperText,
    PaperFigureTranscription,
    User,
}

impl Provenance {
    pub fn tag(self) -> &'static str {
        match self {
            Provenance::PaperText => "paper-text",
            Provenance::PaperFigureTranscription => "paper-figure-transcription",
            Provenance::User => "user",
        }
    }

    fn from_tag(tag: &str) -> Option<Provenance> {
        [Provenance::PaperText, Provenance::PaperFigureTranscription, Provenance::User]
            .into_iter()
            .find(|p| p.tag() == tag)
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("line {line}: `{text}` is a T-window, not a face configuration")]
    NotAFace { line: usize, text: String },
    #[error("line {line}: unknown provenance tag `{tag}`")]
    Provenance { line: usize, tag: String },
    #[error("line {line}: `{pattern}` duplicates line {first} up to rotation/reflection")]
    Duplicate {
        line: usize,
        first: usize,
        pattern: String,
    },
    #[error("completeness asserted but the file lists {found} configurations, expected {expected}")]
    Incomplete { found: usize, expected: usize },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigEntry {
    pub pattern: FacePattern,
    /// Tag as written; untagged lines count as [`Provenance::User`].
    pub tag: Option<Provenance>,
    pub line: usize,
}

impl ConfigEntry {
    pub fn provenance(&self) -> Provenance {
        self.tag.unwrap_or(Provenance::User)
    }

    fn to_line(&self) -> String {
        match self.tag {
            Some(t) => format!("{}  # {}", self.pattern.render_short(), t),
            None => self.pattern.render_short(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Line {
    Text(String),
    Entry(usize),
}

/// A list of reducible configurations and its closure-expanded match set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigSet {
    entries: Vec<ConfigEntry>,
    lines: Vec<Line>,
    /// Closure variants keyed by symmetry-canonical form.
    expanded: BTreeMap<String, FacePattern>,
    warnings: Vec<String>,
}

impl Default for ConfigSet {
    fn default() -> Self {
        ConfigSet::empty()
    }
}

impl ConfigSet {
    pub fn empty() -> ConfigSet {
        ConfigSet {
            entries: Vec::new(),
            lines: Vec::new(),
            expanded: BTreeMap::new(),
            warnings: Vec::new(),
        }
    }

    /// The configurations quoted in the text, shipped with the crate.
    pub fn shipped() -> ConfigSet {
        ConfigSet::parse(SHIPPED).expect("shipped configurations are valid")
    }

    pub fn shipped_text() -> &'static str {
        SHIPPED
    }

    pub fn load(path: &Path) -> Result<ConfigSet, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        ConfigSet::parse(&text)
    }

    pub fn parse(text: &str) -> Result<ConfigSet, ConfigError> {
        let mut entries = Vec::new();
        let mut lines = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                lines.push(Line::Text(raw.to_string()));
                continue;
            }
            let (body, tag) = match trimmed.split_once('#') {
                Some((b, t)) => {
                    let t = t.trim();
                    let p = Provenance::from_tag(t).ok_or_else(|| ConfigError::Provenance {
                        line,
                        tag: t.to_string(),
                    })?;
                    (b.trim(), Some(p))
                }
                None => (trimmed, None),
            };
            let pattern = match crate::pattern::parse_pattern(body) {
                Ok(crate::pattern::Pattern::Face(f)) => f,
                Ok(crate::pattern::Pattern::TRule(_)) => {
                    return Err(ConfigError::NotAFace {
                        line,
                        text: body.to_string(),
                    })
                }
                Err(source) => return Err(ConfigError::Parse { line, source }),
            };
            lines.push(Line::Entry(entries.len()));
            entries.push(ConfigEntry { pattern, tag, line });
        }
        ConfigSet::build(entries, lines)
    }

    pub fn from_patterns(patterns: &[FacePattern], provenance: Provenance) -> Result<ConfigSet, ConfigError> {
        let entries: Vec<ConfigEntry> = patterns
            .iter()
            .enumerate()
            .map(|(i, p)| ConfigEntry {
                pattern: *p,
                tag: Some(provenance),
                line: i + 1,
            })
            .collect();
        let lines = (0..entries.len()).map(Line::Entry).collect();
        ConfigSet::build(entries, lines)
    }

    fn build(entries: Vec<ConfigEntry>, lines: Vec<Line>) -> Result<ConfigSet, ConfigError> {
        let canon: Vec<String> = entries.iter().map(|e| e.pattern.canonical()).collect();
        for (i, c) in canon.iter().enumerate() {
            if let Some(j) = canon[..i].iter().position(|d| d == c) {
                return Err(ConfigError::Duplicate {
                    line: entries[i].line,
                    first: entries[j].line,
                    pattern: entries[i].pattern.render_short(),
                });
            }
        }
        let closures: Vec<Vec<String>> = entries
            .iter()
            .map(|e| closure_expand(&e.pattern).iter().map(|p| p.canonical()).collect())
            .collect();
        let mut warnings = Vec::new();
        for (i, e) in entries.iter().enumerate() {
            if let Some(j) = (0..entries.len()).find(|&j| j != i && closures[j].contains(&canon[i])) {
                warnings.push(format!(
                    "line {}: `{}` is implied by the closure of `{}` (line {})",
                    e.line,
                    e.pattern.render_short(),
                    entries[j].pattern.render_short(),
                    entries[j].line
                ));
            }
        }
        let mut expanded = BTreeMap::new();
        for e in &entries {
            for p in closure_expand(&e.pattern) {
                expanded.entry(p.canonical()).or_insert(p);
            }
        }
        Ok(ConfigSet {
            entries,
            lines,
            expanded,
            warnings,
        })
    }

    pub fn entries(&self) -> &[ConfigEntry] {
        &self.entries
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of listed configurations (before closure).
    pub fn pre_closure_count(&self) -> usize {
        self.entries.len()
    }

    /// Number of distinct configurations after closure, up to symmetry.
    pub fn post_closure_count(&self) -> usize {
        self.expanded.len()
    }

    /// Closure-expanded patterns in canonical-form order.
    pub fn expanded(&self) -> impl Iterator<Item = &FacePattern> {
        self.expanded.values()
    }

    pub fn canonical_forms(&self) -> impl Iterator<Item = &String> {
        self.expanded.keys()
    }

    pub fn compiled(&self, semantics: Semantics) -> Vec<CompiledPattern> {
        self.expanded().map(|p| CompiledPattern::compile(p, semantics)).collect()
    }

    pub fn check_complete(&self) -> Result<(), ConfigError> {
        if self.entries.len() != COMPLETE_COUNT {
            return Err(ConfigError::Incomplete {
                found: self.entries.len(),
                expected: COMPLETE_COUNT,
            });
        }
        Ok(())
    }

    /// A set holding the given subset of entries (by index), keeping tags.
    pub fn subset(&self, indices: &[usize]) -> ConfigSet {
        let entries: Vec<ConfigEntry> = indices.iter().map(|&i| self.entries[i].clone()).collect();
        let lines = (0..entries.len()).map(Line::Entry).collect();
        ConfigSet::build(entries, lines).expect("a subset of a valid set is valid")
    }

    /// File text. Comment and blank lines are kept; entries are written as
    /// the pattern with trailing stars omitted and the provenance suffix.
    pub fn save(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            match l {
                Line::Text(t) => out.push_str(t),
                Line::Entry(i) => out.push_str(&self.entries[*i].to_line()),
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConfigDiff {
    pub added: Vec<String>,
    pub removed: Vec<String>,
}

impl ConfigDiff {
    pub fn is_empty(&self) -> bool {
        self.added.is_empty() && self.removed.is_empty()
    }
}

/// Symmetric difference of the closure-expanded sets, as canonical forms:
/// `added` is in `b` only, `removed` in `a` only.
pub fn diff_configs(a: &ConfigSet, b: &ConfigSet) -> ConfigDiff {
    ConfigDiff {
        added: b.canonical_forms().filter(|c| !a.expanded.contains_key(*c)).cloned().collect(),
        removed: a.canonical_forms().filter(|c| !b.expanded.contains_key(*c)).cloned().collect(),
    }
}
