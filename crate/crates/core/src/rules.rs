//! The discharging rule tables: loading, window matching and the
//! at-most-one-rule audit.

use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::charge::{Charge, ElementId, Transfer};
use crate::classes::{FaceClass, FaceSet, FacePatternChar, MatchOptions, VertexClass, VertexSet};
use crate::local::consistency::window_consistent;
use crate::pattern::{parse_pattern, FaceKind, FacePattern, ParseError, Pattern, TRulePattern};
use crate::ring::RingDescriptor;

const EMBEDDED: &str = include_str!("../data/rules.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RuleKind {
    T,
    P,
    H,
}

impl RuleKind {
    pub const ALL: [RuleKind; 3] = [RuleKind::T, RuleKind::P, RuleKind::H];

    pub fn of_face(kind: FaceKind) -> RuleKind {
        match kind {
            FaceKind::Pentagon => RuleKind::P,
            FaceKind::Hexagon => RuleKind::H,
        }
    }

    pub fn letter(self) -> char {
        match self {
            RuleKind::T => 'T',
            RuleKind::P => 'P',
            RuleKind::H => 'H',
        }
    }

    /// Rows per column in the printed tables.
    fn rows(self) -> usize {
        match self {
            RuleKind::T => 13,
            RuleKind::P => 7,
            RuleKind::H => 9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RulePattern {
    T(TRulePattern),
    Face(FacePattern),
}

/// Position of a rule in the printed tables: 1-based row and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TableCell {
    pub table: RuleKind,
    pub row: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub kind: RuleKind,
    pub pattern: RulePattern,
    pub amount: Charge,
    /// 1-based line in the source file.
    pub line: usize,
    pub cell: Option<TableCell>,
}

impl Rule {
    /// The pattern as written in rule files: 7 body characters for T-rules,
    /// the 5-character window for P/H-rules.
    pub fn render(&self) -> String {
        match &self.pattern {
            RulePattern::T(t) => t.render(),
            RulePattern::Face(f) => f.render()[..7].to_string(),
        }
    }

    pub fn to_line(&self) -> String {
        format!("{} {}", self.render(), self.amount)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("line {line}: malformed rule `{text}`: {reason}")]
    Malformed {
        line: usize,
        text: String,
        reason: String,
    },
    #[error("line {line}: {source}")]
    Pattern {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error("line {line}: amount `{amount}` must have denominator 60")]
    Denominator { line: usize, amount: String },
    #[error("line {line}: duplicate rule `{pattern}` (first on line {first})")]
    Duplicate {
        line: usize,
        first: usize,
        pattern: String,
    },
    #[error("line {line}: T-rule `{pattern}` can target a face that is not a 3-face")]
    TargetNotTriangle { line: usize, pattern: String },
    #[error("line {line}: rule `{pattern}` constrains slots outside the v1 f1 v2 f2 v3 window")]
    WindowTooLong { line: usize, pattern: String },
    #[error("more than 128 {0:?}-rules")]
    TooMany(RuleKind),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Two distinct rules matched the same concrete placement.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("window {window} is matched by both `{first}` and `{second}`")]
pub struct AmbiguousRule {
    pub window: String,
    pub first: String,
    pub second: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error(transparent)]
    Ambiguous(#[from] AmbiguousRule),
    #[error("T-rules only feed 3-faces of a 6-face; {ring} has {face} at edge {edge}")]
    NotATriangle { ring: String, edge: usize, face: char },
}

/// Ordered rule list with source coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleTable {
    rules: Vec<Rule>,
}

impl RuleTable {
    /// The built-in tables, with table coordinates attached.
    pub fn embedded() -> RuleTable {
        let mut table = RuleTable::parse(EMBEDDED).expect("embedded rule table is valid");
        for kind in RuleKind::ALL {
            for (n, rule) in table.rules.iter_mut().filter(|r| r.kind == kind).enumerate() {
                rule.cell = Some(TableCell {
                    table: kind,
                    row: n % kind.rows() + 1,
                    column: n / kind.rows() + 1,
                });
            }
        }
        table
    }

    pub fn embedded_text() -> &'static str {
        EMBEDDED
    }

    pub fn load(path: &Path) -> Result<RuleTable, RuleError> {
        let text = std::fs::read_to_string(path).map_err(|source| RuleError::Io {
            path: path.display().to_string(),
            source,
        })?;
        RuleTable::parse(&text)
    }

    pub fn parse(text: &str) -> Result<RuleTable, RuleError> {
        let mut rules: Vec<Rule> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let rule = parse_line(trimmed, line)?;
            let rendered = rule.render();
            if let Some(first) = rules.iter().find(|r| r.render() == rendered) {
                return Err(RuleError::Duplicate {
                    line,
                    first: first.line,
                    pattern: rendered,
                });
            }
            rules.push(rule);
        }
        let table = RuleTable { rules };
        for kind in RuleKind::ALL {
            if table.of_kind(kind).count() > 128 {
                return Err(RuleError::TooMany(kind));
            }
        }
        Ok(table)
    }

    /// Builds a table without the duplicate check (for auditing
    /// hand-assembled tables).
    pub fn from_rules(rules: Vec<Rule>) -> RuleTable {
        RuleTable { rules }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn of_kind(&self, kind: RuleKind) -> impl Iterator<Item = &Rule> {
        self.rules.iter().filter(move |r| r.kind == kind)
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        (
            self.of_kind(RuleKind::T).count(),
            self.of_kind(RuleKind::P).count(),
            self.of_kind(RuleKind::H).count(),
        )
    }

    pub fn find(&self, pattern: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.render() == pattern)
    }

    /// Rule file text, grouped T, P, H with a header comment per group.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for kind in RuleKind::ALL {
            let mut group = self.of_kind(kind).peekable();
            if group.peek().is_none() {
                continue;
            }
            out.push_str(&format!("# {}-rules\n", kind.letter()));
            for r in group {
                out.push_str(&r.to_line());
                out.push('\n');
            }
        }
        out
    }
}

fn parse_line(text: &str, line: usize) -> Result<Rule, RuleError> {
    let malformed = |reason: &str| RuleError::Malformed {
        line,
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let (pat, amount) = text
        .split_once(' ')
        .ok_or_else(|| malformed("expected `<pattern> <numerator>/60`"))?;
    let (num, den) = amount
        .split_once('/')
        .ok_or_else(|| malformed("amount must be written as a fraction"))?;
    let num: i64 = num.parse().map_err(|_| malformed("numerator is not an integer"))?;
    if den != "60" {
        return Err(RuleError::Denominator {
            line,
            amount: amount.to_string(),
        });
    }
    let pattern = parse_pattern(pat).map_err(|source| RuleError::Pattern { line, source })?;
    let (kind, pattern) = match pattern {
        Pattern::TRule(t) => {
            if !t.faces[1].match_set().is_subset(FaceSet::of(&FaceClass::TRIANGLES)) {
                return Err(RuleError::TargetNotTriangle {
                    line,
                    pattern: pat.to_string(),
                });
            }
            (RuleKind::T, RulePattern::T(t))
        }
        Pattern::Face(f) => {
            let outside = f.vertices[3..].iter().any(|c| c.to_char() != '*')
                || f.faces[2..].iter().any(|&c| c != FacePatternChar::Any);
            if outside {
                return Err(RuleError::WindowTooLong {
                    line,
                    pattern: pat.to_string(),
                });
            }
            (RuleKind::of_face(f.kind), RulePattern::Face(f))
        }
    };
    Ok(Rule {
        kind,
        pattern,
        amount: Charge(num),
        line,
        cell: None,
    })
}

/// A linear window `v0 f0 v1 f1 ... v_n` of concrete classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Window<const V: usize, const F: usize> {
    pub vertices: [VertexClass; V],
    pub faces: [FaceClass; F],
}

pub type TWindow = Window<4, 3>;
pub type PvWindow = Window<3, 2>;

impl<const V: usize, const F: usize> Window<V, F> {
    pub const COUNT: usize = 8usize.pow(V as u32) * 6usize.pow(F as u32);

    /// Mixed-radix index, slots in reading order.
    pub fn index(&self) -> usize {
        let mut idx = self.vertices[0].index();
        for j in 0..F {
            idx = (idx * 6 + self.faces[j].index()) * 8 + self.vertices[j + 1].index();
        }
        idx
    }

    pub fn from_index(mut idx: usize) -> Self {
        let mut vertices = [VertexClass::P4; V];
        let mut faces = [FaceClass::Hex; F];
        for j in (0..F).rev() {
            vertices[j + 1] = VertexClass::from_index(idx % 8);
            idx /= 8;
            faces[j] = FaceClass::from_index(idx % 6);
            idx /= 6;
        }
        vertices[0] = VertexClass::from_index(idx);
        Window { vertices, faces }
    }

    pub fn reversed(&self) -> Self {
        let mut out = *self;
        out.vertices.reverse();
        out.faces.reverse();
        out
    }

    pub fn encode(&self, prefix: char) -> String {
        let mut s = format!("{prefix}:");
        for j in 0..V {
            s.push(self.vertices[j].to_char());
            if j < F {
                s.push(self.faces[j].to_char());
            }
        }
        s
    }
}

impl TWindow {
    /// The window around edge `edge` of a 6-ring; the target face is `f1`.
    pub fn around_edge(ring: &RingDescriptor, edge: usize) -> TWindow {
        let k = ring.size();
        let at = |d: usize| (edge + k - 1 + d) % k;
        Window {
            vertices: [ring.vertices[at(0)], ring.vertices[at(1)], ring.vertices[at(2)], ring.vertices[at(3)]],
            faces: [ring.faces[at(0)], ring.faces[at(1)], ring.faces[at(2)]],
        }
    }
}

impl PvWindow {
    /// The window centred on ring vertex `i`.
    pub fn around_vertex(ring: &RingDescriptor, i: usize) -> PvWindow {
        let k = ring.size();
        let at = |d: usize| (i + k - 1 + d) % k;
        Window {
            vertices: [ring.vertices[at(0)], ring.vertices[at(1)], ring.vertices[at(2)]],
            faces: [ring.faces[at(0)], ring.faces[at(1)]],
        }
    }
}

/// Per-slot membership bitmasks: bit `r` of `vertex[j][c]` is set iff rule
/// `r` accepts class `c` at vertex slot `j`.
struct SlotMasks<const V: usize, const F: usize> {
    vertex: [[u128; 8]; V],
    face: [[u128; 6]; F],
}

impl<const V: usize, const F: usize> SlotMasks<V, F> {
    fn new(rules: &[([VertexSet; V], [FaceSet; F])]) -> Self {
        let mut m = SlotMasks {
            vertex: [[0; 8]; V],
            face: [[0; 6]; F],
        };
        for (r, (vs, fs)) in rules.iter().enumerate() {
            for j in 0..V {
                for c in vs[j].iter() {
                    m.vertex[j][c.index()] |= 1 << r;
                }
            }
            for j in 0..F {
                for c in fs[j].iter() {
                    m.face[j][c.index()] |= 1 << r;
                }
            }
        }
        m
    }

    fn forward(&self, w: &Window<V, F>) -> u128 {
        let mut acc = u128::MAX;
        for j in 0..V {
            acc &= self.vertex[j][w.vertices[j].index()];
        }
        for j in 0..F {
            acc &= self.face[j][w.faces[j].index()];
        }
        acc
    }

    fn matches(&self, w: &Window<V, F>, reflection: bool) -> u128 {
        let fwd = self.forward(w);
        if reflection {
            fwd | self.forward(&w.reversed())
        } else {
            fwd
        }
    }
}

const NO_RULE: u8 = u8::MAX;
const AMBIGUOUS: u8 = u8::MAX - 1;

/// Lookup table over every concrete window of one rule kind.
struct KindTable<const V: usize, const F: usize> {
    /// Rule indices (into the full table) of this kind, in table order.
    members: Vec<usize>,
    masks: SlotMasks<V, F>,
    /// Per window: position in `members`, `NO_RULE` or `AMBIGUOUS`.
    lookup: Vec<u8>,
}

impl<const V: usize, const F: usize> KindTable<V, F> {
    fn build(table: &RuleTable, kind: RuleKind, options: MatchOptions) -> Self {
        let mut members = Vec::new();
        let mut compiled = Vec::new();
        for (i, rule) in table.rules.iter().enumerate() {
            if rule.kind != kind {
                continue;
            }
            members.push(i);
            compiled.push(compile_window::<V, F>(rule, options));
        }
        let masks = SlotMasks::new(&compiled);
        let lookup = (0..Window::<V, F>::COUNT)
            .into_par_iter()
            .map(|idx| {
                let m = masks.matches(&Window::from_index(idx), options.reflection);
                match m.count_ones() {
                    0 => NO_RULE,
                    1 => m.trailing_zeros() as u8,
                    _ => AMBIGUOUS,
                }
            })
            .collect();
        KindTable { members, masks, lookup }
    }

    fn hit(&self, w: &Window<V, F>, table: &RuleTable, prefix: char, reflection: bool) -> Result<Option<usize>, AmbiguousRule> {
        match self.lookup[w.index()] {
            NO_RULE => Ok(None),
            AMBIGUOUS => {
                let m = self.masks.matches(w, reflection);
                let a = m.trailing_zeros() as usize;
                let b = (m & !(1 << a)).trailing_zeros() as usize;
                Err(AmbiguousRule {
                    window: w.encode(prefix),
                    first: table.rules[self.members[a]].render(),
                    second: table.rules[self.members[b]].render(),
                })
            }
            pos => Ok(Some(self.members[pos as usize])),
        }
    }
}

fn compile_window<const V: usize, const F: usize>(rule: &Rule, options: MatchOptions) -> ([VertexSet; V], [FaceSet; F]) {
    let mut vs = [VertexSet::FULL; V];
    let mut fs = [FaceSet::FULL; F];
    match &rule.pattern {
        RulePattern::T(t) => {
            for j in 0..V {
                vs[j] = t.vertices[j].match_set(options.semantics);
            }
            for j in 0..F {
                fs[j] = t.faces[j].match_set();
            }
        }
        RulePattern::Face(f) => {
            for j in 0..V {
                vs[j] = f.vertices[j].match_set(options.semantics);
            }
            for j in 0..F {
                fs[j] = f.faces[j].match_set();
            }
        }
    }
    (vs, fs)
}

/// A rule that fired on a window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RuleHit {
    /// Index into [`RuleTable::rules`].
    pub rule: usize,
    pub amount: Charge,
}

/// A rule table compiled for fixed matching options, with lookup tables
/// over every concrete window.
pub struct RuleEngine {
    table: RuleTable,
    options: MatchOptions,
    t: KindTable<4, 3>,
    p: KindTable<3, 2>,
    h: KindTable<3, 2>,
}

impl RuleEngine {
    pub fn new(table: RuleTable, options: MatchOptions) -> RuleEngine {
        let t = KindTable::build(&table, RuleKind::T, options);
        let p = KindTable::build(&table, RuleKind::P, options);
        let h = KindTable::build(&table, RuleKind::H, options);
        RuleEngine {
            table,
            options,
            t,
            p,
            h,
        }
    }

    pub fn table(&self) -> &RuleTable {
        &self.table
    }

    pub fn options(&self) -> MatchOptions {
        self.options
    }

    pub fn rule(&self, index: usize) -> &Rule {
        &self.table.rules[index]
    }

    fn hit(&self, index: Option<usize>) -> Option<RuleHit> {
        index.map(|rule| RuleHit {
            rule,
            amount: self.table.rules[rule].amount,
        })
    }

    pub fn t_window(&self, w: &TWindow) -> Result<Option<RuleHit>, AmbiguousRule> {
        Ok(self.hit(self.t.hit(w, &self.table, 'T', self.options.reflection)?))
    }

    pub fn pv_window(&self, kind: FaceKind, w: &PvWindow) -> Result<Option<RuleHit>, AmbiguousRule> {
        let (t, prefix) = match kind {
            FaceKind::Pentagon => (&self.p, 'P'),
            FaceKind::Hexagon => (&self.h, 'H'),
        };
        Ok(self.hit(t.hit(w, &self.table, prefix, self.options.reflection)?))
    }

    /// Amount sent over edge `edge` of a 6-ring into the 3-face there.
    pub fn match_t_rule(&self, ring: &RingDescriptor, edge: usize) -> Result<Option<(&Rule, Charge)>, MatchError> {
        let face = ring.face(edge);
        if ring.kind != FaceKind::Hexagon || !face.is_triangle() {
            return Err(MatchError::NotATriangle {
                ring: ring.encode(),
                edge,
                face: face.to_char(),
            });
        }
        let hit = self.t_window(&TWindow::around_edge(ring, edge))?;
        Ok(hit.map(|h| (self.rule(h.rule), h.amount)))
    }

    /// Amount the face sends to ring vertex `i` (negative: receives).
    pub fn match_pv_rule(&self, ring: &RingDescriptor, i: usize) -> Result<Option<(&Rule, Charge)>, AmbiguousRule> {
        let hit = self.pv_window(ring.kind, &PvWindow::around_vertex(ring, i))?;
        Ok(hit.map(|h| (self.rule(h.rule), h.amount)))
    }

    /// Every rule application on the ring as a double-entry transfer, in
    /// slot order: for each `i`, the vertex rule at `v_i`, then the T-rule
    /// on edge `v_i v_{i+1}`.
    pub fn apply_rules(&self, ring: &RingDescriptor) -> Result<Vec<Transfer>, AmbiguousRule> {
        let mut out = Vec::new();
        for i in 0..ring.size() {
            if let Some((rule, amount)) = self.match_pv_rule(ring, i)? {
                out.push(vertex_transfer(ring.vertices[i], i, rule.render(), amount));
            }
            if ring.kind == FaceKind::Hexagon && ring.faces[i].is_triangle() {
                let hit = self.t_window(&TWindow::around_edge(ring, i))?;
                if let Some(h) = hit {
                    out.push(Transfer {
                        payer: ElementId::Face,
                        payee: ElementId::Across(i),
                        amount: h.amount,
                        rule: self.rule(h.rule).render(),
                        relay: None,
                    });
                }
            }
        }
        Ok(out)
    }

    /// Net outflow (sent minus received) of the face, without building
    /// transfers.
    pub fn net_outflow(&self, ring: &RingDescriptor) -> Result<Charge, AmbiguousRule> {
        let mut net = Charge::ZERO;
        for i in 0..ring.size() {
            if let Some(h) = self.pv_window(ring.kind, &PvWindow::around_vertex(ring, i))? {
                net += h.amount;
            }
            if ring.kind == FaceKind::Hexagon && ring.faces[i].is_triangle() {
                if let Some(h) = self.t_window(&TWindow::around_edge(ring, i))? {
                    net += h.amount;
                }
            }
        }
        Ok(net)
    }
}

/// Transfer for a P/H rule firing at ring vertex `i` of class `class`.
pub fn vertex_transfer(class: VertexClass, i: usize, rule: String, amount: Charge) -> Transfer {
    if amount.is_negative() {
        Transfer {
            payer: ElementId::Vertex(i),
            payee: ElementId::Face,
            amount: -amount,
            rule,
            relay: None,
        }
    } else if class.is_triangle_four() {
        Transfer {
            payer: ElementId::Face,
            payee: ElementId::OffTriangle(i),
            amount,
            rule,
            relay: Some(ElementId::Vertex(i)),
        }
    } else {
        Transfer {
            payer: ElementId::Face,
            payee: ElementId::Vertex(i),
            amount,
            rule,
            relay: None,
        }
    }
}

/// A concrete consistent window matched by two rules of the same kind.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conflict {
    pub kind: RuleKind,
    pub first: String,
    pub second: String,
    pub window: String,
}

/// Scans every concrete consistent window of each kind and reports each pair
/// of distinct rules that match the same window. Output is ordered by kind,
/// window index, then rule order.
pub fn overlap_audit(table: &RuleTable, options: MatchOptions) -> Vec<Conflict> {
    let mut out = audit_kind::<4, 3>(table, RuleKind::T, options);
    out.extend(audit_kind::<3, 2>(table, RuleKind::P, options));
    out.extend(audit_kind::<3, 2>(table, RuleKind::H, options));
    out
}

fn audit_kind<const V: usize, const F: usize>(table: &RuleTable, kind: RuleKind, options: MatchOptions) -> Vec<Conflict> {
    let members: Vec<&Rule> = table.of_kind(kind).collect();
    let compiled: Vec<_> = members.iter().map(|r| compile_window::<V, F>(r, options)).collect();
    let masks = SlotMasks::new(&compiled);
    (0..Window::<V, F>::COUNT)
        .into_par_iter()
        .flat_map_iter(|idx| {
            let w = Window::<V, F>::from_index(idx);
            let mut found = Vec::new();
            if kind == RuleKind::T && !w.faces[1].is_triangle() {
                return found.into_iter();
            }
            let m = masks.matches(&w, options.reflection);
            if m.count_ones() < 2 || !window_consistent(&w.vertices, &w.faces, kind == RuleKind::P) {
                return found.into_iter();
            }
            let bits: Vec<usize> = (0..members.len()).filter(|&r| m >> r & 1 == 1).collect();
            for (x, &a) in bits.iter().enumerate() {
                for &b in &bits[x + 1..] {
                    found.push(Conflict {
                        kind,
                        first: members[a].render(),
                        second: members[b].render(),
                        window: w.encode(kind.letter()),
                    });
                }
            }
            found.into_iter()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_counts() {
        let t = RuleTable::embedded();
        assert_eq!(t.counts(), (39, 28, 36));
        assert_eq!(t.len(), 103);
    }

    #[test]
    fn embedded_round_trips() {
        let t = RuleTable::embedded();
        assert_eq!(t.serialize(), RuleTable::embedded_text());
    }

    #[test]
    fn coordinates() {
        let t = RuleTable::embedded();
        let r = t.find("T:**xxx**").unwrap();
        assert_eq!(r.cell, Some(TableCell { table: RuleKind::T, row: 13, column: 3 }));
        let r = t.find("H:*QoP*").unwrap();
        assert_eq!(r.cell, Some(TableCell { table: RuleKind::H, row: 9, column: 1 }));
        assert_eq!(r.amount, Charge(20));
    }

    #[test]
    fn line_errors() {
        assert!(matches!(
            RuleTable::parse("T:3H3x3Hx 10/61"),
            Err(RuleError::Denominator { line: 1, .. })
        ));
        assert!(matches!(
            RuleTable::parse("# c\nT:3H3x3Hx 10"),
            Err(RuleError::Malformed { line: 2, .. })
        ));
        assert!(matches!(
            RuleTable::parse("T:3H3Q3Hx 10/60"),
            Err(RuleError::TargetNotTriangle { .. })
        ));
        assert!(matches!(
            RuleTable::parse("P:**+** 1/60\nP:**+** 2/60"),
            Err(RuleError::Duplicate { line: 2, first: 1, .. })
        ));
        assert!(matches!(
            RuleTable::parse("H:**+***3 1/60"),
            Err(RuleError::WindowTooLong { .. })
        ));
        assert!(matches!(RuleTable::parse("P:**q** 1/60"), Err(RuleError::Pattern { .. })));
    }

    #[test]
    fn negative_amount_parses() {
        let t = RuleTable::parse("P:**+** -12/60").unwrap();
        assert_eq!(t.rules()[0].kind, RuleKind::P);
        assert_eq!(t.rules()[0].amount, Charge(-12));
    }

    #[test]
    fn window_index_round_trip() {
        for idx in [0, 1, 777, TWindow::COUNT - 1] {
            assert_eq!(TWindow::from_index(idx).index(), idx);
        }
        for idx in [0, 5, PvWindow::COUNT - 1] {
            assert_eq!(PvWindow::from_index(idx).index(), idx);
        }
    }

    #[test]
    fn duplicate_rule_conflicts() {
        let t = RuleTable::parse("T:**xxx** 20/60").unwrap();
        let mut rules = t.rules().to_vec();
        rules.push(rules[0].clone());
        let conflicts = overlap_audit(&RuleTable::from_rules(rules), MatchOptions::default());
        assert!(!conflicts.is_empty());
        assert!(conflicts.iter().all(|c| c.first == "T:**xxx**" && c.second == "T:**xxx**"));
    }

    #[test]
    fn embedded_tables_do_not_overlap() {
        for semantics in [crate::classes::Semantics::Inclusive4, crate::classes::Semantics::Strict4] {
            for reflection in [true, false] {
                let c = overlap_audit(&RuleTable::embedded(), MatchOptions { semantics, reflection });
                assert!(c.is_empty(), "{semantics:?} reflection={reflection}: {c:?}");
            }
        }
    }

    #[test]
    fn sample_matches() {
        let e = RuleEngine::new(RuleTable::embedded(), MatchOptions::default());
        let ring = RingDescriptor::parse("H:tHtxtH5H6H6H").unwrap();
        let (rule, amount) = e.match_t_rule(&ring, 1).unwrap().unwrap();
        assert_eq!(rule.render(), "T:3H3x3Hx");
        assert_eq!(amount, Charge(10));
        assert!(matches!(e.match_t_rule(&ring, 0), Err(MatchError::NotATriangle { .. })));

        let p = RingDescriptor::parse("P:6H5H6H6H6H").unwrap();
        let (rule, amount) = e.match_pv_rule(&p, 1).unwrap().unwrap();
        assert_eq!(rule.render(), "P:**+**");
        assert_eq!(amount, Charge(-12));

        let h = RingDescriptor::parse("H:4t6x4H4H4H4H").unwrap();
        let (rule, amount) = e.match_pv_rule(&h, 1).unwrap().unwrap();
        assert_eq!(rule.render(), "H:*T6T*");
        assert_eq!(amount, Charge(-40));
    }

    #[test]
    fn relay_transfer() {
        let e = RuleEngine::new(RuleTable::embedded(), MatchOptions::default());
        let h = RingDescriptor::parse("H:4HwH4H4H4H4H").unwrap();
        let ts = e.apply_rules(&h).unwrap();
        assert_eq!(ts.len(), 1);
        assert_eq!(ts[0].payee, ElementId::OffTriangle(1));
        assert_eq!(ts[0].relay, Some(ElementId::Vertex(1)));
        assert_eq!(ts[0].amount, Charge(20));
        let plain = RingDescriptor::parse("H:4H4H4H4H4H4H").unwrap();
        assert!(e.apply_rules(&plain).unwrap().is_empty());
    }
}
