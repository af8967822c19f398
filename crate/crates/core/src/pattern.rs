//! The configuration-string DSL: `P:`/`H:` face patterns and `T:` windows.

use std::fmt;

use thiserror::Error;

use crate::classes::{FacePatternChar, VertexPatternChar};
use crate::symmetry;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unknown prefix in `{text}` (expected P:, H: or T:)")]
    UnknownPrefix { text: String },
    #[error("illegal character `{ch}` at position {pos} in `{text}`")]
    IllegalChar { text: String, pos: usize, ch: char },
    #[error("body of `{text}` has {found} characters, at most {max} allowed")]
    TooLong { text: String, found: usize, max: usize },
    #[error("T-pattern `{text}` has a body of {found} characters, exactly 7 required")]
    TLength { text: String, found: usize },
    #[error("expected a {expected} pattern, found `{text}`")]
    WrongKind { text: String, expected: &'static str },
}

/// Size of the face a pattern or descriptor describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaceKind {
    Pentagon,
    Hexagon,
}

impl FaceKind {
    pub fn size(self) -> usize {
        match self {
            FaceKind::Pentagon => 5,
            FaceKind::Hexagon => 6,
        }
    }

    pub fn prefix(self) -> &'static str {
        match self {
            FaceKind::Pentagon => "P:",
            FaceKind::Hexagon => "H:",
        }
    }

    pub fn from_size(size: usize) -> Option<FaceKind> {
        match size {
            5 => Some(FaceKind::Pentagon),
            6 => Some(FaceKind::Hexagon),
            _ => None,
        }
    }

    pub(crate) fn from_prefix(text: &str) -> Option<(FaceKind, &str)> {
        if let Some(body) = text.strip_prefix("P:") {
            Some((FaceKind::Pentagon, body))
        } else {
            text.strip_prefix("H:").map(|body| (FaceKind::Hexagon, body))
        }
    }
}

/// A pattern over a whole 5- or 6-face. Slot `i` holds vertex `v_i` and the
/// face across edge `v_i v_{i+1}`; slots past the face size stay `*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FacePattern {
    pub kind: FaceKind,
    pub vertices: [VertexPatternChar; 6],
    pub faces: [FacePatternChar; 6],
}

impl FacePattern {
    pub fn wildcard(kind: FaceKind) -> FacePattern {
        FacePattern {
            kind,
            vertices: [VertexPatternChar::Any; 6],
            faces: [FacePatternChar::Any; 6],
        }
    }

    pub fn size(&self) -> usize {
        self.kind.size()
    }

    pub fn parse(text: &str) -> Result<FacePattern, ParseError> {
        match parse_pattern(text)? {
            Pattern::Face(p) => Ok(p),
            Pattern::TRule(_) => Err(ParseError::WrongKind {
                text: text.to_string(),
                expected: "P:/H:",
            }),
        }
    }

    /// Fully padded encoding, `2k+2` characters.
    pub fn render(&self) -> String {
        let mut s = String::with_capacity(14);
        s.push_str(self.kind.prefix());
        for i in 0..self.size() {
            s.push(self.vertices[i].to_char());
            s.push(self.faces[i].to_char());
        }
        s
    }

    /// Encoding with trailing stars dropped.
    pub fn render_short(&self) -> String {
        let full = self.render();
        let trimmed = full.trim_end_matches('*');
        trimmed.to_string()
    }

    /// Lexicographically least encoding over rotations and reflections.
    pub fn canonical(&self) -> String {
        let k = self.size();
        let mut best: Option<String> = None;
        for image in 0..2 * k {
            let mut s = String::with_capacity(14);
            s.push_str(self.kind.prefix());
            for i in 0..k {
                let (vi, fi) = symmetry::source(k, image, i);
                s.push(self.vertices[vi].to_char());
                s.push(self.faces[fi].to_char());
            }
            if best.as_ref().is_none_or(|b| s < *b) {
                best = Some(s);
            }
        }
        best.expect("at least one image")
    }
}

impl fmt::Display for FacePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A `T:` window `v1 f1 v2 f2 v3 f3 v4` along a 6-face; `f2` is the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TRulePattern {
    pub vertices: [VertexPatternChar; 4],
    pub faces: [FacePatternChar; 3],
}

impl TRulePattern {
    pub fn parse(text: &str) -> Result<TRulePattern, ParseError> {
        match parse_pattern(text)? {
            Pattern::TRule(p) => Ok(p),
            Pattern::Face(_) => Err(ParseError::WrongKind {
                text: text.to_string(),
                expected: "T:",
            }),
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::from("T:");
        for i in 0..4 {
            s.push(self.vertices[i].to_char());
            if i < 3 {
                s.push(self.faces[i].to_char());
            }
        }
        s
    }
}

impl fmt::Display for TRulePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    Face(FacePattern),
    TRule(TRulePattern),
}

impl Pattern {
    pub fn render(&self) -> String {
        match self {
            Pattern::Face(p) => p.render(),
            Pattern::TRule(p) => p.render(),
        }
    }
}

/// Parses any encoded pattern. Omitted trailing positions of `P:`/`H:`
/// patterns are filled with `*`; `T:` bodies must be complete.
pub fn parse_pattern(text: &str) -> Result<Pattern, ParseError> {
    let illegal = |pos: usize, ch: char| ParseError::IllegalChar {
        text: text.to_string(),
        pos,
        ch,
    };

    if let Some(body) = text.strip_prefix("T:") {
        let chars: Vec<char> = body.chars().collect();
        if chars.len() != 7 {
            return Err(ParseError::TLength {
                text: text.to_string(),
                found: chars.len(),
            });
        }
        let mut p = TRulePattern {
            vertices: [VertexPatternChar::Any; 4],
            faces: [FacePatternChar::Any; 3],
        };
        for (j, &ch) in chars.iter().enumerate() {
            if j % 2 == 0 {
                p.vertices[j / 2] = VertexPatternChar::from_char(ch).ok_or(illegal(j + 2, ch))?;
            } else {
                p.faces[j / 2] = FacePatternChar::from_char(ch).ok_or(illegal(j + 2, ch))?;
            }
        }
        return Ok(Pattern::TRule(p));
    }

    let (kind, body) = FaceKind::from_prefix(text).ok_or_else(|| ParseError::UnknownPrefix {
        text: text.to_string(),
    })?;
    let chars: Vec<char> = body.chars().collect();
    let max = 2 * kind.size();
    if chars.len() > max {
        return Err(ParseError::TooLong {
            text: text.to_string(),
            found: chars.len(),
            max,
        });
    }
    let mut p = FacePattern::wildcard(kind);
    for (j, &ch) in chars.iter().enumerate() {
        if j % 2 == 0 {
            p.vertices[j / 2] = VertexPatternChar::from_char(ch).ok_or(illegal(j + 2, ch))?;
        } else {
            p.faces[j / 2] = FacePatternChar::from_char(ch).ok_or(illegal(j + 2, ch))?;
        }
    }
    Ok(Pattern::Face(p))
}

fn substitutes(c: VertexPatternChar) -> &'static [VertexPatternChar] {
    use VertexPatternChar::*;
    match c {
        V => &[V, U, W],
        U => &[U, W],
        W => &[W],
        T => &[T],
        O => &[O],
        Four => &[Four],
        Five => &[Five],
        Six => &[Six],
        Three => &[Three],
        AtLeast4 => &[AtLeast4],
        AtLeast5 => &[AtLeast5],
        Any => &[Any],
    }
}

/// All variants of a reducible configuration obtained by replacing `v` with
/// `u` or `w` and `u` with `w`, independently per slot. The original comes
/// first; the remaining order is the odometer order over slots.
pub fn closure_expand(config: &FacePattern) -> Vec<FacePattern> {
    let mut out = vec![*config];
    for i in 0..config.size() {
        let subs = substitutes(config.vertices[i]);
        if subs.len() == 1 {
            continue;
        }
        let mut next = Vec::with_capacity(out.len() * subs.len());
        for p in &out {
            for &s in subs {
                let mut q = *p;
                q.vertices[i] = s;
                next.push(q);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trailing_stars_are_padded() {
        let p = FacePattern::parse("P:v*w").unwrap();
        assert_eq!(p.render(), "P:v*w*******");
        assert_eq!(p.vertices[0], VertexPatternChar::V);
        assert_eq!(p.vertices[1], VertexPatternChar::W);
        assert_eq!(p.render_short(), "P:v*w");
    }

    #[test]
    fn all_star_body_equals_empty_body() {
        let full = FacePattern::parse("H:************").unwrap();
        let empty = FacePattern::parse("H:").unwrap();
        assert_eq!(full, empty);
        assert_eq!(full, FacePattern::wildcard(FaceKind::Hexagon));
    }

    #[test]
    fn t_pattern() {
        let p = TRulePattern::parse("T:3H3x3Hx").unwrap();
        use FacePatternChar as F;
        use VertexPatternChar as V;
        assert_eq!(p.vertices, [V::Three, V::Three, V::Three, V::AtLeast4]);
        assert_eq!(p.faces, [F::H, F::X, F::H]);
        assert_eq!(p.render(), "T:3H3x3Hx");
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse_pattern("Q:3"), Err(ParseError::UnknownPrefix { .. })));
        assert!(matches!(
            parse_pattern("P:3Z"),
            Err(ParseError::IllegalChar { pos: 3, ch: 'Z', .. })
        ));
        // 'F' is a face character, illegal in a vertex position.
        assert!(matches!(
            parse_pattern("H:F"),
            Err(ParseError::IllegalChar { pos: 2, ch: 'F', .. })
        ));
        assert!(matches!(
            parse_pattern("P:***********"),
            Err(ParseError::TooLong { found: 11, max: 10, .. })
        ));
        assert!(matches!(parse_pattern("T:3H3x3H"), Err(ParseError::TLength { found: 6, .. })));
        assert!(matches!(parse_pattern("T:**xxx***"), Err(ParseError::TLength { found: 8, .. })));
    }

    #[test]
    fn closure_of_v_pattern() {
        let p = FacePattern::parse("P:v*3P3").unwrap();
        let got: Vec<String> = closure_expand(&p).iter().map(|q| q.render_short()).collect();
        assert_eq!(got, ["P:v*3P3", "P:u*3P3", "P:w*3P3"]);
    }

    #[test]
    fn closure_without_refinable_slots() {
        let p = FacePattern::parse("H:o3o").unwrap();
        assert_eq!(closure_expand(&p), vec![p]);
    }

    #[test]
    fn closure_two_v_slots_matches_cartesian_product() {
        use VertexPatternChar as V;
        let p = FacePattern::parse("H:v*3*v").unwrap();
        let got: std::collections::BTreeSet<_> = closure_expand(&p).into_iter().collect();
        let mut want = std::collections::BTreeSet::new();
        for a in [V::V, V::U, V::W] {
            for b in [V::V, V::U, V::W] {
                let mut q = p;
                q.vertices[0] = a;
                q.vertices[2] = b;
                want.insert(q);
            }
        }
        assert_eq!(got.len(), 9);
        assert_eq!(got, want);
    }

    #[test]
    fn canonical_pattern_is_symmetric() {
        let a = FacePattern::parse("H:o3o").unwrap();
        let b = FacePattern::parse("H:****o3o").unwrap();
        assert_eq!(a.canonical(), b.canonical());
    }
}
