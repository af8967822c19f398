//! Neighborhoods of a 3-face all of whose edges are shared with 6-faces.
//!
//! Corners are `x0 x1 x2`; `E_j` is the 6-face across edge `x_j x_{j+1}`.
//! The T-window of `E_j` is `(y, g, x_j, T, x_{j+1}, g', z)`: `y` is the next
//! vertex of `E_j` after `x_j`, `g` the face across `y x_j`, and likewise `z`
//! and `g'` on the `x_{j+1}` end. What a corner contributes to its two windows
//! depends on its degree:
//!
//! * degree 3: its third neighbor `r` is the outer vertex of both windows and
//!   the face across is the other 6-face. A 4-vertex `r` faces an off-face
//!   triangle on at most one side.
//! * degree 4: both windows share the face `g` opposite the 3-face. If `g` is
//!   a triangle its class and the class of a 3-vertex `y` are fixed by the
//!   degree of the other outer vertex. If `g` is a 5- or 6-face, the corner is
//!   `v`/`u`/`w` relative to `g` and relays whatever `g` pays it.
//! * degree 5: the two side faces share an edge, so at most one is a
//!   triangle, and then the other is a 6-face.
//! * degree ≥ 6: the side faces are independent.
//!
//! Data that the two windows of a corner share lives in a [`Corner`] value;
//! given the three corners, the choices per side are independent, so each
//! hexagon window can be analyzed on its own.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::charge::{Charge, ElementId, Transfer};
use crate::classes::{Degree, FaceClass, FaceSet, MatchOptions, VertexClass, VertexSet};
use crate::datasets::ConfigSet;
use crate::local::consistency::{check_vertex, window_consistent};
use crate::pattern::FaceKind;
use crate::ring::{CompiledPattern, SlotRing};
use crate::rules::{AmbiguousRule, PvWindow, RuleEngine, TWindow, Window};

/// Which of the two 6-faces at a corner: `Next` is `E_j`, `Prev` is `E_{j-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Next,
    Prev,
}

/// Data at corner `x_j` shared by both of its windows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Corner {
    /// Degree 3; `rest` is the degree of the neighbor off the 3-face and
    /// `facing` the side on which a 4-vertex `rest` is `v`/`u`/`w`.
    Three { rest: Degree, facing: Option<Side> },
    /// Degree 4 with a triangle opposite; degrees of its outer vertices on
    /// the `Next` and `Prev` sides.
    FourTriangle { next: Degree, prev: Degree },
    /// Degree 4 with a 4-, 5- or 6-face opposite.
    FourFace(FaceClass),
    /// Degree 5; the side whose face is a triangle, if any, and whether that
    /// triangle's tip has degree at least 4.
    Five { triangle: Option<(Side, bool)> },
    /// Degree at least 6.
    Six,
}

impl Corner {
    pub fn all() -> Vec<Corner> {
        let mut out = Vec::new();
        for rest in Degree::ALL {
            out.push(Corner::Three { rest, facing: None });
            if rest == Degree::Four {
                out.push(Corner::Three {
                    rest,
                    facing: Some(Side::Next),
                });
                out.push(Corner::Three {
                    rest,
                    facing: Some(Side::Prev),
                });
            }
        }
        for next in Degree::ALL {
            for prev in Degree::ALL {
                out.push(Corner::FourTriangle { next, prev });
            }
        }
        for g in [FaceClass::Quad, FaceClass::Pent, FaceClass::Hex] {
            out.push(Corner::FourFace(g));
        }
        out.push(Corner::Five { triangle: None });
        for side in [Side::Next, Side::Prev] {
            for big in [false, true] {
                out.push(Corner::Five {
                    triangle: Some((side, big)),
                });
            }
        }
        out.push(Corner::Six);
        out
    }

    pub fn degree(self) -> Degree {
        match self {
            Corner::Three { .. } => Degree::Three,
            Corner::FourTriangle { .. } | Corner::FourFace(_) => Degree::Four,
            Corner::Five { .. } => Degree::Five,
            Corner::Six => Degree::Six,
        }
    }

    /// Possible `(outer vertex, face across)` pairs on one side, relative to
    /// that side's 6-face, sorted and distinct.
    pub fn side_options(self, side: Side) -> Vec<(VertexClass, FaceClass)> {
        use VertexClass as V;
        let mut out = match self {
            Corner::Three { rest, facing } => {
                let vs: Vec<V> = match rest {
                    Degree::Three => vec![V::O, V::T],
                    Degree::Four if facing == Some(side) => vec![V::U, V::V, V::W],
                    Degree::Four => vec![V::P4],
                    Degree::Five => vec![V::P5],
                    Degree::Six => vec![V::P6],
                };
                vs.into_iter().map(|v| (v, FaceClass::Hex)).collect()
            }
            Corner::FourTriangle { next, prev } => {
                let (outer, other) = match side {
                    Side::Next => (next, prev),
                    Side::Prev => (prev, next),
                };
                let big = !other.is_three();
                let v = match outer {
                    Degree::Three if big => V::T,
                    Degree::Three => V::O,
                    Degree::Four => V::P4,
                    Degree::Five => V::P5,
                    Degree::Six => V::P6,
                };
                let faces: &[FaceClass] = if big {
                    &[FaceClass::TriX]
                } else {
                    &[FaceClass::TriO, FaceClass::TriT]
                };
                faces.iter().map(|&f| (v, f)).collect()
            }
            Corner::FourFace(g) => plain_side(g),
            Corner::Five { triangle: None } => plain_sides(),
            Corner::Five {
                triangle: Some((s, big)),
            } if s == side => triangle_side(big),
            Corner::Five { .. } => plain_side(FaceClass::Hex),
            Corner::Six => {
                let mut v = plain_sides();
                v.extend(triangle_side(false));
                v.extend(triangle_side(true));
                v
            }
        };
        out.sort();
        out.dedup();
        out
    }
}

fn plain_side(g: FaceClass) -> Vec<(VertexClass, FaceClass)> {
    use VertexClass as V;
    let mut vs = vec![V::P4, V::P5, V::P6, V::O, V::T];
    if g == FaceClass::Hex {
        vs.extend([V::U, V::V, V::W]);
    }
    vs.into_iter().map(|v| (v, g)).collect()
}

fn plain_sides() -> Vec<(VertexClass, FaceClass)> {
    [FaceClass::Quad, FaceClass::Pent, FaceClass::Hex]
        .into_iter()
        .flat_map(plain_side)
        .collect()
}

/// Side face is a triangle `(y, x_j, m)`; `big` iff `deg(m) >= 4`. A
/// 3-vertex `y` then has `m` as its neighbor off the 6-face.
fn triangle_side(big: bool) -> Vec<(VertexClass, FaceClass)> {
    use VertexClass as V;
    let three = if big { V::T } else { V::O };
    let faces: &[FaceClass] = if big {
        &[FaceClass::TriX]
    } else {
        &[FaceClass::TriO, FaceClass::TriT]
    };
    let mut out = Vec::new();
    for &f in faces {
        for v in [three, V::P4, V::P5, V::P6] {
            out.push((v, f));
        }
    }
    out
}

/// Class of a corner relative to a 6-face on one of its edges, given the
/// degree of the corner off that 6-face.
fn corner_class(corner: Corner, off: Corner) -> VertexClass {
    match corner.degree() {
        Degree::Three if off.degree().is_three() => VertexClass::O,
        Degree::Three => VertexClass::T,
        Degree::Four => VertexClass::P4,
        Degree::Five => VertexClass::P5,
        Degree::Six => VertexClass::P6,
    }
}

/// Class of the 3-face seen across an edge, given its tip.
fn triangle_class(tip: Corner) -> FaceClass {
    match tip {
        Corner::Three { rest, .. } if rest.is_three() => FaceClass::TriO,
        Corner::Three { .. } => FaceClass::TriT,
        _ => FaceClass::TriX,
    }
}

/// The three corner values of a context.
pub type Core = [Corner; 3];

/// Fixed part of the window of `E_j`: classes of `x_j`, the 3-face and
/// `x_{j+1}` relative to `E_j`.
pub fn hexagon_middle(core: &Core, j: usize) -> (VertexClass, FaceClass, VertexClass) {
    let (a, b, tip) = (core[j], core[(j + 1) % 3], core[(j + 2) % 3]);
    (corner_class(a, tip), triangle_class(tip), corner_class(b, tip))
}

/// Class of a degree-4 corner relative to its opposite face.
pub fn relay_class(core: &Core, j: usize) -> VertexClass {
    let threes = [core[(j + 1) % 3], core[(j + 2) % 3]]
        .iter()
        .filter(|c| c.degree().is_three())
        .count();
    match threes {
        0 => VertexClass::V,
        1 => VertexClass::U,
        _ => VertexClass::W,
    }
}

/// One complete neighborhood: the corners and the side choice at each
/// corner (`sides[j][0]` on `E_j`, `sides[j][1]` on `E_{j-1}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriangleContext {
    pub core: Core,
    pub sides: [[(VertexClass, FaceClass); 2]; 3],
}

impl TriangleContext {
    pub fn window(&self, j: usize) -> TWindow {
        let (a, t, b) = hexagon_middle(&self.core, j);
        let (y, g) = self.sides[j][0];
        let (z, h) = self.sides[(j + 1) % 3][1];
        Window {
            vertices: [y, a, b, z],
            faces: [g, t, h],
        }
    }

    pub fn windows(&self) -> [TWindow; 3] {
        [self.window(0), self.window(1), self.window(2)]
    }

    /// The three T-windows, then `x<j>=<class>@<face>` for every relaying
    /// corner.
    pub fn encode(&self) -> String {
        let mut s = self.windows().iter().map(|w| w.encode('T')).collect::<Vec<_>>().join(" ");
        for j in 0..3 {
            if let Corner::FourFace(g) = self.core[j] {
                if g != FaceClass::Quad {
                    s.push_str(&format!(" x{j}={}@{}", relay_class(&self.core, j).to_char(), g.to_char()));
                }
            }
        }
        s
    }
}

/// A relay into the 3-face through a degree-4 corner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relay {
    pub corner: usize,
    pub amount: Charge,
    pub rule: Option<String>,
}

/// Rule engine plus a per-window exclusion table for the 6-faces around a
/// 3-face.
pub struct TriangleModel<'a> {
    engine: &'a RuleEngine,
    excluded: Vec<bool>,
}

impl<'a> TriangleModel<'a> {
    pub fn new(engine: &'a RuleEngine, exclusions: &ConfigSet) -> TriangleModel<'a> {
        let options = engine.options();
        let compiled = exclusions.compiled(options.semantics);
        let excluded = window_exclusions(&compiled, options);
        TriangleModel { engine, excluded }
    }

    pub fn engine(&self) -> &RuleEngine {
        self.engine
    }

    /// Whether an exclusion matches the 6-face whose boundary contains the
    /// window, however the rest of that face looks.
    pub fn is_excluded(&self, w: &TWindow) -> bool {
        self.excluded[w.index()]
    }

    /// Window choices on `E_j` that are consistent and not excluded.
    pub fn hexagon_options(&self, core: &Core, j: usize) -> Vec<TWindow> {
        let (a, t, b) = hexagon_middle(core, j);
        let mut out = Vec::new();
        for (y, g) in core[j].side_options(Side::Next) {
            for (z, h) in core[(j + 1) % 3].side_options(Side::Prev) {
                let w = Window {
                    vertices: [y, a, b, z],
                    faces: [g, t, h],
                };
                if window_consistent(&w.vertices, &w.faces, false) && !self.is_excluded(&w) {
                    out.push(w);
                }
            }
        }
        out
    }

    /// Amount relayed into the 3-face by corner `j`: the least positive
    /// payment its opposite face makes to it over every way of completing
    /// that face's window.
    pub fn relay(&self, core: &Core, j: usize) -> Result<Option<Relay>, AmbiguousRule> {
        let g = match core[j] {
            Corner::FourFace(g) if g != FaceClass::Quad => g,
            _ => return Ok(None),
        };
        let kind = if g == FaceClass::Pent {
            FaceKind::Pentagon
        } else {
            FaceKind::Hexagon
        };
        let class = relay_class(core, j);
        let mut least: Option<(Charge, Option<String>)> = None;
        for a in VertexClass::ALL {
            for b in VertexClass::ALL {
                let w = PvWindow {
                    vertices: [a, class, b],
                    faces: [FaceClass::Hex, FaceClass::Hex],
                };
                if !window_consistent(&w.vertices, &w.faces, false) {
                    continue;
                }
                let (amount, rule) = match self.engine.pv_window(kind, &w)? {
                    Some(h) if h.amount.is_positive() => (h.amount, Some(self.engine.rule(h.rule).render())),
                    _ => (Charge::ZERO, None),
                };
                if least.as_ref().is_none_or(|(c, _)| amount < *c) {
                    least = Some((amount, rule));
                }
            }
        }
        let (amount, rule) = least.expect("some completion is consistent");
        Ok(Some(Relay { corner: j, amount, rule }))
    }

    pub fn relays(&self, core: &Core) -> Result<Vec<Relay>, AmbiguousRule> {
        let mut out = Vec::new();
        for j in 0..3 {
            if let Some(r) = self.relay(core, j)? {
                out.push(r);
            }
        }
        Ok(out)
    }

    /// All transfers into the 3-face: one per T-rule firing, one per relay.
    pub fn transfers(&self, ctx: &TriangleContext) -> Result<Vec<Transfer>, AmbiguousRule> {
        let mut out = Vec::new();
        for (j, w) in ctx.windows().iter().enumerate() {
            if let Some(h) = self.engine.t_window(w)? {
                out.push(Transfer {
                    payer: ElementId::Hexagon(j),
                    payee: ElementId::Face,
                    amount: h.amount,
                    rule: self.engine.rule(h.rule).render(),
                    relay: None,
                });
            }
        }
        for r in self.relays(&ctx.core)? {
            if let Some(rule) = r.rule {
                out.push(Transfer {
                    payer: ElementId::CornerFace(r.corner),
                    payee: ElementId::Face,
                    amount: r.amount,
                    rule,
                    relay: Some(ElementId::Corner(r.corner)),
                });
            }
        }
        Ok(out)
    }

    /// Total received by the 3-face.
    pub fn received(&self, ctx: &TriangleContext) -> Result<Charge, AmbiguousRule> {
        Ok(self.transfers(ctx)?.iter().map(|t| t.amount).sum())
    }

    /// Every context built on `core`, lazily, in order.
    pub fn contexts_for_core(&self, core: Core) -> impl Iterator<Item = TriangleContext> {
        let lists: [Arc<Vec<TWindow>>; 3] = [0, 1, 2].map(|j| Arc::new(self.hexagon_options(&core, j)));
        let [l0, l1, l2] = lists;
        (0..l0.len()).flat_map(move |a| {
            let (l1, l2) = (l1.clone(), l2.clone());
            let w0 = l0[a];
            (0..l1.len()).flat_map(move |b| {
                let l2 = l2.clone();
                let w1 = l1[b];
                (0..l2.len()).map(move |c| context_from_windows(core, [w0, w1, l2[c]]))
            })
        })
    }

    /// Every context, lazily, cores in [`all_cores`] order.
    pub fn contexts(&self) -> impl Iterator<Item = TriangleContext> + '_ {
        all_cores().into_iter().flat_map(move |core| self.contexts_for_core(core))
    }

    /// Per-hexagon distribution of T-rule amounts for one core.
    pub fn analyze_core(&self, core: &Core) -> Result<CoreAnalysis, AmbiguousRule> {
        let mut hexagons = Vec::with_capacity(3);
        for j in 0..3 {
            let mut hist: BTreeMap<Charge, u64> = BTreeMap::new();
            let mut least: Option<(Charge, TWindow)> = None;
            for w in self.hexagon_options(core, j) {
                let amount = self.engine.t_window(&w)?.map_or(Charge::ZERO, |h| h.amount);
                *hist.entry(amount).or_default() += 1;
                if least.is_none_or(|(c, _)| amount < c) {
                    least = Some((amount, w));
                }
            }
            hexagons.push(HexagonAnalysis { histogram: hist, least });
        }
        let relays = self.relays(core)?;
        Ok(CoreAnalysis {
            core: *core,
            hexagons: hexagons.try_into().expect("three hexagons"),
            relays,
        })
    }
}

fn context_from_windows(core: Core, w: [TWindow; 3]) -> TriangleContext {
    let mut sides = [[(VertexClass::P4, FaceClass::Hex); 2]; 3];
    for j in 0..3 {
        sides[j][0] = (w[j].vertices[0], w[j].faces[0]);
        sides[(j + 1) % 3][1] = (w[j].vertices[3], w[j].faces[2]);
    }
    TriangleContext { core, sides }
}

#[derive(Clone, Debug)]
pub struct HexagonAnalysis {
    /// Number of admissible windows per T-rule amount (0 when no rule fires).
    pub histogram: BTreeMap<Charge, u64>,
    pub least: Option<(Charge, TWindow)>,
}

impl HexagonAnalysis {
    pub fn count(&self) -> u64 {
        self.histogram.values().sum()
    }
}

#[derive(Clone, Debug)]
pub struct CoreAnalysis {
    pub core: Core,
    pub hexagons: [HexagonAnalysis; 3],
    pub relays: Vec<Relay>,
}

impl CoreAnalysis {
    /// Number of contexts on this core.
    pub fn count(&self) -> u64 {
        self.hexagons.iter().map(|h| h.count()).product()
    }

    pub fn relay_total(&self) -> Charge {
        self.relays.iter().map(|r| r.amount).sum()
    }

    /// Least total received over the contexts of this core, with the
    /// context attaining it.
    pub fn least(&self) -> Option<(Charge, TriangleContext)> {
        let mut ws = [TWindow::from_index(0); 3];
        let mut total = self.relay_total();
        for (j, h) in self.hexagons.iter().enumerate() {
            let (c, w) = h.least?;
            total += c;
            ws[j] = w;
        }
        Some((total, context_from_windows(self.core, ws)))
    }

    /// Number of contexts receiving less than `bound`.
    pub fn count_below(&self, bound: Charge) -> u64 {
        let mut dist: BTreeMap<Charge, u64> = BTreeMap::new();
        dist.insert(self.relay_total(), 1);
        for h in &self.hexagons {
            let mut next = BTreeMap::new();
            for (&a, &n) in &dist {
                for (&b, &m) in &h.histogram {
                    *next.entry(a + b).or_default() += n * m;
                }
            }
            dist = next;
        }
        dist.range(..bound).map(|(_, n)| n).sum()
    }
}

/// All corner triples, in lexicographic order.
pub fn all_cores() -> Vec<Core> {
    let corners = Corner::all();
    let mut out = Vec::with_capacity(corners.len().pow(3));
    for &a in &corners {
        for &b in &corners {
            for &c in &corners {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// For every T-window, whether some exclusion pattern matches a 6-face
/// containing it (the other slots of that face unknown).
fn window_exclusions(patterns: &[CompiledPattern], options: MatchOptions) -> Vec<bool> {
    let hex: Vec<&CompiledPattern> = patterns.iter().filter(|p| p.kind == FaceKind::Hexagon).collect();
    if hex.is_empty() {
        return vec![false; TWindow::COUNT];
    }
    (0..TWindow::COUNT)
        .into_par_iter()
        .map(|idx| {
            let w = TWindow::from_index(idx);
            if !w.faces[1].is_triangle() {
                return false;
            }
            let mut ring = SlotRing::unknown(FaceKind::Hexagon);
            for i in 0..4 {
                ring.vertices[i] = VertexSet::single(w.vertices[i]);
            }
            for i in 0..3 {
                ring.faces[i] = FaceSet::single(w.faces[i]);
            }
            hex.iter().any(|p| p.matches(&ring, options.reflection))
        })
        .collect()
}

/// Whether a corner's side choice is locally consistent with its vertex
/// constraints (used by tests of the model).
pub fn side_is_consistent(v: VertexClass, f: FaceClass) -> bool {
    check_vertex(v, Some(f), None).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::RuleTable;

    fn engine() -> RuleEngine {
        RuleEngine::new(RuleTable::embedded(), MatchOptions::default())
    }

    fn three(rest: Degree) -> Corner {
        Corner::Three { rest, facing: None }
    }

    #[test]
    fn corner_count() {
        assert_eq!(Corner::all().len(), 31);
    }

    #[test]
    fn side_options_are_consistent() {
        for c in Corner::all() {
            for side in [Side::Next, Side::Prev] {
                let opts = c.side_options(side);
                assert!(!opts.is_empty());
                for (v, f) in opts {
                    assert!(side_is_consistent(v, f), "{c:?} {side:?} {v:?} {f:?}");
                }
            }
        }
    }

    #[test]
    fn generated_windows_are_consistent() {
        let e = engine();
        let m = TriangleModel::new(&e, &ConfigSet::empty());
        for core in all_cores().into_iter().step_by(97) {
            for j in 0..3 {
                let (a, t, b) = hexagon_middle(&core, j);
                for (y, g) in core[j].side_options(Side::Next) {
                    for (z, h) in core[(j + 1) % 3].side_options(Side::Prev) {
                        assert!(window_consistent(&[y, a, b, z], &[g, t, h], false), "{core:?}");
                    }
                }
                assert!(!m.hexagon_options(&core, j).is_empty());
            }
        }
    }

    #[test]
    fn all_three_triangle_starves_without_exclusions() {
        let e = engine();
        let core = [three(Degree::Three); 3];
        let m = TriangleModel::new(&e, &ConfigSet::empty());
        let a = m.analyze_core(&core).unwrap();
        assert_eq!(a.least().unwrap().0, Charge::ZERO);
        let m = TriangleModel::new(&e, &ConfigSet::parse("H:o3o").unwrap());
        assert_eq!(m.analyze_core(&core).unwrap().count(), 0);
    }

    #[test]
    fn all_four_triangle_gets_exactly_one_unit() {
        let e = engine();
        let m = TriangleModel::new(&e, &ConfigSet::empty());
        let core = [Corner::FourFace(FaceClass::Quad); 3];
        let a = m.analyze_core(&core).unwrap();
        assert_eq!(a.least().unwrap().0, Charge(60));
        assert_eq!(a.count_below(Charge(60)), 0);
    }

    #[test]
    fn relays_from_opposite_faces() {
        let e = engine();
        let m = TriangleModel::new(&e, &ConfigSet::empty());
        let core = [Corner::FourFace(FaceClass::Hex), three(Degree::Five), three(Degree::Five)];
        let r = m.relay(&core, 0).unwrap().unwrap();
        assert_eq!((r.amount, r.rule.as_deref()), (Charge(20), Some("H:**w**")));
        let core = [Corner::FourFace(FaceClass::Pent), three(Degree::Five), Corner::Six];
        assert_eq!(m.relay(&core, 0).unwrap().unwrap().amount, Charge(4));
        let core = [Corner::FourFace(FaceClass::Hex), Corner::Six, Corner::Six];
        assert_eq!(m.relay(&core, 0).unwrap().unwrap().amount, Charge::ZERO);
        assert!(m.relay(&core, 1).unwrap().is_none());
    }

    #[test]
    fn stream_matches_factorized_count() {
        let e = engine();
        let m = TriangleModel::new(&e, &ConfigSet::shipped());
        let core = [three(Degree::Four), Corner::FourFace(FaceClass::Hex), three(Degree::Six)];
        let a = m.analyze_core(&core).unwrap();
        let all: Vec<_> = m.contexts_for_core(core).collect();
        assert_eq!(all.len() as u64, a.count());
        let below = all.iter().filter(|c| m.received(c).unwrap() < Charge(60)).count() as u64;
        assert_eq!(below, a.count_below(Charge(60)));
        let least = all.iter().map(|c| m.received(c).unwrap()).min().unwrap();
        assert_eq!(least, a.least().unwrap().0);
    }
}
