//! Neighborhoods of a single vertex.
//!
//! For a 3-vertex `c` with neighbors `n0 n1 n2`, face `F_i` contains
//! `n_{i-1}` and `n_i`. Seen from `F_i`, the P/H-rule window at `c` is
//! `(n_{i-1}, F_{i-1}, c, F_{i+1}, n_i)`, every class taken relative to
//! `F_i`. For vertices of degree at least 5 only the cyclic sequence of face
//! sizes matters to the rules that charge them, which is handled by an exact
//! dynamic program over those sequences.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::charge::{Charge, ElementId, Transfer};
use crate::classes::{Degree, FaceClass, VertexClass};
use crate::local::consistency::{check_vertex, window_consistent};
use crate::pattern::FaceKind;
use crate::rules::{AmbiguousRule, PvWindow, RuleEngine};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StarError {
    #[error("4-vertices only pass charge on; there is nothing to enumerate")]
    DegreeFour,
    #[error("degree {0} is not supported (expected 3, or 5 and above)")]
    Degree(u32),
}

/// Size of a face incident with the center.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Size {
    Three,
    Four,
    Five,
    Six,
}

impl Size {
    pub const ALL: [Size; 4] = [Size::Three, Size::Four, Size::Five, Size::Six];

    pub fn value(self) -> u32 {
        match self {
            Size::Three => 3,
            Size::Four => 4,
            Size::Five => 5,
            Size::Six => 6,
        }
    }

    fn letter(self) -> char {
        match self {
            Size::Three => 'T',
            Size::Four => 'Q',
            Size::Five => 'P',
            Size::Six => 'H',
        }
    }

    fn kind(self) -> Option<FaceKind> {
        match self {
            Size::Five => Some(FaceKind::Pentagon),
            Size::Six => Some(FaceKind::Hexagon),
            _ => None,
        }
    }

    /// Face classes a face of this size may have when seen across an edge.
    fn classes(self) -> &'static [FaceClass] {
        match self {
            Size::Three => &FaceClass::TRIANGLES,
            Size::Four => &[FaceClass::Quad],
            Size::Five => &[FaceClass::Pent],
            Size::Six => &[FaceClass::Hex],
        }
    }
}

/// Two faces at a vertex that share an edge: a triangle may only sit next to
/// a 6-face.
pub fn may_share_edge(a: Size, b: Size) -> bool {
    (a != Size::Three || b == Size::Six) && (b != Size::Three || a == Size::Six)
}

/// A 3-vertex star: incident face sizes and, for each incident 5- or
/// 6-face, the rule window at the center.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexStar {
    pub sizes: [Size; 3],
    pub windows: [Option<PvWindow>; 3],
}

impl VertexStar {
    /// `S:` + face sizes, then each window (or `-` for faces that send
    /// nothing).
    pub fn encode(&self) -> String {
        let mut s = String::from("S:");
        s.extend(self.sizes.iter().map(|z| z.letter()));
        for i in 0..3 {
            s.push(' ');
            match (self.windows[i], self.sizes[i].kind()) {
                (Some(w), Some(kind)) => s.push_str(&w.encode(kind.prefix().as_bytes()[0] as char)),
                _ => s.push('-'),
            }
        }
        s
    }

    /// Charge the center receives from each incident face (negative: pays).
    pub fn transfers(&self, engine: &RuleEngine) -> Result<Vec<Transfer>, AmbiguousRule> {
        let mut out = Vec::new();
        for i in 0..3 {
            let (Some(w), Some(kind)) = (self.windows[i], self.sizes[i].kind()) else {
                continue;
            };
            if let Some(h) = engine.pv_window(kind, &w)? {
                let rule = engine.rule(h.rule).render();
                out.push(if h.amount.is_negative() {
                    Transfer {
                        payer: ElementId::Center,
                        payee: ElementId::Incident(i),
                        amount: -h.amount,
                        rule,
                        relay: None,
                    }
                } else {
                    Transfer {
                        payer: ElementId::Incident(i),
                        payee: ElementId::Center,
                        amount: h.amount,
                        rule,
                        relay: None,
                    }
                });
            }
        }
        Ok(out)
    }

    pub fn received(&self, engine: &RuleEngine) -> Result<Charge, AmbiguousRule> {
        let mut net = Charge::ZERO;
        for t in self.transfers(engine)? {
            if t.payee == ElementId::Center {
                net += t.amount;
            } else {
                net -= t.amount;
            }
        }
        Ok(net)
    }
}

/// Restrictions applied to 3-vertex stars.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StarHypotheses {
    /// Least number of vertices sharing a face with the center.
    pub min_facial_degree: u32,
    /// Forbid a 3-face whose three vertices all have degree 3.
    pub no_all_three_triangle: bool,
}

impl Default for StarHypotheses {
    fn default() -> Self {
        StarHypotheses {
            min_facial_degree: 9,
            no_all_three_triangle: true,
        }
    }
}

impl StarHypotheses {
    pub fn none() -> StarHypotheses {
        StarHypotheses {
            min_facial_degree: 0,
            no_all_three_triangle: false,
        }
    }
}

/// Classes of neighbor `n_i` relative to `F_i` and `F_{i+1}`.
fn neighbor_options(deg: Degree, left: Size, right: Size) -> Vec<(VertexClass, VertexClass)> {
    use VertexClass as V;
    match deg {
        Degree::Three => {
            let mut out = Vec::new();
            for a in [V::O, V::T] {
                for b in [V::O, V::T] {
                    out.push((a, b));
                }
            }
            out
        }
        Degree::Four => {
            let mut out = vec![(V::P4, V::P4)];
            // n_i faces an off-face triangle relative to F_i only if the
            // triangle sits beyond F_{i+1}, which must then be a 6-face.
            for t in [V::U, V::V, V::W] {
                if right == Size::Six {
                    out.push((t, V::P4));
                }
                if left == Size::Six {
                    out.push((V::P4, t));
                }
            }
            out
        }
        Degree::Five => vec![(V::P5, V::P5)],
        Degree::Six => vec![(V::P6, V::P6)],
    }
}

/// The classes of the faces around the center seen from `F_i` across the
/// edges `c n_{i-1}` and `c n_i`.
fn across_options(sizes: &[Size; 3], degs: &[Degree; 3], i: usize) -> Vec<(FaceClass, FaceClass)> {
    let prev = (i + 2) % 3;
    let next = (i + 1) % 3;
    // F_{i-1} = (c, n_{i-2}, n_{i-1}) seen across c n_{i-1}: tip n_{i-2} = n_{i+1}
    let left = tip_classes(sizes[prev], degs[next]);
    // F_{i+1} = (c, n_i, n_{i+1}) seen across c n_i: tip n_{i+1}
    let right = tip_classes(sizes[next], degs[next]);
    let mut out = Vec::new();
    for &l in &left {
        for &r in &right {
            out.push((l, r));
        }
    }
    out
}

fn tip_classes(size: Size, tip: Degree) -> Vec<FaceClass> {
    match size {
        Size::Three if tip.is_three() => vec![FaceClass::TriO, FaceClass::TriT],
        Size::Three => vec![FaceClass::TriX],
        s => s.classes().to_vec(),
    }
}

/// All 3-vertex stars satisfying `hyp`, sorted and distinct.
pub fn enumerate_three_stars(hyp: StarHypotheses) -> Vec<VertexStar> {
    let mut out = BTreeSet::new();
    for s0 in Size::ALL {
        for s1 in Size::ALL {
            for s2 in Size::ALL {
                let sizes = [s0, s1, s2];
                if !(0..3).all(|i| may_share_edge(sizes[i], sizes[(i + 1) % 3])) {
                    continue;
                }
                let facial: u32 = sizes.iter().map(|s| s.value()).sum::<u32>() - 6;
                if facial < hyp.min_facial_degree {
                    continue;
                }
                for d0 in Degree::ALL {
                    for d1 in Degree::ALL {
                        for d2 in Degree::ALL {
                            stars_for(&sizes, &[d0, d1, d2], hyp, &mut out);
                        }
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

fn stars_for(sizes: &[Size; 3], degs: &[Degree; 3], hyp: StarHypotheses, out: &mut BTreeSet<VertexStar>) {
    // n_i lies on F_i and F_{i+1}
    for k in 0..3 {
        if sizes[k] == Size::Three && hyp.no_all_three_triangle {
            let (a, b) = (degs[(k + 2) % 3], degs[k]);
            if a.is_three() && b.is_three() {
                return;
            }
        }
    }
    let opts: Vec<Vec<(VertexClass, VertexClass)>> = (0..3)
        .map(|i| {
            let mut o = neighbor_options(degs[i], sizes[i], sizes[(i + 1) % 3]);
            // next to a triangle at the center, a 3-vertex's class toward the
            // other face is forced by the triangle's third vertex
            if sizes[(i + 1) % 3] == Size::Three {
                let big = !degs[(i + 1) % 3].is_three();
                o.retain(|&(a, _)| !a.is_three() || (a == VertexClass::T) == big);
            }
            if sizes[i] == Size::Three {
                let big = !degs[(i + 2) % 3].is_three();
                o.retain(|&(_, b)| !b.is_three() || (b == VertexClass::T) == big);
            }
            o
        })
        .collect();
    let across: Vec<Vec<(FaceClass, FaceClass)>> = (0..3).map(|i| across_options(sizes, degs, i)).collect();
    for a in &opts[0] {
        for b in &opts[1] {
            for c in &opts[2] {
                let nb = [*a, *b, *c];
                let mut partial: Vec<Vec<Option<PvWindow>>> = vec![Vec::new(); 3];
                for i in 0..3 {
                    if sizes[i].kind().is_none() {
                        partial[i].push(None);
                        continue;
                    }
                    let center = if degs[(i + 1) % 3].is_three() {
                        VertexClass::O
                    } else {
                        VertexClass::T
                    };
                    for &(l, r) in &across[i] {
                        let w = PvWindow {
                            vertices: [nb[(i + 2) % 3].1, center, nb[i].0],
                            faces: [l, r],
                        };
                        if window_consistent(&w.vertices, &w.faces, sizes[i] == Size::Five) {
                            partial[i].push(Some(w));
                        }
                    }
                }
                for &w0 in &partial[0] {
                    for &w1 in &partial[1] {
                        for &w2 in &partial[2] {
                            out.insert(VertexStar {
                                sizes: *sizes,
                                windows: [w0, w1, w2],
                            });
                        }
                    }
                }
            }
        }
    }
}

/// Counts of incident 3-, 4- and ≥5-faces at a vertex of degree `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DegreeProfile {
    pub d: u32,
    pub t: u32,
    pub q: u32,
    pub p: u32,
}

impl DegreeProfile {
    /// The per-face bound from the vertex argument: `28t + 12q + 12p` for
    /// degree ≥ 6 and `12(t + q + p)` for degree 5.
    pub fn bound(&self) -> Charge {
        let t = if self.d >= 6 { 28 } else { 12 };
        Charge((t * self.t + 12 * self.q + 12 * self.p) as i64)
    }

    pub fn budget(&self) -> Charge {
        Charge::units(self.d as i64 - 4)
    }
}

/// Every `(t, q, p)` with `t + q + p = d` and `t <= p`.
pub fn enumerate_profiles(d: u32) -> Result<Vec<DegreeProfile>, StarError> {
    match d {
        4 => return Err(StarError::DegreeFour),
        0..=4 => return Err(StarError::Degree(d)),
        _ => {}
    }
    let mut out = Vec::new();
    for t in 0..=d {
        for p in t..=d - t {
            out.push(DegreeProfile { d, t, q: d - t - p, p });
        }
    }
    out.sort();
    Ok(out)
}

/// Largest charge a vertex of class `center` pays to a face of size `mid`
/// flanked (at the vertex) by faces of sizes `left` and `right`, over every
/// completion of the rule window.
pub fn worst_payment(engine: &RuleEngine, center: VertexClass, left: Size, mid: Size, right: Size) -> Result<Charge, AmbiguousRule> {
    let Some(kind) = mid.kind() else {
        return Ok(Charge::ZERO);
    };
    let mut worst: Option<Charge> = None;
    for &l in left.classes() {
        for &r in right.classes() {
            for a in VertexClass::ALL {
                if check_vertex(a, None, Some(l)).is_err() {
                    continue;
                }
                for b in VertexClass::ALL {
                    let w = PvWindow {
                        vertices: [a, center, b],
                        faces: [l, r],
                    };
                    if !window_consistent(&w.vertices, &w.faces, kind == FaceKind::Pentagon) {
                        continue;
                    }
                    let paid = engine.pv_window(kind, &w)?.map_or(Charge::ZERO, |h| -h.amount);
                    worst = Some(worst.map_or(paid, |x| x.max(paid)));
                }
            }
        }
    }
    Ok(worst.unwrap_or(Charge::ZERO))
}

/// Largest total payment of a degree-`d` vertex for every realizable profile,
/// by dynamic programming over cyclic face-size sequences.
pub fn worst_outflow_by_profile(engine: &RuleEngine, d: u32) -> Result<BTreeMap<DegreeProfile, Charge>, StarError> {
    if d == 4 {
        return Err(StarError::DegreeFour);
    }
    if d < 5 {
        return Err(StarError::Degree(d));
    }
    let center = if d >= 6 { VertexClass::P6 } else { VertexClass::P5 };
    let mut pay = [[[0i64; 4]; 4]; 4];
    for (a, &l) in Size::ALL.iter().enumerate() {
        for (b, &m) in Size::ALL.iter().enumerate() {
            for (c, &r) in Size::ALL.iter().enumerate() {
                pay[a][b][c] = worst_payment(engine, center, l, m, r)
                    .expect("audited rule tables are unambiguous")
                    .0;
            }
        }
    }
    let ok = |a: usize, b: usize| may_share_edge(Size::ALL[a], Size::ALL[b]);
    let n = d as usize;
    let mut best: BTreeMap<DegreeProfile, Charge> = BTreeMap::new();
    for s0 in 0..4 {
        for s1 in 0..4 {
            if !ok(s0, s1) {
                continue;
            }
            // state: (prev, cur, t, q) -> best partial sum of payments to
            // faces 1..i-1 (face 0 and the last face are closed at the end)
            let mut states: BTreeMap<(usize, usize, u32, u32), i64> = BTreeMap::new();
            let count = |s: usize| -> (u32, u32) {
                match s {
                    0 => (1, 0),
                    1 => (0, 1),
                    _ => (0, 0),
                }
            };
            let (t0, q0) = count(s0);
            let (t1, q1) = count(s1);
            states.insert((s0, s1, t0 + t1, q0 + q1), 0);
            for _ in 2..n {
                let mut next = BTreeMap::new();
                for (&(prev, cur, t, q), &v) in &states {
                    for s in 0..4 {
                        if !ok(cur, s) {
                            continue;
                        }
                        let (dt, dq) = count(s);
                        let key = (cur, s, t + dt, q + dq);
                        let val = v + pay[prev][cur][s];
                        let e = next.entry(key).or_insert(i64::MIN);
                        *e = (*e).max(val);
                    }
                }
                states = next;
            }
            for (&(prev, last, t, q), &v) in &states {
                if !ok(last, s0) {
                    continue;
                }
                let total = v + pay[prev][last][s0] + pay[last][s0][s1];
                let prof = DegreeProfile { d, t, q, p: d - t - q };
                let e = best.entry(prof).or_insert(Charge(i64::MIN));
                *e = (*e).max(Charge(total));
            }
        }
    }
    Ok(best)
}
