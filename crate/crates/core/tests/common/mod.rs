//! Independent reference implementations used as test oracles. Nothing here
//! calls into the matching or enumeration code under test.

#![allow(dead_code)]

use discharge_core::classes::{char_matches, Concrete, PatternChar};
use discharge_core::local::consistency::check_vertex;
use discharge_core::{
    Charge, FaceClass, FacePatternChar, MatchOptions, RingDescriptor, RuleKind, RuleTable, VertexClass,
    VertexPatternChar,
};
use rand::seq::SliceRandom;
use rand::Rng;

/// A ring whose every vertex satisfies the local constraints with respect to
/// both of its faces.
pub fn random_consistent_ring<R: Rng>(rng: &mut R, k: usize) -> RingDescriptor {
    loop {
        let faces: Vec<FaceClass> = (0..k)
            .map(|_| {
                if k == 5 {
                    *[FaceClass::Quad, FaceClass::Pent, FaceClass::Hex].choose(rng).unwrap()
                } else if rng.gen_bool(0.5) {
                    FaceClass::Hex
                } else {
                    *FaceClass::ALL.choose(rng).unwrap()
                }
            })
            .collect();
        let mut vertices = Vec::with_capacity(k);
        for i in 0..k {
            let left = faces[(i + k - 1) % k];
            let ok: Vec<VertexClass> = VertexClass::ALL
                .into_iter()
                .filter(|&v| check_vertex(v, Some(left), Some(faces[i])).is_ok())
                .collect();
            match ok.choose(rng) {
                Some(&v) => vertices.push(v),
                None => break,
            }
        }
        if vertices.len() == k {
            return RingDescriptor::new(&vertices, &faces);
        }
    }
}

/// Any ring, consistent or not.
pub fn random_ring<R: Rng>(rng: &mut R, k: usize) -> RingDescriptor {
    let vertices: Vec<VertexClass> = (0..k).map(|_| *VertexClass::ALL.choose(rng).unwrap()).collect();
    let faces: Vec<FaceClass> = (0..k).map(|_| *FaceClass::ALL.choose(rng).unwrap()).collect();
    RingDescriptor::new(&vertices, &faces)
}

/// Body string `v0 f0 v1 f1 ...` of a ring.
pub fn body(vertices: &[VertexClass], faces: &[FaceClass]) -> String {
    let mut s = String::new();
    for i in 0..vertices.len() {
        s.push(vertices[i].to_char());
        s.push(faces[i].to_char());
    }
    s
}

/// All `2k` dihedral images written out by hand: rotations start at `r`,
/// reflections walk backwards from `r`.
pub fn images(ring: &RingDescriptor, reflection: bool) -> Vec<(Vec<VertexClass>, Vec<FaceClass>)> {
    let k = ring.size();
    let v = &ring.vertices[..k];
    let f = &ring.faces[..k];
    let mut out = Vec::new();
    for r in 0..k {
        out.push(((0..k).map(|i| v[(r + i) % k]).collect(), (0..k).map(|i| f[(r + i) % k]).collect()));
    }
    if reflection {
        for r in 0..k {
            // walking v_r, v_{r-1}, ...: the edge v_{r-i} v_{r-i-1} carries f_{r-i-1}
            out.push((
                (0..k).map(|i| v[(r + k - i) % k]).collect(),
                (0..k).map(|i| f[(r + 2 * k - i - 1) % k]).collect(),
            ));
        }
    }
    out
}

fn char_at(pattern_body: &[u8], pos: usize) -> u8 {
    pattern_body.get(pos).copied().unwrap_or(b'*')
}

/// Whether a `P:`/`H:` pattern text matches a concrete ring under some image.
pub fn naive_match(pattern: &str, ring: &RingDescriptor, options: MatchOptions) -> bool {
    let (prefix, body) = pattern.split_at(2);
    if prefix != ring.kind.prefix() {
        return false;
    }
    let body = body.as_bytes();
    images(ring, options.reflection).iter().any(|(vs, fs)| {
        (0..ring.size()).all(|i| {
            let vp = VertexPatternChar::from_char(char_at(body, 2 * i) as char).unwrap();
            let fp = FacePatternChar::from_char(char_at(body, 2 * i + 1) as char).unwrap();
            char_matches(PatternChar::Vertex(vp), Concrete::Vertex(vs[i]), options.semantics)
                && char_matches(PatternChar::Face(fp), Concrete::Face(fs[i]), options.semantics)
        })
    })
}

/// Whether a linear rule body (`v f v f ... v`) matches a linear window.
fn body_matches(body: &[u8], vs: &[VertexClass], fs: &[FaceClass], options: MatchOptions) -> bool {
    vs.iter().enumerate().all(|(i, &v)| {
        char_matches(
            PatternChar::Vertex(VertexPatternChar::from_char(body[2 * i] as char).unwrap()),
            Concrete::Vertex(v),
            options.semantics,
        )
    }) && fs.iter().enumerate().all(|(i, &f)| {
        char_matches(
            PatternChar::Face(FacePatternChar::from_char(body[2 * i + 1] as char).unwrap()),
            Concrete::Face(f),
            options.semantics,
        )
    })
}

/// Scans every rule against a linear window read both ways; returns the
/// distinct matching rules with their amounts.
fn scan(
    table: &RuleTable,
    kind: RuleKind,
    vs: Vec<VertexClass>,
    fs: Vec<FaceClass>,
    options: MatchOptions,
) -> Vec<(String, Charge)> {
    let mut rv = vs.clone();
    rv.reverse();
    let mut rf = fs.clone();
    rf.reverse();
    let mut hits: Vec<(String, Charge)> = Vec::new();
    for rule in table.rules().iter().filter(|r| r.kind == kind) {
        let text = rule.render();
        let body = &text.as_bytes()[2..];
        let fwd = body_matches(body, &vs, &fs, options);
        let back = options.reflection && body_matches(body, &rv, &rf, options);
        if (fwd || back) && !hits.iter().any(|(t, _)| *t == text) {
            hits.push((text, rule.amount));
        }
    }
    hits
}

/// One rule firing found by the naive scanner: slot, rule text, amount.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum NaiveHit {
    Vertex(usize, String, Charge),
    Edge(usize, String, Charge),
}

/// Slot-by-slot rule scan of a ring. Panics if two rules fire on one slot.
pub fn naive_rule_scan(table: &RuleTable, ring: &RingDescriptor, options: MatchOptions) -> Vec<NaiveHit> {
    let k = ring.size();
    let v = |i: isize| ring.vertices[i.rem_euclid(k as isize) as usize];
    let f = |i: isize| ring.faces[i.rem_euclid(k as isize) as usize];
    let kind = if k == 5 { RuleKind::P } else { RuleKind::H };
    let mut out = Vec::new();
    for i in 0..k as isize {
        let hits = scan(table, kind, vec![v(i - 1), v(i), v(i + 1)], vec![f(i - 1), f(i)], options);
        assert!(hits.len() <= 1, "two rules at vertex {i} of {ring}: {hits:?}");
        if let Some((t, a)) = hits.into_iter().next() {
            out.push(NaiveHit::Vertex(i as usize, t, a));
        }
        if k == 6 && f(i).is_triangle() {
            let hits = scan(
                table,
                RuleKind::T,
                vec![v(i - 1), v(i), v(i + 1), v(i + 2)],
                vec![f(i - 1), f(i), f(i + 1)],
                options,
            );
            assert!(hits.len() <= 1, "two rules at edge {i} of {ring}: {hits:?}");
            if let Some((t, a)) = hits.into_iter().next() {
                out.push(NaiveHit::Edge(i as usize, t, a));
            }
        }
    }
    out
}

/// Net outflow of a face by the naive scan.
pub fn naive_net_outflow(table: &RuleTable, ring: &RingDescriptor, options: MatchOptions) -> Charge {
    naive_rule_scan(table, ring, options)
        .iter()
        .map(|h| match h {
            NaiveHit::Vertex(_, _, a) | NaiveHit::Edge(_, _, a) => *a,
        })
        .sum()
}

/// Random pattern text of full length for a ring of size `k`; about half of
/// the time derived from `ring` by wildcarding, so matches are common.
pub fn random_pattern<R: Rng>(rng: &mut R, ring: &RingDescriptor) -> String {
    let k = ring.size();
    let mut s = String::from(ring.kind.prefix());
    if rng.gen_bool(0.5) {
        let imgs = images(ring, true);
        let (vs, fs) = imgs.choose(rng).unwrap();
        for i in 0..k {
            s.push(if rng.gen_bool(0.3) { '*' } else { vs[i].to_char() });
            s.push(if rng.gen_bool(0.3) { '*' } else { fs[i].to_char() });
        }
    } else {
        for _ in 0..k {
            s.push(VertexPatternChar::ALL.choose(rng).unwrap().to_char());
            s.push(FacePatternChar::ALL.choose(rng).unwrap().to_char());
        }
    }
    s
}
