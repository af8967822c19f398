//! Exhaustive enumeration of consistent face rings up to symmetry.
//!
//! Slots are assigned depth-first in encoding order `v0 f0 v1 f1 ...`, each
//! slot running through its classes in ASCII order, so rings come out in
//! lexicographic order of their encodings. A ring is kept iff it is the least
//! of its images, which makes the kept ring its own canonical form.

use rayon::prelude::*;

use crate::classes::{FaceClass, FaceSet, MatchOptions, VertexClass, VertexSet};
use crate::datasets::ConfigSet;
use crate::local::consistency::check_vertex;
use crate::pattern::FaceKind;
use crate::ring::{CompiledPattern, RingDescriptor};
use crate::symmetry;

/// Slot index in encoding order: vertex `i` is `2i`, face `i` is `2i + 1`.
type Slot = usize;

/// One exclusion pattern pulled back through one symmetry image: the ring
/// matches iff every listed slot holds a class in the mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Requirement {
    slots: Vec<(Slot, u8)>,
}

impl Requirement {
    fn last(&self) -> Option<Slot> {
        self.slots.last().map(|s| s.0)
    }
}

/// Exclusions of one face size, precomputed per image and grouped by the
/// depth at which they become decidable.
#[derive(Clone, Debug)]
pub struct Exclusions {
    kind: FaceKind,
    /// `by_depth[d]` holds requirements whose last constrained slot is `d`.
    by_depth: Vec<Vec<Requirement>>,
    /// A pattern with no constrained slot excludes everything.
    everything: bool,
}

impl Exclusions {
    pub fn new(kind: FaceKind, patterns: &[CompiledPattern], reflection: bool) -> Exclusions {
        let k = kind.size();
        let mut all = Vec::new();
        let mut everything = false;
        for p in patterns.iter().filter(|p| p.kind == kind) {
            for image in 0..symmetry::image_count(k, reflection) {
                // ring slot source(i) must lie in pattern slot i
                let mut slots = Vec::new();
                for i in 0..k {
                    let (vi, fi) = symmetry::source(k, image, i);
                    if p.vertices[i] != VertexSet::FULL {
                        slots.push((2 * vi, p.vertices[i].0));
                    }
                    if p.faces[i] != FaceSet::FULL {
                        slots.push((2 * fi + 1, p.faces[i].0));
                    }
                }
                slots.sort_unstable();
                if slots.is_empty() {
                    everything = true;
                }
                all.push(Requirement { slots });
            }
        }
        all.sort();
        all.dedup();
        let mut by_depth = vec![Vec::new(); 2 * k];
        for r in all {
            if let Some(d) = r.last() {
                by_depth[d].push(r);
            }
        }
        Exclusions {
            kind,
            by_depth,
            everything,
        }
    }

    pub fn from_configs(kind: FaceKind, configs: &ConfigSet, options: MatchOptions) -> Exclusions {
        Exclusions::new(kind, &configs.compiled(options.semantics), options.reflection)
    }

    pub fn none(kind: FaceKind) -> Exclusions {
        Exclusions::new(kind, &[], true)
    }

    pub fn kind(&self) -> FaceKind {
        self.kind
    }

    fn hit(&self, depth: Slot, bits: &[u8; 12]) -> bool {
        self.by_depth[depth]
            .iter()
            .any(|r| r.slots.iter().all(|&(s, m)| bits[s] & m != 0))
    }

    /// Whether a complete ring is excluded.
    pub fn excludes(&self, ring: &RingDescriptor) -> bool {
        if self.everything {
            return true;
        }
        let bits = ring_bits(ring);
        (0..2 * ring.size()).any(|d| self.hit(d, &bits))
    }
}

fn ring_bits(ring: &RingDescriptor) -> [u8; 12] {
    let mut bits = [0u8; 12];
    for i in 0..ring.size() {
        bits[2 * i] = 1 << ring.vertices[i].index();
        bits[2 * i + 1] = 1 << ring.faces[i].index();
    }
    bits
}

struct Search<'a, F> {
    k: usize,
    options: MatchOptions,
    exclusions: &'a Exclusions,
    ring: RingDescriptor,
    bits: [u8; 12],
    visit: F,
}

impl<F: FnMut(&RingDescriptor)> Search<'_, F> {
    fn face_choices(&self) -> &'static [FaceClass] {
        const NO_TRIANGLES: [FaceClass; 3] = [FaceClass::Hex, FaceClass::Pent, FaceClass::Quad];
        if self.k == 5 {
            &NO_TRIANGLES
        } else {
            &FaceClass::ALL
        }
    }

    fn assign(&mut self, slot: Slot) -> bool {
        self.exclusions.hit(slot, &self.bits)
    }

    fn vertex(&mut self, i: usize) {
        for &v in &VertexClass::ALL {
            if i > 0 && v < self.ring.vertices[0] {
                continue;
            }
            if i > 0 && check_vertex(v, Some(self.ring.faces[i - 1]), None).is_err() {
                continue;
            }
            self.ring.vertices[i] = v;
            self.bits[2 * i] = 1 << v.index();
            if self.assign(2 * i) {
                continue;
            }
            self.face(i);
        }
    }

    fn face(&mut self, i: usize) {
        for &f in self.face_choices() {
            let left = if i > 0 { Some(self.ring.faces[i - 1]) } else { None };
            if check_vertex(self.ring.vertices[i], left, Some(f)).is_err() {
                continue;
            }
            self.ring.faces[i] = f;
            self.bits[2 * i + 1] = 1 << f.index();
            if self.assign(2 * i + 1) {
                continue;
            }
            if i + 1 < self.k {
                self.vertex(i + 1);
            } else {
                self.leaf();
            }
        }
    }

    fn leaf(&mut self) {
        let r = &self.ring;
        if check_vertex(r.vertices[0], Some(r.faces[self.k - 1]), Some(r.faces[0])).is_err() {
            return;
        }
        if !r.is_canonical(self.options.reflection) {
            return;
        }
        (self.visit)(r);
    }
}

/// The `(v0, f0)` prefixes in enumeration order; each is an independent
/// partition of the search.
pub fn partitions(kind: FaceKind) -> Vec<(VertexClass, FaceClass)> {
    let mut out = Vec::new();
    for v in VertexClass::ALL {
        for f in FaceClass::ALL {
            if kind == FaceKind::Pentagon && f.is_triangle() {
                continue;
            }
            if check_vertex(v, None, Some(f)).is_ok() {
                out.push((v, f));
            }
        }
    }
    out
}

/// Runs `visit` on every ring of one partition, in order.
pub fn scan_partition<F: FnMut(&RingDescriptor)>(
    exclusions: &Exclusions,
    options: MatchOptions,
    prefix: (VertexClass, FaceClass),
    visit: F,
) {
    let kind = exclusions.kind;
    if exclusions.everything {
        return;
    }
    let k = kind.size();
    let mut ring = RingDescriptor::new(&vec![VertexClass::P4; k], &vec![FaceClass::Hex; k]);
    ring.vertices[0] = prefix.0;
    ring.faces[0] = prefix.1;
    let mut bits = [0u8; 12];
    bits[0] = 1 << prefix.0.index();
    bits[1] = 1 << prefix.1.index();
    if exclusions.hit(0, &bits) || exclusions.hit(1, &bits) {
        return;
    }
    let mut s = Search {
        k,
        options,
        exclusions,
        ring,
        bits,
        visit,
    };
    s.vertex(1);
}

/// Folds over all canonical consistent non-excluded rings, one accumulator
/// per partition, evaluated in parallel. The returned accumulators are in
/// enumeration order, so any order-respecting merge is deterministic.
pub fn fold_rings<A, M, F>(exclusions: &Exclusions, options: MatchOptions, make: M, visit: F) -> Vec<A>
where
    A: Send,
    M: Fn() -> A + Sync,
    F: Fn(&mut A, &RingDescriptor) + Sync,
{
    partitions(exclusions.kind)
        .into_par_iter()
        .map(|prefix| {
            let mut acc = make();
            scan_partition(exclusions, options, prefix, |r| visit(&mut acc, r));
            acc
        })
        .collect()
}

/// All canonical consistent rings of size `d` not matched by any exclusion,
/// in lexicographic order.
pub fn enumerate_rings(d: usize, exclusions: &ConfigSet, options: MatchOptions) -> Vec<RingDescriptor> {
    let kind = FaceKind::from_size(d).expect("rings have size 5 or 6");
    let ex = Exclusions::from_configs(kind, exclusions, options);
    fold_rings(&ex, options, Vec::new, |acc, r| acc.push(*r))
        .into_iter()
        .flatten()
        .collect()
}

/// Number of rings [`enumerate_rings`] would yield.
pub fn count_rings(d: usize, exclusions: &ConfigSet, options: MatchOptions) -> u64 {
    let kind = FaceKind::from_size(d).expect("rings have size 5 or 6");
    let ex = Exclusions::from_configs(kind, exclusions, options);
    fold_rings(&ex, options, || 0u64, |n, _| *n += 1).into_iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::consistency::consistency_check;

    #[test]
    fn pentagons_are_sorted_canonical_and_consistent() {
        let rings = enumerate_rings(5, &ConfigSet::empty(), MatchOptions::default());
        assert!(!rings.is_empty());
        assert!(rings.windows(2).all(|w| w[0].encode() < w[1].encode()));
        for r in &rings {
            assert!(consistency_check(r).is_ok());
            assert_eq!(r.canonical(true), *r);
        }
    }

    #[test]
    fn exclusion_is_set_difference() {
        let opts = MatchOptions::default();
        let cfg = ConfigSet::parse("P:v*3P3").unwrap();
        let all = enumerate_rings(5, &ConfigSet::empty(), opts);
        let kept = enumerate_rings(5, &cfg, opts);
        let compiled = cfg.compiled(opts.semantics);
        let expected: Vec<_> = all
            .iter()
            .filter(|r| !compiled.iter().any(|p| p.matches(&r.slots(), true)))
            .copied()
            .collect();
        assert_eq!(kept, expected);
        assert!(kept.len() < all.len());
    }

    #[test]
    fn everything_excluded() {
        let cfg = ConfigSet::parse("P:").unwrap();
        assert!(enumerate_rings(5, &cfg, MatchOptions::default()).is_empty());
    }
}
