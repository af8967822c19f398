//! Concrete ring descriptors of a 5- or 6-face and symmetry-aware matching
//! of face patterns against them.

use std::fmt;

use thiserror::Error;

use crate::classes::{FaceClass, FaceSet, MatchOptions, Semantics, VertexClass, VertexSet};
use crate::pattern::{FaceKind, FacePattern};
use crate::symmetry;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescriptorError {
    #[error("descriptor `{text}` must start with P: or H:")]
    Prefix { text: String },
    #[error("descriptor `{text}` must have a body of exactly {expected} characters, found {found}")]
    Length {
        text: String,
        expected: usize,
        found: usize,
    },
    #[error("descriptor `{text}` has non-concrete character `{ch}` at position {pos}")]
    NotConcrete { text: String, pos: usize, ch: char },
}

/// The cyclic sequence of vertex classes around a face together with the
/// class of the face across each edge (`faces[i]` sits on edge `v_i v_{i+1}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingDescriptor {
    pub kind: FaceKind,
    pub vertices: [VertexClass; 6],
    pub faces: [FaceClass; 6],
}

impl RingDescriptor {
    pub fn new(vertices: &[VertexClass], faces: &[FaceClass]) -> RingDescriptor {
        assert_eq!(vertices.len(), faces.len());
        let kind = FaceKind::from_size(vertices.len()).expect("ring size must be 5 or 6");
        let mut v = [VertexClass::P4; 6];
        let mut f = [FaceClass::Hex; 6];
        v[..vertices.len()].copy_from_slice(vertices);
        f[..faces.len()].copy_from_slice(faces);
        RingDescriptor {
            kind,
            vertices: v,
            faces: f,
        }
    }

    pub fn size(&self) -> usize {
        self.kind.size()
    }

    pub fn vertex(&self, i: usize) -> VertexClass {
        self.vertices[i % self.size()]
    }

    pub fn face(&self, i: usize) -> FaceClass {
        self.faces[i % self.size()]
    }

    /// Parses a fully padded concrete descriptor such as `H:4Q4Q4Q4Q4Q4Q`.
    pub fn parse(text: &str) -> Result<RingDescriptor, DescriptorError> {
        let (kind, body) = FaceKind::from_prefix(text).ok_or_else(|| DescriptorError::Prefix {
            text: text.to_string(),
        })?;
        let chars: Vec<char> = body.chars().collect();
        let k = kind.size();
        if chars.len() != 2 * k {
            return Err(DescriptorError::Length {
                text: text.to_string(),
                expected: 2 * k,
                found: chars.len(),
            });
        }
        let bad = |j: usize| DescriptorError::NotConcrete {
            text: text.to_string(),
            pos: j + 2,
            ch: chars[j],
        };
        let mut v = Vec::with_capacity(k);
        let mut f = Vec::with_capacity(k);
        for j in 0..2 * k {
            if j % 2 == 0 {
                v.push(VertexClass::from_char(chars[j]).ok_or_else(|| bad(j))?);
            } else {
                f.push(FaceClass::from_char(chars[j]).ok_or_else(|| bad(j))?);
            }
        }
        Ok(RingDescriptor::new(&v, &f))
    }

    /// ASCII encoding bytes of the body (without the prefix).
    pub fn body_bytes(&self) -> [u8; 12] {
        let mut out = [0u8; 12];
        for i in 0..self.size() {
            out[2 * i] = self.vertices[i].to_char() as u8;
            out[2 * i + 1] = self.faces[i].to_char() as u8;
        }
        out
    }

    pub fn encode(&self) -> String {
        let mut s = String::with_capacity(14);
        s.push_str(self.kind.prefix());
        for i in 0..self.size() {
            s.push(self.vertices[i].to_char());
            s.push(self.faces[i].to_char());
        }
        s
    }

    /// The ring seen through symmetry image `image` (see [`symmetry::source`]).
    pub fn image(&self, image: usize) -> RingDescriptor {
        let k = self.size();
        let mut out = *self;
        for i in 0..k {
            let (vi, fi) = symmetry::source(k, image, i);
            out.vertices[i] = self.vertices[vi];
            out.faces[i] = self.faces[fi];
        }
        out
    }

    pub fn rotated(&self, by: usize) -> RingDescriptor {
        self.image(by % self.size())
    }

    pub fn reflected(&self) -> RingDescriptor {
        self.image(self.size())
    }

    /// Whether this ring is the least of its images in encoding order.
    pub fn is_canonical(&self, reflection: bool) -> bool {
        let k = self.size();
        let mine = self.body_bytes();
        (1..symmetry::image_count(k, reflection)).all(|image| {
            let mut other = [0u8; 12];
            for i in 0..k {
                let (vi, fi) = symmetry::source(k, image, i);
                other[2 * i] = self.vertices[vi].to_char() as u8;
                other[2 * i + 1] = self.faces[fi].to_char() as u8;
            }
            mine <= other
        })
    }

    pub fn canonical(&self, reflection: bool) -> RingDescriptor {
        let k = self.size();
        (0..symmetry::image_count(k, reflection))
            .map(|image| self.image(image))
            .min_by_key(|r| r.body_bytes())
            .expect("at least one image")
    }

    /// Slot-set view for the generic matcher.
    pub fn slots(&self) -> SlotRing {
        let mut s = SlotRing::unknown(self.kind);
        for i in 0..self.size() {
            s.vertices[i] = VertexSet::single(self.vertices[i]);
            s.faces[i] = FaceSet::single(self.faces[i]);
        }
        s
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

/// Lexicographically least fully padded encoding over all rotations and
/// reflections of `ring`.
pub fn canonical_form(ring: &RingDescriptor) -> String {
    ring.canonical(true).encode()
}

/// A ring whose slots hold sets of possible classes. Concrete rings use
/// singletons; unknown slots hold the full set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SlotRing {
    pub kind: FaceKind,
    pub vertices: [VertexSet; 6],
    pub faces: [FaceSet; 6],
}

impl SlotRing {
    pub fn unknown(kind: FaceKind) -> SlotRing {
        SlotRing {
            kind,
            vertices: [VertexSet::FULL; 6],
            faces: [FaceSet::FULL; 6],
        }
    }

    pub fn size(&self) -> usize {
        self.kind.size()
    }

    /// Encoding with `?` for slots that are not a single concrete class.
    pub fn encode(&self) -> String {
        let mut s = String::from(self.kind.prefix());
        for i in 0..self.size() {
            s.push(self.vertices[i].only().map_or('?', |c| c.to_char()));
            s.push(self.faces[i].only().map_or('?', |c| c.to_char()));
        }
        s
    }
}

/// A face pattern lowered to per-slot match sets under fixed semantics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CompiledPattern {
    pub kind: FaceKind,
    pub vertices: [VertexSet; 6],
    pub faces: [FaceSet; 6],
}

impl CompiledPattern {
    pub fn compile(pattern: &FacePattern, semantics: Semantics) -> CompiledPattern {
        let mut vertices = [VertexSet::FULL; 6];
        let mut faces = [FaceSet::FULL; 6];
        for i in 0..pattern.size() {
            vertices[i] = pattern.vertices[i].match_set(semantics);
            faces[i] = pattern.faces[i].match_set();
        }
        CompiledPattern {
            kind: pattern.kind,
            vertices,
            faces,
        }
    }

    /// True iff some image of `ring` has every slot set inside the pattern's
    /// set at that position. For concrete rings this is plain membership;
    /// for partially known rings it means the pattern matches however the
    /// unknown slots are filled.
    pub fn matches(&self, ring: &SlotRing, reflection: bool) -> bool {
        self.matching_image(ring, reflection).is_some()
    }

    pub fn matching_image(&self, ring: &SlotRing, reflection: bool) -> Option<usize> {
        if ring.kind != self.kind {
            return None;
        }
        let k = ring.size();
        (0..symmetry::image_count(k, reflection)).find(|&image| {
            (0..k).all(|i| {
                let (vi, fi) = symmetry::source(k, image, i);
                ring.vertices[vi].is_subset(self.vertices[i]) && ring.faces[fi].is_subset(self.faces[i])
            })
        })
    }
}

/// Whether `config` matches `ring` under some rotation (or reflection, when
/// enabled) of the ring.
pub fn match_ring(config: &FacePattern, ring: &RingDescriptor, options: MatchOptions) -> bool {
    CompiledPattern::compile(config, options.semantics).matches(&ring.slots(), options.reflection)
}
