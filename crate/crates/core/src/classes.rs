//! Concrete vertex and face types, the wildcard alphabets built on top of
//! them, and the set representation used by every matcher in the crate.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Concrete type of a vertex as seen from the face being described.
///
/// Variants are declared in ASCII order of their encoding characters, so the
/// derived `Ord` agrees with byte-wise comparison of encoded strings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum VertexClass {
    /// `4`: a 4-vertex that is not `v`, `u` or `w`.
    P4 = 0,
    /// `5`: a 5-vertex.
    P5 = 1,
    /// `6`: a vertex of degree at least 6.
    P6 = 2,
    /// `o`: a 3-vertex whose neighbor off the face is also a 3-vertex.
    O = 3,
    /// `t`: a 3-vertex whose neighbor off the face has degree at least 4.
    T = 4,
    /// `u`: a 4-vertex whose opposite 3-face has one 3-vertex and one ≥4-vertex.
    U = 5,
    /// `v`: a 4-vertex whose opposite 3-face has two ≥4-vertices.
    V = 6,
    /// `w`: a 4-vertex whose opposite 3-face has two 3-vertices.
    W = 7,
}

/// Coarse degree of a vertex; `Six` stands for every degree from 6 up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Degree {
    Three,
    Four,
    Five,
    Six,
}

impl Degree {
    pub const ALL: [Degree; 4] = [Degree::Three, Degree::Four, Degree::Five, Degree::Six];

    pub fn is_three(self) -> bool {
        self == Degree::Three
    }

    /// Smallest actual degree in the bucket.
    pub fn min_value(self) -> u32 {
        match self {
            Degree::Three => 3,
            Degree::Four => 4,
            Degree::Five => 5,
            Degree::Six => 6,
        }
    }
}

impl VertexClass {
    pub const ALL: [VertexClass; 8] = [
        VertexClass::P4,
        VertexClass::P5,
        VertexClass::P6,
        VertexClass::O,
        VertexClass::T,
        VertexClass::U,
        VertexClass::V,
        VertexClass::W,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> VertexClass {
        Self::ALL[i]
    }

    pub fn to_char(self) -> char {
        match self {
            VertexClass::P4 => '4',
            VertexClass::P5 => '5',
            VertexClass::P6 => '6',
            VertexClass::O => 'o',
            VertexClass::T => 't',
            VertexClass::U => 'u',
            VertexClass::V => 'v',
            VertexClass::W => 'w',
        }
    }

    /// Parses a concrete vertex character. Wildcards are rejected.
    pub fn from_char(c: char) -> Option<VertexClass> {
        Some(match c {
            '4' => VertexClass::P4,
            '5' => VertexClass::P5,
            '6' => VertexClass::P6,
            'o' => VertexClass::O,
            't' => VertexClass::T,
            'u' => VertexClass::U,
            'v' => VertexClass::V,
            'w' => VertexClass::W,
            _ => return None,
        })
    }

    pub fn degree(self) -> Degree {
        match self {
            VertexClass::O | VertexClass::T => Degree::Three,
            VertexClass::P4 | VertexClass::U | VertexClass::V | VertexClass::W => Degree::Four,
            VertexClass::P5 => Degree::Five,
            VertexClass::P6 => Degree::Six,
        }
    }

    pub fn is_three(self) -> bool {
        self.degree() == Degree::Three
    }

    /// `v`, `u` or `w`: a 4-vertex facing an off-face triangle.
    pub fn is_triangle_four(self) -> bool {
        matches!(self, VertexClass::U | VertexClass::V | VertexClass::W)
    }

    /// Classes a vertex of the given degree may take relative to a face.
    pub fn of_degree(d: Degree) -> &'static [VertexClass] {
        match d {
            Degree::Three => &[VertexClass::O, VertexClass::T],
            Degree::Four => &[VertexClass::P4, VertexClass::U, VertexClass::V, VertexClass::W],
            Degree::Five => &[VertexClass::P5],
            Degree::Six => &[VertexClass::P6],
        }
    }
}

impl fmt::Display for VertexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// Concrete type of a face as seen across an edge of the described face.
///
/// For 3-faces the class records the tip, the triangle vertex off the shared
/// edge. Declared in ASCII order of the encoding characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum FaceClass {
    /// `H`: a 6-face.
    Hex = 0,
    /// `O`: a 3-face whose tip is a 3-vertex with a 3-vertex remaining neighbor.
    TriO = 1,
    /// `P`: a 5-face.
    Pent = 2,
    /// `Q`: a 4-face.
    Quad = 3,
    /// `t`: a 3-face whose tip is a 3-vertex with a ≥4-vertex remaining neighbor.
    TriT = 4,
    /// `x`: a 3-face whose tip has degree at least 4.
    TriX = 5,
}

impl FaceClass {
    pub const ALL: [FaceClass; 6] = [
        FaceClass::Hex,
        FaceClass::TriO,
        FaceClass::Pent,
        FaceClass::Quad,
        FaceClass::TriT,
        FaceClass::TriX,
    ];

    pub const TRIANGLES: [FaceClass; 3] = [FaceClass::TriO, FaceClass::TriT, FaceClass::TriX];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> FaceClass {
        Self::ALL[i]
    }

    pub fn to_char(self) -> char {
        match self {
            FaceClass::Hex => 'H',
            FaceClass::TriO => 'O',
            FaceClass::Pent => 'P',
            FaceClass::Quad => 'Q',
            FaceClass::TriT => 't',
            FaceClass::TriX => 'x',
        }
    }

    pub fn from_char(c: char) -> Option<FaceClass> {
        Some(match c {
            'H' => FaceClass::Hex,
            'O' => FaceClass::TriO,
            'P' => FaceClass::Pent,
            'Q' => FaceClass::Quad,
            't' => FaceClass::TriT,
            'x' => FaceClass::TriX,
            _ => return None,
        })
    }

    pub fn size(self) -> u32 {
        match self {
            FaceClass::TriO | FaceClass::TriT | FaceClass::TriX => 3,
            FaceClass::Quad => 4,
            FaceClass::Pent => 5,
            FaceClass::Hex => 6,
        }
    }

    pub fn is_triangle(self) -> bool {
        self.size() == 3
    }

    /// The non-triangular class of a face of the given size.
    pub fn of_size(size: u32) -> Option<FaceClass> {
        match size {
            4 => Some(FaceClass::Quad),
            5 => Some(FaceClass::Pent),
            6 => Some(FaceClass::Hex),
            _ => None,
        }
    }
}

impl fmt::Display for FaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// Set of vertex classes, one bit per [`VertexClass`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(pub u8);

/// Set of face classes, one bit per [`FaceClass`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FaceSet(pub u8);

macro_rules! class_set {
    ($set:ident, $class:ident, $full:expr) => {
        impl $set {
            pub const EMPTY: $set = $set(0);
            pub const FULL: $set = $set($full);

            pub fn single(c: $class) -> $set {
                $set(1 << c as u8)
            }

            pub fn of(classes: &[$class]) -> $set {
                $set(classes.iter().fold(0, |acc, &c| acc | 1 << c as u8))
            }

            pub fn contains(self, c: $class) -> bool {
                self.0 & (1 << c as u8) != 0
            }

            pub fn is_subset(self, other: $set) -> bool {
                self.0 & !other.0 == 0
            }

            pub fn intersects(self, other: $set) -> bool {
                self.0 & other.0 != 0
            }

            pub fn union(self, other: $set) -> $set {
                $set(self.0 | other.0)
            }

            pub fn is_empty(self) -> bool {
                self.0 == 0
            }

            pub fn len(self) -> usize {
                self.0.count_ones() as usize
            }

            pub fn iter(self) -> impl Iterator<Item = $class> {
                $class::ALL.into_iter().filter(move |&c| self.contains(c))
            }

            /// The single member, if the set is a singleton.
            pub fn only(self) -> Option<$class> {
                if self.len() == 1 {
                    self.iter().next()
                } else {
                    None
                }
            }
        }
    };
}

class_set!(VertexSet, VertexClass, 0xff);
class_set!(FaceSet, FaceClass, 0x3f);

/// How the pattern character `4` is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Semantics {
    /// `4` matches every 4-vertex: `4`, `v`, `u` and `w`.
    #[default]
    Inclusive4,
    /// `4` matches only the plain `4` class.
    Strict4,
}

impl Semantics {
    pub fn name(self) -> &'static str {
        match self {
            Semantics::Inclusive4 => "inclusive4",
            Semantics::Strict4 => "strict4",
        }
    }
}

impl std::str::FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inclusive4" => Ok(Semantics::Inclusive4),
            "strict4" => Ok(Semantics::Strict4),
            other => Err(format!("unknown semantics `{other}` (expected inclusive4 or strict4)")),
        }
    }
}

/// Matching knobs shared by configuration and rule matching.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatchOptions {
    pub semantics: Semantics,
    /// Allow mirrored placements: reflected rings for configurations and
    /// right-to-left windows for rules.
    pub reflection: bool,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions {
            semantics: Semantics::Inclusive4,
            reflection: true,
        }
    }
}

/// One character of the vertex alphabet, concrete or wildcard.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexPatternChar {
    T,
    O,
    V,
    U,
    W,
    Four,
    Five,
    Six,
    /// `3`: any 3-vertex.
    Three,
    /// `x`: any ≥4-vertex.
    AtLeast4,
    /// `+`: any ≥5-vertex.
    AtLeast5,
    /// `*`: anything.
    Any,
}

impl VertexPatternChar {
    pub const ALL: [VertexPatternChar; 12] = [
        VertexPatternChar::T,
        VertexPatternChar::O,
        VertexPatternChar::V,
        VertexPatternChar::U,
        VertexPatternChar::W,
        VertexPatternChar::Four,
        VertexPatternChar::Five,
        VertexPatternChar::Six,
        VertexPatternChar::Three,
        VertexPatternChar::AtLeast4,
        VertexPatternChar::AtLeast5,
        VertexPatternChar::Any,
    ];

    pub fn from_char(c: char) -> Option<Self> {
        use VertexPatternChar::*;
        Some(match c {
            't' => T,
            'o' => O,
            'v' => V,
            'u' => U,
            'w' => W,
            '4' => Four,
            '5' => Five,
            '6' => Six,
            '3' => Three,
            'x' => AtLeast4,
            '+' => AtLeast5,
            '*' => Any,
            _ => return None,
        })
    }

    pub fn to_char(self) -> char {
        use VertexPatternChar::*;
        match self {
            T => 't',
            O => 'o',
            V => 'v',
            U => 'u',
            W => 'w',
            Four => '4',
            Five => '5',
            Six => '6',
            Three => '3',
            AtLeast4 => 'x',
            AtLeast5 => '+',
            Any => '*',
        }
    }

    pub fn match_set(self, semantics: Semantics) -> VertexSet {
        use VertexClass as C;
        use VertexPatternChar::*;
        match self {
            T => VertexSet::single(C::T),
            O => VertexSet::single(C::O),
            V => VertexSet::single(C::V),
            U => VertexSet::single(C::U),
            W => VertexSet::single(C::W),
            Four => match semantics {
                Semantics::Inclusive4 => VertexSet::of(&[C::P4, C::V, C::U, C::W]),
                Semantics::Strict4 => VertexSet::single(C::P4),
            },
            Five => VertexSet::single(C::P5),
            Six => VertexSet::single(C::P6),
            Three => VertexSet::of(&[C::T, C::O]),
            AtLeast4 => VertexSet::of(&[C::V, C::U, C::W, C::P4, C::P5, C::P6]),
            AtLeast5 => VertexSet::of(&[C::P5, C::P6]),
            Any => VertexSet::FULL,
        }
    }

    /// Whether a concrete class belongs to this character's match set.
    pub fn matches(self, class: VertexClass, semantics: Semantics) -> bool {
        self.match_set(semantics).contains(class)
    }
}

impl From<VertexClass> for VertexPatternChar {
    fn from(c: VertexClass) -> Self {
        use VertexPatternChar::*;
        match c {
            VertexClass::P4 => Four,
            VertexClass::P5 => Five,
            VertexClass::P6 => Six,
            VertexClass::O => O,
            VertexClass::T => T,
            VertexClass::U => U,
            VertexClass::V => V,
            VertexClass::W => W,
        }
    }
}

/// One character of the face alphabet, concrete or wildcard.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FacePatternChar {
    T,
    O,
    X,
    Q,
    P,
    H,
    /// `3`: a 3-face whose tip is a 3-vertex.
    Three,
    /// `T`: any 3-face.
    Triangle,
    /// `F`: any ≥4-face.
    Big,
    /// `*`: anything.
    Any,
}

impl FacePatternChar {
    pub const ALL: [FacePatternChar; 10] = [
        FacePatternChar::T,
        FacePatternChar::O,
        FacePatternChar::X,
        FacePatternChar::Q,
        FacePatternChar::P,
        FacePatternChar::H,
        FacePatternChar::Three,
        FacePatternChar::Triangle,
        FacePatternChar::Big,
        FacePatternChar::Any,
    ];

    pub fn from_char(c: char) -> Option<Self> {
        use FacePatternChar::*;
        Some(match c {
            't' => T,
            'O' => O,
            'x' => X,
            'Q' => Q,
            'P' => P,
            'H' => H,
            '3' => Three,
            'T' => Triangle,
            'F' => Big,
            '*' => Any,
            _ => return None,
        })
    }

    pub fn to_char(self) -> char {
        use FacePatternChar::*;
        match self {
            T => 't',
            O => 'O',
            X => 'x',
            Q => 'Q',
            P => 'P',
            H => 'H',
            Three => '3',
            Triangle => 'T',
            Big => 'F',
            Any => '*',
        }
    }

    pub fn match_set(self) -> FaceSet {
        use FaceClass as C;
        use FacePatternChar::*;
        match self {
            T => FaceSet::single(C::TriT),
            O => FaceSet::single(C::TriO),
            X => FaceSet::single(C::TriX),
            Q => FaceSet::single(C::Quad),
            P => FaceSet::single(C::Pent),
            H => FaceSet::single(C::Hex),
            Three => FaceSet::of(&[C::TriT, C::TriO]),
            Triangle => FaceSet::of(&C::TRIANGLES),
            Big => FaceSet::of(&[C::Quad, C::Pent, C::Hex]),
            Any => FaceSet::FULL,
        }
    }

    pub fn matches(self, class: FaceClass) -> bool {
        self.match_set().contains(class)
    }
}

impl From<FaceClass> for FacePatternChar {
    fn from(c: FaceClass) -> Self {
        use FacePatternChar::*;
        match c {
            FaceClass::Hex => H,
            FaceClass::TriO => O,
            FaceClass::Pent => P,
            FaceClass::Quad => Q,
            FaceClass::TriT => T,
            FaceClass::TriX => X,
        }
    }
}

/// Convenience dispatch for code that handles both alphabets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PatternChar {
    Vertex(VertexPatternChar),
    Face(FacePatternChar),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Concrete {
    Vertex(VertexClass),
    Face(FaceClass),
}

/// Membership test across either alphabet. Mixed alphabets never match.
pub fn char_matches(pattern: PatternChar, concrete: Concrete, semantics: Semantics) -> bool {
    match (pattern, concrete) {
        (PatternChar::Vertex(p), Concrete::Vertex(c)) => p.matches(c, semantics),
        (PatternChar::Face(p), Concrete::Face(c)) => p.matches(c),
        _ => false,
    }
}
