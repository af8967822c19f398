//! Structural constraints a face description must satisfy to occur around
//! a face of a minimal counterexample.
//!
//! * C1: a 5-face has no 3-face neighbors.
//! * C2: a `v`/`u`/`w` vertex has 6-faces on both sides (its off-face
//!   triangle shares an edge with each of them).
//! * C3: a 3-vertex has at most one adjacent 3-face, and a 3-face next to it
//!   forces the other side to be a 6-face (the two side faces share an edge).
//! * C4: a `t` vertex sees only `x` triangles (the tip is its off-face neighbor).
//! * C5: an `o` vertex sees only `t`/`O` triangles.
//! * C6: `4`/`5`/`6` vertices put no constraint on adjacent triangles.

use std::fmt;

use serde::Serialize;

use crate::classes::{FaceClass, VertexClass};
use crate::ring::RingDescriptor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Constraint {
    C1,
    C2,
    C3,
    C4,
    C5,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// First failed constraint and the slot where it failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub constraint: Constraint,
    pub position: usize,
}

/// Version tag of the constraint set, echoed into reports.
pub const CONSTRAINT_SET_VERSION: &str = "C1-C6/v1";

/// Checks one vertex against whichever of its two side faces are known.
pub fn check_vertex(
    class: VertexClass,
    left: Option<FaceClass>,
    right: Option<FaceClass>,
) -> Result<(), Constraint> {
    if class.is_triangle_four() {
        if left.into_iter().chain(right).any(|f| f != FaceClass::Hex) {
            return Err(Constraint::C2);
        }
        return Ok(());
    }
    if !class.is_three() {
        return Ok(());
    }
    if let (Some(a), Some(b)) = (left, right) {
        if (a.is_triangle() && b != FaceClass::Hex) || (b.is_triangle() && a != FaceClass::Hex) {
            return Err(Constraint::C3);
        }
    }
    for f in left.into_iter().chain(right).filter(|f| f.is_triangle()) {
        match class {
            VertexClass::T if f != FaceClass::TriX => return Err(Constraint::C4),
            VertexClass::O if f == FaceClass::TriX => return Err(Constraint::C5),
            _ => {}
        }
    }
    Ok(())
}

/// Checks C1–C6 on a whole ring.
pub fn consistency_check(ring: &RingDescriptor) -> Result<(), Violation> {
    let k = ring.size();
    if k == 5 {
        if let Some(i) = (0..k).find(|&i| ring.faces[i].is_triangle()) {
            return Err(Violation {
                constraint: Constraint::C1,
                position: i,
            });
        }
    }
    for i in 0..k {
        let left = ring.faces[(i + k - 1) % k];
        check_vertex(ring.vertices[i], Some(left), Some(ring.faces[i])).map_err(|constraint| Violation {
            constraint,
            position: i,
        })?;
    }
    Ok(())
}

/// Checks a linear window `v0 f0 v1 f1 ... v_n`: inner vertices against both
/// sides, end vertices against their single known side.
pub fn window_consistent(vertices: &[VertexClass], faces: &[FaceClass], pentagon: bool) -> bool {
    debug_assert_eq!(vertices.len(), faces.len() + 1);
    if pentagon && faces.iter().any(|f| f.is_triangle()) {
        return false;
    }
    vertices.iter().enumerate().all(|(j, &v)| {
        let left = if j > 0 { Some(faces[j - 1]) } else { None };
        let right = faces.get(j).copied();
        check_vertex(v, left, right).is_ok()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(s: &str) -> RingDescriptor {
        RingDescriptor::parse(s).unwrap()
    }

    fn failed(s: &str) -> Option<Constraint> {
        consistency_check(&ring(s)).err().map(|v| v.constraint)
    }

    #[test]
    fn pentagon_with_triangle_neighbor() {
        for t in ['t', 'O', 'x'] {
            let s = format!("P:6H6H6H6H6{t}");
            assert_eq!(failed(&s), Some(Constraint::C1), "{s}");
        }
    }

    #[test]
    fn triangle_four_needs_hexagon_sides() {
        assert_eq!(failed("H:wQ4H4H4H4H4H"), Some(Constraint::C2));
        assert_eq!(failed("H:wH4H4H4H4H4Q"), Some(Constraint::C2));
        assert_eq!(failed("H:wH4H4H4H4H4H"), None);
    }

    #[test]
    fn three_vertex_sides() {
        assert_eq!(failed("H:txtx4H4H4H4H"), Some(Constraint::C3));
        assert_eq!(failed("H:tx4H4H4H4H4Q"), Some(Constraint::C3));
        assert_eq!(failed("H:tx4H4H4H4H4H"), None);
        assert_eq!(failed("H:tO4H4H4H4H4H"), Some(Constraint::C4));
        assert_eq!(failed("H:ox4H4H4H4H4H"), Some(Constraint::C5));
        assert_eq!(failed("H:ot4H4H4H4H4H"), None);
        assert_eq!(failed("H:tQtQ4H4H4H4H"), None);
    }

    #[test]
    fn plain_vertices_are_unconstrained() {
        assert_eq!(failed("H:4Q4Q4Q4Q4Q4Q"), None);
        assert_eq!(failed("H:4x5t6O4x5t6O"), None);
    }

    #[test]
    fn violation_reports_position() {
        let v = consistency_check(&ring("H:4H4H4HwQ4H4H")).unwrap_err();
        assert_eq!(v, Violation { constraint: Constraint::C2, position: 3 });
    }
}
