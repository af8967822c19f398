//! Exact charge amounts and the double-entry transfer ledger.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Charge in sixtieths of a unit. Every amount in the rule tables is an
/// integer in this unit, so all accounting is exact integer arithmetic.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Charge(pub i64);

impl Charge {
    pub const ZERO: Charge = Charge(0);
    /// One whole unit of charge.
    pub const UNIT: Charge = Charge(60);

    pub fn sixtieths(n: i64) -> Charge {
        Charge(n)
    }

    pub fn units(n: i64) -> Charge {
        Charge(60 * n)
    }

    pub fn abs(self) -> Charge {
        Charge(self.0.abs())
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }
}

impl fmt::Display for Charge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/60", self.0)
    }
}

impl Add for Charge {
    type Output = Charge;
    fn add(self, rhs: Charge) -> Charge {
        Charge(self.0 + rhs.0)
    }
}

impl Sub for Charge {
    type Output = Charge;
    fn sub(self, rhs: Charge) -> Charge {
        Charge(self.0 - rhs.0)
    }
}

impl Neg for Charge {
    type Output = Charge;
    fn neg(self) -> Charge {
        Charge(-self.0)
    }
}

impl AddAssign for Charge {
    fn add_assign(&mut self, rhs: Charge) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Charge {
    fn sub_assign(&mut self, rhs: Charge) {
        self.0 -= rhs.0;
    }
}

impl Sum for Charge {
    fn sum<I: Iterator<Item = Charge>>(iter: I) -> Charge {
        Charge(iter.map(|c| c.0).sum())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("elements have size at least 3, got {0}")]
pub struct SizeError(pub u32);

/// Initial charge of a `k`-vertex or `k`-face: `k - 4` units.
pub fn initial_charge(k: u32) -> Result<Charge, SizeError> {
    if k < 3 {
        return Err(SizeError(k));
    }
    Ok(Charge::units(k as i64 - 4))
}

/// An element of the local picture around a described face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementId {
    /// The described face itself.
    Face,
    /// Ring vertex `v_i`.
    Vertex(usize),
    /// The face across edge `v_i v_{i+1}`.
    Across(usize),
    /// The off-face triangle of the 4-vertex `v_i`.
    OffTriangle(usize),
    /// Corner `x_j` of a described 3-face.
    Corner(usize),
    /// The 6-face across edge `x_j x_{j+1}` of a described 3-face.
    Hexagon(usize),
    /// The face at corner `x_j` opposite the described 3-face.
    CornerFace(usize),
    /// The center of a vertex star.
    Center,
    /// Face `F_i` of a vertex star.
    Incident(usize),
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementId::Face => write!(f, "face"),
            ElementId::Vertex(i) => write!(f, "v{i}"),
            ElementId::Across(i) => write!(f, "e{i}"),
            ElementId::OffTriangle(i) => write!(f, "tri{i}"),
            ElementId::Corner(j) => write!(f, "x{j}"),
            ElementId::Hexagon(j) => write!(f, "E{j}"),
            ElementId::CornerFace(j) => write!(f, "g{j}"),
            ElementId::Center => write!(f, "c"),
            ElementId::Incident(i) => write!(f, "F{i}"),
        }
    }
}

impl Serialize for ElementId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A positive movement of charge from `payer` to `payee`, optionally passed
/// through an intermediate 4-vertex that forwards all of it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Transfer {
    pub payer: ElementId,
    pub payee: ElementId,
    pub amount: Charge,
    /// Encoded pattern of the rule that fired.
    pub rule: String,
    pub relay: Option<ElementId>,
}

impl Transfer {
    /// Ledger postings: the payer is debited, the payee credited, and a
    /// relay vertex is credited and debited by the same amount.
    pub fn postings(&self) -> Vec<(ElementId, Charge)> {
        let mut out = vec![(self.payer, -self.amount)];
        if let Some(r) = self.relay {
            out.push((r, self.amount));
            out.push((r, -self.amount));
        }
        out.push((self.payee, self.amount));
        out
    }
}

/// Net effect of a set of transfers on one element.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ChargeBreakdown {
    pub element: String,
    pub inflow: Vec<Transfer>,
    pub outflow: Vec<Transfer>,
    pub net: Charge,
}

impl ChargeBreakdown {
    pub fn for_element(element: ElementId, transfers: &[Transfer]) -> ChargeBreakdown {
        let mut b = ChargeBreakdown {
            element: element.to_string(),
            ..Default::default()
        };
        for t in transfers {
            if t.payee == element {
                b.inflow.push(t.clone());
            }
            if t.payer == element {
                b.outflow.push(t.clone());
            }
        }
        b.net = b.total_in() - b.total_out();
        b
    }

    pub fn total_in(&self) -> Charge {
        self.inflow.iter().map(|t| t.amount).sum()
    }

    pub fn total_out(&self) -> Charge {
        self.outflow.iter().map(|t| t.amount).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_charges() {
        assert_eq!(initial_charge(3), Ok(Charge(-60)));
        assert_eq!(initial_charge(4), Ok(Charge(0)));
        assert_eq!(initial_charge(6), Ok(Charge(120)));
        assert_eq!(initial_charge(2), Err(SizeError(2)));
    }

    #[test]
    fn relay_postings_net_zero() {
        let t = Transfer {
            payer: ElementId::Face,
            payee: ElementId::OffTriangle(2),
            amount: Charge(20),
            rule: "H:**w**".into(),
            relay: Some(ElementId::Vertex(2)),
        };
        let p = t.postings();
        let relay: Charge = p.iter().filter(|(e, _)| *e == ElementId::Vertex(2)).map(|(_, c)| *c).sum();
        assert_eq!(relay, Charge::ZERO);
        assert_eq!(p.iter().map(|(_, c)| *c).sum::<Charge>(), Charge::ZERO);
    }
}
