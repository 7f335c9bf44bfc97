//! Generalized quaternion and dihedral groups of order `2^n s`.
//!
//! `Q_{2^n s} = <x, y | x^{2^{n-1}s} = 1, yxy^{-1} = x^{-1}, y^2 = x^{2^{n-2}s}>`
//! and `D_{2^n s}` is the same with `y^2 = 1`. For `n = 2, s = 1` these are
//! `C4` and `C2 × C2`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::abelian::GroupSpec;
use crate::arith::{totient, two_adic};
use crate::error::{Error, Result};
use crate::finite::FiniteGroup;
use crate::holomorph::HolElement;
use crate::table::{AutTable, Code};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Quaternion,
    Dihedral,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::Quaternion => 'q',
            Family::Dihedral => 'd',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TargetKind {
    pub family: Family,
    pub n: u32,
    pub s: u64,
}

impl TargetKind {
    pub fn new(family: Family, n: u32, s: u64) -> Result<Self> {
        if n < 2 || s.is_multiple_of(2) {
            return Err(Error::invalid(format!("need n >= 2 and s odd, got n={n}, s={s}")));
        }
        Ok(TargetKind { family, n, s })
    }

    pub fn quaternion(n: u32, s: u64) -> Result<Self> {
        Self::new(Family::Quaternion, n, s)
    }

    pub fn dihedral(n: u32, s: u64) -> Result<Self> {
        Self::new(Family::Dihedral, n, s)
    }

    /// From the family and the group order `2^n s`.
    pub fn with_order(family: Family, order: u64) -> Result<Self> {
        let (n, s) = two_adic(order);
        Self::new(family, n, s)
    }

    pub fn order(&self) -> u64 {
        (1u64 << self.n) * self.s
    }

    /// Order of the cyclic subgroup `<x>`.
    pub fn half(&self) -> u64 {
        self.order() / 2
    }

    pub fn is_quaternion(&self) -> bool {
        self.family == Family::Quaternion
    }

    /// The same family at odd part 1.
    pub fn two_part(&self) -> TargetKind {
        TargetKind { s: 1, ..*self }
    }

    pub fn with_s(&self, s: u64) -> TargetKind {
        TargetKind { s, ..*self }
    }

    /// Display form such as `Q_{16}`; the order 4 cases print as
    /// `C_4` and `C_2×C_2`.
    pub fn math_name(&self) -> String {
        match (self.family, self.order()) {
            (Family::Quaternion, 4) => "C_4".to_string(),
            (Family::Dihedral, 4) => "C_2×C_2".to_string(),
            (f, m) if m < 10 => format!("{}_{m}", f.letter().to_ascii_uppercase()),
            (f, m) => format!("{}_{{{m}}}", f.letter().to_ascii_uppercase()),
        }
    }

    /// `|Aut(G)|`.
    pub fn aut_order(&self) -> u64 {
        let (n, s) = (self.n, self.s);
        if s == 1 {
            match (self.family, n) {
                (Family::Quaternion, 2) => return 2,
                (Family::Quaternion, 3) => return 24,
                (Family::Dihedral, 2) => return 6,
                _ => {}
            }
        }
        (1u64 << (2 * n - 3)) * s * totient(s)
    }
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.order())
    }
}

impl Serialize for TargetKind {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for TargetKind {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
        let parse_err = |reason: &str| Error::Parse { what: text.to_string(), reason: reason.to_string() };
        match t.as_str() {
            "c4" => return TargetKind::quaternion(2, 1),
            "c2xc2" | "v4" => return TargetKind::dihedral(2, 1),
            _ => {}
        }
        let family = match t.chars().next() {
            Some('q') => Family::Quaternion,
            Some('d') => Family::Dihedral,
            _ => return Err(parse_err("expected q<order> or d<order>")),
        };
        let order: u64 = t[1..].parse().map_err(|_| parse_err("order is not an integer"))?;
        if order < 4 || !order.is_multiple_of(4) {
            return Err(parse_err("order must be a multiple of 4"));
        }
        TargetKind::with_order(family, order)
    }
}

/// The abelian groups of order `2^n` that can carry a regular quaternion or
/// dihedral subgroup in their holomorph.
pub fn admissible_types(n: u32) -> Result<Vec<GroupSpec>> {
    if n < 2 {
        return Err(Error::invalid("n must be at least 2"));
    }
    let p = |k: u32| 1u64 << k;
    let mut out = vec![GroupSpec::new(&[p(n)])?, GroupSpec::new(&[2, p(n - 1)])?];
    if n >= 3 {
        if n >= 4 {
            out.push(GroupSpec::new(&[4, p(n - 2)])?);
        }
        out.push(GroupSpec::new(&[2, 2, p(n - 2)])?);
    }
    if n >= 4 {
        out.push(GroupSpec::new(&[2, 2, 2, p(n - 3)])?);
    }
    // C4 x C_{2^{n-2}} at n = 3 coincides with C2 x C4.
    out.dedup();
    Ok(out)
}

/// Recognizes a finite group as quaternion or dihedral by searching for a
/// presentation witness.
pub fn recognize(g: &FiniteGroup) -> Option<(TargetKind, (u32, u32))> {
    let order = g.order() as u64;
    if order < 4 || !order.is_multiple_of(4) {
        return None;
    }
    for family in [Family::Quaternion, Family::Dihedral] {
        if let Some(&w) = g.presentation_pairs(family == Family::Quaternion, true).first() {
            return Some((TargetKind::with_order(family, order).ok()?, w));
        }
    }
    None
}

/// Classifies a subgroup of `Hol(N)` given by its elements.
pub fn classify_subgroup(group: &GroupSpec, elems: &[HolElement]) -> Result<Option<TargetKind>> {
    let fg = FiniteGroup::from_elements(elems, |a, b| a.compose(group, b).expect("same group"))?;
    Ok(recognize(&fg).map(|(k, _)| k))
}

/// Same as [`classify_subgroup`] on packed codes of an indexed holomorph.
pub fn classify_codes(table: &AutTable, codes: &[Code]) -> Result<Option<TargetKind>> {
    let fg = FiniteGroup::from_elements(codes, |&a, &b| table.hmul(a, b))?;
    Ok(recognize(&fg).map(|(k, _)| k))
}
