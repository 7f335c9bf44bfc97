//! Finite abelian groups given by prime-power cyclic factors.
//!
//! A [`GroupSpec`] is always kept in one canonical shape: factors grouped by
//! prime, odd primes first in ascending order and the prime 2 last, with
//! exponents nondecreasing inside each prime. Two isomorphic inputs therefore
//! produce equal specs, and an element is just a vector of least nonnegative
//! residues, one per factor.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::arith::factorize;
use crate::error::{Error, Result};

/// All factors of one prime, as exponents `1 <= a_1 <= ... <= a_r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeBlock {
    pub p: u64,
    pub exponents: Vec<u32>,
    /// Position of this block's first factor in the full factor list.
    pub offset: usize,
}

impl PrimeBlock {
    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    /// Modulus of the i-th factor of the block.
    pub fn modulus(&self, i: usize) -> u64 {
        self.p.pow(self.exponents[i])
    }

    /// `d` such that the block exponent is `p^d`.
    pub fn exponent_log(&self) -> u32 {
        self.exponents.last().copied().unwrap_or(0)
    }

    pub fn order(&self) -> u64 {
        self.exponents.iter().map(|&a| self.p.pow(a)).product()
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.rank()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupSpec {
    factors: Vec<u64>,
    blocks: Vec<PrimeBlock>,
}

/// An element of a [`GroupSpec`]: one reduced residue per factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Element(pub Vec<u64>);

impl Element {
    pub fn residues(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

fn block_sort_key(p: u64) -> (bool, u64) {
    (p == 2, p)
}

impl GroupSpec {
    /// Canonicalizes a list of cyclic orders into prime-power normal form.
    pub fn new(orders: &[u64]) -> Result<Self> {
        let mut prime_powers: Vec<(u64, u32)> = Vec::new();
        for &m in orders {
            if m < 2 {
                return Err(Error::invalid(format!("cyclic order {m} must be at least 2")));
            }
            prime_powers.extend(factorize(m));
        }
        Ok(Self::from_prime_powers(prime_powers))
    }

    /// The group with one element.
    pub fn trivial() -> Self {
        GroupSpec { factors: Vec::new(), blocks: Vec::new() }
    }

    /// The cyclic group of order `m` (trivial for `m == 1`).
    pub fn cyclic(m: u64) -> Result<Self> {
        if m == 1 {
            return Ok(Self::trivial());
        }
        Self::new(&[m])
    }

    fn from_prime_powers(mut pp: Vec<(u64, u32)>) -> Self {
        pp.sort_by_key(|&(p, a)| (block_sort_key(p), a));
        let mut blocks: Vec<PrimeBlock> = Vec::new();
        let mut factors = Vec::with_capacity(pp.len());
        for (i, (p, a)) in pp.into_iter().enumerate() {
            factors.push(p.pow(a));
            match blocks.last_mut() {
                Some(b) if b.p == p => b.exponents.push(a),
                _ => blocks.push(PrimeBlock { p, exponents: vec![a], offset: i }),
            }
        }
        GroupSpec { factors, blocks }
    }

    /// Direct product `self × other`, re-canonicalized.
    pub fn product(&self, other: &GroupSpec) -> GroupSpec {
        let pp = self
            .blocks
            .iter()
            .chain(other.blocks.iter())
            .flat_map(|b| b.exponents.iter().map(move |&a| (b.p, a)))
            .collect();
        Self::from_prime_powers(pp)
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn blocks(&self) -> &[PrimeBlock] {
        &self.blocks
    }

    pub fn block(&self, p: u64) -> Option<&PrimeBlock> {
        self.blocks.iter().find(|b| b.p == p)
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn p_rank(&self, p: u64) -> usize {
        self.block(p).map_or(0, PrimeBlock::rank)
    }

    /// Exponent of the p-primary part, `p^{a_r}` (1 if there is none).
    pub fn p_exponent(&self, p: u64) -> u64 {
        self.block(p).map_or(1, |b| p.pow(b.exponent_log()))
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_p_group(&self) -> bool {
        self.blocks.len() <= 1
    }

    pub fn is_cyclic(&self) -> bool {
        self.blocks.iter().all(|b| b.rank() == 1)
    }

    pub fn identity(&self) -> Element {
        Element(vec![0; self.factors.len()])
    }

    /// Validates residues and wraps them as an element.
    pub fn element(&self, residues: &[u64]) -> Result<Element> {
        let e = Element(residues.to_vec());
        self.check(&e)?;
        Ok(e)
    }

    pub fn contains(&self, g: &Element) -> bool {
        g.0.len() == self.factors.len() && g.0.iter().zip(&self.factors).all(|(&r, &m)| r < m)
    }

    fn check(&self, g: &Element) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::invalid(format!("{g} is not an element of {self}")))
        }
    }

    pub fn add(&self, g: &Element, h: &Element) -> Result<Element> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.add_unchecked(g, h))
    }

    pub(crate) fn add_unchecked(&self, g: &Element, h: &Element) -> Element {
        Element(
            g.0.iter()
                .zip(&h.0)
                .zip(&self.factors)
                .map(|((&a, &b), &m)| (a + b) % m)
                .collect(),
        )
    }

    pub fn neg(&self, g: &Element) -> Result<Element> {
        self.check(g)?;
        Ok(self.neg_unchecked(g))
    }

    pub(crate) fn neg_unchecked(&self, g: &Element) -> Element {
        Element(g.0.iter().zip(&self.factors).map(|(&a, &m)| (m - a) % m).collect())
    }

    /// `k·g`.
    pub fn scale(&self, k: u64, g: &Element) -> Element {
        Element(
            g.0.iter()
                .zip(&self.factors)
                .map(|(&a, &m)| ((a as u128 * k as u128) % m as u128) as u64)
                .collect(),
        )
    }

    /// Least `k >= 1` with `k·g = 0`.
    pub fn element_order(&self, g: &Element) -> u64 {
        g.0.iter()
            .zip(&self.factors)
            .map(|(&a, &m)| m / num_integer::gcd(a, m))
            .fold(1, num_integer::lcm)
    }

    /// Position of `g` in lexicographic order (first factor most significant).
    pub fn index_of(&self, g: &Element) -> usize {
        g.0.iter()
            .zip(&self.factors)
            .fold(0usize, |acc, (&r, &m)| acc * m as usize + r as usize)
    }

    pub fn element_at(&self, mut idx: usize) -> Element {
        let mut res = vec![0; self.factors.len()];
        for (slot, &m) in res.iter_mut().zip(&self.factors).rev() {
            *slot = (idx % m as usize) as u64;
            idx /= m as usize;
        }
        Element(res)
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order() as usize).map(move |i| self.element_at(i))
    }

    /// The unit vector of factor `j`.
    pub fn generator(&self, j: usize) -> Element {
        let mut e = self.identity();
        e.0[j] = 1;
        e
    }

    /// `N = N_s × N_2` with the bijection between their coordinates.
    pub fn sylow_decompose(&self) -> (GroupSpec, GroupSpec, Splitter) {
        let odd_len: usize = self.blocks.iter().filter(|b| b.p != 2).map(PrimeBlock::rank).sum();
        let odd = GroupSpec::from_prime_powers(
            self.blocks
                .iter()
                .filter(|b| b.p != 2)
                .flat_map(|b| b.exponents.iter().map(move |&a| (b.p, a)))
                .collect(),
        );
        let two = GroupSpec::from_prime_powers(
            self.block(2)
                .map(|b| b.exponents.iter().map(|&a| (2, a)).collect())
                .unwrap_or_default(),
        );
        (odd, two, Splitter { odd_len })
    }

    pub fn odd_part(&self) -> GroupSpec {
        self.sylow_decompose().0
    }

    pub fn two_part(&self) -> GroupSpec {
        self.sylow_decompose().1
    }

    /// Display form used in printed tables, e.g. `C_2×C_8`.
    pub fn math_name(&self) -> String {
        if self.is_trivial() {
            return "1".to_string();
        }
        self.factors
            .iter()
            .map(|m| if *m < 10 { format!("C_{m}") } else { format!("C_{{{m}}}") })
            .collect::<Vec<_>>()
            .join("×")
    }
}

/// Coordinate bijection `N ↔ N_s × N_2`.
#[derive(Debug, Clone, Copy)]
pub struct Splitter {
    odd_len: usize,
}

impl Splitter {
    pub fn split(&self, g: &Element) -> (Element, Element) {
        (Element(g.0[..self.odd_len].to_vec()), Element(g.0[self.odd_len..].to_vec()))
    }

    pub fn join(&self, odd: &Element, two: &Element) -> Element {
        let mut v = odd.0.clone();
        v.extend_from_slice(&two.0);
        Element(v)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "C1");
        }
        let parts: Vec<String> = self.factors.iter().map(|m| format!("C{m}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Accepts `c2xc8`, `C3 x C2 x C4` or `[3,2,8]`.
    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |reason: &str| Error::Parse { what: s.to_string(), reason: reason.to_string() };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
        if compact.is_empty() {
            return Err(parse_err("empty group spec"));
        }
        let orders: Vec<u64> = if let Some(inner) = compact.strip_prefix('[') {
            let inner = inner.strip_suffix(']').ok_or_else(|| parse_err("missing closing bracket"))?;
            inner
                .split(',')
                .map(|t| t.parse::<u64>().map_err(|_| parse_err("expected integers")))
                .collect::<Result<_>>()?
        } else {
            compact
                .split(['x', '×', '*'])
                .map(|t| {
                    t.strip_prefix('c')
                        .ok_or_else(|| parse_err("factors look like c<order>"))?
                        .parse::<u64>()
                        .map_err(|_| parse_err("bad cyclic order"))
                })
                .collect::<Result<_>>()?
        };
        GroupSpec::new(&orders)
    }
}
