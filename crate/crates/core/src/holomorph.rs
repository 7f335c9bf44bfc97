//! The holomorph `Hol(N) = N ⋊ Aut(N)` as affine maps `g ↦ A(g) + v`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::abelian::{Element, GroupSpec};
use crate::arith::ceil_log;
use crate::config::Config;
use crate::endo::{aut_group_order, enumerate_aut, Endomorphism};
use crate::error::{Error, Result};
use crate::table::AutTable;

/// An affine pair `(A, v)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HolElement {
    aut: Endomorphism,
    trans: Element,
}

impl HolElement {
    pub fn new(group: &GroupSpec, aut: Endomorphism, trans: Element) -> Result<Self> {
        if !aut.is_unit() {
            return Err(Error::invalid("linear part is not an automorphism"));
        }
        aut.apply(group, &group.identity())?;
        if !group.contains(&trans) {
            return Err(Error::invalid(format!("{trans} is not an element of {group}")));
        }
        Ok(HolElement { aut, trans })
    }

    pub(crate) fn from_parts(aut: Endomorphism, trans: Element) -> Self {
        HolElement { aut, trans }
    }

    pub fn identity(group: &GroupSpec) -> Self {
        HolElement { aut: Endomorphism::identity(group), trans: group.identity() }
    }

    pub fn translation(group: &GroupSpec, v: Element) -> Result<Self> {
        Self::new(group, Endomorphism::identity(group), v)
    }

    pub fn aut(&self) -> &Endomorphism {
        &self.aut
    }

    pub fn trans(&self) -> &Element {
        &self.trans
    }

    pub fn apply(&self, group: &GroupSpec, g: &Element) -> Result<Element> {
        let image = self.aut.apply(group, g)?;
        group.add(&image, &self.trans)
    }

    /// `(A, v)(B, w) = (AB, A(w) + v)`.
    pub fn compose(&self, group: &GroupSpec, other: &HolElement) -> Result<HolElement> {
        let aut = self.aut.compose(&other.aut)?;
        let trans = group.add(&self.aut.apply(group, &other.trans)?, &self.trans)?;
        Ok(HolElement { aut, trans })
    }

    /// `(A, v)^{-1} = (A^{-1}, -A^{-1}(v))`.
    pub fn invert(&self, group: &GroupSpec) -> Result<HolElement> {
        let aut = self.aut.invert()?;
        let trans = group.neg(&aut.apply(group, &self.trans)?)?;
        Ok(HolElement { aut, trans })
    }

    pub fn pow(&self, group: &GroupSpec, mut k: u64) -> Result<HolElement> {
        let mut acc = HolElement::identity(group);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(group, &base)?;
            }
            base = base.compose(group, &base)?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// `x^k` through `(A^k, (I + A + ... + A^{k-1}) v)`.
    pub fn pow_by_geometric_sum(&self, group: &GroupSpec, k: u64) -> Result<HolElement> {
        let trans = self.aut.geometric_sum(k).apply(group, &self.trans)?;
        Ok(HolElement { aut: self.aut.pow(k), trans })
    }

    /// Least `k >= 1` with `x^k = 1`, found by walking powers until the
    /// encoding returns to that of the identity.
    pub fn order(&self, group: &GroupSpec) -> Result<u64> {
        let id = HolElement::identity(group).encode(group);
        let mut x = self.clone();
        let mut k = 1;
        while x.encode(group) != id {
            x = x.compose(group, self)?;
            k += 1;
        }
        Ok(k)
    }

    /// Mixed-radix packing of the generator images of `A` followed by the
    /// index of `v`. Unique per element of `Hol(N)`.
    pub fn encode(&self, group: &GroupSpec) -> u128 {
        let n = group.order() as u128;
        let aut_code = self
            .aut
            .generator_images(group)
            .iter()
            .rev()
            .fold(0u128, |acc, g| acc * n + group.index_of(g) as u128);
        aut_code * n + group.index_of(&self.trans) as u128
    }
}

/// `p^K` with `K = ⌈log_p(r+1)⌉ + d - 1`, where `r` and `p^d` are the rank
/// and exponent of the p-part of `N`. Every p-element of `Hol(N)` has order
/// at most this.
pub fn exponent_bound(group: &GroupSpec, p: u64) -> u64 {
    let r = group.p_rank(p) as u64;
    let d = group.block(p).map_or(0, |b| b.exponent_log());
    if r == 0 {
        return 1;
    }
    p.pow(ceil_log(p, r + 1) + d - 1)
}

/// `N` together with the indexed table of all of `Aut(N)`.
#[derive(Debug, Clone)]
pub struct Holomorph {
    table: AutTable,
    generators: OnceLock<Vec<u32>>,
}

impl Holomorph {
    pub fn new(group: &GroupSpec, cfg: &Config) -> Result<Self> {
        let aut = enumerate_aut(group, cfg)?;
        Ok(Holomorph { table: AutTable::new(&aut)?, generators: OnceLock::new() })
    }

    pub fn group(&self) -> &GroupSpec {
        self.table.group()
    }

    pub fn table(&self) -> &AutTable {
        &self.table
    }

    pub fn order(&self) -> u64 {
        self.table.n() as u64 * self.table.len() as u64
    }

    pub fn aut_order(&self) -> u64 {
        self.table.len() as u64
    }

    /// A generating set of `Aut(N)`, chosen greedily in canonical order.
    pub fn aut_generators(&self) -> &[u32] {
        self.generators.get_or_init(|| {
            let all: Vec<u32> = (0..self.table.len() as u32).collect();
            self.table.aut_generators(&all)
        })
    }
}

/// Exact census of element orders of `Hol(N)`.
///
/// The order of `(A, v)` is `o · |S v|` where `o` is the order of `A` and
/// `S = I + A + ... + A^{o-1}`, since `(A, v)^o = (I, S v)`.
pub fn order_spectrum(group: &GroupSpec, cfg: &Config) -> Result<BTreeMap<u64, u64>> {
    let size = group.order().saturating_mul(aut_group_order(group));
    if size > cfg.hol_cap {
        return Err(Error::Capacity { context: format!("Hol({group})"), needed: size, cap: cfg.hol_cap });
    }
    let hol = Holomorph::new(group, cfg)?;
    Ok(spectrum_of(&hol))
}

pub fn spectrum_of(hol: &Holomorph) -> BTreeMap<u64, u64> {
    let t = hol.table();
    let group = hol.group();
    let mut counts = BTreeMap::new();
    for a in 0..t.len() as u32 {
        let o = t.aut_order(a) as u64;
        let s = t.aut(a).geometric_sum(o);
        for v in 0..t.n() as u32 {
            let sv = s.apply_unchecked(group, &t.element(v));
            *counts.entry(o * group.element_order(&sv)).or_insert(0) += 1;
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endo::EndoMatrix;

    fn g(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    fn scalar_on_cyclic(n: &GroupSpec, k: u64) -> Endomorphism {
        Endomorphism::scalar(n, k)
    }

    #[test]
    fn apply_examples() {
        let c8 = g("c8");
        let x = HolElement::new(&c8, scalar_on_cyclic(&c8, 3), Element(vec![2])).unwrap();
        assert_eq!(x.apply(&c8, &Element(vec![5])).unwrap(), Element(vec![1]));
        let t = HolElement::translation(&c8, Element(vec![6])).unwrap();
        assert_eq!(t.apply(&c8, &c8.identity()).unwrap(), Element(vec![6]));
        let id = HolElement::identity(&c8);
        for e in c8.elements() {
            assert_eq!(id.apply(&c8, &e).unwrap(), e);
        }
    }

    #[test]
    fn compose_and_invert_examples() {
        let c16 = g("c16");
        let x = HolElement::new(&c16, scalar_on_cyclic(&c16, 15), Element(vec![1])).unwrap();
        assert_eq!(x.invert(&c16).unwrap(), x);
        assert_eq!(x.compose(&c16, &x).unwrap(), HolElement::identity(&c16));
        assert_eq!(x.compose(&c16, &HolElement::identity(&c16)).unwrap(), x);
        let t = HolElement::translation(&c16, Element(vec![5])).unwrap();
        assert_eq!(t.invert(&c16).unwrap(), HolElement::translation(&c16, Element(vec![11])).unwrap());
    }

    #[test]
    fn orders() {
        let c8 = g("c8");
        assert_eq!(HolElement::identity(&c8).order(&c8).unwrap(), 1);
        let t = HolElement::translation(&c8, Element(vec![1])).unwrap();
        assert_eq!(t.order(&c8).unwrap(), 8);
    }

    #[test]
    fn exponent_bound_examples() {
        assert_eq!(exponent_bound(&g("c2xc2xc2xc2"), 2), 8);
        assert_eq!(exponent_bound(&g("c16"), 2), 16);
        // ⌈log_2 3⌉ = 2, so the bound is 16; the true maximum is 8.
        assert_eq!(exponent_bound(&g("c4xc8"), 2), 16);
    }

    #[test]
    fn spectrum_examples() {
        let cfg = Config::default();
        let s = order_spectrum(&g("c4xc8"), &cfg).unwrap();
        assert_eq!(s.get(&16), None);
        assert_eq!(s.keys().max(), Some(&8));

        let s = order_spectrum(&g("c4"), &cfg).unwrap();
        assert_eq!(s.values().sum::<u64>(), 8);
        assert!(s.contains_key(&4));
    }

    /// Orders by walking powers of each element, independent of the
    /// geometric-sum shortcut.
    fn spectrum_by_walking(n: &GroupSpec) -> BTreeMap<u64, u64> {
        let aut = enumerate_aut(n, &Config::default()).unwrap();
        let mut out = BTreeMap::new();
        for a in aut.elements() {
            for v in n.elements() {
                let x = HolElement::new(n, a.clone(), v).unwrap();
                *out.entry(x.order(n).unwrap()).or_insert(0) += 1;
            }
        }
        out
    }

    #[test]
    fn spectrum_agrees_with_power_walk() {
        for spec in ["c3", "c4", "c2xc2", "c8", "c2xc4", "c3xc2xc2", "c9"] {
            let n = g(spec);
            assert_eq!(order_spectrum(&n, &Config::default()).unwrap(), spectrum_by_walking(&n), "{spec}");
        }
        // Hol(C3) is the symmetric group on three points.
        let s3: BTreeMap<u64, u64> = [(1, 1), (2, 3), (3, 2)].into();
        assert_eq!(order_spectrum(&g("c3"), &Config::default()).unwrap(), s3);
    }

    #[test]
    fn spectrum_respects_cap() {
        let cfg = Config { hol_cap: 1000, ..Config::default() };
        assert!(order_spectrum(&g("c2xc2xc2xc2"), &cfg).unwrap_err().is_capacity());
    }

    #[test]
    fn power_formula() {
        let n = g("c2xc8");
        let aut = enumerate_aut(&n, &Config::default()).unwrap();
        for a in aut.elements() {
            for v in [Element(vec![1, 3]), Element(vec![0, 1])] {
                let x = HolElement::new(&n, a.clone(), v).unwrap();
                for k in [2, 4, 8, 16] {
                    assert_eq!(x.pow(&n, k).unwrap(), x.pow_by_geometric_sum(&n, k).unwrap());
                }
            }
        }
    }

    #[test]
    fn mismatched_groups_rejected() {
        let c8 = g("c8");
        let bad = Endomorphism::from_blocks(&g("c2xc2"), vec![EndoMatrix::identity(2, &[1, 1])]).unwrap();
        assert!(HolElement::new(&c8, bad, Element(vec![0])).is_err());
    }
}
