//! Indexed form of a group of automorphisms and of the holomorph it spans.
//!
//! Elements of `N` are identified with their lexicographic index, and
//! automorphisms with their position in a canonically sorted list. A
//! holomorph element `(a, v)` is packed as `a * |N| + v`.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;

use crate::abelian::{Element, GroupSpec};
use crate::endo::{AutGroup, Endomorphism};
use crate::error::{Error, Result};

pub type Code = u64;

/// Dense multiplication tables are kept for groups up to this order.
const DENSE_MUL_LIMIT: usize = 2048;
const DENSE_ADD_LIMIT: usize = 1024;

#[derive(Debug, Clone)]
pub struct AutTable {
    group: GroupSpec,
    n: usize,
    auts: Vec<Endomorphism>,
    /// `perm[a * n + x]` is the index of `A(x)`.
    perm: Vec<u32>,
    gens: Vec<u32>,
    lookup: HashMap<u128, u32>,
    inv: Vec<u32>,
    aut_order: Vec<u32>,
    identity: u32,
    mul: Option<Vec<u32>>,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
    digits: Vec<Vec<u64>>,
}

impl AutTable {
    pub fn new(aut: &AutGroup) -> Result<Self> {
        let group = aut.group().clone();
        let n = group.order() as usize;
        if n > u32::MAX as usize / 2 {
            return Err(Error::Capacity { context: format!("index table for {group}"), needed: n as u64, cap: u32::MAX as u64 / 2 });
        }
        let digits: Vec<Vec<u64>> = group.elements().map(|e| e.0).collect();
        let auts = aut.elements().to_vec();
        let perm: Vec<u32> = auts
            .par_iter()
            .flat_map_iter(|a| {
                let group = &group;
                digits.iter().map(move |x| group.index_of(&a.apply_unchecked(group, &Element(x.clone()))) as u32)
            })
            .collect();
        let gens: Vec<u32> = (0..group.rank()).map(|j| group.index_of(&group.generator(j)) as u32).collect();
        let mut table = AutTable {
            group,
            n,
            auts,
            perm,
            gens,
            lookup: HashMap::new(),
            inv: Vec::new(),
            aut_order: Vec::new(),
            identity: 0,
            mul: None,
            add: None,
            neg: Vec::new(),
            digits,
        };
        table.lookup = (0..table.auts.len() as u32).map(|a| (table.code_of(a), a)).collect();
        let id_code = table.code_of_images(&table.gens.clone());
        table.identity = *table
            .lookup
            .get(&id_code)
            .ok_or_else(|| Error::invalid("automorphism list does not contain the identity"))?;
        table.neg = (0..n)
            .map(|x| table.group.index_of(&table.group.neg_unchecked(&Element(table.digits[x].clone()))) as u32)
            .collect();
        if n <= DENSE_ADD_LIMIT {
            let mut add = vec![0u32; n * n];
            for x in 0..n {
                for y in 0..n {
                    add[x * n + y] = table.add_slow(x as u32, y as u32);
                }
            }
            table.add = Some(add);
        }
        let k = table.auts.len();
        if k <= DENSE_MUL_LIMIT {
            let mut mul = vec![0u32; k * k];
            for a in 0..k as u32 {
                for b in 0..k as u32 {
                    mul[a as usize * k + b as usize] = table.compose_slow(a, b)?;
                }
            }
            table.mul = Some(mul);
        }
        table.inv = (0..k as u32)
            .map(|a| {
                let mut images = vec![0u32; table.gens.len()];
                for x in 0..n as u32 {
                    let y = table.apply(a, x);
                    if let Some(j) = table.gens.iter().position(|&g| g == y) {
                        images[j] = x;
                    }
                }
                table
                    .lookup
                    .get(&table.code_of_images(&images))
                    .copied()
                    .ok_or_else(|| Error::invalid("automorphism list is not closed under inverses"))
            })
            .collect::<Result<_>>()?;
        table.aut_order = (0..k as u32)
            .map(|a| {
                let mut x = a;
                let mut o = 1;
                while x != table.identity {
                    x = table.compose(x, a);
                    o += 1;
                }
                o
            })
            .collect();
        Ok(table)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    /// `|N|`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of automorphisms.
    pub fn len(&self) -> usize {
        self.auts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.auts.is_empty()
    }

    pub fn aut(&self, a: u32) -> &Endomorphism {
        &self.auts[a as usize]
    }

    pub fn auts(&self) -> &[Endomorphism] {
        &self.auts
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn index_of_aut(&self, e: &Endomorphism) -> Option<u32> {
        let images: Vec<u32> = e
            .generator_images(&self.group)
            .iter()
            .map(|g| self.group.index_of(g) as u32)
            .collect();
        self.lookup.get(&self.code_of_images(&images)).copied()
    }

    pub fn element(&self, x: u32) -> Element {
        Element(self.digits[x as usize].clone())
    }

    pub fn element_index(&self, g: &Element) -> u32 {
        self.group.index_of(g) as u32
    }

    fn code_of_images(&self, images: &[u32]) -> u128 {
        images.iter().rev().fold(0u128, |acc, &x| acc * self.n as u128 + x as u128)
    }

    fn code_of(&self, a: u32) -> u128 {
        let base = a as usize * self.n;
        self.gens.iter().rev().fold(0u128, |acc, &g| acc * self.n as u128 + self.perm[base + g as usize] as u128)
    }

    #[inline]
    pub fn apply(&self, a: u32, x: u32) -> u32 {
        self.perm[a as usize * self.n + x as usize]
    }

    fn compose_slow(&self, a: u32, b: u32) -> Result<u32> {
        let code = self
            .gens
            .iter()
            .rev()
            .fold(0u128, |acc, &g| acc * self.n as u128 + self.apply(a, self.apply(b, g)) as u128);
        self.lookup
            .get(&code)
            .copied()
            .ok_or_else(|| Error::invalid("automorphism list is not closed under composition"))
    }

    /// Index of `A ∘ B`.
    #[inline]
    pub fn compose(&self, a: u32, b: u32) -> u32 {
        match &self.mul {
            Some(mul) => mul[a as usize * self.auts.len() + b as usize],
            None => self.compose_slow(a, b).expect("closed automorphism table"),
        }
    }

    /// Whether `A ∘ B = C ∘ D`, compared on generator images.
    #[inline]
    pub fn compose_eq(&self, a: u32, b: u32, c: u32, d: u32) -> bool {
        self.gens.iter().all(|&g| self.apply(a, self.apply(b, g)) == self.apply(c, self.apply(d, g)))
    }

    #[inline]
    pub fn inverse(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn aut_order(&self, a: u32) -> u32 {
        self.aut_order[a as usize]
    }

    fn add_slow(&self, x: u32, y: u32) -> u32 {
        let gx = &self.digits[x as usize];
        let gy = &self.digits[y as usize];
        let sum: Vec<u64> = gx.iter().zip(gy).zip(self.group.factors()).map(|((a, b), m)| (a + b) % m).collect();
        self.group.index_of(&Element(sum)) as u32
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        match &self.add {
            Some(add) => add[x as usize * self.n + y as usize],
            None => self.add_slow(x, y),
        }
    }

    #[inline]
    pub fn neg(&self, x: u32) -> u32 {
        self.neg[x as usize]
    }

    /// Additive order of the element with index `x`.
    pub fn element_order(&self, x: u32) -> u64 {
        self.group.element_order(&Element(self.digits[x as usize].clone()))
    }

    // Holomorph arithmetic on packed codes.

    #[inline]
    pub fn pack(&self, a: u32, v: u32) -> Code {
        a as u64 * self.n as u64 + v as u64
    }

    #[inline]
    pub fn unpack(&self, c: Code) -> (u32, u32) {
        ((c / self.n as u64) as u32, (c % self.n as u64) as u32)
    }

    pub fn hol_identity(&self) -> Code {
        self.pack(self.identity, 0)
    }

    /// `(A, v)(B, w) = (AB, A(w) + v)`.
    #[inline]
    pub fn hmul(&self, x: Code, y: Code) -> Code {
        let (a, v) = self.unpack(x);
        let (b, w) = self.unpack(y);
        self.pack(self.compose(a, b), self.add(self.apply(a, w), v))
    }

    #[inline]
    pub fn hinv(&self, x: Code) -> Code {
        let (a, v) = self.unpack(x);
        let ai = self.inverse(a);
        self.pack(ai, self.neg(self.apply(ai, v)))
    }

    /// Image of the point `p` under the affine map `x`.
    #[inline]
    pub fn happly(&self, x: Code, p: u32) -> u32 {
        let (a, v) = self.unpack(x);
        self.add(self.apply(a, p), v)
    }

    pub fn hpow(&self, x: Code, mut k: u64) -> Code {
        let mut acc = self.hol_identity();
        let mut base = x;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.hmul(acc, base);
            }
            base = self.hmul(base, base);
            k >>= 1;
        }
        acc
    }

    /// `α x α^{-1}` for an automorphism `α`.
    #[inline]
    pub fn conjugate(&self, alpha: u32, alpha_inv: u32, x: Code) -> Code {
        let (a, v) = self.unpack(x);
        self.pack(self.compose(alpha, self.compose(a, alpha_inv)), self.apply(alpha, v))
    }

    /// Sorted codes of `α S α^{-1}`.
    pub fn conjugate_set(&self, alpha: u32, set: &[Code]) -> Vec<Code> {
        let ai = self.inverse(alpha);
        let mut out: Vec<Code> = set.iter().map(|&x| self.conjugate(alpha, ai, x)).collect();
        out.sort_unstable();
        out
    }

    /// Breadth-first closure of `gens` under multiplication, as sorted codes.
    pub fn closure(&self, gens: &[Code], cap: usize) -> Result<Vec<Code>> {
        let id = self.hol_identity();
        let mut seen: HashSet<Code> = HashSet::from([id]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.hmul(x, g);
                if seen.insert(y) {
                    if seen.len() > cap {
                        return Err(Error::Capacity { context: "subgroup closure".into(), needed: seen.len() as u64, cap: cap as u64 });
                    }
                    queue.push_back(y);
                }
            }
        }
        let mut out: Vec<Code> = seen.into_iter().collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Greedy generating set of a subgroup of automorphisms given by indices
    /// (which must be closed), scanning candidates in index order.
    pub fn aut_generators(&self, subgroup: &[u32]) -> Vec<u32> {
        let mut gens: Vec<u32> = Vec::new();
        let mut span: HashSet<u32> = HashSet::from([self.identity]);
        for &c in subgroup {
            if span.len() == subgroup.len() {
                break;
            }
            if span.contains(&c) {
                continue;
            }
            gens.push(c);
            let mut queue: VecDeque<u32> = span.iter().copied().collect();
            while let Some(x) = queue.pop_front() {
                for &g in &gens {
                    let y = self.compose(x, g);
                    if span.insert(y) {
                        queue.push_back(y);
                    }
                }
            }
        }
        gens
    }

    pub fn hol_element(&self, x: Code) -> crate::holomorph::HolElement {
        let (a, v) = self.unpack(x);
        crate::holomorph::HolElement::from_parts(self.aut(a).clone(), self.element(v))
    }

    pub fn code_of_hol(&self, h: &crate::holomorph::HolElement) -> Result<Code> {
        let a = self
            .index_of_aut(h.aut())
            .ok_or_else(|| Error::invalid("automorphism not in table"))?;
        if !self.group.contains(h.trans()) {
            return Err(Error::invalid("translation not in group"));
        }
        Ok(self.pack(a, self.element_index(h.trans())))
    }
}
