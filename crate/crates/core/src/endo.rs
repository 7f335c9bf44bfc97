//! Endomorphisms and automorphisms of finite abelian groups in the reduced
//! matrix model.
//!
//! For a p-group `Z/p^{a_1} × ... × Z/p^{a_r}` with `a_1 <= ... <= a_r`, an
//! endomorphism is an `r × r` matrix whose row `i` lives mod `p^{a_i}` and whose
//! `(i, j)` entry is divisible by `p^{a_i - a_j}` whenever `a_i > a_j`. It is an
//! automorphism iff its reduction mod `p` is invertible. Groups with several
//! primes carry one such matrix per prime block.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::{Element, GroupSpec, PrimeBlock};
use crate::arith::mod_inverse;
use crate::config::Config;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EndoMatrix {
    p: u64,
    exponents: Vec<u32>,
    /// Row-major, entry `(i, j)` reduced mod `p^{a_i}`.
    entries: Vec<u64>,
}

impl EndoMatrix {
    /// Builds a matrix from rows, reducing entries and checking divisibility.
    pub fn new(p: u64, exponents: &[u32], rows: &[Vec<u64>]) -> Result<Self> {
        let r = exponents.len();
        if exponents.windows(2).any(|w| w[0] > w[1]) || exponents.contains(&0) {
            return Err(Error::invalid(format!("exponents {exponents:?} must be positive and nondecreasing")));
        }
        if rows.len() != r || rows.iter().any(|row| row.len() != r) {
            return Err(Error::invalid(format!("expected a {r}x{r} matrix")));
        }
        let mut entries = Vec::with_capacity(r * r);
        for (i, row) in rows.iter().enumerate() {
            let m = p.pow(exponents[i]);
            for (j, &x) in row.iter().enumerate() {
                let x = x % m;
                if exponents[i] > exponents[j] && !x.is_multiple_of(p.pow(exponents[i] - exponents[j])) {
                    return Err(Error::invalid(format!(
                        "entry ({i},{j}) = {x} must be divisible by {}^{}",
                        p,
                        exponents[i] - exponents[j]
                    )));
                }
                entries.push(x);
            }
        }
        Ok(EndoMatrix { p, exponents: exponents.to_vec(), entries })
    }

    pub fn identity(p: u64, exponents: &[u32]) -> Self {
        let r = exponents.len();
        let mut entries = vec![0; r * r];
        for i in 0..r {
            entries[i * r + i] = 1 % p.pow(exponents[i]);
        }
        EndoMatrix { p, exponents: exponents.to_vec(), entries }
    }

    pub fn zero(p: u64, exponents: &[u32]) -> Self {
        let r = exponents.len();
        EndoMatrix { p, exponents: exponents.to_vec(), entries: vec![0; r * r] }
    }

    /// Multiplication by the integer `k` (e.g. `-1` as `k = p^{a_r} - 1`).
    pub fn scalar(p: u64, exponents: &[u32], k: u64) -> Self {
        let mut m = Self::identity(p, exponents);
        let r = exponents.len();
        for i in 0..r {
            m.entries[i * r + i] = k % p.pow(exponents[i]);
        }
        m
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.dim() + j]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.dim().max(1)).map(<[u64]>::to_vec).collect()
    }

    fn row_modulus(&self, i: usize) -> u64 {
        self.p.pow(self.exponents[i])
    }

    fn same_shape(&self, other: &EndoMatrix) -> Result<()> {
        if self.p != other.p || self.exponents != other.exponents {
            return Err(Error::invalid(format!(
                "shape mismatch: p={} {:?} vs p={} {:?}",
                self.p, self.exponents, other.p, other.exponents
            )));
        }
        Ok(())
    }

    /// Matrix-vector product on raw residues, row `i` mod `p^{a_i}`.
    pub(crate) fn apply_residues(&self, x: &[u64]) -> Vec<u64> {
        let r = self.dim();
        (0..r)
            .map(|i| {
                let m = self.row_modulus(i) as u128;
                let s: u128 = (0..r).map(|j| self.entries[i * r + j] as u128 * x[j] as u128).sum();
                (s % m) as u64
            })
            .collect()
    }

    /// Applies the endomorphism to an element of the p-group it acts on.
    pub fn apply(&self, g: &Element) -> Result<Element> {
        let r = self.dim();
        if g.0.len() != r || g.0.iter().enumerate().any(|(i, &x)| x >= self.row_modulus(i)) {
            return Err(Error::invalid(format!("{g} does not belong to the group of this matrix")));
        }
        Ok(Element(self.apply_residues(&g.0)))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &EndoMatrix) -> Result<EndoMatrix> {
        self.same_shape(other)?;
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &EndoMatrix) -> EndoMatrix {
        let r = self.dim();
        let mut entries = vec![0; r * r];
        for i in 0..r {
            let m = self.row_modulus(i) as u128;
            for k in 0..r {
                let s: u128 = (0..r)
                    .map(|j| self.entries[i * r + j] as u128 * other.entries[j * r + k] as u128)
                    .sum();
                entries[i * r + k] = (s % m) as u64;
            }
        }
        EndoMatrix { p: self.p, exponents: self.exponents.clone(), entries }
    }

    pub fn add(&self, other: &EndoMatrix) -> Result<EndoMatrix> {
        self.same_shape(other)?;
        let r = self.dim();
        let entries = (0..r * r)
            .map(|idx| (self.entries[idx] + other.entries[idx]) % self.row_modulus(idx / r))
            .collect();
        Ok(EndoMatrix { p: self.p, exponents: self.exponents.clone(), entries })
    }

    pub fn pow(&self, mut k: u64) -> EndoMatrix {
        let mut base = self.clone();
        let mut acc = EndoMatrix::identity(self.p, &self.exponents);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose_unchecked(&base);
            }
            base = base.compose_unchecked(&base);
            k >>= 1;
        }
        acc
    }

    /// Reduction mod p as a dense matrix over F_p.
    pub fn reduce_mod_p(&self) -> Vec<Vec<u64>> {
        self.rows().into_iter().map(|row| row.into_iter().map(|x| x % self.p).collect()).collect()
    }

    /// Unit test via Gaussian elimination of the mod-p reduction.
    pub fn is_unit(&self) -> bool {
        rank_mod_p(self.reduce_mod_p(), self.p) == self.dim()
    }

    pub fn is_identity(&self) -> bool {
        *self == EndoMatrix::identity(self.p, &self.exponents)
    }

    /// Mod-p reduction is upper unitriangular.
    pub fn is_unipotent_upper(&self) -> bool {
        let r = self.dim();
        (0..r).all(|i| {
            (0..r).all(|j| {
                let x = self.entries[i * r + j] % self.p;
                if i == j {
                    x == 1
                } else if i > j {
                    x == 0
                } else {
                    true
                }
            })
        })
    }

    /// Inverse of a unit, computed by Gauss-Jordan over `Z/p^{a_r}` on the
    /// integer lift and reduced back row by row.
    pub fn invert(&self) -> Result<EndoMatrix> {
        if !self.is_unit() {
            return Err(Error::Domain("matrix is not a unit".into()));
        }
        let r = self.dim();
        let top = self.p.pow(*self.exponents.last().unwrap_or(&0)) as u128;
        let mut a: Vec<Vec<u128>> = self.rows().into_iter().map(|row| row.into_iter().map(u128::from).collect()).collect();
        let mut inv: Vec<Vec<u128>> = (0..r).map(|i| (0..r).map(|j| u128::from(i == j)).collect()).collect();
        for col in 0..r {
            let pivot = (col..r)
                .find(|&row| !a[row][col].is_multiple_of(self.p as u128))
                .ok_or_else(|| Error::internal("no unit pivot in invertible matrix"))?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let scale = mod_inverse((a[col][col] % top) as u64, top as u64)
                .ok_or_else(|| Error::internal("pivot is not a unit"))? as u128;
            for j in 0..r {
                a[col][j] = a[col][j] * scale % top;
                inv[col][j] = inv[col][j] * scale % top;
            }
            for row in 0..r {
                if row == col || a[row][col] == 0 {
                    continue;
                }
                let f = a[row][col];
                for j in 0..r {
                    a[row][j] = (a[row][j] + top * top - f * a[col][j] % top) % top;
                    inv[row][j] = (inv[row][j] + top * top - f * inv[col][j] % top) % top;
                }
            }
        }
        let rows: Vec<Vec<u64>> = inv.into_iter().map(|row| row.into_iter().map(|x| x as u64).collect()).collect();
        let m = EndoMatrix::new(self.p, &self.exponents, &rows)?;
        if !self.compose_unchecked(&m).is_identity() {
            return Err(Error::internal("computed inverse does not invert"));
        }
        Ok(m)
    }
}

/// Rank of a matrix over F_p.
pub(crate) fn rank_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !m[r][col].is_multiple_of(p)) else { continue };
        m.swap(rank, piv);
        let inv = mod_inverse(m[rank][col] % p, p).expect("nonzero mod prime");
        for j in 0..cols {
            m[rank][j] = m[rank][j] * inv % p;
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_multiple_of(p) {
                let f = m[r][col] % p;
                for j in 0..cols {
                    m[r][j] = (m[r][j] % p + p * p - f * m[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Serialize)]
struct EndoJson<'a> {
    p: u64,
    exponents: &'a [u32],
    rows: Vec<Vec<u64>>,
}

impl Serialize for EndoMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EndoJson { p: self.p, exponents: &self.exponents, rows: self.rows() }.serialize(s)
    }
}

/// An endomorphism of a possibly mixed-order group: one matrix per prime block.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Endomorphism {
    blocks: Vec<EndoMatrix>,
}

impl Endomorphism {
    pub fn from_blocks(group: &GroupSpec, blocks: Vec<EndoMatrix>) -> Result<Self> {
        if blocks.len() != group.blocks().len()
            || blocks.iter().zip(group.blocks()).any(|(m, b)| m.p != b.p || m.exponents != b.exponents)
        {
            return Err(Error::invalid(format!("blocks do not match the prime blocks of {group}")));
        }
        Ok(Endomorphism { blocks })
    }

    pub fn identity(group: &GroupSpec) -> Self {
        Endomorphism { blocks: group.blocks().iter().map(|b| EndoMatrix::identity(b.p, &b.exponents)).collect() }
    }

    /// Multiplication by `k` on every block.
    pub fn scalar(group: &GroupSpec, k: u64) -> Self {
        Endomorphism { blocks: group.blocks().iter().map(|b| EndoMatrix::scalar(b.p, &b.exponents, k)).collect() }
    }

    pub fn blocks(&self) -> &[EndoMatrix] {
        &self.blocks
    }

    fn check_group(&self, group: &GroupSpec) -> Result<()> {
        if self.blocks.len() != group.blocks().len()
            || self.blocks.iter().zip(group.blocks()).any(|(m, b)| m.p != b.p || m.exponents != b.exponents)
        {
            return Err(Error::invalid(format!("endomorphism does not act on {group}")));
        }
        Ok(())
    }

    pub fn apply(&self, group: &GroupSpec, g: &Element) -> Result<Element> {
        self.check_group(group)?;
        if !group.contains(g) {
            return Err(Error::invalid(format!("{g} is not an element of {group}")));
        }
        Ok(self.apply_unchecked(group, g))
    }

    pub(crate) fn apply_unchecked(&self, group: &GroupSpec, g: &Element) -> Element {
        let mut out = Vec::with_capacity(g.0.len());
        for (m, b) in self.blocks.iter().zip(group.blocks()) {
            out.extend(m.apply_residues(&g.0[b.range()]));
        }
        Element(out)
    }

    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism> {
        if self.blocks.len() != other.blocks.len() {
            return Err(Error::invalid("endomorphisms of different groups"));
        }
        Ok(Endomorphism {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.compose(b)).collect::<Result<_>>()?,
        })
    }

    pub(crate) fn compose_unchecked(&self, other: &Endomorphism) -> Endomorphism {
        Endomorphism {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.compose_unchecked(b)).collect(),
        }
    }

    pub fn add(&self, other: &Endomorphism) -> Result<Endomorphism> {
        if self.blocks.len() != other.blocks.len() {
            return Err(Error::invalid("endomorphisms of different groups"));
        }
        Ok(Endomorphism {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.add(b)).collect::<Result<_>>()?,
        })
    }

    pub fn pow(&self, k: u64) -> Endomorphism {
        Endomorphism { blocks: self.blocks.iter().map(|m| m.pow(k)).collect() }
    }

    /// `I + A + ... + A^{k-1}`.
    pub fn geometric_sum(&self, k: u64) -> Endomorphism {
        let mut acc = Endomorphism {
            blocks: self.blocks.iter().map(|m| EndoMatrix::zero(m.p, &m.exponents)).collect(),
        };
        let mut term = Endomorphism {
            blocks: self.blocks.iter().map(|m| EndoMatrix::identity(m.p, &m.exponents)).collect(),
        };
        for _ in 0..k {
            acc = acc.add(&term).expect("same shape");
            term = term.compose_unchecked(self);
        }
        acc
    }

    pub fn is_unit(&self) -> bool {
        self.blocks.iter().all(EndoMatrix::is_unit)
    }

    pub fn is_identity(&self) -> bool {
        self.blocks.iter().all(EndoMatrix::is_identity)
    }

    pub fn invert(&self) -> Result<Endomorphism> {
        Ok(Endomorphism { blocks: self.blocks.iter().map(EndoMatrix::invert).collect::<Result<_>>()? })
    }

    /// Images of the factor generators `e_j`.
    pub fn generator_images(&self, group: &GroupSpec) -> Vec<Element> {
        (0..group.rank()).map(|j| self.apply_unchecked(group, &group.generator(j))).collect()
    }

    /// Rebuilds an endomorphism from the images of the factor generators.
    pub fn from_generator_images(group: &GroupSpec, images: &[Element]) -> Result<Self> {
        if images.len() != group.rank() {
            return Err(Error::invalid("need one image per cyclic factor"));
        }
        let mut blocks = Vec::with_capacity(group.blocks().len());
        for b in group.blocks() {
            let r = b.rank();
            let rows: Vec<Vec<u64>> = (0..r)
                .map(|i| (0..r).map(|j| images[b.offset + j].0[b.offset + i]).collect())
                .collect();
            for img in &images[b.range()] {
                let leaks = img.0.iter().enumerate().any(|(k, &x)| x != 0 && !b.range().contains(&k));
                if leaks {
                    return Err(Error::invalid("generator image leaves its primary component"));
                }
            }
            blocks.push(EndoMatrix::new(b.p, &b.exponents, &rows)?);
        }
        Ok(Endomorphism { blocks })
    }
}

/// One axis of a candidate space: values `offset + step·k` for `k < count`.
#[derive(Clone, Copy)]
struct EntryRange {
    offset: u64,
    step: u64,
    count: u64,
}

/// Candidate matrices of a prime block, enumerated in lexicographic order of
/// their (row-major) entries.
struct CandidateSpace {
    p: u64,
    exponents: Vec<u32>,
    axes: Vec<EntryRange>,
}

impl CandidateSpace {
    /// Every element of the reduced ring.
    fn ring(b: &PrimeBlock) -> Self {
        let r = b.rank();
        let mut axes = Vec::with_capacity(r * r);
        for i in 0..r {
            for j in 0..r {
                let (ai, aj) = (b.exponents[i], b.exponents[j]);
                let step = b.p.pow(ai.saturating_sub(aj));
                axes.push(EntryRange { offset: 0, step, count: b.p.pow(ai.min(aj)) });
            }
        }
        CandidateSpace { p: b.p, exponents: b.exponents.clone(), axes }
    }

    /// Matrices whose mod-p reduction is unipotent upper triangular.
    fn unipotent(b: &PrimeBlock) -> Self {
        let r = b.rank();
        let p = b.p;
        let mut axes = Vec::with_capacity(r * r);
        for i in 0..r {
            let m = p.pow(b.exponents[i]);
            for j in 0..r {
                let (ai, aj) = (b.exponents[i], b.exponents[j]);
                let axis = if i == j {
                    EntryRange { offset: 1, step: p, count: m / p }
                } else if i > j {
                    let step = p.pow(ai.saturating_sub(aj).max(1));
                    EntryRange { offset: 0, step, count: m / step }
                } else {
                    let step = p.pow(ai.saturating_sub(aj));
                    EntryRange { offset: 0, step, count: m / step }
                };
                axes.push(axis);
            }
        }
        CandidateSpace { p, exponents: b.exponents.clone(), axes }
    }

    fn size(&self) -> Option<u64> {
        self.axes.iter().try_fold(1u64, |acc, a| acc.checked_mul(a.count))
    }

    fn matrix(&self, mut idx: u64) -> EndoMatrix {
        let mut entries = vec![0; self.axes.len()];
        for (slot, axis) in entries.iter_mut().zip(&self.axes).rev() {
            *slot = axis.offset + axis.step * (idx % axis.count);
            idx /= axis.count;
        }
        EndoMatrix { p: self.p, exponents: self.exponents.clone(), entries }
    }
}

fn block_label(b: &PrimeBlock) -> String {
    format!("{}-block with exponents {:?}", b.p, b.exponents)
}

fn scan_units(b: &PrimeBlock, space: CandidateSpace, cap: u64) -> Result<Vec<EndoMatrix>> {
    let size = space.size().unwrap_or(u64::MAX);
    if size > cap {
        return Err(Error::Capacity { context: block_label(b), needed: size, cap });
    }
    Ok((0..size)
        .into_par_iter()
        .map(|i| space.matrix(i))
        .filter(EndoMatrix::is_unit)
        .collect())
}

/// All automorphisms of one prime block, sorted.
pub fn block_units(b: &PrimeBlock, cap: u64) -> Result<Vec<EndoMatrix>> {
    scan_units(b, CandidateSpace::ring(b), cap)
}

/// The Sylow p-subgroup of a block's automorphisms: units that reduce to
/// unipotent upper triangular matrices mod p.
pub fn block_sylow(b: &PrimeBlock, cap: u64) -> Result<Vec<EndoMatrix>> {
    scan_units(b, CandidateSpace::unipotent(b), cap)
}

/// A finite group of automorphisms of `group`, listed in canonical order.
#[derive(Debug, Clone)]
pub struct AutGroup {
    group: GroupSpec,
    elements: Vec<Endomorphism>,
}

impl AutGroup {
    /// Wraps a list of automorphisms, sorting and deduplicating it.
    pub fn from_elements(group: &GroupSpec, mut elements: Vec<Endomorphism>) -> Result<Self> {
        for e in &elements {
            e.check_group(group)?;
            if !e.is_unit() {
                return Err(Error::invalid("AutGroup elements must be units"));
            }
        }
        elements.sort();
        elements.dedup();
        Ok(AutGroup { group: group.clone(), elements })
    }

    fn product_of_blocks(group: &GroupSpec, per_block: Vec<Vec<EndoMatrix>>) -> Self {
        let mut elements = vec![Endomorphism { blocks: Vec::new() }];
        for units in per_block {
            elements = elements
                .iter()
                .flat_map(|e| {
                    units.iter().map(move |u| {
                        let mut blocks = e.blocks.clone();
                        blocks.push(u.clone());
                        Endomorphism { blocks }
                    })
                })
                .collect();
        }
        elements.sort();
        AutGroup { group: group.clone(), elements }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Endomorphism] {
        &self.elements
    }

    pub fn contains(&self, a: &Endomorphism) -> bool {
        self.elements.binary_search(a).is_ok()
    }

    /// Exhaustive closure check; quadratic in the order.
    pub fn verify_closure(&self) -> Result<()> {
        let set: HashSet<&Endomorphism> = self.elements.iter().collect();
        for a in &self.elements {
            let inv = a.invert()?;
            if !set.contains(&inv) {
                return Err(Error::internal("aut list not closed under inverse"));
            }
            for b in &self.elements {
                if !set.contains(&a.compose_unchecked(b)) {
                    return Err(Error::internal("aut list not closed under composition"));
                }
            }
        }
        Ok(())
    }
}

/// `Aut(N)` as the product of the unit groups of its prime blocks.
pub fn enumerate_aut(group: &GroupSpec, cfg: &Config) -> Result<AutGroup> {
    let per_block = group.blocks().iter().map(|b| block_units(b, cfg.aut_cap)).collect::<Result<Vec<_>>>()?;
    Ok(AutGroup::product_of_blocks(group, per_block))
}

/// The unipotent Sylow p-subgroup of `Aut(N)` for a p-group `N`.
pub fn sylow_p_aut(group: &GroupSpec, p: u64, cfg: &Config) -> Result<Vec<EndoMatrix>> {
    match group.blocks() {
        [] => Ok(Vec::new()),
        [b] if b.p == p => block_sylow(b, cfg.aut_cap),
        _ => Err(Error::invalid(format!("{group} is not a {p}-group"))),
    }
}

/// `Aut(N_odd) × P` where `P` is the unipotent Sylow 2-subgroup of
/// `Aut(N_2)`. Every 2-subgroup of `Hol(N)` is conjugate into
/// `N ⋊ (Aut(N_odd) × P)`.
pub fn sylow_restricted_aut(group: &GroupSpec, cfg: &Config) -> Result<AutGroup> {
    let per_block = group
        .blocks()
        .iter()
        .map(|b| if b.p == 2 { block_sylow(b, cfg.aut_cap) } else { block_units(b, cfg.aut_cap) })
        .collect::<Result<Vec<_>>>()?;
    Ok(AutGroup::product_of_blocks(group, per_block))
}

/// `|Aut(N)|` from the closed formula of Hillar and Rhea, block by block.
pub fn aut_group_order(group: &GroupSpec) -> u64 {
    group.blocks().iter().map(block_aut_order).product()
}

fn block_aut_order(b: &PrimeBlock) -> u64 {
    let p = b.p as u128;
    let e = &b.exponents;
    let r = e.len();
    // d_k = max{l : e_l = e_k}, c_k = min{l : e_l = e_k}, 1-based.
    let d = |k: usize| (k..r).take_while(|&l| e[l] == e[k]).last().unwrap() + 1;
    let c = |k: usize| (0..=k).rev().take_while(|&l| e[l] == e[k]).last().unwrap() + 1;
    let mut total: u128 = 1;
    for k in 0..r {
        total *= p.pow(d(k) as u32) - p.pow(k as u32);
    }
    for j in 0..r {
        total *= p.pow(e[j] * (r - d(j)) as u32);
    }
    for i in 0..r {
        total *= p.pow((e[i] - 1) * (r - c(i) + 1) as u32);
    }
    total as u64
}
