//! Passing between `N = N_s × N_2` and its Sylow 2-part.
//!
//! A regular quaternion or dihedral subgroup of `Hol(N)` with `N_s` cyclic of
//! odd order `s` is determined by a regular subgroup `H` of `Hol(N_2)` of the
//! same family and a homomorphism `τ: H → {±1} ⊂ Aut(N_s)`. The subgroup is
//! `{(a, τ(h), h) : a ∈ N_s, h ∈ H}`, acting by `(c, d) ↦ (τ(h) c + a, h(d))`.

use rayon::prelude::*;

use crate::abelian::GroupSpec;
use crate::config::Config;
use crate::counts::best_census;
use crate::endo::{aut_group_order, EndoMatrix, Endomorphism};
use crate::enumerate::{census, is_regular, Census, ClassSummary, Method, RegularSubgroup};
use crate::error::{Error, Result};
use crate::finite::FiniteGroup;
use crate::presentations::{recognize, Family, TargetKind};
use crate::table::{AutTable, Code};

/// A surjection `H → C2`, stored as its kernel. Elements outside the kernel
/// act on the odd part by inversion.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TauMap {
    kernel: Vec<Code>,
}

impl TauMap {
    /// Sorted codes of the kernel.
    pub fn kernel(&self) -> &[Code] {
        &self.kernel
    }

    pub fn inverts(&self, h: Code) -> bool {
        self.kernel.binary_search(&h).is_err()
    }

    /// `β·τ`, the map `h ↦ τ(β^{-1} h β)`.
    pub fn conjugate(&self, table: &AutTable, alpha: u32) -> TauMap {
        TauMap { kernel: table.conjugate_set(alpha, &self.kernel) }
    }
}

fn subgroup_group(table: &AutTable, codes: &[Code]) -> Result<FiniteGroup> {
    FiniteGroup::from_elements(codes, |&a, &b| table.hmul(a, b))
}

/// `C_3 ⋊ H` where elements outside `kernel` invert `C_3`. Elements are
/// `(a, i)` packed as `3 i + a`.
fn odd_extension(h: &FiniteGroup, kernel: &[u32]) -> Result<FiniteGroup> {
    let m = h.order();
    let mut inverting = vec![true; m];
    for &k in kernel {
        inverting[k as usize] = false;
    }
    let size = 3 * m;
    let mut table = vec![0u32; size * size];
    for x in 0..size {
        let (a, i) = (x % 3, x / 3);
        for y in 0..size {
            let (b, j) = (y % 3, y / 3);
            let tb = if inverting[i] { (3 - b) % 3 } else { b };
            let k = h.mul(i as u32, j as u32) as usize;
            table[x * size + y] = (3 * k + (a + tb) % 3) as u32;
        }
    }
    FiniteGroup::from_table(size, table)
}

/// The maps `τ` for which `N_s ⋊_τ H` is again of the family of `H`. The set
/// does not depend on `s`, so it is computed with `s = 3`.
pub fn tau_set(table2: &AutTable, h: &RegularSubgroup) -> Result<Vec<TauMap>> {
    let kind = h.kind();
    if !h.len().is_multiple_of(2) {
        return Err(Error::invalid(format!("subgroup of odd order {}", h.len())));
    }
    if kind.s != 1 {
        return Err(Error::invalid(format!("{kind} is not a 2-group")));
    }
    let fg = subgroup_group(table2, h.key())?;
    let want = kind.with_s(3);
    let mut out = Vec::new();
    for kernel in fg.index_two_subgroups() {
        let ext = odd_extension(&fg, &kernel)?;
        if recognize(&ext).map(|(k, _)| k) == Some(want) {
            let mut codes: Vec<Code> = kernel.iter().map(|&i| h.key()[i as usize]).collect();
            codes.sort_unstable();
            out.push(TauMap { kernel: codes });
        }
    }
    Ok(out)
}

fn check_parts(table: &AutTable, table2: &AutTable) -> Result<GroupSpec> {
    let group = table.group();
    let (odd, two, _) = group.sylow_decompose();
    if &two != table2.group() {
        return Err(Error::invalid(format!("{} is not the 2-part of {group}", table2.group())));
    }
    if !odd.is_cyclic() && !odd.is_trivial() {
        return Err(Error::invalid(format!("odd part {odd} is not cyclic")));
    }
    Ok(odd)
}

/// The regular subgroup of `Hol(N_s × N_2)` attached to `(H, τ)`. `table`
/// indexes `Aut(N)` and `table2` indexes `Aut(N_2)`.
pub fn semidirect_subgroup(table: &AutTable, table2: &AutTable, h: &RegularSubgroup, tau: &TauMap) -> Result<RegularSubgroup> {
    let odd = check_parts(table, table2)?;
    if odd.is_trivial() {
        return Ok(h.clone());
    }
    let group = table.group();
    let (_, _, split) = group.sylow_decompose();
    let s = odd.order();
    let odd_elements: Vec<_> = odd.elements().collect();
    let mut key = Vec::with_capacity(h.len() * s as usize);
    for &code in h.key() {
        let (b, w) = table2.unpack(code);
        let sign = if tau.inverts(code) { s - 1 } else { 1 };
        let mut blocks: Vec<EndoMatrix> =
            odd.blocks().iter().map(|blk| EndoMatrix::scalar(blk.p, &blk.exponents, sign)).collect();
        blocks.extend(table2.aut(b).blocks().iter().cloned());
        let aut = Endomorphism::from_blocks(group, blocks)?;
        let a = table
            .index_of_aut(&aut)
            .ok_or_else(|| Error::internal("semidirect automorphism missing from Aut(N)"))?;
        let w = table2.element(w);
        for c in &odd_elements {
            key.push(table.pack(a, table.element_index(&split.join(c, &w))));
        }
    }
    key.sort_unstable();
    if !is_regular(table, &key)? {
        return Err(Error::internal("semidirect subgroup is not regular"));
    }
    let fg = subgroup_group(table, &key)?;
    let want = h.kind().with_s(s);
    match recognize(&fg) {
        Some((kind, (x, y))) if kind == want => {
            let w = (key[x as usize], key[y as usize]);
            Ok(RegularSubgroup::new(kind, key, w))
        }
        other => Err(Error::internal(format!("expected {want}, recognized {:?}", other.map(|(k, _)| k)))),
    }
}

/// Every subgroup `G(H, τ)` for `H` in `hs` and `τ ∈ T_H`, sorted by key.
pub fn semidirect_all(table: &AutTable, table2: &AutTable, hs: &[RegularSubgroup]) -> Result<Vec<RegularSubgroup>> {
    let nested: Vec<Vec<RegularSubgroup>> = hs
        .par_iter()
        .map(|h| tau_set(table2, h)?.iter().map(|t| semidirect_subgroup(table, table2, h, t)).collect())
        .collect::<Result<_>>()?;
    let mut out: Vec<RegularSubgroup> = nested.into_iter().flatten().collect();
    out.sort_by(|a, b| a.key().cmp(b.key()));
    Ok(out)
}

/// Whether `(kind)` is one of the cases where `|T_H| = 3`.
pub fn is_exceptional(kind: TargetKind) -> bool {
    matches!((kind.family, kind.n), (Family::Quaternion, 3) | (Family::Dihedral, 2))
}

/// `(c, r, h)` for `N` of order `2^n s`, `s >= 3`, from the counts of its
/// 2-part. In the two cases with `|T_H| = 3` the class structure is read off
/// a direct enumeration at `s = 3`.
pub fn reduce_counts(group: &GroupSpec, kind: TargetKind, cfg: &Config) -> Result<Census> {
    if kind.order() != group.order() {
        return Err(Error::invalid(format!("{kind} has order {}, but |{group}| = {}", kind.order(), group.order())));
    }
    if kind.s < 3 {
        return Err(Error::invalid(format!("{kind} has no odd part")));
    }
    let (odd, two, _) = group.sylow_decompose();
    if !odd.is_cyclic() {
        // A regular subgroup forces N_s cyclic.
        return Census::from_classes(group, kind, Method::Reduction, Vec::new());
    }
    let base = if is_exceptional(kind) {
        let two_census = best_census(&two, kind.two_part(), cfg)?;
        let small = GroupSpec::new(&[3])?.product(&two);
        let direct = census(&small, kind.with_s(3), cfg)?;
        if direct.r != 3 * two_census.r {
            return Err(Error::internal(format!(
                "r({small}, {}) = {}, expected 3 · {}",
                kind.with_s(3),
                direct.r,
                two_census.r
            )));
        }
        direct
    } else {
        best_census(&two, kind.two_part(), cfg)?
    };
    // Aut(N_s) commutes with ±1, so it fixes every subgroup; orbits are those
    // of the base case.
    let total = aut_group_order(group);
    let classes = base
        .classes
        .iter()
        .map(|c| ClassSummary { orbit: c.orbit, stabilizer: total / c.orbit })
        .collect();
    Census::from_classes(group, kind, Method::Reduction, classes)
}
