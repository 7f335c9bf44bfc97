//! Closed-form families: `N = C_{2^n}` (n >= 4) and `N = C2 × C_{2^{n-1}}`
//! (n >= 5).
//!
//! Both solvers work directly on the scalar parameters of the generator pair
//! `X = (A, v)`, `Y = (B, w)` and never search all of `Hol(N)`.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::abelian::{Element, GroupSpec};
use crate::arith::mod_inverse;
use crate::endo::{EndoMatrix, Endomorphism};
use crate::enumerate::{Census, ClassSummary, Method};
use crate::error::{Error, Result};
use crate::holomorph::HolElement;
use crate::presentations::{Family, TargetKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StructuredFamily {
    Cyclic,
    Rank2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(untagged)]
pub enum StructuredParams {
    /// `A = α`, `B = β` on `Z/2^n`.
    Cyclic { alpha: u64, beta: u64, v: u64, w: u64 },
    /// `A = [[1, a], [2^{n-2} b, α]]`, `B = [[1, r], [2^{n-2} s, β]]` on
    /// `Z/2 × Z/2^{n-1}`.
    Rank2 { a: u64, b: u64, r: u64, s: u64, alpha: u64, beta: u64, v1: u64, v2: u64, w1: u64, w2: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructuredGeneratorPair {
    pub family: StructuredFamily,
    pub kind: TargetKind,
    pub params: StructuredParams,
}

impl StructuredGeneratorPair {
    pub fn n(&self) -> u32 {
        self.kind.n
    }

    pub fn group(&self) -> GroupSpec {
        family_group(self.family, self.kind.n)
    }

    fn rank2_matrix(&self, top: u64, bottom_left: u64, bottom_right: u64) -> Endomorphism {
        let n = self.kind.n;
        let group = self.group();
        let low = 1u64 << (n - 2);
        let m = EndoMatrix::new(2, &[1, n - 1], &[vec![1, top], vec![low * bottom_left, bottom_right]])
            .expect("parameters satisfy the divisibility condition");
        Endomorphism::from_blocks(&group, vec![m]).expect("single 2-block")
    }

    pub fn x(&self) -> HolElement {
        let group = self.group();
        match self.params {
            StructuredParams::Cyclic { alpha, v, .. } => {
                HolElement::new(&group, Endomorphism::scalar(&group, alpha), Element(vec![v])).expect("unit")
            }
            StructuredParams::Rank2 { a, b, alpha, v1, v2, .. } => {
                HolElement::new(&group, self.rank2_matrix(a, b, alpha), Element(vec![v1, v2])).expect("unit")
            }
        }
    }

    pub fn y(&self) -> HolElement {
        let group = self.group();
        match self.params {
            StructuredParams::Cyclic { beta, w, .. } => {
                HolElement::new(&group, Endomorphism::scalar(&group, beta), Element(vec![w])).expect("unit")
            }
            StructuredParams::Rank2 { r, s, beta, w1, w2, .. } => {
                HolElement::new(&group, self.rank2_matrix(r, s, beta), Element(vec![w1, w2])).expect("unit")
            }
        }
    }

    /// `{X^i, X^i Y}`, sorted.
    pub fn subgroup(&self) -> Vec<HolElement> {
        coset_union(&self.group(), &self.x(), &self.y(), self.kind.half())
    }
}

fn family_group(family: StructuredFamily, n: u32) -> GroupSpec {
    match family {
        StructuredFamily::Cyclic => GroupSpec::new(&[1 << n]),
        StructuredFamily::Rank2 => GroupSpec::new(&[2, 1 << (n - 1)]),
    }
    .expect("valid orders")
}

fn coset_union(group: &GroupSpec, x: &HolElement, y: &HolElement, half: u64) -> Vec<HolElement> {
    let mut out = Vec::with_capacity(2 * half as usize);
    let mut p = HolElement::identity(group);
    for _ in 0..half {
        out.push(p.compose(group, y).expect("same group"));
        out.push(p.clone());
        p = p.compose(group, x).expect("same group");
    }
    out.sort();
    out
}

/// Whether the orbit of `0` under `elems` is all of `N`.
fn is_regular_set(group: &GroupSpec, elems: &[HolElement]) -> bool {
    let zero = group.identity();
    let points: HashSet<Element> = elems.iter().map(|e| e.apply(group, &zero).expect("same group")).collect();
    elems.len() as u64 == group.order() && points.len() == elems.len()
}

/// Checks the defining relations on `(X, Y)` directly.
pub fn satisfies_relations(group: &GroupSpec, kind: TargetKind, x: &HolElement, y: &HolElement) -> Result<bool> {
    let half = kind.half();
    let id = HolElement::identity(group);
    if x.pow(group, half)? != id {
        return Ok(false);
    }
    let mut p = id.clone();
    for _ in 1..half {
        p = p.compose(group, x)?;
        if p == id || p == *y {
            return Ok(false);
        }
    }
    if *y == id {
        return Ok(false);
    }
    let target = if kind.is_quaternion() { x.pow(group, half / 2)? } else { id };
    Ok(y.compose(group, x)? == x.invert(group)?.compose(group, y)? && y.compose(group, y)? == target)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructuredClass {
    /// Index into the solution's pairs.
    pub representative: usize,
    pub members: Vec<usize>,
    pub orbit_size: u64,
    pub stabilizer_order: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StructuredSolution {
    pub family: StructuredFamily,
    pub kind: TargetKind,
    /// Cyclic: every regular subgroup. Rank 2: the fundamental subgroups.
    pub pairs: Vec<StructuredGeneratorPair>,
    pub classes: Vec<StructuredClass>,
    pub r: u64,
    pub c: u64,
}

impl StructuredSolution {
    pub fn group(&self) -> GroupSpec {
        family_group(self.family, self.kind.n)
    }

    pub fn census(&self) -> Result<Census> {
        let classes = self
            .classes
            .iter()
            .map(|c| ClassSummary { orbit: c.orbit_size, stabilizer: c.stabilizer_order })
            .collect();
        Census::from_classes(&self.group(), self.kind, Method::Structured, classes)
    }

    /// Every regular subgroup, obtained by conjugating the class
    /// representatives by all of `Aut(N)`. Each is a sorted element list.
    pub fn all_subgroups(&self) -> Vec<Vec<HolElement>> {
        let group = self.group();
        let auts = family_auts(self.family, self.kind.n);
        let mut out: BTreeSet<Vec<HolElement>> = BTreeSet::new();
        for class in &self.classes {
            let rep = self.pairs[class.representative].subgroup();
            for alpha in &auts {
                let mut conj: Vec<HolElement> = rep.iter().map(|e| conjugate(&group, alpha, e)).collect();
                conj.sort();
                out.insert(conj);
            }
        }
        out.into_iter().collect()
    }
}

/// `α x α^{-1}` for `α ∈ Aut(N)`.
fn conjugate(group: &GroupSpec, alpha: &Endomorphism, x: &HolElement) -> HolElement {
    let a = HolElement::new(group, alpha.clone(), group.identity()).expect("unit");
    let ai = a.invert(group).expect("unit");
    a.compose(group, x).and_then(|t| t.compose(group, &ai)).expect("same group")
}

/// `Aut(C_{2^n})` as scalars, or `Aut(C2 × C_{2^{n-1}})` as the matrices
/// `[[1, p], [2^{n-2} q, γ]]`.
fn family_auts(family: StructuredFamily, n: u32) -> Vec<Endomorphism> {
    let group = family_group(family, n);
    match family {
        StructuredFamily::Cyclic => (1..1u64 << n).step_by(2).map(|g| Endomorphism::scalar(&group, g)).collect(),
        StructuredFamily::Rank2 => {
            let low = 1u64 << (n - 2);
            let mut out = Vec::new();
            for p in 0..2 {
                for q in 0..2 {
                    for gamma in (1..1u64 << (n - 1)).step_by(2) {
                        let m = EndoMatrix::new(2, &[1, n - 1], &[vec![1, p], vec![low * q, gamma]]).expect("valid");
                        out.push(Endomorphism::from_blocks(&group, vec![m]).expect("single block"));
                    }
                }
            }
            out
        }
    }
}

/// Groups the subgroups into `Aut(N)`-classes. Two subgroups are conjugate by
/// `α` iff `αXα^{-1}` and `αYα^{-1}` lie in the second one.
fn classify_pairs(family: StructuredFamily, n: u32, pairs: &[StructuredGeneratorPair]) -> Vec<StructuredClass> {
    let group = family_group(family, n);
    let auts = family_auts(family, n);
    let sets: Vec<HashSet<HolElement>> = pairs.iter().map(|p| p.subgroup().into_iter().collect()).collect();
    let mut parent: Vec<usize> = (0..pairs.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut stabilizers = vec![0u64; pairs.len()];
    for (i, pair) in pairs.iter().enumerate() {
        let (x, y) = (pair.x(), pair.y());
        for alpha in &auts {
            let (cx, cy) = (conjugate(&group, alpha, &x), conjugate(&group, alpha, &y));
            for (j, set) in sets.iter().enumerate() {
                if set.contains(&cx) && set.contains(&cy) {
                    if i == j {
                        stabilizers[i] += 1;
                    }
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut classes: Vec<StructuredClass> = Vec::new();
    for i in 0..pairs.len() {
        let root = find(&mut parent, i);
        match classes.iter_mut().find(|c| c.representative == root) {
            Some(c) => c.members.push(i),
            None => classes.push(StructuredClass {
                representative: root,
                members: vec![i],
                orbit_size: auts.len() as u64 / stabilizers[root],
                stabilizer_order: stabilizers[root],
            }),
        }
    }
    classes
}

fn family_kind(family: Family, n: u32) -> Result<TargetKind> {
    TargetKind::new(family, n, 1)
}

/// Regular subgroups of `Hol(C_{2^n})` of the given family, `n >= 4`.
pub fn solve_cyclic(n: u32, family: Family) -> Result<StructuredSolution> {
    if n < 4 {
        return Err(Error::Delegate(format!("C_{} (cyclic solver needs n >= 4)", 1u64 << n)));
    }
    if n > 40 {
        return Err(Error::OutOfRange(format!("n = {n}")));
    }
    let kind = family_kind(family, n)?;
    let q = 1u64 << n;
    let half = q / 2;
    let mul = |x: (u64, u64), y: (u64, u64)| (x.0 * y.0 % q, (x.0 * y.1 + x.1) % q);
    let involutions: Vec<u64> = (1..q).step_by(2).filter(|&a| a * a % q == 1).collect();
    let target = if family == Family::Quaternion { half } else { 0 };

    let mut visited: HashSet<(u64, u64)> = HashSet::new();
    let mut found: BTreeSet<Vec<(u64, u64)>> = BTreeSet::new();
    let mut pairs = Vec::new();
    for &alpha in &involutions {
        for v in 0..q {
            if (1 + alpha) * v % 8 != 4 || visited.contains(&(alpha, v)) {
                continue;
            }
            let x = (alpha, v);
            // confirm X has order 2^{n-1} and a free orbit through 0
            let mut p = (1u64, 0u64);
            let mut free = true;
            for i in 1..=half {
                p = mul(p, x);
                if i < half && p.1 == 0 {
                    free = false;
                }
                if i % 2 == 1 && i < half {
                    visited.insert(p);
                }
            }
            if !free || p != (1, 0) {
                continue;
            }
            let powers: Vec<(u64, u64)> = (0..half).scan((1u64, 0u64), |acc, _| {
                let cur = *acc;
                *acc = mul(*acc, x);
                Some(cur)
            })
            .collect();
            let mut covered: HashSet<(u64, u64)> = HashSet::new();
            for &beta in &involutions {
                for w in 0..q {
                    let rel1 = (alpha + beta) % q * v % q == (alpha + q - 1) % q * w % q;
                    let rel2 = (1 + beta) * w % q == target;
                    if !rel1 || !rel2 || covered.contains(&(beta, w)) {
                        continue;
                    }
                    let y = (beta, w);
                    let coset: Vec<(u64, u64)> = powers.iter().map(|&p| mul(p, y)).collect();
                    covered.extend(coset.iter().copied());
                    let mut elems: Vec<(u64, u64)> = powers.iter().copied().chain(coset).collect();
                    let translations: HashSet<u64> = elems.iter().map(|e| e.1).collect();
                    if translations.len() as u64 != q {
                        continue;
                    }
                    elems.sort_unstable();
                    if found.insert(elems) {
                        pairs.push(StructuredGeneratorPair {
                            family: StructuredFamily::Cyclic,
                            kind,
                            params: StructuredParams::Cyclic { alpha, beta, v, w },
                        });
                    }
                }
            }
        }
    }
    finish(StructuredFamily::Cyclic, kind, pairs, None)
}

fn finish(
    family: StructuredFamily,
    kind: TargetKind,
    pairs: Vec<StructuredGeneratorPair>,
    expected_r: Option<u64>,
) -> Result<StructuredSolution> {
    let group = family_group(family, kind.n);
    for p in &pairs {
        if !satisfies_relations(&group, kind, &p.x(), &p.y())? || !is_regular_set(&group, &p.subgroup()) {
            return Err(Error::internal(format!("structured pair {:?} does not give a regular {kind}", p.params)));
        }
    }
    let classes = classify_pairs(family, kind.n, &pairs);
    let r: u64 = classes.iter().map(|c| c.orbit_size).sum();
    if family == StructuredFamily::Cyclic && r != pairs.len() as u64 {
        return Err(Error::internal("orbit sizes do not add up to the number of subgroups"));
    }
    if let Some(e) = expected_r {
        if e != r {
            return Err(Error::internal(format!("orbit count {r} disagrees with generator count {e}")));
        }
    }
    Ok(StructuredSolution { family, kind, c: classes.len() as u64, pairs, classes, r })
}

/// `α` with `α ≡ 1 (mod 4)` and `α^2 ≡ 1 + 2^{n-2}·t (mod 2^{n-1})`.
fn rank2_alphas(n: u32, t: u64) -> Vec<u64> {
    let m = 1u64 << (n - 1);
    let low = 1u64 << (n - 2);
    (1..m).step_by(4).filter(|&a| a * a % m == (1 + low * t) % m).collect()
}

/// Number of `X` that lie in some regular subgroup of the family: `a, b, v1`
/// free, `v2` odd, and `α` as in [`rank2_alphas`] with `t = a·s`.
pub fn rank2_x_count(n: u32, family: Family) -> u64 {
    let s = u64::from(family == Family::Quaternion);
    let m = 1u64 << (n - 1);
    let mut count = 0;
    for a in 0..2 {
        for _b in 0..2 {
            let alphas = rank2_alphas(n, a * s).len() as u64;
            for _v1 in 0..2 {
                count += alphas * (1..m).step_by(2).count() as u64;
            }
        }
    }
    count
}

/// Regular subgroups of `Hol(C2 × C_{2^{n-1}})`, `n >= 5`.
///
/// The fundamental subgroups have `v = (0, 1)`, `w = (1, 0)`; for each
/// `(a, b, α)` the remaining parameters `(r, s, β)` of `Y` are found by
/// scanning and must be unique.
pub fn solve_rank2(n: u32, family: Family) -> Result<StructuredSolution> {
    if n < 5 {
        return Err(Error::Delegate(format!("C2xC{} (rank-2 solver needs n >= 5)", 1u64 << (n - 1))));
    }
    if n > 40 {
        return Err(Error::OutOfRange(format!("n = {n}")));
    }
    let kind = family_kind(family, n)?;
    let group = family_group(StructuredFamily::Rank2, n);
    let m = 1u64 << (n - 1);
    let s_kind = u64::from(family == Family::Quaternion);
    let mut pairs = Vec::new();
    for a in 0..2u64 {
        for b in 0..2u64 {
            for alpha in rank2_alphas(n, a * s_kind) {
                let mut solutions = Vec::new();
                for r in 0..2u64 {
                    for s in 0..2u64 {
                        for beta in (1..m).step_by(2) {
                            let pair = StructuredGeneratorPair {
                                family: StructuredFamily::Rank2,
                                kind,
                                params: StructuredParams::Rank2 { a, b, r, s, alpha, beta, v1: 0, v2: 1, w1: 1, w2: 0 },
                            };
                            if satisfies_relations(&group, kind, &pair.x(), &pair.y())? {
                                solutions.push(pair);
                            }
                        }
                    }
                }
                if solutions.len() != 1 {
                    return Err(Error::internal(format!(
                        "expected a unique Y for a={a}, b={b}, α={alpha}, found {}",
                        solutions.len()
                    )));
                }
                pairs.extend(solutions);
            }
        }
    }
    let generators_per_subgroup = (1..m).step_by(2).count() as u64;
    let expected = rank2_x_count(n, family) / generators_per_subgroup;
    finish(StructuredFamily::Rank2, kind, pairs, Some(expected))
}

/// Dispatches on the shape of `N`; other groups are delegated.
pub fn solve(group: &GroupSpec, kind: TargetKind) -> Result<StructuredSolution> {
    if kind.s != 1 || !group.is_p_group() || group.order() != kind.order() {
        return Err(Error::Delegate(format!("{group} with {kind}")));
    }
    let n = kind.n;
    if group.is_cyclic() {
        solve_cyclic(n, kind.family)
    } else if group.factors() == [2, 1 << (n - 1)] {
        solve_rank2(n, kind.family)
    } else {
        Err(Error::Delegate(format!("{group} with {kind}")))
    }
}

/// `α^{-1}` modulo `2^{n-1}`, as used in the closed form for `β`.
pub fn rank2_beta_formula(n: u32, a: u64, b: u64, alpha: u64) -> u64 {
    let m = 1u64 << (n - 1);
    let low = 1u64 << (n - 2);
    let inv = mod_inverse(alpha, m).expect("odd");
    (low * b * (1 + a) + m - inv) % m
}
