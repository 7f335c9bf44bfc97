//! Search for regular quaternion and dihedral subgroups of `Hol(N)` and their
//! classification up to conjugacy by `Aut(N)`.
//!
//! A target of order `2^n s` is generated by `X` of order `M = 2^{n-1}s` and
//! `Y` with `YXY^{-1} = X^{-1}` and `Y^2 = X^{M/2}` (quaternion) or `Y^2 = 1`
//! (dihedral). Regularity forces `<X>` to act freely on the orbit of `0`, so
//! candidate `X` are the elements whose orbit through `0` has exactly `M`
//! points and which return to the identity after `M` steps.

use std::collections::{BTreeMap, HashSet, VecDeque};

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::GroupSpec;
use crate::config::Config;
use crate::counts::hgs_count;
use crate::error::{Error, Result};
use crate::holomorph::{exponent_bound, HolElement, Holomorph};
use crate::presentations::TargetKind;
use crate::table::{AutTable, Code};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Full,
    SylowRestricted,
    ExponentBound,
    Structured,
    Reduction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularSubgroup {
    kind: TargetKind,
    key: Vec<Code>,
    witnesses: (Code, Code),
}

impl RegularSubgroup {
    pub(crate) fn new(kind: TargetKind, key: Vec<Code>, witnesses: (Code, Code)) -> Self {
        RegularSubgroup { kind, key, witnesses }
    }

    pub fn kind(&self) -> TargetKind {
        self.kind
    }

    /// Sorted element codes.
    pub fn key(&self) -> &[Code] {
        &self.key
    }

    /// Generators `(X, Y)` satisfying the defining relations.
    pub fn witnesses(&self) -> (Code, Code) {
        self.witnesses
    }

    pub fn len(&self) -> usize {
        self.key.len()
    }

    pub fn is_empty(&self) -> bool {
        self.key.is_empty()
    }

    pub fn elements(&self, table: &AutTable) -> Vec<HolElement> {
        self.key.iter().map(|&c| table.hol_element(c)).collect()
    }

    pub fn conjugate(&self, table: &AutTable, alpha: u32) -> RegularSubgroup {
        let ai = table.inverse(alpha);
        RegularSubgroup {
            kind: self.kind,
            key: table.conjugate_set(alpha, &self.key),
            witnesses: (table.conjugate(alpha, ai, self.witnesses.0), table.conjugate(alpha, ai, self.witnesses.1)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: RegularSubgroup,
    pub orbit_size: u64,
    pub stabilizer_order: u64,
}

/// Whether the translation parts of `set` exhaust `N`.
pub fn is_regular(table: &AutTable, set: &[Code]) -> Result<bool> {
    if set.len() != table.n() {
        return Err(Error::invalid(format!("set has {} elements, |N| = {}", set.len(), table.n())));
    }
    let mut hit = vec![false; table.n()];
    for &x in set {
        let (_, v) = table.unpack(x);
        if std::mem::replace(&mut hit[v as usize], true) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn generate_closure(table: &AutTable, gens: &[Code], cap: usize) -> Result<Vec<Code>> {
    table.closure(gens, cap)
}

/// Indices of `Aut(N_odd) × P`, with `P` the unipotent Sylow 2-subgroup of
/// `Aut(N_2)`.
pub fn sylow_restricted_indices(table: &AutTable) -> Vec<u32> {
    (0..table.len() as u32)
        .filter(|&a| table.aut(a).blocks().iter().all(|m| m.p() != 2 || m.is_unipotent_upper()))
        .collect()
}

fn check_kind(group: &GroupSpec, kind: TargetKind) -> Result<()> {
    if kind.order() != group.order() {
        return Err(Error::invalid(format!("{kind} has order {}, but |{group}| = {}", kind.order(), group.order())));
    }
    Ok(())
}

fn exceeds_exponent_bound(group: &GroupSpec, kind: TargetKind) -> bool {
    let two_part = 1u64 << (kind.n - 1);
    two_part > exponent_bound(group, 2)
}

/// Every regular subgroup of type `kind` inside `N ⋊ S`, where `S` is the
/// automorphism subgroup with indices `allowed`.
pub fn search(table: &AutTable, allowed: &[u32], kind: TargetKind) -> Vec<RegularSubgroup> {
    let n = table.n();
    let m = kind.half();
    let mut visited = vec![false; table.len() * n];
    let mut reps = Vec::new();
    for &a in allowed {
        if !m.is_multiple_of(table.aut_order(a) as u64) {
            continue;
        }
        for v in 0..n as u32 {
            let x = table.pack(a, v);
            if visited[x as usize] {
                continue;
            }
            let mut p = 0u32;
            let mut free = true;
            for k in 1..=m {
                p = table.add(table.apply(a, p), v);
                if p == 0 && k < m {
                    free = false;
                    break;
                }
            }
            if !free || p != 0 {
                continue;
            }
            let mut xp = x;
            for j in 1..m {
                if j.gcd(&m) == 1 {
                    visited[xp as usize] = true;
                }
                xp = table.hmul(xp, x);
            }
            reps.push(x);
        }
    }

    let per_rep: Vec<Vec<(Vec<Code>, (Code, Code))>> =
        reps.par_iter().map(|&x| subgroups_through(table, allowed, kind, x)).collect();
    let mut found: BTreeMap<Vec<Code>, (Code, Code)> = BTreeMap::new();
    for (key, w) in per_rep.into_iter().flatten() {
        found.entry(key).or_insert(w);
    }
    found.into_iter().map(|(key, w)| RegularSubgroup::new(kind, key, w)).collect()
}

/// Regular subgroups `<X, Y>` of type `kind` for a fixed `X`.
fn subgroups_through(table: &AutTable, allowed: &[u32], kind: TargetKind, x: Code) -> Vec<(Vec<Code>, (Code, Code))> {
    let n = table.n();
    let m = kind.half() as usize;
    let (a, _) = table.unpack(x);
    let a_inv = table.inverse(a);
    let xinv = table.hinv(x);
    let mut powers = Vec::with_capacity(m);
    let mut in_orbit = vec![false; n];
    let mut xp = table.hol_identity();
    for _ in 0..m {
        powers.push(xp);
        in_orbit[table.unpack(xp).1 as usize] = true;
        xp = table.hmul(xp, x);
    }
    let target = if kind.is_quaternion() { powers[m / 2] } else { table.hol_identity() };

    let mut out = Vec::new();
    let mut seen: HashSet<Vec<Code>> = HashSet::new();
    let mut hit = vec![false; n];
    for &b in allowed {
        if !table.compose_eq(b, a, a_inv, b) {
            continue;
        }
        for w in 0..n as u32 {
            if in_orbit[w as usize] {
                continue;
            }
            let y = table.pack(b, w);
            if table.hmul(y, x) != table.hmul(xinv, y) || table.hmul(y, y) != target {
                continue;
            }
            let coset: Vec<Code> = powers.iter().map(|&p| table.hmul(p, y)).collect();
            hit.copy_from_slice(&in_orbit);
            let regular = coset.iter().all(|&c| !std::mem::replace(&mut hit[table.unpack(c).1 as usize], true));
            if !regular {
                continue;
            }
            let mut key: Vec<Code> = powers.iter().copied().chain(coset).collect();
            key.sort_unstable();
            if seen.insert(key.clone()) {
                out.push((key, (x, y)));
            }
        }
    }
    out
}

/// Search over all of `Hol(N)`.
pub fn find_regular_full(hol: &Holomorph, kind: TargetKind) -> Result<Vec<RegularSubgroup>> {
    check_kind(hol.group(), kind)?;
    let all: Vec<u32> = (0..hol.table().len() as u32).collect();
    Ok(search(hol.table(), &all, kind))
}

#[derive(Debug, Clone)]
pub struct SylowSearch {
    /// Subgroups lying inside `N ⋊ (Aut(N_odd) × P)`.
    pub found: Vec<RegularSubgroup>,
    pub classes: Vec<ConjugacyClass>,
    /// The union of the `Aut(N)`-orbits of `found`, sorted by key.
    pub all: Vec<RegularSubgroup>,
}

/// Search inside `N ⋊ (Aut(N_odd) × P)` followed by expansion to full
/// `Aut(N)`-orbits.
pub fn find_regular_sylow(hol: &Holomorph, kind: TargetKind, cfg: &Config) -> Result<SylowSearch> {
    check_kind(hol.group(), kind)?;
    let table = hol.table();
    let found = search(table, &sylow_restricted_indices(table), kind);
    let mut covered: HashSet<Vec<Code>> = HashSet::new();
    let mut classes = Vec::new();
    let mut all = Vec::new();
    for s in &found {
        if covered.contains(&s.key) {
            continue;
        }
        let (orbit, stabilizer) = orbit_of(hol, s, cfg);
        let representative = orbit.iter().min_by(|a, b| a.key.cmp(&b.key)).cloned().expect("nonempty orbit");
        classes.push(ConjugacyClass { representative, orbit_size: orbit.len() as u64, stabilizer_order: stabilizer });
        for o in orbit {
            covered.insert(o.key.clone());
            all.push(o);
        }
    }
    all.sort_by(|a, b| a.key.cmp(&b.key));
    classes.sort_by(|a, b| a.representative.key.cmp(&b.representative.key));
    Ok(SylowSearch { found, classes, all })
}

/// The `Aut(N)`-orbit of `s` and the order of its stabilizer.
fn orbit_of(hol: &Holomorph, s: &RegularSubgroup, cfg: &Config) -> (Vec<RegularSubgroup>, u64) {
    let table = hol.table();
    let total = table.len() as u64;
    if total <= cfg.exhaustive_stabilizer_limit {
        let mut orbit: BTreeMap<Vec<Code>, RegularSubgroup> = BTreeMap::new();
        let mut stabilizer = 0;
        for alpha in 0..table.len() as u32 {
            let c = s.conjugate(table, alpha);
            if c.key == s.key {
                stabilizer += 1;
            }
            orbit.entry(c.key.clone()).or_insert(c);
        }
        return (orbit.into_values().collect(), stabilizer);
    }
    let gens = hol.aut_generators();
    let mut seen: HashSet<Vec<Code>> = HashSet::from([s.key.clone()]);
    let mut orbit = vec![s.clone()];
    let mut queue = VecDeque::from([s.clone()]);
    while let Some(t) = queue.pop_front() {
        for &g in gens {
            let c = t.conjugate(table, g);
            if seen.insert(c.key.clone()) {
                orbit.push(c.clone());
                queue.push_back(c);
            }
        }
    }
    let stabilizer = total / orbit.len() as u64;
    (orbit, stabilizer)
}

/// Partitions a conjugation-closed list into `Aut(N)`-orbits. Classes are
/// listed by their least key, which is also the representative.
pub fn classify(hol: &Holomorph, subgroups: &[RegularSubgroup], cfg: &Config) -> Result<Vec<ConjugacyClass>> {
    let mut remaining: BTreeMap<&[Code], &RegularSubgroup> = subgroups.iter().map(|s| (s.key(), s)).collect();
    if remaining.len() != subgroups.len() {
        return Err(Error::invalid("duplicate subgroups in input"));
    }
    for s in subgroups {
        if s.key.iter().any(|&c| table_bound(hol.table(), c)) {
            return Err(Error::invalid("subgroup does not live in this holomorph"));
        }
    }
    let mut classes = Vec::new();
    while let Some((_, &s)) = remaining.first_key_value() {
        let (orbit, stabilizer) = orbit_of(hol, s, cfg);
        for o in &orbit {
            if remaining.remove(o.key.as_slice()).is_none() {
                return Err(Error::invalid("subgroup list is not closed under conjugation"));
            }
        }
        let orbit_size = orbit.len() as u64;
        if orbit_size * stabilizer != hol.aut_order() {
            return Err(Error::internal("orbit-stabilizer identity failed"));
        }
        classes.push(ConjugacyClass { representative: s.clone(), orbit_size, stabilizer_order: stabilizer });
    }
    Ok(classes)
}

fn table_bound(table: &AutTable, c: Code) -> bool {
    c >= table.len() as u64 * table.n() as u64
}

/// Complete list of regular subgroups of type `kind` and the route used.
pub fn find_regular(hol: &Holomorph, kind: TargetKind, cfg: &Config) -> Result<(Vec<RegularSubgroup>, Method)> {
    check_kind(hol.group(), kind)?;
    if cfg.prune_by_exponent_bound && exceeds_exponent_bound(hol.group(), kind) {
        return Ok((Vec::new(), Method::ExponentBound));
    }
    if hol.order() <= cfg.full_search_limit {
        Ok((find_regular_full(hol, kind)?, Method::Full))
    } else {
        Ok((find_regular_sylow(hol, kind, cfg)?.all, Method::SylowRestricted))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassSummary {
    pub orbit: u64,
    pub stabilizer: u64,
}

/// The `(c, r, h)` census of one `(N, G)` pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Census {
    pub schema: &'static str,
    #[serde(rename = "N")]
    pub group: GroupSpec,
    #[serde(rename = "G")]
    pub kind: TargetKind,
    pub c: u64,
    pub r: u64,
    pub h: u64,
    pub method: Method,
    pub classes: Vec<ClassSummary>,
}

impl Census {
    pub fn from_classes(group: &GroupSpec, kind: TargetKind, method: Method, classes: Vec<ClassSummary>) -> Result<Self> {
        let r = classes.iter().map(|c| c.orbit).sum();
        Ok(Census {
            schema: "v1",
            group: group.clone(),
            kind,
            c: classes.len() as u64,
            r,
            h: hgs_count(kind, group, r)?,
            method,
            classes,
        })
    }
}

fn summaries(classes: &[ConjugacyClass]) -> Vec<ClassSummary> {
    classes.iter().map(|c| ClassSummary { orbit: c.orbit_size, stabilizer: c.stabilizer_order }).collect()
}

/// Census on an already built holomorph, with the full classification.
pub fn census_on(hol: &Holomorph, kind: TargetKind, cfg: &Config) -> Result<(Census, Vec<ConjugacyClass>)> {
    check_kind(hol.group(), kind)?;
    let (classes, method) = if cfg.prune_by_exponent_bound && exceeds_exponent_bound(hol.group(), kind) {
        (Vec::new(), Method::ExponentBound)
    } else if hol.order() <= cfg.full_search_limit {
        let subgroups = find_regular_full(hol, kind)?;
        (classify(hol, &subgroups, cfg)?, Method::Full)
    } else {
        (find_regular_sylow(hol, kind, cfg)?.classes, Method::SylowRestricted)
    };
    let census = Census::from_classes(hol.group(), kind, method, summaries(&classes))?;
    Ok((census, classes))
}

/// `(c, r, h)` for `(N, kind)` by direct enumeration.
pub fn census(group: &GroupSpec, kind: TargetKind, cfg: &Config) -> Result<Census> {
    check_kind(group, kind)?;
    if cfg.prune_by_exponent_bound && exceeds_exponent_bound(group, kind) {
        return Census::from_classes(group, kind, Method::ExponentBound, Vec::new());
    }
    let hol = Holomorph::new(group, cfg)?;
    Ok(census_on(&hol, kind, cfg)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(n: &str) -> Holomorph {
        Holomorph::new(&n.parse().unwrap(), &Config::default()).unwrap()
    }

    #[test]
    fn translations_are_regular() {
        let hol = setup("c2xc4");
        let t = hol.table();
        let set: Vec<Code> = (0..t.n() as u32).map(|v| t.pack(t.identity(), v)).collect();
        assert!(is_regular(t, &set).unwrap());
        let bad: Vec<Code> = (0..t.n() as u32).map(|v| t.pack(t.identity(), v / 2)).collect();
        assert!(!is_regular(t, &bad).unwrap());
        assert!(is_regular(t, &set[..3]).is_err());
    }

    #[test]
    fn closure_examples() {
        let hol = setup("c8");
        let t = hol.table();
        assert_eq!(generate_closure(t, &[t.pack(t.identity(), 1)], 100).unwrap().len(), 8);
        assert_eq!(generate_closure(t, &[t.hol_identity()], 100).unwrap().len(), 1);
        assert!(generate_closure(t, &[t.pack(t.identity(), 1)], 4).unwrap_err().is_capacity());
    }

    #[test]
    fn small_counts() {
        let cfg = Config::default();
        let q8: TargetKind = "q8".parse().unwrap();
        let d8: TargetKind = "d8".parse().unwrap();
        let (s, m) = find_regular(&setup("c2xc4"), q8, &cfg).unwrap();
        assert_eq!((s.len(), m), (2, Method::Full));
        assert_eq!(find_regular(&setup("c2xc2xc2"), d8, &cfg).unwrap().0.len(), 126);
    }

    #[test]
    fn kind_must_match_order() {
        let cfg = Config::default();
        assert!(find_regular(&setup("c8"), "q16".parse().unwrap(), &cfg).is_err());
    }
}
