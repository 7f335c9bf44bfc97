//! The brace `(N, +, ∘)` attached to a regular subgroup of `Hol(N)`, and the
//! set-theoretic Yang–Baxter solution it induces.
//!
//! Elements are indexed lexicographically, as in [`GroupSpec::index_of`].

use std::fmt;

use serde::Serialize;

use crate::abelian::GroupSpec;
use crate::enumerate::is_regular;
use crate::error::{Error, Result};
use crate::table::{AutTable, Code};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraceTable {
    group: GroupSpec,
    n: usize,
    add: Vec<u32>,
    neg: Vec<u32>,
    circ: Vec<u32>,
    lambda: Vec<u32>,
    /// `g_a` for each `a`, when the brace came from a subgroup.
    g: Option<Vec<Code>>,
}

/// A failed axiom and the elements exhibiting it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: &'static str,
    pub witness: (u32, u32, u32),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b, c) = self.witness;
        write!(f, "{} fails at ({a}, {b}, {c})", self.axiom)
    }
}

fn additive_tables(group: &GroupSpec) -> (Vec<u32>, Vec<u32>) {
    let elems: Vec<_> = group.elements().collect();
    let n = elems.len();
    let mut add = vec![0u32; n * n];
    for (i, x) in elems.iter().enumerate() {
        for (j, y) in elems.iter().enumerate() {
            add[i * n + j] = group.index_of(&group.add_unchecked(x, y)) as u32;
        }
    }
    let neg = elems.iter().map(|x| group.index_of(&group.neg_unchecked(x)) as u32).collect();
    (add, neg)
}

impl BraceTable {
    /// From a regular subgroup given by its codes: `a ∘ b = g_a(b)` where
    /// `g_a` is the element with translation part `a`.
    pub fn from_subgroup(table: &AutTable, codes: &[Code]) -> Result<Self> {
        if !is_regular(table, codes)? {
            return Err(Error::invalid("subgroup is not regular"));
        }
        let n = table.n();
        let mut g = vec![0 as Code; n];
        for &c in codes {
            g[table.unpack(c).1 as usize] = c;
        }
        let mut circ = vec![0u32; n * n];
        let mut lambda = vec![0u32; n * n];
        for a in 0..n {
            let (alpha, _) = table.unpack(g[a]);
            for b in 0..n {
                circ[a * n + b] = table.happly(g[a], b as u32);
                lambda[a * n + b] = table.apply(alpha, b as u32);
            }
        }
        let (add, neg) = additive_tables(table.group());
        Ok(BraceTable { group: table.group().clone(), n, add, neg, circ, lambda, g: Some(g) })
    }

    /// From an arbitrary operation table, with `λ_a(b) = -a + a∘b`.
    pub fn from_circ(group: &GroupSpec, circ: Vec<u32>) -> Result<Self> {
        let n = group.order() as usize;
        if circ.len() != n * n || circ.iter().any(|&x| x as usize >= n) {
            return Err(Error::invalid(format!("operation table does not fit {group}")));
        }
        let (add, neg) = additive_tables(group);
        let mut lambda = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                lambda[a * n + b] = add[neg[a] as usize * n + circ[a * n + b] as usize];
            }
        }
        Ok(BraceTable { group: group.clone(), n, add, neg, circ, lambda, g: None })
    }

    /// The trivial brace, `a ∘ b = a + b`.
    pub fn trivial(group: &GroupSpec) -> Self {
        let (add, _) = additive_tables(group);
        Self::from_circ(group, add).expect("addition table fits")
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.n + b as usize]
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    pub fn circ(&self, a: u32, b: u32) -> u32 {
        self.circ[a as usize * self.n + b as usize]
    }

    pub fn lambda(&self, a: u32, b: u32) -> u32 {
        self.lambda[a as usize * self.n + b as usize]
    }

    pub fn circ_table(&self) -> &[u32] {
        &self.circ
    }

    /// The subgroup elements `g_a`, in order of `a`.
    pub fn subgroup_elements(&self) -> Option<&[Code]> {
        self.g.as_deref()
    }

    fn circ_inverse(&self, a: u32) -> Option<u32> {
        (0..self.n as u32).find(|&b| self.circ(a, b) == 0 && self.circ(b, a) == 0)
    }

    /// `λ_a^{-1}(b)`.
    pub fn lambda_inverse(&self, a: u32, b: u32) -> u32 {
        (0..self.n as u32).find(|&x| self.lambda(a, x) == b).expect("λ_a is a bijection")
    }

    pub fn export(&self) -> BraceExport {
        BraceExport {
            schema: "v1",
            additive: self.group.factors().to_vec(),
            circ: self.circ.chunks(self.n).map(|r| r.to_vec()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BraceExport {
    pub schema: &'static str,
    pub additive: Vec<u64>,
    pub circ: Vec<Vec<u32>>,
}

pub fn brace_from_subgroup(table: &AutTable, codes: &[Code]) -> Result<BraceTable> {
    BraceTable::from_subgroup(table, codes)
}

/// Exhaustive check of the group axioms for `∘` and of
/// `a∘(b+c) = a∘b - a + a∘c`. Addition is abelian by construction.
pub fn verify_brace(bt: &BraceTable) -> std::result::Result<(), Violation> {
    let n = bt.n as u32;
    let fail = |axiom, a, b, c| Err(Violation { axiom, witness: (a, b, c) });
    for a in 0..n {
        if bt.circ(0, a) != a || bt.circ(a, 0) != a {
            return fail("identity", a, 0, 0);
        }
        if bt.circ_inverse(a).is_none() {
            return fail("inverse", a, 0, 0);
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = bt.circ(a, b);
            for c in 0..n {
                if bt.circ(ab, c) != bt.circ(a, bt.circ(b, c)) {
                    return fail("associativity", a, b, c);
                }
                let lhs = bt.circ(a, bt.add(b, c));
                let rhs = bt.add(bt.add(ab, bt.neg(a)), bt.circ(a, c));
                if lhs != rhs {
                    return fail("brace relation", a, b, c);
                }
            }
        }
    }
    Ok(())
}

/// `λ_{a∘b} = λ_a λ_b` and `λ_a(b + c) = λ_a(b) + λ_a(c)` for all triples.
pub fn verify_lambda(bt: &BraceTable) -> std::result::Result<(), Violation> {
    let n = bt.n as u32;
    for a in 0..n {
        for b in 0..n {
            let ab = bt.circ(a, b);
            for c in 0..n {
                if bt.lambda(ab, c) != bt.lambda(a, bt.lambda(b, c)) {
                    return Err(Violation { axiom: "lambda homomorphism", witness: (a, b, c) });
                }
                if bt.lambda(a, bt.add(b, c)) != bt.add(bt.lambda(a, b), bt.lambda(a, c)) {
                    return Err(Violation { axiom: "lambda additivity", witness: (a, b, c) });
                }
            }
        }
    }
    Ok(())
}

/// `r(a, b) = (λ_a(b), λ_{λ_a(b)}^{-1}(a))` on `N × N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct YbeSolution {
    pub n: usize,
    /// `map[a * n + b]` is `r(a, b)`.
    pub map: Vec<(u32, u32)>,
    /// Every left map `b ↦ σ_a(b)` and right map `a ↦ τ_b(a)` is bijective.
    pub nondegenerate: bool,
}

impl YbeSolution {
    pub fn r(&self, a: u32, b: u32) -> (u32, u32) {
        self.map[a as usize * self.n + b as usize]
    }
}

/// Builds `r` and checks involutivity and the braid relation on all pairs
/// and triples.
pub fn ybe_solution(bt: &BraceTable) -> Result<YbeSolution> {
    let n = bt.n;
    let inv: Vec<u32> = (0..n * n).map(|i| bt.lambda_inverse((i / n) as u32, (i % n) as u32)).collect();
    let mut map = Vec::with_capacity(n * n);
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            let u = bt.lambda(a, b);
            map.push((u, inv[u as usize * n + a as usize]));
        }
    }
    let sol = YbeSolution { n, map, nondegenerate: false };
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            let (x, y) = sol.r(a, b);
            if sol.r(x, y) != (a, b) {
                return Err(Error::internal(format!("r is not involutive at ({a}, {b})")));
            }
        }
    }
    let r12 = |(a, b, c): (u32, u32, u32)| {
        let (x, y) = sol.r(a, b);
        (x, y, c)
    };
    let r23 = |(a, b, c): (u32, u32, u32)| {
        let (y, z) = sol.r(b, c);
        (a, y, z)
    };
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            for c in 0..n as u32 {
                let t = (a, b, c);
                if r12(r23(r12(t))) != r23(r12(r23(t))) {
                    return Err(Error::internal(format!("braid relation fails at ({a}, {b}, {c})")));
                }
            }
        }
    }
    let mut nondegenerate = true;
    let mut seen = vec![false; n];
    'outer: for fix_left in [true, false] {
        for a in 0..n as u32 {
            seen.fill(false);
            for b in 0..n as u32 {
                let v = if fix_left { sol.r(a, b).0 } else { sol.r(b, a).1 };
                if std::mem::replace(&mut seen[v as usize], true) {
                    nondegenerate = false;
                    break 'outer;
                }
            }
        }
    }
    Ok(YbeSolution { nondegenerate, ..sol })
}
