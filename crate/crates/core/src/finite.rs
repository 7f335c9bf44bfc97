//! Small abstract groups held as Cayley tables.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    m: usize,
    table: Vec<u32>,
    identity: u32,
    inverse: Vec<u32>,
    orders: Vec<u64>,
}

impl FiniteGroup {
    /// Builds the Cayley table of `items` under `mul`, failing if the set is
    /// not a group.
    pub fn from_elements<T, F>(items: &[T], mul: F) -> Result<Self>
    where
        T: Clone + Eq + std::hash::Hash,
        F: Fn(&T, &T) -> T,
    {
        let m = items.len();
        if m == 0 {
            return Err(Error::invalid("empty set is not a group"));
        }
        let index: HashMap<&T, u32> = items.iter().enumerate().map(|(i, t)| (t, i as u32)).collect();
        if index.len() != m {
            return Err(Error::invalid("repeated elements"));
        }
        let mut table = vec![0u32; m * m];
        for (i, a) in items.iter().enumerate() {
            for (j, b) in items.iter().enumerate() {
                table[i * m + j] = *index
                    .get(&mul(a, b))
                    .ok_or_else(|| Error::invalid("set is not closed under multiplication"))?;
            }
        }
        Self::from_table(m, table)
    }

    pub fn from_table(m: usize, table: Vec<u32>) -> Result<Self> {
        let identity = (0..m as u32)
            .find(|&e| (0..m).all(|x| table[e as usize * m + x] == x as u32 && table[x * m + e as usize] == x as u32))
            .ok_or_else(|| Error::invalid("no identity element"))?;
        let inverse = (0..m)
            .map(|x| {
                (0..m as u32)
                    .find(|&y| table[x * m + y as usize] == identity)
                    .ok_or_else(|| Error::invalid("element without inverse"))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut g = FiniteGroup { m, table, identity, inverse, orders: Vec::new() };
        g.orders = (0..m as u32)
            .map(|x| {
                let mut y = x;
                let mut k = 1;
                while y != identity {
                    y = g.mul(y, x);
                    k += 1;
                }
                k
            })
            .collect();
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.m
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.m + b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn element_order(&self, a: u32) -> u64 {
        self.orders[a as usize]
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.m as u32).all(|a| (0..self.m as u32).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted element list of the subgroup generated by `gens`.
    pub fn generated(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = HashSet::from([self.identity]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        let mut out: Vec<u32> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// Greedy generating set in index order.
    pub fn generators(&self) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for x in 0..self.m as u32 {
            if span.len() == self.m {
                break;
            }
            if span.binary_search(&x).is_err() {
                gens.push(x);
                span = self.generated(&gens);
            }
        }
        gens
    }

    /// Subgroup generated by all commutators.
    pub fn derived_subgroup(&self) -> Vec<u32> {
        let mut comms = HashSet::new();
        for a in 0..self.m as u32 {
            for b in 0..self.m as u32 {
                comms.insert(self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b)));
            }
        }
        let comms: Vec<u32> = comms.into_iter().collect();
        self.generated(&comms)
    }

    /// Kernels of the surjections onto `C2`. A homomorphism is fixed by its
    /// values on a generating set; each assignment is propagated along the
    /// Cayley graph and kept if consistent.
    pub fn index_two_subgroups(&self) -> Vec<Vec<u32>> {
        let gens = self.generators();
        let mut out = Vec::new();
        for mask in 1u32..(1 << gens.len()) {
            let mut label: Vec<Option<bool>> = vec![None; self.m];
            label[self.identity as usize] = Some(false);
            let mut queue = VecDeque::from([self.identity]);
            let mut consistent = true;
            'bfs: while let Some(x) = queue.pop_front() {
                let lx = label[x as usize].unwrap();
                for (j, &g) in gens.iter().enumerate() {
                    let y = self.mul(x, g);
                    let ly = lx ^ (mask >> j & 1 == 1);
                    match label[y as usize] {
                        None => {
                            label[y as usize] = Some(ly);
                            queue.push_back(y);
                        }
                        Some(l) if l != ly => {
                            consistent = false;
                            break 'bfs;
                        }
                        _ => {}
                    }
                }
            }
            if consistent {
                let kernel: Vec<u32> = (0..self.m as u32).filter(|&x| label[x as usize] == Some(false)).collect();
                out.push(kernel);
            }
        }
        out.sort();
        out
    }

    pub fn is_cyclic_subset(&self, elems: &[u32]) -> bool {
        elems.iter().any(|&x| self.element_order(x) as usize == elems.len())
    }

    /// Counts pairs `(x, y)` with `x` of order `half`, `y ∉ <x>`,
    /// `y x y^{-1} = x^{-1}` and `y^2 = x^{half/2}` (`quaternion`) or
    /// `y^2 = 1`, returning the first one found if `first_only`.
    pub fn presentation_pairs(&self, quaternion: bool, first_only: bool) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        if !self.m.is_multiple_of(2) {
            return out;
        }
        let half = (self.m / 2) as u64;
        if quaternion && !half.is_multiple_of(2) {
            return out;
        }
        for x in 0..self.m as u32 {
            if self.orders[x as usize] != half {
                continue;
            }
            let cyc = self.generated(&[x]);
            let xinv = self.inv(x);
            let target = if quaternion { self.pow(x, half / 2) } else { self.identity };
            for y in 0..self.m as u32 {
                if cyc.binary_search(&y).is_ok() {
                    continue;
                }
                if self.mul(self.mul(y, x), self.inv(y)) == xinv && self.mul(y, y) == target {
                    out.push((x, y));
                    if first_only {
                        return out;
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `x^i y^e` with the quaternion or dihedral rules, as `(i, e)`.
    pub(crate) fn qd_group(half: u64, quaternion: bool) -> FiniteGroup {
        let z = if quaternion { half / 2 } else { 0 };
        let items: Vec<(u64, u64)> = (0..half).flat_map(|i| [(i, 0), (i, 1)]).collect();
        FiniteGroup::from_elements(&items, |&(i, a), &(j, b)| {
            let j = if a == 1 { (half - j) % half } else { j };
            let mut k = (i + j) % half;
            if a == 1 && b == 1 {
                k = (k + z) % half;
            }
            (k, a ^ b)
        })
        .unwrap()
    }

    #[test]
    fn index_two_counts() {
        assert_eq!(qd_group(4, true).index_two_subgroups().len(), 3);
        assert_eq!(qd_group(8, true).index_two_subgroups().len(), 3);
        assert_eq!(qd_group(2, false).index_two_subgroups().len(), 3);
        assert_eq!(qd_group(6, true).index_two_subgroups().len(), 1);
        let cyclic: Vec<_> = qd_group(8, true)
            .index_two_subgroups()
            .into_iter()
            .filter(|k| qd_group(8, true).is_cyclic_subset(k))
            .collect();
        assert_eq!(cyclic.len(), 1);
    }

    #[test]
    fn derived_subgroups() {
        assert_eq!(qd_group(4, true).derived_subgroup().len(), 2);
        assert_eq!(qd_group(8, false).derived_subgroup().len(), 4);
        assert!(qd_group(2, false).is_abelian());
    }

    #[test]
    fn rejects_non_groups() {
        let items = [0u64, 1, 2];
        assert!(FiniteGroup::from_elements(&items, |a, b| (a + b) % 4).is_err());
    }
}
