use crate::order::{FiniteLattice, Poset};

/// A partition of the lattice, stored as the least element id of each block.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    label: Vec<u32>,
}

impl Congruence {
    pub fn identity(n: usize) -> Congruence {
        Congruence {
            label: (0..n as u32).collect(),
        }
    }

    fn from_union_find(uf: &mut UnionFind) -> Congruence {
        let n = uf.parent.len();
        let mut min_of = vec![u32::MAX; n];
        for x in 0..n {
            let r = uf.find(x);
            min_of[r] = min_of[r].min(x as u32);
        }
        Congruence {
            label: (0..n).map(|x| min_of[uf.find(x)]).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.label.len()
    }

    #[inline]
    pub fn related(&self, a: usize, b: usize) -> bool {
        self.label[a] == self.label[b]
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut by_label: std::collections::BTreeMap<u32, Vec<usize>> = Default::default();
        for (x, &l) in self.label.iter().enumerate() {
            by_label.entry(l).or_default().push(x);
        }
        by_label.into_values().collect()
    }

    pub fn block_count(&self) -> usize {
        self.label
            .iter()
            .enumerate()
            .filter(|&(x, &l)| l as usize == x)
            .count()
    }

    pub fn is_identity(&self) -> bool {
        self.block_count() == self.size()
    }

    /// `self ⊆ other` as relations.
    pub fn refines(&self, other: &Congruence) -> bool {
        (0..self.size()).all(|x| other.related(x, self.label[x] as usize))
    }

    /// Least equivalence containing both; for congruences this is their join in Con L.
    pub fn join(&self, other: &Congruence) -> Congruence {
        let mut uf = UnionFind::new(self.size());
        for x in 0..self.size() {
            uf.union(x, self.label[x] as usize);
            uf.union(x, other.label[x] as usize);
        }
        Congruence::from_union_find(&mut uf)
    }

    /// Substitution property for every pair and every third element.
    pub fn is_compatible(&self, l: &FiniteLattice) -> bool {
        let n = self.size();
        (0..n).all(|x| {
            let y = self.label[x] as usize;
            (0..n).all(|z| {
                self.related(l.meet(x, z), l.meet(y, z)) && self.related(l.join(x, z), l.join(y, z))
            })
        })
    }

    /// Every block is an order-convex sublattice.
    pub fn blocks_are_convex_sublattices(&self, l: &FiniteLattice) -> bool {
        for block in self.blocks() {
            let lo = l.meet_all(block.iter().copied());
            let hi = l.join_all(block.iter().copied());
            if !self.related(lo, block[0]) || !self.related(hi, block[0]) {
                return false;
            }
            for z in 0..l.size() {
                if l.leq(lo, z) && l.leq(z, hi) && !self.related(z, block[0]) {
                    return false;
                }
            }
        }
        true
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Smallest congruence identifying `a` and `b`, by saturating the
/// substitution rules until nothing changes.
pub fn principal_congruence(l: &FiniteLattice, a: usize, b: usize) -> Congruence {
    let n = l.size();
    let mut uf = UnionFind::new(n);
    uf.union(a, b);
    loop {
        let mut changed = false;
        for x in 0..n {
            let y = uf.find(x);
            if x == y {
                continue;
            }
            for z in 0..n {
                changed |= uf.union(l.meet(x, z), l.meet(y, z));
                changed |= uf.union(l.join(x, z), l.join(y, z));
            }
        }
        if !changed {
            break;
        }
    }
    Congruence::from_union_find(&mut uf)
}

/// The join-irreducible congruences of a finite lattice and their order.
#[derive(Clone, Debug)]
pub struct CongruenceLattice {
    /// Distinct `con(a, b)` over covering pairs, sorted.
    pub jir_congruences: Vec<Congruence>,
    /// For each listed congruence, the covering pairs generating it.
    pub generators: Vec<Vec<(usize, usize)>>,
    /// Containment order on `jir_congruences`.
    pub order: Poset,
    /// Number of congruences, i.e. down-sets of `order`.
    pub full_size: u128,
}

impl CongruenceLattice {
    /// Position of `c` among the listed congruences.
    pub fn index_of(&self, c: &Congruence) -> Option<usize> {
        self.jir_congruences.binary_search(c).ok()
    }

    /// Each listed congruence is strictly larger than the join of the listed
    /// congruences strictly below it.
    pub fn all_join_irreducible(&self) -> bool {
        (0..self.jir_congruences.len()).all(|i| {
            let n = self.jir_congruences[i].size();
            let below = (0..self.jir_congruences.len())
                .filter(|&j| j != i && self.order.leq(j, i))
                .fold(Congruence::identity(n), |acc, j| {
                    acc.join(&self.jir_congruences[j])
                });
            below != self.jir_congruences[i]
        })
    }
}

pub fn congruence_lattice(l: &FiniteLattice) -> CongruenceLattice {
    let mut found: std::collections::BTreeMap<Congruence, Vec<(usize, usize)>> = Default::default();
    for &(a, b) in l.covers() {
        found
            .entry(principal_congruence(l, a, b))
            .or_default()
            .push((a, b));
    }
    let (jir_congruences, generators): (Vec<_>, Vec<_>) = found.into_iter().unzip();
    let order = Poset::from_leq(jir_congruences.len(), |i, j| {
        jir_congruences[i].refines(&jir_congruences[j])
    })
    .expect("containment is a partial order on distinct partitions");
    let full_size = order.count_down_sets();
    CongruenceLattice {
        jir_congruences,
        generators,
        order,
        full_size,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> FiniteLattice {
        FiniteLattice::from_covers(3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn b2() -> FiniteLattice {
        FiniteLattice::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn trivial_generators() {
        let l = b2();
        assert_eq!(principal_congruence(&l, 0, 3).block_count(), 1);
        assert!(principal_congruence(&l, 2, 2).is_identity());
        // collapsing 0 ≡ 1 forces 2 ≡ 3
        let c = principal_congruence(&l, 0, 1);
        assert_eq!(c.blocks(), vec![vec![0, 1], vec![2, 3]]);
        assert!(c.is_compatible(&l));
        assert!(c.blocks_are_convex_sublattices(&l));
    }

    #[test]
    fn chain_and_square_have_boolean_con() {
        for l in [chain3(), b2()] {
            let con = congruence_lattice(&l);
            assert_eq!(con.jir_congruences.len(), 2);
            assert!(con.order.is_antichain());
            assert_eq!(con.full_size, 4);
            assert!(con.all_join_irreducible());
        }
    }

    #[test]
    fn pentagon_con() {
        // N_5: con(a, b) lies under con(0, c) and con(c, 1), which are incomparable
        let n5 = FiniteLattice::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap();
        let con = congruence_lattice(&n5);
        assert_eq!(con.jir_congruences.len(), 3);
        assert_eq!(con.order.covers().len(), 2);
        assert_eq!(con.full_size, 5);
        let ab = principal_congruence(&n5, 1, 2);
        assert_eq!(ab.block_count(), 4);
    }

    #[test]
    fn m3_is_simple() {
        let m3 = FiniteLattice::from_covers(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
            .unwrap();
        let con = congruence_lattice(&m3);
        assert_eq!(con.jir_congruences.len(), 1);
        assert_eq!(con.full_size, 2);
    }
}
