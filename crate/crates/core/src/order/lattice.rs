use crate::error::{Error, Result};
use crate::order::Poset;

/// A finite lattice with precomputed meet and join tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    poset: Poset,
    meet: Vec<u32>,
    join: Vec<u32>,
    bottom: usize,
    top: usize,
}

impl FiniteLattice {
    pub fn from_poset(poset: Poset) -> Result<FiniteLattice> {
        let n = poset.len();
        let mins = poset.minimal_elements();
        let maxs = poset.maximal_elements();
        if mins.len() != 1 {
            return Err(Error::NoBound("least element"));
        }
        if maxs.len() != 1 {
            return Err(Error::NoBound("greatest element"));
        }
        let heights = poset.heights();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| heights[x]);

        let mut meet = vec![u32::MAX; n * n];
        for &a in &order {
            for b in 0..n {
                let m = if poset.leq(a, b) {
                    a
                } else if poset.leq(b, a) {
                    b
                } else {
                    // every common lower bound lies under meet(c, b) for a lower cover c of a
                    greatest(
                        &poset,
                        poset
                            .lower_covers(a)
                            .iter()
                            .map(|&c| meet[c * n + b] as usize),
                    )
                    .ok_or(Error::NotALattice(a, b, "meet"))?
                };
                meet[a * n + b] = m as u32;
            }
        }
        let mut join = vec![u32::MAX; n * n];
        for &a in order.iter().rev() {
            for b in 0..n {
                let j = if poset.leq(a, b) {
                    b
                } else if poset.leq(b, a) {
                    a
                } else {
                    least(
                        &poset,
                        poset
                            .upper_covers(a)
                            .iter()
                            .map(|&c| join[c * n + b] as usize),
                    )
                    .ok_or(Error::NotALattice(a, b, "join"))?
                };
                join[a * n + b] = j as u32;
            }
        }
        Ok(FiniteLattice {
            bottom: mins[0],
            top: maxs[0],
            poset,
            meet,
            join,
        })
    }

    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<FiniteLattice> {
        FiniteLattice::from_poset(Poset::from_covers(n, covers)?)
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn size(&self) -> usize {
        self.poset.len()
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size() + b] as usize
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size() + b] as usize
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.poset.leq(a, b)
    }

    pub fn is_cover(&self, a: usize, b: usize) -> bool {
        self.poset.is_cover(a, b)
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        self.poset.covers()
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        self.poset.upper_covers(x)
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        self.poset.lower_covers(x)
    }

    /// Join-irreducible elements: exactly one lower cover.
    pub fn jir(&self) -> Vec<usize> {
        (0..self.size())
            .filter(|&x| self.lower_covers(x).len() == 1)
            .collect()
    }

    /// Meet-irreducible elements: exactly one upper cover.
    pub fn mir(&self) -> Vec<usize> {
        (0..self.size())
            .filter(|&x| self.upper_covers(x).len() == 1)
            .collect()
    }

    pub fn is_jir(&self, x: usize) -> bool {
        self.lower_covers(x).len() == 1
    }

    pub fn is_mir(&self, x: usize) -> bool {
        self.upper_covers(x).len() == 1
    }

    /// Length of the longest chain from bottom to top.
    pub fn length(&self) -> usize {
        self.poset.heights()[self.top]
    }

    /// `x ∧ y ≺ x` implies `y ≺ x ∨ y`, for all pairs.
    pub fn is_semimodular(&self) -> bool {
        let n = self.size();
        for x in 0..n {
            for y in 0..n {
                if self.is_cover(self.meet(x, y), x) && !self.is_cover(y, self.join(x, y)) {
                    return false;
                }
            }
        }
        true
    }

    /// Jir is the union of two chains, tested by 2-colouring the
    /// incomparability graph on Jir.
    pub fn is_slim(&self) -> bool {
        let j = self.jir();
        let mut colour = vec![u8::MAX; j.len()];
        for start in 0..j.len() {
            if colour[start] != u8::MAX {
                continue;
            }
            colour[start] = 0;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for v in 0..j.len() {
                    if u == v || self.poset.comparable(j[u], j[v]) {
                        continue;
                    }
                    if colour[v] == u8::MAX {
                        colour[v] = 1 - colour[u];
                        stack.push(v);
                    } else if colour[v] == colour[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Independent slimness test: Jir has no 3-element antichain.
    pub fn jir_has_three_antichain(&self) -> bool {
        let j = self.jir();
        let p = &self.poset;
        for a in 0..j.len() {
            for b in (a + 1)..j.len() {
                if p.comparable(j[a], j[b]) {
                    continue;
                }
                for c in (b + 1)..j.len() {
                    if !p.comparable(j[a], j[c]) && !p.comparable(j[b], j[c]) {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// The principal ideal of `x` is a direct product of two chains.
    ///
    /// Its join-irreducibles must split into two mutually incomparable chains
    /// and the ideal must have as many elements as that product.
    pub fn is_distributive_ideal_grid(&self, x: usize) -> bool {
        let p = &self.poset;
        let j: Vec<usize> = self.jir().into_iter().filter(|&y| p.leq(y, x)).collect();
        let mut comp = vec![usize::MAX; j.len()];
        let mut sizes = Vec::new();
        for s in 0..j.len() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = sizes.len();
            comp[s] = id;
            let mut size = 1;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for v in 0..j.len() {
                    if comp[v] == usize::MAX && p.comparable(j[u], j[v]) {
                        comp[v] = id;
                        size += 1;
                        stack.push(v);
                    }
                }
            }
            sizes.push(size);
        }
        if sizes.len() > 2 {
            return false;
        }
        for a in 0..j.len() {
            for b in 0..j.len() {
                if comp[a] == comp[b] && !p.comparable(j[a], j[b]) {
                    return false;
                }
            }
        }
        let expected: usize = sizes.iter().map(|s| s + 1).product();
        p.down_set(x).count_ones(..) == expected
    }

    /// Exhaustive check of the lattice identities on the tables.
    pub fn check_identities(&self) -> bool {
        let n = self.size();
        for a in 0..n {
            if self.meet(a, a) != a || self.join(a, a) != a {
                return false;
            }
            for b in 0..n {
                if self.meet(a, b) != self.meet(b, a) || self.join(a, b) != self.join(b, a) {
                    return false;
                }
                if self.meet(a, self.join(a, b)) != a || self.join(a, self.meet(a, b)) != a {
                    return false;
                }
                for c in 0..n {
                    if self.meet(self.meet(a, b), c) != self.meet(a, self.meet(b, c)) {
                        return false;
                    }
                    if self.join(self.join(a, b), c) != self.join(a, self.join(b, c)) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn greatest(p: &Poset, cands: impl Iterator<Item = usize>) -> Option<usize> {
    let cands: Vec<usize> = cands.collect();
    cands
        .iter()
        .copied()
        .find(|&m| cands.iter().all(|&c| p.leq(c, m)))
}

fn least(p: &Poset, cands: impl Iterator<Item = usize>) -> Option<usize> {
    let cands: Vec<usize> = cands.collect();
    cands
        .iter()
        .copied()
        .find(|&m| cands.iter().all(|&c| p.leq(m, c)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b2() -> FiniteLattice {
        FiniteLattice::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn pentagon() -> FiniteLattice {
        // 0 < a < b < 1, 0 < c < 1
        FiniteLattice::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap()
    }

    fn m3() -> FiniteLattice {
        FiniteLattice::from_covers(5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)]).unwrap()
    }

    #[test]
    fn b2_tables() {
        let l = b2();
        assert_eq!(l.meet(1, 2), 0);
        assert_eq!(l.join(1, 2), 3);
        assert!(l.check_identities());
        assert_eq!(l.jir(), vec![1, 2]);
        assert_eq!(l.mir(), vec![1, 2]);
        assert_eq!(l.length(), 2);
    }

    #[test]
    fn n_poset_is_not_a_lattice() {
        // two minimal, two maximal, a zig-zag: no bottom at all
        let err = FiniteLattice::from_covers(4, &[(0, 2), (0, 3), (1, 3)]).unwrap_err();
        assert_eq!(err, Error::NoBound("least element"));
        // bounded but two upper bounds without a least one
        let err = FiniteLattice::from_covers(
            6,
            &[
                (0, 1),
                (0, 2),
                (1, 3),
                (1, 4),
                (2, 3),
                (2, 4),
                (3, 5),
                (4, 5),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotALattice(..)));
    }

    #[test]
    fn semimodularity() {
        assert!(b2().is_semimodular());
        assert!(!pentagon().is_semimodular());
        assert!(m3().is_semimodular());
    }

    #[test]
    fn chain_jir() {
        let l = FiniteLattice::from_covers(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(l.jir(), vec![1, 2]);
        assert_eq!(l.mir(), vec![0, 1]);
    }

    #[test]
    fn slimness() {
        assert!(b2().is_slim());
        assert!(!m3().is_slim());
        assert!(m3().jir_has_three_antichain());
        // B_3
        let b3 = FiniteLattice::from_covers(
            8,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 4),
                (1, 5),
                (2, 4),
                (2, 6),
                (3, 5),
                (3, 6),
                (4, 7),
                (5, 7),
                (6, 7),
            ],
        )
        .unwrap();
        assert!(!b3.is_slim());
        assert!(b3.is_semimodular());
    }

    #[test]
    fn grid_ideal() {
        let l = b2();
        assert!(l.is_distributive_ideal_grid(3));
        assert!(l.is_distributive_ideal_grid(1));
        assert!(!m3().is_distributive_ideal_grid(4));
        assert!(!pentagon().is_distributive_ideal_grid(4));
    }
}
