use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite poset on `0..n`, given by its cover relation.
///
/// The reflexive-transitive closure is cached in both directions, so `leq`
/// is a bit lookup.
#[derive(Clone, Debug)]
pub struct Poset {
    n: usize,
    covers: Vec<(usize, usize)>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
    // down[x] = { y : y <= x }, up[x] = { y : x <= y }
    down: Vec<FixedBitSet>,
    up: Vec<FixedBitSet>,
}

/// On-disk form: `{"n": int, "covers": [[lo, hi], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetFile {
    pub n: usize,
    pub covers: Vec<[usize; 2]>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.covers == other.covers
    }
}

impl Eq for Poset {}

impl Poset {
    /// Validates a cover relation: acyclic and transitively reduced.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Poset> {
        let mut sorted: Vec<(usize, usize)> = covers.to_vec();
        for &(a, b) in &sorted {
            if a >= n {
                return Err(Error::OutOfRange(a, n));
            }
            if b >= n {
                return Err(Error::OutOfRange(b, n));
            }
            if a == b {
                return Err(Error::Cycle(a));
            }
        }
        sorted.sort_unstable();
        sorted.dedup();

        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        for &(a, b) in &sorted {
            upper[a].push(b);
            lower[b].push(a);
        }
        let order = topological_order(n, &upper)?;

        let mut down: Vec<FixedBitSet> = (0..n).map(|_| FixedBitSet::with_capacity(n)).collect();
        for &x in &order {
            let mut set = FixedBitSet::with_capacity(n);
            set.insert(x);
            for &l in &lower[x] {
                set.union_with(&down[l]);
            }
            down[x] = set;
        }
        // a cover (a, b) is redundant when a is below another lower cover of b
        for &(a, b) in &sorted {
            if lower[b].iter().any(|&c| c != a && down[c].contains(a)) {
                return Err(Error::NonReducedCover(a, b));
            }
        }
        let up = transpose(n, &down);
        Ok(Poset {
            n,
            covers: sorted,
            upper,
            lower,
            down,
            up,
        })
    }

    /// Builds a poset from an arbitrary relation by taking its
    /// reflexive-transitive closure; fails if the closure is not antisymmetric.
    pub fn from_relation(n: usize, pairs: &[(usize, usize)]) -> Result<Poset> {
        let mut down: Vec<FixedBitSet> = (0..n)
            .map(|x| {
                let mut s = FixedBitSet::with_capacity(n);
                s.insert(x);
                s
            })
            .collect();
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::OutOfRange(a.max(b), n));
            }
            down[b].insert(a);
        }
        // Warshall on bit rows
        for k in 0..n {
            let row_k = down[k].clone();
            for row in down.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if down[a].contains(b) && down[b].contains(a) {
                    return Err(Error::Cycle(a));
                }
            }
        }
        Ok(Self::from_closure(n, down))
    }

    /// Builds a poset from a full `leq` predicate, which must be a partial order.
    pub fn from_leq(n: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Poset> {
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && leq(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        Poset::from_relation(n, &pairs)
    }

    fn from_closure(n: usize, down: Vec<FixedBitSet>) -> Poset {
        let up = transpose(n, &down);
        let mut covers = Vec::new();
        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        for a in 0..n {
            // strict upper set of a
            let mut strict = up[a].clone();
            strict.set(a, false);
            for b in strict.ones() {
                let mut between = strict.clone();
                between.intersect_with(&down[b]);
                between.set(b, false);
                if between.is_clear() {
                    covers.push((a, b));
                    upper[a].push(b);
                    lower[b].push(a);
                }
            }
        }
        covers.sort_unstable();
        Poset {
            n,
            covers,
            upper,
            lower,
            down,
            up,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.down[b].contains(a)
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    pub fn is_cover(&self, a: usize, b: usize) -> bool {
        self.upper[a].contains(&b)
    }

    /// Principal ideal of `x` as a bit set.
    pub fn down_set(&self, x: usize) -> &FixedBitSet {
        &self.down[x]
    }

    /// Principal filter of `x` as a bit set.
    pub fn up_set(&self, x: usize) -> &FixedBitSet {
        &self.up[x]
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.lower[x].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.upper[x].is_empty()).collect()
    }

    pub fn is_antichain(&self) -> bool {
        self.covers.is_empty()
    }

    pub fn is_chain(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.comparable(a, b)))
    }

    /// Height of every element: length of the longest chain from a minimal element.
    pub fn heights(&self) -> Vec<usize> {
        let order = topological_order(self.n, &self.upper).expect("validated poset is acyclic");
        let mut h = vec![0usize; self.n];
        for &x in &order {
            h[x] = self.lower[x].iter().map(|&l| h[l] + 1).max().unwrap_or(0);
        }
        h
    }

    /// Number of comparable pairs `a < b`.
    pub fn comparabilities(&self) -> usize {
        self.down.iter().map(|d| d.count_ones(..) - 1).sum()
    }

    /// Subposet induced on `keep` (in the given order); element `keep[i]`
    /// becomes `i`.
    pub fn induced(&self, keep: &[usize]) -> Poset {
        let m = keep.len();
        let mut down: Vec<FixedBitSet> = (0..m).map(|_| FixedBitSet::with_capacity(m)).collect();
        for (i, &a) in keep.iter().enumerate() {
            for (j, &b) in keep.iter().enumerate() {
                if self.leq(b, a) {
                    down[i].insert(j);
                }
            }
        }
        Self::from_closure(m, down)
    }

    /// Number of down-sets (order ideals, including the empty one).
    pub fn count_down_sets(&self) -> u128 {
        let mut memo = std::collections::HashMap::new();
        let all = {
            let mut s = FixedBitSet::with_capacity(self.n);
            s.insert_range(..);
            s
        };
        self.count_down_sets_in(all, &mut memo)
    }

    fn count_down_sets_in(
        &self,
        set: FixedBitSet,
        memo: &mut std::collections::HashMap<Vec<usize>, u128>,
    ) -> u128 {
        let Some(x) = set.ones().next() else {
            return 1;
        };
        let key: Vec<usize> = set.ones().collect();
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        // down-sets avoiding x avoid everything above x; those containing x
        // contain everything below x
        let mut without = set.clone();
        without.difference_with(&self.up[x]);
        let mut with = set.clone();
        with.difference_with(&self.down[x]);
        let total = self.count_down_sets_in(without, memo) + self.count_down_sets_in(with, memo);
        memo.insert(key, total);
        total
    }

    pub fn to_file(&self) -> PosetFile {
        PosetFile {
            n: self.n,
            covers: self.covers.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn from_file(file: &PosetFile) -> Result<Poset> {
        let covers: Vec<(usize, usize)> = file.covers.iter().map(|c| (c[0], c[1])).collect();
        Poset::from_covers(file.n, &covers)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("poset serializes")
    }

    pub fn from_json(text: &str) -> Result<Poset> {
        let file: PosetFile = serde_json::from_str(text).map_err(|e| Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Poset::from_file(&file)
    }
}

fn transpose(n: usize, down: &[FixedBitSet]) -> Vec<FixedBitSet> {
    let mut up: Vec<FixedBitSet> = (0..n).map(|_| FixedBitSet::with_capacity(n)).collect();
    for (b, row) in down.iter().enumerate() {
        for a in row.ones() {
            up[a].insert(b);
        }
    }
    up
}

fn topological_order(n: usize, upper: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut indeg = vec![0usize; n];
    for ups in upper {
        for &b in ups {
            indeg[b] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(x) = stack.pop() {
        order.push(x);
        for &b in &upper[x] {
            indeg[b] -= 1;
            if indeg[b] == 0 {
                stack.push(b);
            }
        }
    }
    if order.len() < n {
        let stuck = (0..n).find(|&x| indeg[x] > 0).unwrap_or(0);
        return Err(Error::Cycle(stuck));
    }
    Ok(order)
}
