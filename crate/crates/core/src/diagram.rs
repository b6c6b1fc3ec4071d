//! Planar diagrams: ordered covers, boundaries, corners, 4-cells,
//! trajectories and neon tubes.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::{FiniteLattice, Poset};

/// Heights of `x ∧ lcorner` and `x ∧ rcorner` on the lower boundary chains.
pub type Coord = (u32, u32);

/// A prime interval `foot ≺ peak`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub foot: usize,
    pub peak: usize,
}

impl Edge {
    pub fn new(foot: usize, peak: usize) -> Edge {
        Edge { foot, peak }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FourCell {
    pub bottom: usize,
    pub left: usize,
    pub right: usize,
    pub top: usize,
}

impl FourCell {
    pub fn lower_left(&self) -> Edge {
        Edge::new(self.bottom, self.left)
    }
    pub fn lower_right(&self) -> Edge {
        Edge::new(self.bottom, self.right)
    }
    pub fn upper_left(&self) -> Edge {
        Edge::new(self.left, self.top)
    }
    pub fn upper_right(&self) -> Edge {
        Edge::new(self.right, self.top)
    }
    pub fn vertices(&self) -> [usize; 4] {
        [self.bottom, self.left, self.right, self.top]
    }
}

/// Edges of one trajectory from the left boundary to the right boundary.
///
/// `cells[t]` is the 4-cell having `edges[t]` and `edges[t + 1]` as opposite
/// sides. Steps before `top_index` go up, steps after it go down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub edges: Vec<Edge>,
    pub cells: Vec<FourCell>,
    pub top_index: usize,
}

impl Trajectory {
    pub fn top_edge(&self) -> Edge {
        self.edges[self.top_index]
    }

    pub fn position(&self, e: Edge) -> Option<usize> {
        self.edges.iter().position(|&x| x == e)
    }

    /// The edge lies strictly after the top edge.
    pub fn in_descending_part(&self, e: Edge) -> bool {
        self.position(e).is_some_and(|p| p > self.top_index)
    }

    /// The edge lies strictly before the top edge.
    pub fn in_ascending_part(&self, e: Edge) -> bool {
        self.position(e).is_some_and(|p| p < self.top_index)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NeonTubes {
    pub boundary: Vec<Edge>,
    pub internal: Vec<Edge>,
}

impl NeonTubes {
    pub fn count(&self) -> usize {
        self.boundary.len() + self.internal.len()
    }
}

/// Outcome of the slim rectangular check, listing every violated clause.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SrReport {
    pub failures: Vec<String>,
}

impl SrReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.passed() {
            Ok(())
        } else {
            Err(Error::NotSlimRectangular(self.failures.join("; ")))
        }
    }
}

/// On-disk form of a diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeFile {
    pub n: usize,
    pub covers: Vec<[usize; 2]>,
    pub upper_order: Vec<Vec<usize>>,
    pub lower_order: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarDiagram {
    lattice: FiniteLattice,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
}

impl PlanarDiagram {
    /// Validates that the two orderings list exactly the covers.
    pub fn new(
        lattice: FiniteLattice,
        upper: Vec<Vec<usize>>,
        lower: Vec<Vec<usize>>,
    ) -> Result<PlanarDiagram> {
        let n = lattice.size();
        if upper.len() != n || lower.len() != n {
            return Err(Error::InvalidDiagram(format!(
                "cover orders must have {n} entries"
            )));
        }
        for x in 0..n {
            let mut u = upper[x].clone();
            u.sort_unstable();
            let mut expected = lattice.upper_covers(x).to_vec();
            expected.sort_unstable();
            if u != expected {
                return Err(Error::InvalidDiagram(format!(
                    "upper order of {x} does not list its upper covers"
                )));
            }
            let mut l = lower[x].clone();
            l.sort_unstable();
            let mut expected = lattice.lower_covers(x).to_vec();
            expected.sort_unstable();
            if l != expected {
                return Err(Error::InvalidDiagram(format!(
                    "lower order of {x} does not list its lower covers"
                )));
            }
        }
        Ok(PlanarDiagram {
            lattice,
            upper,
            lower,
        })
    }

    /// The diagram of the componentwise order on a set of coordinates, drawn
    /// at `(j − i, i + j)`; cover lists are sorted by direction, left first.
    pub fn from_coords(coords: &[Coord]) -> Result<PlanarDiagram> {
        let n = coords.len();
        let le = |a: Coord, b: Coord| a.0 <= b.0 && a.1 <= b.1;
        let mut by_sum: Vec<usize> = (0..n).collect();
        by_sum.sort_by_key(|&x| (coords[x].0 + coords[x].1, coords[x]));
        let mut covers = Vec::new();
        for x in 0..n {
            let mut minimal: Vec<usize> = Vec::new();
            for &y in &by_sum {
                if y == x || !le(coords[x], coords[y]) || coords[x] == coords[y] {
                    continue;
                }
                if minimal.iter().all(|&z| !le(coords[z], coords[y])) {
                    minimal.push(y);
                }
            }
            covers.extend(minimal.into_iter().map(|y| (x, y)));
        }
        let lattice = FiniteLattice::from_covers(n, &covers)?;
        // horizontal offset over vertical rise of an upward edge, as a fraction
        let direction = |from: Coord, to: Coord| -> (i64, i64) {
            let di = to.0 as i64 - from.0 as i64;
            let dj = to.1 as i64 - from.1 as i64;
            (dj - di, di + dj)
        };
        let cmp = |a: (i64, i64), b: (i64, i64)| (a.0 * b.1).cmp(&(b.0 * a.1));
        let mut upper = Vec::with_capacity(n);
        let mut lower = Vec::with_capacity(n);
        for x in 0..n {
            let mut u = lattice.upper_covers(x).to_vec();
            u.sort_by(|&a, &b| {
                cmp(
                    direction(coords[x], coords[a]),
                    direction(coords[x], coords[b]),
                )
            });
            let mut l = lattice.lower_covers(x).to_vec();
            l.sort_by(|&a, &b| {
                let da = direction(coords[a], coords[x]);
                let db = direction(coords[b], coords[x]);
                // a lower cover is further left when the edge up from it leans right
                cmp(db, da)
            });
            upper.push(u);
            lower.push(l);
        }
        PlanarDiagram::new(lattice, upper, lower)
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn poset(&self) -> &Poset {
        self.lattice.poset()
    }

    pub fn size(&self) -> usize {
        self.lattice.size()
    }

    pub fn upper_order(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    pub fn lower_order(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.lattice
            .covers()
            .iter()
            .map(|&(a, b)| Edge::new(a, b))
            .collect()
    }

    /// Leftmost and rightmost maximal chains from bottom to top.
    pub fn boundary_chains(&self) -> (Vec<usize>, Vec<usize>) {
        let walk = |pick: &dyn Fn(&[usize]) -> usize| {
            let mut chain = vec![self.lattice.bottom()];
            let mut x = self.lattice.bottom();
            while !self.upper[x].is_empty() {
                x = pick(&self.upper[x]);
                chain.push(x);
            }
            chain
        };
        (walk(&|u| u[0]), walk(&|u| u[u.len() - 1]))
    }

    /// The doubly irreducible elements on the left and on the right boundary.
    pub fn corners(&self) -> Result<(usize, usize)> {
        let l = &self.lattice;
        let doubly: Vec<usize> = (0..self.size())
            .filter(|&x| l.is_jir(x) && l.is_mir(x))
            .collect();
        if doubly.len() != 2 {
            return Err(Error::NotSlimRectangular(format!(
                "{} doubly irreducible elements, expected 2",
                doubly.len()
            )));
        }
        let (left, right) = self.boundary_chains();
        let (a, b) = (doubly[0], doubly[1]);
        let (lc, rc) = if left.contains(&a) && right.contains(&b) {
            (a, b)
        } else if left.contains(&b) && right.contains(&a) {
            (b, a)
        } else {
            return Err(Error::NotSlimRectangular(
                "corners are not on opposite boundaries".into(),
            ));
        };
        if l.meet(lc, rc) != l.bottom() || l.join(lc, rc) != l.top() {
            return Err(Error::NotSlimRectangular(
                "doubly irreducible elements are not complements".into(),
            ));
        }
        Ok((lc, rc))
    }

    pub fn l_proj(&self, x: usize) -> Result<usize> {
        Ok(self.lattice.meet(x, self.corners()?.0))
    }

    pub fn r_proj(&self, x: usize) -> Result<usize> {
        Ok(self.lattice.meet(x, self.corners()?.1))
    }

    /// Boundary heights of the two projections of every element.
    pub fn coordinates(&self) -> Result<Vec<Coord>> {
        let (lc, rc) = self.corners()?;
        let p = self.poset();
        let height = |x: usize| (p.down_set(x).count_ones(..) - 1) as u32;
        let l = &self.lattice;
        for c in [lc, rc] {
            let ideal = p.down_set(c);
            if !ideal
                .ones()
                .all(|y| ideal.ones().all(|z| p.comparable(y, z)))
            {
                return Err(Error::NotSlimRectangular(
                    "ideal of a corner is not a chain".into(),
                ));
            }
        }
        Ok((0..self.size())
            .map(|x| (height(l.meet(x, lc)), height(l.meet(x, rc))))
            .collect())
    }

    /// 4-cells from consecutive upper covers; a consecutive pair whose join
    /// does not cover both is reported as a non-4-cell region.
    pub fn four_cells(&self) -> Result<Vec<FourCell>> {
        let mut cells = Vec::new();
        for x in 0..self.size() {
            for w in self.upper[x].windows(2) {
                let (a, b) = (w[0], w[1]);
                let t = self.lattice.join(a, b);
                if !self.lattice.is_cover(a, t) || !self.lattice.is_cover(b, t) {
                    return Err(Error::InvalidDiagram(format!(
                        "region above {x} between {a} and {b} is not a 4-cell"
                    )));
                }
                cells.push(FourCell {
                    bottom: x,
                    left: a,
                    right: b,
                    top: t,
                });
            }
        }
        Ok(cells)
    }

    /// The 4-cell with the given bottom, if any.
    pub fn cell_with_bottom(&self, x: usize) -> Option<FourCell> {
        let u = &self.upper[x];
        if u.len() < 2 {
            return None;
        }
        let t = self.lattice.join(u[0], u[1]);
        if self.lattice.is_cover(u[0], t) && self.lattice.is_cover(u[1], t) {
            Some(FourCell {
                bottom: x,
                left: u[0],
                right: u[1],
                top: t,
            })
        } else {
            None
        }
    }

    /// Trajectories, each walked from its left boundary edge.
    ///
    /// The classes are also formed by union-find over opposite sides and
    /// the two partitions must agree.
    pub fn trajectories(&self) -> Result<Vec<Trajectory>> {
        let cells = self.four_cells()?;
        let edges = self.edges();
        let index: HashMap<Edge, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();

        let mut parent: Vec<usize> = (0..edges.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for c in &cells {
            for (e, f) in [
                (c.lower_left(), c.upper_right()),
                (c.lower_right(), c.upper_left()),
            ] {
                let (a, b) = (find(&mut parent, index[&e]), find(&mut parent, index[&f]));
                parent[a.max(b)] = a.min(b);
            }
        }

        // the cell lying to the right of an edge, and the opposite edge there
        let mut step: HashMap<Edge, (FourCell, Edge, bool)> = HashMap::new();
        for c in &cells {
            step.insert(c.lower_left(), (*c, c.upper_right(), true));
            step.insert(c.upper_left(), (*c, c.lower_right(), false));
        }

        let (left_chain, right_chain) = self.boundary_chains();
        let right_edges: std::collections::HashSet<Edge> = right_chain
            .windows(2)
            .map(|w| Edge::new(w[0], w[1]))
            .collect();
        let mut seen = vec![false; edges.len()];
        let mut out = Vec::new();
        for w in left_chain.windows(2) {
            let mut e = Edge::new(w[0], w[1]);
            let mut traj_edges = vec![e];
            let mut traj_cells = Vec::new();
            let mut ups = Vec::new();
            while let Some(&(c, next, up)) = step.get(&e) {
                traj_cells.push(c);
                ups.push(up);
                traj_edges.push(next);
                e = next;
                if traj_edges.len() > edges.len() {
                    return Err(Error::InvalidDiagram(
                        "trajectory does not terminate".into(),
                    ));
                }
            }
            if !right_edges.contains(&e) {
                return Err(Error::InvalidDiagram(format!(
                    "trajectory ends at ({}, {}) off the right boundary",
                    e.foot, e.peak
                )));
            }
            let class = find(&mut parent, index[&traj_edges[0]]);
            for t in &traj_edges {
                let i = index[t];
                if seen[i] || find(&mut parent, i) != class {
                    return Err(Error::InvalidDiagram(
                        "trajectory walk disagrees with opposite-side classes".into(),
                    ));
                }
                seen[i] = true;
            }
            let tops: Vec<usize> = (0..traj_edges.len())
                .filter(|&i| self.lattice.is_mir(traj_edges[i].foot))
                .collect();
            if tops.len() != 1 {
                return Err(Error::InvalidDiagram(format!(
                    "trajectory from ({}, {}) has {} neon tubes",
                    w[0],
                    w[1],
                    tops.len()
                )));
            }
            let top_index = tops[0];
            if ups.iter().enumerate().any(|(i, &up)| up != (i < top_index)) {
                return Err(Error::InvalidDiagram(
                    "trajectory does not rise to its neon tube and fall after it".into(),
                ));
            }
            out.push(Trajectory {
                edges: traj_edges,
                cells: traj_cells,
                top_index,
            });
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::InvalidDiagram(
                "some edge lies on no trajectory from the left boundary".into(),
            ));
        }
        Ok(out)
    }

    /// Edges with meet-irreducible foot, split by whether the foot is on the boundary.
    pub fn neon_tubes(&self) -> NeonTubes {
        let (left, right) = self.boundary_chains();
        let mut on_boundary = vec![false; self.size()];
        for &x in left.iter().chain(&right) {
            on_boundary[x] = true;
        }
        let mut tubes = NeonTubes::default();
        for e in self.edges() {
            if self.lattice.is_mir(e.foot) {
                if on_boundary[e.foot] {
                    tubes.boundary.push(e);
                } else {
                    tubes.internal.push(e);
                }
            }
        }
        tubes
    }

    pub fn check_slim_rectangular(&self) -> SrReport {
        let l = &self.lattice;
        let mut failures = Vec::new();
        if !l.is_semimodular() {
            failures.push("not semimodular".to_string());
        }
        if !l.is_slim() {
            failures.push("join-irreducibles are not a union of two chains".to_string());
        }
        if let Some(x) = (0..self.size()).find(|&x| self.upper[x].len() > 2) {
            failures.push(format!("element {x} has more than two upper covers"));
        }
        match self.four_cells() {
            Err(e) => failures.push(e.to_string()),
            Ok(cells) => {
                let edges = l.covers().len() as i64;
                let euler = edges - self.size() as i64 + 1;
                if euler != cells.len() as i64 {
                    failures.push(format!(
                        "{} 4-cells but the diagram bounds {} regions",
                        cells.len(),
                        euler
                    ));
                }
                for c in &cells {
                    let lo = &self.lower[c.top];
                    let adjacent = lo.windows(2).any(|w| w[0] == c.left && w[1] == c.right);
                    if !adjacent {
                        failures.push(format!(
                            "cell with bottom {} is not consistent with the lower order of {}",
                            c.bottom, c.top
                        ));
                        break;
                    }
                }
            }
        }
        if let Err(e) = self.corners() {
            failures.push(e.to_string());
        }
        SrReport { failures }
    }

    pub fn is_slim_rectangular(&self) -> bool {
        self.check_slim_rectangular().passed()
    }

    pub fn mirror(&self) -> PlanarDiagram {
        let rev = |v: &Vec<Vec<usize>>| {
            v.iter()
                .map(|xs| xs.iter().rev().copied().collect())
                .collect()
        };
        PlanarDiagram {
            lattice: self.lattice.clone(),
            upper: rev(&self.upper),
            lower: rev(&self.lower),
        }
    }

    fn bfs_code(&self) -> Vec<u8> {
        let n = self.size();
        let mut label = vec![u32::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = std::collections::VecDeque::from([self.lattice.bottom()]);
        label[self.lattice.bottom()] = 0;
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &y in &self.upper[x] {
                if label[y] == u32::MAX {
                    label[y] = order.len() as u32 + queue.len() as u32;
                    queue.push_back(y);
                }
            }
        }
        let mut code = Vec::new();
        let mut put = |v: u32| code.extend_from_slice(&v.to_be_bytes());
        put(n as u32);
        for &x in &order {
            put(self.upper[x].len() as u32);
            for &y in &self.upper[x] {
                put(label[y]);
            }
            put(self.lower[x].len() as u32);
            for &y in &self.lower[x] {
                put(label[y]);
            }
        }
        code
    }

    /// Lexicographically smaller of the breadth-first codes of the diagram
    /// and of its mirror image.
    pub fn canonical_code(&self) -> Vec<u8> {
        let a = self.bfs_code();
        let b = self.mirror().bfs_code();
        a.min(b)
    }

    pub fn to_file(&self) -> LatticeFile {
        LatticeFile {
            n: self.size(),
            covers: self.lattice.covers().iter().map(|&(a, b)| [a, b]).collect(),
            upper_order: self.upper.clone(),
            lower_order: self.lower.clone(),
        }
    }

    pub fn from_file(file: &LatticeFile) -> Result<PlanarDiagram> {
        let covers: Vec<(usize, usize)> = file.covers.iter().map(|c| (c[0], c[1])).collect();
        let lattice = FiniteLattice::from_covers(file.n, &covers)?;
        PlanarDiagram::new(lattice, file.upper_order.clone(), file.lower_order.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("diagram serializes")
    }

    pub fn from_json(text: &str) -> Result<PlanarDiagram> {
        let file: LatticeFile = serde_json::from_str(text).map_err(|e| Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        PlanarDiagram::from_file(&file)
    }
}

/// Coordinates of a grid with chains of lengths `p` and `q`, row-major,
/// so that the bottom gets id 0.
pub fn grid_coords(p: u32, q: u32) -> Vec<Coord> {
    (0..=p).flat_map(|i| (0..=q).map(move |j| (i, j))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s7() -> (PlanarDiagram, Vec<Coord>) {
        let coords = vec![(0, 0), (1, 0), (2, 0), (0, 1), (0, 2), (1, 1), (2, 2)];
        (PlanarDiagram::from_coords(&coords).unwrap(), coords)
    }

    #[test]
    fn b2_boundaries_and_corners() {
        let d = PlanarDiagram::from_coords(&grid_coords(1, 1)).unwrap();
        // ids: 0=(0,0) 1=(0,1) 2=(1,0) 3=(1,1)
        assert_eq!(d.boundary_chains(), (vec![0, 2, 3], vec![0, 1, 3]));
        assert_eq!(d.corners().unwrap(), (2, 1));
        assert_eq!(d.four_cells().unwrap().len(), 1);
        assert_eq!(d.trajectories().unwrap().len(), 2);
        assert!(d.is_slim_rectangular());
    }

    #[test]
    fn grid_counts() {
        let d = PlanarDiagram::from_coords(&grid_coords(2, 1)).unwrap();
        assert_eq!(d.boundary_chains().0.len(), 4);
        assert_eq!(d.four_cells().unwrap().len(), 2);
        assert_eq!(d.coordinates().unwrap(), grid_coords(2, 1));
        let t = d.neon_tubes();
        assert_eq!((t.boundary.len(), t.internal.len()), (3, 0));
        let g = PlanarDiagram::from_coords(&grid_coords(3, 2)).unwrap();
        assert_eq!(g.corners().unwrap(), (9, 2));
    }

    #[test]
    fn s7_structure() {
        let (d, coords) = s7();
        assert!(d.is_slim_rectangular(), "{:?}", d.check_slim_rectangular());
        assert_eq!(d.size(), 7);
        assert_eq!(d.lattice().length(), 3);
        assert_eq!(d.four_cells().unwrap().len(), 3);
        let trajectories = d.trajectories().unwrap();
        assert_eq!(trajectories.len(), 3);
        let tubes = d.neon_tubes();
        assert_eq!(tubes.internal, vec![Edge::new(5, 6)]);
        assert_eq!(tubes.boundary.len(), 2);
        assert_eq!(d.coordinates().unwrap(), coords);
        // left boundary 0, z_l, l, 1
        assert_eq!(d.boundary_chains().0, vec![0, 1, 2, 6]);
        // the lower covers of the top are listed left to right
        assert_eq!(d.lower_order(6), &[2, 5, 4]);
        assert_eq!(d.l_proj(5).unwrap(), 1);
        assert_eq!(d.canonical_code(), d.mirror().canonical_code());
    }

    #[test]
    fn chain_is_not_rectangular() {
        let d = PlanarDiagram::from_coords(&[(0, 0), (1, 0), (2, 0)]).unwrap();
        assert!(!d.is_slim_rectangular());
        assert!(d.corners().is_err());
    }

    #[test]
    fn json_round_trip() {
        let (d, _) = s7();
        let text = d.to_json();
        assert_eq!(PlanarDiagram::from_json(&text).unwrap(), d);
        assert_eq!(PlanarDiagram::from_json(&text).unwrap().to_json(), text);
    }

    #[test]
    fn mirror_involution() {
        let (d, _) = s7();
        assert_eq!(d.mirror().mirror(), d);
        let g = PlanarDiagram::from_coords(&grid_coords(2, 1)).unwrap();
        let h = PlanarDiagram::from_coords(&grid_coords(1, 2)).unwrap();
        assert_eq!(g.canonical_code(), h.canonical_code());
    }
}
