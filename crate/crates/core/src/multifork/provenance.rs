use std::collections::HashMap;

use serde::Serialize;

use crate::diagram::{grid_coords, Coord, Edge, FourCell, PlanarDiagram, Trajectory};
use crate::error::{Error, Result};
use crate::multifork::forest::{CellForest, NodeId};
use crate::multifork::sequence::{ForkStep, MultiforkSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum TubeKind {
    /// On the upper left boundary chain.
    UpperLeft,
    /// On the upper right boundary chain.
    UpperRight,
    Internal,
}

/// Territory record of one neon tube, as forest nodes of its creation stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TubeRecord {
    pub edge: Edge,
    pub kind: TubeKind,
    /// 0 for boundary tubes, otherwise the 1-based creating step.
    pub step: usize,
    pub ot: Vec<NodeId>,
    pub eot: Vec<NodeId>,
    pub leot: Vec<NodeId>,
    pub reot: Vec<NodeId>,
}

/// What one multifork step created.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub fork: ForkStep,
    /// Forest node of the 4-cell the step was performed at.
    pub origin: NodeId,
    pub peak: usize,
    /// The new neon tubes, left to right.
    pub tubes: Vec<Edge>,
}

/// A slim rectangular lattice together with the history of its construction.
#[derive(Clone, Debug)]
pub struct ProvenancedLattice {
    seq: MultiforkSequence,
    coords: Vec<Coord>,
    index: HashMap<Coord, usize>,
    diagram: PlanarDiagram,
    forest: CellForest,
    leaves: HashMap<FourCell, NodeId>,
    tubes: Vec<TubeRecord>,
    steps: Vec<StepRecord>,
}

/// Coordinates after a `k`-fold extension at the cell with bottom `(a, b)`.
///
/// Old elements keep their positions in the list; the new ones are appended:
/// the new tube feet left to right, the rest of the staircase under the peak,
/// then the subdivision points of the left and of the right path.
pub fn extend_coords(coords: &[Coord], a: u32, b: u32, k: u32) -> Vec<Coord> {
    let shift = |v: u32, cut: u32| if v <= cut { v } else { v + k };
    let mut out: Vec<Coord> = coords
        .iter()
        .map(|&(i, j)| (shift(i, a), shift(j, b)))
        .collect();
    for c in 1..=k {
        out.push((a + k + 1 - c, b + c));
    }
    for x in 1..k {
        for y in 1..=(k - x) {
            out.push((a + x, b + y));
        }
    }
    for c in 1..=k {
        for j in 0..=b {
            out.push((a + c, j));
        }
    }
    for c in 1..=k {
        for i in 0..=a {
            out.push((i, b + c));
        }
    }
    out
}

/// The `[0, a+1] × [0, b+1]` rectangle is fully present.
pub fn rectangle_present(index: &HashMap<Coord, usize>, a: u32, b: u32) -> bool {
    (0..=a + 1).all(|i| (0..=b + 1).all(|j| index.contains_key(&(i, j))))
}

impl ProvenancedLattice {
    pub fn grid(p: u32, q: u32) -> Result<ProvenancedLattice> {
        if p < 1 || q < 1 {
            return Err(Error::Argument(format!(
                "grid dimensions must be at least 1, got {p} and {q}"
            )));
        }
        let coords = grid_coords(p, q);
        let diagram = PlanarDiagram::from_coords(&coords)?;
        let mut forest = CellForest::default();
        let mut leaves = HashMap::new();
        for cell in diagram.four_cells()? {
            leaves.insert(cell, forest.add_root(cell, 0));
        }
        let index = index_of(&coords);
        let trajectories = diagram.trajectories()?;
        let mut tubes = Vec::new();
        // upper left boundary from the left corner upwards, then the upper right one
        for j in 0..q {
            let e = Edge::new(index[&(p, j)], index[&(p, j + 1)]);
            tubes.push(record(e, TubeKind::UpperLeft, 0, &trajectories, &leaves)?);
        }
        for i in 0..p {
            let e = Edge::new(index[&(i, q)], index[&(i + 1, q)]);
            tubes.push(record(e, TubeKind::UpperRight, 0, &trajectories, &leaves)?);
        }
        Ok(ProvenancedLattice {
            seq: MultiforkSequence::grid(p, q),
            coords,
            index,
            diagram,
            forest,
            leaves,
            tubes,
            steps: Vec::new(),
        })
    }

    pub fn build(seq: &MultiforkSequence) -> Result<ProvenancedLattice> {
        let mut pl = ProvenancedLattice::grid(seq.p, seq.q).map_err(|e| e.at_step(0))?;
        for (i, s) in seq.steps.iter().enumerate() {
            pl = pl.extend(s.a, s.b, s.k).map_err(|e| e.at_step(i + 1))?;
        }
        Ok(pl)
    }

    /// The lattice after the first `s` steps.
    pub fn stage(&self, s: usize) -> Result<ProvenancedLattice> {
        ProvenancedLattice::build(&self.seq.prefix(s))
    }

    /// `k`-fold multifork extension at the distributive 4-cell with address `(a, b)`.
    pub fn extend(&self, a: u32, b: u32, k: u32) -> Result<ProvenancedLattice> {
        if k < 1 {
            return Err(Error::Argument("multiplicity must be at least 1".into()));
        }
        let h = self.resolve_address((a, b))?;
        if !self.diagram.lattice().is_distributive_ideal_grid(h.top) {
            return Err(Error::CellNotDistributive(a, b));
        }
        if !rectangle_present(&self.index, a, b) {
            return Err(Error::Internal(format!(
                "grid ideal above ({a}, {b}) is not a coordinate rectangle"
            )));
        }
        let old_n = self.coords.len();
        let coords = extend_coords(&self.coords, a, b, k);
        let diagram = PlanarDiagram::from_coords(&coords)?;
        diagram.check_slim_rectangular().into_result()?;
        let old_len = self.diagram.lattice().length();
        if diagram.lattice().length() != old_len + k as usize {
            return Err(Error::Internal(format!(
                "length went from {old_len} to {} after a {k}-fold step",
                diagram.lattice().length()
            )));
        }
        let index = index_of(&coords);
        let stage = self.steps.len() + 1;

        // split cells, keyed by old bottom coordinates
        let mut split: HashMap<Coord, NodeId> = HashMap::new();
        split.insert((a, b), self.leaves[&h]);
        for j in 0..b {
            let c = self.resolve_address((a, j))?;
            split.insert((a, j), self.leaves[&c]);
        }
        for i in 0..a {
            let c = self.resolve_address((i, b))?;
            split.insert((i, b), self.leaves[&c]);
        }
        let split_nodes: std::collections::HashSet<NodeId> = split.values().copied().collect();

        let mut forest = self.forest.clone();
        let mut leaves = HashMap::new();
        let mut child_count: HashMap<Coord, usize> = HashMap::new();
        for cell in diagram.four_cells()? {
            if let Some(&node) = self.leaves.get(&cell) {
                if !split_nodes.contains(&node) {
                    leaves.insert(cell, node);
                    continue;
                }
            }
            let (x, y) = coords[cell.bottom];
            let parent_key = if x >= a && y >= b && (x - a) + (y - b) <= k {
                (a, b)
            } else if y < b && x >= a && x <= a + k {
                (a, y)
            } else if x < a && y >= b && y <= b + k {
                (x, b)
            } else {
                return Err(Error::Internal(format!(
                    "new cell with bottom ({x}, {y}) lies outside the subdivided region"
                )));
            };
            *child_count.entry(parent_key).or_default() += 1;
            let node = forest.add_child(split[&parent_key], cell, stage);
            leaves.insert(cell, node);
        }
        for &key in split.keys() {
            let expected = if key == (a, b) {
                ((k + 1) * (k + 2) / 2) as usize
            } else {
                (k + 1) as usize
            };
            if child_count.get(&key).copied().unwrap_or(0) != expected {
                return Err(Error::Internal(format!(
                    "cell ({}, {}) split into {} cells, expected {expected}",
                    key.0,
                    key.1,
                    child_count.get(&key).copied().unwrap_or(0)
                )));
            }
        }
        if leaves.len() + split.len() != self.leaves.len() + child_count.values().sum::<usize>() {
            return Err(Error::Internal("an old cell disappeared".into()));
        }

        let peak = index[&(a + k + 1, b + k + 1)];
        let trajectories = diagram.trajectories()?;
        let mut tubes = self.tubes.clone();
        let mut new_tubes = Vec::new();
        for c in 1..=k {
            let foot = old_n + (c - 1) as usize;
            let e = Edge::new(foot, peak);
            if !diagram.lattice().is_cover(foot, peak) || !diagram.lattice().is_mir(foot) {
                return Err(Error::Internal(format!("new tube {c} is not a neon tube")));
            }
            tubes.push(record(
                e,
                TubeKind::Internal,
                stage,
                &trajectories,
                &leaves,
            )?);
            new_tubes.push(e);
        }
        if diagram.neon_tubes().count() != tubes.len() {
            return Err(Error::Internal(format!(
                "{} neon tubes but {} records",
                diagram.neon_tubes().count(),
                tubes.len()
            )));
        }
        let mut steps = self.steps.clone();
        steps.push(StepRecord {
            fork: ForkStep { a, b, k },
            origin: self.leaves[&h],
            peak,
            tubes: new_tubes,
        });
        let mut seq = self.seq.clone();
        seq.steps.push(ForkStep { a, b, k });
        Ok(ProvenancedLattice {
            seq,
            coords,
            index,
            diagram,
            forest,
            leaves,
            tubes,
            steps,
        })
    }

    pub fn sequence(&self) -> &MultiforkSequence {
        &self.seq
    }

    pub fn diagram(&self) -> &PlanarDiagram {
        &self.diagram
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn element_at(&self, c: Coord) -> Option<usize> {
        self.index.get(&c).copied()
    }

    pub fn forest(&self) -> &CellForest {
        &self.forest
    }

    pub fn tubes(&self) -> &[TubeRecord] {
        &self.tubes
    }

    pub fn tube(&self, e: Edge) -> Option<&TubeRecord> {
        self.tubes.iter().find(|t| t.edge == e)
    }

    pub fn steps(&self) -> &[StepRecord] {
        &self.steps
    }

    pub fn size(&self) -> usize {
        self.coords.len()
    }

    pub fn length(&self) -> usize {
        (self.seq.p + self.seq.q) as usize
            + self.steps.iter().map(|s| s.fork.k as usize).sum::<usize>()
    }

    /// Number of neon tubes.
    pub fn antube(&self) -> usize {
        self.tubes.len()
    }

    pub fn leaf_node(&self, cell: &FourCell) -> Option<NodeId> {
        self.leaves.get(cell).copied()
    }

    pub fn cells(&self) -> Vec<FourCell> {
        let mut v: Vec<FourCell> = self.leaves.keys().copied().collect();
        v.sort_by_key(|c| self.coords[c.bottom]);
        v
    }

    /// Boundary heights of the projections of the cell's bottom.
    pub fn cell_address(&self, cell: &FourCell) -> Coord {
        self.coords[cell.bottom]
    }

    pub fn resolve_address(&self, addr: Coord) -> Result<FourCell> {
        self.index
            .get(&addr)
            .and_then(|&x| self.diagram.cell_with_bottom(x))
            .ok_or(Error::CellNotFound(addr.0, addr.1))
    }

    /// The 4-cells with a grid principal ideal above their top, by address.
    pub fn distributive_cells(&self) -> Vec<Coord> {
        let l = self.diagram.lattice();
        let mut v: Vec<Coord> = self
            .leaves
            .keys()
            .filter(|c| l.is_distributive_ideal_grid(c.top))
            .map(|c| self.coords[c.bottom])
            .collect();
        v.sort_unstable();
        v
    }
}

fn index_of(coords: &[Coord]) -> HashMap<Coord, usize> {
    coords.iter().enumerate().map(|(i, &c)| (c, i)).collect()
}

fn record(
    e: Edge,
    kind: TubeKind,
    step: usize,
    trajectories: &[Trajectory],
    leaves: &HashMap<FourCell, NodeId>,
) -> Result<TubeRecord> {
    let t = trajectories
        .iter()
        .find(|t| t.top_edge() == e)
        .ok_or_else(|| {
            Error::Internal(format!("no trajectory has ({}, {}) on top", e.foot, e.peak))
        })?;
    let nodes = |cells: &[FourCell]| -> Vec<NodeId> { cells.iter().map(|c| leaves[c]).collect() };
    let ot = nodes(&t.cells);
    let (leot, reot) = match kind {
        TubeKind::UpperLeft => (Vec::new(), ot.clone()),
        TubeKind::UpperRight => (ot.clone(), Vec::new()),
        TubeKind::Internal => {
            let top = t.top_index;
            if top == 0 || top >= t.cells.len() {
                return Err(Error::Internal("internal tube on a boundary".into()));
            }
            (nodes(&t.cells[..top - 1]), nodes(&t.cells[top + 1..]))
        }
    };
    let mut eot = leot.clone();
    eot.extend(reot.iter().copied());
    Ok(TubeRecord {
        edge: e,
        kind,
        step,
        ot,
        eot,
        leot,
        reot,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s7() -> ProvenancedLattice {
        ProvenancedLattice::build(&MultiforkSequence::grid(1, 1).fork(0, 0, 1)).unwrap()
    }

    #[test]
    fn s7_fixture() {
        let pl = s7();
        assert_eq!(pl.size(), 7);
        assert_eq!(pl.length(), 3);
        assert_eq!(pl.diagram().lattice().length(), 3);
        assert_eq!(pl.antube(), 3);
        let addrs: Vec<Coord> = pl.cells().iter().map(|c| pl.cell_address(c)).collect();
        assert_eq!(addrs, vec![(0, 0), (0, 1), (1, 0)]);
        // all three cells descend from the single grid cell
        let root = pl.steps()[0].origin;
        for c in pl.cells() {
            let n = pl.leaf_node(&c).unwrap();
            assert!(pl.forest().is_descendant_or_equal(n, root));
        }
        let internal = pl
            .tubes()
            .iter()
            .find(|t| t.kind == TubeKind::Internal)
            .unwrap();
        assert_eq!(internal.ot.len(), 2);
        assert!(internal.eot.is_empty());
    }

    #[test]
    fn grid_fixture() {
        let g = ProvenancedLattice::grid(2, 2).unwrap();
        assert_eq!(g.size(), 9);
        assert_eq!(g.cells().len(), 4);
        assert_eq!(g.antube(), 4);
        for t in g.tubes() {
            assert_eq!(t.ot.len(), 2);
        }
        let g = ProvenancedLattice::grid(3, 1).unwrap();
        assert_eq!((g.size(), g.length()), (8, 4));
        assert!(ProvenancedLattice::grid(0, 2).is_err());
    }

    #[test]
    fn two_fold_on_grid() {
        let pl = ProvenancedLattice::build(&MultiforkSequence::grid(2, 2).fork(1, 1, 2)).unwrap();
        // 9 old + 2 feet + 1 staircase + 2·2 + 2·2 path points
        assert_eq!(pl.size(), 20);
        assert_eq!(pl.length(), 6);
        let tubes = pl.diagram().neon_tubes();
        assert_eq!((tubes.boundary.len(), tubes.internal.len()), (4, 2));
        let one = ProvenancedLattice::build(&MultiforkSequence::grid(2, 2).fork(1, 1, 1)).unwrap();
        assert_eq!(one.size(), 14);
    }

    #[test]
    fn step_errors() {
        let e =
            ProvenancedLattice::build(&MultiforkSequence::grid(1, 1).fork(0, 0, 1).fork(5, 5, 1))
                .unwrap_err();
        assert_eq!(e, Error::CellNotFound(5, 5).at_step(2));
        // the cell above the new feet in S_7 is not distributive
        let e = s7().extend(1, 0, 1).unwrap_err();
        assert_eq!(e, Error::CellNotDistributive(1, 0));
        assert!(ProvenancedLattice::grid(1, 1)
            .unwrap()
            .resolve_address((5, 5))
            .is_err());
    }

    #[test]
    fn lower_covers_of_old_peaks_persist() {
        let pl = ProvenancedLattice::build(
            &MultiforkSequence::grid(2, 2)
                .fork(1, 1, 2)
                .fork(2, 1, 1)
                .fork(0, 0, 1),
        )
        .unwrap();
        for s in 1..=pl.steps().len() {
            let st = pl.stage(s).unwrap();
            let rec = &st.steps()[s - 1];
            assert_eq!(
                st.diagram().lower_order(rec.peak),
                pl.diagram().lower_order(rec.peak)
            );
        }
    }
}
