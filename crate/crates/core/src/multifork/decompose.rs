use std::collections::{BTreeSet, HashMap, HashSet};

use crate::diagram::{Coord, PlanarDiagram};
use crate::error::{Error, Result};
use crate::multifork::provenance::{extend_coords, rectangle_present, ProvenancedLattice};
use crate::multifork::sequence::MultiforkSequence;

/// A multifork sequence that rebuilds the given slim rectangular diagram.
pub fn decompose(diagram: &PlanarDiagram) -> Result<MultiforkSequence> {
    diagram.check_slim_rectangular().into_result()?;
    let coords = diagram.coordinates()?;
    let redrawn = PlanarDiagram::from_coords(&coords)?;
    if &redrawn != diagram {
        return Err(Error::NotSlimRectangular(
            "cover orders differ from the coordinate drawing".into(),
        ));
    }
    decompose_coords(&coords)
}

/// A multifork sequence whose lattice has exactly the given coordinate set.
pub fn decompose_coords(coords: &[Coord]) -> Result<MultiforkSequence> {
    let set: BTreeSet<Coord> = coords.iter().copied().collect();
    if set.len() != coords.len() {
        return Err(Error::InvalidDiagram("repeated coordinates".into()));
    }
    let mut failed = HashSet::new();
    let seq = search(&set, &mut failed)?.ok_or_else(|| {
        Error::NotSlimRectangular("no multifork sequence produces this lattice".into())
    })?;
    let built = ProvenancedLattice::build(&seq)?;
    let got: BTreeSet<Coord> = built.coords().iter().copied().collect();
    if got != set {
        return Err(Error::Internal(
            "decomposition does not rebuild the lattice".into(),
        ));
    }
    Ok(seq)
}

fn search(
    set: &BTreeSet<Coord>,
    failed: &mut HashSet<BTreeSet<Coord>>,
) -> Result<Option<MultiforkSequence>> {
    if failed.contains(set) {
        return Ok(None);
    }
    let p = set.iter().map(|c| c.0).max().unwrap_or(0);
    let q = set.iter().map(|c| c.1).max().unwrap_or(0);
    if set.len() == ((p + 1) * (q + 1)) as usize {
        if p == 0 || q == 0 {
            return Ok(None);
        }
        return Ok(Some(MultiforkSequence::grid(p, q)));
    }
    let list: Vec<Coord> = set.iter().copied().collect();
    let diagram = PlanarDiagram::from_coords(&list)?;
    let l = diagram.lattice();
    let precipitous = |x: usize, y: usize| list[x].0 != list[y].0 && list[x].1 != list[y].1;
    for peak in 0..list.len() {
        let feet: Vec<usize> = diagram
            .lower_order(peak)
            .iter()
            .copied()
            .filter(|&f| precipitous(f, peak) && l.is_mir(f))
            .collect();
        if feet.is_empty() {
            continue;
        }
        let removed = |c: Coord| {
            feet.iter().any(|&f| {
                let fc = list[f];
                (c.0 == fc.0 && c.1 <= fc.1) || (c.1 == fc.1 && c.0 <= fc.0)
            })
        };
        let rest: Vec<Coord> = list.iter().copied().filter(|&c| !removed(c)).collect();
        let gone_i = feet.iter().all(|&f| rest.iter().all(|c| c.0 != list[f].0));
        let gone_j = feet.iter().all(|&f| rest.iter().all(|c| c.1 != list[f].1));
        if !gone_i || !gone_j {
            continue;
        }
        let rank = |vals: BTreeSet<u32>| -> HashMap<u32, u32> {
            vals.into_iter()
                .enumerate()
                .map(|(r, v)| (v, r as u32))
                .collect()
        };
        let ri = rank(rest.iter().map(|c| c.0).collect());
        let rj = rank(rest.iter().map(|c| c.1).collect());
        let compressed: Vec<Coord> = rest.iter().map(|c| (ri[&c.0], rj[&c.1])).collect();
        let others: Vec<Coord> = diagram
            .lower_order(peak)
            .iter()
            .filter(|x| !feet.contains(x))
            .map(|&x| (ri[&list[x].0], rj[&list[x].1]))
            .collect();
        if others.is_empty() {
            continue;
        }
        let a = others.iter().map(|c| c.0).min().unwrap_or(0);
        let b = others.iter().map(|c| c.1).min().unwrap_or(0);
        let index: HashMap<Coord, usize> = compressed
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i))
            .collect();
        if !rectangle_present(&index, a, b) {
            continue;
        }
        let k = feet.len() as u32;
        let again: BTreeSet<Coord> = extend_coords(&compressed, a, b, k).into_iter().collect();
        if &again != set {
            continue;
        }
        let smaller: BTreeSet<Coord> = compressed.into_iter().collect();
        if let Some(seq) = search(&smaller, failed)? {
            return Ok(Some(seq.fork(a, b, k)));
        }
    }
    failed.insert(set.clone());
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roundtrip(seq: &MultiforkSequence) {
        let pl = ProvenancedLattice::build(seq).unwrap();
        let found = decompose(pl.diagram()).unwrap();
        let again = ProvenancedLattice::build(&found).unwrap();
        let a: BTreeSet<Coord> = pl.coords().iter().copied().collect();
        let b: BTreeSet<Coord> = again.coords().iter().copied().collect();
        assert_eq!(a, b);
        assert_eq!(found.length(), seq.length());
    }

    #[test]
    fn grids_and_forks_round_trip() {
        roundtrip(&MultiforkSequence::grid(2, 3));
        roundtrip(&MultiforkSequence::grid(1, 1).fork(0, 0, 1));
        roundtrip(&MultiforkSequence::grid(2, 2).fork(1, 1, 2));
        roundtrip(&MultiforkSequence::grid(1, 1).fork(0, 0, 3).fork(2, 0, 1));
        roundtrip(
            &MultiforkSequence::grid(2, 2)
                .fork(1, 1, 2)
                .fork(2, 1, 1)
                .fork(0, 0, 1),
        );
    }

    #[test]
    fn s7_sequence() {
        let pl = ProvenancedLattice::build(&MultiforkSequence::grid(1, 1).fork(0, 0, 1)).unwrap();
        assert_eq!(
            decompose(pl.diagram()).unwrap(),
            MultiforkSequence::grid(1, 1).fork(0, 0, 1)
        );
    }

    #[test]
    fn rejects_non_slim_rectangular() {
        // a chain is not rectangular
        assert!(decompose_coords(&[(0, 0), (1, 0)]).is_err());
    }
}
