//! Lamps of a provenanced slim rectangular lattice, their territories, the
//! relations that order them, and the comparison with join-irreducible
//! congruences.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::diagram::Edge;
use crate::error::{Error, Result};
use crate::multifork::{NodeId, ProvenancedLattice, TubeKind, TubeRecord};
use crate::order::{congruence_lattice, principal_congruence, Poset};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lamp {
    pub kind: TubeKind,
    pub foot: usize,
    pub peak: usize,
    /// Neon tubes, left to right.
    pub tubes: Vec<Edge>,
    /// 0 for boundary lamps, otherwise the creating step.
    pub step: usize,
}

impl Lamp {
    pub fn is_internal(&self) -> bool {
        self.kind == TubeKind::Internal
    }
}

/// Boundary lamps (upper left chain bottom-up, then upper right chain
/// bottom-up), followed by the internal lamps in order of creation.
pub fn lamps(pl: &ProvenancedLattice) -> Vec<Lamp> {
    let mut out: Vec<Lamp> = pl
        .tubes()
        .iter()
        .filter(|t| t.kind != TubeKind::Internal)
        .map(|t| Lamp {
            kind: t.kind,
            foot: t.edge.foot,
            peak: t.edge.peak,
            tubes: vec![t.edge],
            step: 0,
        })
        .collect();
    let l = pl.diagram().lattice();
    for (s, rec) in pl.steps().iter().enumerate() {
        out.push(Lamp {
            kind: TubeKind::Internal,
            foot: l.meet_all(rec.tubes.iter().map(|e| e.foot)),
            peak: rec.peak,
            tubes: rec.tubes.clone(),
            step: s + 1,
        });
    }
    out
}

/// Index of the lamp owning each neon tube.
pub fn tube_owner(lamps: &[Lamp]) -> HashMap<Edge, usize> {
    lamps
        .iter()
        .enumerate()
        .flat_map(|(i, lamp)| lamp.tubes.iter().map(move |&e| (e, i)))
        .collect()
}

/// The circumscribed rectangle of an internal lamp.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CircR {
    /// Meet of all lower covers of the peak.
    pub bottom: usize,
    pub peak: usize,
    /// Forest node of the cell the lamp's multifork was performed at.
    pub origin: NodeId,
}

pub fn circ_r(pl: &ProvenancedLattice, lamp: &Lamp) -> Result<CircR> {
    if !lamp.is_internal() {
        return Err(Error::Precondition(format!(
            "lamp with foot {} is a boundary lamp",
            lamp.foot
        )));
    }
    let l = pl.diagram().lattice();
    let bottom = l.meet_all(l.lower_covers(lamp.peak).iter().copied());
    let origin = pl.steps()[lamp.step - 1].origin;
    Ok(CircR {
        bottom,
        peak: lamp.peak,
        origin,
    })
}

fn records<'a>(pl: &'a ProvenancedLattice, lamp: &Lamp) -> Vec<&'a TubeRecord> {
    lamp.tubes
        .iter()
        .map(|&e| pl.tube(e).expect("every lamp tube has a record"))
        .collect()
}

fn origins(pl: &ProvenancedLattice, lamps: &[Lamp]) -> Vec<Option<NodeId>> {
    lamps
        .iter()
        .map(|lamp| lamp.is_internal().then(|| pl.steps()[lamp.step - 1].origin))
        .collect()
}

/// Pairs `(I, J)` of lamp indices whose circumscribed rectangle origin of
/// `I` descends from a cell of the illuminated area of `J`.
pub fn rho_circr(pl: &ProvenancedLattice) -> Vec<(usize, usize)> {
    let ls = lamps(pl);
    let origin = origins(pl, &ls);
    let forest = pl.forest();
    let enl: Vec<Vec<NodeId>> = ls
        .iter()
        .map(|j| {
            records(pl, j)
                .iter()
                .flat_map(|r| r.ot.iter().copied())
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for (i, o) in origin.iter().enumerate() {
        let Some(o) = *o else { continue };
        for (j, nodes) in enl.iter().enumerate() {
            if i != j && forest.under_any(o, nodes) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Pairs `(I, J)` with the foot of the internal lamp `I` inside the
/// illuminated area of `J`: every cell incident to the foot descends from a
/// cell of that area.
pub fn rho_foot(pl: &ProvenancedLattice) -> Vec<(usize, usize)> {
    let ls = lamps(pl);
    let forest = pl.forest();
    let mut incident: HashMap<usize, Vec<NodeId>> = HashMap::new();
    for cell in pl.cells() {
        let node = pl.leaf_node(&cell).expect("cells are leaves");
        for v in cell.vertices() {
            incident.entry(v).or_default().push(node);
        }
    }
    let enl: Vec<Vec<NodeId>> = ls
        .iter()
        .map(|j| {
            records(pl, j)
                .iter()
                .flat_map(|r| r.ot.iter().copied())
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for (i, lamp) in ls.iter().enumerate() {
        if !lamp.is_internal() {
            continue;
        }
        let around = incident.get(&lamp.foot).map_or(&[][..], Vec::as_slice);
        for (j, nodes) in enl.iter().enumerate() {
            if i != j && !around.is_empty() && around.iter().all(|&c| forest.under_any(c, nodes)) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Pairs `(I, J)` with the foot of the internal lamp `I` a vertex of some
/// cell of the illuminated area of `J`, boundary included.
pub fn rho_foot_closed(pl: &ProvenancedLattice) -> Vec<(usize, usize)> {
    let ls = lamps(pl);
    let forest = pl.forest();
    let mut memo = HashMap::new();
    let enl: Vec<BTreeSet<usize>> = ls
        .iter()
        .map(|j| {
            let nodes: Vec<NodeId> = records(pl, j)
                .iter()
                .flat_map(|r| r.ot.iter().copied())
                .collect();
            forest.leaf_vertices(&nodes, &mut memo)
        })
        .collect();
    let mut out = Vec::new();
    for (i, lamp) in ls.iter().enumerate() {
        if !lamp.is_internal() {
            continue;
        }
        for (j, verts) in enl.iter().enumerate() {
            if i != j && verts.contains(&lamp.foot) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Pairs `(I, J)` with the origin of `I` inside the left or the right
/// essential part of the territory of one tube of `J`.
pub fn rho_otcr(pl: &ProvenancedLattice) -> Vec<(usize, usize)> {
    let ls = lamps(pl);
    let origin = origins(pl, &ls);
    let forest = pl.forest();
    let mut out = Vec::new();
    for (i, o) in origin.iter().enumerate() {
        let Some(o) = *o else { continue };
        for (j, lamp) in ls.iter().enumerate() {
            if i == j {
                continue;
            }
            let inside = records(pl, lamp)
                .iter()
                .any(|r| forest.under_any(o, &r.leot) || forest.under_any(o, &r.reot));
            if inside {
                out.push((i, j));
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct LampPoset {
    pub lamps: Vec<Lamp>,
    /// `order.leq(i, j)` iff lamp `i` is below lamp `j`.
    pub order: Poset,
}

impl LampPoset {
    pub fn cover_edges(&self) -> &[(usize, usize)] {
        self.order.covers()
    }
}

pub fn lamp_poset(pl: &ProvenancedLattice) -> Result<LampPoset> {
    let ls = lamps(pl);
    let order = Poset::from_relation(ls.len(), &rho_foot(pl))?;
    Ok(LampPoset { lamps: ls, order })
}

/// The lamps owning the top edges of the trajectories through the upper
/// left and the upper right edge of the circumscribed rectangle.
pub fn nwl_nel(pl: &ProvenancedLattice) -> Result<Vec<Option<(usize, usize)>>> {
    let ls = lamps(pl);
    let owner = tube_owner(&ls);
    let d = pl.diagram();
    let trajectories = d.trajectories()?;
    let mut through: HashMap<Edge, usize> = HashMap::new();
    for (t, traj) in trajectories.iter().enumerate() {
        for &e in &traj.edges {
            through.insert(e, t);
        }
    }
    let top_lamp = |e: Edge| -> Result<usize> {
        let t = through[&e];
        owner
            .get(&trajectories[t].top_edge())
            .copied()
            .ok_or_else(|| Error::Internal("trajectory top is not a lamp tube".into()))
    };
    ls.iter()
        .map(|lamp| {
            if !lamp.is_internal() {
                return Ok(None);
            }
            let lower = d.lower_order(lamp.peak);
            let left = Edge::new(lower[0], lamp.peak);
            let right = Edge::new(lower[lower.len() - 1], lamp.peak);
            Ok(Some((top_lamp(left)?, top_lamp(right)?)))
        })
        .collect()
}

/// Lamp covers `U ≺ V` with `U` internal and `V` minimal among `Nwl U`, `Nel U`,
/// where minimality is taken in the order generated by these pairs.
pub fn covers_via_nwl_nel(pl: &ProvenancedLattice) -> Result<Vec<(usize, usize)>> {
    let nn = nwl_nel(pl)?;
    let pairs: Vec<(usize, usize)> = nn
        .iter()
        .enumerate()
        .filter_map(|(u, x)| x.map(|(a, b)| [(u, a), (u, b)]))
        .flatten()
        .collect();
    let order = Poset::from_relation(nn.len(), &pairs)?;
    let mut out = BTreeSet::new();
    for (u, x) in nn.iter().enumerate() {
        let Some((a, b)) = *x else { continue };
        for v in [a, b] {
            let w = if v == a { b } else { a };
            if !order.lt(w, v) {
                out.insert((u, v));
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Outcome of comparing the lamp poset with the join-irreducible congruences.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    /// Index of `con(Foot I, Peak I)` among the join-irreducible congruences.
    pub map: Vec<Option<usize>>,
    pub failures: Vec<String>,
}

impl IsoReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn verify_lamp_con_iso(pl: &ProvenancedLattice) -> Result<IsoReport> {
    let lp = lamp_poset(pl)?;
    let l = pl.diagram().lattice();
    let con = congruence_lattice(l);
    let map: Vec<Option<usize>> = lp
        .lamps
        .iter()
        .map(|lamp| con.index_of(&principal_congruence(l, lamp.foot, lamp.peak)))
        .collect();
    let mut failures = Vec::new();
    if map.iter().any(Option::is_none) {
        failures.push("some lamp congruence is not join-irreducible".to_string());
    }
    let hit: BTreeSet<usize> = map.iter().flatten().copied().collect();
    if hit.len() != map.len() {
        failures.push("two lamps generate the same congruence".to_string());
    }
    if hit.len() != con.jir_congruences.len() {
        failures.push(format!(
            "{} lamps but {} join-irreducible congruences",
            map.len(),
            con.jir_congruences.len()
        ));
    }
    if failures.is_empty() {
        for i in 0..map.len() {
            for j in 0..map.len() {
                let (a, b) = (map[i].unwrap_or(0), map[j].unwrap_or(0));
                if lp.order.leq(i, j) != con.order.leq(a, b) {
                    failures.push(format!("order differs on lamps {i} and {j}"));
                }
            }
        }
    }
    Ok(IsoReport { map, failures })
}

/// Some internal lamp other than the owner has its origin inside the left
/// or right essential part of the tube's territory.
pub(crate) fn tube_is_used(pl: &ProvenancedLattice, tube: Edge) -> bool {
    let Some(rec) = pl.tube(tube) else {
        return false;
    };
    let forest = pl.forest();
    pl.steps().iter().enumerate().any(|(s, step)| {
        s + 1 != rec.step
            && (forest.under_any(step.origin, &rec.leot)
                || forest.under_any(step.origin, &rec.reot))
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LampUsage {
    pub lamp: usize,
    /// `u` for a used tube, `0` for an unused one, left to right.
    pub pattern: String,
    pub used: usize,
    pub unused: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct UsageStats {
    pub internal: Vec<LampUsage>,
}

pub fn usage_stats(pl: &ProvenancedLattice) -> UsageStats {
    let internal = lamps(pl)
        .iter()
        .enumerate()
        .filter(|(_, lamp)| lamp.is_internal())
        .map(|(i, lamp)| {
            let pattern: String = lamp
                .tubes
                .iter()
                .map(|&e| if tube_is_used(pl, e) { 'u' } else { '0' })
                .collect();
            let used = pattern.chars().filter(|&c| c == 'u').count();
            LampUsage {
                lamp: i,
                unused: pattern.len() - used,
                pattern,
                used,
            }
        })
        .collect();
    UsageStats { internal }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multifork::MultiforkSequence;
    use crate::order::is_isomorphic;

    fn build(seq: MultiforkSequence) -> ProvenancedLattice {
        ProvenancedLattice::build(&seq).unwrap()
    }

    fn s7() -> ProvenancedLattice {
        build(MultiforkSequence::grid(1, 1).fork(0, 0, 1))
    }

    #[test]
    fn grid_lamps() {
        let pl = build(MultiforkSequence::grid(2, 3));
        let ls = lamps(&pl);
        assert_eq!(ls.len(), 5);
        assert!(ls.iter().all(|l| !l.is_internal()));
        assert!(rho_foot(&pl).is_empty());
        assert!(lamp_poset(&pl).unwrap().order.is_antichain());
        assert!(covers_via_nwl_nel(&pl).unwrap().is_empty());
        assert!(usage_stats(&pl).internal.is_empty());
        assert!(circ_r(&pl, &ls[0]).is_err());
    }

    #[test]
    fn s7_lamps() {
        let pl = s7();
        let ls = lamps(&pl);
        assert_eq!(ls.len(), 3);
        // the internal lamp's foot is the single new element
        assert_eq!(pl.coords()[ls[2].foot], (1, 1));
        let c = circ_r(&pl, &ls[2]).unwrap();
        assert_eq!(c.bottom, pl.diagram().lattice().bottom());
        assert_eq!(rho_foot(&pl), vec![(2, 0), (2, 1)]);
        assert_eq!(rho_circr(&pl), rho_foot(&pl));
        assert_eq!(rho_otcr(&pl), rho_foot(&pl));
        let lp = lamp_poset(&pl).unwrap();
        let v = Poset::from_covers(3, &[(2, 0), (2, 1)]).unwrap();
        assert!(is_isomorphic(&lp.order, &v));
        assert_eq!(covers_via_nwl_nel(&pl).unwrap(), lp.cover_edges().to_vec());
        assert_eq!(nwl_nel(&pl).unwrap()[2], Some((0, 1)));
        assert_eq!(usage_stats(&pl).internal[0].pattern, "0");
        let rep = verify_lamp_con_iso(&pl).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
    }

    #[test]
    fn two_fold_lamp() {
        let pl = build(MultiforkSequence::grid(2, 2).fork(1, 1, 2));
        let ls = lamps(&pl);
        assert_eq!(ls.len(), 5);
        assert_eq!(ls[4].tubes.len(), 2);
        // the fork cell touches the top boundary edges on both sides
        let rho = rho_foot(&pl);
        assert_eq!(rho.len(), 2);
        for &(i, j) in &rho {
            assert_eq!(i, 4);
            assert!(!ls[j].is_internal());
        }
        assert_eq!(usage_stats(&pl).internal[0].pattern, "00");
        assert!(verify_lamp_con_iso(&pl).unwrap().passed());
    }

    #[test]
    fn used_territory() {
        // the second fork sits in an essential part of the first lamp's leftmost tube
        let pl = build(MultiforkSequence::grid(1, 1).fork(0, 0, 3).fork(2, 0, 1));
        assert_eq!(rho_foot(&pl), rho_circr(&pl));
        assert_eq!(rho_otcr(&pl), rho_circr(&pl));
        // the older foot lies on the roof of the younger lamp
        assert!(rho_foot_closed(&pl).contains(&(2, 3)));
        let stats = usage_stats(&pl);
        assert_eq!(stats.internal[0].pattern.len(), 3);
        assert_eq!(stats.internal[0].used, 1);
        assert!(verify_lamp_con_iso(&pl).unwrap().passed());
        let lp = lamp_poset(&pl).unwrap();
        assert_eq!(covers_via_nwl_nel(&pl).unwrap(), lp.cover_edges().to_vec());
    }

    #[test]
    fn chain_of_forks_orders_lamps() {
        let pl = build(
            MultiforkSequence::grid(2, 2)
                .fork(1, 1, 2)
                .fork(2, 1, 1)
                .fork(0, 0, 1),
        );
        let lp = lamp_poset(&pl).unwrap();
        let maximal = lp.order.maximal_elements();
        assert_eq!(maximal, vec![0, 1, 2, 3]);
        for &(i, j) in &rho_foot(&pl) {
            assert!(lp.lamps[i].step > lp.lamps[j].step);
        }
        assert!(verify_lamp_con_iso(&pl).unwrap().passed());
    }
}
