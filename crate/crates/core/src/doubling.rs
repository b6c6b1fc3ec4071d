//! Doubling a lamp: a new multifork sequence whose lamp poset is the old one
//! with an internal lamp replaced by a two-element chain.

use std::collections::HashMap;

use serde::Serialize;

use crate::diagram::{Edge, Trajectory};
use crate::error::{Error, Result};
use crate::lamps::{lamp_poset, lamps, tube_owner};
use crate::multifork::{MultiforkSequence, ProvenancedLattice};
use crate::order::{is_isomorphic, poset_double};

/// A neon tube named by its lamp and its position among the lamp's tubes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TubeRef {
    pub lamp: usize,
    /// 0-based, left to right.
    pub index: usize,
}

/// Tubes on top of the trajectories through the two upper edges of the
/// cell of step `s + 1`, seen in the stage after `s` steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RetargetRecord {
    pub left: TubeRef,
    pub right: TubeRef,
}

fn trajectory_through(trajectories: &[Trajectory], e: Edge) -> Result<&Trajectory> {
    trajectories
        .iter()
        .find(|t| t.position(e).is_some())
        .ok_or_else(|| {
            Error::Internal(format!("edge ({}, {}) is on no trajectory", e.foot, e.peak))
        })
}

fn tube_ref(stage: &ProvenancedLattice, tube: Edge) -> Result<TubeRef> {
    let ls = lamps(stage);
    let lamp = *tube_owner(&ls)
        .get(&tube)
        .ok_or_else(|| Error::Internal("trajectory without a neon tube".into()))?;
    let index = ls[lamp].tubes.iter().position(|&e| e == tube).unwrap_or(0);
    Ok(TubeRef { lamp, index })
}

pub fn locate_retarget(pl: &ProvenancedLattice, s: usize) -> Result<RetargetRecord> {
    let seq = pl.sequence();
    let step = *seq
        .steps
        .get(s)
        .ok_or_else(|| Error::Argument(format!("no step {}", s + 1)))?;
    let stage = pl.stage(s)?;
    let h = stage.resolve_address((step.a, step.b))?;
    let trajectories = stage.diagram().trajectories()?;
    let tl = trajectory_through(&trajectories, h.upper_left())?;
    let tr = trajectory_through(&trajectories, h.upper_right())?;
    if tl.in_ascending_part(h.upper_left()) || tr.in_descending_part(h.upper_right()) {
        return Err(Error::Internal(
            "upper edges of a fork cell on the wrong slopes".into(),
        ));
    }
    Ok(RetargetRecord {
        left: tube_ref(&stage, tl.top_edge())?,
        right: tube_ref(&stage, tr.top_edge())?,
    })
}

/// Doubles the lamp created by step `t` (1-based).
pub fn double(seq: &MultiforkSequence, t: usize) -> Result<MultiforkSequence> {
    if t < 1 || t > seq.steps.len() {
        return Err(Error::Argument(format!(
            "step {t} out of range 1..={}",
            seq.steps.len()
        )));
    }
    let pl = ProvenancedLattice::build(seq)?;
    let boundary = lamps(&pl).iter().filter(|l| !l.is_internal()).count();
    // lamp indices shift by one past the inserted lamp
    let remap = |lamp: usize| -> usize {
        if lamp < boundary {
            lamp
        } else {
            let r = lamp - boundary + 1;
            if r < t {
                lamp
            } else {
                lamp + 1
            }
        }
    };
    let h = seq.steps[t - 1];
    let mut out = seq.prefix(t - 1).fork(h.a, h.b, 2).fork(h.a + 1, h.b, h.k);
    for s in t..seq.steps.len() {
        let rec = locate_retarget(&pl, s)?;
        let stage = ProvenancedLattice::build(&out)?;
        let ls = lamps(&stage);
        let tube = |r: TubeRef| -> Result<Edge> {
            ls.get(remap(r.lamp))
                .and_then(|l| l.tubes.get(r.index))
                .copied()
                .ok_or_else(|| Error::Internal("retargeted tube missing".into()))
        };
        let (p, q) = (tube(rec.left)?, tube(rec.right)?);
        let trajectories = stage.diagram().trajectories()?;
        let tp = trajectories.iter().find(|x| x.top_edge() == p);
        let tq = trajectories.iter().find(|x| x.top_edge() == q);
        let (Some(tp), Some(tq)) = (tp, tq) else {
            return Err(Error::Internal("retargeted tube tops no trajectory".into()));
        };
        let hits: Vec<_> = stage
            .cells()
            .into_iter()
            .filter(|c| {
                tp.position(c.upper_left())
                    .is_some_and(|i| i >= tp.top_index)
                    && tq
                        .position(c.upper_right())
                        .is_some_and(|i| i <= tq.top_index)
            })
            .collect();
        if hits.len() != 1 {
            return Err(Error::Internal(format!(
                "{} crossing cells for step {}",
                hits.len(),
                s + 1
            )));
        }
        let (a, b) = stage.cell_address(&hits[0]);
        out = out.fork(a, b, seq.steps[s].k);
    }
    Ok(out)
}

/// Outcome of checking a doubled sequence against the poset operation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoublingReport {
    pub antube_before: usize,
    pub antube_after: usize,
    pub len_before: usize,
    pub len_after: usize,
    pub lamp_poset_doubled: bool,
}

impl DoublingReport {
    pub fn passed(&self) -> bool {
        self.lamp_poset_doubled
            && self.antube_after == self.antube_before + 2
            && self.len_after == self.len_before + 2
    }
}

pub fn verify_double(seq: &MultiforkSequence, t: usize) -> Result<DoublingReport> {
    let before = ProvenancedLattice::build(seq)?;
    let after = ProvenancedLattice::build(&double(seq, t)?)?;
    let lp = lamp_poset(&before)?;
    let j = lp
        .lamps
        .iter()
        .position(|l| l.step == t)
        .ok_or_else(|| Error::Internal("no lamp for the doubled step".into()))?;
    let expected = poset_double(&lp.order, j);
    Ok(DoublingReport {
        antube_before: before.antube(),
        antube_after: after.antube(),
        len_before: before.diagram().lattice().length(),
        len_after: after.diagram().lattice().length(),
        lamp_poset_doubled: is_isomorphic(&lamp_poset(&after)?.order, &expected),
    })
}

/// Which later steps sit inside which lamp territory, for reporting.
pub fn retarget_table(pl: &ProvenancedLattice) -> Result<HashMap<usize, RetargetRecord>> {
    (0..pl.steps().len())
        .map(|s| locate_retarget(pl, s).map(|r| (s + 1, r)))
        .collect()
}
