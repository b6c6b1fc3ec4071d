use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lamps::lamp_poset;
use crate::multifork::{MultiforkSequence, ProvenancedLattice};
use crate::order::{poset_iso, Poset};

/// Largest length enumerated without an explicit override.
pub const DEFAULT_MAX_LEN: usize = 7;

/// One isomorphism class of slim rectangular lattices.
#[derive(Clone, Debug)]
pub struct Entry {
    pub code: Vec<u8>,
    pub lattice: ProvenancedLattice,
    pub lamps: Poset,
}

impl Entry {
    fn new(code: Vec<u8>, lattice: ProvenancedLattice) -> Result<Entry> {
        let lamps = lamp_poset(&lattice)?.order;
        Ok(Entry {
            code,
            lattice,
            lamps,
        })
    }

    pub fn sequence(&self) -> &MultiforkSequence {
        self.lattice.sequence()
    }

    pub fn length(&self) -> usize {
        self.lattice.length()
    }
}

/// Slim rectangular lattices up to isomorphism, grouped by length.
#[derive(Clone, Debug, Default)]
pub struct Enumeration {
    /// `levels[l]` holds the classes of length `l`; levels 0 and 1 are empty.
    levels: Vec<Vec<Entry>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelCount {
    pub length: usize,
    pub count: usize,
}

impl Enumeration {
    pub fn new() -> Enumeration {
        Enumeration {
            levels: vec![Vec::new(), Vec::new()],
        }
    }

    pub fn max_len(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, len: usize) -> &[Entry] {
        self.levels.get(len).map_or(&[], Vec::as_slice)
    }

    pub fn entries(&self) -> impl Iterator<Item = &Entry> {
        self.levels.iter().flatten()
    }

    pub fn counts(&self) -> Vec<LevelCount> {
        (2..self.levels.len())
            .map(|length| LevelCount {
                length,
                count: self.levels[length].len(),
            })
            .collect()
    }

    /// Generates every level up to `max_len` not generated yet.
    pub fn extend_to(&mut self, max_len: usize) -> Result<()> {
        while self.max_len() < max_len {
            let len = self.levels.len();
            let mut fresh = BTreeMap::new();
            for (code, lattice) in self.candidates(len)? {
                fresh.entry(code).or_insert(lattice);
            }
            let mut level: Vec<Entry> = fresh
                .into_iter()
                .map(|(code, lattice)| Entry::new(code, lattice))
                .collect::<Result<_>>()?;
            level.sort_by(|a, b| a.sequence().cmp(b.sequence()));
            self.levels.push(level);
        }
        Ok(())
    }

    /// Every lattice of length `len` obtained from a grid of that length or
    /// by one multifork step from a stored class, with its code. Sorted by
    /// sequence, so the first sequence of each code is kept on dedup.
    fn candidates(&self, len: usize) -> Result<Vec<(Vec<u8>, ProvenancedLattice)>> {
        let mut out: Vec<(Vec<u8>, ProvenancedLattice)> = (1..len as u32)
            .map(|q| (len as u32 - q, q))
            .filter(|&(p, q)| p >= q)
            .map(|(p, q)| {
                let pl = ProvenancedLattice::grid(p, q)?;
                Ok((pl.diagram().canonical_code(), pl))
            })
            .collect::<Result<_>>()?;
        let mut jobs = Vec::new();
        for k in 1..len.saturating_sub(1) {
            for entry in self.level(len - k) {
                for (a, b) in entry.lattice.distributive_cells() {
                    jobs.push((entry, a, b, k as u32));
                }
            }
        }
        let forked: Vec<(Vec<u8>, ProvenancedLattice)> = jobs
            .par_iter()
            .map(|&(entry, a, b, k)| {
                let pl = entry.lattice.extend(a, b, k)?;
                Ok((pl.diagram().canonical_code(), pl))
            })
            .collect::<Result<_>>()?;
        out.extend(forked);
        out.sort_by(|x, y| x.1.sequence().cmp(y.1.sequence()));
        Ok(out)
    }
}

/// All slim rectangular lattices of length at most `max_len`, up to
/// isomorphism. Lengths above [`DEFAULT_MAX_LEN`] need `allow_large`.
pub fn enumerate(max_len: usize, allow_large: bool) -> Result<Enumeration> {
    if max_len > DEFAULT_MAX_LEN && !allow_large {
        return Err(Error::Budget(format!(
            "enumerating length {max_len} exceeds the cap {DEFAULT_MAX_LEN}"
        )));
    }
    let mut e = Enumeration::new();
    e.extend_to(max_len)?;
    Ok(e)
}

/// Diagram codes against abstract lattice isomorphism on one level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub length: usize,
    pub generated: usize,
    pub codes: usize,
    pub classes: usize,
    /// Every isomorphism class carries exactly one code and vice versa.
    pub consistent: bool,
}

/// Regenerates level `len` without dedup and classifies the raw candidates
/// by lattice isomorphism.
pub fn cross_check(e: &Enumeration, len: usize) -> Result<CrossCheck> {
    if len < 2 || len > e.max_len() {
        return Err(Error::Argument(format!("level {len} not enumerated")));
    }
    let raw = e.candidates(len)?;
    let mut reps: Vec<(&Poset, Vec<&[u8]>)> = Vec::new();
    for (code, pl) in &raw {
        let p = pl.diagram().poset();
        match reps.iter_mut().find(|(q, _)| poset_iso(p, q).is_some()) {
            Some((_, codes)) => codes.push(code),
            None => reps.push((p, vec![code])),
        }
    }
    let mut codes: Vec<&[u8]> = raw.iter().map(|(c, _)| c.as_slice()).collect();
    codes.sort_unstable();
    codes.dedup();
    let consistent = reps.iter().all(|(_, cs)| cs.iter().all(|c| *c == cs[0]))
        && reps.len() == codes.len()
        && codes.len() == e.level(len).len();
    Ok(CrossCheck {
        length: len,
        generated: raw.len(),
        codes: codes.len(),
        classes: reps.len(),
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_levels() {
        let e = enumerate(3, false).unwrap();
        assert_eq!(e.level(2).len(), 1);
        assert_eq!(e.level(2)[0].sequence(), &MultiforkSequence::grid(1, 1));
        let seqs: Vec<_> = e.level(3).iter().map(|x| x.sequence().clone()).collect();
        assert_eq!(
            seqs,
            vec![
                MultiforkSequence::grid(1, 1).fork(0, 0, 1),
                MultiforkSequence::grid(2, 1)
            ]
        );
    }

    #[test]
    fn cap() {
        assert!(matches!(enumerate(8, false), Err(Error::Budget(_))));
    }

    #[test]
    fn codes_agree_with_isomorphism() {
        let e = enumerate(4, false).unwrap();
        for len in 2..=4 {
            let c = cross_check(&e, len).unwrap();
            assert!(c.consistent, "{c:?}");
        }
    }
}
