use serde::Serialize;

use crate::error::{Error, Result};
use crate::explore::enumerate::{Enumeration, DEFAULT_MAX_LEN};
use crate::multifork::MultiforkSequence;
use crate::order::{poset_iso, Poset};
use crate::reducer::bound;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// A slim rectangular lattice of minimal length with the poset as its
    /// lamp poset.
    Found {
        length: usize,
        witness: MultiforkSequence,
    },
    /// Posets with fewer than two elements belong to chains.
    Chain { length: usize },
    /// The whole window up to the length bound was searched.
    NotRepresentable,
    /// The search stopped at `max_len`, below the length bound.
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealizabilityAnswer {
    pub n: usize,
    /// Lengths `lo..=hi` that a definitive answer needs.
    pub window: (usize, usize),
    pub searched_to: usize,
    pub verdict: Verdict,
}

/// Last length that can hold a minimal realization of an `n`-element poset.
pub fn window_end(n: usize) -> usize {
    match n {
        0 | 1 => n,
        2 => 2,
        _ => bound(n) as usize,
    }
}

/// Searches lengths in increasing order for a lattice whose lamp poset is
/// isomorphic to `p`. Without `allow_large`, lengths past
/// [`DEFAULT_MAX_LEN`] and past the window are refused.
pub fn realize(p: &Poset, max_len: usize, allow_large: bool) -> Result<RealizabilityAnswer> {
    let mut e = Enumeration::new();
    realize_in(&mut e, p, max_len, allow_large)
}

/// [`realize`] against a shared, lazily extended enumeration.
pub fn realize_in(
    e: &mut Enumeration,
    p: &Poset,
    max_len: usize,
    allow_large: bool,
) -> Result<RealizabilityAnswer> {
    let n = p.len();
    let lo = n.max(2);
    let hi = window_end(n);
    if n < 2 {
        return Ok(RealizabilityAnswer {
            n,
            window: (n, n),
            searched_to: 0,
            verdict: Verdict::Chain { length: n },
        });
    }
    let top = if allow_large {
        max_len
    } else {
        max_len.min(hi)
    };
    for len in lo..=top {
        if len > DEFAULT_MAX_LEN && !allow_large {
            return Err(Error::Budget(format!(
                "no realization up to length {DEFAULT_MAX_LEN}; longer searches need an override"
            )));
        }
        e.extend_to(len)?;
        if let Some(hit) = e
            .level(len)
            .iter()
            .find(|x| poset_iso(&x.lamps, p).is_some())
        {
            return Ok(RealizabilityAnswer {
                n,
                window: (lo, hi),
                searched_to: len,
                verdict: Verdict::Found {
                    length: len,
                    witness: hit.sequence().clone(),
                },
            });
        }
    }
    let searched_to = top.max(lo - 1);
    Ok(RealizabilityAnswer {
        n,
        window: (lo, hi),
        searched_to,
        verdict: if searched_to >= hi {
            Verdict::NotRepresentable
        } else {
            Verdict::Unresolved
        },
    })
}

/// All posets on `n` elements up to isomorphism.
pub fn all_posets(n: usize) -> Vec<Poset> {
    let mut out: Vec<Poset> = Vec::new();
    // every class has a labeling along a linear extension
    let upper: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    for mask in 0u64..(1 << upper.len()) {
        let rel: Vec<(usize, usize)> = upper
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &x)| x)
            .collect();
        let transitive = rel.iter().all(|&(a, b)| {
            rel.iter()
                .filter(|&&(c, _)| c == b)
                .all(|&(_, d)| rel.contains(&(a, d)))
        });
        if !transitive {
            continue;
        }
        let Ok(p) = Poset::from_relation(n, &rel) else {
            continue;
        };
        if !out.iter().any(|q| poset_iso(q, &p).is_some()) {
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::named_poset;

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (1..=4).map(|n| all_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 16]);
    }

    #[test]
    fn small_posets() {
        let chain2 = named_poset("chain", 2).unwrap();
        assert_eq!(
            realize(&chain2, 7, false).unwrap().verdict,
            Verdict::NotRepresentable
        );
        let anti2 = named_poset("antichain", 2).unwrap();
        let r = realize(&anti2, 7, false).unwrap();
        assert_eq!(
            r.verdict,
            Verdict::Found {
                length: 2,
                witness: MultiforkSequence::grid(1, 1)
            }
        );
        let one = named_poset("chain", 1).unwrap();
        assert_eq!(
            realize(&one, 7, false).unwrap().verdict,
            Verdict::Chain { length: 1 }
        );
    }

    #[test]
    fn y_needs_length_five() {
        let y = named_poset("y", 4).unwrap();
        let r = realize(&y, 7, false).unwrap();
        assert!(
            matches!(r.verdict, Verdict::Found { length: 5, .. }),
            "{r:?}"
        );
        assert_eq!(r.window, (4, 7));
        let short = realize(&y, 4, false).unwrap();
        assert_eq!(short.verdict, Verdict::Unresolved);
    }

    #[test]
    fn budget() {
        let chain = named_poset("chain", 5).unwrap();
        assert!(matches!(realize(&chain, 15, false), Err(Error::Budget(_))));
        let q = named_poset("q", 5).unwrap();
        let r = realize(&q, 15, false).unwrap();
        assert!(
            matches!(r.verdict, Verdict::Found { length: 5, .. }),
            "{r:?}"
        );
    }
}
