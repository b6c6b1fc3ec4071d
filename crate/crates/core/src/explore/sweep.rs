use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::explore::enumerate::Enumeration;
use crate::multifork::MultiforkSequence;
use crate::reducer::{check_bounds, minimize, BoundReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepFailure {
    pub sequence: MultiforkSequence,
    pub message: String,
}

/// Per clause, how many enumerated lattices were checked and which failed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub lattices: usize,
    /// `len ≥ n`.
    pub length_lower: Vec<SweepFailure>,
    /// `|L| ≤ 1+(len−1)²`.
    pub size_bound: Vec<SweepFailure>,
    /// `|L| ≤ len²`.
    pub square_bound: Vec<SweepFailure>,
    /// Minimize fixpoints with internal lamps checked against `2n²−10n+15`.
    pub fixpoints: usize,
    pub length_upper: Vec<SweepFailure>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.length_lower.is_empty()
            && self.size_bound.is_empty()
            && self.square_bound.is_empty()
            && self.length_upper.is_empty()
    }
}

struct Checked {
    seq: MultiforkSequence,
    report: BoundReport,
    fixpoint: Option<BoundReport>,
}

/// Checks the length and size bounds on every enumerated lattice and the
/// upper length bound on the minimized form of each.
pub fn sweep_bounds(e: &Enumeration) -> Result<SweepReport> {
    let entries: Vec<_> = e.entries().collect();
    let checked: Vec<Checked> = entries
        .par_iter()
        .map(|x| {
            let report = check_bounds(&x.lattice)?;
            let (min, _) = minimize(&x.lattice)?;
            let fixpoint = if min.steps().is_empty() {
                None
            } else {
                Some(check_bounds(&min)?)
            };
            Ok(Checked {
                seq: x.sequence().clone(),
                report,
                fixpoint,
            })
        })
        .collect::<Result<_>>()?;
    let mut out = SweepReport {
        lattices: checked.len(),
        ..SweepReport::default()
    };
    let fail = |seq: &MultiforkSequence, message: String| SweepFailure {
        sequence: seq.clone(),
        message,
    };
    for c in &checked {
        let r = &c.report;
        if r.len < r.n {
            out.length_lower
                .push(fail(&c.seq, format!("length {} below {}", r.len, r.n)));
        }
        if !r.within_size_bound {
            out.size_bound.push(fail(
                &c.seq,
                format!("{} elements, bound {}", r.size, r.size_bound),
            ));
        }
        if !r.within_square {
            out.square_bound.push(fail(
                &c.seq,
                format!("{} elements, length {}", r.size, r.len),
            ));
        }
        if let Some(f) = &c.fixpoint {
            out.fixpoints += 1;
            if f.len as i64 > f.bound {
                out.length_upper.push(fail(
                    &c.seq,
                    format!("fixpoint length {} above {}", f.len, f.bound),
                ));
            }
        }
    }
    Ok(out)
}
