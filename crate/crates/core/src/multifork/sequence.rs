use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One `k`-fold multifork extension at the 4-cell whose bottom has
/// boundary heights `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ForkStep {
    pub a: u32,
    pub b: u32,
    pub k: u32,
}

/// A grid followed by multifork steps.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiforkSequence {
    pub p: u32,
    pub q: u32,
    pub steps: Vec<ForkStep>,
}

impl MultiforkSequence {
    pub fn grid(p: u32, q: u32) -> MultiforkSequence {
        MultiforkSequence {
            p,
            q,
            steps: Vec::new(),
        }
    }

    pub fn fork(mut self, a: u32, b: u32, k: u32) -> MultiforkSequence {
        self.steps.push(ForkStep { a, b, k });
        self
    }

    /// The sequence truncated after `s` steps.
    pub fn prefix(&self, s: usize) -> MultiforkSequence {
        MultiforkSequence {
            p: self.p,
            q: self.q,
            steps: self.steps[..s.min(self.steps.len())].to_vec(),
        }
    }

    /// Length of the lattice the sequence builds.
    pub fn length(&self) -> u32 {
        self.p + self.q + self.steps.iter().map(|s| s.k).sum::<u32>()
    }
}

impl fmt::Display for MultiforkSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "grid {} {}", self.p, self.q)?;
        for s in &self.steps {
            writeln!(f, "fork {} {} {}", s.a, s.b, s.k)?;
        }
        Ok(())
    }
}

impl FromStr for MultiforkSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_dsl(s)
    }
}

pub fn emit_dsl(seq: &MultiforkSequence) -> String {
    seq.to_string()
}

/// Parses `grid P Q` followed by `fork A B K` lines; `#` starts a comment.
pub fn parse_dsl(text: &str) -> Result<MultiforkSequence> {
    let mut seq: Option<MultiforkSequence> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(content);
        let Some(&(col, keyword)) = tokens.first() else {
            continue;
        };
        let arity = match keyword {
            "grid" => 2,
            "fork" => 3,
            _ => {
                return Err(Error::Syntax {
                    line,
                    column: col,
                    message: format!("unknown keyword '{keyword}'"),
                })
            }
        };
        if tokens.len() != arity + 1 {
            let column = tokens
                .get(arity + 1)
                .map_or(raw.trim_end().len() + 1, |t| t.0);
            return Err(Error::Syntax {
                line,
                column,
                message: format!("'{keyword}' takes {arity} integers"),
            });
        }
        let mut nums = Vec::with_capacity(arity);
        for &(column, tok) in &tokens[1..] {
            let v: i64 = tok.parse().map_err(|_| Error::Syntax {
                line,
                column,
                message: format!("expected an integer, found '{tok}'"),
            })?;
            if v < 0 {
                return Err(Error::Semantic {
                    line,
                    message: format!("negative integer {v}"),
                });
            }
            let v = u32::try_from(v).map_err(|_| Error::Semantic {
                line,
                message: format!("integer {v} is too large"),
            })?;
            nums.push(v);
        }
        match (keyword, seq.as_mut()) {
            ("grid", None) => {
                if nums[0] < 1 || nums[1] < 1 {
                    return Err(Error::Semantic {
                        line,
                        message: "grid dimensions must be at least 1".into(),
                    });
                }
                seq = Some(MultiforkSequence::grid(nums[0], nums[1]));
            }
            ("grid", Some(_)) => {
                return Err(Error::Semantic {
                    line,
                    message: "only one grid line is allowed".into(),
                })
            }
            ("fork", None) => {
                return Err(Error::Semantic {
                    line,
                    message: "grid must come first".into(),
                })
            }
            (_, Some(s)) => {
                if nums[2] < 1 {
                    return Err(Error::Semantic {
                        line,
                        message: "fork multiplicity must be at least 1".into(),
                    });
                }
                s.steps.push(ForkStep {
                    a: nums[0],
                    b: nums[1],
                    k: nums[2],
                });
            }
            _ => unreachable!(),
        }
    }
    seq.ok_or(Error::Semantic {
        line: 1,
        message: "missing grid line".into(),
    })
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokenize(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(b)) => {
                out.push((s[..b].chars().count() + 1, &s[b..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(b) = start {
        out.push((s[..b].chars().count() + 1, &s[b..]));
    }
    out
}
