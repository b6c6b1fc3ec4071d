use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::diagram::Edge;
use crate::error::{Error, Result};
use crate::multifork::ProvenancedLattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderFormat {
    Dot,
    Svg,
    Tikz,
}

impl FromStr for RenderFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<RenderFormat> {
        match s.to_ascii_lowercase().as_str() {
            "dot" => Ok(RenderFormat::Dot),
            "svg" => Ok(RenderFormat::Svg),
            "tikz" => Ok(RenderFormat::Tikz),
            other => Err(Error::Argument(format!("unknown render format '{other}'"))),
        }
    }
}

/// Drawing position of every element: `(j − i, i + j)` for boundary
/// heights `(i, j)`, so the left corner sits at the far left.
pub fn positions(pl: &ProvenancedLattice) -> Vec<(i64, i64)> {
    pl.coords()
        .iter()
        .map(|&(i, j)| (j as i64 - i as i64, i as i64 + j as i64))
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RenderCheck {
    /// Edges steeper than slope ±1.
    pub precipitous: Vec<Edge>,
    pub failures: Vec<String>,
}

impl RenderCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn orient(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> i64 {
    ((b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)).signum()
}

fn on_segment(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> bool {
    orient(a, b, c) == 0
        && c.0 >= a.0.min(b.0)
        && c.0 <= a.0.max(b.0)
        && c.1 >= a.1.min(b.1)
        && c.1 <= a.1.max(b.1)
}

/// Every edge is at slope ±1 unless its foot is an internal
/// meet-irreducible element, in which case it is steeper; no two edges
/// meet outside shared endpoints; no element lies on an edge it is not an
/// endpoint of.
pub fn check_render(pl: &ProvenancedLattice) -> RenderCheck {
    let pos = positions(pl);
    let d = pl.diagram();
    let l = d.lattice();
    let (left, right) = d.boundary_chains();
    let internal_mir = |x: usize| l.is_mir(x) && !left.contains(&x) && !right.contains(&x);
    let edges = d.edges();
    let mut out = RenderCheck::default();
    for &e in &edges {
        let (f, p) = (pos[e.foot], pos[e.peak]);
        let (dx, dy) = (p.0 - f.0, p.1 - f.1);
        let steep = dy > dx.abs();
        if dy < dx.abs() || dy <= 0 {
            out.failures
                .push(format!("edge {}-{} is too flat", e.foot, e.peak));
        }
        if steep {
            out.precipitous.push(e);
        }
        if steep != internal_mir(e.foot) {
            out.failures.push(format!(
                "edge {}-{}: steep {steep}, internal meet-irreducible foot {}",
                e.foot,
                e.peak,
                internal_mir(e.foot)
            ));
        }
        for (x, &c) in pos.iter().enumerate() {
            if x != e.foot && x != e.peak && on_segment(f, p, c) {
                out.failures
                    .push(format!("element {x} lies on edge {}-{}", e.foot, e.peak));
            }
        }
    }
    for (i, &e) in edges.iter().enumerate() {
        for &g in &edges[i + 1..] {
            let shared = [e.foot, e.peak]
                .iter()
                .any(|v| *v == g.foot || *v == g.peak);
            if shared {
                continue;
            }
            let (a, b, c, dd) = (pos[e.foot], pos[e.peak], pos[g.foot], pos[g.peak]);
            if orient(a, b, c) * orient(a, b, dd) < 0 && orient(c, dd, a) * orient(c, dd, b) < 0 {
                out.failures.push(format!(
                    "edges {}-{} and {}-{} cross",
                    e.foot, e.peak, g.foot, g.peak
                ));
            }
        }
    }
    out
}

pub fn to_dot(pl: &ProvenancedLattice) -> String {
    let pos = positions(pl);
    let mut s = String::from("digraph lattice {\n  rankdir=BT;\n");
    for (x, &(px, py)) in pos.iter().enumerate() {
        let _ = writeln!(s, "  {x} [label=\"{x}\", pos=\"{px},{py}!\"];");
    }
    for e in pl.diagram().edges() {
        let _ = writeln!(s, "  {} -> {};", e.foot, e.peak);
    }
    s.push_str("}\n");
    s
}

const UNIT: i64 = 40;

pub fn to_svg(pl: &ProvenancedLattice) -> String {
    let pos = positions(pl);
    let xmin = pos.iter().map(|p| p.0).min().unwrap_or(0);
    let xmax = pos.iter().map(|p| p.0).max().unwrap_or(0);
    let ymax = pos.iter().map(|p| p.1).max().unwrap_or(0);
    let sx = |x: i64| (x - xmin + 1) * UNIT;
    let sy = |y: i64| (ymax - y + 1) * UNIT;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">",
        (xmax - xmin + 2) * UNIT,
        (ymax + 2) * UNIT
    );
    for e in pl.diagram().edges() {
        let (f, p) = (pos[e.foot], pos[e.peak]);
        let _ = writeln!(
            s,
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
            sx(f.0),
            sy(f.1),
            sx(p.0),
            sy(p.1)
        );
    }
    for (x, &(px, py)) in pos.iter().enumerate() {
        let _ = writeln!(
            s,
            "  <circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"white\" stroke=\"black\"><title>{x}</title></circle>",
            sx(px),
            sy(py)
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn to_tikz(pl: &ProvenancedLattice) -> String {
    let pos = positions(pl);
    let mut s = String::from("\\begin{tikzpicture}[scale=0.5]\n");
    for (x, &(px, py)) in pos.iter().enumerate() {
        let _ = writeln!(
            s,
            "  \\node[circle,draw,inner sep=1.5pt] (v{x}) at ({px}.0,{py}.0) {{}};"
        );
    }
    for e in pl.diagram().edges() {
        let _ = writeln!(s, "  \\draw (v{}) -- (v{});", e.foot, e.peak);
    }
    s.push_str("\\end{tikzpicture}\n");
    s
}

pub fn render(pl: &ProvenancedLattice, format: RenderFormat) -> Result<String> {
    let check = check_render(pl);
    if !check.passed() {
        return Err(Error::Internal(format!(
            "render check: {}",
            check.failures.join("; ")
        )));
    }
    Ok(match format {
        RenderFormat::Dot => to_dot(pl),
        RenderFormat::Svg => to_svg(pl),
        RenderFormat::Tikz => to_tikz(pl),
    })
}

/// Element count and cover edges of a DOT document written by [`to_dot`].
pub fn parse_dot_covers(text: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let mut n = 0;
    let mut covers = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim().trim_end_matches(';');
        let syntax = |message: String| Error::Syntax {
            line: i + 1,
            column: 1,
            message,
        };
        let id = |s: &str| -> Result<usize> {
            s.trim()
                .parse()
                .map_err(|_| syntax(format!("bad node id '{}'", s.trim())))
        };
        if let Some((a, b)) = line.split_once("->") {
            covers.push((id(a)?, id(b)?));
        } else if let Some((a, _)) = line.split_once('[') {
            if a.trim().chars().all(|c| c.is_ascii_digit()) && !a.trim().is_empty() {
                n = n.max(id(a)? + 1);
            }
        }
    }
    for &(a, b) in &covers {
        n = n.max(a.max(b) + 1);
    }
    Ok((n, covers))
}
