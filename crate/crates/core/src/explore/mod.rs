//! Exhaustive enumeration by length, realizability search, bound sweeps and
//! rendering.

mod enumerate;
mod realize;
mod render;
mod sweep;

pub use enumerate::{
    cross_check, enumerate, CrossCheck, Entry, Enumeration, LevelCount, DEFAULT_MAX_LEN,
};
pub use realize::{all_posets, realize, realize_in, window_end, RealizabilityAnswer, Verdict};
pub use render::{
    check_render, parse_dot_covers, positions, render, to_dot, to_svg, to_tikz, RenderCheck,
    RenderFormat,
};
pub use sweep::{sweep_bounds, SweepFailure, SweepReport};
