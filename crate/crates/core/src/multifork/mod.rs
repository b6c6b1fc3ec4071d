//! Multifork sequences, their provenance records and decomposition.

mod decompose;
mod forest;
mod provenance;
mod sequence;

pub use decompose::{decompose, decompose_coords};
pub use forest::{CellForest, ForestNode, NodeId};
pub use provenance::{
    extend_coords, rectangle_present, ProvenancedLattice, StepRecord, TubeKind, TubeRecord,
};
pub use sequence::{emit_dsl, parse_dsl, ForkStep, MultiforkSequence};
