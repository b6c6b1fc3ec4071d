//! Finite posets and lattices, congruences, and poset utilities.

mod congruence;
mod iso;
mod lattice;
mod named;
mod poset;

pub use congruence::{congruence_lattice, principal_congruence, Congruence, CongruenceLattice};
pub use iso::{is_isomorphic, poset_double, poset_iso};
pub use lattice::FiniteLattice;
pub use named::named_poset;
pub use poset::{Poset, PosetFile};
