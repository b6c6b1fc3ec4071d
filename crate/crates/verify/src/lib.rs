//! Acceptance criteria for the slimlat toolkit live in `tests/acceptance.rs`.
