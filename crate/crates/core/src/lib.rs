//! Finite, machine-checkable models of sequences indexed by finite sets
//! and injections, their Day and Kelly products, operads and right modules
//! over them, and normal oplax monoidal structures.
//!
//! All objects are truncated at a small arity cap and every construction
//! is computed exactly as a quotient or limit of finite sets.

// levels, arities and block counts are indices into parallel tables
#![allow(clippy::needless_range_loop)]

pub mod finset;
pub mod index_cats;
pub mod sequences;
pub mod day;
pub mod kelly;
pub mod operads;
pub mod rmodules;
pub mod envelopes;
pub mod oplax;
