//! Exact calculus for measure-preserving piecewise translations of `[0,1)`.
//!
//! Everything is computed in arbitrary-precision rational arithmetic; there
//! are no floating point numbers anywhere in this crate.  The core objects
//! are partial injections of the unit interval made of finitely many
//! translated half-open intervals, kept in a canonical normal form so that
//! equality of maps is structural equality.  On top of that live cycle
//! decompositions and roots, the binary odometer with finite permutation
//! certificates, enumeration of Schreier balls, a full action builder, and
//! Stallings automata for subgroups of free groups.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod interval;
pub mod odometer;
pub mod perm;
pub mod precycle;
pub mod ptrans;
pub mod rat;
pub mod schreier;
pub mod subgroups;
mod uf;

pub use interval::{Interval, IntervalSet};
pub use ptrans::{transport, uniform_distance, Graphing, Piece, PiecewiseTranslation, Transform};
pub use rat::Rat;
