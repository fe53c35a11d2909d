//! Filtered K-theory invariants over finite T0-spaces.
//!
//! A finite T0-space is a finite poset; open sets are up-sets. The crate
//! models modules over the categories ST (concrete filtered K-theory), B
//! (the canonical base), R (reduced filtered K-theory) and TB (the
//! intermediate invariant), checks their relations and exactness, rebuilds
//! ST-modules from B-modules, lifts R-level homomorphisms, and evaluates
//! the realizability criteria.

pub mod catalog;
pub mod classify;
pub mod corpus;
pub mod error;
pub mod functors;
pub mod invariants;
pub mod selftest;
pub mod space;
pub mod zmodule;

pub use error::{Error, Result};
