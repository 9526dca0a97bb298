//! Deciding solubility of finitely generated subgroups of PL₊(I).
//!
//! Elements are piecewise-linear homeomorphisms of `[0,1]` with rational
//! breakpoints and slopes, acting on the right.

#![no_std]

extern crate alloc;

pub mod arith;
pub mod dynamics;
pub mod fixtures;
pub mod lattice;
pub mod mdp;
pub mod oracle;
pub mod orbitals;
pub mod pl;
pub mod ssrp;
pub mod thompson;

pub use arith::{ArithError, Rational};
pub use orbitals::{Interval, SignedOrbital};
pub use pl::{PLMap, PlError};
pub use ssrp::{decide, Verdict, Witness};
