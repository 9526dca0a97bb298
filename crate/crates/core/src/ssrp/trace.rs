use alloc::string::String;
use alloc::vec::Vec;

use crate::arith::Rational;
use crate::orbitals::{Interval, SignedOrbital};
use crate::pl::PLMap;

/// One state transition or check of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "event", rename_all = "kebab-case"))]
pub enum TraceEvent {
    Setup {
        signed_orbitals: usize,
        breakpoints: usize,
    },
    BuildTopLower {
        counter: usize,
        top: Vec<Interval>,
        lower: Vec<Interval>,
    },
    Depths {
        max_depth: usize,
        depths: Vec<(Interval, usize)>,
    },
    SelectOrbital {
        orbital: Interval,
        depth: usize,
        signatures: usize,
    },
    Controller {
        orbital: Interval,
        controller: PLMap,
        exponents: Vec<i64>,
        powers: Vec<i64>,
    },
    Rewrite {
        added: Vec<SignedOrbital>,
        removed: Vec<SignedOrbital>,
    },
    Projection {
        orbitals: Vec<Interval>,
    },
    ConjugacySearch {
        rho: Interval,
        sigma: Interval,
        power: i64,
        iterations: u64,
    },
    Representative {
        rho: SignedOrbital,
        maximal: usize,
    },
    Purge {
        removed: Vec<Interval>,
    },
    MarkSeen {
        orbital: Interval,
        witness: Rational,
    },
    Terminate {
        step: String,
        soluble: bool,
    },
}
