use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::Rational;
use crate::dynamics::{classify_pair, Tower};
use crate::lattice::{is_discrete, least_above_one};
use crate::orbitals::{orbital_tuple, Interval, SignedOrbital};
use crate::pl::{BreakSet, PLMap};

/// Which end of an orbital a slope is taken at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum End {
    Left,
    Right,
}

/// A controller that cannot balance the orbital it was built for.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "condition", rename_all = "kebab-case"))]
pub enum Imbalance {
    /// The controller's orbital at `a` is not the whole of `(a,b)`.
    PartialOrbital {
        orbital: Interval,
        controller: PLMap,
        controller_orbital: Interval,
    },
    /// The controller's slope at `b` is not the inverse of the least slope
    /// above one at `b`.
    RightEndSlope {
        orbital: Interval,
        controller: PLMap,
        signatures: Vec<PLMap>,
        slope: Rational,
        expected: Rational,
    },
    /// The power of the controller matching a signature at `a` does not
    /// match it at `b`.
    PowerMismatch {
        orbital: Interval,
        controller: PLMap,
        signature: PLMap,
        power: i64,
    },
}

/// Evidence that the generated group is not soluble.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum Witness {
    BadOverlap {
        first: SignedOrbital,
        second: SignedOrbital,
    },
    NonDiscrete {
        orbital: Interval,
        end: End,
        signatures: Vec<PLMap>,
        slopes: Vec<Rational>,
    },
    ControllerImbalance(Imbalance),
    DepthExceeded {
        orbital: Interval,
        tower: Tower,
        breakpoints: usize,
    },
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::BadOverlap { .. } => "bad-overlap",
            Witness::NonDiscrete { .. } => "non-discrete",
            Witness::ControllerImbalance(_) => "controller-imbalance",
            Witness::DepthExceeded { .. } => "depth-exceeded",
        }
    }

    /// Re-checks the witness from scratch with the dynamics and slope
    /// lattice predicates. `generators` is the input of the run.
    pub fn revalidate(&self, generators: &[PLMap]) -> bool {
        match self {
            Witness::BadOverlap { first, second } => {
                first.is_valid()
                    && second.is_valid()
                    && classify_pair(&first.orbital, &second.orbital).is_bad_overlap()
            }
            Witness::NonDiscrete {
                orbital,
                end,
                signatures,
                slopes,
            } => {
                signatures.len() == slopes.len()
                    && signatures.iter().zip(slopes).all(|(g, m)| {
                        orbital_tuple(g) == [orbital.clone()] && end_slope(g, orbital, *end) == *m
                    })
                    && is_discrete(slopes) == Ok(false)
            }
            Witness::ControllerImbalance(Imbalance::PartialOrbital {
                orbital,
                controller,
                controller_orbital,
            }) => {
                orbital_tuple(controller).contains(controller_orbital)
                    && controller_orbital.left() == orbital.left()
                    && classify_pair(orbital, controller_orbital).is_bad_overlap()
            }
            Witness::ControllerImbalance(Imbalance::RightEndSlope {
                orbital,
                controller,
                signatures,
                slope,
                expected,
            }) => {
                let ms: Vec<Rational> = signatures
                    .iter()
                    .map(|g| end_slope(g, orbital, End::Right))
                    .collect();
                orbital_tuple(controller).contains(orbital)
                    && controller.left_slope(orbital.right()) == *slope
                    && least_above_one(&ms).map(|d| d.base.recip()).as_ref() == Ok(expected)
                    && slope != expected
            }
            Witness::ControllerImbalance(Imbalance::PowerMismatch {
                orbital,
                controller,
                signature,
                power,
            }) => {
                let (ca, cb) = (
                    end_slope(controller, orbital, End::Left),
                    end_slope(controller, orbital, End::Right),
                );
                orbital_tuple(controller).contains(orbital)
                    && ca.pow(*power) == end_slope(signature, orbital, End::Left)
                    && cb.pow(*power) != end_slope(signature, orbital, End::Right)
            }
            Witness::DepthExceeded {
                orbital,
                tower,
                breakpoints,
            } => {
                let entries = tower.entries();
                *breakpoints == BreakSet::of_all(generators).len()
                    && tower.height() > *breakpoints
                    && entries.iter().all(SignedOrbital::is_valid)
                    && Tower::new(entries.iter().cloned()).as_ref() == Ok(tower)
                    && entries.last().map(|s| &s.orbital) == Some(orbital)
            }
        }
    }
}

fn end_slope(g: &PLMap, orbital: &Interval, end: End) -> Rational {
    match end {
        End::Left => g.right_slope(orbital.left()),
        End::Right => g.left_slope(orbital.right()),
    }
}

/// A processed orbital with its controller and fundamental-domain point.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SeenRecord {
    pub orbital: Interval,
    pub controller: PLMap,
    pub witness: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "outcome", rename_all = "kebab-case"))]
pub enum Verdict {
    Soluble {
        derived_length: usize,
        /// The final SEEN set, one record per orbital.
        certificate: Vec<SeenRecord>,
    },
    NotSoluble {
        /// The step that fired, e.g. `"3.14"`.
        step: String,
        witness: Witness,
    },
}

impl Verdict {
    pub fn is_soluble(&self) -> bool {
        matches!(self, Verdict::Soluble { .. })
    }

    pub fn derived_length(&self) -> Option<usize> {
        match self {
            Verdict::Soluble { derived_length, .. } => Some(*derived_length),
            Verdict::NotSoluble { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::NotSoluble { witness, .. } => Some(witness),
            Verdict::Soluble { .. } => None,
        }
    }

    pub fn step(&self) -> Option<&str> {
        match self {
            Verdict::NotSoluble { step, .. } => Some(step),
            Verdict::Soluble { .. } => None,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Soluble { derived_length, .. } => {
                write!(f, "soluble with derived length {}", derived_length)
            }
            Verdict::NotSoluble { step, witness } => {
                write!(f, "not soluble (step {}, {})", step, witness.kind())
            }
        }
    }
}
