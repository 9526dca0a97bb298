//! Membership in subgroups generated by nice sets.
//!
//! The target is appended to the generators and the recognition engine is
//! run with its controllers pinned to the nice set. The target is a member
//! exactly when the run ends with the stored signed orbitals equal to those
//! of the nice set; the recorded derivations then spell out a word.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::Rational;
use crate::dynamics::{nice_derived_length, NiceSet, NiceViolation};
use crate::orbitals::{factor_signed_orbitals, Interval, SignedOrbital};
use crate::pl::PLMap;
use crate::ssrp::{push_letter, Breach, Derivation, Engine, Stop, Verdict};

/// `generator^exponent`, with `generator` indexing the nice set as given.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Letter {
    pub generator: usize,
    pub exponent: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "reason", rename_all = "kebab-case"))]
pub enum NotMember {
    SolubilityVerdictChanged {
        verdict: Verdict,
    },
    DerivedLengthExceeded {
        found: usize,
        bound: usize,
    },
    OrphanOrbital {
        orbital: Interval,
    },
    SlopeMismatch {
        orbital: Interval,
        least: Rational,
        found: Rational,
    },
    ResidualNonidentity {
        residual: Vec<SignedOrbital>,
    },
    /// A derivation failed to reproduce the target. Never expected.
    Inconsistent {
        detail: String,
    },
}

impl NotMember {
    pub fn label(&self) -> &'static str {
        match self {
            NotMember::SolubilityVerdictChanged { .. } => "solubility-verdict-changed",
            NotMember::DerivedLengthExceeded { .. } => "derived-length-exceeded",
            NotMember::OrphanOrbital { .. } => "orphan-orbital",
            NotMember::SlopeMismatch { .. } => "slope-mismatch",
            NotMember::ResidualNonidentity { .. } => "residual-nonidentity",
            NotMember::Inconsistent { .. } => "inconsistent",
        }
    }
}

impl fmt::Display for NotMember {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Membership {
    pub member: bool,
    /// A word over the nice set whose product is the target.
    pub witness_word: Option<Vec<Letter>>,
    pub reason: Option<NotMember>,
    /// Generators that were inverted so their left-end slope exceeds 1.
    pub inverted: Vec<usize>,
}

impl Membership {
    fn no(reason: NotMember, inverted: Vec<usize>) -> Self {
        Membership {
            member: false,
            witness_word: None,
            reason: Some(reason),
            inverted,
        }
    }
}

/// A target element together with a validated nice set.
#[derive(Debug, Clone)]
pub struct MembershipQuery {
    pub target: PLMap,
    pub generators: NiceSet,
}

impl MembershipQuery {
    pub fn new(target: PLMap, generators: &[PLMap]) -> Result<Self, NiceViolation> {
        Ok(MembershipQuery {
            target,
            generators: NiceSet::new(generators)?,
        })
    }

    pub fn decide(&self) -> Membership {
        decide_membership(&self.target, &self.generators)
    }
}

pub fn is_member(w: &PLMap, z: &[PLMap]) -> Result<Membership, NiceViolation> {
    Ok(MembershipQuery::new(w.clone(), z)?.decide())
}

/// Whether every one-bump factor of `w` lies in the group of the nice set.
pub fn split_closure_check(z: &NiceSet, w: &PLMap) -> bool {
    factor_signed_orbitals(w)
        .into_iter()
        .all(|s| decide_membership(&s.signature, z).member)
}

pub fn evaluate_word(z: &[PLMap], word: &[Letter]) -> PLMap {
    word.iter().fold(PLMap::identity(), |acc, l| {
        acc.compose(&z[l.generator].pow(l.exponent))
    })
}

fn decide_membership(w: &PLMap, nice: &NiceSet) -> Membership {
    let originals = nice.maps();
    let mut inverted = Vec::new();
    let mut z = Vec::with_capacity(originals.len());
    for (i, e) in nice.elements().iter().enumerate() {
        if e.map.right_slope(e.orbital.left()) < Rational::one() {
            inverted.push(i);
            z.push(e.map.inverse());
        } else {
            z.push(e.map.clone());
        }
    }
    let fixed: BTreeMap<SignedOrbital, usize> = z
        .iter()
        .enumerate()
        .map(|(i, h)| (factor_signed_orbitals(h).remove(0), i))
        .collect();
    let bound = nice_derived_length(nice);

    let mut input = z.clone();
    input.push(w.clone());
    let mut engine = Engine::new(&input).with_fixed(fixed.keys().cloned().collect());
    let reason = match engine.run_until_stop() {
        Stop::Breach(Breach::OrphanOrbital(orbital)) => Some(NotMember::OrphanOrbital { orbital }),
        Stop::Breach(Breach::SlopeMismatch {
            orbital,
            least,
            found,
        }) => Some(NotMember::SlopeMismatch {
            orbital,
            least,
            found,
        }),
        Stop::Breach(Breach::FixedRemoved(s)) => Some(NotMember::ResidualNonidentity {
            residual: alloc::vec![s],
        }),
        Stop::Verdict(v @ Verdict::NotSoluble { .. }) => {
            Some(NotMember::SolubilityVerdictChanged { verdict: v })
        }
        Stop::Verdict(Verdict::Soluble { derived_length, .. }) if derived_length > bound => {
            Some(NotMember::DerivedLengthExceeded {
                found: derived_length,
                bound,
            })
        }
        Stop::Verdict(Verdict::Soluble { .. }) => {
            let residual: Vec<SignedOrbital> = engine
                .signed_orbitals()
                .filter(|s| !fixed.contains_key(*s))
                .cloned()
                .collect();
            let missing = fixed.keys().any(|s| engine.provenance(s).is_none());
            if !residual.is_empty() || missing {
                Some(NotMember::ResidualNonidentity { residual })
            } else {
                None
            }
        }
    };
    if let Some(reason) = reason {
        return Membership::no(reason, inverted);
    }

    let mut resolver = Resolver {
        fixed: &fixed,
        derivations: engine.derivations(),
        memo: BTreeMap::new(),
        active: BTreeSet::new(),
    };
    let mut word = Vec::new();
    for s in factor_signed_orbitals(w) {
        match resolver.resolve(&s) {
            Ok(part) => part.iter().for_each(|&(g, e)| push_letter(&mut word, g, e)),
            Err(detail) => return Membership::no(NotMember::Inconsistent { detail }, inverted),
        }
    }
    let letters: Vec<Letter> = word
        .into_iter()
        .map(|(g, e)| Letter {
            generator: g,
            exponent: if inverted.contains(&g) { -e } else { e },
        })
        .collect();
    if evaluate_word(&originals, &letters) != *w {
        return Membership::no(
            NotMember::Inconsistent {
                detail: String::from("witness word does not evaluate to the target"),
            },
            inverted,
        );
    }
    Membership {
        member: true,
        witness_word: Some(letters),
        reason: None,
        inverted,
    }
}

type Word = Vec<(usize, i64)>;

struct Resolver<'a> {
    fixed: &'a BTreeMap<SignedOrbital, usize>,
    derivations: &'a BTreeMap<SignedOrbital, Derivation>,
    memo: BTreeMap<SignedOrbital, Word>,
    active: BTreeSet<SignedOrbital>,
}

impl Resolver<'_> {
    fn resolve(&mut self, s: &SignedOrbital) -> Result<Word, String> {
        if let Some(&i) = self.fixed.get(s) {
            return Ok(alloc::vec![(i, 1)]);
        }
        if let Some(w) = self.memo.get(s) {
            return Ok(w.clone());
        }
        if !self.active.insert(s.clone()) {
            return Err(format!("cyclic derivation through {}", s.orbital));
        }
        let derivation = self
            .derivations
            .get(s)
            .ok_or_else(|| format!("no derivation for {}", s.orbital))?;
        let mut out = Vec::new();
        match derivation {
            Derivation::ControllerQuotient {
                factors,
                controller,
                power,
            } => {
                for f in factors {
                    append(&mut out, &self.resolve(f)?, 1);
                }
                append(&mut out, &self.resolve(controller)?, *power);
            }
            Derivation::Conjugate {
                image,
                controller,
                power,
            } => {
                let c = self.resolve(controller)?;
                append(&mut out, &c, *power);
                append(&mut out, &self.resolve(image)?, 1);
                append(&mut out, &c, -*power);
            }
        }
        self.active.remove(s);
        self.memo.insert(s.clone(), out.clone());
        Ok(out)
    }
}

/// Appends `word^k`.
fn append(out: &mut Word, word: &[(usize, i64)], k: i64) {
    for _ in 0..k.unsigned_abs() {
        if k > 0 {
            word.iter().for_each(|&(g, e)| push_letter(out, g, e));
        } else {
            word.iter()
                .rev()
                .for_each(|&(g, e)| push_letter(out, g, -e));
        }
    }
}
