//! Dynamical predicates on orbitals: overlaps, towers and nice sets.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::Rational;
use crate::orbitals::{factor_signed_orbitals, orbital_tuple, Interval, SignedOrbital};
use crate::pl::PLMap;

/// How two orbitals sit relative to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum PairClass {
    Disjoint,
    Equal,
    /// The closure of one lies inside the other.
    NestedProper,
    /// Distinct, overlapping, sharing exactly one endpoint.
    OneSidedOverlap,
    /// `a < c < b < d` up to swapping.
    TransitionChain,
}

impl PairClass {
    pub fn is_bad_overlap(self) -> bool {
        matches!(
            self,
            PairClass::OneSidedOverlap | PairClass::TransitionChain
        )
    }
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairClass::Disjoint => "disjoint",
            PairClass::Equal => "equal",
            PairClass::NestedProper => "nested-proper",
            PairClass::OneSidedOverlap => "one-sided-overlap",
            PairClass::TransitionChain => "transition-chain",
        })
    }
}

pub fn classify_pair(a: &Interval, b: &Interval) -> PairClass {
    if a == b {
        PairClass::Equal
    } else if !a.intersects(b) {
        PairClass::Disjoint
    } else if a.closure_within(b) || b.closure_within(a) {
        PairClass::NestedProper
    } else if a.left() == b.left() || a.right() == b.right() {
        PairClass::OneSidedOverlap
    } else {
        PairClass::TransitionChain
    }
}

/// The least pair (in the order of signed orbitals) forming a bad overlap.
pub fn find_bad_overlap<'a, I>(orbs: I) -> Option<(SignedOrbital, SignedOrbital)>
where
    I: IntoIterator<Item = &'a SignedOrbital>,
{
    let sorted: BTreeSet<&SignedOrbital> = orbs.into_iter().collect();
    let sorted: Vec<&SignedOrbital> = sorted.into_iter().collect();
    for (i, s) in sorted.iter().enumerate() {
        for t in &sorted[i + 1..] {
            if classify_pair(&s.orbital, &t.orbital).is_bad_overlap() {
                return Some(((*s).clone(), (*t).clone()));
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TowerError {
    #[error("orbitals {0} and {1} are not nested")]
    NotNested(Interval, Interval),
    #[error("orbital {0} carries two signatures")]
    ConflictingSignatures(Interval),
}

/// A set of signed orbitals whose orbitals are pairwise nested, one signature
/// per orbital. Entries are kept outermost first.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tower {
    entries: Vec<SignedOrbital>,
}

impl Tower {
    pub fn new(entries: impl IntoIterator<Item = SignedOrbital>) -> Result<Self, TowerError> {
        let set: BTreeSet<SignedOrbital> = entries.into_iter().collect();
        let mut entries: Vec<SignedOrbital> = set.into_iter().collect();
        entries.sort_by(|s, t| {
            width(&t.orbital)
                .cmp(&width(&s.orbital))
                .then_with(|| s.cmp(t))
        });
        for (i, s) in entries.iter().enumerate() {
            for t in &entries[i + 1..] {
                if s.orbital == t.orbital {
                    return Err(TowerError::ConflictingSignatures(s.orbital.clone()));
                }
                if !t.orbital.is_subset_of(&s.orbital) {
                    return Err(TowerError::NotNested(s.orbital.clone(), t.orbital.clone()));
                }
            }
        }
        Ok(Tower { entries })
    }

    pub fn entries(&self) -> &[SignedOrbital] {
        &self.entries
    }

    pub fn height(&self) -> usize {
        self.entries.len()
    }

    /// No inner signature has an orbital sharing an end with an outer orbital.
    pub fn is_exemplary(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, outer)| {
            self.entries[i + 1..].iter().all(|inner| {
                orbital_tuple(&inner.signature)
                    .iter()
                    .all(|o| o.left() != outer.orbital.left() && o.right() != outer.orbital.right())
            })
        })
    }
}

fn width(a: &Interval) -> Rational {
    a.right() - a.left()
}

pub fn is_exemplary(t: &Tower) -> bool {
    t.is_exemplary()
}

/// A tallest tower among the given signed orbitals.
///
/// Entries sharing an orbital but not a signature never sit in one tower, so
/// they are treated as alternatives at the same level.
pub fn tallest_tower<'a, I>(orbs: I) -> Tower
where
    I: IntoIterator<Item = &'a SignedOrbital>,
{
    let set: BTreeSet<&SignedOrbital> = orbs.into_iter().collect();
    let mut items: Vec<&SignedOrbital> = set.into_iter().collect();
    // Widest first, so every superset precedes its subsets.
    items.sort_by(|s, t| {
        width(&t.orbital)
            .cmp(&width(&s.orbital))
            .then_with(|| s.cmp(t))
    });
    let n = items.len();
    let mut best = alloc::vec![1usize; n];
    let mut prev: Vec<Option<usize>> = alloc::vec![None; n];
    for j in 0..n {
        for i in 0..j {
            let (outer, inner) = (&items[i].orbital, &items[j].orbital);
            if outer != inner && inner.is_subset_of(outer) && best[i] + 1 > best[j] {
                best[j] = best[i] + 1;
                prev[j] = Some(i);
            }
        }
    }
    let Some(mut cur) = (0..n).max_by(|&i, &j| best[i].cmp(&best[j]).then(j.cmp(&i))) else {
        return Tower {
            entries: Vec::new(),
        };
    };
    let mut chain = alloc::vec![items[cur].clone()];
    while let Some(p) = prev[cur] {
        chain.push(items[p].clone());
        cur = p;
    }
    chain.reverse();
    Tower { entries: chain }
}

pub fn tower_height<'a, I>(orbs: I) -> usize
where
    I: IntoIterator<Item = &'a SignedOrbital>,
{
    tallest_tower(orbs).height()
}

/// One of the four defining properties of a nice set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum NiceProperty {
    Z0,
    Z1,
    Z2,
    Z3,
}

impl fmt::Display for NiceProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NiceViolation {
    pub property: NiceProperty,
    /// Indices into the input list.
    pub pair: Vec<usize>,
    pub detail: String,
}

impl fmt::Display for NiceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} violated by {:?}: {}",
            self.property, self.pair, self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NiceElement {
    pub map: PLMap,
    pub orbital: Interval,
    pub witness: Rational,
}

impl NiceElement {
    pub fn signed_orbital(&self) -> SignedOrbital {
        SignedOrbital::new_unchecked(self.orbital.clone(), self.map.clone())
    }

    /// The window `(r, r·h)` as an interval, whichever way `h` moves.
    pub fn window(&self) -> Interval {
        window(&self.witness, &self.map)
    }
}

fn window(r: &Rational, h: &PLMap) -> Interval {
    let rh = h.apply(r);
    if rh >= *r {
        Interval::new_unchecked(r.clone(), rh)
    } else {
        Interval::new_unchecked(rh, r.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NiceSet {
    elements: Vec<NiceElement>,
}

impl NiceSet {
    /// Validates with automatically chosen witness points.
    pub fn new(z: &[PLMap]) -> Result<Self, NiceViolation> {
        validate_nice_set(z, &[])
    }

    pub fn elements(&self) -> &[NiceElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn maps(&self) -> Vec<PLMap> {
        self.elements.iter().map(|e| e.map.clone()).collect()
    }

    pub fn signed_orbitals(&self) -> Vec<SignedOrbital> {
        self.elements
            .iter()
            .map(NiceElement::signed_orbital)
            .collect()
    }
}

/// Checks Z0–Z3. `witnesses[i]`, when present and `Some`, is used as `r` for
/// element `i`; otherwise a witness is chosen.
pub fn validate_nice_set(
    z: &[PLMap],
    witnesses: &[Option<Rational>],
) -> Result<NiceSet, NiceViolation> {
    let mut orbitals = Vec::with_capacity(z.len());
    for (i, h) in z.iter().enumerate() {
        let orbs = orbital_tuple(h);
        if orbs.len() != 1 {
            return Err(NiceViolation {
                property: NiceProperty::Z0,
                pair: alloc::vec![i],
                detail: format!("element has {} orbitals", orbs.len()),
            });
        }
        orbitals.push(orbs.into_iter().next().expect("one orbital"));
    }
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let class = classify_pair(&orbitals[i], &orbitals[j]);
            if class.is_bad_overlap() {
                return Err(NiceViolation {
                    property: NiceProperty::Z1,
                    pair: alloc::vec![i, j],
                    detail: format!("{} and {} form a {}", orbitals[i], orbitals[j], class),
                });
            }
            if class == PairClass::Equal {
                return Err(NiceViolation {
                    property: NiceProperty::Z2,
                    pair: alloc::vec![i, j],
                    detail: format!("both have orbital {}", orbitals[i]),
                });
            }
        }
    }
    let mut elements = Vec::with_capacity(z.len());
    for (i, h) in z.iter().enumerate() {
        let a = &orbitals[i];
        let nested: Vec<usize> = (0..z.len())
            .filter(|&j| j != i && orbitals[j].closure_within(a))
            .collect();
        let r = match witnesses.get(i).cloned().flatten() {
            Some(r) => {
                if !a.contains_point(&r) {
                    return Err(NiceViolation {
                        property: NiceProperty::Z3,
                        pair: alloc::vec![i],
                        detail: format!("witness {} lies outside {}", r, a),
                    });
                }
                r
            }
            None => choose_witness(h, a, nested.iter().map(|&j| &orbitals[j])),
        };
        let win = window(&r, h);
        if let Some(&j) = nested.iter().find(|&&j| !orbitals[j].is_subset_of(&win)) {
            return Err(NiceViolation {
                property: NiceProperty::Z3,
                pair: alloc::vec![i, j],
                detail: format!("{} is not inside {} for r = {}", orbitals[j], win, r),
            });
        }
        elements.push(NiceElement {
            map: h.clone(),
            orbital: a.clone(),
            witness: r,
        });
    }
    Ok(NiceSet { elements })
}

/// The witness point making the window as likely as possible to cover the
/// nested orbitals: their leftmost end for a right-moving `h`, their
/// rightmost end otherwise, and the midpoint of `a` when nothing is nested.
fn choose_witness<'a>(
    h: &PLMap,
    a: &Interval,
    nested: impl Iterator<Item = &'a Interval>,
) -> Rational {
    let nested: Vec<&Interval> = nested.collect();
    let (Some(u), Some(v)) = (
        nested.iter().map(|b| b.left()).min(),
        nested.iter().map(|b| b.right()).max(),
    ) else {
        return a.midpoint();
    };
    let m = a.midpoint();
    if h.apply(&m) > m {
        u.clone()
    } else {
        v.clone()
    }
}

/// Tallest tower height among the signed orbitals of a nice set.
pub fn nice_derived_length(z: &NiceSet) -> usize {
    tower_height(&z.signed_orbitals())
}

/// Factor signed orbitals of all the maps.
pub fn all_factor_orbitals<'a>(maps: impl IntoIterator<Item = &'a PLMap>) -> Vec<SignedOrbital> {
    maps.into_iter().flat_map(factor_signed_orbitals).collect()
}
