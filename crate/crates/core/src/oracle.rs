//! Brute-force checks over word balls, independent of the decision engine.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::dynamics::find_bad_overlap;
use crate::orbitals::{factor_signed_orbitals, Interval, SignedOrbital};
use crate::pl::PLMap;

/// All products of at most `radius` letters from `X ∪ X⁻¹`.
pub fn ball(generators: &[PLMap], radius: usize) -> BTreeSet<PLMap> {
    let letters: Vec<PLMap> = generators
        .iter()
        .flat_map(|g| [g.clone(), g.inverse()])
        .collect();
    let mut all = BTreeSet::new();
    all.insert(PLMap::identity());
    let mut frontier = alloc::vec![PLMap::identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for f in &frontier {
            for l in &letters {
                let p = f.compose(l);
                if all.insert(p.clone()) {
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    all
}

/// A bad overlap among the factor signed orbitals of the ball of the given
/// radius, if there is one.
pub fn search_bad_overlap(
    generators: &[PLMap],
    radius: usize,
) -> Option<(SignedOrbital, SignedOrbital)> {
    // Overlaps only depend on orbitals, so keep one signature per orbital.
    let mut by_orbital: BTreeMap<Interval, SignedOrbital> = BTreeMap::new();
    for f in ball(generators, radius) {
        for s in factor_signed_orbitals(&f) {
            match by_orbital.get(&s.orbital) {
                Some(t) if *t <= s => {}
                _ => {
                    by_orbital.insert(s.orbital.clone(), s);
                }
            }
        }
    }
    find_bad_overlap(by_orbital.values())
}

/// Whether every `d`-fold iterated commutator of ball elements is trivial.
pub fn derived_probe(generators: &[PLMap], radius: usize, d: usize) -> bool {
    let mut level: Vec<PLMap> = ball(generators, radius).into_iter().collect();
    for step in 0..d {
        if step + 1 == d {
            return level
                .iter()
                .enumerate()
                .all(|(i, a)| level[i + 1..].iter().all(|b| a.compose(b) == b.compose(a)));
        }
        let mut next = BTreeSet::new();
        for (i, a) in level.iter().enumerate() {
            for b in &level[i + 1..] {
                let c = a.commutator(b);
                if !c.is_identity() {
                    next.insert(c);
                }
            }
        }
        level = next.into_iter().collect();
    }
    level.iter().all(PLMap::is_identity)
}
