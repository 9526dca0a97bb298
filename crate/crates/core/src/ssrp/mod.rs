//! Soluble subgroup recognition.
//!
//! [`decide`] runs a breadth-first pass over the orbitals of the split
//! group, building a controller for each orbital, rewriting the other
//! signatures on it against the controller, and pushing the nested orbitals
//! into a fundamental domain of the controller. The run either proves the
//! group soluble, with its derived length, or stops with a [`Witness`].

mod provenance;
mod trace;
mod verdict;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::rc::Rc;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::arith::Rational;
use crate::dynamics::{classify_pair, find_bad_overlap, Tower};
use crate::lattice::{discrete_log, is_discrete, least_above_one};
use crate::orbitals::{factor_signed_orbitals, orbital_tuple, Interval, SignedOrbital};
use crate::pl::{BreakSet, PLMap};

pub(crate) use provenance::push_letter;
pub use provenance::Provenance;
pub use trace::TraceEvent;
pub use verdict::{End, Imbalance, SeenRecord, Verdict, Witness};

pub fn decide(generators: &[PLMap]) -> Verdict {
    Engine::new(generators).run()
}

pub fn decide_traced(generators: &[PLMap]) -> (Verdict, Vec<TraceEvent>) {
    let mut engine = Engine::new(generators).with_trace();
    let verdict = engine.run();
    (verdict, engine.take_trace())
}

/// How a signature removed from SO is recovered from ones still present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Derivation {
    /// `sig = (∏ factors)·controller^power`.
    ControllerQuotient {
        factors: Vec<SignedOrbital>,
        controller: SignedOrbital,
        power: i64,
    },
    /// `sig = controller^power · image · controller^-power`.
    Conjugate {
        image: SignedOrbital,
        controller: SignedOrbital,
        power: i64,
    },
}

/// Ways a run restricted to a fixed set of controllers can break down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Breach {
    /// No fixed element has the selected orbital.
    OrphanOrbital(Interval),
    /// The fixed element's slope at `a` is not the least one above 1.
    SlopeMismatch {
        orbital: Interval,
        least: Rational,
        found: Rational,
    },
    /// A fixed element would be removed from SO.
    FixedRemoved(SignedOrbital),
}

/// Why a run stopped before finishing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stop {
    Verdict(Verdict),
    Breach(Breach),
}

/// Controller built for one orbital.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Controller {
    pub orbital: Interval,
    pub map: PLMap,
    /// `map = ∏ signatures[i]^exponents[i]`.
    pub exponents: Vec<i64>,
    /// `signatures[i]` and `map^powers[i]` agree in slope at both ends.
    pub powers: Vec<i64>,
    pub signatures: Vec<SignedOrbital>,
}

#[derive(Debug, Clone)]
pub struct Engine {
    generators: Vec<PLMap>,
    so: BTreeMap<SignedOrbital, Rc<Provenance>>,
    seen: BTreeSet<Interval>,
    unseen: BTreeSet<Interval>,
    top: BTreeSet<Interval>,
    lower: BTreeSet<Interval>,
    orbd: BTreeMap<Interval, usize>,
    max_depth: usize,
    counter: usize,
    n: usize,
    records: BTreeMap<Interval, SeenRecord>,
    derivations: BTreeMap<SignedOrbital, Derivation>,
    fixed: Option<BTreeSet<SignedOrbital>>,
    step3_visits: usize,
    trace: Option<Vec<TraceEvent>>,
}

impl Engine {
    /// Sets up the state for a run on `generators`.
    pub fn new(generators: &[PLMap]) -> Self {
        let mut engine = Engine {
            generators: generators.to_vec(),
            so: BTreeMap::new(),
            seen: BTreeSet::new(),
            unseen: BTreeSet::new(),
            top: BTreeSet::new(),
            lower: BTreeSet::new(),
            orbd: BTreeMap::new(),
            max_depth: 0,
            counter: 0,
            n: 0,
            records: BTreeMap::new(),
            derivations: BTreeMap::new(),
            fixed: None,
            step3_visits: 0,
            trace: None,
        };
        engine.step0();
        engine
    }

    pub fn with_trace(mut self) -> Self {
        let mut events = Vec::new();
        events.push(TraceEvent::Setup {
            signed_orbitals: self.so.len(),
            breakpoints: self.n,
        });
        self.trace = Some(events);
        self
    }

    /// Restricts controllers to the given signed orbitals, which must then
    /// never leave SO.
    pub(crate) fn with_fixed(mut self, fixed: BTreeSet<SignedOrbital>) -> Self {
        self.fixed = Some(fixed);
        self
    }

    pub fn take_trace(&mut self) -> Vec<TraceEvent> {
        self.trace.take().unwrap_or_default()
    }

    fn emit(&mut self, event: impl FnOnce() -> TraceEvent) {
        if let Some(t) = self.trace.as_mut() {
            t.push(event());
        }
    }

    pub fn signed_orbitals(&self) -> impl Iterator<Item = &SignedOrbital> {
        self.so.keys()
    }

    pub fn provenance(&self, s: &SignedOrbital) -> Option<&Provenance> {
        self.so.get(s).map(|p| &**p)
    }

    pub fn derivations(&self) -> &BTreeMap<SignedOrbital, Derivation> {
        &self.derivations
    }

    pub fn seen(&self) -> &BTreeSet<Interval> {
        &self.seen
    }

    pub fn unseen(&self) -> &BTreeSet<Interval> {
        &self.unseen
    }

    pub fn top(&self) -> &BTreeSet<Interval> {
        &self.top
    }

    pub fn lower(&self) -> &BTreeSet<Interval> {
        &self.lower
    }

    pub fn depth(&self, a: &Interval) -> Option<usize> {
        self.orbd.get(a).copied()
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    pub fn counter(&self) -> usize {
        self.counter
    }

    pub fn breakpoint_count(&self) -> usize {
        self.n
    }

    pub fn step3_visits(&self) -> usize {
        self.step3_visits
    }

    /// Checks that every stored signature is the one-bump factor, on its
    /// orbital, of the element its provenance evaluates to.
    pub fn audit_provenance(&self) -> bool {
        self.so.iter().all(|(s, p)| {
            let value = p.evaluate(&self.generators);
            orbital_tuple(&value).contains(&s.orbital)
                && value.restrict(s.orbital.left(), s.orbital.right()) == s.signature
        })
    }

    fn step0(&mut self) {
        for (i, f) in self.generators.iter().enumerate() {
            let p = Rc::new(Provenance::Generator(i));
            for s in factor_signed_orbitals(f) {
                self.unseen.insert(s.orbital.clone());
                self.so.entry(s).or_insert_with(|| p.clone());
            }
        }
        self.n = BreakSet::of_all(&self.generators).len();
    }

    pub fn run(&mut self) -> Verdict {
        match self.run_until_stop() {
            Stop::Verdict(v) => v,
            Stop::Breach(b) => unreachable!("unrestricted run breached {:?}", b),
        }
    }

    pub(crate) fn run_until_stop(&mut self) -> Stop {
        loop {
            if let Some(stop) = self.step1() {
                return stop;
            }
            if let Some(stop) = self.step2() {
                return stop;
            }
            if let Some(stop) = self.step3() {
                return stop;
            }
        }
    }

    fn not_soluble(&mut self, step: &str, witness: Witness) -> Stop {
        self.emit(|| TraceEvent::Terminate {
            step: step.to_string(),
            soluble: false,
        });
        Stop::Verdict(Verdict::NotSoluble {
            step: step.to_string(),
            witness,
        })
    }

    fn bad_overlap(&mut self, step: &str) -> Option<Stop> {
        let (first, second) = find_bad_overlap(self.so.keys())?;
        Some(self.not_soluble(step, Witness::BadOverlap { first, second }))
    }

    /// Builds TOP and LOWER, or terminates.
    pub fn step1(&mut self) -> Option<Stop> {
        if self.unseen.is_empty() {
            self.emit(|| TraceEvent::Terminate {
                step: "1.1".to_string(),
                soluble: true,
            });
            return Some(Stop::Verdict(Verdict::Soluble {
                derived_length: self.max_depth,
                certificate: self.records.values().cloned().collect(),
            }));
        }
        if let Some(stop) = self.bad_overlap("1.2") {
            return Some(stop);
        }
        self.lower = self
            .unseen
            .iter()
            .filter(|a| self.unseen.iter().any(|b| a.closure_within(b)))
            .cloned()
            .collect();
        self.top = self.unseen.difference(&self.lower).cloned().collect();
        self.counter += 1;
        let (counter, top, lower) = (self.counter, &self.top, &self.lower);
        if let Some(t) = self.trace.as_mut() {
            t.push(TraceEvent::BuildTopLower {
                counter,
                top: top.iter().cloned().collect(),
                lower: lower.iter().cloned().collect(),
            });
        }
        None
    }

    /// Assigns depths to TOP and checks them against the breakpoint count.
    pub fn step2(&mut self) -> Option<Stop> {
        for a in &self.top {
            let d = if self.counter == 1 {
                1
            } else {
                1 + self
                    .seen
                    .iter()
                    .filter(|b| a.is_subset_of(b) && a != *b)
                    .count()
            };
            self.orbd.insert(a.clone(), d);
            self.max_depth = self.max_depth.max(d);
        }
        if let Some(t) = self.trace.as_mut() {
            t.push(TraceEvent::Depths {
                max_depth: self.max_depth,
                depths: self.top.iter().map(|a| (a.clone(), self.orbd[a])).collect(),
            });
        }
        if self.max_depth <= self.n {
            return None;
        }
        let deepest = self
            .top
            .iter()
            .max_by(|a, b| self.orbd[*a].cmp(&self.orbd[*b]).then(b.cmp(a)))
            .expect("TOP is nonempty when depth grows")
            .clone();
        let mut entries: Vec<SignedOrbital> = self
            .seen
            .iter()
            .filter(|b| deepest.is_subset_of(b) && deepest != **b)
            .map(|b| {
                let c = &self.records[b].controller;
                SignedOrbital::new_unchecked(b.clone(), c.clone())
            })
            .collect();
        let inner = self
            .so
            .keys()
            .find(|s| s.orbital == deepest)
            .expect("UNSEEN orbitals carry a signature")
            .clone();
        entries.push(inner);
        let tower = Tower::new(entries).expect("SEEN orbitals over an orbital are nested");
        let witness = Witness::DepthExceeded {
            orbital: deepest,
            tower,
            breakpoints: self.n,
        };
        Some(self.not_soluble("2.2", witness))
    }

    /// The TOP orbital processed next: least depth, then leftmost, then
    /// shortest.
    pub fn select(&self) -> Option<Interval> {
        self.top
            .iter()
            .min_by(|a, b| self.orbd[*a].cmp(&self.orbd[*b]).then(a.cmp(b)))
            .cloned()
    }

    fn signatures_on(&self, a: &Interval) -> Vec<SignedOrbital> {
        self.so
            .keys()
            .filter(|s| s.orbital == *a)
            .cloned()
            .collect()
    }

    /// Builds the controller for `a` from the signatures stored on it.
    pub fn build_controller(&mut self, a: &Interval) -> Result<Controller, Stop> {
        let ys = self.signatures_on(a);
        let fixed_here: Option<SignedOrbital> = match &self.fixed {
            None => None,
            Some(fixed) => match ys.iter().find(|s| fixed.contains(*s)) {
                Some(h) => Some(h.clone()),
                None => return Err(Stop::Breach(Breach::OrphanOrbital(a.clone()))),
            },
        };
        let sigs: Vec<PLMap> = ys.iter().map(|s| s.signature.clone()).collect();
        let ma: Vec<Rational> = sigs.iter().map(|g| g.right_slope(a.left())).collect();
        let mb: Vec<Rational> = sigs.iter().map(|g| g.left_slope(a.right())).collect();
        for (end, slopes) in [(End::Left, &ma), (End::Right, &mb)] {
            if is_discrete(slopes) != Ok(true) {
                let witness = Witness::NonDiscrete {
                    orbital: a.clone(),
                    end,
                    signatures: sigs.clone(),
                    slopes: slopes.clone(),
                };
                return Err(self.not_soluble("3.3", witness));
            }
        }
        let least_a = least_above_one(&ma).expect("one-bump slopes at an end are not all 1");
        let (c, exponents) = match &fixed_here {
            Some(h) => {
                let found = h.signature.right_slope(a.left());
                if found != least_a.base {
                    return Err(Stop::Breach(Breach::SlopeMismatch {
                        orbital: a.clone(),
                        least: least_a.base,
                        found,
                    }));
                }
                let exps = ys.iter().map(|s| i64::from(s == h)).collect();
                (h.signature.clone(), exps)
            }
            None => {
                let c = sigs
                    .iter()
                    .zip(&least_a.exponents)
                    .fold(PLMap::identity(), |acc, (g, &p)| acc.compose(&g.pow(p)));
                (c, least_a.exponents.clone())
            }
        };

        let c_orbital = orbital_tuple(&c)
            .into_iter()
            .find(|o| o.left() == a.left())
            .expect("slope above 1 at a starts an orbital there");
        if classify_pair(&c_orbital, a).is_bad_overlap() {
            let witness = Witness::ControllerImbalance(Imbalance::PartialOrbital {
                orbital: a.clone(),
                controller: c,
                controller_orbital: c_orbital,
            });
            return Err(self.not_soluble("3.5", witness));
        }

        let m_cb = c.left_slope(a.right());
        let expected = least_above_one(&mb)
            .expect("one-bump slopes at an end are not all 1")
            .base
            .recip();
        if m_cb != expected {
            let witness = Witness::ControllerImbalance(Imbalance::RightEndSlope {
                orbital: a.clone(),
                controller: c,
                signatures: sigs,
                slope: m_cb,
                expected,
            });
            return Err(self.not_soluble("3.6", witness));
        }

        let m_ca = c.right_slope(a.left());
        let mut powers = Vec::with_capacity(sigs.len());
        for (i, g) in sigs.iter().enumerate() {
            let l = discrete_log(&ma[i], &m_ca)
                .ok()
                .flatten()
                .expect("left slopes lie in the group generated by the controller's");
            if m_cb.pow(l) != mb[i] {
                let witness = Witness::ControllerImbalance(Imbalance::PowerMismatch {
                    orbital: a.clone(),
                    controller: c,
                    signature: g.clone(),
                    power: l,
                });
                return Err(self.not_soluble("3.7", witness));
            }
            powers.push(l);
        }

        let controller = Controller {
            orbital: a.clone(),
            map: c,
            exponents,
            powers,
            signatures: ys,
        };
        self.emit(|| TraceEvent::Controller {
            orbital: controller.orbital.clone(),
            controller: controller.map.clone(),
            exponents: controller.exponents.clone(),
            powers: controller.powers.clone(),
        });
        Ok(controller)
    }

    fn insert(&mut self, s: SignedOrbital, p: Rc<Provenance>) -> bool {
        if self.so.contains_key(&s) {
            return false;
        }
        if !self.seen.contains(&s.orbital) {
            self.unseen.insert(s.orbital.clone());
        }
        self.so.insert(s, p);
        true
    }

    fn remove(&mut self, s: &SignedOrbital, derivation: Derivation) -> Result<(), Stop> {
        if self.fixed.as_ref().is_some_and(|f| f.contains(s)) {
            return Err(Stop::Breach(Breach::FixedRemoved(s.clone())));
        }
        self.so.remove(s);
        self.derivations.insert(s.clone(), derivation);
        Ok(())
    }

    /// Replaces the signatures on the controller's orbital by the controller
    /// and the factors of their quotients by its powers.
    pub fn rewrite(&mut self, ctl: &Controller) -> Result<SignedOrbital, Stop> {
        let a = &ctl.orbital;
        let c_key = SignedOrbital::new_unchecked(a.clone(), ctl.map.clone());
        let c_prov = match self.so.get(&c_key) {
            Some(p) => p.clone(),
            None => Rc::new(Provenance::Product(
                ctl.signatures
                    .iter()
                    .zip(&ctl.exponents)
                    .filter(|(_, &e)| e != 0)
                    .map(|(s, &e)| (self.so[s].clone(), e))
                    .collect(),
            )),
        };
        let mut added = Vec::new();
        let mut removed = Vec::new();
        if self.insert(c_key.clone(), c_prov.clone()) {
            added.push(c_key.clone());
        }
        let mut quotients = Vec::new();
        for (s, &l) in ctl.signatures.iter().zip(&ctl.powers) {
            if s.signature == ctl.map {
                continue;
            }
            let h = s.signature.compose(&ctl.map.pow(-l));
            let prov = Rc::new(Provenance::Product(alloc::vec![
                (self.so[s].clone(), 1),
                (c_prov.clone(), -l),
            ]));
            let factors = factor_signed_orbitals(&h);
            for f in &factors {
                if self.insert(f.clone(), prov.clone()) {
                    added.push(f.clone());
                }
            }
            quotients.push((s.clone(), factors, l));
        }
        for (s, factors, l) in quotients {
            self.remove(
                &s,
                Derivation::ControllerQuotient {
                    factors,
                    controller: c_key.clone(),
                    power: l,
                },
            )?;
            removed.push(s);
        }
        self.emit(|| TraceEvent::Rewrite { added, removed });
        Ok(c_key)
    }

    /// One pass of Step 3 on the selected orbital.
    pub fn step3(&mut self) -> Option<Stop> {
        let a = self.select().expect("TOP is nonempty after Step 1");
        self.step3_visits += 1;
        let depth = self.orbd[&a];
        let count = self.signatures_on(&a).len();
        self.emit(|| TraceEvent::SelectOrbital {
            orbital: a.clone(),
            depth,
            signatures: count,
        });
        let ctl = match self.build_controller(&a) {
            Ok(c) => c,
            Err(stop) => return Some(stop),
        };
        let c_key = match self.rewrite(&ctl) {
            Ok(k) => k,
            Err(stop) => return Some(stop),
        };
        if let Some(stop) = self.bad_overlap("3.11") {
            return Some(stop);
        }
        match self.project(&a, &c_key) {
            Ok(r0) => {
                self.mark_seen(&a, &ctl.map, r0);
                None
            }
            Err(stop) => Some(stop),
        }
    }

    fn mark_seen(&mut self, a: &Interval, c: &PLMap, r: Rational) {
        self.unseen.remove(a);
        self.seen.insert(a.clone());
        self.records.insert(
            a.clone(),
            SeenRecord {
                orbital: a.clone(),
                controller: c.clone(),
                witness: r.clone(),
            },
        );
        self.emit(|| TraceEvent::MarkSeen {
            orbital: a.clone(),
            witness: r,
        });
    }

    /// Moves the orbitals nested in `a` into one fundamental domain of the
    /// controller and returns its left end.
    fn project(&mut self, a: &Interval, c_key: &SignedOrbital) -> Result<Rational, Stop> {
        let c = c_key.signature.clone();
        let proj: Vec<SignedOrbital> = self
            .so
            .keys()
            .filter(|s| s.orbital.is_subset_of(a) && s.orbital != *a)
            .cloned()
            .collect();
        self.emit(|| TraceEvent::Projection {
            orbitals: proj.iter().map(|s| s.orbital.clone()).collect(),
        });
        if proj.is_empty() {
            return Ok(a.midpoint());
        }

        for rho in &proj {
            if c.apply(rho.orbital.left()) < *rho.orbital.right() {
                let image = rho.conjugate(&c);
                return Err(self.not_soluble(
                    "3.13",
                    Witness::BadOverlap {
                        first: rho.clone(),
                        second: image,
                    },
                ));
            }
        }

        let mut powers = PowerCache::new(c.clone());
        let m = proj.len();
        let mut k = alloc::vec![alloc::vec![0i64; m]; m];
        for (i, rho) in proj.iter().enumerate() {
            let r = rho.orbital.left();
            let rc = c.apply(r);
            for (j, sigma) in proj.iter().enumerate() {
                let (kk, iterations) = fundamental_power(&c, sigma.orbital.left(), r, &rc);
                self.emit(|| TraceEvent::ConjugacySearch {
                    rho: rho.orbital.clone(),
                    sigma: sigma.orbital.clone(),
                    power: kk,
                    iterations,
                });
                for e in [kk - 1, kk] {
                    let image = sigma.orbital.image(powers.get(e));
                    if classify_pair(&rho.orbital, &image).is_bad_overlap() {
                        let second = sigma.conjugate(powers.get(e));
                        return Err(self.not_soluble(
                            "3.14",
                            Witness::BadOverlap {
                                first: rho.clone(),
                                second,
                            },
                        ));
                    }
                }
                k[i][j] = kk;
            }
        }

        // sigma ≺ rho iff the image of sigma sits strictly inside rho.
        let below = |i: usize, j: usize, powers: &mut PowerCache| -> bool {
            i != j && powers.get(k[i][j]).apply(proj[j].orbital.right()) < *proj[i].orbital.right()
        };
        let maximal: Vec<usize> = (0..m)
            .filter(|&i| !(0..m).any(|j| below(j, i, &mut powers)))
            .collect();
        let preferred: Vec<usize> = match &self.fixed {
            Some(fixed) => {
                let f: Vec<usize> = maximal
                    .iter()
                    .copied()
                    .filter(|&i| fixed.contains(&proj[i]))
                    .collect();
                if f.is_empty() {
                    maximal.clone()
                } else {
                    f
                }
            }
            None => maximal.clone(),
        };
        let i0 = preferred[0];
        let rho0 = proj[i0].clone();
        self.emit(|| TraceEvent::Representative {
            rho: rho0.clone(),
            maximal: maximal.len(),
        });

        let mut images = Vec::with_capacity(m);
        for (j, sigma) in proj.iter().enumerate() {
            let e = k[i0][j];
            let tau = if e == 0 {
                sigma.clone()
            } else {
                sigma.conjugate(powers.get(e))
            };
            let prov = Rc::new(Provenance::Conjugate {
                base: self.so[sigma].clone(),
                by: self.so[c_key].clone(),
                power: e,
            });
            self.insert(tau.clone(), prov);
            images.push(tau);
        }
        if let Some(stop) = self.bad_overlap("3.17") {
            return Err(stop);
        }

        let r0 = rho0.orbital.left().clone();
        let window = Interval::new_unchecked(r0.clone(), c.apply(&r0));
        let mut purged = Vec::new();
        for (j, sigma) in proj.iter().enumerate() {
            if !self.unseen.contains(&sigma.orbital) || sigma.orbital.intersects(&window) {
                continue;
            }
            if !purged.contains(&sigma.orbital) {
                purged.push(sigma.orbital.clone());
            }
            self.remove(
                sigma,
                Derivation::Conjugate {
                    image: images[j].clone(),
                    controller: c_key.clone(),
                    power: k[i0][j],
                },
            )?;
        }
        for o in &purged {
            self.unseen.remove(o);
        }
        self.emit(|| TraceEvent::Purge { removed: purged });
        Ok(r0)
    }
}

/// The `k` with `r <= u·c^k < rc`, where `rc = r·c` and `c` moves points
/// right, with the number of steps taken.
fn fundamental_power(c: &PLMap, u: &Rational, r: &Rational, rc: &Rational) -> (i64, u64) {
    let mut x = u.clone();
    let mut k = 0i64;
    let mut iterations = 0u64;
    while x < *r {
        x = c.apply(&x);
        k += 1;
        iterations += 1;
    }
    while x >= *rc {
        x = c.apply_inverse(&x);
        k -= 1;
        iterations += 1;
    }
    (k, iterations)
}

struct PowerCache {
    base: PLMap,
    cache: BTreeMap<i64, PLMap>,
}

impl PowerCache {
    fn new(base: PLMap) -> Self {
        PowerCache {
            base,
            cache: BTreeMap::new(),
        }
    }

    fn get(&mut self, k: i64) -> &PLMap {
        let base = &self.base;
        self.cache.entry(k).or_insert_with(|| base.pow(k))
    }
}
