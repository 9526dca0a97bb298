//! Orientation-preserving piecewise-linear homeomorphisms of `[0,1]`.
//!
//! Maps act on the right: `x·(fg) = (x·f)·g`, so [`PLMap::compose`]`(f, g)`
//! applies `f` first.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::arith::{ArithError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlError {
    #[error("a PL map needs at least the two endpoint nodes")]
    TooFewNodes,
    #[error("first node must be 0:0 and last node 1:1")]
    EndpointViolation,
    #[error("node abscissae must be strictly increasing (node {0})")]
    NonIncreasingDomain(usize),
    #[error("node ordinates must be strictly increasing (node {0})")]
    NonIncreasingRange(usize),
    #[error("point {0} lies outside [0,1]")]
    OutOfDomain(Rational),
    #[error("malformed node {token:?}: {reason}")]
    Syntax { token: String, reason: String },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A canonical element of PL⁺([0,1]).
///
/// The node list starts at `(0,0)`, ends at `(1,1)`, is strictly increasing
/// in both coordinates and has no interior node with equal slopes on both
/// sides, so equality of maps is equality of node lists. The derived order
/// is lexicographic on node lists.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PLMap {
    nodes: Vec<(Rational, Rational)>,
}

/// Ordered set of breakpoints in `(0,1)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct BreakSet(BTreeSet<Rational>);

impl BreakSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.0.contains(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rational> {
        self.0.iter()
    }

    pub fn extend(&mut self, other: &BreakSet) {
        self.0.extend(other.0.iter().cloned());
    }

    /// Breakpoints of a set of maps.
    pub fn of_all<'a>(maps: impl IntoIterator<Item = &'a PLMap>) -> BreakSet {
        let mut out = BreakSet::new();
        for m in maps {
            out.extend(&m.breakpoints());
        }
        out
    }
}

impl FromIterator<Rational> for BreakSet {
    fn from_iter<T: IntoIterator<Item = Rational>>(iter: T) -> Self {
        BreakSet(
            iter.into_iter()
                .filter(|x| x.is_positive() && *x < Rational::one())
                .collect(),
        )
    }
}

fn slope(p: &(Rational, Rational), q: &(Rational, Rational)) -> Rational {
    (&q.1 - &p.1) / (&q.0 - &p.0)
}

impl PLMap {
    pub fn identity() -> Self {
        PLMap {
            nodes: alloc::vec![
                (Rational::zero(), Rational::zero()),
                (Rational::one(), Rational::one())
            ],
        }
    }

    /// Validates a raw node list and removes interior nodes that do not
    /// break slope.
    pub fn from_nodes(raw: Vec<(Rational, Rational)>) -> Result<Self, PlError> {
        if raw.len() < 2 {
            return Err(PlError::TooFewNodes);
        }
        let first = &raw[0];
        let last = &raw[raw.len() - 1];
        if !first.0.is_zero() || !first.1.is_zero() || !last.0.is_one() || !last.1.is_one() {
            return Err(PlError::EndpointViolation);
        }
        for i in 1..raw.len() {
            if raw[i].0 <= raw[i - 1].0 {
                return Err(PlError::NonIncreasingDomain(i));
            }
            if raw[i].1 <= raw[i - 1].1 {
                return Err(PlError::NonIncreasingRange(i));
            }
        }
        Ok(Self::canonical(raw))
    }

    /// Drops collinear interior nodes from a node list already known to be
    /// a valid homeomorphism.
    fn canonical(raw: Vec<(Rational, Rational)>) -> Self {
        let mut nodes: Vec<(Rational, Rational)> = Vec::with_capacity(raw.len());
        for p in raw {
            while nodes.len() >= 2 {
                let n = nodes.len();
                if slope(&nodes[n - 2], &nodes[n - 1]) == slope(&nodes[n - 1], &p) {
                    nodes.pop();
                } else {
                    break;
                }
            }
            nodes.push(p);
        }
        PLMap { nodes }
    }

    pub fn nodes(&self) -> &[(Rational, Rational)] {
        &self.nodes
    }

    pub fn is_identity(&self) -> bool {
        self.nodes.len() == 2
    }

    /// Slopes of the affine pieces, left to right.
    pub fn slopes(&self) -> impl Iterator<Item = Rational> + '_ {
        self.nodes.windows(2).map(|w| slope(&w[0], &w[1]))
    }

    /// Interior node abscissae.
    pub fn breakpoints(&self) -> BreakSet {
        BreakSet(
            self.nodes[1..self.nodes.len() - 1]
                .iter()
                .map(|n| n.0.clone())
                .collect(),
        )
    }

    /// `x·f`, checked.
    pub fn evaluate(&self, x: &Rational) -> Result<Rational, PlError> {
        if x.is_negative() || *x > Rational::one() {
            return Err(PlError::OutOfDomain(x.clone()));
        }
        Ok(self.apply(x))
    }

    /// `x·f` for `x ∈ [0,1]`. Panics outside the domain.
    pub fn apply(&self, x: &Rational) -> Rational {
        let i = self.piece_index(x);
        let (p, q) = (&self.nodes[i], &self.nodes[i + 1]);
        if *x == p.0 {
            return p.1.clone();
        }
        &p.1 + (x - &p.0) * slope(p, q)
    }

    /// `x·f⁻¹` for `x ∈ [0,1]`.
    pub fn apply_inverse(&self, y: &Rational) -> Rational {
        assert!(
            !y.is_negative() && *y <= Rational::one(),
            "point {y} outside [0,1]"
        );
        let i = match self.nodes.binary_search_by(|n| n.1.cmp(y)) {
            Ok(i) => return self.nodes[i].0.clone(),
            Err(i) => i - 1,
        };
        let (p, q) = (&self.nodes[i], &self.nodes[i + 1]);
        &p.0 + (y - &p.1) / slope(p, q)
    }

    /// Index `i` of the piece `[x_i, x_{i+1}]` with `x_i <= x < x_{i+1}`
    /// (the last piece for `x = 1`).
    fn piece_index(&self, x: &Rational) -> usize {
        assert!(
            !x.is_negative() && *x <= Rational::one(),
            "point {x} outside [0,1]"
        );
        match self.nodes.binary_search_by(|n| n.0.cmp(x)) {
            Ok(i) => i.min(self.nodes.len() - 2),
            Err(i) => i - 1,
        }
    }

    /// Slope of the piece immediately to the right of `x`, `x < 1`.
    pub fn right_slope(&self, x: &Rational) -> Rational {
        let i = self.piece_index(x);
        slope(&self.nodes[i], &self.nodes[i + 1])
    }

    /// Slope of the piece immediately to the left of `x`, `x > 0`.
    pub fn left_slope(&self, x: &Rational) -> Rational {
        let i = match self.nodes.binary_search_by(|n| n.0.cmp(x)) {
            Ok(i) => i - 1,
            Err(i) => i - 1,
        };
        slope(&self.nodes[i], &self.nodes[i + 1])
    }

    /// Right-action product: `x·(self·g) = (x·self)·g`.
    pub fn compose(&self, g: &PLMap) -> PLMap {
        // Walk self's ordinates and g's abscissae together; each merged
        // point y yields the node (y·self⁻¹, y·g).
        let (a, b) = (&self.nodes, &g.nodes);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i].1 <= b[j].0);
            let take_b = i >= a.len() || (j < b.len() && b[j].0 <= a[i].1);
            let node = if take_a && take_b {
                let n = (a[i].0.clone(), b[j].1.clone());
                i += 1;
                j += 1;
                n
            } else if take_a {
                let n = (a[i].0.clone(), g.apply(&a[i].1));
                i += 1;
                n
            } else {
                let n = (self.apply_inverse(&b[j].0), b[j].1.clone());
                j += 1;
                n
            };
            out.push(node);
        }
        Self::canonical(out)
    }

    pub fn inverse(&self) -> PLMap {
        PLMap {
            nodes: self
                .nodes
                .iter()
                .map(|(x, y)| (y.clone(), x.clone()))
                .collect(),
        }
    }

    /// `h⁻¹·self·h`.
    pub fn conjugate(&self, h: &PLMap) -> PLMap {
        h.inverse().compose(self).compose(h)
    }

    /// Commutator `[self, h] = self⁻¹·h⁻¹·self·h`.
    pub fn commutator(&self, h: &PLMap) -> PLMap {
        self.inverse()
            .compose(&h.inverse())
            .compose(self)
            .compose(h)
    }

    pub fn pow(&self, k: i64) -> PLMap {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = PLMap::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.compose(&base);
            }
        }
        acc
    }

    /// Map equal to `self` on `[a,b]` and the identity elsewhere.
    ///
    /// Requires `a` and `b` to be fixed points of `self`.
    pub(crate) fn restrict(&self, a: &Rational, b: &Rational) -> PLMap {
        let mut raw = Vec::with_capacity(self.nodes.len() + 4);
        raw.push((Rational::zero(), Rational::zero()));
        if a.is_positive() {
            raw.push((a.clone(), a.clone()));
        }
        raw.extend(self.nodes.iter().filter(|n| n.0 > *a && n.0 < *b).cloned());
        if *b < Rational::one() {
            raw.push((b.clone(), b.clone()));
        }
        raw.push((Rational::one(), Rational::one()));
        Self::canonical(raw)
    }

    /// Product of a sequence, applied left to right.
    pub fn product<'a>(maps: impl IntoIterator<Item = &'a PLMap>) -> PLMap {
        maps.into_iter()
            .fold(PLMap::identity(), |acc, m| acc.compose(m))
    }
}

impl fmt::Display for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, y)) in self.nodes.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}:{y}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PLMap[{self}]")
    }
}

impl FromStr for PLMap {
    type Err = PlError;

    /// Parses whitespace-separated `x:y` node pairs.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut raw = Vec::new();
        for token in s.split_whitespace() {
            let (x, y) = token.split_once(':').ok_or_else(|| PlError::Syntax {
                token: token.to_string(),
                reason: "expected x:y".to_string(),
            })?;
            raw.push((x.parse()?, y.parse()?));
        }
        PLMap::from_nodes(raw)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for PLMap {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.nodes.len()))?;
        for node in &self.nodes {
            seq.serialize_element(&[&node.0, &node.1])?;
        }
        seq.end()
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for PLMap {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw: Vec<(Rational, Rational)> = serde::Deserialize::deserialize(deserializer)?;
        PLMap::from_nodes(raw).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{g2, x0, x1};

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn map(s: &str) -> PLMap {
        s.parse().unwrap()
    }

    #[test]
    fn canonicalize_drops_fake_nodes() {
        assert_eq!(map("0:0 1/2:1/2 1:1"), PLMap::identity());
        assert_eq!(map("0:0 1:1"), PLMap::identity());
        let m = map("0:0 1/4:1/2 1/2:3/4 1:1");
        assert_eq!(m.nodes().len(), 4);
        let slopes: Vec<_> = m.slopes().collect();
        assert_eq!(slopes, [q("2"), q("1"), q("1/2")]);
        // padding with a node on an existing segment is invisible
        assert_eq!(map("0:0 1/8:1/4 1/4:1/2 1/2:3/4 3/4:7/8 1:1"), m);
    }

    #[test]
    fn invalid_node_lists() {
        assert_eq!("0:0".parse::<PLMap>(), Err(PlError::TooFewNodes));
        assert_eq!(
            "0:0 1/2:1".parse::<PLMap>(),
            Err(PlError::EndpointViolation)
        );
        assert_eq!(
            "0:1/4 1:1".parse::<PLMap>(),
            Err(PlError::EndpointViolation)
        );
        assert_eq!(
            "0:0 1/2:1/2 1/2:3/4 1:1".parse::<PLMap>(),
            Err(PlError::NonIncreasingDomain(2))
        );
        assert_eq!(
            "0:0 1/4:1/2 1/2:1/2 1:1".parse::<PLMap>(),
            Err(PlError::NonIncreasingRange(2))
        );
        assert!(matches!(
            "0:0 1/2 1:1".parse::<PLMap>(),
            Err(PlError::Syntax { .. })
        ));
        assert!(matches!(
            "0:0 1/0:1/2 1:1".parse::<PLMap>(),
            Err(PlError::Arith(_))
        ));
    }

    #[test]
    fn evaluation() {
        assert_eq!(PLMap::identity().evaluate(&q("1/3")).unwrap(), q("1/3"));
        assert_eq!(x0().evaluate(&q("1/2")).unwrap(), q("3/4"));
        assert_eq!(x0().evaluate(&q("1/4")).unwrap(), q("1/2"));
        assert_eq!(x0().evaluate(&Rational::zero()).unwrap(), Rational::zero());
        assert_eq!(x0().evaluate(&Rational::one()).unwrap(), Rational::one());
        assert_eq!(
            x0().evaluate(&q("5/4")),
            Err(PlError::OutOfDomain(q("5/4")))
        );
        assert_eq!(
            x0().evaluate(&q("-1/4")),
            Err(PlError::OutOfDomain(q("-1/4")))
        );
    }

    #[test]
    fn composition_and_inverse() {
        assert_eq!(x0().compose(&PLMap::identity()), x0());
        assert_eq!(x0().compose(&x0().inverse()), PLMap::identity());
        assert_eq!(x0().compose(&x0()).apply(&q("1/4")), q("3/4"));
        assert_eq!(PLMap::identity().inverse(), PLMap::identity());
        assert_eq!(x0().inverse().inverse(), x0());
        // breakpoints of the inverse are images of the breakpoints
        let images: BreakSet = x0().breakpoints().iter().map(|b| x0().apply(b)).collect();
        assert_eq!(x0().inverse().breakpoints(), images);
        assert_eq!(x0().pow(3), x0().compose(&x0()).compose(&x0()));
        assert_eq!(x0().pow(-2), x0().inverse().compose(&x0().inverse()));
        assert_eq!(x0().pow(0), PLMap::identity());
    }

    #[test]
    fn right_action_order() {
        // x·(x0 x1) = (x·x0)·x1
        let p = x0().compose(&x1());
        for s in ["1/8", "1/4", "3/8", "1/2", "5/8", "3/4", "7/8"] {
            assert_eq!(p.apply(&q(s)), x1().apply(&x0().apply(&q(s))));
        }
    }

    #[test]
    fn conjugation_moves_support() {
        assert_eq!(g2().conjugate(&PLMap::identity()), g2());
        assert_eq!(PLMap::identity().conjugate(&x0()), PLMap::identity());
        let c = g2().conjugate(&x0());
        // (1/2,5/8)·x0 = (3/4,13/16)
        let bps = c.breakpoints();
        assert_eq!(bps.iter().next().unwrap(), &q("3/4"));
        assert_eq!(bps.iter().last().unwrap(), &q("13/16"));
        assert_eq!(c.apply(&q("3/4")), q("3/4"));
        assert_eq!(c.apply(&q("13/16")), q("13/16"));
        assert_ne!(c.apply(&q("25/32")), q("25/32"));
    }

    #[test]
    fn breakpoint_sets() {
        assert!(PLMap::identity().breakpoints().is_empty());
        let b: Vec<_> = x0().breakpoints().iter().cloned().collect();
        assert_eq!(b, [q("1/4"), q("1/2")]);
        let b1: Vec<_> = x1().breakpoints().iter().cloned().collect();
        assert_eq!(b1, [q("1/2"), q("5/8"), q("3/4")]);
        // {1/4,1/2} ∪ {1/2,5/8,3/4}
        assert_eq!(BreakSet::of_all([&x0(), &x1()]).len(), 4);
    }

    #[test]
    fn equality() {
        assert_eq!(PLMap::identity(), map("0:0 1/3:1/3 2/3:2/3 1:1"));
        assert_ne!(x0(), x0().inverse());
        let w = g2().compose(&x0());
        let expanded = x0().compose(&g2().conjugate(&x0()));
        assert_eq!(w, expanded);
    }

    #[test]
    fn display_round_trip() {
        assert_eq!(x0().to_string(), "0:0 1/4:1/2 1/2:3/4 1:1");
        assert_eq!(map(&x1().to_string()), x1());
    }

    #[test]
    fn side_slopes() {
        assert_eq!(x0().right_slope(&Rational::zero()), q("2"));
        assert_eq!(x0().left_slope(&Rational::one()), q("1/2"));
        assert_eq!(x0().right_slope(&q("1/4")), q("1"));
        assert_eq!(x0().left_slope(&q("1/4")), q("2"));
    }
}
