//! Elements of Thompson's group F from words and tree pair diagrams.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::arith::Rational;
use crate::fixtures::{x0, x1};
use crate::pl::PLMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ThompsonError {
    #[error("bad token {token:?} at offset {offset}: {reason}")]
    Syntax {
        token: String,
        offset: usize,
        reason: &'static str,
    },
    #[error("tree pair has {domain} domain leaves but {range} range leaves")]
    LeafMismatch { domain: usize, range: usize },
    #[error("map is not an element of F")]
    NotInF,
}

/// A word in `x0`, `x1` with exponents `±1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FWord {
    letters: Vec<(u8, i8)>,
}

impl FWord {
    pub fn new(letters: impl IntoIterator<Item = (u8, i8)>) -> Self {
        FWord {
            letters: letters.into_iter().collect(),
        }
    }

    pub fn letters(&self) -> &[(u8, i8)] {
        &self.letters
    }

    pub fn to_plmap(&self) -> PLMap {
        word_to_plmap(self)
    }
}

impl FromStr for FWord {
    type Err = ThompsonError;

    /// Parses `"x0 x1^-1 x0^2"`; `"id"` and the empty string give the empty word.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut letters = Vec::new();
        let mut offset = 0;
        for token in s.split(' ') {
            let here = offset;
            offset += token.len() + 1;
            if token.is_empty() || token == "id" {
                continue;
            }
            let err = |reason| ThompsonError::Syntax {
                token: token.to_string(),
                offset: here,
                reason,
            };
            let (base, exp) = match token.split_once('^') {
                Some((b, e)) => (
                    b,
                    e.parse::<i64>()
                        .map_err(|_| err("exponent is not an integer"))?,
                ),
                None => (token, 1),
            };
            let g = match base {
                "x0" => 0,
                "x1" => 1,
                _ => return Err(err("expected x0 or x1")),
            };
            if exp.unsigned_abs() > 1 << 16 {
                return Err(err("exponent too large"));
            }
            let sign = if exp < 0 { -1 } else { 1 };
            letters.extend(core::iter::repeat_n((g, sign), exp.unsigned_abs() as usize));
        }
        Ok(FWord { letters })
    }
}

impl fmt::Display for FWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("id");
        }
        for (i, (g, e)) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "x{}", g)?;
            if *e < 0 {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

pub fn word_to_plmap(w: &FWord) -> PLMap {
    let gens = [x0(), x1()];
    let invs = [gens[0].inverse(), gens[1].inverse()];
    w.letters.iter().fold(PLMap::identity(), |acc, &(g, e)| {
        acc.compose(if e > 0 {
            &gens[g as usize]
        } else {
            &invs[g as usize]
        })
    })
}

/// A finite rooted binary tree; its leaves are standard dyadic intervals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tree {
    Leaf,
    Node(Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn leaf_count(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Node(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }

    /// Leaf intervals, left to right.
    pub fn leaves(&self) -> Vec<(Rational, Rational)> {
        let mut out = Vec::new();
        self.collect(Rational::zero(), Rational::one(), &mut out);
        out
    }

    fn collect(&self, a: Rational, b: Rational, out: &mut Vec<(Rational, Rational)>) {
        match self {
            Tree::Leaf => out.push((a, b)),
            Tree::Node(l, r) => {
                let m = a.midpoint(&b);
                l.collect(a, m.clone(), out);
                r.collect(m, b, out);
            }
        }
    }

    /// The tree whose leaves are the given partition of `[a,b]`, if the
    /// partition is by standard dyadic intervals.
    fn from_leaves(a: &Rational, b: &Rational, leaves: &[(Rational, Rational)]) -> Option<Tree> {
        match leaves {
            [] => None,
            [(x, y)] if x == a && y == b => Some(Tree::Leaf),
            _ => {
                let m = a.midpoint(b);
                let split = leaves.iter().position(|(x, _)| *x == m)?;
                Some(Tree::Node(
                    Box::new(Tree::from_leaves(a, &m, &leaves[..split])?),
                    Box::new(Tree::from_leaves(&m, b, &leaves[split..])?),
                ))
            }
        }
    }

    fn parse(s: &[u8], pos: &mut usize, text: &str) -> Result<Tree, ThompsonError> {
        let err = |at: usize, reason| ThompsonError::Syntax {
            token: text.to_string(),
            offset: at,
            reason,
        };
        match s.get(*pos) {
            Some(b'.') => {
                *pos += 1;
                Ok(Tree::Leaf)
            }
            Some(b'(') => {
                *pos += 1;
                let l = Tree::parse(s, pos, text)?;
                let r = Tree::parse(s, pos, text)?;
                if s.get(*pos) != Some(&b')') {
                    return Err(err(*pos, "expected ')'"));
                }
                *pos += 1;
                Ok(Tree::Node(Box::new(l), Box::new(r)))
            }
            Some(_) => Err(err(*pos, "expected '.' or '('")),
            None => Err(err(*pos, "unexpected end of tree")),
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf => f.write_str("."),
            Tree::Node(l, r) => write!(f, "({}{})", l, r),
        }
    }
}

impl FromStr for Tree {
    type Err = ThompsonError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let mut pos = 0;
        let tree = Tree::parse(t.as_bytes(), &mut pos, t)?;
        if pos != t.len() {
            return Err(ThompsonError::Syntax {
                token: t.to_string(),
                offset: pos,
                reason: "trailing characters",
            });
        }
        Ok(tree)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreePair {
    domain: Tree,
    range: Tree,
}

impl TreePair {
    pub fn new(domain: Tree, range: Tree) -> Result<Self, ThompsonError> {
        let (d, r) = (domain.leaf_count(), range.leaf_count());
        if d != r {
            return Err(ThompsonError::LeafMismatch {
                domain: d,
                range: r,
            });
        }
        Ok(TreePair { domain, range })
    }

    pub fn domain(&self) -> &Tree {
        &self.domain
    }

    pub fn range(&self) -> &Tree {
        &self.range
    }

    pub fn to_plmap(&self) -> PLMap {
        treepair_to_plmap(self)
    }
}

impl FromStr for TreePair {
    type Err = ThompsonError;

    /// Parses `"domain|range"`, e.g. `"((..).)|(.(..))"` for `x0`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (d, r) = s.split_once('|').ok_or_else(|| ThompsonError::Syntax {
            token: s.to_string(),
            offset: 0,
            reason: "expected 'domain|range'",
        })?;
        TreePair::new(d.parse()?, r.parse()?)
    }
}

impl fmt::Display for TreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.domain, self.range)
    }
}

pub fn treepair_to_plmap(t: &TreePair) -> PLMap {
    let mut nodes: Vec<(Rational, Rational)> = t
        .domain
        .leaves()
        .into_iter()
        .zip(t.range.leaves())
        .map(|((a, _), (c, _))| (a, c))
        .collect();
    nodes.push((Rational::one(), Rational::one()));
    PLMap::from_nodes(nodes).expect("leaf partitions give an increasing map")
}

const MAX_DEPTH: u32 = 64;

/// The reduced tree pair of an element of F.
pub fn plmap_to_treepair(f: &PLMap) -> Result<TreePair, ThompsonError> {
    let mut domain_leaves = Vec::new();
    subdivide(f, Rational::zero(), Rational::one(), 0, &mut domain_leaves)?;
    let range_leaves: Vec<(Rational, Rational)> = domain_leaves
        .iter()
        .map(|(a, b)| (f.apply(a), f.apply(b)))
        .collect();
    let zero = Rational::zero();
    let one = Rational::one();
    let domain = Tree::from_leaves(&zero, &one, &domain_leaves).ok_or(ThompsonError::NotInF)?;
    let range = Tree::from_leaves(&zero, &one, &range_leaves).ok_or(ThompsonError::NotInF)?;
    TreePair::new(domain, range)
}

fn subdivide(
    f: &PLMap,
    a: Rational,
    b: Rational,
    depth: u32,
    out: &mut Vec<(Rational, Rational)>,
) -> Result<(), ThompsonError> {
    let affine = !f.breakpoints().iter().any(|x| a < *x && *x < b);
    if affine && is_standard_dyadic(&f.apply(&a), &f.apply(&b)) {
        out.push((a, b));
        return Ok(());
    }
    if depth >= MAX_DEPTH {
        return Err(ThompsonError::NotInF);
    }
    let m = a.midpoint(&b);
    subdivide(f, a, m.clone(), depth + 1, out)?;
    subdivide(f, m, b, depth + 1, out)
}

fn is_standard_dyadic(a: &Rational, b: &Rational) -> bool {
    let w = b - a;
    if !w.is_positive() || !w.numer().is_one_value() || !w.is_dyadic() {
        return false;
    }
    (a / &w).is_integer()
}

trait IsOne {
    fn is_one_value(&self) -> bool;
}

impl IsOne for num_bigint::BigInt {
    fn is_one_value(&self) -> bool {
        *self == num_bigint::BigInt::from(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbitals::orbital_tuple;
    use crate::Interval;
    use proptest::prelude::*;

    fn w(s: &str) -> PLMap {
        s.parse::<FWord>().unwrap().to_plmap()
    }

    #[test]
    fn words() {
        assert_eq!(w(""), PLMap::identity());
        assert_eq!(w("x0"), x0());
        assert_eq!(w("x0^2 x0^-2"), PLMap::identity());
        let conj = w("x0^-1 x1 x0");
        assert_eq!(conj, x1().conjugate(&x0()));
        let quarter = Interval::new(Rational::new(3, 4), Rational::one()).unwrap();
        assert_eq!(orbital_tuple(&conj), [quarter]);
        assert_eq!("x0 x1^-1".parse::<FWord>().unwrap().to_string(), "x0 x1^-1");
        assert!(matches!(
            "x0 x2".parse::<FWord>(),
            Err(ThompsonError::Syntax { offset: 3, .. })
        ));
        assert!("x0^a".parse::<FWord>().is_err());
    }

    #[test]
    fn tree_pairs() {
        let id: TreePair = ".|.".parse().unwrap();
        assert_eq!(id.to_plmap(), PLMap::identity());
        let t: TreePair = "((..).)|(.(..))".parse().unwrap();
        assert_eq!(t.to_plmap(), x0());
        let t: TreePair = "(.((..).))|(.(.(..)))".parse().unwrap();
        assert_eq!(t.to_plmap(), x1());
        let t: TreePair = "(((..).).)|(.(.(..)))".parse().unwrap();
        assert_eq!(t.to_plmap(), w("x0 x0"));
        assert!(matches!(
            "(..)|.".parse::<TreePair>(),
            Err(ThompsonError::LeafMismatch {
                domain: 2,
                range: 1
            })
        ));
        assert!("(..|.".parse::<TreePair>().is_err());
        assert!("(...)|.".parse::<TreePair>().is_err());
    }

    #[test]
    fn reduced_tree_pairs() {
        assert_eq!(
            plmap_to_treepair(&x0()).unwrap().to_string(),
            "((..).)|(.(..))"
        );
        assert_eq!(
            plmap_to_treepair(&PLMap::identity()).unwrap().to_string(),
            ".|."
        );
        assert_eq!(
            plmap_to_treepair(&crate::fixtures::g2()),
            Err(ThompsonError::NotInF)
        );
    }

    fn word() -> impl Strategy<Value = FWord> {
        proptest::collection::vec((0u8..2, prop_oneof![Just(1i8), Just(-1i8)]), 0..8)
            .prop_map(FWord::new)
    }

    proptest! {
        #[test]
        fn words_give_dyadic_maps(v in word()) {
            let f = v.to_plmap();
            prop_assert!(f.breakpoints().iter().all(Rational::is_dyadic));
            for s in f.slopes() {
                prop_assert!(s.is_dyadic() && (s.numer().is_one_value() || s.denom().is_one_value()));
            }
        }

        #[test]
        fn concatenation_is_composition(u in word(), v in word()) {
            let uv = FWord::new(u.letters().iter().chain(v.letters()).copied());
            prop_assert_eq!(uv.to_plmap(), u.to_plmap().compose(&v.to_plmap()));
        }

        #[test]
        fn tree_pair_round_trip(v in word()) {
            let f = v.to_plmap();
            let t = plmap_to_treepair(&f).unwrap();
            prop_assert_eq!(t.to_plmap(), f);
            let again: TreePair = t.to_string().parse().unwrap();
            prop_assert_eq!(again, t);
        }
    }
}
