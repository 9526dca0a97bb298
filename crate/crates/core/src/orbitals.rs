//! Orbitals, one-bump factors, end slopes and end realisation.

use alloc::vec::Vec;
use core::fmt;

use crate::arith::Rational;
use crate::pl::PLMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrbitalError {
    #[error("({0},{1}) is not an interval inside [0,1]")]
    InvalidInterval(Rational, Rational),
    #[error("{0} is not an orbital of the given map")]
    NotAnOrbital(Interval),
}

/// Open interval `(left, right)` with `0 <= left < right <= 1`.
///
/// Ordered by `(left, right)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Interval {
    left: Rational,
    right: Rational,
}

impl Interval {
    pub fn new(left: Rational, right: Rational) -> Result<Self, OrbitalError> {
        if left.is_negative() || right > Rational::one() || left >= right {
            return Err(OrbitalError::InvalidInterval(left, right));
        }
        Ok(Interval { left, right })
    }

    pub(crate) fn new_unchecked(left: Rational, right: Rational) -> Self {
        debug_assert!(left < right);
        Interval { left, right }
    }

    pub fn left(&self) -> &Rational {
        &self.left
    }

    pub fn right(&self) -> &Rational {
        &self.right
    }

    /// `x ∈ (left, right)`.
    pub fn contains_point(&self, x: &Rational) -> bool {
        self.left < *x && *x < self.right
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.left <= self.left && self.right <= other.right
    }

    /// `closure(self) ⊂ other`.
    pub fn closure_within(&self, other: &Interval) -> bool {
        other.left < self.left && self.right < other.right
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        (&self.left).max(&other.left) < (&self.right).min(&other.right)
    }

    /// Image under a map, which is again an interval since maps are increasing.
    pub fn image(&self, f: &PLMap) -> Interval {
        Interval::new_unchecked(f.apply(&self.left), f.apply(&self.right))
    }

    pub fn midpoint(&self) -> Rational {
        self.left.midpoint(&self.right)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.left, self.right)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An orbital paired with a map having it as a component of support.
///
/// Ordered by orbital, then by the signature's node list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SignedOrbital {
    pub orbital: Interval,
    pub signature: PLMap,
}

impl SignedOrbital {
    pub fn new(orbital: Interval, signature: PLMap) -> Result<Self, OrbitalError> {
        if !orbital_tuple(&signature).contains(&orbital) {
            return Err(OrbitalError::NotAnOrbital(orbital));
        }
        Ok(SignedOrbital { orbital, signature })
    }

    pub(crate) fn new_unchecked(orbital: Interval, signature: PLMap) -> Self {
        SignedOrbital { orbital, signature }
    }

    /// Whether this is a valid signed orbital.
    pub fn is_valid(&self) -> bool {
        orbital_tuple(&self.signature).contains(&self.orbital)
    }

    /// Whether the signature moves the points of the orbital to the right.
    pub fn moves_right(&self) -> bool {
        let m = self.orbital.midpoint();
        self.signature.apply(&m) > m
    }

    /// Image under conjugation: `(A·h, h⁻¹·sig·h)`.
    pub fn conjugate(&self, h: &PLMap) -> SignedOrbital {
        SignedOrbital {
            orbital: self.orbital.image(h),
            signature: self.signature.conjugate(h),
        }
    }
}

impl fmt::Display for SignedOrbital {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, [{}])", self.orbital, self.signature)
    }
}

/// Components of `supp(f)`, left to right.
pub fn orbital_tuple(f: &PLMap) -> Vec<Interval> {
    // Refine the node list with the roots of x·f - x inside pieces, so that
    // the displacement has constant sign on the interior of every piece.
    let nodes = f.nodes();
    let mut pts: Vec<(Rational, Rational)> = Vec::with_capacity(nodes.len() * 2);
    for w in nodes.windows(2) {
        let (p, q) = (&w[0], &w[1]);
        let dp = &p.1 - &p.0;
        let dq = &q.1 - &q.0;
        pts.push((p.0.clone(), dp.clone()));
        if (dp.is_positive() && dq.is_negative()) || (dp.is_negative() && dq.is_positive()) {
            let root = &p.0 + &dp * (&q.0 - &p.0) / (&dp - &dq);
            pts.push((root, Rational::zero()));
        }
    }
    pts.push((Rational::one(), Rational::zero()));

    let mut out = Vec::new();
    let mut start: Option<Rational> = None;
    for w in pts.windows(2) {
        let (p, q) = (&w[0], &w[1]);
        let active = !(p.1.is_zero() && q.1.is_zero());
        if active && start.is_none() {
            start = Some(p.0.clone());
        }
        if active && q.1.is_zero() {
            let a = start.take().expect("orbital start recorded");
            out.push(Interval::new_unchecked(a, q.0.clone()));
        }
    }
    out
}

/// The one-bump factor of `f` supported on its orbital `a`.
pub fn one_bump_factor(f: &PLMap, a: &Interval) -> Result<PLMap, OrbitalError> {
    if !orbital_tuple(f).contains(a) {
        return Err(OrbitalError::NotAnOrbital(a.clone()));
    }
    Ok(f.restrict(a.left(), a.right()))
}

/// All factor signed orbitals of `f`, left to right.
pub fn factor_signed_orbitals(f: &PLMap) -> Vec<SignedOrbital> {
    orbital_tuple(f)
        .into_iter()
        .map(|a| {
            let sig = f.restrict(a.left(), a.right());
            SignedOrbital::new_unchecked(a, sig)
        })
        .collect()
}

/// Slopes of the signature next to the left and right ends of the orbital.
pub fn end_slopes(so: &SignedOrbital) -> (Rational, Rational) {
    (
        so.signature.right_slope(so.orbital.left()),
        so.signature.left_slope(so.orbital.right()),
    )
}

/// How a map's orbitals relate to the ends of an interval `(a,d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Realisation {
    /// `(a,d)` is itself an orbital.
    Orbital,
    /// Distinct orbitals `(a,b)` and `(c,d)` with `b <= c`.
    BothEnds,
    LeftEnd,
    RightEnd,
    None,
}

impl Realisation {
    pub fn realises_an_end(self) -> bool {
        !matches!(self, Realisation::None)
    }
}

pub fn realises(f: &PLMap, target: &Interval) -> Realisation {
    let orbs = orbital_tuple(f);
    if orbs.contains(target) {
        return Realisation::Orbital;
    }
    let left = orbs
        .iter()
        .find(|o| o.left() == target.left() && o.right() <= target.right());
    let right = orbs
        .iter()
        .find(|o| o.right() == target.right() && o.left() >= target.left());
    match (left, right) {
        (Some(l), Some(r)) if l.right() <= r.left() => Realisation::BothEnds,
        (Some(_), _) => Realisation::LeftEnd,
        (None, Some(_)) => Realisation::RightEnd,
        (None, None) => Realisation::None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{g2, two_bump, x0, x1};
    use alloc::vec;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn iv(a: &str, b: &str) -> Interval {
        Interval::new(q(a), q(b)).unwrap()
    }

    #[test]
    fn orbital_tuples() {
        assert!(orbital_tuple(&PLMap::identity()).is_empty());
        assert_eq!(orbital_tuple(&x0()), vec![iv("0", "1")]);
        assert_eq!(orbital_tuple(&x1()), vec![iv("1/2", "1")]);
        assert_eq!(orbital_tuple(&g2()), vec![iv("1/2", "5/8")]);
        assert_eq!(
            orbital_tuple(&two_bump()),
            vec![iv("0", "1/4"), iv("1/2", "1")]
        );
    }

    #[test]
    fn orbital_endpoint_inside_piece() {
        // the piece from (1/4,1/2) to (3/4,5/8) crosses the diagonal at 7/12
        let f: PLMap = "0:0 1/4:1/2 3/4:5/8 1:1".parse().unwrap();
        let orbs = orbital_tuple(&f);
        assert_eq!(orbs, vec![iv("0", "7/12"), iv("7/12", "1")]);
        assert_eq!(f.apply(&q("7/12")), q("7/12"));
        // a fixed interior node splits orbitals without a crossing
        let g: PLMap = "0:0 1/4:3/8 1/2:1/2 3/4:7/8 1:1".parse().unwrap();
        assert_eq!(orbital_tuple(&g), vec![iv("0", "1/2"), iv("1/2", "1")]);
    }

    #[test]
    fn invalid_intervals() {
        assert!(Interval::new(q("1/2"), q("1/2")).is_err());
        assert!(Interval::new(q("-1/2"), q("1/2")).is_err());
        assert!(Interval::new(q("1/2"), q("3/2")).is_err());
    }

    #[test]
    fn one_bump_factors() {
        assert_eq!(one_bump_factor(&x0(), &iv("0", "1")).unwrap(), x0());
        let f = two_bump();
        let left = one_bump_factor(&f, &iv("0", "1/4")).unwrap();
        assert_eq!(orbital_tuple(&left), vec![iv("0", "1/4")]);
        for s in ["1/16", "1/8", "3/16"] {
            assert_eq!(left.apply(&q(s)), f.apply(&q(s)));
        }
        for s in ["1/4", "1/2", "5/8", "3/4"] {
            assert_eq!(left.apply(&q(s)), q(s));
        }
        assert_eq!(
            one_bump_factor(&f, &iv("0", "1/2")),
            Err(OrbitalError::NotAnOrbital(iv("0", "1/2")))
        );
    }

    #[test]
    fn factors_commute_and_multiply_back() {
        assert!(factor_signed_orbitals(&PLMap::identity()).is_empty());
        let f = two_bump();
        let fs = factor_signed_orbitals(&f);
        assert_eq!(fs.len(), 2);
        let (a, b) = (&fs[0].signature, &fs[1].signature);
        assert_eq!(a.compose(b), b.compose(a));
        assert_eq!(a.compose(b), f);
        assert_eq!(factor_signed_orbitals(&x0()).len(), 1);
        let mid: PLMap = "0:0 1/4:1/4 5/16:3/8 1/2:1/2 1:1".parse().unwrap();
        assert_eq!(factor_signed_orbitals(&f.compose(&mid)).len(), 3);
    }

    #[test]
    fn end_slope_examples() {
        let so = SignedOrbital::new(iv("0", "1"), x0()).unwrap();
        assert_eq!(end_slopes(&so), (q("2"), q("1/2")));
        let so = SignedOrbital::new(iv("1/2", "1"), x1()).unwrap();
        assert_eq!(end_slopes(&so), (q("2"), q("1/2")));
        let so = SignedOrbital::new(iv("1/2", "5/8"), g2()).unwrap();
        assert_eq!(end_slopes(&so), (q("3/2"), q("1/2")));
        let inv = SignedOrbital::new(iv("1/2", "5/8"), g2().inverse()).unwrap();
        let (ma, mb) = end_slopes(&inv);
        assert!(ma < Rational::one() && mb > Rational::one());
        assert!(!inv.moves_right());
    }

    #[test]
    fn signed_orbital_validation() {
        assert!(SignedOrbital::new(iv("0", "1/2"), x0()).is_err());
        assert!(SignedOrbital::new(iv("1/2", "1"), x1()).is_ok());
    }

    #[test]
    fn realisation() {
        assert_eq!(realises(&x0(), &iv("0", "1")), Realisation::Orbital);
        assert_eq!(realises(&x1(), &iv("0", "1")), Realisation::RightEnd);
        assert_eq!(realises(&g2(), &iv("0", "1")), Realisation::None);
        assert_eq!(realises(&two_bump(), &iv("0", "1")), Realisation::BothEnds);
        assert_eq!(realises(&two_bump(), &iv("0", "1/2")), Realisation::LeftEnd);
    }
}
