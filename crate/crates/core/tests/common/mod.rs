//! Random inputs shared by the integration tests.

#![allow(dead_code)]

use plsol::{PLMap, Rational};
use rand::seq::SliceRandom;
use rand::Rng;

/// A nice set built as a forest of one-bump maps, with the height of its
/// tallest tower.
pub struct NestedFixture {
    pub generators: Vec<PLMap>,
    pub height: usize,
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn bump(a: &Rational, b: &Rational, m: &Rational, y: &Rational) -> PLMap {
    let mut nodes = vec![(Rational::zero(), Rational::zero())];
    if a.is_positive() {
        nodes.push((a.clone(), a.clone()));
    }
    nodes.push((m.clone(), y.clone()));
    if *b < Rational::one() {
        nodes.push((b.clone(), b.clone()));
    }
    nodes.push((Rational::one(), Rational::one()));
    PLMap::from_nodes(nodes).expect("bump nodes increase")
}

fn lerp(a: &Rational, b: &Rational, t: &Rational) -> Rational {
    a + &(b - a) * t
}

/// Builds a subtree rooted at a bump on `(a,b)` and returns its height.
fn grow<R: Rng>(
    rng: &mut R,
    a: &Rational,
    b: &Rational,
    levels: usize,
    out: &mut Vec<PLMap>,
) -> usize {
    let fractions = [q(1, 3), q(1, 2), q(2, 3)];
    let m = lerp(a, b, fractions.choose(rng).unwrap());
    let right = rng.gen_bool(0.5);
    let s = fractions.choose(rng).unwrap();
    let y = if right {
        lerp(&m, b, s)
    } else {
        lerp(a, &m, s)
    };
    let h = bump(a, b, &m, &y);
    // Window (r, r·h) or (r·h, r).
    let (lo, hi) = if right {
        let r = lerp(a, &m, &q(1, 2));
        let rh = h.apply(&r);
        (r, rh)
    } else {
        let r = lerp(&m, b, &q(1, 2));
        let rh = h.apply(&r);
        (rh, r)
    };
    out.push(h);
    if levels <= 1 {
        return 1;
    }
    let children = rng.gen_range(1..=2usize);
    let mut tallest = 0;
    let width = &hi - &lo;
    let slot = &width / &Rational::from_integer(children as i64);
    for i in 0..children {
        let start = &lo + &slot * &Rational::from_integer(i as i64);
        let ca = lerp(&start, &(&start + &slot), &q(1, 5));
        let cb = lerp(&start, &(&start + &slot), &q(4, 5));
        let sub = if rng.gen_bool(0.7) {
            levels - 1
        } else {
            rng.gen_range(1..levels)
        };
        tallest = tallest.max(grow(rng, &ca, &cb, sub, out));
    }
    1 + tallest
}

/// A random nested nice set with up to `max_height` levels.
pub fn nested_nice_set<R: Rng>(rng: &mut R, max_height: usize) -> NestedFixture {
    let roots = rng.gen_range(1..=2usize);
    let mut generators = Vec::new();
    let mut height = 0;
    let cuts: Vec<(Rational, Rational)> = if roots == 1 {
        vec![(Rational::zero(), Rational::one())]
    } else {
        vec![(Rational::zero(), q(1, 2)), (q(1, 2), Rational::one())]
    };
    for (a, b) in &cuts {
        let levels = rng.gen_range(1..=max_height);
        height = height.max(grow(rng, a, b, levels, &mut generators));
    }
    generators.shuffle(rng);
    NestedFixture { generators, height }
}

/// A random element with at most `max_breaks` breakpoints on a grid of
/// twelfths.
pub fn random_element<R: Rng>(rng: &mut R, max_breaks: usize) -> PLMap {
    let k = rng.gen_range(1..=max_breaks);
    let mut xs: Vec<i64> = (1..12).collect();
    xs.shuffle(rng);
    let mut xs: Vec<i64> = xs.into_iter().take(k).collect();
    xs.sort();
    let mut ys: Vec<i64> = (1..12).collect();
    ys.shuffle(rng);
    let mut ys: Vec<i64> = ys.into_iter().take(k).collect();
    ys.sort();
    let mut nodes = vec![(Rational::zero(), Rational::zero())];
    nodes.extend(xs.iter().zip(&ys).map(|(&x, &y)| (q(x, 12), q(y, 12))));
    nodes.push((Rational::one(), Rational::one()));
    PLMap::from_nodes(nodes).expect("sorted grid nodes increase")
}

/// A product of two letters from `X ∪ X⁻¹`.
pub fn ball2_product<R: Rng>(rng: &mut R, generators: &[PLMap]) -> PLMap {
    let pick = |rng: &mut R| {
        let g = generators.choose(rng).unwrap();
        if rng.gen_bool(0.5) {
            g.clone()
        } else {
            g.inverse()
        }
    };
    let a = pick(rng);
    let b = pick(rng);
    a.compose(&b)
}
