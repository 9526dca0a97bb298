//! Named elements used throughout the tests, the docs and the CLI.

use alloc::vec::Vec;

use crate::arith::Rational;
use crate::pl::PLMap;

fn build(nodes: &[(i64, i64, i64, i64)]) -> PLMap {
    let raw: Vec<_> = nodes
        .iter()
        .map(|&(a, b, c, d)| (Rational::new(a, b), Rational::new(c, d)))
        .collect();
    PLMap::from_nodes(raw).expect("fixture node list is valid")
}

/// Generator `x0` of Thompson's group F: slopes 2, 1, 1/2.
pub fn x0() -> PLMap {
    build(&[(0, 1, 0, 1), (1, 4, 1, 2), (1, 2, 3, 4), (1, 1, 1, 1)])
}

/// Generator `x1`: the identity on `[0,1/2]`, a half-scale copy of `x0` on `[1/2,1]`.
pub fn x1() -> PLMap {
    build(&[
        (0, 1, 0, 1),
        (1, 2, 1, 2),
        (5, 8, 3, 4),
        (3, 4, 7, 8),
        (1, 1, 1, 1),
    ])
}

/// One-bump map on `(1/2,5/8)` with end slopes 3/2 and 1/2.
pub fn g2() -> PLMap {
    build(&[
        (0, 1, 0, 1),
        (1, 2, 1, 2),
        (9, 16, 19, 32),
        (5, 8, 5, 8),
        (1, 1, 1, 1),
    ])
}

/// One-bump map on `(9/16,19/32)` with end slopes 3/2 and 1/2.
pub fn g3() -> PLMap {
    build(&[
        (0, 1, 0, 1),
        (9, 16, 9, 16),
        (37, 64, 75, 128),
        (19, 32, 19, 32),
        (1, 1, 1, 1),
    ])
}

/// Two disjoint bumps, on `(0,1/4)` and `(1/2,1)`.
pub fn two_bump() -> PLMap {
    build(&[
        (0, 1, 0, 1),
        (1, 8, 3, 16),
        (1, 4, 1, 4),
        (1, 2, 1, 2),
        (3, 4, 7, 8),
        (1, 1, 1, 1),
    ])
}

/// Looks up a fixture by name.
pub fn by_name(name: &str) -> Option<PLMap> {
    Some(match name {
        "x0" => x0(),
        "x1" => x1(),
        "g2" => g2(),
        "g3" => g3(),
        "two_bump" => two_bump(),
        "id" | "identity" => PLMap::identity(),
        _ => return None,
    })
}
