//! Finitely generated multiplicative groups of positive rationals.
//!
//! A set of positive rationals generates a discrete subgroup of `(ℝ⁺, ×)`
//! exactly when the integer matrix of their prime exponents has rank at most
//! one, i.e. when all of them are integer powers of a common rational. The
//! least element above one and the expressing exponents then come out of an
//! extended gcd over the row multipliers; no logarithms are involved.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;

use crate::arith::{factorize, ArithError, PrimeExponentVector, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("slope group is not discrete")]
    NotDiscrete,
    #[error("slope group is trivial")]
    Trivial,
    #[error("base {0} of a discrete log must exceed 1")]
    BadBase(Rational),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Prime-exponent matrix of a list of positive rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentLattice {
    generators: Vec<Rational>,
    primes: Vec<BigUint>,
    matrix: Vec<Vec<i64>>,
}

impl ExponentLattice {
    pub fn new(generators: &[Rational]) -> Result<Self, LatticeError> {
        let vectors: Vec<PrimeExponentVector> =
            generators.iter().map(factorize).collect::<Result<_, _>>()?;
        let primes: Vec<BigUint> = vectors
            .iter()
            .flat_map(|v| v.primes().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let matrix = vectors
            .iter()
            .map(|v| primes.iter().map(|p| v.get(p)).collect())
            .collect();
        Ok(ExponentLattice {
            generators: generators.to_vec(),
            primes,
            matrix,
        })
    }

    pub fn generators(&self) -> &[Rational] {
        &self.generators
    }

    pub fn primes(&self) -> &[BigUint] {
        &self.primes
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    /// Rank of the exponent matrix.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<Rational>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|&e| Rational::from_integer(e)).collect())
            .collect();
        let cols = self.primes.len();
        let mut rank = 0;
        for col in 0..cols {
            let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, pivot);
            for r in 0..rows.len() {
                if r != rank && !rows[r][col].is_zero() {
                    let factor = &rows[r][col] / &rows[rank][col];
                    for c in col..cols {
                        let delta = &factor * &rows[rank][c];
                        rows[r][c] = &rows[r][c] - delta;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Writes every row as an integer multiple of one primitive row.
    ///
    /// Returns `None` when the rank exceeds one, and an empty primitive row
    /// when all generators are 1.
    fn common_direction(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let Some(first) = self.matrix.iter().find(|r| r.iter().any(|&e| e != 0)) else {
            return Some((Vec::new(), vec![0; self.matrix.len()]));
        };
        let g = first.iter().fold(0i64, |acc, &e| acc.gcd(&e));
        let primitive: Vec<i64> = first.iter().map(|&e| e / g).collect();
        let pivot = primitive.iter().position(|&e| e != 0)?;
        let mut multipliers = Vec::with_capacity(self.matrix.len());
        for row in &self.matrix {
            if row[pivot] % primitive[pivot] != 0 {
                return None;
            }
            let k = row[pivot] / primitive[pivot];
            if row.iter().zip(&primitive).any(|(&e, &p)| e != k * p) {
                return None;
            }
            multipliers.push(k);
        }
        Some((primitive, multipliers))
    }
}

/// The least element above one of a discrete slope group, with exponents
/// `p` such that `∏ generators[i]^p[i] = base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteSlopeGroup {
    pub base: Rational,
    pub exponents: Vec<i64>,
}

pub fn is_discrete(generators: &[Rational]) -> Result<bool, LatticeError> {
    let lattice = ExponentLattice::new(generators)?;
    Ok(lattice.common_direction().is_some())
}

pub fn least_above_one(generators: &[Rational]) -> Result<DiscreteSlopeGroup, LatticeError> {
    let lattice = ExponentLattice::new(generators)?;
    let (primitive, multipliers) = lattice
        .common_direction()
        .ok_or(LatticeError::NotDiscrete)?;
    if primitive.is_empty() {
        return Err(LatticeError::Trivial);
    }
    let (_, mut exponents) = extended_gcd_all(&multipliers);
    let mut base = product_of_powers(generators, &exponents);
    if base < Rational::one() {
        base = base.recip();
        exponents.iter_mut().for_each(|p| *p = -*p);
    }
    debug_assert!(base > Rational::one());
    Ok(DiscreteSlopeGroup { base, exponents })
}

/// The integer `l` with `base^l = m`, if any.
pub fn discrete_log(m: &Rational, base: &Rational) -> Result<Option<i64>, LatticeError> {
    if *base <= Rational::one() {
        return Err(LatticeError::BadBase(base.clone()));
    }
    let mv = factorize(m)?;
    let bv = factorize(base)?;
    let (p, be) = bv.iter().next().expect("base > 1 has a prime factor");
    let me = mv.get(p);
    if me % be != 0 {
        return Ok(None);
    }
    let l = me / be;
    Ok((bv.scale(l) == mv).then_some(l))
}

pub fn product_of_powers(generators: &[Rational], exponents: &[i64]) -> Rational {
    generators
        .iter()
        .zip(exponents)
        .fold(Rational::one(), |acc, (g, &p)| acc * g.pow(p))
}

fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = extended_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// `(g, c)` with `g = gcd(values) >= 0` and `Σ c[i]·values[i] = g`.
fn extended_gcd_all(values: &[i64]) -> (i64, Vec<i64>) {
    let mut coeffs = vec![0i64; values.len()];
    let mut g = 0i64;
    for (i, &v) in values.iter().enumerate() {
        if v == 0 {
            continue;
        }
        if g == 0 {
            g = v.abs();
            coeffs[i] = v.signum();
            continue;
        }
        let (ng, s, t) = extended_gcd(g, v);
        for c in coeffs.iter_mut().take(i) {
            *c *= s;
        }
        coeffs[i] = t;
        g = ng;
    }
    (g, coeffs)
}
