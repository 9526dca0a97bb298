//! Exact rational scalars and prime factorization.
//!
//! Every coordinate and slope in the engine is a [`Rational`]. Slopes are
//! additionally decomposed into [`PrimeExponentVector`]s when deciding
//! discreteness of multiplicative slope groups.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("factorization requires a positive rational, got {0}")]
    NonPositive(Rational),
    #[error("integer with {bits} bits exceeds the factorization cap of {cap} bits")]
    TooLarge { bits: u64, cap: u64 },
    #[error("could not split composite cofactor {0} within the trial-division bound")]
    Unfactored(BigUint),
}

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn from_bigints(numer: BigInt, denom: BigInt) -> Option<Self> {
        if denom.is_zero() {
            return None;
        }
        Some(Rational(BigRational::new(numer, denom)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational(self.0.recip())
    }

    pub fn checked_div(&self, rhs: &Rational) -> Option<Rational> {
        if rhs.is_zero() {
            None
        } else {
            Some(Rational(&self.0 / &rhs.0))
        }
    }

    /// Integer power; negative exponents invert. Panics for `0^k`, `k < 0`.
    pub fn pow(&self, exp: i64) -> Self {
        if exp < 0 {
            return self.recip().pow(-exp);
        }
        let mut base = self.0.clone();
        let mut acc = BigRational::one();
        let mut e = exp as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Rational(acc)
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Midpoint of `self` and `other`.
    pub fn midpoint(&self, other: &Rational) -> Self {
        Rational((&self.0 + &other.0) / BigRational::from_integer(2.into()))
    }

    /// Whether the denominator is a power of two.
    pub fn is_dyadic(&self) -> bool {
        let d = self.denom().magnitude();
        d.is_one() || (d.count_ones() == 1)
    }

    /// Approximate value, for rendering only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || ArithError::Parse(String::from(s));
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (t, None),
        };
        let digits_ok = |x: &str, allow_sign: bool| {
            let body = if allow_sign {
                x.strip_prefix('-').unwrap_or(x)
            } else {
                x
            };
            !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
        };
        if !digits_ok(n, true) {
            return Err(bad());
        }
        let numer: BigInt = n.parse().map_err(|_| bad())?;
        let denom: BigInt = match d {
            Some(d) => {
                if !digits_ok(d, false) {
                    return Err(bad());
                }
                d.parse().map_err(|_| bad())?
            }
            None => BigInt::one(),
        };
        Rational::from_bigints(numer, denom)
            .ok_or_else(|| ArithError::ZeroDenominator(String::from(s)))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0 $op &rhs.0)
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(&self.0 $op rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);
forward_binop!(Div, div, /);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = Rational;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational as \"p/q\", \"p\" or an integer")
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Rational, E> {
                v.parse().map_err(E::custom)
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Rational, E> {
                Ok(Rational::from_integer(v))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Rational, E> {
                i64::try_from(v)
                    .map(Rational::from_integer)
                    .map_err(|_| E::custom("integer out of range"))
            }
        }
        deserializer.deserialize_any(V)
    }
}

/// Sparse prime factorization of a positive rational.
///
/// Keys are primes, values nonzero exponents (negative for the denominator).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PrimeExponentVector(BTreeMap<BigUint, i64>);

impl PrimeExponentVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, prime: &BigUint) -> i64 {
        self.0.get(prime).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BigUint, i64)> {
        self.0.iter().map(|(p, e)| (p, *e))
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.0.keys()
    }

    /// Adds `exp` to the exponent of `prime`, dropping zero entries.
    pub fn add_exponent(&mut self, prime: BigUint, exp: i64) {
        let e = self.0.entry(prime.clone()).or_insert(0);
        *e += exp;
        if *e == 0 {
            self.0.remove(&prime);
        }
    }

    /// Componentwise sum: the vector of the product.
    pub fn combine(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, e) in other.iter() {
            out.add_exponent(p.clone(), e);
        }
        out
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::new();
        }
        PrimeExponentVector(self.0.iter().map(|(p, e)| (p.clone(), e * k)).collect())
    }

    /// Multiplies the prime powers back into a rational.
    pub fn reconstruct(&self) -> Rational {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (p, &e) in &self.0 {
            let pw = num_traits::pow(p.clone(), e.unsigned_abs() as usize);
            if e > 0 {
                num *= pw;
            } else {
                den *= pw;
            }
        }
        Rational(BigRational::new(
            BigInt::from_biguint(Sign::Plus, num),
            BigInt::from_biguint(Sign::Plus, den),
        ))
    }
}

impl FromIterator<(BigUint, i64)> for PrimeExponentVector {
    fn from_iter<T: IntoIterator<Item = (BigUint, i64)>>(iter: T) -> Self {
        let mut v = PrimeExponentVector::new();
        for (p, e) in iter {
            v.add_exponent(p, e);
        }
        v
    }
}

/// Factorization settings. Integers wider than `max_bits` are rejected
/// instead of being attacked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factorizer {
    pub max_bits: u64,
    /// Trial-division bound used for integers wider than 64 bits.
    pub trial_limit: u64,
}

impl Default for Factorizer {
    fn default() -> Self {
        Factorizer {
            max_bits: 256,
            trial_limit: 1 << 20,
        }
    }
}

/// Factorizes a positive rational with the default [`Factorizer`].
pub fn factorize(q: &Rational) -> Result<PrimeExponentVector, ArithError> {
    Factorizer::default().factorize(q)
}

impl Factorizer {
    pub fn factorize(&self, q: &Rational) -> Result<PrimeExponentVector, ArithError> {
        if !q.is_positive() {
            return Err(ArithError::NonPositive(q.clone()));
        }
        let mut out = PrimeExponentVector::new();
        for (n, sign) in [(q.numer().magnitude(), 1i64), (q.denom().magnitude(), -1)] {
            for (p, e) in self.factor_integer(n)? {
                out.add_exponent(p, sign * e);
            }
        }
        Ok(out)
    }

    fn factor_integer(&self, n: &BigUint) -> Result<Vec<(BigUint, i64)>, ArithError> {
        let bits = n.bits();
        if bits > self.max_bits {
            return Err(ArithError::TooLarge {
                bits,
                cap: self.max_bits,
            });
        }
        let mut primes: BTreeMap<BigUint, i64> = BTreeMap::new();
        if let Some(small) = n.to_u64() {
            let mut stack = alloc::vec![small];
            while let Some(m) = stack.pop() {
                if m == 1 {
                    continue;
                }
                if is_prime_u64(m) {
                    *primes.entry(BigUint::from(m)).or_insert(0) += 1;
                    continue;
                }
                let d = split_u64(m);
                stack.push(d);
                stack.push(m / d);
            }
            return Ok(primes.into_iter().collect());
        }

        // Wide integers: strip small factors by trial division over the
        // 2,3,5 wheel, then require the cofactor to be 1, u64-sized or prime.
        let mut rest = n.clone();
        let mut strip = |rest: &mut BigUint, d: u64| {
            let bd = BigUint::from(d);
            while (&*rest % &bd).is_zero() {
                *rest /= &bd;
                *primes.entry(bd.clone()).or_insert(0) += 1;
            }
        };
        for d in [2u64, 3, 5] {
            strip(&mut rest, d);
        }
        let wheel = [4u64, 2, 4, 2, 4, 6, 2, 6];
        let mut d = 7u64;
        let mut i = 0;
        while d <= self.trial_limit && rest.bits() > 64 {
            strip(&mut rest, d);
            d += wheel[i];
            i = (i + 1) % wheel.len();
        }
        if rest.is_one() {
            return Ok(primes.into_iter().collect());
        }
        if rest.to_u64().is_some() {
            for (p, e) in self.factor_integer(&rest)? {
                *primes.entry(p).or_insert(0) += e;
            }
            return Ok(primes.into_iter().collect());
        }
        if is_probable_prime_big(&rest) {
            *primes.entry(rest).or_insert(0) += 1;
            return Ok(primes.into_iter().collect());
        }
        Err(ArithError::Unfactored(rest))
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Returns a nontrivial divisor of the composite `n`.
fn split_u64(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return p;
        }
    }
    // Pollard-Brent rho.
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        while g == 1 {
            x = f(x);
            y = f(f(y));
            g = x.abs_diff(y).gcd(&n);
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn is_probable_prime_big(n: &BigUint) -> bool {
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'outer: for a in [
        2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
    ] {
        let a = BigUint::from(a);
        if &a >= n {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Three-way comparison of two rationals.
pub fn rat_cmp(a: &Rational, b: &Rational) -> Ordering {
    a.cmp(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn comparisons() {
        assert_eq!(rat_cmp(&q("1/2"), &q("3/4")), Ordering::Less);
        assert_eq!(rat_cmp(&q("2/4"), &q("1/2")), Ordering::Equal);
        // 19*16 = 304 > 9*32 = 288
        assert_eq!(rat_cmp(&q("19/32"), &q("9/16")), Ordering::Greater);
    }

    #[test]
    fn arithmetic() {
        assert_eq!(q("1/2") + q("1/4"), q("3/4"));
        assert_eq!(q("3/2") * q("2/3"), Rational::one());
        let slope = (q("5/8") - q("19/32")) / (q("5/8") - q("9/16"));
        assert_eq!(slope, q("1/2"));
        assert_eq!(q("1/2").checked_div(&Rational::zero()), None);
        assert_eq!(q("3/2").pow(-2), q("4/9"));
        assert_eq!(q("7").pow(0), Rational::one());
    }

    #[test]
    fn normalization_and_display() {
        let r = Rational::new(6, -4);
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(Rational::new(0, 5).to_string(), "0");
        assert_eq!(q("-4/2").to_string(), "-2");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            "1/0".parse::<Rational>(),
            Err(ArithError::ZeroDenominator(_))
        ));
        assert!("".parse::<Rational>().is_err());
        assert!("1/-2".parse::<Rational>().is_err());
        assert!("a/2".parse::<Rational>().is_err());
        assert!("1.5".parse::<Rational>().is_err());
        assert_eq!(q(" -3/9 "), Rational::new(-1, 3));
    }

    #[test]
    fn factorization_examples() {
        assert!(factorize(&Rational::one()).unwrap().is_empty());
        let v = factorize(&q("8/3")).unwrap();
        assert_eq!(v.get(&BigUint::from(2u32)), 3);
        assert_eq!(v.get(&BigUint::from(3u32)), -1);
        assert_eq!(v.len(), 2);
        let v = factorize(&q("12/25")).unwrap();
        assert_eq!(v.get(&BigUint::from(2u32)), 2);
        assert_eq!(v.get(&BigUint::from(3u32)), 1);
        assert_eq!(v.get(&BigUint::from(5u32)), -2);
        assert_eq!(v.reconstruct(), q("12/25"));
    }

    #[test]
    fn factorization_rejects_nonpositive_and_oversized() {
        assert!(matches!(
            factorize(&Rational::zero()),
            Err(ArithError::NonPositive(_))
        ));
        assert!(matches!(
            factorize(&q("-2")),
            Err(ArithError::NonPositive(_))
        ));
        let huge = Rational::from_bigints(BigInt::one() << 300u32, BigInt::one()).unwrap();
        assert!(matches!(factorize(&huge), Err(ArithError::TooLarge { .. })));
    }

    #[test]
    fn factorization_of_wide_integers() {
        // 2^70 * (2^61 - 1), the latter a Mersenne prime.
        let m61: BigInt = (BigInt::one() << 61u32) - 1;
        let n = (BigInt::one() << 70u32) * &m61;
        let r = Rational::from_bigints(n, BigInt::from(3)).unwrap();
        let v = factorize(&r).unwrap();
        assert_eq!(v.get(&BigUint::from(2u32)), 70);
        assert_eq!(v.get(m61.magnitude()), 1);
        assert_eq!(v.get(&BigUint::from(3u32)), -1);
        assert_eq!(v.reconstruct(), r);
        // Product of two 32-bit primes goes through Pollard rho.
        let r = Rational::from_bigints(
            BigInt::from(4_294_967_291u64) * BigInt::from(4_294_967_279u64),
            BigInt::one(),
        )
        .unwrap();
        let v = factorize(&r).unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v.reconstruct(), r);
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(!is_prime_u64(1));
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(561));
        assert!(is_prime_u64((1u64 << 61) - 1));
    }
}
