//! Exact arithmetic in multi-quadratic number fields `Q(√m₁, …, √m_r)`.
//!
//! An element is stored as a finite sum `Σ c_k √k` where every `k` is a
//! square-free positive integer (`k = 1` is the rational part) and every
//! `c_k` is a nonzero rational. The square roots of distinct square-free
//! integers are linearly independent over `Q`, so this representation is
//! canonical: two values are equal iff their term maps are equal.
//!
//! Products of radicals are reduced eagerly, `√a·√b = g·√(ab/g²)` with
//! `g = gcd(a, b)`. Inverses and exact signs are computed by splitting off
//! the largest adjoined prime, `x = u + v√p`, and recursing on the norm
//! `u² − p v²`, which lives in a strictly smaller field.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Exact element of a multi-quadratic field.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Surd {
    terms: BTreeMap<u64, BigRational>,
}

fn largest_prime_factor(mut k: u64) -> u64 {
    let mut largest = 1;
    let mut p = 2;
    while p * p <= k {
        while k.is_multiple_of(p) {
            largest = p;
            k /= p;
        }
        p += 1;
    }
    if k > 1 {
        largest = largest.max(k);
    }
    largest
}

fn prime_factors(mut k: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= k {
        if k.is_multiple_of(p) {
            out.push(p);
            while k.is_multiple_of(p) {
                k /= p;
            }
        }
        p += 1;
    }
    if k > 1 {
        out.push(k);
    }
    out
}

/// Splits `m = s²·k` with `k` square-free.
fn square_free_split(mut m: u64) -> (u64, u64) {
    let mut outside = 1u64;
    let mut inside = 1u64;
    let mut p = 2u64;
    while p * p <= m {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        outside *= p.pow(e / 2);
        if e % 2 == 1 {
            inside *= p;
        }
        p += 1;
    }
    inside *= m;
    (outside, inside)
}

impl Surd {
    pub fn zero() -> Self {
        Surd { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Surd::from(1)
    }

    pub fn rational(q: BigRational) -> Self {
        let mut s = Surd::zero();
        if !q.is_zero() {
            s.terms.insert(1, q);
        }
        s
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Surd::rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// `√m` reduced to `s·√k` with `k` square-free.
    pub fn sqrt(m: u64) -> Self {
        if m == 0 {
            return Surd::zero();
        }
        let (outside, inside) = square_free_split(m);
        let mut s = Surd::zero();
        s.terms.insert(inside, BigRational::from_integer(BigInt::from(outside)));
        s
    }

    /// `c·√m` for a rational `c`.
    pub fn scaled_sqrt(c: BigRational, m: u64) -> Self {
        Surd::sqrt(m) * Surd::rational(c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|&k| k == 1)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.terms.get(&1).cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    /// Iterates `(radicand, coefficient)` pairs in increasing radicand order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    /// Sorted list of primes adjoined by this element (empty for rationals).
    pub fn tower(&self) -> Vec<u64> {
        let mut primes: Vec<u64> = self.terms.keys().flat_map(|&k| prime_factors(k)).collect();
        primes.sort_unstable();
        primes.dedup();
        primes
    }

    pub fn to_f64(&self) -> f64 {
        self.terms.iter().map(|(k, c)| c.to_f64().unwrap_or(f64::NAN) * (*k as f64).sqrt()).sum()
    }

    fn insert_term(&mut self, k: u64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    fn largest_prime(&self) -> u64 {
        self.terms.keys().map(|&k| largest_prime_factor(k)).max().unwrap_or(1)
    }

    /// Writes `self = u + v·√p` where neither `u` nor `v` involves `p`.
    fn split(&self, p: u64) -> (Surd, Surd) {
        let mut u = Surd::zero();
        let mut v = Surd::zero();
        for (&k, c) in &self.terms {
            if k % p == 0 {
                v.terms.insert(k / p, c.clone());
            } else {
                u.terms.insert(k, c.clone());
            }
        }
        (u, v)
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        if let Some(q) = self.as_rational() {
            return if q.is_positive() { 1 } else { -1 };
        }
        let p = self.largest_prime();
        let (u, v) = self.split(p);
        let su = u.signum();
        let sv = v.signum();
        if su == 0 {
            return sv;
        }
        if sv == 0 || su == sv {
            return su;
        }
        // Opposite signs: compare u² against p·v².
        let norm = &u * &u - &(&v * &v) * &Surd::from(p as i64);
        match norm.signum() {
            1 => su,
            -1 => sv,
            _ => 0,
        }
    }

    pub fn abs(&self) -> Surd {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Surd> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Surd::rational(q.recip()));
        }
        let p = self.largest_prime();
        let (u, v) = self.split(p);
        let norm = &u * &u - &(&v * &v) * &Surd::from(p as i64);
        let conj = &u - &(&v * &Surd::sqrt(p));
        Some(&conj * &norm.inv()?)
    }

    pub fn pow(&self, e: u32) -> Surd {
        let mut out = Surd::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }
}

impl From<i64> for Surd {
    fn from(v: i64) -> Self {
        Surd::rational(BigRational::from_integer(BigInt::from(v)))
    }
}

impl From<BigRational> for Surd {
    fn from(q: BigRational) -> Self {
        Surd::rational(q)
    }
}

impl<'a> Add<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.insert_term(k, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.insert_term(k, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        let mut out = Surd::zero();
        for (&a, ca) in &self.terms {
            for (&b, cb) in &rhs.terms {
                let g = a.gcd(&b);
                let k = (a / g) * (b / g);
                let c = ca * cb * BigRational::from_integer(BigInt::from(g));
                out.insert_term(k, c);
            }
        }
        out
    }
}

impl<'a> Div<&'a Surd> for &'a Surd {
    type Output = Surd;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Surd) -> Surd {
        self * &rhs.inv().expect("division by zero in Surd")
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(mut self) -> Surd {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        -self.clone()
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident $assign_tr:ident $assign:ident),*) => {$(
        impl $tr<Surd> for Surd {
            type Output = Surd;
            fn $method(self, rhs: Surd) -> Surd { (&self).$method(&rhs) }
        }
        impl<'a> $tr<&'a Surd> for Surd {
            type Output = Surd;
            fn $method(self, rhs: &Surd) -> Surd { (&self).$method(rhs) }
        }
        impl $assign_tr<Surd> for Surd {
            fn $assign(&mut self, rhs: Surd) { *self = (&*self).$method(&rhs); }
        }
        impl<'a> $assign_tr<&'a Surd> for Surd {
            fn $assign(&mut self, rhs: &Surd) { *self = (&*self).$method(rhs); }
        }
    )*};
}

forward_owned!(
    Add add AddAssign add_assign,
    Sub sub SubAssign sub_assign,
    Mul mul MulAssign mul_assign,
    Div div DivAssign div_assign
);

/// Field elements divide exactly, so the remainder is always zero.
impl Rem for Surd {
    type Output = Surd;
    fn rem(self, _rhs: Surd) -> Surd {
        Surd::zero()
    }
}

impl Zero for Surd {
    fn zero() -> Self {
        Surd::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Surd {
    fn one() -> Self {
        Surd::from(1)
    }
}

impl Num for Surd {
    type FromStrRadixErr = Error;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Error> {
        if radix != 10 {
            return Err(Error::Syntax { pos: 0, msg: format!("unsupported radix {radix}") });
        }
        s.parse()
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl Sum for Surd {
    fn sum<I: Iterator<Item = Surd>>(iter: I) -> Surd {
        iter.fold(Surd::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Surd> for Surd {
    fn sum<I: Iterator<Item = &'a Surd>>(iter: I) -> Surd {
        iter.fold(Surd::zero(), |acc, x| acc + x)
    }
}

impl Product for Surd {
    fn product<I: Iterator<Item = Surd>>(iter: I) -> Surd {
        iter.fold(Surd::one(), |acc, x| acc * x)
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Surd {
    /// Terms as `p/q*sqrt(m)` joined by `+`/`-`, e.g. `1-1/2*sqrt(6)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            if k == 1 {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "sqrt({k})")?;
            } else {
                write!(f, "{}*sqrt({k})", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Surd {
    type Err = Error;

    /// Parses sums of terms `p/q`, `sqrt(m)`, `p/q*sqrt(m)` joined by `+`/`-`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let poly = crate::poly::parse_constant(s)?;
        Ok(poly)
    }
}

impl Serialize for Surd {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Surd {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(v) => Ok(Surd::from(v)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radicals_reduce_eagerly() {
        assert_eq!(Surd::sqrt(8), Surd::from(2) * Surd::sqrt(2));
        assert_eq!(Surd::sqrt(2) * Surd::sqrt(3), Surd::sqrt(6));
        assert_eq!(Surd::sqrt(6) * Surd::sqrt(10), Surd::from(2) * Surd::sqrt(15));
        assert_eq!(Surd::sqrt(2) * Surd::sqrt(2), Surd::from(2));
        assert_eq!(Surd::sqrt(12).tower(), vec![3]);
        assert_eq!((Surd::sqrt(6) + Surd::sqrt(5)).tower(), vec![2, 3, 5]);
    }

    #[test]
    fn inverse_in_two_step_tower() {
        let x = Surd::from(1) + Surd::sqrt(2) + Surd::sqrt(3);
        let inv = x.inv().unwrap();
        assert_eq!(&x * &inv, Surd::one());
        assert!(Surd::zero().inv().is_none());
    }

    #[test]
    fn exact_sign() {
        // √2 + √3 − √10 ≈ −0.0165
        let x = Surd::sqrt(2) + Surd::sqrt(3) - Surd::sqrt(10);
        assert_eq!(x.signum(), -1);
        assert!(x.to_f64() < 0.0);
        let y = Surd::ratio(7, 5) - Surd::sqrt(2);
        assert_eq!(y.signum(), -1);
        let z = Surd::ratio(3, 2) - Surd::sqrt(2);
        assert_eq!(z.signum(), 1);
    }

    #[test]
    fn display_roundtrip() {
        let x = Surd::from(1) - Surd::ratio(1, 2) * Surd::sqrt(6);
        assert_eq!(x.to_string(), "1-1/2*sqrt(6)");
        assert_eq!(x.to_string().parse::<Surd>().unwrap(), x);
        assert_eq!("-sqrt(2)".parse::<Surd>().unwrap(), -Surd::sqrt(2));
        assert_eq!("3/6".parse::<Surd>().unwrap(), Surd::ratio(1, 2));
    }
}
