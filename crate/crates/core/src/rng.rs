//! Seeded sampling of exact and float test data.
//!
//! All randomness goes through [`XorShiftRng`] seeded from a `u64`, so a
//! seed reproduces a run on every platform.

use rand::{Rng, SeedableRng};
use rand_xorshift::XorShiftRng;

use crate::poly::HomoPoly;
use crate::surd::Surd;

/// Largest numerator magnitude and denominator of a random rational.
pub const RATIONAL_BOUND: i64 = 16;

pub fn seeded(seed: u64) -> XorShiftRng {
    XorShiftRng::seed_from_u64(seed)
}

/// Random rational `p/q` with `|p| ≤ 16` and `1 ≤ q ≤ 16`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> Surd {
    let p = rng.random_range(-RATIONAL_BOUND..=RATIONAL_BOUND);
    let q = rng.random_range(1..=RATIONAL_BOUND);
    Surd::ratio(p, q)
}

pub fn random_nonzero_rational<R: Rng + ?Sized>(rng: &mut R) -> Surd {
    loop {
        let r = random_rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

pub fn random_point<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Surd> {
    (0..n).map(|_| random_rational(rng)).collect()
}

pub fn random_f64_point<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

/// Dense random homogeneous polynomial; each monomial is kept with
/// probability `density` and gets a random nonzero rational coefficient.
pub fn random_poly<R: Rng + ?Sized>(rng: &mut R, n: usize, d: u32, density: f64) -> HomoPoly {
    loop {
        let mut terms: Vec<(Vec<u32>, Surd)> = Vec::new();
        for e in exponents(n, d) {
            if rng.random_bool(density) {
                terms.push((e, random_nonzero_rational(rng)));
            }
        }
        if let Ok(h) = HomoPoly::from_terms(n, terms) {
            return h;
        }
    }
}

/// All exponent vectors of length `n` and total degree `d`, lexicographic.
pub fn exponents(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for mut rest in exponents(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let a: Vec<Surd> = random_point(&mut seeded(9), 5);
        let b: Vec<Surd> = random_point(&mut seeded(9), 5);
        assert_eq!(a, b);
    }

    #[test]
    fn exponent_count() {
        assert_eq!(exponents(3, 3).len(), 10);
        assert_eq!(exponents(4, 2).len(), 10);
    }
}
