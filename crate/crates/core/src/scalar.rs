//! The coefficient/evaluation domains: exact multi-quadratic values, `f64`,
//! and complex numbers over either.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{Num, One, Zero};

use crate::surd::Surd;

/// A field in which polynomials with [`Surd`] coefficients can be evaluated.
///
/// Conversion from exact to float is total; there is no way back.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_surd(s: &Surd) -> Self;

    fn from_int(v: i64) -> Self {
        Self::from_surd(&Surd::from(v))
    }

    fn powi(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = out * self.clone();
        }
        out
    }
}

impl Scalar for Surd {
    fn from_surd(s: &Surd) -> Self {
        s.clone()
    }
}

impl Scalar for f64 {
    fn from_surd(s: &Surd) -> Self {
        s.to_f64()
    }
}

impl<T: Scalar + Num> Scalar for Complex<T> {
    fn from_surd(s: &Surd) -> Self {
        Complex::new(T::from_surd(s), T::zero())
    }
}

/// Exact complex number with multi-quadratic real and imaginary parts.
pub type ExactComplex = Complex<Surd>;

pub fn to_complex_f64(z: &ExactComplex) -> Complex<f64> {
    Complex::new(z.re.to_f64(), z.im.to_f64())
}
