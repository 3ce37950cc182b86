//! Central finite differences for complex Hessians of potentials of the form
//! `K = c·log P(W)`, with `P` a real homogeneous polynomial in `W = (x, y)`.
//!
//! Naively differencing `log P` loses most digits at step `1e−5`. Instead
//! `K(W0+δ) − K(W0) = c·log1p(ΔP/P(W0))` with the increment
//! `ΔP = Σ_{k≥1} C(D,k)·P(W0,…,W0,δ,…,δ)` expanded through the polarization,
//! which involves no cancellation.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::poly::{binomial, HomoPoly, SymForm};

/// Default step for second differences.
pub const FD_STEP: f64 = 1e-5;

/// `K = coeff·log P` around a fixed base point.
pub struct LogPotential {
    form: SymForm,
    coeff: f64,
    base: Vec<f64>,
    p0: f64,
}

impl LogPotential {
    pub fn new(p: &HomoPoly, coeff: f64, base: &[f64]) -> Result<Self> {
        let p0 = p.try_eval(base)?;
        if p0 <= 0.0 || !p0.is_finite() {
            return Err(Error::Domain(p0));
        }
        Ok(LogPotential { form: p.polarize(), coeff, base: base.to_vec(), p0 })
    }

    pub fn value(&self) -> f64 {
        self.coeff * self.p0.ln()
    }

    /// `P(W0 + δ) − P(W0)`.
    pub fn increment(&self, delta: &[f64]) -> f64 {
        let d = self.form.degree() as usize;
        let mut total = 0.0;
        for k in 1..=d {
            let mut args: Vec<&[f64]> = vec![&self.base; d - k];
            args.extend(std::iter::repeat_n(delta, k));
            total += binomial(d as u64, k as u64) as f64 * self.form.eval_refs(&args);
        }
        total
    }

    /// `K(W0 + δ) − K(W0)`.
    pub fn difference(&self, delta: &[f64]) -> f64 {
        self.coeff * (self.increment(delta) / self.p0).ln_1p()
    }
}

/// Real Hessian of `f(δ) = K(W0+δ) − K(W0)` at `δ = 0`.
pub fn real_hessian(f: impl Fn(&[f64]) -> f64, dim: usize, eps: f64) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(dim, dim);
    let mut delta = vec![0.0; dim];
    for a in 0..dim {
        for b in a..dim {
            let mut eval = |sa: f64, sb: f64| {
                delta.iter_mut().for_each(|v| *v = 0.0);
                delta[a] += sa * eps;
                delta[b] += sb * eps;
                f(&delta)
            };
            let v = (eval(1.0, 1.0) - eval(1.0, -1.0) - eval(-1.0, 1.0) + eval(-1.0, -1.0)) / (4.0 * eps * eps);
            m[(a, b)] = v;
            m[(b, a)] = v;
        }
    }
    m
}

/// Complex Hessian `∂²K/∂z_i∂z̄_j` from real second differences in
/// coordinates ordered `(x₁…x_n, y₁…y_n)`; returns `(Re, Im)`.
pub fn wirtinger_hessian(f: impl Fn(&[f64]) -> f64, n: usize, eps: f64) -> (DMatrix<f64>, DMatrix<f64>) {
    let r = real_hessian(f, 2 * n, eps);
    let mut re = DMatrix::zeros(n, n);
    let mut im = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            re[(i, j)] = 0.25 * (r[(i, j)] + r[(n + i, n + j)]);
            im[(i, j)] = 0.25 * (r[(i, n + j)] - r[(n + i, j)]);
        }
    }
    (re, im)
}

/// Real symmetric form `[[A, −B], [B, A]]` of the Hermitian matrix `A + iB`.
pub fn hermitian_to_real(re: &DMatrix<f64>, im: &DMatrix<f64>) -> DMatrix<f64> {
    let n = re.nrows();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = re[(i, j)];
            m[(n + i, n + j)] = re[(i, j)];
            m[(i, n + j)] = -im[(i, j)];
            m[(n + i, j)] = im[(i, j)];
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    #[test]
    fn increment_matches_direct_difference() {
        let p = parse_poly("x1^2*x2 + 3*x2^3", 2).unwrap();
        let pot = LogPotential::new(&p, 1.0, &[1.0, 2.0]).unwrap();
        let d = [0.25, -0.5];
        let direct = p.eval(&[1.25, 1.5]) - p.eval(&[1.0, 2.0]);
        assert!((pot.increment(&d) - direct).abs() < 1e-12);
    }

    #[test]
    fn log_of_quadratic() {
        // K = log(x² + y²)... as a function of one complex variable z = x + iy
        // this is log|z|², harmonic, so ∂∂̄K = 0.
        let p = parse_poly("x1^2 + x2^2", 2).unwrap();
        let pot = LogPotential::new(&p, 1.0, &[0.7, 1.3]).unwrap();
        let (re, im) = wirtinger_hessian(|d| pot.difference(d), 1, FD_STEP);
        assert!(re[(0, 0)].abs() < 1e-6 && im[(0, 0)].abs() < 1e-6);
    }
}
