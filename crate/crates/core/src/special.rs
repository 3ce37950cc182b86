//! Lagrangean cones in `T*C^{n+1}`, their canonical and special metrics,
//! and the r-map `h ↦ F_h = h(z¹,…,zⁿ)/(z⁰)^{d−2}`.
//!
//! Vectors of `V = T*C^{n+1}` are stored as `(z⁰,…,zⁿ, p₀,…,p_n)`. The
//! symplectic form is `ω = Σ (dzʲ⊗dp_j − dp_j⊗dzʲ)`, the real structure is
//! complex conjugation, and `γ(u, v) = i·ω(u, v̄)` is linear in `u` and
//! antilinear in `v`.

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{Num, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fd::{self, LogPotential, FD_STEP};
use crate::linalg::{self, exact_zeros, Signature};
use crate::poly::{Derivatives, HomoPoly};
use crate::scalar::Scalar;
use crate::surd::Surd;
use crate::tube::Tube;

/// Tolerance for closed-form identities on the cone.
pub const CONE_TOL: f64 = 1e-10;

/// Relative threshold below which `γ(u,u)` counts as zero.
pub const PROPER_TOL: f64 = 1e-10;

fn cplx<S: Scalar>(re: S, im: S) -> Complex<S> {
    Complex::new(re, im)
}

fn i_unit<S: Scalar>() -> Complex<S> {
    cplx(S::zero(), S::one())
}

/// `ω(u, v)` on `C^{2N}`, `N = n + 1`.
pub fn omega<S: Scalar + Num>(u: &[Complex<S>], v: &[Complex<S>]) -> Result<Complex<S>> {
    if u.len() != v.len() || !u.len().is_multiple_of(2) {
        return Err(Error::DimensionMismatch { expected: u.len(), got: v.len() });
    }
    let m = u.len() / 2;
    let mut acc = Complex::zero();
    for j in 0..m {
        acc = acc + u[j].clone() * v[m + j].clone() - u[m + j].clone() * v[j].clone();
    }
    Ok(acc)
}

/// `γ(u, v) = i·ω(u, v̄)`.
pub fn gamma<S: Scalar + Num>(u: &[Complex<S>], v: &[Complex<S>]) -> Result<Complex<S>> {
    let vbar: Vec<Complex<S>> = v.iter().map(|c| c.conj()).collect();
    Ok(i_unit::<S>() * omega(u, &vbar)?)
}

/// Gram matrix of `γ` in the coordinate basis, `[[0, iI], [−iI, 0]]`, as
/// exact real and imaginary parts.
pub fn gamma_gram_exact(n: usize) -> (linalg::ExactMatrix, linalg::ExactMatrix) {
    let m = n + 1;
    let re = exact_zeros(2 * m, 2 * m);
    let mut im = exact_zeros(2 * m, 2 * m);
    for j in 0..m {
        im[(j, m + j)] = Surd::from(1);
        im[(m + j, j)] = Surd::from(-1);
    }
    (re, im)
}

/// Exact signature of `γ` on `T*C^{n+1}`.
pub fn gamma_signature(n: usize) -> Signature {
    let (re, im) = gamma_gram_exact(n);
    linalg::signature_hermitian_exact(&re, &im)
}

/// Holomorphic function of `n+1` variables, homogeneous of degree two.
pub trait BasicFunction {
    /// Number of variables `n + 1`.
    fn dim(&self) -> usize;
    fn value(&self, z: &[Complex<f64>]) -> Result<Complex<f64>>;
    fn gradient(&self, z: &[Complex<f64>]) -> Result<Vec<Complex<f64>>>;
    fn hessian(&self, z: &[Complex<f64>]) -> Result<DMatrix<Complex<f64>>>;
}

/// `F(Z) = ½·Zᵀ A Z` for a constant complex symmetric `A`.
#[derive(Clone, Debug)]
pub struct QuadraticFunction {
    pub a: DMatrix<Complex<f64>>,
}

impl BasicFunction for QuadraticFunction {
    fn dim(&self) -> usize {
        self.a.nrows()
    }

    fn value(&self, z: &[Complex<f64>]) -> Result<Complex<f64>> {
        let g = self.gradient(z)?;
        Ok(g.iter().zip(z).map(|(a, b)| a * b).sum::<Complex<f64>>() * 0.5)
    }

    fn gradient(&self, z: &[Complex<f64>]) -> Result<Vec<Complex<f64>>> {
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: z.len() });
        }
        let v = nalgebra::DVector::from_column_slice(z);
        Ok((&self.a * v).iter().copied().collect())
    }

    fn hessian(&self, z: &[Complex<f64>]) -> Result<DMatrix<Complex<f64>>> {
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: z.len() });
        }
        Ok(self.a.clone())
    }
}

/// `F_h(Z) = h(z¹,…,zⁿ)/(z⁰)^{d−2}` with derivatives by the quotient rule.
#[derive(Clone, Debug)]
pub struct RMap {
    ders: Derivatives,
}

impl RMap {
    pub fn new(h: &HomoPoly) -> Result<Self> {
        if h.degree() < 2 {
            return Err(Error::Precondition("r-map needs degree >= 2".into()));
        }
        Ok(RMap { ders: Derivatives::new(h) })
    }

    pub fn poly(&self) -> &HomoPoly {
        &self.ders.h
    }

    fn m(&self) -> u32 {
        self.ders.h.degree() - 2
    }

    fn check<S: Scalar + Num>(&self, z: &[Complex<S>]) -> Result<()> {
        let n = self.ders.h.n() + 1;
        if z.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: z.len() });
        }
        if self.m() > 0 && z[0] == Complex::zero() {
            return Err(Error::Pole(self.ders.h.degree()));
        }
        Ok(())
    }

    fn z0_pow<S: Scalar + Num>(z0: &Complex<S>, e: i64) -> Complex<S> {
        let mut out = Complex::new(S::one(), S::zero());
        for _ in 0..e.unsigned_abs() {
            out = out * z0.clone();
        }
        if e < 0 {
            Complex::new(S::one(), S::zero()) / out
        } else {
            out
        }
    }

    pub fn value_at<S: Scalar + Num>(&self, z: &[Complex<S>]) -> Result<Complex<S>> {
        self.check(z)?;
        let hv = self.ders.h.eval(&z[1..]);
        Ok(hv * Self::z0_pow(&z[0], -(self.m() as i64)))
    }

    pub fn gradient_at<S: Scalar + Num>(&self, z: &[Complex<S>]) -> Result<Vec<Complex<S>>> {
        self.check(z)?;
        let m = self.m() as i64;
        let y = &z[1..];
        let hv = self.ders.h.eval(y);
        let mut out = Vec::with_capacity(z.len());
        let cm = Complex::new(S::from_int(-m), S::zero());
        out.push(cm * hv * Self::z0_pow(&z[0], -m - 1));
        let w = Self::z0_pow(&z[0], -m);
        for g in &self.ders.grad {
            out.push(g.eval(y) * w.clone());
        }
        Ok(out)
    }

    pub fn hessian_at<S: Scalar + Num + 'static>(&self, z: &[Complex<S>]) -> Result<DMatrix<Complex<S>>> {
        self.check(z)?;
        let m = self.m() as i64;
        let n1 = z.len();
        let y = &z[1..];
        let hv = self.ders.h.eval(y);
        let grad: Vec<Complex<S>> = self.ders.grad.iter().map(|g| g.eval(y)).collect();
        let hess = self.ders.hessian(y);
        let c = |v: i64| Complex::new(S::from_int(v), S::zero());
        let mut out = DMatrix::from_element(n1, n1, Complex::zero());
        out[(0, 0)] = c(m * (m + 1)) * hv * Self::z0_pow(&z[0], -m - 2);
        let w1 = Self::z0_pow(&z[0], -m - 1);
        let w0 = Self::z0_pow(&z[0], -m);
        for j in 1..n1 {
            let v = c(-m) * grad[j - 1].clone() * w1.clone();
            out[(0, j)] = v.clone();
            out[(j, 0)] = v;
            for k in 1..n1 {
                out[(j, k)] = hess[(j - 1, k - 1)].clone() * w0.clone();
            }
        }
        Ok(out)
    }
}

impl BasicFunction for RMap {
    fn dim(&self) -> usize {
        self.ders.h.n() + 1
    }

    fn value(&self, z: &[Complex<f64>]) -> Result<Complex<f64>> {
        self.value_at(z)
    }

    fn gradient(&self, z: &[Complex<f64>]) -> Result<Vec<Complex<f64>>> {
        self.gradient_at(z)
    }

    fn hessian(&self, z: &[Complex<f64>]) -> Result<DMatrix<Complex<f64>>> {
        self.hessian_at(z)
    }
}

/// A point `dF|_Z` of the cone with the frame `(e_k, ∂²F(Z)·e_k)` of its
/// tangent space.
#[derive(Clone, Debug)]
pub struct ConePoint {
    pub z: Vec<Complex<f64>>,
    pub lift: Vec<Complex<f64>>,
    pub frame: Vec<Vec<Complex<f64>>>,
}

impl ConePoint {
    pub fn new(f: &dyn BasicFunction, z: &[Complex<f64>]) -> Result<Self> {
        let grad = f.gradient(z)?;
        let hess = f.hessian(z)?;
        let n1 = z.len();
        let mut lift = z.to_vec();
        lift.extend(grad);
        let frame = (0..n1)
            .map(|k| {
                let mut col = vec![Complex::zero(); 2 * n1];
                col[k] = Complex::new(1.0, 0.0);
                for j in 0..n1 {
                    col[n1 + j] = hess[(j, k)];
                }
                col
            })
            .collect();
        Ok(ConePoint { z: z.to_vec(), lift, frame })
    }

    /// Tangent vector `Σ a_k·frame_k`.
    pub fn tangent(&self, a: &[Complex<f64>]) -> Vec<Complex<f64>> {
        let mut v = vec![Complex::zero(); self.lift.len()];
        for (ak, col) in a.iter().zip(&self.frame) {
            for (vi, ci) in v.iter_mut().zip(col) {
                *vi += ak * ci;
            }
        }
        v
    }

    /// Largest `|ω(f_j, f_k)|` over frame columns.
    pub fn isotropy_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in &self.frame {
            for b in &self.frame {
                worst = worst.max(omega(a, b).expect("same length").norm());
            }
        }
        worst
    }

    /// Gram matrix `γ(f_j, f_k)`.
    pub fn gamma_pullback(&self) -> DMatrix<Complex<f64>> {
        let n1 = self.frame.len();
        DMatrix::from_fn(n1, n1, |j, k| gamma(&self.frame[j], &self.frame[k]).expect("same length"))
    }
}

/// `2·Im ∂²F(Z)` as a (real-valued) Hermitian Gram matrix.
pub fn cone_metric(f: &dyn BasicFunction, z: &[Complex<f64>]) -> Result<DMatrix<Complex<f64>>> {
    let hess = f.hessian(z)?;
    Ok(hess.map(|c| Complex::new(2.0 * c.im, 0.0)))
}

/// `|cone_metric − γ-pullback|` at `z`.
pub fn cone_metric_routes(f: &dyn BasicFunction, z: &[Complex<f64>]) -> Result<f64> {
    let formula = cone_metric(f, z)?;
    let pulled = ConePoint::new(f, z)?.gamma_pullback();
    Ok((formula - pulled).iter().fold(0.0, |a, c| a.max(c.norm())))
}

/// `γ(v,v)/γ(u,u) − |γ(u,v)/γ(u,u)|²`.
pub fn special_metric(u: &[Complex<f64>], v: &[Complex<f64>]) -> Result<f64> {
    let uu = gamma(u, u)?.re;
    let scale = u.iter().fold(0.0f64, |a, c| a.max(c.norm())).max(1.0);
    if uu.abs() <= PROPER_TOL * scale * scale {
        return Err(Error::ImproperCone(uu.abs()));
    }
    let vv = gamma(v, v)?.re;
    let uv = gamma(u, v)?;
    Ok(vv / uu - (uv / uu).norm_sqr())
}

/// Hermitian matrix of the special metric at `dF|_{(1,ζ)}` in the
/// inhomogeneous coordinates `ζ¹…ζⁿ`, from polarization of `special_metric`.
pub fn special_metric_matrix(f: &dyn BasicFunction, zeta: &[Complex<f64>]) -> Result<DMatrix<Complex<f64>>> {
    let mut z = vec![Complex::new(1.0, 0.0)];
    z.extend_from_slice(zeta);
    let p = ConePoint::new(f, &z)?;
    let n = zeta.len();
    let uu = gamma(&p.lift, &p.lift)?.re;
    let cols: Vec<&Vec<Complex<f64>>> = p.frame[1..].iter().collect();
    let mut m = DMatrix::from_element(n, n, Complex::zero());
    for j in 0..n {
        for k in 0..n {
            let gjk = gamma(cols[j], cols[k])?;
            let gju = gamma(cols[j], &p.lift)?;
            let guk = gamma(&p.lift, cols[k])?;
            m[(j, k)] = gjk / uu - gju * guk / (uu * uu);
        }
    }
    Ok(m)
}

/// Splits `h(x + iy)` into real and imaginary parts, as polynomials in
/// `(x₁…x_n, y₁…y_n)`.
pub fn complexify(h: &HomoPoly) -> (HomoPoly, HomoPoly) {
    let n = h.n();
    let m = 2 * n;
    let mut re = HomoPoly::zero(m, h.degree());
    let mut im = HomoPoly::zero(m, h.degree());
    for (e, c) in h.terms() {
        let mut pr = HomoPoly::constant(m, c.clone());
        let mut pi = HomoPoly::zero(m, 0);
        for (j, &k) in e.iter().enumerate() {
            let x = HomoPoly::variable(m, j);
            let y = HomoPoly::variable(m, n + j);
            for _ in 0..k {
                let nr = pr.mul(&x).sub(&pi.mul(&y)).expect("same degree");
                let ni = pr.mul(&y).add(&pi.mul(&x)).expect("same degree");
                pr = nr;
                pi = ni;
            }
        }
        re = re.add(&pr).expect("same degree");
        im = im.add(&pi).expect("same degree");
    }
    (re, im)
}

/// The real polynomial `P(x, y) = 2·Im(−(d−2)·H(Z,…,Z) + d·H(Z,…,Z,Z̄))`.
pub fn ks_polynomial(h: &HomoPoly) -> HomoPoly {
    let n = h.n();
    let d = h.degree() as i64;
    let (_, im_h) = complexify(h);
    let mut p = im_h.scale(&Surd::from(-(d - 2)));
    for (j, g) in h.gradient_polys().iter().enumerate() {
        let (r, i) = complexify(g);
        let x = HomoPoly::variable(2 * n, j);
        let y = HomoPoly::variable(2 * n, n + j);
        let term = i.mul(&x).sub(&r.mul(&y)).expect("same degree");
        p = p.add(&term).expect("same degree");
    }
    p.scale(&Surd::from(2))
}

/// `Im(−(d−2)·H(Z,…,Z) + d·H(Z,…,Z,Z̄))` by symmetric evaluation.
pub fn ks_argument<S: Scalar + Num>(h: &HomoPoly, z: &[Complex<S>]) -> Result<S> {
    let form = h.polarize();
    let d = h.degree() as usize;
    let zbar: Vec<Complex<S>> = z.iter().map(|c| c.conj()).collect();
    let all: Vec<&[Complex<S>]> = vec![z; d];
    let mut mixed: Vec<&[Complex<S>]> = vec![z; d - 1];
    mixed.push(&zbar);
    let a = form.try_eval_refs(&all)?;
    let b = form.try_eval_refs(&mixed)?;
    let c = |v: i64| Complex::new(S::from_int(v), S::zero());
    Ok((c(-(d as i64 - 2)) * a + c(d as i64) * b).im)
}

/// `K^s(Z) = −(4/d)·log(2·Im(−(d−2)H(Z,…,Z) + d·H(Z,…,Z,Z̄)))`.
pub fn potential_ks(h: &HomoPoly, z: &[Complex<f64>]) -> Result<f64> {
    let arg = 2.0 * ks_argument(h, z)?;
    if arg <= 0.0 {
        return Err(Error::Domain(arg));
    }
    Ok(-4.0 / h.degree() as f64 * arg.ln())
}

/// `Im(−H(Z,Z,Z) + 3·H(Z,Z,Z̄)) − 4·h(Y)`, exactly, for a cubic.
pub fn lemma_4h_residual(h: &HomoPoly, z: &[Complex<Surd>]) -> Result<Surd> {
    if h.degree() != 3 {
        return Err(Error::Precondition("the 4h(Y) identity is for cubics".into()));
    }
    let y: Vec<Surd> = z.iter().map(|c| c.im.clone()).collect();
    Ok(ks_argument(h, z)? - h.eval(&y) * Surd::from(4))
}

/// Deviations reported by [`check_gc_equals_gs`].
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct GcGsDeviation {
    /// Largest entry of the difference of the two FD metrics.
    pub metric: f64,
    /// Largest `|K^s − K + (4/3)·log 8|`.
    pub potential: f64,
}

/// Compares `∂∂̄K` and `∂∂̄K^s` (both by finite differences) at tube points
/// `W = (x, y)`, and checks that `K^s − K` is the constant `−(4/3)·log 8`.
pub fn check_gc_equals_gs(h: &HomoPoly, points: &[Vec<f64>]) -> Result<GcGsDeviation> {
    if h.degree() != 3 {
        return Err(Error::Precondition(format!("g^c = g^s is a statement about cubics, got degree {}", h.degree())));
    }
    let tube = Tube::new(h)?;
    let p = ks_polynomial(h);
    let n = h.n();
    let shift = -(4.0 / 3.0) * 8f64.ln();
    let mut dev = GcGsDeviation::default();
    for w in points {
        let gc = tube.metric_fd(w)?;
        let pot = LogPotential::new(&p, -4.0 / 3.0, w)?;
        let (re, im) = fd::wirtinger_hessian(|d| pot.difference(d), n, FD_STEP);
        let gs = fd::hermitian_to_real(&re, &im);
        dev.metric = dev.metric.max(linalg::max_abs_diff(&gc, &gs));
        let z: Vec<Complex<f64>> = (0..n).map(|j| Complex::new(w[j], w[n + j])).collect();
        let k = tube.potential(&z)?;
        let ks = potential_ks(h, &z)?;
        dev.potential = dev.potential.max((ks - k - shift).abs());
    }
    Ok(dev)
}

/// Hermitian matrix `∂∂̄ log γ(ζ,ζ)` of the r-map cone at `ζ = (1, Z)` by
/// finite differences; returns `(Re, Im)`.
pub fn special_potential_hessian_fd(h: &HomoPoly, w: &[f64]) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let p = ks_polynomial(h);
    let pot = LogPotential::new(&p, 1.0, w)?;
    Ok(fd::wirtinger_hessian(|d| pot.difference(d), h.n(), FD_STEP))
}
