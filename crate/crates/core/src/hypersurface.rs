//! Level sets `{h = 1}`, their tangent spaces and the canonical metric.
//!
//! The canonical metric at `X0` is computed three ways: from the
//! polarization, `g(X,Y) = −(d−1)·H(X0,…,X0,X,Y)`, from the Hessian,
//! `−(1/d)·∂²h`, and from the log-Hessian, `−(1/d)·∂² log h`, each restricted
//! to the tangent space `ker dh|_{X0}`. The three must coincide.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, kernel_exact, signature_exact, signature_f64, ExactMatrix, Signature};
use crate::poly::{Derivatives, HomoPoly, SymForm};
use crate::scalar::Scalar;
use crate::surd::Surd;

/// Relative tolerance for float route agreement.
pub const ROUTE_TOL: f64 = 1e-10;

/// Symmetric bilinear form in a declared basis.
#[derive(Clone, Debug)]
pub struct PseudoMetric {
    pub labels: Vec<String>,
    pub gram: DMatrix<f64>,
    pub exact: Option<ExactMatrix>,
    pub signature: Signature,
}

impl PseudoMetric {
    pub fn from_exact(labels: Vec<String>, m: ExactMatrix) -> Self {
        let signature = signature_exact(&m);
        PseudoMetric { labels, gram: linalg::to_f64_matrix(&m), exact: Some(m), signature }
    }

    pub fn from_f64(labels: Vec<String>, m: DMatrix<f64>) -> Self {
        let signature = signature_f64(&m);
        PseudoMetric { labels, gram: m, exact: None, signature }
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.signature.is_nondegenerate()
    }

    pub fn report(&self, point: Vec<f64>, routes_agree: bool) -> PointReport {
        PointReport {
            point,
            signature: self.signature,
            gram: self.gram.row_iter().map(|r| r.iter().copied().collect()).collect(),
            routes_agree,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PointReport {
    pub point: Vec<f64>,
    pub signature: Signature,
    pub gram: Vec<Vec<f64>>,
    pub routes_agree: bool,
}

fn tangent_labels(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("t{i}")).collect()
}

/// A point of `{h = 1}` together with a basis of its tangent space.
#[derive(Clone, Debug)]
pub struct HypersurfacePoint<S> {
    pub h: HomoPoly,
    pub x0: Vec<S>,
    pub tangent_basis: Vec<Vec<S>>,
}

impl HypersurfacePoint<Surd> {
    /// Requires `h(X0) = 1` exactly.
    pub fn exact(h: &HomoPoly, x0: &[Surd]) -> Result<Self> {
        let v = h.try_eval(x0)?;
        if v != Surd::from(1) {
            return Err(Error::Precondition(format!("h(X0) = {v}, expected 1")));
        }
        let grad = h.gradient(x0);
        let row = DMatrix::from_row_slice(1, h.n(), &grad);
        let tangent_basis = kernel_exact(&row).into_iter().map(|v| v.iter().cloned().collect()).collect();
        Ok(HypersurfacePoint { h: h.clone(), x0: x0.to_vec(), tangent_basis })
    }
}

impl HypersurfacePoint<f64> {
    /// Requires `|h(X0) − 1| ≤ 1e−12`.
    pub fn float(h: &HomoPoly, x0: &[f64]) -> Result<Self> {
        let v = h.try_eval(x0)?;
        if (v - 1.0).abs() > 1e-12 {
            return Err(Error::Precondition(format!("h(X0) = {v}, expected 1")));
        }
        let tangent_basis = float_tangent_basis(&h.gradient(x0));
        Ok(HypersurfacePoint { h: h.clone(), x0: x0.to_vec(), tangent_basis })
    }
}

/// Basis `e_j − (g_j/g_k)·e_k` of `ker g`, pivoting on the largest `|g_k|`.
pub fn float_tangent_basis(grad: &[f64]) -> Vec<Vec<f64>> {
    let n = grad.len();
    let k = (0..n).max_by(|&a, &b| grad[a].abs().total_cmp(&grad[b].abs())).unwrap_or(0);
    if grad[k] == 0.0 {
        return (0..n).map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    }
    (0..n)
        .filter(|&j| j != k)
        .map(|j| {
            let mut v = vec![0.0; n];
            v[j] = 1.0;
            v[k] = -grad[j] / grad[k];
            v
        })
        .collect()
}

/// The three route matrices on the given tangent basis.
pub fn metric_routes<S: Scalar + 'static>(h: &HomoPoly, x0: &[S], basis: &[Vec<S>]) -> Result<[DMatrix<S>; 3]> {
    let d = h.degree();
    if d < 2 {
        return Err(Error::Precondition("canonical metric needs degree >= 2".into()));
    }
    let k = basis.len();
    let form: SymForm = h.polarize();
    let ders = Derivatives::new(h);
    let hess = ders.hessian(x0);
    let log_hess = ders.log_hessian(x0)?;
    let dd = S::from_int(d as i64);
    let dm1 = S::from_int(d as i64 - 1);
    let mut routes = [
        DMatrix::from_element(k, k, S::zero()),
        DMatrix::from_element(k, k, S::zero()),
        DMatrix::from_element(k, k, S::zero()),
    ];
    let bilinear = |m: &DMatrix<S>, u: &[S], v: &[S]| {
        let mut acc = S::zero();
        for i in 0..u.len() {
            for j in 0..v.len() {
                acc = acc + u[i].clone() * m[(i, j)].clone() * v[j].clone();
            }
        }
        acc
    };
    for a in 0..k {
        for b in a..k {
            let mut args: Vec<&[S]> = vec![x0; d as usize - 2];
            args.push(&basis[a]);
            args.push(&basis[b]);
            let pol = -(dm1.clone() * form.eval_refs(&args));
            let r2 = -(bilinear(&hess, &basis[a], &basis[b]) / dd.clone());
            let r3 = -(bilinear(&log_hess, &basis[a], &basis[b]) / dd.clone());
            for (m, v) in routes.iter_mut().zip([pol, r2, r3]) {
                m[(a, b)] = v.clone();
                m[(b, a)] = v;
            }
        }
    }
    Ok(routes)
}

/// Canonical metric at an exact point; the routes must agree exactly.
pub fn canonical_metric_exact(p: &HypersurfacePoint<Surd>) -> Result<PseudoMetric> {
    let [r1, r2, r3] = metric_routes(&p.h, &p.x0, &p.tangent_basis)?;
    for other in [&r2, &r3] {
        if *other != r1 {
            let dev = linalg::max_abs_diff(&linalg::to_f64_matrix(&r1), &linalg::to_f64_matrix(other));
            return Err(Error::RouteMismatch { deviation: dev, tolerance: 0.0 });
        }
    }
    Ok(PseudoMetric::from_exact(tangent_labels(r1.nrows()), r1))
}

/// Canonical metric at a float point; routes agree to `ROUTE_TOL` relative.
pub fn canonical_metric_f64(p: &HypersurfacePoint<f64>) -> Result<PseudoMetric> {
    let [r1, r2, r3] = metric_routes(&p.h, &p.x0, &p.tangent_basis)?;
    let scale = r1.amax().max(1.0);
    let tol = ROUTE_TOL * scale;
    let dev = linalg::max_abs_diff(&r1, &r2).max(linalg::max_abs_diff(&r1, &r3));
    if dev > tol {
        return Err(Error::RouteMismatch { deviation: dev, tolerance: tol });
    }
    Ok(PseudoMetric::from_f64(tangent_labels(r1.nrows()), r1))
}

/// Convenience wrapper: exact canonical metric of `h` at `x0`.
pub fn canonical_metric(h: &HomoPoly, x0: &[Surd]) -> Result<PseudoMetric> {
    canonical_metric_exact(&HypersurfacePoint::exact(h, x0)?)
}

/// Value `g_{X0}(X, Y)` for arbitrary tangent vectors, by the polarization
/// route.
pub fn canonical_form<S: Scalar>(h: &HomoPoly, x0: &[S], x: &[S], y: &[S]) -> S {
    let d = h.degree() as usize;
    let mut args: Vec<&[S]> = vec![x0; d - 2];
    args.push(x);
    args.push(y);
    -(S::from_int(d as i64 - 1) * h.polarize().eval_refs(&args))
}

/// Rescales `X` along its ray onto `{h = 1}`.
pub fn project_to_level(h: &HomoPoly, x: &[f64]) -> Result<Vec<f64>> {
    let v = h.try_eval(x)?;
    if v <= 0.0 || !v.is_finite() {
        return Err(Error::NonpositiveLevel(v));
    }
    let s = v.powf(1.0 / h.degree() as f64);
    Ok(x.iter().map(|xi| xi / s).collect())
}

/// Rescales `h` instead of the point: returns `h / h(X)` (exact), so that
/// `X` lies on the unit level set of the result.
pub fn normalize_at(h: &HomoPoly, x: &[Surd]) -> Result<HomoPoly> {
    let v = h.try_eval(x)?;
    let inv = v.inv().ok_or(Error::ZeroLevel)?;
    Ok(h.scale(&inv))
}

/// `X ↦ 2·(⟨X,X0⟩/⟨X0,X0⟩)·X0 − X` for the polarization `⟨,⟩` of a quadric.
pub fn sphere_symmetry<S: Scalar>(q: &HomoPoly, x0: &[S], x: &[S]) -> Result<Vec<S>> {
    if q.degree() != 2 {
        return Err(Error::Precondition("sphere symmetry needs a quadratic form".into()));
    }
    let form = q.polarize();
    let n00 = form.try_eval_refs(&[x0, x0])?;
    if n00 == S::zero() {
        return Err(Error::NullBasePoint);
    }
    let n0 = form.try_eval_refs(&[x, x0])?;
    let c = S::from_int(2) * n0 / n00;
    Ok(x0.iter().zip(x).map(|(a, b)| c.clone() * a.clone() - b.clone()).collect())
}

/// `Σ_{i<k} x_i² − Σ_{i≥k} x_i²` on `R^{k+l}`.
pub fn pseudo_euclidean_quadric(k: usize, l: usize) -> HomoPoly {
    let n = k + l;
    let terms = (0..n).map(|i| {
        let mut e = vec![0; n];
        e[i] = 2;
        (e, Surd::from(if i < k { 1 } else { -1 }))
    });
    HomoPoly::from_terms(n, terms).expect("quadric is homogeneous")
}

/// Signature of the canonical metric of `{q_{k,l} = 1}` at `e₁`.
pub fn pseudo_sphere_signature(k: usize, l: usize) -> Result<Signature> {
    let q = pseudo_euclidean_quadric(k, l);
    let mut e1 = vec![Surd::from(0); k + l];
    e1[0] = Surd::from(1);
    Ok(canonical_metric(&q, &e1)?.signature)
}

/// Random float points on the unit level set near a seed, all with `h > 0`.
pub fn sample_near_seed<R: rand::Rng + ?Sized>(
    h: &HomoPoly,
    seed: &[f64],
    count: usize,
    spread: f64,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    let base = project_to_level(h, seed)?;
    let mut out = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count {
        tries += 1;
        if tries > 1000 * count.max(1) {
            return Err(Error::Precondition("could not sample near the seed point".into()));
        }
        let cand: Vec<f64> = base.iter().map(|b| b + spread * rng.random_range(-1.0..1.0) * b.abs().max(0.1)).collect();
        if let Ok(p) = project_to_level(h, &cand) {
            out.push(p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn e(n: usize, i: usize) -> Vec<Surd> {
        (0..n).map(|j| Surd::from((i == j) as i64)).collect()
    }

    #[test]
    fn sphere_and_hyperboloid() {
        let s = parse_poly("x1^2 + x2^2 + x3^2", 3).unwrap();
        let g = canonical_metric(&s, &e(3, 0)).unwrap();
        assert_eq!(g.signature, Signature::new(0, 2, 0));
        assert_eq!(g.exact.unwrap(), -linalg::exact_identity(2));
        let hyp = parse_poly("x1^2 - x2^2 - x3^2", 3).unwrap();
        let g = canonical_metric(&hyp, &e(3, 0)).unwrap();
        assert_eq!(g.signature, Signature::new(2, 0, 0));
    }

    #[test]
    fn product_cubic() {
        let h = parse_poly("x1*x2*x3", 3).unwrap();
        let one = vec![Surd::from(1); 3];
        let x = [Surd::from(1), Surd::from(-1), Surd::from(0)];
        assert_eq!(canonical_form(&h, &one, &x, &x), Surd::ratio(2, 3));
        let g = canonical_metric(&h, &one).unwrap();
        assert_eq!(g.signature, Signature::new(2, 0, 0));
    }

    #[test]
    fn projection() {
        let h = parse_poly("x1*x2", 2).unwrap();
        let p = project_to_level(&h, &[2.0, 2.0]).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-15 && (p[1] - 1.0).abs() < 1e-15);
        assert!(matches!(project_to_level(&h, &[1.0, -1.0]), Err(Error::NonpositiveLevel(_))));
    }

    #[test]
    fn symmetry_formula() {
        let q = pseudo_euclidean_quadric(2, 1);
        let x0 = [Surd::from(1), Surd::from(0), Surd::from(0)];
        let x = [Surd::from(0), Surd::from(2), Surd::from(3)];
        let y = sphere_symmetry(&q, &x0, &x).unwrap();
        assert_eq!(y, vec![Surd::from(0), Surd::from(-2), Surd::from(-3)]);
        assert_eq!(q.eval(&y), q.eval(&x));
        assert_eq!(sphere_symmetry(&q, &x0, &x0).unwrap(), x0.to_vec());
        let null = [Surd::from(1), Surd::from(0), Surd::from(1)];
        assert_eq!(sphere_symmetry(&q, &null, &x), Err(Error::NullBasePoint));
    }
}
