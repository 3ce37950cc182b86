//! The tube domain `U = Rⁿ + i·V` over the cone `V = R⁺·{h = 1}` with the
//! Kähler potential `K(Z) = −(4/d)·log h(Y)`.
//!
//! Points are handled in real coordinates `W = (x₁…x_n, y₁…y_n)`. The
//! metric is `G ⊕ G` with `G = −(1/d)·Hess log h(Y)`.

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fd::{self, LogPotential, FD_STEP};
use crate::hypersurface::{self, float_tangent_basis};
use crate::linalg::{self, kernel_exact, ExactMatrix};
use crate::poly::{Derivatives, HomoPoly};
use crate::scalar::Scalar;
use crate::surd::Surd;

/// Tolerance for comparisons between closed forms.
pub const CLOSED_FORM_TOL: f64 = 1e-9;
/// Tolerance for finite-difference cross-checks.
pub const FD_TOL: f64 = 1e-6;

/// Canonical metric data of a tube domain.
#[derive(Clone, Debug)]
pub struct Tube {
    h: HomoPoly,
    ders: Derivatives,
}

impl Tube {
    pub fn new(h: &HomoPoly) -> Result<Self> {
        if h.degree() < 2 {
            return Err(Error::Precondition("tube metric needs degree >= 2".into()));
        }
        Ok(Tube { h: h.clone(), ders: Derivatives::new(h) })
    }

    pub fn poly(&self) -> &HomoPoly {
        &self.h
    }

    pub fn n(&self) -> usize {
        self.h.n()
    }

    fn d(&self) -> f64 {
        self.h.degree() as f64
    }

    /// `K(Z) = −(4/d)·log h(Y)`.
    pub fn potential(&self, z: &[Complex<f64>]) -> Result<f64> {
        let y: Vec<f64> = z.iter().map(|c| c.im).collect();
        let v = self.h.try_eval(&y)?;
        if v <= 0.0 {
            return Err(Error::ConeExit(v));
        }
        Ok(-4.0 / self.d() * v.ln())
    }

    /// `G = −(1/d)·Hess log h(Y)` over any scalar field.
    pub fn block<S: Scalar + 'static>(&self, y: &[S]) -> Result<DMatrix<S>> {
        let lh = self.ders.log_hessian(y)?;
        let d = S::from_int(self.h.degree() as i64);
        Ok(lh.map(|v| -(v / d.clone())))
    }

    pub fn block_f64(&self, y: &[f64]) -> Result<DMatrix<f64>> {
        let v = self.h.try_eval(y)?;
        if v <= 0.0 {
            return Err(Error::ConeExit(v));
        }
        self.block(y)
    }

    /// Real `2n×2n` metric `G ⊕ G` at `W = (x, y)`.
    pub fn metric(&self, w: &[f64]) -> Result<DMatrix<f64>> {
        let n = self.n();
        if w.len() != 2 * n {
            return Err(Error::DimensionMismatch { expected: 2 * n, got: w.len() });
        }
        let g = self.block_f64(&w[n..])?;
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(&g);
        m.view_mut((n, n), (n, n)).copy_from(&g);
        Ok(m)
    }

    /// The metric from central differences of `K`, via Wirtinger derivatives.
    pub fn metric_fd(&self, w: &[f64]) -> Result<DMatrix<f64>> {
        let n = self.n();
        let p = self.h.embed(2 * n, &(n..2 * n).collect::<Vec<_>>());
        let pot = LogPotential::new(&p, -4.0 / self.d(), w).map_err(|_| Error::ConeExit(self.h.eval(&w[n..])))?;
        let (re, im) = fd::wirtinger_hessian(|d| pot.difference(d), n, FD_STEP);
        Ok(fd::hermitian_to_real(&re, &im))
    }

    /// `g(iY, iY)` for the radial vector at `iY`.
    pub fn radial_norm(&self, y: &[f64]) -> Result<f64> {
        let g = self.block_f64(y)?;
        let v = nalgebra::DVector::from_column_slice(y);
        Ok((v.transpose() * g * &v)[(0, 0)])
    }

    /// `G(Y)` restricted to the tangent space of the level set through `Y`
    /// (with `h(Y) = 1`), exactly.
    pub fn restricted_to_level_exact(&self, y: &[Surd]) -> Result<ExactMatrix> {
        let g = self.block(y)?;
        let row = DMatrix::from_row_slice(1, self.n(), &self.h.gradient(y));
        let basis = kernel_exact(&row);
        let t = DMatrix::from_fn(self.n(), basis.len(), |i, j| basis[j][i].clone());
        Ok(t.transpose() * g * t)
    }
}

/// Maps of `Cⁿ` acting on tube points, in real coordinates.
#[derive(Clone, Debug)]
pub enum TubeMap {
    /// `Z ↦ λZ`.
    Scaling(f64),
    /// `Z ↦ Z + X0`.
    Translation(Vec<f64>),
    /// `X + iY ↦ −X + iY`.
    Reflection,
    /// `X + iY ↦ X + i·Y/h(Y)^{2/d}`.
    Inversion,
    /// `Z ↦ AZ` for a real matrix `A`.
    Linear(DMatrix<f64>),
    /// Applies the maps left to right.
    Compose(Vec<TubeMap>),
}

impl TubeMap {
    pub fn name(&self) -> String {
        match self {
            TubeMap::Scaling(l) => format!("scaling({l})"),
            TubeMap::Translation(_) => "translation".into(),
            TubeMap::Reflection => "reflection".into(),
            TubeMap::Inversion => "inversion".into(),
            TubeMap::Linear(_) => "linear".into(),
            TubeMap::Compose(ms) => ms.iter().map(|m| m.name()).collect::<Vec<_>>().join("*"),
        }
    }

    /// Image and real Jacobian at `w`.
    pub fn apply(&self, h: &HomoPoly, w: &[f64]) -> Result<(Vec<f64>, DMatrix<f64>)> {
        let n = w.len() / 2;
        let id = DMatrix::identity(2 * n, 2 * n);
        match self {
            TubeMap::Scaling(l) => Ok((w.iter().map(|v| l * v).collect(), id * *l)),
            TubeMap::Translation(x0) => {
                let mut out = w.to_vec();
                for (o, t) in out.iter_mut().zip(x0) {
                    *o += t;
                }
                Ok((out, id))
            }
            TubeMap::Reflection => {
                let mut out = w.to_vec();
                let mut jac = id;
                for i in 0..n {
                    out[i] = -out[i];
                    jac[(i, i)] = -1.0;
                }
                Ok((out, jac))
            }
            TubeMap::Inversion => {
                let y = &w[n..];
                let hv = h.eval(y);
                if hv <= 0.0 {
                    return Err(Error::ConeExit(hv));
                }
                let d = h.degree() as f64;
                let s = hv.powf(-2.0 / d);
                let grad = h.gradient(y);
                let mut out = w.to_vec();
                let mut jac = id;
                for i in 0..n {
                    out[n + i] = s * y[i];
                    for j in 0..n {
                        let delta = if i == j { 1.0 } else { 0.0 };
                        jac[(n + i, n + j)] = s * (delta - 2.0 / d * y[i] * grad[j] / hv);
                    }
                }
                Ok((out, jac))
            }
            TubeMap::Linear(a) => {
                let x = a * nalgebra::DVector::from_column_slice(&w[..n]);
                let y = a * nalgebra::DVector::from_column_slice(&w[n..]);
                let mut jac = DMatrix::zeros(2 * n, 2 * n);
                jac.view_mut((0, 0), (n, n)).copy_from(a);
                jac.view_mut((n, n), (n, n)).copy_from(a);
                Ok((x.iter().chain(y.iter()).copied().collect(), jac))
            }
            TubeMap::Compose(ms) => {
                let mut cur = w.to_vec();
                let mut jac = id;
                for m in ms {
                    let (next, j) = m.apply(h, &cur)?;
                    jac = j * jac;
                    cur = next;
                }
                Ok((cur, jac))
            }
        }
    }
}

/// The four maps named in the isometry statement, with given parameters.
pub fn isometry_candidates(lambda: f64, x0: Vec<f64>) -> Vec<TubeMap> {
    vec![TubeMap::Scaling(lambda), TubeMap::Translation(x0), TubeMap::Reflection, TubeMap::Inversion]
}

/// Largest entry of `φ*g − g` over the points, relative to `max(1, |g|)`.
pub fn check_pullback_isometry(tube: &Tube, map: &TubeMap, points: &[Vec<f64>]) -> Result<f64> {
    let mut worst = 0.0f64;
    for w in points {
        let g = tube.metric(w)?;
        let (w2, jac) = map.apply(tube.poly(), w)?;
        let g2 = tube.metric(&w2)?;
        let pulled = jac.transpose() * g2 * &jac;
        let dev = linalg::max_abs_diff(&pulled, &g) / g.amax().max(1.0);
        worst = worst.max(dev);
    }
    Ok(worst)
}

/// Same as [`check_pullback_isometry`] but only on the imaginary directions
/// at points of the cone `i·V` (the totally geodesic submanifold `X = 0`).
pub fn check_cone_isometry(tube: &Tube, map: &TubeMap, ys: &[Vec<f64>]) -> Result<f64> {
    let n = tube.n();
    let mut worst = 0.0f64;
    for y in ys {
        let mut w = vec![0.0; n];
        w.extend_from_slice(y);
        let g = tube.block_f64(y)?;
        let (w2, jac) = map.apply(tube.poly(), &w)?;
        if w2[..n].iter().any(|v| v.abs() > 0.0) {
            return Err(Error::Precondition(format!("{} does not preserve the cone", map.name())));
        }
        let g2 = tube.block_f64(&w2[n..])?;
        let jy = jac.view((n, n), (n, n)).into_owned();
        let pulled = jy.transpose() * g2 * &jy;
        worst = worst.max(linalg::max_abs_diff(&pulled, &g) / g.amax().max(1.0));
    }
    Ok(worst)
}

/// Deviation components of the cone product check.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct ProductDeviation {
    /// `|g(∂t, ∂t) − 1|`.
    pub radial: f64,
    /// Largest `|g(∂t, v)|` over tangent `v`.
    pub mixed: f64,
    /// Largest deviation of the tangent block from the canonical metric.
    pub tangent: f64,
}

impl ProductDeviation {
    pub fn max(&self) -> f64 {
        self.radial.max(self.mixed).max(self.tangent)
    }
}

/// Pulls `g^c` back through `(t, Y) ↦ i·e^t·Y` and compares it with
/// `dt² ⊕ g` at each `(t, Y)`, `h(Y) = 1`.
pub fn cone_product_check(tube: &Tube, samples: &[(f64, Vec<f64>)]) -> Result<ProductDeviation> {
    let h = tube.poly();
    let mut dev = ProductDeviation::default();
    for (t, y) in samples {
        let hv = h.eval(y);
        if (hv - 1.0).abs() > 1e-12 {
            return Err(Error::Precondition(format!("h(Y) = {hv}, expected 1")));
        }
        let et = t.exp();
        let yt: Vec<f64> = y.iter().map(|v| et * v).collect();
        let g = tube.block_f64(&yt)?;
        let basis = float_tangent_basis(&h.gradient(y));
        // columns: ∂t ↦ e^t·Y, tangent v ↦ e^t·v
        let k = basis.len() + 1;
        let frame = DMatrix::from_fn(h.n(), k, |i, j| if j == 0 { et * y[i] } else { et * basis[j - 1][i] });
        let pulled = frame.transpose() * g * &frame;
        dev.radial = dev.radial.max((pulled[(0, 0)] - 1.0).abs());
        for j in 1..k {
            dev.mixed = dev.mixed.max(pulled[(0, j)].abs());
        }
        let x0 = y.clone();
        for a in 1..k {
            for b in 1..k {
                let can = hypersurface::canonical_form(h, &x0, &basis[a - 1], &basis[b - 1]);
                dev.tangent = dev.tangent.max((pulled[(a, b)] - can).abs() / can.abs().max(1.0));
            }
        }
    }
    Ok(dev)
}

/// Basis of the Lie algebra `{X : ∇h(Y)·XY ≡ 0}` of linear maps preserving
/// `h`, exactly.
pub fn aut_algebra(h: &HomoPoly) -> Vec<ExactMatrix> {
    let n = h.n();
    let grad = h.gradient_polys();
    // column (i, j) holds the coefficients of ∂_i h · y_j
    let cols: Vec<HomoPoly> = (0..n * n)
        .map(|c| {
            let (i, j) = (c / n, c % n);
            grad[i].mul(&HomoPoly::variable(n, j))
        })
        .collect();
    let mut keys: Vec<Vec<u32>> = cols.iter().flat_map(|p| p.terms().map(|(e, _)| e.clone())).collect();
    keys.sort();
    keys.dedup();
    let m = DMatrix::from_fn(keys.len(), n * n, |r, c| cols[c].coeff(&keys[r]));
    kernel_exact(&m).into_iter().map(|v| DMatrix::from_fn(n, n, |i, j| v[i * n + j].clone())).collect()
}

/// `exp(X)` of an exact Lie algebra element, in floating point.
pub fn exp_f64(x: &ExactMatrix) -> DMatrix<f64> {
    linalg::to_f64_matrix(x).exp()
}

/// Random points `W = (X, Y)` of the tube: `Y` sampled near `seed` on the
/// cone (with random radius), `X` uniform in `[−2, 2]ⁿ`.
pub fn sample_tube_points<R: rand::Rng + ?Sized>(
    h: &HomoPoly,
    seed: &[f64],
    count: usize,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    let ys = hypersurface::sample_near_seed(h, seed, count, 0.3, rng)?;
    Ok(ys
        .into_iter()
        .map(|y| {
            let r = rng.random_range(0.5..2.0);
            let mut w: Vec<f64> = (0..h.n()).map(|_| rng.random_range(-2.0..2.0)).collect();
            w.extend(y.iter().map(|v| r * v));
            w
        })
        .collect())
}
