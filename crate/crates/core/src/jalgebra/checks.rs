//! Invariance of `h` under `𝔟₀`, the orbit rank at `JB₀`, and the
//! comparison of the scalar product with the pulled-back tube metric.

use nalgebra::DMatrix;
use serde::Serialize;

use super::type_one::{type_one, Block, TypeISpec, TypeIStructure};
use super::MetricLieAlgebra;
use crate::error::{Error, Result};
use crate::hypersurface::{canonical_metric, normalize_at};
use crate::linalg::{rank_exact, signature_exact, Signature};
use crate::poly::HomoPoly;
use crate::surd::Surd;
use crate::tube::Tube;

/// Matrix of `ad_Y` restricted to the ideal `J𝔟`, in `J𝔟` coordinates.
fn ad_on_jb(l: &MetricLieAlgebra, s: &TypeIStructure, y: &crate::linalg::ExactVector) -> Result<DMatrix<Surd>> {
    let n = s.jb_dim();
    let mut m = DMatrix::from_element(n, n, Surd::zero());
    for (c, &k) in s.jb.iter().enumerate() {
        let img = l.bracket(y, &l.basis_vector(k));
        if !s.in_jb(&img) {
            return Err(Error::Precondition(format!("J𝔟 is not an ideal: [Y, {}] leaves it", l.labels()[k])));
        }
        for (r, v) in s.jb_coords(&img).into_iter().enumerate() {
            m[(r, c)] = v;
        }
    }
    Ok(m)
}

/// `(ad*_Y h)(η) = −dh|_η(ad_Y η)` as a polynomial on `J𝔟`.
pub fn coadjoint(h: &HomoPoly, m: &DMatrix<Surd>) -> HomoPoly {
    h.lie_derivative(m).neg()
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    /// `ad*_Y h` for each basis vector `Y` of `𝔟₀`.
    pub residuals: Vec<HomoPoly>,
    pub max_residual: f64,
    pub exact_zero: bool,
}

/// Checks `ad*_Y h = 0` for a basis of `𝔟₀`.
pub fn invariance_check(l: &MetricLieAlgebra, s: &TypeIStructure, h: &HomoPoly) -> Result<InvarianceReport> {
    if h.n() != s.jb_dim() {
        return Err(Error::DimensionMismatch { expected: s.jb_dim(), got: h.n() });
    }
    let mut residuals = Vec::new();
    for y in s.b0_basis(l) {
        let m = ad_on_jb(l, s, &y)?;
        residuals.push(coadjoint(h, &m));
    }
    let max_residual = residuals.iter().map(HomoPoly::max_abs_coeff).fold(0.0, f64::max);
    let exact_zero = residuals.iter().all(HomoPoly::is_zero);
    Ok(InvarianceReport { residuals, max_residual, exact_zero })
}

/// Rank of `𝔟₀ ∋ X ↦ ad_X(JB₀) ∈ J𝔟`.
pub fn orbit_rank(l: &MetricLieAlgebra, s: &TypeIStructure) -> usize {
    let jb0 = l.j() * &s.b0;
    let basis = s.b0_basis(l);
    if basis.is_empty() {
        return 0;
    }
    let cols: Vec<_> = basis.iter().map(|x| l.bracket(x, &jb0)).collect();
    let m = DMatrix::from_fn(l.dim(), cols.len(), |r, c| cols[c][r].clone());
    rank_exact(&m)
}

#[derive(Clone, Debug, Serialize)]
pub struct PullbackReport {
    pub degree: u32,
    /// Largest entry of `φ*g^c − (1/d)·Gram` at the identity.
    pub deviation: f64,
    pub exact: bool,
    /// `(φ*g^c)(B₀, B₀)`.
    pub b0_norm: f64,
    /// Canonical metric of the hypersurface at `JB₀`.
    pub hypersurface_signature: Signature,
    /// Whether the part of `h` of degree 0 in `J𝔞` has zero Hessian at `JB₀`.
    pub pure_x_hessian_vanishes: bool,
}

/// Compares `(φ*g^c)_e` with `(1/d)⟨·,·⟩`, where `φ(u) = u·(iJB₀)` is the
/// orbit map into the tube over the orbit of `JB₀`.
pub fn pullback_metric_check(l: &MetricLieAlgebra, s: &TypeIStructure, h: &HomoPoly) -> Result<PullbackReport> {
    let jb0_full = l.j() * &s.b0;
    let y0 = s.jb_coords(&jb0_full);
    let hn = normalize_at(h, &y0)?;
    let tube = Tube::new(&hn)?;
    let g = tube.block::<Surd>(&y0)?;
    let sig = signature_exact(&g);
    if sig.null > 0 {
        return Err(Error::DegenerateMetric(sig.null));
    }
    let dim = l.dim();
    let n = s.jb_dim();
    // dφ_e: B ↦ iJB on 𝔟, identity on J𝔟; record (is_imaginary, coordinates)
    let images: Vec<(bool, Vec<Surd>)> = (0..dim)
        .map(|k| {
            let e = l.basis_vector(k);
            if s.b.contains(&k) {
                (true, s.jb_coords(&(l.j() * e)))
            } else {
                (false, s.jb_coords(&e))
            }
        })
        .collect();
    let d = Surd::from(h.degree() as i64);
    let mut worst = Surd::zero();
    let gv = |u: &[Surd], v: &[Surd]| {
        let mut acc = Surd::zero();
        for a in (0..n).filter(|&a| !u[a].is_zero()) {
            for b in (0..n).filter(|&b| !v[b].is_zero()) {
                acc += &(&u[a] * &g[(a, b)]) * &v[b];
            }
        }
        acc
    };
    for a in 0..dim {
        for b in 0..dim {
            let pulled = if images[a].0 == images[b].0 { gv(&images[a].1, &images[b].1) } else { Surd::zero() };
            let want = &l.gram()[(a, b)] / &d;
            let dev = (pulled - want).abs();
            if dev > worst {
                worst = dev;
            }
        }
    }
    let b0y = s.jb_coords(&jb0_full);
    let b0_norm = gv(&b0y, &b0y).to_f64();
    let hypersurface_signature = canonical_metric(&hn, &y0)?.signature;
    let parts = hn.multidegree_split(&s.jb_blocks())?;
    let pure_x_hessian_vanishes =
        parts.iter().filter(|(md, _)| md[0] == 0).all(|(_, p)| p.hessian(&y0).iter().all(Surd::is_zero));
    Ok(PullbackReport {
        degree: h.degree(),
        deviation: worst.to_f64(),
        exact: worst.is_zero(),
        b0_norm,
        hypersurface_signature,
        pure_x_hessian_vanishes,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ForbiddenExtension {
    /// `J𝔞`-degree 2 part of `ad*_Y h` for each `Y` in `x₁₂⁻`.
    pub residual_21: Vec<HomoPoly>,
    /// Pure `x₁₂⁺` part of `ad*_Y h` for each `Y` in `x₁₂⁻`.
    pub residual_03: Vec<HomoPoly>,
    /// `⟨JY, X⟩⟨X, X⟩/√2` for each `Y`.
    pub predicted_03: Vec<HomoPoly>,
}

impl ForbiddenExtension {
    pub fn first_equation_holds(&self) -> bool {
        self.residual_21.iter().all(HomoPoly::is_zero)
    }

    pub fn matches_prediction(&self) -> bool {
        self.residual_03 == self.predicted_03
    }

    pub fn obstructed(&self) -> bool {
        self.residual_03.iter().any(|p| !p.is_zero())
    }
}

/// Rank 2 with `μ = (1, √2)` and `dim x₁₂⁻ = p ≥ 1`: the only candidate
/// `h = a₁²a₂ − a₁⟨X, X⟩/√2` fixing the `(2,1)` equation leaves a nonzero
/// `(0,3)` residual.
pub fn forbidden_extension(p: usize) -> Result<ForbiddenExtension> {
    if p == 0 {
        return Err(Error::Precondition("needs x12 nonzero".into()));
    }
    let spec = TypeISpec { mu: vec![Surd::from(1), Surd::sqrt(2)], blocks: vec![Block::euclidean(0, 1, p)], psi: None };
    let (l, s) = type_one(&spec)?;
    let n = s.jb_dim();
    let var = |k| HomoPoly::variable(n, k);
    let r = Surd::sqrt(2).inv().expect("nonzero");
    let mut xx = HomoPoly::zero(n, 2);
    for a in 0..p {
        xx = xx.add(&var(2 + a).mul(&var(2 + a)))?;
    }
    let h = var(0).mul(&var(0)).mul(&var(1)).sub(&var(0).mul(&xx).scale(&r))?;
    let blocks = s.jb_blocks();
    let (mo, _, _) = s.block(0, 1).expect("block");
    let mut out = ForbiddenExtension { residual_21: Vec::new(), residual_03: Vec::new(), predicted_03: Vec::new() };
    for a in 0..p {
        let y = l.basis_vector(mo + a);
        let res = coadjoint(&h, &ad_on_jb(&l, &s, &y)?);
        let parts = res.multidegree_split(&blocks)?;
        let pick = |md: [u32; 2]| parts.get(md.as_slice()).cloned().unwrap_or_else(|| HomoPoly::zero(n, 3));
        out.residual_21.push(pick([2, 1]));
        out.residual_03.push(pick([0, 3]));
        // JY = x⁺[a], so ⟨JY, X⟩ is the coordinate 2 + a
        out.predicted_03.push(var(2 + a).mul(&xx).scale(&r));
    }
    Ok(out)
}
