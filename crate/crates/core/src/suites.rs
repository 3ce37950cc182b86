//! Check suites that turn the library's verifiers into [`SuiteReport`]s.
//!
//! Every suite draws its randomness from `seeded(sub_seed(seed, label))`, so
//! a suite's records depend only on its own label and the global seed.

use nalgebra::DMatrix;
use num_complex::Complex;
use rand::Rng;
use serde::Serialize;

use crate::corpus::{self, PolyEntry};
use crate::error::{Error, Result};
use crate::hypersurface::{self, canonical_metric, normalize_at, HypersurfacePoint};
use crate::jalgebra::{
    build_u0_rank2, build_u0_rank2_signed, build_u0_rank3, forbidden_extension, invariance_check, orbit_rank,
    pullback_metric_check, IsometricMap, NormalJAlgebra,
};
use crate::linalg::{self, signature_exact, Signature};
use crate::poly::{BlockStructure, HomoPoly};
use crate::pv::{self, CubicCase};
use crate::report::{Basis, Record, SuiteReport, Tolerances};
use crate::rng::{random_point, random_poly, random_rational, seeded};
use crate::special::{self, ConePoint, RMap};
use crate::surd::Surd;
use crate::tube::{self, Tube, TubeMap};

/// Closed-form isometry checks.
pub const ISOMETRY_TOL: f64 = 1e-9;
/// Involution, fixed points, cone product and Lagrangean checks.
pub const STRUCTURE_TOL: f64 = 1e-10;
/// Tube pull-back of normal J-algebras.
pub const PULLBACK_TOL: f64 = 1e-10;
/// Sampled infinitesimal invariance of relative invariants.
pub const PV_TOL: f64 = 1e-12;

/// FNV-1a of the label, keyed by the seed.
pub fn sub_seed(seed: u64, label: &str) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64 ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn count_failures<T>(items: impl IntoIterator<Item = T>, mut ok: impl FnMut(T) -> Result<bool>) -> Result<usize> {
    let mut bad = 0;
    for it in items {
        if !ok(it)? {
            bad += 1;
        }
    }
    Ok(bad)
}

fn exact_count(id: &str, failures: usize, total: usize, basis: Basis) -> Record {
    Record::exact(id, failures == 0, basis).with_note(format!("{} of {total} cases agree", total - failures))
}

/// Polarization, multilinearity, the log-Hessian identity and block splits
/// on random exact polynomials (`n ≤ 4`, `d ≤ 4`).
pub fn poly_core(samples: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = seeded(sub_seed(seed, "poly-core"));
    let mut rep = SuiteReport::new("poly-core");
    let mut cases = Vec::new();
    for _ in 0..samples {
        let n = rng.random_range(1..=4);
        let d = rng.random_range(1..=4);
        cases.push((random_poly(&mut rng, n, d, 0.6), random_point(&mut rng, n)));
    }
    let bad = count_failures(&cases, |(h, x)| {
        let args = vec![x.clone(); h.degree() as usize];
        Ok(h.polarize().eval(&args)? == h.eval(x))
    })?;
    rep.push(exact_count("polarization-identity", bad, samples, Basis::Identity));

    let x123 = HomoPoly::parse("x1*x2*x3", 3)?.polarize();
    let x112 = HomoPoly::parse("x1^2*x2", 2)?.polarize();
    let ok = x123.value(&[0, 1, 2]) == Surd::ratio(1, 6)
        && x123.value(&[0, 0, 1]).is_zero()
        && x112.value(&[0, 0, 1]) == Surd::ratio(1, 3);
    rep.push(Record::exact("polarization-values", ok, Basis::Oracle));

    let i = Complex::new(0.0, 1.0);
    let z = vec![i; 3];
    let v = x123.eval(&[z.clone(), z.clone(), z])?;
    rep.push(Record::measured("complex-evaluation", (v - Complex::new(0.0, -1.0)).norm(), 0.0, Basis::Oracle));

    let bad = count_failures(0..samples.min(40), |_| {
        let n = rng.random_range(1..=4);
        let d = rng.random_range(2..=4);
        let h = random_poly(&mut rng, n, d, 0.6);
        let form = h.polarize();
        let (a, b) = (random_rational(&mut rng), random_rational(&mut rng));
        let (x, y) = (random_point(&mut rng, n), random_point(&mut rng, n));
        let rest: Vec<Vec<Surd>> = (1..d).map(|_| random_point(&mut rng, n)).collect();
        let comb: Vec<Surd> = x.iter().zip(&y).map(|(p, q)| &a * p + &b * q).collect();
        let with = |first: Vec<Surd>| {
            let mut args = vec![first];
            args.extend(rest.iter().cloned());
            form.eval(&args)
        };
        Ok(with(comb)? == &a * &with(x)? + &b * &with(y)?)
    })?;
    rep.push(exact_count("multilinearity", bad, samples.min(40), Basis::Identity));

    let bad = count_failures(0..samples.min(40), |_| {
        let n = rng.random_range(1..=4);
        let d = rng.random_range(1..=4);
        let h = random_poly(&mut rng, n, d, 0.6);
        let x = random_point(&mut rng, n);
        let v = h.eval(&x);
        if v.is_zero() {
            return Ok(matches!(h.log_hessian(&x), Err(Error::ZeroLevel)));
        }
        let g = DMatrix::from_column_slice(n, 1, &h.gradient(&x));
        let want = h.hessian(&x).map(|e| e / &v) - (&g * g.transpose()).map(|e| e / (&v * &v));
        Ok(h.log_hessian(&x)? == want)
    })?;
    rep.push(exact_count("log-hessian-identity", bad, samples.min(40), Basis::Identity));

    let bad = count_failures(0..samples.min(40), |_| {
        let n = rng.random_range(2..=4);
        let d = rng.random_range(1..=4);
        let h = random_poly(&mut rng, n, d, 0.6);
        let cut = rng.random_range(1..n);
        let blocks = BlockStructure::consecutive(&[cut, n - cut]);
        let parts = h.multidegree_split(&blocks)?;
        let mut sum = HomoPoly::zero(n, d);
        let mut pure = true;
        for (md, p) in &parts {
            sum = sum.add(p)?;
            pure &= p.terms().all(|(e, _)| {
                let first: u32 = e[..cut].iter().sum();
                md == &vec![first, d - first]
            });
        }
        Ok(pure && sum == h)
    })?;
    rep.push(exact_count("multidegree-split", bad, samples.min(40), Basis::Identity));
    Ok(rep)
}

/// Exact agreement of the three metric routes at random rational points,
/// and the signature laws of quadrics.
pub fn hypersurface_suite(points: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = seeded(sub_seed(seed, "hypersurface"));
    let mut rep = SuiteReport::new("hypersurface");
    let mut done = 0;
    let mut bad = 0;
    while done < points {
        let n = rng.random_range(2..=4);
        let d = rng.random_range(2..=4);
        let h = random_poly(&mut rng, n, d, 0.7);
        let x = random_point(&mut rng, n);
        let Ok(hn) = normalize_at(&h, &x) else { continue };
        done += 1;
        match hypersurface::canonical_metric_exact(&HypersurfacePoint::exact(&hn, &x)?) {
            Ok(_) => {}
            Err(Error::RouteMismatch { .. }) => bad += 1,
            Err(e) => return Err(e),
        }
    }
    rep.push(exact_count("metric-routes", bad, points, Basis::Theorem));

    let ok = (2..=6).all(|n| hypersurface::pseudo_sphere_signature(n, 0).ok() == Some(Signature::new(0, n - 1, 0)));
    rep.push(Record::exact("sphere-negative-definite", ok, Basis::Theorem));
    let ok = (2..=6).all(|n| hypersurface::pseudo_sphere_signature(1, n - 1).ok() == Some(Signature::new(n - 1, 0, 0)));
    rep.push(Record::exact("hyperboloid-positive-definite", ok, Basis::Theorem));
    let mut ok = true;
    for k in 1..=6 {
        for l in 0..=6 - k {
            if k + l >= 2 {
                ok &= hypersurface::pseudo_sphere_signature(k, l)? == Signature::new(l, k - 1, 0);
            }
        }
    }
    rep.push(Record::exact("pseudo-sphere-signature", ok, Basis::Theorem));

    // sphere symmetry at e1 fixes e1 and preserves the quadric
    let q = hypersurface::pseudo_euclidean_quadric(2, 2);
    let e1 = vec![Surd::from(1), Surd::zero(), Surd::zero(), Surd::zero()];
    let mut ok = hypersurface::sphere_symmetry(&q, &e1, &e1)? == e1;
    for _ in 0..10 {
        let x = random_point(&mut rng, 4);
        ok &= q.eval(&hypersurface::sphere_symmetry(&q, &e1, &x)?) == q.eval(&x);
    }
    rep.push(Record::exact("pseudo-sphere-symmetry", ok, Basis::Theorem));
    Ok(rep)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TubeSuite {
    Isometries,
    Product,
    Pullback,
}

impl TubeSuite {
    pub fn label(self) -> &'static str {
        match self {
            TubeSuite::Isometries => "isometries",
            TubeSuite::Product => "product",
            TubeSuite::Pullback => "pullback",
        }
    }
}

fn level_points<R: Rng + ?Sized>(e: &PolyEntry, count: usize, rng: &mut R) -> Result<Vec<Vec<f64>>> {
    hypersurface::sample_near_seed(&e.poly, &e.seed, count, 0.3, rng)
}

/// The shear `x₁ ↦ x₁ + x₂/2`, not an automorphism of any corpus polynomial.
fn shear(n: usize) -> DMatrix<f64> {
    let mut a = DMatrix::identity(n, n);
    if n > 1 {
        a[(0, 1)] = 0.5;
    }
    a
}

pub fn tube_check(e: &PolyEntry, suite: TubeSuite, points: usize, seed: u64, tol: Tolerances) -> Result<SuiteReport> {
    let mut rng = seeded(sub_seed(seed, &format!("tube/{}/{}", suite.label(), e.name)));
    let mut rep = SuiteReport::new(format!("tube-{}:{}", suite.label(), e.name));
    let h = &e.poly;
    let tube = Tube::new(h)?;
    let n = h.n();
    match suite {
        TubeSuite::Isometries => {
            let pts = tube::sample_tube_points(h, &e.seed, points, &mut rng)?;
            let x0: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 3.0 } else { -1.0 }).collect();
            for map in [TubeMap::Scaling(2.0), TubeMap::Translation(x0.clone()), TubeMap::Reflection] {
                let dev = tube::check_pullback_isometry(&tube, &map, &pts)?;
                rep.push(Record::measured(map.name(), dev, tol.of(ISOMETRY_TOL), Basis::Theorem));
            }
            let ys: Vec<Vec<f64>> = pts.iter().map(|w| w[n..].to_vec()).collect();
            let dev = tube::check_cone_isometry(&tube, &TubeMap::Inversion, &ys)?;
            rep.push(Record::measured("inversion-on-cone", dev, tol.of(ISOMETRY_TOL), Basis::Theorem));
            let full = tube::check_pullback_isometry(&tube, &TubeMap::Inversion, &pts)?;
            rep.push(Record::skip(
                "inversion-full-tube",
                format!("real directions scale by h(Y)^(4/d); measured deviation {full:.3e}"),
            ));
            let mut inv_dev = 0.0f64;
            for w in &pts {
                let (w1, _) = TubeMap::Inversion.apply(h, w)?;
                let (w2, _) = TubeMap::Inversion.apply(h, &w1)?;
                inv_dev = inv_dev.max(w.iter().zip(&w2).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
            }
            rep.push(Record::measured("inversion-involution", inv_dev, tol.of(STRUCTURE_TOL), Basis::Identity));
            let mut fix_dev = 0.0f64;
            for y in level_points(e, points, &mut rng)? {
                let mut w = vec![0.0; n];
                w.extend_from_slice(&y);
                let (w1, _) = TubeMap::Inversion.apply(h, &w)?;
                fix_dev = fix_dev.max(w.iter().zip(&w1).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
            }
            rep.push(Record::measured("inversion-fixes-level-set", fix_dev, tol.of(STRUCTURE_TOL), Basis::Identity));

            let aut = tube::aut_algebra(h);
            if let Some(x) = aut.first() {
                let a = tube::exp_f64(&x.map(|v| v * Surd::ratio(1, 2)));
                let composite =
                    TubeMap::Compose(vec![TubeMap::Linear(a), TubeMap::Scaling(1.5), TubeMap::Translation(x0)]);
                let dev = tube::check_pullback_isometry(&tube, &composite, &pts)?;
                rep.push(Record::measured("affine-group-composite", dev, tol.of(ISOMETRY_TOL), Basis::Theorem));
            } else {
                rep.push(Record::skip("affine-group-composite", "no infinitesimal linear automorphisms"));
            }
            let a = shear(n);
            let inside: Vec<Vec<f64>> = pts
                .iter()
                .filter(|w| h.eval((&a * nalgebra::DVector::from_column_slice(&w[n..])).as_slice()) > 0.0)
                .cloned()
                .collect();
            if n > 1 && !inside.is_empty() {
                let dev = tube::check_pullback_isometry(&tube, &TubeMap::Linear(a), &inside)?;
                rep.push(Record::exceeds("shear-is-not-isometric", dev, 0.1));
            } else {
                rep.push(Record::skip("shear-is-not-isometric", "no sample stays in the cone"));
            }
        }
        TubeSuite::Product => {
            let ys = level_points(e, points, &mut rng)?;
            let samples: Vec<(f64, Vec<f64>)> = ys.into_iter().map(|y| (rng.random_range(-1.0..1.0), y)).collect();
            let dev = tube::cone_product_check(&tube, &samples)?;
            rep.push(Record::measured("radial-unit-length", dev.radial, tol.of(STRUCTURE_TOL), Basis::Theorem));
            rep.push(Record::measured("radial-orthogonal", dev.mixed, tol.of(STRUCTURE_TOL), Basis::Theorem));
            rep.push(Record::measured("product-tangent-block", dev.tangent, tol.of(STRUCTURE_TOL), Basis::Theorem));
        }
        TubeSuite::Pullback => {
            let mut bad = 0;
            let mut tried = 0;
            for y in level_points(e, points, &mut rng)? {
                let yq: Vec<Surd> = y.iter().map(|v| Surd::ratio((v * 16.0).round() as i64, 16)).collect();
                let Ok(hn) = normalize_at(h, &yq) else { continue };
                if hn.eval(&y) <= 0.0 {
                    continue;
                }
                tried += 1;
                let restricted = Tube::new(&hn)?.restricted_to_level_exact(&yq)?;
                let can = canonical_metric(&hn, &yq)?;
                if can.exact.as_ref() != Some(&restricted) {
                    bad += 1;
                }
            }
            rep.push(exact_count("level-set-embedding", bad, tried, Basis::Theorem));

            let pts = tube::sample_tube_points(h, &e.seed, points, &mut rng)?;
            let mut fd = 0.0f64;
            for w in &pts {
                let g = tube.metric(w)?;
                fd = fd.max(linalg::max_abs_diff(&g, &tube.metric_fd(w)?) / g.amax().max(1.0));
            }
            rep.push(Record::measured("finite-difference-metric", fd, tol.of(tube::FD_TOL), Basis::Oracle));

            let seed_q: Vec<Surd> = e.seed.iter().map(|v| Surd::ratio((v * 16.0).round() as i64, 16)).collect();
            let hn = normalize_at(h, &seed_q)?;
            let can = canonical_metric(&hn, &seed_q)?.signature;
            let g = Tube::new(&hn)?.block(&seed_q)?;
            let s = signature_exact(&g);
            let real = Signature::new(2 * s.pos, 2 * s.neg, 2 * s.null);
            let ok = real == Signature::new(2 * can.pos + 2, 2 * can.neg, 2 * can.null);
            rep.push(
                Record::exact("tube-signature", ok, Basis::Theorem)
                    .with_note(format!("level set {can}, tube (real) {real}")),
            );
        }
    }
    Ok(rep)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConeSuite {
    Lagrangean,
    Gamma,
    GcGs,
    Lemma4h,
}

impl ConeSuite {
    pub fn label(self) -> &'static str {
        match self {
            ConeSuite::Lagrangean => "lagrangean",
            ConeSuite::Gamma => "gamma",
            ConeSuite::GcGs => "gc-gs",
            ConeSuite::Lemma4h => "lemma4h",
        }
    }
}

fn cone_points<R: Rng + ?Sized>(e: &PolyEntry, points: usize, rng: &mut R) -> Result<Vec<Vec<f64>>> {
    tube::sample_tube_points(&e.poly, &e.seed, points, rng)
}

fn to_complex(w: &[f64]) -> Vec<Complex<f64>> {
    let n = w.len() / 2;
    (0..n).map(|j| Complex::new(w[j], w[n + j])).collect()
}

pub fn cone_check(e: &PolyEntry, suite: ConeSuite, points: usize, seed: u64, tol: Tolerances) -> Result<SuiteReport> {
    let mut rng = seeded(sub_seed(seed, &format!("cone/{}/{}", suite.label(), e.name)));
    let mut rep = SuiteReport::new(format!("cone-{}:{}", suite.label(), e.name));
    let h = &e.poly;
    let n = h.n();
    let cubic = h.degree() == 3;
    match suite {
        ConeSuite::Lagrangean => {
            let f = RMap::new(h)?;
            let mut iso = 0.0f64;
            let mut routes = 0.0f64;
            for w in cone_points(e, points, &mut rng)? {
                let mut zeta = vec![Complex::new(1.0, 0.0)];
                zeta.extend(to_complex(&w));
                iso = iso.max(ConePoint::new(&f, &zeta)?.isotropy_defect());
                routes = routes.max(special::cone_metric_routes(&f, &zeta)?);
            }
            rep.push(Record::measured("frame-isotropic", iso, tol.of(STRUCTURE_TOL), Basis::Theorem));
            rep.push(Record::measured("cone-metric-routes", routes, tol.of(STRUCTURE_TOL), Basis::Theorem));
        }
        ConeSuite::Gamma => {
            let (re, im) = special::gamma_gram_exact(n);
            let herm = re == re.transpose() && im == -im.transpose();
            rep.push(Record::exact("gamma-hermitian-gram", herm, Basis::Theorem));
            let mut ok = true;
            for _ in 0..points {
                let rand_c = |rng: &mut rand_xorshift::XorShiftRng| -> Vec<Complex<Surd>> {
                    (0..2 * n + 2).map(|_| Complex::new(random_rational(rng), random_rational(rng))).collect()
                };
                let (u, v) = (rand_c(&mut rng), rand_c(&mut rng));
                ok &= special::gamma(&u, &v)? == special::gamma(&v, &u)?.conj();
            }
            rep.push(Record::exact("gamma-hermitian-samples", ok, Basis::Identity));
            let sig = special::gamma_signature(n);
            rep.push(
                Record::exact("gamma-signature", sig == Signature::new(n + 1, n + 1, 0), Basis::Theorem)
                    .with_note(format!("n = {n}: {sig}")),
            );
        }
        ConeSuite::GcGs if !cubic => rep.push(Record::skip("gc-equals-gs", "needs a cubic")),
        ConeSuite::GcGs => {
            let pts = cone_points(e, points, &mut rng)?;
            let dev = special::check_gc_equals_gs(h, &pts)?;
            rep.push(Record::measured("gc-equals-gs-metric", dev.metric, tol.of(tube::FD_TOL), Basis::Theorem));
            rep.push(Record::measured(
                "potential-difference-constant",
                dev.potential,
                tol.of(STRUCTURE_TOL),
                Basis::Theorem,
            ));
        }
        ConeSuite::Lemma4h if !cubic => rep.push(Record::skip("lemma-4h", "needs a cubic")),
        ConeSuite::Lemma4h => {
            let mut bad = 0;
            for _ in 0..points {
                let z: Vec<Complex<Surd>> =
                    (0..n).map(|_| Complex::new(random_rational(&mut rng), random_rational(&mut rng))).collect();
                if !special::lemma_4h_residual(h, &z)?.is_zero() {
                    bad += 1;
                }
            }
            rep.push(exact_count("lemma-4h", bad, points, Basis::Theorem));
            let eight_h = h.embed(2 * n, &(n..2 * n).collect::<Vec<_>>()).scale(&Surd::from(8));
            rep.push(Record::exact("ks-polynomial-is-8h", special::ks_polynomial(h) == eight_h, Basis::Theorem));
        }
    }
    Ok(rep)
}

/// Structure checks of one family member: algebra axioms, invariance of `h`,
/// orbit rank and the tube pull-back.
pub fn jalg_family(a: &NormalJAlgebra, tol: Tolerances) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(format!("jalg:{}", a.name));
    let v = a.algebra.verify();
    rep.push(Record::exact("jacobi", v.jacobi_failures == 0, Basis::Identity));
    rep.push(Record::exact("j-square", v.j_square, Basis::Identity));
    rep.push(Record::exact("j-orthogonal", v.j_orthogonal, Basis::Theorem));
    rep.push(Record::exact("solvable", v.solvable, Basis::Theorem));
    rep.push(Record::exact("kahler-form-exact", v.kahler_primitive, Basis::Theorem));
    rep.push(Record::exact("nabla-j-zero", v.nabla_j_exact_zero, Basis::Theorem));
    rep.push(Record::measured(
        "real-spectrum",
        v.max_imaginary_eigenvalue,
        tol.of(crate::jalgebra::SPECTRUM_TOL),
        Basis::Theorem,
    ));
    for w in &a.warnings {
        rep.push(Record::skip("warning", w.clone()));
    }
    let inv = invariance_check(&a.algebra, &a.structure, &a.h)?;
    rep.push(Record::exact("b0-invariance", inv.exact_zero, Basis::Theorem));
    let rank = orbit_rank(&a.algebra, &a.structure);
    let want = a.structure.jb_dim() - 1;
    rep.push(Record::exact("orbit-rank", rank == want, Basis::Theorem).with_note(format!("{rank} (want {want})")));
    let pb = pullback_metric_check(&a.algebra, &a.structure, &a.h)?;
    rep.push(Record::measured("tube-pullback", pb.deviation, tol.of(PULLBACK_TOL), Basis::Theorem));
    Ok(rep)
}

/// All families named in the verification plan, in a fixed order.
pub fn jalg_families() -> Result<Vec<NormalJAlgebra>> {
    let mut out = Vec::new();
    for p in 0..=3 {
        for s in 1..=4 {
            out.push(build_u0_rank2(p, s)?);
        }
    }
    for p in 1..=2 {
        out.push(build_u0_rank2_signed(p, 2, -1)?);
    }
    for p in 0..=2 {
        for q in 0..=2 {
            out.push(build_u0_rank3(&IsometricMap::zero(p, q))?);
        }
    }
    for d in [1, 2, 4] {
        out.push(build_u0_rank3(&IsometricMap::composition(d)?)?);
    }
    out.push(build_u0_rank3(&IsometricMap::zero(2, 1).with_signs(1, -1, 1))?);
    Ok(out)
}

/// Negative controls: a non-special map and the obstructed rank-2 extension.
pub fn jalg_controls() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("jalg-controls");
    let a = build_u0_rank3(&IsometricMap::line_into_plane())?;
    let inv = invariance_check(&a.algebra, &a.structure, &a.h)?;
    rep.push(Record::exceeds("non-special-map-residual", inv.max_residual, 0.0));
    for p in 1..=3 {
        let f = forbidden_extension(p)?;
        rep.push(Record::exact(
            format!("forbidden-extension-{p}-first-equation"),
            f.first_equation_holds(),
            Basis::Theorem,
        ));
        rep.push(Record::exact(format!("forbidden-extension-{p}-obstructed"), f.obstructed(), Basis::Theorem));
        rep.push(Record::exact(format!("forbidden-extension-{p}-residual"), f.matches_prediction(), Basis::Oracle));
    }
    Ok(rep)
}

pub fn jalg_verify_all(tol: Tolerances) -> Result<Vec<SuiteReport>> {
    let mut out = Vec::new();
    for a in jalg_families()? {
        out.push(jalg_family(&a, tol)?);
    }
    out.push(jalg_controls()?);
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct EntrySummary {
    pub name: String,
    pub module: String,
    pub group: String,
    pub isotropy: String,
    pub dim: usize,
    pub degree: u32,
    pub evaluated: bool,
}

pub fn pv_list() -> Vec<EntrySummary> {
    pv::catalog()
        .into_iter()
        .map(|e| EntrySummary {
            evaluated: e.invariant.is_some(),
            name: e.name,
            module: e.module,
            group: e.group,
            isotropy: e.isotropy,
            dim: e.dim,
            degree: e.degree,
        })
        .collect()
}

pub fn pv_check(name: &str, samples: usize, seed: u64, tol: Tolerances) -> Result<SuiteReport> {
    let e = pv::entry(name)?;
    let mut rep = SuiteReport::new(format!("pv:{}", e.name));
    if e.invariant.is_none() {
        rep.push(Record::skip("relative-invariant", "catalog metadata only; no evaluator"));
        return Ok(rep);
    }
    let mut rng = seeded(sub_seed(seed, &format!("pv/{}", e.name)));
    let inv = pv::infinitesimal_invariance(&e, samples, &mut rng)?;
    rep.push(Record::measured("infinitesimal-invariance", inv.max_residual, tol.of(PV_TOL), Basis::Theorem));
    rep.push(Record::exact("invariance-symbolic", inv.symbolic_zero, Basis::Theorem));
    rep.push(Record::exact("scaling-character", inv.euler_exact, Basis::Identity));
    let reg = pv::regularity_check(e.invariant()?, &e.reference)?;
    rep.push(
        Record::exact("regular", reg.regular, Basis::Theorem).with_note(format!("Hessian det {}", reg.hessian_det)),
    );
    let orb = pv::orbit_dimension(&e, &e.reference)?;
    rep.push(
        Record::exact("orbit-dimension", orb.rank + 1 == orb.dim, Basis::Theorem)
            .with_note(format!("{} of {}", orb.rank, orb.dim)),
    );
    rep.push(Record::exact("open-orbit-with-scaling", orb.rank_with_scaling == orb.dim, Basis::Theorem));
    Ok(rep)
}

/// The key-algebra table, the Pfaffian normalization and the three
/// reducibility cases on constructed cubics.
pub fn pv_structure() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("pv-structure");
    let rows = pv::enumerate_key_solutions(3);
    let got: Vec<(u64, usize, Vec<String>, String)> =
        rows.iter().map(|r| (r.degree, r.rank, r.mu_sq.clone(), r.polynomial.clone())).collect();
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let want = vec![
        (2, 2, s(&["1", "1"]), "a1*a2".to_string()),
        (3, 2, s(&["1", "2"]), "a1^2*a2".to_string()),
        (3, 3, s(&["1", "1", "1"]), "a1*a2*a3".to_string()),
    ];
    rep.push(Record::exact("key-table", got == want, Basis::Theorem).with_note(format!("{} rows", rows.len())));
    let exps_ok =
        [(vec![(1, 1), (1, 1)], "a1*a2"), (vec![(1, 1), (2, 1)], "a1^2*a2"), (vec![(2, 1), (1, 1)], "a1^2*a2")]
            .iter()
            .all(|(mu, poly)| {
                pv::RootData::from_pairs(mu).map(|r| pv::monomial_label(&pv::invariant_exponents(&r).0)).ok().as_deref()
                    == Some(*poly)
            });
    rep.push(Record::exact("invariant-exponents", exps_ok, Basis::Theorem));

    let j = pv::symplectic_j(3);
    let sum = pv::pfaffian_sum_poly(6).eval(&pv::pfaffian6().reference);
    let pf = pv::pfaffian_matchings(&j);
    rep.push(
        Record::exact("pfaffian-normalization", sum == Surd::from(48) * &pf, Basis::Oracle)
            .with_note(format!("sum {sum}, Pf {pf}")),
    );

    let cases = [
        (pv::det3_poly(), BlockStructure::consecutive(&[9]), "irreducible"),
        (HomoPoly::parse("x1*x2^2 - x1*x3^2", 3)?, BlockStructure::consecutive(&[1, 2]), "linear-quadric"),
        (HomoPoly::parse("x1*x2*x3", 3)?, BlockStructure::consecutive(&[1, 1, 1]), "three-lines"),
        (HomoPoly::parse("x1^3 + x1*x2^2", 2)?, BlockStructure::consecutive(&[1, 1]), "violation"),
        (HomoPoly::parse("x1*x2*x3", 3)?, BlockStructure::consecutive(&[2, 1]), "linear-quadric"),
        (HomoPoly::parse("x1*x3^2 + x2*x3^2", 3)?, BlockStructure::consecutive(&[2, 1]), "violation"),
        (HomoPoly::parse("x1^3", 2)?, BlockStructure::consecutive(&[1, 1]), "violation"),
    ];
    let mut ok = true;
    for (h, b, want) in &cases {
        let got = pv::monomial_structure(h, b)?;
        ok &= matches!(
            (*want, &got),
            ("irreducible", CubicCase::Irreducible)
                | ("linear-quadric", CubicCase::LinearTimesQuadric { .. })
                | ("three-lines", CubicCase::ThreeLines)
                | ("violation", CubicCase::Violates(_))
        );
    }
    rep.push(Record::exact("reducibility-cases", ok, Basis::Theorem));
    Ok(rep)
}

/// Entries checked by the full run.
pub const PV_ENTRIES: [&str; 9] = [
    "det3-mat",
    "det3-sym",
    "pfaffian-6",
    "quadric-1-2",
    "quadric-2-1",
    "quadric-2-2",
    "quadric-1-3",
    "symplectic-pair-1",
    "symplectic-pair-2",
];

/// Everything, over the shipped corpus, in a fixed order.
pub fn all(seed: u64, tol: Tolerances) -> Result<Vec<SuiteReport>> {
    let mut out = vec![poly_core(100, seed)?, hypersurface_suite(50, seed)?];
    let polys = corpus::polynomials();
    for e in &polys {
        for s in [TubeSuite::Isometries, TubeSuite::Product, TubeSuite::Pullback] {
            out.push(tube_check(e, s, 10, seed, tol)?);
        }
    }
    for e in &polys {
        for s in [ConeSuite::Lagrangean, ConeSuite::GcGs, ConeSuite::Lemma4h] {
            if s != ConeSuite::Lagrangean && e.poly.degree() != 3 {
                continue;
            }
            let points = if s == ConeSuite::Lemma4h { 100 } else { 10 };
            out.push(cone_check(e, s, points, seed, tol)?);
        }
    }
    for n in 0..=5 {
        let probe = PolyEntry { name: format!("n{n}"), poly: HomoPoly::zero(n, 3), seed: vec![1.0; n] };
        out.push(cone_check(&probe, ConeSuite::Gamma, 5, seed, tol)?);
    }
    out.extend(jalg_verify_all(tol)?);
    for name in PV_ENTRIES {
        out.push(pv_check(name, 20, seed, tol)?);
    }
    out.push(pv_structure()?);
    Ok(out)
}
