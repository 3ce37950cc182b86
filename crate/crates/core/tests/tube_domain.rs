use nalgebra::DMatrix;
use proptest::prelude::*;
use specgeo::corpus;
use specgeo::hypersurface::{canonical_metric, HypersurfacePoint};
use specgeo::linalg::{max_abs_diff, signature_f64};
use specgeo::rng::seeded;
use specgeo::tube::{
    aut_algebra, check_cone_isometry, check_pullback_isometry, cone_product_check, exp_f64, sample_tube_points, Tube,
    TubeMap,
};
use specgeo::{parse_poly, Signature, Surd};

fn tube(s: &str, n: usize) -> Tube {
    Tube::new(&parse_poly(s, n).unwrap()).unwrap()
}

fn points(t: &Tube, seed: u64, count: usize) -> Vec<Vec<f64>> {
    points_near(t, &vec![1.0; t.n()], seed, count)
}

fn points_near(t: &Tube, base: &[f64], seed: u64, count: usize) -> Vec<Vec<f64>> {
    sample_tube_points(t.poly(), base, count, &mut seeded(seed)).unwrap()
}

#[test]
fn monomial_blocks_match_closed_form() {
    // for h = Π x_i the block is diag(1 / (n·y_i²))
    for n in 2..=4 {
        let t = tube(&(1..=n).map(|i| format!("x{i}")).collect::<Vec<_>>().join("*"), n);
        let y: Vec<f64> = (0..n).map(|i| 0.5 + i as f64).collect();
        let want =
            DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(n, y.iter().map(|v| 1.0 / (n as f64 * v * v))));
        assert!(max_abs_diff(&t.block_f64(&y).unwrap(), &want) < 1e-14);
    }
}

#[test]
fn lorentz_cone_block() {
    let t = tube("x1^2 - x2^2 - x3^2", 3);
    let g = t.block(&[Surd::from(1), Surd::from(0), Surd::from(0)]).unwrap();
    assert_eq!(g, DMatrix::from_diagonal_element(3, 3, Surd::from(1)));
}

#[test]
fn metric_does_not_depend_on_real_part() {
    let t = tube("x1*x2*x3", 3);
    let a = t.metric(&[0.0, 0.0, 0.0, 1.0, 2.0, 0.5]).unwrap();
    let b = t.metric(&[3.0, -1.0, 7.0, 1.0, 2.0, 0.5]).unwrap();
    assert_eq!(a, b);
    assert!(t.metric(&[0.0; 6]).is_err());
    assert!(t.metric(&[0.0, 0.0, 0.0, -1.0, 1.0, 1.0]).is_err());
}

#[test]
fn restriction_to_level_set_is_canonical_metric() {
    for e in corpus::polynomials() {
        let t = Tube::new(&e.poly).unwrap();
        let seed: Vec<Surd> = e.seed.iter().map(|&v| Surd::from(v as i64)).collect();
        let v = e.poly.eval(&seed);
        if v != Surd::from(1) {
            continue;
        }
        let basis = HypersurfacePoint::exact(&e.poly, &seed).unwrap().tangent_basis;
        let g = t.block(&seed).unwrap();
        let b = DMatrix::from_fn(e.poly.n(), basis.len(), |i, j| basis[j][i].clone());
        let restricted = b.transpose() * g * b;
        assert_eq!(restricted, canonical_metric(&e.poly, &seed).unwrap().exact.unwrap(), "{}", e.name);
    }
}

#[test]
fn radial_vector_has_unit_length() {
    for e in corpus::polynomials() {
        let t = Tube::new(&e.poly).unwrap();
        for w in points_near(&t, &e.seed, 4, 10) {
            let y = &w[t.n()..];
            let r = t.radial_norm(y).unwrap();
            // rounding in Yᵀ·G·Y is bounded by the sum of absolute terms
            let g = t.block_f64(y).unwrap();
            let scale: f64 = (0..t.n())
                .flat_map(|i| (0..t.n()).map(move |j| (i, j)))
                .map(|(i, j)| (y[i] * g[(i, j)] * y[j]).abs())
                .sum();
            assert!((r - 1.0).abs() < 1e-9 * scale.max(1.0), "{}: {r} (scale {scale})", e.name);
            let yq: Vec<Surd> = y.iter().map(|v| Surd::ratio((v * 64.0).round() as i64, 64)).collect();
            if let Ok(gq) = t.block(&yq) {
                let rq: Surd = (0..t.n())
                    .flat_map(|i| (0..t.n()).map(move |j| (i, j)))
                    .map(|(i, j)| &yq[i] * &gq[(i, j)] * &yq[j])
                    .sum();
                assert_eq!(rq, Surd::from(1), "{}", e.name);
            }
        }
    }
}

#[test]
fn standard_isometries() {
    for e in corpus::polynomials() {
        let t = Tube::new(&e.poly).unwrap();
        let n = t.n();
        let pts = points_near(&t, &e.seed, 11, 10);
        let x0: Vec<f64> = (0..n).map(|i| 0.7 - i as f64).collect();
        for m in [TubeMap::Scaling(2.0), TubeMap::Scaling(0.3), TubeMap::Translation(x0), TubeMap::Reflection] {
            let dev = check_pullback_isometry(&t, &m, &pts).unwrap();
            assert!(dev < 1e-9, "{} {}: {dev}", e.name, m.name());
        }
    }
}

#[test]
fn inversion_is_a_cone_isometry_only() {
    for e in corpus::polynomials() {
        let t = Tube::new(&e.poly).unwrap();
        let n = t.n();
        let pts = points_near(&t, &e.seed, 12, 10);
        let ys: Vec<Vec<f64>> = pts.iter().map(|w| w[n..].to_vec()).collect();
        assert!(check_cone_isometry(&t, &TubeMap::Inversion, &ys).unwrap() < 1e-9, "{}", e.name);
        for w in &pts {
            let (once, _) = TubeMap::Inversion.apply(t.poly(), w).unwrap();
            let (twice, _) = TubeMap::Inversion.apply(t.poly(), &once).unwrap();
            let err = twice.iter().zip(w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-12);
        }
        // the x-block picks up h(Y)^{4/d}, which is not 1 away from the level set
        assert!(check_pullback_isometry(&t, &TubeMap::Inversion, &pts).unwrap() > 0.1, "{}", e.name);
    }
}

#[test]
fn linear_maps() {
    let t = tube("x1*x2", 2);
    let pts = points(&t, 13, 10);
    // diag(2, 1) rescales h by a constant, which leaves log-Hessians unchanged
    let diag = TubeMap::Linear(DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]));
    assert!(check_pullback_isometry(&t, &diag, &pts).unwrap() < 1e-9);
    let swap = TubeMap::Linear(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
    assert!(check_pullback_isometry(&t, &swap, &pts).unwrap() < 1e-9);
    let shear = TubeMap::Linear(DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]));
    assert!(check_pullback_isometry(&t, &shear, &pts).unwrap() > 0.1);
}

#[test]
fn automorphism_group_acts_isometrically() {
    let t = tube("x1*x2*x3", 3);
    let alg = aut_algebra(t.poly());
    assert_eq!(alg.len(), 2);
    for x in &alg {
        assert_eq!(x.iter().cloned().sum::<Surd>(), x.trace());
        assert!(x.trace().is_zero());
    }
    let pts = points(&t, 14, 10);
    let a = exp_f64(&(alg[0].map(|v| v * Surd::ratio(1, 3))));
    let b = exp_f64(&(alg[1].map(|v| v * Surd::ratio(-2, 5))));
    let composite = TubeMap::Compose(vec![
        TubeMap::Linear(a.clone()),
        TubeMap::Translation(vec![1.0, -2.0, 0.5]),
        TubeMap::Linear(b.clone()),
        TubeMap::Scaling(1.5),
    ]);
    assert!(check_pullback_isometry(&t, &composite, &pts).unwrap() < 1e-9);
    // composing linear maps agrees with the matrix product
    for w in &pts {
        let (lhs, _) =
            TubeMap::Compose(vec![TubeMap::Linear(a.clone()), TubeMap::Linear(b.clone())]).apply(t.poly(), w).unwrap();
        let (rhs, _) = TubeMap::Linear(&b * &a).apply(t.poly(), w).unwrap();
        assert!(lhs.iter().zip(&rhs).all(|(p, q)| (p - q).abs() < 1e-12));
    }
}

#[test]
fn cone_is_a_metric_product() {
    for e in corpus::polynomials() {
        let t = Tube::new(&e.poly).unwrap();
        let n = t.n();
        let ys: Vec<Vec<f64>> = points_near(&t, &e.seed, 15, 5)
            .into_iter()
            .map(|w| specgeo::hypersurface::project_to_level(&e.poly, &w[n..]).unwrap())
            .collect();
        let samples: Vec<(f64, Vec<f64>)> =
            ys.iter().flat_map(|y| [-1.5, 0.0, 0.8, 3.0].map(|s| (s, y.clone()))).collect();
        let dev = cone_product_check(&t, &samples).unwrap();
        assert!(dev.max() < 1e-9, "{}: {dev:?}", e.name);
    }
}

#[test]
fn tube_signature_doubles_block_signature() {
    for e in corpus::polynomials() {
        let t = Tube::new(&e.poly).unwrap();
        for w in points_near(&t, &e.seed, 16, 5) {
            let s = signature_f64(&t.block_f64(&w[t.n()..]).unwrap());
            let full = signature_f64(&t.metric(&w).unwrap());
            assert_eq!(full, Signature::new(2 * s.pos, 2 * s.neg, 2 * s.null), "{}", e.name);
        }
    }
}

#[test]
fn finite_differences_reproduce_metric() {
    for e in corpus::polynomials() {
        let t = Tube::new(&e.poly).unwrap();
        for w in points_near(&t, &e.seed, 17, 20) {
            let g = t.metric(&w).unwrap();
            let fd = t.metric_fd(&w).unwrap();
            let dev = max_abs_diff(&g, &fd) / g.amax().max(1.0);
            assert!(dev < 1e-6, "{}: {dev}", e.name);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalings_are_isometries(lambda in 0.05f64..20.0, seed in any::<u64>()) {
        let t = tube("x1*x2*x3", 3);
        let pts = points(&t, seed, 3);
        prop_assert!(check_pullback_isometry(&t, &TubeMap::Scaling(lambda), &pts).unwrap() < 1e-9);
    }

    #[test]
    fn potential_is_invariant_under_translation(seed in any::<u64>(), shift in -5.0f64..5.0) {
        let t = Tube::new(&corpus::polynomial("cubic3").unwrap().poly).unwrap();
        for w in points(&t, seed, 2) {
            let z: Vec<_> = (0..3).map(|i| num_complex::Complex::new(w[i], w[3 + i])).collect();
            let z2: Vec<_> = z.iter().map(|c| c + shift).collect();
            prop_assert_eq!(t.potential(&z).unwrap(), t.potential(&z2).unwrap());
        }
    }
}
