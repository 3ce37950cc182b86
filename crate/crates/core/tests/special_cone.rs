use nalgebra::DMatrix;
use num_complex::Complex;
use proptest::prelude::*;
use rand::Rng;
use specgeo::corpus;
use specgeo::linalg::signature_f64;
use specgeo::rng::{random_point, random_poly, seeded};
use specgeo::special::{
    check_gc_equals_gs, cone_metric, cone_metric_routes, gamma, gamma_gram_exact, gamma_signature, ks_argument,
    ks_polynomial, lemma_4h_residual, omega, special_metric, special_metric_matrix, BasicFunction, ConePoint,
    QuadraticFunction, RMap,
};
use specgeo::tube::{sample_tube_points, Tube};
use specgeo::{parse_poly, Error, HomoPoly, Signature, Surd};

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn random_vec<R: Rng>(rng: &mut R, n: usize) -> Vec<Complex<f64>> {
    (0..n).map(|_| c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))).collect()
}

fn cubics() -> Vec<(String, HomoPoly, Vec<f64>)> {
    corpus::polynomials().into_iter().filter(|e| e.poly.degree() == 3).map(|e| (e.name, e.poly, e.seed)).collect()
}

fn tube_points(h: &HomoPoly, seed: &[f64], s: u64, count: usize) -> Vec<Vec<f64>> {
    sample_tube_points(h, seed, count, &mut seeded(s)).unwrap()
}

#[test]
fn gamma_signature_by_real_embedding() {
    // a Hermitian form H = A + iB has real form [[A, −B], [B, A]] with doubled signature
    for n in 0..=5 {
        let (re, im) = gamma_gram_exact(n);
        let m = 2 * (n + 1);
        let a = specgeo::linalg::to_f64_matrix(&re);
        let b = specgeo::linalg::to_f64_matrix(&im);
        let mut real = DMatrix::zeros(2 * m, 2 * m);
        real.view_mut((0, 0), (m, m)).copy_from(&a);
        real.view_mut((m, m), (m, m)).copy_from(&a);
        real.view_mut((0, m), (m, m)).copy_from(&(-&b));
        real.view_mut((m, 0), (m, m)).copy_from(&b);
        let s = signature_f64(&real);
        assert_eq!(s, Signature::new(2 * (n + 1), 2 * (n + 1), 0));
        assert_eq!(gamma_signature(n), Signature::new(n + 1, n + 1, 0));
    }
}

#[test]
fn gamma_is_hermitian_and_omega_skew() {
    let mut rng = seeded(21);
    for n in 0..=5 {
        for _ in 0..20 {
            let u = random_vec(&mut rng, 2 * (n + 1));
            let v = random_vec(&mut rng, 2 * (n + 1));
            assert!((gamma(&u, &v).unwrap() - gamma(&v, &u).unwrap().conj()).norm() < 1e-12);
            assert!((omega(&u, &v).unwrap() + omega(&v, &u).unwrap()).norm() < 1e-12);
            assert!(gamma(&u, &u).unwrap().im.abs() < 1e-12);
        }
    }
    assert!(gamma(&[c(1.0, 0.0)], &[c(1.0, 0.0)]).is_err());
}

#[test]
fn quadratic_function_examples() {
    let f = QuadraticFunction { a: DMatrix::from_diagonal_element(2, 2, c(0.0, 1.0)) };
    let z = [c(0.3, 0.1), c(-1.0, 2.0)];
    assert_eq!(cone_metric(&f, &z).unwrap(), DMatrix::from_diagonal_element(2, 2, c(2.0, 0.0)));
    assert!(cone_metric_routes(&f, &z).unwrap() < 1e-12);
    assert!(ConePoint::new(&f, &z).unwrap().isotropy_defect() < 1e-12);
    // real coefficients give a degenerate cone metric
    let f = QuadraticFunction { a: DMatrix::from_diagonal_element(1, 1, c(1.0, 0.0)) };
    assert_eq!(cone_metric(&f, &[c(1.0, 1.0)]).unwrap()[(0, 0)], c(0.0, 0.0));
    assert!(matches!(f.gradient(&[c(1.0, 0.0), c(0.0, 0.0)]), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn rmap_cone_is_lagrangean() {
    for (name, h, seed) in cubics() {
        let f = RMap::new(&h).unwrap();
        let n = h.n();
        for w in tube_points(&h, &seed, 31, 20) {
            let mut z = vec![c(1.0, 0.0)];
            z.extend((0..n).map(|j| c(w[j], w[n + j])));
            let p = ConePoint::new(&f, &z).unwrap();
            let scale = p.lift.iter().fold(1.0f64, |a, v| a.max(v.norm()));
            assert!(p.isotropy_defect() < 1e-10 * scale * scale, "{name}");
            assert!(cone_metric_routes(&f, &z).unwrap() < 1e-10 * scale * scale, "{name}");
        }
    }
    let f = RMap::new(&parse_poly("x1*x2", 2).unwrap()).unwrap();
    assert!(f.value(&[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]).is_ok());
}

#[test]
fn ks_argument_is_four_h_for_random_cubics() {
    let mut rng = seeded(33);
    for _ in 0..100 {
        let n = rng.random_range(1..=4);
        let h = random_poly(&mut rng, n, 3, 0.6);
        let re = random_point(&mut rng, n);
        let im = random_point(&mut rng, n);
        let z: Vec<Complex<Surd>> = re.into_iter().zip(im).map(|(a, b)| Complex::new(a, b)).collect();
        assert!(lemma_4h_residual(&h, &z).unwrap().is_zero());
        let y: Vec<Surd> = z.iter().map(|v| v.im.clone()).collect();
        assert_eq!(ks_argument(&h, &z).unwrap(), h.eval(&y) * Surd::from(4));
    }
    let q = parse_poly("x1^2", 1).unwrap();
    assert!(matches!(
        lemma_4h_residual(&q, &[Complex::new(Surd::from(0), Surd::from(1))]),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn ks_polynomial_expands_to_eight_h() {
    let mut rng = seeded(34);
    for _ in 0..25 {
        let n = rng.random_range(1..=3);
        let h = random_poly(&mut rng, n, 3, 0.7);
        let idx: Vec<usize> = (n..2 * n).collect();
        assert_eq!(ks_polynomial(&h), h.embed(2 * n, &idx).scale(&Surd::from(8)));
    }
}

#[test]
fn canonical_and_special_kahler_metrics_agree() {
    for (name, h, seed) in cubics() {
        let pts = tube_points(&h, &seed, 35, 10);
        let dev = check_gc_equals_gs(&h, &pts).unwrap();
        assert!(dev.metric < 1e-6, "{name}: {dev:?}");
        assert!(dev.potential < 1e-9, "{name}: {dev:?}");
    }
    let q = parse_poly("x1*x2", 2).unwrap();
    assert!(matches!(check_gc_equals_gs(&q, &[vec![0.0, 0.0, 1.0, 1.0]]), Err(Error::Precondition(_))));
}

#[test]
fn special_metric_is_a_multiple_of_the_tube_metric() {
    for (name, h, seed) in cubics() {
        let f = RMap::new(&h).unwrap();
        let t = Tube::new(&h).unwrap();
        let n = h.n();
        for w in tube_points(&h, &seed, 36, 10) {
            let zeta: Vec<Complex<f64>> = (0..n).map(|j| c(w[j], w[n + j])).collect();
            let m = special_metric_matrix(&f, &zeta).unwrap();
            let g = t.block_f64(&w[n..]).unwrap();
            let scale = g.amax().max(1.0);
            for j in 0..n {
                for k in 0..n {
                    let want = -0.75 * g[(j, k)];
                    assert!((m[(j, k)] - c(want, 0.0)).norm() < 1e-9 * scale, "{name}: {} vs {want}", m[(j, k)]);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn special_metric_vanishes_on_the_lift(seed in any::<u64>(), s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let mut rng = seeded(seed);
        let u = random_vec(&mut rng, 4);
        prop_assume!(gamma(&u, &u).unwrap().re.abs() > 1e-3);
        let v: Vec<Complex<f64>> = u.iter().map(|x| x * c(s, t)).collect();
        prop_assert!(special_metric(&u, &v).unwrap().abs() < 1e-9 * (1.0 + s * s + t * t));
    }

    #[test]
    fn special_metric_is_projective(seed in any::<u64>(), s in 0.2f64..3.0, t in -3.0f64..3.0) {
        let mut rng = seeded(seed);
        let u = random_vec(&mut rng, 4);
        let v = random_vec(&mut rng, 4);
        prop_assume!(gamma(&u, &u).unwrap().re.abs() > 1e-2);
        let lam = c(s, t);
        let u2: Vec<Complex<f64>> = u.iter().map(|x| x * lam).collect();
        let v2: Vec<Complex<f64>> = v.iter().map(|x| x * lam).collect();
        let a = special_metric(&u, &v).unwrap();
        let b = special_metric(&u2, &v2).unwrap();
        prop_assert!((a - b).abs() < 1e-8 * (1.0 + a.abs()));
    }
}
