use nalgebra::DMatrix;
use proptest::prelude::*;
use specgeo::hypersurface::{
    canonical_form, canonical_metric, canonical_metric_exact, canonical_metric_f64, metric_routes, normalize_at,
    project_to_level, pseudo_euclidean_quadric, pseudo_sphere_signature, sample_near_seed, sphere_symmetry,
    HypersurfacePoint,
};
use specgeo::linalg::{signature_exact, signature_f64};
use specgeo::rng::{random_point, random_poly, seeded};
use specgeo::{parse_poly, Error, Signature, Surd};

fn q(v: &[i64]) -> Vec<Surd> {
    v.iter().map(|&x| Surd::from(x)).collect()
}

#[test]
fn projection_examples() {
    let h = parse_poly("x1*x2", 2).unwrap();
    let p = project_to_level(&h, &[2.0, 2.0]).unwrap();
    assert!((p[0] - 1.0).abs() < 1e-15 && (p[1] - 1.0).abs() < 1e-15);
    assert_eq!(project_to_level(&h, &[1.0, 1.0]).unwrap(), vec![1.0, 1.0]);
    assert!(matches!(project_to_level(&h, &[1.0, -1.0]), Err(Error::NonpositiveLevel(_))));
}

#[test]
fn sphere_and_hyperboloid() {
    let sphere = parse_poly("x1^2 + x2^2 + x3^2", 3).unwrap();
    let g = canonical_metric(&sphere, &q(&[1, 0, 0])).unwrap();
    assert_eq!(g.exact.unwrap(), DMatrix::from_diagonal_element(2, 2, Surd::from(-1)));
    assert_eq!(g.signature, Signature::new(0, 2, 0));
    let hyp = parse_poly("x1^2 - x2^2 - x3^2", 3).unwrap();
    let g = canonical_metric(&hyp, &q(&[1, 0, 0])).unwrap();
    assert_eq!(g.exact.unwrap(), DMatrix::from_diagonal_element(2, 2, Surd::from(1)));
}

#[test]
fn product_cubic_is_positive() {
    let h = parse_poly("x1*x2*x3", 3).unwrap();
    let one = q(&[1, 1, 1]);
    let x = q(&[1, -1, 0]);
    assert_eq!(canonical_form(&h, &one, &x, &x), Surd::ratio(2, 3));
    assert_eq!(canonical_metric(&h, &one).unwrap().signature, Signature::new(2, 0, 0));
}

#[test]
fn tangent_basis_annihilates_gradient() {
    let h = parse_poly("x1^2*x2 - x2^3 + 2*x1*x2*x3 + x3^3", 3).unwrap();
    let x0 = q(&[2, 1, 1]);
    let hn = normalize_at(&h, &x0).unwrap();
    let p = HypersurfacePoint::exact(&hn, &x0).unwrap();
    assert_eq!(p.tangent_basis.len(), 2);
    let grad = hn.gradient(&x0);
    for v in &p.tangent_basis {
        let s: Surd = v.iter().zip(&grad).map(|(a, b)| a * b).sum();
        assert!(s.is_zero());
    }
    assert!(HypersurfacePoint::exact(&h, &x0).is_err());
}

#[test]
fn float_routes_agree() {
    let h = parse_poly("x1^2*x2 - 1/3*x2^3 + x1*x2^2", 2).unwrap();
    let mut rng = seeded(5);
    for x in sample_near_seed(&h, &[1.0, 1.0], 20, 0.3, &mut rng).unwrap() {
        let p = HypersurfacePoint::float(&h, &x).unwrap();
        let m = canonical_metric_f64(&p).unwrap();
        assert_eq!(m.dim(), 1);
    }
}

#[test]
fn signature_examples() {
    let d = DMatrix::from_row_slice(2, 2, &[Surd::from(1), Surd::zero(), Surd::zero(), Surd::from(-1)]);
    assert_eq!(signature_exact(&d), Signature::new(1, 1, 0));
    assert_eq!(signature_exact(&DMatrix::from_element(2, 2, Surd::zero())), Signature::new(0, 0, 2));
    assert_eq!(signature_f64(&DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])), Signature::new(1, 1, 0));
}

#[test]
fn pseudo_sphere_law() {
    for k in 1..=6 {
        for l in 0..=6 - k {
            if k + l >= 2 {
                assert_eq!(pseudo_sphere_signature(k, l).unwrap(), Signature::new(l, k - 1, 0), "({k},{l})");
            }
        }
    }
}

#[test]
fn sphere_symmetry_examples() {
    let qf = pseudo_euclidean_quadric(2, 2);
    let x0 = q(&[1, 0, 0, 0]);
    assert_eq!(sphere_symmetry(&qf, &x0, &x0).unwrap(), x0);
    let perp = q(&[0, 2, -1, 3]);
    let img = sphere_symmetry(&qf, &x0, &perp).unwrap();
    assert_eq!(img, perp.iter().map(|v| -v.clone()).collect::<Vec<_>>());
    assert_eq!(qf.eval(&img), qf.eval(&perp));
    // σ is linear and fixes X0, so its differential at X0 is σ itself
    let g = canonical_metric(&qf, &x0).unwrap();
    let basis = HypersurfacePoint::exact(&qf, &x0).unwrap().tangent_basis;
    for (a, u) in basis.iter().enumerate() {
        for (b, v) in basis.iter().enumerate() {
            let su = sphere_symmetry(&qf, &x0, u).unwrap();
            let sv = sphere_symmetry(&qf, &x0, v).unwrap();
            assert_eq!(canonical_form(&qf, &x0, &su, &sv), g.exact.as_ref().unwrap()[(a, b)]);
        }
    }
    let null = parse_poly("x1*x2", 2).unwrap();
    assert!(matches!(sphere_symmetry(&null, &q(&[1, 0]), &q(&[1, 1])), Err(Error::NullBasePoint)));
}

#[test]
fn automorphisms_act_isometrically() {
    // A = diag(2, 1/2, 1) preserves x1 x2 x3
    let h = parse_poly("x1*x2*x3", 3).unwrap();
    let a = [Surd::from(2), Surd::ratio(1, 2), Surd::from(1)];
    let apply = |x: &[Surd]| x.iter().zip(&a).map(|(v, s)| v * s).collect::<Vec<_>>();
    let x0 = q(&[1, 1, 1]);
    let mut rng = seeded(9);
    for _ in 0..10 {
        let x = random_point(&mut rng, 3);
        let y = random_point(&mut rng, 3);
        assert_eq!(canonical_form(&h, &apply(&x0), &apply(&x), &apply(&y)), canonical_form(&h, &x0, &x, &y));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn routes_agree_exactly(seed in any::<u64>(), n in 2usize..=4, d in 2u32..=4) {
        let mut rng = seeded(seed);
        let h = random_poly(&mut rng, n, d, 0.7);
        let x = random_point(&mut rng, n);
        prop_assume!(!h.eval(&x).is_zero());
        let hn = normalize_at(&h, &x).unwrap();
        let p = HypersurfacePoint::exact(&hn, &x).unwrap();
        let [a, b, c] = metric_routes(&hn, &x, &p.tangent_basis).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&a, &c);
        let m = canonical_metric_exact(&p).unwrap();
        prop_assert_eq!(m.signature.dim(), n - 1);
    }
}
