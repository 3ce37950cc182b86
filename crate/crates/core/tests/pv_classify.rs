use nalgebra::DMatrix;
use num_rational::Ratio;
use proptest::prelude::*;
use rand::Rng;
use specgeo::linalg::{to_f64_matrix, ExactMatrix};
use specgeo::pv::{
    self, catalog, entry, enumerate_key_solutions, infinitesimal_invariance, invariant_exponents, invariant_monomial,
    monomial_structure, orbit_dimension, pfaffian_matchings, pfaffian_sum_poly, regularity_check, CubicCase, RootData,
};
use specgeo::rng::{random_rational, seeded};
use specgeo::{parse_poly, BlockStructure, Error, Surd};

/// Smallest positive integer vector with `e_j·μ_j²` independent of `j`, by search.
fn exponents_by_search(mu_sq: &[Ratio<u64>], bound: u64) -> Option<Vec<u64>> {
    let l = mu_sq.len();
    let mut best: Option<Vec<u64>> = None;
    let mut e = vec![1u64; l];
    loop {
        let target = Ratio::from_integer(e[0]) * mu_sq[0];
        if e.iter().zip(mu_sq).all(|(&x, m)| Ratio::from_integer(x) * m == target) {
            let s: u64 = e.iter().sum();
            if best.as_ref().is_none_or(|b| s < b.iter().sum()) {
                best = Some(e.clone());
            }
        }
        let Some(k) = (0..l).find(|&k| e[k] < bound) else { return best };
        e[k] += 1;
        for x in e.iter_mut().take(k) {
            *x = 1;
        }
    }
}

#[test]
fn key_table_up_to_degree_three() {
    let rows = enumerate_key_solutions(3);
    let got: Vec<(u64, Vec<String>, String)> =
        rows.iter().map(|r| (r.degree, r.mu_sq.clone(), r.polynomial.clone())).collect();
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    assert_eq!(
        got,
        vec![
            (2, s(&["1", "1"]), "a1*a2".to_string()),
            (3, s(&["1", "2"]), "a1^2*a2".to_string()),
            (3, s(&["1", "1", "1"]), "a1*a2*a3".to_string()),
        ]
    );
}

#[test]
fn key_rows_match_exponent_search() {
    for d in 2..=5 {
        for row in enumerate_key_solutions(d) {
            let mu: Vec<Ratio<u64>> = row
                .mu_sq
                .iter()
                .map(|s| match s.split_once('/') {
                    Some((p, q)) => Ratio::new(p.parse().unwrap(), q.parse().unwrap()),
                    None => Ratio::from_integer(s.parse().unwrap()),
                })
                .collect();
            assert_eq!(exponents_by_search(&mu, d).unwrap(), row.exponents, "{row:?}");
            assert_eq!(row.exponents.iter().sum::<u64>(), row.degree);
            assert!(row.degree <= d);
        }
    }
}

#[test]
fn invariant_monomial_has_the_exponents() {
    let r = RootData::from_pairs(&[(1, 1), (3, 2), (3, 1)]).unwrap();
    let (e, _, d) = invariant_exponents(&r);
    assert_eq!(e, exponents_by_search(r.mu_sq(), 10).unwrap());
    let m = invariant_monomial(&r);
    assert_eq!(m.degree() as u64, d);
    assert_eq!(m.coeff(&e.iter().map(|&x| x as u32).collect::<Vec<_>>()), Surd::from(1));
    assert!(RootData::from_pairs(&[(1, 0)]).is_err());
    assert!(RootData::from_pairs(&[]).is_err());
}

#[test]
fn catalog_invariants_are_relative_invariants() {
    let mut rng = seeded(41);
    let mut implemented = 0;
    for e in catalog() {
        match e.invariant() {
            Ok(h) => {
                implemented += 1;
                assert_eq!(h.n(), e.dim, "{}", e.name);
                assert_eq!(h.degree(), e.degree, "{}", e.name);
                let inv = infinitesimal_invariance(&e, 20, &mut rng).unwrap();
                assert!(inv.symbolic_zero && inv.euler_exact, "{}", e.name);
                assert!(inv.max_residual < 1e-12, "{}: {}", e.name, inv.max_residual);
                assert!(!h.eval(&e.reference).is_zero(), "{}", e.name);
                let orbit = orbit_dimension(&e, &e.reference).unwrap();
                assert!(orbit.hypersurface_transitive, "{}: {orbit:?}", e.name);
                assert_eq!(orbit.rank_with_scaling, e.dim, "{}", e.name);
            }
            Err(err) => {
                assert!(matches!(err, Error::UnimplementedEntry(_)), "{}", e.name);
                assert!(infinitesimal_invariance(&e, 1, &mut rng).is_err());
            }
        }
    }
    assert_eq!(implemented, 10);
}

#[test]
fn regularity_examples() {
    let h = parse_poly("x1^2*x2", 2).unwrap();
    let r = regularity_check(&h, &[Surd::from(1), Surd::from(1)]).unwrap();
    assert_eq!(r.hessian_det, -4.0);
    assert!(r.regular);
    let deg = parse_poly("x1^3", 2).unwrap();
    assert!(!regularity_check(&deg, &[Surd::from(1), Surd::from(1)]).unwrap().regular);
    for e in catalog().into_iter().filter(|e| e.invariant.is_some()) {
        let h = e.invariant().unwrap();
        assert!(regularity_check(h, &e.reference).unwrap().regular, "{}", e.name);
    }
}

fn random_square(n: usize, seed: u64) -> ExactMatrix {
    let mut rng = seeded(seed);
    DMatrix::from_fn(n, n, |_, _| random_rational(&mut rng))
}

#[test]
fn determinants_agree_with_linear_algebra() {
    for s in 0..10 {
        let a = random_square(3, s);
        let coords: Vec<Surd> = (0..9).map(|k| a[(k / 3, k % 3)].clone()).collect();
        let det = pv::det3_poly().eval(&coords).to_f64();
        assert!((det - to_f64_matrix(&a).determinant()).abs() < 1e-9 * (1.0 + det.abs()));
        let sym = &a + a.transpose();
        let sc: Vec<Surd> =
            [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)].iter().map(|&(i, j)| sym[(i, j)].clone()).collect();
        let sdet = pv::det3_sym_poly().eval(&sc).to_f64();
        assert!((sdet - to_f64_matrix(&sym).determinant()).abs() < 1e-9 * (1.0 + sdet.abs()));
    }
}

#[test]
fn pfaffian_squares_to_determinant() {
    for s in 0..5 {
        let a = random_square(6, 100 + s);
        let skew = &a - a.transpose();
        let pf = pfaffian_matchings(&skew);
        let det = to_f64_matrix(&skew).determinant();
        assert!((pf.to_f64().powi(2) - det).abs() < 1e-9 * (1.0 + det.abs()));
        let coords: Vec<Surd> =
            (0..6).flat_map(|i| (i + 1..6).map(move |j| (i, j))).map(|(i, j)| skew[(i, j)].clone()).collect();
        assert_eq!(pfaffian_sum_poly(6).eval(&coords), Surd::from(48) * pf);
    }
}

#[test]
fn lookup_errors() {
    assert!(matches!(entry("no-such-entry"), Err(Error::UnknownEntry(_))));
    assert!(matches!(entry("spinor-7").unwrap().invariant(), Err(Error::UnimplementedEntry(_))));
    assert_eq!(entry("quadric-3-1").unwrap().dim, 4);
    assert_eq!(entry("symplectic-pair-3").unwrap().name, "symplectic-pair-3");
    let q = parse_poly("x1*x2", 2).unwrap();
    assert!(matches!(monomial_structure(&q, &BlockStructure::consecutive(&[1, 1])), Err(Error::Precondition(_))));
}

#[test]
fn reducibility_cases() {
    let case = |s: &str, n: usize, blocks: &[usize]| {
        monomial_structure(&parse_poly(s, n).unwrap(), &BlockStructure::consecutive(blocks)).unwrap()
    };
    assert_eq!(case("x1*x2*x3 - x1^3", 3, &[3]), CubicCase::Irreducible);
    assert!(matches!(case("x1*x2^2 - x1*x3^2", 3, &[1, 2]), CubicCase::LinearTimesQuadric { .. }));
    assert_eq!(case("x1*x2*x3", 3, &[1, 1, 1]), CubicCase::ThreeLines);
    assert!(matches!(case("x1^3 + x1*x2^2", 2, &[1, 1]), CubicCase::Violates(_)));
    assert!(matches!(case("x1*x3^2 + x2*x3^2", 3, &[2, 1]), CubicCase::Violates(_)));
    assert!(matches!(case("x1^3", 2, &[1, 1]), CubicCase::Violates(_)));
}

proptest! {
    #[test]
    fn root_data_ignores_common_scaling(pairs in prop::collection::vec((1u64..6, 1u64..6), 1..4), k in 1u64..5) {
        let a = RootData::from_pairs(&pairs).unwrap();
        let scaled: Vec<(u64, u64)> = pairs.iter().map(|&(p, q)| (p * k, q)).collect();
        prop_assert_eq!(&RootData::from_pairs(&scaled).unwrap(), &a);
        prop_assert_eq!(a.mu_sq()[0], Ratio::from_integer(1));
        let (e, _, d) = invariant_exponents(&a);
        prop_assert_eq!(e.iter().sum::<u64>(), d);
        let target = Ratio::from_integer(e[0]) * a.mu_sq()[0];
        for (x, m) in e.iter().zip(a.mu_sq()) {
            prop_assert_eq!(Ratio::from_integer(*x) * m, target);
        }
    }

    #[test]
    fn determinant_is_multiplicative(s in any::<u64>()) {
        let mut rng = seeded(s);
        let a = DMatrix::from_fn(3, 3, |_, _| random_rational(&mut rng));
        let b = DMatrix::from_fn(3, 3, |_, _| if rng.random_bool(0.5) { random_rational(&mut rng) } else { Surd::zero() });
        let coords = |m: &ExactMatrix| (0..9).map(|k| m[(k / 3, k % 3)].clone()).collect::<Vec<_>>();
        let h = pv::det3_poly();
        prop_assert_eq!(h.eval(&coords(&(&a * &b))), h.eval(&coords(&a)) * h.eval(&coords(&b)));
    }
}
