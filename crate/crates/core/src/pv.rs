//! Key-algebra enumeration and checks on prehomogeneous modules of reductive
//! groups: relative invariance, regularity, orbit dimension and the monomial
//! structure of reducible cubics.

use std::fmt;

use nalgebra::DMatrix;
use num_integer::Integer;
use num_rational::Ratio;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{det_exact, exact_identity, exact_zeros, rank_exact, ExactMatrix};
use crate::poly::{BlockStructure, HomoPoly};
use crate::rng::random_f64_point;
use crate::surd::Surd;

/// Squared roots `μ_j²` as reduced fractions, normalized to `μ₁² = 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RootData {
    mu_sq: Vec<Ratio<u64>>,
}

impl RootData {
    /// Sorts the squared roots increasingly and rescales so the first is 1.
    pub fn normalized(mu_sq: &[Ratio<u64>]) -> Result<Self> {
        if mu_sq.is_empty() || mu_sq.iter().any(|r| *r.numer() == 0) {
            return Err(Error::Precondition("squared roots must be positive".into()));
        }
        let mut v = mu_sq.to_vec();
        v.sort();
        let first = v[0];
        Ok(RootData { mu_sq: v.into_iter().map(|r| r / first).collect() })
    }

    pub fn from_pairs(pairs: &[(u64, u64)]) -> Result<Self> {
        if pairs.iter().any(|&(_, q)| q == 0) {
            return Err(Error::Precondition("zero denominator".into()));
        }
        Self::normalized(&pairs.iter().map(|&(p, q)| Ratio::new(p, q)).collect::<Vec<_>>())
    }

    pub fn rank(&self) -> usize {
        self.mu_sq.len()
    }

    pub fn mu_sq(&self) -> &[Ratio<u64>] {
        &self.mu_sq
    }
}

impl fmt::Display for RootData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.mu_sq.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Exponents `e_j = q_j Π_{k≠j} p_k / N` of the lowest-degree invariant
/// `Π a_j^{e_j}`, together with `N` and the degree.
pub fn invariant_exponents(r: &RootData) -> (Vec<u64>, u64, u64) {
    let raw: Vec<u64> = (0..r.rank())
        .map(|j| {
            let others: u64 = (0..r.rank()).filter(|&k| k != j).map(|k| *r.mu_sq[k].numer()).product();
            r.mu_sq[j].denom() * others
        })
        .collect();
    let n = raw.iter().fold(0u64, |g, &x| g.gcd(&x));
    let e: Vec<u64> = raw.iter().map(|x| x / n).collect();
    let d = e.iter().sum();
    (e, n, d)
}

/// The invariant monomial for the given roots, in variables `a_1..a_l`.
pub fn invariant_monomial(r: &RootData) -> HomoPoly {
    let (e, _, _) = invariant_exponents(r);
    HomoPoly::monomial(e.iter().map(|&x| x as u32).collect(), Surd::from(1))
}

/// One row of the key-algebra table.
#[derive(Clone, Debug, Serialize)]
pub struct KeyRow {
    pub degree: u64,
    pub rank: usize,
    pub mu_sq: Vec<String>,
    pub exponents: Vec<u64>,
    pub polynomial: String,
}

/// Monomial `Π a_j^{e_j}` written in the variables `a_j`.
pub fn monomial_label(e: &[u64]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &x)| x > 0)
        .map(|(j, &x)| if x == 1 { format!("a{}", j + 1) } else { format!("a{}^{}", j + 1, x) })
        .collect();
    parts.join("*")
}

/// Sums of key algebras whose invariant has degree `2 ≤ d ≤ d_max`, over
/// squared roots `p/q ≥ 1` with `p, q ≤ d_max`, normalized to `μ₁² = 1`.
pub fn enumerate_key_solutions(d_max: u64) -> Vec<KeyRow> {
    let mut fracs: Vec<Ratio<u64>> = Vec::new();
    for p in 1..=d_max {
        for q in 1..=p {
            let r = Ratio::new(p, q);
            if !fracs.contains(&r) {
                fracs.push(r);
            }
        }
    }
    fracs.sort();
    let mut rows = Vec::new();
    for l in 2..=d_max as usize {
        let mut idx = vec![0usize; l - 1];
        loop {
            let mut mu = vec![Ratio::from_integer(1)];
            mu.extend(idx.iter().map(|&i| fracs[i]));
            let r = RootData { mu_sq: mu };
            let (e, _, d) = invariant_exponents(&r);
            if d <= d_max {
                rows.push(KeyRow {
                    degree: d,
                    rank: l,
                    mu_sq: r.mu_sq.iter().map(|x| x.to_string()).collect(),
                    polynomial: monomial_label(&e),
                    exponents: e,
                });
            }
            // next nondecreasing index tuple
            let Some(k) = (0..idx.len()).rev().find(|&k| idx[k] + 1 < fracs.len()) else { break };
            idx[k] += 1;
            for t in k + 1..idx.len() {
                idx[t] = idx[k];
            }
        }
    }
    rows.sort_by_key(|a| (a.degree, a.rank));
    rows
}

/// A module `V` of a reductive Lie algebra `𝔤` with its relative invariant.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub module: String,
    pub group: String,
    pub isotropy: String,
    pub dim: usize,
    pub degree: u32,
    /// `None` for entries kept as metadata only.
    pub invariant: Option<HomoPoly>,
    /// `ρ(X)` for a basis of `𝔤`; all traceless, so the character vanishes.
    pub action: Vec<ExactMatrix>,
    pub reference: Vec<Surd>,
}

impl CatalogEntry {
    pub fn invariant(&self) -> Result<&HomoPoly> {
        self.invariant.as_ref().ok_or_else(|| Error::UnimplementedEntry(self.name.clone()))
    }

    fn metadata(name: &str, module: &str, group: &str, isotropy: &str, dim: usize, degree: u32) -> Self {
        CatalogEntry {
            name: name.into(),
            module: module.into(),
            group: group.into(),
            isotropy: isotropy.into(),
            dim,
            degree,
            invariant: None,
            action: Vec::new(),
            reference: Vec::new(),
        }
    }
}

fn unit(n: usize, i: usize, j: usize) -> ExactMatrix {
    let mut m = exact_zeros(n, n);
    m[(i, j)] = Surd::from(1);
    m
}

/// A basis of `𝔰𝔩(n)`: `E_ij` (`i ≠ j`) and `E_ii − E_{i+1,i+1}`.
pub fn sl_basis(n: usize) -> Vec<ExactMatrix> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(unit(n, i, j));
            }
        }
    }
    for i in 0..n.saturating_sub(1) {
        out.push(unit(n, i, i) - unit(n, i + 1, i + 1));
    }
    out
}

/// A basis of `𝔰𝔭(2n)` for `J = [[0, 1], [−1, 0]]`: `X = −J S` with `S` symmetric.
pub fn sp_basis(n: usize) -> Vec<ExactMatrix> {
    let j = symplectic_j(n);
    let m = 2 * n;
    let mut out = Vec::new();
    for a in 0..m {
        for b in a..m {
            let mut s = unit(m, a, b);
            if a != b {
                s[(b, a)] = Surd::from(1);
            }
            out.push(-(&j * s));
        }
    }
    out
}

/// A basis of `𝔰𝔬(k, l)` for `η = diag(1ᵏ, −1ˡ)`.
pub fn so_basis(k: usize, l: usize) -> Vec<ExactMatrix> {
    let n = k + l;
    let eta = |i: usize| if i < k { 1 } else { -1 };
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut m = exact_zeros(n, n);
            m[(i, j)] = Surd::from(eta(j));
            m[(j, i)] = Surd::from(-eta(i));
            out.push(m);
        }
    }
    out
}

pub fn symplectic_j(n: usize) -> ExactMatrix {
    let mut j = exact_zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = Surd::from(1);
        j[(n + i, i)] = Surd::from(-1);
    }
    j
}

/// Matrix of the linear map `v ↦ f(v)` on `ℝᵐ`, given on basis vectors.
fn linear_map(m: usize, f: impl Fn(&[Surd]) -> Vec<Surd>) -> ExactMatrix {
    let mut out = exact_zeros(m, m);
    for c in 0..m {
        let mut e = vec![Surd::zero(); m];
        e[c] = Surd::from(1);
        for (r, v) in f(&e).into_iter().enumerate() {
            out[(r, c)] = v;
        }
    }
    out
}

fn to_square(v: &[Surd], n: usize) -> ExactMatrix {
    DMatrix::from_fn(n, n, |i, j| v[i * n + j].clone())
}

fn from_square(m: &ExactMatrix) -> Vec<Surd> {
    let n = m.nrows();
    (0..n * n).map(|k| m[(k / n, k % n)].clone()).collect()
}

/// Coordinates of `Sym²ℝ³`: `(s11, s12, s13, s22, s23, s33)`.
const SYM3: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

fn sym_to_matrix(v: &[Surd]) -> ExactMatrix {
    let mut m = exact_zeros(3, 3);
    for (k, &(i, j)) in SYM3.iter().enumerate() {
        m[(i, j)] = v[k].clone();
        m[(j, i)] = v[k].clone();
    }
    m
}

/// Index pairs `i < j` of `Λ²ℝⁿ` in lexicographic order.
fn skew_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

fn skew_to_matrix(v: &[Surd], n: usize) -> ExactMatrix {
    let mut m = exact_zeros(n, n);
    for (k, (i, j)) in skew_pairs(n).into_iter().enumerate() {
        m[(i, j)] = v[k].clone();
        m[(j, i)] = -v[k].clone();
    }
    m
}

fn matrix_to_skew(m: &ExactMatrix) -> Vec<Surd> {
    skew_pairs(m.nrows()).into_iter().map(|(i, j)| m[(i, j)].clone()).collect()
}

/// `det` of a generic `3×3` matrix in row-major coordinates.
pub fn det3_poly() -> HomoPoly {
    let var = |i: usize, j: usize| HomoPoly::variable(9, 3 * i + j);
    let mut h = HomoPoly::zero(9, 3);
    for (p, s) in [([0, 1, 2], 1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([0, 2, 1], -1), ([2, 1, 0], -1), ([1, 0, 2], -1)] {
        let t = var(0, p[0]).mul(&var(1, p[1])).mul(&var(2, p[2])).scale(&Surd::from(s));
        h = h.add(&t).expect("cubic");
    }
    h
}

/// `det` of a symmetric `3×3` matrix in the coordinates of `Sym²ℝ³`.
pub fn det3_sym_poly() -> HomoPoly {
    let dense: Vec<usize> = (0..9)
        .map(|k| {
            let (i, j) = (k / 3, k % 3);
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            SYM3.iter().position(|&p| p == (a, b)).unwrap()
        })
        .collect();
    let images: Vec<HomoPoly> = dense.iter().map(|&k| HomoPoly::variable(6, k)).collect();
    det3_poly().substitute(&images)
}

/// The unnormalized sum `Σ_{σ∈S_{2m}} sgn σ a_{σ1σ2} ⋯ a_{σ(2m−1)σ(2m)}` on `Λ²ℝ^{2m}`.
pub fn pfaffian_sum_poly(size: usize) -> HomoPoly {
    assert!(size.is_multiple_of(2));
    let pairs = skew_pairs(size);
    let nv = pairs.len();
    let coord = |i: usize, j: usize| -> (usize, i64) {
        if i < j {
            (pairs.iter().position(|&p| p == (i, j)).unwrap(), 1)
        } else {
            (pairs.iter().position(|&p| p == (j, i)).unwrap(), -1)
        }
    };
    let mut h = HomoPoly::zero(nv, (size / 2) as u32);
    let mut perm: Vec<usize> = (0..size).collect();
    let mut sign = 1i64;
    heap_permutations(&mut perm, size, &mut sign, &mut |p, s| {
        if p.chunks(2).any(|c| c[0] == c[1]) {
            return;
        }
        let mut term = HomoPoly::constant(nv, Surd::from(s));
        for c in p.chunks(2) {
            let (k, sg) = coord(c[0], c[1]);
            term = term.mul(&HomoPoly::variable(nv, k).scale(&Surd::from(sg)));
        }
        h = h.add(&term).expect("same degree");
    });
    h
}

/// Heap's algorithm, tracking the sign of each permutation.
fn heap_permutations(p: &mut Vec<usize>, k: usize, sign: &mut i64, f: &mut impl FnMut(&[usize], i64)) {
    if k <= 1 {
        f(p, *sign);
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(p, k - 1, sign, f);
        if k.is_multiple_of(2) {
            p.swap(i, k - 1);
        } else {
            p.swap(0, k - 1);
        }
        *sign = -*sign;
    }
    heap_permutations(p, k - 1, sign, f);
}

/// Pfaffian by expansion over perfect matchings.
pub fn pfaffian_matchings(a: &ExactMatrix) -> Surd {
    let idx: Vec<usize> = (0..a.nrows()).collect();
    pf_rec(a, &idx)
}

fn pf_rec(a: &ExactMatrix, idx: &[usize]) -> Surd {
    if idx.is_empty() {
        return Surd::from(1);
    }
    let mut total = Surd::zero();
    for k in 1..idx.len() {
        if a[(idx[0], idx[k])].is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().enumerate().filter(|&(t, _)| t + 1 != k).map(|(_, &v)| v).collect();
        let sign = if k % 2 == 1 { Surd::from(1) } else { Surd::from(-1) };
        total += sign * &a[(idx[0], idx[k])] * pf_rec(a, &rest);
    }
    total
}

/// `q(A) = Pff(AᵗJA)` on `2n×2` matrices (row-major), where for a `2×2`
/// skew matrix the Pfaffian is its `(1,2)` entry.
pub fn symplectic_pair_poly(n: usize) -> HomoPoly {
    let m = 4 * n;
    let j = symplectic_j(n);
    let mut h = HomoPoly::zero(m, 2);
    for r in 0..2 * n {
        for s in 0..2 * n {
            if j[(r, s)].is_zero() {
                continue;
            }
            // (AᵗJA)_{12} = Σ A_{r1} J_{rs} A_{s2}
            let t = HomoPoly::variable(m, 2 * r).mul(&HomoPoly::variable(m, 2 * s + 1)).scale(&j[(r, s)]);
            h = h.add(&t).expect("quadratic");
        }
    }
    h
}

pub fn quadric_poly(k: usize, l: usize) -> HomoPoly {
    crate::hypersurface::pseudo_euclidean_quadric(k, l)
}

/// `det` on `3×3` matrices under `SL(3)×SL(3)`, `M ↦ A M Bᵗ`.
pub fn det3_matrices() -> CatalogEntry {
    let mut action = Vec::new();
    for x in sl_basis(3) {
        action.push(linear_map(9, |v| from_square(&(&x * to_square(v, 3)))));
    }
    for x in sl_basis(3) {
        action.push(linear_map(9, |v| from_square(&(to_square(v, 3) * x.transpose()))));
    }
    CatalogEntry {
        name: "det3-mat".into(),
        module: "R^3 (x) R^3".into(),
        group: "SL(3,R) x SL(3,R)".into(),
        isotropy: "SL(3,R)".into(),
        dim: 9,
        degree: 3,
        invariant: Some(det3_poly()),
        action,
        reference: from_square(&exact_identity(3)),
    }
}

/// `det` on `Sym²ℝ³` under `SL(3)`, `S ↦ XS + SXᵗ`.
pub fn det3_symmetric() -> CatalogEntry {
    let action = sl_basis(3)
        .into_iter()
        .map(|x| {
            linear_map(6, |v| {
                let s = sym_to_matrix(v);
                let img = &x * &s + &s * x.transpose();
                SYM3.iter().map(|&(i, j)| img[(i, j)].clone()).collect()
            })
        })
        .collect();
    CatalogEntry {
        name: "det3-sym".into(),
        module: "Sym^2 R^3".into(),
        group: "SL(3,R)".into(),
        isotropy: "SO(3)".into(),
        dim: 6,
        degree: 3,
        invariant: Some(det3_sym_poly()),
        action,
        reference: SYM3.iter().map(|&(i, j)| if i == j { Surd::from(1) } else { Surd::zero() }).collect(),
    }
}

/// The Pfaffian sum on `Λ²ℝ⁶` under `SL(6)`, `A ↦ XA + AXᵗ`.
pub fn pfaffian6() -> CatalogEntry {
    let action = sl_basis(6)
        .into_iter()
        .map(|x| {
            linear_map(15, |v| {
                let a = skew_to_matrix(v, 6);
                matrix_to_skew(&(&x * &a + &a * x.transpose()))
            })
        })
        .collect();
    CatalogEntry {
        name: "pfaffian-6".into(),
        module: "Lambda^2 R^6".into(),
        group: "SL(6,R)".into(),
        isotropy: "Sp(3,R)".into(),
        dim: 15,
        degree: 3,
        invariant: Some(pfaffian_sum_poly(6)),
        action,
        reference: matrix_to_skew(&symplectic_j(3)),
    }
}

/// `q_{k,l}` on `ℝ^{k,l}` under `SO(k,l)`, reference point `e₁`.
pub fn quadric(k: usize, l: usize) -> Result<CatalogEntry> {
    if k == 0 || k + l < 2 {
        return Err(Error::Precondition("quadric entry needs k >= 1 and k + l >= 2".into()));
    }
    let n = k + l;
    let mut reference = vec![Surd::zero(); n];
    reference[0] = Surd::from(1);
    Ok(CatalogEntry {
        name: format!("quadric-{k}-{l}"),
        module: format!("R^({k},{l})"),
        group: format!("SO({k},{l})"),
        isotropy: format!("SO({},{l})", k - 1),
        dim: n,
        degree: 2,
        invariant: Some(quadric_poly(k, l)),
        action: so_basis(k, l),
        reference,
    })
}

/// `Pff(AᵗJA)` on `2n×2` matrices under `Sp(2n)×SL(2)`, `A ↦ XA + AYᵗ`.
pub fn symplectic_pair(n: usize) -> Result<CatalogEntry> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let rows = 2 * n;
    let to_mat = |v: &[Surd]| DMatrix::from_fn(rows, 2, |i, j| v[2 * i + j].clone());
    let from_mat = |m: &ExactMatrix| (0..2 * rows).map(|k| m[(k / 2, k % 2)].clone()).collect::<Vec<_>>();
    let mut action = Vec::new();
    for x in sp_basis(n) {
        action.push(linear_map(2 * rows, |v| from_mat(&(&x * to_mat(v)))));
    }
    for y in sl_basis(2) {
        action.push(linear_map(2 * rows, |v| from_mat(&(to_mat(v) * y.transpose()))));
    }
    let mut a = exact_zeros(rows, 2);
    a[(0, 0)] = Surd::from(1);
    a[(n, 1)] = Surd::from(1);
    Ok(CatalogEntry {
        name: format!("symplectic-pair-{n}"),
        module: format!("R^{rows} (x) R^2"),
        group: format!("Sp({rows},R) x SL(2,R)"),
        isotropy: format!("Sp({},R) x Sp(2,R)", rows - 2),
        dim: 2 * rows,
        degree: 2,
        invariant: Some(symplectic_pair_poly(n)),
        action,
        reference: from_mat(&a),
    })
}

/// `x₁x₂x₃` on `ℝ³` under the traceless diagonal torus.
pub fn torus3() -> CatalogEntry {
    let diag = |d: [i64; 3]| {
        let mut m = exact_zeros(3, 3);
        for i in 0..3 {
            m[(i, i)] = Surd::from(d[i]);
        }
        m
    };
    CatalogEntry {
        name: "torus-3".into(),
        module: "R + R + R".into(),
        group: "R* x R*".into(),
        isotropy: "finite".into(),
        dim: 3,
        degree: 3,
        invariant: Some(HomoPoly::monomial(vec![1, 1, 1], Surd::from(1))),
        action: vec![diag([1, -1, 0]), diag([0, 1, -1])],
        reference: vec![Surd::from(1); 3],
    }
}

/// Every catalog entry, including the metadata-only ones.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut out = vec![det3_matrices(), det3_symmetric(), pfaffian6()];
    for (k, l) in [(1, 2), (2, 1), (2, 2), (1, 3)] {
        out.push(quadric(k, l).expect("valid"));
    }
    out.push(symplectic_pair(1).expect("valid"));
    out.push(symplectic_pair(2).expect("valid"));
    out.push(torus3());
    out.push(CatalogEntry::metadata("det-herm3-octonions", "Herm_3(O)", "E6(-26)", "F4(-52)", 27, 3));
    out.push(CatalogEntry::metadata("det-herm3-split", "Herm_3(split Cayley)", "E6(6)", "F4(4)", 27, 3));
    out.push(CatalogEntry::metadata("pfaffian-quaternionic", "(Lambda^2 H^3)^tau", "SL(3,H)", "Sp(3)", 15, 3));
    out.push(CatalogEntry::metadata("spinor-7", "spinor module", "Spin(7)", "G2", 8, 2));
    out.push(CatalogEntry::metadata("spinor-9", "spinor module", "Spin(9)", "Spin(7)", 16, 2));
    out.push(CatalogEntry::metadata("g2-imaginary-octonions", "Im O", "G2", "SU(3)", 7, 2));
    out
}

/// Looks up an entry by name; `quadric-K-L` and `symplectic-pair-N` accept
/// any parameters.
pub fn entry(name: &str) -> Result<CatalogEntry> {
    if let Some(rest) = name.strip_prefix("quadric-") {
        let parts: Vec<&str> = rest.split('-').collect();
        if let [k, l] = parts.as_slice() {
            if let (Ok(k), Ok(l)) = (k.parse(), l.parse()) {
                return quadric(k, l);
            }
        }
    }
    if let Some(rest) = name.strip_prefix("symplectic-pair-") {
        if let Ok(n) = rest.parse() {
            return symplectic_pair(n);
        }
    }
    catalog().into_iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownEntry(name.into()))
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceResult {
    /// Largest `|dh_v(ρ(X)v) − χ(X)h(v)|` over generators and samples.
    pub max_residual: f64,
    /// Whether every `dh(ρ(X)·)` vanishes as a polynomial.
    pub symbolic_zero: bool,
    /// Euler residual `dh_v(v) − d·h(v)`, exact polynomial check.
    pub euler_exact: bool,
}

/// Relative invariance under `𝔤` (character 0) and the scaling generator
/// (character `deg h`), at `samples` random points.
pub fn infinitesimal_invariance<R: Rng + ?Sized>(
    e: &CatalogEntry,
    samples: usize,
    rng: &mut R,
) -> Result<InvarianceResult> {
    let h = e.invariant()?;
    let lie: Vec<HomoPoly> = e.action.iter().map(|x| h.lie_derivative(x)).collect();
    let symbolic_zero = lie.iter().all(HomoPoly::is_zero);
    let grad = h.gradient_polys();
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let v = random_f64_point(rng, e.dim, -1.0, 1.0);
        let g: Vec<f64> = grad.iter().map(|p| p.eval(&v)).collect();
        for x in &e.action {
            let xf = crate::linalg::to_f64_matrix(x);
            let xv = xf * nalgebra::DVector::from_column_slice(&v);
            let r: f64 = g.iter().zip(xv.iter()).map(|(a, b)| a * b).sum();
            worst = worst.max(r.abs());
        }
    }
    let euler = h.lie_derivative(&exact_identity(e.dim)).sub(&h.scale(&Surd::from(h.degree() as i64)))?;
    Ok(InvarianceResult { max_residual: worst, symbolic_zero, euler_exact: euler.is_zero() })
}

#[derive(Clone, Debug, Serialize)]
pub struct Regularity {
    pub hessian_det: f64,
    pub regular: bool,
}

/// Exact determinant of the full Hessian of `h` at `v`.
pub fn regularity_check(h: &HomoPoly, v: &[Surd]) -> Result<Regularity> {
    if v.len() != h.n() {
        return Err(Error::DimensionMismatch { expected: h.n(), got: v.len() });
    }
    let det = det_exact(&h.hessian(v));
    Ok(Regularity { hessian_det: det.to_f64(), regular: !det.is_zero() })
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitDimension {
    /// `dim span{ρ(X)v}` over `𝔤`.
    pub rank: usize,
    /// The same with the scaling generator added.
    pub rank_with_scaling: usize,
    pub dim: usize,
    /// `rank ≥ dim V − 1`.
    pub hypersurface_transitive: bool,
}

pub fn orbit_dimension(e: &CatalogEntry, v: &[Surd]) -> Result<OrbitDimension> {
    if v.len() != e.dim {
        return Err(Error::DimensionMismatch { expected: e.dim, got: v.len() });
    }
    let vv = nalgebra::DVector::from_column_slice(v);
    let cols: Vec<_> = e.action.iter().map(|x| x * &vv).collect();
    let m = DMatrix::from_fn(e.dim, cols.len().max(1), |r, c| cols.get(c).map_or(Surd::zero(), |v| v[r].clone()));
    let rank = rank_exact(&m);
    let mut with = m.clone().insert_column(m.ncols(), Surd::zero());
    let last = with.ncols() - 1;
    for r in 0..e.dim {
        with[(r, last)] = v[r].clone();
    }
    let rank_with_scaling = rank_exact(&with);
    Ok(OrbitDimension { rank, rank_with_scaling, dim: e.dim, hypersurface_transitive: rank + 1 >= e.dim })
}

/// Which of the three reducibility cases a cubic falls into.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CubicCase {
    /// `h` lives on a single block.
    Irreducible,
    /// `h = l·q` with `l` linear on a one-dimensional block.
    LinearTimesQuadric {
        degrees: Vec<u32>,
    },
    /// `h` is a product of three linear forms on one-dimensional blocks.
    ThreeLines,
    Violates(String),
}

impl fmt::Display for CubicCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CubicCase::Irreducible => write!(f, "case (1): irreducible"),
            CubicCase::LinearTimesQuadric { degrees } => write!(f, "case (2): linear x quadric, degrees {degrees:?}"),
            CubicCase::ThreeLines => write!(f, "case (3): three lines"),
            CubicCase::Violates(why) => write!(f, "violates the three-case constraints: {why}"),
        }
    }
}

/// Classifies a cubic by its multidegree with respect to `blocks`.
pub fn monomial_structure(h: &HomoPoly, blocks: &BlockStructure) -> Result<CubicCase> {
    if h.degree() != 3 {
        return Err(Error::Precondition("monomial structure needs a cubic".into()));
    }
    let parts = h.multidegree_split(blocks)?;
    if parts.len() != 1 {
        return Ok(CubicCase::Violates(format!("{} distinct multidegrees", parts.len())));
    }
    let md = parts.keys().next().expect("one part").clone();
    if let Some(k) = md.iter().position(|&x| x == 0) {
        return Ok(CubicCase::Violates(format!("block {} has degree 0", blocks.blocks()[k].0)));
    }
    let sizes: Vec<usize> = blocks.blocks().iter().map(|(_, idx)| idx.len()).collect();
    match md.len() {
        1 => Ok(CubicCase::Irreducible),
        2 => {
            let lin = md.iter().position(|&x| x == 1).expect("degrees 1 and 2");
            if sizes[lin] == 1 {
                Ok(CubicCase::LinearTimesQuadric { degrees: md })
            } else {
                Ok(CubicCase::Violates("linear factor on a block of dimension > 1".into()))
            }
        }
        3 if sizes.iter().all(|&s| s == 1) => Ok(CubicCase::ThreeLines),
        3 => Ok(CubicCase::Violates("three blocks must be one-dimensional".into())),
        _ => Ok(CubicCase::Violates(format!("{} blocks", md.len()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents_from_roots() {
        let r = RootData::from_pairs(&[(1, 1), (3, 1)]).unwrap();
        assert_eq!(invariant_exponents(&r), (vec![3, 1], 1, 4));
        let swapped = RootData::from_pairs(&[(2, 1), (1, 1)]).unwrap();
        assert_eq!(swapped, RootData::from_pairs(&[(1, 1), (2, 1)]).unwrap());
        // μ₂² = 1/2 normalizes to the swapped table entry
        let half = RootData::from_pairs(&[(1, 1), (1, 2)]).unwrap();
        assert_eq!(invariant_exponents(&half).0, vec![2, 1]);
    }

    #[test]
    fn pfaffian_normalization() {
        let j = symplectic_j(3);
        let sum = pfaffian_sum_poly(6).eval(&matrix_to_skew(&j));
        let comb = pfaffian_matchings(&j);
        assert_eq!(comb, Surd::from(-1));
        assert_eq!(sum, Surd::from(48) * comb);
    }

    #[test]
    fn sym_det_matches_closed_form() {
        // a d f + 2 b c e − a e² − d c² − f b² in (a, b, c, d, e, f)
        let want = HomoPoly::parse("x1*x4*x6 + 2*x2*x3*x5 - x1*x5^2 - x4*x3^2 - x6*x2^2", 6).unwrap();
        assert_eq!(det3_sym_poly(), want);
    }

    #[test]
    fn bases_have_expected_sizes() {
        assert_eq!(sl_basis(6).len(), 35);
        assert_eq!(sp_basis(2).len(), 10);
        assert_eq!(so_basis(2, 2).len(), 6);
        let j = symplectic_j(2);
        for x in sp_basis(2) {
            assert_eq!(x.transpose() * &j + &j * &x, exact_zeros(4, 4));
        }
    }
}
