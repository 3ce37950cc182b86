//! Metric Lie algebras with a complex structure, the type-I normal
//! J-algebras built from elementary Kählerian pieces, and their checks.

mod checks;
mod type_one;

pub use checks::{
    forbidden_extension, invariance_check, orbit_rank, pullback_metric_check, ForbiddenExtension, InvarianceReport,
    PullbackReport,
};
pub use type_one::{
    build_elementary, build_u0_rank2, build_u0_rank2_signed, build_u0_rank3, type_one, Block, IsometricMap,
    NormalJAlgebra, TypeISpec, TypeIStructure,
};

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::linalg::{self, exact_zeros, rank_exact, ExactMatrix, ExactVector};
use crate::surd::Surd;

/// A real Lie algebra with a (possibly indefinite) scalar product and an
/// endomorphism `J`, all given on a fixed basis.
#[derive(Clone, Debug)]
pub struct MetricLieAlgebra {
    labels: Vec<String>,
    // c[i][j] = [e_i, e_j] as a sparse coordinate vector
    c: Vec<Vec<BTreeMap<usize, Surd>>>,
    gram: ExactMatrix,
    j: ExactMatrix,
}

impl MetricLieAlgebra {
    /// An abelian algebra with the given scalar product and `J`.
    pub fn new(labels: Vec<String>, gram: ExactMatrix, j: ExactMatrix) -> Self {
        let n = labels.len();
        assert_eq!(gram.shape(), (n, n));
        assert_eq!(j.shape(), (n, n));
        MetricLieAlgebra { labels, c: vec![vec![BTreeMap::new(); n]; n], gram, j }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram(&self) -> &ExactMatrix {
        &self.gram
    }

    pub fn j(&self) -> &ExactMatrix {
        &self.j
    }

    /// Adds `v·e_k` to `[e_i, e_j]` (and `−v·e_k` to `[e_j, e_i]`).
    pub fn add_bracket(&mut self, i: usize, j: usize, k: usize, v: &Surd) {
        if v.is_zero() {
            return;
        }
        assert!(i != j, "[e_i, e_i] is zero");
        Self::accumulate(&mut self.c[i][j], k, v.clone());
        Self::accumulate(&mut self.c[j][i], k, -v.clone());
    }

    fn accumulate(map: &mut BTreeMap<usize, Surd>, k: usize, v: Surd) {
        let e = map.entry(k).or_insert_with(Surd::zero);
        *e += v;
        if e.is_zero() {
            map.remove(&k);
        }
    }

    /// Structure constants `c^k_{ij}` as `(k, value)` pairs.
    pub fn bracket_terms(&self, i: usize, j: usize) -> impl Iterator<Item = (usize, &Surd)> {
        self.c[i][j].iter().map(|(k, v)| (*k, v))
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> ExactVector {
        let mut v = ExactVector::from_element(self.dim(), Surd::zero());
        for (k, c) in &self.c[i][j] {
            v[*k] = c.clone();
        }
        v
    }

    pub fn bracket(&self, x: &ExactVector, y: &ExactVector) -> ExactVector {
        let n = self.dim();
        let mut out = ExactVector::from_element(n, Surd::zero());
        for i in (0..n).filter(|&i| !x[i].is_zero()) {
            for j in (0..n).filter(|&j| !y[j].is_zero()) {
                if self.c[i][j].is_empty() {
                    continue;
                }
                let f = &x[i] * &y[j];
                for (k, c) in &self.c[i][j] {
                    out[*k] += &f * c;
                }
            }
        }
        out
    }

    /// Matrix of `ad_{e_i}`.
    pub fn ad(&self, i: usize) -> ExactMatrix {
        let n = self.dim();
        let mut m = exact_zeros(n, n);
        for j in 0..n {
            for (k, c) in &self.c[i][j] {
                m[(*k, j)] = c.clone();
            }
        }
        m
    }

    /// Matrix of `ad_x`.
    pub fn ad_vec(&self, x: &ExactVector) -> ExactMatrix {
        let n = self.dim();
        let mut m = exact_zeros(n, n);
        for i in (0..n).filter(|&i| !x[i].is_zero()) {
            for j in 0..n {
                for (k, c) in &self.c[i][j] {
                    m[(*k, j)] += &x[i] * c;
                }
            }
        }
        m
    }

    pub fn inner(&self, x: &ExactVector, y: &ExactVector) -> Surd {
        (x.transpose() * &self.gram * y)[(0, 0)].clone()
    }

    pub fn basis_vector(&self, i: usize) -> ExactVector {
        let mut v = ExactVector::from_element(self.dim(), Surd::zero());
        v[i] = Surd::from(1);
        v
    }

    /// Triples `i < j < k` violating the Jacobi identity.
    pub fn jacobi_failures(&self) -> Vec<(usize, usize, usize)> {
        let n = self.dim();
        let mut bad = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut acc: BTreeMap<usize, Surd> = BTreeMap::new();
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for (m, v) in &self.c[b][c] {
                            for (t, w) in &self.c[a][*m] {
                                Self::accumulate(&mut acc, *t, v * w);
                            }
                        }
                    }
                    if !acc.is_empty() {
                        bad.push((i, j, k));
                    }
                }
            }
        }
        bad
    }

    /// Dimensions of the derived series, ending at 0 or where it stabilizes.
    pub fn derived_series(&self) -> Vec<usize> {
        let n = self.dim();
        let mut basis: Vec<ExactVector> = (0..n).map(|i| self.basis_vector(i)).collect();
        let mut dims = vec![n];
        loop {
            let mut rows = Vec::new();
            for a in 0..basis.len() {
                for b in a + 1..basis.len() {
                    let v = self.bracket(&basis[a], &basis[b]);
                    if v.iter().any(|x| !x.is_zero()) {
                        rows.push(v);
                    }
                }
            }
            let next = span_basis(&rows, n);
            let dim = next.len();
            if dim == *dims.last().unwrap() {
                break;
            }
            dims.push(dim);
            if dim == 0 {
                break;
            }
            basis = next;
        }
        dims
    }

    /// A 1-form `ω` with `ω([e_i, e_j]) = −⟨e_i, J e_j⟩` for all pairs, if one exists.
    pub fn kahler_primitive(&self) -> Option<ExactVector> {
        let n = self.dim();
        let gj = &self.gram * &self.j;
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let mut a = exact_zeros(pairs.len(), n);
        let mut b = ExactVector::from_element(pairs.len(), Surd::zero());
        for (r, &(i, j)) in pairs.iter().enumerate() {
            for (k, c) in &self.c[i][j] {
                a[(r, *k)] = c.clone();
            }
            b[r] = -gj[(i, j)].clone();
        }
        linalg::solve_exact(&a, &b)
    }

    /// Largest entry of `⟨(∇_{e_a} J) e_b, e_z⟩` with `∇` the Levi-Civita
    /// connection of the left-invariant metric from the Koszul formula.
    #[allow(clippy::needless_range_loop)]
    pub fn nabla_j_residual(&self) -> Surd {
        let n = self.dim();
        let nabla = self.koszul();
        // J as a column map e_b ↦ Σ J_cb e_c
        let jcols: Vec<Vec<(usize, Surd)>> = (0..n)
            .map(|b| (0..n).filter(|&c| !self.j[(c, b)].is_zero()).map(|c| (c, self.j[(c, b)].clone())).collect())
            .collect();
        let mut worst = Surd::zero();
        for a in 0..n {
            for b in 0..n {
                for z in 0..n {
                    let mut r = Surd::zero();
                    for (c, v) in &jcols[b] {
                        r += v * &nabla[a][*c][z];
                    }
                    for (w, v) in &jcols[z] {
                        r += v * &nabla[a][b][*w];
                    }
                    let r = r.abs();
                    if r > worst {
                        worst = r;
                    }
                }
            }
        }
        worst
    }

    /// Lowered connection `N[a][b][z] = ⟨∇_{e_a} e_b, e_z⟩` from
    /// `2⟨∇_X Y, Z⟩ = ⟨[X,Y],Z⟩ − ⟨[Y,Z],X⟩ + ⟨[Z,X],Y⟩`.
    #[allow(clippy::needless_range_loop)]
    pub fn koszul(&self) -> Vec<Vec<Vec<Surd>>> {
        let n = self.dim();
        let half = Surd::ratio(1, 2);
        let mut nabla = vec![vec![vec![Surd::zero(); n]; n]; n];
        for x in 0..n {
            for y in 0..n {
                for (k, c) in &self.c[x][y] {
                    for w in (0..n).filter(|&w| !self.gram[(*k, w)].is_zero()) {
                        // ⟨[e_x, e_y], e_w⟩ contribution
                        let v = &(c * &self.gram[(*k, w)]) * &half;
                        nabla[x][y][w] += &v;
                        nabla[w][x][y] -= &v;
                        nabla[y][w][x] += &v;
                    }
                }
            }
        }
        nabla
    }

    /// Complement of `[𝔩, 𝔩]` spanned by basis vectors, chosen greedily.
    fn derived_complement(&self) -> Vec<usize> {
        let n = self.dim();
        let mut rows = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if !self.c[i][j].is_empty() {
                    rows.push(self.bracket_basis(i, j));
                }
            }
        }
        let mut span = span_basis(&rows, n);
        let mut out = Vec::new();
        for i in 0..n {
            let mut trial = span.clone();
            trial.push(self.basis_vector(i));
            if rank_of(&trial, n) > span.len() {
                span.push(self.basis_vector(i));
                out.push(i);
            }
        }
        out
    }

    /// Largest imaginary part of an `ad`-eigenvalue (0 means real spectrum).
    ///
    /// For a solvable algebra the `ad`-eigenvalues vanish on `[𝔩, 𝔩]`, so it
    /// suffices to look at a complement. Triangular `ad` matrices are read off
    /// exactly; anything else goes through a float eigen solver. Non-solvable
    /// algebras are checked on every basis vector.
    pub fn max_imaginary_eigenvalue(&self) -> f64 {
        let mut worst = 0.0f64;
        let candidates = if *self.derived_series().last().unwrap() == 0 {
            self.derived_complement()
        } else {
            (0..self.dim()).collect()
        };
        for i in candidates {
            let m = self.ad(i);
            if is_triangular(&m) {
                continue;
            }
            let f = linalg::to_f64_matrix(&m);
            for e in f.complex_eigenvalues().iter() {
                worst = worst.max(e.im.abs());
            }
        }
        worst
    }

    pub fn verify(&self) -> AlgebraReport {
        let n = self.dim();
        let jacobi_failures = self.jacobi_failures().len();
        let jj = &self.j * &self.j;
        let j_square = (0..n).all(|a| {
            (0..n).all(|b| {
                let want = if a == b { Surd::from(-1) } else { Surd::zero() };
                jj[(a, b)] == want
            })
        });
        let j_orthogonal = self.j.transpose() * &self.gram * &self.j == self.gram;
        let derived = self.derived_series();
        let solvable = *derived.last().unwrap() == 0;
        let omega = self.kahler_primitive();
        let nabla = self.nabla_j_residual();
        let imag = self.max_imaginary_eigenvalue();
        AlgebraReport {
            dim: n,
            jacobi_failures,
            j_square,
            j_orthogonal,
            derived_series: derived,
            solvable,
            kahler_primitive: omega.is_some(),
            nabla_j_residual: nabla.to_f64(),
            nabla_j_exact_zero: nabla.is_zero(),
            max_imaginary_eigenvalue: imag,
        }
    }
}

/// Tolerance for the float fallback of the real-spectrum check.
pub const SPECTRUM_TOL: f64 = 1e-6;

/// Outcome of [`MetricLieAlgebra::verify`].
#[derive(Clone, Debug, Serialize)]
pub struct AlgebraReport {
    pub dim: usize,
    pub jacobi_failures: usize,
    pub j_square: bool,
    pub j_orthogonal: bool,
    pub derived_series: Vec<usize>,
    pub solvable: bool,
    pub kahler_primitive: bool,
    pub nabla_j_residual: f64,
    pub nabla_j_exact_zero: bool,
    pub max_imaginary_eigenvalue: f64,
}

impl AlgebraReport {
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.jacobi_failures > 0 {
            out.push("jacobi");
        }
        if !self.j_square {
            out.push("j-square");
        }
        if !self.j_orthogonal {
            out.push("j-orthogonal");
        }
        if !self.solvable {
            out.push("solvable");
        }
        if !self.kahler_primitive {
            out.push("not-normal");
        }
        if !self.nabla_j_exact_zero {
            out.push("nabla-j");
        }
        if self.max_imaginary_eigenvalue > SPECTRUM_TOL {
            out.push("real-spectrum");
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

fn is_triangular(m: &ExactMatrix) -> bool {
    let n = m.nrows();
    let upper = (0..n).all(|i| (0..i).all(|j| m[(i, j)].is_zero()));
    let lower = (0..n).all(|i| (i + 1..n).all(|j| m[(i, j)].is_zero()));
    upper || lower
}

fn rows_matrix(rows: &[ExactVector], n: usize) -> ExactMatrix {
    DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j].clone())
}

fn rank_of(rows: &[ExactVector], n: usize) -> usize {
    if rows.is_empty() {
        return 0;
    }
    rank_exact(&rows_matrix(rows, n))
}

/// A basis (rows of the reduced echelon form) of the span of `rows`.
fn span_basis(rows: &[ExactVector], n: usize) -> Vec<ExactVector> {
    if rows.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = linalg::rref(&rows_matrix(rows, n));
    (0..pivots.len()).map(|i| r.row(i).transpose()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::exact_identity;

    fn key(mu: Surd) -> MetricLieAlgebra {
        let mut j = exact_zeros(2, 2);
        j[(1, 0)] = Surd::from(1);
        j[(0, 1)] = Surd::from(-1);
        let mut l = MetricLieAlgebra::new(vec!["H".into(), "G".into()], exact_identity(2), j);
        l.add_bracket(0, 1, 1, &mu);
        l
    }

    #[test]
    fn abelian_is_flat() {
        let mut j = exact_zeros(2, 2);
        j[(1, 0)] = Surd::from(1);
        j[(0, 1)] = Surd::from(-1);
        let l = MetricLieAlgebra::new(vec!["a".into(), "b".into()], exact_identity(2), j);
        let nabla = l.koszul();
        assert!(nabla.iter().flatten().flatten().all(|v| v.is_zero()));
        assert!(l.nabla_j_residual().is_zero());
    }

    #[test]
    fn key_algebra_connection() {
        let mu = Surd::sqrt(2);
        let l = key(mu.clone());
        let nabla = l.koszul();
        // ∇_G G = μ H
        assert_eq!(nabla[1][1][0], mu);
        assert!(nabla[1][1][1].is_zero());
        let r = l.verify();
        assert!(r.passed(), "{:?}", r.failures());
        assert_eq!(r.derived_series, vec![2, 1, 0]);
    }

    #[test]
    fn non_solvable_detected() {
        // so(3) with e_i × e_j
        let mut l =
            MetricLieAlgebra::new(vec!["e1".into(), "e2".into(), "e3".into()], exact_identity(3), exact_identity(3));
        l.add_bracket(0, 1, 2, &Surd::from(1));
        l.add_bracket(1, 2, 0, &Surd::from(1));
        l.add_bracket(2, 0, 1, &Surd::from(1));
        let r = l.verify();
        assert_eq!(r.jacobi_failures, 0);
        assert!(!r.solvable && !r.j_square);
        assert!(r.max_imaginary_eigenvalue > 0.5);
    }

    #[test]
    fn broken_jacobi_detected() {
        let mut l =
            MetricLieAlgebra::new(vec!["a".into(), "b".into(), "c".into()], exact_identity(3), exact_identity(3));
        l.add_bracket(0, 1, 2, &Surd::from(1));
        l.add_bracket(0, 2, 0, &Surd::from(1));
        assert_eq!(l.jacobi_failures(), vec![(0, 1, 2)]);
    }
}
