//! Exact linear algebra over [`Surd`] plus the float counterparts needed by
//! the numerical checks.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::surd::Surd;

/// Counts of positive, negative and zero directions of a symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub null: usize,
}

impl Signature {
    pub fn new(pos: usize, neg: usize, null: usize) -> Self {
        Signature { pos, neg, null }
    }

    pub fn dim(&self) -> usize {
        self.pos + self.neg + self.null
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.null == 0
    }

    pub fn is_definite(&self) -> bool {
        self.null == 0 && (self.pos == 0 || self.neg == 0)
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.pos, self.neg, self.null)
    }
}

pub type ExactMatrix = DMatrix<Surd>;
pub type ExactVector = DVector<Surd>;

pub fn exact_zeros(rows: usize, cols: usize) -> ExactMatrix {
    DMatrix::from_element(rows, cols, Surd::zero())
}

pub fn exact_identity(n: usize) -> ExactMatrix {
    let mut m = exact_zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Surd::from(1);
    }
    m
}

pub fn to_f64_matrix(m: &ExactMatrix) -> DMatrix<f64> {
    m.map(|x| x.to_f64())
}

/// Reduced row echelon form and the pivot columns.
pub fn rref(m: &ExactMatrix) -> (ExactMatrix, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = a[(r, c)].inv().expect("nonzero pivot");
        for j in c..cols {
            a[(r, j)] = &a[(r, j)] * &inv;
        }
        for i in 0..rows {
            if i != r && !a[(i, c)].is_zero() {
                let f = a[(i, c)].clone();
                for j in c..cols {
                    let t = &f * &a[(r, j)];
                    a[(i, j)] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank_exact(m: &ExactMatrix) -> usize {
    rref(m).1.len()
}

/// Basis of the right kernel, one vector per free column in increasing order.
pub fn kernel_exact(m: &ExactMatrix) -> Vec<ExactVector> {
    let (r, pivots) = rref(m);
    let cols = m.ncols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = DVector::from_element(cols, Surd::zero());
            v[f] = Surd::from(1);
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r[(row, f)].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `a x = b`, or `None` if the system is inconsistent.
pub fn solve_exact(a: &ExactMatrix, b: &ExactVector) -> Option<ExactVector> {
    let (rows, cols) = a.shape();
    let mut aug = exact_zeros(rows, cols + 1);
    for i in 0..rows {
        for j in 0..cols {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, cols)] = b[i].clone();
    }
    let (r, pivots) = rref(&aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = DVector::from_element(cols, Surd::zero());
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r[(row, cols)].clone();
    }
    Some(x)
}

pub fn inverse_exact(m: &ExactMatrix) -> Option<ExactMatrix> {
    let n = m.nrows();
    assert_eq!(n, m.ncols());
    let mut aug = exact_zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n + i)] = Surd::from(1);
    }
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.columns(n, n).into_owned())
}

pub fn det_exact(m: &ExactMatrix) -> Surd {
    let n = m.nrows();
    assert_eq!(n, m.ncols());
    let mut a = m.clone();
    let mut det = Surd::from(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
            return Surd::zero();
        };
        if p != c {
            a.swap_rows(p, c);
            det = -det;
        }
        let piv = a[(c, c)].clone();
        det *= &piv;
        let inv = piv.inv().expect("nonzero pivot");
        for i in c + 1..n {
            if a[(i, c)].is_zero() {
                continue;
            }
            let f = &a[(i, c)] * &inv;
            for j in c..n {
                let t = &f * &a[(c, j)];
                a[(i, j)] -= t;
            }
        }
    }
    det
}

/// Signature of a symmetric exact matrix by diagonalization by congruence.
pub fn signature_exact(m: &ExactMatrix) -> Signature {
    let n = m.nrows();
    assert_eq!(n, m.ncols());
    let mut a = m.clone();
    let mut sig = Signature::new(0, 0, 0);
    let mut k = 0;
    while k < n {
        let diag = (k..n).find(|&i| !a[(i, i)].is_zero());
        let pivot = match diag {
            Some(p) => p,
            None => {
                // Zero diagonal: fold a nonzero off-diagonal entry onto it.
                let off = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[(i, j)].is_zero());
                let Some((i, j)) = off else {
                    sig.null += n - k;
                    break;
                };
                // row_i += row_j, col_i += col_j
                for c in 0..n {
                    let t = a[(j, c)].clone();
                    a[(i, c)] += t;
                }
                for r in 0..n {
                    let t = a[(r, j)].clone();
                    a[(r, i)] += t;
                }
                i
            }
        };
        a.swap_rows(k, pivot);
        a.swap_columns(k, pivot);
        let piv = a[(k, k)].clone();
        match piv.signum() {
            1 => sig.pos += 1,
            -1 => sig.neg += 1,
            _ => unreachable!("pivot is nonzero"),
        }
        let inv = piv.inv().expect("nonzero pivot");
        for i in k + 1..n {
            if a[(i, k)].is_zero() {
                continue;
            }
            let f = &a[(i, k)] * &inv;
            for c in k..n {
                let t = &f * &a[(k, c)];
                a[(i, c)] -= t;
            }
            for r in k..n {
                let t = &f * &a[(r, k)];
                a[(r, i)] -= t;
            }
        }
        k += 1;
    }
    sig
}

/// Signature of the Hermitian matrix `re + i·im` (exact), via its real
/// `2n×2n` form `[[re, -im], [im, re]]`, whose signature is doubled.
pub fn signature_hermitian_exact(re: &ExactMatrix, im: &ExactMatrix) -> Signature {
    let n = re.nrows();
    let mut big = exact_zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            big[(i, j)] = re[(i, j)].clone();
            big[(n + i, n + j)] = re[(i, j)].clone();
            big[(i, n + j)] = -im[(i, j)].clone();
            big[(n + i, j)] = im[(i, j)].clone();
        }
    }
    let s = signature_exact(&big);
    Signature::new(s.pos / 2, s.neg / 2, s.null / 2)
}

/// Float signature; eigenvalues below `1e-8 × spectral radius` count as zero.
pub fn signature_f64(m: &DMatrix<f64>) -> Signature {
    let n = m.nrows();
    if n == 0 {
        return Signature::new(0, 0, 0);
    }
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let radius = eig.eigenvalues.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    let thresh = 1e-8 * radius;
    let mut sig = Signature::new(0, 0, 0);
    for &e in eig.eigenvalues.iter() {
        if radius == 0.0 || e.abs() <= thresh {
            sig.null += 1;
        } else if e > 0.0 {
            sig.pos += 1;
        } else {
            sig.neg += 1;
        }
    }
    sig
}

pub fn rank_f64(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let svd = m.clone().svd(false, false);
    let smax = svd.singular_values.iter().fold(0.0f64, |a, &x| a.max(x));
    if smax == 0.0 {
        return 0;
    }
    svd.singular_values.iter().filter(|&&s| s > rel_tol * smax).count()
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        let r = rows.len();
        let c = rows[0].len();
        DMatrix::from_fn(r, c, |i, j| Surd::from(rows[i][j]))
    }

    #[test]
    fn signature_examples() {
        assert_eq!(signature_exact(&m(&[&[1, 0], &[0, -1]])), Signature::new(1, 1, 0));
        assert_eq!(signature_exact(&m(&[&[0, 0], &[0, 0]])), Signature::new(0, 0, 2));
        // zero diagonal, hyperbolic plane
        assert_eq!(signature_exact(&m(&[&[0, 1], &[1, 0]])), Signature::new(1, 1, 0));
        assert_eq!(signature_exact(&m(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]])), Signature::new(1, 2, 0));
        let f = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert_eq!(signature_f64(&f), Signature::new(1, 1, 0));
        assert_eq!(signature_f64(&DMatrix::zeros(2, 2)), Signature::new(0, 0, 2));
    }

    #[test]
    fn kernel_and_solve() {
        let a = m(&[&[1, 2, 3]]);
        let ker = kernel_exact(&a);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!((&a * v)[0].is_zero());
        }
        let b = DVector::from_vec(vec![Surd::from(6)]);
        let x = solve_exact(&a, &b).unwrap();
        assert_eq!((&a * &x)[0], Surd::from(6));
        let inconsistent = m(&[&[1, 1], &[1, 1]]);
        let rhs = DVector::from_vec(vec![Surd::from(1), Surd::from(2)]);
        assert!(solve_exact(&inconsistent, &rhs).is_none());
    }

    #[test]
    fn det_and_inverse() {
        let a = m(&[&[2, 1], &[7, 4]]);
        assert_eq!(det_exact(&a), Surd::from(1));
        let inv = inverse_exact(&a).unwrap();
        assert_eq!(&a * &inv, exact_identity(2));
        assert!(inverse_exact(&m(&[&[1, 2], &[2, 4]])).is_none());
    }
}
