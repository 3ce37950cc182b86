//! Homogeneous polynomials with exact coefficients, their polarizations and
//! derivatives.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::scalar::Scalar;
use crate::surd::Surd;

/// Homogeneous polynomial of degree `d` in `n` variables.
///
/// Terms are keyed by exponent vectors (length `n`, sum `d`) in
/// lexicographic order; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PolyRepr", into = "PolyRepr")]
pub struct HomoPoly {
    n: usize,
    d: u32,
    terms: BTreeMap<Vec<u32>, Surd>,
}

#[derive(Serialize, Deserialize)]
struct MonomialRepr {
    exp: Vec<u32>,
    coeff: Surd,
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    n: usize,
    d: u32,
    monomials: Vec<MonomialRepr>,
}

impl TryFrom<PolyRepr> for HomoPoly {
    type Error = Error;
    fn try_from(r: PolyRepr) -> Result<Self> {
        let mut h = HomoPoly::zero(r.n, r.d);
        for m in r.monomials {
            if m.exp.len() != r.n {
                return Err(Error::DimensionMismatch { expected: r.n, got: m.exp.len() });
            }
            let deg: u32 = m.exp.iter().sum();
            if deg != r.d {
                return Err(Error::Inhomogeneous(r.d, deg));
            }
            h.add_term(m.exp, m.coeff);
        }
        Ok(h)
    }
}

impl From<HomoPoly> for PolyRepr {
    fn from(h: HomoPoly) -> Self {
        PolyRepr {
            n: h.n,
            d: h.d,
            monomials: h.terms.into_iter().map(|(exp, coeff)| MonomialRepr { exp, coeff }).collect(),
        }
    }
}

impl HomoPoly {
    pub fn zero(n: usize, d: u32) -> Self {
        HomoPoly { n, d, terms: BTreeMap::new() }
    }

    pub fn monomial(exp: Vec<u32>, coeff: Surd) -> Self {
        let n = exp.len();
        let d = exp.iter().sum();
        let mut h = HomoPoly::zero(n, d);
        h.add_term(exp, coeff);
        h
    }

    /// The coordinate function `x_i` (0-based).
    pub fn variable(n: usize, i: usize) -> Self {
        let mut exp = vec![0; n];
        exp[i] = 1;
        HomoPoly::monomial(exp, Surd::from(1))
    }

    pub fn constant(n: usize, c: Surd) -> Self {
        HomoPoly::monomial(vec![0; n], c)
    }

    /// Builds a polynomial from terms, which must share one total degree.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Vec<u32>, Surd)>) -> Result<Self> {
        let mut out: Option<HomoPoly> = None;
        for (exp, c) in terms {
            if exp.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: exp.len() });
            }
            let deg = exp.iter().sum();
            let h = out.get_or_insert_with(|| HomoPoly::zero(n, deg));
            if deg != h.d {
                return Err(Error::Inhomogeneous(h.d, deg));
            }
            h.add_term(exp, c);
        }
        out.ok_or(Error::DegreeZero)
    }

    fn add_term(&mut self, exp: Vec<u32>, c: Surd) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Surd)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &[u32]) -> Surd {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    /// Radicands adjoined by any coefficient.
    pub fn tower(&self) -> Vec<u64> {
        let mut t: Vec<u64> = self.terms.values().flat_map(|c| c.tower()).collect();
        t.sort_unstable();
        t.dedup();
        t
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |a, c| a.max(c.to_f64().abs()))
    }

    pub fn eval<S: Scalar>(&self, x: &[S]) -> S {
        assert_eq!(x.len(), self.n, "point dimension");
        let mut total = S::zero();
        for (exp, c) in &self.terms {
            let mut t = S::from_surd(c);
            for (xi, &e) in x.iter().zip(exp) {
                if e > 0 {
                    t = t * xi.powi(e);
                }
            }
            total = total + t;
        }
        total
    }

    pub fn try_eval<S: Scalar>(&self, x: &[S]) -> Result<S> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        Ok(self.eval(x))
    }

    pub fn scale(&self, c: &Surd) -> HomoPoly {
        let mut out = HomoPoly::zero(self.n, self.d);
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            out.terms.insert(e.clone(), v * c);
        }
        out
    }

    pub fn neg(&self) -> HomoPoly {
        self.scale(&Surd::from(-1))
    }

    pub fn add(&self, other: &HomoPoly) -> Result<HomoPoly> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.d != other.d {
            return Err(Error::Inhomogeneous(self.d, other.d));
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &HomoPoly) -> Result<HomoPoly> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &HomoPoly) -> HomoPoly {
        assert_eq!(self.n, other.n, "variable count");
        let mut out = HomoPoly::zero(self.n, self.d + other.d);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> HomoPoly {
        let mut out = HomoPoly::constant(self.n, Surd::from(1));
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `∂h/∂x_i`, a homogeneous polynomial of degree `d − 1`.
    pub fn derivative(&self, i: usize) -> HomoPoly {
        let mut out = HomoPoly::zero(self.n, self.d.saturating_sub(1));
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c * &Surd::from(e[i] as i64));
        }
        out
    }

    pub fn gradient_polys(&self) -> Vec<HomoPoly> {
        (0..self.n).map(|i| self.derivative(i)).collect()
    }

    pub fn gradient<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        self.gradient_polys().iter().map(|p| p.eval(x)).collect()
    }

    /// Matrix of second partials evaluated at `x`.
    pub fn hessian<S: Scalar + 'static>(&self, x: &[S]) -> DMatrix<S> {
        Derivatives::new(self).hessian(x)
    }

    /// `∂² log h = ∂²h/h − ∇h∇hᵀ/h²` at `x`.
    pub fn log_hessian<S: Scalar + 'static>(&self, x: &[S]) -> Result<DMatrix<S>> {
        Derivatives::new(self).log_hessian(x)
    }

    /// Substitutes `x_i ↦ images[i]`; all images must share a variable count
    /// and a degree.
    pub fn substitute(&self, images: &[HomoPoly]) -> HomoPoly {
        assert_eq!(images.len(), self.n, "one image per variable");
        let m = images.first().map(|p| p.n).unwrap_or(0);
        let k = images.first().map(|p| p.d).unwrap_or(0);
        let mut out = HomoPoly::zero(m, self.d * k);
        let mut power_cache: BTreeMap<(usize, u32), HomoPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut t = HomoPoly::constant(m, c.clone());
            for (i, &ei) in e.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                let p = power_cache.entry((i, ei)).or_insert_with(|| images[i].pow(ei)).clone();
                t = t.mul(&p);
            }
            for (e2, c2) in t.terms {
                out.add_term(e2, c2);
            }
        }
        out
    }

    /// `x ↦ dh|_x(M x)`, the derivative of `h` along the linear vector field `M`.
    pub fn lie_derivative(&self, m: &ExactMatrix) -> HomoPoly {
        assert_eq!(m.shape(), (self.n, self.n), "matrix shape");
        let mut out = HomoPoly::zero(self.n, self.d);
        for r in 0..self.n {
            let dr = self.derivative(r);
            if dr.is_zero() {
                continue;
            }
            let mut lin = HomoPoly::zero(self.n, 1);
            for c in 0..self.n {
                if !m[(r, c)].is_zero() {
                    let mut e = vec![0; self.n];
                    e[c] = 1;
                    lin.add_term(e, m[(r, c)].clone());
                }
            }
            for (e, c) in dr.mul(&lin).terms {
                out.add_term(e, c);
            }
        }
        out
    }

    /// The pullback `y ↦ h(A y)`.
    pub fn pullback_linear(&self, a: &ExactMatrix) -> HomoPoly {
        assert_eq!(a.nrows(), self.n, "matrix rows");
        let m = a.ncols();
        let images: Vec<HomoPoly> = (0..self.n)
            .map(|i| {
                let terms = (0..m).map(|j| {
                    let mut e = vec![0; m];
                    e[j] = 1;
                    (e, a[(i, j)].clone())
                });
                let mut p = HomoPoly::zero(m, 1);
                for (e, c) in terms {
                    p.add_term(e, c);
                }
                p
            })
            .collect();
        self.substitute(&images)
    }

    /// Renames variable `i` to `targets[i]` in an `m`-variable space.
    pub fn embed(&self, m: usize, targets: &[usize]) -> HomoPoly {
        assert_eq!(targets.len(), self.n);
        let mut out = HomoPoly::zero(m, self.d);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; m];
            for (i, &ei) in e.iter().enumerate() {
                e2[targets[i]] += ei;
            }
            out.add_term(e2, c.clone());
        }
        out
    }

    pub fn polarize(&self) -> SymForm {
        SymForm::from_poly(self)
    }

    /// Decomposes `h` into components of pure block multidegree.
    pub fn multidegree_split(&self, blocks: &BlockStructure) -> Result<BTreeMap<Vec<u32>, HomoPoly>> {
        if blocks.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: blocks.n() });
        }
        let owner = blocks.owner();
        let r = blocks.len();
        let mut out: BTreeMap<Vec<u32>, HomoPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut md = vec![0u32; r];
            for (i, &ei) in e.iter().enumerate() {
                md[owner[i]] += ei;
            }
            out.entry(md).or_insert_with(|| HomoPoly::zero(self.n, self.d)).add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    /// Coefficients of `t ↦ h(p + t q)`, lowest degree first.
    pub fn restrict_to_line(&self, p: &[Surd], q: &[Surd]) -> Vec<Surd> {
        let form = self.polarize();
        let d = self.d as usize;
        (0..=d)
            .map(|j| {
                let mut args: Vec<&[Surd]> = vec![p; d - j];
                args.extend(std::iter::repeat_n(q, j));
                let binom = binomial(d as u64, j as u64);
                form.eval_refs(&args) * Surd::from(binom as i64)
            })
            .collect()
    }

    /// Heuristic test of whether `h` is a constant times a power `p^k`,
    /// `k ≥ 2`, of a lower-degree polynomial.
    ///
    /// `h` is restricted to `lines` random rational lines; a `k` survives if
    /// every restriction is a perfect `k`-th power up to its leading
    /// coefficient. Returns the largest surviving `k`. A `Some` answer is
    /// only probable, a `None` answer is certain.
    pub fn power_exponent<R: Rng>(&self, lines: usize, rng: &mut R) -> Option<u32> {
        let d = self.d;
        let mut candidates: Vec<u32> = (2..=d).filter(|k| d.is_multiple_of(*k)).collect();
        if candidates.is_empty() || self.is_zero() {
            return None;
        }
        let mut done = 0;
        let mut attempts = 0;
        while done < lines && !candidates.is_empty() && attempts < 20 * lines {
            attempts += 1;
            let p: Vec<Surd> = (0..self.n).map(|_| crate::rng::random_rational(rng)).collect();
            let q: Vec<Surd> = (0..self.n).map(|_| crate::rng::random_rational(rng)).collect();
            let f = self.restrict_to_line(&p, &q);
            let lead = f[d as usize].clone();
            let Some(inv) = lead.inv() else { continue };
            let monic: Vec<Surd> = f.iter().map(|c| c * &inv).collect();
            candidates.retain(|&k| is_monic_power(&monic, k));
            done += 1;
        }
        candidates.last().copied()
    }

    pub fn parse(text: &str, n: usize) -> Result<HomoPoly> {
        parse_poly(text, n)
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::from(1), |a, k| a * BigInt::from(k))
}

fn uni_mul(a: &[Surd], b: &[Surd]) -> Vec<Surd> {
    let mut out = vec![Surd::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn uni_pow(a: &[Surd], k: u32) -> Vec<Surd> {
    let mut out = vec![Surd::from(1)];
    for _ in 0..k {
        out = uni_mul(&out, a);
    }
    out
}

/// Whether the monic univariate `f` (lowest degree first) is `g^k` for a
/// monic `g`, by solving for the coefficients of `g` from the top down.
fn is_monic_power(f: &[Surd], k: u32) -> bool {
    let d = f.len() - 1;
    if !d.is_multiple_of(k as usize) {
        return false;
    }
    let m = d / k as usize;
    let mut g = vec![Surd::zero(); m + 1];
    g[m] = Surd::from(1);
    let kk = Surd::from(k as i64);
    for j in 1..=m {
        let current = uni_pow(&g, k);
        let gap = &f[d - j] - &current[d - j];
        g[m - j] = gap / &kk;
    }
    uni_pow(&g, k) == f
}

impl fmt::Display for HomoPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mut coeff = c.clone();
            let simple = c.is_rational();
            let negative = (simple || c.terms().count() == 1) && c.signum() < 0;
            if negative {
                coeff = -coeff;
            }
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            first = false;
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, k) })
                .collect();
            let is_one = coeff == Surd::from(1);
            let cs = if simple || coeff.terms().count() == 1 { coeff.to_string() } else { format!("({coeff})") };
            match (is_one, vars.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{}", vars.join("*"))?,
                (false, true) => write!(f, "{cs}")?,
                (false, false) => write!(f, "{}*{}", cs, vars.join("*"))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HomoPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomoPoly(n={}, d={}: {})", self.n, self.d, self)
    }
}

/// Precomputed first and second partials of a polynomial.
#[derive(Clone, Debug)]
pub struct Derivatives {
    pub h: HomoPoly,
    pub grad: Vec<HomoPoly>,
    pub hess: Vec<Vec<HomoPoly>>,
}

impl Derivatives {
    pub fn new(h: &HomoPoly) -> Self {
        let grad = h.gradient_polys();
        let hess = grad.iter().map(|g| g.gradient_polys()).collect();
        Derivatives { h: h.clone(), grad, hess }
    }

    pub fn gradient<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        self.grad.iter().map(|p| p.eval(x)).collect()
    }

    pub fn hessian<S: Scalar + 'static>(&self, x: &[S]) -> DMatrix<S> {
        let n = self.h.n();
        let mut m = DMatrix::from_element(n, n, S::zero());
        for i in 0..n {
            for j in i..n {
                let v = self.hess[i][j].eval(x);
                m[(j, i)] = v.clone();
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn log_hessian<S: Scalar + 'static>(&self, x: &[S]) -> Result<DMatrix<S>> {
        let hv = self.h.try_eval(x)?;
        if hv == S::zero() {
            return Err(Error::ZeroLevel);
        }
        let g = self.gradient(x);
        let mut m = self.hessian(x);
        let h2 = hv.clone() * hv.clone();
        let n = self.h.n();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = m[(i, j)].clone() / hv.clone() - g[i].clone() * g[j].clone() / h2.clone();
            }
        }
        Ok(m)
    }
}

/// Symmetric `d`-linear form, stored on sorted index tuples.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymForm {
    n: usize,
    d: u32,
    values: BTreeMap<Vec<usize>, Surd>,
}

impl SymForm {
    /// `H(e_{i₁},…,e_{i_d}) = c_α · α! / d!` where `α` counts the indices.
    pub fn from_poly(h: &HomoPoly) -> Self {
        let d_fact = factorial(h.d);
        let mut values = BTreeMap::new();
        for (e, c) in &h.terms {
            let alpha_fact = e.iter().fold(BigInt::from(1), |a, &k| a * factorial(k));
            let w = Surd::rational(BigRational::new(alpha_fact, d_fact.clone()));
            let key: Vec<usize> = e.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize)).collect();
            values.insert(key, c * &w);
        }
        SymForm { n: h.n, d: h.d, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    /// Value on basis vectors, in any order.
    pub fn value(&self, indices: &[usize]) -> Surd {
        let mut key = indices.to_vec();
        key.sort_unstable();
        self.values.get(&key).cloned().unwrap_or_default()
    }

    pub fn values(&self) -> impl Iterator<Item = (&Vec<usize>, &Surd)> {
        self.values.iter()
    }

    pub fn eval<S: Scalar>(&self, args: &[Vec<S>]) -> Result<S> {
        let refs: Vec<&[S]> = args.iter().map(|a| a.as_slice()).collect();
        self.try_eval_refs(&refs)
    }

    pub fn try_eval_refs<S: Scalar>(&self, args: &[&[S]]) -> Result<S> {
        if args.len() != self.d as usize {
            return Err(Error::DimensionMismatch { expected: self.d as usize, got: args.len() });
        }
        if let Some(a) = args.iter().find(|a| a.len() != self.n) {
            return Err(Error::DimensionMismatch { expected: self.n, got: a.len() });
        }
        Ok(self.eval_refs(args))
    }

    /// Multilinear evaluation; panics on shape mismatch.
    pub fn eval_refs<S: Scalar>(&self, args: &[&[S]]) -> S {
        let mut total = S::zero();
        for (key, c) in &self.values {
            let mut perm = key.clone();
            let mut acc = S::zero();
            loop {
                let mut t = S::one();
                for (slot, &i) in perm.iter().enumerate() {
                    t = t * args[slot][i].clone();
                }
                acc = acc + t;
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            total = total + S::from_surd(c) * acc;
        }
        total
    }
}

/// Advances to the next lexicographic permutation; false after the last.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Named partition of the variable indices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockStructure {
    blocks: Vec<(String, Vec<usize>)>,
}

impl BlockStructure {
    pub fn new(n: usize, blocks: Vec<(String, Vec<usize>)>) -> Result<Self> {
        let mut seen = vec![false; n];
        for (name, idx) in &blocks {
            for &i in idx {
                if i >= n {
                    return Err(Error::BadBlocks { n, msg: format!("index {i} in block {name}") });
                }
                if seen[i] {
                    return Err(Error::BadBlocks { n, msg: format!("index {i} repeated") });
                }
                seen[i] = true;
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::BadBlocks { n, msg: format!("index {i} uncovered") });
        }
        Ok(BlockStructure { blocks })
    }

    /// Consecutive blocks of the given sizes, named `B1`, `B2`, ….
    pub fn consecutive(sizes: &[usize]) -> Self {
        let mut start = 0;
        let blocks = sizes
            .iter()
            .enumerate()
            .map(|(k, &s)| {
                let b = (format!("B{}", k + 1), (start..start + s).collect());
                start += s;
                b
            })
            .collect();
        BlockStructure { blocks }
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(|(_, b)| b.len()).sum()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[(String, Vec<usize>)] {
        &self.blocks
    }

    fn owner(&self) -> Vec<usize> {
        let mut owner = vec![0; self.n()];
        for (k, (_, idx)) in self.blocks.iter().enumerate() {
            for &i in idx {
                owner[i] = k;
            }
        }
        owner
    }
}

// ---------------------------------------------------------------------------
// Text grammar

type SparseExp = BTreeMap<usize, u32>;
type SparsePoly = BTreeMap<SparseExp, Surd>;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Sqrt,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'/' => out.push((start, Tok::Slash)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Num(v)));
                continue;
            }
            b'x' => {
                i += 1;
                let ds = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if ds == i {
                    return Err(Error::Syntax { pos: start, msg: "expected variable index after 'x'".into() });
                }
                let idx: usize = text[ds..i]
                    .parse()
                    .map_err(|_| Error::Syntax { pos: ds, msg: "variable index too large".into() })?;
                out.push((start, Tok::Var(idx)));
                continue;
            }
            _ if text[i..].starts_with("sqrt") => {
                out.push((start, Tok::Sqrt));
                i += 4;
                continue;
            }
            _ => {
                return Err(Error::Syntax { pos: start, msg: format!("unexpected character {:?}", c as char) });
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax { pos: self.here(), msg: msg.into() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(&format!("expected {what}"))
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some(Tok::Num(v)) => {
                let v = v.clone();
                self.pos += 1;
                Ok(v)
            }
            _ => self.err("expected integer"),
        }
    }

    fn small_integer(&mut self) -> Result<u32> {
        let at = self.here();
        let v = self.integer()?;
        v.to_u32().ok_or(Error::Syntax { pos: at, msg: "exponent too large".into() })
    }

    fn expr(&mut self) -> Result<SparsePoly> {
        let mut total = SparsePoly::new();
        let mut sign = 1i64;
        match self.peek() {
            Some(Tok::Minus) => {
                sign = -1;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            sparse_add_into(&mut total, &t, &Surd::from(sign));
            match self.peek() {
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = -1,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(total)
    }

    fn term(&mut self) -> Result<SparsePoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = sparse_mul(&acc, &f);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.here();
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(Error::Syntax { pos: at, msg: "division by zero".into() });
                    }
                    let inv = Surd::rational(BigRational::new(BigInt::from(1), den));
                    acc = sparse_scale(&acc, &inv);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<SparsePoly> {
        let base = match self.peek() {
            Some(Tok::Num(_)) => {
                let v = self.integer()?;
                sparse_const(Surd::rational(BigRational::from_integer(v)))
            }
            Some(Tok::Var(i)) => {
                let i = *i;
                self.pos += 1;
                let mut e = SparseExp::new();
                e.insert(i, 1);
                let mut p = SparsePoly::new();
                p.insert(e, Surd::from(1));
                p
            }
            Some(Tok::Sqrt) => {
                self.pos += 1;
                self.expect(Tok::LParen, "'(' after sqrt")?;
                let at = self.here();
                let m = self.integer()?;
                let m = m
                    .to_u64()
                    .ok_or(Error::Syntax { pos: at, msg: "radicand must be a nonnegative machine integer".into() })?;
                self.expect(Tok::RParen, "')'")?;
                sparse_const(Surd::sqrt(m))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                inner
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                let f = self.factor()?;
                return Ok(sparse_scale(&f, &Surd::from(-1)));
            }
            _ => return self.err("expected a number, variable, sqrt(..) or '('"),
        };
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let k = self.small_integer()?;
            let mut out = sparse_const(Surd::from(1));
            for _ in 0..k {
                out = sparse_mul(&out, &base);
            }
            return Ok(out);
        }
        Ok(base)
    }
}

fn sparse_const(c: Surd) -> SparsePoly {
    let mut p = SparsePoly::new();
    if !c.is_zero() {
        p.insert(SparseExp::new(), c);
    }
    p
}

fn sparse_add_into(acc: &mut SparsePoly, p: &SparsePoly, scale: &Surd) {
    for (e, c) in p {
        let v = acc.entry(e.clone()).or_default();
        *v += c * scale;
        if v.is_zero() {
            acc.remove(e);
        }
    }
}

fn sparse_scale(p: &SparsePoly, c: &Surd) -> SparsePoly {
    let mut out = SparsePoly::new();
    sparse_add_into(&mut out, p, c);
    out
}

fn sparse_mul(a: &SparsePoly, b: &SparsePoly) -> SparsePoly {
    let mut out = SparsePoly::new();
    for (e1, c1) in a {
        for (e2, c2) in b {
            let mut e = e1.clone();
            for (&i, &k) in e2 {
                *e.entry(i).or_insert(0) += k;
            }
            let v = out.entry(e.clone()).or_default();
            *v += c1 * c2;
            if v.is_zero() {
                out.remove(&e);
            }
        }
    }
    out
}

fn parse_sparse(text: &str) -> Result<SparsePoly> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks: &toks, pos: 0, end: text.len() };
    if toks.is_empty() {
        return p.err("empty expression");
    }
    let out = p.expr()?;
    if p.pos != toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(out)
}

/// Parses a homogeneous polynomial in the variables `x1 … xn`.
///
/// Terms are products of integers, `p/q` fractions, `sqrt(m)`, variables
/// with optional `^e`, and parenthesized subexpressions, joined by `+`/`-`.
pub fn parse_poly(text: &str, n: usize) -> Result<HomoPoly> {
    let sparse = parse_sparse(text)?;
    let mut degree: Option<u32> = None;
    let mut terms = Vec::with_capacity(sparse.len());
    for (e, c) in sparse {
        let mut exp = vec![0u32; n];
        for (&i, &k) in &e {
            if i == 0 || i > n {
                return Err(Error::VariableOutOfRange { index: i, n });
            }
            exp[i - 1] = k;
        }
        let deg: u32 = exp.iter().sum();
        match degree {
            None => degree = Some(deg),
            Some(d0) if d0 != deg => return Err(Error::Inhomogeneous(d0.min(deg), d0.max(deg))),
            _ => {}
        }
        terms.push((exp, c));
    }
    match degree {
        None | Some(0) => Err(Error::DegreeZero),
        Some(_) => HomoPoly::from_terms(n, terms),
    }
}

/// Parses a constant such as `3/2`, `-sqrt(2)` or `1 - 1/2*sqrt(6)`.
pub fn parse_constant(text: &str) -> Result<Surd> {
    let sparse = parse_sparse(text)?;
    let mut out = Surd::zero();
    for (e, c) in sparse {
        if let Some((&i, _)) = e.iter().next() {
            return Err(Error::Syntax { pos: 0, msg: format!("constant expected, found variable x{i}") });
        }
        out += c;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn p(s: &str, n: usize) -> HomoPoly {
        parse_poly(s, n).unwrap()
    }

    #[test]
    fn parse_examples() {
        let h = p("x1*x2*x3", 3);
        assert_eq!(h.degree(), 3);
        assert_eq!(h.num_terms(), 1);
        assert_eq!(h.coeff(&[1, 1, 1]), Surd::from(1));
        let h = p("x1^2*x2 - 1/2*x2*x3^2", 3);
        assert_eq!(h.num_terms(), 2);
        assert_eq!(h.coeff(&[0, 1, 2]), Surd::ratio(-1, 2));
        assert_eq!(parse_poly("x1^2 + x1", 1), Err(Error::Inhomogeneous(1, 2)));
        assert_eq!(parse_poly("3", 1), Err(Error::DegreeZero));
        assert!(matches!(parse_poly("x1 + ", 1), Err(Error::Syntax { .. })));
        assert_eq!(parse_poly("x3", 2), Err(Error::VariableOutOfRange { index: 3, n: 2 }));
        let h = p("1/2*sqrt(8)*x1 - (x1 - x2)", 2);
        assert_eq!(h.coeff(&[1, 0]), Surd::sqrt(2) - Surd::from(1));
        assert_eq!(h.coeff(&[0, 1]), Surd::from(1));
    }

    #[test]
    fn display_roundtrip() {
        for s in ["x1^2*x2 - 1/2*x2*x3^2", "(1+sqrt(2))*x1*x2 + sqrt(3)*x3^2", "-x1^3"] {
            let h = p(s, 3);
            assert_eq!(p(&h.to_string(), 3), h, "{s} -> {h}");
        }
    }

    #[test]
    fn json_roundtrip() {
        let h = p("x1^2*x2 - 1/2*sqrt(2)*x2*x3^2", 3);
        let text = serde_json::to_string(&h).unwrap();
        let back: HomoPoly = serde_json::from_str(&text).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn polarization_values() {
        let h = p("x1*x2*x3", 3);
        let f = h.polarize();
        assert_eq!(f.value(&[0, 1, 2]), Surd::ratio(1, 6));
        assert_eq!(f.value(&[0, 0, 1]), Surd::zero());
        let f = p("x1^2*x2", 2).polarize();
        assert_eq!(f.value(&[1, 0, 0]), Surd::ratio(1, 3));
        let f = p("x1^2", 1).polarize();
        assert_eq!(f.value(&[0, 0]), Surd::from(1));
    }

    #[test]
    fn complex_symmetric_evaluation() {
        let f = p("x1*x2*x3", 3).polarize();
        let z = vec![Complex::new(0.0, 1.0); 3];
        let v = f.eval(&[z.clone(), z.clone(), z]).unwrap();
        assert!((v - Complex::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn hessians() {
        let h = p("x1*x2*x3", 3);
        let one = vec![Surd::from(1); 3];
        let m = h.hessian(&one);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 0 } else { 1 };
                assert_eq!(m[(i, j)], Surd::from(want));
            }
        }
        let q = p("x1^2", 1);
        assert_eq!(q.hessian(&[Surd::from(1)])[(0, 0)], Surd::from(2));
        assert_eq!(q.log_hessian(&[Surd::from(1)]).unwrap()[(0, 0)], Surd::from(-2));
        assert_eq!(q.log_hessian(&[Surd::from(0)]), Err(Error::ZeroLevel));
    }

    #[test]
    fn split_by_blocks() {
        let h = p("x1*x2 - 1/2*x3^2 - 1/2*x4^2", 4);
        let b = BlockStructure::new(4, vec![("a".into(), vec![0, 1]), ("X".into(), vec![2, 3])]).unwrap();
        let parts = h.multidegree_split(&b).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&vec![2, 0]], p("x1*x2", 4));
        assert_eq!(parts[&vec![0, 2]], p("-1/2*x3^2 - 1/2*x4^2", 4));
        assert!(BlockStructure::new(3, vec![("a".into(), vec![0, 1])]).is_err());
    }

    #[test]
    fn power_heuristic() {
        let mut rng = crate::rng::seeded(3);
        assert_eq!(p("x1^2 + 2*x1*x2 + x2^2", 2).power_exponent(20, &mut rng), Some(2));
        assert_eq!(p("x1*x2", 2).power_exponent(20, &mut rng), None);
        assert_eq!(p("x1*x2*x3", 3).power_exponent(20, &mut rng), None);
        let cube = p("x1 - 2*x2", 2).pow(3);
        assert_eq!(cube.power_exponent(20, &mut rng), Some(3));
    }

    #[test]
    fn substitution() {
        let h = p("x1*x2", 2);
        let a = DMatrix::from_row_slice(2, 2, &[Surd::from(1), Surd::from(1), Surd::from(0), Surd::from(1)]);
        assert_eq!(h.pullback_linear(&a), p("x1*x2 + x2^2", 2));
        assert_eq!(h.embed(3, &[2, 0]), p("x1*x3", 3));
    }
}
