//! Type-I normal J-algebras `𝔲₀ = 𝔟 + J𝔟` assembled from key algebras
//! `[H_i, G_i] = μ_i G_i` and blocks `x_ij = x_ij⁻ + x_ij⁺`, `i < j`.
//!
//! Basis order: `H_1..H_l`, `G_1..G_l`, the `x_ij⁻` blocks in lexicographic
//! order of `(i, j)`, then the `x_ij⁺` blocks in the same order. `J` maps
//! `H_i ↦ G_i` and `x_ij⁻ ↦ x_ij⁺` blockwise.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::MetricLieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{exact_identity, exact_zeros, inverse_exact, kernel_exact, ExactMatrix, ExactVector};
use crate::poly::{BlockStructure, HomoPoly};
use crate::surd::Surd;

type ProductTable = fn(usize, usize) -> (usize, i64);

/// The block `x_ij` (0-based `i < j`) with the scalar product on `x_ij⁻`.
#[derive(Clone, Debug)]
pub struct Block {
    pub i: usize,
    pub j: usize,
    pub gram: ExactMatrix,
}

impl Block {
    pub fn euclidean(i: usize, j: usize, dim: usize) -> Self {
        Block { i, j, gram: exact_identity(dim) }
    }

    pub fn signed(i: usize, j: usize, dim: usize, sign: i64) -> Self {
        Block { i, j, gram: exact_identity(dim).map(|v| v * Surd::from(sign)) }
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }
}

/// Input for [`type_one`]: roots, blocks and (rank 3 only) the map `ψ₁₂₃`.
#[derive(Clone, Debug)]
pub struct TypeISpec {
    pub mu: Vec<Surd>,
    pub blocks: Vec<Block>,
    pub psi: Option<IsometricMap>,
}

/// Where everything sits inside the basis of a type-I algebra.
#[derive(Clone, Debug)]
pub struct TypeIStructure {
    pub mu: Vec<Surd>,
    /// `(i, j, offset of x_ij⁻, offset of x_ij⁺, dim)`.
    pub blocks: Vec<(usize, usize, usize, usize, usize)>,
    /// Indices spanning `𝔟`.
    pub b: Vec<usize>,
    /// Indices spanning `J𝔟`, in the coordinate order used for `h`.
    pub jb: Vec<usize>,
    /// `B₀ = Σ (1/μ_i) H_i`.
    pub b0: ExactVector,
}

impl TypeIStructure {
    pub fn rank(&self) -> usize {
        self.mu.len()
    }

    pub fn jb_dim(&self) -> usize {
        self.jb.len()
    }

    pub fn block(&self, i: usize, j: usize) -> Option<(usize, usize, usize)> {
        self.blocks.iter().find(|b| b.0 == i && b.1 == j).map(|b| (b.2, b.3, b.4))
    }

    /// Coordinates on `J𝔟` of a vector lying in `J𝔟`.
    pub fn jb_coords(&self, v: &ExactVector) -> Vec<Surd> {
        self.jb.iter().map(|&k| v[k].clone()).collect()
    }

    /// `true` if `v` has no component outside `J𝔟`.
    pub fn in_jb(&self, v: &ExactVector) -> bool {
        (0..v.len()).all(|k| v[k].is_zero() || self.jb.contains(&k))
    }

    /// A basis of `𝔟₀ = B₀^⊥ ∩ 𝔟`.
    pub fn b0_basis(&self, l: &MetricLieAlgebra) -> Vec<ExactVector> {
        let row = DMatrix::from_fn(1, self.b.len(), |_, c| l.inner(&self.b0, &l.basis_vector(self.b[c])));
        kernel_exact(&row)
            .into_iter()
            .map(|k| {
                let mut v = ExactVector::from_element(l.dim(), Surd::zero());
                for (c, &idx) in self.b.iter().enumerate() {
                    v[idx] = k[c].clone();
                }
                v
            })
            .collect()
    }

    /// Splits the `J𝔟` coordinates into `J𝔞 = span{G_i}` and the `x⁺` part.
    pub fn jb_blocks(&self) -> BlockStructure {
        let l = self.rank();
        let n = self.jb_dim();
        let mut blocks = vec![("a".to_string(), (0..l).collect::<Vec<_>>())];
        if n > l {
            blocks.push(("x".to_string(), (l..n).collect()));
        }
        BlockStructure::new(n, blocks).expect("valid split")
    }

    /// Position of `x_ij⁺[a]` among the `J𝔟` coordinates.
    pub fn plus_coord(&self, i: usize, j: usize, a: usize) -> usize {
        let (_, plus, _) = self.block(i, j).expect("block exists");
        self.jb.iter().position(|&k| k == plus + a).expect("in J𝔟")
    }
}

/// A normal J-algebra of type I with its invariant polynomial on `J𝔟`.
#[derive(Clone, Debug)]
pub struct NormalJAlgebra {
    pub name: String,
    pub algebra: MetricLieAlgebra,
    pub structure: TypeIStructure,
    pub h: HomoPoly,
    pub warnings: Vec<String>,
}

impl NormalJAlgebra {
    pub fn degree(&self) -> u32 {
        self.h.degree()
    }
}

/// Assembles the type-I algebra for the given roots and blocks.
pub fn type_one(spec: &TypeISpec) -> Result<(MetricLieAlgebra, TypeIStructure)> {
    let l = spec.mu.len();
    if l == 0 {
        return Err(Error::Precondition("rank must be positive".into()));
    }
    if spec.mu.iter().any(|m| m.signum() <= 0) {
        return Err(Error::Precondition("roots must be positive".into()));
    }
    let mut blocks = spec.blocks.clone();
    blocks.sort_by_key(|b| (b.i, b.j));
    for w in blocks.windows(2) {
        if (w[0].i, w[0].j) == (w[1].i, w[1].j) {
            return Err(Error::Precondition(format!("duplicate block x{}{}", w[0].i + 1, w[0].j + 1)));
        }
    }
    if let Some(b) = blocks.iter().find(|b| b.i >= b.j || b.j >= l) {
        return Err(Error::Precondition(format!("block ({}, {}) invalid for rank {l}", b.i, b.j)));
    }
    let xdim: usize = blocks.iter().map(Block::dim).sum();
    let n = 2 * l + 2 * xdim;

    let mut labels = Vec::with_capacity(n);
    labels.extend((1..=l).map(|i| format!("H{i}")));
    labels.extend((1..=l).map(|i| format!("G{i}")));
    let mut layout = Vec::new();
    let mut off = 2 * l;
    for b in &blocks {
        layout.push((b.i, b.j, off, off + xdim, b.dim()));
        for a in 0..b.dim() {
            labels.push(format!("x{}{}-[{}]", b.i + 1, b.j + 1, a + 1));
        }
        off += b.dim();
    }
    for b in &blocks {
        for a in 0..b.dim() {
            labels.push(format!("x{}{}+[{}]", b.i + 1, b.j + 1, a + 1));
        }
    }

    let mut gram = exact_zeros(n, n);
    let mut j = exact_zeros(n, n);
    for i in 0..l {
        gram[(i, i)] = Surd::from(1);
        gram[(l + i, l + i)] = Surd::from(1);
        j[(l + i, i)] = Surd::from(1);
        j[(i, l + i)] = Surd::from(-1);
    }
    for (b, &(_, _, mo, po, dim)) in blocks.iter().zip(&layout) {
        for r in 0..dim {
            for c in 0..dim {
                gram[(mo + r, mo + c)] = b.gram[(r, c)].clone();
                gram[(po + r, po + c)] = b.gram[(r, c)].clone();
            }
            j[(po + r, mo + r)] = Surd::from(1);
            j[(mo + r, po + r)] = Surd::from(-1);
        }
    }

    let mut alg = MetricLieAlgebra::new(labels, gram, j);
    let half = Surd::ratio(1, 2);
    for i in 0..l {
        alg.add_bracket(i, l + i, l + i, &spec.mu[i]);
    }
    for (b, &(bi, bj, mo, po, dim)) in blocks.iter().zip(&layout) {
        let mi = &spec.mu[bi] * &half;
        let mj = &spec.mu[bj] * &half;
        for a in 0..dim {
            alg.add_bracket(bi, mo + a, mo + a, &mi);
            alg.add_bracket(bi, po + a, po + a, &mi);
            alg.add_bracket(bj, mo + a, mo + a, &-mj.clone());
            alg.add_bracket(bj, po + a, po + a, &mj);
            // ad_{G_j} = −μ_j J on x_ij⁻
            alg.add_bracket(l + bj, mo + a, po + a, &-spec.mu[bj].clone());
            // [X, Y] = μ_i ⟨JX, Y⟩ G_i inside 𝔢_i
            for c in 0..dim {
                let v = &spec.mu[bi] * &b.gram[(a, c)];
                alg.add_bracket(mo + a, po + c, l + bi, &v);
            }
        }
    }

    if let Some(psi) = &spec.psi {
        if l != 3 {
            return Err(Error::Precondition("an isometric map needs rank 3".into()));
        }
        add_psi_brackets(&mut alg, &layout, psi)?;
    }

    let b: Vec<usize> = (0..l).chain(layout.iter().flat_map(|&(_, _, mo, _, d)| mo..mo + d)).collect();
    let jb: Vec<usize> = (l..2 * l).chain(layout.iter().flat_map(|&(_, _, _, po, d)| po..po + d)).collect();
    let mut b0 = ExactVector::from_element(n, Surd::zero());
    for i in 0..l {
        b0[i] = spec.mu[i].inv().expect("positive root");
    }
    let structure = TypeIStructure { mu: spec.mu.clone(), blocks: layout, b, jb, b0 };
    Ok((alg, structure))
}

fn add_psi_brackets(
    alg: &mut MetricLieAlgebra,
    layout: &[(usize, usize, usize, usize, usize)],
    psi: &IsometricMap,
) -> Result<()> {
    let find = |i, j| layout.iter().find(|b| b.0 == i && b.1 == j).map(|b| (b.2, b.3, b.4));
    let (d23, d12, d13) = psi.dims();
    let none = (0, 0, 0);
    let (m12, p12, n12) = find(0, 1).unwrap_or(none);
    let (m13, p13, n13) = find(0, 2).unwrap_or(none);
    let (m23, p23, n23) = find(1, 2).unwrap_or(none);
    if (n23, n12, n13) != (d23, d12, d13) {
        return Err(Error::DimensionMismatch { expected: d23 + d12 + d13, got: n23 + n12 + n13 });
    }
    let r = Surd::sqrt(2).inv().expect("nonzero");
    let t = psi.transpose()?;
    for a in 0..d23 {
        for b in 0..d12 {
            for c in 0..d13 {
                // [x23, x12⁻] ⊂ x13 with [X, Y] = ψ(X, Y)/√2 and [JX, Y] = J[X, Y]
                let v = &r * &psi.psi[a][b][c];
                alg.add_bracket(m23 + a, m12 + b, m13 + c, &v);
                alg.add_bracket(p23 + a, m12 + b, p13 + c, &v);
            }
        }
        for c in 0..d13 {
            for b in 0..d12 {
                // ⟨[X, Y], Z⟩ = −⟨JY, ψ(X, JZ)⟩/√2 on x23⁻ × x13⁺ → x12⁺, and [JX, JY] = [X, Y]
                let v = &r * &t.psi[a][c][b];
                alg.add_bracket(m23 + a, p13 + c, p12 + b, &-v.clone());
                alg.add_bracket(p23 + a, m13 + c, p12 + b, &v);
            }
        }
    }
    Ok(())
}

/// The elementary Kählerian algebra `𝔢(n+1, μ)` on `H, G, x⁻, x⁺`.
pub fn build_elementary(n: usize, mu: &Surd) -> Result<MetricLieAlgebra> {
    if mu.signum() <= 0 {
        return Err(Error::Precondition("root must be positive".into()));
    }
    let dim = 2 * n + 2;
    let mut labels = vec!["H".to_string(), "G".to_string()];
    labels.extend((1..=n).map(|a| format!("x-[{a}]")));
    labels.extend((1..=n).map(|a| format!("x+[{a}]")));
    let mut j = exact_zeros(dim, dim);
    j[(1, 0)] = Surd::from(1);
    j[(0, 1)] = Surd::from(-1);
    for a in 0..n {
        j[(2 + n + a, 2 + a)] = Surd::from(1);
        j[(2 + a, 2 + n + a)] = Surd::from(-1);
    }
    let mut alg = MetricLieAlgebra::new(labels, exact_identity(dim), j);
    alg.add_bracket(0, 1, 1, mu);
    let half = mu * &Surd::ratio(1, 2);
    for k in 2..dim {
        alg.add_bracket(0, k, k, &half);
    }
    for a in 0..n {
        alg.add_bracket(2 + a, 2 + n + a, 1, mu);
    }
    Ok(alg)
}

/// `𝔲₀(p, s) = 𝔢(p+1, 1) ∔ 𝔢(1, 1/√s)` with
/// `h = a₁(μa₂)ˢ − ½(μa₂)^{s−1}⟨X, X⟩`, `μ = 1/√s`, of degree `s + 1`.
pub fn build_u0_rank2(p: usize, s: u32) -> Result<NormalJAlgebra> {
    build_u0_rank2_signed(p, s, 1)
}

/// As [`build_u0_rank2`], with the scalar product on `x₁ = x₁₂` multiplied by
/// `sign` (`−1` gives the pseudo-Kähler variant).
pub fn build_u0_rank2_signed(p: usize, s: u32, sign: i64) -> Result<NormalJAlgebra> {
    if s == 0 {
        return Err(Error::Precondition("s must be at least 1".into()));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::Precondition("sign must be 1 or -1".into()));
    }
    let mu = Surd::sqrt(s as u64).inv().expect("nonzero");
    let mut blocks = Vec::new();
    if p > 0 {
        blocks.push(Block::signed(0, 1, p, sign));
    }
    let spec = TypeISpec { mu: vec![Surd::from(1), mu.clone()], blocks, psi: None };
    let (algebra, structure) = type_one(&spec)?;
    let n = structure.jb_dim();
    let a1 = HomoPoly::variable(n, 0);
    let ma2 = HomoPoly::variable(n, 1).scale(&mu);
    let mut xx = HomoPoly::zero(n, 2);
    for a in 0..p {
        let x = HomoPoly::variable(n, 2 + a);
        xx = xx.add(&x.mul(&x).scale(&Surd::from(sign)))?;
    }
    let h = a1.mul(&ma2.pow(s)).sub(&ma2.pow(s - 1).mul(&xx).scale(&Surd::ratio(1, 2)))?;
    let name = if sign == 1 { format!("u0({p},{s})") } else { format!("u0({p},{s})'") };
    Ok(NormalJAlgebra { name, algebra, structure, h, warnings: Vec::new() })
}

/// `𝔲₀(ψ) = 𝔢₁ + 𝔢₂ + 𝔣₃` with all roots 1 and the cubic
/// `h = a₁a₂a₃ − ½Σ a_α⟨X_βγ, X_βγ⟩ + ⟨ψ(JX₂₃, JX₁₂), JX₁₃⟩/√2`.
pub fn build_u0_rank3(psi: &IsometricMap) -> Result<NormalJAlgebra> {
    psi.check_isometric()?;
    let (d23, d12, d13) = psi.dims();
    let mut warnings = Vec::new();
    if d23 > 0 && d12 != d13 {
        warnings.push(format!("{}: not special (dim x12 = {d12}, dim x13 = {d13})", psi.name));
    }
    let mut blocks = Vec::new();
    for (i, j, g) in [(0, 1, psi.gram(12)), (0, 2, psi.gram(13)), (1, 2, psi.gram(23))] {
        if g.nrows() > 0 {
            blocks.push(Block { i, j, gram: g });
        }
    }
    let spec = TypeISpec { mu: vec![Surd::from(1); 3], blocks, psi: Some(psi.clone()) };
    let (algebra, structure) = type_one(&spec)?;
    let n = structure.jb_dim();
    let var = |k: usize| HomoPoly::variable(n, k);
    let mut h = var(0).mul(&var(1)).mul(&var(2));
    let half = Surd::ratio(1, 2);
    // a_α pairs with the block x_βγ not containing α
    for (alpha, (i, j)) in [(0, (1, 2)), (1, (0, 2)), (2, (0, 1))] {
        let Some((_, _, dim)) = structure.block(i, j) else { continue };
        let g = &algebra.gram().clone();
        let (_, po, _) = structure.block(i, j).unwrap();
        let mut q = HomoPoly::zero(n, 2);
        for a in 0..dim {
            for b in 0..dim {
                let c = &g[(po + a, po + b)];
                if c.is_zero() {
                    continue;
                }
                let xa = var(structure.plus_coord(i, j, a));
                let xb = var(structure.plus_coord(i, j, b));
                q = q.add(&xa.mul(&xb).scale(c))?;
            }
        }
        h = h.sub(&var(alpha).mul(&q).scale(&half))?;
    }
    // J x⁺ = −x⁻, so ⟨ψ(JX₂₃, JX₁₂), JX₁₃⟩ = −Σ u_a v_b ⟨ψ(e_a, e_b), f_c⟩ w_c
    let r = Surd::sqrt(2).inv().expect("nonzero");
    let g13 = psi.gram(13);
    for a in 0..d23 {
        for b in 0..d12 {
            let lowered = &g13 * psi.value(a, b);
            for c in 0..d13 {
                if lowered[c].is_zero() {
                    continue;
                }
                let m = var(structure.plus_coord(1, 2, a))
                    .mul(&var(structure.plus_coord(0, 1, b)))
                    .mul(&var(structure.plus_coord(0, 2, c)));
                h = h.sub(&m.scale(&(&r * &lowered[c])))?;
            }
        }
    }
    Ok(NormalJAlgebra { name: format!("u0(psi:{})", psi.name), algebra, structure, h, warnings })
}

/// A bilinear map `ψ: x₂₃⁻ × x₁₂⁻ → x₁₃⁻` given by `psi[a][b]`, the image of
/// the `a`-th and `b`-th basis vectors in coordinates of `x₁₃⁻`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IsometricMap {
    pub name: String,
    pub gram_23: Vec<Vec<Surd>>,
    pub gram_12: Vec<Vec<Surd>>,
    pub gram_13: Vec<Vec<Surd>>,
    pub psi: Vec<Vec<Vec<Surd>>>,
}

fn rows_to_matrix(rows: &[Vec<Surd>]) -> ExactMatrix {
    let n = rows.len();
    DMatrix::from_fn(n, n, |i, j| rows[i][j].clone())
}

fn matrix_to_rows(m: &ExactMatrix) -> Vec<Vec<Surd>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].clone()).collect()).collect()
}

fn identity_rows(n: usize) -> Vec<Vec<Surd>> {
    matrix_to_rows(&exact_identity(n))
}

impl IsometricMap {
    /// `ψ = 0` on `0 × ℝᵖ → ℝ^q`.
    pub fn zero(p: usize, q: usize) -> Self {
        IsometricMap {
            name: format!("zero({p},{q})"),
            gram_23: Vec::new(),
            gram_12: identity_rows(p),
            gram_13: identity_rows(q),
            psi: Vec::new(),
        }
    }

    /// Multiplication in a composition algebra of dimension 1, 2 or 4.
    pub fn composition(dim: usize) -> Result<Self> {
        let (name, table): (&str, ProductTable) = match dim {
            1 => ("real", |_, _| (0, 1)),
            2 => ("complex", complex_product),
            4 => ("quaternion", quaternion_product),
            _ => return Err(Error::Precondition(format!("no composition algebra of dimension {dim} here"))),
        };
        let psi = (0..dim)
            .map(|a| {
                (0..dim)
                    .map(|b| {
                        let (c, s) = table(a, b);
                        let mut v = vec![Surd::zero(); dim];
                        v[c] = Surd::from(s);
                        v
                    })
                    .collect()
            })
            .collect();
        Ok(IsometricMap {
            name: name.into(),
            gram_23: identity_rows(dim),
            gram_12: identity_rows(dim),
            gram_13: identity_rows(dim),
            psi,
        })
    }

    /// `ℝ × ℝ → ℝ²`, `(x, y) ↦ (xy, 0)`: isometric, of order 1, not special.
    pub fn line_into_plane() -> Self {
        IsometricMap {
            name: "line-into-plane".into(),
            gram_23: identity_rows(1),
            gram_12: identity_rows(1),
            gram_13: identity_rows(2),
            psi: vec![vec![vec![Surd::from(1), Surd::zero()]]],
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: IsometricMap = serde_json::from_str(text)?;
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let (d23, d12, d13) = self.dims();
        for g in [&self.gram_23, &self.gram_12, &self.gram_13] {
            if let Some(row) = g.iter().find(|r| r.len() != g.len()) {
                return Err(Error::DimensionMismatch { expected: g.len(), got: row.len() });
            }
        }
        if d23 > 0 && self.psi.len() != d23 {
            return Err(Error::DimensionMismatch { expected: d23, got: self.psi.len() });
        }
        for row in &self.psi {
            if row.len() != d12 {
                return Err(Error::DimensionMismatch { expected: d12, got: row.len() });
            }
            if let Some(v) = row.iter().find(|v| v.len() != d13) {
                return Err(Error::DimensionMismatch { expected: d13, got: v.len() });
            }
        }
        Ok(())
    }

    /// `(dim x₂₃⁻, dim x₁₂⁻, dim x₁₃⁻)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.gram_23.len(), self.gram_12.len(), self.gram_13.len())
    }

    pub fn order(&self) -> usize {
        self.gram_23.len()
    }

    pub fn is_special(&self) -> bool {
        self.gram_12.len() == self.gram_13.len()
    }

    /// Gram matrix of `x₂₃⁻`, `x₁₂⁻` or `x₁₃⁻` (`which` = 23, 12 or 13).
    pub fn gram(&self, which: u8) -> ExactMatrix {
        match which {
            23 => rows_to_matrix(&self.gram_23),
            12 => rows_to_matrix(&self.gram_12),
            13 => rows_to_matrix(&self.gram_13),
            _ => panic!("no block {which}"),
        }
    }

    pub fn value(&self, a: usize, b: usize) -> ExactVector {
        ExactVector::from_vec(self.psi[a][b].clone())
    }

    /// `⟨ψ(X,Y), ψ(X,Y)⟩ − ⟨X,X⟩⟨Y,Y⟩` in the coordinates of `X` then `Y`.
    pub fn isometry_residual(&self) -> HomoPoly {
        let (d23, d12, d13) = self.dims();
        let n = d23 + d12;
        let var = |k: usize| HomoPoly::variable(n, k);
        let quad = |g: &ExactMatrix, off: usize| {
            let mut q = HomoPoly::zero(n, 2);
            for a in 0..g.nrows() {
                for b in 0..g.nrows() {
                    if !g[(a, b)].is_zero() {
                        q = q.add(&var(off + a).mul(&var(off + b)).scale(&g[(a, b)])).expect("same degree");
                    }
                }
            }
            q
        };
        let mut comps = vec![HomoPoly::zero(n, 2); d13];
        for a in 0..d23 {
            for b in 0..d12 {
                let xy = var(a).mul(&var(d23 + b));
                for (c, comp) in comps.iter_mut().enumerate() {
                    if !self.psi[a][b][c].is_zero() {
                        *comp = comp.add(&xy.scale(&self.psi[a][b][c])).expect("same degree");
                    }
                }
            }
        }
        let g13 = self.gram(13);
        let mut lhs = HomoPoly::zero(n, 4);
        for c in 0..d13 {
            for e in 0..d13 {
                if !g13[(c, e)].is_zero() {
                    lhs = lhs.add(&comps[c].mul(&comps[e]).scale(&g13[(c, e)])).expect("same degree");
                }
            }
        }
        if d23 == 0 {
            return lhs;
        }
        let rhs = quad(&self.gram(23), 0).mul(&quad(&self.gram(12), d23));
        lhs.sub(&rhs).expect("same degree")
    }

    pub fn check_isometric(&self) -> Result<()> {
        self.validate()?;
        let r = self.isometry_residual();
        if r.is_zero() {
            Ok(())
        } else {
            Err(Error::NotIsometric(r.to_string()))
        }
    }

    /// `ψᵗ: x₂₃⁻ × x₁₃⁻ → x₁₂⁻` with `⟨ψᵗ(X, Z), Y⟩ = ⟨Z, ψ(X, Y)⟩`.
    pub fn transpose(&self) -> Result<IsometricMap> {
        let (d23, d12, d13) = self.dims();
        let g12 = self.gram(12);
        let g13 = self.gram(13);
        let g12_inv = if d12 == 0 { g12.clone() } else { inverse_exact(&g12).ok_or(Error::DegenerateMetric(d12))? };
        let mut psi = vec![vec![vec![Surd::zero(); d12]; d13]; d23];
        for (a, out) in psi.iter_mut().enumerate() {
            for (c, slot) in out.iter_mut().enumerate() {
                // w_b = ⟨f_c, ψ(e_a, e_b)⟩
                let w = ExactVector::from_fn(d12, |b, _| (&g13 * self.value(a, b))[c].clone());
                let t = &g12_inv * w;
                *slot = t.iter().cloned().collect();
            }
        }
        Ok(IsometricMap {
            name: format!("{}^t", self.name),
            gram_23: self.gram_23.clone(),
            gram_12: self.gram_13.clone(),
            gram_13: self.gram_12.clone(),
            psi,
        })
    }

    /// The same map with the scalar products of the three spaces multiplied
    /// by the given signs.
    pub fn with_signs(&self, s23: i64, s12: i64, s13: i64) -> IsometricMap {
        let scale = |g: &Vec<Vec<Surd>>, s: i64| -> Vec<Vec<Surd>> {
            g.iter().map(|r| r.iter().map(|v| v * &Surd::from(s)).collect()).collect()
        };
        IsometricMap {
            name: format!("{}[{s23},{s12},{s13}]", self.name),
            gram_23: scale(&self.gram_23, s23),
            gram_12: scale(&self.gram_12, s12),
            gram_13: scale(&self.gram_13, s13),
            psi: self.psi.clone(),
        }
    }
}

fn complex_product(a: usize, b: usize) -> (usize, i64) {
    match (a, b) {
        (0, x) | (x, 0) => (x, 1),
        _ => (0, -1),
    }
}

fn quaternion_product(a: usize, b: usize) -> (usize, i64) {
    // basis 1, i, j, k
    const T: [[(usize, i64); 4]; 4] = [
        [(0, 1), (1, 1), (2, 1), (3, 1)],
        [(1, 1), (0, -1), (3, 1), (2, -1)],
        [(2, 1), (3, -1), (0, -1), (1, 1)],
        [(3, 1), (2, 1), (1, -1), (0, -1)],
    ];
    T[a][b]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_brackets() {
        let e = build_elementary(1, &Surd::from(1)).unwrap();
        // [X, JX] = G for a unit X
        assert_eq!(e.bracket_basis(2, 3), e.basis_vector(1));
        assert!(e.verify().passed());
        let key = build_elementary(0, &Surd::sqrt(3)).unwrap();
        assert_eq!(key.dim(), 2);
        assert_eq!(key.bracket_basis(0, 1)[1], Surd::sqrt(3));
    }

    #[test]
    fn composition_maps_are_isometric() {
        for d in [1, 2, 4] {
            let m = IsometricMap::composition(d).unwrap();
            m.check_isometric().unwrap();
            m.transpose().unwrap().check_isometric().unwrap();
        }
        IsometricMap::line_into_plane().check_isometric().unwrap();
        IsometricMap::zero(2, 3).check_isometric().unwrap();
        let mut bad = IsometricMap::composition(2).unwrap();
        bad.psi[1][1][0] = Surd::from(1);
        assert!(matches!(bad.check_isometric(), Err(Error::NotIsometric(_))));
    }

    #[test]
    fn json_round_trip() {
        let m = IsometricMap::composition(4).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        let back = IsometricMap::from_json(&text).unwrap();
        assert_eq!(back.psi, m.psi);
    }

    #[test]
    fn rank2_small_cases() {
        let a = build_u0_rank2(0, 1).unwrap();
        assert_eq!(a.h, HomoPoly::parse("x1*x2", 2).unwrap());
        let b = build_u0_rank2(0, 2).unwrap();
        assert_eq!(b.h, HomoPoly::parse("1/2*x1*x2^2", 2).unwrap());
        let c = build_u0_rank2(2, 2).unwrap();
        assert_eq!(c.algebra.dim(), 8);
        let b0 = &c.structure.b0;
        assert_eq!(c.algebra.inner(b0, b0), Surd::from(3));
    }
}
