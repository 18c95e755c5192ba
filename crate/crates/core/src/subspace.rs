//! Real-linear subspaces of u(n) and iu(n) represented by orthonormal
//! matrix bases: canonical bases for the classical subalgebras and their
//! complements, projection/membership, and closure checks for commutator
//! and anticommutator relations.

use rand::Rng;

use crate::error::{CartanError, Result};
use crate::matrix::{
    anticommutator, c64, commutator, elementary, gram_schmidt, hs_inner, hs_norm, max_abs,
    square_dim, CMatrix, Tolerance,
};

/// Whether a basis lives in u(n) (skew-Hermitian) or iu(n) (Hermitian).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hermiticity {
    SkewHermitian,
    Hermitian,
}

impl Hermiticity {
    fn defect(&self, m: &CMatrix) -> f64 {
        match self {
            Hermiticity::SkewHermitian => max_abs(&(m + m.adjoint())),
            Hermiticity::Hermitian => max_abs(&(m - m.adjoint())),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Hermiticity::SkewHermitian => "skew-Hermitian",
            Hermiticity::Hermitian => "Hermitian",
        }
    }

    fn flipped(&self) -> Hermiticity {
        match self {
            Hermiticity::SkewHermitian => Hermiticity::Hermitian,
            Hermiticity::Hermitian => Hermiticity::SkewHermitian,
        }
    }
}

/// A real-linear subspace of u(n) or iu(n) spanned by a Hilbert-Schmidt
/// orthonormal list of matrices.
#[derive(Debug, Clone)]
pub struct MatrixSubspace {
    ambient_dim: usize,
    hermiticity: Hermiticity,
    basis: Vec<CMatrix>,
}

impl MatrixSubspace {
    /// Build from an already orthonormal basis, validating orthonormality
    /// and the hermiticity flag.
    pub fn from_orthonormal(
        ambient_dim: usize,
        hermiticity: Hermiticity,
        basis: Vec<CMatrix>,
        tol: &Tolerance,
    ) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(CartanError::InvalidParameter("ambient dimension 0".into()));
        }
        if basis.len() > ambient_dim * ambient_dim {
            return Err(CartanError::InvalidParameter(format!(
                "{} basis elements exceed dim u({ambient_dim}) = {}",
                basis.len(),
                ambient_dim * ambient_dim
            )));
        }
        for m in &basis {
            if square_dim(m)? != ambient_dim {
                return Err(CartanError::DimensionMismatch(ambient_dim, m.nrows()));
            }
            let defect = hermiticity.defect(m);
            if defect > tol.atol {
                return Err(CartanError::HermiticityViolation {
                    expected: hermiticity.name(),
                    defect,
                });
            }
        }
        let mut worst = 0.0_f64;
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate().skip(i) {
                let g = hs_inner(a, b)?;
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - c64(expect, 0.0)).norm());
            }
        }
        if worst > tol.rank_tol {
            return Err(CartanError::NotOrthonormal(worst));
        }
        Ok(Self {
            ambient_dim,
            hermiticity,
            basis,
        })
    }

    /// Orthonormalize the given spanning set and keep what survives.
    pub fn span(
        ambient_dim: usize,
        hermiticity: Hermiticity,
        mats: &[CMatrix],
        tol: &Tolerance,
    ) -> Result<Self> {
        for m in mats {
            if square_dim(m)? != ambient_dim {
                return Err(CartanError::DimensionMismatch(ambient_dim, m.nrows()));
            }
            let defect = hermiticity.defect(m);
            if defect > tol.rank_tol {
                return Err(CartanError::HermiticityViolation {
                    expected: hermiticity.name(),
                    defect,
                });
            }
        }
        let basis = gram_schmidt(mats, tol)?;
        Ok(Self {
            ambient_dim,
            hermiticity,
            basis,
        })
    }

    /// Internal constructor for bases that are orthonormal by construction.
    pub(crate) fn from_parts(
        ambient_dim: usize,
        hermiticity: Hermiticity,
        basis: Vec<CMatrix>,
    ) -> Self {
        Self {
            ambient_dim,
            hermiticity,
            basis,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn hermiticity(&self) -> Hermiticity {
        self.hermiticity
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    /// Orthogonal projection with real coefficients. Returns the component
    /// in the subspace and the Hilbert-Schmidt norm of what is left over
    /// (imaginary parts of the inner products count toward the residual).
    pub fn project(&self, m: &CMatrix) -> Result<(CMatrix, f64)> {
        if square_dim(m)? != self.ambient_dim {
            return Err(CartanError::DimensionMismatch(self.ambient_dim, m.nrows()));
        }
        let mut component = CMatrix::zeros(self.ambient_dim, self.ambient_dim);
        for b in &self.basis {
            let coef = hs_inner(m, b)?.re;
            component += b * c64(coef, 0.0);
        }
        let residual = hs_norm(&(m - &component));
        Ok((component, residual))
    }

    /// Membership test: residual below `tol * max(1, |M|)`.
    pub fn contains(&self, m: &CMatrix, tol: f64) -> Result<bool> {
        let (_, residual) = self.project(m)?;
        Ok(residual <= tol * hs_norm(m).max(1.0))
    }

    /// The subspace i * self, which flips the hermiticity flag.
    pub fn times_i(&self) -> MatrixSubspace {
        let basis = self.basis.iter().map(|b| b * c64(0.0, 1.0)).collect();
        Self {
            ambient_dim: self.ambient_dim,
            hermiticity: self.hermiticity.flipped(),
            basis,
        }
    }

    /// Orthogonal direct sum of two subspaces of the same ambient algebra.
    pub fn direct_sum(&self, other: &MatrixSubspace, tol: &Tolerance) -> Result<MatrixSubspace> {
        if self.ambient_dim != other.ambient_dim {
            return Err(CartanError::DimensionMismatch(self.ambient_dim, other.ambient_dim));
        }
        if self.hermiticity != other.hermiticity {
            return Err(CartanError::InvalidParameter(
                "direct sum of subspaces with different hermiticity flags".into(),
            ));
        }
        let mut mats: Vec<CMatrix> = self.basis.clone();
        mats.extend(other.basis.iter().cloned());
        let joined = MatrixSubspace::span(self.ambient_dim, self.hermiticity, &mats, tol)?;
        if joined.dimension() != self.dimension() + other.dimension() {
            return Err(CartanError::InvalidParameter(
                "direct sum of non-transversal subspaces".into(),
            ));
        }
        Ok(joined)
    }
}

/// Canonical subspaces of u(n), enumerated with diagonal generators first
/// and then the upper-triangle pair generators in row-major order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalAlgebra {
    /// u(n), dimension n^2.
    U(usize),
    /// su(n), dimension n^2 - 1.
    Su(usize),
    /// so(n): real antisymmetric matrices, dimension n(n-1)/2.
    So(usize),
    /// sp(n/2) embedded in u(n) (n even): AJ + JA^T = 0, dimension n(n+1)/2.
    Sp { n: usize },
    /// Orthogonal complement of so(n) inside u(n): purely imaginary
    /// skew-Hermitian matrices, dimension n(n+1)/2.
    SoPerp(usize),
    /// Orthogonal complement of sp(n/2) inside u(n), dimension n(n-1)/2.
    SpPerp { n: usize },
    /// Block-diagonal u(p) + u(q) inside u(p+q), dimension p^2 + q^2.
    AiiiK { p: usize, q: usize },
    /// Off-diagonal complement of the AIII block algebra, dimension 2pq.
    AiiiP { p: usize, q: usize },
}

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        return Err(CartanError::InvalidParameter("dimension must be >= 1".into()));
    }
    Ok(())
}

/// Orthonormal u(n) generators: i E_kk, then per pair (j,k) the real
/// antisymmetric and imaginary symmetric combinations.
fn u_generators(n: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(n * n);
    for k in 0..n {
        out.push(elementary(n, k, k) * c64(0.0, 1.0));
    }
    let s = 1.0 / 2.0_f64.sqrt();
    for j in 0..n {
        for k in (j + 1)..n {
            out.push((elementary(n, j, k) - elementary(n, k, j)) * c64(s, 0.0));
            out.push((elementary(n, j, k) + elementary(n, k, j)) * c64(0.0, s));
        }
    }
    out
}

/// Traceless diagonal generators i * diag(1,..,1,-m,0,..)/sqrt(m(m+1)).
fn su_diagonal_generators(n: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(n - 1);
    for m in 1..n {
        let norm = (m as f64 * (m as f64 + 1.0)).sqrt();
        let mut d = CMatrix::zeros(n, n);
        for k in 0..m {
            d[(k, k)] = c64(0.0, 1.0 / norm);
        }
        d[(m, m)] = c64(0.0, -(m as f64) / norm);
        out.push(d);
    }
    out
}

/// Place `block` into an n x n zero matrix with its (0,0) entry at
/// (row, col).
fn embed_block(n: usize, row: usize, col: usize, block: &CMatrix) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for i in 0..block.nrows() {
        for j in 0..block.ncols() {
            m[(row + i, col + j)] = block[(i, j)];
        }
    }
    m
}

/// [[w, 0], [0, sign * w^T]] / sqrt(2)
pub(crate) fn paired_diagonal_blocks(n: usize, w: &CMatrix, sign: f64) -> CMatrix {
    let m = n / 2;
    let s = 1.0 / 2.0_f64.sqrt();
    let mut out = embed_block(n, 0, 0, w);
    let wt = w.transpose();
    for i in 0..m {
        for j in 0..m {
            out[(m + i, m + j)] = wt[(i, j)] * sign;
        }
    }
    out * c64(s, 0.0)
}

/// [[0, x], [-x^dagger, 0]] / sqrt(2)
pub(crate) fn off_diagonal_blocks(n: usize, x: &CMatrix) -> CMatrix {
    let m = n / 2;
    let s = 1.0 / 2.0_f64.sqrt();
    let mut out = embed_block(n, 0, m, x);
    let lower = -x.adjoint();
    for i in 0..m {
        for j in 0..m {
            out[(m + i, j)] = lower[(i, j)];
        }
    }
    out * c64(s, 0.0)
}

/// Complex symmetric basis of m x m matrices: diagonal entries first
/// (real, then imaginary), then the (j,k) pairs.
fn symmetric_generators(m: usize) -> Vec<CMatrix> {
    let mut out = Vec::new();
    for j in 0..m {
        out.push(elementary(m, j, j));
        out.push(elementary(m, j, j) * c64(0.0, 1.0));
    }
    let s = 1.0 / 2.0_f64.sqrt();
    for j in 0..m {
        for k in (j + 1)..m {
            let sym = (elementary(m, j, k) + elementary(m, k, j)) * c64(s, 0.0);
            out.push(sym.clone());
            out.push(sym * c64(0.0, 1.0));
        }
    }
    out
}

/// Complex antisymmetric basis of m x m matrices.
pub(crate) fn antisymmetric_generators(m: usize) -> Vec<CMatrix> {
    let mut out = Vec::new();
    let s = 1.0 / 2.0_f64.sqrt();
    for j in 0..m {
        for k in (j + 1)..m {
            let anti = (elementary(m, j, k) - elementary(m, k, j)) * c64(s, 0.0);
            out.push(anti.clone());
            out.push(anti * c64(0.0, 1.0));
        }
    }
    out
}

/// Orthonormal basis of the named canonical subspace.
pub fn canonical_basis(algebra: CanonicalAlgebra) -> Result<MatrixSubspace> {
    let (n, basis) = match algebra {
        CanonicalAlgebra::U(n) => {
            check_dim(n)?;
            (n, u_generators(n))
        }
        CanonicalAlgebra::Su(n) => {
            check_dim(n)?;
            let mut basis = su_diagonal_generators(n);
            basis.extend(u_generators(n).into_iter().skip(n));
            (n, basis)
        }
        CanonicalAlgebra::So(n) => {
            check_dim(n)?;
            let s = 1.0 / 2.0_f64.sqrt();
            let mut basis = Vec::new();
            for j in 0..n {
                for k in (j + 1)..n {
                    basis.push((elementary(n, j, k) - elementary(n, k, j)) * c64(s, 0.0));
                }
            }
            (n, basis)
        }
        CanonicalAlgebra::SoPerp(n) => {
            check_dim(n)?;
            let s = 1.0 / 2.0_f64.sqrt();
            let mut basis = Vec::new();
            for k in 0..n {
                basis.push(elementary(n, k, k) * c64(0.0, 1.0));
            }
            for j in 0..n {
                for k in (j + 1)..n {
                    basis.push((elementary(n, j, k) + elementary(n, k, j)) * c64(0.0, s));
                }
            }
            (n, basis)
        }
        CanonicalAlgebra::Sp { n } => {
            check_dim(n)?;
            if n % 2 != 0 {
                return Err(CartanError::InvalidParameter(format!(
                    "sp(n/2) requires even n, got {n}"
                )));
            }
            let m = n / 2;
            let mut basis = Vec::new();
            for w in u_generators(m) {
                basis.push(paired_diagonal_blocks(n, &w, -1.0));
            }
            for x in symmetric_generators(m) {
                basis.push(off_diagonal_blocks(n, &x));
            }
            (n, basis)
        }
        CanonicalAlgebra::SpPerp { n } => {
            check_dim(n)?;
            if n % 2 != 0 {
                return Err(CartanError::InvalidParameter(format!(
                    "sp(n/2)^perp requires even n, got {n}"
                )));
            }
            let m = n / 2;
            let mut basis = Vec::new();
            for w in u_generators(m) {
                basis.push(paired_diagonal_blocks(n, &w, 1.0));
            }
            for x in antisymmetric_generators(m) {
                basis.push(off_diagonal_blocks(n, &x));
            }
            (n, basis)
        }
        CanonicalAlgebra::AiiiK { p, q } => {
            if p == 0 || q == 0 {
                return Err(CartanError::InvalidParameter(format!(
                    "AIII requires p, q > 0, got ({p}, {q})"
                )));
            }
            let n = p + q;
            let mut basis = Vec::new();
            for r in u_generators(p) {
                basis.push(embed_block(n, 0, 0, &r));
            }
            for s in u_generators(q) {
                basis.push(embed_block(n, p, p, &s));
            }
            (n, basis)
        }
        CanonicalAlgebra::AiiiP { p, q } => {
            if p == 0 || q == 0 {
                return Err(CartanError::InvalidParameter(format!(
                    "AIII requires p, q > 0, got ({p}, {q})"
                )));
            }
            let n = p + q;
            let s = 1.0 / 2.0_f64.sqrt();
            let mut basis = Vec::new();
            for j in 0..p {
                for k in 0..q {
                    let mut re = CMatrix::zeros(n, n);
                    re[(j, p + k)] = c64(s, 0.0);
                    re[(p + k, j)] = c64(-s, 0.0);
                    basis.push(re);
                    let mut im = CMatrix::zeros(n, n);
                    im[(j, p + k)] = c64(0.0, s);
                    im[(p + k, j)] = c64(0.0, s);
                    basis.push(im);
                }
            }
            (n, basis)
        }
    };
    Ok(MatrixSubspace::from_parts(n, Hermiticity::SkewHermitian, basis))
}

/// Which bilinear bracket a closure check uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketKind {
    Commutator,
    Anticommutator,
}

impl BracketKind {
    pub(crate) fn apply(&self, a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
        match self {
            BracketKind::Commutator => commutator(a, b),
            BracketKind::Anticommutator => anticommutator(a, b),
        }
    }
}

/// Default tolerance for closure residuals; looser than `atol` because a
/// bracket compounds rounding from two products.
pub const DEFAULT_CLOSURE_TOL: f64 = 1e-9;

/// Evidence record for one closure relation.
#[derive(Debug, Clone)]
pub struct ClosureReport {
    pub bracket_kind: BracketKind,
    pub pairs_checked: usize,
    pub max_residual: f64,
    /// Basis index pair attaining the max residual; the smallest index pair
    /// wins ties. `None` when no pairs were checked.
    pub worst_pair: Option<(usize, usize)>,
    pub tol: f64,
    pub passed: bool,
}

fn closure_over_pairs<I>(
    s1: &MatrixSubspace,
    s2: &MatrixSubspace,
    target: &MatrixSubspace,
    kind: BracketKind,
    tol: f64,
    pairs: I,
) -> Result<ClosureReport>
where
    I: Iterator<Item = (usize, usize)>,
{
    if s1.ambient_dim() != s2.ambient_dim() || s1.ambient_dim() != target.ambient_dim() {
        return Err(CartanError::DimensionMismatch(s1.ambient_dim(), target.ambient_dim()));
    }
    let mut max_residual = 0.0_f64;
    let mut worst_pair = None;
    let mut pairs_checked = 0usize;
    for (i, j) in pairs {
        let bracket = kind.apply(&s1.basis[i], &s2.basis[j])?;
        let (_, residual) = target.project(&bracket)?;
        if worst_pair.is_none() || residual > max_residual {
            max_residual = residual;
            worst_pair = Some((i, j));
        }
        pairs_checked += 1;
    }
    Ok(ClosureReport {
        bracket_kind: kind,
        pairs_checked,
        max_residual,
        worst_pair,
        tol,
        passed: max_residual <= tol,
    })
}

/// Exhaustive closure check: every ordered basis pair of (S1, S2) is
/// bracketed and projected onto the target.
pub fn closure_check(
    s1: &MatrixSubspace,
    s2: &MatrixSubspace,
    target: &MatrixSubspace,
    kind: BracketKind,
    tol: f64,
) -> Result<ClosureReport> {
    let d1 = s1.dimension();
    let d2 = s2.dimension();
    closure_over_pairs(
        s1,
        s2,
        target,
        kind,
        tol,
        (0..d1).flat_map(move |i| (0..d2).map(move |j| (i, j))),
    )
}

/// Seeded random sampling over basis pairs, for spaces too large to check
/// exhaustively.
pub fn closure_check_sampled(
    s1: &MatrixSubspace,
    s2: &MatrixSubspace,
    target: &MatrixSubspace,
    kind: BracketKind,
    tol: f64,
    pairs: usize,
    rng: &mut impl Rng,
) -> Result<ClosureReport> {
    let d1 = s1.dimension();
    let d2 = s2.dimension();
    if d1 == 0 || d2 == 0 {
        return closure_over_pairs(s1, s2, target, kind, tol, std::iter::empty());
    }
    let draws: Vec<(usize, usize)> = (0..pairs)
        .map(|_| (rng.random_range(0..d1), rng.random_range(0..d2)))
        .collect();
    closure_over_pairs(s1, s2, target, kind, tol, draws.into_iter())
}

/// Expand a bracket of tensor products into single-factor brackets:
/// `[A (x) B, C (x) D] = ([A,C] (x) {B,D} + {A,C} (x) [B,D]) / 2` and
/// `{A (x) B, C (x) D} = ([A,C] (x) [B,D] + {A,C} (x) {B,D}) / 2`.
pub fn tensor_bracket_expand(
    a: &CMatrix,
    b: &CMatrix,
    c: &CMatrix,
    d: &CMatrix,
    kind: BracketKind,
) -> Result<CMatrix> {
    let comm_ac = commutator(a, c)?;
    let acomm_ac = anticommutator(a, c)?;
    let comm_bd = commutator(b, d)?;
    let acomm_bd = anticommutator(b, d)?;
    let sum = match kind {
        BracketKind::Commutator => comm_ac.kronecker(&acomm_bd) + acomm_ac.kronecker(&comm_bd),
        BracketKind::Anticommutator => comm_ac.kronecker(&comm_bd) + acomm_ac.kronecker(&acomm_bd),
    };
    Ok(sum * c64(0.5, 0.0))
}
