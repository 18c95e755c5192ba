//! State-space symmetries Theta = X K, Cartan involutions of u(n), and the
//! one-to-one correspondence between them: checking the Cartan property,
//! the induced maps on skew-Hermitian and Hermitian operators, eigenspace
//! splits, and classification into the canonical types AI / AII / AIII.

use crate::error::{CartanError, Result};
use crate::matrix::{
    c64, is_unitary, signature_matrix, square_dim, symplectic_j, unitary_defect, CMatrix, Tolerance,
};
use crate::subspace::{canonical_basis, CanonicalAlgebra, Hermiticity, MatrixSubspace};

/// Unitary or antiunitary, per Wigner's dichotomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryKind {
    Unitary,
    Antiunitary,
}

/// A symmetry Theta = X K in a fixed basis: a unitary matrix X composed
/// with entrywise conjugation K (K = identity in the unitary case).
#[derive(Debug, Clone)]
pub struct Symmetry {
    kind: SymmetryKind,
    x: CMatrix,
}

impl Symmetry {
    pub fn new(kind: SymmetryKind, x: CMatrix, tol: &Tolerance) -> Result<Self> {
        if !is_unitary(&x, tol) {
            return Err(CartanError::NotUnitary(unitary_defect(&x)));
        }
        Ok(Self { kind, x })
    }

    pub fn kind(&self) -> SymmetryKind {
        self.kind
    }

    pub fn x(&self) -> &CMatrix {
        &self.x
    }

    pub fn dim(&self) -> usize {
        self.x.nrows()
    }

    /// Action on a state vector: X v for unitary, X conj(v) for antiunitary.
    pub fn apply_state(&self, v: &nalgebra::DVector<crate::matrix::C64>) -> Result<nalgebra::DVector<crate::matrix::C64>> {
        if v.len() != self.dim() {
            return Err(CartanError::DimensionMismatch(self.dim(), v.len()));
        }
        Ok(match self.kind {
            SymmetryKind::Unitary => &self.x * v,
            SymmetryKind::Antiunitary => &self.x * v.map(|z| z.conj()),
        })
    }
}

/// Result of the Cartan-symmetry test `X conj(X) = e^{i phi} I` (antiunitary)
/// or `X^2 = e^{i phi} I` (unitary).
#[derive(Debug, Clone, Copy)]
pub struct CartanCheckResult {
    pub is_cartan: bool,
    /// Phase of the scalar, in (-pi, pi]; present only when `is_cartan`.
    pub phase: Option<f64>,
    /// Largest entry of `M - e^{i phi} I`.
    pub residual: f64,
}

/// Decide whether Theta squares to a phase times the identity.
///
/// The phase is extracted from the mean diagonal entry of the squared
/// operator, which is robust to entrywise noise.
pub fn is_cartan_symmetry(s: &Symmetry, tol: f64) -> CartanCheckResult {
    let n = s.dim();
    let m = match s.kind {
        SymmetryKind::Antiunitary => &s.x * s.x.conjugate(),
        SymmetryKind::Unitary => &s.x * &s.x,
    };
    let mut mean = c64(0.0, 0.0);
    for k in 0..n {
        mean += m[(k, k)];
    }
    mean /= n as f64;
    let phase = mean.arg();
    let target = crate::matrix::C64::from_polar(1.0, phase);
    let mut residual = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j { target } else { c64(0.0, 0.0) };
            residual = residual.max((m[(i, j)] - expect).norm());
        }
    }
    let is_cartan = residual <= tol;
    CartanCheckResult {
        is_cartan,
        phase: is_cartan.then_some(phase),
        residual,
    }
}

fn sandwich(s: &Symmetry, m: &CMatrix) -> Result<CMatrix> {
    if square_dim(m)? != s.dim() {
        return Err(CartanError::DimensionMismatch(s.dim(), m.nrows()));
    }
    Ok(match s.kind {
        SymmetryKind::Antiunitary => &s.x * m.conjugate() * s.x.adjoint(),
        SymmetryKind::Unitary => &s.x * m * s.x.adjoint(),
    })
}

/// The transformation induced on u(n): `theta(A) = X conj(A) X^dagger`
/// (antiunitary) or `X A X^dagger` (unitary).
pub fn induced_map(s: &Symmetry, a: &CMatrix) -> Result<CMatrix> {
    sandwich(s, a)
}

/// The transformation induced on observables, `Theta (iA) Theta^{-1}`.
/// Satisfies `map(iA) = -i induced_map(A)` for antiunitary symmetries and
/// `+i induced_map(A)` for unitary ones, exactly as operators.
pub fn induced_observable_map(s: &Symmetry, h: &CMatrix) -> Result<CMatrix> {
    sandwich(s, h)
}

/// Canonical Cartan type of su(n)/u(n) decompositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalType {
    AI,
    AII,
    AIII { p: usize, q: usize },
}

impl std::fmt::Display for CanonicalType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CanonicalType::AI => write!(f, "AI"),
            CanonicalType::AII => write!(f, "AII"),
            CanonicalType::AIII { p, q } => write!(f, "AIII({p},{q})"),
        }
    }
}

/// A Cartan involution in canonical form, optionally conjugated by a
/// unitary T: theta(B) = T theta_0(T^* B T) T^* with theta_0 the canonical
/// involution of the given type.
#[derive(Debug, Clone)]
pub struct CartanInvolution {
    ctype: CanonicalType,
    n: usize,
    t: Option<CMatrix>,
}

impl CartanInvolution {
    pub fn new(ctype: CanonicalType, n: usize, t: Option<CMatrix>, tol: &Tolerance) -> Result<Self> {
        if n == 0 {
            return Err(CartanError::InvalidParameter("dimension must be >= 1".into()));
        }
        match ctype {
            CanonicalType::AII if n % 2 != 0 => {
                return Err(CartanError::InvalidParameter(format!(
                    "AII requires even dimension, got {n}"
                )));
            }
            CanonicalType::AIII { p, q } if p == 0 || q == 0 || p + q != n => {
                return Err(CartanError::InvalidParameter(format!(
                    "AIII requires p, q > 0 with p + q = {n}, got ({p}, {q})"
                )));
            }
            _ => {}
        }
        if let Some(t) = &t {
            if square_dim(t)? != n {
                return Err(CartanError::DimensionMismatch(n, t.nrows()));
            }
            if !is_unitary(t, tol) {
                return Err(CartanError::NotUnitary(unitary_defect(t)));
            }
        }
        Ok(Self { ctype, n, t })
    }

    pub fn canonical_type(&self) -> CanonicalType {
        self.ctype
    }

    pub fn conjugating_t(&self) -> Option<&CMatrix> {
        self.t.as_ref()
    }

    fn check_dim(&self, m: &CMatrix) -> Result<()> {
        if square_dim(m)? != self.n {
            return Err(CartanError::DimensionMismatch(self.n, m.nrows()));
        }
        Ok(())
    }

    /// The conjugated canonical formula, applied to any matrix:
    /// AI: T T^T conj(M) conj(T) T^dagger;
    /// AII: T J T^T conj(M) conj(T) J^{-1} T^dagger;
    /// AIII: T I_pq T^dagger M T I_pq T^dagger.
    fn formula(&self, m: &CMatrix) -> Result<CMatrix> {
        let out = match self.ctype {
            CanonicalType::AI => {
                let cm = m.conjugate();
                match &self.t {
                    None => cm,
                    Some(t) => t * t.transpose() * cm * t.conjugate() * t.adjoint(),
                }
            }
            CanonicalType::AII => {
                let j = symplectic_j(self.n)?;
                let jinv = -&j;
                let cm = m.conjugate();
                match &self.t {
                    None => &j * cm * jinv,
                    Some(t) => {
                        t * &j * t.transpose() * cm * t.conjugate() * jinv * t.adjoint()
                    }
                }
            }
            CanonicalType::AIII { p, q } => {
                let ipq = signature_matrix(p, q)?;
                match &self.t {
                    None => &ipq * m * &ipq,
                    Some(t) => {
                        let x = t * &ipq * t.adjoint();
                        &x * m * &x
                    }
                }
            }
        };
        Ok(out)
    }
}

/// Abstraction over involutions of u(n): canonical ones and maps induced
/// by Cartan symmetries. `apply` acts on the Lie algebra, `apply_group`
/// lifts the same automorphism to the unitary group. The kind records
/// whether the companion symmetry is unitary (AIII family) or antiunitary
/// (AI/AII family).
pub trait Involution {
    fn dim(&self) -> usize;
    fn kind(&self) -> SymmetryKind;
    fn apply(&self, b: &CMatrix) -> Result<CMatrix>;
    fn apply_group(&self, u: &CMatrix) -> Result<CMatrix>;
}

impl Involution for CartanInvolution {
    fn dim(&self) -> usize {
        self.n
    }

    fn kind(&self) -> SymmetryKind {
        match self.ctype {
            CanonicalType::AI | CanonicalType::AII => SymmetryKind::Antiunitary,
            CanonicalType::AIII { .. } => SymmetryKind::Unitary,
        }
    }

    fn apply(&self, b: &CMatrix) -> Result<CMatrix> {
        self.check_dim(b)?;
        self.formula(b)
    }

    fn apply_group(&self, u: &CMatrix) -> Result<CMatrix> {
        self.check_dim(u)?;
        self.formula(u)
    }
}

/// The Cartan symmetry corresponding to a canonical involution:
/// AI: Theta = T conj(T)^* K; AII: Theta = T J conj(T)^* K;
/// AIII: Theta = T I_pq T^*.
pub fn symmetry_from_involution(inv: &CartanInvolution) -> Result<Symmetry> {
    let n = inv.n;
    let x = match inv.ctype {
        CanonicalType::AI => match &inv.t {
            None => CMatrix::identity(n, n),
            Some(t) => t * t.transpose(),
        },
        CanonicalType::AII => {
            let j = symplectic_j(n)?;
            match &inv.t {
                None => j,
                Some(t) => t * j * t.transpose(),
            }
        }
        CanonicalType::AIII { p, q } => {
            let ipq = signature_matrix(p, q)?;
            match &inv.t {
                None => ipq,
                Some(t) => t * ipq * t.adjoint(),
            }
        }
    };
    let kind = match inv.ctype {
        CanonicalType::AI | CanonicalType::AII => SymmetryKind::Antiunitary,
        CanonicalType::AIII { .. } => SymmetryKind::Unitary,
    };
    Symmetry::new(kind, x, &Tolerance::default())
}

/// The involution induced by a Cartan symmetry, kept as the symmetry it
/// came from. Computing a conjugating T in canonical form is out of scope;
/// the map itself is what downstream consumers need.
#[derive(Debug, Clone)]
pub struct InducedInvolution {
    symmetry: Symmetry,
}

impl InducedInvolution {
    /// Wrap a symmetry that is already known (or checked here) to be
    /// Cartan, without computing an eigenspace split.
    pub fn from_cartan_symmetry(s: Symmetry, tol: &Tolerance) -> Result<Self> {
        let check = is_cartan_symmetry(&s, tol.rank_tol);
        if !check.is_cartan {
            return Err(CartanError::NotCartan(check.residual));
        }
        Ok(Self { symmetry: s })
    }

    pub fn symmetry(&self) -> &Symmetry {
        &self.symmetry
    }
}

impl Involution for InducedInvolution {
    fn dim(&self) -> usize {
        self.symmetry.dim()
    }

    fn kind(&self) -> SymmetryKind {
        self.symmetry.kind()
    }

    fn apply(&self, b: &CMatrix) -> Result<CMatrix> {
        sandwich(&self.symmetry, b)
    }

    fn apply_group(&self, u: &CMatrix) -> Result<CMatrix> {
        sandwich(&self.symmetry, u)
    }
}

/// Ambient algebra for an eigenspace split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ambient {
    U,
    Su,
}

/// The induced involution of a Cartan symmetry, together with its
/// eigenspace split over u(n). Fails with [`CartanError::NotCartan`] when
/// the symmetry does not square to a phase (equivalently, the induced map
/// is not involutive).
pub fn involution_from_symmetry(
    s: &Symmetry,
    tol: &Tolerance,
) -> Result<(InducedInvolution, (MatrixSubspace, MatrixSubspace))> {
    let check = is_cartan_symmetry(s, tol.rank_tol);
    if !check.is_cartan {
        return Err(CartanError::NotCartan(check.residual));
    }
    let inv = InducedInvolution { symmetry: s.clone() };
    let split = eigenspace_split(&inv, Ambient::U, tol)?;
    Ok((inv, split))
}

/// Split the ambient algebra into the +1 eigenspace K and -1 eigenspace P
/// of an involution, each as an orthonormal subspace.
pub fn eigenspace_split(
    theta: &dyn Involution,
    ambient: Ambient,
    tol: &Tolerance,
) -> Result<(MatrixSubspace, MatrixSubspace)> {
    let n = theta.dim();
    let basis = match ambient {
        Ambient::U => canonical_basis(CanonicalAlgebra::U(n))?,
        Ambient::Su => canonical_basis(CanonicalAlgebra::Su(n))?,
    };
    let mut worst = 0.0_f64;
    let mut plus = Vec::with_capacity(basis.dimension());
    let mut minus = Vec::with_capacity(basis.dimension());
    for b in basis.basis() {
        let tb = theta.apply(b)?;
        let ttb = theta.apply(&tb)?;
        worst = worst.max((&ttb - b).norm());
        plus.push((b + &tb) * c64(0.5, 0.0));
        minus.push((b - &tb) * c64(0.5, 0.0));
    }
    if worst > 10.0 * tol.rank_tol {
        return Err(CartanError::NotInvolutive(worst));
    }
    let k = MatrixSubspace::span(n, Hermiticity::SkewHermitian, &plus, tol)?;
    let p = MatrixSubspace::span(n, Hermiticity::SkewHermitian, &minus, tol)?;
    if k.dimension() + p.dimension() != basis.dimension() {
        return Err(CartanError::InvalidParameter(format!(
            "eigenspace dimensions {} + {} do not fill the ambient dimension {}",
            k.dimension(),
            p.dimension(),
            basis.dimension()
        )));
    }
    Ok((k, p))
}

/// Classify an involution by the dimension of its +1 eigenspace over u(n):
/// n(n-1)/2 for AI, n(n+1)/2 for AII (antiunitary family), p^2 + q^2 for
/// AIII (unitary family, p >= q recovered from the count).
pub fn classify_involution(theta: &dyn Involution, tol: &Tolerance) -> Result<CanonicalType> {
    let n = theta.dim();
    let (k, _) = eigenspace_split(theta, Ambient::U, tol)?;
    let dim_k = k.dimension();
    match theta.kind() {
        SymmetryKind::Antiunitary => {
            if dim_k == n * (n - 1) / 2 {
                Ok(CanonicalType::AI)
            } else if dim_k == n * (n + 1) / 2 {
                Ok(CanonicalType::AII)
            } else {
                Err(CartanError::MatchesNoType { dim_k, n })
            }
        }
        SymmetryKind::Unitary => {
            for q in 1..=(n / 2) {
                let p = n - q;
                if p * p + q * q == dim_k {
                    return Ok(CanonicalType::AIII { p, q });
                }
            }
            Err(CartanError::MatchesNoType { dim_k, n })
        }
    }
}
