//! Dense complex matrices, the Hilbert-Schmidt geometry, and tolerance policy.
//!
//! Everything downstream works with square `DMatrix<Complex<f64>>` values.
//! Matrices are treated as elements of the real vector spaces u(n) or iu(n),
//! so orthonormalization and projection use real coefficients of the
//! Hilbert-Schmidt inner product `<A,B> = Tr(A B^dagger)`.

use nalgebra::DMatrix;

use crate::error::{CartanError, Result};

pub type C64 = nalgebra::Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Shorthand complex constructor.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Comparison thresholds used across the crate.
///
/// `atol` is the absolute entrywise/residual tolerance; `rank_tol` decides
/// when a Gram-Schmidt remainder counts as zero. All matrices in scope have
/// entries of magnitude O(1), so absolute comparisons are appropriate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub atol: f64,
    pub rank_tol: f64,
}

impl Tolerance {
    pub fn new(atol: f64, rank_tol: f64) -> Result<Self> {
        if !(atol > 0.0) || !(rank_tol > 0.0) {
            return Err(CartanError::InvalidParameter(
                "tolerances must be strictly positive".into(),
            ));
        }
        if rank_tol < atol {
            return Err(CartanError::InvalidParameter(format!(
                "rank_tol {rank_tol:e} must be >= atol {atol:e}"
            )));
        }
        Ok(Self { atol, rank_tol })
    }

    /// Override the absolute tolerance, keeping `rank_tol >= atol`.
    pub fn with_atol(self, atol: f64) -> Result<Self> {
        Tolerance::new(atol, self.rank_tol.max(atol))
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            atol: 1e-10,
            rank_tol: 1e-8,
        }
    }
}

pub(crate) fn square_dim(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(CartanError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

pub(crate) fn same_dim(a: &CMatrix, b: &CMatrix) -> Result<usize> {
    let na = square_dim(a)?;
    let nb = square_dim(b)?;
    if na != nb {
        return Err(CartanError::DimensionMismatch(na, nb));
    }
    Ok(na)
}

/// Hilbert-Schmidt inner product `<A,B> = Tr(A B^dagger)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Result<C64> {
    same_dim(a, b)?;
    let mut acc = c64(0.0, 0.0);
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x * y.conj();
    }
    Ok(acc)
}

/// Hilbert-Schmidt (Frobenius) norm.
#[inline]
pub fn hs_norm(m: &CMatrix) -> f64 {
    m.norm()
}

/// Largest entry magnitude.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Commutator `[A,B] = AB - BA`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    same_dim(a, b)?;
    Ok(a * b - b * a)
}

/// Anticommutator `{A,B} = AB + BA`.
pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    same_dim(a, b)?;
    Ok(a * b + b * a)
}

pub fn is_hermitian(m: &CMatrix, tol: &Tolerance) -> bool {
    m.nrows() == m.ncols() && max_abs(&(m - m.adjoint())) <= tol.atol
}

pub fn is_skew_hermitian(m: &CMatrix, tol: &Tolerance) -> bool {
    m.nrows() == m.ncols() && max_abs(&(m + m.adjoint())) <= tol.atol
}

pub fn is_unitary(m: &CMatrix, tol: &Tolerance) -> bool {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return false;
    }
    let n = m.nrows();
    max_abs(&(m.adjoint() * m - CMatrix::identity(n, n))) <= tol.atol
}

pub fn is_real(m: &CMatrix, tol: &Tolerance) -> bool {
    m.iter().all(|z| z.im.abs() <= tol.atol)
}

/// Symplectic condition `AJ + JA^T = 0` with J the canonical skew form.
/// Matrices of odd dimension are never symplectic.
pub fn is_symplectic(m: &CMatrix, tol: &Tolerance) -> bool {
    let n = m.nrows();
    if n != m.ncols() || n == 0 || n % 2 != 0 {
        return false;
    }
    let j = symplectic_j(n).expect("even dimension");
    max_abs(&(m * &j + &j * m.transpose())) <= tol.atol
}

/// Unitarity defect `max |U^dagger U - I|`, for error reporting.
pub fn unitary_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    if n != m.ncols() || n == 0 {
        return f64::INFINITY;
    }
    max_abs(&(m.adjoint() * m - CMatrix::identity(n, n)))
}

/// Elementary matrix E_ij of size n.
pub fn elementary(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(i, j)] = c64(1.0, 0.0);
    m
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(0.0, -1.0), c64(0.0, 1.0), c64(0.0, 0.0)])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)])
}

/// The skew form `J = [[0, I], [-I, 0]]` of even dimension n.
pub fn symplectic_j(n: usize) -> Result<CMatrix> {
    if n == 0 || n % 2 != 0 {
        return Err(CartanError::InvalidParameter(format!(
            "J requires a positive even dimension, got {n}"
        )));
    }
    let m = n / 2;
    let mut j = CMatrix::zeros(n, n);
    for k in 0..m {
        j[(k, m + k)] = c64(1.0, 0.0);
        j[(m + k, k)] = c64(-1.0, 0.0);
    }
    Ok(j)
}

/// The signature matrix `I_{p,q} = diag(I_p, -I_q)`.
pub fn signature_matrix(p: usize, q: usize) -> Result<CMatrix> {
    if p == 0 || q == 0 {
        return Err(CartanError::InvalidParameter(format!(
            "I_{{p,q}} requires p, q > 0, got ({p}, {q})"
        )));
    }
    let n = p + q;
    let mut m = CMatrix::zeros(n, n);
    for k in 0..p {
        m[(k, k)] = c64(1.0, 0.0);
    }
    for k in p..n {
        m[(k, k)] = c64(-1.0, 0.0);
    }
    Ok(m)
}

/// Real-linear modified Gram-Schmidt with one reorthogonalization pass.
///
/// Projection coefficients are the real parts of the HS inner products, so
/// the output spans the same real-linear span as the input. Vectors whose
/// post-projection norm falls below `rank_tol` are dropped; input order is
/// preserved.
pub fn gram_schmidt(mats: &[CMatrix], tol: &Tolerance) -> Result<Vec<CMatrix>> {
    if mats.is_empty() {
        return Ok(Vec::new());
    }
    let n = square_dim(&mats[0])?;
    for m in mats {
        if square_dim(m)? != n {
            return Err(CartanError::DimensionMismatch(n, m.nrows()));
        }
    }
    let mut out: Vec<CMatrix> = Vec::new();
    for m in mats {
        let mut v = m.clone();
        for _ in 0..2 {
            for b in &out {
                let coef = hs_inner(&v, b)?.re;
                v -= b * c64(coef, 0.0);
            }
        }
        let norm = hs_norm(&v);
        if norm >= tol.rank_tol {
            out.push(v * c64(1.0 / norm, 0.0));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ident(n: usize) -> CMatrix {
        CMatrix::identity(n, n)
    }

    #[test]
    fn hs_inner_identity() {
        let tol = Tolerance::default();
        let v = hs_inner(&ident(2), &ident(2)).unwrap();
        assert!((v - c64(2.0, 0.0)).norm() <= tol.atol);
    }

    #[test]
    fn hs_inner_pauli_orthogonality() {
        let v = hs_inner(&pauli_x(), &pauli_y()).unwrap();
        assert!(v.norm() <= 1e-15);
    }

    #[test]
    fn hs_inner_self_matches_entrywise_sum() {
        // independent oracle: sum of squared entry magnitudes
        let mut state = 0x12345u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        let a = CMatrix::from_fn(4, 4, |_, _| c64(next(), next()));
        let oracle: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        let v = hs_inner(&a, &a).unwrap();
        assert!(v.im.abs() <= 1e-14);
        assert!((v.re - oracle).abs() <= 1e-12);
    }

    #[test]
    fn hs_inner_dimension_mismatch() {
        assert!(matches!(
            hs_inner(&ident(2), &ident(3)),
            Err(CartanError::DimensionMismatch(2, 3))
        ));
    }

    #[test]
    fn predicates_on_paulis() {
        let tol = Tolerance::default();
        assert!(is_hermitian(&pauli_y(), &tol));
        assert!(is_unitary(&pauli_y(), &tol));
        assert!(!is_skew_hermitian(&pauli_y(), &tol));
        assert!(is_skew_hermitian(&(pauli_y() * c64(0.0, 1.0)), &tol));
        assert!(is_real(&pauli_x(), &tol));
        assert!(!is_real(&pauli_y(), &tol));
    }

    #[test]
    fn symplectic_condition_matches_formula() {
        let tol = Tolerance::default();
        // A = [[w, 0], [0, -w^T]] with w in u(1) is symplectic at n = 2
        let a = CMatrix::from_row_slice(
            2,
            2,
            &[c64(0.0, 1.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, -1.0)],
        );
        assert!(is_symplectic(&a, &tol));
        // sp(1) = su(2): every traceless skew-Hermitian 2x2 is symplectic,
        // the identity direction is not
        assert!(is_symplectic(&(pauli_z() * c64(0.0, 1.0)), &tol));
        assert!(!is_symplectic(&(ident(2) * c64(0.0, 1.0)), &tol));
        assert!(!is_symplectic(&ident(3), &tol));
    }

    #[test]
    fn gram_schmidt_dependent_pair() {
        let tol = Tolerance::default();
        let out = gram_schmidt(&[ident(2), ident(2) * c64(2.0, 0.0)], &tol).unwrap();
        assert_eq!(out.len(), 1);
        let expect = ident(2) * c64(1.0 / 2.0_f64.sqrt(), 0.0);
        assert!(max_abs(&(&out[0] - expect)) <= tol.atol);
    }

    #[test]
    fn gram_schmidt_orthogonal_inputs_preserved() {
        let tol = Tolerance::default();
        let out = gram_schmidt(&[pauli_x(), pauli_y()], &tol).unwrap();
        assert_eq!(out.len(), 2);
        let s = 1.0 / 2.0_f64.sqrt();
        assert!(max_abs(&(&out[0] - pauli_x() * c64(s, 0.0))) <= tol.atol);
        assert!(max_abs(&(&out[1] - pauli_y() * c64(s, 0.0))) <= tol.atol);
    }

    #[test]
    fn gram_schmidt_random_hermitian_gram_matrix() {
        let tol = Tolerance::default();
        let mut state = 0xDEADBEEFu64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        let mats: Vec<CMatrix> = (0..10)
            .map(|_| {
                let g = CMatrix::from_fn(3, 3, |_, _| c64(next(), next()));
                (&g + g.adjoint()) * c64(0.5, 0.0)
            })
            .collect();
        let out = gram_schmidt(&mats, &tol).unwrap();
        assert!(out.len() <= 9);
        for (i, a) in out.iter().enumerate() {
            for (j, b) in out.iter().enumerate() {
                let v = hs_inner(a, b).unwrap();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((v - c64(expect, 0.0)).norm() <= 1e-10);
            }
        }
    }
}
