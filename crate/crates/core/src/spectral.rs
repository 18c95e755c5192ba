//! Spectral primitives for normal matrices.
//!
//! A normal matrix `M = A + iB` splits into commuting Hermitian parts
//! `A = (M + M^dagger)/2` and `B = (M - M^dagger)/(2i)`. We seed a joint
//! basis from a Hermitian eigendecomposition of the dominant part and then
//! polish with Cardoso-Souloumiac plane rotations, which diagonalize both
//! parts simultaneously without any eigenvalue-gap thresholds. Everything
//! here (principal log, square root, exponential) sits on top of that.

use nalgebra::{Matrix3, Vector3};

use crate::error::{CartanError, Result};
use crate::matrix::{
    c64, is_unitary, max_abs, square_dim, unitary_defect, CMatrix, Tolerance, C64,
};

/// Eigenphases closer than this to pi are treated as sitting on the log
/// branch cut.
pub const DEFAULT_BRANCH_GUARD: f64 = 1e-6;

const MAX_SWEEPS: usize = 60;

/// Hermitian eigendecomposition used only as a warm start; `n = 1` is
/// handled inline because the tridiagonalization needs `n >= 2`.
fn hermitian_seed(h: &CMatrix) -> CMatrix {
    let n = h.nrows();
    if n == 1 {
        return CMatrix::identity(1, 1);
    }
    let eig = h.clone().symmetric_eigen();
    let v = eig.eigenvectors;
    if v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        v
    } else {
        CMatrix::identity(n, n)
    }
}

/// Off-diagonal squared norm of the pair, plus the imaginary residue on the
/// diagonals (both contribute to the reconstruction error).
fn off_sqnorm(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                s += a[(p, q)].norm_sqr() + b[(p, q)].norm_sqr();
            } else {
                s += a[(p, p)].im * a[(p, p)].im + b[(p, p)].im * b[(p, p)].im;
            }
        }
    }
    s
}

/// Cardoso-Souloumiac rotation for the Hermitian pair restricted to the
/// (p, q) plane. Returns `(c, s)` with `c` real and `c^2 + |s|^2 = 1`.
fn cs_rotation(a: &CMatrix, b: &CMatrix, p: usize, q: usize) -> (f64, C64) {
    let g1 = Vector3::new(a[(p, p)].re - a[(q, q)].re, 2.0 * a[(p, q)].re, 2.0 * a[(p, q)].im);
    let g2 = Vector3::new(b[(p, p)].re - b[(q, q)].re, 2.0 * b[(p, q)].re, 2.0 * b[(p, q)].im);
    let g: Matrix3<f64> = g1 * g1.transpose() + g2 * g2.transpose();
    let eig = g.symmetric_eigen();
    let mut top = 0;
    for k in 1..3 {
        if eig.eigenvalues[k] > eig.eigenvalues[top] {
            top = k;
        }
    }
    let mut v = eig.eigenvectors.column(top).into_owned();
    // deterministic sign: first significantly nonzero component positive
    let flip = if v[0].abs() > 1e-14 {
        v[0] < 0.0
    } else if v[1].abs() > 1e-14 {
        v[1] < 0.0
    } else {
        v[2] < 0.0
    };
    if flip {
        v = -v;
    }
    let x = v[0].clamp(-1.0, 1.0);
    let c = ((x + 1.0) / 2.0).sqrt();
    if c <= 1e-12 {
        // x = -1 would mean a pure swap; the sign convention above rules it out
        return (1.0, c64(0.0, 0.0));
    }
    let s = c64(v[1], -v[2]) * c64(1.0 / (2.0 * c), 0.0);
    (c, s)
}

/// Apply the plane rotation R(p,q) with R_pp = c, R_pq = -conj(s),
/// R_qp = s, R_qq = c as `M <- R^dagger M R`.
fn rotate_pair(m: &mut CMatrix, p: usize, q: usize, c: f64, s: C64) {
    let n = m.nrows();
    for i in 0..n {
        let mp = m[(i, p)];
        let mq = m[(i, q)];
        m[(i, p)] = mp * c + mq * s;
        m[(i, q)] = -mp * s.conj() + mq * c;
    }
    for j in 0..n {
        let mp = m[(p, j)];
        let mq = m[(q, j)];
        m[(p, j)] = mp * c + mq * s.conj();
        m[(q, j)] = -mp * s + mq * c;
    }
}

/// Right-multiply the accumulated basis by the same rotation.
fn rotate_basis(v: &mut CMatrix, p: usize, q: usize, c: f64, s: C64) {
    let n = v.nrows();
    for i in 0..n {
        let vp = v[(i, p)];
        let vq = v[(i, q)];
        v[(i, p)] = vp * c + vq * s;
        v[(i, q)] = -vp * s.conj() + vq * c;
    }
}

/// Spectral decomposition `M = V diag(lambda) V^dagger` of a normal matrix.
///
/// Eigenvalues are sorted by descending phase angle in (-pi, pi], then by
/// descending magnitude, then by original index, so the output order is
/// deterministic. Each eigenvector's largest-magnitude component is made
/// real and positive.
pub fn spectral_normal(m: &CMatrix, tol: &Tolerance) -> Result<(Vec<C64>, CMatrix)> {
    let n = square_dim(m)?;
    let scale = max_abs(m).max(1.0);

    let normal_defect = max_abs(&(m * m.adjoint() - m.adjoint() * m));
    if normal_defect > tol.atol * scale * scale {
        return Err(CartanError::NotNormal(normal_defect));
    }

    // exactly Hermitian splits by construction
    let a = CMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let b = CMatrix::from_fn(n, n, |i, j| (m[(i, j)] - m[(j, i)].conj()) * c64(0.0, -0.5));

    let mut v = if a.norm() >= b.norm() {
        hermitian_seed(&a)
    } else {
        hermitian_seed(&b)
    };
    let mut ar = v.adjoint() * &a * &v;
    let mut br = v.adjoint() * &b * &v;

    let hs_scale = m.norm().max(1.0);
    let target2 = (1e-14 * hs_scale * n as f64).powi(2);
    let mut off2 = off_sqnorm(&ar, &br);
    let skip2 = (1e-16 * scale).powi(2);
    for _ in 0..MAX_SWEEPS {
        if off2 <= target2 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if ar[(p, q)].norm_sqr() + br[(p, q)].norm_sqr() <= skip2 {
                    continue;
                }
                let (c, s) = cs_rotation(&ar, &br, p, q);
                if s.norm_sqr() <= 1e-32 {
                    continue;
                }
                rotate_pair(&mut ar, p, q, c, s);
                rotate_pair(&mut br, p, q, c, s);
                rotate_basis(&mut v, p, q, c, s);
            }
        }
        let next = off_sqnorm(&ar, &br);
        if next >= off2 {
            off2 = next;
            break;
        }
        off2 = next;
    }
    let off = off2.sqrt();
    if off > tol.atol * hs_scale * n as f64 {
        return Err(CartanError::IterationFailure(off));
    }

    let lambdas: Vec<C64> = (0..n).map(|k| c64(ar[(k, k)].re, br[(k, k)].re)).collect();

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| {
        lambdas[j]
            .arg()
            .total_cmp(&lambdas[i].arg())
            .then(lambdas[j].norm().total_cmp(&lambdas[i].norm()))
            .then(i.cmp(&j))
    });

    let mut vout = CMatrix::zeros(n, n);
    let mut lout = Vec::with_capacity(n);
    for (new, &old) in idx.iter().enumerate() {
        let col = v.column(old);
        let mut best = 0;
        for i in 1..n {
            if col[i].norm() > col[best].norm() {
                best = i;
            }
        }
        let mag = col[best].norm();
        let phase = if mag > 0.0 { col[best] / mag } else { c64(1.0, 0.0) };
        for i in 0..n {
            vout[(i, new)] = col[i] * phase.conj();
        }
        lout.push(lambdas[old]);
    }
    Ok((lout, vout))
}

fn unitary_phases(
    u: &CMatrix,
    tol: &Tolerance,
    branch_guard: f64,
    allow_branch_edge: bool,
) -> Result<(Vec<f64>, CMatrix)> {
    if !is_unitary(u, tol) {
        return Err(CartanError::NotUnitary(unitary_defect(u)));
    }
    let (lambdas, v) = spectral_normal(u, tol)?;
    let mut phases = Vec::with_capacity(lambdas.len());
    for l in &lambdas {
        let phase = l.arg();
        if !allow_branch_edge && std::f64::consts::PI - phase.abs() < branch_guard {
            return Err(CartanError::BranchCut {
                phase,
                guard: branch_guard,
            });
        }
        phases.push(phase);
    }
    Ok((phases, v))
}

/// Principal logarithm of a unitary: skew-Hermitian `L` with `exp(L) = U`
/// and all eigenphases in (-pi, pi].
///
/// Fails with [`CartanError::BranchCut`] when an eigenvalue sits within
/// [`DEFAULT_BRANCH_GUARD`] of -1.
pub fn principal_log_unitary(u: &CMatrix, tol: &Tolerance) -> Result<CMatrix> {
    principal_log_unitary_with(u, tol, DEFAULT_BRANCH_GUARD, false)
}

/// As [`principal_log_unitary`] with an explicit branch guard; setting
/// `allow_branch_edge` accepts eigenvalues at -1 and assigns them phase pi.
pub fn principal_log_unitary_with(
    u: &CMatrix,
    tol: &Tolerance,
    branch_guard: f64,
    allow_branch_edge: bool,
) -> Result<CMatrix> {
    let (phases, v) = unitary_phases(u, tol, branch_guard, allow_branch_edge)?;
    let n = u.nrows();
    let diag = CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            c64(0.0, phases[i])
        } else {
            c64(0.0, 0.0)
        }
    });
    let l = &v * diag * v.adjoint();
    // exact skew-Hermitian cleanup of eigenbasis roundoff
    Ok(CMatrix::from_fn(n, n, |i, j| (l[(i, j)] - l[(j, i)].conj()) * 0.5))
}

/// Principal square root of a unitary, `exp(log(U)/2)`.
pub fn sqrt_unitary(u: &CMatrix, tol: &Tolerance) -> Result<CMatrix> {
    sqrt_unitary_with(u, tol, DEFAULT_BRANCH_GUARD, false)
}

pub fn sqrt_unitary_with(
    u: &CMatrix,
    tol: &Tolerance,
    branch_guard: f64,
    allow_branch_edge: bool,
) -> Result<CMatrix> {
    let (phases, v) = unitary_phases(u, tol, branch_guard, allow_branch_edge)?;
    let n = u.nrows();
    let diag = CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::from_polar(1.0, phases[i] / 2.0)
        } else {
            c64(0.0, 0.0)
        }
    });
    Ok(&v * diag * v.adjoint())
}

/// Unitary exponential of a skew-Hermitian matrix.
pub fn exp_skew(l: &CMatrix, tol: &Tolerance) -> Result<CMatrix> {
    let n = square_dim(l)?;
    let defect = max_abs(&(l + l.adjoint()));
    if defect > tol.atol * max_abs(l).max(1.0) {
        return Err(CartanError::NotSkewHermitian(defect));
    }
    let (lambdas, v) = spectral_normal(l, tol)?;
    let diag = CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            // eigenvalues of a skew-Hermitian matrix are purely imaginary
            C64::from_polar(1.0, lambdas[i].im)
        } else {
            c64(0.0, 0.0)
        }
    });
    Ok(&v * diag * v.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{hs_norm, is_skew_hermitian, pauli_z};

    fn lcg(seed: u64) -> impl FnMut() -> f64 {
        let mut state = seed;
        move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        }
    }

    fn random_skew(n: usize, hs_scale: f64, next: &mut impl FnMut() -> f64) -> CMatrix {
        let g = CMatrix::from_fn(n, n, |_, _| c64(next(), next()));
        let s = (&g - g.adjoint()) * c64(0.5, 0.0);
        let norm = hs_norm(&s);
        s * c64(hs_scale / norm, 0.0)
    }

    #[test]
    fn spectral_identity() {
        let tol = Tolerance::default();
        let (lam, v) = spectral_normal(&CMatrix::identity(3, 3), &tol).unwrap();
        for l in &lam {
            assert!((l - c64(1.0, 0.0)).norm() <= tol.atol);
        }
        assert!(unitary_defect(&v) <= tol.atol);
    }

    #[test]
    fn spectral_sort_order_diag_1_i() {
        let tol = Tolerance::default();
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 1.0)],
        );
        let (lam, _) = spectral_normal(&m, &tol).unwrap();
        // descending phase: i (pi/2) before 1 (0)
        assert!((lam[0] - c64(0.0, 1.0)).norm() <= tol.atol);
        assert!((lam[1] - c64(1.0, 0.0)).norm() <= tol.atol);
    }

    #[test]
    fn spectral_reconstructs_random_unitary() {
        let tol = Tolerance::default();
        let mut next = lcg(7);
        let u = exp_skew(&random_skew(8, 2.0, &mut next), &tol).unwrap();
        let (lam, v) = spectral_normal(&u, &tol).unwrap();
        let n = 8;
        let diag = CMatrix::from_fn(n, n, |i, j| if i == j { lam[i] } else { c64(0.0, 0.0) });
        let recon = &v * diag * v.adjoint();
        assert!(max_abs(&(recon - &u)) <= 1e-10);
        assert!(unitary_defect(&v) <= 1e-12);
    }

    #[test]
    fn spectral_degenerate_and_paired_phases() {
        // eigenvalues exp(+-i pi/3) each twice: exercises clustered phases
        let tol = Tolerance::default();
        let mut next = lcg(11);
        let herm = {
            let g = CMatrix::from_fn(4, 4, |_, _| c64(next(), next()));
            (&g + g.adjoint()) * c64(0.5, 0.0)
        };
        let (_, w) = spectral_normal(&herm, &tol).unwrap();
        let phase = std::f64::consts::FRAC_PI_3;
        let d = CMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                C64::from_polar(1.0, if i < 2 { phase } else { -phase })
            } else {
                c64(0.0, 0.0)
            }
        });
        let m = &w * d * w.adjoint();
        let (lam, v) = spectral_normal(&m, &tol).unwrap();
        let diag = CMatrix::from_fn(4, 4, |i, j| if i == j { lam[i] } else { c64(0.0, 0.0) });
        assert!(max_abs(&(&v * diag * v.adjoint() - &m)) <= 1e-11);
    }

    #[test]
    fn spectral_rejects_non_normal() {
        let tol = Tolerance::default();
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)],
        );
        assert!(matches!(spectral_normal(&m, &tol), Err(CartanError::NotNormal(_))));
    }

    #[test]
    fn log_identity_is_zero() {
        let tol = Tolerance::default();
        let l = principal_log_unitary(&CMatrix::identity(2, 2), &tol).unwrap();
        assert!(max_abs(&l) <= tol.atol);
    }

    #[test]
    fn log_diagonal_case() {
        let tol = Tolerance::default();
        let u = CMatrix::from_fn(2, 2, |i, j| {
            if i != j {
                c64(0.0, 0.0)
            } else if i == 0 {
                C64::from_polar(1.0, std::f64::consts::PI / 3.0)
            } else {
                C64::from_polar(1.0, -std::f64::consts::PI / 4.0)
            }
        });
        let l = principal_log_unitary(&u, &tol).unwrap();
        let expect = CMatrix::from_fn(2, 2, |i, j| {
            if i != j {
                c64(0.0, 0.0)
            } else if i == 0 {
                c64(0.0, std::f64::consts::PI / 3.0)
            } else {
                c64(0.0, -std::f64::consts::PI / 4.0)
            }
        });
        assert!(max_abs(&(l - expect)) <= 1e-12);
    }

    #[test]
    fn log_round_trip_on_random_unitary() {
        let tol = Tolerance::default();
        let mut next = lcg(23);
        let s = random_skew(6, 1.5, &mut next);
        let u = exp_skew(&s, &tol).unwrap();
        let l = principal_log_unitary(&u, &tol).unwrap();
        assert!(is_skew_hermitian(&l, &tol));
        let back = exp_skew(&l, &tol).unwrap();
        assert!(max_abs(&(back - &u)) <= 1e-9);
    }

    #[test]
    fn log_branch_cut_detected() {
        let tol = Tolerance::default();
        let u = CMatrix::from_fn(2, 2, |i, j| {
            if i != j {
                c64(0.0, 0.0)
            } else if i == 0 {
                c64(-1.0, 0.0)
            } else {
                c64(1.0, 0.0)
            }
        });
        match principal_log_unitary(&u, &tol) {
            Err(CartanError::BranchCut { phase, .. }) => {
                assert!((phase.abs() - std::f64::consts::PI).abs() <= 1e-12);
            }
            other => panic!("expected BranchCut, got {other:?}"),
        }
        // the edge-tolerant variant still reconstructs
        let l = principal_log_unitary_with(&u, &tol, DEFAULT_BRANCH_GUARD, true).unwrap();
        let back = exp_skew(&l, &tol).unwrap();
        assert!(max_abs(&(back - &u)) <= 1e-10);
    }

    #[test]
    fn sqrt_identity_and_quarter_phase() {
        let tol = Tolerance::default();
        let s = sqrt_unitary(&CMatrix::identity(2, 2), &tol).unwrap();
        assert!(max_abs(&(s - CMatrix::identity(2, 2))) <= tol.atol);

        let u = CMatrix::from_fn(1, 1, |_, _| C64::from_polar(1.0, std::f64::consts::FRAC_PI_2));
        let r = sqrt_unitary(&u, &tol).unwrap();
        assert!((r[(0, 0)] - C64::from_polar(1.0, std::f64::consts::FRAC_PI_4)).norm() <= 1e-14);
    }

    #[test]
    fn sqrt_squares_back() {
        let tol = Tolerance::default();
        let mut next = lcg(31);
        let u = exp_skew(&random_skew(5, 1.0, &mut next), &tol).unwrap();
        let r = sqrt_unitary(&u, &tol).unwrap();
        assert!(max_abs(&(&r * &r - &u)) <= 1e-9);
    }

    #[test]
    fn exp_skew_basics() {
        let tol = Tolerance::default();
        let zero = CMatrix::zeros(3, 3);
        assert!(max_abs(&(exp_skew(&zero, &tol).unwrap() - CMatrix::identity(3, 3))) <= tol.atol);

        let l = pauli_z() * c64(0.0, std::f64::consts::FRAC_PI_2);
        let u = exp_skew(&l, &tol).unwrap();
        let expect = CMatrix::from_fn(2, 2, |i, j| {
            if i != j {
                c64(0.0, 0.0)
            } else if i == 0 {
                C64::from_polar(1.0, std::f64::consts::FRAC_PI_2)
            } else {
                C64::from_polar(1.0, -std::f64::consts::FRAC_PI_2)
            }
        });
        assert!(max_abs(&(u - expect)) <= 1e-12);
    }

    #[test]
    fn exp_skew_inverse_identity() {
        let tol = Tolerance::default();
        let mut next = lcg(41);
        let l = random_skew(6, 2.0, &mut next);
        let u = exp_skew(&l, &tol).unwrap();
        let uinv = exp_skew(&(-&l), &tol).unwrap();
        assert!(max_abs(&(&u * uinv - CMatrix::identity(6, 6))) <= 1e-10);
    }

    #[test]
    fn exp_skew_rejects_hermitian() {
        let tol = Tolerance::default();
        assert!(matches!(
            exp_skew(&pauli_z(), &tol),
            Err(CartanError::NotSkewHermitian(_))
        ));
    }
}
