//! Spin operators for half-integer angular momenta and the time-reversal
//! symmetry of a spin network, `Theta = exp(-i pi sum_k S_y^(k)) K`.
//!
//! All operators use the |j,m> basis ordered m = j, j-1, ..., -j with
//! Condon-Shortley phases and hbar = 1.

use std::str::FromStr;

use crate::error::{CartanError, Result};
use crate::matrix::{c64, square_dim, CMatrix, Tolerance};
use crate::spectral::exp_skew;
use crate::symmetry::{Symmetry, SymmetryKind};

/// A spin quantum number j, stored as 2j so that half-integers are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Spin(u32);

impl Spin {
    pub fn from_two_j(two_j: u32) -> Spin {
        Spin(two_j)
    }

    pub fn two_j(&self) -> u32 {
        self.0
    }

    /// Hilbert space dimension 2j + 1.
    pub fn dim(&self) -> usize {
        self.0 as usize + 1
    }

    /// j as a float.
    pub fn value(&self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// m value at basis index a (m = j - a).
    fn m_at(&self, a: usize) -> f64 {
        self.value() - a as f64
    }
}

impl FromStr for Spin {
    type Err = CartanError;

    /// Accepts integers ("1") and half-integer fractions ("1/2", "3/2").
    fn from_str(s: &str) -> Result<Spin> {
        let s = s.trim();
        let invalid = || CartanError::InvalidParameter(format!("invalid spin {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| invalid())?;
            let den: u32 = den.trim().parse().map_err(|_| invalid())?;
            match den {
                1 => Ok(Spin(num.checked_mul(2).ok_or_else(invalid)?)),
                2 => Ok(Spin(num)),
                _ => Err(invalid()),
            }
        } else {
            let j: u32 = s.parse().map_err(|_| invalid())?;
            Ok(Spin(j.checked_mul(2).ok_or_else(invalid)?))
        }
    }
}

impl std::fmt::Display for Spin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

fn ladder_plus_coeff(j: f64, m: f64) -> f64 {
    (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

fn ladder_minus_coeff(j: f64, m: f64) -> f64 {
    (j * (j + 1.0) - m * (m - 1.0)).max(0.0).sqrt()
}

/// y component of the spin operator, `(S_+ - S_-) / 2i`.
pub fn spin_y(spin: Spin) -> CMatrix {
    let n = spin.dim();
    let j = spin.value();
    let mut m = CMatrix::zeros(n, n);
    for a in 0..n {
        let ma = spin.m_at(a);
        if a > 0 {
            // S_+ |j,m> = c |j,m+1>, row a-1
            m[(a - 1, a)] = c64(0.0, -0.5) * ladder_plus_coeff(j, ma);
        }
        if a + 1 < n {
            m[(a + 1, a)] = c64(0.0, 0.5) * ladder_minus_coeff(j, ma);
        }
    }
    m
}

/// x component, `(S_+ + S_-) / 2`.
pub fn spin_x(spin: Spin) -> CMatrix {
    let n = spin.dim();
    let j = spin.value();
    let mut m = CMatrix::zeros(n, n);
    for a in 0..n {
        let ma = spin.m_at(a);
        if a > 0 {
            m[(a - 1, a)] = c64(0.5 * ladder_plus_coeff(j, ma), 0.0);
        }
        if a + 1 < n {
            m[(a + 1, a)] = c64(0.5 * ladder_minus_coeff(j, ma), 0.0);
        }
    }
    m
}

/// z component, `diag(j, j-1, ..., -j)`.
pub fn spin_z(spin: Spin) -> CMatrix {
    let n = spin.dim();
    CMatrix::from_fn(n, n, |i, k| {
        if i == k {
            c64(spin.m_at(i), 0.0)
        } else {
            c64(0.0, 0.0)
        }
    })
}

/// Embed a single-factor operator at position `k` of a tensor product with
/// the given factor dimensions: `I (x) .. (x) op (x) .. (x) I`.
pub fn embed_factor(op: &CMatrix, k: usize, dims: &[usize]) -> Result<CMatrix> {
    if k >= dims.len() {
        return Err(CartanError::InvalidParameter(format!(
            "factor index {k} out of range for {} subsystems",
            dims.len()
        )));
    }
    if square_dim(op)? != dims[k] {
        return Err(CartanError::DimensionMismatch(dims[k], op.nrows()));
    }
    let mut out = CMatrix::identity(1, 1);
    for (i, &d) in dims.iter().enumerate() {
        out = if i == k {
            out.kronecker(op)
        } else {
            out.kronecker(&CMatrix::identity(d, d))
        };
    }
    Ok(out)
}

/// Time-reversal symmetry of a network of spins: the antiunitary symmetry
/// with `X = exp(-i pi S_y^(1)) (x) ... (x) exp(-i pi S_y^(N))`. X is real,
/// and `X conj(X) = (-1)^{sum 2j} I`.
pub fn time_reversal_symmetry(spins: &[Spin], tol: &Tolerance) -> Result<Symmetry> {
    if spins.is_empty() {
        return Err(CartanError::InvalidParameter("empty spin list".into()));
    }
    let mut x = CMatrix::identity(1, 1);
    for spin in spins {
        let generator = spin_y(*spin) * c64(0.0, -std::f64::consts::PI);
        let factor = exp_skew(&generator, tol)?;
        x = x.kronecker(&factor);
    }
    // the rotation by pi about y is real in this basis; drop the O(eps)
    // imaginary residue of the numerical exponential
    let im_residue = x.iter().fold(0.0_f64, |acc, z| acc.max(z.im.abs()));
    if im_residue > 1e-8 {
        return Err(CartanError::IterationFailure(im_residue));
    }
    let x = x.map(|z| c64(z.re, 0.0));
    Symmetry::new(SymmetryKind::Antiunitary, x, tol)
}
