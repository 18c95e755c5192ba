use thiserror::Error;

/// Errors produced by cartankit operations.
#[derive(Debug, Error)]
pub enum CartanError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not unitary (defect {0:.3e})")]
    NotUnitary(f64),

    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not skew-Hermitian (defect {0:.3e})")]
    NotSkewHermitian(f64),

    #[error("matrix is not normal (commutation defect {0:.3e})")]
    NotNormal(f64),

    #[error("eigenphase {phase:.9} rad is within {guard:.1e} of the branch cut at pi")]
    BranchCut { phase: f64, guard: f64 },

    #[error("joint diagonalization did not converge (off-diagonal norm {0:.3e})")]
    IterationFailure(f64),

    #[error("not a Cartan symmetry (scalar defect {0:.3e})")]
    NotCartan(f64),

    #[error("induced map is not involutive (worst residual {0:.3e})")]
    NotInvolutive(f64),

    #[error("fixed subspace dimension {dim_k} matches no canonical type at n = {n}")]
    MatchesNoType { dim_k: usize, n: usize },

    #[error("{side} factor is outside its eigenspace (residual {residual:.3e} > {tol:.1e})")]
    MembershipFailure {
        side: &'static str,
        residual: f64,
        tol: f64,
    },

    #[error("exhaustive verification cap exceeded: n = {n} > {cap}; use sampled mode")]
    ExhaustiveCapExceeded { n: usize, cap: usize },

    #[error("basis is not orthonormal (worst Gram defect {0:.3e})")]
    NotOrthonormal(f64),

    #[error("basis element violates the {expected} flag (defect {defect:.3e})")]
    HermiticityViolation { expected: &'static str, defect: f64 },

    #[error("could not extract a real eigenbasis for a degenerate eigenvalue cluster")]
    RealizationFailure,
}

pub type Result<T> = std::result::Result<T, CartanError>;
