//! Exact-arithmetic workbench for the universal vertex algebras attached to
//! symplectic (type C) and orthogonal (type B) Jordan algebras.
//!
//! Everything is computed over ℚ or the polynomial ring ℚ[r], where `r` is the
//! central parameter of the induced module; no floating point appears anywhere.
//! The layers build on each other:
//!
//! - [`scalar`]: rationals, the polynomial ring ℚ[r], integer-root extraction,
//!   generalized binomial coefficients.
//! - [`spaces`]: the underlying bilinear-form spaces (symplectic `W`,
//!   orthogonal `𝔥`) and their distinguished bases.
//! - [`jordan`]: finite-dimensional Jordan algebras of types A, B, C realized
//!   on rank-one operators, with frames and the Jordan-identity check.
//! - [`loop_lie`]: the infinite-dimensional Lie algebra spanned by quadratics
//!   `L_{a,b}(m,n)` together with a central element `K`, its bracket and the
//!   adjoint `σ`.
//! - [`induced`]: the induced module `M_r` on its PBW basis of negative-mode
//!   monomials, with a memoizing evaluator for the algebra action.
//! - [`vertex`]: vertex-operator structure on `M_r` — field modes, n-th
//!   products, Griess algebra, Virasoro suite, locality, the binomial
//!   reconstruction identities and the spanning check.
//! - [`gram`]: the contravariant (Shapovalov-style) form, its determinant over
//!   ℚ[r], ranks and radicals at rational specializations.
//! - [`fermion`]: the symplectic-fermion Fock space that realizes the type C
//!   module at `r = 1`, used as an independent oracle.
//! - [`verma`]: the D_N root datum and the generalized-Verma simplicity
//!   criterion for integer detection of the non-simple locus.

pub mod fermion;
pub mod gram;
pub mod induced;
pub mod jordan;
pub mod loop_lie;
pub mod scalar;
pub mod spaces;
pub mod verma;
pub mod vertex;

/// Errors shared across the workbench layers.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A space was constructed with an invalid dimension (odd symplectic
    /// dimension, or zero-dimensional).
    #[error("invalid dimension {0} for {1}")]
    InvalidDimension(usize, &'static str),
    /// An operation that needs the vertex-algebra layer was invoked on a
    /// two-dimensional symplectic space without the explicit override.
    #[error("symplectic dimension {0} is below the supported minimum 4 for this operation")]
    DimensionTooSmall(usize),
    /// A basis index fell outside the space.
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    /// Two operands were built over different families or spaces.
    #[error("family mismatch: {0}")]
    FamilyMismatch(&'static str),
    /// The requested operation is not defined for this algebra family.
    #[error("unsupported family for this operation: {0}")]
    UnsupportedFamily(&'static str),
    /// A key violated the canonical-form rules of its family.
    #[error("invalid pair: {0}")]
    InvalidPair(&'static str),
    /// Integer-root extraction was asked for the zero polynomial.
    #[error("the zero polynomial has every integer as a root")]
    ZeroPolynomial,
    /// Exact polynomial division left a remainder.
    #[error("inexact polynomial division")]
    InexactDivision,
    /// A state was used where a mode-word presentation is required.
    #[error("state has no mode-word presentation")]
    NoPresentation,
    /// The mode window handed to the extraction solver does not cover the
    /// support of the generator distribution.
    #[error("mode window [{lo}, {hi}] does not cover the nonzero modes")]
    SingularWindow { lo: i64, hi: i64 },
    /// Degrees of two homogeneous arguments disagree.
    #[error("degree mismatch: {0}")]
    DegreeMismatch(&'static str),
    /// A rank parameter was out of range for the root datum.
    #[error("rank {0} out of supported range")]
    InvalidRank(usize),
    /// Malformed textual input (rational parse, etc.).
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
