//! The underlying bilinear-form spaces.
//!
//! Type C data lives on a symplectic space `W` of even dimension `2n` with
//! basis `ψ_1, …, ψ_n, ψ*_1, …, ψ*_n` and skew pairing `⟨ψ*_i, ψ_j⟩ = δ_ij`
//! (so `⟨ψ_i, ψ*_j⟩ = −δ_ij`). Type B data lives on an orthogonal space `𝔥`
//! of dimension `d` with an orthonormal basis `e_1, …, e_d`. Basis vectors are
//! addressed by index `0 .. dim`.

use crate::{Error, Result};
use crate::scalar::{qi, Rational};

/// Which bilinear form the space carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpaceKind {
    /// Even-dimensional space with a nondegenerate skew form (type C side).
    Symplectic,
    /// Space with an orthonormal basis and symmetric form (type B side).
    Orthogonal,
}

/// A finite-dimensional space with a distinguished basis and bilinear form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Space {
    kind: SpaceKind,
    dim: usize,
}

impl Space {
    /// Symplectic space of dimension `dim` (must be even and nonzero).
    ///
    /// Dimension 2 is allowed here so the raw algebra layers can be probed;
    /// vertex-algebra entry points impose `dim ≥ 4` via [`Space::require_voa_dim`].
    pub fn symplectic(dim: usize) -> Result<Self> {
        if dim == 0 || dim % 2 != 0 {
            return Err(Error::InvalidDimension(dim, "symplectic space"));
        }
        Ok(Space {
            kind: SpaceKind::Symplectic,
            dim,
        })
    }

    /// Orthogonal space of dimension `dim ≥ 1`.
    pub fn orthogonal(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim, "orthogonal space"));
        }
        Ok(Space {
            kind: SpaceKind::Orthogonal,
            dim,
        })
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of frame indices: `n` for symplectic `2n`, `d` for orthogonal.
    pub fn frame_count(&self) -> usize {
        match self.kind {
            SpaceKind::Symplectic => self.dim / 2,
            SpaceKind::Orthogonal => self.dim,
        }
    }

    /// Guard for operations that need the vertex-algebra layer: symplectic
    /// spaces must have dimension at least 4 there.
    pub fn require_voa_dim(&self) -> Result<()> {
        if self.kind == SpaceKind::Symplectic && self.dim < 4 {
            return Err(Error::DimensionTooSmall(self.dim));
        }
        Ok(())
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.dim {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: self.dim,
            });
        }
        Ok(())
    }

    /// The bilinear form on basis vectors: skew for symplectic, `δ_ij` for
    /// orthogonal.
    pub fn pairing(&self, i: usize, j: usize) -> Result<Rational> {
        self.check_index(i)?;
        self.check_index(j)?;
        let n = self.dim / 2;
        Ok(match self.kind {
            SpaceKind::Orthogonal => qi(i64::from(i == j)),
            SpaceKind::Symplectic => {
                if i >= n && j < n && i - n == j {
                    qi(1) // ⟨ψ*_k, ψ_k⟩ = 1
                } else if i < n && j >= n && j - n == i {
                    qi(-1) // ⟨ψ_k, ψ*_k⟩ = −1
                } else {
                    qi(0)
                }
            }
        })
    }

    /// Display label of a basis vector: `psi3`, `psi3*` or `e3` (1-based).
    pub fn label(&self, i: usize) -> Result<String> {
        self.check_index(i)?;
        let n = self.dim / 2;
        Ok(match self.kind {
            SpaceKind::Orthogonal => format!("e{}", i + 1),
            SpaceKind::Symplectic => {
                if i < n {
                    format!("psi{}", i + 1)
                } else {
                    format!("psi{}*", i - n + 1)
                }
            }
        })
    }

    /// Frame sector of a basis vector: `ψ_k` and `ψ*_k` share sector `k−1`;
    /// orthogonal vectors are their own sector.
    pub fn sector(&self, i: usize) -> Result<usize> {
        self.check_index(i)?;
        Ok(match self.kind {
            SpaceKind::Orthogonal => i,
            SpaceKind::Symplectic => i % (self.dim / 2),
        })
    }

    /// The basis pair `(a, b)` spanning frame sector `k`: `(ψ_{k+1}, ψ*_{k+1})`
    /// or `(e_{k+1}, e_{k+1})`.
    pub fn frame_pair(&self, k: usize) -> Result<(usize, usize)> {
        if k >= self.frame_count() {
            return Err(Error::IndexOutOfRange {
                index: k,
                dim: self.frame_count(),
            });
        }
        Ok(match self.kind {
            SpaceKind::Orthogonal => (k, k),
            SpaceKind::Symplectic => (k, k + self.dim / 2),
        })
    }

    /// Whether `(a, b)` (in either order) is a frame pair.
    pub fn is_frame_pair(&self, a: usize, b: usize) -> bool {
        (0..self.frame_count()).any(|k| {
            self.frame_pair(k)
                .map(|(x, y)| (x, y) == (a, b) || (y, x) == (a, b))
                .unwrap_or(false)
        })
    }
}
