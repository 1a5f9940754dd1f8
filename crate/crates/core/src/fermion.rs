//! Free-fermion Fock space over a symplectic space: the independent oracle
//! for the type C algebra at central value 1.
//!
//! Mode operators `a(m)` (for `a` in the symplectic space `W`, `m ∈ ℤ`)
//! act on the exterior algebra generated by the negative modes:
//!
//! - `m < 0`: exterior (wedge) multiplication by the factor `(m, a)`;
//! - `m > 0`: contraction via `{a(m), b(n)} = m⟨a,b⟩δ_{m+n,0}`;
//! - `m = 0`: the zero map.
//!
//! A canonical quadratic generator `L_{a,b}(m,n)` acts as the composition
//! `a(m)∘b(n)` with the central element at 1. Commutators of these
//! operators provide an external check of the Lie bracket: for canonical
//! generators `x, y` and every vector `w`,
//! `q(x)q(y)w − q(y)q(x)w = q([x,y])w` with `K ↦ 1`.

use crate::loop_lie::{GenCombination, Generator, LoopFamily};
use crate::scalar::{qi, Rational};
use crate::spaces::{Space, SpaceKind};
use crate::{Error, Result};
use num::traits::Zero;
use std::collections::BTreeMap;

/// A basis monomial: a strictly increasing product of creation factors
/// `(mode, basis index)` with all modes negative, ordered lexicographically.
pub type FockMonomial = Vec<(i64, usize)>;

/// A finite rational combination of basis monomials.
pub type FockVector = BTreeMap<FockMonomial, Rational>;

/// The Fock space attached to a symplectic space.
#[derive(Clone, Debug)]
pub struct FockSpace {
    space: Space,
}

/// Adds `c·mon` to `v`, dropping cancellations.
pub fn add_to(v: &mut FockVector, mon: FockMonomial, c: Rational) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match v.entry(mon) {
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

/// The vacuum vector `|0⟩` (the empty monomial with coefficient 1).
pub fn vacuum() -> FockVector {
    let mut v = FockVector::new();
    v.insert(Vec::new(), qi(1));
    v
}

/// Total degree of a monomial: the sum of `−mode` over its factors.
pub fn degree(mon: &FockMonomial) -> i64 {
    mon.iter().map(|(m, _)| -m).sum()
}

impl FockSpace {
    pub fn new(space: Space) -> Result<Self> {
        if space.kind() != SpaceKind::Symplectic {
            return Err(Error::UnsupportedFamily(
                "the fermionic oracle requires a symplectic space",
            ));
        }
        Ok(FockSpace { space })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    /// Applies the single mode operator `a(m)` to a vector.
    pub fn apply_mode(&self, m: i64, a: usize, v: &FockVector) -> Result<FockVector> {
        self.space.check_index(a)?;
        let mut out = FockVector::new();
        if m == 0 {
            return Ok(out);
        }
        for (mon, c) in v {
            if m < 0 {
                // Wedge insert, keeping factors strictly increasing; the
                // sign counts transpositions past earlier factors.
                let factor = (m, a);
                match mon.binary_search(&factor) {
                    Ok(_) => {} // repeated fermionic factor: zero
                    Err(pos) => {
                        let mut new_mon = mon.clone();
                        new_mon.insert(pos, factor);
                        let sign = if pos % 2 == 0 { qi(1) } else { qi(-1) };
                        add_to(&mut out, new_mon, c * sign);
                    }
                }
            } else {
                // Contraction: a(m) anticommutes past each factor and pairs
                // with it via {a(m), b(n)} = m⟨a,b⟩δ_{m+n,0}; it kills |0⟩.
                for (i, &(n, b)) in mon.iter().enumerate() {
                    if m + n != 0 {
                        continue;
                    }
                    let pair = qi(m) * self.space.pairing(a, b)?;
                    if pair.is_zero() {
                        continue;
                    }
                    let mut new_mon = mon.clone();
                    new_mon.remove(i);
                    let sign = if i % 2 == 0 { qi(1) } else { qi(-1) };
                    add_to(&mut out, new_mon, c * sign * pair);
                }
            }
        }
        Ok(out)
    }

    /// Applies a canonical generator: the composition `a(m)∘b(n)` (the
    /// right factor acts first), with the central element at 1.
    pub fn apply_generator(&self, g: &Generator, v: &FockVector) -> Result<FockVector> {
        if g.family != LoopFamily::C {
            return Err(Error::UnsupportedFamily(
                "the fermionic oracle represents the type C algebra only",
            ));
        }
        let inner = self.apply_mode(g.n, g.b, v)?;
        self.apply_mode(g.m, g.a, &inner)
    }

    /// Applies a combination of generators, evaluating the ℚ[r]
    /// coefficients and the central part at `r = 1`.
    pub fn apply_combination(&self, comb: &GenCombination, v: &FockVector) -> Result<FockVector> {
        let mut out = FockVector::new();
        let one = qi(1);
        for (g, c) in &comb.terms {
            let cv = c.eval(&one);
            if cv.is_zero() {
                continue;
            }
            for (mon, coeff) in self.apply_generator(g, v)? {
                add_to(&mut out, mon, coeff * &cv);
            }
        }
        let kv = comb.k_coeff.eval(&one);
        if !kv.is_zero() {
            for (mon, coeff) in v {
                add_to(&mut out, mon.clone(), coeff * &kv);
            }
        }
        Ok(out)
    }

    /// All basis monomials of the given total degree, optionally restricted
    /// to an even number of factors (the subspace generated from the vacuum
    /// by the quadratic operators).
    pub fn basis_of_degree(&self, d: i64, even_only: bool) -> Vec<FockMonomial> {
        let mut out = Vec::new();
        let mut current: FockMonomial = Vec::new();
        self.enumerate(d, None, &mut current, even_only, &mut out);
        out
    }

    fn enumerate(
        &self,
        remaining: i64,
        min_factor: Option<(i64, usize)>,
        current: &mut FockMonomial,
        even_only: bool,
        out: &mut Vec<FockMonomial>,
    ) {
        if remaining == 0 {
            if !even_only || current.len() % 2 == 0 {
                out.push(current.clone());
            }
            return;
        }
        // Next factor (m, a) must exceed the previous one and contribute
        // degree −m ∈ [1, remaining].
        for deg in 1..=remaining {
            let m = -deg;
            for a in 0..self.space.dim() {
                let factor = (m, a);
                if let Some(prev) = min_factor {
                    if factor <= prev {
                        continue;
                    }
                }
                current.push(factor);
                self.enumerate(remaining - deg, Some(factor), current, even_only, out);
                current.pop();
            }
        }
    }

    /// Dimension of the even-factor subspace in the given degree.
    pub fn even_dimension(&self, d: i64) -> usize {
        self.basis_of_degree(d, true).len()
    }
}

/// Coefficient of a monomial in a vector (zero when absent).
pub fn coefficient(v: &FockVector, mon: &FockMonomial) -> Rational {
    v.get(mon).cloned().unwrap_or_else(Rational::zero)
}
