//! Finite-dimensional Jordan algebras realized on rank-one operators.
//!
//! For a space with bilinear form, the elements are spanned by symbols
//! `L_{a,b}` built from basis vectors:
//!
//! - type B (orthogonal space): `L_{a,b} = a⊗b + b⊗a`, so `L_{a,b} = L_{b,a}`
//!   and keys are stored with `a ≤ b`;
//! - type C (symplectic space): `L_{a,b} = a⊗b − b⊗a`, so `L_{a,b} = −L_{b,a}`
//!   and `L_{a,a} = 0`; keys are stored with `a < b`;
//! - type A (either space): `L̃_{a,b} = a⊗b` with no symmetry; keys are
//!   arbitrary ordered pairs.
//!
//! The product is `x∘y = ½(xy + yx)` of the underlying rank-one operators,
//! expanded over the pairing. Types B and C admit a Jordan frame (complete
//! system of orthogonal idempotents summing to the identity).

use crate::scalar::{q, qi, Rational};
use crate::spaces::{Space, SpaceKind};
use crate::{Error, Result};
use num::traits::Zero;
use rand::Rng;
use std::collections::BTreeMap;
use std::fmt;

/// The three operator-algebra families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum JordanFamily {
    A,
    B,
    C,
}

impl JordanFamily {
    /// Validates that the family is defined over the given space kind.
    pub fn check_space(&self, space: &Space) -> Result<()> {
        match (self, space.kind()) {
            (JordanFamily::B, SpaceKind::Orthogonal) => Ok(()),
            (JordanFamily::C, SpaceKind::Symplectic) => Ok(()),
            (JordanFamily::A, _) => Ok(()),
            (JordanFamily::B, _) => Err(Error::UnsupportedFamily(
                "type B requires an orthogonal space",
            )),
            (JordanFamily::C, _) => Err(Error::UnsupportedFamily(
                "type C requires a symplectic space",
            )),
        }
    }

    /// Dimension of the algebra over a `d`-dimensional space:
    /// `d(d+1)/2` (B), `d(d−1)/2` (C), `d²` (A).
    pub fn algebra_dim(&self, space: &Space) -> usize {
        let d = space.dim();
        match self {
            JordanFamily::A => d * d,
            JordanFamily::B => d * (d + 1) / 2,
            JordanFamily::C => d * (d - 1) / 2,
        }
    }
}

/// An element of the Jordan algebra: a finite ℚ-combination of canonical
/// `L_{a,b}` keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanElement {
    family: JordanFamily,
    space: Space,
    terms: BTreeMap<(usize, usize), Rational>,
}

impl JordanElement {
    /// The zero element.
    pub fn zero(family: JordanFamily, space: Space) -> Result<Self> {
        family.check_space(&space)?;
        Ok(JordanElement {
            family,
            space,
            terms: BTreeMap::new(),
        })
    }

    /// The basis symbol `L_{a,b}`, canonicalized per family (so for type C,
    /// `basis(b, a) = −basis(a, b)` and `basis(a, a) = 0`).
    pub fn basis(family: JordanFamily, space: Space, a: usize, b: usize) -> Result<Self> {
        let mut x = JordanElement::zero(family, space)?;
        x.add_term(a, b, qi(1))?;
        Ok(x)
    }

    /// Adds `c·L_{a,b}` (canonicalizing the key first).
    pub fn add_term(&mut self, a: usize, b: usize, c: Rational) -> Result<()> {
        if a >= self.space.dim() || b >= self.space.dim() {
            return Err(Error::IndexOutOfRange {
                index: a.max(b),
                dim: self.space.dim(),
            });
        }
        let (key, sign) = match self.family {
            JordanFamily::A => ((a, b), 1),
            JordanFamily::B => ((a.min(b), a.max(b)), 1),
            JordanFamily::C => {
                if a == b {
                    return Ok(()); // L_{a,a} = 0
                } else if a < b {
                    ((a, b), 1)
                } else {
                    ((b, a), -1)
                }
            }
        };
        let entry = self.terms.entry(key).or_insert_with(Rational::zero);
        *entry += c * qi(sign);
        if entry.is_zero() {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn family(&self) -> JordanFamily {
        self.family
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Canonical terms, deterministically ordered by key.
    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &Rational)> {
        self.terms.iter()
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.family != other.family || self.space != other.space {
            return Err(Error::FamilyMismatch(
                "jordan elements over different algebras",
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, c.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return JordanElement {
                family: self.family,
                space: self.space,
                terms: BTreeMap::new(),
            };
        }
        JordanElement {
            family: self.family,
            space: self.space,
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&qi(-1)))
    }
}

impl fmt::Display for JordanElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&(a, b), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let la = self.space.label(a).map_err(|_| fmt::Error)?;
            let lb = self.space.label(b).map_err(|_| fmt::Error)?;
            write!(f, "({c})*L[{la},{lb}]")?;
        }
        Ok(())
    }
}

/// The Jordan product `x∘y = ½(xy + yx)`, expanded on basis symbols:
///
/// - type C: `½⟨b,u⟩L_{a,v} − ½⟨b,v⟩L_{a,u} − ½⟨a,u⟩L_{b,v} + ½⟨a,v⟩L_{b,u}`,
/// - type B: the same four terms, all with `+` signs and the symmetric form,
/// - type A: `½(b,u)L̃_{a,v} + ½(v,a)L̃_{u,b}`.
pub fn jordan_product(x: &JordanElement, y: &JordanElement) -> Result<JordanElement> {
    x.compatible(y)?;
    let space = x.space;
    let half = q(1, 2);
    let mut out = JordanElement::zero(x.family, space)?;
    for (&(a, b), ca) in &x.terms {
        for (&(u, v), cb) in &y.terms {
            let c = ca * cb * &half;
            if c.is_zero() {
                continue;
            }
            match x.family {
                JordanFamily::A => {
                    out.add_term(a, v, &c * space.pairing(b, u)?)?;
                    out.add_term(u, b, &c * space.pairing(v, a)?)?;
                }
                JordanFamily::B => {
                    out.add_term(a, v, &c * space.pairing(b, u)?)?;
                    out.add_term(a, u, &c * space.pairing(b, v)?)?;
                    out.add_term(b, v, &c * space.pairing(a, u)?)?;
                    out.add_term(b, u, &c * space.pairing(a, v)?)?;
                }
                JordanFamily::C => {
                    out.add_term(a, v, &c * space.pairing(b, u)?)?;
                    out.add_term(a, u, -(&c * space.pairing(b, v)?))?;
                    out.add_term(b, v, -(&c * space.pairing(a, u)?))?;
                    out.add_term(b, u, &c * space.pairing(a, v)?)?;
                }
            }
        }
    }
    Ok(out)
}

/// The Jordan frame: `{½L_{e_i,e_i}}` for type B, `{L_{ψ_i,ψ*_i}}` for
/// type C. Type A has no distinguished frame here.
pub fn frame(family: JordanFamily, space: Space) -> Result<Vec<JordanElement>> {
    family.check_space(&space)?;
    match family {
        JordanFamily::A => Err(Error::UnsupportedFamily("type A has no frame")),
        JordanFamily::B | JordanFamily::C => (0..space.frame_count())
            .map(|k| {
                let (a, b) = space.frame_pair(k)?;
                let x = JordanElement::basis(family, space, a, b)?;
                Ok(match family {
                    JordanFamily::B => x.scale(&q(1, 2)),
                    _ => x,
                })
            })
            .collect(),
    }
}

/// The identity element: the sum of the frame.
pub fn identity(family: JordanFamily, space: Space) -> Result<JordanElement> {
    let mut e = JordanElement::zero(family, space)?;
    for f in frame(family, space)? {
        e = e.add(&f)?;
    }
    Ok(e)
}

/// Checks the Jordan identity `(x∘y)∘(x∘x) = x∘(y∘(x∘x))` for one pair;
/// returns the difference (zero iff the identity holds).
pub fn jordan_identity_defect(x: &JordanElement, y: &JordanElement) -> Result<JordanElement> {
    let xx = jordan_product(x, x)?;
    let lhs = jordan_product(&jordan_product(x, y)?, &xx)?;
    let rhs = jordan_product(x, &jordan_product(y, &xx)?)?;
    lhs.sub(&rhs)
}

/// All canonical basis keys of the algebra, in deterministic order.
pub fn basis_keys(family: JordanFamily, space: Space) -> Vec<(usize, usize)> {
    let d = space.dim();
    let mut keys = Vec::new();
    for a in 0..d {
        for b in 0..d {
            let ok = match family {
                JordanFamily::A => true,
                JordanFamily::B => a <= b,
                JordanFamily::C => a < b,
            };
            if ok {
                keys.push((a, b));
            }
        }
    }
    keys
}

/// A pseudorandom element with small rational coefficients (for seeded
/// property sweeps).
pub fn random_element(
    family: JordanFamily,
    space: Space,
    rng: &mut impl Rng,
) -> Result<JordanElement> {
    let keys = basis_keys(family, space);
    let mut x = JordanElement::zero(family, space)?;
    let picks = rng.gen_range(1..=3usize);
    for _ in 0..picks {
        let (a, b) = keys[rng.gen_range(0..keys.len())];
        let num = rng.gen_range(-4i64..=4);
        let den = rng.gen_range(1i64..=3);
        x.add_term(a, b, q(num, den))?;
    }
    Ok(x)
}
