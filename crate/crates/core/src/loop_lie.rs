//! The infinite-dimensional Lie algebra of mode quadratics.
//!
//! Generators `L_{a,b}(m,n)` are indexed by two basis vectors and two integer
//! modes, together with a central element `K`. They normalize the raw
//! quadratics `a(m)b(n)`:
//!
//! - type C (skew form, symmetric quadratics in the loop variable):
//!   `L_{a,b}(m,n) = a(m)b(n) − ½|m|δ_{m+n,0}⟨a,b⟩K`, with
//!   `L_{a,b}(m,n) = −L_{b,a}(n,m)` and vanishing diagonal;
//! - type B (symmetric form):
//!   `L_{a,b}(m,n) = ½·a(m)b(n) − ¼|m|δ_{m+n,0}(a,b)K`, with
//!   `L_{a,b}(m,n) = +L_{b,a}(n,m)`.
//!
//! The bracket expands `[a(m)b(n), u(p)v(q)]` by contracting one mode of each
//! side through the form on loop space (`(a(m), u(p)) = m⟨a,u⟩δ_{m+p,0}` for
//! type C, `m(a,u)δ_{m+p,0}` for type B) and re-expresses the resulting raw
//! quadratics in terms of generators plus `K`. For type C two sign patterns
//! are in circulation for the last two contraction terms; the default
//! [`BracketVariant::Derived`] pattern is the one validated against the
//! fermionic oracle, and [`BracketVariant::Printed`] is kept available for
//! side-by-side comparison.

use crate::scalar::{q, qi, RPoly, Rational};
use crate::spaces::{Space, SpaceKind};
use crate::{Error, Result};
use num::traits::Zero;
use rand::Rng;
use std::collections::BTreeMap;
use std::fmt;

/// Loop-algebra family: `ε = +1` (type B) or `ε = −1` (type C).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LoopFamily {
    B,
    C,
}

impl LoopFamily {
    /// The swap sign `ε`: `L_{b,a}(n,m) = ε·L_{a,b}(m,n)`.
    pub fn epsilon(&self) -> i64 {
        match self {
            LoopFamily::B => 1,
            LoopFamily::C => -1,
        }
    }

    /// Validates the space kind for this family.
    pub fn check_space(&self, space: &Space) -> Result<()> {
        match (self, space.kind()) {
            (LoopFamily::B, SpaceKind::Orthogonal) | (LoopFamily::C, SpaceKind::Symplectic) => {
                Ok(())
            }
            (LoopFamily::B, _) => Err(Error::UnsupportedFamily(
                "type B loop algebra requires an orthogonal space",
            )),
            (LoopFamily::C, _) => Err(Error::UnsupportedFamily(
                "type C loop algebra requires a symplectic space",
            )),
        }
    }
}

/// Which expansion of the type C bracket to use for the final two
/// contraction terms; `Derived` is the oracle-validated default.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BracketVariant {
    /// `… + nδ_{n+q,0}⟨b,v⟩u(p)a(m) − mδ_{m+q,0}⟨a,v⟩u(p)b(n)`
    Derived,
    /// `… − nδ_{n+q,0}⟨b,v⟩u(p)a(m) + mδ_{m+q,0}⟨a,v⟩u(p)b(n)`
    Printed,
}

/// A canonical generator `L_{a,b}(m,n)`: the slot pair `((m,a), (n,b))` is
/// sorted lexicographically by (mode, basis index), strictly so for type C.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub family: LoopFamily,
    pub m: i64,
    pub a: usize,
    pub n: i64,
    pub b: usize,
}

impl Generator {
    /// Degree contributed when acting on the graded module.
    pub fn degree(&self) -> i64 {
        -(self.m + self.n)
    }

    /// Both modes negative: a creation generator (PBW monomial factor).
    pub fn is_creation(&self) -> bool {
        self.m < 0 && self.n < 0
    }

    /// Member of the annihilating part `𝔅₊` (some mode ≥ 0).
    pub fn in_positive_part(&self) -> bool {
        !self.is_creation()
    }

    /// Largest mode magnitude (used for finite truncation windows).
    pub fn max_abs_mode(&self) -> i64 {
        self.m.abs().max(self.n.abs())
    }

    /// The adjoint `σ(L_{a,b}(m,n)) = L_{b,a}(−n,−m)`, canonicalized.
    /// Returns the canonical generator and the sign it picked up.
    pub fn sigma(&self) -> (Generator, i64) {
        canonicalize(self.family, self.b, -self.n, self.a, -self.m)
            .expect("sigma never maps a canonical generator to zero")
    }

    /// Human-readable form, `L[psi1,psi2*](-2,1)`.
    pub fn display(&self, space: &Space) -> Result<String> {
        Ok(format!(
            "L[{},{}]({},{})",
            space.label(self.a)?,
            space.label(self.b)?,
            self.m,
            self.n
        ))
    }
}

/// Canonicalizes `L_{a,b}(m,n)`: sorts the slots `(m,a)`, `(n,b)` and
/// returns the sign picked up by a swap (`ε` for one transposition).
/// `None` encodes the zero generator (type C with equal slots).
pub fn canonicalize(
    family: LoopFamily,
    a: usize,
    m: i64,
    b: usize,
    n: i64,
) -> Option<(Generator, i64)> {
    if (m, a) == (n, b) && family == LoopFamily::C {
        return None;
    }
    if (m, a) <= (n, b) {
        Some((Generator { family, m, a, n, b }, 1))
    } else {
        Some((
            Generator {
                family,
                m: n,
                a: b,
                n: m,
                b: a,
            },
            family.epsilon(),
        ))
    }
}

/// A finite combination of generators plus a multiple of the central `K`,
/// with ℚ[r] coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GenCombination {
    pub terms: BTreeMap<Generator, RPoly>,
    pub k_coeff: RPoly,
}

impl GenCombination {
    pub fn zero() -> Self {
        GenCombination::default()
    }

    pub fn from_generator(g: Generator) -> Self {
        let mut c = GenCombination::zero();
        c.add_generator(g, RPoly::one());
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.k_coeff.is_zero()
    }

    pub fn add_generator(&mut self, g: Generator, c: RPoly) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(g).or_insert_with(RPoly::zero);
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&g);
        }
    }

    /// Adds `c · L_{a,b}(m,n)` with canonicalization (no-op on the zero
    /// generator).
    pub fn add_raw(&mut self, family: LoopFamily, a: usize, m: i64, b: usize, n: i64, c: RPoly) {
        if let Some((g, sign)) = canonicalize(family, a, m, b, n) {
            self.add_generator(g, c.scale(&qi(sign)));
        }
    }

    pub fn add_k(&mut self, c: RPoly) {
        self.k_coeff = self.k_coeff.add(&c);
    }

    pub fn scale(&self, c: &RPoly) -> Self {
        if c.is_zero() {
            return GenCombination::zero();
        }
        GenCombination {
            terms: self
                .terms
                .iter()
                .map(|(g, v)| (*g, v.mul(c)))
                .collect(),
            k_coeff: self.k_coeff.mul(c),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_generator(*g, c.clone());
        }
        out.add_k(other.k_coeff.clone());
        out
    }

    /// Applies the adjoint `σ` term by term (`σ(K) = K`).
    pub fn sigma(&self) -> Self {
        let mut out = GenCombination::zero();
        for (g, c) in &self.terms {
            let (sg, sign) = g.sigma();
            out.add_generator(sg, c.scale(&qi(sign)));
        }
        out.add_k(self.k_coeff.clone());
        out
    }

    pub fn display(&self, space: &Space) -> Result<String> {
        if self.is_zero() {
            return Ok("0".to_string());
        }
        let mut parts = Vec::new();
        for (g, c) in &self.terms {
            parts.push(format!("({})*{}", c, g.display(space)?));
        }
        if !self.k_coeff.is_zero() {
            parts.push(format!("({})*K", self.k_coeff));
        }
        Ok(parts.join(" + "))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L[#{},#{}]({},{})", self.a, self.b, self.m, self.n)
    }
}

/// Adds `c · e(re) f(se)` to `out`, re-expressed through generators and `K`:
/// `e(r)f(s) = α·L_{e,f}(r,s) + ½|r|δ_{r+s,0}·form(e,f)·K` with `α = 1` for
/// type C and `α = 2` for type B.
fn add_raw_quadratic(
    out: &mut GenCombination,
    space: &Space,
    family: LoopFamily,
    e: usize,
    re: i64,
    f: usize,
    se: i64,
    c: &Rational,
) -> Result<()> {
    if c.is_zero() {
        return Ok(());
    }
    let alpha = match family {
        LoopFamily::B => qi(2),
        LoopFamily::C => qi(1),
    };
    out.add_raw(
        family,
        e,
        re,
        f,
        se,
        RPoly::constant(c * alpha),
    );
    if re + se == 0 {
        let pairing = space.pairing(e, f)?;
        if !pairing.is_zero() {
            out.add_k(RPoly::constant(c * q(re.abs(), 2) * pairing));
        }
    }
    Ok(())
}

/// The Lie bracket `[x, y]` of two canonical generators, as a combination of
/// canonical generators plus `K`, using the default derived sign pattern.
pub fn bracket(space: &Space, x: &Generator, y: &Generator) -> Result<GenCombination> {
    bracket_with_variant(space, x, y, BracketVariant::Derived)
}

/// The bracket with an explicit choice of type C sign pattern (the variant
/// only affects type C; type B has a single all-plus pattern).
pub fn bracket_with_variant(
    space: &Space,
    x: &Generator,
    y: &Generator,
    variant: BracketVariant,
) -> Result<GenCombination> {
    if x.family != y.family {
        return Err(Error::FamilyMismatch("bracket of mixed families"));
    }
    let family = x.family;
    family.check_space(space)?;
    let (a, m, b, n) = (x.a, x.m, x.b, x.n);
    let (u, p, v, qq) = (y.a, y.m, y.b, y.n);

    // Contraction coefficients: the form on loop space pairs e(i) with f(j)
    // as i·form(e,f)·δ_{i+j,0}.
    let contract = |i: i64, e: usize, j: i64, f: usize| -> Result<Rational> {
        if i + j != 0 {
            return Ok(Rational::zero());
        }
        Ok(qi(i) * space.pairing(e, f)?)
    };

    // Global prefactor: type B generators carry ½ against raw quadratics, so
    // [L, L] = ¼ [raw, raw]; type C generators equal their raw quadratics.
    let prefactor = match family {
        LoopFamily::B => q(1, 4),
        LoopFamily::C => qi(1),
    };

    // Sign pattern of the four contraction terms. For type B all four are
    // positive; for type C the derived pattern is (+, −, +, −) on
    // (⟨b,u⟩, ⟨a,u⟩, ⟨b,v⟩, ⟨a,v⟩), the printed alternative flips the last
    // two signs.
    let signs: [i64; 4] = match (family, variant) {
        (LoopFamily::B, _) => [1, 1, 1, 1],
        (LoopFamily::C, BracketVariant::Derived) => [1, -1, 1, -1],
        (LoopFamily::C, BracketVariant::Printed) => [1, -1, -1, 1],
    };

    let mut out = GenCombination::zero();
    // [a(m)b(n), u(p)v(q)]:
    //   s1 · (b(n),u(p)) a(m)v(q)  + s2 · (a(m),u(p)) b(n)v(q)
    // + s3 · (b(n),v(q)) u(p)a(m)  + s4 · (a(m),v(q)) u(p)b(n)
    let c1 = contract(n, b, p, u)? * qi(signs[0]) * &prefactor;
    add_raw_quadratic(&mut out, space, family, a, m, v, qq, &c1)?;
    let c2 = contract(m, a, p, u)? * qi(signs[1]) * &prefactor;
    add_raw_quadratic(&mut out, space, family, b, n, v, qq, &c2)?;
    let c3 = contract(n, b, qq, v)? * qi(signs[2]) * &prefactor;
    add_raw_quadratic(&mut out, space, family, u, p, a, m, &c3)?;
    let c4 = contract(m, a, qq, v)? * qi(signs[3]) * &prefactor;
    add_raw_quadratic(&mut out, space, family, u, p, b, n, &c4)?;
    Ok(out)
}

/// Bilinear extension of the bracket to combinations (`K` is central, so
/// `k_coeff` parts contribute nothing).
pub fn bracket_comb(
    space: &Space,
    x: &GenCombination,
    y: &GenCombination,
) -> Result<GenCombination> {
    let mut out = GenCombination::zero();
    for (gx, cx) in &x.terms {
        for (gy, cy) in &y.terms {
            let b = bracket(space, gx, gy)?;
            out = out.add(&b.scale(&cx.mul(cy)));
        }
    }
    Ok(out)
}

/// All canonical generators with both modes in `[mode_min, mode_max]`, in
/// deterministic order.
pub fn generators_in_window(
    family: LoopFamily,
    space: &Space,
    mode_min: i64,
    mode_max: i64,
) -> Vec<Generator> {
    let mut slots = Vec::new();
    for m in mode_min..=mode_max {
        for a in 0..space.dim() {
            slots.push((m, a));
        }
    }
    let mut gens = Vec::new();
    for (i, &(m, a)) in slots.iter().enumerate() {
        let start = match family {
            LoopFamily::C => i + 1,
            LoopFamily::B => i,
        };
        for &(n, b) in &slots[start..] {
            gens.push(Generator { family, m, a, n, b });
        }
    }
    gens
}

/// A pseudorandom canonical generator with modes in `[-bound, bound]`.
pub fn random_generator(
    family: LoopFamily,
    space: &Space,
    bound: i64,
    rng: &mut impl Rng,
) -> Generator {
    loop {
        let a = rng.gen_range(0..space.dim());
        let b = rng.gen_range(0..space.dim());
        let m = rng.gen_range(-bound..=bound);
        let n = rng.gen_range(-bound..=bound);
        if let Some((g, _)) = canonicalize(family, a, m, b, n) {
            return g;
        }
    }
}
