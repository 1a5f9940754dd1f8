//! The vacuum module at a formal central value.
//!
//! The Lie algebra splits into the abelian subalgebra of creation
//! generators (both modes negative) and the annihilating part `𝔅₊`
//! (some mode nonnegative). The module is spanned by ordered products
//! of creation generators applied to a vacuum vector `v_r`, with `𝔅₊`
//! annihilating `v_r` and the central `K` acting as the formal scalar `r`.
//! Coefficients live in ℚ[r], so one computation covers every central
//! value at once.
//!
//! Annihilation operators act by the commutation recursion
//! `g·(g₁·w) = [g,g₁]·w + g₁·(g·w)`, memoized per `(generator, monomial)`
//! pair.

use crate::fermion::{self, FockSpace, FockVector};
use crate::loop_lie::{bracket, GenCombination, Generator, LoopFamily};
use crate::scalar::{qi, RPoly};
use crate::spaces::Space;
use crate::{Error, Result};
use dashmap::DashMap;
use num::traits::Zero;
use std::collections::BTreeMap;

/// An ordered product of creation generators (sorted ascending; the
/// creation subalgebra is abelian, so the sorted form is canonical).
pub type PBWMonomial = Vec<Generator>;

/// A finite combination of basis monomials with ℚ[r] coefficients.
pub type ModuleVector = BTreeMap<PBWMonomial, RPoly>;

/// Adds `c · mon` to `v`, dropping cancellations.
pub fn add_term(v: &mut ModuleVector, mon: PBWMonomial, c: RPoly) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match v.entry(mon) {
        Entry::Occupied(mut e) => {
            let sum = e.get().add(&c);
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
        Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

/// The vacuum vector `v_r` (empty monomial, coefficient 1).
pub fn vacuum_vector() -> ModuleVector {
    let mut v = ModuleVector::new();
    v.insert(Vec::new(), RPoly::one());
    v
}

/// Total degree of a monomial: the sum of `−(m+n)` over its factors.
pub fn monomial_degree(mon: &PBWMonomial) -> i64 {
    mon.iter().map(|g| g.degree()).sum()
}

/// Scales every coefficient.
pub fn scale_vector(v: &ModuleVector, c: &RPoly) -> ModuleVector {
    if c.is_zero() {
        return ModuleVector::new();
    }
    v.iter().map(|(m, p)| (m.clone(), p.mul(c))).collect()
}

/// Adds `other` into `v`.
pub fn add_vector(v: &mut ModuleVector, other: &ModuleVector) {
    for (m, c) in other {
        add_term(v, m.clone(), c.clone());
    }
}

/// The module action evaluator for one family over one space.
pub struct Evaluator {
    space: Space,
    family: LoopFamily,
    memo: DashMap<(Generator, PBWMonomial), ModuleVector>,
}

impl Evaluator {
    pub fn new(family: LoopFamily, space: Space) -> Result<Self> {
        family.check_space(&space)?;
        Ok(Evaluator {
            space,
            family,
            memo: DashMap::new(),
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn family(&self) -> LoopFamily {
        self.family
    }

    /// Applies a single canonical generator to a basis monomial.
    pub fn apply_generator(&self, g: &Generator, mon: &PBWMonomial) -> Result<ModuleVector> {
        if g.family != self.family {
            return Err(Error::FamilyMismatch("generator family vs evaluator family"));
        }
        if g.is_creation() {
            // Creation operators multiply: insert in sorted position.
            let mut out_mon = mon.clone();
            let pos = match out_mon.binary_search(g) {
                Ok(p) | Err(p) => p,
            };
            out_mon.insert(pos, *g);
            let mut out = ModuleVector::new();
            out.insert(out_mon, RPoly::one());
            return Ok(out);
        }
        if mon.is_empty() {
            return Ok(ModuleVector::new()); // 𝔅₊ annihilates v_r
        }
        let key = (*g, mon.clone());
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let g1 = mon[0];
        let rest: PBWMonomial = mon[1..].to_vec();
        // g·(g₁·rest) = [g, g₁]·rest + g₁·(g·rest)
        let br = bracket(&self.space, g, &g1)?;
        let mut rest_vec = ModuleVector::new();
        rest_vec.insert(rest.clone(), RPoly::one());
        let mut out = self.apply_combination(&br, &rest_vec)?;
        let pushed = self.apply_generator(g, &rest)?;
        for (m2, c) in &pushed {
            let reinserted = self.apply_generator(&g1, m2)?;
            for (m3, c3) in reinserted {
                add_term(&mut out, m3, c3.mul(c));
            }
        }
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    /// Applies a generator linearly to a vector.
    pub fn apply_generator_to_vector(
        &self,
        g: &Generator,
        v: &ModuleVector,
    ) -> Result<ModuleVector> {
        let mut out = ModuleVector::new();
        for (mon, c) in v {
            let image = self.apply_generator(g, mon)?;
            for (m2, c2) in image {
                add_term(&mut out, m2, c2.mul(c));
            }
        }
        Ok(out)
    }

    /// Applies a combination of generators plus central part; `K` acts as
    /// multiplication by the polynomial variable `r`.
    pub fn apply_combination(
        &self,
        comb: &GenCombination,
        v: &ModuleVector,
    ) -> Result<ModuleVector> {
        let mut out = ModuleVector::new();
        for (g, c) in &comb.terms {
            let image = self.apply_generator_to_vector(g, v)?;
            for (m2, c2) in image {
                add_term(&mut out, m2, c2.mul(c));
            }
        }
        if !comb.k_coeff.is_zero() {
            let central = comb.k_coeff.mul(&RPoly::var());
            for (mon, c) in v {
                add_term(&mut out, mon.clone(), c.mul(&central));
            }
        }
        Ok(out)
    }

    /// All creation generators of the given positive degree, ascending.
    pub fn creation_generators_of_degree(&self, d: i64) -> Vec<Generator> {
        let mut out = Vec::new();
        // Slots (m, a), (n, b) with m ≤ n ≤ −1 and −(m+n) = d.
        for m in -(d - 1)..=-1 {
            let n = -d - m;
            if m > n || n > -1 {
                continue;
            }
            for a in 0..self.space.dim() {
                for b in 0..self.space.dim() {
                    if let Some((g, sign)) =
                        crate::loop_lie::canonicalize(self.family, a, m, b, n)
                    {
                        if sign == 1 && (g.m, g.a, g.n, g.b) == (m, a, n, b) {
                            out.push(g);
                        }
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// The sorted-monomial basis of the degree-`d` graded piece.
    pub fn basis_of_degree(&self, d: i64) -> Vec<PBWMonomial> {
        let mut gens = Vec::new();
        for k in 2..=d {
            gens.extend(self.creation_generators_of_degree(k));
        }
        gens.sort();
        let mut out = Vec::new();
        let mut current = Vec::new();
        Self::enumerate(&gens, 0, d, &mut current, &mut out);
        out
    }

    fn enumerate(
        gens: &[Generator],
        start: usize,
        remaining: i64,
        current: &mut PBWMonomial,
        out: &mut Vec<PBWMonomial>,
    ) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        for i in start..gens.len() {
            let d = gens[i].degree();
            if d > remaining {
                continue;
            }
            current.push(gens[i]);
            // Repeats allowed: the creation generators are even elements.
            Self::enumerate(gens, i, remaining - d, current, out);
            current.pop();
        }
    }

    /// Dimension of the degree-`d` graded piece.
    pub fn graded_dimension(&self, d: i64) -> usize {
        self.basis_of_degree(d).len()
    }

    /// Independent dimension count: the coefficient of `q^d` in
    /// `Π_k (1 − q^k)^{−c_k}` with `c_k` creation generators of degree `k`.
    pub fn graded_dimension_by_partitions(&self, d: i64) -> usize {
        let d = d as usize;
        let mut coeffs = vec![0u64; d + 1];
        coeffs[0] = 1;
        for k in 2..=d {
            let c_k = self.creation_generators_of_degree(k as i64).len();
            // Multiply by (1 − q^k)^{−c_k}, one factor 1/(1 − q^k) at a time.
            for _ in 0..c_k {
                for i in k..=d {
                    coeffs[i] += coeffs[i - k];
                }
            }
        }
        coeffs[d] as usize
    }

    /// Maps a module vector into the fermionic Fock space at central value
    /// 1: each creation factor acts by its quadratic operator, rightmost
    /// first, and coefficients are evaluated at `r = 1`.
    pub fn to_fock_at_one(&self, v: &ModuleVector, fock: &FockSpace) -> Result<FockVector> {
        if self.family != LoopFamily::C {
            return Err(Error::UnsupportedFamily(
                "the Fock comparison applies to the type C family",
            ));
        }
        let one = qi(1);
        let mut out = FockVector::new();
        for (mon, c) in v {
            let cv = c.eval(&one);
            if cv.is_zero() {
                continue;
            }
            let mut w = fermion::vacuum();
            for g in mon.iter().rev() {
                w = fock.apply_generator(g, &w)?;
            }
            for (fm, fc) in w {
                fermion::add_to(&mut out, fm, fc * &cv);
            }
        }
        Ok(out)
    }

    /// Canonical generators containing a zero mode with the other mode in
    /// `[-bound, bound]`; these all act as zero on the module.
    pub fn zero_mode_generators(&self, bound: i64) -> Vec<Generator> {
        let mut out = Vec::new();
        for other in -bound..=bound {
            for a in 0..self.space.dim() {
                for b in 0..self.space.dim() {
                    if let Some((g, _)) =
                        crate::loop_lie::canonicalize(self.family, a, 0, b, other)
                    {
                        out.push(g);
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loop_lie::canonicalize;

    const PSI1: usize = 0;
    const PSI2: usize = 1;
    const PSI1S: usize = 2;

    fn eval_c4() -> Evaluator {
        Evaluator::new(LoopFamily::C, Space::symplectic(4).unwrap()).unwrap()
    }

    fn gen_c(a: usize, m: i64, b: usize, n: i64) -> Generator {
        canonicalize(LoopFamily::C, a, m, b, n).unwrap().0
    }

    #[test]
    fn graded_dimensions_match_frozen_values() {
        let ev = eval_c4();
        let dims: Vec<usize> = (0..=4).map(|d| ev.graded_dimension(d)).collect();
        assert_eq!(dims, vec![1, 0, 6, 16, 43]);
        let ev6 = Evaluator::new(LoopFamily::C, Space::symplectic(6).unwrap()).unwrap();
        assert_eq!(ev6.graded_dimension(2), 15);
        assert_eq!(ev6.graded_dimension(3), 36);
        let evb = Evaluator::new(LoopFamily::B, Space::orthogonal(3).unwrap()).unwrap();
        let dims_b: Vec<usize> = (0..=4).map(|d| evb.graded_dimension(d)).collect();
        assert_eq!(dims_b, vec![1, 0, 6, 9, 36]);
    }

    #[test]
    fn enumeration_agrees_with_partition_count() {
        for (family, dim) in [(LoopFamily::C, 4usize), (LoopFamily::B, 3)] {
            let space = match family {
                LoopFamily::C => Space::symplectic(dim).unwrap(),
                LoopFamily::B => Space::orthogonal(dim).unwrap(),
            };
            let ev = Evaluator::new(family, space).unwrap();
            for d in 0..=6 {
                assert_eq!(
                    ev.graded_dimension(d),
                    ev.graded_dimension_by_partitions(d),
                    "degree {d} for {family:?}"
                );
            }
        }
    }

    #[test]
    fn creation_action_is_sorted_insertion() {
        let ev = eval_c4();
        let g1 = gen_c(PSI1, -1, PSI1S, -1);
        let g2 = gen_c(PSI1, -2, PSI2, -1);
        let via_12 = ev
            .apply_generator_to_vector(&g1, &ev.apply_generator(&g2, &Vec::new()).unwrap())
            .unwrap();
        let via_21 = ev
            .apply_generator_to_vector(&g2, &ev.apply_generator(&g1, &Vec::new()).unwrap())
            .unwrap();
        assert_eq!(via_12, via_21);
        assert_eq!(via_12.len(), 1);
        let (mon, c) = via_12.iter().next().unwrap();
        assert_eq!(monomial_degree(mon), 5);
        assert!(mon.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(*c, RPoly::one());
    }

    #[test]
    fn annihilation_on_a_quadratic_monomial() {
        // L_{ψ1*,ψ1}(−1,1) · L_{ψ1,ψ1*}(−1,−1) v_r = −L_{ψ1,ψ1*}(−1,−1) v_r
        let ev = eval_c4();
        let g = gen_c(PSI1S, -1, PSI1, 1);
        let mon = vec![gen_c(PSI1, -1, PSI1S, -1)];
        let out = ev.apply_generator(&g, &mon).unwrap();
        let mut expect = ModuleVector::new();
        expect.insert(mon, RPoly::int(-1));
        assert_eq!(out, expect);
    }

    #[test]
    fn central_term_scales_by_r() {
        // σ(L_{ψ1,ψ1*}(−1,−1)) applied to L_{ψ1,ψ1*}(−1,−1) v_r = r·v_r:
        // the diagonal entry of the degree-2 pairing matrix.
        let ev = eval_c4();
        let l = gen_c(PSI1, -1, PSI1S, -1);
        let (sg, sign) = l.sigma();
        let mut comb = GenCombination::zero();
        comb.add_generator(sg, RPoly::int(sign));
        let mut v = ModuleVector::new();
        v.insert(vec![l], RPoly::one());
        let out = ev.apply_combination(&comb, &v).unwrap();
        let mut expect = ModuleVector::new();
        expect.insert(Vec::new(), RPoly::var());
        assert_eq!(out, expect);
    }

    #[test]
    fn zero_mode_generators_annihilate_low_degrees() {
        let ev = eval_c4();
        let gens = ev.zero_mode_generators(3);
        assert!(!gens.is_empty());
        let mut basis = Vec::new();
        for d in 0..=3 {
            basis.extend(ev.basis_of_degree(d));
        }
        for g in &gens {
            for mon in &basis {
                let out = ev.apply_generator(g, mon).unwrap();
                assert!(
                    out.is_empty(),
                    "zero-mode generator {g:?} should annihilate {mon:?}"
                );
            }
        }
    }

    #[test]
    fn fock_map_on_single_monomials() {
        let ev = eval_c4();
        let fock = FockSpace::new(*ev.space()).unwrap();
        let mut v = ModuleVector::new();
        v.insert(vec![gen_c(PSI1, -1, PSI1S, -1)], RPoly::one());
        let image = ev.to_fock_at_one(&v, &fock).unwrap();
        assert_eq!(
            fermion::coefficient(&image, &vec![(-1, PSI1), (-1, PSI1S)]),
            qi(1)
        );
        let mut w = ModuleVector::new();
        w.insert(vec![gen_c(PSI1, -2, PSI2, -1)], RPoly::one());
        let image_w = ev.to_fock_at_one(&w, &fock).unwrap();
        assert_eq!(
            fermion::coefficient(&image_w, &vec![(-2, PSI1), (-1, PSI2)]),
            qi(1)
        );
    }

    /// The Fock map intertwines the module action with the quadratic
    /// operators at central value 1 (the module-level arbitration check).
    #[test]
    fn fock_map_intertwines_the_action() {
        let ev = eval_c4();
        let fock = FockSpace::new(*ev.space()).unwrap();
        let gens = crate::loop_lie::generators_in_window(LoopFamily::C, ev.space(), -2, 2);
        let mut basis = Vec::new();
        for d in 0..=3 {
            basis.extend(ev.basis_of_degree(d));
        }
        for g in &gens {
            for mon in &basis {
                let mut v = ModuleVector::new();
                v.insert(mon.clone(), RPoly::one());
                let module_route = ev
                    .to_fock_at_one(&ev.apply_generator(g, mon).unwrap(), &fock)
                    .unwrap();
                let fock_route = fock
                    .apply_generator(g, &ev.to_fock_at_one(&v, &fock).unwrap())
                    .unwrap();
                assert_eq!(module_route, fock_route, "intertwining for {g:?} on {mon:?}");
            }
        }
    }
}
