//! Finite-rank root data of type D and the scalar-type parabolic-Verma
//! simplicity criterion used to detect the non-simple locus in the central
//! parameter `r`.
//!
//! The triangular decomposition carried by the induced module singles out a
//! *nonstandard* positive system for D_N:
//!
//! ```text
//! Φ₊ = { ε_i + ε_j | i < j } ∪ { −ε_i + ε_j | i < j },
//! ```
//!
//! whose parabolic part Φ_I consists of the ±(ε_i − ε_j) and whose half sum
//! is ρ = Σ_{i>1} (i−1)·ε_i. The highest weight of the scalar-type module at
//! central parameter `r` is λ = −r/2·Σ ε_i. Reducibility is probed through
//! the pairings of λ against the coroots of the non-parabolic positive roots
//! ε_k + ε_l; the criterion value works out to `−r + k + l`, and a positive
//! integer value is a reducibility witness whenever the shifted weight is
//! regular (which happens exactly away from r = 1).
//!
//! All pairings are computed from the constructed root datum, never from the
//! closed forms; the closed forms are what the unit tests freeze.

use crate::scalar::{q, qi, Rational};
use crate::{Error, Result};
use num::traits::Zero;
use std::collections::BTreeMap;

/// A root of D_N, stored as integer coefficients on ε_1..ε_N.
pub type RootVector = Vec<i64>;

/// The rank-N root datum with the nonstandard positive system adapted to
/// the oscillator triangular decomposition.
#[derive(Clone, Debug)]
pub struct RootDatumDN {
    n: usize,
}

impl RootDatumDN {
    /// Builds the rank-`n` datum; ranks below 2 have no pair (k, l) to probe.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidRank(n));
        }
        Ok(RootDatumDN { n })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    fn unit(&self, i: usize, sign: i64) -> RootVector {
        let mut v = vec![0i64; self.n];
        v[i - 1] = sign;
        v
    }

    fn sum_root(&self, k: usize, l: usize) -> RootVector {
        let mut v = self.unit(k, 1);
        v[l - 1] += 1;
        v
    }

    fn difference_root(&self, i: usize, j: usize) -> RootVector {
        let mut v = self.unit(i, -1);
        v[j - 1] += 1;
        v
    }

    /// The positive system: all ε_i + ε_j and all −ε_i + ε_j with i < j.
    pub fn positive_roots(&self) -> Vec<RootVector> {
        let mut roots = Vec::new();
        for i in 1..=self.n {
            for j in (i + 1)..=self.n {
                roots.push(self.sum_root(i, j));
            }
        }
        for i in 1..=self.n {
            for j in (i + 1)..=self.n {
                roots.push(self.difference_root(i, j));
            }
        }
        roots
    }

    /// The positive part of the parabolic (Levi) subsystem: −ε_i + ε_j, i < j.
    pub fn parabolic_positive_roots(&self) -> Vec<RootVector> {
        let mut roots = Vec::new();
        for i in 1..=self.n {
            for j in (i + 1)..=self.n {
                roots.push(self.difference_root(i, j));
            }
        }
        roots
    }

    /// The non-parabolic positive roots ε_k + ε_l, k < l — the ones whose
    /// coroot pairings drive the simplicity criterion.
    pub fn radical_positive_roots(&self) -> Vec<RootVector> {
        let mut roots = Vec::new();
        for k in 1..=self.n {
            for l in (k + 1)..=self.n {
                roots.push(self.sum_root(k, l));
            }
        }
        roots
    }

    /// Simple roots of the positive system: ε_1 + ε_2 together with the
    /// consecutive differences −ε_i + ε_{i+1}.
    pub fn simple_roots(&self) -> Vec<RootVector> {
        let mut roots = vec![self.sum_root(1, 2)];
        for i in 1..self.n {
            roots.push(self.difference_root(i, i + 1));
        }
        roots
    }

    /// Half the sum of the constructed positive roots.
    pub fn rho_half_sum(&self) -> Vec<Rational> {
        let mut rho = vec![Rational::zero(); self.n];
        for root in self.positive_roots() {
            for (i, c) in root.iter().enumerate() {
                rho[i] += q(*c, 2);
            }
        }
        rho
    }

    /// The closed form ρ_i = i − 1.
    pub fn rho_closed_form(&self) -> Vec<Rational> {
        (0..self.n).map(|i| qi(i as i64)).collect()
    }
}

/// The scalar highest weight λ = −r/2·Σ ε_i at central parameter `r`.
pub fn lambda_weight(n: usize, r: &Rational) -> Vec<Rational> {
    vec![-(r.clone()) * q(1, 2); n]
}

fn dot(w: &[Rational], root: &[i64]) -> Rational {
    w.iter()
        .zip(root)
        .map(|(c, k)| c.clone() * qi(*k))
        .sum()
}

fn root_norm_sq(root: &[i64]) -> i64 {
    root.iter().map(|c| c * c).sum()
}

/// Pairs a weight against the coroot 2β/(β,β) of `root`.
pub fn coroot_pair(w: &[Rational], root: &[i64]) -> Rational {
    dot(w, root) * q(2, root_norm_sq(root))
}

fn check_pair_indices(n: usize, k: usize, l: usize) -> Result<()> {
    if k < 1 || k >= l || l > n {
        let index = if k < 1 || k >= l { k } else { l };
        return Err(Error::IndexOutOfRange { index, dim: n });
    }
    Ok(())
}

/// The criterion pairing of λ at parameter `r` against (ε_k + ε_l)∨,
/// 1 ≤ k < l ≤ N. The pairing carries the unit shift Σ ε_i on top of the
/// half-sum ρ — the shift the mode-ladder normalization of the oscillator
/// realization induces — and evaluates to −r + k + l. The unshifted variant
/// is [`half_sum_pairing`].
pub fn coroot_pairing(n: usize, r: &Rational, k: usize, l: usize) -> Result<Rational> {
    let datum = RootDatumDN::new(n)?;
    check_pair_indices(n, k, l)?;
    let mut w = lambda_weight(n, r);
    for (i, rho_i) in datum.rho_half_sum().into_iter().enumerate() {
        w[i] += rho_i + qi(1);
    }
    Ok(coroot_pair(&w, &datum.sum_root(k, l)))
}

/// The plain ⟨λ + ρ, (ε_k + ε_l)∨⟩ pairing, without the ladder shift; it
/// evaluates to −r + k + l − 2 and is the quantity regularity is read from.
pub fn half_sum_pairing(n: usize, r: &Rational, k: usize, l: usize) -> Result<Rational> {
    let datum = RootDatumDN::new(n)?;
    check_pair_indices(n, k, l)?;
    let mut w = lambda_weight(n, r);
    for (i, rho_i) in datum.rho_half_sum().into_iter().enumerate() {
        w[i] += rho_i;
    }
    Ok(coroot_pair(&w, &datum.sum_root(k, l)))
}

// ---------------------------------------------------------------------------
// Oscillator validation of the coroots.
//
// The Cartan generators can be realized on a rank-N oscillator algebra with
// generators e_a, a ∈ {±1..±N}, and relations [e_a, e_b] = sign(b)·δ_{a+b,0}.
// The quadratics close under the bracket, the element h_m = −e_{−m}e_m
// satisfies ε_i(h_m) = δ_{im} on the creation quadratics e_{−i}e_{−j} (whose
// root is ε_i + ε_j), and the coroot of ε_k + ε_l is h_k + h_l =
// −(e_{−k}e_k + e_{−l}e_l), pairing to 2 against its own root.
// ---------------------------------------------------------------------------

/// An element of the oscillator quadratic algebra: a scalar plus a
/// combination of normally-ordered quadratics e_a·e_b with a ≤ b.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
struct OscElement {
    scalar: Rational,
    quads: BTreeMap<(i64, i64), Rational>,
}

fn osc_contraction(a: i64, b: i64) -> Rational {
    if a + b == 0 {
        qi(b.signum())
    } else {
        Rational::zero()
    }
}

impl OscElement {
    fn add_quad(&mut self, a: i64, b: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        if a <= b {
            let entry = self.quads.entry((a, b)).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                self.quads.remove(&(a, b));
            }
        } else {
            // e_a e_b = e_b e_a + [e_a, e_b]
            self.scalar += osc_contraction(a, b) * c.clone();
            self.add_quad(b, a, c);
        }
    }

    fn scale(&self, c: &Rational) -> OscElement {
        let mut out = OscElement::default();
        out.scalar = self.scalar.clone() * c.clone();
        for ((a, b), v) in &self.quads {
            out.add_quad(*a, *b, v.clone() * c.clone());
        }
        out
    }

    fn add(&mut self, other: &OscElement) {
        self.scalar += other.scalar.clone();
        for ((a, b), v) in &other.quads {
            self.add_quad(*a, *b, v.clone());
        }
    }
}

fn osc_quad(a: i64, b: i64) -> OscElement {
    let mut e = OscElement::default();
    e.add_quad(a, b, qi(1));
    e
}

/// Bracket of two oscillator quadratic elements (the scalar parts are
/// central). Expanding [e_a e_b, e_c e_d] leaves four quadratic terms with
/// scalar contraction coefficients.
fn osc_bracket(x: &OscElement, y: &OscElement) -> OscElement {
    let mut out = OscElement::default();
    for ((a, b), cx) in &x.quads {
        for ((c, d), cy) in &y.quads {
            let coeff = cx.clone() * cy.clone();
            let mut term = OscElement::default();
            term.add_quad(*a, *c, osc_contraction(*b, *d));
            term.add_quad(*a, *d, osc_contraction(*b, *c));
            term.add_quad(*c, *b, osc_contraction(*a, *d));
            term.add_quad(*d, *b, osc_contraction(*a, *c));
            out.add(&term.scale(&coeff));
        }
    }
    out
}

fn osc_cartan(m: i64) -> OscElement {
    osc_quad(-m, m).scale(&qi(-1))
}

/// Validates the coroot construction on the oscillator realization up to
/// rank `n`: each creation quadratic e_{−i}e_{−j} is a simultaneous
/// eigenvector of the h_m with eigenvalues δ_{mi} + δ_{mj} (so its root is
/// ε_i + ε_j), and the coroot h_k + h_l of ε_k + ε_l pairs to 2 against its
/// own root vector.
pub fn coroot_oscillator_check(n: usize) -> Result<bool> {
    RootDatumDN::new(n)?;
    for i in 1..=(n as i64) {
        for j in (i + 1)..=(n as i64) {
            let x = osc_quad(-i, -j);
            for m in 1..=(n as i64) {
                let got = osc_bracket(&osc_cartan(m), &x);
                let eigen = qi((m == i) as i64 + (m == j) as i64);
                if got != x.scale(&eigen) {
                    return Ok(false);
                }
            }
        }
    }
    // β(β∨) = 2 for β = ε_k + ε_l via the eigenvalue of h_k + h_l.
    for k in 1..=(n as i64) {
        for l in (k + 1)..=(n as i64) {
            let x = osc_quad(-k, -l);
            let mut h = osc_cartan(k);
            h.add(&osc_cartan(l));
            if osc_bracket(&h, &x) != x.scale(&qi(2)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Simplicity verdict.
// ---------------------------------------------------------------------------

/// Outcome of the parabolic simplicity criterion at a given rank and
/// parameter value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimplicityVerdict {
    /// No criterion pairing is a positive integer: the module is simple.
    Simple,
    /// Some pairing is a positive integer and the shifted weight is regular:
    /// the named root ε_k + ε_l witnesses reducibility.
    ReducibleWitness { k: usize, l: usize },
    /// A positive-integer pairing exists but the shifted weight is
    /// irregular (this happens exactly at r = 1), so the converse direction
    /// of the criterion does not apply.
    InconclusiveIrregular,
}

/// Full verdict report: the pairing tables, both regularity readings, the
/// witnesses, and the verdict.
#[derive(Clone, Debug)]
pub struct JantzenReport {
    pub rank: usize,
    pub r: Rational,
    /// Criterion pairings ((k, l), −r + k + l) over all 1 ≤ k < l ≤ N.
    pub pairings: Vec<((usize, usize), Rational)>,
    /// Unshifted pairings ((k, l), −r + k + l − 2).
    pub half_sum_pairings: Vec<((usize, usize), Rational)>,
    /// All (k, l) whose criterion pairing lies in ℤ_{>0}, lex order.
    pub witnesses: Vec<(usize, usize)>,
    /// ⟨λ+ρ, α∨⟩ ≠ 0 for every simple root α (fails exactly at r = 1).
    pub regular_on_simple_roots: bool,
    /// ⟨λ+ρ, β∨⟩ ≠ 0 for every positive root β (the stricter reading).
    pub regular_on_all_roots: bool,
    pub verdict: SimplicityVerdict,
}

impl JantzenReport {
    /// Human-readable caveat attached to the inconclusive case.
    pub fn verdict_note(&self) -> Option<&'static str> {
        match self.verdict {
            SimplicityVerdict::InconclusiveIrregular => Some(
                "the shifted weight is irregular at this parameter; the boundary \
                 point is settled by the free-fermion comparison, not by this criterion",
            ),
            _ => None,
        }
    }
}

fn is_positive_integer(x: &Rational) -> bool {
    x.is_integer() && *x > Rational::zero()
}

/// Runs the simplicity criterion at rank `n` and parameter `r`: collects all
/// criterion pairings, reads off positive-integer witnesses, checks both
/// regularity notions of λ + ρ, and combines them into a verdict.
pub fn jantzen_verdict(n: usize, r: &Rational) -> Result<JantzenReport> {
    let datum = RootDatumDN::new(n)?;
    let mut pairings = Vec::new();
    let mut half_sum_pairings = Vec::new();
    let mut witnesses = Vec::new();
    for k in 1..=n {
        for l in (k + 1)..=n {
            let value = coroot_pairing(n, r, k, l)?;
            if is_positive_integer(&value) {
                witnesses.push((k, l));
            }
            pairings.push(((k, l), value));
            half_sum_pairings.push(((k, l), half_sum_pairing(n, r, k, l)?));
        }
    }
    let mut shifted = lambda_weight(n, r);
    for (i, rho_i) in datum.rho_half_sum().into_iter().enumerate() {
        shifted[i] += rho_i;
    }
    let regular_on_simple_roots = datum
        .simple_roots()
        .iter()
        .all(|alpha| !coroot_pair(&shifted, alpha).is_zero());
    let regular_on_all_roots = datum
        .positive_roots()
        .iter()
        .all(|beta| !coroot_pair(&shifted, beta).is_zero());
    let verdict = if witnesses.is_empty() {
        SimplicityVerdict::Simple
    } else if regular_on_simple_roots {
        let (k, l) = witnesses[0];
        SimplicityVerdict::ReducibleWitness { k, l }
    } else {
        SimplicityVerdict::InconclusiveIrregular
    };
    Ok(JantzenReport {
        rank: n,
        r: r.clone(),
        pairings,
        half_sum_pairings,
        witnesses,
        regular_on_simple_roots,
        regular_on_all_roots,
        verdict,
    })
}

/// Witness summary for one rank of the filtration chain.
#[derive(Clone, Debug)]
pub struct RankWitness {
    pub rank: usize,
    /// First (lex) reducibility pairing in ℤ_{>0} at this rank, if any.
    pub first_witness: Option<(usize, usize)>,
}

/// Consistency report across the chain of ranks 2..=max_rank.
#[derive(Clone, Debug)]
pub struct FiltrationReport {
    pub max_rank: usize,
    pub per_rank: Vec<RankWitness>,
    /// Once a rank admits a witness, every larger rank does.
    pub monotone: bool,
    pub first_witness_rank: Option<usize>,
}

/// Scans the embedded chain of root data up to `max_rank` and verifies that
/// reducibility witnesses persist upward: the pairs (k, l) of a lower rank
/// embed into every higher rank, so the witness set can only grow.
pub fn filtration_consistency(max_rank: usize, r: &Rational) -> Result<FiltrationReport> {
    if max_rank < 3 {
        return Err(Error::InvalidRank(max_rank));
    }
    let mut per_rank = Vec::new();
    let mut monotone = true;
    let mut seen_witness = false;
    let mut first_witness_rank = None;
    for n in 2..=max_rank {
        let report = jantzen_verdict(n, r)?;
        let first = report.witnesses.first().copied();
        if first.is_some() {
            if first_witness_rank.is_none() {
                first_witness_rank = Some(n);
            }
            seen_witness = true;
        } else if seen_witness {
            monotone = false;
        }
        per_rank.push(RankWitness {
            rank: n,
            first_witness: first,
        });
    }
    Ok(FiltrationReport {
        max_rank,
        per_rank,
        monotone,
        first_witness_rank,
    })
}

/// Interpretive caveat for reports that print the oscillator realization:
/// single-mode ladders pair with a mode-dependent factor, so unit
/// normalization would need square roots unavailable over ℚ; the criterion
/// therefore runs on abstract root data and the realization is only used to
/// validate the coroots.
pub const OSCILLATOR_NOTE: &str =
    "oscillator ladders e = a(j) pair to j·<a,b>, so normalizing every ladder to 1 \
     requires rescaling modes by square roots outside Q; the criterion runs on \
     abstract rank-N root data instead, with the oscillator used only to validate \
     the coroot construction";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_below_two_is_rejected() {
        for n in 0..2 {
            match RootDatumDN::new(n) {
                Err(Error::InvalidRank(got)) => assert_eq!(got, n),
                other => panic!("expected InvalidRank, got {other:?}"),
            }
        }
    }

    #[test]
    fn positive_system_has_the_expected_shape() {
        for n in 2..=8 {
            let datum = RootDatumDN::new(n).unwrap();
            let pos = datum.positive_roots();
            assert_eq!(pos.len(), n * (n - 1));
            let parabolic = datum.parabolic_positive_roots();
            let radical = datum.radical_positive_roots();
            assert_eq!(parabolic.len() + radical.len(), pos.len());
            // The complement of the parabolic part is exactly the ε_k + ε_l.
            for root in &radical {
                assert!(root.iter().all(|&c| c >= 0));
                assert_eq!(root.iter().sum::<i64>(), 2);
                assert!(pos.contains(root));
                assert!(!parabolic.contains(root));
            }
            assert_eq!(datum.simple_roots().len(), n);
        }
    }

    #[test]
    fn rho_closed_form_matches_the_half_sum() {
        for n in 2..=8 {
            let datum = RootDatumDN::new(n).unwrap();
            assert_eq!(datum.rho_half_sum(), datum.rho_closed_form(), "rank {n}");
        }
    }

    #[test]
    fn rho_pairs_to_one_with_every_simple_coroot() {
        for n in 2..=8 {
            let datum = RootDatumDN::new(n).unwrap();
            let rho = datum.rho_half_sum();
            for alpha in datum.simple_roots() {
                assert_eq!(coroot_pair(&rho, &alpha), qi(1), "rank {n}");
            }
        }
    }

    #[test]
    fn frozen_criterion_pairings() {
        assert_eq!(coroot_pairing(2, &q(1, 2), 1, 2).unwrap(), q(5, 2));
        assert_eq!(coroot_pairing(3, &qi(3), 1, 3).unwrap(), qi(1));
        assert_eq!(coroot_pairing(2, &qi(1), 1, 2).unwrap(), qi(2));
    }

    #[test]
    fn criterion_pairing_matches_its_closed_form_everywhere() {
        let samples = [qi(0), qi(1), qi(-2), q(7, 3), qi(5)];
        for n in 2..=8 {
            for r in &samples {
                for k in 1..=n {
                    for l in (k + 1)..=n {
                        let got = coroot_pairing(n, r, k, l).unwrap();
                        let expect = -r.clone() + qi((k + l) as i64);
                        assert_eq!(got, expect, "n={n} k={k} l={l}");
                        let half = half_sum_pairing(n, r, k, l).unwrap();
                        assert_eq!(half, expect - qi(2), "n={n} k={k} l={l}");
                    }
                }
            }
        }
    }

    #[test]
    fn pairing_rejects_bad_indices() {
        for (k, l) in [(0, 2), (2, 2), (3, 2), (1, 5)] {
            match coroot_pairing(4, &qi(1), k, l) {
                Err(Error::IndexOutOfRange { .. }) => {}
                other => panic!("expected IndexOutOfRange for ({k},{l}), got {other:?}"),
            }
        }
    }

    #[test]
    fn oscillator_realization_validates_the_coroots() {
        for n in 2..=6 {
            assert!(coroot_oscillator_check(n).unwrap(), "rank {n}");
        }
    }

    #[test]
    fn oscillator_normal_ordering_produces_the_central_scalar() {
        // e_k e_{−k} = e_{−k} e_k − 1.
        let mut e = OscElement::default();
        e.add_quad(1, -1, qi(1));
        assert_eq!(e.scalar, qi(-1));
        assert_eq!(e.quads.get(&(-1, 1)), Some(&qi(1)));
    }

    #[test]
    fn generic_parameters_are_simple() {
        for r in [q(1, 2), q(-1, 3), q(7, 2)] {
            for n in 2..=6 {
                let report = jantzen_verdict(n, &r).unwrap();
                assert_eq!(report.verdict, SimplicityVerdict::Simple, "n={n} r={r}");
                assert!(report.witnesses.is_empty());
                assert!(report.regular_on_simple_roots);
            }
        }
    }

    #[test]
    fn integer_parameters_admit_witnesses() {
        let report = jantzen_verdict(3, &qi(3)).unwrap();
        assert_eq!(
            report.verdict,
            SimplicityVerdict::ReducibleWitness { k: 1, l: 3 }
        );
        assert!(report.regular_on_simple_roots);
        // The stricter all-roots regularity fails here: −r+k+l−2 = 0 at (2,3).
        assert!(!report.regular_on_all_roots);

        for r in [-2i64, -1, 2, 3] {
            let found = (2..=6).any(|n| {
                matches!(
                    jantzen_verdict(n, &qi(r)).unwrap().verdict,
                    SimplicityVerdict::ReducibleWitness { .. }
                )
            });
            assert!(found, "r = {r}");
        }
    }

    #[test]
    fn the_boundary_parameter_is_inconclusive() {
        for n in 2..=6 {
            let report = jantzen_verdict(n, &qi(1)).unwrap();
            assert_eq!(report.verdict, SimplicityVerdict::InconclusiveIrregular);
            assert!(!report.regular_on_simple_roots);
            assert!(report.verdict_note().is_some());
            // Witnesses exist numerically — (1,2) pairs to 2 — but the
            // criterion's converse direction needs regularity.
            assert!(report.witnesses.contains(&(1, 2)));
        }
        // Irregularity on simple roots happens only at r = 1.
        for r in [qi(0), qi(2), qi(3), qi(-2), q(1, 2), q(5, 3)] {
            let report = jantzen_verdict(5, &r).unwrap();
            assert!(report.regular_on_simple_roots, "r = {r}");
        }
    }

    #[test]
    fn filtration_witnesses_persist_upward() {
        // r = 5: the first rank where some k < l ≤ N has k + l = 6 is N = 4,
        // with (2, 4) first in lex order.
        let report = filtration_consistency(8, &qi(5)).unwrap();
        assert!(report.monotone);
        assert_eq!(report.first_witness_rank, Some(4));
        let rank4 = report.per_rank.iter().find(|w| w.rank == 4).unwrap();
        assert_eq!(rank4.first_witness, Some((2, 4)));

        // r = −2: (1, 2) already pairs to 5 at rank 2.
        let report = filtration_consistency(8, &qi(-2)).unwrap();
        assert!(report.monotone);
        assert_eq!(report.first_witness_rank, Some(2));

        // r = 1/3: no witness anywhere up to rank 8.
        let report = filtration_consistency(8, &q(1, 3)).unwrap();
        assert!(report.monotone);
        assert_eq!(report.first_witness_rank, None);

        // Monotonicity across a spread of parameters.
        for r in [qi(1), qi(2), q(7, 2), qi(-1), qi(6)] {
            assert!(filtration_consistency(8, &r).unwrap().monotone, "r = {r}");
        }

        match filtration_consistency(2, &qi(1)) {
            Err(Error::InvalidRank(2)) => {}
            other => panic!("expected InvalidRank, got {other:?}"),
        }
    }
}
