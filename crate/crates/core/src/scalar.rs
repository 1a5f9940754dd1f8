//! Exact scalars: arbitrary-precision rationals and the polynomial ring ℚ[r].
//!
//! `r` is the central parameter of the induced module; module coefficients,
//! Gram entries and determinants all live in ℚ[r]. Polynomials are dense,
//! lowest degree first, with no trailing zero coefficients (the zero
//! polynomial is the empty coefficient list). Integer roots are extracted by
//! rational-root screening of the primitive integer form, with the divisor
//! enumeration backed by exact integer factorization so large trailing
//! coefficients stay tractable.

use crate::{Error, Result};
use num::bigint::{BigInt, BigUint};
use num::traits::{One, Signed, Zero};
use num::Integer;
use std::fmt;

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator (the `num` representation maintains both invariants).
pub type Rational = num::BigRational;

/// Shorthand for the rational `n/d`. Panics on `d == 0`.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for the integer rational `n`.
pub fn qi(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// Parses `"p"`, `"p/q"` or a plain integer string into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator {num:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator {den:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

/// Canonical `num/den` string (denominator always present and positive).
pub fn rational_str(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// `k!` as a big integer.
pub fn factorial(k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for t in 2..=k {
        acc *= BigInt::from(t);
    }
    acc
}

/// Generalized binomial coefficient `C(m, k)` for integer `m` (possibly
/// negative) and `k ≥ 0`: `C(m, 0) = 1` and
/// `C(m, k) = m (m−1) ⋯ (m−k+1) / k!`, which satisfies the Pascal recursion
/// `C(m, k) = C(m−1, k−1) + C(m−1, k)` for every integer `m`.
pub fn binomial(m: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    for t in 0..k {
        num *= BigInt::from(m - t);
    }
    let (quot, rem) = num.div_rem(&factorial(k as u64));
    debug_assert!(rem.is_zero(), "k consecutive integers divide k!");
    quot
}

/// Dense polynomial over ℚ in the central parameter `r`.
///
/// Coefficients are stored lowest degree first; the vector carries no trailing
/// zeros, and the zero polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RPoly {
    coeffs: Vec<Rational>,
}

impl RPoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        RPoly { coeffs: Vec::new() }
    }

    /// The constant polynomial `1`.
    pub fn one() -> Self {
        RPoly::constant(Rational::one())
    }

    /// A constant polynomial.
    pub fn constant(c: Rational) -> Self {
        let mut p = RPoly { coeffs: vec![c] };
        p.normalize();
        p
    }

    /// The constant polynomial with integer value `n`.
    pub fn int(n: i64) -> Self {
        RPoly::constant(qi(n))
    }

    /// The variable `r`.
    pub fn var() -> Self {
        RPoly {
            coeffs: vec![Rational::zero(), Rational::one()],
        }
    }

    /// Builds from coefficients, lowest degree first.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut p = RPoly { coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    /// Coefficients, lowest degree first (empty for zero).
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// The coefficient of `r^k` (zero when out of range).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn neg(&self) -> Self {
        RPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + other.coeff(k));
        }
        RPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return RPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        RPoly::from_coeffs(coeffs)
    }

    /// Multiplication by a rational scalar.
    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return RPoly::zero();
        }
        RPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Exact evaluation at a rational point (Horner).
    pub fn eval(&self, at: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }

    /// Exact division: returns `self / d` when the remainder is zero,
    /// `Error::InexactDivision` otherwise and `Error::ZeroPolynomial` for a
    /// zero divisor.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.is_zero() {
            return Ok(RPoly::zero());
        }
        let mut rem = self.coeffs.clone();
        let dn = d.coeffs.len();
        if rem.len() < dn {
            return Err(Error::InexactDivision);
        }
        let lead = &d.coeffs[dn - 1];
        let mut quot = vec![Rational::zero(); rem.len() - dn + 1];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dn - 1] / lead;
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    let t = &c * dj;
                    rem[k + j] -= t;
                }
            }
            quot[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::InexactDivision);
        }
        Ok(RPoly::from_coeffs(quot))
    }

    /// The primitive integer form: the unique integer-coefficient polynomial
    /// with content 1 and positive leading coefficient that is a rational
    /// multiple of `self`. Errors on the zero polynomial.
    pub fn primitive_integer_form(&self) -> Result<Vec<BigInt>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for c in &ints {
            content = content.gcd(c);
        }
        if ints.last().map(|c| c.is_negative()).unwrap_or(false) {
            content = -content;
        }
        for c in &mut ints {
            *c = &*c / &content;
        }
        Ok(ints)
    }

    /// All integer roots, sorted ascending. Every returned value evaluates to
    /// exactly zero. Found by rational-root screening of the primitive
    /// integer form: a root of multiplicity ≥ 1 at zero is split off first,
    /// then small candidates are deflated out (keeping the trailing
    /// coefficient as small as possible), and finally every divisor (both
    /// signs) of the remaining trailing coefficient is tested. The deflation
    /// step is what keeps this fast on determinant polynomials whose trailing
    /// coefficients are huge products of small linear factors.
    pub fn integer_roots(&self) -> Result<Vec<BigInt>> {
        let ints = self.primitive_integer_form()?;
        let mut roots = Vec::new();
        let shift = ints.iter().take_while(|c| c.is_zero()).count();
        if shift > 0 {
            roots.push(BigInt::zero());
        }
        let mut reduced: Vec<BigInt> = ints[shift..].to_vec();
        const SMALL: i64 = 64;
        for mag in 1..=SMALL {
            for cand in [BigInt::from(mag), BigInt::from(-mag)] {
                while reduced.len() > 1 && eval_int(&reduced, &cand).is_zero() {
                    if roots.last() != Some(&cand) {
                        roots.push(cand.clone());
                    }
                    reduced = deflate_linear(&reduced, &cand);
                }
            }
        }
        if reduced.len() > 1 {
            let trailing = reduced[0].magnitude().clone();
            for d in divisors(&trailing) {
                let d = BigInt::from(d.clone());
                for cand in [d.clone(), -d] {
                    if eval_int(&reduced, &cand).is_zero() {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots.dedup();
        Ok(roots)
    }

    /// Coefficient strings `num/den`, lowest degree first (empty for zero);
    /// this is the serialization format used by the command-line reports.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rational_str).collect()
    }
}

impl fmt::Display for RPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = mag.is_one() && k > 0;
            if !unit_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "{}r", if unit_coeff { "" } else { "*" })?,
                _ => write!(f, "{}r^{k}", if unit_coeff { "" } else { "*" })?,
            }
        }
        Ok(())
    }
}

fn eval_int(coeffs: &[BigInt], at: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = acc * at + c;
    }
    acc
}

/// Synthetic division of an integer polynomial by `(x - root)`; the caller
/// guarantees `root` really is a root, so the division is exact.
fn deflate_linear(coeffs: &[BigInt], root: &BigInt) -> Vec<BigInt> {
    let mut quotient = vec![BigInt::zero(); coeffs.len() - 1];
    let mut carry = BigInt::zero();
    for k in (0..coeffs.len() - 1).rev() {
        carry = &coeffs[k + 1] + &carry * root;
        quotient[k] = carry.clone();
    }
    quotient
}

/// The unique polynomial of degree < `points.len()` through the given
/// pairwise-distinct sample points, built by Newton's divided differences.
pub fn lagrange_interpolate(points: &[(Rational, Rational)]) -> RPoly {
    if points.is_empty() {
        return RPoly::zero();
    }
    let n = points.len();
    let mut dd: Vec<Rational> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = &points[i].0 - &points[i - level].0;
            dd[i] = num / den;
        }
    }
    let mut poly = RPoly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        let shift = RPoly::from_coeffs(vec![-&points[i].0, Rational::one()]);
        poly = poly.mul(&shift).add(&RPoly::constant(dd[i].clone()));
    }
    poly
}

/// All positive divisors of `n` (unsorted), from its prime factorization.
/// `n = 0` yields an empty list and `n = 1` yields `[1]`.
fn divisors(n: &BigUint) -> Vec<BigUint> {
    if n.is_zero() {
        return Vec::new();
    }
    let mut divs = vec![BigUint::one()];
    for (p, e) in factorize(n.clone()) {
        let base = divs.clone();
        let mut pk = BigUint::one();
        for _ in 0..e {
            pk = &pk * &p;
            divs.extend(base.iter().map(|d| d * &pk));
        }
    }
    divs
}

/// Exact prime factorization by trial division, Miller–Rabin and Brent's
/// variant of Pollard rho. Deterministic: fixed witness bases and a fixed
/// polynomial-offset schedule.
fn factorize(mut n: BigUint) -> Vec<(BigUint, u32)> {
    let mut factors: std::collections::BTreeMap<BigUint, u32> = Default::default();
    if n <= BigUint::one() {
        return Vec::new();
    }
    for p in 2u64..1000 {
        let bp = BigUint::from(p);
        if &bp * &bp > n {
            break;
        }
        while (&n % &bp).is_zero() {
            *factors.entry(bp.clone()).or_insert(0) += 1;
            n /= &bp;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m <= BigUint::one() {
            continue;
        }
        if is_prime(&m) {
            *factors.entry(m).or_insert(0) += 1;
            continue;
        }
        let d = pollard_rho(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
    factors.into_iter().collect()
}

/// Miller–Rabin with the deterministic base set for moduli below 3.3·10^24;
/// the same fixed bases are reused above that bound.
fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let p = BigUint::from(small);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - BigUint::one();
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent-style Pollard rho; callers guarantee `n` is composite and odd-ish
/// (small factors already stripped). Returns a nontrivial divisor.
fn pollard_rho(n: &BigUint) -> BigUint {
    if (n % 2u32).is_zero() {
        return BigUint::from(2u32);
    }
    let ni = BigInt::from(n.clone());
    for c in 1u64.. {
        let cc = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &cc) % &ni;
        let mut x = BigInt::from(2);
        let mut y = x.clone();
        let mut d = BigInt::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = (&x - &y).abs();
            if diff.is_zero() {
                break; // cycle without factor; retry with the next offset
            }
            d = diff.gcd(&ni);
        }
        if !d.is_one() && d != ni {
            return d.to_biguint().expect("divisor is positive");
        }
    }
    unreachable!("factor search is exhaustive for composite inputs")
}

/// Convenience: evaluate, on demand, whether an `RPoly` vanishes identically
/// at a list of sample points (used by callers that compare polynomials via
/// specializations before committing to symbolic equality).
pub fn eval_at_i64(p: &RPoly, at: i64) -> Rational {
    p.eval(&qi(at))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[(i64, i64)]) -> RPoly {
        RPoly::from_coeffs(cs.iter().map(|&(n, d)| q(n, d)).collect())
    }

    #[test]
    fn rational_canonicalization() {
        let x = q(6, -4);
        assert_eq!(rational_str(&x), "-3/2");
        assert_eq!(parse_rational("-3/2").unwrap(), x);
        assert_eq!(parse_rational("7").unwrap(), qi(7));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn poly_arithmetic_and_horner() {
        // (1 + r)(2 − r) = 2 + r − r²
        let p = poly(&[(1, 1), (1, 1)]).mul(&poly(&[(2, 1), (-1, 1)]));
        assert_eq!(p, poly(&[(2, 1), (1, 1), (-1, 1)]));
        assert_eq!(p.eval(&qi(3)), qi(2 + 3 - 9));
        assert_eq!(p.eval(&q(1, 2)), q(2 * 4 + 2 - 1, 4));
        assert_eq!(p.sub(&p), RPoly::zero());
        assert!(RPoly::zero().degree().is_none());
        assert_eq!(p.degree(), Some(2));
    }

    #[test]
    fn display_reads_highest_degree_first() {
        let p = poly(&[(3, 1), (-1, 2), (2, 1)]);
        assert_eq!(p.to_string(), "2*r^2 - 1/2*r + 3");
        assert_eq!(RPoly::var().to_string(), "r");
        assert_eq!(RPoly::zero().to_string(), "0");
    }

    #[test]
    fn exact_division() {
        // (r² − 1) / (r − 1) = r + 1
        let p = poly(&[(-1, 1), (0, 1), (1, 1)]);
        let d = poly(&[(-1, 1), (1, 1)]);
        assert_eq!(p.div_exact(&d).unwrap(), poly(&[(1, 1), (1, 1)]));
        let bad = poly(&[(1, 1), (0, 1), (1, 1)]); // r² + 1
        assert_eq!(bad.div_exact(&d), Err(Error::InexactDivision));
        assert_eq!(p.div_exact(&RPoly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn integer_roots_screening() {
        // (1/6)(r² − 1)(r − 3): scaling by a rational must not matter.
        let p = poly(&[(-1, 1), (0, 1), (1, 1)])
            .mul(&poly(&[(-3, 1), (1, 1)]))
            .scale(&q(1, 6));
        let roots = p.integer_roots().unwrap();
        assert_eq!(
            roots,
            vec![BigInt::from(-1), BigInt::from(1), BigInt::from(3)]
        );
        assert_eq!(poly(&[(1, 1), (0, 1), (1, 1)]).integer_roots().unwrap(), vec![]);
        // r³ has only the root 0 (multiplicity collapses to one entry).
        let cubed = RPoly::var().mul(&RPoly::var()).mul(&RPoly::var());
        assert_eq!(cubed.integer_roots().unwrap(), vec![BigInt::zero()]);
        // 2r − 1 has a rational root but no integer root.
        assert_eq!(poly(&[(-1, 1), (2, 1)]).integer_roots().unwrap(), vec![]);
        assert_eq!(RPoly::zero().integer_roots(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn integer_roots_with_large_prime_constant() {
        // (r − 1000003)(r + 12): the trailing coefficient 12000036 carries the
        // prime 1000003, beyond the trial-division bound.
        let p = poly(&[(-1000003, 1), (1, 1)]).mul(&poly(&[(12, 1), (1, 1)]));
        let roots = p.integer_roots().unwrap();
        assert_eq!(roots, vec![BigInt::from(-12), BigInt::from(1000003)]);
    }

    #[test]
    fn binomial_convention() {
        assert_eq!(binomial(-3, 0), BigInt::one());
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(-1, 5), BigInt::from(-1));
        assert_eq!(binomial(-2, 3), BigInt::from(-4));
        assert_eq!(binomial(3, 7), BigInt::zero());
        // Pascal recursion across negative upper arguments.
        for m in -6i64..=6 {
            for k in 1i64..=8 {
                assert_eq!(binomial(m, k), binomial(m - 1, k - 1) + binomial(m - 1, k));
            }
        }
    }

    #[test]
    fn factorization_helpers() {
        let n = BigUint::from(2u32.pow(5) * 3 * 49);
        let mut divs = divisors(&n);
        divs.sort();
        assert_eq!(divs.len(), 6 * 2 * 3);
        assert!(is_prime(&BigUint::from(1000003u64)));
        assert!(!is_prime(&BigUint::from(1000001u64)));
    }

    #[test]
    fn small_roots_deflate_before_divisor_enumeration() {
        // r^3·(r − 1)^40·(2r + 6): the trailing coefficient of the deflated
        // part stays tiny even though the full polynomial's coefficients are
        // astronomically large binomial sums.
        let mut p = poly(&[(6, 1), (2, 1)]);
        let linear = poly(&[(-1, 1), (1, 1)]);
        for _ in 0..40 {
            p = p.mul(&linear);
        }
        p = p.mul(&RPoly::var()).mul(&RPoly::var()).mul(&RPoly::var());
        let roots = p.integer_roots().unwrap();
        assert_eq!(
            roots,
            vec![BigInt::from(-3), BigInt::zero(), BigInt::one()]
        );
    }

    #[test]
    fn interpolation_recovers_polynomials() {
        let p = poly(&[(3, 4), (-2, 1), (0, 1), (5, 7)]);
        let points: Vec<(Rational, Rational)> = (0..4)
            .map(|k| (qi(k), p.eval(&qi(k))))
            .collect();
        assert_eq!(lagrange_interpolate(&points), p);
        // Extra sample points beyond the degree change nothing.
        let more: Vec<(Rational, Rational)> = (-3..5)
            .map(|k| (qi(k), p.eval(&qi(k))))
            .collect();
        assert_eq!(lagrange_interpolate(&more), p);
        assert!(lagrange_interpolate(&[]).is_zero());
    }
}
