//! Exact arithmetic over rational linear combinations of square roots.
//!
//! Every number handled by this crate lives in the ring
//! `Q(sqrt(1), sqrt(2), sqrt(3), ...)` restricted to finitely many squarefree
//! radicands. A [`RadicalScalar`] stores a map from squarefree radicand to a
//! nonzero rational coefficient, so equality is literal map equality and zero
//! tests need no tolerance.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator (maintained by `num-rational`).
pub type Rational = num_rational::BigRational;

/// Shorthand for a rational from machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Splits `v` into `(s, m)` with `v = s^2 * m` and `m` squarefree.
///
/// Trial division; the radicands arising here are small (products of
/// multinomials and local dimensions), so this is never a bottleneck.
fn extract_square_part(v: &BigUint) -> (BigUint, BigUint) {
    if let Ok(small) = u64::try_from(v) {
        let (s, m) = extract_square_part_u64(small);
        return (BigUint::from(s), BigUint::from(m));
    }
    let mut m = v.clone();
    let mut s = BigUint::one();
    let mut d = BigUint::from(2u32);
    while &d * &d <= m {
        let dd = &d * &d;
        while (&m % &dd).is_zero() {
            m /= &dd;
            s *= &d;
        }
        d += 1u32;
    }
    (s, m)
}

fn extract_square_part_u64(mut m: u64) -> (u64, u64) {
    let mut s = 1u64;
    let mut d = 2u64;
    while let Some(dd) = d.checked_mul(d) {
        if dd > m {
            break;
        }
        while m.is_multiple_of(dd) {
            m /= dd;
            s *= d;
        }
        d += 1;
    }
    (s, m)
}

/// An exact element of the radical-rational ring.
///
/// Invariants: every key is a squarefree integer >= 1, no stored coefficient
/// is zero, and the zero element is the empty map. All constructors and
/// arithmetic re-normalize, so derived equality is exact ring equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RadicalScalar {
    terms: BTreeMap<u64, Rational>,
}

impl RadicalScalar {
    /// The zero element (empty map).
    pub fn zero() -> Self {
        Self::default()
    }

    /// The multiplicative unit, `1 * sqrt(1)`.
    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    /// Embeds a rational as the coefficient of `sqrt(1)`.
    pub fn from_rational(r: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(1, r);
        }
        Self { terms }
    }

    /// Embeds a machine integer.
    pub fn from_integer(v: i64) -> Self {
        Self::from_rational(rat(v, 1))
    }

    /// The exact square root of a nonnegative rational, as a single term
    /// `c * sqrt(m)` with `m` squarefree.
    ///
    /// Uses `sqrt(p/q) = sqrt(p*q)/q` and splits `p*q` into square and
    /// squarefree parts.
    pub fn sqrt_of_rational(r: &Rational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::NegativeSqrt(r.to_string()));
        }
        if r.is_zero() {
            return Ok(Self::zero());
        }
        let p = r.numer().magnitude();
        let q = r.denom().magnitude();
        let (s, m) = extract_square_part(&(p * q));
        let radicand = u64::try_from(&m).map_err(|_| Error::RadicandOverflow(m.to_string()))?;
        let coeff = Rational::new(BigInt::from(s), r.denom().clone());
        let mut terms = BTreeMap::new();
        terms.insert(radicand, coeff);
        Ok(Self { terms })
    }

    /// Exact zero test; no tolerance involved.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of `sqrt(m)`, zero if absent.
    pub fn coefficient(&self, radicand: u64) -> Rational {
        self.terms
            .get(&radicand)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Iterates `(radicand, coefficient)` pairs in increasing radicand order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    /// Returns the value as a rational if it is one (zero or a pure
    /// `sqrt(1)` term), `None` if any irrational term is present.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    /// Multiplies by a rational.
    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, c)| (*m, c * factor)).collect(),
        }
    }

    /// The square `self * self`; for the real values stored here this is the
    /// squared modulus of an amplitude.
    pub fn square(&self) -> Self {
        self * self
    }

    fn insert_term(terms: &mut BTreeMap<u64, Rational>, radicand: u64, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match terms.entry(radicand) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                let sum = slot.get() + coeff;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }
}

impl fmt::Display for RadicalScalar {
    /// Canonical rendering: terms `c*sqrt(m)` sorted by radicand, joined
    /// with signs, e.g. `1/3*sqrt(1) - 1/2*sqrt(6)`. Zero renders as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            if idx == 0 {
                write!(f, "{c}*sqrt({m})")?;
            } else if c.is_negative() {
                write!(f, " - {}*sqrt({m})", -c)?;
            } else {
                write!(f, " + {c}*sqrt({m})")?;
            }
        }
        Ok(())
    }
}

impl Add for &RadicalScalar {
    type Output = RadicalScalar;
    fn add(self, rhs: &RadicalScalar) -> RadicalScalar {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            RadicalScalar::insert_term(&mut terms, *m, c.clone());
        }
        RadicalScalar { terms }
    }
}

impl Sub for &RadicalScalar {
    type Output = RadicalScalar;
    fn sub(self, rhs: &RadicalScalar) -> RadicalScalar {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            RadicalScalar::insert_term(&mut terms, *m, -c.clone());
        }
        RadicalScalar { terms }
    }
}

impl Mul for &RadicalScalar {
    type Output = RadicalScalar;
    /// Product terms reduce via `sqrt(a)*sqrt(b) = g*sqrt((a/g)*(b/g))`
    /// with `g = gcd(a, b)`; the reduced radicand is squarefree because
    /// `a/g` and `b/g` are coprime and squarefree.
    fn mul(self, rhs: &RadicalScalar) -> RadicalScalar {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let g = num_integer::gcd(*ma, *mb);
                let radicand = (ma / g)
                    .checked_mul(mb / g)
                    .expect("radicand product overflows u64");
                let coeff = ca * cb * Rational::from(BigInt::from(g));
                RadicalScalar::insert_term(&mut terms, radicand, coeff);
            }
        }
        RadicalScalar { terms }
    }
}

impl Neg for &RadicalScalar {
    type Output = RadicalScalar;
    fn neg(self) -> RadicalScalar {
        RadicalScalar {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for RadicalScalar {
            type Output = RadicalScalar;
            fn $method(self, rhs: RadicalScalar) -> RadicalScalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&RadicalScalar> for RadicalScalar {
            type Output = RadicalScalar;
            fn $method(self, rhs: &RadicalScalar) -> RadicalScalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for RadicalScalar {
    type Output = RadicalScalar;
    fn neg(self) -> RadicalScalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt_int(v: i64) -> RadicalScalar {
        RadicalScalar::sqrt_of_rational(&rat(v, 1)).unwrap()
    }

    #[test]
    fn sqrt_of_perfect_square() {
        // 4/9 -> 2/3 * sqrt(1)
        let s = RadicalScalar::sqrt_of_rational(&rat(4, 9)).unwrap();
        assert_eq!(s, RadicalScalar::from_rational(rat(2, 3)));
        assert_eq!(s.to_string(), "2/3*sqrt(1)");
    }

    #[test]
    fn sqrt_reduces_to_squarefree_radicand() {
        // 2/3 = 6/9 -> 1/3 * sqrt(6)
        let s = RadicalScalar::sqrt_of_rational(&rat(2, 3)).unwrap();
        assert_eq!(s.coefficient(6), rat(1, 3));
        assert_eq!(s.terms().count(), 1);
    }

    #[test]
    fn sqrt_of_zero_is_zero() {
        let s = RadicalScalar::sqrt_of_rational(&rat(0, 1)).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn sqrt_of_negative_is_rejected() {
        assert!(matches!(
            RadicalScalar::sqrt_of_rational(&rat(-1, 2)),
            Err(Error::NegativeSqrt(_))
        ));
    }

    #[test]
    fn radical_products_reduce() {
        // sqrt(2) * sqrt(6) = 2*sqrt(3)
        let product = &sqrt_int(2) * &sqrt_int(6);
        assert_eq!(product, sqrt_int(3).scale(&rat(2, 1)));
    }

    #[test]
    fn irreducible_sum_keeps_two_terms() {
        let sum = &sqrt_int(2) + &sqrt_int(3);
        assert_eq!(sum.coefficient(2), rat(1, 1));
        assert_eq!(sum.coefficient(3), rat(1, 1));
        assert_eq!(sum.terms().count(), 2);
    }

    #[test]
    fn inverse_sqrt_squares_to_reciprocal() {
        // (1/sqrt(3))^2 = 1/3
        let inv = RadicalScalar::sqrt_of_rational(&rat(1, 3)).unwrap();
        assert_eq!(inv.square(), RadicalScalar::from_rational(rat(1, 3)));
    }

    #[test]
    fn normalization_cancels_equal_radicals() {
        // sqrt(8) - 2*sqrt(2) = 0
        let diff = &sqrt_int(8) - &sqrt_int(2).scale(&rat(2, 1));
        assert!(diff.is_zero());
    }

    #[test]
    fn distinct_radicands_do_not_cancel() {
        let diff = &sqrt_int(2) - &sqrt_int(3);
        assert!(!diff.is_zero());
    }

    #[test]
    fn as_rational_only_for_radicand_one() {
        assert_eq!(RadicalScalar::zero().as_rational(), Some(rat(0, 1)));
        assert_eq!(
            RadicalScalar::from_rational(rat(5, 7)).as_rational(),
            Some(rat(5, 7))
        );
        assert_eq!(sqrt_int(2).as_rational(), None);
    }

    #[test]
    fn display_is_sorted_and_signed() {
        let v = &RadicalScalar::from_rational(rat(2, 3)) - &sqrt_int(6).scale(&rat(1, 2));
        assert_eq!(v.to_string(), "2/3*sqrt(1) - 1/2*sqrt(6)");
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_rational() -> impl Strategy<Value = Rational> {
            (-200i64..=200, 1i64..=60).prop_map(|(n, d)| rat(n, d))
        }

        fn arb_scalar() -> impl Strategy<Value = RadicalScalar> {
            proptest::collection::vec((1u64..=30, arb_rational()), 0..4).prop_map(|pairs| {
                let mut acc = RadicalScalar::zero();
                for (m, c) in pairs {
                    let term = RadicalScalar::sqrt_of_rational(&rat(m as i64, 1))
                        .unwrap()
                        .scale(&c);
                    acc = &acc + &term;
                }
                acc
            })
        }

        proptest! {
            #[test]
            fn sqrt_squares_back(r in (0i64..=400, 1i64..=100).prop_map(|(n, d)| rat(n, d))) {
                let s = RadicalScalar::sqrt_of_rational(&r).unwrap();
                prop_assert_eq!(s.square(), RadicalScalar::from_rational(r));
            }

            #[test]
            fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
                prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert_eq!(&a + &b, &b + &a);
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!(&a - &a, RadicalScalar::zero());
            }

            #[test]
            fn nonzero_iff_some_coefficient(a in arb_scalar()) {
                let any_coeff = a.terms().count() > 0;
                prop_assert_eq!(!a.is_zero(), any_coeff);
            }
        }
    }
}
