//! Laurent polynomials in `T^{1/2}` with integer coefficients.
//!
//! Exponents are stored doubled, so `T^{1/2}` has key `1` and `T` has key `2`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPolynomial {
    /// doubled exponent -> nonzero coefficient
    coefficients: BTreeMap<i64, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `coefficient * T^exponent` with an integer exponent.
    pub fn monomial(exponent: i64, coefficient: i64) -> Self {
        Self::half_monomial(2 * exponent, coefficient)
    }

    /// `coefficient * T^(doubled / 2)`.
    pub fn half_monomial(doubled: i64, coefficient: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(doubled, BigInt::from(coefficient));
        p
    }

    /// Build from `(integer exponent, coefficient)` pairs.
    pub fn from_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(2 * e, BigInt::from(c));
        }
        p
    }

    pub fn add_term(&mut self, doubled: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.coefficients.entry(doubled).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.coefficients.remove(&doubled);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Coefficient of `T^(doubled/2)`.
    pub fn coefficient_doubled(&self, doubled: i64) -> BigInt {
        self.coefficients.get(&doubled).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Coefficient of `T^exponent` for integral exponents.
    pub fn coefficient(&self, exponent: i64) -> BigInt {
        self.coefficient_doubled(2 * exponent)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coefficients.iter().map(|(e, c)| (*e, c))
    }

    /// `T -> T^{-1}`.
    pub fn conjugate(&self) -> Self {
        Self {
            coefficients: self.coefficients.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.conjugate()
    }

    /// Multiply by `T^(doubled/2)`.
    pub fn shift_doubled(&self, doubled: i64) -> Self {
        Self {
            coefficients: self
                .coefficients
                .iter()
                .map(|(e, c)| (e + doubled, c.clone()))
                .collect(),
        }
    }

    /// Value at `T = 1`.
    pub fn eval_one(&self) -> BigInt {
        self.coefficients.values().fold(BigInt::zero(), |a, c| a + c)
    }

    pub fn min_doubled(&self) -> Option<i64> {
        self.coefficients.keys().next().copied()
    }

    pub fn max_doubled(&self) -> Option<i64> {
        self.coefficients.keys().next_back().copied()
    }

    /// `(T^{1/2} - T^{-1/2})`.
    pub fn half_difference() -> Self {
        Self::half_monomial(1, 1) - Self::half_monomial(-1, 1)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.coefficients {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Add for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self + &rhs
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial {
            coefficients: self.coefficients.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        -&self
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self + &(-rhs)
    }
}

impl Sub for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self - &rhs
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (e1, c1) in &self.coefficients {
            for (e2, c2) in &rhs.coefficients {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: LaurentPolynomial) -> LaurentPolynomial {
        &self * &rhs
    }
}

#[derive(Serialize, Deserialize)]
struct Term {
    /// twice the exponent
    doubled_exponent: i64,
    #[serde(with = "super::bigint_json")]
    coefficient: BigInt,
}

impl Serialize for LaurentPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<Term> = self
            .coefficients
            .iter()
            .map(|(e, c)| Term {
                doubled_exponent: *e,
                coefficient: c.clone(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let mut p = LaurentPolynomial::zero();
        for t in Vec::<Term>::deserialize(d)? {
            p.add_term(t.doubled_exponent, t.coefficient);
        }
        Ok(p)
    }
}

fn fmt_power(f: &mut fmt::Formatter<'_>, doubled: i64) -> fmt::Result {
    if doubled % 2 == 0 {
        match doubled / 2 {
            1 => write!(f, "T"),
            e => write!(f, "T^{e}"),
        }
    } else {
        write!(f, "T^({doubled}/2)")
    }
}

impl fmt::Display for LaurentPolynomial {
    /// Highest power first, e.g. `T^2 - 2T + 3 - 2T^-1 + T^-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.coefficients.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if *e == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                }
                fmt_power(f, *e)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_symmetry() {
        let p = LaurentPolynomial::from_terms([(2, 1), (1, -2), (0, 3), (-1, -2), (-2, 1)]);
        assert_eq!(p.to_string(), "T^2 - 2T + 3 - 2T^-1 + T^-2");
        assert!(p.is_symmetric());
        assert_eq!(p.eval_one(), BigInt::from(1));
    }

    #[test]
    fn no_zero_coefficients_stored() {
        let p = LaurentPolynomial::monomial(1, 1) - LaurentPolynomial::monomial(1, 1);
        assert!(p.is_zero());
        assert_eq!(p.terms().count(), 0);
    }

    #[test]
    fn half_integer_square() {
        // (T^{1/2} - T^{-1/2})^2 = T - 2 + T^{-1}
        let d = LaurentPolynomial::half_difference().pow(2);
        assert_eq!(d, LaurentPolynomial::from_terms([(1, 1), (0, -2), (-1, 1)]));
        assert_eq!(LaurentPolynomial::half_difference().to_string(), "T^(1/2) - T^(-1/2)");
    }
}
