//! Dense univariate polynomials over the rationals.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{Int, Rational};

/// Polynomial in one variable with rational coefficients, indexed by degree.
/// Trailing zeros are trimmed; the zero polynomial has an empty list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        RatPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RatPoly::new(vec![c])
    }

    /// The polynomial `a*z + b`.
    pub fn linear(a: Rational, b: Rational) -> Self {
        RatPoly::new(vec![b, a])
    }

    pub fn from_int_coeffs(coeffs: Vec<Int>) -> Self {
        RatPoly::new(coeffs.into_iter().map(Rational::from_integer).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        RatPoly::new(out)
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    pub fn scale(&self, c: &Rational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Split a nonzero polynomial as `content * primitive` where the
    /// primitive part has coprime integer coefficients and positive leading
    /// coefficient; the sign rides on the content.
    pub fn content_primitive(&self) -> Result<(Rational, RatPoly)> {
        if self.is_zero() {
            return Err(Error::ZeroInput("content_primitive"));
        }
        let mut den_lcm = Int::one();
        for c in &self.coeffs {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let ints: Vec<Int> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(den_lcm.clone())).to_integer())
            .collect();
        let mut g = Int::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        let lead_negative = ints.last().unwrap().is_negative();
        if lead_negative {
            g = -g;
        }
        let primitive =
            RatPoly::from_int_coeffs(ints.iter().map(|c| c / &g).collect());
        let content = Rational::new(g, den_lcm);
        Ok((content, primitive))
    }

    /// Falling factorial power: the product of `t` shifted copies
    /// `Y (Y-1) ... (Y-t+1)`; the empty product is 1.
    pub fn falling_factorial(&self, t: u64) -> RatPoly {
        let mut acc = RatPoly::one();
        for idx in 0..t {
            let shifted = self.sub(&RatPoly::constant(Rational::from_integer(Int::from(idx))));
            acc = acc.mul(&shifted);
        }
        acc
    }
}
