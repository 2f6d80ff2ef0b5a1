//! Exact arithmetic in Z[zeta_p] on the power basis 1, zeta, ..,
//! zeta^{p-2}, with the pi-adic valuation normalized so that
//! ord(1 - zeta) = 1/(p-1).

use num_traits::{One, Signed, Zero};

use crate::error::{hypothesis, Result};
use crate::rational::{ord_p, Int, Rational, Valuation};

/// Element of Z[zeta_p]: coefficients a_0..a_{p-2} of sum a_i zeta^i,
/// canonical modulo 1 + zeta + .. + zeta^{p-1} = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloInt {
    pub p: u64,
    coeffs: Vec<Int>,
}

impl CycloInt {
    pub fn zero(p: u64) -> Self {
        CycloInt {
            p,
            coeffs: vec![Int::zero(); (p - 1) as usize],
        }
    }

    pub fn one(p: u64) -> Self {
        Self::from_integer(p, Int::one())
    }

    pub fn from_integer(p: u64, v: Int) -> Self {
        let mut out = Self::zero(p);
        out.coeffs[0] = v;
        out
    }

    /// Canonical reduction of sum_{t=0}^{p-1} counts[t] zeta^t: subtract
    /// the zeta^{p-1} multiple of the vanishing sum.
    pub fn from_counts(p: u64, counts: &[Int]) -> Result<Self> {
        if counts.len() != p as usize {
            return Err(hypothesis(format!(
                "expected {p} exponent buckets, got {}",
                counts.len()
            )));
        }
        let last = &counts[(p - 1) as usize];
        Ok(CycloInt {
            p,
            coeffs: (0..(p - 1) as usize)
                .map(|i| &counts[i] - last)
                .collect(),
        })
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Some(n) iff the element is the rational integer n.
    pub fn as_integer(&self) -> Option<Int> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn add(&self, other: &CycloInt) -> CycloInt {
        assert_eq!(self.p, other.p);
        CycloInt {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CycloInt) -> CycloInt {
        assert_eq!(self.p, other.p);
        CycloInt {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &CycloInt) -> CycloInt {
        assert_eq!(self.p, other.p);
        let p = self.p as usize;
        let mut acc = vec![Int::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                acc[(i + j) % p] += a * b;
            }
        }
        let last = acc[p - 1].clone();
        CycloInt {
            p: self.p,
            coeffs: (0..p - 1).map(|i| &acc[i] - &last).collect(),
        }
    }

    pub fn scale(&self, v: &Int) -> CycloInt {
        CycloInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| c * v).collect(),
        }
    }

    /// Galois conjugate zeta -> zeta^u for u coprime to p.
    pub fn conjugate(&self, u: u64) -> Result<CycloInt> {
        if u % self.p == 0 {
            return Err(hypothesis("conjugation exponent divisible by p"));
        }
        let p = self.p as usize;
        let mut acc = vec![Int::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            acc[(i as u64 * u % self.p) as usize] += a;
        }
        let last = acc[p - 1].clone();
        Ok(CycloInt {
            p: self.p,
            coeffs: (0..p - 1).map(|i| &acc[i] - &last).collect(),
        })
    }

    /// Exact division by a rational integer; error if not divisible.
    pub fn div_exact(&self, v: &Int) -> Result<CycloInt> {
        if v.is_zero() {
            return Err(hypothesis("division by zero"));
        }
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = num_integer::Integer::div_rem(c, v);
            if !r.is_zero() {
                return Err(crate::error::Error::Inconsistency(format!(
                    "coefficient {c} not divisible by {v}"
                )));
            }
            out.push(q);
        }
        Ok(CycloInt {
            p: self.p,
            coeffs: out,
        })
    }

    /// pi-adic valuation with pi = 1 - zeta: rewrite on the pi-power basis
    /// via zeta = 1 - pi, take min_j (ord_p(b_j) + j/(p-1)). Distinct j give
    /// valuations with distinct fractional parts, so the minimum is attained
    /// uniquely and no cross-term cancellation can lower it.
    pub fn pi_ord(&self) -> Result<Valuation> {
        if self.is_zero() {
            return Ok(Valuation::Infinity);
        }
        let p = self.p;
        let len = (p - 1) as usize;
        // Up to sign, b_j = sum_i a_i C(i, j); signs do not affect ord_p.
        let mut b = vec![Int::zero(); len];
        let mut row = vec![Int::zero(); len];
        row[0] = Int::one();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                // row := binomial row i from row i-1, in place (descending j).
                for j in (1..=i.min(len - 1)).rev() {
                    let prev = row[j - 1].clone();
                    row[j] += prev;
                }
            }
            if !a.is_zero() {
                for j in 0..=i.min(len - 1) {
                    b[j] += a * &row[j];
                }
            }
        }
        let mut best: Option<Rational> = None;
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            let base = match ord_p(&Rational::from_integer(bj.abs()), p)? {
                Valuation::Finite(v) => v,
                Valuation::Infinity => unreachable!(),
            };
            let val = base + Rational::new(Int::from(j as u64), Int::from(p - 1));
            if best.as_ref().map_or(true, |cur| val < *cur) {
                best = Some(val);
            }
        }
        match best {
            Some(v) => Ok(Valuation::Finite(v)),
            // All pi-basis coefficients vanished: the element is zero in
            // Z[zeta], which the canonical form should have caught.
            None => Ok(Valuation::Infinity),
        }
    }
}
