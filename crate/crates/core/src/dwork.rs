//! Gamma-graded tame A-determinants and truncated Fredholm minors, with
//! exact termwise valuation certificates.
//!
//! Terms are monomials `c * A^k * gamma^e` where gamma is the splitting
//! uniformizer with ord_p(gamma) = 1/(p-1). A term's valuation is
//! ord_p(c) + e/(p-1); a minor's valuation is certified only when the
//! minimum over retained terms is attained uniquely, since equal-valuation
//! terms could cancel without Teichmueller arithmetic.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{hypothesis, Error, Result};
use crate::frobenius::{all_solutions, pij_data};
use crate::genpoly::{enum_s_set, k_min, tilde_h};
use crate::rational::{is_prime, ord_p, rat_int, Int, Rational, Valuation};

/// Finite sum of terms c * A^k * gamma^e, keyed by (A-degree, gamma
/// exponent); zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedAPoly {
    terms: BTreeMap<(u64, Rational), Rational>,
}

impl GradedAPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn insert_add(&mut self, k: u64, e: Rational, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((k, e)) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u64, Rational), &Rational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &GradedAPoly) -> GradedAPoly {
        let mut out = self.clone();
        for ((k, e), c) in &other.terms {
            out.insert_add(*k, e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> GradedAPoly {
        GradedAPoly {
            terms: self
                .terms
                .iter()
                .map(|(key, c)| (key.clone(), -c))
                .collect(),
        }
    }

    /// Product, optionally discarding result terms whose gamma exponent
    /// exceeds the cutoff. All exponents are nonnegative, so truncating
    /// factors first and products after is consistent.
    pub fn mul_truncate(&self, other: &GradedAPoly, cutoff: Option<&Rational>) -> GradedAPoly {
        let mut out = GradedAPoly::zero();
        for ((k1, e1), c1) in &self.terms {
            for ((k2, e2), c2) in &other.terms {
                let e = e1 + e2;
                if let Some(cut) = cutoff {
                    if &e > cut {
                        continue;
                    }
                }
                out.insert_add(k1 + k2, e, c1 * c2);
            }
        }
        out
    }

    pub fn mul(&self, other: &GradedAPoly) -> GradedAPoly {
        self.mul_truncate(other, None)
    }
}

/// Valuation of a graded polynomial when the termwise minimum is attained
/// uniquely; `Ambiguous` when distinct terms tie at the minimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertifiedValuation {
    Value(Valuation),
    Ambiguous,
}

/// alpha/kappa factorization of the defining polynomial evaluated at
/// floor(p/d): kappa is an explicit factorial product (a p-adic unit for
/// p >= d + b) and alpha the signed sum of inverse factorial products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaKappa {
    pub alpha: Rational,
    pub kappa: Int,
}

/// Coefficients u_t of the Artin-Hasse exponential E_p(X) up to degree T;
/// the series coefficient of X^t in E_p(gamma X) is u_t * gamma^t.
#[derive(Clone, Debug)]
pub struct ArtinHasseCoeffs {
    pub p: u64,
    pub u: Vec<Rational>,
}

fn factorial(n: u64) -> Int {
    let mut acc = Int::one();
    for v in 2..=n {
        acc *= Int::from(v);
    }
    acc
}

fn check_tame_params(s: u64, d: u64, r: u64, p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p <= s * (d - 1) {
        return Err(hypothesis(format!(
            "p={p} must exceed s(d-1)={}",
            s * (d - 1)
        )));
    }
    if p % d != r % d {
        return Err(hypothesis(format!("p={p} is not {r} mod {d}")));
    }
    Ok(())
}

/// Truncated matrix entry for v = p*i - j: one term per solution index
/// ell <= ell_cap, with coefficient 1/(m! n!) and gamma exponent m + n.
pub fn tame_entry(
    s: u64,
    d: u64,
    r: u64,
    p: u64,
    i: u64,
    j: u64,
    ell_cap: u64,
) -> Result<GradedAPoly> {
    check_tame_params(s, d, r, p)?;
    let v = p * i - j;
    let mut out = GradedAPoly::zero();
    for sol in all_solutions(s, d, v)? {
        if sol.ell > ell_cap {
            break;
        }
        let coeff = Rational::new(Int::one(), factorial(sol.m) * factorial(sol.n));
        out.insert_add(sol.m, rat_int((sol.m + sol.n) as i64), coeff);
    }
    Ok(out)
}

/// The n-th tame A-determinant: exact determinant of the truncated entry
/// matrix, expanded over permutations.
pub fn tame_minor(s: u64, d: u64, r: u64, p: u64, n: u64, ell_cap: u64) -> Result<GradedAPoly> {
    check_tame_params(s, d, r, p)?;
    if n == 0 || n > d - 1 {
        return Err(hypothesis(format!("n={n} outside 1..{}", d - 1)));
    }
    let nn = n as usize;
    let mut entries = Vec::with_capacity(nn);
    for i in 1..=n {
        let mut row = Vec::with_capacity(nn);
        for j in 1..=n {
            row.push(tame_entry(s, d, r, p, i, j, ell_cap)?);
        }
        entries.push(row);
    }
    Ok(determinant(&entries, None))
}

fn permutation_sign(perm: &[usize]) -> i32 {
    let mut inv = 0usize;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn determinant(entries: &[Vec<GradedAPoly>], cutoff: Option<&Rational>) -> GradedAPoly {
    let n = entries.len();
    let mut det = GradedAPoly::zero();
    for perm in (0..n).permutations(n) {
        let mut prod = GradedAPoly::zero();
        prod.insert_add(0, Rational::zero(), Rational::one());
        for (i, &j) in perm.iter().enumerate() {
            prod = prod.mul_truncate(&entries[i][j], cutoff);
            if prod.is_zero() {
                break;
            }
        }
        if permutation_sign(&perm) < 0 {
            prod = prod.neg();
        }
        det = det.add(&prod);
    }
    det
}

/// Exact factorization of the defining polynomial at floor(p/d) into the
/// unit factorial product kappa and the p-integral sum alpha; the identity
/// is re-verified before returning.
pub fn alpha_kappa(s: u64, d: u64, r: u64, p: u64, n: u64, k: u64) -> Result<AlphaKappa> {
    check_tame_params(s, d, r, p)?;
    let kmin = k_min(s, d, r, n)?;
    if k < kmin {
        return Err(hypothesis(format!("k={k} below minimal degree {kmin}")));
    }
    let b = k - kmin;
    if p < d + b {
        return Err(hypothesis(format!("p={p} below d+b={}", d + b)));
    }
    let mut alpha = Rational::zero();
    for el in enum_s_set(s, d, r, n, k)? {
        let mut denom = Int::one();
        for (i0, &j0) in el.sigma.iter().enumerate() {
            let i = (i0 + 1) as u64;
            let j = (j0 + 1) as u64;
            let ell = el.ells[i0];
            let base = pij_data(s, d, p, i, j)?;
            let m_l = base.m_ij + d * ell;
            // A shift past the last nonnegative solution makes the matching
            // falling factorial vanish, so the whole summand is zero.
            let Some(n_l) = base.n_ij.checked_sub(s * ell) else {
                denom = Int::zero();
                break;
            };
            denom *= factorial(m_l) * factorial(n_l);
        }
        if denom.is_zero() {
            continue;
        }
        let term = Rational::new(Int::from(el.sign()), denom);
        alpha += term;
    }
    let mut kappa = {
        let base = factorial(d - 1 + b);
        let mut acc = Int::one();
        for _ in 0..n {
            acc *= &base;
        }
        acc
    };
    for i in 1..=n {
        kappa *= factorial(p * i / d);
    }
    // The factorization must reproduce the polynomial evaluation exactly.
    let lhs = tilde_h(s, d, r, n, k)?.eval(&rat_int((p / d) as i64));
    let rhs = Rational::from_integer(kappa.clone()) * &alpha;
    if lhs != rhs {
        return Err(Error::Inconsistency(format!(
            "kappa*alpha identity broken for (s,d,r,p,n,k)=({s},{d},{r},{p},{n},{k})"
        )));
    }
    Ok(AlphaKappa { alpha, kappa })
}

fn unique_min_valuation(poly: &GradedAPoly, p: u64) -> Result<CertifiedValuation> {
    let pm1 = Rational::from_integer(Int::from(p - 1));
    let mut best: Option<Rational> = None;
    let mut tied = false;
    for ((_, e), c) in poly.terms() {
        let base = match ord_p(c, p)? {
            Valuation::Finite(v) => v,
            Valuation::Infinity => unreachable!("zero coefficients are never stored"),
        };
        let val = base + e / &pm1;
        match &best {
            None => best = Some(val),
            Some(b) => {
                if val < *b {
                    best = Some(val);
                    tied = false;
                } else if val == *b {
                    tied = true;
                }
            }
        }
    }
    Ok(match best {
        None => CertifiedValuation::Value(Valuation::Infinity),
        Some(v) if tied => {
            let _ = v;
            CertifiedValuation::Ambiguous
        }
        Some(v) => CertifiedValuation::Value(Valuation::Finite(v)),
    })
}

/// Valuation of the n-th tame minor by the unique-minimum rule. A nonzero
/// residue for the family parameter only certifies that its powers are
/// units, so it never shifts the result; zero is rejected.
pub fn minor_valuation(
    s: u64,
    d: u64,
    r: u64,
    p: u64,
    n: u64,
    ell_cap: u64,
    a_residue: Option<u64>,
) -> Result<CertifiedValuation> {
    if let Some(a) = a_residue {
        if a % p == 0 {
            return Err(hypothesis("family parameter residue must be nonzero"));
        }
    }
    let minor = tame_minor(s, d, r, p, n, ell_cap)?;
    unique_min_valuation(&minor, p)
}

/// Coefficients of exp(sum_{i>=0} X^{p^i}/p^i) up to degree T, by exact
/// power-series exponentiation: t*u_t = sum over powers p^i <= t of
/// u_{t - p^i}.
pub fn artin_hasse(p: u64, t_max: u64) -> ArtinHasseCoeffs {
    let mut powers = vec![];
    let mut q = 1u64;
    while q <= t_max {
        powers.push(q);
        match q.checked_mul(p) {
            Some(next) => q = next,
            None => break,
        }
    }
    let mut u = Vec::with_capacity(t_max as usize + 1);
    u.push(Rational::one());
    for t in 1..=t_max {
        let mut sum = Rational::zero();
        for &q in &powers {
            if q > t {
                break;
            }
            sum += &u[(t - q) as usize];
        }
        u.push(sum / Rational::from_integer(Int::from(t)));
    }
    ArtinHasseCoeffs { p, u }
}

fn fredholm_entry(
    s: u64,
    d: u64,
    p: u64,
    i: u64,
    j: u64,
    ah: &ArtinHasseCoeffs,
    cutoff: &Rational,
) -> Result<GradedAPoly> {
    let v = p * i - j;
    let mut out = GradedAPoly::zero();
    for sol in all_solutions(s, d, v)? {
        let e = rat_int((sol.m + sol.n) as i64);
        if &e > cutoff {
            continue;
        }
        let c = &ah.u[sol.m as usize] * &ah.u[sol.n as usize];
        out.insert_add(sol.m, e, c);
    }
    Ok(out)
}

/// Valuation of the n-th Fredholm minor built from full Artin-Hasse
/// coefficients, truncated to gamma exponents at most the cutoff. The
/// result is certified only when the minimum beats everything the cutoff
/// could have discarded; otherwise an insufficient-precision error.
pub fn fredholm_minor_valuation(
    s: u64,
    d: u64,
    r: u64,
    p: u64,
    n: u64,
    gamma_cutoff: &Rational,
) -> Result<CertifiedValuation> {
    check_tame_params(s, d, r, p)?;
    if n == 0 || n > d - 1 {
        return Err(hypothesis(format!("n={n} outside 1..{}", d - 1)));
    }
    if gamma_cutoff.is_negative() {
        return Err(hypothesis("gamma cutoff must be nonnegative"));
    }
    let t_max = num_traits::ToPrimitive::to_u64(&gamma_cutoff.floor().to_integer())
        .ok_or_else(|| hypothesis("gamma cutoff too large".to_string()))?;
    let ah = artin_hasse(p, t_max);
    let nn = n as usize;
    let mut entries = Vec::with_capacity(nn);
    for i in 1..=n {
        let mut row = Vec::with_capacity(nn);
        for j in 1..=n {
            row.push(fredholm_entry(s, d, p, i, j, &ah, gamma_cutoff)?);
        }
        entries.push(row);
    }
    let minor = determinant(&entries, Some(gamma_cutoff));
    match unique_min_valuation(&minor, p)? {
        CertifiedValuation::Value(Valuation::Finite(v)) => {
            // Discarded terms have gamma exponent above the cutoff and
            // p-integral coefficients, hence valuation > cutoff/(p-1).
            let horizon = gamma_cutoff / Rational::from_integer(Int::from(p - 1));
            if v < horizon {
                Ok(CertifiedValuation::Value(Valuation::Finite(v)))
            } else {
                Err(Error::InsufficientPrecision(format!(
                    "minimum valuation {v} not below truncation horizon {horizon}"
                )))
            }
        }
        CertifiedValuation::Value(Valuation::Infinity) => Err(Error::InsufficientPrecision(
            "all terms truncated away; raise the gamma cutoff".into(),
        )),
        CertifiedValuation::Ambiguous => Ok(CertifiedValuation::Ambiguous),
    }
}

/// Truncation index matching a degree window of width b: floor(b/d).
pub fn default_ell_cap(b: u64, d: u64) -> u64 {
    b / d
}
