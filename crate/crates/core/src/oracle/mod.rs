//! Exact ground truth by point counting: exponential sums over F_{p^k},
//! L-function coefficients in Z[zeta_p], pi-adic Newton polygons, the
//! exhaustive generic polygon over the family parameter, and the
//! Artin-Schreier zeta-numerator cross-check.

pub mod cyclo;
pub mod field;

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{hypothesis, Error, Result};
use crate::polygon::NewtonPolygon;
use crate::rational::{is_prime, ord_p, rat_int, Int, Rational, Valuation};
pub use cyclo::CycloInt;
pub use field::{build_field, FiniteField};

/// L-function of the exponential sum of x^d + a x^s over F_p: polynomial
/// 1 + c_1 T + .. + c_{d-1} T^{d-1} with coefficients in Z[zeta_p].
#[derive(Clone, Debug)]
pub struct LFunction {
    pub p: u64,
    pub s: u64,
    pub d: u64,
    pub a: u64,
    pub coeffs: Vec<CycloInt>,
}

/// Exhaustive generic polygon: the lower envelope over a in F_p^*, plus a
/// single parameter value attaining it everywhere, when one exists.
#[derive(Clone, Debug)]
pub struct GnpResult {
    pub polygon: NewtonPolygon,
    pub witness: Option<u64>,
}

/// S_k = sum over x in F_{p^k} of zeta_p^{Tr(x^d + a x^s)}, returned
/// canonically. The bucket counts are verified to total p^k.
pub fn exp_sum(s: u64, d: u64, a: u64, field: &FiniteField) -> Result<CycloInt> {
    let p = field.p;
    if d == 0 {
        return Err(hypothesis("degree d must be positive"));
    }
    let order: u64 = u64::try_from(field.order())
        .map_err(|_| Error::BudgetExceeded(format!("field order {} too large", field.order())))?;
    let a = a % p;
    let counts = (0..order)
        .into_par_iter()
        .fold(
            || vec![0u64; p as usize],
            |mut buckets, idx| {
                let x = field.element(idx as u128);
                let mut y = field.pow(&x, d);
                if a != 0 {
                    let term = field.mul(&field.embed(a), &field.pow(&x, s));
                    y = field.add(&y, &term);
                }
                buckets[field.trace(&y) as usize] += 1;
                buckets
            },
        )
        .reduce(
            || vec![0u64; p as usize],
            |mut l, r| {
                for (x, y) in l.iter_mut().zip(&r) {
                    *x += y;
                }
                l
            },
        );
    if counts.iter().sum::<u64>() != order {
        return Err(Error::Inconsistency("character-sum mass law broken".into()));
    }
    let counts: Vec<Int> = counts.into_iter().map(Int::from).collect();
    CycloInt::from_counts(p, &counts)
}

/// First `count` L-coefficients after c_0 = 1, from the Newton-identity
/// recursion i c_i = sum_{j=1}^{i} S_j c_{i-j}; the division by i is exact
/// or the computation aborts.
pub fn l_coefficients(s: u64, d: u64, a: u64, p: u64, count: u64) -> Result<Vec<CycloInt>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut sums = Vec::with_capacity(count as usize);
    for k in 1..=count {
        let field = build_field(p, k as usize)?;
        sums.push(exp_sum(s, d, a, &field)?);
    }
    let mut coeffs = vec![CycloInt::one(p)];
    for i in 1..=count as usize {
        let mut rhs = CycloInt::zero(p);
        for j in 1..=i {
            rhs = rhs.add(&sums[j - 1].mul(&coeffs[i - j]));
        }
        coeffs.push(rhs.div_exact(&Int::from(i as u64))?);
    }
    Ok(coeffs)
}

/// Full L-function of degree d-1, with the endpoint valuation verified:
/// the top coefficient must have normalized valuation exactly (d-1)/2.
pub fn l_polynomial(s: u64, d: u64, a: u64, p: u64) -> Result<LFunction> {
    let coeffs = l_coefficients(s, d, a, p, d - 1)?;
    let top = coeffs.last().unwrap();
    let want = Rational::new(Int::from(d - 1), Int::from(2u32));
    match top.pi_ord()? {
        Valuation::Finite(v) if v == want => {}
        other => {
            return Err(Error::Inconsistency(format!(
                "top L-coefficient valuation {other:?} differs from {want}; \
                 degree hypothesis violated for (s,d,a,p)=({s},{d},{a},{p})"
            )));
        }
    }
    Ok(LFunction { p, s, d, a, coeffs })
}

/// Newton polygon of the L-function: hull of (i, pi_ord(c_i)), skipping
/// coefficients that vanish.
pub fn newton_polygon(s: u64, d: u64, a: u64, p: u64) -> Result<NewtonPolygon> {
    let l = l_polynomial(s, d, a, p)?;
    let mut pts = vec![];
    for (i, c) in l.coeffs.iter().enumerate() {
        match c.pi_ord()? {
            Valuation::Finite(v) => pts.push((rat_int(i as i64), v)),
            Valuation::Infinity => {}
        }
    }
    NewtonPolygon::lower_hull(&pts)
}

/// Lower envelope of the Newton polygons over all a in F_p^*, with a
/// uniform witness if some single a attains the whole envelope.
pub fn exhaustive_gnp(s: u64, d: u64, p: u64) -> Result<GnpResult> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 3 {
        return Err(hypothesis("need p >= 3 for a nonempty parameter sweep"));
    }
    let polys: Vec<(u64, NewtonPolygon)> = (1..p)
        .into_par_iter()
        .map(|a| Ok((a, newton_polygon(s, d, a, p)?)))
        .collect::<Result<_>>()?;
    let mut env_pts = vec![];
    for i in 0..d {
        let x = rat_int(i as i64);
        let y = polys
            .iter()
            .map(|(_, np)| np.eval(&x).expect("x within every polygon domain"))
            .min()
            .unwrap();
        env_pts.push((x, y));
    }
    let polygon = NewtonPolygon::lower_hull(&env_pts)?;
    let witness = polys
        .iter()
        .find(|(_, np)| *np == polygon)
        .map(|(a, _)| *a);
    Ok(GnpResult { polygon, witness })
}

/// Numerator of the zeta function of the Artin-Schreier cover: the product
/// of all Galois conjugates of L (zeta -> zeta^u, u = 1..p-1), which is an
/// integer polynomial of degree (d-1)(p-1).
pub fn zeta_numerator(s: u64, d: u64, a: u64, p: u64) -> Result<Vec<Int>> {
    let l = l_polynomial(s, d, a, p)?;
    let mut prod = vec![CycloInt::one(p)];
    for u in 1..p {
        let factor: Vec<CycloInt> = l
            .coeffs
            .iter()
            .map(|c| c.conjugate(u))
            .collect::<Result<_>>()?;
        let mut next = vec![CycloInt::zero(p); prod.len() + factor.len() - 1];
        for (i, x) in prod.iter().enumerate() {
            for (j, y) in factor.iter().enumerate() {
                next[i + j] = next[i + j].add(&x.mul(y));
            }
        }
        prod = next;
    }
    let mut out = Vec::with_capacity(prod.len());
    for c in &prod {
        match c.as_integer() {
            Some(v) => out.push(v),
            None => {
                return Err(Error::Inconsistency(
                    "Galois-norm product has a non-integer coefficient".into(),
                ))
            }
        }
    }
    if out.len() as u64 != (d - 1) * (p - 1) + 1 {
        return Err(Error::Inconsistency(format!(
            "zeta numerator degree {} differs from (d-1)(p-1) = {}",
            out.len() - 1,
            (d - 1) * (p - 1)
        )));
    }
    Ok(out)
}

/// p-adic Newton polygon of an integer polynomial, zero coefficients
/// skipped.
pub fn integer_newton_polygon(coeffs: &[Int], p: u64) -> Result<NewtonPolygon> {
    let mut pts = vec![];
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        match ord_p(&Rational::from_integer(c.clone()), p)? {
            Valuation::Finite(v) => pts.push((rat_int(i as i64), v)),
            Valuation::Infinity => unreachable!(),
        }
    }
    NewtonPolygon::lower_hull(&pts)
}
