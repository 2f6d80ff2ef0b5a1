//! Generating-polynomial machinery: the per-residue polynomials whose
//! lowest-degree nonzero terms determine the generic Newton polygon, and the
//! effective prime bound built from them.

use itertools::Itertools;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{hypothesis, Error, Result};
use crate::frobenius::{gcd, m_matrix};
use crate::poly::RatPoly;
use crate::rational::{max_prime, ord_p, rat_int, Int, Rational, Valuation};

/// One summand of the defining sum for a fixed degree k: a permutation
/// sigma of {1..n} (stored 0-based) together with the nonnegative shifts
/// ell_i, satisfying sum(m_{i,sigma(i)}) + d * sum(ell_i) = k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkElement {
    pub sigma: Vec<usize>,
    pub ells: Vec<u64>,
}

impl SkElement {
    pub fn sign(&self) -> i32 {
        let mut inversions = 0usize;
        for a in 0..self.sigma.len() {
            for b in a + 1..self.sigma.len() {
                if self.sigma[a] > self.sigma[b] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Outcome of the lowest-term scan for one index n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LowestOutcome {
    Found { k: u64, h: Rational },
    /// The scan hit the cap without a nonzero value; reported, never silent.
    Exhausted { k_cap: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowestTerm {
    pub n: u64,
    pub outcome: LowestOutcome,
}

/// All nonzero coefficients of the generating polynomial up to a degree cap,
/// one term list per n. For r = 1 the polynomial is the constant 1 and the
/// term lists are empty.
#[derive(Clone, Debug)]
pub struct GeneratingPolynomial {
    pub s: u64,
    pub d: u64,
    pub r: u64,
    /// Per n in 1..d-1: nonzero (k, h) pairs in increasing k.
    pub terms: Vec<(u64, Vec<(u64, Rational)>)>,
    pub k_cap: u64,
    /// Indices n whose scan found no nonzero term up to the cap.
    pub incomplete: Vec<u64>,
}

fn check_params(s: u64, d: u64, r: u64, n: u64) -> Result<()> {
    if s == 0 || d <= s || gcd(s, d) != 1 {
        return Err(hypothesis(format!("need coprime 0 < s < d, got ({s},{d})")));
    }
    if r < 2 || r > d - 1 || gcd(r, d) != 1 {
        return Err(hypothesis(format!(
            "residue r={r} must be in 2..{} and coprime to d={d}",
            d - 1
        )));
    }
    if n == 0 || n > d - 1 {
        return Err(hypothesis(format!("n={n} outside 1..{}", d - 1)));
    }
    Ok(())
}

/// Minimum over permutations sigma of sum_i m_{i,sigma(i)}.
pub fn k_min(s: u64, d: u64, r: u64, n: u64) -> Result<u64> {
    check_params(s, d, r, n)?;
    let m = m_matrix(s, d, r)?;
    let nn = n as usize;
    if nn <= 8 {
        Ok((0..nn)
            .permutations(nn)
            .map(|perm| (0..nn).map(|i| m[i][perm[i]]).sum())
            .min()
            .unwrap())
    } else {
        let sub: Vec<Vec<u64>> = (0..nn).map(|i| m[i][..nn].to_vec()).collect();
        Ok(crate::assignment::min_cost_assignment(&sub).0)
    }
}

fn compositions(total: u64, parts: usize) -> Vec<Vec<u64>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = vec![];
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

/// Enumerate the defining set for degree k: permutations whose m-sum does
/// not exceed k and matches it mod d, filled out with all splits of the
/// remainder into n nonnegative multiples of d.
pub fn enum_s_set(s: u64, d: u64, r: u64, n: u64, k: u64) -> Result<Vec<SkElement>> {
    check_params(s, d, r, n)?;
    let m = m_matrix(s, d, r)?;
    let nn = n as usize;
    let mut out = vec![];
    for perm in (0..nn).permutations(nn) {
        let msum: u64 = (0..nn).map(|i| m[i][perm[i]]).sum();
        if msum > k || (k - msum) % d != 0 {
            continue;
        }
        let q = (k - msum) / d;
        for ells in compositions(q, nn) {
            out.push(SkElement {
                sigma: perm.clone(),
                ells,
            });
        }
    }
    Ok(out)
}

fn factorial_ratio(hi: u64, lo: u64) -> Int {
    // hi! / lo! for lo <= hi.
    let mut acc = Int::one();
    for v in lo + 1..=hi {
        acc *= Int::from(v);
    }
    acc
}

// Integer polynomial helpers for the inner accumulation; coefficients of
// the defining sum are integers, so this avoids rational gcd churn.
fn int_mul(a: &[Int], b: &[Int]) -> Vec<Int> {
    let mut out = vec![Int::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn int_falling_factorial(slope: u64, intercept: u64, t: u64) -> Vec<Int> {
    let mut acc = vec![Int::one()];
    for shift in 0..t {
        let lin = vec![Int::from(intercept) - Int::from(shift), Int::from(slope)];
        acc = int_mul(&acc, &lin);
    }
    acc
}

/// The degree-k defining polynomial in z: a signed sum over the enumerated
/// set of falling-factorial products scaled by integer multinomial weights.
/// Zero when the set is empty. Always has integer coefficients.
pub fn tilde_h(s: u64, d: u64, r: u64, n: u64, k: u64) -> Result<RatPoly> {
    let kmin = k_min(s, d, r, n)?;
    if k < kmin {
        return Err(hypothesis(format!(
            "k={k} below the minimal degree {kmin} for (s,d,r,n)=({s},{d},{r},{n})"
        )));
    }
    let b = k - kmin;
    let m = m_matrix(s, d, r)?;
    let elements = enum_s_set(s, d, r, n, k)?;
    let mut acc: Vec<Int> = vec![];
    for el in &elements {
        let mut theta = Int::one();
        let mut prod = vec![Int::one()];
        for (i0, &j0) in el.sigma.iter().enumerate() {
            let i = (i0 + 1) as u64;
            let j = (j0 + 1) as u64;
            let mij = m[i0][j0];
            let ell = el.ells[i0];
            theta *= factorial_ratio(d - 1 + b, mij + d * ell);
            // t_ij = floor(r i / d) - (r i - j - s m_ij)/d + s ell
            let fl = (r * i / d) as i64;
            let t = fl - ((r * i) as i64 - j as i64 - (s * mij) as i64) / d as i64
                + (s * ell) as i64;
            debug_assert!(t >= 0);
            prod = int_mul(&prod, &int_falling_factorial(i, r * i / d, t as u64));
        }
        if el.sign() < 0 {
            theta = -theta;
        }
        if acc.len() < prod.len() {
            acc.resize(prod.len(), Int::zero());
        }
        for (idx, c) in prod.iter().enumerate() {
            acc[idx] += c * &theta;
        }
    }
    Ok(RatPoly::from_int_coeffs(acc))
}

/// Evaluate the primitive part of the degree-k defining polynomial at
/// z = -r/d; zero when the polynomial vanishes identically.
pub fn h_value(s: u64, d: u64, r: u64, n: u64, k: u64) -> Result<Rational> {
    let h = tilde_h(s, d, r, n, k)?;
    if h.is_zero() {
        return Ok(Rational::zero());
    }
    let (_, primitive) = h.content_primitive()?;
    Ok(primitive.eval(&Rational::new(-Int::from(r), Int::from(d))))
}

/// Default scan cap: minimal degree plus d(d+2); recovers all published
/// small cases (d <= 5) while keeping the cap explicit.
pub fn default_k_cap(s: u64, d: u64, r: u64, n: u64) -> Result<u64> {
    Ok(k_min(s, d, r, n)? + d * (d + 2))
}

/// For each n scan k upward from the minimal degree for the first nonzero
/// evaluation; a cap hit is reported explicitly. The per-n scans run in
/// parallel and the results merge deterministically by n.
pub fn lowest_terms(s: u64, d: u64, r: u64, k_cap: Option<u64>) -> Result<Vec<LowestTerm>> {
    check_params(s, d, r, 1)?;
    let results: Vec<Result<LowestTerm>> = (1..d)
        .into_par_iter()
        .map(|n| {
            let kmin = k_min(s, d, r, n)?;
            let cap = match k_cap {
                Some(c) => {
                    if c < kmin {
                        return Err(hypothesis(format!(
                            "k_cap={c} below minimal degree {kmin} for n={n}"
                        )));
                    }
                    c
                }
                None => default_k_cap(s, d, r, n)?,
            };
            for k in kmin..=cap {
                let h = h_value(s, d, r, n, k)?;
                if !h.is_zero() {
                    return Ok(LowestTerm {
                        n,
                        outcome: LowestOutcome::Found { k, h },
                    });
                }
            }
            Ok(LowestTerm {
                n,
                outcome: LowestOutcome::Exhausted { k_cap: cap },
            })
        })
        .collect();
    results.into_iter().collect()
}

/// All nonzero terms up to the cap, for the CLI ledger output.
pub fn generating_polynomial(
    s: u64,
    d: u64,
    r: u64,
    k_cap: Option<u64>,
) -> Result<GeneratingPolynomial> {
    if r == 1 {
        return Ok(GeneratingPolynomial {
            s,
            d,
            r,
            terms: (1..d).map(|n| (n, vec![])).collect(),
            k_cap: 0,
            incomplete: vec![],
        });
    }
    check_params(s, d, r, 1)?;
    let mut terms = vec![];
    let mut incomplete = vec![];
    let mut cap_used = 0u64;
    for n in 1..d {
        let kmin = k_min(s, d, r, n)?;
        let cap = match k_cap {
            Some(c) => c.max(kmin),
            None => default_k_cap(s, d, r, n)?,
        };
        cap_used = cap_used.max(cap);
        let mut list = vec![];
        for k in kmin..=cap {
            let h = h_value(s, d, r, n, k)?;
            if !h.is_zero() {
                list.push((k, h));
            }
        }
        if list.is_empty() {
            incomplete.push(n);
        }
        terms.push((n, list));
    }
    Ok(GeneratingPolynomial {
        s,
        d,
        r,
        terms,
        k_cap: cap_used,
        incomplete,
    })
}

/// Effective prime bound: max of s(d-1), d + max_n k, 2(d-s) max_n k and
/// the largest prime in any lowest coefficient. Requires every n resolved.
pub fn bound_n(s: u64, d: u64, lowest: &[LowestTerm]) -> Result<Int> {
    if lowest.len() != (d - 1) as usize {
        return Err(hypothesis(format!(
            "lowest-term list has {} entries, expected {}",
            lowest.len(),
            d - 1
        )));
    }
    let mut k_max = 0u64;
    let mut prime_max = Int::one();
    for term in lowest {
        match &term.outcome {
            LowestOutcome::Found { k, h } => {
                k_max = k_max.max(*k);
                let mp = max_prime(h)?;
                if mp > prime_max {
                    prime_max = mp;
                }
            }
            LowestOutcome::Exhausted { k_cap } => {
                return Err(hypothesis(format!(
                    "lowest term for n={} undetermined up to k_cap={}",
                    term.n, k_cap
                )));
            }
        }
    }
    let candidates = [
        Int::from(s * (d - 1)),
        Int::from(d + k_max),
        Int::from(2 * (d - s) * k_max),
        prime_max,
    ];
    Ok(candidates.into_iter().max().unwrap())
}

/// True iff the integer polynomial evaluated at floor(p/d) is a p-adic
/// unit. For p = r mod d this decides whether p divides the evaluation at
/// the congruent rational point -r/d.
pub fn certify_unit(h: &RatPoly, r: u64, d: u64, p: u64) -> Result<bool> {
    if !crate::rational::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p <= d {
        return Err(hypothesis(format!("p={p} must exceed d={d}")));
    }
    if p % d != r % d {
        return Err(hypothesis(format!("p={p} is not {r} mod {d}")));
    }
    let value = h.eval(&rat_int((p / d) as i64));
    Ok(ord_p(&value, p)? == Valuation::Finite(Rational::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    /// Independent enumeration of the defining set: all permutations, all
    /// ell-vectors bounded by k/d, filtered by the defining equation.
    fn brute_s_set(s: u64, d: u64, r: u64, n: u64, k: u64) -> Vec<(Vec<usize>, Vec<u64>)> {
        let m = m_matrix(s, d, r).unwrap();
        let nn = n as usize;
        let mut out = vec![];
        for perm in (0..nn).permutations(nn) {
            let msum: u64 = (0..nn).map(|i| m[i][perm[i]]).sum();
            let cap = k / d;
            let mut stack = vec![vec![]];
            while let Some(prefix) = stack.pop() {
                if prefix.len() == nn {
                    let lsum: u64 = prefix.iter().sum();
                    if msum + d * lsum == k {
                        out.push((perm.clone(), prefix));
                    }
                    continue;
                }
                for v in (0..=cap).rev() {
                    let mut next: Vec<u64> = prefix.clone();
                    next.push(v);
                    stack.push(next);
                }
            }
        }
        out
    }

    #[test]
    fn k_min_examples() {
        assert_eq!(k_min(2, 3, 2, 1).unwrap(), 2);
        assert_eq!(k_min(2, 3, 2, 2).unwrap(), 0);
        // s = 1 specialization: m_ij = (r i - j) mod d.
        for d in [3u64, 4, 5] {
            for r in 2..d {
                if gcd(r, d) != 1 {
                    continue;
                }
                for n in 1..d {
                    let m = m_matrix(1, d, r).unwrap();
                    let want = (0..n as usize)
                        .permutations(n as usize)
                        .map(|perm| {
                            (0..n as usize)
                                .map(|i| {
                                    let j = perm[i] as u64 + 1;
                                    ((r * (i as u64 + 1)) % d + d - (j % d)) % d
                                })
                                .sum::<u64>()
                        })
                        .min()
                        .unwrap();
                    assert_eq!(k_min(1, d, r, n).unwrap(), want);
                    let _ = m;
                }
            }
        }
    }

    #[test]
    fn k_min_exhaustive_matches_assignment() {
        for &(s, d) in &[(2u64, 5u64), (3, 5), (2, 3), (3, 4), (4, 5)] {
            for r in 2..d {
                if gcd(r, d) != 1 {
                    continue;
                }
                let m = m_matrix(s, d, r).unwrap();
                for n in 1..d {
                    let nn = n as usize;
                    let sub: Vec<Vec<u64>> = (0..nn).map(|i| m[i][..nn].to_vec()).collect();
                    let (hungarian, _) = crate::assignment::min_cost_assignment(&sub);
                    assert_eq!(k_min(s, d, r, n).unwrap(), hungarian);
                }
            }
        }
    }

    #[test]
    fn enum_s_set_examples() {
        let e = enum_s_set(2, 3, 2, 1, 2).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].sigma, vec![0]);
        assert_eq!(e[0].ells, vec![0]);

        let e = enum_s_set(2, 3, 2, 2, 0).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].sigma, vec![1, 0]);
        assert_eq!(e[0].ells, vec![0, 0]);
        assert_eq!(e[0].sign(), -1);

        assert!(enum_s_set(2, 3, 2, 1, 3).unwrap().is_empty());
    }

    #[test]
    fn enum_s_set_matches_brute_force() {
        for &(s, d, r) in &[(2u64, 3u64, 2u64), (2, 5, 3), (3, 4, 3), (1, 4, 3)] {
            for n in 1..d {
                let kmin = k_min(s, d, r, n).unwrap();
                for k in kmin..kmin + 2 * d {
                    let got: Vec<_> = enum_s_set(s, d, r, n, k)
                        .unwrap()
                        .into_iter()
                        .map(|e| (e.sigma, e.ells))
                        .collect();
                    let mut got_sorted = got.clone();
                    got_sorted.sort();
                    let mut want = brute_s_set(s, d, r, n, k);
                    want.sort();
                    assert_eq!(got_sorted, want, "(s,d,r,n,k)=({s},{d},{r},{n},{k})");
                }
            }
        }
    }

    #[test]
    fn tilde_h_examples() {
        // Single element, theta 1, t = 1: the polynomial z.
        let h = tilde_h(2, 3, 2, 1, 2).unwrap();
        assert_eq!(h, RatPoly::linear(rat_int(1), rat_int(0)));

        // Odd permutation, theta 4, both t = 0: the constant -4.
        let h = tilde_h(2, 3, 2, 2, 0).unwrap();
        assert_eq!(h, RatPoly::constant(rat_int(-4)));

        // Empty set: zero polynomial.
        assert!(tilde_h(2, 3, 2, 1, 3).unwrap().is_zero());

        assert!(tilde_h(2, 3, 2, 1, 1).is_err()); // below k_min
    }

    #[test]
    fn tilde_h_integer_coeffs_and_degree_bound() {
        for &(s, d, r) in &[(2u64, 3u64, 2u64), (2, 5, 3), (3, 5, 2), (3, 4, 3)] {
            for n in 1..d {
                let kmin = k_min(s, d, r, n).unwrap();
                for k in kmin..kmin + d + 2 {
                    let h = tilde_h(s, d, r, n, k).unwrap();
                    assert!(h.has_integer_coeffs());
                    if let Some(deg) = h.degree() {
                        let b = k - kmin;
                        assert!(deg as u64 <= n * s * (b + 1));
                    }
                }
            }
        }
    }

    #[test]
    fn theta_normalization_consistency() {
        // Replacing the (d-1+b)! weight by (d-1+k)! multiplies the whole
        // polynomial by ((d-1+k)!/(d-1+k-kmin)!)^n and leaves the primitive
        // part unchanged.
        for &(s, d, r) in &[(2u64, 3u64, 2u64), (2, 5, 3), (3, 4, 3)] {
            for n in 1..d {
                let kmin = k_min(s, d, r, n).unwrap();
                for k in kmin..kmin + d {
                    let h = tilde_h(s, d, r, n, k).unwrap();
                    if h.is_zero() {
                        continue;
                    }
                    let factor = {
                        let base = factorial_ratio(d - 1 + k, d - 1 + k - kmin);
                        let mut acc = Int::one();
                        for _ in 0..n {
                            acc *= &base;
                        }
                        Rational::from_integer(acc)
                    };
                    let h_prime = h.scale(&factor);
                    let (_, p1) = h.content_primitive().unwrap();
                    let (_, p2) = h_prime.content_primitive().unwrap();
                    assert_eq!(p1, p2);
                }
            }
        }
    }

    #[test]
    fn h_value_examples() {
        assert_eq!(h_value(2, 3, 2, 1, 2).unwrap(), rat(-2, 3));
        // Primitive part of the constant -4 is 1; evaluation is 1.
        assert_eq!(h_value(2, 3, 2, 2, 0).unwrap(), rat_int(1));
        assert_eq!(h_value(2, 3, 2, 1, 3).unwrap(), rat_int(0));
    }

    #[test]
    fn lowest_terms_worked_case() {
        let lt = lowest_terms(2, 3, 2, Some(6)).unwrap();
        assert_eq!(lt.len(), 2);
        assert_eq!(
            lt[0].outcome,
            LowestOutcome::Found { k: 2, h: rat(-2, 3) }
        );
        assert_eq!(lt[1].outcome, LowestOutcome::Found { k: 0, h: rat_int(1) });
    }

    #[test]
    fn s1_achieves_floor() {
        // For s = 1 every n attains the minimal possible degree.
        for d in [3u64, 4, 5] {
            for r in 2..d {
                if gcd(r, d) != 1 {
                    continue;
                }
                for term in lowest_terms(1, d, r, None).unwrap() {
                    let kmin = k_min(1, d, r, term.n).unwrap();
                    match term.outcome {
                        LowestOutcome::Found { k, .. } => assert_eq!(k, kmin),
                        _ => panic!("undetermined lowest term for s=1, d={d}, r={r}"),
                    }
                }
            }
        }
    }

    #[test]
    fn bound_n_worked_case() {
        let lt = lowest_terms(2, 3, 2, None).unwrap();
        assert_eq!(bound_n(2, 3, &lt).unwrap(), Int::from(5));
    }

    #[test]
    fn bound_n_rejects_incomplete() {
        let lt = vec![
            LowestTerm {
                n: 1,
                outcome: LowestOutcome::Found {
                    k: 2,
                    h: rat(-2, 3),
                },
            },
            LowestTerm {
                n: 2,
                outcome: LowestOutcome::Exhausted { k_cap: 6 },
            },
        ];
        assert!(bound_n(2, 3, &lt).is_err());
    }

    #[test]
    fn certify_unit_examples() {
        let z = RatPoly::linear(rat_int(1), rat_int(0));
        assert!(certify_unit(&z, 2, 3, 11).unwrap());

        // 3z + 2 vanishes at -2/3, so p always divides the evaluation at
        // floor(p/3) for p = 2 mod 3.
        let h = RatPoly::linear(rat_int(3), rat_int(2));
        for p in [5u64, 11, 17, 23] {
            assert!(!certify_unit(&h, 2, 3, p).unwrap());
        }

        let h = RatPoly::new(vec![rat_int(1), rat_int(0), rat_int(1)]);
        assert!(certify_unit(&h, 2, 3, 5).unwrap());

        assert!(certify_unit(&z, 2, 3, 3).is_err()); // p <= d
    }
}
