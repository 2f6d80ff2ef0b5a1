//! Extension fields F_{p^k} with a deterministic modulus, elementwise
//! arithmetic, and a precomputed linear trace to the prime field.

use crate::error::{hypothesis, Error, Result};
use crate::rational::is_prime;

/// F_{p^k} presented as F_p[x]/(modulus). Elements are coefficient vectors
/// of length k (low degree first).
#[derive(Clone, Debug)]
pub struct FiniteField {
    pub p: u64,
    pub k: usize,
    /// Monic, length k+1, low degree first; irreducible over F_p.
    pub modulus: Vec<u64>,
    /// trace(x^i) as a prime-field scalar, for i = 0..k-1; the trace of any
    /// element is the matching linear combination of these.
    trace_basis: Vec<u64>,
}

fn poly_trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(out)
}

/// Remainder of a modulo the monic polynomial m.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let deg_m = m.len() - 1;
    let mut r = a.to_vec();
    while r.len() > deg_m {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - deg_m;
        if lead != 0 {
            for i in 0..deg_m {
                let idx = shift + i;
                r[idx] = (r[idx] + (p - m[i] % p) % p * lead) % p;
            }
        }
        r.pop();
        r = poly_trim(r);
        if r.len() <= deg_m {
            break;
        }
    }
    r
}

fn poly_powmod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &b, p), m, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (poly_trim(a.to_vec()), poly_trim(b.to_vec()));
    while !b.is_empty() {
        // Make b monic for the remainder step.
        let lead = *b.last().unwrap();
        let inv = mod_pow(lead, p - 2, p);
        let monic: Vec<u64> = b.iter().map(|&c| c * inv % p).collect();
        let r = poly_rem(&a, &monic, p);
        a = b;
        b = poly_trim(r);
    }
    a
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin irreducibility: x^{p^k} = x mod f, and for each prime t | k the
/// gcd of x^{p^{k/t}} - x with f is trivial.
fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let k = (modulus.len() - 1) as u64;
    let x = vec![0u64, 1];
    let q_full = (p as u128).pow(k as u32);
    let frob = poly_powmod(&x, q_full, modulus, p);
    if poly_trim(frob) != poly_trim(x.clone()) {
        return false;
    }
    for t in prime_factors(k) {
        let q = (p as u128).pow((k / t) as u32);
        let mut diff = poly_powmod(&x, q, modulus, p);
        // diff -= x
        if diff.len() < 2 {
            diff.resize(2, 0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        let diff = poly_trim(diff);
        let g = poly_gcd(modulus, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Deterministic field construction: the modulus is the monic degree-k
/// irreducible whose lower coefficients form the smallest base-p integer
/// sum c_i p^i. For k = 1 the modulus is x and no extension is used.
pub fn build_field(p: u64, k: usize) -> Result<FiniteField> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(hypothesis("extension degree must be at least 1"));
    }
    let modulus = if k == 1 {
        vec![0, 1]
    } else {
        let mut found = None;
        let total = (p as u128).pow(k as u32);
        let mut code = 0u128;
        while code < total {
            let mut m: Vec<u64> = Vec::with_capacity(k + 1);
            let mut c = code;
            for _ in 0..k {
                m.push((c % p as u128) as u64);
                c /= p as u128;
            }
            m.push(1);
            if is_irreducible(&m, p) {
                found = Some(m);
                break;
            }
            code += 1;
        }
        found.ok_or_else(|| hypothesis(format!("no irreducible of degree {k} over F_{p}")))?
    };
    let trace_basis = compute_trace_basis(p, k, &modulus)?;
    Ok(FiniteField {
        p,
        k,
        modulus,
        trace_basis,
    })
}

fn compute_trace_basis(p: u64, k: usize, modulus: &[u64]) -> Result<Vec<u64>> {
    // frob_pows[j] = x^{p^j} mod modulus.
    let x = vec![0u64, 1];
    let mut frob_pows = Vec::with_capacity(k);
    for j in 0..k {
        frob_pows.push(poly_powmod(&x, (p as u128).pow(j as u32), modulus, p));
    }
    let mut basis = Vec::with_capacity(k);
    for i in 0..k {
        // trace(x^i) = sum_j (x^{p^j})^i, which must land in F_p.
        let mut acc = vec![0u64; k];
        for f in &frob_pows {
            let pw = poly_powmod(f, i as u128, modulus, p);
            for (idx, &c) in pw.iter().enumerate() {
                acc[idx] = (acc[idx] + c) % p;
            }
        }
        if acc[1..].iter().any(|&c| c != 0) {
            return Err(Error::Inconsistency(
                "basis trace fell outside the prime field".into(),
            ));
        }
        basis.push(acc[0]);
    }
    Ok(basis)
}

impl FiniteField {
    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.k as u32)
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.k]
    }

    /// Element number idx in the base-p digit enumeration.
    pub fn element(&self, idx: u128) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.k);
        let mut c = idx;
        for _ in 0..self.k {
            out.push((c % self.p as u128) as u64);
            c /= self.p as u128;
        }
        out
    }

    pub fn embed(&self, a: u64) -> Vec<u64> {
        let mut out = self.zero();
        out[0] = a % self.p;
        out
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        (0..self.k).map(|i| (a[i] + b[i]) % self.p).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut prod = poly_rem(&poly_mul(a, b, self.p), &self.modulus, self.p);
        prod.resize(self.k, 0);
        prod
    }

    pub fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = self.embed(1);
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// Trace to F_p via the precomputed basis traces.
    pub fn trace(&self, a: &[u64]) -> u64 {
        let mut t = 0u64;
        for i in 0..self.k {
            t = (t + a[i] * self.trace_basis[i]) % self.p;
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_field_examples() {
        let f = build_field(11, 1).unwrap();
        assert_eq!(f.modulus, vec![0, 1]);

        // First irreducible quadratic over F_5 by low-coefficient encoding.
        let f = build_field(5, 2).unwrap();
        assert_eq!(f.modulus, vec![2, 0, 1]); // x^2 + 2

        // First cubic over F_3 with no root and no lower factorization.
        let f = build_field(3, 3).unwrap();
        // Exhaustive root check: the modulus has no root in F_3.
        for x in 0..3u64 {
            let v: u64 = f
                .modulus
                .iter()
                .enumerate()
                .map(|(i, &c)| c * mod_pow(x, i as u64, 3) % 3)
                .sum::<u64>()
                % 3;
            assert_ne!(v, 0);
        }
        // Determinism: rebuilding yields the same modulus.
        assert_eq!(f.modulus, build_field(3, 3).unwrap().modulus);
    }

    #[test]
    fn irreducibility_matches_root_check_for_quadratics() {
        // Degree 2: irreducible iff no root. Exhaustive cross-check.
        for p in [3u64, 5, 7, 11] {
            for c0 in 0..p {
                for c1 in 0..p {
                    let m = vec![c0, c1, 1];
                    let has_root = (0..p).any(|x| (x * x + c1 * x + c0) % p == 0);
                    assert_eq!(is_irreducible(&m, p), !has_root, "p={p} m={m:?}");
                }
            }
        }
    }

    #[test]
    fn field_arithmetic_laws() {
        let f = build_field(5, 2).unwrap();
        let n = f.order();
        // Multiplicative order of the unit group divides p^k - 1.
        for idx in 1..n {
            let a = f.element(idx);
            assert_eq!(f.pow(&a, (n - 1) as u64), f.embed(1));
        }
        // Frobenius is additive: (a+b)^p = a^p + b^p.
        for ia in 0..n {
            for ib in 0..n {
                let (a, b) = (f.element(ia), f.element(ib));
                let lhs = f.pow(&f.add(&a, &b), 5);
                let rhs = f.add(&f.pow(&a, 5), &f.pow(&b, 5));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn trace_properties() {
        for (p, k) in [(5u64, 2usize), (3, 3), (7, 2)] {
            let f = build_field(p, k).unwrap();
            // Trace agrees with the Frobenius-orbit sum, is additive, and
            // restricts to multiplication by k on the prime field.
            for idx in 0..f.order() {
                let a = f.element(idx);
                let mut orbit = f.zero();
                let mut cur = a.clone();
                for _ in 0..k {
                    orbit = f.add(&orbit, &cur);
                    cur = f.pow(&cur, p);
                }
                assert_eq!(orbit, f.embed(f.trace(&a)));
            }
            for c in 0..p {
                assert_eq!(f.trace(&f.embed(c)), c * k as u64 % p);
            }
            // Surjectivity: every value of F_p is hit.
            let mut seen = vec![false; p as usize];
            for idx in 0..f.order() {
                seen[f.trace(&f.element(idx)) as usize] = true;
            }
            assert!(seen.iter().all(|&b| b));
        }
    }
}
