//! Complete solution of the two-generator Frobenius problem `d*n + s*m = v`
//! for coprime s < d, and its specialization to v = p*i - j.

use crate::error::{hypothesis, Result};

/// One nonnegative solution of `d*n + s*m = v`. Solutions are indexed by
/// `ell`: m = m_min + d*ell, n = n_min - s*ell; ell = 0 is the unique
/// solution minimizing m + n.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrobSolution {
    pub m: u64,
    pub n: u64,
    pub ell: u64,
}

/// Minimal solution data for v = p*i - j, with beta = m + n.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PijData {
    pub i: u64,
    pub j: u64,
    pub m_ij: u64,
    pub n_ij: u64,
    pub beta: u64,
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Modular inverse by extended Euclid, normalized to 0..m-1.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

fn check_pair(s: u64, d: u64) -> Result<()> {
    if s == 0 || d <= s {
        return Err(hypothesis(format!("need 0 < s < d, got s={s}, d={d}")));
    }
    if gcd(s, d) != 1 {
        return Err(hypothesis(format!("gcd(s, d) != 1 for s={s}, d={d}")));
    }
    Ok(())
}

/// The unique solution minimizing m + n, valid for v > d*s - d - s.
pub fn min_solution(s: u64, d: u64, v: u64) -> Result<FrobSolution> {
    check_pair(s, d)?;
    if (v as i128) <= (d * s) as i128 - d as i128 - s as i128 {
        return Err(hypothesis(format!(
            "v={v} not above the Frobenius bound ds-d-s for (s,d)=({s},{d})"
        )));
    }
    let s_inv = mod_inv(s % d, d).expect("s invertible mod d");
    let m = (s_inv as u128 * (v % d) as u128 % d as u128) as u64;
    debug_assert!(v >= s * m);
    let n = (v - s * m) / d;
    Ok(FrobSolution { m, n, ell: 0 })
}

/// All nonnegative solutions, ordered by ell = 0, 1, ...
pub fn all_solutions(s: u64, d: u64, v: u64) -> Result<Vec<FrobSolution>> {
    let base = min_solution(s, d, v)?;
    let ell_max = base.n / s;
    Ok((0..=ell_max)
        .map(|ell| FrobSolution {
            m: base.m + d * ell,
            n: base.n - s * ell,
            ell,
        })
        .collect())
}

/// Minimal solution for v = p*i - j with 1 <= i, j <= d-1, requiring
/// p > s(d-1) so that v clears the Frobenius bound for every such i, j.
pub fn pij_data(s: u64, d: u64, p: u64, i: u64, j: u64) -> Result<PijData> {
    check_pair(s, d)?;
    if !crate::rational::is_prime(p) {
        return Err(crate::error::Error::NotPrime(p));
    }
    if p <= s * (d - 1) {
        return Err(hypothesis(format!(
            "p={p} must exceed s(d-1)={} for (s,d)=({s},{d})",
            s * (d - 1)
        )));
    }
    if i == 0 || i >= d || j == 0 || j >= d {
        return Err(hypothesis(format!("indices i={i}, j={j} outside 1..{}", d - 1)));
    }
    let v = p * i - j;
    let sol = min_solution(s, d, v)?;
    Ok(PijData {
        i,
        j,
        m_ij: sol.m,
        n_ij: sol.n,
        beta: sol.m + sol.n,
    })
}

/// The residue matrix (m_ij) for 1 <= i, j <= d-1, which depends only on
/// r = p mod d: m_ij = s^{-1} (r*i - j) mod d.
pub fn m_matrix(s: u64, d: u64, r: u64) -> Result<Vec<Vec<u64>>> {
    check_pair(s, d)?;
    let s_inv = mod_inv(s % d, d).expect("s invertible mod d");
    let mut out = Vec::with_capacity((d - 1) as usize);
    for i in 1..d {
        let mut row = Vec::with_capacity((d - 1) as usize);
        for j in 1..d {
            let diff = ((r * i) % d + d - (j % d)) % d;
            row.push((s_inv * diff) % d);
        }
        out.push(row);
    }
    Ok(out)
}
