//! Arbitrary-precision rationals, p-adic valuations and prime factor bounds.
//!
//! `Rational` is always stored in lowest terms with a positive denominator
//! (guaranteed by the underlying `num-rational` representation); zero is 0/1.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rational = num_rational::BigRational;

/// Shorthand constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(Int::from(num), Int::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(Int::from(n))
}

/// A p-adic valuation: a rational number, or infinity for the valuation of
/// zero. Infinity compares greater than every finite value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(Rational),
    Infinity,
}

impl Valuation {
    pub fn is_finite(&self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Valuation::*;
        match (self, other) {
            (Infinity, Infinity) => std::cmp::Ordering::Equal,
            (Infinity, Finite(_)) => std::cmp::Ordering::Greater,
            (Finite(_), Infinity) => std::cmp::Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl std::fmt::Display for Valuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin primality test for u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // This base set is deterministic for all n < 3.3e24.
    'bases: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin for big integers; exact below 2^64, strong pseudoprime test
/// with a fixed base battery above.
pub fn is_probable_prime(n: &Int) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime(v);
    }
    if n.is_negative() || n.is_even() {
        return false;
    }
    let one = Int::one();
    let n_minus_1 = n - &one;
    let mut d = n_minus_1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d /= 2;
        s += 1;
    }
    'bases: for &a in &[
        2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
        89, 97,
    ] {
        let a = Int::from(a);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&Int::from(2u32), n);
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Exponent of the prime p in a nonzero integer.
fn int_ord(n: &Int, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    let p = Int::from(p);
    let mut n = n.abs();
    let mut e = 0u64;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return e;
        }
        n = q;
        e += 1;
    }
}

/// p-adic valuation of a rational: exponent of p in the numerator minus the
/// exponent in the denominator; infinity for zero. Non-prime p is rejected.
pub fn ord_p(x: &Rational, p: u64) -> Result<Valuation> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if x.is_zero() {
        return Ok(Valuation::Infinity);
    }
    let e_num = int_ord(x.numer(), p) as i64;
    let e_den = int_ord(x.denom(), p) as i64;
    Ok(Valuation::Finite(rat_int(e_num - e_den)))
}

fn pollard_rho(n: &Int) -> Int {
    // n odd composite with no tiny factors.
    let one = Int::one();
    let mut c = Int::one();
    loop {
        let step = |x: &Int| (x * x + &c) % n;
        let mut x = Int::from(2u32);
        let mut y = Int::from(2u32);
        loop {
            x = step(&x);
            y = step(&step(&y));
            let d = (&x - &y).abs().gcd(n);
            if d == *n {
                break;
            }
            if d > one {
                return d;
            }
        }
        c += 1;
    }
}

fn largest_prime_factor_abs(n: &Int) -> Int {
    let mut n = n.abs();
    let mut best = Int::one();
    // Trial division first; rho only for a stubborn composite cofactor.
    let mut small = 2u64;
    while small < 1 << 16 && n > Int::one() {
        let sp = Int::from(small);
        if (&sp * &sp) > n {
            break;
        }
        while (&n % &sp).is_zero() {
            n /= &sp;
            if sp > best {
                best = sp.clone();
            }
        }
        small = if small == 2 { 3 } else { small + 2 };
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m <= Int::one() {
            continue;
        }
        if is_probable_prime(&m) {
            if m > best {
                best = m;
            }
            continue;
        }
        let d = pollard_rho(&m);
        let q = &m / &d;
        stack.push(d);
        stack.push(q);
    }
    best
}

/// Largest prime dividing numerator or denominator of a nonzero rational;
/// 1 for a unit (no prime factors).
pub fn max_prime(x: &Rational) -> Result<Int> {
    if x.is_zero() {
        return Err(Error::ZeroInput("max_prime"));
    }
    let a = largest_prime_factor_abs(x.numer());
    let b = largest_prime_factor_abs(x.denom());
    Ok(a.max(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ord_p_examples() {
        assert_eq!(ord_p(&rat_int(0), 7).unwrap(), Valuation::Infinity);
        assert_eq!(
            ord_p(&rat(9, 14), 7).unwrap(),
            Valuation::Finite(rat_int(-1))
        );
        assert_eq!(ord_p(&rat(-2, 3), 5).unwrap(), Valuation::Finite(rat_int(0)));
    }

    #[test]
    fn ord_p_rejects_composite() {
        assert!(matches!(ord_p(&rat_int(1), 6), Err(Error::NotPrime(6))));
    }

    #[test]
    fn max_prime_examples() {
        // Derived by trial-division factoring: 2/3 has primes {2, 3}.
        assert_eq!(max_prime(&rat(-2, 3)).unwrap(), Int::from(3));
        assert_eq!(max_prime(&rat_int(-1)).unwrap(), Int::from(1));
        // 35 = 5 * 7.
        assert_eq!(max_prime(&rat_int(35)).unwrap(), Int::from(7));
        assert!(max_prime(&rat_int(0)).is_err());
    }

    #[test]
    fn max_prime_large() {
        // 2^31 - 1 is prime.
        let m = Int::from(2147483647u64) * Int::from(6u32);
        assert_eq!(
            max_prime(&Rational::from_integer(m)).unwrap(),
            Int::from(2147483647u64)
        );
    }

    #[test]
    fn primality_small() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
    }

    #[test]
    fn valuation_ordering() {
        assert!(Valuation::Finite(rat(1, 2)) < Valuation::Infinity);
        assert!(Valuation::Finite(rat(1, 3)) < Valuation::Finite(rat(2, 5)));
    }
}
