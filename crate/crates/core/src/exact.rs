//! Exact integer and rational arithmetic: Bernoulli and Euler numbers,
//! binomials, harmonic numbers and the finite sums the recursions need.
//!
//! Bernoulli numbers use the convention `B_1 = -1/2`, under which
//! `2 (2n)! zeta(2n) = (-1)^(n+1) (2 pi)^(2n) B_(2n)`.
//! Euler numbers use the secant convention `E_0 = 1, E_2 = -1, E_4 = 5`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use parking_lot::RwLock;

/// Exact arbitrary-precision fraction, always in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

static BERNOULLI: Lazy<RwLock<Vec<Rational>>> = Lazy::new(|| RwLock::new(vec![Rational::one()]));
static EULER: Lazy<RwLock<Vec<BigInt>>> = Lazy::new(|| RwLock::new(vec![BigInt::one()]));

/// `zeta(s)` for `s <= 0`: `zeta(0) = -1/2`, `zeta(-n) = -B_{n+1}/(n+1)`.
pub fn zeta_nonpositive(s: i64) -> Rational {
    assert!(s <= 0, "zeta_nonpositive needs s <= 0");
    if s == 0 {
        return rat(-1, 2);
    }
    let m = (1 - s) as usize;
    -bernoulli(m) / rint(m as i64)
}

/// Exact Bernoulli number `B_n`.
pub fn bernoulli(n: usize) -> Rational {
    if let Some(b) = BERNOULLI.read().get(n) {
        return b.clone();
    }
    let mut table = BERNOULLI.write();
    while table.len() <= n {
        let m = table.len();
        if m > 1 && m % 2 == 1 {
            table.push(Rational::zero());
            continue;
        }
        // sum_{k=0}^{m} C(m+1,k) B_k = 0
        let mut acc = Rational::zero();
        for (k, bk) in table.iter().enumerate() {
            if !bk.is_zero() {
                acc += bk * Rational::from_integer(binomial(m as u64 + 1, k as i64));
            }
        }
        table.push(-acc / rint(m as i64 + 1));
    }
    table[n].clone()
}

/// Exact Euler (secant) number `E_n`.
pub fn euler_number(n: usize) -> BigInt {
    if n % 2 == 1 {
        return BigInt::zero();
    }
    if let Some(e) = EULER.read().get(n / 2) {
        return e.clone();
    }
    let mut table = EULER.write();
    while table.len() <= n / 2 {
        let m = table.len();
        // sum_{k=0}^{m} C(2m,2k) E_{2k} = 0
        let mut acc = BigInt::zero();
        for (k, ek) in table.iter().enumerate() {
            acc += ek * binomial(2 * m as u64, 2 * k as i64);
        }
        table.push(-acc);
    }
    table[n / 2].clone()
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Harmonic number `H_n` as an exact rational (`H_0 = 0`).
pub fn harmonic(n: u64) -> Rational {
    generalized_harmonic(n, 1)
}

/// `sum_{k=1}^{n} k^-order`.
pub fn generalized_harmonic(n: u64, order: u32) -> Rational {
    let mut acc = Rational::zero();
    for k in 1..=n {
        acc += Rational::new(BigInt::one(), BigInt::from(k).pow(order));
    }
    acc
}

/// `sum_{k=0}^{m} (-1)^k / C(n,k)`.
pub fn inv_binomial_sum(n: u64, m: u64) -> Rational {
    assert!(m <= n, "inv_binomial_sum requires m <= n");
    let mut acc = Rational::zero();
    for k in 0..=m {
        let term = Rational::new(BigInt::one(), binomial(n, k as i64));
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `sum_{k=0}^{n} (-1)^k C(n+k, k)`; the sequence that obeys
/// `4 f(n) - 2 f(n-1) = 3 (-1)^n C(2n, n)` with `f(1) = -1`.
pub fn alternating_central_sum(n: u64) -> BigInt {
    let mut acc = BigInt::zero();
    for k in 0..=n {
        let c = binomial(n + k, k as i64);
        if k % 2 == 0 {
            acc += c;
        } else {
            acc -= c;
        }
    }
    acc
}

/// `2F1(1, 2n+2; n+2; -1)`, defined through the finite-sum identity
/// `(-1)^(n+1) C(2n+1, n) F = 2^(-n-1) - sum_{k=0}^{n} (-1)^k C(n+k, k)`.
/// The hypergeometric series itself only converges in the Abel sense at -1.
pub fn hyp2f1_special(n: u64) -> Rational {
    assert!(n >= 1, "hyp2f1_special requires n >= 1");
    let lhs = Rational::new(BigInt::one(), BigInt::one() << (n + 1))
        - Rational::from_integer(alternating_central_sum(n));
    let mut c = Rational::from_integer(binomial(2 * n + 1, n as i64));
    if (n + 1).is_odd() {
        c = -c;
    }
    lhs / c
}

/// Bernoulli polynomial `B_k(x)` at a rational point.
pub fn bernoulli_poly(k: usize, x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    let mut xp = Rational::one();
    // accumulate from the highest power of x downwards: term i uses x^(k-i)
    let mut powers = Vec::with_capacity(k + 1);
    for _ in 0..=k {
        powers.push(xp.clone());
        xp *= x;
    }
    for i in 0..=k {
        let b = bernoulli(i);
        if b.is_zero() {
            continue;
        }
        acc += b * Rational::from_integer(binomial(k as u64, i as i64)) * &powers[k - i];
    }
    acc
}

/// True when `r` is an integer; returns it.
pub fn as_integer(r: &Rational) -> Option<BigInt> {
    if r.denom().is_one() {
        Some(r.numer().clone())
    } else {
        None
    }
}

/// `base^exp` for integer exponent (negative allowed when `base != 0`).
pub fn rat_pow(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), exp.unsigned_abs() as usize)
    }
}

pub fn rat_abs(r: &Rational) -> Rational {
    r.abs()
}
