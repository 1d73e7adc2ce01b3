//! Tails of 4-periodic Dirichlet series.
//!
//! `sum_{n >= y} chi(n) n^-u [log n]` is split by residue: with
//! `h(w) = (y + 4w)^-u [log(y + 4w)]` the tail is
//! `sum_{d=0}^{3} chi(y+d) sum_{j>=0} h(j + d/4)`, and each inner sum has the
//! shifted Euler–Maclaurin expansion
//!
//! `int_0^inf h - sum_{k=1}^{K} B_k(d/4)/k! h^(k-1)(0) + R_K`,
//! `|R_K| <= 2 zeta(K) / (2 pi)^K * int_0^inf |h^(K)|`.
//!
//! The integral terms cancel when `chi` has zero mean, which is what makes
//! the conditionally convergent `u = 1` tails of eta and beta accessible.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use parking_lot::RwLock;

use super::{Approx, ErrBound, EvalContext, MPReal, Periodic};
use crate::error::{Error, Result};
use crate::exact::{bernoulli_poly, factorial, rat, rint, Rational};

static QUARTER_BERNOULLI: Lazy<RwLock<Vec<[Rational; 4]>>> = Lazy::new(|| RwLock::new(Vec::new()));

/// `B_k(d/4)` for `d = 0..4`.
fn quarter_bernoulli(k: usize) -> [Rational; 4] {
    if let Some(v) = QUARTER_BERNOULLI.read().get(k) {
        return v.clone();
    }
    let mut table = QUARTER_BERNOULLI.write();
    while table.len() <= k {
        let j = table.len();
        table.push([
            bernoulli_poly(j, &rint(0)),
            bernoulli_poly(j, &rat(1, 4)),
            bernoulli_poly(j, &rat(1, 2)),
            bernoulli_poly(j, &rat(3, 4)),
        ]);
    }
    table[k].clone()
}

/// `sum_d chi(y+d) B_k(d/4)`.
pub(crate) fn shifted_bernoulli_sum(chi: &Periodic, y: u64, k: usize) -> Rational {
    let b = quarter_bernoulli(k);
    let mut acc = Rational::zero();
    for (d, bd) in b.iter().enumerate() {
        let c = chi.at(y + d as u64);
        if !c.is_zero() {
            acc += c * bd;
        }
    }
    acc
}

pub(crate) fn log10_rational(r: &Rational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    let n = r.numer().abs();
    let d = r.denom();
    log10_big(&n) - log10_big(d)
}

fn log10_big(n: &BigInt) -> f64 {
    let bits = n.bits() as i64;
    let drop = (bits - 60).max(0);
    let top = (n >> drop as usize).to_f64().unwrap_or(1.0);
    top.log10() + drop as f64 * std::f64::consts::LOG10_2
}

const MAX_TERMS: usize = 800;

/// `sum_{n >= y} chi(n) n^-u`, or with `log n` inserted when `log_y`
/// (an approximation of `log y`) is supplied.
pub fn periodic_tail(
    chi: &Periodic,
    u: u32,
    y: u64,
    log_y: Option<&Approx>,
    ctx: &EvalContext,
) -> Result<Approx> {
    let bits = ctx.bits();
    if chi.is_zero() {
        return Ok(Approx::exact(MPReal::zero(bits)));
    }
    if y < 2 {
        return Err(Error::Domain("tail start must be at least 2".into()));
    }
    let mean = chi.mean_sum();
    if !mean.is_zero() && u < 2 {
        return Err(Error::Domain(format!("periodic series with nonzero mean diverges at exponent {u}")));
    }
    let target = ctx.internal_target();
    let ulp = ctx.ulp();
    let yb = BigInt::from(y);
    let ylog10 = (y as f64).log10();
    let yln = (y as f64).ln();
    let abs_sum_log10 = log10_rational(&chi.abs_sum());

    let mut plain = MPReal::zero(bits);
    let mut logc = MPReal::zero(bits);
    let mut roundings = 0u64;

    if !mean.is_zero() {
        // int_0^inf h = y^(1-u) / (4(u-1)) [* (log y + 1/(u-1))]
        let base = &mean / Rational::from_integer(BigInt::from(4 * (u as i64 - 1)) * yb.pow(u - 1));
        if log_y.is_some() {
            logc = &logc + &MPReal::from_rational(&base, bits);
            plain = &plain + &MPReal::from_rational(&(&base / rint(u as i64 - 1)), bits);
            roundings += 2;
        } else {
            plain = &plain + &MPReal::from_rational(&base, bits);
            roundings += 1;
        }
    }

    // running pieces: (u)_m, (-4)^m, k!, y^(u+m), sum_{i<m} 1/(u+i)
    let mut rising = BigInt::one();
    let mut neg4 = BigInt::one();
    let mut hs = Rational::zero();
    let mut ypow = yb.pow(u);
    let mut rising_log10 = 0.0f64;
    let mut prev_bound = f64::INFINITY;
    let mut bound_log10 = f64::INFINITY;
    let mut converged = false;

    for k in 1..=MAX_TERMS {
        let m = k - 1;
        if m > 0 {
            let f = u as i64 + m as i64 - 1;
            rising *= BigInt::from(f);
            rising_log10 += (f as f64).log10();
            neg4 *= BigInt::from(-4);
            hs += Rational::new(BigInt::one(), BigInt::from(f));
            ypow *= &yb;
        }
        let sb = shifted_bernoulli_sum(chi, y, k);
        if !sb.is_zero() {
            // -B/k! * (-4)^m (u)_m / y^(u+m)
            let coef = -&sb * Rational::new(&neg4 * &rising, factorial(k as u64) * &ypow);
            if log_y.is_some() {
                logc = &logc + &MPReal::from_rational(&coef, bits);
                plain = &plain - &MPReal::from_rational(&(&coef * &hs), bits);
                roundings += 2;
            } else {
                plain = &plain + &MPReal::from_rational(&coef, bits);
                roundings += 1;
            }
        }
        if k < 2 {
            continue;
        }
        // remainder after k terms
        let kf = k as f64;
        let common = abs_sum_log10 + 4f64.log10() - kf * (2.0 * std::f64::consts::PI).log10()
            + (kf - 1.0) * 4f64.log10()
            + (1.0 - u as f64 - kf) * ylog10;
        bound_log10 = if log_y.is_some() {
            // 4^(K-1) (u)_K y^(1-u-K) [ (ln y + H)/(u+K-1) + 1/(u+K-1)^2 ]
            let top = u as f64 + kf - 1.0;
            let hk = hs.to_f64().unwrap_or(0.0) + 1.0 / top;
            common + rising_log10 + top.log10() + ((yln + hk) / top + 1.0 / (top * top)).log10()
        } else {
            common + rising_log10
        };
        if bound_log10 <= target.log10() {
            converged = true;
            break;
        }
        if bound_log10 > prev_bound && k > 8 {
            break;
        }
        prev_bound = bound_log10;
    }
    if !converged {
        return Err(Error::Precision(format!(
            "periodic tail from {y} at exponent {u} stalls at 1e{bound_log10:.1}; start too small for the requested precision"
        )));
    }

    let mut err = ErrBound::from_log10(bound_log10).add(ulp.scale(roundings as f64 + 1.0));
    let value = match log_y {
        Some(l) => {
            let prod = Approx::exact(logc).mul(l, ulp);
            err = err.add(prod.err);
            &plain + &prod.value
        }
        None => plain,
    };
    Ok(Approx::new(value, err))
}
