use num_bigint::BigInt;
use num_traits::One;

use super::cache::{cached, Key};
use super::{zeta_num, Approx, ErrBound, EvalContext, MPReal};
use crate::error::Result;
use crate::exact::{bernoulli, rat, rint, Rational};
use crate::symbolic::ConstGenerator;

/// `atan(1/x)` by its alternating series.
fn atan_inv(x: u64, ctx: &EvalContext) -> Approx {
    let bits = ctx.bits();
    let x2 = BigInt::from(x * x);
    let mut power = MPReal::from_rational(&Rational::new(BigInt::one(), BigInt::from(x)), bits);
    let mut acc = MPReal::zero(bits);
    let mut k: u64 = 0;
    let target = ctx.internal_target().log10() - 2.0;
    loop {
        let term = power.div_int(&BigInt::from(2 * k + 1));
        if k % 2 == 0 {
            acc = &acc + &term;
        } else {
            acc = &acc - &term;
        }
        power = power.div_int(&x2);
        k += 1;
        if power.log10_abs() < target {
            break;
        }
    }
    // next term bounds the alternating remainder; each step rounds twice
    let err = ErrBound::from_log10(power.log10_abs()).add(ctx.ulp().scale(2.0 * k as f64 + 2.0));
    Approx::new(acc, err)
}

pub fn pi_num(ctx: &EvalContext) -> Approx {
    cached(Key::Constant("pi"), ctx, || {
        let a = atan_inv(5, ctx).mul_rat(&rint(16), ErrBound::ZERO);
        let b = atan_inv(239, ctx).mul_rat(&rint(4), ErrBound::ZERO);
        Ok(a.sub(&b))
    })
    .expect("pi evaluation cannot fail")
}

/// `log 2 = 2 atanh(1/3)`.
pub fn log2_num(ctx: &EvalContext) -> Approx {
    cached(Key::Constant("log2"), ctx, || {
        let bits = ctx.bits();
        let mut power = MPReal::from_rational(&rat(1, 3), bits);
        let mut acc = MPReal::zero(bits);
        let mut k = 0u64;
        let target = ctx.internal_target().log10() - 2.0;
        while power.log10_abs() >= target {
            acc = &acc + &power.div_int(&BigInt::from(2 * k + 1));
            power = power.div_int(&BigInt::from(9));
            k += 1;
        }
        // geometric remainder: next term * 9/8, doubled
        let err = ErrBound::from_log10(power.log10_abs()).scale(2.0 * 9.0 / 8.0).add(ctx.ulp().scale(4.0 * k as f64 + 4.0));
        Ok(Approx::new(&acc + &acc, err))
    })
    .expect("log 2 evaluation cannot fail")
}

/// `log 2^k`.
pub(crate) fn log_pow2(k: u32, ctx: &EvalContext) -> Approx {
    log2_num(ctx).mul_rat(&rint(k as i64), ErrBound::ZERO)
}

/// Euler's constant from the asymptotic expansion of `H_(y-1)` at a power of two:
/// `gamma = H_(y-1) - log y + 1/(2y) + sum_j B_2j / (2j y^2j)`, remainder
/// bounded by the first omitted term.
pub fn euler_gamma_num(ctx: &EvalContext) -> Approx {
    cached(Key::Constant("gamma"), ctx, || {
        let bits = ctx.bits();
        let y = ctx.cutoff();
        let k = y.trailing_zeros();
        let mut h = MPReal::zero(bits);
        for n in 1..y {
            h = &h + &MPReal::inv_pow(n, 1, bits);
        }
        let mut acc = Approx::new(h, ctx.ulp().scale(y as f64));
        acc = acc.sub(&log_pow2(k, ctx));
        let yb = BigInt::from(y);
        let mut corr = Rational::new(BigInt::one(), BigInt::from(2) * &yb);
        let target = ctx.internal_target().log10();
        let mut j = 1usize;
        let rem = loop {
            let term = bernoulli(2 * j) / Rational::from_integer(BigInt::from(2 * j as i64) * yb.pow(2 * j as u32));
            corr += term;
            let next = bernoulli(2 * j + 2) / Rational::from_integer(BigInt::from(2 * j as i64 + 2) * yb.pow(2 * j as u32 + 2));
            let l = super::tail::log10_rational(&next);
            if l < target {
                break l;
            }
            j += 1;
        };
        let c = Approx::new(MPReal::from_rational(&corr, bits), ErrBound::from_log10(rem).add(ctx.ulp()));
        Ok(acc.add(&c))
    })
    .expect("gamma evaluation cannot fail")
}

/// `Li_4(1/2) = sum 2^-n n^-4`.
fn li4_half(ctx: &EvalContext) -> Approx {
    cached(Key::Constant("li4h"), ctx, || {
        let bits = ctx.bits();
        let mut acc = MPReal::zero(bits);
        let target = ctx.internal_target().log10() - 1.0;
        let mut n = 1u64;
        loop {
            let term = Rational::new(BigInt::one(), (BigInt::one() << n) * BigInt::from(n).pow(4));
            acc = &acc + &MPReal::from_rational(&term, bits);
            n += 1;
            // remainder <= 2 * 2^-n n^-4
            let rem = -(n as f64) * std::f64::consts::LOG10_2 - 4.0 * (n as f64).log10() + 2f64.log10();
            if rem < target {
                let err = ErrBound::from_log10(rem).add(ctx.ulp().scale(n as f64));
                return Ok(Approx::new(acc, err));
            }
        }
    })
    .expect("Li4(1/2) evaluation cannot fail")
}

/// Numeric value of a symbolic generator.
pub fn generator_num(g: &ConstGenerator, ctx: &EvalContext) -> Result<Approx> {
    match g {
        ConstGenerator::Pi => Ok(pi_num(ctx)),
        ConstGenerator::Log2 => Ok(log2_num(ctx)),
        ConstGenerator::ZetaOdd(k) => zeta_num(*k as i64, ctx),
        ConstGenerator::Li4Half => Ok(li4_half(ctx)),
    }
}
