//! Accelerated evaluation of zeta-type single and double series.
//!
//! Single series: a direct partial sum up to the cutoff `Y` (a power of two)
//! followed by [`periodic_tail`].
//!
//! Double series `[p,q](s,t) = sum_{n>m>=1} p(n) q(m) n^-s m^-t`: the part with
//! `n < Y` is summed directly with a running inner prefix. For `n >= Y` the
//! inner prefix is `L_q(t) - T_q(n)`, and `T_q(n)` is expanded in powers of
//! `1/n` with coefficients depending on `n mod 4`; each power becomes one more
//! periodic tail. When the inner series diverges (`t = 1`, `q` of nonzero
//! mean) the mean part is split off as a harmonic-number sum, whose tail uses
//! `H_(n-1) = log n + gamma - 1/(2n) - sum B_2j/(2j n^2j)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::cache::{cached, Key};
use super::constants::{euler_gamma_num, log_pow2};
use super::tail::{log10_rational, periodic_tail, shifted_bernoulli_sum};
use super::{Approx, CharId, ErrBound, EvalContext, MPReal, Periodic};
use crate::error::{domain, Result};
use crate::exact::{bernoulli, factorial, rat, rint, zeta_nonpositive, Rational};

fn require_cutoff(ctx: &EvalContext) -> (u64, u32) {
    let y = ctx.cutoff();
    (y, y.trailing_zeros())
}

/// `sum_{n>=1} chi(n) n^-s` for a general 4-periodic `chi`.
pub fn periodic_l_num(chi: &Periodic, s: u32, ctx: &EvalContext) -> Result<Approx> {
    if s == 0 || (s == 1 && !chi.mean_sum().is_zero()) {
        return domain(format!("periodic series diverges at s = {s}"));
    }
    cached(Key::Series(chi.clone(), s), ctx, || {
        let (y, _) = require_cutoff(ctx);
        let bits = ctx.bits();
        let mut acc = MPReal::zero(bits);
        for n in 1..y {
            let c = chi.at(n);
            if !c.is_zero() {
                acc = &acc + &MPReal::inv_pow(n, s, bits).mul_rat(c);
            }
        }
        let direct = Approx::new(acc, ctx.ulp().scale(2.0 * y as f64));
        Ok(direct.add(&periodic_tail(chi, s, y, None, ctx)?))
    })
}

/// `zeta(s)` for integer `s >= 2`.
pub fn zeta_num(s: i64, ctx: &EvalContext) -> Result<Approx> {
    if s <= 0 {
        let v = zeta_nonpositive(s);
        return Ok(Approx::new(MPReal::from_rational(&v, ctx.bits()), ctx.ulp()));
    }
    if s == 1 {
        return domain("zeta(1) diverges");
    }
    cached(Key::Zeta(s as u32), ctx, || periodic_l_num(&CharId::One.periodic(), s as u32, ctx))?.ensure(ctx, "zeta")
}

/// `L_p(s) = sum chi_p(n) n^-s`; `s = 1` is allowed for the zero-mean
/// characters `2b` and `m4`.
pub fn l_num(p: CharId, s: i64, ctx: &EvalContext) -> Result<Approx> {
    let min = match p {
        CharId::One | CharId::TwoA => 2,
        CharId::TwoB | CharId::M4 => 1,
    };
    if s < min {
        return domain(format!("L_{p}({s}) diverges"));
    }
    periodic_l_num(&p.periodic(), s as u32, ctx)?.ensure(ctx, "L")
}

/// `sum_{n > N} chi_p(n) n^-s`.
pub fn periodic_tail_num(p: CharId, s: i64, n: u64, ctx: &EvalContext) -> Result<Approx> {
    let chi = p.periodic();
    if s < 1 || (s == 1 && !chi.mean_sum().is_zero()) {
        return domain(format!("tail of L_{p}({s}) diverges"));
    }
    let (y, _) = require_cutoff(ctx);
    let bits = ctx.bits();
    let start = (n + 1).max(y);
    let mut acc = MPReal::zero(bits);
    for k in (n + 1)..start {
        let c = chi.at(k);
        if !c.is_zero() {
            acc = &acc + &MPReal::inv_pow(k, s as u32, bits).mul_rat(c);
        }
    }
    let direct = Approx::new(acc, ctx.ulp().scale(2.0 * (start - n) as f64));
    direct.add(&periodic_tail(&chi, s as u32, start, None, ctx)?).ensure(ctx, "periodic tail")
}

/// `sum_{n>m>=1} p(n) q(m) n^-s m^-t` for general 4-periodic weights.
pub fn periodic_double_sum(p: &Periodic, q: &Periodic, s: u32, t: u32, ctx: &EvalContext) -> Result<Approx> {
    if t == 0 {
        return domain("inner exponent must be at least 1");
    }
    if s == 0 || (s == 1 && (t < 2 || !p.mean_sum().is_zero())) {
        return domain(format!("double series diverges at (s, t) = ({s}, {t})"));
    }
    if p.is_zero() || q.is_zero() {
        return Ok(Approx::exact(ctx.zero()));
    }
    cached(Key::Double(p.clone(), q.clone(), s, t), ctx, || {
        let mean = q.mean_sum();
        if t == 1 && !mean.is_zero() {
            // q = c0 + q', c0 = mean value per term
            let c0 = &mean / rint(4);
            let rest = q.sub(&Periodic::constant(c0.clone()));
            let h = harmonic_weighted(p, s, ctx)?.mul_rat(&c0, ctx.ulp());
            if rest.is_zero() {
                Ok(h)
            } else {
                Ok(h.add(&convergent_inner(p, &rest, s, t, ctx)?))
            }
        } else {
            convergent_inner(p, q, s, t, ctx)
        }
    })
}

fn direct_double(p: &Periodic, q: &Periodic, s: u32, t: u32, y: u64, ctx: &EvalContext) -> Approx {
    let bits = ctx.bits();
    let mut prefix = MPReal::zero(bits);
    let mut acc = MPReal::zero(bits);
    for n in 1..y {
        let pc = p.at(n);
        if !pc.is_zero() && !prefix.is_zero() {
            acc = &acc + &(&prefix * &MPReal::inv_pow(n, s, bits)).mul_rat(pc);
        }
        let qc = q.at(n);
        if !qc.is_zero() {
            prefix = &prefix + &MPReal::inv_pow(n, t, bits).mul_rat(qc);
        }
    }
    // three roundings per term, plus the prefix error (at most 2y ulp)
    // carried through sum |p(n)| n^-s <= 2 max|p|
    let pmax = log10_rational(&p.max_abs());
    let carried = ctx.ulp().scale(4.0 * y as f64).mul(ErrBound::from_log10(pmax));
    Approx::new(acc, ctx.ulp().scale(3.0 * y as f64).add(carried))
}

/// Case where `sum q(m) m^-t` converges.
fn convergent_inner(p: &Periodic, q: &Periodic, s: u32, t: u32, ctx: &EvalContext) -> Result<Approx> {
    let (y, _) = require_cutoff(ctx);
    let ulp = ctx.ulp();
    let direct = direct_double(p, q, s, t, y, ctx);
    let lq = periodic_l_num(q, t, ctx)?;
    let tp = periodic_tail(p, s, y, None, ctx)?;
    let mut total = direct.add(&lq.mul(&tp, ulp));

    // sum_{n>=y} p(n) n^-s T_q(n), T_q(n) = sum_e c_{n mod 4, e} n^-e
    let mean = q.mean_sum();
    if !mean.is_zero() {
        // integral term: mean / (4(t-1)) n^(1-t)
        let c = &mean / rint(4 * (t as i64 - 1));
        let psi = p.scale(&c);
        total = total.sub(&periodic_tail(&psi, s + t - 1, y, None, ctx)?);
    }
    let target = ctx.internal_target().log10();
    let pmax = log10_rational(&p.max_abs());
    let qabs = log10_rational(&q.abs_sum());
    let mut rising = BigInt::one();
    let mut rising_log10 = 0.0f64;
    let mut neg4 = BigInt::one();
    let mut k = 1usize;
    let mut prev = f64::INFINITY;
    loop {
        let m = k - 1;
        if m > 0 {
            let f = t as i64 + m as i64 - 1;
            rising *= BigInt::from(f);
            rising_log10 += (f as f64).log10();
            neg4 *= BigInt::from(-4);
        }
        let scale = Rational::new(&neg4 * &rising, factorial(k as u64));
        let mut psi_tab = [Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()];
        for (r, slot) in psi_tab.iter_mut().enumerate() {
            let pc = p.at(r as u64);
            if pc.is_zero() {
                continue;
            }
            let sb = shifted_bernoulli_sum(q, r as u64 + 4, k);
            *slot = -(pc * sb * &scale);
        }
        // psi_tab is indexed by n mod 4 = 0, 1, 2, 3
        let [t0, t1, t2, t3] = psi_tab;
        let psi = Periodic::from_table([t1, t2, t3, t0]);
        if !psi.is_zero() {
            let e = t + k as u32 - 1;
            total = total.sub(&periodic_tail(&psi, s + e, y, None, ctx)?);
        }
        if k >= 2 {
            // sum_{n>=y} |p| n^-s |R_k(n)|, |R_k(n)| <= sum|q| 4/(2pi)^k 4^(k-1) (t)_(k-1) n^(1-t-k)
            let kf = k as f64;
            let alpha = (s + t) as f64 + kf - 1.0;
            let bound = pmax + qabs + 4f64.log10() - kf * (2.0 * std::f64::consts::PI).log10()
                + (kf - 1.0) * 4f64.log10()
                + rising_log10
                + (1.0 - alpha) * ((y - 1) as f64).log10()
                - (alpha - 1.0).log10();
            if bound <= target {
                total.err = total.err.add(ErrBound::from_log10(bound));
                return Ok(total);
            }
            if bound > prev && k > 8 {
                return Err(crate::error::Error::Precision(format!(
                    "inner tail expansion stalls at 1e{bound:.1} for ({s}, {t})"
                )));
            }
            prev = bound;
        }
        k += 1;
    }
}

/// `sum_{n>=1} p(n) n^-s H_(n-1)`.
fn harmonic_weighted(p: &Periodic, s: u32, ctx: &EvalContext) -> Result<Approx> {
    if s < 2 {
        return domain("harmonic-weighted series needs s >= 2");
    }
    let (y, k2) = require_cutoff(ctx);
    let bits = ctx.bits();
    let ulp = ctx.ulp();
    let mut h = MPReal::zero(bits);
    let mut acc = MPReal::zero(bits);
    for n in 1..y {
        let pc = p.at(n);
        if !pc.is_zero() && !h.is_zero() {
            acc = &acc + &(&h * &MPReal::inv_pow(n, s, bits)).mul_rat(pc);
        }
        h = &h + &MPReal::inv_pow(n, 1, bits);
    }
    let pmax = log10_rational(&p.max_abs());
    let mut total = Approx::new(acc, ulp.scale(3.0 * y as f64).add(ulp.scale(y as f64 * y as f64)));

    let log_y = log_pow2(k2, ctx);
    total = total.add(&periodic_tail(p, s, y, Some(&log_y), ctx)?);
    let gamma = euler_gamma_num(ctx);
    total = total.add(&gamma.mul(&periodic_tail(p, s, y, None, ctx)?, ulp));
    total = total.sub(&periodic_tail(p, s + 1, y, None, ctx)?.mul_rat(&rat(1, 2), ulp));

    let target = ctx.internal_target().log10();
    let mut j = 1usize;
    loop {
        let coef = bernoulli(2 * j) / rint(2 * j as i64);
        total = total.sub(&periodic_tail(p, s + 2 * j as u32, y, None, ctx)?.mul_rat(&coef, ulp));
        // first omitted term bounds the digamma remainder
        let next = bernoulli(2 * j + 2) / rint(2 * j as i64 + 2);
        let alpha = s as f64 + 2.0 * j as f64 + 2.0;
        let bound = pmax + log10_rational(&next) + (1.0 - alpha) * ((y - 1) as f64).log10() - (alpha - 1.0).log10();
        if bound <= target {
            total.err = total.err.add(ErrBound::from_log10(bound));
            return Ok(total);
        }
        j += 1;
        if j > 400 {
            return Err(crate::error::Error::Precision("harmonic expansion did not converge".into()));
        }
    }
}

/// `zeta(a, b) = sum_{n>m>=1} n^-a m^-b`.
pub fn dzeta_num(a: i64, b: i64, ctx: &EvalContext) -> Result<Approx> {
    if a < 2 || b < 1 {
        return domain(format!("zeta({a},{b}) needs a >= 2 and b >= 1"));
    }
    let one = CharId::One.periodic();
    periodic_double_sum(&one, &one, a as u32, b as u32, ctx)?.ensure(ctx, "double zeta")
}

/// Character double sum `[p,q](s,t)`.
pub fn char_dzeta_num(p: CharId, q: CharId, s: i64, t: i64, ctx: &EvalContext) -> Result<Approx> {
    if t < 1 || s < 1 {
        return domain(format!("[{p},{q}]({s},{t}) diverges"));
    }
    if s == 1 && (t < 2 || matches!(p, CharId::One | CharId::TwoA)) {
        return domain(format!("[{p},{q}]({s},{t}) diverges"));
    }
    periodic_double_sum(&p.periodic(), &q.periodic(), s as u32, t as u32, ctx)?.ensure(ctx, "character sum")
}

/// Witten double sum `W(r,s,t)`, routed through the exact recursion.
pub fn witten_num(r: i64, s: i64, t: i64, ctx: &EvalContext) -> Result<Approx> {
    let red = crate::reductions::witten_reduce(r, s, t)?;
    let mut total = crate::symbolic::expr_num(&red.rest, ctx)?;
    for ((a, b), c) in &red.dz {
        let v = dzeta_num(*a as i64, *b as i64, ctx)?;
        total = total.add(&v.mul_rat(c, ctx.ulp()));
    }
    total.ensure(ctx, "Witten sum")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum HarmonicKind {
    /// `sum_{n>=0} H_n / (2n+1)^s`
    OddDenom,
    /// `sum_{n>=1} H_(2n) / n^(2s)`
    HalfIndex,
}

/// Harmonic-number sums expressed as character double sums:
/// `sum H_n/(2n+1)^s = 2 [2a, even](s, 1)` and
/// `sum H_2n/n^2s = 4^s ([even, 1](2s, 1) + 2^(-2s-1) zeta(2s+1))`.
pub fn harmonic_sum_num(kind: HarmonicKind, s: i64, ctx: &EvalContext) -> Result<Approx> {
    let ulp = ctx.ulp();
    match kind {
        HarmonicKind::OddDenom => {
            if s < 2 {
                return domain(format!("sum H_n/(2n+1)^{s} diverges"));
            }
            let v = periodic_double_sum(&CharId::TwoA.periodic(), &Periodic::even(), s as u32, 1, ctx)?;
            v.mul_rat(&rint(2), ulp).ensure(ctx, "harmonic sum")
        }
        HarmonicKind::HalfIndex => {
            if s < 1 {
                return domain(format!("sum H_2n/n^(2*{s}) diverges"));
            }
            let s2 = 2 * s as u32;
            let d = periodic_double_sum(&Periodic::even(), &CharId::One.periodic(), s2, 1, ctx)?;
            let z = zeta_num(s2 as i64 + 1, ctx)?.mul_rat(&Rational::new(BigInt::one(), BigInt::one() << (s2 + 1)), ulp);
            let four_s = Rational::from_integer(BigInt::one() << s2);
            d.add(&z).mul_rat(&four_s, ulp).ensure(ctx, "harmonic sum")
        }
    }
}
