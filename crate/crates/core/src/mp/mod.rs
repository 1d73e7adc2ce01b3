//! Multiprecision evaluation with an explicit absolute-error contract.
//!
//! Every public evaluator returns an [`Approx`]: a fixed-point value and a
//! rigorous bound on its distance from the true value. Evaluators fail with
//! [`Error::Precision`] instead of returning a value whose bound exceeds
//! `10^-P`.

mod bound;
mod cache;
mod character;
mod constants;
pub mod oracle;
mod real;
mod series;
mod tail;

pub use bound::ErrBound;
pub use character::{CharId, Periodic};
pub use constants::{euler_gamma_num, generator_num, log2_num, pi_num};
pub use real::MPReal;
pub use series::{
    char_dzeta_num, dzeta_num, harmonic_sum_num, l_num, periodic_double_sum, periodic_l_num,
    periodic_tail_num, witten_num, zeta_num, HarmonicKind,
};
pub use tail::periodic_tail;

use crate::error::{Error, Result};

/// Target decimal digits `P` plus guard digits; working precision is
/// `P + guard` decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EvalContext {
    pub digits: u32,
    pub guard: u32,
}

impl EvalContext {
    pub const DEFAULT_GUARD: u32 = 10;

    pub fn new(digits: u32) -> Result<Self> {
        if digits < 10 {
            return Err(Error::Domain(format!("precision must be at least 10 digits, got {digits}")));
        }
        if digits > 1000 {
            return Err(Error::Domain(format!("precision above 1000 digits is unsupported, got {digits}")));
        }
        Ok(EvalContext { digits, guard: Self::DEFAULT_GUARD })
    }

    /// Fraction bits of the fixed-point representation.
    pub fn bits(&self) -> u32 {
        ((self.digits + self.guard) as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16
    }

    /// The advertised error: `10^-P`.
    pub fn target(&self) -> ErrBound {
        ErrBound::pow10(-(self.digits as f64))
    }

    /// Internal truncation target: `10^-(P+g)`.
    pub fn internal_target(&self) -> ErrBound {
        ErrBound::pow10(-((self.digits + self.guard) as f64))
    }

    pub fn ulp(&self) -> ErrBound {
        ErrBound::from_log10(-(self.bits() as f64) * std::f64::consts::LOG10_2)
    }

    /// Summation cutoff for direct partial sums: a power of two of at least
    /// `10 (P + g)`.
    pub fn cutoff(&self) -> u64 {
        let want = 10 * (self.digits + self.guard) as u64;
        want.next_power_of_two().max(64)
    }

    pub fn zero(&self) -> MPReal {
        MPReal::zero(self.bits())
    }
}

/// A value with a rigorous absolute error bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Approx {
    pub value: MPReal,
    pub err: ErrBound,
}

impl Approx {
    pub fn exact(value: MPReal) -> Self {
        Approx { value, err: ErrBound::ZERO }
    }

    pub fn new(value: MPReal, err: ErrBound) -> Self {
        Approx { value, err }
    }

    pub fn add(&self, other: &Approx) -> Approx {
        Approx { value: &self.value + &other.value, err: self.err.add(other.err) }
    }

    pub fn sub(&self, other: &Approx) -> Approx {
        Approx { value: &self.value - &other.value, err: self.err.add(other.err) }
    }

    pub fn neg(&self) -> Approx {
        Approx { value: -&self.value, err: self.err }
    }

    /// Product with the first-order and cross error terms plus one rounding.
    pub fn mul(&self, other: &Approx, ulp: ErrBound) -> Approx {
        let a = ErrBound::from_log10(self.value.log10_abs());
        let b = ErrBound::from_log10(other.value.log10_abs());
        let err = a.mul(other.err).add(b.mul(self.err)).add(self.err.mul(other.err)).add(ulp);
        Approx { value: &self.value * &other.value, err }
    }

    pub fn mul_rat(&self, r: &crate::exact::Rational, ulp: ErrBound) -> Approx {
        let scale = ErrBound::of_rational(r);
        Approx { value: self.value.mul_rat(r), err: self.err.mul(scale).add(ulp) }
    }

    /// Quotient; fails when the divisor interval contains zero.
    pub fn div(&self, other: &Approx, ulp: ErrBound) -> Result<Approx> {
        let lb = other.value.log10_abs();
        let low = bound::sub_log10(lb, other.err.log10());
        if !low.is_finite() {
            return Err(Error::Domain("division by a value indistinguishable from zero".into()));
        }
        // |a/b - a'/b'| <= (|a| eb + |b| ea) / (|b| (|b| - eb))
        let a = ErrBound::from_log10(self.value.log10_abs());
        let num = a.mul(other.err).add(ErrBound::from_log10(lb).mul(self.err));
        let err = ErrBound::from_log10(num.log10() - lb - low).add(ulp);
        Ok(Approx { value: self.value.div(&other.value), err })
    }

    /// Fails with a precision error when the bound exceeds `10^-P`.
    pub fn ensure(self, ctx: &EvalContext, what: &str) -> Result<Approx> {
        if self.err.le(ctx.target()) {
            Ok(self)
        } else {
            Err(Error::Precision(format!(
                "{what}: accumulated bound 1e{:.1} exceeds 1e-{}",
                self.err.log10(),
                ctx.digits
            )))
        }
    }
}
