use serde::{Deserialize, Serialize};

use crate::exact::Rational;

/// Non-negative error bound stored as `log10`, so bounds far below the
/// f64 range (e.g. `10^-900`) stay representable.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct ErrBound(f64);

/// `log10(10^a - 10^b)` for `a >= b`; −inf when the difference vanishes.
pub(crate) fn sub_log10(a: f64, b: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return a;
    }
    if b >= a {
        return f64::NEG_INFINITY;
    }
    a + (1.0 - 10f64.powf(b - a)).log10()
}

impl ErrBound {
    pub const ZERO: ErrBound = ErrBound(f64::NEG_INFINITY);

    pub fn from_log10(l: f64) -> Self {
        ErrBound(l)
    }

    pub fn pow10(e: f64) -> Self {
        ErrBound(e)
    }

    pub fn from_f64(x: f64) -> Self {
        ErrBound(x.abs().log10())
    }

    pub fn of_rational(r: &Rational) -> Self {
        use num_traits::Zero;
        if r.is_zero() {
            return Self::ZERO;
        }
        let n = r.numer().bits() as f64;
        let d = r.denom().bits() as f64;
        // within a factor 2 either way; round up
        ErrBound((n - d + 1.0) * std::f64::consts::LOG10_2)
    }

    pub fn log10(&self) -> f64 {
        self.0
    }

    pub fn add(self, other: ErrBound) -> ErrBound {
        let (hi, lo) = if self.0 >= other.0 { (self.0, other.0) } else { (other.0, self.0) };
        if lo == f64::NEG_INFINITY {
            return ErrBound(hi);
        }
        // slight upward nudge covers the f64 rounding of the log itself
        ErrBound(hi + (1.0 + 10f64.powf(lo - hi)).log10() + 1e-12)
    }

    pub fn mul(self, other: ErrBound) -> ErrBound {
        ErrBound(self.0 + other.0)
    }

    pub fn scale(self, factor: f64) -> ErrBound {
        ErrBound(self.0 + factor.abs().log10())
    }

    pub fn le(&self, other: ErrBound) -> bool {
        self.0 <= other.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_domain_arithmetic() {
        let a = ErrBound::from_f64(1e-50);
        let b = ErrBound::from_f64(3e-50);
        assert!((a.add(b).log10() - (4e-50f64).log10()).abs() < 1e-9);
        assert_eq!(ErrBound::ZERO.add(a), a);
        assert!((a.mul(b).log10() + 100.0 - 3f64.log10()).abs() < 1e-9);
        assert!(ErrBound::pow10(-900.0).le(ErrBound::pow10(-800.0)));
        assert!((sub_log10(1.0, 0.0) - 0.9f64.log10() - 1.0).abs() < 1e-12);
    }
}
