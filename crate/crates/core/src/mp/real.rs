use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::Rational;

/// Binary fixed-point real: the value is `mant * 2^-bits`.
///
/// All operands of a binary operation must share `bits`. Multiplication and
/// division round to nearest, so every operation is within one unit in the
/// last place of the exact result.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPReal {
    mant: BigInt,
    bits: u32,
}

fn round_shift(x: BigInt, shift: u32) -> BigInt {
    if shift == 0 {
        return x;
    }
    (x + (BigInt::one() << (shift - 1))) >> shift
}

fn round_div(num: BigInt, den: &BigInt) -> BigInt {
    let (num, den) = if den.is_negative() { (-num, -den.clone()) } else { (num, den.clone()) };
    // floor((2 num + den) / (2 den))
    let two = BigInt::from(2);
    (num * &two + &den).div_floor(&(den * &two))
}

impl MPReal {
    pub fn zero(bits: u32) -> Self {
        MPReal { mant: BigInt::zero(), bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn from_int(n: i64, bits: u32) -> Self {
        MPReal { mant: BigInt::from(n) << bits, bits }
    }

    pub fn from_rational(r: &Rational, bits: u32) -> Self {
        MPReal { mant: round_div(r.numer().clone() << bits, r.denom()), bits }
    }

    /// `1 / n^s` rounded to nearest.
    pub fn inv_pow(n: u64, s: u32, bits: u32) -> Self {
        let den = BigInt::from(n).pow(s);
        MPReal { mant: round_div(BigInt::one() << bits, &den), bits }
    }

    /// Nearest representable value to an `f64`; used only for oracle output.
    pub fn from_f64(x: f64, bits: u32) -> Self {
        if x == 0.0 || !x.is_finite() {
            return Self::zero(bits);
        }
        let (mant, exp, sign) = decode_f64(x);
        let mut m = BigInt::from(mant);
        let shift = exp + bits as i64;
        m = if shift >= 0 { m << shift as usize } else { round_shift(m, (-shift) as u32) };
        MPReal { mant: if sign < 0 { -m } else { m }, bits }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        MPReal { mant: self.mant.abs(), bits: self.bits }
    }

    pub fn mul_rat(&self, r: &Rational) -> Self {
        MPReal { mant: round_div(&self.mant * r.numer(), r.denom()), bits: self.bits }
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        MPReal { mant: &self.mant * n, bits: self.bits }
    }

    pub fn div(&self, other: &MPReal) -> Self {
        assert_eq!(self.bits, other.bits, "precision mismatch");
        MPReal { mant: round_div(self.mant.clone() << self.bits, &other.mant), bits: self.bits }
    }

    pub fn div_int(&self, n: &BigInt) -> Self {
        MPReal { mant: round_div(self.mant.clone(), n), bits: self.bits }
    }

    pub fn powi(&self, e: u32) -> Self {
        let mut acc = MPReal::from_int(1, self.bits);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Same value re-expressed with a different number of fraction bits.
    pub fn with_bits(&self, bits: u32) -> Self {
        let mant = match bits.cmp(&self.bits) {
            Ordering::Equal => self.mant.clone(),
            Ordering::Greater => self.mant.clone() << (bits - self.bits),
            Ordering::Less => round_shift(self.mant.clone(), self.bits - bits),
        };
        MPReal { mant, bits }
    }

    pub fn to_f64(&self) -> f64 {
        let nbits = self.mant.bits() as i64;
        if nbits == 0 {
            return 0.0;
        }
        let drop = (nbits - 60).max(0);
        let top = (&self.mant >> drop as usize).to_f64().unwrap_or(0.0);
        top * 2f64.powi((drop - self.bits as i64) as i32)
    }

    /// `log10 |x|` (−inf for zero); accurate to f64 even for tiny values.
    pub fn log10_abs(&self) -> f64 {
        let nbits = self.mant.bits() as i64;
        if nbits == 0 {
            return f64::NEG_INFINITY;
        }
        let drop = (nbits - 60).max(0);
        let top = (self.mant.abs() >> drop as usize).to_f64().unwrap_or(1.0);
        top.log10() + (drop - self.bits as i64) as f64 * std::f64::consts::LOG10_2
    }

    /// Scientific notation with `sig` significant digits, e.g. `1.2020569e0`.
    pub fn to_sci(&self, sig: usize) -> String {
        if self.mant.is_zero() {
            return "0".to_string();
        }
        let sig = sig.max(1);
        let mut e = self.log10_abs().floor() as i64;
        for _ in 0..3 {
            let digits = self.scaled_digits(sig as i64 - 1 - e);
            let len = digits.magnitude().to_string().len();
            if len == sig {
                return format_sci(&digits, e);
            }
            e += len as i64 - sig as i64;
        }
        let digits = self.scaled_digits(sig as i64 - 1 - e);
        format_sci(&digits, e)
    }

    fn scaled_digits(&self, pow10: i64) -> BigInt {
        let ten = BigInt::from(10);
        if pow10 >= 0 {
            round_shift(&self.mant * ten.pow(pow10 as u32), self.bits)
        } else {
            round_div(self.mant.clone(), &(ten.pow((-pow10) as u32) << self.bits))
        }
    }

    pub fn cmp_value(&self, other: &MPReal) -> Ordering {
        assert_eq!(self.bits, other.bits, "precision mismatch");
        self.mant.cmp(&other.mant)
    }
}

fn format_sci(digits: &BigInt, e: i64) -> String {
    let neg = digits.sign() == Sign::Minus;
    let s = digits.magnitude().to_string();
    let (head, tail) = s.split_at(1);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(head);
    if !tail.is_empty() {
        out.push('.');
        out.push_str(tail);
    }
    out.push_str(&format!("e{e}"));
    out
}

fn decode_f64(x: f64) -> (u64, i64, i8) {
    let bits = x.to_bits();
    let sign: i8 = if bits >> 63 == 0 { 1 } else { -1 };
    let exponent = ((bits >> 52) & 0x7ff) as i64;
    let mantissa = if exponent == 0 {
        (bits & 0xfffffffffffff) << 1
    } else {
        (bits & 0xfffffffffffff) | 0x10000000000000
    };
    (mantissa, exponent - 1075, sign)
}

impl fmt::Display for MPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.bits as f64 * std::f64::consts::LOG10_2) as usize;
        write!(f, "{}", self.to_sci(digits.clamp(1, 60)))
    }
}

impl Add for &MPReal {
    type Output = MPReal;
    fn add(self, rhs: &MPReal) -> MPReal {
        assert_eq!(self.bits, rhs.bits, "precision mismatch");
        MPReal { mant: &self.mant + &rhs.mant, bits: self.bits }
    }
}

impl Sub for &MPReal {
    type Output = MPReal;
    fn sub(self, rhs: &MPReal) -> MPReal {
        assert_eq!(self.bits, rhs.bits, "precision mismatch");
        MPReal { mant: &self.mant - &rhs.mant, bits: self.bits }
    }
}

impl Mul for &MPReal {
    type Output = MPReal;
    fn mul(self, rhs: &MPReal) -> MPReal {
        assert_eq!(self.bits, rhs.bits, "precision mismatch");
        MPReal { mant: round_shift(&self.mant * &rhs.mant, self.bits), bits: self.bits }
    }
}

impl Neg for &MPReal {
    type Output = MPReal;
    fn neg(self) -> MPReal {
        MPReal { mant: -&self.mant, bits: self.bits }
    }
}

impl Neg for MPReal {
    type Output = MPReal;
    fn neg(self) -> MPReal {
        MPReal { mant: -self.mant, bits: self.bits }
    }
}
