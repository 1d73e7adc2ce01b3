//! Exact arithmetic over polynomials in the constants `pi`, `log 2`,
//! odd zeta values and `Li_4(1/2)`, with rational coefficients.
//!
//! The generators are treated as algebraically independent, so two
//! expressions are equal exactly when their coefficient maps are equal.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, not_reducible, Error, Result};
use crate::exact::{bernoulli, euler_number, factorial, rat, rint, zeta_nonpositive, Rational};
use crate::mp::{generator_num, Approx, CharId, EvalContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstGenerator {
    Pi,
    Log2,
    /// `zeta(k)` for odd `k >= 3`.
    ZetaOdd(u32),
    Li4Half,
}

impl ConstGenerator {
    pub fn zeta_odd(k: u32) -> Result<Self> {
        if k < 3 || k % 2 == 0 {
            return domain(format!("z{k} is not an odd zeta generator"));
        }
        Ok(ConstGenerator::ZetaOdd(k))
    }

    /// Weight used for homogeneity checks (`li4h` has weight 4).
    pub fn weight(&self) -> u32 {
        match self {
            ConstGenerator::Pi | ConstGenerator::Log2 => 1,
            ConstGenerator::ZetaOdd(k) => *k,
            ConstGenerator::Li4Half => 4,
        }
    }
}

impl fmt::Display for ConstGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstGenerator::Pi => f.write_str("pi"),
            ConstGenerator::Log2 => f.write_str("log2"),
            ConstGenerator::ZetaOdd(k) => write!(f, "z{k}"),
            ConstGenerator::Li4Half => f.write_str("li4h"),
        }
    }
}

/// Product of generator powers, sorted by generator; the empty product is 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(ConstGenerator, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn gen(g: ConstGenerator, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(g, exp)])
        }
    }

    pub fn factors(&self) -> &[(ConstGenerator, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(g, e)| g.weight() * e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut map: BTreeMap<ConstGenerator, u32> = self.0.iter().cloned().collect();
        for (g, e) in &other.0 {
            *map.entry(*g).or_insert(0) += e;
        }
        Monomial(map.into_iter().collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut map: BTreeMap<ConstGenerator, u32> = self.0.iter().cloned().collect();
        for (g, e) in &other.0 {
            let have = map.get_mut(g)?;
            if *have < *e {
                return None;
            }
            *have -= e;
            if *have == 0 {
                map.remove(g);
            }
        }
        Some(Monomial(map.into_iter().collect()))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (g, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Rational linear combination of monomials, zero coefficients removed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ConstExpr(BTreeMap<Monomial, Rational>);

impl ConstExpr {
    pub fn zero() -> Self {
        ConstExpr(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn rational(r: Rational) -> Self {
        Self::term(r, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Self::rational(rint(n))
    }

    pub fn gen(g: ConstGenerator) -> Self {
        Self::term(Rational::one(), Monomial::gen(g, 1))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut map = BTreeMap::new();
        if !c.is_zero() {
            map.insert(m, c);
        }
        ConstExpr(map)
    }

    pub fn pi_pow(c: Rational, e: u32) -> Self {
        Self::term(c, Monomial::gen(ConstGenerator::Pi, e))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.0.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The value when the expression is a pure rational.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.0.len() {
            0 => Some(Rational::zero()),
            1 => self.0.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(m.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&m);
        }
    }

    pub fn scale(&self, r: &Rational) -> ConstExpr {
        if r.is_zero() {
            return ConstExpr::zero();
        }
        ConstExpr(self.0.iter().map(|(m, c)| (m.clone(), c * r)).collect())
    }

    pub fn pow(&self, e: u32) -> ConstExpr {
        let mut acc = ConstExpr::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient. The divisor must be a single term, and when it is not
    /// a pure rational every monomial of `self` must be divisible by it.
    pub fn div(&self, other: &ConstExpr) -> Result<ConstExpr> {
        if other.0.len() != 1 {
            if other.is_zero() {
                return domain("division by zero");
            }
            return not_reducible("division by a sum of constants");
        }
        let (dm, dc) = other.0.iter().next().expect("one term");
        let mut out = BTreeMap::new();
        for (m, c) in &self.0 {
            let q = m.div(dm).ok_or_else(|| Error::NotReducible(format!("{m} is not divisible by {dm}")))?;
            out.insert(q, c / dc);
        }
        Ok(ConstExpr(out))
    }

    /// Largest monomial degree (weight); `None` for zero.
    pub fn max_degree(&self) -> Option<u32> {
        self.0.keys().map(Monomial::degree).max()
    }
}

impl Add for &ConstExpr {
    type Output = ConstExpr;
    fn add(self, rhs: &ConstExpr) -> ConstExpr {
        let mut out = self.clone();
        for (m, c) in &rhs.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &ConstExpr {
    type Output = ConstExpr;
    fn sub(self, rhs: &ConstExpr) -> ConstExpr {
        let mut out = self.clone();
        for (m, c) in &rhs.0 {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &ConstExpr {
    type Output = ConstExpr;
    fn mul(self, rhs: &ConstExpr) -> ConstExpr {
        let mut out = ConstExpr::zero();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &rhs.0 {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &ConstExpr {
    type Output = ConstExpr;
    fn neg(self) -> ConstExpr {
        ConstExpr(self.0.iter().map(|(m, c)| (m.clone(), -c.clone())).collect())
    }
}

impl fmt::Display for ConstExpr {
    /// Canonical text, e.g. `1/2*pi^2*z3 - 11/2*z5`; parses back through the
    /// corpus expression grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.0.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

/// `zeta(s)`: a rational multiple of `pi^s` for even `s`, the generator
/// `z<s>` for odd `s`.
pub fn zeta_sym(s: i64) -> Result<ConstExpr> {
    if s <= 0 {
        return Ok(ConstExpr::rational(zeta_nonpositive(s)));
    }
    if s == 1 {
        return domain("zeta(1) diverges");
    }
    if s % 2 == 1 {
        return Ok(ConstExpr::gen(ConstGenerator::ZetaOdd(s as u32)));
    }
    // 2 (2n)! zeta(2n) = (-1)^(n+1) (2 pi)^(2n) B_2n
    let n = s / 2;
    let mut c = bernoulli(s as usize) * Rational::from_integer(BigInt::one() << s as usize)
        / (Rational::from_integer(factorial(s as u64)) * rint(2));
    if n % 2 == 0 {
        c = -c;
    }
    Ok(ConstExpr::pi_pow(c, s as u32))
}

/// Dirichlet beta at odd `s`: `2 (2n)! beta(2n+1) = (-1)^n (pi/2)^(2n+1) E_2n`.
pub fn beta_sym(s: i64) -> Result<ConstExpr> {
    if s < 1 {
        return domain(format!("beta({s}) is outside the supported range"));
    }
    if s % 2 == 0 {
        return not_reducible(format!("beta({s}) at even argument"));
    }
    let n = (s - 1) / 2;
    let mut c = Rational::from_integer(euler_number(2 * n as usize))
        / (Rational::from_integer(factorial(2 * n as u64) * (BigInt::one() << (s as usize + 1))));
    if n % 2 == 1 {
        c = -c;
    }
    Ok(ConstExpr::pi_pow(c, s as u32))
}

/// `L_p(s)` in closed form: `zeta`, `lambda = (1-2^-s) zeta`,
/// `eta = (1-2^(1-s)) zeta` (`eta(1) = log 2`) and `beta` at odd `s`.
#[allow(non_snake_case)]
pub fn L_sym(p: CharId, s: i64) -> Result<ConstExpr> {
    match p {
        CharId::One => zeta_sym(s),
        CharId::TwoA => {
            if s < 2 {
                return domain(format!("lambda({s}) diverges"));
            }
            Ok(zeta_sym(s)?.scale(&(rint(1) - rat(1, 1) / Rational::from_integer(BigInt::one() << s as usize))))
        }
        CharId::TwoB => {
            if s < 1 {
                return domain(format!("eta({s}) is outside the supported range"));
            }
            if s == 1 {
                return Ok(ConstExpr::gen(ConstGenerator::Log2));
            }
            let f = rint(1) - Rational::new(BigInt::from(2), BigInt::one() << s as usize);
            Ok(zeta_sym(s)?.scale(&f))
        }
        CharId::M4 => beta_sym(s),
    }
}

/// Numeric value of an expression.
pub fn expr_num(e: &ConstExpr, ctx: &EvalContext) -> Result<Approx> {
    let ulp = ctx.ulp();
    let mut total = Approx::exact(ctx.zero());
    for (m, c) in e.terms() {
        let mut prod: Option<Approx> = None;
        for (g, k) in m.factors() {
            let v = generator_num(g, ctx)?;
            for _ in 0..*k {
                prod = Some(match prod {
                    None => v.clone(),
                    Some(p) => p.mul(&v, ulp),
                });
            }
        }
        let term = match prod {
            None => Approx::new(crate::mp::MPReal::from_rational(c, ctx.bits()), ulp),
            Some(p) => p.mul_rat(c, ulp),
        };
        total = total.add(&term);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_zeta_closed_forms() {
        assert_eq!(zeta_sym(2).unwrap(), ConstExpr::pi_pow(rat(1, 6), 2));
        assert_eq!(zeta_sym(4).unwrap(), ConstExpr::pi_pow(rat(1, 90), 4));
        assert_eq!(zeta_sym(6).unwrap(), ConstExpr::pi_pow(rat(1, 945), 6));
        assert_eq!(zeta_sym(5).unwrap(), ConstExpr::gen(ConstGenerator::ZetaOdd(5)));
    }

    #[test]
    fn beta_closed_forms() {
        assert_eq!(beta_sym(1).unwrap(), ConstExpr::pi_pow(rat(1, 4), 1));
        assert_eq!(beta_sym(3).unwrap(), ConstExpr::pi_pow(rat(1, 32), 3));
        assert_eq!(beta_sym(5).unwrap(), ConstExpr::pi_pow(rat(5, 1536), 5));
        assert!(matches!(beta_sym(2), Err(Error::NotReducible(_))));
    }

    #[test]
    fn character_series() {
        let z3 = ConstExpr::gen(ConstGenerator::ZetaOdd(3));
        assert_eq!(L_sym(CharId::TwoB, 3).unwrap(), z3.scale(&rat(3, 4)));
        assert_eq!(L_sym(CharId::TwoA, 2).unwrap(), ConstExpr::pi_pow(rat(1, 8), 2));
        assert!(matches!(L_sym(CharId::M4, 4), Err(Error::NotReducible(_))));
    }

    #[test]
    fn rendering() {
        let z3 = ConstExpr::gen(ConstGenerator::ZetaOdd(3));
        let z5 = ConstExpr::gen(ConstGenerator::ZetaOdd(5));
        let e = &(&zeta_sym(2).unwrap() * &z3).scale(&rint(3)) - &z5.scale(&rat(11, 2));
        assert_eq!(e.to_string(), "1/2*pi^2*z3 - 11/2*z5");
        assert_eq!(ConstExpr::zero().to_string(), "0");
        assert_eq!(ConstExpr::int(-3).to_string(), "-3");
    }

    #[test]
    fn exact_division() {
        let pi2 = ConstExpr::pi_pow(rint(1), 2);
        let e = &ConstExpr::pi_pow(rint(3), 4) + &(&pi2 * &ConstExpr::gen(ConstGenerator::Log2));
        let q = e.div(&pi2.scale(&rint(2))).unwrap();
        assert_eq!(q.to_string(), "3/2*pi^2 + 1/2*log2");
        assert!(e.div(&ConstExpr::gen(ConstGenerator::Li4Half)).is_err());
        assert!(e.div(&(&pi2 + &ConstExpr::one())).is_err());
    }

    #[test]
    fn numeric_value_of_expressions() {
        let ctx = EvalContext::new(40).unwrap();
        let e = ConstExpr::pi_pow(rat(1, 120), 4);
        let v = expr_num(&e, &ctx).unwrap();
        let d = crate::mp::dzeta_num(2, 2, &ctx).unwrap();
        assert!(v.sub(&d).value.abs().log10_abs() < -38.0);
        assert!(expr_num(&ConstExpr::zero(), &ctx).unwrap().value.is_zero());
    }
}
