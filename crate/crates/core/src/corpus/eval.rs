//! Numeric and exact evaluation of corpus expressions.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ast::{BinOp, Expr, Func};
use crate::error::{domain, not_reducible, Error, Result};
use crate::exact::{
    as_integer, bernoulli, binomial, euler_number, factorial, generalized_harmonic, harmonic, hyp2f1_special,
    rat_pow, Rational,
};
use crate::mp::{
    char_dzeta_num, dzeta_num, generator_num, harmonic_sum_num, l_num, witten_num, zeta_num, Approx, CharId,
    EvalContext, HarmonicKind, MPReal,
};
use crate::reductions::{Object, ReductionTable};
use crate::symbolic::{zeta_sym, ConstExpr, L_sym};

pub type Bindings = BTreeMap<String, i64>;

/// Result of numeric evaluation: exact when no transcendental entered.
#[derive(Clone, Debug)]
pub enum Value {
    Exact(Rational),
    Real(Approx),
}

impl Value {
    pub fn to_approx(&self, ctx: &EvalContext) -> Approx {
        match self {
            Value::Real(a) => a.clone(),
            Value::Exact(r) => {
                let v = MPReal::from_rational(r, ctx.bits());
                if r.denom().is_one() {
                    Approx::exact(v)
                } else {
                    Approx::new(v, ctx.ulp())
                }
            }
        }
    }

    fn integer(&self, what: &str) -> Result<i64> {
        match self {
            Value::Exact(r) => as_integer(r)
                .and_then(|n| n.to_i64())
                .ok_or_else(|| Error::Domain(format!("{what} must be an integer, got {r}"))),
            Value::Real(_) => domain(format!("{what} must be an exact integer")),
        }
    }
}

fn int_arg(e: &Rational, what: &str) -> Result<i64> {
    as_integer(e)
        .and_then(|n| n.to_i64())
        .ok_or_else(|| Error::Domain(format!("{what} must be an integer, got {e}")))
}

const MAX_SUM_TERMS: i64 = 1_000_000;

/// Walks an expression with integer bindings, counting evaluated nodes.
pub struct Evaluator<'a> {
    pub ctx: &'a EvalContext,
    pub nodes: usize,
}

impl<'a> Evaluator<'a> {
    pub fn new(ctx: &'a EvalContext) -> Self {
        Evaluator { ctx, nodes: 0 }
    }

    fn lookup(env: &Bindings, v: &str) -> Result<i64> {
        env.get(v).copied().ok_or_else(|| Error::UnboundSymbol(v.to_string()))
    }

    pub fn eval(&mut self, e: &Expr, env: &Bindings) -> Result<Value> {
        self.nodes += 1;
        let ctx = self.ctx;
        let ulp = ctx.ulp();
        Ok(match e {
            Expr::Int(n) => Value::Exact(Rational::from_integer(n.clone())),
            Expr::Var(v) => Value::Exact(Rational::from_integer(BigInt::from(Self::lookup(env, v)?))),
            Expr::Const(g) => Value::Real(generator_num(g, ctx)?),
            Expr::Neg(a) => match self.eval(a, env)? {
                Value::Exact(r) => Value::Exact(-r),
                Value::Real(x) => Value::Real(x.neg()),
            },
            Expr::Bin(op, a, b) => {
                let x = self.eval(a, env)?;
                let y = self.eval(b, env)?;
                match (op, x, y) {
                    (BinOp::Add, Value::Exact(p), Value::Exact(q)) => Value::Exact(p + q),
                    (BinOp::Sub, Value::Exact(p), Value::Exact(q)) => Value::Exact(p - q),
                    (BinOp::Mul, Value::Exact(p), Value::Exact(q)) => Value::Exact(p * q),
                    (BinOp::Div, Value::Exact(p), Value::Exact(q)) => {
                        if q.is_zero() {
                            return domain("division by zero");
                        }
                        Value::Exact(p / q)
                    }
                    (BinOp::Pow, x, y) => {
                        let k = y.integer("exponent")?;
                        self.pow(x, k)?
                    }
                    (BinOp::Mul, Value::Exact(p), Value::Real(r)) | (BinOp::Mul, Value::Real(r), Value::Exact(p)) => {
                        Value::Real(r.mul_rat(&p, ulp))
                    }
                    (BinOp::Div, Value::Real(r), Value::Exact(q)) => {
                        if q.is_zero() {
                            return domain("division by zero");
                        }
                        Value::Real(r.mul_rat(&q.recip(), ulp))
                    }
                    (op, x, y) => {
                        let (x, y) = (x.to_approx(ctx), y.to_approx(ctx));
                        Value::Real(match op {
                            BinOp::Add => x.add(&y),
                            BinOp::Sub => x.sub(&y),
                            BinOp::Mul => x.mul(&y, ulp),
                            BinOp::Div => x.div(&y, ulp)?,
                            BinOp::Pow => unreachable!("handled above"),
                        })
                    }
                }
            }
            Expr::Sum { var, lo, hi, body } => {
                let lo = self.eval(lo, env)?.integer("sum bound")?;
                let hi = self.eval(hi, env)?.integer("sum bound")?;
                if hi - lo > MAX_SUM_TERMS {
                    return domain(format!("sum over {} terms is too long", hi - lo + 1));
                }
                let mut inner = env.clone();
                let mut exact = Rational::zero();
                let mut real: Option<Approx> = None;
                for j in lo..=hi {
                    inner.insert(var.clone(), j);
                    match self.eval(body, &inner)? {
                        Value::Exact(r) => exact += r,
                        Value::Real(a) => real = Some(real.map_or(a.clone(), |acc| acc.add(&a))),
                    }
                }
                match real {
                    None => Value::Exact(exact),
                    Some(a) => Value::Real(a.add(&Value::Exact(exact).to_approx(ctx))),
                }
            }
            Expr::Call { func, chars, args } => {
                let vals = args.iter().map(|a| self.eval(a, env)).collect::<Result<Vec<_>>>()?;
                self.call(*func, chars, &vals)?
            }
        })
    }

    fn pow(&self, x: Value, k: i64) -> Result<Value> {
        match x {
            Value::Exact(b) => {
                if b.is_zero() && k < 0 {
                    return domain("zero to a negative power");
                }
                Ok(Value::Exact(rat_pow(&b, k)))
            }
            Value::Real(a) => {
                let ulp = self.ctx.ulp();
                let mut acc = Approx::exact(MPReal::from_int(1, self.ctx.bits()));
                for _ in 0..k.unsigned_abs() {
                    acc = acc.mul(&a, ulp);
                }
                if k < 0 {
                    acc = Approx::exact(MPReal::from_int(1, self.ctx.bits())).div(&acc, ulp)?;
                }
                Ok(Value::Real(acc))
            }
        }
    }

    fn call(&self, func: Func, chars: &[CharId], v: &[Value]) -> Result<Value> {
        let ctx = self.ctx;
        let i = |k: usize, what: &str| v[k].integer(what);
        Ok(match func {
            Func::Zeta => Value::Real(zeta_num(i(0, "zeta argument")?, ctx)?),
            Func::Dz => Value::Real(dzeta_num(i(0, "dz argument")?, i(1, "dz argument")?, ctx)?),
            Func::Cs => Value::Real(char_dzeta_num(chars[0], chars[1], i(0, "cs argument")?, i(1, "cs argument")?, ctx)?),
            Func::W => Value::Real(witten_num(i(0, "W argument")?, i(1, "W argument")?, i(2, "W argument")?, ctx)?),
            Func::L => Value::Real(l_num(chars[0], i(0, "L argument")?, ctx)?),
            Func::HsumOdd => Value::Real(harmonic_sum_num(HarmonicKind::OddDenom, i(0, "hsum_odd argument")?, ctx)?),
            Func::HsumHalf => Value::Real(harmonic_sum_num(HarmonicKind::HalfIndex, i(0, "hsum_half argument")?, ctx)?),
            _ => {
                let exact: Vec<Rational> = v
                    .iter()
                    .map(|x| match x {
                        Value::Exact(r) => Ok(r.clone()),
                        Value::Real(_) => domain(format!("{} needs exact arguments", func.name())),
                    })
                    .collect::<Result<_>>()?;
                Value::Exact(exact_call(func, &exact)?)
            }
        })
    }
}

/// Functions with exact rational values.
pub fn exact_call(func: Func, v: &[Rational]) -> Result<Rational> {
    let nonneg = |k: usize, what: &str| -> Result<u64> {
        let n = int_arg(&v[k], what)?;
        if n < 0 {
            return domain(format!("{what} must be nonnegative, got {n}"));
        }
        Ok(n as u64)
    };
    Ok(match func {
        Func::Hrat => {
            let n = nonneg(0, "Hrat index")?;
            if v.len() == 2 {
                let b = nonneg(1, "Hrat order")?;
                generalized_harmonic(n, b as u32)
            } else {
                harmonic(n)
            }
        }
        Func::B => bernoulli(nonneg(0, "Bernoulli index")? as usize),
        Func::E => Rational::from_integer(euler_number(nonneg(0, "Euler index")? as usize)),
        Func::Binom => {
            let n = int_arg(&v[0], "binom top")?;
            let k = int_arg(&v[1], "binom bottom")?;
            if n < 0 {
                return domain("binom needs a nonnegative top argument");
            }
            Rational::from_integer(binomial(n as u64, k))
        }
        Func::Hyp2f1sp => {
            let n = nonneg(0, "hyp2f1sp index")?;
            if n == 0 {
                return domain("hyp2f1sp needs n >= 1");
            }
            hyp2f1_special(n)
        }
        Func::Fact => Rational::from_integer(factorial(nonneg(0, "factorial argument")?)),
        Func::Abs => v[0].abs(),
        Func::Floor => Rational::from_integer(v[0].numer().div_floor(v[0].denom())),
        other => return not_reducible(format!("{} has no exact rational value", other.name())),
    })
}

/// Exact evaluation to a closed form; fails with `NotReducible` when some
/// object has no closed form in scope.
pub fn reduce_ast(e: &Expr, env: &Bindings) -> Result<ConstExpr> {
    reduce_with(e, env, ReductionTable::global())
}

fn reduce_with(e: &Expr, env: &Bindings, table: &ReductionTable) -> Result<ConstExpr> {
    let int = |x: &ConstExpr, what: &str| -> Result<i64> {
        let r = x.as_rational().ok_or_else(|| Error::Domain(format!("{what} must be an integer")))?;
        int_arg(&r, what)
    };
    Ok(match e {
        Expr::Int(n) => ConstExpr::rational(Rational::from_integer(n.clone())),
        Expr::Var(v) => ConstExpr::int(Evaluator::lookup(env, v)?),
        Expr::Const(g) => ConstExpr::gen(*g),
        Expr::Neg(a) => -&reduce_with(a, env, table)?,
        Expr::Bin(op, a, b) => {
            let x = reduce_with(a, env, table)?;
            let y = reduce_with(b, env, table)?;
            match op {
                BinOp::Add => &x + &y,
                BinOp::Sub => &x - &y,
                BinOp::Mul => &x * &y,
                BinOp::Div => x.div(&y)?,
                BinOp::Pow => {
                    let k = int(&y, "exponent")?;
                    if k >= 0 {
                        x.pow(k as u32)
                    } else {
                        let base = x
                            .as_rational()
                            .ok_or_else(|| Error::NotReducible("negative power of a transcendental".into()))?;
                        if base.is_zero() {
                            return domain("zero to a negative power");
                        }
                        ConstExpr::rational(rat_pow(&base, k))
                    }
                }
            }
        }
        Expr::Sum { var, lo, hi, body } => {
            let lo = int(&reduce_with(lo, env, table)?, "sum bound")?;
            let hi = int(&reduce_with(hi, env, table)?, "sum bound")?;
            if hi - lo > MAX_SUM_TERMS {
                return domain("sum is too long");
            }
            let mut inner = env.clone();
            let mut acc = ConstExpr::zero();
            for j in lo..=hi {
                inner.insert(var.clone(), j);
                acc = &acc + &reduce_with(body, &inner, table)?;
            }
            acc
        }
        Expr::Call { func, chars, args } => {
            let vals = args.iter().map(|a| reduce_with(a, env, table)).collect::<Result<Vec<_>>>()?;
            let i = |k: usize| int(&vals[k], func.name());
            match func {
                Func::Zeta => zeta_sym(i(0)?)?,
                Func::Dz => table.get(Object::Dz(i(0)?, i(1)?))?,
                Func::Cs => table.get(Object::Alt(chars[0], chars[1], i(0)?, i(1)?))?,
                Func::W => table.get(Object::Witten(i(0)?, i(1)?, i(2)?))?,
                Func::L => L_sym(chars[0], i(0)?)?,
                Func::HsumOdd | Func::HsumHalf => {
                    return not_reducible(format!("{} is evaluated numerically only", func.name()))
                }
                _ => {
                    let exact: Vec<Rational> = vals
                        .iter()
                        .map(|x| {
                            x.as_rational()
                                .ok_or_else(|| Error::Domain(format!("{} needs rational arguments", func.name())))
                        })
                        .collect::<Result<_>>()?;
                    ConstExpr::rational(exact_call(*func, &exact)?)
                }
            }
        }
    })
}

/// Numeric value with the count of nodes visited.
pub fn eval_ast(e: &Expr, env: &Bindings, ctx: &EvalContext) -> Result<(Value, usize)> {
    let mut ev = Evaluator::new(ctx);
    let v = ev.eval(e, env)?;
    Ok((v, ev.nodes))
}
