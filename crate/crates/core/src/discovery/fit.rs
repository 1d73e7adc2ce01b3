//! Fitting `f(s)` in a fixed span of simple functions.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::linalg::solve_unique;
use crate::corpus::{BinOp, Expr};
use crate::error::Error;
use crate::exact::{rint, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SpanFn {
    One,
    S,
    S2,
    Pow2,
    Pow4,
    SPow4,
}

impl SpanFn {
    pub const ALL: [SpanFn; 6] = [SpanFn::One, SpanFn::S, SpanFn::S2, SpanFn::Pow2, SpanFn::Pow4, SpanFn::SPow4];

    pub fn at(self, s: i64) -> Rational {
        let p = |b: u32| Rational::from_integer(BigInt::from(b).pow(s as u32));
        match self {
            SpanFn::One => Rational::one(),
            SpanFn::S => rint(s),
            SpanFn::S2 => rint(s * s),
            SpanFn::Pow2 => p(2),
            SpanFn::Pow4 => p(4),
            SpanFn::SPow4 => rint(s) * p(4),
        }
    }

    fn expr(self) -> Option<Expr> {
        let s = || Expr::var("s");
        Some(match self {
            SpanFn::One => return None,
            SpanFn::S => s(),
            SpanFn::S2 => Expr::bin(BinOp::Pow, s(), Expr::int(2)),
            SpanFn::Pow2 => Expr::bin(BinOp::Pow, Expr::int(2), s()),
            SpanFn::Pow4 => Expr::bin(BinOp::Pow, Expr::int(4), s()),
            SpanFn::SPow4 => Expr::bin(BinOp::Mul, s(), Expr::bin(BinOp::Pow, Expr::int(4), s())),
        })
    }
}

impl fmt::Display for SpanFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpanFn::One => "1",
            SpanFn::S => "s",
            SpanFn::S2 => "s^2",
            SpanFn::Pow2 => "2^s",
            SpanFn::Pow4 => "4^s",
            SpanFn::SPow4 => "s*4^s",
        })
    }
}

impl FromStr for SpanFn {
    type Err = Error;
    fn from_str(t: &str) -> Result<Self, Error> {
        SpanFn::ALL
            .iter()
            .copied()
            .find(|f| f.to_string() == t.replace(' ', ""))
            .ok_or_else(|| Error::Other(format!("unknown span function `{t}`")))
    }
}

/// `f(s) = sum c_k g_k(s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fit {
    pub terms: Vec<(SpanFn, Rational)>,
}

impl Fit {
    pub fn at(&self, s: i64) -> Rational {
        self.terms.iter().map(|(g, c)| g.at(s) * c).sum()
    }

    pub fn scale(&self, r: &Rational) -> Fit {
        Fit { terms: self.terms.iter().map(|(g, c)| (*g, c * r)).filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn to_expr(&self) -> Expr {
        let mut out: Option<Expr> = None;
        // highest growth first
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        for (g, c) in terms {
            let neg = c.is_negative();
            let mag = rat_expr(&c.abs());
            let t = match g.expr() {
                None => mag,
                Some(e) if c.abs().is_one() => e,
                Some(e) => Expr::bin(BinOp::Mul, mag, e),
            };
            out = Some(match out {
                None if neg && g == SpanFn::One => rat_expr(&c),
                None if neg => Expr::Neg(Box::new(t)),
                None => t,
                Some(acc) => Expr::bin(if neg { BinOp::Sub } else { BinOp::Add }, acc, t),
            });
        }
        out.unwrap_or_else(|| Expr::int(0))
    }
}

impl fmt::Display for Fit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

/// `p` or `p/q`.
pub fn rat_expr(r: &Rational) -> Expr {
    let n = Expr::Int(r.numer().abs());
    let n = if r.is_negative() { Expr::Neg(Box::new(n)) } else { n };
    if r.denom().is_one() {
        n
    } else {
        Expr::bin(BinOp::Div, n, Expr::Int(r.denom().clone()))
    }
}

/// Smallest subset of `span` (by size, then order) whose unique fit
/// through all points is exact. One point beyond the subset size is
/// required so that every fit is tested on data it was not solved from.
pub fn fit_f(points: &[(i64, Rational)], span: &[SpanFn]) -> Option<Fit> {
    if points.is_empty() {
        return None;
    }
    if points.iter().all(|(_, v)| v.is_zero()) {
        return Some(Fit { terms: Vec::new() });
    }
    let max = span.len().min(points.len() - 1);
    for k in 1..=max {
        for subset in subsets(span.len(), k) {
            let gs: Vec<SpanFn> = subset.iter().map(|&i| span[i]).collect();
            let m: Vec<Vec<Rational>> = points.iter().map(|(s, _)| gs.iter().map(|g| g.at(*s)).collect()).collect();
            let b: Vec<Rational> = points.iter().map(|(_, v)| v.clone()).collect();
            if let Some(c) = solve_unique(&m, &b) {
                if c.iter().all(|x| !x.is_zero()) {
                    return Some(Fit { terms: gs.into_iter().zip(c).collect() });
                }
            }
        }
    }
    None
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}
