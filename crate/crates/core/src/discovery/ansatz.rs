use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::fit::Fit;
use crate::corpus::{parse_corpus, reduce_ast, BinOp, Bindings, Expr, Func, Identity, Parity};
use crate::error::{domain, not_reducible, Error, Result};
use crate::exact::{rat, Rational};
use crate::reductions::{dzeta_reduce, weight_system, MAX_SYSTEM_WEIGHT};
use crate::symbolic::{zeta_sym, ConstExpr};

/// Which double zetas a weighted sum runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    /// `sum_{j=2}^{s-1} w(s,j) zeta(j, s-j)`
    Plain,
    /// `sum_{j=1}^{s-1} w(s,j) zeta(2j, 2s-2j)`
    EvenArg,
    /// as `EvenArg` with `j = 2..s-2`
    EvenArgInner,
}

impl Shape {
    pub fn is_even_arg(self) -> bool {
        self != Shape::Plain
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Plain => "plain",
            Shape::EvenArg => "even-arg",
            Shape::EvenArgInner => "even-arg-inner",
        })
    }
}

pub fn parity_admits(p: Option<Parity>, v: i64) -> bool {
    match p {
        None => true,
        Some(Parity::Even) => v % 2 == 0,
        Some(Parity::Odd) => v % 2 != 0,
    }
}

pub fn parity_name(p: Option<Parity>) -> &'static str {
    match p {
        None => "any",
        Some(Parity::Even) => "even",
        Some(Parity::Odd) => "odd",
    }
}

pub const PARITIES: [Option<Parity>; 3] = [None, Some(Parity::Even), Some(Parity::Odd)];

/// A weighted sum with a weight expression in `s` and `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ansatz {
    pub family: String,
    /// Parameter description used for ordering and display.
    pub label: String,
    pub shape: Shape,
    pub j_parity: Option<Parity>,
    pub s_parity: Option<Parity>,
    pub weight: Expr,
}

impl Ansatz {
    pub fn new(family: &str, label: String, shape: Shape, weight: Expr) -> Self {
        Ansatz { family: family.to_string(), label, shape, j_parity: None, s_parity: None, weight }
    }

    pub fn with_parity(mut self, j: Option<Parity>, s: Option<Parity>) -> Self {
        self.j_parity = j;
        self.s_parity = s;
        self
    }

    pub fn admits(&self, s: i64) -> bool {
        s >= self.min_s() && parity_admits(self.s_parity, s)
    }

    /// Smallest `s` with a nonempty range.
    pub fn min_s(&self) -> i64 {
        let base = match self.shape {
            Shape::Plain => 3,
            Shape::EvenArg => 2,
            Shape::EvenArgInner => 4,
        };
        (base..).find(|&s| parity_admits(self.s_parity, s)).unwrap()
    }

    /// Weight of the double zetas at index `s`.
    pub fn total_weight(&self, s: i64) -> i64 {
        if self.shape.is_even_arg() {
            2 * s
        } else {
            s
        }
    }

    pub fn j_bounds(&self, s: i64) -> (i64, i64) {
        match self.shape {
            Shape::Plain => (2, s - 1),
            Shape::EvenArg => (1, s - 1),
            Shape::EvenArgInner => (2, s - 2),
        }
    }

    pub fn weight_at(&self, s: i64, j: i64) -> Result<Rational> {
        if !parity_admits(self.j_parity, j) {
            return Ok(Rational::zero());
        }
        let env: Bindings = [("s".to_string(), s), ("j".to_string(), j)].into_iter().collect();
        reduce_ast(&self.weight, &env)?
            .as_rational()
            .ok_or_else(|| Error::Domain(format!("weight is not rational at s={s}, j={j}")))
    }

    /// Weights over the shape's full index set (`j = 2..s-1` or `1..s-1`),
    /// zero outside the summation range.
    pub fn vector(&self, s: i64) -> Result<Vec<Rational>> {
        let (lo, hi) = self.j_bounds(s);
        let first = if self.shape.is_even_arg() { 1 } else { 2 };
        (first..s).map(|j| if j < lo || j > hi { Ok(Rational::zero()) } else { self.weight_at(s, j) }).collect()
    }

    /// Exact value of the sum at `s`.
    pub fn reduce(&self, s: i64) -> Result<ConstExpr> {
        let v = self.vector(s)?;
        match self.shape {
            Shape::Plain => {
                if s > MAX_SYSTEM_WEIGHT {
                    return not_reducible(format!("plain sums reduce only up to weight {MAX_SYSTEM_WEIGHT}"));
                }
                let sys = weight_system(s)?;
                Ok(v.iter().zip(&sys).fold(ConstExpr::zero(), |acc, (c, z)| &acc + &z.scale(c)))
            }
            _ => reduce_symmetric_even(&v, s),
        }
    }

    pub fn lhs_expr(&self) -> Expr {
        let s = || Expr::var("s");
        let j = || Expr::var("j");
        let (lo, hi) = match self.shape {
            Shape::Plain => (Expr::int(2), Expr::bin(BinOp::Sub, s(), Expr::int(1))),
            Shape::EvenArg => (Expr::int(1), Expr::bin(BinOp::Sub, s(), Expr::int(1))),
            Shape::EvenArgInner => (Expr::int(2), Expr::bin(BinOp::Sub, s(), Expr::int(2))),
        };
        let dz = if self.shape.is_even_arg() {
            let two = |e: Expr| Expr::bin(BinOp::Mul, Expr::int(2), e);
            Expr::call(Func::Dz, vec![two(j()), Expr::bin(BinOp::Sub, two(s()), two(j()))])
        } else {
            Expr::call(Func::Dz, vec![j(), Expr::bin(BinOp::Sub, s(), j())])
        };
        let mut w = (!is_one(&self.weight)).then(|| self.weight.clone());
        if let Some(p) = self.j_parity {
            let sign = Expr::bin(BinOp::Pow, Expr::Neg(Box::new(Expr::int(1))), j());
            let op = if p == Parity::Even { BinOp::Add } else { BinOp::Sub };
            let ind = Expr::bin(BinOp::Div, Expr::bin(op, Expr::int(1), sign), Expr::int(2));
            w = Some(match w {
                Some(w) => Expr::bin(BinOp::Mul, w, ind),
                None => ind,
            });
        }
        let body = match w {
            Some(w) => Expr::bin(BinOp::Mul, w, dz),
            None => dz,
        };
        Expr::sum("j", lo, hi, body)
    }

    pub fn rhs_expr(&self, fit: &Fit) -> Expr {
        let arg = if self.shape.is_even_arg() {
            Expr::bin(BinOp::Mul, Expr::int(2), Expr::var("s"))
        } else {
            Expr::var("s")
        };
        let z = Expr::call(Func::Zeta, vec![arg]);
        let f = fit.to_expr();
        if is_one(&f) {
            z
        } else {
            Expr::bin(BinOp::Mul, f, z)
        }
    }

    /// The identity in corpus syntax.
    pub fn to_dsl(&self, id: &str, fit: &Fit) -> String {
        let mut domain = format!("s>={}", self.min_s());
        if let Some(p) = self.s_parity {
            domain.push_str(&format!(", s {}", parity_name(Some(p))));
        }
        format!(
            "identity {id} \"{} {}\" : forall {domain} : {} == {}",
            self.family,
            self.label,
            self.lhs_expr(),
            self.rhs_expr(fit)
        )
    }

    pub fn to_identity(&self, id: &str, fit: &Fit) -> Result<Identity> {
        let mut v = parse_corpus(&self.to_dsl(id, fit))?;
        Ok(v.remove(0))
    }
}

/// `sum_j weight(w, j) zeta(j, w-j)` over `j = 2..w-1` restricted by parity.
pub fn reduce_weighted_sum(
    weight: &dyn Fn(i64, i64) -> Result<Rational>,
    w: i64,
    j_parity: Option<Parity>,
) -> Result<ConstExpr> {
    if !(3..=MAX_SYSTEM_WEIGHT).contains(&w) {
        return domain(format!("weighted sums reduce exactly for 3 <= w <= {MAX_SYSTEM_WEIGHT}, got {w}"));
    }
    let sys = weight_system(w)?;
    let mut acc = ConstExpr::zero();
    for j in 2..w {
        if parity_admits(j_parity, j) {
            acc = &acc + &sys[(j - 2) as usize].scale(&weight(w, j)?);
        }
    }
    Ok(acc)
}

/// `sum_{j=1}^{s-1} c_j zeta(2j, 2s-2j)` for weights with `c_j = c_{s-j}`,
/// paired through the reflection formula. Other weights reduce only when
/// `2s <= 7`.
pub fn reduce_symmetric_even(c: &[Rational], s: i64) -> Result<ConstExpr> {
    let n = (s - 1) as usize;
    if c.len() != n {
        return domain("weight vector has the wrong length");
    }
    let symmetric = (0..n).all(|i| c[i] == c[n - 1 - i]);
    if !symmetric {
        if 2 * s <= MAX_SYSTEM_WEIGHT {
            let mut acc = ConstExpr::zero();
            for (i, ci) in c.iter().enumerate() {
                let j = i as i64 + 1;
                acc = &acc + &dzeta_reduce(2 * j, 2 * s - 2 * j)?.scale(ci);
            }
            return Ok(acc);
        }
        return not_reducible("even-argument sum with weights not symmetric under j -> s-j");
    }
    let z2s = zeta_sym(2 * s)?;
    let mut acc = ConstExpr::zero();
    for j in 1..s {
        let k = s - j;
        let cj = &c[(j - 1) as usize];
        if cj.is_zero() || j > k {
            continue;
        }
        if j < k {
            // c_j (zeta(2j,2k) + zeta(2k,2j))
            let pair = &(&zeta_sym(2 * j)? * &zeta_sym(2 * k)?) - &z2s;
            acc = &acc + &pair.scale(cj);
        } else {
            let diag = (&zeta_sym(2 * j)?.pow(2) - &z2s).scale(&rat(1, 2));
            acc = &acc + &diag.scale(cj);
        }
    }
    Ok(acc)
}

/// `e = f zeta(w) + rest`.
pub fn split_zeta(e: &ConstExpr, w: i64) -> Result<(Rational, ConstExpr)> {
    let z = zeta_sym(w)?;
    let (m, c) = z.terms().next().map(|(m, c)| (m.clone(), c.clone())).expect("zeta is a single term");
    let f = e.coeff(&m) / c;
    let rest = e - &z.scale(&f);
    Ok((f, rest))
}

fn is_one(e: &Expr) -> bool {
    matches!(e, Expr::Int(n) if *n == 1.into())
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}
