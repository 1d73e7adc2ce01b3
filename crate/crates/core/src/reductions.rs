//! Exact reductions of double zeta values, Witten sums and a few
//! alternating values to polynomials in the basis constants.
//!
//! At each weight `w <= 7` the unknowns `zeta(j, w-j)`, `j = 2..w-1`, are
//! determined by an exact linear system built from reflection, the sum
//! formula, the `2^j`-weighted sum and an alternating-sign sum (the
//! even-weight value `zeta(w)/2`, or at odd weight the closed form
//! `(4^s-s-2) zeta(2s+1) - 2 sum (4^(s-k)-1) zeta(2k) zeta(2s+1-2k)`).
//! `zeta(a,a)` and `zeta(a,1)` reduce at every weight.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use parking_lot::RwLock;

use crate::error::{domain, not_reducible, Error, Result};
use crate::exact::{rat, rint, Rational};
use crate::mp::{char_dzeta_num, dzeta_num, witten_num, CharId, EvalContext};
use crate::symbolic::{expr_num, zeta_sym, ConstExpr, ConstGenerator, Monomial};

/// Largest weight at which every double zeta value is reduced.
pub const MAX_SYSTEM_WEIGHT: i64 = 7;

fn z(s: i64) -> ConstExpr {
    zeta_sym(s).expect("zeta_sym on s >= 2")
}

/// `zeta(s-1, 1) = (s-1)/2 zeta(s) - 1/2 sum_{j=2}^{s-2} zeta(j) zeta(s-j)`.
pub fn zeta_s1_reduce(s: i64) -> Result<ConstExpr> {
    if s < 3 {
        return domain(format!("zeta({},1) diverges", s - 1));
    }
    let mut acc = z(s).scale(&rat(s - 1, 2));
    for j in 2..=s - 2 {
        acc = &acc - &(&z(j) * &z(s - j)).scale(&rat(1, 2));
    }
    Ok(acc)
}

/// One linear equation `sum coeffs[j-2] zeta(j, w-j) = rhs`.
#[derive(Clone, Debug)]
struct Row {
    coeffs: Vec<Rational>,
    rhs: ConstExpr,
}

fn system_rows(w: i64) -> Vec<Row> {
    let n = (w - 2) as usize;
    let mut rows = Vec::new();
    let unit = |j: i64| j as usize - 2;
    // reflection
    for j in 2..=w / 2 {
        let mut coeffs = vec![Rational::zero(); n];
        coeffs[unit(j)] += rint(1);
        coeffs[unit(w - j)] += rint(1);
        rows.push(Row { coeffs, rhs: &(&z(j) * &z(w - j)) - &z(w) });
    }
    // sum formula
    rows.push(Row { coeffs: vec![rint(1); n], rhs: z(w) });
    // 2^j weights
    rows.push(Row {
        coeffs: (2..w).map(|j| Rational::from_integer(BigInt::one() << j as usize)).collect(),
        rhs: z(w).scale(&rint(w + 1)),
    });
    let signs: Vec<Rational> = (2..w).map(|j| if j % 2 == 0 { rint(1) } else { rint(-1) }).collect();
    if w % 2 == 0 {
        rows.push(Row { coeffs: signs, rhs: z(w).scale(&rat(1, 2)) });
    } else {
        let s = (w - 1) / 2;
        let four = |e: i64| Rational::from_integer(BigInt::one() << (2 * e) as usize);
        let mut rhs = z(w).scale(&(four(s) - rint(s + 2)));
        for k in 1..s {
            let c = (four(s - k) - rint(1)) * rint(-2);
            rhs = &rhs + &(&z(2 * k) * &z(w - 2 * k)).scale(&c);
        }
        rows.push(Row { coeffs: signs, rhs });
    }
    rows
}

/// Exact Gauss-Jordan elimination; fails unless the system has full column
/// rank and every surplus row reduces to `0 = 0`.
fn solve_exact(mut rows: Vec<Row>, n: usize) -> Result<Vec<ConstExpr>> {
    let mut pivot_row = 0usize;
    for col in 0..n {
        let Some(p) = (pivot_row..rows.len()).find(|&r| !rows[r].coeffs[col].is_zero()) else {
            return Err(Error::Singular(format!("no pivot in column {col}; system is rank deficient")));
        };
        rows.swap(pivot_row, p);
        let inv = rows[pivot_row].coeffs[col].recip();
        let pr = Row {
            coeffs: rows[pivot_row].coeffs.iter().map(|c| c * &inv).collect(),
            rhs: rows[pivot_row].rhs.scale(&inv),
        };
        for (r, row) in rows.iter_mut().enumerate() {
            if r == pivot_row || row.coeffs[col].is_zero() {
                continue;
            }
            let f = row.coeffs[col].clone();
            for (c, pc) in row.coeffs.iter_mut().zip(&pr.coeffs) {
                *c -= &f * pc;
            }
            row.rhs = &row.rhs - &pr.rhs.scale(&f);
        }
        rows[pivot_row] = pr;
        pivot_row += 1;
    }
    for row in &rows[n..] {
        if !row.rhs.is_zero() {
            return Err(Error::Singular(format!("inconsistent surplus equation: 0 = {}", row.rhs)));
        }
    }
    Ok(rows.into_iter().take(n).map(|r| r.rhs).collect())
}

static SYSTEMS: Lazy<RwLock<HashMap<i64, Vec<ConstExpr>>>> = Lazy::new(|| RwLock::new(HashMap::new()));

/// All `zeta(j, w-j)`, `j = 2..w-1`, at a weight `3 <= w <= 7`.
pub fn weight_system(w: i64) -> Result<Vec<ConstExpr>> {
    if !(3..=MAX_SYSTEM_WEIGHT).contains(&w) {
        return not_reducible(format!("no linear system at weight {w}"));
    }
    if let Some(v) = SYSTEMS.read().get(&w) {
        return Ok(v.clone());
    }
    let sol = solve_exact(system_rows(w), (w - 2) as usize)?;
    SYSTEMS.write().insert(w, sol.clone());
    Ok(sol)
}

/// Closed form of `zeta(a, b)`.
pub fn dzeta_reduce(a: i64, b: i64) -> Result<ConstExpr> {
    if a < 2 || b < 1 {
        return domain(format!("zeta({a},{b}) needs a >= 2 and b >= 1"));
    }
    if b == 1 {
        return zeta_s1_reduce(a + 1);
    }
    if a == b {
        return Ok((&(&z(a) * &z(a)) - &z(2 * a)).scale(&rat(1, 2)));
    }
    let w = a + b;
    if w > MAX_SYSTEM_WEIGHT {
        return not_reducible(format!("zeta({a},{b}) has weight {w} > {MAX_SYSTEM_WEIGHT}"));
    }
    Ok(weight_system(w)?[(a - 2) as usize].clone())
}

/// `W(r,s,t)` as an integer combination of double zeta values plus a
/// closed-form part.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WittenReduction {
    /// coefficient of `zeta(a, b)` keyed by `(a, b)`
    pub dz: BTreeMap<(u32, u32), Rational>,
    pub rest: ConstExpr,
}

impl WittenReduction {
    fn add_dz(&mut self, a: i64, b: i64, c: &Rational) {
        if b == 0 {
            // zeta(a, 0) = zeta(a-1) - zeta(a)
            self.rest = &self.rest + &(&z(a - 1) - &z(a)).scale(c);
            return;
        }
        let slot = self.dz.entry((a as u32, b as u32)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.dz.remove(&(a as u32, b as u32));
        }
    }

    /// Closed form, when every double zeta value involved reduces.
    pub fn to_const(&self) -> Result<ConstExpr> {
        let mut acc = self.rest.clone();
        for ((a, b), c) in &self.dz {
            acc = &acc + &dzeta_reduce(*a as i64, *b as i64)?.scale(c);
        }
        Ok(acc)
    }
}

pub fn witten_convergent(r: i64, s: i64, t: i64) -> bool {
    r >= 0 && s >= 0 && t >= 0 && r + t > 1 && s + t > 1 && r + s + t > 2
}

/// Expands `W(r,s,t)` with `W(r,s,t) = W(r-1,s,t+1) + W(r,s-1,t+1)` down to
/// `W(r,s,0) = zeta(r) zeta(s)` and `W(r,0,t) = W(0,r,t) = zeta(t,r)`.
pub fn witten_reduce(r: i64, s: i64, t: i64) -> Result<WittenReduction> {
    if !witten_convergent(r, s, t) {
        return domain(format!("W({r},{s},{t}) diverges"));
    }
    let mut out = WittenReduction::default();
    if t == 0 {
        out.rest = &z(r) * &z(s);
        return Ok(out);
    }
    // multiplicities of the frontier triples, by total recursion depth
    let mut frontier: BTreeMap<(i64, i64), BigInt> = BTreeMap::new();
    frontier.insert((r, s), BigInt::one());
    let mut tt = t;
    while !frontier.is_empty() {
        let mut next: BTreeMap<(i64, i64), BigInt> = BTreeMap::new();
        for ((a, b), m) in frontier {
            let c = Rational::from_integer(m.clone());
            if a == 0 {
                out.add_dz(tt, b, &c);
            } else if b == 0 {
                out.add_dz(tt, a, &c);
            } else {
                *next.entry((a - 1, b)).or_insert_with(BigInt::zero) += &m;
                *next.entry((a, b - 1)).or_insert_with(BigInt::zero) += &m;
            }
        }
        frontier = next;
        tt += 1;
    }
    Ok(out)
}

/// Closed form of `W(r,s,t)`.
pub fn witten_sym(r: i64, s: i64, t: i64) -> Result<ConstExpr> {
    witten_reduce(r, s, t)?.to_const()
}

/// Tabulated alternating double zeta values, addressed as character sums:
/// `zeta(2b,1) = [2b,1](2,1)`, `zeta(2,1b) = [1,2b](2,1)` and so on, where a
/// bar sits on the slot carrying the `2b` character.
pub fn alt_value_lookup(p: CharId, q: CharId, s: i64, t: i64) -> Result<ConstExpr> {
    use CharId::*;
    let pi = |c: Rational, e: u32| ConstExpr::pi_pow(c, e);
    let l2 = ConstExpr::gen(ConstGenerator::Log2);
    let z3 = ConstExpr::gen(ConstGenerator::ZetaOdd(3));
    let pi2l2 = &pi(rat(1, 4), 2) * &l2;
    match (p, q, s, t) {
        (TwoB, One, 2, 1) => Ok(z3.scale(&rat(-1, 8))),
        (One, TwoB, 2, 1) => Ok(&pi2l2 - &z3),
        (TwoB, TwoB, 2, 1) => Ok(&pi2l2 - &z3.scale(&rat(13, 8))),
        (TwoB, One, 2, 2) => {
            let l2sq = l2.pow(2);
            let terms = [
                l2.pow(4).scale(&rat(1, 6)),
                (&l2sq * &pi(rint(1), 2)).scale(&rat(-1, 6)),
                (&l2 * &z3).scale(&rat(7, 2)),
                pi(rat(-13, 288), 4),
                ConstExpr::term(rint(4), Monomial::gen(ConstGenerator::Li4Half, 1)),
            ];
            Ok(terms.iter().fold(ConstExpr::zero(), |a, b| &a + b))
        }
        (TwoB, TwoB, 2, 2) => Ok(pi(rat(-1, 480), 4)),
        _ => not_reducible(format!("[{p},{q}]({s},{t}) is not a tabulated alternating value")),
    }
}

/// Objects the reduction table can hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Object {
    Dz(i64, i64),
    Witten(i64, i64, i64),
    Alt(CharId, CharId, i64, i64),
}

impl Object {
    pub fn reduce(&self) -> Result<ConstExpr> {
        match *self {
            Object::Dz(a, b) => dzeta_reduce(a, b),
            Object::Witten(r, s, t) => witten_sym(r, s, t),
            Object::Alt(p, q, s, t) => {
                if (p, q) == (CharId::One, CharId::One) {
                    dzeta_reduce(s, t)
                } else {
                    alt_value_lookup(p, q, s, t)
                }
            }
        }
    }

    fn numeric(&self, ctx: &EvalContext) -> Result<crate::mp::Approx> {
        match *self {
            Object::Dz(a, b) => dzeta_num(a, b, ctx),
            Object::Witten(r, s, t) => witten_num(r, s, t, ctx),
            Object::Alt(p, q, s, t) => char_dzeta_num(p, q, s, t, ctx),
        }
    }
}

/// Memo of reductions, each checked numerically at 40 digits when first
/// inserted (residual at most `1e-35`).
#[derive(Default)]
pub struct ReductionTable {
    memo: RwLock<HashMap<Object, ConstExpr>>,
}

pub const TABLE_DIGITS: u32 = 40;
pub const TABLE_RESIDUAL_LOG10: f64 = -35.0;

impl ReductionTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// The shared process-wide table.
    pub fn global() -> &'static ReductionTable {
        static TABLE: Lazy<ReductionTable> = Lazy::new(ReductionTable::new);
        &TABLE
    }

    pub fn get(&self, obj: Object) -> Result<ConstExpr> {
        if let Some(v) = self.memo.read().get(&obj) {
            return Ok(v.clone());
        }
        let expr = obj.reduce()?;
        let ctx = EvalContext::new(TABLE_DIGITS)?;
        let diff = expr_num(&expr, &ctx)?.sub(&obj.numeric(&ctx)?);
        let resid = diff.value.abs().log10_abs();
        if resid > TABLE_RESIDUAL_LOG10 {
            return Err(Error::Other(format!("reduction of {obj:?} fails its numeric check (residual 1e{resid:.1})")));
        }
        self.memo.write().insert(obj, expr.clone());
        Ok(expr)
    }

    pub fn len(&self) -> usize {
        self.memo.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.read().is_empty()
    }
}
