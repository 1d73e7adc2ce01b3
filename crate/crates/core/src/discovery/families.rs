//! The ansatz families.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::ansatz::{parity_admits, parity_name, split_zeta, Ansatz, Shape, PARITIES};
use super::fit::rat_expr;
use super::linalg::{in_span, nullspace, primitive, rref};
use super::{Family, SearchConfig};
use crate::corpus::{BinOp, Expr, Parity};
use crate::error::{domain, Result};
use crate::exact::{rat, rat_pow, rint, Rational};
use crate::reductions::weight_system;
use crate::symbolic::{ConstExpr, Monomial};

/// Nonzero rationals `p/q` with `|p|, q <= h`, by height then value.
pub fn height_pool(h: u32) -> Vec<Rational> {
    let h = h as i64;
    let mut out = Vec::new();
    for p in 1..=h {
        for q in 1..=h {
            if p.gcd(&q) == 1 {
                out.push(rat(p, q));
                out.push(rat(-p, q));
            }
        }
    }
    out.sort_by(|a, b| height(a).cmp(&height(b)).then(a.cmp(b)));
    out
}

fn height(r: &Rational) -> num_bigint::BigInt {
    r.numer().abs().max(r.denom().clone())
}

fn within_height(r: &Rational, h: u32) -> bool {
    height(r) <= num_bigint::BigInt::from(h)
}

/// Non-`zeta(w)` parts of the weight-`w` double zetas as coefficient rows.
pub(crate) struct Residuals {
    pub w: i64,
    monos: Vec<Monomial>,
    /// index `j - 2`
    rows: Vec<Vec<Rational>>,
}

impl Residuals {
    pub fn new(w: i64) -> Result<Self> {
        let rests: Vec<ConstExpr> =
            weight_system(w)?.iter().map(|e| split_zeta(e, w).map(|(_, r)| r)).collect::<Result<_>>()?;
        let monos: Vec<Monomial> =
            rests.iter().flat_map(|r| r.terms().map(|(m, _)| m.clone())).collect::<BTreeSet<_>>().into_iter().collect();
        let rows = rests.iter().map(|r| monos.iter().map(|m| r.coeff(m)).collect()).collect();
        Ok(Residuals { w, monos, rows })
    }

    pub fn is_trivial(&self) -> bool {
        self.monos.is_empty()
    }

    /// Leftover of `sum_j weight(j) zeta(j, w-j)`.
    pub fn of(&self, weight: impl Fn(i64) -> Rational, jp: Option<Parity>) -> Vec<Rational> {
        let mut acc = vec![Rational::zero(); self.monos.len()];
        for (k, row) in self.rows.iter().enumerate() {
            let j = k as i64 + 2;
            if !parity_admits(jp, j) {
                continue;
            }
            let c = weight(j);
            if c.is_zero() {
                continue;
            }
            for (a, x) in acc.iter_mut().zip(row) {
                *a += &c * x;
            }
        }
        acc
    }

    pub fn of_power(&self, b: &Rational, jp: Option<Parity>) -> Vec<Rational> {
        self.of(|j| rat_pow(b, j), jp)
    }
}

fn constraint_weights(sp: Option<Parity>) -> Result<Vec<Residuals>> {
    (4..=7).filter(|&w| parity_admits(sp, w)).map(Residuals::new).filter(|r| !matches!(r, Ok(r) if r.is_trivial())).collect()
}

fn zero(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Rationals `a` with `|num|, den <= h` for which `sum_j a^j zeta(j, w-j)`
/// has no part outside `zeta(w)`. Always contains 0 (the empty weight).
pub fn solve_power_base(w: i64, h: u32) -> Result<Vec<Rational>> {
    if !(5..=7).contains(&w) {
        return domain(format!("power bases are solved at weights 5..7, got {w}"));
    }
    let res = Residuals::new(w)?;
    // the first nonvanishing coefficient polynomial in `a`
    let poly: Vec<Rational> = (0..res.monos.len())
        .map(|m| res.rows.iter().map(|r| r[m].clone()).collect::<Vec<_>>())
        .find(|p| !zero(p))
        .expect("weight >= 5 has a non-zeta part");
    let lcm = poly.iter().fold(num_bigint::BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<num_bigint::BigInt> = poly.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let low = ints.iter().find(|c| !c.is_zero()).unwrap().abs();
    let high = ints.iter().rev().find(|c| !c.is_zero()).unwrap().abs();
    let mut roots = vec![Rational::zero()];
    for p in 1..=h as i64 {
        if !(&low % p).is_zero() {
            continue;
        }
        for q in 1..=h as i64 {
            if !(&high % q).is_zero() || p.gcd(&q) != 1 {
                continue;
            }
            for r in [rat(p, q), rat(-p, q)] {
                if zero(&res.of_power(&r, None)) {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// `b^v`, written without the power when `b = 1`.
fn power_expr(b: &Rational, v: Expr) -> Expr {
    if b.is_one() {
        Expr::int(1)
    } else {
        Expr::bin(BinOp::Pow, rat_expr(b), v)
    }
}

fn times(c: &Rational, e: Expr) -> Expr {
    if c.is_one() {
        e
    } else if matches!(e, Expr::Int(ref n) if n.is_one()) {
        rat_expr(c)
    } else {
        Expr::bin(BinOp::Mul, rat_expr(c), e)
    }
}

fn parity_label(jp: Option<Parity>, sp: Option<Parity>) -> String {
    format!("j {}, s {}", parity_name(jp), parity_name(sp))
}

/// Exact `k`-th roots of a rational.
fn rat_roots(r: &Rational, k: u32) -> Vec<Rational> {
    let root = |x: &Rational| -> Option<Rational> {
        let n = x.numer().nth_root(k);
        let d = x.denom().nth_root(k);
        let c = Rational::new(n, d);
        (rat_pow(&c, k as i64) == *x).then_some(c)
    };
    if r.is_zero() {
        return vec![Rational::zero()];
    }
    if r.is_negative() {
        return if k % 2 == 1 { root(&-r).map(|c| vec![-c]).unwrap_or_default() } else { Vec::new() };
    }
    match root(r) {
        Some(c) if k % 2 == 0 => vec![c.clone(), -c],
        Some(c) => vec![c],
        None => Vec::new(),
    }
}

/// `a^j`.
pub struct PowerFamily;

impl Family for PowerFamily {
    fn name(&self) -> &'static str {
        "power"
    }

    fn summary(&self) -> &'static str {
        "sum a^j dz(j,s-j); a from the common rational roots at weights 5..7"
    }

    fn propose(&self, cfg: &SearchConfig) -> Result<Vec<Ansatz>> {
        let mut common: Option<Vec<Rational>> = None;
        for w in 5..=7 {
            let r = solve_power_base(w, cfg.height)?;
            common = Some(match common {
                None => r,
                Some(c) => c.into_iter().filter(|x| r.contains(x)).collect(),
            });
        }
        Ok(common
            .unwrap_or_default()
            .into_iter()
            .filter(|a| !a.is_zero())
            .map(|a| Ansatz::new(self.name(), format!("a={a}"), Shape::Plain, power_expr(&a, Expr::var("j"))))
            .collect())
    }
}

/// `(-1)^j a^j` with `a > 0`.
pub struct AlternatingFamily;

impl Family for AlternatingFamily {
    fn name(&self) -> &'static str {
        "alternating"
    }

    fn summary(&self) -> &'static str {
        "sum (-1)^j a^j dz(j,s-j), a > 0, s of any parity"
    }

    fn propose(&self, cfg: &SearchConfig) -> Result<Vec<Ansatz>> {
        let pool: Vec<Rational> = height_pool(cfg.height).into_iter().filter(|a| a.is_positive()).collect();
        let mut out = Vec::new();
        for sp in PARITIES {
            let cons = constraint_weights(sp)?;
            for a in &pool {
                let b = -a;
                if cons.iter().all(|r| zero(&r.of_power(&b, None))) {
                    let sign = Expr::bin(BinOp::Pow, Expr::Neg(Box::new(Expr::int(1))), Expr::var("j"));
                    let w = if a.is_one() { sign } else { Expr::bin(BinOp::Mul, sign, power_expr(a, Expr::var("j"))) };
                    out.push(
                        Ansatz::new(self.name(), format!("a={a}, s {}", parity_name(sp)), Shape::Plain, w)
                            .with_parity(None, sp),
                    );
                }
            }
        }
        Ok(out)
    }
}

/// `a b^j + c^s d^j` under the nine parity restrictions.
pub struct AffineFamily;

impl AffineFamily {
    fn solve_pair(xb: &[Vec<Rational>], xd: &[Vec<Rational>], ws: &[i64], h: u32) -> Option<(Rational, Rational)> {
        // X_b(w) = mu_w X_d(w), and then c^w = -a mu_w
        let mut mus: Vec<(i64, Rational)> = Vec::new();
        for ((b, d), &w) in xb.iter().zip(xd).zip(ws) {
            match (zero(b), zero(d)) {
                (true, true) => continue,
                (true, false) | (false, true) => return None,
                _ => {}
            }
            let k = d.iter().position(|x| !x.is_zero())?;
            let mu = &b[k] / &d[k];
            if b.iter().zip(d).any(|(x, y)| *x != &mu * y) {
                return None;
            }
            mus.push((w, mu));
        }
        if mus.len() < 2 {
            // underdetermined
            return None;
        }
        let (w1, m1) = &mus[0];
        let (w2, m2) = &mus[1];
        for c in rat_roots(&(m2 / m1), (w2 - w1) as u32) {
            if c.is_zero() || !within_height(&c, h) {
                continue;
            }
            let a = -rat_pow(&c, *w1) / m1;
            if mus.iter().all(|(w, mu)| rat_pow(&c, *w) == -&a * mu) {
                return Some((a, c));
            }
        }
        None
    }
}

impl Family for AffineFamily {
    fn name(&self) -> &'static str {
        "affine"
    }

    fn summary(&self) -> &'static str {
        "sum (a b^j + c^s d^j) dz(j,s-j) over nine parity restrictions on j and s"
    }

    fn propose(&self, cfg: &SearchConfig) -> Result<Vec<Ansatz>> {
        let pool = height_pool(cfg.height);
        let mut out = Vec::new();
        for jp in PARITIES {
            for sp in PARITIES {
                let cons = constraint_weights(sp)?;
                let ws: Vec<i64> = cons.iter().map(|r| r.w).collect();
                let xs: Vec<Vec<Vec<Rational>>> =
                    pool.par_iter().map(|b| cons.iter().map(|r| r.of_power(b, jp)).collect()).collect();
                let single: Vec<bool> = xs.iter().map(|x| x.iter().all(|v| zero(v))).collect();
                let tag = parity_label(jp, sp);
                for (b, _) in pool.iter().zip(&single).filter(|(_, s)| **s) {
                    let w = power_expr(b, Expr::var("j"));
                    out.push(Ansatz::new(self.name(), format!("b={b}, c=0, {tag}"), Shape::Plain, w).with_parity(jp, sp));
                }
                let pairs: Vec<Vec<Ansatz>> = (0..pool.len())
                    .into_par_iter()
                    .map(|i| {
                        let mut found = Vec::new();
                        if single[i] {
                            return found;
                        }
                        for k in i + 1..pool.len() {
                            if single[k] {
                                continue;
                            }
                            if let Some((a, c)) = Self::solve_pair(&xs[i], &xs[k], &ws, cfg.height) {
                                let (b, d) = (&pool[i], &pool[k]);
                                let w = Expr::bin(
                                    BinOp::Add,
                                    times(&a, power_expr(b, Expr::var("j"))),
                                    Expr::bin(BinOp::Mul, power_expr(&c, Expr::var("s")), power_expr(d, Expr::var("j"))),
                                );
                                let label = format!("a={a}, b={b}, c={c}, d={d}, {tag}");
                                found.push(Ansatz::new("affine", label, Shape::Plain, w).with_parity(jp, sp));
                            }
                        }
                        found
                    })
                    .collect();
                out.extend(pairs.into_iter().flatten());
            }
        }
        Ok(out)
    }
}

/// `d^j + d^(s-j)` on `dz(2j, 2s-2j)`.
pub struct SymmetricEvenFamily;

impl Family for SymmetricEvenFamily {
    fn name(&self) -> &'static str {
        "symmetric-even"
    }

    fn summary(&self) -> &'static str {
        "sum (d^j + d^(s-j)) dz(2j,2s-2j), j = 1..s-1"
    }

    fn propose(&self, cfg: &SearchConfig) -> Result<Vec<Ansatz>> {
        Ok(height_pool(cfg.height)
            .into_iter()
            .map(|d| {
                let s_j = Expr::bin(BinOp::Sub, Expr::var("s"), Expr::var("j"));
                let w = if d.is_one() {
                    Expr::int(2)
                } else {
                    Expr::bin(BinOp::Add, power_expr(&d, Expr::var("j")), power_expr(&d, s_j))
                };
                Ansatz::new(self.name(), format!("d={d}"), Shape::EvenArg, w)
            })
            .collect())
    }
}

/// Polynomial weights of bounded degree, solved linearly.
pub struct PolyFamily;

fn var_pow(v: &str, e: u32) -> Option<Expr> {
    match e {
        0 => None,
        1 => Some(Expr::var(v)),
        _ => Some(Expr::bin(BinOp::Pow, Expr::var(v), Expr::int(e as i64))),
    }
}

fn product(fs: Vec<Option<Expr>>) -> Expr {
    fs.into_iter().flatten().reduce(|a, b| Expr::bin(BinOp::Mul, a, b)).unwrap_or_else(|| Expr::int(1))
}

/// `sum c_k e_k` with the coefficient signs folded into subtraction.
fn combination(c: &[Rational], basis: &[Expr]) -> Expr {
    let mut out: Option<Expr> = None;
    for (ck, e) in c.iter().zip(basis) {
        if ck.is_zero() {
            continue;
        }
        let t = times(&ck.abs(), e.clone());
        out = Some(match out {
            None if ck.is_negative() => Expr::Neg(Box::new(t)),
            None => t,
            Some(acc) => Expr::bin(if ck.is_negative() { BinOp::Sub } else { BinOp::Add }, acc, t),
        });
    }
    out.unwrap_or_else(|| Expr::int(0))
}

/// Row-reduced, primitive basis of the span of `vs`.
fn canonical_rows(vs: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    if vs.is_empty() {
        return vs;
    }
    let mut m = vs;
    let k = rref(&mut m).len();
    m.truncate(k);
    m.iter().map(|r| primitive(r)).collect()
}

impl PolyFamily {
    /// `s^a j^b`, `a + b <= deg`, j-heavy first within each degree.
    fn plain_basis(deg: u32) -> Vec<(u32, u32)> {
        (0..=deg).flat_map(|t| (0..=t).rev().map(move |b| (t - b, b))).collect()
    }

    /// `s^a (j(s-j))^b`, `a + 2b <= deg`.
    fn symmetric_basis(deg: u32) -> Vec<(u32, u32)> {
        (0..=deg / 2).rev().flat_map(|b| (0..=deg - 2 * b).map(move |a| (a, b))).collect()
    }

    fn plain(&self, deg: u32) -> Result<Vec<Ansatz>> {
        let basis = Self::plain_basis(deg);
        let exprs: Vec<Expr> = basis.iter().map(|&(a, b)| product(vec![var_pow("s", a), var_pow("j", b)])).collect();
        let mut out = Vec::new();
        for jp in PARITIES {
            for sp in PARITIES {
                let mut rows: Vec<Vec<Rational>> = Vec::new();
                for res in constraint_weights(sp)? {
                    let cols: Vec<Vec<Rational>> = basis
                        .iter()
                        .map(|&(a, b)| {
                            let sa = rat_pow(&rint(res.w), a as i64);
                            res.of(|j| &sa * rat_pow(&rint(j), b as i64), jp)
                        })
                        .collect();
                    for m in 0..res.monos.len() {
                        rows.push(cols.iter().map(|c| c[m].clone()).collect());
                    }
                }
                let ns = if rows.is_empty() {
                    (0..basis.len())
                        .map(|k| (0..basis.len()).map(|i| if i == k { Rational::one() } else { Rational::zero() }).collect())
                        .collect()
                } else {
                    nullspace(&rows, basis.len())
                };
                let tag = parity_label(jp, sp);
                let ns = canonical_rows(ns);
                for v in &ns {
                    let w = combination(v, &exprs);
                    out.push(Ansatz::new(self.name(), format!("p={w}, {tag}"), Shape::Plain, w).with_parity(jp, sp));
                }
                if jp.is_none() && sp.is_none() {
                    // pure monomials that cannot close up; certification reports why
                    for (k, e) in exprs.iter().enumerate() {
                        let unit: Vec<Rational> =
                            (0..basis.len()).map(|i| if i == k { Rational::one() } else { Rational::zero() }).collect();
                        if !in_span(&ns, &unit) {
                            out.push(Ansatz::new(self.name(), format!("p={e}, {tag}"), Shape::Plain, e.clone()));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn even_arg(&self, deg: u32, cfg: &SearchConfig) -> Result<Vec<Ansatz>> {
        let basis = Self::symmetric_basis(deg);
        let jsj = || Expr::bin(BinOp::Mul, Expr::var("j"), Expr::bin(BinOp::Sub, Expr::var("s"), Expr::var("j")));
        let exprs: Vec<Expr> = basis
            .iter()
            .map(|&(a, b)| {
                let q = match b {
                    0 => None,
                    1 => Some(jsj()),
                    _ => Some(Expr::bin(BinOp::Pow, jsj(), Expr::int(b as i64))),
                };
                product(vec![var_pow("s", a), q])
            })
            .collect();
        let mut out = Vec::new();
        for shape in [Shape::EvenArgInner, Shape::EvenArg] {
            let probes: Vec<Ansatz> =
                exprs.iter().map(|e| Ansatz::new(self.name(), String::new(), shape, e.clone())).collect();
            let lo = probes[0].min_s();
            let mut rows = Vec::new();
            for s in lo..=cfg.even_exact_max {
                let mut row = Vec::new();
                for p in &probes {
                    let (f, rest) = split_zeta(&p.reduce(s)?, 2 * s)?;
                    debug_assert!(rest.is_zero());
                    row.push(f);
                }
                row.extend(cfg.span.iter().map(|g| -g.at(s)));
                rows.push(row);
            }
            let ns = nullspace(&rows, basis.len() + cfg.span.len());
            let cs: Vec<Vec<Rational>> =
                ns.into_iter().map(|v| v[..basis.len()].to_vec()).filter(|c| !zero(c)).collect();
            for c in canonical_rows(cs) {
                let w = combination(&c, &exprs);
                out.push(Ansatz::new(self.name(), format!("p={w}, {shape}"), shape, w));
            }
        }
        Ok(out)
    }
}

impl Family for PolyFamily {
    fn name(&self) -> &'static str {
        "poly"
    }

    fn summary(&self) -> &'static str {
        "polynomial weights p(s,j) of degree <= deg, plain and on dz(2j,2s-2j)"
    }

    fn propose(&self, cfg: &SearchConfig) -> Result<Vec<Ansatz>> {
        if cfg.deg > 4 {
            return domain("polynomial degree is limited to 4");
        }
        let mut out = self.plain(cfg.deg)?;
        out.extend(self.even_arg(cfg.deg, cfg)?);
        Ok(out)
    }
}
