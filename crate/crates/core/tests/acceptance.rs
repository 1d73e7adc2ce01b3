//! One PASS/FAIL line per acceptance criterion; the test fails if any does.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use mzv_core::corpus::{
    builtin_corpus, eval_ast, parse_expr, reduce_ast, run_suite, verify_numeric, Bindings, Mode,
    Parity, SuiteConfig,
};
use mzv_core::discovery::{search_general, search_poly_weights, solve_power_base, CandidateIdentity, SearchConfig};
use mzv_core::exact::{bernoulli, euler_number, hyp2f1_special, inv_binomial_sum, rat, rint, Rational};
use mzv_core::mp::oracle::{brute_force_oracle, OracleTarget};
use mzv_core::mp::{
    char_dzeta_num, dzeta_num, harmonic_sum_num, periodic_l_num, witten_num, Approx, CharId, EvalContext,
    HarmonicKind,
};
use mzv_core::reductions::{dzeta_reduce, witten_convergent};
use mzv_core::Error;

type Check = Result<String, String>;

fn ctx(p: u32) -> EvalContext {
    EvalContext::new(p).unwrap()
}

fn log_diff(a: &Approx, b: &Approx) -> f64 {
    (&a.value - &b.value).abs().log10_abs()
}

fn closed_form(text: &str, c: &EvalContext) -> Approx {
    let e = parse_expr(text, &[]).unwrap();
    eval_ast(&e, &Bindings::new(), c).unwrap().0.to_approx(c)
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn criterion_1() -> Check {
    let corpus = builtin_corpus().map_err(|e| e.to_string())?;
    let start = Instant::now();
    let res = run_suite(&corpus, &SuiteConfig::default()).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    ensure(took <= Duration::from_secs(600), format!("took {took:?}"))?;
    ensure(res.summary.blocking == 0, format!("{} blocking failures", res.summary.blocking))?;
    let mut worst = f64::NEG_INFINITY;
    for r in res.reports.iter().filter(|r| r.must_pass && r.mode == Mode::Numeric) {
        let l = r.residual_log10.ok_or(format!("{} has no residual", r.id))?;
        ensure(l <= -30.0, format!("{} {:?} residual 1e{l}", r.id, r.params))?;
        worst = worst.max(l);
    }
    for id in ["C07", "C10", "C37"] {
        let ident = corpus.iter().find(|i| i.id == id).ok_or(format!("{id} missing"))?;
        ensure(ident.expect_report, format!("{id} should be report-only"))?;
        let n = res
            .reports
            .iter()
            .filter(|r| r.id == id && r.mode == Mode::Numeric && r.residual_log10.is_some())
            .count();
        ensure(n > 0, format!("{id} produced no residual report"))?;
    }
    Ok(format!("{} checks in {:.1}s, worst must-pass residual 1e{worst}", res.summary.checks, took.as_secs_f64()))
}

fn criterion_2() -> Check {
    let c = ctx(40);
    let table = [
        ((2, 1), "z3"),
        ((2, 2), "pi^4/120"),
        ((3, 1), "pi^4/360"),
        ((4, 1), "2*z5 - zeta(2)*z3"),
        ((3, 2), "3*zeta(2)*z3 - 11/2*z5"),
        ((2, 3), "9/2*z5 - 2*zeta(2)*z3"),
    ];
    let mut worst = f64::NEG_INFINITY;
    for ((a, b), form) in table {
        let want = reduce_ast(&parse_expr(form, &[]).unwrap(), &Bindings::new()).unwrap();
        let got = dzeta_reduce(a, b).map_err(|e| e.to_string())?;
        ensure(got == want, format!("dz({a},{b}) reduced to {got}, expected {want}"))?;
        let l = log_diff(&dzeta_num(a, b, &c).unwrap(), &closed_form(form, &c));
        ensure(l <= -30.0, format!("dz({a},{b}) residual 1e{l}"))?;
        worst = worst.max(l);
    }
    ensure(matches!(dzeta_reduce(5, 3), Err(Error::NotReducible(_))), "dz(5,3) should not reduce")?;
    Ok(format!("6 reductions exact, worst residual 1e{worst:.1}, dz(5,3) not reducible"))
}

fn criterion_3() -> Check {
    let c = ctx(40);
    let cases: Vec<(&str, Approx, &str)> = vec![
        ("sum H_2n/n^4", harmonic_sum_num(HarmonicKind::HalfIndex, 2, &c).unwrap(), "37/4*z5 - 2/3*pi^2*z3"),
        (
            "sum H_n/(2n+1)^4",
            harmonic_sum_num(HarmonicKind::OddDenom, 4, &c).unwrap(),
            "(372*z5 - 21*pi^2*z3 - 2*pi^4*log2)/96",
        ),
        (
            "sum H_n/(2n+1)^5",
            harmonic_sum_num(HarmonicKind::OddDenom, 5, &c).unwrap(),
            "(pi^6 - 294*z3^2 - 744*log2*z5)/384",
        ),
        ("alt (2,1)", char_dzeta_num(CharId::TwoB, CharId::One, 2, 1, &c).unwrap(), "-z3/8"),
        ("alt (2,2) both", char_dzeta_num(CharId::TwoB, CharId::TwoB, 2, 2, &c).unwrap(), "-3/16*zeta(4)"),
        (
            "alt (2,2)",
            char_dzeta_num(CharId::TwoB, CharId::One, 2, 2, &c).unwrap(),
            "log2^4/6 - log2^2*pi^2/6 + 7/2*log2*z3 - 13/288*pi^4 + 4*li4h",
        ),
    ];
    let mut worst = f64::NEG_INFINITY;
    for (name, got, form) in cases {
        let l = log_diff(&got, &closed_form(form, &c));
        ensure(l <= -30.0, format!("{name}: residual 1e{l}"))?;
        worst = worst.max(l);
    }
    Ok(format!("6 constants, worst residual 1e{worst:.1}"))
}

/// Independent reference values for the acceptance criteria.
mod oracle {
    use super::*;

    pub fn binom(n: i64, k: i64) -> BigInt {
        if k < 0 || k > n {
            return BigInt::zero();
        }
        let mut r = BigInt::one();
        for i in 0..k {
            r = r * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        r
    }

    pub fn fact(n: i64) -> BigInt {
        (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
    }

    pub fn big(n: BigInt) -> Rational {
        Rational::from_integer(n)
    }

    /// Akiyama-Tanigawa, which yields `B_1 = +1/2`.
    pub fn bernoulli_at(n: usize) -> Rational {
        let mut a = vec![Rational::zero(); n + 1];
        for m in 0..=n {
            a[m] = rat(1, m as i64 + 1);
            for j in (1..=m).rev() {
                a[j - 1] = rint(j as i64) * (&a[j - 1] - &a[j]);
            }
        }
        a[0].clone()
    }

    /// `sec x + tan x` coefficients by the boustrophedon (Seidel) triangle;
    /// the even ones, signed, are the Euler numbers.
    pub fn euler_at(n: usize) -> BigInt {
        let mut row = vec![BigInt::one()];
        for _ in 0..n {
            let mut next = vec![BigInt::zero()];
            for x in row.iter().rev() {
                let v = next.last().unwrap() + x;
                next.push(v);
            }
            row = next;
        }
        let zigzag = row.last().unwrap().clone();
        if n % 2 == 1 {
            BigInt::zero()
        } else if n % 4 == 0 {
            zigzag
        } else {
            -zigzag
        }
    }

    pub fn harmonic(n: i64) -> Rational {
        (1..=n).map(|k| rat(1, k)).sum()
    }

    /// `2F1(1, 2n+2; n+2; -1)` through Pfaff's transformation, which turns it
    /// into the terminating `1/2 * 2F1(1, -n; n+2; 1/2)`.
    pub fn hyp_special(n: i64) -> Rational {
        let mut term = Rational::one();
        let mut acc = Rational::zero();
        for k in 0..=n {
            acc += &term;
            // (1)_k (-n)_k / ((n+2)_k k!) (1/2)^k
            term = term * rint(k - n) / rint(n + 2 + k) * rat(1, 2);
        }
        acc / rint(2)
    }
}

fn criterion_5() -> Check {
    use oracle::*;
    // B_n against an independent construction, then the defining convolution
    for n in 0..=40usize {
        let mut want = bernoulli_at(n);
        if n == 1 {
            want = -want;
        }
        ensure(bernoulli(n) == want, format!("B_{n} = {} differs from {want}", bernoulli(n)))?;
    }
    for n in 1..=40i64 {
        let s: Rational = (0..=n).map(|k| big(binom(n + 1, k)) * bernoulli(k as usize)).sum();
        ensure(s.is_zero(), format!("convolution fails at n={n}"))?;
    }
    let b = |k: i64| bernoulli(k as usize);
    for n in 2..=25i64 {
        let lhs: Rational = (1..n)
            .map(|k| (rint(1) - big(binom(2 * n, 2 * k))) * b(2 * k) * b(2 * n - 2 * k) / rint(2 * k * (2 * n - 2 * k)))
            .sum();
        ensure(lhs == harmonic(2 * n) / rint(n) * b(2 * n), format!("first recursion fails at n={n}"))?;
    }
    for n in 3..=25i64 {
        let lhs: Rational =
            (1..=n - 2).map(|k| (rint(n) - big(binom(2 * n, 2 * k))) * b(2 * k) * b(2 * n - 2 * k - 2)).sum();
        ensure(lhs == rint((n - 1) * (2 * n - 1)) * b(2 * n - 2), format!("twin recursion fails at n={n}"))?;
    }
    for n in 0..=30usize {
        ensure(euler_number(n) == euler_at(n), format!("E_{n} differs"))?;
    }
    for n in 2..=30i64 {
        let lhs: BigInt = (0..=n - 2)
            .map(|k| binom(n - 2, k) * euler_number(k as usize) * euler_number((n - 2 - k) as usize))
            .sum();
        let two_n = BigInt::one() << n as usize;
        let rhs = big(&two_n * (&two_n - 1)) * b(n) / rint(n);
        ensure(big(lhs) == rhs, format!("Euler convolution fails at n={n}"))?;
    }
    let mut parities = BTreeSet::new();
    for n in 0..=30i64 {
        for m in 0..=n {
            let d = n - m;
            let direct: Rational = (0..=m).map(|k| rat(if k % 2 == 0 { 1 } else { -1 }, 1) / big(binom(n, k))).sum();
            let sign = if m % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let closed =
                big(fact(n + 1) + sign * fact(m + 1) * fact(d)) / (rint(n + 2) * big(fact(n)));
            ensure(direct == closed, format!("inverse binomial closed form fails at m={m}, d={d}"))?;
            ensure(inv_binomial_sum(n as u64, m as u64) == closed, format!("inv_binomial_sum({n},{m})"))?;
            parities.insert(m % 2);
        }
    }
    ensure(parities.len() == 2, "both parities of m")?;
    // f(n) obeys 4 f(n) - 2 f(n-1) = 3 (-1)^n C(2n,n), f(1) = -1, and ties to the 2F1 value
    let f = |n: i64| -> Rational {
        (0..=n / 2)
            .map(|k| {
                let sgn = if n % 2 == 0 { 1 } else { -1 };
                rat(sgn * n, 2 * (n - k)) * big(binom(2 * n - 2 * k, n - 2 * k))
            })
            .sum()
    };
    ensure(f(1) == rint(-1), "f(1) = -1")?;
    for n in 2..=20i64 {
        let sgn = if n % 2 == 0 { 1 } else { -1 };
        ensure(rint(4) * f(n) - rint(2) * f(n - 1) == rint(3 * sgn) * big(binom(2 * n, n)), format!("recursion at n={n}"))?;
        let alt: Rational = (0..=n).map(|k| rint(if k % 2 == 0 { 1 } else { -1 }) * big(binom(n + k, k))).sum();
        ensure(f(n) == alt, format!("alternating sum at n={n}"))?;
        let h = hyp_special(n);
        ensure(hyp2f1_special(n as u64) == h, format!("2F1 value at n={n}"))?;
        let via_h = Rational::new(BigInt::one(), BigInt::one() << (n + 1) as usize)
            + rint(sgn) * big(binom(2 * n + 1, n)) * h;
        ensure(f(n) == via_h, format!("2F1 relation at n={n}"))?;
    }
    Ok("Bernoulli n<=40, recursions n<=25, Euler n<=30, inverse binomials n<=30, 2F1 n<=20".into())
}

fn criterion_4() -> Check {
    // power bases
    let mut common: Option<BTreeSet<Rational>> = None;
    for w in 5..=7 {
        let r: BTreeSet<Rational> = solve_power_base(w, 16).unwrap().into_iter().filter(|a| !a.is_zero()).collect();
        common = Some(match common {
            None => r,
            Some(c) => c.intersection(&r).cloned().collect(),
        });
    }
    let bases = common.unwrap();
    ensure(bases == [rint(1), rint(2)].into_iter().collect(), format!("power bases {bases:?}"))?;

    let cfg = SearchConfig::default();
    let vec_of = |c: &CandidateIdentity, s: i64| c.ansatz.vector(s).unwrap();
    // the known identities as (even-argument, s even only, weight, f)
    type W = fn(i64, i64) -> Rational;
    type F = fn(i64) -> Rational;
    let known: Vec<(&str, bool, bool, W, F)> = vec![
        ("sum formula", false, false, |_, _| rint(1), |_| rint(1)),
        ("powers of two", false, false, |_, j| rint(2).pow(j as i32), |s| rint(s + 1)),
        ("alternating", false, true, |_, j| rint(if j % 2 == 0 { 1 } else { -1 }), |_| rat(1, 2)),
        ("even arguments", true, false, |_, _| rint(1), |_| rat(3, 4)),
        (
            "symmetric fours",
            true,
            false,
            |s, j| rint(4).pow(j as i32) + rint(4).pow((s - j) as i32),
            |s| rint(s) + rat(4, 3) + rat(2, 3) * rint(4).pow((s - 1) as i32),
        ),
        (
            "quadratic",
            true,
            false,
            |s, j| if j == 1 || j == s - 1 { rint(0) } else { rint((2 * j - 1) * (2 * s - 2 * j - 1)) },
            |s| rat(3, 4) * rint(s - 3),
        ),
    ];
    // emitted candidate equal, up to one scalar, to known identity k
    let matches = |c: &CandidateIdentity, k: &(&str, bool, bool, W, F)| -> bool {
        if c.shape.is_even_arg() != k.1 {
            return false;
        }
        let mut scale: Option<Rational> = None;
        let f = c.f.as_ref().unwrap();
        for s in 4..=10 {
            if !c.ansatz.admits(s) || (k.2 && s % 2 == 1) {
                continue;
            }
            let first = if k.1 { 1 } else { 2 };
            let want: Vec<Rational> = (first..s).map(|j| k.3(s, j)).collect();
            let got = vec_of(c, s);
            let Some(i) = want.iter().position(|x| !x.is_zero()) else { return false };
            let l = &got[i] / &want[i];
            if l.is_zero() || scale.as_ref().is_some_and(|x| *x != l) {
                return false;
            }
            if got.iter().zip(&want).any(|(g, w)| *g != &l * w) || f.at(s) != &l * k.4(s) {
                return false;
            }
            scale = Some(l);
        }
        if k.2 {
            c.ansatz.s_parity == Some(Parity::Even)
        } else {
            c.ansatz.s_parity.is_none()
        }
    };
    let find = |out: &[CandidateIdentity], name: &str| -> bool {
        let k = known.iter().find(|k| k.0 == name).unwrap();
        out.iter().any(|c| matches(c, k))
    };

    let affine = search_general(&SearchConfig::with_families(&["affine"])).map_err(|e| e.to_string())?;
    for name in ["sum formula", "powers of two"] {
        ensure(find(&affine.emitted, name), format!("affine misses the {name}"))?;
    }
    let alt = search_general(&SearchConfig::with_families(&["alternating"])).map_err(|e| e.to_string())?;
    ensure(find(&alt.emitted, "alternating"), "alternating family misses its identity")?;
    let sym = search_general(&SearchConfig::with_families(&["symmetric-even"])).map_err(|e| e.to_string())?;
    ensure(find(&sym.emitted, "symmetric fours"), "symmetric-even misses d=4")?;
    let poly = search_poly_weights(2, &cfg).map_err(|e| e.to_string())?;
    ensure(find(&poly.emitted, "quadratic"), "poly deg 2 misses the quadratic weight")?;

    let all = search_general(&cfg).map_err(|e| e.to_string())?;
    for c in &all.emitted {
        ensure(known.iter().any(|k| matches(c, k)), format!("unexpected survivor {} {}", c.family, c.label))?;
    }
    ensure(all.emitted.len() == known.len(), format!("{} emitted, {} known", all.emitted.len(), known.len()))?;
    let ap: Vec<_> = all.emitted.iter().filter(|c| c.family == "affine" || c.family == "power").collect();
    ensure(ap.len() == 3, format!("affine and power emit {} identities", ap.len()))?;
    Ok(format!(
        "bases {{1, 2}}; {} emitted ({} redundant, {} rejected), all known",
        all.emitted.len(),
        all.redundant.len(),
        all.rejected.len()
    ))
}

fn criterion_6() -> Check {
    let c = ctx(40);
    let limit = (4.0f64).log10() - 40.0;
    let mut worst = f64::NEG_INFINITY;
    for p in CharId::ALL {
        for q in CharId::ALL {
            let pq = p.periodic().mul(&q.periodic());
            for s in 2..=5i64 {
                for t in 2..=5i64 {
                    let lhs = char_dzeta_num(p, q, s, t, &c).unwrap().add(&char_dzeta_num(q, p, t, s, &c).unwrap());
                    let lp = periodic_l_num(&p.periodic(), s as u32, &c).unwrap();
                    let lq = periodic_l_num(&q.periodic(), t as u32, &c).unwrap();
                    let rhs = lp.mul(&lq, c.ulp()).sub(&periodic_l_num(&pq, (s + t) as u32, &c).unwrap());
                    let l = log_diff(&lhs, &rhs);
                    ensure(l <= limit, format!("[{p},{q}]({s},{t}) residual 1e{l}"))?;
                    worst = worst.max(l);
                }
            }
        }
    }
    Ok(format!("256 cases, worst residual 1e{worst:.1}"))
}

fn criterion_7() -> Check {
    let c = ctx(40);
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut done = 0;
    let mut kinds = [0; 3];
    while done < 20 {
        let kind = done % 3;
        let (target, acc) = match kind {
            0 => {
                let (a, b) = (rng.gen_range(2..=6), rng.gen_range(1..=5));
                (OracleTarget::Dz(a, b), dzeta_num(a, b, &c))
            }
            1 => {
                let p = CharId::ALL[rng.gen_range(0..4)];
                let q = CharId::ALL[rng.gen_range(0..4)];
                let (s, t) = (rng.gen_range(2..=6), rng.gen_range(1..=5));
                (OracleTarget::Char(p, q, s, t), char_dzeta_num(p, q, s, t, &c))
            }
            _ => {
                let (r, s, t) = (rng.gen_range(0..=4), rng.gen_range(0..=4), rng.gen_range(0..=4));
                if !witten_convergent(r, s, t) {
                    continue;
                }
                (OracleTarget::Witten(r, s, t), witten_num(r, s, t, &c))
            }
        };
        let acc = acc.map_err(|e| format!("{target:?}: {e}"))?;
        let o = brute_force_oracle(target, 100_000).map_err(|e| format!("{target:?}: {e}"))?;
        let d = (acc.value.to_f64() - o.value).abs();
        ensure(d <= o.bound, format!("{target:?}: |diff| {d:e} exceeds oracle bound {:e}", o.bound))?;
        kinds[kind] += 1;
        done += 1;
    }
    Ok(format!("20 tuples ({} dz, {} character, {} Witten) within the oracle bound", kinds[0], kinds[1], kinds[2]))
}

fn criterion_8() -> Check {
    let corpus = builtin_corpus().map_err(|e| e.to_string())?;
    let env: Bindings = [("s".to_string(), 8)].into_iter().collect();
    let (lo, hi) = (ctx(30), ctx(50));
    let mut least = f64::INFINITY;
    for id in ["C02", "C03", "C04", "C05"] {
        let ident = corpus.iter().find(|i| i.id == id).unwrap();
        let a = verify_numeric(ident, &env, &lo).residual_log10.ok_or(format!("{id} at P=30"))?;
        let b = verify_numeric(ident, &env, &hi).residual_log10.ok_or(format!("{id} at P=50"))?;
        ensure(a - b >= 8.0, format!("{id}: 1e{a} -> 1e{b}"))?;
        least = least.min(a - b);
    }
    Ok(format!("smallest shrink 1e{least:.1}"))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Check); 8] = [
        (1, "full corpus run", criterion_1),
        (2, "closed-form table", criterion_2),
        (3, "harmonic and alternating constants", criterion_3),
        (4, "search reproduction", criterion_4),
        (5, "exact integer and rational suites", criterion_5),
        (6, "reflection sweep", criterion_6),
        (7, "oracle equivalence", criterion_7),
        (8, "precision scaling", criterion_8),
    ];
    let mut failed = Vec::new();
    for (n, name, f) in criteria {
        let start = Instant::now();
        match f() {
            Ok(detail) => println!("PASS {n} {name}: {detail} [{:.1}s]", start.elapsed().as_secs_f64()),
            Err(why) => {
                println!("FAIL {n} {name}: {why}");
                failed.push(n);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
