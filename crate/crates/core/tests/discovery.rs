use mzv_core::corpus::{parse_corpus, parse_expr, reduce_ast, verify_numeric, verify_symbolic, Bindings, Expr, Parity, Status};
use mzv_core::discovery::{
    certify, fit_f, reduce_weighted_sum, search_general, search_poly_weights, solve_power_base, Ansatz, CertStatus,
    Family, Registry, SearchConfig, Shape, SpanFn,
};
use mzv_core::exact::{rat, rint, Rational};
use mzv_core::mp::EvalContext;
use mzv_core::symbolic::{zeta_sym, ConstExpr};
use mzv_core::Error;

fn closed(text: &str) -> ConstExpr {
    reduce_ast(&parse_expr(text, &[]).unwrap(), &Bindings::new()).unwrap()
}

fn weight(text: &str) -> Expr {
    parse_expr(text, &["s", "j"]).unwrap()
}

#[test]
fn weighted_sums_at_small_weights() {
    let one = |_: i64, _: i64| Ok(rint(1));
    assert_eq!(reduce_weighted_sum(&one, 5, None).unwrap(), zeta_sym(5).unwrap());
    let two = |_: i64, j: i64| Ok(rint(2).pow(j as i32));
    let v = reduce_weighted_sum(&two, 4, None).unwrap();
    assert_eq!(v, zeta_sym(4).unwrap().scale(&rint(5)));
    assert_eq!(v, closed("pi^4/18"));
    let alt = |_: i64, j: i64| Ok(rint(if j % 2 == 0 { 1 } else { -1 }));
    assert_eq!(reduce_weighted_sum(&alt, 4, None).unwrap(), zeta_sym(4).unwrap().scale(&rat(1, 2)));
    // odd j only at weight 4: zeta(3,1)
    assert_eq!(reduce_weighted_sum(&one, 4, Some(Parity::Odd)).unwrap(), closed("pi^4/360"));
    assert!(matches!(reduce_weighted_sum(&one, 8, None), Err(Error::Domain(_))));
    let bad = |_: i64, _: i64| Err(Error::Domain("weight is not rational".into()));
    assert!(matches!(reduce_weighted_sum(&bad, 5, None), Err(Error::Domain(_))));
}

#[test]
fn power_bases() {
    let r = |v: &[Rational]| v.to_vec();
    assert_eq!(solve_power_base(5, 16).unwrap(), r(&[rint(0), rint(1), rint(2)]));
    assert_eq!(solve_power_base(7, 16).unwrap(), r(&[rint(0), rint(1), rint(2)]));
    // weight 6 alone also admits -1; weights 5 and 7 exclude it
    assert!(solve_power_base(6, 16).unwrap().contains(&rint(-1)));
    assert_eq!(solve_power_base(5, 1).unwrap(), r(&[rint(0), rint(1)]));
    assert!(solve_power_base(4, 16).is_err());
}

#[test]
fn empty_family_selection_finds_nothing() {
    let cfg = SearchConfig { families: Vec::new(), ..SearchConfig::default() };
    let out = search_general(&cfg).unwrap();
    assert!(out.emitted.is_empty() && out.redundant.is_empty() && out.rejected.is_empty());
    let cfg = SearchConfig::with_families(&["nosuch"]);
    assert!(search_general(&cfg).is_err());
}

#[test]
fn emitted_identities_are_sound() {
    let out = search_general(&SearchConfig::default()).unwrap();
    let ctx = EvalContext::new(40).unwrap();
    assert!(!out.emitted.is_empty());
    for c in &out.emitted {
        let dsl = c.dsl.as_ref().unwrap();
        let ident = parse_corpus(dsl).unwrap().remove(0);
        for s in ident.params[0].lo..=12 {
            let b: Bindings = [("s".to_string(), s)].into_iter().collect();
            if !ident.params[0].admits(s) {
                continue;
            }
            if c.ansatz.total_weight(s) <= 7 {
                let r = verify_symbolic(&ident, &b);
                assert_eq!(r.status, Status::Pass, "{dsl} at s={s}: {r:?}");
            }
            let r = verify_numeric(&ident, &b, &ctx);
            assert!(r.pass, "{dsl} at s={s}: {r:?}");
        }
    }
}

#[test]
fn scaling_an_ansatz_scales_the_fit() {
    let cfg = SearchConfig::default();
    let ctx = EvalContext::new(40).unwrap();
    for (w, k) in [("2^j", "3"), ("4^j + 4^(s-j)", "-2/5")] {
        let shape = if w.contains("s-j") { Shape::EvenArg } else { Shape::Plain };
        let base = Ansatz::new("test", w.into(), shape, weight(w));
        let scaled = Ansatz::new("test", w.into(), shape, weight(&format!("{k}*({w})")));
        let a = certify(base, &cfg, &ctx);
        let b = certify(scaled, &cfg, &ctx);
        assert_eq!(a.status, b.status);
        let kr = parse_expr(k, &[]).unwrap();
        let kr = reduce_ast(&kr, &Bindings::new()).unwrap().as_rational().unwrap();
        let (fa, fb) = (a.f.unwrap(), b.f.unwrap());
        for s in 3..12 {
            assert_eq!(fa.at(s) * &kr, fb.at(s));
        }
    }
    // and a rejection stays a rejection
    let j = certify(Ansatz::new("test", "j".into(), Shape::Plain, weight("j")), &cfg, &ctx);
    let j7 = certify(Ansatz::new("test", "7j".into(), Shape::Plain, weight("7*j")), &cfg, &ctx);
    assert!(!j.survived() && !j7.survived());
}

#[test]
fn linear_weight_is_rejected_for_a_leftover() {
    let cfg = SearchConfig { deg: 1, ..SearchConfig::default() };
    let out = search_poly_weights(1, &cfg).unwrap();
    let j = out.rejected.iter().find(|c| c.weight == "j").expect("the pure j weight is tried");
    match &j.status {
        CertStatus::Rejected(why) => assert!(why.contains("pi^2*z3"), "{why}"),
        s => panic!("{s:?}"),
    }
}

#[test]
fn constant_polynomials_give_the_parity_sums() {
    let out = search_poly_weights(0, &SearchConfig::default()).unwrap();
    let fits: Vec<(Shape, Option<Parity>, String)> =
        out.emitted.iter().map(|c| (c.shape, c.ansatz.s_parity, c.fit.clone().unwrap())).collect();
    assert!(fits.contains(&(Shape::Plain, None, "1".into())));
    assert!(fits.contains(&(Shape::EvenArg, None, "3/4".into())));
    assert!(fits.contains(&(Shape::Plain, Some(Parity::Even), "3/4".into())));
}

#[test]
fn quadratic_weight_is_found() {
    let out = search_poly_weights(2, &SearchConfig::default()).unwrap();
    let c = out.emitted.iter().find(|c| c.shape == Shape::EvenArgInner).unwrap();
    for s in 4..=12 {
        let want: Vec<Rational> =
            (1..s).map(|j| if j == 1 || j == s - 1 { rint(0) } else { rint((2 * j - 1) * (2 * s - 2 * j - 1)) }).collect();
        assert_eq!(c.ansatz.vector(s).unwrap(), want);
        assert_eq!(c.f.as_ref().unwrap().at(s), rat(3, 4) * rint(s - 3));
    }
}

#[test]
fn fitting_span() {
    let pts: Vec<(i64, Rational)> = (3..8).map(|s| (s, rat(3, 4) * rint(s - 3))).collect();
    assert_eq!(fit_f(&pts, &SpanFn::ALL).unwrap().to_string(), "3/4*s - 9/4");
    let pts: Vec<(i64, Rational)> = (3..8).map(|s| (s, rint(s * s * s))).collect();
    assert!(fit_f(&pts, &SpanFn::ALL).is_none());
    assert!(fit_f(&pts, &[SpanFn::One]).is_none());
    assert_eq!("s*4^s".parse::<SpanFn>().unwrap(), SpanFn::SPow4);
}

/// `sum_j 3^j zeta(j, s-j)` never closes up; a registered family runs
/// through the same pipeline.
struct Threes;

impl Family for Threes {
    fn name(&self) -> &'static str {
        "threes"
    }
    fn summary(&self) -> &'static str {
        "3^j"
    }
    fn propose(&self, _: &SearchConfig) -> mzv_core::Result<Vec<Ansatz>> {
        Ok(vec![
            Ansatz::new("threes", "3".into(), Shape::Plain, weight("3^j")),
            Ansatz::new("threes", "1".into(), Shape::Plain, weight("1")),
            Ansatz::new("threes", "5".into(), Shape::Plain, weight("5")),
        ])
    }
}

#[test]
fn registry_accepts_new_families() {
    let mut reg = Registry::standard();
    reg.register(Threes);
    assert!(reg.names().contains(&"threes"));
    let out = reg.search(&SearchConfig::with_families(&["threes"])).unwrap();
    assert_eq!(out.rejected.len(), 1);
    assert_eq!(out.emitted.len(), 1);
    assert_eq!(out.redundant.len(), 1);
    assert_eq!(out.emitted[0].id.as_deref(), Some("S01"));
}

#[test]
fn searches_are_deterministic() {
    let cfg = SearchConfig::with_families(&["affine", "symmetric-even"]);
    let a = serde_json::to_string(&search_general(&cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&search_general(&cfg).unwrap()).unwrap();
    assert_eq!(a, b);
}
