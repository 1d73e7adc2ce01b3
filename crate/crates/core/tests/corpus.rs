use mzv_core::corpus::{
    builtin_corpus, instances, parse_corpus, report_json, report_tsv, run_suite, tolerance_log10, verify_numeric,
    verify_symbolic, Bindings, Identity, Mode, Status, SuiteConfig,
};
use mzv_core::mp::EvalContext;
use mzv_core::Error;

fn one(text: &str) -> Identity {
    let mut v = parse_corpus(text).unwrap();
    assert_eq!(v.len(), 1);
    v.remove(0)
}

fn env(pairs: &[(&str, i64)]) -> Bindings {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn entry(id: &str) -> Identity {
    builtin_corpus().unwrap().into_iter().find(|i| i.id == id).unwrap()
}

#[test]
fn builtin_corpus_has_all_entries() {
    let c = builtin_corpus().unwrap();
    assert_eq!(c.len(), 46);
    let ids: Vec<String> = (1..=46).map(|k| format!("C{k:02}")).collect();
    assert_eq!(c.iter().map(|i| i.id.clone()).collect::<Vec<_>>(), ids);
    let report: Vec<&str> = c.iter().filter(|i| i.expect_report).map(|i| i.id.as_str()).collect();
    assert_eq!(report, ["C07", "C09", "C10", "C37", "C41"]);
}

#[test]
fn linear_weight_holds_with_homogeneous_right_side() {
    let ctx = EvalContext::new(40).unwrap();
    let fixed = one(
        "identity X : forall s>=3 : \
         sum(j=2..s-1, j*dz(j,s-j)) == 2*zeta(s) + dz(2,s-2) - (s-2)*dz(s-1,1)",
    );
    for s in 3..=10 {
        let r = verify_numeric(&fixed, &env(&[("s", s)]), &ctx);
        assert!(r.pass, "s={s}: {r:?}");
    }
    // the printed form is only reported
    let c09 = entry("C09");
    let r = verify_numeric(&c09, &env(&[("s", 6)]), &ctx);
    assert_eq!(r.status, Status::Fail);
    assert!(!r.is_blocking());
}

#[test]
fn shifted_factorial_weights_hold_with_plain_hypergeometric_bracket() {
    let ctx = EvalContext::new(40).unwrap();
    let fixed = one(
        "identity X : forall n>=2 : \
         sum(k=1..n-1, 4*fact(n+1+abs(n-2*k))/(fact(n)*fact(1+abs(n-2*k)))*dz(2*k,2*n-2*k)) \
         == (1+(-1)^n)*(1-n)*zeta(n)^2 \
            + zeta(2*n)*(n+3+(-1)^n*(n-1+2^(-n)) + 2*binom(2*n+1,n)*hyp2f1sp(n))",
    );
    for n in 2..=10 {
        let r = verify_numeric(&fixed, &env(&[("n", n)]), &ctx);
        assert!(r.pass, "n={n}: {r:?}");
    }
    let r = verify_numeric(&entry("C41"), &env(&[("n", 4)]), &ctx);
    assert_eq!(r.status, Status::Fail);
}

#[test]
fn corrupted_constant_fails_the_suite() {
    let good = entry("C02");
    let bad = one("identity C02 : forall s>=3 : sum(j=2..s-1, dz(j,s-j)) == (1 + 1/10^30)*zeta(s)");
    let cfg = SuiteConfig { max_param: 8, ..SuiteConfig::default() };
    assert!(run_suite(&[good], &cfg).unwrap().success());
    let res = run_suite(&[bad], &cfg).unwrap();
    assert!(!res.success());
    assert!(res.summary.blocking > 0);
    // symbolic checks catch it too wherever a closed form exists
    let sym = res.reports.iter().find(|r| r.mode == Mode::Symbolic && r.params["s"] == 5).unwrap();
    assert_eq!(sym.status, Status::Fail);
}

#[test]
fn outer_character_relation_termwise() {
    let ctx = EvalContext::new(40).unwrap();
    let c45 = entry("C45");
    assert_eq!(c45.equations.len(), 4);
    for (k, eq) in c45.equations.iter().enumerate() {
        let single = Identity { equations: vec![eq.clone()], ..c45.clone() };
        for b in instances(&single, 10) {
            let r = verify_numeric(&single, &b, &ctx);
            assert!(r.pass, "equation {k} at {b:?}: {r:?}");
        }
    }
    assert_eq!(instances(&c45, 10).len(), 16);
}

#[test]
fn residual_shrinks_with_precision() {
    let lo = EvalContext::new(30).unwrap();
    let hi = EvalContext::new(50).unwrap();
    for id in ["C01", "C08", "C25", "C43"] {
        let ident = entry(id);
        let b = instances(&ident, 6).into_iter().last().unwrap();
        let a = verify_numeric(&ident, &b, &lo).residual_log10.unwrap();
        let c = verify_numeric(&ident, &b, &hi).residual_log10.unwrap();
        assert!(a - c >= 8.0, "{id}: 1e{a} -> 1e{c}");
    }
}

#[test]
fn symbolic_checks_where_reducible() {
    let c02 = entry("C02");
    let r = verify_symbolic(&c02, &env(&[("s", 7)]));
    assert_eq!(r.status, Status::Pass);
    assert_eq!(r.exact_equal, Some(true));
    let r = verify_symbolic(&c02, &env(&[("s", 9)]));
    assert_eq!(r.status, Status::NumericOnly);
    assert!(r.pass);
}

#[test]
fn suite_reports_are_deterministic() {
    let corpus = builtin_corpus().unwrap();
    let cfg = SuiteConfig {
        ids: Some(vec!["C02".into(), "C25".into(), "C09".into()]),
        max_param: 7,
        ..SuiteConfig::default()
    };
    let a = run_suite(&corpus, &cfg).unwrap();
    let b = run_suite(&corpus, &cfg).unwrap();
    let ja = report_json(&a, &cfg, None);
    assert_eq!(ja, report_json(&b, &cfg, None));
    assert!(!ja.contains("millis"));
    assert!(!ja.contains("timestamp"));
    let v: serde_json::Value = serde_json::from_str(&ja).unwrap();
    assert_eq!(v["schema"], 1);
    assert!(report_json(&a, &cfg, Some("t0")).contains("\"timestamp\": \"t0\""));
    let tsv = report_tsv(&a);
    let lines: Vec<&str> = tsv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("id\t"));
    assert!(lines.iter().any(|l| l.starts_with("C09") && l.ends_with("report")));
}

#[test]
fn unknown_ids_are_rejected() {
    let cfg = SuiteConfig { ids: Some(vec!["C99".into()]), ..SuiteConfig::default() };
    assert!(matches!(run_suite(&builtin_corpus().unwrap(), &cfg), Err(Error::Other(_))));
}

#[test]
fn parse_errors_carry_positions() {
    let err = parse_corpus("identity X : forall s>=2 :\n    zeta(s) == zeta(s,\n").unwrap_err();
    assert!(matches!(err, Error::Parse { .. }), "{err:?}");
    let err = parse_corpus("identity X : forall s>=2 : nosuch(s) == 1").unwrap_err();
    match err {
        Error::Parse { line, col, .. } => assert_eq!((line, col), (1, 28)),
        e => panic!("{e:?}"),
    }
}

#[test]
fn tolerance_follows_node_count() {
    assert_eq!(tolerance_log10(40, 1), -38.0);
    assert_eq!(tolerance_log10(40, 100), -36.0);
    assert_eq!(tolerance_log10(40, 101), -35.0);
}
