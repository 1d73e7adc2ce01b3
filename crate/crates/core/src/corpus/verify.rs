use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ast::Identity;
use super::eval::{eval_ast, reduce_ast, Bindings};
use crate::error::{Error, Result};
use crate::mp::{EvalContext, MPReal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Numeric,
    Symbolic,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Symbolic check impossible: some object has no closed form in scope.
    NumericOnly,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub id: String,
    pub params: Bindings,
    pub mode: Mode,
    pub status: Status,
    pub pass: bool,
    /// `false` for entries marked `expect: report`.
    pub must_pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual_log10: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance_log10: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_equal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cause: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<f64>,
}

impl VerifyReport {
    fn new(ident: &Identity, params: &Bindings, mode: Mode) -> Self {
        VerifyReport {
            id: ident.id.clone(),
            params: params.clone(),
            mode,
            status: Status::Error,
            pass: false,
            must_pass: !ident.expect_report,
            residual: None,
            residual_log10: None,
            tolerance_log10: None,
            exact_equal: None,
            cause: None,
            millis: None,
        }
    }

    /// A failure that should fail the suite.
    pub fn is_blocking(&self) -> bool {
        self.must_pass && matches!(self.status, Status::Fail | Status::Error)
    }
}

/// `10^-(P - ceil(log10 nodes) - 2)`, as a log10.
pub fn tolerance_log10(digits: u32, nodes: usize) -> f64 {
    -(digits as f64 - (nodes.max(1) as f64).log10().ceil() - 2.0)
}

/// All bindings of the identity's parameters with values at most `max_param`.
pub fn instances(ident: &Identity, max_param: i64) -> Vec<Bindings> {
    let mut out = vec![Bindings::new()];
    for p in &ident.params {
        let hi = p.hi.map_or(max_param, |h| h.min(max_param));
        let mut next = Vec::new();
        for b in &out {
            for v in p.lo..=hi {
                if p.admits(v) {
                    let mut nb = b.clone();
                    nb.insert(p.name.clone(), v);
                    next.push(nb);
                }
            }
        }
        out = next;
    }
    out
}

pub fn verify_numeric(ident: &Identity, params: &Bindings, ctx: &EvalContext) -> VerifyReport {
    let start = Instant::now();
    let mut rep = VerifyReport::new(ident, params, Mode::Numeric);
    let outcome = (|| -> Result<(MPReal, usize)> {
        let mut worst: Option<MPReal> = None;
        let mut nodes = 0usize;
        for (l, r) in &ident.equations {
            let (a, na) = eval_ast(l, params, ctx)?;
            let (b, nb) = eval_ast(r, params, ctx)?;
            nodes = nodes.max(na + nb);
            let d = (&a.to_approx(ctx).value - &b.to_approx(ctx).value).abs();
            if worst.as_ref().map_or(true, |w| d.cmp_value(w).is_gt()) {
                worst = Some(d);
            }
        }
        Ok((worst.unwrap_or_else(|| ctx.zero()), nodes))
    })();
    match outcome {
        Ok((resid, nodes)) => {
            let tol = tolerance_log10(ctx.digits, nodes);
            let l = resid.log10_abs();
            rep.residual = Some(resid.to_sci(3));
            rep.residual_log10 = Some(if l.is_finite() { (l * 100.0).round() / 100.0 } else { -9999.0 });
            rep.tolerance_log10 = Some(tol);
            rep.pass = l <= tol;
            rep.status = if rep.pass { Status::Pass } else { Status::Fail };
        }
        Err(e) => rep.cause = Some(e.to_string()),
    }
    rep.millis = Some(start.elapsed().as_secs_f64() * 1e3);
    rep
}

pub fn verify_symbolic(ident: &Identity, params: &Bindings) -> VerifyReport {
    let start = Instant::now();
    let mut rep = VerifyReport::new(ident, params, Mode::Symbolic);
    let outcome = (|| -> Result<Option<String>> {
        for (l, r) in &ident.equations {
            let a = reduce_ast(l, params)?;
            let b = reduce_ast(r, params)?;
            if a != b {
                return Ok(Some(format!("{a}  !=  {b}")));
            }
        }
        Ok(None)
    })();
    match outcome {
        Ok(None) => {
            rep.exact_equal = Some(true);
            rep.pass = true;
            rep.status = Status::Pass;
        }
        Ok(Some(diff)) => {
            rep.exact_equal = Some(false);
            rep.status = Status::Fail;
            rep.cause = Some(diff);
        }
        Err(Error::NotReducible(m)) => {
            rep.status = Status::NumericOnly;
            rep.pass = true;
            rep.cause = Some(m);
        }
        Err(e) => rep.cause = Some(e.to_string()),
    }
    rep.millis = Some(start.elapsed().as_secs_f64() * 1e3);
    rep
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    /// `None` selects every identity.
    pub ids: Option<Vec<String>>,
    pub max_param: i64,
    pub digits: u32,
    pub mode: Mode,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { ids: None, max_param: 10, digits: 40, mode: Mode::Both }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub identities: usize,
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub numeric_only: usize,
    pub errors: usize,
    /// failures or errors in must-pass entries
    pub blocking: usize,
    /// failures in `expect: report` entries
    pub reported: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub reports: Vec<VerifyReport>,
    pub summary: Summary,
}

impl SuiteResult {
    pub fn success(&self) -> bool {
        self.summary.blocking == 0
    }
}

/// Verify every selected identity over its parameter range. Work fans out
/// across (identity, binding) pairs; reports keep corpus order.
pub fn run_suite(corpus: &[Identity], cfg: &SuiteConfig) -> Result<SuiteResult> {
    let ctx = EvalContext::new(cfg.digits)?;
    let selected: Vec<&Identity> = match &cfg.ids {
        None => corpus.iter().collect(),
        Some(ids) => {
            for id in ids {
                if !corpus.iter().any(|i| &i.id == id) {
                    return Err(Error::Other(format!("no identity with id `{id}`")));
                }
            }
            corpus.iter().filter(|i| ids.contains(&i.id)).collect()
        }
    };
    let tasks: Vec<(&Identity, Bindings)> =
        selected.iter().flat_map(|i| instances(i, cfg.max_param).into_iter().map(move |b| (*i, b))).collect();
    let reports: Vec<VerifyReport> = tasks
        .par_iter()
        .map(|(ident, b)| {
            let mut out = Vec::new();
            if cfg.mode != Mode::Symbolic {
                out.push(verify_numeric(ident, b, &ctx));
            }
            if cfg.mode != Mode::Numeric {
                out.push(verify_symbolic(ident, b));
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let mut s = Summary { identities: selected.len(), checks: reports.len(), ..Summary::default() };
    for r in &reports {
        match r.status {
            Status::Pass => s.passed += 1,
            Status::Fail => s.failed += 1,
            Status::NumericOnly => s.numeric_only += 1,
            Status::Error => s.errors += 1,
        }
        if r.is_blocking() {
            s.blocking += 1;
        } else if !r.must_pass && !r.pass {
            s.reported += 1;
        }
    }
    Ok(SuiteResult { reports, summary: s })
}

/// JSON report; `timestamp` and per-check timings are omitted when `None`
/// so that repeated runs are byte-identical.
pub fn report_json(result: &SuiteResult, cfg: &SuiteConfig, timestamp: Option<&str>) -> String {
    let reports: Vec<VerifyReport> = result
        .reports
        .iter()
        .map(|r| {
            let mut r = r.clone();
            if timestamp.is_none() {
                r.millis = None;
            }
            r
        })
        .collect();
    let mut doc = serde_json::json!({
        "schema": 1,
        "config": cfg,
        "summary": result.summary,
        "reports": reports,
    });
    if let Some(t) = timestamp {
        doc["timestamp"] = serde_json::Value::String(t.to_string());
    }
    serde_json::to_string_pretty(&doc).expect("report serializes")
}

/// One line per identity: checks, passes, failures, numeric-only count and
/// the largest numeric residual.
pub fn report_tsv(result: &SuiteResult) -> String {
    #[derive(Default)]
    struct Row {
        checks: usize,
        pass: usize,
        fail: usize,
        numeric_only: usize,
        worst: Option<f64>,
        must_pass: bool,
    }
    let mut order: Vec<String> = Vec::new();
    let mut rows: BTreeMap<String, Row> = BTreeMap::new();
    for r in &result.reports {
        if !rows.contains_key(&r.id) {
            order.push(r.id.clone());
        }
        let row = rows.entry(r.id.clone()).or_default();
        row.must_pass = r.must_pass;
        row.checks += 1;
        match r.status {
            Status::Pass => row.pass += 1,
            Status::NumericOnly => row.numeric_only += 1,
            Status::Fail | Status::Error => row.fail += 1,
        }
        if let Some(l) = r.residual_log10 {
            row.worst = Some(row.worst.map_or(l, |w: f64| w.max(l)));
        }
    }
    let mut out = String::from("id\tchecks\tpass\tfail\tnumeric_only\tmax_residual_log10\texpect\n");
    for id in order {
        let r = &rows[&id];
        let worst = r.worst.map_or("-".to_string(), |w| format!("{w:.2}"));
        let expect = if r.must_pass { "pass" } else { "report" };
        out.push_str(&format!("{id}\t{}\t{}\t{}\t{}\t{worst}\t{expect}\n", r.checks, r.pass, r.fail, r.numeric_only));
    }
    out
}
