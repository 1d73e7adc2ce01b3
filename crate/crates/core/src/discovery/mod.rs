//! Search for weighted sums of double zetas that collapse to `f(s) zeta(s)`.
//!
//! A candidate is first certified exactly: every weight where the sum has a
//! closed form must leave nothing outside `zeta(w)` (or `zeta(2s)`), and the
//! resulting coefficients must fit a short combination of
//! `1, s, s^2, 2^s, 4^s, s 4^s`. Survivors are then emitted in corpus syntax
//! and evaluated numerically at two larger weights. That screen can only
//! reject. Comparing monomial coefficients assumes the basis constants are
//! algebraically independent.

pub mod ansatz;
pub mod families;
pub mod fit;
pub mod linalg;

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

pub use ansatz::{reduce_weighted_sum, reduce_symmetric_even, split_zeta, Ansatz, Shape};
pub use families::{height_pool, solve_power_base};
pub use fit::{fit_f, Fit, SpanFn};

use crate::corpus::{verify_numeric, Bindings};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::mp::EvalContext;

/// A strategy producing ansatz instances for certification.
pub trait Family: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn propose(&self, cfg: &SearchConfig) -> Result<Vec<Ansatz>>;
}

#[derive(Clone, Default)]
pub struct Registry {
    families: Vec<Arc<dyn Family>>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry::default()
    }

    pub fn standard() -> Self {
        let mut r = Registry::empty();
        r.register(families::PowerFamily);
        r.register(families::AffineFamily);
        r.register(families::AlternatingFamily);
        r.register(families::SymmetricEvenFamily);
        r.register(families::PolyFamily);
        r
    }

    /// Later registrations replace earlier ones of the same name.
    pub fn register(&mut self, f: impl Family + 'static) {
        self.families.retain(|g| g.name() != f.name());
        self.families.push(Arc::new(f));
    }

    pub fn get(&self, name: &str) -> Option<&dyn Family> {
        self.families.iter().find(|f| f.name() == name).map(|f| f.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.families.iter().map(|f| f.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Family> {
        self.families.iter().map(|f| f.as_ref())
    }

    /// Run the selected families in registry order.
    pub fn search(&self, cfg: &SearchConfig) -> Result<SearchOutcome> {
        for name in &cfg.families {
            if self.get(name).is_none() {
                return Err(Error::Other(format!("unknown family `{name}`; known: {}", self.names().join(", "))));
            }
        }
        let ctx = EvalContext::new(cfg.digits)?;
        let mut all = Vec::new();
        for fam in self.iter().filter(|f| cfg.families.iter().any(|n| n == f.name())) {
            let proposals = fam.propose(cfg)?;
            let certified: Vec<CandidateIdentity> = proposals.into_par_iter().map(|a| certify(a, cfg, &ctx)).collect();
            all.extend(certified);
        }
        Ok(dedup(all))
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Family names; empty selects nothing.
    pub families: Vec<String>,
    /// Height bound for rational parameters.
    pub height: u32,
    /// Degree bound for polynomial weights.
    pub deg: u32,
    pub span: Vec<SpanFn>,
    /// Working precision of the numeric screen.
    pub digits: u32,
    /// Screen tolerance as a log10.
    pub screen_log10: f64,
    /// Even-argument sums are reduced exactly up to this `s`.
    pub even_exact_max: i64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            families: Registry::standard().names().into_iter().map(String::from).collect(),
            height: 16,
            deg: 2,
            span: SpanFn::ALL.to_vec(),
            digits: 40,
            screen_log10: -25.0,
            even_exact_max: 16,
        }
    }
}

impl SearchConfig {
    pub fn with_families(names: &[&str]) -> Self {
        SearchConfig { families: names.iter().map(|s| s.to_string()).collect(), ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status", content = "reason")]
pub enum CertStatus {
    /// Exact agreement at every weight tried.
    Exact,
    /// Exact where a closed form exists, numeric agreement elsewhere.
    NumericScreened,
    Rejected(String),
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateIdentity {
    /// Assigned to emitted candidates.
    pub id: Option<String>,
    pub family: String,
    pub label: String,
    pub shape: Shape,
    pub weight: String,
    pub fit: Option<String>,
    #[serde(flatten)]
    pub status: CertStatus,
    /// `s` values certified exactly.
    pub exact_at: Vec<i64>,
    /// `(s, residual log10)` of the numeric screen.
    pub screened: Vec<(i64, f64)>,
    /// Corpus syntax of an emitted candidate.
    pub dsl: Option<String>,
    #[serde(skip)]
    pub ansatz: Ansatz,
    #[serde(skip)]
    pub f: Option<Fit>,
}

impl CandidateIdentity {
    fn new(a: Ansatz) -> Self {
        CandidateIdentity {
            id: None,
            family: a.family.clone(),
            label: a.label.clone(),
            shape: a.shape,
            weight: a.weight.to_string(),
            fit: None,
            status: CertStatus::Rejected(String::new()),
            exact_at: Vec::new(),
            screened: Vec::new(),
            dsl: None,
            ansatz: a,
            f: None,
        }
    }

    pub fn survived(&self) -> bool {
        !matches!(self.status, CertStatus::Rejected(_))
    }

    /// Corpus syntax under the given id.
    pub fn dsl_as(&self, id: &str) -> Option<String> {
        self.f.as_ref().map(|f| self.ansatz.to_dsl(id, f))
    }

    fn reject(mut self, why: impl Into<String>) -> Self {
        self.status = CertStatus::Rejected(why.into());
        self
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SearchOutcome {
    pub emitted: Vec<CandidateIdentity>,
    /// Survivors whose weights are, at every sampled `s`, a combination of
    /// weights already emitted.
    pub redundant: Vec<CandidateIdentity>,
    pub rejected: Vec<CandidateIdentity>,
}

fn exact_range(a: &Ansatz, cfg: &SearchConfig) -> Vec<i64> {
    let hi = if a.shape.is_even_arg() { cfg.even_exact_max } else { crate::reductions::MAX_SYSTEM_WEIGHT };
    (a.min_s()..=hi).filter(|&s| a.admits(s)).collect()
}

fn screen_points(a: &Ansatz, cfg: &SearchConfig) -> Vec<i64> {
    if a.shape.is_even_arg() {
        (cfg.even_exact_max + 1..).filter(|&s| a.admits(s)).take(2).collect()
    } else if a.admits(9) && a.admits(11) {
        vec![9, 11]
    } else {
        vec![8, 10]
    }
}

/// Exact certification, fitting and the numeric screen for one ansatz.
pub fn certify(a: Ansatz, cfg: &SearchConfig, ctx: &EvalContext) -> CandidateIdentity {
    let mut cand = CandidateIdentity::new(a);
    let a = cand.ansatz.clone();
    let mut points: Vec<(i64, Rational)> = Vec::new();
    for s in exact_range(&a, cfg) {
        let step = (|| -> Result<Option<Rational>> {
            if ansatz::is_zero_vector(&a.vector(s)?) {
                return Ok(None);
            }
            let (f, rest) = split_zeta(&a.reduce(s)?, a.total_weight(s))?;
            if !rest.is_zero() {
                return Err(Error::Other(format!("at s={s} the sum leaves {rest}")));
            }
            Ok(Some(f))
        })();
        match step {
            Ok(Some(f)) => {
                points.push((s, f));
                cand.exact_at.push(s);
            }
            Ok(None) => {}
            Err(e) => return cand.reject(e.to_string()),
        }
    }
    if points.is_empty() {
        return cand.reject("weight vanishes on every exact point");
    }
    if points.len() < 2 {
        return cand.reject("too few nonempty exact points to fit f(s)");
    }
    let Some(fit) = fit_f(&points, &cfg.span) else {
        return cand.reject("f(s) has no short form in the span");
    };
    cand.fit = Some(fit.to_string());
    cand.f = Some(fit.clone());
    let ident = match a.to_identity("S00", &fit) {
        Ok(i) => i,
        Err(e) => return cand.reject(format!("emitted identity does not parse: {e}")),
    };
    let mut all_exact = true;
    for s in screen_points(&a, cfg) {
        // exact where available
        match a.reduce(s).and_then(|e| split_zeta(&e, a.total_weight(s))) {
            Ok((f, rest)) => {
                if !rest.is_zero() || f != fit.at(s) {
                    return cand.reject(format!("exact check fails at s={s}"));
                }
            }
            Err(Error::NotReducible(_)) => all_exact = false,
            Err(e) => return cand.reject(e.to_string()),
        }
        let env: Bindings = [("s".to_string(), s)].into_iter().collect();
        let rep = verify_numeric(&ident, &env, ctx);
        match rep.residual_log10 {
            Some(l) if l <= cfg.screen_log10 => cand.screened.push((s, l)),
            Some(l) => return cand.reject(format!("numeric screen at s={s}: residual 1e{l}")),
            None => return cand.reject(format!("numeric screen at s={s}: {}", rep.cause.unwrap_or_default())),
        }
    }
    cand.status = if all_exact { CertStatus::Exact } else { CertStatus::NumericScreened };
    cand
}

/// `s` values used for the redundancy test.
const SAMPLE_MAX_S: i64 = 12;

fn dedup(all: Vec<CandidateIdentity>) -> SearchOutcome {
    let mut out = SearchOutcome::default();
    let mut kept: BTreeMap<bool, Vec<Ansatz>> = BTreeMap::new();
    for mut c in all {
        if !c.survived() {
            out.rejected.push(c);
            continue;
        }
        let key = c.shape.is_even_arg();
        let prior = kept.entry(key).or_default();
        let redundant = (c.ansatz.min_s()..=SAMPLE_MAX_S).filter(|&s| c.ansatz.admits(s)).all(|s| {
            let rows: Vec<Vec<Rational>> =
                prior.iter().filter(|p| p.admits(s)).filter_map(|p| p.vector(s).ok()).collect();
            c.ansatz.vector(s).map(|v| linalg::in_span(&rows, &v)).unwrap_or(false)
        });
        if redundant {
            out.redundant.push(c);
        } else {
            let id = format!("S{:02}", out.emitted.len() + 1);
            c.dsl = c.dsl_as(&id);
            c.id = Some(id);
            prior.push(c.ansatz.clone());
            out.emitted.push(c);
        }
    }
    out
}

/// All standard families selected in `cfg`.
pub fn search_general(cfg: &SearchConfig) -> Result<SearchOutcome> {
    Registry::standard().search(cfg)
}

/// The polynomial family alone at degree `deg`.
pub fn search_poly_weights(deg: u32, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let cfg = SearchConfig { families: vec!["poly".into()], deg, ..cfg.clone() };
    Registry::standard().search(&cfg)
}
