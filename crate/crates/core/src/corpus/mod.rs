//! Identity corpus: a small expression language, its parser, exact and
//! numeric evaluation, and the verification driver.

mod ast;
mod eval;
mod parser;
mod verify;

pub use ast::{BinOp, Expr, Func, Identity, Param, Parity};
pub use eval::{eval_ast, exact_call, reduce_ast, Bindings, Evaluator, Value};
pub use parser::{parse_corpus, parse_expr};
pub use verify::{
    instances, report_json, report_tsv, run_suite, tolerance_log10, verify_numeric, verify_symbolic, Mode,
    Status, SuiteConfig, SuiteResult, Summary, VerifyReport,
};

/// The corpus shipped with the crate.
pub const BUILTIN_CORPUS: &str = include_str!("../../corpus/identities.mzv");

pub fn builtin_corpus() -> crate::Result<Vec<Identity>> {
    parse_corpus(BUILTIN_CORPUS)
}
