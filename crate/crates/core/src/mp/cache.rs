use std::collections::HashMap;

use once_cell::sync::Lazy;
use parking_lot::RwLock;

use super::{Approx, EvalContext, Periodic};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Key {
    Series(Periodic, u32),
    Double(Periodic, Periodic, u32, u32),
    Constant(&'static str),
    Zeta(u32),
}

static CACHE: Lazy<RwLock<HashMap<(Key, EvalContext), Approx>>> = Lazy::new(|| RwLock::new(HashMap::new()));

/// Memoizes deterministic evaluations. The value is computed outside the
/// lock, so nested lookups never deadlock; a racing duplicate computation
/// produces an identical value and the first insert wins.
pub(crate) fn cached(key: Key, ctx: &EvalContext, f: impl FnOnce() -> Result<Approx>) -> Result<Approx> {
    let k = (key, *ctx);
    if let Some(v) = CACHE.read().get(&k) {
        return Ok(v.clone());
    }
    let v = f()?;
    Ok(CACHE.write().entry(k).or_insert(v).clone())
}
