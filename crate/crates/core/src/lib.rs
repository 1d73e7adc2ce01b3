//! Double zeta values, character sums and Witten sums: multiprecision
//! evaluation with rigorous error bounds, exact reduction to a basis of
//! constants, a corpus of identities with a verifier, and a search for
//! weighted sum formulas.

pub mod corpus;
pub mod discovery;
pub mod error;
pub mod exact;
pub mod mp;
pub mod reductions;
pub mod symbolic;

pub use error::{Error, Result};
