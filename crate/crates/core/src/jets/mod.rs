//! Truncated power series in one and two variables.

mod jet1;
mod jet2;
mod poly;

pub use jet1::Jet1;
pub use jet2::{Jet2, Var};
pub use poly::Poly;

/// Working order used when the caller does not choose one.
pub const DEFAULT_ORDER: usize = 16;
