//! Exact jet algebra: truncated series, coordinate changes and differential
//! forms in the fixed basis of R³.

mod change;
mod forms;
mod series;

pub use change::CoordinateChange;
pub use forms::{DiffKind, DiffObject};
pub use series::{Monomial, Series, Trunc, Var};
#[cfg(test)]
pub(crate) use series::rat;
pub use series::ratio;
