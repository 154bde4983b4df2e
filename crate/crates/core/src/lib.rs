//! Exact truncated q-series and the objects needed to test fermionic
//! character identities for principal subspaces: Nahm sums, q-commuting
//! algebras with quantum dilogarithms, quiver orbit codimensions and jet
//! algebra Hilbert series.

pub mod error;
pub mod halfint;
pub mod jets;
pub mod nahm;
pub mod poly;
pub mod quiver;
pub mod qweyl;
pub mod series;

pub use error::{Error, Result};
pub use halfint::HalfInt;
pub use series::{QSeries, Comparison, Inequality};
