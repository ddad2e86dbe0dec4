//! Rationally weighted Hurwitz numbers and the associated hypergeometric
//! tau-functions: exact combinatorics, truncated β-series, the adapted basis
//! and its Meijer-G integral representation, and matrix-integral checks.

pub mod characters;
pub mod cli;
pub mod error;
pub mod gamma;
pub mod hurwitz;
pub mod matrix;
pub mod meijer;
pub mod partition;
pub mod quadrature;
pub mod rational;
pub mod series;
pub mod spectral;
pub mod symmetric;
pub mod tau;
pub mod verify;
pub mod weights;

pub use error::{Error, ErrorCode, Result};
pub use partition::Partition;
pub use rational::Rational;
pub use series::BetaSeries;
pub use weights::WeightData;
