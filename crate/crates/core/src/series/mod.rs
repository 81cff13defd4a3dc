//! Exact truncated power-series arithmetic over the Gaussian rationals.

mod scalar;
pub(crate) mod tseries;
mod ztseries;

pub use scalar::Scalar;
pub use tseries::TSeries;
pub use ztseries::{AffinePoly1, ZTSeries};

/// Default truncation orders (z, t₂).
pub const DEFAULT_NZ: usize = 16;
pub const DEFAULT_NT: usize = 16;
