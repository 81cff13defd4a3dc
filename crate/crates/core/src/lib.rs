//! Exact computations with rank-2 (TE)-structures over the nilpotent F-manifold germ N₂:
//! flatness checks, gauge and base changes, formal and holomorphic normal forms, Birkhoff
//! invariants, Malgrange deformations and Euler-field classification.

pub mod cli;
pub mod connmat;
pub mod error;
pub mod euler;
pub mod formalnf;
pub mod linalg;
pub mod malgrange;
pub mod odekit;
pub mod origin;
pub mod series;

pub use error::{Error, Result};
pub use series::{AffinePoly1, Scalar, TSeries, ZTSeries};
