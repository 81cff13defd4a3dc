//! Matrix algebra in the basis C₁, C₂, D, E and the (TE)-structure data model.

mod cmat;
mod mat2;
mod structure;

pub use cmat::CMat;
pub use mat2::{mat_mul, Mat2, BASIS};
pub use structure::{
    apply_gauge, apply_isomorphism, flatness_residuals, induced_euler, is_flat, GaugeMap, Kind, Residuals, TEStruct,
};
pub use crate::origin::restrict_origin;
