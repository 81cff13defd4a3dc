//! Malgrange universal deformations in the coordinates (t₁, t₂) and the holomorphic normal forms
//! of non-elementary structures.

mod deformation;
mod holomorphic;

pub use deformation::{dx_residual, malgrange_connection, malgrange_roots, malgrange_xy, CrossCheck, MalgrangeState, RootOrder};
pub use holomorphic::{
    assign_c1, birkhoff_data_of, classify_holomorphic, first_type_normal_form, holo_normal_form_second_type, holomorphic_id,
    GaugeConstants, HoloNormalForm, HolomorphicClass, HolomorphicReport, NonElementaryClass,
};
