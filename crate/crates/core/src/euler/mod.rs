//! Euler vector fields on N₂: recognition, normal forms, orbit decision and realizability.

mod field;
mod normal_form;

pub use field::EulerField;
pub use normal_form::{
    euler_normal_form, euler_orbit_decision, frobenius_realizable, induced_normal_form, is_euler, realizable_by_te,
    EulerNormalForm, EulerNormalization, VectorField,
};
