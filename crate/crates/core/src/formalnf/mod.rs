//! Formal classification over N₂: pre-normal reduction, b₂-extensions, formal normal forms
//! and the formal isomorphism decision.

mod classify;
mod engine;
mod family;
mod prenormal;

pub use classify::{
    conformal_b2_zero, conformal_map, formal_iso_decision, formal_normal_form, replay, verify_normal_form,
    FormalNormalForm, IsoDecision, IsoWitness, LoggedStep,
};
pub use family::{Family, NormalFormId};
pub use prenormal::{classify_f, solve_b2_extensions, to_prenormal, Extension, FKind, PreNormalForm};
