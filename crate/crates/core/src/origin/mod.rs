//! Restriction to the origin t = 0 and the Birkhoff machinery built on it.

mod birkhoff;
mod elementary;
mod restriction;

pub use birkhoff::{
    birkhoff_iso_decision, birkhoff_reduce, normalize_birkhoff, reduction_residual, BirkhoffClause, BirkhoffData,
    BirkhoffDecision, BirkhoffReduction,
};
pub use elementary::{cyclic_fuchs, irreducibility_check, is_elementary, Irreducibility};
pub use restriction::{restrict_origin, OriginRestriction};
