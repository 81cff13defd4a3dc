//! Document format, reports and the command implementations behind the `connexa` binary.

pub mod commands;
pub mod document;
pub mod expr;
pub mod fixtures;
pub mod report;
pub mod selftest;

pub use commands::{
    cmd_birkhoff_iso, cmd_classify, cmd_euler_nf, cmd_euler_realizable, cmd_formal_iso, cmd_formal_nf, cmd_malgrange,
    cmd_prenormal, cmd_selftest, cmd_verify, MalgrangeParams, Options,
};
pub use document::{parse_document, parse_scalar, read_document, Orders, StructureDocument};
pub use expr::parse_series;
pub use report::Report;
