//! Instance documents, report rendering and the commands behind the
//! `relfix` binary.

pub mod commands;
pub mod document;
pub mod report;
