//! Command-line front end: manifest ingestion, plan records and the `pats`
//! subcommands.

pub mod app;
pub mod manifest;
pub mod records;

pub use records::{ManifestRecord, ParamsRecord, PlanRecord, SegmentRecord};
