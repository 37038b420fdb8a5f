//! File formats, JSON reports, parallel drivers and the optional remote
//! Hecke data client around `abelsurf-core`.

pub mod batch;
pub mod curves;
pub mod fetch;
pub mod hecke_file;
pub mod oracle_driver;
pub mod pipeline;
pub mod polytext;
pub mod report;

use abelsurf_core::hecke::HeckeTable;

/// Hecke polynomials for the levels the bundled example curves need.
pub const BUNDLED_HECKE: &str = include_str!("../../../fixtures/hecke.csv");

/// Example curves with frozen models, in the curve CSV format.
pub const BUNDLED_CURVES: &str = include_str!("../../../fixtures/curves.csv");

pub fn bundled_hecke() -> HeckeTable {
    hecke_file::parse_hecke(BUNDLED_HECKE, "bundled fixtures/hecke.csv").expect("bundled Hecke data is valid")
}
