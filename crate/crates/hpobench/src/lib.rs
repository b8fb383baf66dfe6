//! Suite execution, persistence and reporting on top of `hpobench-core`.

pub mod analyze;
pub mod persist;
pub mod runner;
pub mod spacedoc;
pub mod suite;

/// Version string recorded in manifests and instance files.
pub const ARTIFACT: &str = concat!("hpobench ", env!("CARGO_PKG_VERSION"));
