pub mod commands;
pub mod config;
pub mod report;
pub mod selftest;

pub use commands::run;

/// Process exit codes: 0 success, 2 inconclusive result, 3 invalid
/// configuration, 4 internal numerical failure.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;
