//! Instance files, the command-line front end, verification suites and the
//! oracle-call benchmark for [`hyperpoly_core`].

pub mod bench;
pub mod cli;
pub mod instance;
pub mod random;
pub mod verify;
