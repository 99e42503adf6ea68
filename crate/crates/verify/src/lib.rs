//! Numerical verification of Orlicz-space and vector-measure identities on
//! finite groups.

pub mod checks;
pub mod coverage;
pub mod report;
pub mod spec;
pub mod suite;

pub use checks::{lookup, run_check, CheckInfo, CATALOG};
pub use report::{emit_report, Format, Report};
pub use spec::{CheckResult, CheckSpec, Constants, Fault, Status, VResult, VerifyError};
pub use suite::{exit_code, run_specs, run_suite, Suite};
