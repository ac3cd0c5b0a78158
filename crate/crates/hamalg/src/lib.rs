//! Problem files, check suites and reports for the `hamalg` command.

pub mod error;
pub mod explain;
pub mod fixtures;
pub mod report;
pub mod schema;
pub mod suites;

pub use error::CliError;
pub use schema::{Problem, ProblemFile};
pub use suites::{run_suite, Role, Settings, SuiteRun};

/// Parse, build and run a suite on JSON text.
pub fn check_text(
    text: &str,
    suite: &str,
    points: Option<usize>,
    tol: Option<f64>,
    seed: Option<u64>,
) -> Result<SuiteRun, CliError> {
    let pb = ProblemFile::from_json(text)?.build()?;
    let settings = suites::resolve_settings(&pb, points, tol, seed);
    run_suite(&pb, suite, settings)
}
