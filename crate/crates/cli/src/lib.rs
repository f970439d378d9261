//! Job parsing, execution and reporting for the `flagbord` command.

pub mod args;
pub mod job;
pub mod run;

pub use job::{parse_job, parse_job_value, Job, Task};
pub use run::{run_job, Report, RunError};
