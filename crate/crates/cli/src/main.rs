use std::io::Read;
use std::process::ExitCode;

use clap::Parser;
use flagbord::args::Cli;
use flagbord::job::Format;
use flagbord::{parse_job_value, run_job};
use serde_json::Value;

fn read_job(path: &str) -> Result<Value, String> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("cannot read standard input: {e}"))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?
    };
    serde_json::from_str(&text).map_err(|e| format!("/: malformed JSON in {path}: {e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file = match cli.job.as_deref().map(read_job).transpose() {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let value = match cli.merge_into(file) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let job = match parse_job_value(&value) {
        Ok(j) => j,
        Err(errors) => {
            for e in &errors.0 {
                eprintln!("invalid job: {e}");
            }
            return ExitCode::from(1);
        }
    };
    match run_job(&job) {
        Ok(report) => {
            match job.format {
                Format::Text => println!("{}", report.text),
                Format::Json => println!("{}", report.to_json()),
            }
            if report.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
