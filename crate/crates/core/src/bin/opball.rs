use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use opball::cli::{self, Overrides, Report};
use opball::Error;

/// Fixed points, metrics and unitarization for groups acting on the operator ball.
#[derive(Parser, Debug)]
#[command(name = "opball", version)]
struct Args {
    /// Problem JSON file, or `-` for stdin.
    #[arg(long, default_value = "-")]
    input: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Override the problem mode.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long = "max-iter")]
    max_iter: Option<usize>,
    /// Closure size cap.
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

fn read_input(src: &str) -> io::Result<Vec<u8>> {
    if src == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        fs::read(src)
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let overrides = Overrides {
        mode: args.mode,
        tol: args.tol,
        max_iter: args.max_iter,
        closure_cap: args.cap,
        seed: args.seed,
    };

    let report = match read_input(&args.input) {
        Ok(bytes) => cli::process(&bytes, &overrides),
        Err(e) => Report::failure(&Error::validation(format!("cannot read {}: {e}", args.input))),
    };
    if let Some(msg) = &report.error {
        eprintln!("opball: {}: {msg}", report.status.as_str());
    }

    let mut text = serde_json::to_string_pretty(&report.to_json()).expect("report serializes");
    text.push('\n');
    let written = match &args.output {
        Some(path) => fs::write(path, &text),
        None => io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("opball: cannot write report: {e}");
        return ExitCode::from(3);
    }
    ExitCode::from(report.exit_code() as u8)
}
