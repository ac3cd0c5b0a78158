use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use hamalg::{explain, fixtures, report, suites, CliError, ProblemFile};

#[derive(Parser)]
#[command(
    name = "hamalg",
    version,
    about = "Check Lie algebroid, momentum section and bracket identities on sampled points"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a check suite on a problem file.
    Check {
        file: PathBuf,
        #[arg(long, default_value = "all")]
        suite: String,
        /// Sample points [default: 64, or options.points].
        #[arg(long)]
        points: Option<usize>,
        /// Absolute residual tolerance [default: 1e-9, or options.tol].
        #[arg(long)]
        tol: Option<f64>,
        /// Sampling seed [default: 0, or options.seed].
        #[arg(long)]
        seed: Option<u64>,
        /// Write the JSON report here instead of printing text.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write built-in fixture files, or print one to stdout.
    Fixtures {
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the residual formula behind a check.
    Explain { check: String },
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {}", path.display(), e))
}

fn check(
    file: &Path,
    suite: &str,
    points: Option<usize>,
    tol: Option<f64>,
    seed: Option<u64>,
    json: Option<&Path>,
    out: &mut String,
) -> Result<bool, CliError> {
    let text = std::fs::read_to_string(file).map_err(|e| io_err(file, e))?;
    let digest = report::sha256_hex(text.as_bytes());
    let pb = ProblemFile::from_json(&text)?.build()?;
    let settings = suites::resolve_settings(&pb, points, tol, seed);
    let run = suites::run_suite(&pb, suite, settings)?;
    match json {
        Some(path) => {
            let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            let value = report::to_json(&run, &digest, now);
            let body = serde_json::to_string_pretty(&value).expect("reports serialize") + "\n";
            std::fs::write(path, body).map_err(|e| io_err(path, e))?;
            let failing = run.failing();
            if failing.is_empty() {
                let _ = writeln!(out, "{}: pass", run.suite);
            } else {
                let _ = writeln!(out, "{}: fail ({})", run.suite, failing.join(", "));
            }
        }
        None => out.push_str(&report::to_text(&run)),
    }
    Ok(run.pass())
}

fn write_fixtures(name: Option<&str>, dest: Option<&Path>, out: &mut String) -> Result<(), CliError> {
    let chosen = match name {
        Some(n) => vec![fixtures::get(n).ok_or_else(|| {
            CliError::Schema(format!("unknown fixture {:?}; known: {}", n, fixtures::names().join(", ")))
        })?],
        None => fixtures::all(),
    };
    match dest {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
            for f in chosen {
                let path = dir.join(format!("{}.json", f.name));
                std::fs::write(&path, f.file.to_json()).map_err(|e| io_err(&path, e))?;
                let _ = writeln!(out, "{}", path.display());
            }
        }
        None if name.is_some() => out.push_str(&chosen[0].file.to_json()),
        None => {
            for f in chosen {
                match f.failing {
                    Some(c) => writeln!(out, "{}  suite {}  fails {}", f.name, f.suite, c),
                    None => writeln!(out, "{}  suite {}", f.name, f.suite),
                }
                .expect("writing to a String");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = match cli.command {
        Command::Check { file, suite, points, tol, seed, json } => {
            check(&file, &suite, points, tol, seed, json.as_deref(), &mut out).map(|ok| if ok { 0 } else { 1 })
        }
        Command::Fixtures { name, out: dest } => write_fixtures(name.as_deref(), dest.as_deref(), &mut out).map(|_| 0),
        Command::Explain { check } => match explain::lookup(&check) {
            Some(c) => {
                let _ = writeln!(out, "{}\n  {}\n  tag: {}", c.name, c.formula, c.tag);
                Ok(0)
            }
            None => Err(CliError::Schema(format!("unknown check {:?}", check))),
        },
    };
    // A closed pipe (e.g. `| head`) is not an error.
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush());
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("hamalg: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
