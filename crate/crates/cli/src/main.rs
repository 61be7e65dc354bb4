mod settings;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use elliptic_currents::verifier::{run_suite, CATALOGUE, REPORT_SCHEMA_VERSION};
use elliptic_currents::Error;
use settings::{Cli, THREADS_ENV};

/// Exit status when a check fails.
const EXIT_FAIL: u8 = 1;
/// Exit status for configuration and parameter-domain errors.
const EXIT_CONFIG: u8 = 2;

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Config(_) => "config",
        Error::Domain(_) => "domain",
        _ => "internal",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list {
        for s in CATALOGUE {
            println!("{:<30} {}", s.id, s.anchor);
        }
        return ExitCode::SUCCESS;
    }
    let out_hint = cli.out.clone();
    let env = std::env::var(THREADS_ENV).ok();
    let run = match cli.resolve(env.as_deref()).and_then(|rc| run_suite(&rc.suite).map(|r| (rc, r))) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("verify: {e}");
            if let Some(path) = out_hint {
                let doc = serde_json::json!({
                    "schema_version": REPORT_SCHEMA_VERSION,
                    "error": { "kind": error_kind(&e), "message": e.to_string() },
                });
                let text = serde_json::to_string_pretty(&doc).expect("error document serialises");
                if let Err(io) = write_atomic(&path, &(text + "\n")) {
                    eprintln!("verify: cannot write {}: {io}", path.display());
                }
            }
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let (rc, report) = run;

    let summary = report.summary();
    print!("{summary}");
    let mut io_failed = false;
    if let Some(path) = &rc.out {
        let json = serde_json::to_string_pretty(&report).expect("report serialises");
        if let Err(e) = write_atomic(path, &(json + "\n")) {
            eprintln!("verify: cannot write {}: {e}", path.display());
            io_failed = true;
        }
    }
    if let Some(path) = &rc.summary {
        if let Err(e) = write_atomic(path, &summary) {
            eprintln!("verify: cannot write {}: {e}", path.display());
            io_failed = true;
        }
    }
    if io_failed || !report.all_pass {
        ExitCode::from(EXIT_FAIL)
    } else {
        ExitCode::SUCCESS
    }
}
