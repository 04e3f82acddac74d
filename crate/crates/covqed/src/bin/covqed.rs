use clap::{Parser, Subcommand};
use covqed::cli::{
    exit_code_for, run_conformance, run_descent, run_render, run_verify_identities,
    write_outputs, RunOutput, EXIT_CONFIG,
};
use std::path::PathBuf;
use std::process::ExitCode;

/// Workbench for covariant-gauge QED: exact operator-identity verification
/// and truncated Fock-space energy descent.
#[derive(Parser)]
#[command(name = "covqed", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the derivation-chain operator identities by exact algebra.
    VerifyIdentities {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = false)]
        quiet: bool,
    },
    /// Run the numeric conformance suite (Heisenberg relations etc.).
    Conformance {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = false)]
        quiet: bool,
    },
    /// Build the reference state and sweep the descent parameter f.
    Descent {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = false)]
        quiet: bool,
    },
    /// Re-render an existing JSON report as human-readable text.
    Report {
        /// Path to a previously emitted .json report.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = false)]
        quiet: bool,
    },
}

fn load_config(path: &PathBuf, seed: Option<u64>) -> Result<String, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    match seed {
        None => Ok(text),
        Some(s) => {
            // seed override: rewrite/insert the top-level seed key
            let mut lines: Vec<String> = Vec::new();
            let mut replaced = false;
            for line in text.lines() {
                let t = line.trim_start();
                if !replaced && t.starts_with("seed") && t["seed".len()..].trim_start().starts_with('=') {
                    lines.push(format!("seed = {s}"));
                    replaced = true;
                } else {
                    lines.push(line.to_string());
                }
            }
            if !replaced {
                lines.insert(0, format!("seed = {s}"));
            }
            Ok(lines.join("\n"))
        }
    }
}

fn finish(
    kind: &str,
    out_dir: Option<PathBuf>,
    result: covqed::error::Result<RunOutput>,
    quiet: bool,
) -> ExitCode {
    match result {
        Ok(out) => {
            if !quiet {
                print!("{}", out.report_text);
            }
            if let Some(dir) = out_dir {
                match write_outputs(&dir, kind, &out) {
                    Ok(paths) => {
                        if !quiet {
                            for p in paths {
                                eprintln!("wrote {}", p.display());
                            }
                        }
                    }
                    Err(e) => {
                        eprintln!("error writing outputs: {e}");
                        return ExitCode::from(EXIT_CONFIG as u8);
                    }
                }
            }
            ExitCode::from(out.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::VerifyIdentities {
            config,
            out,
            seed,
            quiet,
        } => match load_config(&config, seed) {
            Ok(text) => finish(
                "verify-identities",
                out,
                run_verify_identities(&text, false),
                quiet,
            ),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_CONFIG as u8)
            }
        },
        Command::Conformance {
            config,
            out,
            seed,
            quiet,
        } => match load_config(&config, seed) {
            Ok(text) => finish("conformance", out, run_conformance(&text), quiet),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_CONFIG as u8)
            }
        },
        Command::Descent {
            config,
            out,
            seed,
            quiet,
        } => match load_config(&config, seed) {
            Ok(text) => finish("descent", out, run_descent(&text), quiet),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_CONFIG as u8)
            }
        },
        Command::Report { input, quiet } => match std::fs::read_to_string(&input) {
            Ok(text) => finish("report", None, run_render(&text), quiet),
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", input.display());
                ExitCode::from(EXIT_CONFIG as u8)
            }
        },
    }
}
