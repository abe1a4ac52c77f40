use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use majorana_readout_cli::commands::{run_chi, run_readout, run_spectrum, MethodSel, SchemeSel};
use majorana_readout_cli::config::load_json;
use majorana_readout_cli::output::{to_json, Table};
use majorana_readout_cli::reproduce::reproduce;
use majorana_readout_cli::sweep::SweepSpec;
use majorana_readout_cli::{CliError, CliResult};

#[derive(Parser)]
#[command(
    name = "majorana-readout",
    version,
    about = "Dispersive and longitudinal readout of Majorana qubits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Energy levels versus offset charge.
    Spectrum {
        #[arg(long)]
        config: PathBuf,
        /// `key=start:stop:count` or `key=v1,v2,...`; only `qubit.n_g` is accepted.
        #[arg(long)]
        sweep: Option<SweepSpec>,
        /// Output directory for `spectrum.csv`; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dispersive shift, optionally swept over one numeric config field.
    Chi {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        sweep: Option<SweepSpec>,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodSel,
        /// Output directory for `chi.csv`; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SNR, fidelity and time to target fidelity.
    Readout {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "dispersive")]
        scheme: SchemeSel,
        #[arg(long)]
        target_fidelity: Option<f64>,
        /// Output directory for `readout.json`; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate the data, plots and manifest of one figure.
    Reproduce {
        figure: u8,
        #[arg(long, default_value = "figures")]
        out: PathBuf,
    },
}

fn emit(
    out: Option<&Path>,
    file: &str,
    write: impl FnOnce(&mut dyn Write) -> CliResult<()>,
) -> CliResult<()> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let mut f = File::create(dir.join(file))?;
            write(&mut f)?;
            f.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn emit_table(out: Option<&Path>, file: &str, table: &Table) -> CliResult<()> {
    emit(out, file, |w| table.write_csv(w))
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Spectrum { config, sweep, out } => {
            let table = run_spectrum(&load_json(&config)?, sweep.as_ref())?;
            emit_table(out.as_deref(), "spectrum.csv", &table)
        }
        Command::Chi {
            config,
            sweep,
            method,
            out,
        } => {
            let run = run_chi(&load_json(&config)?, sweep.as_ref(), method)?;
            for w in &run.warnings {
                eprintln!("warning: {w}");
            }
            emit_table(out.as_deref(), "chi.csv", &run.table)?;
            if run.failed_rows > 0 && run.failed_rows == run.table.rows.len() {
                return Err(CliError::Numeric("every sweep point failed".into()));
            }
            Ok(())
        }
        Command::Readout {
            config,
            scheme,
            target_fidelity,
            out,
        } => {
            let report = run_readout(&load_json(&config)?, scheme, target_fidelity)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            let text = to_json(&report);
            emit(out.as_deref(), "readout.json", |w| {
                Ok(w.write_all(text.as_bytes())?)
            })
        }
        Command::Reproduce { figure, out } => {
            let manifest = reproduce(figure, &out)?;
            eprintln!("wrote {}", manifest.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
