// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use qsolar::fmo::sigma_trace;
use qsolar::io::config::{Command, ConfigError, OutputFormat, RunConfig};
use qsolar::io::emit::{self, FMO_UNITS, NATURAL_UNITS};
use qsolar::models::{creatore_currents, dorfman_currents, toy_decay_report, toy_ham_report};
use qsolar::sweep::{ham_power_zero, power_comparison, run_sweep};
use qsolar::thermo::ThermoReport;
use qsolar::{Error, Result};

const THREADS_ENV: &str = "QSOLAR_NUM_THREADS";

/// Second-law audits of light-harvesting models.
///
/// Parameters come from the bundled defaults, then `--config FILE`, then
/// `--key value` flags. A bare key refers to the command's own config
/// section; `--section.key value` reaches any section.
#[derive(Parser, Debug)]
#[command(name = "qsolar", version, after_help = COMMANDS)]
struct Cli {
    /// toy-decay | toy-ham | donor-acceptor | photocell | fmo-trace | sweep | compare-power
    command: String,

    /// [--config FILE] [--format csv|json] [--out PATH] [--key value ...]
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    args: Vec<String>,
}

const COMMANDS: &str = "\
Commands:
  toy-decay       steady currents of the three-level absorber with a sink   [toy]
  toy-ham         same absorber coupled coherently to an oscillator         [toy]
  donor-acceptor  four-level donor-acceptor engine                          [donor_acceptor]
  photocell       five-level photocell                                      [photocell]
  fmo-trace       entropy production time series of the FMO model           [fmo]
  sweep           parameter scan with second-law violation intervals        [sweep]
  compare-power   power of both toy transfer schemes vs T_loss/T_abs        [compare]

Environment:
  QSOLAR_NUM_THREADS  worker threads for sweeps";

struct Invocation {
    config_file: Option<PathBuf>,
    format: OutputFormat,
    out: Option<PathBuf>,
    overrides: Vec<(String, String)>,
}

fn split_args(args: &[String]) -> std::result::Result<Invocation, ConfigError> {
    let mut inv = Invocation {
        config_file: None,
        format: OutputFormat::Csv,
        out: None,
        overrides: Vec::new(),
    };
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let Some(flag) = arg.strip_prefix("--") else {
            return Err(ConfigError::Flag(format!("expected --key, found {arg:?}")));
        };
        let (key, value) = match flag.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let v = it
                    .next()
                    .ok_or_else(|| ConfigError::Flag(format!("--{flag} needs a value")))?;
                (flag.to_string(), v.clone())
            }
        };
        match key.as_str() {
            "config" => inv.config_file = Some(value.into()),
            "format" => inv.format = value.parse()?,
            "out" => inv.out = Some(value.into()),
            _ => inv.overrides.push((key, value)),
        }
    }
    Ok(inv)
}

fn report_output(cfg: &RunConfig, model: &str, params: serde_json::Value, r: &ThermoReport) -> String {
    match cfg.format {
        OutputFormat::Csv => emit::report_csv(r),
        OutputFormat::Json => emit::json_document(model, params, vec![emit::report_row(r)], &[], NATURAL_UNITS),
    }
}

fn execute(cfg: &RunConfig) -> Result<String> {
    let model = cfg.command.section();
    Ok(match cfg.command {
        Command::ToyDecay => {
            let p = cfg.toy_params()?;
            report_output(cfg, "toy_decay", json!(p), &toy_decay_report(&p)?)
        }
        Command::ToyHam => {
            let p = cfg.toy_params()?;
            report_output(cfg, "toy_ham", json!(p), &toy_ham_report(&p)?)
        }
        Command::DonorAcceptor => {
            let p = cfg.donor_acceptor_params()?;
            report_output(cfg, model, json!(p), &dorfman_currents(&p)?)
        }
        Command::Photocell => {
            let p = cfg.photocell_params()?;
            report_output(cfg, model, json!(p), &creatore_currents(&p)?)
        }
        Command::FmoTrace => {
            let (fmo, grid) = cfg.fmo_config()?;
            let points = sigma_trace(&fmo, &grid)?;
            match cfg.format {
                OutputFormat::Csv => emit::fmo_csv(&points),
                OutputFormat::Json => {
                    let rows = points.iter().map(|p| json!(p)).collect();
                    let mut params = json!(fmo);
                    params["t_abs_kelvin"] = json!(fmo.t_abs()?);
                    emit::json_document("fmo", params, rows, &[], FMO_UNITS)
                }
            }
        }
        Command::Sweep => {
            let table = run_sweep(&cfg.sweep_spec()?)?;
            match cfg.format {
                OutputFormat::Csv => emit::sweep_csv(&table),
                OutputFormat::Json => emit::sweep_json(&table)?,
            }
        }
        Command::ComparePower => {
            let (p, grid) = cfg.compare_params()?;
            let rows = power_comparison(&p, &grid)?;
            let crosses = rows.windows(2).find(|w| (w[0].p_ham > 0.0) != (w[1].p_ham > 0.0));
            let zero = match crosses {
                Some(w) => Some(ham_power_zero(&p, w[0].ratio, w[1].ratio, 1e-10)?),
                None => None,
            };
            match cfg.format {
                OutputFormat::Csv => emit::power_csv(&rows, zero),
                OutputFormat::Json => {
                    let params = json!({"toy": p, "p_ham_zero": zero});
                    let rows = rows.iter().map(|r| json!(r)).collect();
                    emit::json_document("compare_power", params, rows, &[], NATURAL_UNITS)
                }
            }
        }
    })
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Error::from(ConfigError::Malformed {
            key: THREADS_ENV.into(),
            expected: "a positive integer",
            found: raw.clone(),
        })
    })?;
    // fails only if a pool already exists
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    let command: Command = cli.command.parse()?;
    let inv = split_args(&cli.args)?;
    let file_text = match &inv.config_file {
        Some(path) => Some(std::fs::read_to_string(path).map_err(|e| ConfigError::Unreadable {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?),
        None => None,
    };
    let mut cfg = RunConfig::parse(command, file_text.as_deref(), &inv.overrides)?;
    cfg.format = inv.format;
    cfg.output_path = inv.out;
    let text = execute(&cfg)?;
    emit::write_output(&text, cfg.output_path.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
