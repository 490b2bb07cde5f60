use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use schwinger_cli::config::{Job, Settings};
use schwinger_cli::output::{render, Format};
use schwinger_cli::sweep::{run_point, run_sweep, SweepRow, SweepSpec};
use schwinger_cli::verify::{self, Level};
use schwinger_cli::{core_exit_code, Result};

/// Bogoliubov coefficients and pair entanglement entropy for Schwinger pair
/// production in constant and Sauter-pulse electric fields.
///
/// Without a subcommand, evaluates a single point, a `--sweep`, or a figure
/// `--preset`.
#[derive(Parser)]
#[command(name = "schwinger", version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Run the invariant checks; exits 1 on a failed check, 3 on an oracle
    /// failure.
    Verify {
        #[arg(default_value = "quick", value_parser = ["quick", "full"])]
        level: String,
        /// csv prints one PASS/FAIL line per check, json the full report.
        #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
        format: String,
    },
}

#[derive(Args, Default)]
struct RunArgs {
    /// boson | fermion
    #[arg(long)]
    stat: Option<String>,
    /// constant | sauter
    #[arg(long)]
    field: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    kperp: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    kz: Option<String>,
    #[arg(long = "E0", allow_hyphen_values = true)]
    e0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<String>,
    /// axis:start:stop:steps[:log], axis one of E0, m, k_perp, k_z, tau
    #[arg(long, allow_hyphen_values = true)]
    sweep: Option<String>,
    /// fig1 .. fig10
    #[arg(long)]
    preset: Option<String>,
    /// consistent | paper (fermion constant-field exponent)
    #[arg(long)]
    convention: Option<String>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
    /// Output file; a directory for presets. Defaults to stdout.
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    label: Option<String>,
    /// key=value file; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

impl RunArgs {
    fn settings(self) -> Result<Settings> {
        let file = match &self.config {
            Some(path) => Settings::parse(&fs::read_to_string(path)?)?,
            None => Settings::default(),
        };
        Ok(file.overlay(Settings {
            stat: self.stat,
            field: self.field,
            m: self.m,
            q: self.q,
            kperp: self.kperp,
            kz: self.kz,
            e0: self.e0,
            tau: self.tau,
            sweep: self.sweep,
            convention: self.convention,
            format: self.format,
            out: self.out,
            label: self.label,
            preset: self.preset,
        }))
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(args: RunArgs) -> Result<i32> {
    let settings = args.settings()?;
    let format = settings.format()?;
    let out = settings.out.as_deref().map(Path::new);
    match settings.job()? {
        Job::Point(spec) => {
            let (row, failed) = run_point(&spec);
            emit(out, &render(format, &spec.metadata(), &[row])?)?;
            if let Some(e) = failed {
                eprintln!("error: {e}");
                return Ok(core_exit_code(&e));
            }
        }
        Job::Sweep(spec) => {
            let rows = run_sweep(&spec)?;
            emit(out, &render(format, &spec.metadata(), &rows)?)?;
        }
        Job::Preset(_, specs) => {
            let curves = specs
                .iter()
                .map(|s| Ok((s, run_sweep(s)?)))
                .collect::<Result<Vec<(&SweepSpec, Vec<SweepRow>)>>>()?;
            match out {
                Some(dir) => {
                    fs::create_dir_all(dir)?;
                    for (spec, rows) in &curves {
                        let path = dir.join(format!("{}.{}", spec.label, format.extension()));
                        fs::write(path, render(format, &spec.metadata(), rows)?)?;
                    }
                }
                None => emit(None, &render_curves(format, &curves)?)?,
            }
        }
    }
    Ok(0)
}

/// All curves of a preset in one stream: CSV blocks separated by blank lines,
/// or a JSON array of `{label, rows}` objects.
fn render_curves(format: Format, curves: &[(&SweepSpec, Vec<SweepRow>)]) -> Result<String> {
    match format {
        Format::Csv => {
            let blocks = curves
                .iter()
                .map(|(spec, rows)| render(format, &spec.metadata(), rows))
                .collect::<Result<Vec<_>>>()?;
            Ok(blocks.join("\n"))
        }
        Format::Json => {
            let value: Vec<serde_json::Value> = curves
                .iter()
                .map(|(spec, rows)| serde_json::json!({ "label": spec.label, "rows": rows }))
                .collect();
            let mut s = serde_json::to_string_pretty(&value)?;
            s.push('\n');
            Ok(s)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Some(Command::Verify { level, format }) => {
            let level: Level = level.parse().expect("validated by clap");
            let report = verify::run(level);
            if format == "json" {
                match serde_json::to_string_pretty(&report) {
                    Ok(s) => println!("{s}"),
                    Err(e) => eprintln!("error: {e}"),
                }
            } else {
                print!("{}", report.summary());
            }
            report.exit_code()
        }
        None => run(cli.run).unwrap_or_else(|e| {
            eprintln!("error: {e}");
            e.exit_code()
        }),
    };
    ExitCode::from(code as u8)
}
