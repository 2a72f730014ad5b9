//! `dunkkit` — command-line front end for the small-Biot dunking toolkit.
//!
//! The toolkit studies how fast a body equilibrates when dunked into a
//! bath: shape functionals from an eigenvalue-sensitivity solve, lumped
//! (zero- and first-order) temperature models with a-priori error
//! estimates, a refinement-gated transient reference solver, and two-sided
//! envelopes for time-varying baths. `reproduce <id>` recomputes the
//! embedded reference tables with pass/fail columns.

mod builtins;
mod commands;
mod reproduce;
mod sweep;
mod table;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use builtins::Builtin;
use table::{Format, OutputOpts};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Message(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Parser)]
#[command(
    name = "dunkkit",
    version,
    about = "Small-Biot dunking toolkit: shape functionals, lumped-model error estimates, and transient verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Which body to analyze: a named builtin or a geometry JSON file.
#[derive(Args, Debug)]
struct TargetOpts {
    /// Built-in case name (list them with `dunkkit geometry --list`).
    #[arg(long, conflicts_with = "geometry")]
    builtin: Option<String>,
    /// Geometry JSON file (analyzed with a uniform unit material).
    #[arg(long)]
    geometry: Option<PathBuf>,
}

impl TargetOpts {
    fn resolve(&self) -> Result<Builtin, CliError> {
        match (&self.builtin, &self.geometry) {
            (Some(name), None) => Builtin::lookup(name),
            (None, Some(path)) => Builtin::from_geometry_file(path),
            _ => Err(CliError::Message(
                "pass exactly one of --builtin <name> or --geometry <path>".into(),
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Emit a case's geometry description as JSON (or list the catalog).
    Geometry {
        #[command(flatten)]
        target: TargetOpts,
        /// List the built-in case catalog and exit.
        #[arg(long)]
        list: bool,
        /// Emit a triangulation of the geometry instead of its description.
        #[arg(long)]
        mesh: bool,
        /// Refinement levels for --mesh (1 = the coarse mesh).
        #[arg(long, default_value_t = 1)]
        levels: usize,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Shape functionals with refinement-study error estimates and bounds (JSON).
    Phi {
        #[command(flatten)]
        target: TargetOpts,
        /// Number of uniformly refined meshes in the study.
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// First decay rate against its lumped approximants over a list of bath strengths.
    Spectrum {
        #[command(flatten)]
        target: TargetOpts,
        /// Bath strengths B (comma-separated).
        #[arg(long = "B", value_delimiter = ',', default_values_t = vec![1e-3, 1e-2, 1e-1])]
        b: Vec<f64>,
        /// Mesh refinement levels before the eigensolve.
        #[arg(long, default_value_t = 2)]
        levels: usize,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Time-step the dunking transient and emit the observable series.
    Transient {
        #[command(flatten)]
        target: TargetOpts,
        /// Bath strength B.
        #[arg(long = "B", default_value_t = 1e-2)]
        b: f64,
        /// Horizon in slow-time units (one unit ~ one decay time).
        #[arg(long, default_value_t = 2.0)]
        tfinal: f64,
        /// Nominal number of time steps.
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// Mesh refinement levels (1 = the coarse mesh).
        #[arg(long, default_value_t = 2)]
        levels: usize,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Sweep bath strengths; compare measured lumped-model errors with the
    /// a-priori estimates (refinement-gated reference solves — can be slow).
    Estimate {
        #[command(flatten)]
        target: TargetOpts,
        /// Bath strengths B (comma-separated).
        #[arg(
            long = "B",
            value_delimiter = ',',
            default_values_t = vec![1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1, 2e-1, 5e-1, 1.0]
        )]
        b: Vec<f64>,
        /// Horizon in slow-time units.
        #[arg(long, default_value_t = 2.0)]
        tfinal: f64,
        /// Burn-in (slow time) before the core-surface split is scored.
        #[arg(long, default_value_t = 0.2)]
        t0: f64,
        /// Starting number of time steps for the gated reference solver.
        #[arg(long, default_value_t = 80)]
        steps: usize,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Two-sided envelope for a piecewise-constant time-varying bath,
    /// checked against a reference transient.
    Bounds {
        #[command(flatten)]
        target: TargetOpts,
        /// Bath strengths dealt out over the boundary edges (comma-separated).
        #[arg(long = "B", value_delimiter = ',', default_values_t = vec![0.0185, 0.126])]
        b: Vec<f64>,
        /// Horizon in slow-time units of the boundary-mean bath strength.
        #[arg(long, default_value_t = 3.0)]
        tfinal: f64,
        /// Number of time steps for the reference transient.
        #[arg(long, default_value_t = 400)]
        steps: usize,
        /// Mesh refinement levels (1 = the coarse mesh).
        #[arg(long, default_value_t = 2)]
        levels: usize,
        #[command(flatten)]
        out: OutputOpts,
    },
    /// Recompute an embedded reference table with pass/fail columns.
    /// The run exits 0 when it completes; comparison outcomes live in the
    /// status columns (and a stderr summary).
    Reproduce {
        /// Table id; see `dunkkit reproduce list`.
        id: String,
        #[command(flatten)]
        out: OutputOpts,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Geometry { target, list, mesh, levels, out } => {
            if list {
                let mut body = String::new();
                for (name, blurb) in builtins::CATALOG {
                    body.push_str(&format!("{name:<12} {blurb}\n"));
                }
                return out.write(&body);
            }
            let builtin = target.resolve()?;
            if mesh {
                let mut m = builtin.coarse_mesh()?;
                for _ in 1..levels.max(1) {
                    m = m.refine();
                }
                out.write(&m.to_json())
            } else {
                out.write(&format!("{}\n", builtin.spec.to_json()))
            }
        }
        Command::Phi { target, levels, out } => {
            let report = commands::run_phi(&target.resolve()?, levels)?;
            out.emit_json(&serde_json::to_value(&report).expect("report serializes"))
        }
        Command::Spectrum { target, b, levels, out } => {
            let table = commands::run_spectrum(&target.resolve()?, &b, levels)?;
            out.emit_table(&table)
        }
        Command::Transient { target, b, tfinal, steps, levels, out } => {
            commands::run_transient(&target.resolve()?, b, tfinal, steps, levels, &out)
        }
        Command::Estimate { target, b, tfinal, t0, steps, out } => {
            let table = commands::run_estimate(&target.resolve()?, &b, tfinal, t0, steps)?;
            out.emit_table(&table)
        }
        Command::Bounds { target, b, tfinal, steps, levels, out } => {
            let result = commands::run_bounds(&target.resolve()?, &b, tfinal, steps, levels)?;
            match out.format {
                Format::Csv => out.emit_table(&result.table),
                Format::Json => {
                    let doc = serde_json::json!({
                        "scalars": result.scalars,
                        "series": serde_json::to_value(&result.table).expect("table serializes"),
                    });
                    out.emit_json(&doc)
                }
            }
        }
        Command::Reproduce { id, out } => {
            if id == "list" {
                let mut body = String::new();
                for (name, blurb) in reproduce::IDS {
                    body.push_str(&format!("{name:<20} {blurb}\n"));
                }
                return out.write(&body);
            }
            let table = reproduce::run(&id)?;
            out.emit_table(&table)
        }
    }
}
