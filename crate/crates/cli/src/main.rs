//! `dqd`: CSV datasets for the double-quantum-dot model.
//!
//! Exit codes: 0 success, 1 invariant failure, 2 bad flags or config.

use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dqd_core::config::load_config;
use dqd_core::output::write_csv;
use dqd_core::sweep::{init_thread_pool, run_sweep, Axis, Measure, Param, Scale, SweepGrid};
use dqd_core::validate::{run_validation, ValidationReport};
use dqd_core::Error;

#[derive(Parser, Debug)]
#[command(
    name = "dqd",
    version,
    about = "Thermal correlations of a single electron in a double quantum dot"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Energy levels E1..E4 against detuning.
    Spectrum {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        bz: f64,
        #[arg(long)]
        bx: f64,
        #[arg(long, allow_hyphen_values = true)]
        eps_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        eps_max: f64,
        #[arg(long, default_value_t = 801)]
        n: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Diagonal populations rho11..rho44 against temperature.
    Populations {
        #[command(flatten)]
        scan: TemperatureScan,
        #[command(flatten)]
        out: Output,
    },
    /// Concurrence over a two-parameter grid.
    ConcurrenceMap {
        #[command(flatten)]
        fixed: FixedParams,
        #[arg(long)]
        x: Param,
        #[arg(long, allow_hyphen_values = true)]
        x_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        x_max: f64,
        #[arg(long)]
        nx: usize,
        #[arg(long)]
        x_log: bool,
        #[arg(long)]
        y: Param,
        #[arg(long, allow_hyphen_values = true)]
        y_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        y_max: f64,
        #[arg(long)]
        ny: usize,
        #[arg(long)]
        y_log: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Ground-state fidelity of the thermal state against temperature.
    Fidelity {
        #[command(flatten)]
        scan: TemperatureScan,
        #[command(flatten)]
        out: Output,
    },
    /// Concurrence and correlated coherence against temperature.
    Coherence {
        #[command(flatten)]
        scan: TemperatureScan,
        #[command(flatten)]
        out: Output,
    },
    /// Cross-check closed forms against numerics on random thermal states.
    Validate {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Run a sweep described by a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Debug)]
struct Output {
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Fixed model parameters; a swept parameter ignores its fixed value.
#[derive(Args, Debug)]
struct FixedParams {
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    bz: Option<f64>,
    #[arg(long)]
    bx: Option<f64>,
    /// Temperature.
    #[arg(long = "temp")]
    temperature: Option<f64>,
}

#[derive(Args, Debug)]
struct TemperatureScan {
    #[arg(long, allow_hyphen_values = true)]
    eps: f64,
    #[arg(long)]
    t: f64,
    #[arg(long, allow_hyphen_values = true)]
    bz: f64,
    #[arg(long)]
    bx: f64,
    #[arg(long)]
    t_min: f64,
    #[arg(long)]
    t_max: f64,
    #[arg(long, default_value_t = 400)]
    n: usize,
    /// Space temperatures logarithmically.
    #[arg(long)]
    log: bool,
}

impl TemperatureScan {
    fn grid(&self, measures: Vec<Measure>) -> SweepGrid {
        let scale = if self.log { Scale::Log } else { Scale::Linear };
        SweepGrid::new(
            Axis::new(Param::Temperature, self.t_min, self.t_max, self.n, scale),
            measures,
        )
        .fix(Param::Epsilon, self.eps)
        .fix(Param::Tunneling, self.t)
        .fix(Param::Bz, self.bz)
        .fix(Param::Bx, self.bx)
    }
}

fn scale(log: bool) -> Scale {
    if log {
        Scale::Log
    } else {
        Scale::Linear
    }
}

enum Failure {
    Input(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Invariant(e.to_string())
        }
    }
}

type Table = (Vec<String>, Vec<Vec<f64>>);

/// Runs `grid` and keeps the named columns, renaming via `(source, label)`.
fn select(grid: &SweepGrid, columns: &[(&str, &str)]) -> Result<Table, Failure> {
    let records = run_sweep(grid)?;
    let header = grid.header();
    let idx: Vec<usize> = columns
        .iter()
        .map(|(src, _)| header.iter().position(|h| h == src).expect("column produced by grid"))
        .collect();
    let rows = records
        .iter()
        .map(|r| {
            let full = grid.row(r);
            idx.iter().map(|&i| full[i]).collect()
        })
        .collect();
    Ok((columns.iter().map(|(_, label)| label.to_string()).collect(), rows))
}

fn emit(out: &Output, (header, rows): &Table) -> Result<(), Failure> {
    let result = match &out.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            write_csv(BufWriter::new(file), header, rows)
        }
        None => write_csv(io::stdout().lock(), header, rows),
    };
    match result {
        // a closed downstream pipe (`| head`) is not an error
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        r => r.map_err(|e| Failure::Invariant(format!("writing CSV: {e}"))),
    }
}

fn concurrence_map_grid(cmd: &Command) -> SweepGrid {
    let Command::ConcurrenceMap {
        fixed,
        x,
        x_min,
        x_max,
        nx,
        x_log,
        y,
        y_min,
        y_max,
        ny,
        y_log,
        ..
    } = cmd
    else {
        unreachable!("called with concurrence-map only")
    };
    let mut grid = SweepGrid::new(
        Axis::new(*x, *x_min, *x_max, *nx, scale(*x_log)),
        vec![Measure::Concurrence],
    )
    .with_axis2(Axis::new(*y, *y_min, *y_max, *ny, scale(*y_log)));
    let values = [
        (Param::Epsilon, fixed.eps),
        (Param::Tunneling, fixed.t),
        (Param::Bz, fixed.bz),
        (Param::Bx, fixed.bx),
        (Param::Temperature, fixed.temperature),
    ];
    for (p, v) in values {
        if let (Some(v), true) = (v, p != *x && p != *y) {
            grid = grid.fix(p, v);
        }
    }
    grid
}

fn run(cli: Cli) -> Result<(), Failure> {
    init_thread_pool()?;
    match &cli.command {
        Command::Spectrum {
            t,
            bz,
            bx,
            eps_min,
            eps_max,
            n,
            out,
        } => {
            let grid = SweepGrid::new(
                Axis::new(Param::Epsilon, *eps_min, *eps_max, *n, Scale::Linear),
                vec![Measure::Energies],
            )
            .fix(Param::Tunneling, *t)
            .fix(Param::Bz, *bz)
            .fix(Param::Bx, *bx);
            let cols = [
                ("epsilon", "eps"),
                ("E1", "E1"),
                ("E2", "E2"),
                ("E3", "E3"),
                ("E4", "E4"),
            ];
            emit(out, &select(&grid, &cols)?)
        }
        Command::Populations { scan, out } => {
            let cols = [
                ("T", "T"),
                ("rho11", "rho11"),
                ("rho22", "rho22"),
                ("rho33", "rho33"),
                ("rho44", "rho44"),
            ];
            emit(out, &select(&scan.grid(vec![Measure::Populations]), &cols)?)
        }
        cmd @ Command::ConcurrenceMap { x, y, out, .. } => {
            if x == y {
                return Err(Failure::Input(format!("--x and --y both sweep {x}")));
            }
            let cols = [(x.name(), x.name()), (y.name(), y.name()), ("C", "C")];
            emit(out, &select(&concurrence_map_grid(cmd), &cols)?)
        }
        Command::Fidelity { scan, out } => emit(
            out,
            &select(&scan.grid(vec![Measure::FidelityPure]), &[("T", "T"), ("F", "F")])?,
        ),
        Command::Coherence { scan, out } => {
            let grid = scan.grid(vec![Measure::Concurrence, Measure::CorrelatedCoherence]);
            emit(out, &select(&grid, &[("T", "T"), ("C", "C"), ("Ccc", "Ccc")])?)
        }
        Command::Validate { samples, seed, out } => {
            let report = run_validation(*samples, *seed)?;
            emit(out, &(ValidationReport::header(), report.rows()))?;
            eprintln!("{report}");
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Invariant("hard validation checks failed".into()))
            }
        }
        Command::Sweep { config, out } => {
            let grid = load_config(config)?;
            let records = run_sweep(&grid)?;
            let rows = records.iter().map(|r| grid.row(r)).collect();
            emit(out, &(grid.header(), rows))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
