//! `afideal`: ideal lattices, hull-kernel topologies and tower analyses of
//! upper-triangular matrix algebras.
//!
//! Exit status: 0 on success, 1 when a checked property fails, 2 on bad input.

mod report;
mod spec;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use afideal::hull_kernel::IdealSpace;
use afideal::towers::Tower;
use afideal::{algebra::parse_blocks, dot, enumerate_ideals, AlgebraShape, Ideal, MatrixUnit};

use report::{counterexample_text, twist_text};
use spec::{Analysis, TowerSpec};

#[derive(Parser, Debug)]
#[command(
    name = "afideal",
    version,
    about = "Ideal structure of triangular matrix algebras and their towers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate and classify the ideals of a shape.
    Lattice {
        /// Block sizes, e.g. `4` or `2,3`.
        #[arg(long)]
        shape: String,
        /// Print only the number of ideals.
        #[arg(long)]
        count: bool,
        /// Print the meet-irreducible ideals, one per line.
        #[arg(long)]
        meet_irreducibles: bool,
        /// Classify the largest ideal excluding this unit: `i,j` (block 1) or `b,i,j`.
        #[arg(long, value_name = "UNIT")]
        classify_unit: Option<String>,
        #[arg(long, value_enum)]
        dot: Option<LatticeDot>,
        /// Write DOT or JSON output here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hull-kernel topology on the meet-irreducible ideals of a shape.
    Topology {
        #[arg(long)]
        shape: String,
        #[arg(long, value_enum)]
        dot: Option<TopologyDot>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Chain, decomposition and order analyses of a tower.
    Tower {
        /// JSON tower spec; not needed with `--counterexample` or `--twist-search`.
        spec: Option<PathBuf>,
        /// Reproduce the T4 -> T8 counterexample.
        #[arg(long)]
        counterexample: bool,
        /// Search all two-strand T4 -> T8 embeddings for the twist.
        #[arg(long)]
        twist_search: bool,
        /// Emit JSON for `--counterexample` and `--twist-search` too.
        #[arg(long)]
        json: bool,
        #[arg(long, value_enum)]
        dot: Option<TowerDot>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LatticeDot {
    Hasse,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TopologyDot {
    Specialization,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TowerDot {
    Bratteli,
}

enum Failure {
    Violation(String),
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation(msg)) => {
            eprintln!("property violation: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

fn parse_shape(text: &str) -> Result<AlgebraShape> {
    Ok(AlgebraShape::new(parse_blocks(text)?)?)
}

fn parse_unit(text: &str) -> Result<MatrixUnit> {
    let parts = text
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| anyhow!("bad unit component {p:?}"))
        })
        .collect::<Result<Vec<_>>>()?;
    match parts[..] {
        [i, j] => Ok(MatrixUnit::new(1, i, j)),
        [b, i, j] => Ok(MatrixUnit::new(b, i, j)),
        _ => bail!("unit must be `i,j` or `b,i,j`, got {text:?}"),
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Lattice {
            shape,
            count,
            meet_irreducibles,
            classify_unit,
            dot,
            out,
        } => {
            let shape = parse_shape(&shape)?;
            let lattice = enumerate_ideals(&shape).map_err(anyhow::Error::from)?;
            if count {
                emit(&format!("{}\n", lattice.len()), out.as_ref())?;
            } else if meet_irreducibles {
                let mut text = String::new();
                for k in lattice.meet_irreducible_indices() {
                    let ex: Vec<String> = lattice
                        .get(k)
                        .excluded_units()
                        .iter()
                        .map(|e| e.to_string())
                        .collect();
                    text.push_str(&format!("{k}: excludes {}\n", ex.join(" ")));
                }
                emit(&text, out.as_ref())?;
            } else if let Some(unit) = classify_unit {
                let e = parse_unit(&unit)?;
                let ideal = Ideal::largest_excluding(&shape, &e).map_err(anyhow::Error::from)?;
                let c = lattice.classify(&ideal).map_err(anyhow::Error::from)?;
                emit(
                    &format!(
                        "k4={} prime={} meet_irreducible={} maximal={} primary={}\n",
                        c.k4, c.prime, c.meet_irreducible, c.maximal, c.primary
                    ),
                    out.as_ref(),
                )?;
            } else if let Some(LatticeDot::Hasse) = dot {
                emit(&dot::lattice_hasse(&lattice), out.as_ref())?;
            } else {
                emit(&json(&report::lattice_report(&lattice))?, out.as_ref())?;
            }
            Ok(())
        }
        Command::Topology { shape, dot, out } => {
            let shape = parse_shape(&shape)?;
            let lattice = enumerate_ideals(&shape).map_err(anyhow::Error::from)?;
            let space = IdealSpace::meet_irreducible(&shape);
            if let Some(TopologyDot::Specialization) = dot {
                emit(&dot::specialization(&space), out.as_ref())?;
                return Ok(());
            }
            let doc = report::topology_report(&space, &lattice);
            emit(&json(&doc)?, out.as_ref())?;
            if doc.holds() {
                Ok(())
            } else {
                Err(Failure::Violation(
                    "hull-kernel closure is not a topology matching the ideals".into(),
                ))
            }
        }
        Command::Tower {
            spec,
            counterexample,
            twist_search,
            json: as_json,
            dot,
            out,
        } => {
            let (tower, analyses) = match (&spec, counterexample, twist_search) {
                (Some(path), false, false) => {
                    let text =
                        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    let spec = TowerSpec::parse(&text)?;
                    (spec.build_tower()?, spec.analyses())
                }
                (None, true, false) => (Tower::counterexample(), vec![Analysis::Counterexample]),
                (None, false, true) => (Tower::counterexample(), vec![Analysis::TwistSearch]),
                _ => {
                    return Err(Failure::Input(anyhow!(
                        "give exactly one of a spec file, --counterexample or --twist-search"
                    )))
                }
            };
            if let Some(TowerDot::Bratteli) = dot {
                emit(&dot::bratteli(&tower), out.as_ref())?;
                return Ok(());
            }
            let report = report::tower_report(&tower, &analyses)?;
            let text = if spec.is_none() && !as_json {
                match (&report.counterexample, &report.twist_search) {
                    (Some(c), _) => counterexample_text(c),
                    (_, Some(t)) => twist_text(t),
                    _ => unreachable!("one of the two sections is requested"),
                }
            } else {
                json(&report)?
            };
            emit(&text, out.as_ref())?;
            if report.violations.is_empty() {
                Ok(())
            } else {
                Err(Failure::Violation(report.violations.join("; ")))
            }
        }
    }
}
