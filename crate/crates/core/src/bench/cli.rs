//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use super::config::{self, Config};
use super::pipeline::{self, Form, Quadric};
use super::report::{to_csv, to_json, BoundReport};
use super::sweep;
use super::BenchError;
use crate::constructions::ConstructionSpec;
use crate::counting::Strategy;

#[derive(Debug, Parser)]
#[command(name = "incidence-lab", version, about = "Exact incidence, distance and energy experiments over prime fields")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Exit with status 3 when any hypothesis flag is violated.
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstructionName {
    Sphere,
    Coprime,
    Elekes,
    SemiIsotropic,
    Cylinder,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormName {
    Dot,
    Wedge,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit a construction as a configuration file.
    Construct {
        #[arg(value_enum)]
        name: ConstructionName,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        l: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<i64>,
        #[arg(long)]
        k0: Option<u64>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        dim: Option<usize>,
        /// Draw the vertical coordinates of a semi-isotropic set at random.
        #[arg(long)]
        random_heights: bool,
    },
    /// Point–plane (dim 3) or point–line (dim 2) incidences.
    Count {
        config: PathBuf,
        /// Use the direct double loop instead of the bucketed count.
        #[arg(long)]
        naive: bool,
        /// Also count lines with at least this many points (dim 2).
        #[arg(long)]
        rich: Option<usize>,
    },
    /// Distance set and pinned distances (dim 2 or 3).
    Distances {
        config: PathBuf,
        /// Do not count 0 among pinned distances.
        #[arg(long)]
        exclude_zero: bool,
    },
    /// Additive energy on the paraboloid, or on a sphere with `--sphere T`.
    Energy {
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        sphere: Option<i64>,
    },
    /// Values of a bilinear form (dim 2).
    Forms {
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = FormName::Dot)]
        form: FormName,
    },
    /// Recompute all applicable counts with nested-loop oracles.
    Verify { config: PathBuf },
    /// Run a TOML parameter sweep.
    Sweep { spec: PathBuf },
}

fn read(path: &Path) -> Result<String, BenchError> {
    std::fs::read_to_string(path)
        .map_err(|e| BenchError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Config, BenchError> {
    Ok(config::parse(&read(path)?)?)
}

fn need<T>(v: Option<T>, name: &str) -> Result<T, BenchError> {
    v.ok_or_else(|| BenchError::Usage(format!("--{name} is required for this construction")))
}

fn render(rows: &[BoundReport], format: Format) -> String {
    match format {
        Format::Csv => to_csv(rows),
        Format::Json => to_json(rows),
    }
}

fn strict_check(rows: &[BoundReport], strict: bool) -> Result<(), BenchError> {
    if !strict {
        return Ok(());
    }
    let bad: Vec<String> = rows
        .iter()
        .flat_map(|r| {
            r.flags
                .iter()
                .filter(|f| !f.1)
                .map(move |f| format!("{} p={} {}", r.theorem, r.p, f.0))
        })
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(BenchError::Constraint(bad.join(", ")))
    }
}

/// Output text and a deferred error (reported after the output is written).
fn execute(cli: &Cli) -> Result<(String, Result<(), BenchError>), BenchError> {
    let rows_out = |rows: Vec<BoundReport>| {
        let text = render(&rows, cli.format);
        Ok((text, strict_check(&rows, cli.strict)))
    };
    match &cli.command {
        Command::Construct {
            name,
            p,
            n,
            k,
            l,
            t,
            k0,
            m,
            dim,
            random_heights,
        } => {
            let p = *p;
            let spec = match name {
                ConstructionName::Sphere => ConstructionSpec::Sphere { p },
                ConstructionName::Coprime => ConstructionSpec::CoprimeLattice { n: need(*n, "n")?, p },
                ConstructionName::Elekes => ConstructionSpec::Elekes { n: need(*n, "n")?, p },
                ConstructionName::SemiIsotropic => ConstructionSpec::SemiIsotropic {
                    k: need(*k, "k")?,
                    l: need(*l, "l")?,
                    p,
                    seed: random_heights.then_some(cli.seed),
                },
                ConstructionName::Cylinder => ConstructionSpec::Cylinder {
                    p,
                    t: t.unwrap_or(1),
                    k0: need(*k0, "k0")?,
                    m: need(*m, "m")?,
                },
                ConstructionName::Random => ConstructionSpec::Random {
                    p,
                    dim: need(*dim, "dim")?,
                    n: need(*n, "n")? as usize,
                    seed: cli.seed,
                },
            };
            Ok((config::emit(&spec.build()?), Ok(())))
        }
        Command::Count { config, naive, rich } => {
            let strategy = if *naive { Strategy::Naive } else { Strategy::Bucketed };
            rows_out(pipeline::incidences(&load(config)?, strategy, *rich)?)
        }
        Command::Distances { config, exclude_zero } => rows_out(pipeline::distances(&load(config)?, !exclude_zero)?),
        Command::Energy { config, sphere } => {
            let quadric = sphere.map_or(Quadric::Paraboloid, Quadric::Sphere);
            rows_out(pipeline::energy(&load(config)?, quadric)?.1)
        }
        Command::Forms { config, form } => {
            let form = match form {
                FormName::Dot => Form::Dot,
                FormName::Wedge => Form::Wedge,
            };
            rows_out(pipeline::forms(&load(config)?, form)?)
        }
        Command::Verify { config } => {
            let checks = pipeline::verify(&load(config)?)?;
            let text = match cli.format {
                Format::Csv => {
                    let mut s = String::from("check,expected,actual,status\n");
                    for c in &checks {
                        let status = if c.passed() { "ok" } else { "MISMATCH" };
                        s.push_str(&format!("{},{},{},{status}\n", c.name, c.expected, c.actual));
                    }
                    s
                }
                Format::Json => serde_json::to_string_pretty(&checks).expect("checks serialize") + "\n",
            };
            let failed: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
            let deferred = if failed.is_empty() {
                Ok(())
            } else {
                Err(BenchError::Mismatch(failed.join(", ")))
            };
            Ok((text, deferred))
        }
        Command::Sweep { spec } => {
            let cells = sweep::parse_spec(&read(spec)?, cli.seed)?;
            rows_out(sweep::run(&cells)?)
        }
    }
}

fn write_output(cli: &Cli, text: &str) -> Result<(), BenchError> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn run_parsed(cli: &Cli) -> Result<(), BenchError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| BenchError::Usage(format!("--threads: {e}")))?;
    }
    let (text, deferred) = execute(cli)?;
    write_output(cli, &text)?;
    deferred
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run_parsed(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
