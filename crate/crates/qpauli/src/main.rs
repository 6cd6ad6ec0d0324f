//! Command-line interface: verification runs, exact moment tables, density
//! reconstruction, Monte Carlo sampling, the symmetric-group baseline, and
//! the Weingarten matrices.
//!
//! Exit codes: 0 on success, 1 on failed checks or internal errors, 2 on
//! usage errors. Data goes to standard output (or `--output`); diagnostics
//! go to standard error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};

use qpauli::error::Error;
use qpauli::exact::Rational;
use qpauli::laws::density::{default_eps_schedule, stieltjes_density, GridSpec};
use qpauli::laws::mc::mc_law;
use qpauli::laws::{exact_moments_up_to, VariableKind, VariableSpec};
use qpauli::output::{self, Format};
use qpauli::report::{format_table, run_suite, Suite};
use qpauli::weingarten::gram;

#[derive(Parser)]
#[command(
    name = "qpauli",
    version,
    about = "Exact Haar-state moments of the quantum permutation algebra on four points"
)]
struct Cli {
    /// Cap worker parallelism (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write data output to a file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run exact verification suites and print a pass/fail table.
    Verify {
        /// algebra | faithfulness | laws | identities | all
        #[arg(long, default_value = "all")]
        suite: String,
        /// Bound on every order-indexed family of checks.
        #[arg(long, default_value_t = 3)]
        max_k: usize,
    },
    /// Exact moment table of a variable.
    Moments {
        /// m1 | m2 | m3 | m4 | n3 | wt | vt
        #[arg(long)]
        variable: String,
        /// Highest moment order.
        #[arg(long, default_value_t = 9)]
        order: u32,
        /// Parameter value for wt/vt, as an exact rational like 1/2.
        #[arg(long)]
        t: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Override the per-variable order cap.
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Density reconstruction by Stieltjes inversion on a grid.
    Density {
        #[arg(long)]
        variable: String,
        #[arg(long)]
        t: Option<String>,
        /// Grid as x_min:x_max:n, inside (0, 1).
        #[arg(long, default_value = "0.01:0.99:99")]
        grid: String,
        /// Epsilon schedule as start:end:count (geometric).
        #[arg(long)]
        eps: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Seeded Monte Carlo sampling of the spectral law.
    Mc {
        #[arg(long)]
        variable: String,
        #[arg(long)]
        t: Option<String>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Highest empirical moment order.
        #[arg(long, default_value_t = 4)]
        order: u32,
        /// Histogram bins.
        #[arg(long, default_value_t = 50)]
        bins: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Exact law of a weighted diagonal sum over the symmetric group.
    S4 {
        /// Four rational weights summing to 1, e.g. 1/4,1/4,1/4,1/4.
        #[arg(long)]
        weights: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Gram matrix and its exact inverse at a fixed order.
    Weingarten {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidArgument(_) | Error::MissingParameter(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn parse_t(t: &Option<String>) -> Result<Option<Rational>, Error> {
    t.as_ref().map(|s| Rational::from_str(s)).transpose()
}

fn parse_spec(variable: &str, t: &Option<String>) -> Result<VariableSpec, Error> {
    VariableSpec::new(VariableKind::from_str(variable)?, parse_t(t)?)
}

fn parse_grid(grid: &str) -> Result<GridSpec, Error> {
    let bad = || Error::InvalidArgument(format!("grid must be x_min:x_max:n, got {grid:?}"));
    let parts: Vec<&str> = grid.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let x_min: f64 = parts[0].parse().map_err(|_| bad())?;
    let x_max: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    if !(x_min < x_max) || n == 0 {
        return Err(bad());
    }
    Ok(GridSpec { x_min, x_max, n })
}

fn parse_eps(eps: &Option<String>) -> Result<Vec<f64>, Error> {
    let Some(eps) = eps else {
        return Ok(default_eps_schedule());
    };
    let bad = || Error::InvalidArgument(format!("eps must be start:end:count, got {eps:?}"));
    let parts: Vec<&str> = eps.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].parse().map_err(|_| bad())?;
    let end: f64 = parts[1].parse().map_err(|_| bad())?;
    let count: usize = parts[2].parse().map_err(|_| bad())?;
    if count < 2 || start <= 0.0 || end <= 0.0 || start <= end {
        return Err(bad());
    }
    let ratio = (end / start).powf(1.0 / (count - 1) as f64);
    Ok((0..count).map(|i| start * ratio.powi(i as i32)).collect())
}

fn emit(output: &Option<PathBuf>, data: &str) -> Result<(), Error> {
    match output {
        Some(path) => std::fs::write(path, data).map_err(Into::into),
        None => {
            print!("{data}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Verify { suite, max_k } => {
            let suite = Suite::from_str(&suite)?;
            if max_k == 0 {
                return Err(Error::InvalidArgument("--max-k must be at least 1".into()));
            }
            let checks = run_suite(suite, max_k);
            emit(&cli.output, &format_table(&checks))?;
            let failed = checks.iter().any(|c| !c.passed);
            Ok(if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Moments {
            variable,
            order,
            t,
            format,
            cap,
        } => {
            let spec = parse_spec(&variable, &t)?;
            if order == 0 {
                return Err(Error::InvalidArgument("--order must be at least 1".into()));
            }
            let cap = cap.unwrap_or_else(|| spec.kind.moment_order_cap());
            let symbolic = exact_moments_up_to(spec.kind, order, cap)?;
            let mut rows = Vec::with_capacity(symbolic.len());
            for (i, m) in symbolic.iter().enumerate() {
                let value = match (m.as_constant(), &spec.t) {
                    (Some(c), _) => c,
                    (None, Some(t)) => m.eval(t),
                    (None, None) => return Err(Error::MissingParameter(spec.kind.name())),
                };
                rows.push((i as u32 + 1, value));
            }
            let data = match format {
                Format::Csv => output::moments_csv(&rows),
                Format::Json => output::moments_json(spec.kind.name(), spec.t.as_ref(), &rows),
            };
            emit(&cli.output, &data)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Density {
            variable,
            t,
            grid,
            eps,
            format,
        } => {
            let spec = parse_spec(&variable, &t)?;
            let grid = parse_grid(&grid)?;
            let eps = parse_eps(&eps)?;
            let points = stieltjes_density(&spec, &grid, &eps)?;
            let data = match format {
                Format::Csv => output::density_csv(&points),
                Format::Json => output::density_json(spec.kind.name(), spec.t.as_ref(), &points),
            };
            emit(&cli.output, &data)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Mc {
            variable,
            t,
            samples,
            seed,
            order,
            bins,
            format,
        } => {
            let spec = parse_spec(&variable, &t)?;
            if bins == 0 || order == 0 {
                return Err(Error::InvalidArgument(
                    "--bins and --order must be at least 1".into(),
                ));
            }
            let report = mc_law(&spec, samples, seed, order, bins)?;
            let data = match format {
                Format::Csv => output::mc_csv(&report),
                Format::Json => output::mc_json(&report, spec.t.as_ref()),
            };
            emit(&cli.output, &data)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::S4 { weights, format } => {
            let parts: Vec<&str> = weights.split(',').collect();
            if parts.len() != 4 {
                return Err(Error::InvalidArgument(format!(
                    "--weights needs four comma-separated rationals, got {weights:?}"
                )));
            }
            let mut t: Vec<Rational> = Vec::with_capacity(4);
            for p in parts {
                t.push(Rational::from_str(p)?);
            }
            let t: [Rational; 4] = t.try_into().expect("four weights");
            let law = qpauli::s4::classical_law(&t)?;
            let data = match format {
                Format::Csv => output::s4_csv(&law),
                Format::Json => output::s4_json(&t, &law),
            };
            emit(&cli.output, &data)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Weingarten { k, format } => {
            let g = gram(k)?;
            let inverse = g.matrix().invert_fraction_free()?;
            let data = match format {
                Format::Csv => output::weingarten_csv(&g, &inverse),
                Format::Json => output::weingarten_json(&g, &inverse),
            };
            emit(&cli.output, &data)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
