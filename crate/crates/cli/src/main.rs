//! `maxvar`: exact maximal functions of rational step functions.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad input.

mod config;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use maxvar::envelope::{build_profile, region_e, variation_of_profile};
use maxvar::maximal::maximal_value;
use maxvar::stepfn::parse_stepfn;
use maxvar::verify::{
    continuity_experiment, counterexample, lemma_suite, point_blind_variation, random_stepfn, CorpusItem,
    SuiteOptions,
};
use maxvar::{Ext, Rat, StepFunction};

#[derive(Parser, Debug)]
#[command(name = "maxvar", version, about = "Exact uncentered maximal functions of rational step functions")]
struct Cli {
    /// Append a k-digit decimal rendering next to exact values
    #[arg(long, global = true, value_name = "K")]
    decimal: Option<usize>,

    /// Width of certified enclosures
    #[arg(long, global = true, default_value = "1/1000000000")]
    precision: Rat,

    /// Write the report here instead of standard output
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    /// the maximal function
    Maximal,
    /// the step function itself
    Function,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Value of the maximal function at a point, with the interval attaining it
    Eval {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: Rat,
    },
    /// Total variation on an open interval
    Var {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true, default_value = "-inf")]
        from: Ext<Rat>,
        #[arg(long, allow_hyphen_values = true, default_value = "inf")]
        to: Ext<Rat>,
        #[arg(long, value_enum, default_value = "maximal")]
        of: Target,
    },
    /// Piecewise Möbius pieces of the maximal function, one per line
    Profile {
        #[arg(long)]
        file: PathBuf,
    },
    /// The detachment set E and its complement
    ESet {
        #[arg(long)]
        file: PathBuf,
    },
    /// Run the property suite over a corpus directory or a seed range
    Check {
        /// directory of step-function files
        #[arg(long, conflicts_with = "seeds")]
        corpus: Option<PathBuf>,
        /// half-open range of generator seeds, e.g. 0..100
        #[arg(long, default_value = "0..100")]
        seeds: String,
        /// largest breakpoint count of generated functions
        #[arg(long, default_value_t = 8)]
        breakpoints: usize,
        /// replace the variation routine with one that ignores point values
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Convergence run f + s_j·g described by a key=value config
    Experiment {
        #[arg(long)]
        config: PathBuf,
    },
    /// The exact sequence with vanishing BV distance but non-vanishing distance of maximal functions
    Counterexample {
        #[arg(long)]
        n: u32,
        /// truncation of the bump train, default n + 2
        #[arg(long)]
        k: Option<u32>,
    },
}

enum Failure {
    BadInput(String),
    CheckFailed,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::BadInput(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read_stepfn(path: &Path) -> Result<StepFunction, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::BadInput(format!("{}: {e}", path.display())))?;
    parse_stepfn(&text).map_err(|e| Failure::BadInput(format!("{}: {e}", path.display())))
}

fn emit(cli: &Cli, report: &str) -> Outcome {
    match &cli.output {
        Some(path) => fs::write(path, report).map_err(|e| Failure::BadInput(format!("{}: {e}", path.display()))),
        None => {
            print!("{report}");
            Ok(())
        }
    }
}

fn with_decimal(exact: String, value: &Rat, decimal: Option<usize>) -> String {
    match decimal {
        Some(k) => format!("{exact}\t{}", value.to_decimal(k)),
        None => exact,
    }
}

fn parse_seeds(spec: &str) -> Result<std::ops::Range<u64>, Failure> {
    let bad = || Failure::BadInput(format!("seed range must look like `a..b`, got {spec:?}"));
    let (a, b) = spec.split_once("..").ok_or_else(bad)?;
    Ok(a.trim().parse().map_err(|_| bad())?..b.trim().parse().map_err(|_| bad())?)
}

fn load_corpus(dir: &Path) -> Result<Vec<CorpusItem>, Failure> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Failure::BadInput(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    paths.sort();
    paths.iter().enumerate().map(|(id, p)| Ok(CorpusItem { id: id as u64, f: read_stepfn(p)? })).collect()
}

fn run(cli: &Cli) -> Outcome {
    if !cli.precision.is_positive() {
        return Err(Failure::BadInput(format!("precision must be positive, got {}", cli.precision)));
    }
    match &cli.command {
        Command::Eval { file, x } => {
            let f = read_stepfn(file)?;
            let m = maximal_value(&f, x);
            emit(cli, &format!("{}\n", with_decimal(format!("{} {}", m.value, m.witness), &m.value, cli.decimal)))
        }
        Command::Var { file, from, to, of } => {
            let f = read_stepfn(file)?;
            let line = match of {
                Target::Function => {
                    let v = f.variation_on(from, to)?;
                    with_decimal(v.to_string(), &v, cli.decimal)
                }
                Target::Maximal => {
                    let v = variation_of_profile(&build_profile(&f), from, to, &cli.precision)?;
                    with_decimal(v.to_string(), &v.midpoint(), cli.decimal)
                }
            };
            emit(cli, &format!("{line}\n"))
        }
        Command::Profile { file } => {
            let f = read_stepfn(file)?;
            emit(cli, &build_profile(&f).to_tsv(cli.decimal.unwrap_or(12)))
        }
        Command::ESet { file } => {
            let f = read_stepfn(file)?;
            let (e, c) = region_e(&f, &build_profile(&f));
            emit(cli, &format!("E\t{e}\nC\t{c}\n"))
        }
        Command::Check { corpus, seeds, breakpoints, inject_fault } => {
            let items = match corpus {
                Some(dir) => load_corpus(dir)?,
                None => parse_seeds(seeds)?
                    .map(|seed| Ok(CorpusItem { id: seed, f: random_stepfn(seed, *breakpoints, 4, 4)? }))
                    .collect::<Result<_, Failure>>()?,
            };
            if items.is_empty() {
                return Err(Failure::BadInput("corpus is empty".into()));
            }
            let mut opts = SuiteOptions { precision: cli.precision.clone(), ..SuiteOptions::default() };
            if *inject_fault {
                opts.variation = point_blind_variation;
            }
            let report = lemma_suite(&items, &opts)?;
            emit(cli, &report.to_tsv())?;
            for row in report.failures() {
                eprintln!("FAIL {} on function {}: {}", row.check, row.id, row.detail);
            }
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::CheckFailed)
            }
        }
        Command::Experiment { config } => {
            let text =
                fs::read_to_string(config).map_err(|e| Failure::BadInput(format!("{}: {e}", config.display())))?;
            let base = config.parent().unwrap_or(Path::new("."));
            let cfg = config::parse(&text, base).map_err(|e| Failure::BadInput(format!("{}: {e}", config.display())))?;
            let f = match &cfg.function {
                Some(p) => read_stepfn(p)?,
                None => random_stepfn(cfg.seed, 6, 3, 3)?,
            };
            let g = match &cfg.perturbation {
                Some(p) => read_stepfn(p)?,
                None => random_stepfn(cfg.seed.wrapping_add(1), 6, 3, 3)?,
            };
            let gs = vec![g; cfg.scales.len()];
            let report = continuity_experiment(&f, &gs, &cfg.scales, &cfg.precision)?;
            let verdict = report.verdict(&cfg.thresholds);
            let mut out = report.to_tsv(cli.decimal);
            let t = &cfg.thresholds;
            let status = |ok: bool| if ok { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "# final bv_distance <= {} : {}", t.final_distance, status(verdict.final_distance_ok));
            let _ = writeln!(out, "# eventually nonincreasing : {}", status(verdict.eventually_nonincreasing));
            let _ = writeln!(
                out,
                "# variation gap {} <= {} from j = {} : {}",
                verdict.worst_variation_gap,
                t.variation_gap,
                t.variation_from,
                status(verdict.variation_converges)
            );
            emit(cli, &out)?;
            if verdict.passed() {
                Ok(())
            } else {
                Err(Failure::CheckFailed)
            }
        }
        Command::Counterexample { n, k } => {
            let rep = counterexample(*n, k.unwrap_or(n + 2), &cli.precision)?;
            emit(cli, &rep.to_string())?;
            if rep.passed() {
                Ok(())
            } else {
                Err(Failure::CheckFailed)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::CheckFailed) => ExitCode::from(1),
        Err(Failure::BadInput(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
