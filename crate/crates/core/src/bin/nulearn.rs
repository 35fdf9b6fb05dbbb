use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;

use nulearn::fpl::derive_seed;
use nulearn::hypothesis::io::{ClassDef, ClassSource, LoadedClass};
use nulearn::hypothesis::ConceptClass;
use nulearn::learners::LearnerSpec;
use nulearn::littlestone::{ldim, shattered_tree_witness, VersionSpace};
use nulearn::nature::NatureSpec;
use nulearn::runner::{
    monte_carlo, run_game, verify_bounds, Check, ComparatorSpec, ExperimentConfig, Fault, Suite, VerifyOptions,
};

#[derive(Parser)]
#[command(name = "nulearn", version, about = "Online learning experiments: Littlestone dimension, mistake bounds and regret")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Littlestone dimension of a class file.
    Ldim {
        class: PathBuf,
        /// Also print a shattered tree of maximal depth as JSON.
        #[arg(long)]
        witness: bool,
    },
    /// Play one game and report mistakes and regret.
    Play {
        /// Learner spec: inline JSON or a path to a JSON file.
        #[arg(long)]
        learner: String,
        /// Nature spec: inline JSON or a path to a JSON file.
        #[arg(long)]
        nature: String,
        #[arg(short = 'T', long = "horizon")]
        horizon: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the trace as CSV (`-` for stdout).
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Class to measure regret against: inline JSON or a path.
        #[arg(long)]
        compare: Option<String>,
        /// Components of the comparison family, when it is infinite.
        #[arg(long)]
        components: Option<usize>,
    },
    /// Monte-Carlo regret curve for an experiment config file.
    Regret {
        #[arg(long)]
        config: PathBuf,
        /// Print the curve as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Run the bound-verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::Default)]
        suite: Suite,
        #[arg(long, default_value_t = VerifyOptions::default().seed)]
        seed: u64,
        /// Run only the named checks.
        #[arg(long = "check", value_enum)]
        checks: Vec<Check>,
        /// Write the full report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Corrupt the Ldim memo to confirm the suite catches it.
        #[arg(long)]
        corrupt_ldim_memo: bool,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Parses `arg` as JSON when it looks like an object, otherwise as a path.
fn inline_or_file<T: DeserializeOwned>(arg: &str) -> Result<T> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing {arg}"))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Ldim { class, witness } => ldim_command(&class, witness),
        Command::Play {
            learner,
            nature,
            horizon,
            seed,
            csv,
            compare,
            components,
        } => {
            let learner_spec: LearnerSpec = inline_or_file(&learner)?;
            let nature_spec: NatureSpec = inline_or_file(&nature)?;
            let mut rivals = match compare {
                Some(c) => {
                    let class: ClassSource = if c.trim_start().starts_with('{') {
                        ClassSource::Inline(serde_json::from_str(&c).context("parsing --compare")?)
                    } else {
                        ClassSource::Path(c.into())
                    };
                    Some(ComparatorSpec { class, components }.build()?)
                }
                None => None,
            };
            let mut l = learner_spec.build(derive_seed(seed, 1))?;
            let mut n = nature_spec.build(&learner_spec, derive_seed(seed, 2))?;
            let trace = run_game(l.as_mut(), &mut n, horizon, rivals.as_mut())?;
            match csv.as_deref() {
                Some(p) if p == Path::new("-") => trace.write_csv(io::stdout().lock())?,
                Some(p) => {
                    let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
                    trace.write_csv(BufWriter::new(f))?;
                }
                None => {}
            }
            let summary = match trace.best_rival() {
                Some(best) => format!(
                    "{}: {} rounds, {} mistakes, best rival {}, regret {}",
                    trace.learner,
                    trace.len(),
                    trace.mistakes(),
                    best,
                    trace.mistakes() as i64 - best as i64
                ),
                None => format!("{}: {} rounds, {} mistakes", trace.learner, trace.len(), trace.mistakes()),
            };
            if csv.as_deref() == Some(Path::new("-")) {
                eprintln!("{summary}");
            } else {
                println!("{summary}");
            }
            Ok(true)
        }
        Command::Regret { config, json } => {
            let cfg: ExperimentConfig = inline_or_file(&config.to_string_lossy())?;
            let curve = monte_carlo(&cfg)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&curve)?);
            } else {
                println!("{:>8} {:>7} {:>12} {:>10} {:>12} {:>6}", "T", "trials", "regret", "se", "bound", "holds");
                for p in &curve.points {
                    let bound = p.bound.map_or("-".to_string(), |b| format!("{b:.4}"));
                    let holds = p.holds.map_or("-", |h| if h { "yes" } else { "no" });
                    println!(
                        "{:>8} {:>7} {:>12.4} {:>10.4} {:>12} {:>6}",
                        p.horizon, p.regret.trials, p.regret.mean, p.regret.se, bound, holds
                    );
                }
            }
            Ok(curve.all_hold())
        }
        Command::Verify {
            suite,
            seed,
            checks,
            report,
            corrupt_ldim_memo,
        } => {
            let options = VerifyOptions {
                suite,
                seed,
                fault: corrupt_ldim_memo.then_some(Fault::CorruptLdimMemo),
                checks: (!checks.is_empty()).then_some(checks),
            };
            let report_data = verify_bounds(&options);
            let mut out = io::stdout().lock();
            for v in &report_data.verdicts {
                writeln!(
                    out,
                    "{} {:<17} {:>7.1}s  {}",
                    if v.passed { "PASS" } else { "FAIL" },
                    v.check.name(),
                    v.seconds,
                    v.detail
                )?;
            }
            if let Some(path) = report {
                let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                serde_json::to_writer_pretty(BufWriter::new(f), &report_data)?;
            }
            Ok(report_data.all_passed())
        }
    }
}

fn ldim_command(path: &Path, witness: bool) -> Result<bool> {
    match ClassDef::from_file(path)?.build()? {
        LoadedClass::Concept(ConceptClass::Finite(class)) => {
            let d = ldim(&class)?;
            println!("{d}");
            if witness && d > 0 {
                let w = shattered_tree_witness(&class, d)?.context("no witness at the computed depth")?;
                println!("{}", serde_json::to_string_pretty(&w)?);
            }
        }
        LoadedClass::Concept(other) => {
            if witness {
                bail!("witnesses are only produced for explicit finite classes");
            }
            println!("{}", VersionSpace::new(&other).ldim()?);
        }
        LoadedClass::Family(f) => {
            let n = f.component_count().context("the family is infinite; Ldim is reported per component")?;
            for i in 1..=n {
                let c = f.component(i)?;
                println!("H_{i}: {}", c.dim);
            }
        }
    }
    Ok(true)
}
