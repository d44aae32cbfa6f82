//! Command-line interface: `simulate`, `analyze`, `sweep` and `graph`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::analysis::{analyze_samples, write_fit_report, FitOptions};
use crate::contact::{
    read_durations_csv, write_durations_csv, write_events_csv, DurationKind, Durations,
};
use crate::error::{Error, Result};
use crate::graph::{EdgeWeight, SocialGraph};
use crate::population::write_population_csv;
use crate::rng::{stage_rng, Stage};
use crate::scenario;
use crate::simulator::{
    run_simulation, ContactTracker, Observer, Scenario, Simulation, TraceWriter, TransitionWriter,
};
use crate::sweep::{self, Aspect};

/// Exit status when the analysis ran but some fit could not be made.
pub const EXIT_FIT_INFEASIBLE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "simps",
    version,
    about = "Social-pressure mobility simulator and contact analysis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct FitArgs {
    /// Lower end of the fit range (s).
    #[arg(long, default_value_t = 10.0)]
    pub x_min: f64,
    /// Upper end of the fit range (s).
    #[arg(long, default_value_t = 300.0)]
    pub x_max: f64,
    /// Log-grid points per decade used before fitting; 0 fits the raw CCDF.
    #[arg(long, default_value_t = 20)]
    pub per_decade: u32,
}

impl FitArgs {
    fn options(&self) -> FitOptions {
        FitOptions {
            x_min: self.x_min,
            x_max: self.x_max,
            per_decade: self.per_decade,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    SocializeOnly,
    IsolateOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphKind {
    Random,
    ScaleFree,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one simulation and write contact records.
    Simulate {
        /// Scenario file (`key = value` lines); defaults apply when omitted.
        scenario: Option<PathBuf>,
        /// Extra `key=value` settings applied after the scenario file.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        #[arg(long)]
        seed: Option<u64>,
        /// Also write the position trace and behavior transitions.
        #[arg(long)]
        trace: bool,
        /// Keep every k-th step in the position trace.
        #[arg(long, default_value_t = 1, value_name = "K")]
        decimate: u64,
        #[arg(short, long, env = "SIMPS_OUTPUT_DIR", default_value = "simps-out")]
        out: PathBuf,
    },
    /// Build CCDFs and tail fits from duration files.
    Analyze {
        /// `kind,duration_s` files; samples are pooled.
        #[arg(required = true)]
        durations: Vec<PathBuf>,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(short, long, env = "SIMPS_OUTPUT_DIR", default_value = "simps-out")]
        out: PathBuf,
    },
    /// Run every variant of one test aspect over several seeds.
    Sweep {
        /// graph_type, node_degree, sociability, socialize_only, isolate_only,
        /// social_distance, reaction_time, distance_cost, space, duration or
        /// quantization
        aspect: String,
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        /// Base scenario; defaults apply when omitted.
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// First seed; run k uses seed + k.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(short, long, env = "SIMPS_OUTPUT_DIR", default_value = "simps-out")]
        out: PathBuf,
    },
    /// Generate a social graph as an edge list.
    Graph {
        #[arg(long = "type", value_enum, default_value = "scale-free")]
        kind: GraphKind,
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Mean node degree.
        #[arg(long, default_value_t = 5.0)]
        d: f64,
        /// `uniform` or `constant:<w>`.
        #[arg(long, default_value = "uniform")]
        edge_weight: EdgeWeight,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn write_csv_file(
    path: &Path,
    f: impl FnOnce(&mut BufWriter<File>) -> csv::Result<()>,
) -> Result<()> {
    let mut w = create(path)?;
    f(&mut w).map_err(|e| Error::csv(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Loads the scenario file, then applies `--set` overrides, preset and seed.
pub fn resolve_scenario(
    file: Option<&Path>,
    set: &[String],
    preset: Option<Preset>,
    seed: Option<u64>,
) -> Result<Scenario> {
    let mut text = match file {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?,
        None => String::new(),
    };
    for kv in set {
        text.push('\n');
        text.push_str(kv);
    }
    let mut sc = scenario::parse_with_base(&text, file.and_then(Path::parent))?;
    sc = match preset {
        Some(Preset::SocializeOnly) => sweep::socialize_only(&sc),
        Some(Preset::IsolateOnly) => sweep::isolate_only(&sc),
        None => sc,
    };
    if let Some(seed) = seed {
        sc.seed = seed;
    }
    sc.validate()?;
    Ok(sc)
}

/// Runs one simulation and writes its outputs into `out`.
pub fn simulate(sc: Scenario, out: &Path, trace: bool, decimate: u64) -> Result<Durations> {
    ensure_dir(out)?;
    let echo = out.join("scenario.resolved.txt");
    std::fs::write(&echo, scenario::to_text(&sc)).map_err(|e| Error::io(&echo, e))?;

    let mut sim = Simulation::new(sc)?;
    let pop_path = out.join("population.csv");
    write_csv_file(&pop_path, |w| write_population_csv(sim.population(), w))?;

    let mut tracker = ContactTracker::new(sim.len(), sim.scenario().contact);
    if trace {
        let trace_path = out.join("trace.csv");
        let trans_path = out.join("transitions.csv");
        let mut tw = TraceWriter::new(create(&trace_path)?, decimate);
        let mut trw = TransitionWriter::new(create(&trans_path)?);
        let mut observers: [&mut dyn Observer; 3] = [&mut tracker, &mut tw, &mut trw];
        run_simulation(&mut sim, &mut observers)?;
    } else {
        run_simulation(&mut sim, &mut [&mut tracker])?;
    }

    let ledger = tracker.ledger;
    let events_path = out.join("contacts.csv");
    write_csv_file(&events_path, |w| {
        write_events_csv(&ledger.sorted_events(), w)
    })?;
    let durations = ledger.finalize();
    let dur_path = out.join("durations.csv");
    write_csv_file(&dur_path, |w| write_durations_csv(&durations, w))?;
    Ok(durations)
}

/// Per-kind outcome of [`analyze`].
#[derive(Debug, Clone, PartialEq)]
pub struct KindOutcome {
    pub kind: DurationKind,
    pub samples: usize,
    /// Human-readable lines describing the fits or why they failed.
    pub lines: Vec<String>,
    pub feasible: bool,
}

/// Pools the duration files and writes CCDFs and fit reports per kind.
pub fn analyze(files: &[PathBuf], opts: &FitOptions, out: &Path) -> Result<Vec<KindOutcome>> {
    let mut pooled = Durations::default();
    for f in files {
        let d = read_durations_csv(f)?;
        pooled.contact.extend(d.contact);
        pooled.intercontact.extend(d.intercontact);
    }
    ensure_dir(out)?;
    let mut outcomes = Vec::new();
    for (kind, samples) in [
        (DurationKind::Contact, &pooled.contact),
        (DurationKind::Intercontact, &pooled.intercontact),
    ] {
        let name = kind.as_str();
        let mut outcome = KindOutcome {
            kind,
            samples: samples.len(),
            lines: Vec::new(),
            feasible: false,
        };
        if samples.is_empty() {
            outcome.lines.push(format!("{name}: no samples"));
            outcomes.push(outcome);
            continue;
        }
        let a = analyze_samples(samples, opts)?;
        let ccdf_path = out.join(format!("ccdf_{name}.csv"));
        write_csv_file(&ccdf_path, |w| a.ccdf.write_csv(w))?;
        let fit_path = out.join(format!("fit_{name}.csv"));
        write_csv_file(&fit_path, |w| write_fit_report(&a.fits(), w))?;

        outcome.feasible = a.power_law.is_ok() && a.weibull.is_ok();
        for fit in [&a.power_law, &a.weibull] {
            outcome.lines.push(match fit {
                Ok(f) => format!(
                    "{name}: {} {} = {:.4}, R2 = {:.4} over [{}, {}] s ({} points)",
                    f.model,
                    if f.model == crate::analysis::TailModel::PowerLaw {
                        "alpha"
                    } else {
                        "k"
                    },
                    f.exponent,
                    f.r2,
                    f.x_min,
                    f.x_max,
                    f.points
                ),
                Err(e) => format!("{name}: fit failed: {e}"),
            });
        }
        match &a.cutoff {
            Ok(Some(x)) => outcome.lines.push(format!("{name}: cut-off near {x:.1} s")),
            Ok(None) => outcome.lines.push(format!("{name}: no cut-off detected")),
            Err(e) => outcome
                .lines
                .push(format!("{name}: cut-off not evaluated: {e}")),
        }
        outcomes.push(outcome);
    }
    Ok(outcomes)
}

fn fmt_stat(s: Option<(f64, f64)>) -> String {
    s.map_or_else(|| "-".to_string(), |(m, sd)| format!("{m:.3} ± {sd:.3}"))
}

fn cmd_sweep(
    aspect: &str,
    seeds: u64,
    scenario_file: Option<&Path>,
    seed: Option<u64>,
    jobs: Option<usize>,
    opts: &FitOptions,
    out: &Path,
) -> Result<()> {
    let aspect: Aspect = aspect.parse()?;
    let base = resolve_scenario(scenario_file, &[], None, seed)?;
    let runs = match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| Error::param("jobs", e.to_string()))?
            .install(|| sweep::run_sweep(aspect, &base, seeds, opts))?,
        None => sweep::run_sweep(aspect, &base, seeds, opts)?,
    };
    let summary = sweep::summarize(&runs);
    ensure_dir(out)?;
    let runs_path = out.join(format!("sweep_{aspect}_runs.csv"));
    write_csv_file(&runs_path, |w| sweep::write_runs_csv(&runs, w))?;
    let sum_path = out.join(format!("sweep_{aspect}_summary.csv"));
    write_csv_file(&sum_path, |w| sweep::write_summary_csv(&summary, w))?;
    println!(
        "{:<20} {:>4}  {:>16}  {:>16}  {:>16}",
        "variant", "runs", "contact alpha", "weibull R2", "intercontact alpha"
    );
    for r in &summary {
        println!(
            "{:<20} {:>4}  {:>16}  {:>16}  {:>16}",
            r.variant,
            r.runs,
            fmt_stat(r.contact_alpha),
            fmt_stat(r.contact_weibull_r2),
            fmt_stat(r.intercontact_alpha)
        );
    }
    println!("wrote {} and {}", runs_path.display(), sum_path.display());
    Ok(())
}

fn cmd_graph(
    kind: GraphKind,
    n: usize,
    d: f64,
    weight: EdgeWeight,
    seed: u64,
    out: Option<&Path>,
) -> Result<()> {
    let mut rng = stage_rng(seed, Stage::Graph);
    let g = match kind {
        GraphKind::Random => SocialGraph::generate_random(n, d, weight, &mut rng)?,
        GraphKind::ScaleFree => SocialGraph::generate_scale_free(n, d, weight, &mut rng)?,
    };
    let text = g.to_edge_list();
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

/// Executes a parsed command line and returns the process exit status.
pub fn execute(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Simulate {
            scenario,
            set,
            preset,
            seed,
            trace,
            decimate,
            out,
        } => {
            let sc = resolve_scenario(scenario.as_deref(), &set, preset, seed)?;
            let d = simulate(sc, &out, trace, decimate)?;
            println!(
                "{} contacts, {} inter-contact gaps; outputs in {}",
                d.contact.len(),
                d.intercontact.len(),
                out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze {
            durations,
            fit,
            out,
        } => {
            let outcomes = analyze(&durations, &fit.options(), &out)?;
            for o in &outcomes {
                for line in &o.lines {
                    if o.feasible {
                        println!("{line}");
                    } else {
                        eprintln!("{line}");
                    }
                }
            }
            Ok(if outcomes.iter().all(|o| o.feasible) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FIT_INFEASIBLE)
            })
        }
        Command::Sweep {
            aspect,
            seeds,
            scenario,
            seed,
            jobs,
            fit,
            out,
        } => {
            cmd_sweep(
                &aspect,
                seeds,
                scenario.as_deref(),
                seed,
                jobs,
                &fit.options(),
                &out,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Graph {
            kind,
            n,
            d,
            edge_weight,
            seed,
            out,
        } => {
            cmd_graph(kind, n, d, edge_weight, seed, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let mut src = std::error::Error::source(&e);
            while let Some(s) = src {
                eprintln!("  caused by: {s}");
                src = s.source();
            }
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn parses_subcommands() {
        let cli = Cli::try_parse_from([
            "simps",
            "simulate",
            "--seed",
            "42",
            "--trace",
            "--decimate",
            "10",
            "-o",
            "x",
        ])
        .unwrap();
        assert!(matches!(
            cli.command,
            Command::Simulate {
                seed: Some(42),
                trace: true,
                decimate: 10,
                ..
            }
        ));
        let cli = Cli::try_parse_from([
            "simps", "graph", "--type", "random", "--n", "10", "--d", "3",
        ])
        .unwrap();
        assert!(matches!(
            cli.command,
            Command::Graph {
                kind: GraphKind::Random,
                n: 10,
                ..
            }
        ));
        assert!(Cli::try_parse_from(["simps", "analyze"]).is_err());
    }

    #[test]
    fn overrides_apply_in_order() {
        let sc = resolve_scenario(
            None,
            &["n = 12".into(), "lambda=2".into()],
            Some(Preset::SocializeOnly),
            Some(9),
        )
        .unwrap();
        assert_eq!(sc.population.n, 12);
        assert_eq!(sc.perception.fading_exponent, 2.0);
        assert_eq!(sc.perception.social_radius, 0.0);
        assert_eq!(sc.seed, 9);
    }
}
