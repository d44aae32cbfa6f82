//! Parameter sweeps over the standard test settings, run concurrently over
//! variants and seeds.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::analysis::{analyze_samples, FitOptions, TailFit};
use crate::error::{Error, Result};
use crate::simulator::{run_contacts, GraphSpec, Scenario};
use crate::space::SpaceTopology;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aspect {
    GraphType,
    NodeDegree,
    Sociability,
    SocializeOnly,
    IsolateOnly,
    SocialDistance,
    ReactionTime,
    DistanceCost,
    Space,
    Duration,
    Quantization,
}

impl Aspect {
    pub const ALL: [Aspect; 11] = [
        Aspect::GraphType,
        Aspect::NodeDegree,
        Aspect::Sociability,
        Aspect::SocializeOnly,
        Aspect::IsolateOnly,
        Aspect::SocialDistance,
        Aspect::ReactionTime,
        Aspect::DistanceCost,
        Aspect::Space,
        Aspect::Duration,
        Aspect::Quantization,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Aspect::GraphType => "graph_type",
            Aspect::NodeDegree => "node_degree",
            Aspect::Sociability => "sociability",
            Aspect::SocializeOnly => "socialize_only",
            Aspect::IsolateOnly => "isolate_only",
            Aspect::SocialDistance => "social_distance",
            Aspect::ReactionTime => "reaction_time",
            Aspect::DistanceCost => "distance_cost",
            Aspect::Space => "space",
            Aspect::Duration => "duration",
            Aspect::Quantization => "quantization",
        }
    }
}

impl fmt::Display for Aspect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Aspect {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Aspect::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::UnknownAspect(s.to_string()))
    }
}

/// Everyone always seeks company: nobody perceives anyone.
pub fn socialize_only(base: &Scenario) -> Scenario {
    let mut sc = base.clone();
    sc.perception.social_radius = 0.0;
    sc
}

/// Everyone always avoids company: the perception radius spans the whole
/// square and nobody needs anyone.
pub fn isolate_only(base: &Scenario) -> Scenario {
    let mut sc = base.clone();
    let side = sc.space.side().unwrap_or(sc.initial_side);
    sc.perception.social_radius = 1.5 * side;
    sc.population.sociability.mean = 0.0;
    sc.population.sociability.variance = 0.0;
    sc
}

#[derive(Debug, Clone)]
pub struct Variant {
    pub label: String,
    pub scenario: Scenario,
}

fn variant(label: impl Into<String>, scenario: Scenario) -> Variant {
    Variant {
        label: label.into(),
        scenario,
    }
}

/// The scenarios an aspect compares, derived from `base`.
pub fn variants(aspect: Aspect, base: &Scenario) -> Vec<Variant> {
    let with = |f: &dyn Fn(&mut Scenario)| {
        let mut sc = base.clone();
        f(&mut sc);
        sc
    };
    let d = match base.graph {
        GraphSpec::Random { mean_degree } | GraphSpec::ScaleFree { mean_degree } => mean_degree,
        GraphSpec::File(_) => 5.0,
    };
    match aspect {
        Aspect::GraphType => vec![
            variant(
                "random",
                with(&|s| s.graph = GraphSpec::Random { mean_degree: d }),
            ),
            variant(
                "scale_free",
                with(&|s| s.graph = GraphSpec::ScaleFree { mean_degree: d }),
            ),
        ],
        Aspect::NodeDegree => [2.0, 5.0, 15.0, 50.0]
            .into_iter()
            .map(|d| {
                let graph = match base.graph {
                    GraphSpec::Random { .. } => GraphSpec::Random { mean_degree: d },
                    _ => GraphSpec::ScaleFree { mean_degree: d },
                };
                variant(format!("d={d}"), with(&|s| s.graph = graph.clone()))
            })
            .collect(),
        Aspect::Sociability => [1.0, 2.5, 10.0]
            .into_iter()
            .map(|m| {
                variant(
                    format!("s={m}"),
                    with(&|s| s.population.sociability.mean = m),
                )
            })
            .collect(),
        Aspect::SocializeOnly => vec![variant("socialize_only", socialize_only(base))],
        Aspect::IsolateOnly => vec![variant("isolate_only", isolate_only(base))],
        Aspect::SocialDistance => [1.0, 3.5, 15.0]
            .into_iter()
            .map(|r| {
                variant(
                    format!("r_soc={r}"),
                    with(&|s| s.perception.social_radius = r),
                )
            })
            .collect(),
        Aspect::ReactionTime => [1.0, 4.0, 20.0]
            .into_iter()
            .map(|t| {
                variant(
                    format!("tau_r={t}"),
                    with(&|s| s.perception.half_perception_time = t),
                )
            })
            .collect(),
        Aspect::DistanceCost => [0.0, 1.0, 2.0, 3.0]
            .into_iter()
            .map(|l| {
                variant(
                    format!("lambda={l}"),
                    with(&|s| s.perception.fading_exponent = l),
                )
            })
            .collect(),
        Aspect::Space => {
            let mut v = vec![variant(
                "infinite",
                with(&|s| s.space = SpaceTopology::Infinite),
            )];
            for side in [20.0, 200.0, 2000.0] {
                v.push(variant(
                    format!("periodic_l={side}"),
                    with(&|s| s.space = SpaceTopology::PeriodicSquare { side }),
                ));
            }
            v
        }
        Aspect::Duration => [600.0, 3600.0, 36000.0]
            .into_iter()
            .map(|t| variant(format!("t_max={t}"), with(&|s| s.t_max = t)))
            .collect(),
        Aspect::Quantization => [0.1, 1.0, 10.0]
            .into_iter()
            .map(|dt| {
                variant(
                    format!("dt={dt}"),
                    with(&|s| {
                        s.dt = dt;
                        s.perception.half_perception_time =
                            align_to_step(s.perception.half_perception_time, dt);
                    }),
                )
            })
            .collect(),
    }
}

/// Smallest multiple of `dt` that is at least `tau`.
fn align_to_step(tau: f64, dt: f64) -> f64 {
    let k = tau / dt;
    if (k - k.round()).abs() <= 1e-9 * k.max(1.0) {
        tau
    } else {
        k.ceil().max(1.0) * dt
    }
}

/// Fit results of one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub variant: String,
    pub seed: u64,
    pub contacts: usize,
    pub intercontacts: usize,
    pub contact_power_law: Option<TailFit>,
    pub contact_weibull: Option<TailFit>,
    pub contact_cutoff: Option<f64>,
    pub intercontact_power_law: Option<TailFit>,
}

/// Runs one scenario and fits both duration distributions.
pub fn run_and_fit(label: &str, scenario: Scenario, opts: &FitOptions) -> Result<RunResult> {
    let seed = scenario.seed;
    let (_, ledger) = run_contacts(scenario)?;
    let d = ledger.finalize();
    let contact = analyze_samples(&d.contact, opts).ok();
    let inter = analyze_samples(&d.intercontact, opts).ok();
    Ok(RunResult {
        variant: label.to_string(),
        seed,
        contacts: d.contact.len(),
        intercontacts: d.intercontact.len(),
        contact_power_law: contact
            .as_ref()
            .and_then(|a| a.power_law.as_ref().ok().copied()),
        contact_weibull: contact
            .as_ref()
            .and_then(|a| a.weibull.as_ref().ok().copied()),
        contact_cutoff: contact
            .as_ref()
            .and_then(|a| a.cutoff.as_ref().ok().copied().flatten()),
        intercontact_power_law: inter
            .as_ref()
            .and_then(|a| a.power_law.as_ref().ok().copied()),
    })
}

/// Runs every variant with seeds `base.seed .. base.seed + seeds`, in
/// parallel. Results come back ordered by variant, then seed.
pub fn run_sweep(
    aspect: Aspect,
    base: &Scenario,
    seeds: u64,
    opts: &FitOptions,
) -> Result<Vec<RunResult>> {
    let jobs: Vec<(String, Scenario)> = variants(aspect, base)
        .into_iter()
        .flat_map(|v| {
            (0..seeds).map(move |k| {
                let mut sc = v.scenario.clone();
                sc.seed = base.seed.wrapping_add(k);
                (v.label.clone(), sc)
            })
        })
        .collect();
    jobs.into_par_iter()
        .map(|(label, sc)| run_and_fit(&label, sc, opts))
        .collect()
}

/// Mean and sample standard deviation; `None` for an empty slice.
pub fn mean_sd(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Some((mean, sd))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub variant: String,
    pub runs: usize,
    pub contact_alpha: Option<(f64, f64)>,
    pub contact_r2: Option<(f64, f64)>,
    pub contact_weibull_k: Option<(f64, f64)>,
    pub contact_weibull_r2: Option<(f64, f64)>,
    pub contact_cutoff: Option<(f64, f64)>,
    pub intercontact_alpha: Option<(f64, f64)>,
}

/// Aggregates runs per variant, keeping first-appearance order.
pub fn summarize(runs: &[RunResult]) -> Vec<SummaryRow> {
    let mut labels: Vec<&str> = Vec::new();
    for r in runs {
        if !labels.contains(&r.variant.as_str()) {
            labels.push(&r.variant);
        }
    }
    labels
        .into_iter()
        .map(|label| {
            let rows: Vec<&RunResult> = runs.iter().filter(|r| r.variant == label).collect();
            let stat = |f: &dyn Fn(&RunResult) -> Option<f64>| {
                mean_sd(&rows.iter().filter_map(|r| f(r)).collect::<Vec<_>>())
            };
            SummaryRow {
                variant: label.to_string(),
                runs: rows.len(),
                contact_alpha: stat(&|r| r.contact_power_law.map(|f| f.exponent)),
                contact_r2: stat(&|r| r.contact_power_law.map(|f| f.r2)),
                contact_weibull_k: stat(&|r| r.contact_weibull.map(|f| f.exponent)),
                contact_weibull_r2: stat(&|r| r.contact_weibull.map(|f| f.r2)),
                contact_cutoff: stat(&|r| r.contact_cutoff),
                intercontact_alpha: stat(&|r| r.intercontact_power_law.map(|f| f.exponent)),
            }
        })
        .collect()
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_runs_csv<W: Write>(runs: &[RunResult], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "variant",
        "seed",
        "contacts",
        "intercontacts",
        "contact_alpha",
        "contact_r2",
        "contact_weibull_k",
        "contact_weibull_r2",
        "contact_cutoff_s",
        "intercontact_alpha",
        "intercontact_r2",
    ])?;
    for r in runs {
        w.write_record([
            r.variant.clone(),
            r.seed.to_string(),
            r.contacts.to_string(),
            r.intercontacts.to_string(),
            opt(r.contact_power_law.map(|f| f.exponent)),
            opt(r.contact_power_law.map(|f| f.r2)),
            opt(r.contact_weibull.map(|f| f.exponent)),
            opt(r.contact_weibull.map(|f| f.r2)),
            opt(r.contact_cutoff),
            opt(r.intercontact_power_law.map(|f| f.exponent)),
            opt(r.intercontact_power_law.map(|f| f.r2)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_csv<W: Write>(rows: &[SummaryRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let cols = [
        "contact_alpha",
        "contact_r2",
        "contact_weibull_k",
        "contact_weibull_r2",
        "contact_cutoff_s",
        "intercontact_alpha",
    ];
    let mut header = vec!["variant".to_string(), "runs".to_string()];
    for c in cols {
        header.push(format!("{c}_mean"));
        header.push(format!("{c}_sd"));
    }
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.variant.clone(), r.runs.to_string()];
        for s in [
            r.contact_alpha,
            r.contact_r2,
            r.contact_weibull_k,
            r.contact_weibull_r2,
            r.contact_cutoff,
            r.intercontact_alpha,
        ] {
            rec.push(opt(s.map(|p| p.0)));
            rec.push(opt(s.map(|p| p.1)));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
