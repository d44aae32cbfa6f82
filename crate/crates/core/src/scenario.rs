//! Plain-text scenario files: one `key = value` per line, `#` comments.
//!
//! Unknown keys are rejected and every scenario invariant is checked on
//! load. [`to_text`] writes every effective parameter, and feeding that text
//! back through [`parse`] reproduces the same scenario.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::neighbors::NeighborSearch;
use crate::simulator::{GraphSpec, Scenario};
use crate::space::SpaceTopology;

pub const KEYS: &[&str] = &[
    "n",
    "graph.type",
    "graph.d",
    "graph.file",
    "edge_weight",
    "s.mean",
    "s.var",
    "t.low",
    "t.high",
    "vmax.mean",
    "vmax.var",
    "amax.mean",
    "amax.var",
    "r_soc",
    "tau_r",
    "tau_r.stagger",
    "lambda",
    "space.kind",
    "space.l",
    "space.init",
    "dt",
    "t_max",
    "contact.range",
    "contact.debounce",
    "neighbor.search",
    "seed",
];

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::param(key, format!("cannot parse `{value}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::param(
            key,
            format!("expected a boolean, got `{value}`"),
        )),
    }
}

/// Parses a scenario document on top of the defaults. Relative `graph.file`
/// paths are resolved against `base_dir` when given.
pub fn parse_with_base(text: &str, base_dir: Option<&Path>) -> Result<Scenario> {
    let mut sc = Scenario::default();
    let mut graph_type: Option<String> = None;
    let mut graph_d: Option<f64> = None;
    let mut graph_file: Option<PathBuf> = None;
    let mut space_kind: Option<String> = None;
    let mut space_l: Option<f64> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::ScenarioSyntax {
                line: idx + 1,
                reason: format!("expected `key = value`, got `{line}`"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "n" => sc.population.n = parse_num(key, value)?,
            "graph.type" => graph_type = Some(value.to_string()),
            "graph.d" => graph_d = Some(parse_num(key, value)?),
            "graph.file" => {
                let p = PathBuf::from(value);
                graph_file = Some(match base_dir {
                    Some(base) if p.is_relative() => base.join(p),
                    _ => p,
                });
            }
            "edge_weight" => sc.edge_weight = value.parse()?,
            "s.mean" => sc.population.sociability.mean = parse_num(key, value)?,
            "s.var" => sc.population.sociability.variance = parse_num(key, value)?,
            "t.low" => sc.population.tolerance_low = parse_num(key, value)?,
            "t.high" => sc.population.tolerance_high = parse_num(key, value)?,
            "vmax.mean" => sc.population.v_max.mean = parse_num(key, value)?,
            "vmax.var" => sc.population.v_max.variance = parse_num(key, value)?,
            "amax.mean" => sc.population.a_max.mean = parse_num(key, value)?,
            "amax.var" => sc.population.a_max.variance = parse_num(key, value)?,
            "r_soc" => sc.perception.social_radius = parse_num(key, value)?,
            "tau_r" => sc.perception.half_perception_time = parse_num(key, value)?,
            "tau_r.stagger" => sc.stagger_perception = parse_bool(key, value)?,
            "lambda" => sc.perception.fading_exponent = parse_num(key, value)?,
            "space.kind" => space_kind = Some(value.to_string()),
            "space.l" => space_l = Some(parse_num(key, value)?),
            "space.init" => sc.initial_side = parse_num(key, value)?,
            "dt" => sc.dt = parse_num(key, value)?,
            "t_max" => sc.t_max = parse_num(key, value)?,
            "contact.range" => sc.contact.range = parse_num(key, value)?,
            "contact.debounce" => sc.contact.debounce = parse_num(key, value)?,
            "neighbor.search" => sc.neighbor_search = value.parse::<NeighborSearch>()?,
            "seed" => sc.seed = parse_num(key, value)?,
            other => {
                return Err(Error::ScenarioSyntax {
                    line: idx + 1,
                    reason: format!("unknown key `{other}`"),
                })
            }
        }
    }

    let d = graph_d.unwrap_or(5.0);
    sc.graph = match graph_type.as_deref().unwrap_or(if graph_file.is_some() {
        "file"
    } else {
        "scale_free"
    }) {
        "random" => GraphSpec::Random { mean_degree: d },
        "scale_free" | "scale-free" | "sf" => GraphSpec::ScaleFree { mean_degree: d },
        "file" | "natural" => GraphSpec::File(
            graph_file
                .ok_or_else(|| Error::param("graph.file", "required when graph.type = file"))?,
        ),
        other => {
            return Err(Error::param(
                "graph.type",
                format!("expected random, scale_free or file, got `{other}`"),
            ))
        }
    };

    sc.space = match space_kind.as_deref().unwrap_or("periodic") {
        "periodic" | "periodic_square" | "torus" => {
            SpaceTopology::periodic(space_l.unwrap_or(200.0))?
        }
        "infinite" => {
            if space_l.is_some() {
                return Err(Error::param(
                    "space.l",
                    "only meaningful for a periodic space",
                ));
            }
            SpaceTopology::Infinite
        }
        other => {
            return Err(Error::param(
                "space.kind",
                format!("expected periodic or infinite, got `{other}`"),
            ))
        }
    };

    sc.validate()?;
    Ok(sc)
}

pub fn parse(text: &str) -> Result<Scenario> {
    parse_with_base(text, None)
}

pub fn load(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_with_base(&text, path.parent())
}

/// Every effective parameter, one per line, in [`KEYS`] order.
pub fn to_text(sc: &Scenario) -> String {
    let mut s = String::new();
    let mut put = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    let p = &sc.population;
    put("n", p.n.to_string());
    put("graph.type", sc.graph.kind().to_string());
    match &sc.graph {
        GraphSpec::Random { mean_degree } | GraphSpec::ScaleFree { mean_degree } => {
            put("graph.d", mean_degree.to_string())
        }
        GraphSpec::File(path) => put("graph.file", path.display().to_string()),
    }
    put("edge_weight", sc.edge_weight.to_string());
    put("s.mean", p.sociability.mean.to_string());
    put("s.var", p.sociability.variance.to_string());
    put("t.low", p.tolerance_low.to_string());
    put("t.high", p.tolerance_high.to_string());
    put("vmax.mean", p.v_max.mean.to_string());
    put("vmax.var", p.v_max.variance.to_string());
    put("amax.mean", p.a_max.mean.to_string());
    put("amax.var", p.a_max.variance.to_string());
    put("r_soc", sc.perception.social_radius.to_string());
    put("tau_r", sc.perception.half_perception_time.to_string());
    put("tau_r.stagger", sc.stagger_perception.to_string());
    put("lambda", sc.perception.fading_exponent.to_string());
    match sc.space {
        SpaceTopology::Infinite => put("space.kind", "infinite".into()),
        SpaceTopology::PeriodicSquare { side } => {
            put("space.kind", "periodic".into());
            put("space.l", side.to_string());
        }
    }
    put("space.init", sc.initial_side.to_string());
    put("dt", sc.dt.to_string());
    put("t_max", sc.t_max.to_string());
    put("contact.range", sc.contact.range.to_string());
    put("contact.debounce", sc.contact.debounce.to_string());
    put("neighbor.search", sc.neighbor_search.to_string());
    put("seed", sc.seed.to_string());
    s
}
