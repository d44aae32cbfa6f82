//! Directed, weighted acquaintance graph.
//!
//! An edge `i -> j` with weight `w` in `[0, 1]` is the acquaintance `i` feels
//! toward `j`. Missing edges mean total strangers. Relations are directed:
//! `i -> j` says nothing about `j -> i`.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// How edge weights are drawn by the generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeWeight {
    /// Independent uniform draws on `(0, 1]`.
    Uniform,
    Constant(f64),
}

impl EdgeWeight {
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            EdgeWeight::Uniform => 1.0 - rng.random::<f64>(),
            EdgeWeight::Constant(w) => w,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            EdgeWeight::Constant(w) if !(0.0..=1.0).contains(&w) => Err(Error::param(
                "edge_weight",
                format!("constant weight {w} outside [0, 1]"),
            )),
            _ => Ok(()),
        }
    }
}

impl FromStr for EdgeWeight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "uniform" {
            return Ok(EdgeWeight::Uniform);
        }
        if let Some(w) = s.strip_prefix("constant:") {
            let w: f64 = w
                .trim()
                .parse()
                .map_err(|_| Error::param("edge_weight", format!("bad constant `{w}`")))?;
            let ew = EdgeWeight::Constant(w);
            ew.validate()?;
            return Ok(ew);
        }
        Err(Error::param(
            "edge_weight",
            format!("expected `uniform` or `constant:<w>`, got `{s}`"),
        ))
    }
}

impl std::fmt::Display for EdgeWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EdgeWeight::Uniform => f.write_str("uniform"),
            EdgeWeight::Constant(w) => write!(f, "constant:{w}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SocialGraph {
    /// Out-edges per origin, sorted by destination.
    out: Vec<Vec<(usize, f64)>>,
    edge_count: usize,
}

impl SocialGraph {
    pub fn empty(n: usize) -> Self {
        SocialGraph {
            out: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from `(origin, destination, weight)` triples, checking
    /// every invariant.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut g = SocialGraph::empty(n);
        for (i, j, w) in edges {
            g.insert(i, j, w)
                .map_err(|reason| Error::param("edges", reason))?;
        }
        Ok(g)
    }

    fn insert(&mut self, i: usize, j: usize, w: f64) -> std::result::Result<(), String> {
        let n = self.out.len();
        if i >= n || j >= n {
            return Err(format!("edge {i} -> {j} references a node outside 0..{n}"));
        }
        if i == j {
            return Err(format!("self-loop on node {i}"));
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(format!("weight {w} outside [0, 1]"));
        }
        let row = &mut self.out[i];
        match row.binary_search_by(|&(d, _)| d.cmp(&j)) {
            Ok(_) => Err(format!("duplicate edge {i} -> {j}")),
            Err(pos) => {
                row.insert(pos, (j, w));
                self.edge_count += 1;
                Ok(())
            }
        }
    }

    pub fn node_count(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.out[i].len()
    }

    pub fn mean_out_degree(&self) -> f64 {
        if self.out.is_empty() {
            0.0
        } else {
            self.edge_count as f64 / self.out.len() as f64
        }
    }

    pub fn out_edges(&self, i: usize) -> &[(usize, f64)] {
        &self.out[i]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |&(j, w)| (i, j, w)))
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        let n = self.out.len();
        for id in [i, j] {
            if id >= n {
                return Err(Error::InvalidNode { id, n });
            }
        }
        if i == j {
            return Err(Error::param(
                "node",
                format!("acquaintance of {i} toward itself is undefined"),
            ));
        }
        Ok(())
    }

    /// Acquaintance felt by `i` toward `j`: the edge weight, or 0 without an edge.
    pub fn acquaintance(&self, i: usize, j: usize) -> Result<f64> {
        self.check_pair(i, j)?;
        Ok(self.weight(i, j))
    }

    /// Strangeness felt by `i` toward `j`, `1 - acquaintance`.
    pub fn strangeness(&self, i: usize, j: usize) -> Result<f64> {
        self.acquaintance(i, j).map(|a| 1.0 - a)
    }

    /// Unchecked lookup for hot loops. Caller guarantees valid ids.
    pub(crate) fn weight(&self, i: usize, j: usize) -> f64 {
        let row = &self.out[i];
        match row.binary_search_by(|&(d, _)| d.cmp(&j)) {
            Ok(pos) => row[pos].1,
            Err(_) => 0.0,
        }
    }

    /// Dense row-major acquaintance matrix.
    pub(crate) fn dense(&self) -> Vec<f64> {
        let n = self.out.len();
        let mut m = vec![0.0; n * n];
        for (i, j, w) in self.edges() {
            m[i * n + j] = w;
        }
        m
    }

    /// Erdős–Rényi style generator: every ordered pair gets an edge
    /// independently with probability `d / (n - 1)`.
    pub fn generate_random<R: Rng + ?Sized>(
        n: usize,
        mean_out_degree: f64,
        weight: EdgeWeight,
        rng: &mut R,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "population must be at least 1"));
        }
        let max_d = (n - 1) as f64;
        if !(0.0..=max_d).contains(&mean_out_degree) {
            return Err(Error::param(
                "graph.d",
                format!("mean out-degree {mean_out_degree} outside [0, {max_d}]"),
            ));
        }
        weight.validate()?;
        let mut g = SocialGraph::empty(n);
        if n == 1 {
            return Ok(g);
        }
        let p = mean_out_degree / max_d;
        for i in 0..n {
            let row = &mut g.out[i];
            for j in (0..n).filter(|&j| j != i) {
                if rng.random::<f64>() < p {
                    row.push((j, weight.draw(rng)));
                }
            }
            g.edge_count += row.len();
        }
        Ok(g)
    }

    /// Barabási–Albert preferential attachment, symmetrized.
    ///
    /// Node `t` attaches to `min(m_t, t)` distinct earlier nodes chosen with
    /// probability proportional to their degree, where `m_t` is `floor(d/2)`
    /// plus one more with probability `d/2 - floor(d/2)`. Every undirected
    /// edge becomes two directed edges with independently drawn weights.
    pub fn generate_scale_free<R: Rng + ?Sized>(
        n: usize,
        mean_out_degree: f64,
        weight: EdgeWeight,
        rng: &mut R,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "population must be at least 1"));
        }
        if !(mean_out_degree >= 2.0 && mean_out_degree <= (n.max(2) - 1) as f64) {
            return Err(Error::param(
                "graph.d",
                format!(
                    "scale-free graphs need 2 <= d <= n - 1, got d = {mean_out_degree} with n = {n}"
                ),
            ));
        }
        weight.validate()?;

        let half = mean_out_degree / 2.0;
        let base = half.floor() as usize;
        let frac = half - base as f64;

        // every edge endpoint, so a uniform pick is a degree-proportional pick
        let mut endpoints: Vec<usize> = Vec::new();
        let mut undirected: Vec<(usize, usize)> = Vec::new();
        let mut targets: Vec<usize> = Vec::new();
        for t in 1..n {
            let extra = usize::from(frac > 0.0 && rng.random::<f64>() < frac);
            let m = (base + extra).min(t);
            targets.clear();
            while targets.len() < m {
                let cand = if endpoints.is_empty() {
                    rng.random_range(0..t)
                } else {
                    endpoints[rng.random_range(0..endpoints.len())]
                };
                if !targets.contains(&cand) {
                    targets.push(cand);
                }
            }
            for &s in &targets {
                endpoints.push(s);
                endpoints.push(t);
                undirected.push((t, s));
            }
        }

        let mut g = SocialGraph::empty(n);
        for (a, b) in undirected {
            let w_ab = weight.draw(rng);
            let w_ba = weight.draw(rng);
            g.insert(a, b, w_ab)
                .expect("generator produced an invalid edge");
            g.insert(b, a, w_ba)
                .expect("generator produced an invalid edge");
        }
        Ok(g)
    }

    /// Parses the edge-list text format: `origin destination weight` per line,
    /// `#` comments, and an optional `nodes <N>` header.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut declared: Option<(usize, usize)> = None;
        let mut edges: Vec<(usize, usize, usize, f64)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = |reason: String| Error::EdgeList {
                line: line_no,
                reason,
            };
            if fields[0] == "nodes" {
                if declared.is_some() {
                    return Err(bad("repeated `nodes` header".into()));
                }
                if fields.len() != 2 {
                    return Err(bad("expected `nodes <N>`".into()));
                }
                let n: usize = fields[1]
                    .parse()
                    .map_err(|_| bad(format!("bad node count `{}`", fields[1])))?;
                if n == 0 {
                    return Err(bad("node count must be positive".into()));
                }
                declared = Some((n, line_no));
                continue;
            }
            if fields.len() != 3 {
                return Err(bad(format!(
                    "expected `origin destination weight`, found {} fields",
                    fields.len()
                )));
            }
            let i: usize = fields[0]
                .parse()
                .map_err(|_| bad(format!("bad origin `{}`", fields[0])))?;
            let j: usize = fields[1]
                .parse()
                .map_err(|_| bad(format!("bad destination `{}`", fields[1])))?;
            let w: f64 = fields[2]
                .parse()
                .map_err(|_| bad(format!("bad weight `{}`", fields[2])))?;
            if !(0.0..=1.0).contains(&w) {
                return Err(bad(format!("weight {w} outside [0, 1]")));
            }
            if i == j {
                return Err(bad(format!("self-loop on node {i}")));
            }
            edges.push((line_no, i, j, w));
        }

        let inferred = edges
            .iter()
            .map(|&(_, i, j, _)| i.max(j) + 1)
            .max()
            .unwrap_or(0);
        let n = match declared {
            Some((n, line)) => {
                if inferred > n {
                    return Err(Error::EdgeList {
                        line,
                        reason: format!("header declares {n} nodes but ids reach {}", inferred - 1),
                    });
                }
                n
            }
            None if inferred == 0 => {
                return Err(Error::EdgeList {
                    line: 0,
                    reason: "no edges and no `nodes` header".into(),
                })
            }
            None => inferred,
        };

        let mut g = SocialGraph::empty(n);
        for (line, i, j, w) in edges {
            g.insert(i, j, w)
                .map_err(|reason| Error::EdgeList { line, reason })?;
        }
        Ok(g)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_edge_list(&text)
    }

    /// Serializes to the edge-list format, always with a `nodes` header.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("nodes {}\n", self.node_count());
        for (i, j, w) in self.edges() {
            let _ = writeln!(s, "{i} {j} {w}");
        }
        s
    }
}
