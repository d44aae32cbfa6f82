//! Fixed-radius pair search, either by exhaustive scan or through a uniform
//! cell grid. Both return the same sorted pair list.

use std::collections::HashMap;
use std::str::FromStr;

use crate::error::Error;
use crate::space::{Position2, SpaceTopology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NeighborSearch {
    #[default]
    Exact,
    Grid,
}

impl FromStr for NeighborSearch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "exact" => Ok(NeighborSearch::Exact),
            "grid" => Ok(NeighborSearch::Grid),
            other => Err(Error::param(
                "neighbor.search",
                format!("expected `exact` or `grid`, got `{other}`"),
            )),
        }
    }
}

impl std::fmt::Display for NeighborSearch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NeighborSearch::Exact => "exact",
            NeighborSearch::Grid => "grid",
        })
    }
}

/// Unordered pair `(i, j)` with `i < j`.
pub type Pair = (usize, usize);

/// All pairs at minimal-image distance `<= radius`, sorted.
pub fn pairs_within(
    positions: &[Position2],
    space: &SpaceTopology,
    radius: f64,
    method: NeighborSearch,
) -> Vec<Pair> {
    match method {
        NeighborSearch::Exact => exact_pairs(positions, space, radius),
        NeighborSearch::Grid => grid_pairs(positions, space, radius),
    }
}

pub fn exact_pairs(positions: &[Position2], space: &SpaceTopology, radius: f64) -> Vec<Pair> {
    let mut out = Vec::new();
    for (i, &p) in positions.iter().enumerate() {
        for (j, &q) in positions.iter().enumerate().skip(i + 1) {
            if space.distance(p, q) <= radius {
                out.push((i, j));
            }
        }
    }
    out
}

fn grid_pairs(positions: &[Position2], space: &SpaceTopology, radius: f64) -> Vec<Pair> {
    if radius.is_nan() || radius <= 0.0 || positions.len() < 2 {
        return exact_pairs(positions, space, radius);
    }
    let mut out = match *space {
        SpaceTopology::PeriodicSquare { side } => {
            let cells = (side / radius).floor();
            // fewer than 3 cells per side would visit a cell twice
            if !(3.0..=1e6).contains(&cells) {
                return exact_pairs(positions, space, radius);
            }
            torus_grid(positions, space, side, cells as i64, radius)
        }
        SpaceTopology::Infinite => plane_grid(positions, space, radius),
    };
    out.sort_unstable();
    out
}

fn scan_cells<'a>(
    positions: &[Position2],
    space: &SpaceTopology,
    radius: f64,
    cell_of: impl Fn(usize) -> (i64, i64),
    bucket: impl Fn((i64, i64)) -> Option<&'a Vec<usize>>,
    wrap: impl Fn((i64, i64)) -> (i64, i64),
    out: &mut Vec<Pair>,
) {
    for (i, &p) in positions.iter().enumerate() {
        let (cx, cy) = cell_of(i);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(members) = bucket(wrap((cx + dx, cy + dy))) else {
                    continue;
                };
                for &j in members {
                    if j > i && space.distance(p, positions[j]) <= radius {
                        out.push((i, j));
                    }
                }
            }
        }
    }
}

fn torus_grid(
    positions: &[Position2],
    space: &SpaceTopology,
    side: f64,
    cells: i64,
    radius: f64,
) -> Vec<Pair> {
    let width = side / cells as f64;
    let coord = |x: f64| ((x / width).floor() as i64).clamp(0, cells - 1);
    let cell_ids: Vec<(i64, i64)> = positions.iter().map(|p| (coord(p.x), coord(p.y))).collect();
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); (cells * cells) as usize];
    for (i, &(cx, cy)) in cell_ids.iter().enumerate() {
        buckets[(cx * cells + cy) as usize].push(i);
    }
    let mut out = Vec::new();
    scan_cells(
        positions,
        space,
        radius,
        |i| cell_ids[i],
        |(cx, cy)| Some(&buckets[(cx * cells + cy) as usize]),
        |(cx, cy)| (cx.rem_euclid(cells), cy.rem_euclid(cells)),
        &mut out,
    );
    out
}

fn plane_grid(positions: &[Position2], space: &SpaceTopology, radius: f64) -> Vec<Pair> {
    let coord = |x: f64| (x / radius).floor() as i64;
    let cell_ids: Vec<(i64, i64)> = positions.iter().map(|p| (coord(p.x), coord(p.y))).collect();
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, &c) in cell_ids.iter().enumerate() {
        buckets.entry(c).or_default().push(i);
    }
    let mut out = Vec::new();
    scan_cells(
        positions,
        space,
        radius,
        |i| cell_ids[i],
        |c| buckets.get(&c),
        |c| c,
        &mut out,
    );
    out
}

/// Per-individual neighbor counts from a pair list.
pub fn counts_from_pairs(n: usize, pairs: &[Pair]) -> Vec<usize> {
    let mut counts = vec![0; n];
    for &(i, j) in pairs {
        counts[i] += 1;
        counts[j] += 1;
    }
    counts
}
