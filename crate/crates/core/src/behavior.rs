//! Social motion influence: perceived surround, the hysteresis behavior
//! decision, excitation, and the tension and willingness vectors.

use crate::error::{Error, Result};
use crate::graph::SocialGraph;
use crate::space::{Position2, SpaceTopology, Vec2};

/// Lower bound on pair distances before applying the distance fading power.
pub const DISTANCE_EPSILON: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Socialize,
    Isolate,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Socialize => "socialize",
            Mode::Isolate => "isolate",
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BehaviorState {
    pub mode: Mode,
    /// Perceived surround, in persons.
    pub perceived: f64,
}

impl BehaviorState {
    /// Initial state from the first instantaneous count: `u = U(0)` and
    /// socialize iff `u <= s`.
    pub fn initial(count: usize, sociability: f64) -> Self {
        let perceived = count as f64;
        let mode = if perceived <= sociability {
            Mode::Socialize
        } else {
            Mode::Isolate
        };
        BehaviorState { mode, perceived }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerceptionParams {
    /// Social radius `R_soc` (m).
    pub social_radius: f64,
    /// Half-perception time `tau_r` (s).
    pub half_perception_time: f64,
    /// Distance fading exponent `lambda`.
    pub fading_exponent: f64,
}

impl Default for PerceptionParams {
    fn default() -> Self {
        PerceptionParams {
            social_radius: 3.5,
            half_perception_time: 4.0,
            fading_exponent: 1.0,
        }
    }
}

impl PerceptionParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.social_radius.is_finite() && self.social_radius >= 0.0) {
            return Err(Error::param(
                "r_soc",
                format!("{} must be finite and >= 0", self.social_radius),
            ));
        }
        if !(self.half_perception_time.is_finite() && self.half_perception_time > 0.0) {
            return Err(Error::param(
                "tau_r",
                format!("{} must be finite and > 0", self.half_perception_time),
            ));
        }
        if !(0.0..=3.0).contains(&self.fading_exponent) {
            return Err(Error::param(
                "lambda",
                format!("{} outside [0, 3]", self.fading_exponent),
            ));
        }
        Ok(())
    }
}

/// Number of other individuals within `radius` of individual `i`.
pub fn count_surround(
    positions: &[Position2],
    space: &SpaceTopology,
    i: usize,
    radius: f64,
) -> usize {
    let p = positions[i];
    positions
        .iter()
        .enumerate()
        .filter(|&(j, &q)| j != i && space.distance(p, q) <= radius)
        .count()
}

/// One tick of the perception loop: move halfway toward the instantaneous count.
pub fn update_perceived_surround(perceived: f64, count: f64) -> f64 {
    (count + perceived) / 2.0
}

/// Sharp hysteresis: switch to isolate above `s(1+t)`, to socialize below
/// `s(1-t)`, keep the previous mode otherwise (thresholds included).
pub fn decide_behavior(prev: Mode, perceived: f64, sociability: f64, tolerance: f64) -> Mode {
    if perceived > sociability * (1.0 + tolerance) {
        Mode::Isolate
    } else if perceived < sociability * (1.0 - tolerance) {
        Mode::Socialize
    } else {
        prev
    }
}

/// Motion urge in `[0, 1]`: zero at `u = s`, saturating at the edges of the
/// comfort range.
pub fn excitation(perceived: f64, sociability: f64, tolerance: f64) -> f64 {
    let band = sociability * tolerance;
    let dev = (perceived - sociability).abs();
    if band == 0.0 {
        if dev == 0.0 {
            0.0
        } else {
            1.0
        }
    } else {
        (dev / band).min(1.0)
    }
}

#[inline]
pub(crate) fn fade(distance: f64, exponent: f64) -> f64 {
    let d = distance.max(DISTANCE_EPSILON);
    match exponent {
        0.0 => 1.0,
        1.0 => d,
        2.0 => d * d,
        3.0 => d * d * d,
        e => d.powf(e),
    }
}

/// Tension felt by `i` toward (socialize) or away from (isolate) one other
/// individual, given the minimal-image vector `ij` and the acquaintance.
#[inline]
pub fn pair_tension(ij: Vec2, acquaintance: f64, exponent: f64, mode: Mode) -> Vec2 {
    let dist = ij.norm();
    let Some(dir) = ij.unit() else {
        // coincident: no defined direction
        return Vec2::ZERO;
    };
    match mode {
        Mode::Socialize => dir * (acquaintance / fade(dist, exponent)),
        Mode::Isolate => -dir * ((1.0 - acquaintance) / fade(dist, exponent)),
    }
}

pub(crate) fn tension_with<F>(
    positions: &[Position2],
    space: &SpaceTopology,
    i: usize,
    exponent: f64,
    mode: Mode,
    acquaintance: F,
) -> Vec2
where
    F: Fn(usize) -> f64,
{
    let p = positions[i];
    let mut sum = Vec2::ZERO;
    for (j, &q) in positions.iter().enumerate() {
        if j == i {
            continue;
        }
        let a = acquaintance(j);
        // zero-weight contributions skip the distance computation
        if (mode == Mode::Socialize && a == 0.0) || (mode == Mode::Isolate && a == 1.0) {
            continue;
        }
        sum += pair_tension(space.displacement(p, q), a, exponent, mode);
    }
    sum
}

/// Sum of pair tensions felt by `i` over every other individual.
pub fn social_tension(
    positions: &[Position2],
    graph: &SocialGraph,
    space: &SpaceTopology,
    i: usize,
    exponent: f64,
    mode: Mode,
) -> Vec2 {
    tension_with(positions, space, i, exponent, mode, |j| graph.weight(i, j))
}

/// Direction of the tension scaled by the excitation; zero when the tensions
/// cancel out. The norm never exceeds the excitation, even by rounding.
pub fn willingness(tension: Vec2, excitation: f64) -> Vec2 {
    let Some(dir) = tension.unit() else {
        return Vec2::ZERO;
    };
    let mut w = dir * excitation;
    while w.norm() > excitation {
        w = w * (1.0 - f64::EPSILON);
    }
    w
}
