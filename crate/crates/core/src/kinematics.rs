//! Motion execution: acceleration request, speed-limited acceleration and
//! explicit integration of velocity and position.

use crate::space::{Accel2, Position2, SpaceTopology, Vec2, Velocity2};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KinematicState {
    pub position: Position2,
    pub velocity: Velocity2,
}

/// Result of one integration step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integration {
    pub state: KinematicState,
    /// Acceleration actually applied.
    pub acceleration: Accel2,
    /// Largest admissible acceleration along the request; `None` when the
    /// request was zero and no limiting took place.
    pub a_lim: Option<f64>,
}

pub fn acceleration_request(willingness: Vec2, a_max: f64) -> Accel2 {
    willingness * a_max
}

/// Largest acceleration along `direction` (unit) that keeps
/// `|v_prev + a * dt * direction| <= v_max`.
///
/// With `theta` the angle between `direction` and `v_prev`, this is
/// `(sqrt(v_max² - (|v| sin θ)²) - |v| cos θ) / dt`.
pub fn limit_acceleration(v_prev: Velocity2, direction: Vec2, v_max: f64, dt: f64) -> f64 {
    let along = direction.dot(v_prev); // |v| cos θ
    let across = direction.cross(v_prev); // ±|v| sin θ
    let chord = (v_max * v_max - across * across).max(0.0).sqrt();
    // rounding at |v| = v_max can push the difference a hair below zero
    ((chord - along) / dt).max(0.0)
}

pub fn integrate(
    state: KinematicState,
    request: Accel2,
    v_max: f64,
    dt: f64,
    space: &SpaceTopology,
) -> Integration {
    let (acceleration, a_lim) = match request.unit() {
        None => (Vec2::ZERO, None),
        Some(dir) => {
            let lim = limit_acceleration(state.velocity, dir, v_max, dt);
            (dir * request.norm().min(lim), Some(lim))
        }
    };
    let velocity = state.velocity + acceleration * dt;
    let position = space.wrap(state.position + velocity * dt);
    Integration {
        state: KinematicState { position, velocity },
        acceleration,
        a_lim,
    }
}
