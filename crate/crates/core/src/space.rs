//! Planar geometry: vectors, the infinite plane and the periodic square.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A 2-D vector. Used for positions (m), velocities (m/s) and accelerations (m/s²).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

pub type Position2 = Vec2;
pub type Velocity2 = Vec2;
pub type Accel2 = Vec2;

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3-D cross product.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn unit(self) -> Option<Vec2> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(self / n)
        } else {
            None
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    fn div(self, k: f64) -> Vec2 {
        Vec2::new(self.x / k, self.y / k)
    }
}

/// The space individuals move in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceTopology {
    Infinite,
    /// Square of side `side` (m) with toroidal boundary mapping.
    PeriodicSquare {
        side: f64,
    },
}

impl SpaceTopology {
    pub fn periodic(side: f64) -> Result<Self> {
        if !(side.is_finite() && side > 0.0) {
            return Err(Error::param(
                "space.l",
                format!("side must be finite and > 0, got {side}"),
            ));
        }
        Ok(SpaceTopology::PeriodicSquare { side })
    }

    pub fn side(&self) -> Option<f64> {
        match *self {
            SpaceTopology::Infinite => None,
            SpaceTopology::PeriodicSquare { side } => Some(side),
        }
    }

    /// Minimal-image vector pointing from `from` to `to`.
    pub fn displacement(&self, from: Position2, to: Position2) -> Vec2 {
        let d = to - from;
        match *self {
            SpaceTopology::Infinite => d,
            SpaceTopology::PeriodicSquare { side } => {
                Vec2::new(min_image(d.x, side), min_image(d.y, side))
            }
        }
    }

    pub fn distance(&self, a: Position2, b: Position2) -> f64 {
        self.displacement(a, b).norm()
    }

    /// Canonical representative of `p`: identity on the plane, component-wise
    /// modulo `side` into `[0, side)` on the torus.
    pub fn wrap(&self, p: Position2) -> Position2 {
        match *self {
            SpaceTopology::Infinite => p,
            SpaceTopology::PeriodicSquare { side } => {
                Vec2::new(wrap_coord(p.x, side), wrap_coord(p.y, side))
            }
        }
    }
}

fn wrap_coord(x: f64, side: f64) -> f64 {
    let r = x.rem_euclid(side);
    // rem_euclid can round up to `side` for tiny negative inputs
    if r >= side {
        0.0
    } else {
        r
    }
}

fn min_image(d: f64, side: f64) -> f64 {
    let half = 0.5 * side;
    let mut d = d - side * (d / side).round();
    if d > half {
        d -= side;
    } else if d < -half {
        d += side;
    }
    d
}
