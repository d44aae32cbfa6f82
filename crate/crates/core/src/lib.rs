//! Agent-based simulation of socially driven human mobility.
//!
//! Individuals carry a sociability level and a tolerance around it. Each one
//! perceives how many others are within its social radius, and a hysteresis
//! switches it between two behaviors: *socialize* (move toward acquaintances
//! of a directed social graph) and *isolate* (move away from strangers). A
//! speed- and acceleration-limited motion unit turns the resulting urge into
//! trajectories on the plane or on a periodic square.
//!
//! Alongside the simulator the crate records range-based contacts between
//! individuals and analyzes contact and inter-contact durations through
//! log-log CCDF fits.

pub mod analysis;
pub mod behavior;
pub mod cli;
pub mod contact;
pub mod error;
pub mod graph;
pub mod kinematics;
pub mod neighbors;
pub mod population;
pub mod rng;
pub mod scenario;
pub mod simulator;
pub mod space;
pub mod sweep;

pub use error::{Error, Result};
