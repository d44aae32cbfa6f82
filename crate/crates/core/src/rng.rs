//! Seeded random substreams.
//!
//! One master seed feeds several independent ChaCha8 streams, one per
//! construction stage, so that changing how one stage consumes randomness
//! never perturbs another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stage {
    Graph = 1,
    Population = 2,
    Placement = 3,
    PerceptionPhase = 4,
}

pub fn stage_rng(master_seed: u64, stage: Stage) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stage as u64);
    rng
}
