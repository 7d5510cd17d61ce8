//! Random walks on weighted maps: sampling, lifts, exact hitting and winding
//! laws on level sets, Wilson's algorithm, and exit-law couplings.

mod absorb;
mod coupling;
mod hitting;
mod levels;
mod step;
mod wilson;

pub use absorb::{absorption, exit_halves, projected_step_law};
pub use coupling::{disconnects, exit_tv, tv_coupling_check, CouplingReport};
pub use hitting::{
    admissible_sequences, conditional_hitting, expected_conditional_winding, HittingLaw,
};
pub use levels::{level_augment, level_augment_all, level_measure, Augmented, LevelMeasure};
pub use step::{embed_trace, simulate, step_law, winding, Stepper, WalkTrace};
pub use wilson::wilson_tree;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::map::{CylinderEmbedding, PlanarMap};

/// Step cap used when the caller does not choose one.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// [`simulate`] with its own generator seeded from `seed`.
pub fn simulate_seeded(
    map: &PlanarMap,
    emb: Option<&CylinderEmbedding>,
    start: usize,
    stop: &[bool],
    seed: u64,
) -> Result<WalkTrace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    simulate(
        map,
        &Stepper::new(map),
        emb,
        start,
        stop,
        &mut rng,
        DEFAULT_BUDGET,
    )
}
