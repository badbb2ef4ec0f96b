//! Fixed workloads shared by the criterion benches.

use folia::gen::{random_group, random_tree};
use folia::{GroupExpr, SurfaceTree};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic random surfaces of the given depth.
pub fn trees(count: usize, depth: usize, seed: u64) -> Vec<SurfaceTree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_tree(&mut rng, depth)).collect()
}

/// Deterministic random group expressions of the given depth.
pub fn groups(count: usize, depth: usize, seed: u64) -> Vec<GroupExpr> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_group(&mut rng, depth)).collect()
}
