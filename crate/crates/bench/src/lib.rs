//! Workload generators shared by the benchmarks.

use momentum_core::{DeltaSystem, GainRecord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` entities with uniform gains; ranks follow generation order.
pub fn uniform_system(n: usize, seed: u64) -> DeltaSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let records = (0..n)
        .map(|i| {
            GainRecord::new(
                format!("e{i}"),
                Some(rng.random_range(1.0..1e6)),
                rng.random_range(0.0..1e6),
                rng.random_range(0.0..10.0),
            )
        })
        .collect();
    DeltaSystem::build(records, "bench").expect("generated records are valid")
}

/// The all-leaders system: `g = 1000 / i`, `r = ln i`.
pub fn anti_correlated_system(n: usize) -> DeltaSystem {
    let records = (1..=n)
        .map(|i| GainRecord::new(format!("e{i}"), None, 1000.0 / i as f64, (i as f64).ln()))
        .collect();
    DeltaSystem::build(records, "bench").expect("generated records are valid")
}
