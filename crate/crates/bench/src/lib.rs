//! Shared inputs for the pipeline benchmarks.

use hazcast_core::model::ForecastDocument;
use hazcast_core::synth::random_document;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SEVERE_DAY: &str = include_str!("../../core/fixtures/severe-day.txt");

/// `n` seeded random documents.
pub fn documents(n: usize) -> Vec<ForecastDocument> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    (0..n)
        .map(|i| random_document(&mut rng, &format!("bench-{i}")))
        .collect()
}

/// Four groups of `n` ratings each, seeded.
pub fn rating_groups(n: usize) -> Vec<Vec<f64>> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    (0..4)
        .map(|g| {
            (0..n)
                .map(|_| 400.0 + 20.0 * g as f64 + rng.random_range(-200.0..200.0))
                .collect()
        })
        .collect()
}
