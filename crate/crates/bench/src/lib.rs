//! Shared inputs for the criterion benches.

use fehd_core::{HvRng, Hypervector};

pub const DIM: usize = 10_000;

pub fn random_vectors(n: usize, dim: usize, seed: u64) -> Vec<Hypervector> {
    let mut rng = HvRng::new(seed);
    (0..n)
        .map(|_| Hypervector::random(dim, &mut rng).expect("dim > 0"))
        .collect()
}

/// A typical SMS-length message, about 80 characters.
pub const MESSAGE: &str =
    "Free entry in 2 a wkly comp to win FA Cup final tkts 21st May 2005. Text FA to 87121";
