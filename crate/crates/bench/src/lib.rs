//! Benchmark fixtures for the `qmes` constructions.

use qmes::Prime;

/// Dimensions swept by every benchmark group.
pub const DIMS: [u64; 4] = [3, 5, 7, 11];

pub fn primes() -> impl Iterator<Item = Prime> {
    DIMS.iter().map(|&d| Prime::new(d).expect("benchmark dimensions are odd primes"))
}
