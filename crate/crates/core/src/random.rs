//! Random states and unitaries for negative controls and property checks.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::state::{Ket, Particle, UnitaryOp, C64};
use crate::word::{Factor, Mode, Pauli, Word};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Unitarily invariant random unit vector.
pub fn random_ket<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Ket {
    let amps = (0..dim).map(|_| gaussian(rng)).collect();
    Ket::normalized(amps).expect("gaussian vector is nonzero")
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of R's diagonal folded back into Q.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> UnitaryOp {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    UnitaryOp::new(q).expect("QR factor is unitary")
}

const MODES: [Mode; 4] = [
    Mode::Center,
    Mode::Relative,
    Mode::Particle(Particle::One),
    Mode::Particle(Particle::Two),
];

/// A word of `1..=max_len` factors over every explicit mode, with powers in
/// `-2d..=2d`.
pub fn random_word<R: Rng + ?Sized>(d: usize, max_len: usize, rng: &mut R) -> Word {
    let len = rng.random_range(1..=max_len.max(1));
    let bound = 2 * d as i64;
    let factors = (0..len)
        .map(|_| {
            let op = if rng.random_bool(0.5) { Pauli::X } else { Pauli::Z };
            let mode = MODES[rng.random_range(0..MODES.len())];
            Factor::new(op, Some(mode), rng.random_range(-bound..=bound))
        })
        .collect();
    Word::new(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand::rngs::StdRng;

    #[test]
    fn random_objects_are_valid() {
        let mut rng = StdRng::seed_from_u64(7);
        for dim in [3, 5, 9, 25] {
            assert!((random_ket(dim, &mut rng).norm() - 1.0).abs() < 1e-12);
            assert!(random_unitary(dim, &mut rng).unitarity_error() < 1e-12);
        }
    }

    #[test]
    fn random_words_reparse() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..50 {
            let w = random_word(5, 6, &mut rng);
            assert!((1..=6).contains(&w.factors.len()));
            assert!(w.factors.iter().all(|f| f.mode.is_some() && f.power.abs() <= 10));
            assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
        }
    }
}
