//! Seeded random instances.
//!
//! Every draw descends from a 64-bit master seed; independent tasks get their own
//! ChaCha stream indexed by task number, so results do not depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hmat::{HVector, QMatrix};
use crate::quat::Quaternion;

pub type TrialRng = ChaCha8Rng;

/// Generator for task `index` under `seed`.
pub fn trial_rng(seed: u64, index: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Quaternion with components uniform on `[-scale, scale]`.
pub fn random_quaternion<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Quaternion {
    Quaternion::new(
        rng.random_range(-scale..=scale),
        rng.random_range(-scale..=scale),
        rng.random_range(-scale..=scale),
        rng.random_range(-scale..=scale),
    )
}

/// `n × n` matrix with entry components uniform on `[-1, 1]`.
pub fn random_qmatrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> QMatrix {
    QMatrix::from_fn(n, |_, _| random_quaternion(rng, 1.0))
}

/// Real matrix (entries on the real axis) with entries uniform on `[-1, 1]`.
pub fn random_real_qmatrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> QMatrix {
    QMatrix::from_fn(n, |_, _| Quaternion::real(rng.random_range(-1.0..=1.0)))
}

pub fn random_hvector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HVector {
    HVector((0..n).map(|_| random_quaternion(rng, 1.0)).collect())
}

/// Uniform point on the unit imaginary sphere `S`.
pub fn random_unit_imaginary<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    loop {
        let v = Quaternion::new(
            0.0,
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        );
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Uniform point on the unit 3-sphere of `H`.
pub fn random_unit_quaternion<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    loop {
        let v = random_quaternion(rng, 1.0);
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}
