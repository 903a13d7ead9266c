//! Seeded random streams.
//!
//! One run seed fans out into independent ChaCha streams so that, for example,
//! the decomposition stage never shifts the draws seen by population
//! initialization.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;

pub type RunRng = ChaCha8Rng;

pub const STREAM_OPTIMIZATION: u64 = 0;
pub const STREAM_CONTEXT: u64 = 1;
pub const STREAM_DECOMPOSITION: u64 = 2;
pub const STREAM_REGROUP: u64 = 3;

pub fn stream_rng(seed: u64, stream: u64) -> RunRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform draw in `[0, 1)`.
#[inline]
pub fn unit<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(rng.random::<f64>())
}

#[inline]
pub fn uniform<T: Scalar, R: Rng + ?Sized>(rng: &mut R, lo: T, hi: T) -> T {
    lo + unit::<T, R>(rng) * (hi - lo)
}
