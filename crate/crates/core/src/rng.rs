//! Seedable uniform streams.
//!
//! Every random quantity in the crate is derived from draws on the open unit
//! interval. The reference generator is ChaCha8 (`rand_chacha::ChaCha8Rng`)
//! seeded through `seed_from_u64`; its output stream is value-stable across
//! releases of `rand_chacha`, which keeps golden outputs reproducible.
//!
//! A draw takes the top 53 bits of one 64-bit word, giving `k / 2^53` on the
//! grid `[0, 1)`. The single grid value outside `(0, 1)`, namely `0`, is moved
//! to the nearest interior grid point `2^-53`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Smallest draw the generator can return.
pub const MIN_UNIFORM: f64 = 1.0 / (1u64 << 53) as f64;
/// Largest draw the generator can return.
pub const MAX_UNIFORM: f64 = 1.0 - MIN_UNIFORM;

/// A source of draws on the open interval `(0, 1)`.
pub trait UniformSource {
    fn next_uniform(&mut self) -> f64;
}

impl<T: UniformSource + ?Sized> UniformSource for &mut T {
    fn next_uniform(&mut self) -> f64 {
        (**self).next_uniform()
    }
}

/// Deterministic generator keyed by a 64-bit seed.
#[derive(Clone, Debug)]
pub struct SeededRng {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
    draws: u64,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    /// Independent stream `index` under `seed`. Stream 0 is the one returned
    /// by [`SeededRng::new`]; parallel workers take one index each.
    pub fn substream(seed: u64, index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(index);
        Self {
            seed,
            stream: index,
            inner,
            draws: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Number of uniform draws consumed so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }
}

impl UniformSource for SeededRng {
    fn next_uniform(&mut self) -> f64 {
        self.draws += 1;
        let k = self.inner.next_u64() >> 11;
        if k == 0 {
            MIN_UNIFORM
        } else {
            k as f64 * MIN_UNIFORM
        }
    }
}

/// Replays a fixed list of draws, clamped into `[MIN_UNIFORM, MAX_UNIFORM]`.
/// Panics when exhausted.
#[derive(Clone, Debug)]
pub struct ScriptedUniforms {
    values: Vec<f64>,
    pos: usize,
}

impl ScriptedUniforms {
    pub fn new(values: impl Into<Vec<f64>>) -> Self {
        Self {
            values: values.into(),
            pos: 0,
        }
    }

    pub fn consumed(&self) -> usize {
        self.pos
    }
}

impl UniformSource for ScriptedUniforms {
    fn next_uniform(&mut self) -> f64 {
        let u = self.values[self.pos];
        self.pos += 1;
        u.clamp(MIN_UNIFORM, MAX_UNIFORM)
    }
}
