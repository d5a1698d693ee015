//! Counter-based pseudorandom generator.
//!
//! Every randomized search in this crate is driven by a single `u64` seed.
//! Draw `i` of stream `(seed, stream)` is `splitmix64(seed ^ GOLDEN*stream, i)`,
//! so independent workers can consume disjoint counter ranges and reproduce
//! each other's draws exactly.

/// SplitMix64 finalizer; full-period bijection on `u64`.
#[inline]
fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Deterministic counter RNG. `Clone` + `Copy` so call sites can fork streams freely.
#[derive(Debug, Clone, Copy)]
pub struct CounterRng {
    state: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng {
            state: splitmix(seed),
            counter: 0,
        }
    }

    /// Independent stream derived from the same seed.
    pub fn stream(seed: u64, stream: u64) -> Self {
        CounterRng {
            state: splitmix(seed ^ stream.wrapping_mul(0xa076_1d64_78bd_642f)),
            counter: 0,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        splitmix(
            self.state
                .wrapping_add(self.counter.wrapping_mul(0x9e3779b97f4a7c15)),
        )
    }

    /// Uniform in `[0, bound)`. `bound` must be nonzero.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        // Lemire rejection-free-enough reduction; bias is < 2^-64 * bound,
        // immaterial for search seeding.
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }

    /// Uniform in `[lo, hi]` inclusive.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    pub fn usize_below(&mut self, bound: usize) -> usize {
        self.below(bound as u64) as usize
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn sign(&mut self) -> i8 {
        if self.next_u64() & 1 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.usize_below(i + 1);
            xs.swap(i, j);
        }
    }
}
