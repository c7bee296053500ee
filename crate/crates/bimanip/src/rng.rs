//! Deterministic named-stream randomness.
//!
//! Each `(seed, stream_id)` pair owns an independent counter-based sequence:
//! draw `k` of a stream is a pure function of `(seed, stream_id, k)`, so
//! adding draws to one stream never shifts another, and replays are
//! bit-identical across runs and platforms (integer mixing only, fixed
//! float mapping, no platform libm in the core path).

use serde::{Deserialize, Serialize};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn splitmix(z: u64) -> u64 {
    let mut z = z;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

/// Counter-based RNG bound to a `(seed, stream_id)` pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeededRng {
    seed: u64,
    stream_id: String,
    key: u64,
    counter: u64,
}

impl SeededRng {
    pub fn new(seed: u64, stream_id: &str) -> Self {
        let key = splitmix(seed ^ fnv1a(stream_id.as_bytes()).rotate_left(17));
        SeededRng { seed, stream_id: stream_id.to_string(), key, counter: 0 }
    }

    /// Derive a child stream; the child's draws are independent of the parent's.
    pub fn split(&self, label: &str) -> SeededRng {
        SeededRng::new(splitmix(self.key ^ fnv1a(label.as_bytes())), label)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> &str {
        &self.stream_id
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let z = self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN).wrapping_add(GOLDEN));
        self.counter += 1;
        splitmix(z)
    }

    /// Uniform in `[0, 1)` with 53 bits of mantissa.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    #[inline]
    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.uniform() * (hi - lo)
    }

    /// Uniform integer in `[0, n)`. `n` must be positive.
    #[inline]
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Standard normal via Box-Muller (two fresh uniforms per call).
    pub fn normal(&mut self, mean: f64, std: f64) -> f64 {
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        mean + std * r * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Fisher-Yates shuffle of index order.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.index(i + 1);
            items.swap(i, j);
        }
    }
}
