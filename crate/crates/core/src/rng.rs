//! Deterministic random streams.
//!
//! Every randomized sweep in the crate draws from a named substream of a
//! single master seed (`command.module.trial` style names), so a fixed seed
//! reproduces byte-identical outputs no matter how trials are scheduled.

/// xoshiro256++ with splitmix64 seeding. Hand-rolled so the stream is stable
/// across platforms and dependency bumps.
#[derive(Clone, Debug)]
pub struct Stream {
    s: [u64; 4],
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// FNV-1a, used to hash substream names into seed material.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

impl Stream {
    pub fn from_seed(seed: u64) -> Self {
        let mut sm = seed;
        let mut s = [0u64; 4];
        for w in s.iter_mut() {
            *w = splitmix64(&mut sm);
        }
        // all-zero state is a fixed point of xoshiro
        if s == [0, 0, 0, 0] {
            s[0] = 1;
        }
        Stream { s }
    }

    /// Substream addressed by a name, e.g. `"verify.stability.trial42"`.
    pub fn named(seed: u64, name: &str) -> Self {
        Stream::from_seed(seed ^ fnv1a(name.as_bytes()))
    }

    /// Child stream; convenience for per-trial forks.
    pub fn fork(&self, tag: &str, index: u64) -> Self {
        let mut h = fnv1a(tag.as_bytes()) ^ index.wrapping_mul(0x9e3779b97f4a7c15);
        h ^= self.s[0].wrapping_add(self.s[2]);
        Stream::from_seed(h)
    }

    pub fn next_u64(&mut self) -> u64 {
        let [s0, s1, s2, s3] = self.s;
        let result = s0.wrapping_add(s3).rotate_left(23).wrapping_add(s0);
        let t = s1 << 17;
        let mut s = [s0, s1, s2, s3];
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        self.s = s;
        result
    }

    /// Uniform in [0, 1).
    pub fn f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn range_f64(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.f64()
    }

    /// Uniform in 0..n (n > 0).
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    /// Dyadic rational in [lo, hi) with denominator 2^bits. Used wherever
    /// tests need exact, collision-free action values.
    pub fn dyadic(&mut self, lo: f64, hi: f64, bits: u32) -> f64 {
        let steps = ((hi - lo) * (1u64 << bits) as f64).max(1.0) as u64;
        let k = self.next_u64() % steps;
        lo + k as f64 / (1u64 << bits) as f64
    }

    pub fn bool(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }

    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.below(i + 1);
            xs.swap(i, j);
        }
    }
}
