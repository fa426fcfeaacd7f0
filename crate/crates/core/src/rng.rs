//! Reproducible random substreams.
//!
//! A stream is named by a root seed and a path of 64-bit indices. The path is
//! folded through a SplitMix64-style mixer into a 256-bit ChaCha key, so any
//! substream can be materialized directly without advancing a parent
//! generator. Simulation code derives one child per replicate and never shares
//! a generator between replicates.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A deterministic substream identified by `(seed, path)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    seed: u64,
    path: Vec<u64>,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, path: Vec::new() }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn path(&self) -> &[u64] {
        &self.path
    }

    /// The substream one level below `self` at `index`.
    pub fn child(&self, index: u64) -> Self {
        let mut path = Vec::with_capacity(self.path.len() + 1);
        path.extend_from_slice(&self.path);
        path.push(index);
        Self { seed: self.seed, path }
    }

    /// Descends through several levels at once.
    pub fn descend(&self, indices: &[u64]) -> Self {
        let mut path = self.path.clone();
        path.extend_from_slice(indices);
        Self { seed: self.seed, path }
    }

    fn key(&self) -> [u8; 32] {
        // Length is folded in so that (seed, [0]) and (seed, []) differ.
        let mut h = mix64(self.seed ^ GOLDEN);
        h = mix64(h ^ (self.path.len() as u64).wrapping_mul(GOLDEN));
        for &p in &self.path {
            h = mix64(h.wrapping_add(GOLDEN) ^ mix64(p.wrapping_add(GOLDEN)));
        }
        let mut key = [0u8; 32];
        let mut state = h;
        for chunk in key.chunks_exact_mut(8) {
            state = state.wrapping_add(GOLDEN);
            chunk.copy_from_slice(&mix64(state).to_le_bytes());
        }
        key
    }

    /// A fresh generator positioned at the start of this substream.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::from_seed(self.key())
    }
}

/// Draws `count` i.i.d. standard-normal deviates from `stream`.
pub fn sample_std_normal(stream: &RngStream, count: usize) -> Vec<f64> {
    let mut rng = stream.rng();
    (0..count).map(|_| rng.sample(StandardNormal)).collect()
}
