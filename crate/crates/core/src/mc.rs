//! Seeded, partitionable Monte Carlo means.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::special::Neumaier;

const CHUNK: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub seed: u64,
    pub samples: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            seed: 0x5eed,
            samples: 1 << 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Mean of `f` over `cfg.samples` draws. Chunk `k` uses ChaCha stream `k`, so the result does
/// not depend on how chunks are scheduled.
pub fn mc_mean<F>(cfg: &McConfig, f: F) -> McEstimate
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let chunks = cfg.samples.div_ceil(CHUNK);
    let partial: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k as u64);
            let m = CHUNK.min(cfg.samples - k * CHUNK);
            let mut s = Neumaier::default();
            let mut s2 = Neumaier::default();
            for _ in 0..m {
                let v = f(&mut rng);
                s.add(v);
                s2.add(v * v);
            }
            (s.sum(), s2.sum())
        })
        .collect();
    let mut s = Neumaier::default();
    let mut s2 = Neumaier::default();
    for (a, b) in partial {
        s.add(a);
        s2.add(b);
    }
    let n = cfg.samples as f64;
    let mean = s.sum() / n;
    let var = ((s2.sum() / n - mean * mean) * n / (n - 1.0).max(1.0)).max(0.0);
    McEstimate {
        mean,
        std_error: (var / n).sqrt(),
        samples: cfg.samples,
    }
}

/// `n` ordered uniforms on `[0, t]`.
pub fn ordered_times<R: Rng>(rng: &mut R, n: usize, t: f64, out: &mut Vec<f64>) {
    out.clear();
    out.extend((0..n).map(|_| rng.random::<f64>() * t));
    out.sort_by(f64::total_cmp);
}

/// Stable 64-bit seed from a master seed, a label and an index (FNV-1a then a splitmix finish).
pub fn derive_seed(master: u64, label: &str, index: u64) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |b: u8| {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    };
    master.to_le_bytes().iter().for_each(|&b| feed(b));
    label.bytes().for_each(&mut feed);
    index.to_le_bytes().iter().for_each(|&b| feed(b));
    let mut z = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
