use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result, TruthTable};

/// Two-sided 95% normal quantile.
pub const WILSON_Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Debug, PartialEq)]
pub struct PkEstimate {
    pub k: usize,
    pub samples: u64,
    pub hits: u64,
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub seed: u64,
}

impl PkEstimate {
    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

/// Wilson score interval for `hits` successes in `trials`.
pub fn wilson_interval(hits: u64, trials: u64, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Monte Carlo estimate of `P_k`: draws assignments uniformly from all
/// `C(n, k) * 2^k` size-`k` assignments (a uniform variable subset, then
/// uniform values) and reports the canalizing fraction with a 95% Wilson
/// interval. The ChaCha8 stream seeded with `seed` fixes the result.
pub fn estimate_pk(f: &TruthTable, k: usize, samples: u64, seed: u64) -> Result<PkEstimate> {
    let n = f.arity();
    if k > n {
        return Err(Error::KOutOfRange { k, arity: n });
    }
    if samples == 0 {
        return Err(Error::InvalidArgument(
            "at least one sample is required".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = (1usize << n) - 1;
    let mut hits = 0u64;
    for _ in 0..samples {
        let mut fixed_mask = 0usize;
        let mut fixed_value = 0usize;
        for pos in sample(&mut rng, n, k) {
            fixed_mask |= 1 << pos;
            if rng.random::<bool>() {
                fixed_value |= 1 << pos;
            }
        }
        if face_is_constant(f, full & !fixed_mask, fixed_value) {
            hits += 1;
        }
    }
    let (lower, upper) = wilson_interval(hits, samples, WILSON_Z95);
    Ok(PkEstimate {
        k,
        samples,
        hits,
        estimate: hits as f64 / samples as f64,
        lower,
        upper,
        seed,
    })
}

fn face_is_constant(f: &TruthTable, free: usize, base: usize) -> bool {
    let first = f.get(base);
    // walk the subsets of `free`
    let mut sub = free;
    loop {
        if f.get(base | sub) != first {
            return false;
        }
        if sub == 0 {
            return true;
        }
        sub = (sub - 1) & free;
    }
}
