//! Direct restrict-and-check oracles shared by the test targets.
#![allow(dead_code)]

use canalyzer::sensitivity::sensitivity_at;
use canalyzer::{PartialAssignment, Rational, TruthTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Canalizing k-sets by restricting to every subset/value pair.
pub fn naive_counts(f: &TruthTable) -> Vec<u64> {
    let n = f.arity();
    let mut counts = vec![0u64; n + 1];
    for subset in 0usize..1 << n {
        let vars: Vec<usize> = (0..n)
            .filter(|i| subset >> i & 1 == 1)
            .map(|i| i + 1)
            .collect();
        for values in 0usize..1 << vars.len() {
            let a = PartialAssignment::new(
                vars.iter()
                    .enumerate()
                    .map(|(j, &v)| (v, values >> j & 1 == 1)),
            )
            .unwrap();
            if f.restrict(&a).unwrap().is_constant().is_some() {
                counts[vars.len()] += 1;
            }
        }
    }
    counts
}

pub fn naive_average_sensitivity(f: &TruthTable) -> Rational {
    let n = f.arity();
    let total: u64 = (0..f.len())
        .map(|row| {
            let x: Vec<bool> = (0..n).map(|j| row >> j & 1 == 1).collect();
            sensitivity_at(f, &x).unwrap() as u64
        })
        .sum();
    Rational::new(total.into(), (f.len() as u64).into())
}

pub fn random_tables(n: usize, count: usize, seed: u64) -> Vec<TruthTable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| TruthTable::from_fn(n, |_| rng.random::<bool>()).unwrap())
        .collect()
}
