//! Random p-biased functions and the closed-form expectation of `P_k` over
//! them.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::canalization::{k_set_counts, k_set_total, MAX_ENUMERATION_ARITY};
use crate::decimal::format_f64;
use crate::table::MAX_EXACT_ARITY;
use crate::{Error, Real, Result, TruthTable};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BiasSpec {
    pub arity: usize,
    /// Probability of each table entry being 1.
    pub bias: f64,
    pub seed: u64,
    pub count: u64,
}

impl BiasSpec {
    pub fn validate(&self) -> Result<()> {
        check_bias(self.bias)?;
        if self.count == 0 {
            return Err(Error::InvalidArgument("count must be at least 1".into()));
        }
        if self.arity > MAX_EXACT_ARITY {
            return Err(Error::ArityCap {
                arity: self.arity,
                cap: MAX_EXACT_ARITY,
                what: "table storage",
            });
        }
        Ok(())
    }
}

fn check_bias(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidBias(p))
    }
}

/// Function number `index` of the stream for `seed`: ChaCha8 seeded from
/// `seed` on stream `index`, one `f64` draw per row in row order, entry set
/// when the draw is below `bias`.
pub fn sample_table(arity: usize, bias: f64, seed: u64, index: u64) -> Result<TruthTable> {
    check_bias(bias)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    TruthTable::from_fn(arity, |_| rng.random::<f64>() < bias)
}

/// Lazy stream of `spec.count` biased functions.
#[derive(Clone, Debug)]
pub struct BiasedSampler {
    spec: BiasSpec,
    next: u64,
}

impl Iterator for BiasedSampler {
    type Item = TruthTable;

    fn next(&mut self) -> Option<TruthTable> {
        if self.next >= self.spec.count {
            return None;
        }
        let index = self.next;
        self.next += 1;
        sample_table(self.spec.arity, self.spec.bias, self.spec.seed, index).ok()
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.spec.count - self.next) as usize;
        (left, Some(left))
    }
}

pub fn sample_biased(spec: BiasSpec) -> Result<BiasedSampler> {
    spec.validate()?;
    Ok(BiasedSampler { spec, next: 0 })
}

/// `(1-p)^(2^(n-k)) + p^(2^(n-k))`, evaluated as powers of two of
/// `2^(n-k) * log2(.)` so huge exponents underflow cleanly.
pub fn expected_pk<T: Real>(n: usize, k: usize, p: T) -> Result<T> {
    if k > n {
        return Err(Error::KOutOfRange { k, arity: n });
    }
    check_bias(p.as_f64())?;
    let exponent = i32::try_from(n - k)
        .map_err(|_| Error::InvalidArgument(format!("n - k = {} is too large", n - k)))?;
    let faces = T::from_f64(2.0).powi(exponent);
    let q = T::one() - p;
    Ok((faces * q.log2()).exp2() + (faces * p.log2()).exp2())
}

/// Expected canalizing strength of a p-biased function,
/// `1/(n-1) * sum_{k=1}^{n-1} 2^k/(2^k-1) * E[P_k]`.
pub fn expected_strength<T: Real>(n: usize, p: T) -> Result<T> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "canalizing strength needs n >= 2, got {n}"
        )));
    }
    let mut sum = T::zero();
    for k in 1..n {
        let w = T::from_f64(2.0).powi(k as i32);
        sum = sum + w / (w - T::one()) * expected_pk(n, k, p)?;
    }
    Ok(sum / T::from_f64((n - 1) as f64))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalMean {
    pub n: usize,
    pub k: usize,
    pub bias: f64,
    pub count: u64,
    pub seed: u64,
    pub mean: f64,
    /// Standard error of the mean.
    pub stderr: f64,
    /// Fraction of sampled functions with `P_k > 0`.
    pub positive_fraction: f64,
}

/// Mean of the exact `P_k` over `count` sampled p-biased functions.
pub fn empirical_expectation(
    n: usize,
    k: usize,
    bias: f64,
    count: u64,
    seed: u64,
) -> Result<EmpiricalMean> {
    if k > n {
        return Err(Error::KOutOfRange { k, arity: n });
    }
    if n > MAX_ENUMERATION_ARITY {
        return Err(Error::ArityCap {
            arity: n,
            cap: MAX_ENUMERATION_ARITY,
            what: "exact k-set enumeration",
        });
    }
    BiasSpec {
        arity: n,
        bias,
        seed,
        count,
    }
    .validate()?;
    let total = k_set_total(n, k) as f64;
    let values: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|i| {
            let f = sample_table(n, bias, seed, i)?;
            Ok(k_set_counts(&f)?[k] as f64 / total)
        })
        .collect::<Result<_>>()?;
    let m = count as f64;
    let mean = values.iter().sum::<f64>() / m;
    let var = if count > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0)
    } else {
        0.0
    };
    let positive = values.iter().filter(|&&v| v > 0.0).count() as f64 / m;
    Ok(EmpiricalMean {
        n,
        k,
        bias,
        count,
        seed,
        mean,
        stderr: (var / m).sqrt(),
        positive_fraction: positive,
    })
}

/// Biases `step, 2*step, .., 1 - step` for `step = 1/m`.
pub fn bias_grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "grid step {step} must lie in (0, 1)"
        )));
    }
    let m = (1.0 / step).round() as u64;
    if m < 2 || ((1.0 / m as f64) - step).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "grid step {step} must be 1/m for an integer m >= 2"
        )));
    }
    Ok((1..m).map(|i| i as f64 / m as f64).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedRow {
    pub bias: f64,
    pub n: usize,
    pub k: usize,
    pub expected_pk: f64,
}

/// Closed-form `E[P_k]` for every `(bias, n, k)`, in bias-major order. Pairs
/// with `k > n` are skipped.
pub fn expected_grid(ns: &[usize], ks: &[usize], biases: &[f64]) -> Result<Vec<ExpectedRow>> {
    let mut rows = Vec::new();
    for &bias in biases {
        for &n in ns {
            for &k in ks.iter().filter(|&&k| k <= n) {
                rows.push(ExpectedRow {
                    bias,
                    n,
                    k,
                    expected_pk: expected_pk(n, k, bias)?,
                });
            }
        }
    }
    Ok(rows)
}

pub const EXPECTED_CSV_HEADER: &str = "bias,n,k,expected_pk";

pub fn write_expected_csv<W: Write>(mut out: W, rows: &[ExpectedRow]) -> io::Result<()> {
    writeln!(out, "{EXPECTED_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{}",
            r.bias,
            r.n,
            r.k,
            format_f64(r.expected_pk)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        for n in 0..10 {
            assert_eq!(expected_pk(n, n, 0.37).unwrap(), 1.0);
        }
        assert_eq!(expected_pk(4, 3, 0.5).unwrap(), 0.5);
        let v = expected_pk(8, 4, 0.7).unwrap();
        let direct = 0.3f64.powi(16) + 0.7f64.powi(16);
        assert!((v - direct).abs() < 1e-15);
        assert!((v - 0.003_323).abs() < 1e-6);
        let v32 = expected_pk(8, 4, 0.7f32).unwrap();
        assert!((v32 as f64 - direct).abs() < 1e-6);
    }

    #[test]
    fn unbiased_matches_power_of_two_form() {
        for n in 0..=12 {
            for k in 0..=n {
                let m = 1i32 << (n - k);
                assert_eq!(
                    expected_pk(n, k, 0.5).unwrap(),
                    2f64.powi(1 - m),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn huge_exponent_underflows_to_zero() {
        assert_eq!(expected_pk(2000, 0, 0.5).unwrap(), 0.0);
        assert!(expected_pk(40, 1, 0.3).unwrap() >= 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            expected_pk(3, 4, 0.5),
            Err(Error::KOutOfRange { .. })
        ));
        assert!(matches!(expected_pk(3, 1, 0.0), Err(Error::InvalidBias(_))));
        assert!(matches!(expected_pk(3, 1, 1.0), Err(Error::InvalidBias(_))));
        assert!(expected_strength(1, 0.5).is_err());
        let spec = BiasSpec {
            arity: 3,
            bias: 1.5,
            seed: 0,
            count: 1,
        };
        assert!(sample_biased(spec).is_err());
    }

    #[test]
    fn strength_closed_form() {
        assert_eq!(expected_strength(2, 0.5).unwrap(), 1.0);
        for n in 2..12 {
            for p in [0.1, 0.25, 0.4] {
                let a: f64 = expected_strength(n, p).unwrap();
                let b = expected_strength(n, 1.0 - p).unwrap();
                assert!((a - b).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn unbiased_minimizes_on_grid() {
        let grid = bias_grid(0.05).unwrap();
        for n in 1..=8 {
            for k in 0..n {
                let at_half = expected_pk(n, k, 0.5).unwrap();
                for &p in &grid {
                    assert!(expected_pk(n, k, p).unwrap() >= at_half);
                }
            }
        }
    }

    #[test]
    fn sampler_is_deterministic() {
        let spec = BiasSpec {
            arity: 6,
            bias: 0.3,
            seed: 99,
            count: 20,
        };
        let a: Vec<_> = sample_biased(spec).unwrap().collect();
        let b: Vec<_> = sample_biased(spec).unwrap().collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
        assert_eq!(a[7], sample_table(6, 0.3, 99, 7).unwrap());
        assert_ne!(a[0], a[1]);
    }

    #[test]
    fn sampler_density() {
        let p = 0.3;
        let spec = BiasSpec {
            arity: 8,
            bias: p,
            seed: 4,
            count: 10_000,
        };
        let ones: u64 = sample_biased(spec).unwrap().map(|f| f.count_ones()).sum();
        let trials = 10_000.0 * 256.0;
        let mean = ones as f64 / trials;
        let sigma = (p * (1.0 - p) / trials).sqrt();
        assert!((mean - p).abs() <= 3.0 * sigma, "{mean}");
    }

    #[test]
    fn empirical_full_assignment() {
        let e = empirical_expectation(5, 5, 0.3, 100, 1).unwrap();
        assert_eq!(e.mean, 1.0);
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn grid_and_csv() {
        let grid = bias_grid(0.01).unwrap();
        assert_eq!(grid.len(), 99);
        assert_eq!(grid[6], 0.07);
        assert!(bias_grid(0.3).is_err());
        let rows = expected_grid(&[4], &[3, 5], &[0.5]).unwrap();
        assert_eq!(rows.len(), 1);
        let mut buf = Vec::new();
        write_expected_csv(&mut buf, &rows).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "bias,n,k,expected_pk\n0.5,4,3,0.500000\n"
        );
    }
}
