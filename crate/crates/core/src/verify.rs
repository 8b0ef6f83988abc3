//! On-demand checks of the structural inequalities and identities relating
//! `P_k`, layer structure and sensitivity. Arities up to four are checked
//! exhaustively, larger ones on uniformly sampled functions.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::canalization::{
    is_ncf_single_layer, k_set_counts, CanalizationProfile, MAX_ENUMERATION_ARITY,
};
use crate::sensitivity::{bounds_from_profile, edge_identity_holds};
use crate::{Error, Rational, Result, TruthTable};

/// Arities at or below this are checked over every function.
pub const EXHAUSTIVE_ARITY: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    /// `P_{k-1} <= P_k <= (1 + P_{k-1}) / 2` for `1 <= k < n`.
    Monotone,
    /// Non-constant: `P_k <= 1 - 2^-k` for `k < n`; constant: all `P_k = 1`.
    Cap,
    /// `P_k = 1 - 2^-k` for some `0 < k < n` iff single-layer NCF (`n >= 3`).
    SingleLayer,
    /// Sensitivity bounds from `P_{n-k}`, every `k` in `1..=n`.
    SensitivityBounds,
    /// `s(f) = 1 - P_{n-1}(f)`.
    EdgeIdentity,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Monotone,
        Suite::Cap,
        Suite::SingleLayer,
        Suite::SensitivityBounds,
        Suite::EdgeIdentity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Monotone => "thm31",
            Suite::Cap => "cor32",
            Suite::SingleLayer => "thm33",
            Suite::SensitivityBounds => "thm45",
            Suite::EdgeIdentity => "cor46",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coverage {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub arity: usize,
    pub coverage: Coverage,
    pub checked: u64,
    pub violations: u64,
    /// Up to ten violating functions as bit strings.
    pub examples: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn monotone_holds(p: &CanalizationProfile<Rational>) -> bool {
    (1..p.arity).all(|k| {
        let (prev, cur) = (&p.proportions[k - 1], &p.proportions[k]);
        prev <= cur
            && cur * Rational::from_integer(2.into()) <= Rational::from_integer(1.into()) + prev
    })
}

fn cap_holds(p: &CanalizationProfile<Rational>) -> bool {
    if p.constant {
        return p.counts == p.totals;
    }
    // count * 2^k <= total * (2^k - 1)
    (0..p.arity).all(|k| (p.counts[k] as u128) << k <= p.totals[k] as u128 * ((1u128 << k) - 1))
}

fn at_cap(p: &CanalizationProfile<Rational>, k: usize) -> bool {
    (p.counts[k] as u128) << k == p.totals[k] as u128 * ((1u128 << k) - 1)
}

fn single_layer_holds(f: &TruthTable, p: &CanalizationProfile<Rational>) -> bool {
    let n = p.arity;
    let ncf = is_ncf_single_layer(f);
    let forward = !ncf || (0..n).all(|k| at_cap(p, k));
    let converse = n < 3 || ncf || !(1..n).any(|k| at_cap(p, k));
    forward && converse
}

pub fn check_function(suite: Suite, f: &TruthTable) -> Result<bool> {
    let p = CanalizationProfile::<Rational>::from_counts(f.arity(), k_set_counts(f)?);
    Ok(match suite {
        Suite::Monotone => monotone_holds(&p),
        Suite::Cap => cap_holds(&p),
        Suite::SingleLayer => single_layer_holds(f, &p),
        Suite::SensitivityBounds => {
            let ks: Vec<usize> = (1..=f.arity()).collect();
            bounds_from_profile(f, &p, &ks)?
                .violations()
                .next()
                .is_none()
        }
        Suite::EdgeIdentity => edge_identity_holds(f, &p),
    })
}

/// Uniform random function number `index` of the stream for `seed`.
pub fn random_function(arity: usize, seed: u64, index: u64) -> Result<TruthTable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    TruthTable::from_fn(arity, |_| rng.random::<bool>())
}

pub fn run_suite(suite: Suite, arity: usize, samples: u64, seed: u64) -> Result<SuiteReport> {
    if arity == 0 {
        return Err(Error::InvalidArgument("verification needs n >= 1".into()));
    }
    if arity > MAX_ENUMERATION_ARITY {
        return Err(Error::ArityCap {
            arity,
            cap: MAX_ENUMERATION_ARITY,
            what: "verification",
        });
    }
    let (coverage, count) = if arity <= EXHAUSTIVE_ARITY {
        (Coverage::Exhaustive, 1u64 << (1u32 << arity))
    } else {
        (Coverage::Sampled { samples, seed }, samples)
    };
    let function = |i: u64| match coverage {
        Coverage::Exhaustive => TruthTable::from_id(arity, i),
        Coverage::Sampled { .. } => random_function(arity, seed, i),
    };
    let failures: Vec<String> = (0..count)
        .into_par_iter()
        .map(|i| {
            let f = function(i)?;
            Ok((!check_function(suite, &f)?).then(|| f.to_bit_string()))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(SuiteReport {
        suite,
        arity,
        coverage,
        checked: count,
        violations: failures.len() as u64,
        examples: failures.into_iter().take(10).collect(),
    })
}
