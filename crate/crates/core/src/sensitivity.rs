//! Sensitivity of Boolean functions and its bounds in terms of `P_{n-k}`.

use num_bigint::BigInt;
use num_traits::One;

use crate::canalization::{k_set_counts, CanalizationProfile};
use crate::table::row_index;
use crate::{Error, Rational, Real, Result, Scalar, TruthTable};

/// Number of Hamming neighbours of `input` with a different output.
pub fn sensitivity_at(f: &TruthTable, input: &[bool]) -> Result<usize> {
    if input.len() != f.arity() {
        return Err(Error::LengthMismatch {
            arity: f.arity(),
            expected: f.arity(),
            actual: input.len(),
        });
    }
    let row = row_index(input);
    let value = f.get(row);
    Ok((0..f.arity())
        .filter(|pos| f.get(row ^ (1 << pos)) != value)
        .count())
}

/// Hypercube edges along which `f` changes value, out of `n * 2^(n-1)`.
pub fn sensitive_edges(f: &TruthTable) -> u64 {
    // each such edge shows up twice in f ^ flip(f)
    (0..f.arity())
        .map(|pos| f.xor(&f.flip(pos)).count_ones() / 2)
        .sum()
}

/// Average sensitivity `S(f)`, or the normalized `s(f) = S(f) / n`.
pub fn average_sensitivity<T: Scalar>(f: &TruthTable, normalized: bool) -> Result<T> {
    let n = f.arity();
    let edges = sensitive_edges(f);
    if normalized {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "normalized sensitivity is undefined for arity 0".into(),
            ));
        }
        Ok(T::from_ratio(edges, (n as u64) << (n - 1)))
    } else {
        Ok(T::from_ratio(2 * edges, 1 << n))
    }
}

/// `1 - p^(1/k)`.
pub fn upper_bound<T: Real>(p: T, k: usize) -> T {
    T::one() - p.powf(T::one() / T::from_f64(k as f64))
}

/// Absolute slack allowed when comparing against the irrational upper bound.
pub const UPPER_BOUND_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck {
    pub k: usize,
    /// `P_{n-k}`.
    pub proportion: Rational,
    /// `2^-(k-1) * (1 - P_{n-k})`, exact.
    pub lower: Rational,
    /// `1 - P_{n-k}^(1/k)`.
    pub upper: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SensitivityReport {
    pub arity: usize,
    pub average: Rational,
    pub normalized: Rational,
    pub bounds: Vec<BoundCheck>,
}

impl SensitivityReport {
    pub fn violations(&self) -> impl Iterator<Item = &BoundCheck> {
        self.bounds.iter().filter(|b| !b.holds())
    }
}

/// Checks `2^-(k-1) (1 - P_{n-k}) <= s(f) <= 1 - P_{n-k}^(1/k)` for each `k`.
pub fn check_sensitivity_bounds(f: &TruthTable, ks: &[usize]) -> Result<SensitivityReport> {
    let n = f.arity();
    for &k in ks {
        if k == 0 || k > n {
            return Err(Error::KOutOfRange { k, arity: n });
        }
    }
    let profile = CanalizationProfile::<Rational>::from_counts(n, k_set_counts(f)?);
    bounds_from_profile(f, &profile, ks)
}

pub(crate) fn bounds_from_profile(
    f: &TruthTable,
    profile: &CanalizationProfile<Rational>,
    ks: &[usize],
) -> Result<SensitivityReport> {
    let n = f.arity();
    let average = average_sensitivity::<Rational>(f, false)?;
    let normalized = average_sensitivity::<Rational>(f, true)?;
    let s = normalized.as_f64();
    let bounds = ks
        .iter()
        .map(|&k| {
            let proportion = profile.proportions[n - k].clone();
            let lower =
                (Rational::one() - &proportion) / Rational::from_integer(BigInt::one() << (k - 1));
            let upper = upper_bound(proportion.as_f64(), k);
            BoundCheck {
                k,
                lower_holds: lower <= normalized,
                upper_holds: s <= upper + UPPER_BOUND_TOLERANCE,
                proportion,
                lower,
                upper,
            }
        })
        .collect();
    Ok(SensitivityReport {
        arity: n,
        average,
        normalized,
        bounds,
    })
}

/// `s(f) == 1 - P_{n-1}(f)`, checked exactly.
pub fn edge_identity_holds(f: &TruthTable, profile: &CanalizationProfile<Rational>) -> bool {
    let n = f.arity();
    n >= 1
        && average_sensitivity::<Rational>(f, true)
            .is_ok_and(|s| s == Rational::one() - &profile.proportions[n - 1])
}
