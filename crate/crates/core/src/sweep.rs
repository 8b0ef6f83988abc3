//! Exhaustive sweeps over all functions of small arity and the per-depth and
//! per-symmetry aggregates of canalizing strength.

use std::collections::BTreeMap;
use std::io::{self, Write};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::canalization::{k_set_counts, layer_structure, CanalizationProfile};
use crate::decimal::{format_rational, fraction};
use crate::sensitivity::average_sensitivity;
use crate::{Error, Rational, Result, TruthTable};

/// Largest arity for [`enumerate_all`]; arity 5 would mean 2^32 functions.
pub const MAX_SWEEP_ARITY: usize = 4;

/// Partition of the variables into classes that can be permuted freely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryPartition {
    /// 1-based variables, each group ascending, groups ordered by first member.
    pub groups: Vec<Vec<usize>>,
}

impl SymmetryPartition {
    pub fn count(&self) -> usize {
        self.groups.len()
    }
}

fn swap_fixes(f: &TruthTable, i: usize, j: usize) -> bool {
    (0..f.len()).all(|row| {
        let bi = row >> i & 1;
        let bj = row >> j & 1;
        let swapped = if bi == bj {
            row
        } else {
            row ^ (1 << i) ^ (1 << j)
        };
        f.get(row) == f.get(swapped)
    })
}

/// Joins `x_i` and `x_j` whenever exchanging them leaves `f` unchanged and
/// returns the connected components. Transpositions generate the full
/// symmetric group on each component, so `f` is invariant under any
/// permutation inside a group.
pub fn symmetry_groups(f: &TruthTable) -> SymmetryPartition {
    let n = f.arity();
    let mut label: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if label[i] != label[j] && swap_fixes(f, i, j) {
                let (from, to) = (label[j], label[i]);
                for l in label.iter_mut() {
                    if *l == from {
                        *l = to;
                    }
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (pos, &l) in label.iter().enumerate() {
        groups.entry(l).or_default().push(pos + 1);
    }
    SymmetryPartition {
        groups: groups.into_values().collect(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    /// Bit `i` of the id is `f(i)`.
    pub id: u64,
    pub arity: usize,
    /// `None` for constants.
    pub depth: Option<usize>,
    pub symmetry_groups: usize,
    pub strength: Option<Rational>,
    /// Normalized average sensitivity.
    pub sensitivity: Rational,
    pub essential_count: usize,
    pub constant: bool,
}

pub fn record(f: &TruthTable) -> Result<SweepRecord> {
    let id = f.id().ok_or(Error::ArityCap {
        arity: f.arity(),
        cap: 6,
        what: "integer function ids",
    })?;
    let profile = CanalizationProfile::<Rational>::from_counts(f.arity(), k_set_counts(f)?);
    let depth = if profile.constant {
        None
    } else {
        Some(layer_structure(f)?.depth())
    };
    let sensitivity = if f.arity() == 0 {
        Rational::zero()
    } else {
        average_sensitivity(f, true)?
    };
    Ok(SweepRecord {
        id,
        arity: f.arity(),
        depth,
        symmetry_groups: symmetry_groups(f).count(),
        strength: profile.strength,
        sensitivity,
        essential_count: f.essential_variables().len(),
        constant: profile.constant,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SweepFilter {
    pub non_constant: bool,
    /// Keep only functions essential in every variable.
    pub fully_essential: bool,
}

/// One record per function of arity `n`, in ascending id order.
pub fn enumerate_all(n: usize, filter: SweepFilter) -> Result<Vec<SweepRecord>> {
    if n > MAX_SWEEP_ARITY {
        return Err(Error::ArityCap {
            arity: n,
            cap: MAX_SWEEP_ARITY,
            what: "exhaustive sweeps",
        });
    }
    let count = 1u64 << (1u32 << n);
    let records: Vec<SweepRecord> = (0..count)
        .into_par_iter()
        .map(|id| record(&TruthTable::from_id(n, id)?))
        .collect::<Result<_>>()?;
    Ok(records
        .into_iter()
        .filter(|r| !filter.non_constant || !r.constant)
        .filter(|r| !filter.fully_essential || r.essential_count == n)
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct BucketStats {
    pub key: usize,
    pub min: Rational,
    pub mean: Rational,
    pub max: Rational,
    pub count: u64,
    /// Every strength value in the bucket with its multiplicity.
    pub histogram: BTreeMap<Rational, u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StrengthTables {
    pub arity: usize,
    pub by_depth: Vec<BucketStats>,
    pub by_symmetry: Vec<BucketStats>,
    /// Constant functions left out of both tables.
    pub constants_excluded: u64,
}

fn buckets(records: &[SweepRecord], key: impl Fn(&SweepRecord) -> usize) -> Vec<BucketStats> {
    let mut map: BTreeMap<usize, BTreeMap<Rational, u64>> = BTreeMap::new();
    for r in records {
        if let Some(s) = &r.strength {
            *map.entry(key(r)).or_default().entry(s.clone()).or_default() += 1;
        }
    }
    map.into_iter()
        .map(|(key, histogram)| {
            let count: u64 = histogram.values().sum();
            let sum = histogram.iter().fold(Rational::zero(), |acc, (v, &c)| {
                acc + v * Rational::from_integer(BigInt::from(c))
            });
            BucketStats {
                key,
                min: histogram.keys().next().unwrap().clone(),
                max: histogram.keys().next_back().unwrap().clone(),
                mean: sum / Rational::from_integer(BigInt::from(count)),
                count,
                histogram,
            }
        })
        .collect()
}

/// Strength statistics per canalizing depth and per symmetry-group count.
/// Records without a strength (constants) are skipped.
pub fn aggregate_strength(records: &[SweepRecord]) -> Result<StrengthTables> {
    let Some(first) = records.first() else {
        return Err(Error::InvalidArgument(
            "no sweep records to aggregate".into(),
        ));
    };
    if records.iter().any(|r| r.arity != first.arity) {
        return Err(Error::InvalidArgument("sweep records mix arities".into()));
    }
    Ok(StrengthTables {
        arity: first.arity,
        by_depth: buckets(records, |r| r.depth.unwrap_or(0)),
        by_symmetry: buckets(records, |r| r.symmetry_groups),
        constants_excluded: records.iter().filter(|r| r.strength.is_none()).count() as u64,
    })
}

pub const RECORDS_CSV_HEADER: &str =
    "id,n,depth,symmetry_groups,strength_num,strength_den,strength,sensitivity,essential_count,constant";

pub fn write_records_csv<W: Write>(mut out: W, records: &[SweepRecord]) -> io::Result<()> {
    writeln!(out, "{RECORDS_CSV_HEADER}")?;
    for r in records {
        let depth = r.depth.map(|d| d.to_string()).unwrap_or_default();
        let (num, den, dec) = match &r.strength {
            Some(s) => (
                s.numer().to_string(),
                s.denom().to_string(),
                format_rational(s),
            ),
            None => Default::default(),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.id,
            r.arity,
            depth,
            r.symmetry_groups,
            num,
            den,
            dec,
            format_rational(&r.sensitivity),
            r.essential_count,
            r.constant as u8
        )?;
    }
    Ok(())
}

/// `key_name,min,mean,max,count`, e.g. `depth,...` for table A.
pub fn write_buckets_csv<W: Write>(
    mut out: W,
    key_name: &str,
    stats: &[BucketStats],
) -> io::Result<()> {
    writeln!(out, "{key_name},min,mean,max,count")?;
    for b in stats {
        writeln!(
            out,
            "{},{},{},{},{}",
            b.key,
            format_rational(&b.min),
            format_rational(&b.mean),
            format_rational(&b.max),
            b.count
        )?;
    }
    Ok(())
}

/// `key_name,strength_exact,strength,count`, one row per distinct value.
pub fn write_histogram_csv<W: Write>(
    mut out: W,
    key_name: &str,
    stats: &[BucketStats],
) -> io::Result<()> {
    writeln!(out, "{key_name},strength_exact,strength,count")?;
    for b in stats {
        for (v, c) in &b.histogram {
            writeln!(
                out,
                "{},{},{},{}",
                b.key,
                fraction(v),
                format_rational(v),
                c
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_table;
    use crate::generate::{generate, FunctionKind};

    #[test]
    fn symmetry_examples() {
        assert_eq!(
            symmetry_groups(&generate(&FunctionKind::And, 4).unwrap()).count(),
            1
        );
        let f = parse_table("x1 & (x2 | x3)", None).unwrap();
        assert_eq!(symmetry_groups(&f).groups, vec![vec![1], vec![2, 3]]);
        let x1 = TruthTable::from_bit_string(2, "0101").unwrap();
        assert_eq!(symmetry_groups(&x1).count(), 2);
        // x1 and x3 symmetric, x2 alone
        let g = parse_table("(x1 & x3) ^ x2", None).unwrap();
        assert_eq!(symmetry_groups(&g).groups, vec![vec![1, 3], vec![2]]);
    }

    #[test]
    fn arity_two_sweep() {
        let records = enumerate_all(2, SweepFilter::default()).unwrap();
        assert_eq!(records.len(), 16);
        assert_eq!(records.iter().filter(|r| r.constant).count(), 2);
        for id in [6u64, 9] {
            assert_eq!(records[id as usize].strength, Some(Rational::zero()));
        }
        let nonconst = enumerate_all(
            2,
            SweepFilter {
                non_constant: true,
                fully_essential: false,
            },
        )
        .unwrap();
        assert_eq!(nonconst.len(), 14);
        let essential = enumerate_all(
            2,
            SweepFilter {
                non_constant: true,
                fully_essential: true,
            },
        )
        .unwrap();
        // 16 - 2 constants - 4 literals
        assert_eq!(essential.len(), 10);
    }

    #[test]
    fn arity_three_has_two_non_canalizing_pairs() {
        let records = enumerate_all(3, SweepFilter::default()).unwrap();
        let mut zero_p2 = Vec::new();
        for r in &records {
            let f = TruthTable::from_id(3, r.id).unwrap();
            if k_set_counts(&f).unwrap()[2] == 0 {
                zero_p2.push(r.id);
            }
        }
        assert_eq!(zero_p2, vec![0x69, 0x96]);
    }

    #[test]
    fn cap_and_empty() {
        assert!(matches!(
            enumerate_all(5, SweepFilter::default()),
            Err(Error::ArityCap { cap: 4, .. })
        ));
        assert!(aggregate_strength(&[]).is_err());
    }

    #[test]
    fn csv_layout() {
        let records = enumerate_all(1, SweepFilter::default()).unwrap();
        let mut buf = Vec::new();
        write_records_csv(&mut buf, &records).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], RECORDS_CSV_HEADER);
        assert_eq!(lines[1], "0,1,,1,,,,0,0,1");
        assert_eq!(lines[2], "1,1,1,1,,,,1.00000,1,0");
        assert!(!text.contains('\r'));
    }
}
