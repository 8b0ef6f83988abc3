use num_integer::binomial;
use rayon::prelude::*;

use crate::{Error, Result, TruthTable};

/// Largest arity for exact k-set enumeration. The walk below visits at most
/// `2^n` free-variable sets with `2^n / 64` word operations each.
pub const MAX_ENUMERATION_ARITY: usize = 14;

/// `C(n, k) * 2^k`, the number of size-`k` partial assignments.
pub fn k_set_total(arity: usize, k: usize) -> u64 {
    binomial(arity as u64, k as u64) << k
}

/// Canalizing size-`k` assignments for every `k` in `0..=n`.
///
/// A size-`k` assignment canalizes `f` exactly when `f` is constant on the
/// `(n-k)`-face it fixes. For a set `F` of free variables, folding `f` with
/// AND (resp. OR) along every variable of `F` leaves at each row the AND (OR)
/// of `f` over that row's face, so rows where the AND is 1 or the OR is 0 lie
/// on constant faces. Each face has `2^|F|` rows.
pub fn k_set_counts(f: &TruthTable) -> Result<Vec<u64>> {
    let n = f.arity();
    if n > MAX_ENUMERATION_ARITY {
        return Err(Error::ArityCap {
            arity: n,
            cap: MAX_ENUMERATION_ARITY,
            what: "exact k-set enumeration (use Monte Carlo estimation)",
        });
    }
    let mut counts = vec![0u64; n + 1];
    counts[n] = 1 << n;
    let partials: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map(|pos| {
            let mut local = vec![0u64; n + 1];
            let all = f.and(&f.flip(pos));
            let any = f.or(&f.flip(pos));
            visit(&all, &any, pos, 1, &mut local);
            local
        })
        .collect();
    for local in partials {
        for (c, l) in counts.iter_mut().zip(local) {
            *c += l;
        }
    }
    Ok(counts)
}

fn visit(all: &TruthTable, any: &TruthTable, last: usize, free: usize, counts: &mut [u64]) {
    let n = all.arity();
    let constant_rows = all.count_ones() + (any.len() as u64 - any.count_ones());
    counts[n - free] += constant_rows >> free;
    if constant_rows == 0 {
        // folding further only grows `any` and shrinks `all`
        return;
    }
    for pos in last + 1..n {
        let all2 = all.and(&all.flip(pos));
        let any2 = any.or(&any.flip(pos));
        visit(&all2, &any2, pos, free + 1, counts);
    }
}

/// `(canalizing, total)` size-`k` assignments.
pub fn k_set_count(f: &TruthTable, k: usize) -> Result<(u64, u64)> {
    if k > f.arity() {
        return Err(Error::KOutOfRange {
            k,
            arity: f.arity(),
        });
    }
    let counts = k_set_counts(f)?;
    Ok((counts[k], k_set_total(f.arity(), k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_table;

    #[test]
    fn disjunction_pairs_example() {
        let f = parse_table("(x1|x2)&(x3|x4)", Some(4)).unwrap();
        assert_eq!(k_set_count(&f, 2).unwrap(), (6, 24));
        assert_eq!(k_set_count(&f, 1).unwrap(), (0, 8));
    }

    #[test]
    fn full_assignments_always_canalize() {
        let f = TruthTable::from_fn(7, |i| (i * 2654435761) % 7 < 3).unwrap();
        assert_eq!(k_set_count(&f, 7).unwrap(), (128, 128));
    }

    #[test]
    fn masked_xor_example() {
        let f = parse_table("x1 & (x2 ^ x3 ^ x4 ^ x5)", None).unwrap();
        let counts = k_set_counts(&f).unwrap();
        let totals: Vec<u64> = (0..=5).map(|k| k_set_total(5, k)).collect();
        assert_eq!(totals, vec![1, 10, 40, 80, 80, 32]);
        // 1/10, 1/5, 3/10, 1/2
        assert_eq!(counts, vec![0, 1, 8, 24, 40, 32]);
    }

    #[test]
    fn errors() {
        let f = TruthTable::constant(3, true).unwrap();
        assert_eq!(
            k_set_count(&f, 4),
            Err(Error::KOutOfRange { k: 4, arity: 3 })
        );
        let big = TruthTable::constant(15, true).unwrap();
        assert!(matches!(
            k_set_counts(&big),
            Err(Error::ArityCap { cap: 14, .. })
        ));
    }

    #[test]
    fn arity_zero() {
        let f = TruthTable::constant(0, true).unwrap();
        assert_eq!(k_set_counts(&f).unwrap(), vec![1]);
    }
}
