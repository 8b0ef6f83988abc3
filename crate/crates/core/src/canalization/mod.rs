//! Canalizing variables, layer decomposition, k-set canalizing proportions
//! and canalizing strength.

mod counting;
mod estimate;
mod layers;

pub use counting::{k_set_count, k_set_counts, k_set_total, MAX_ENUMERATION_ARITY};
pub use estimate::{estimate_pk, wilson_interval, PkEstimate, WILSON_Z95};
pub use layers::{layer_structure, Layer, LayerEntry, LayerStructure};

use crate::{Result, Scalar, TruthTable};

/// `x_variable = input` forces the function to `output`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanalizingComponent {
    pub variable: usize,
    pub input: bool,
    pub output: bool,
}

/// Every `(variable, input, output)` with `f|x_variable=input` constant, ordered
/// by variable then input. The residual function may itself be constant.
pub fn canalizing_components(f: &TruthTable) -> Vec<CanalizingComponent> {
    let mut out = Vec::new();
    for pos in 0..f.arity() {
        for input in [false, true] {
            if let Some(output) = f.cofactor(pos, input).is_constant() {
                out.push(CanalizingComponent {
                    variable: pos + 1,
                    input,
                    output,
                });
            }
        }
    }
    out
}

/// True when `f` is a nested canalizing function whose single layer holds all
/// `n` variables, i.e. `f = b ^ prod(x_i == v_i)`.
pub fn is_ncf_single_layer(f: &TruthTable) -> bool {
    match layer_structure(f) {
        Ok(ls) => ls.layers.len() == 1 && ls.depth() == f.arity(),
        Err(_) => false,
    }
}

/// Exact k-set canalizing counts for every `k`, the proportions `P_k` in the
/// scalar type `T`, and the canalizing strength.
#[derive(Clone, Debug, PartialEq)]
pub struct CanalizationProfile<T> {
    pub arity: usize,
    /// Canalizing k-sets, indexed by `k`.
    pub counts: Vec<u64>,
    /// All k-sets, `C(n, k) * 2^k`.
    pub totals: Vec<u64>,
    pub proportions: Vec<T>,
    /// Absent for constant functions and for `n < 2`.
    pub strength: Option<T>,
    pub constant: bool,
}

impl<T: Scalar> CanalizationProfile<T> {
    pub fn from_counts(arity: usize, counts: Vec<u64>) -> Self {
        debug_assert_eq!(counts.len(), arity + 1);
        let totals: Vec<u64> = (0..=arity).map(|k| k_set_total(arity, k)).collect();
        let proportions = counts
            .iter()
            .zip(&totals)
            .map(|(&c, &t)| T::from_ratio(c, t))
            .collect();
        // P_0 is 1 exactly for constants
        let constant = counts[0] == 1;
        let strength =
            (!constant && arity >= 2).then(|| strength_from_counts(arity, &counts, &totals));
        CanalizationProfile {
            arity,
            counts,
            totals,
            proportions,
            strength,
            constant,
        }
    }

    pub fn proportion(&self, k: usize) -> &T {
        &self.proportions[k]
    }
}

/// `1/(n-1) * sum_{k=1}^{n-1} 2^k/(2^k-1) * P_k`.
fn strength_from_counts<T: Scalar>(arity: usize, counts: &[u64], totals: &[u64]) -> T {
    let mut sum = T::zero();
    for k in 1..arity {
        let weight = T::from_ratio(1 << k, (1 << k) - 1);
        sum = sum + weight * T::from_ratio(counts[k], totals[k]);
    }
    sum / T::from_ratio(arity as u64 - 1, 1)
}

pub fn profile<T: Scalar>(f: &TruthTable) -> Result<CanalizationProfile<T>> {
    Ok(CanalizationProfile::from_counts(
        f.arity(),
        k_set_counts(f)?,
    ))
}

/// Canalizing strength, or `None` for constants and arity below two.
pub fn canalizing_strength<T: Scalar>(f: &TruthTable) -> Result<Option<T>> {
    Ok(profile::<T>(f)?.strength)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_table;
    use crate::generate::{generate, FunctionKind};
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn cc(variable: usize, input: u8, output: u8) -> CanalizingComponent {
        CanalizingComponent {
            variable,
            input: input == 1,
            output: output == 1,
        }
    }

    #[test]
    fn components_of_and3() {
        let f = generate(&FunctionKind::And, 3).unwrap();
        assert_eq!(
            canalizing_components(&f),
            vec![cc(1, 0, 0), cc(2, 0, 0), cc(3, 0, 0)]
        );
    }

    #[test]
    fn parity_and_example_have_no_components() {
        let p = generate(&FunctionKind::Parity(false), 4).unwrap();
        assert!(canalizing_components(&p).is_empty());
        let f = parse_table("(x1|x2)&(x3|x4)", Some(4)).unwrap();
        assert!(canalizing_components(&f).is_empty());
    }

    #[test]
    fn literal_canalizes_both_ways() {
        let x1 = TruthTable::from_bit_string(2, "0101").unwrap();
        assert_eq!(canalizing_components(&x1), vec![cc(1, 0, 0), cc(1, 1, 1)]);
    }

    #[test]
    fn single_layer_detection() {
        assert!(is_ncf_single_layer(
            &generate(&FunctionKind::Or, 4).unwrap()
        ));
        assert!(!is_ncf_single_layer(
            &parse_table("x1 & (x2 | x3)", None).unwrap()
        ));
        assert!(!is_ncf_single_layer(
            &generate(&FunctionKind::Parity(false), 3).unwrap()
        ));
        assert!(!is_ncf_single_layer(
            &TruthTable::constant(3, true).unwrap()
        ));
        // x1 on two variables: one layer but x2 is left in the core
        assert!(!is_ncf_single_layer(
            &TruthTable::from_bit_string(2, "0101").unwrap()
        ));
    }

    #[test]
    fn and_profiles() {
        for n in 3..=5 {
            let f = generate(&FunctionKind::And, n).unwrap();
            let p = profile::<Rational>(&f).unwrap();
            for k in 0..n {
                assert_eq!(p.proportions[k], q(1, 1) - q(1, 1 << k));
            }
            assert_eq!(p.proportions[n], q(1, 1));
            assert_eq!(p.strength, Some(q(1, 1)));
        }
    }

    #[test]
    fn parity_profiles() {
        for n in 2..=6 {
            let f = generate(&FunctionKind::Parity(n % 2 == 0), n).unwrap();
            let p = profile::<Rational>(&f).unwrap();
            assert!(p.proportions[..n].iter().all(|x| *x == q(0, 1)));
            assert_eq!(p.strength, Some(q(0, 1)));
        }
    }

    #[test]
    fn threshold_profile() {
        let g = generate(&FunctionKind::Threshold(2), 5).unwrap();
        let p = profile::<Rational>(&g).unwrap();
        assert_eq!(
            p.proportions[1..5].to_vec(),
            vec![q(0, 1), q(1, 4), q(1, 2), q(3, 4)]
        );
        assert_eq!(p.strength, Some(q(179, 420)));
        let approx = profile::<f64>(&g).unwrap().strength.unwrap();
        assert!((approx - 179.0 / 420.0).abs() < 1e-12);
        let approx32 = profile::<f32>(&g).unwrap().strength.unwrap();
        assert!((approx32 - 0.426_19).abs() < 1e-4);
    }

    #[test]
    fn constant_profile_has_no_strength() {
        let f = TruthTable::constant(4, false).unwrap();
        let p = profile::<Rational>(&f).unwrap();
        assert!(p.constant);
        assert!(p.proportions.iter().all(|x| *x == q(1, 1)));
        assert_eq!(p.strength, None);
    }

    #[test]
    fn small_arity_has_no_strength() {
        let f = TruthTable::from_bit_string(1, "01").unwrap();
        let p = profile::<Rational>(&f).unwrap();
        assert_eq!(p.strength, None);
        assert_eq!(p.proportions, vec![q(0, 1), q(1, 1)]);
    }
}
