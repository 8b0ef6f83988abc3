use crate::table::PartialAssignment;
use crate::{Error, Result, TruthTable};

use super::canalizing_components;

/// One factor `[x_variable == literal]` of a layer monomial. The variable
/// canalizes at the opposite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LayerEntry {
    pub variable: usize,
    pub literal: bool,
}

impl LayerEntry {
    pub fn canalizing_input(&self) -> bool {
        !self.literal
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    /// Sorted by variable.
    pub entries: Vec<LayerEntry>,
}

impl Layer {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn product(&self, row: usize) -> bool {
        self.entries
            .iter()
            .all(|e| (row >> (e.variable - 1) & 1 == 1) == e.literal)
    }
}

/// Standard monomial form
/// `f = b ^ M_1 (M_2 ( .. (M_r p_C ^ 1) .. ) ^ 1)` with `M_i` the product of
/// layer `i`'s literals and `p_C` the core on the remaining variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerStructure {
    pub arity: usize,
    pub sign: bool,
    pub layers: Vec<Layer>,
    /// Variables of the core in ascending order; `core` is indexed by them.
    pub core_variables: Vec<usize>,
    pub core: TruthTable,
}

impl LayerStructure {
    /// Canalizing depth, the number of variables in layers.
    pub fn depth(&self) -> usize {
        self.layers.iter().map(Layer::len).sum()
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(Layer::len).collect()
    }

    /// Output forced by the canalizing inputs of layer `i` (0-based).
    pub fn layer_output(&self, i: usize) -> bool {
        self.sign ^ (i % 2 == 1)
    }

    fn core_value(&self, row: usize) -> bool {
        let core_row = self
            .core_variables
            .iter()
            .enumerate()
            .fold(0usize, |acc, (j, &v)| acc | (row >> (v - 1) & 1) << j);
        self.core.get(core_row)
    }

    pub fn evaluate(&self, row: usize) -> bool {
        let Some((last, outer)) = self.layers.split_last() else {
            return self.sign ^ self.core_value(row);
        };
        let mut value = last.product(row) && self.core_value(row);
        for layer in outer.iter().rev() {
            value = layer.product(row) && !value;
        }
        self.sign ^ value
    }

    pub fn reconstruct(&self) -> Result<TruthTable> {
        TruthTable::from_fn(self.arity, |row| self.evaluate(row))
    }

    /// Whether the uniqueness side conditions of the standard form hold:
    /// with a core identically 1, the last of several layers has at least two
    /// variables, and a lone one-variable layer carries sign 0.
    pub fn satisfies_exceptional_cases(&self) -> bool {
        if self.core.is_constant() != Some(true) || self.layers.is_empty() {
            return true;
        }
        let r = self.layers.len();
        if r != 1 {
            self.layers[r - 1].len() >= 2
        } else {
            self.layers[0].len() != 1 || !self.sign
        }
    }
}

/// Peels the layers of `f`: every variable canalizing the current function
/// forms the next layer, which is then fixed at its non-canalizing values.
/// Whatever never canalizes is left in the core.
pub fn layer_structure(f: &TruthTable) -> Result<LayerStructure> {
    if f.is_constant().is_some() {
        return Err(Error::ConstantFunction(
            "the layer decomposition is only defined for non-constant functions",
        ));
    }
    let n = f.arity();
    let mut current = f.clone();
    let mut in_core = vec![true; n];
    let mut layers: Vec<Layer> = Vec::new();
    let mut sign = false;
    let mut fixed = Vec::new();
    while current.is_constant().is_none() {
        let components: Vec<_> = canalizing_components(&current)
            .into_iter()
            .filter(|c| in_core[c.variable - 1])
            .collect();
        if components.is_empty() {
            break;
        }
        let output = if layers.is_empty() {
            // a variable canalizing at both inputs makes f a literal, whose
            // unique form has sign 0
            let literal = components
                .windows(2)
                .any(|w| w[0].variable == w[1].variable);
            sign = if literal { false } else { components[0].output };
            sign
        } else {
            !(sign ^ ((layers.len() - 1) % 2 == 1))
        };
        let entries: Vec<LayerEntry> = components
            .iter()
            .filter(|c| c.output == output)
            .map(|c| LayerEntry {
                variable: c.variable,
                literal: !c.input,
            })
            .collect();
        debug_assert!(!entries.is_empty());
        for e in &entries {
            current = current.cofactor(e.variable - 1, e.literal);
            in_core[e.variable - 1] = false;
            fixed.push((e.variable, e.literal));
        }
        layers.push(Layer { entries });
    }
    let core_variables: Vec<usize> = (1..=n).filter(|v| in_core[v - 1]).collect();
    let residue = f.restrict(&PartialAssignment::new(fixed)?)?;
    // all layers at their literals: f = b ^ (r - 1 parity) ^ p_C
    let flip = !layers.is_empty() && (sign ^ ((layers.len() - 1) % 2 == 1));
    let core = if flip { residue.complement() } else { residue };
    Ok(LayerStructure {
        arity: n,
        sign,
        layers,
        core_variables,
        core,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_table;
    use crate::generate::{generate, FunctionKind};

    fn entries(layer: &Layer) -> Vec<(usize, u8)> {
        layer
            .entries
            .iter()
            .map(|e| (e.variable, e.literal as u8))
            .collect()
    }

    #[test]
    fn two_layer_example() {
        let f = parse_table("x1 & (x2 | x3)", None).unwrap();
        let ls = layer_structure(&f).unwrap();
        assert!(!ls.sign);
        assert_eq!(ls.layer_sizes(), vec![1, 2]);
        assert_eq!(entries(&ls.layers[0]), vec![(1, 1)]);
        assert_eq!(entries(&ls.layers[1]), vec![(2, 0), (3, 0)]);
        assert!(ls.core_variables.is_empty());
        assert_eq!(ls.core.is_constant(), Some(true));
        assert_eq!(ls.reconstruct().unwrap(), f);
        assert!(ls.satisfies_exceptional_cases());
        assert!(!ls.layers[0].entries[0].canalizing_input());
    }

    #[test]
    fn parity_is_all_core() {
        let f = generate(&FunctionKind::Parity(false), 5).unwrap();
        let ls = layer_structure(&f).unwrap();
        assert_eq!(ls.depth(), 0);
        assert!(ls.layers.is_empty());
        assert_eq!(ls.core, f);
        assert_eq!(ls.core_variables, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn and_is_one_layer() {
        for n in 1..=6 {
            let f = generate(&FunctionKind::And, n).unwrap();
            let ls = layer_structure(&f).unwrap();
            assert_eq!(ls.layer_sizes(), vec![n]);
            assert_eq!(ls.core.is_constant(), Some(true));
            assert!(!ls.sign);
        }
        let or = generate(&FunctionKind::Or, 3).unwrap();
        let ls = layer_structure(&or).unwrap();
        assert!(ls.sign);
        assert!(ls.layers[0].entries.iter().all(|e| !e.literal));
        assert_eq!(ls.reconstruct().unwrap(), or);
    }

    #[test]
    fn negated_literal_has_sign_zero() {
        let f = TruthTable::from_bit_string(2, "1010").unwrap();
        let ls = layer_structure(&f).unwrap();
        assert!(!ls.sign);
        assert_eq!(entries(&ls.layers[0]), vec![(1, 0)]);
        assert_eq!(ls.core_variables, vec![2]);
        assert_eq!(ls.reconstruct().unwrap(), f);
    }

    #[test]
    fn canalizing_with_noncanalizing_core() {
        let f = parse_table("x1 & (x2 ^ x3 ^ x4 ^ x5)", None).unwrap();
        let ls = layer_structure(&f).unwrap();
        assert_eq!(ls.depth(), 1);
        assert_eq!(ls.core_variables, vec![2, 3, 4, 5]);
        assert_eq!(ls.reconstruct().unwrap(), f);
        let g = generate(&FunctionKind::Threshold(2), 5).unwrap();
        assert_eq!(layer_structure(&g).unwrap().depth(), 0);
    }

    #[test]
    fn constants_rejected() {
        for b in [false, true] {
            let f = TruthTable::constant(3, b).unwrap();
            assert!(matches!(
                layer_structure(&f),
                Err(Error::ConstantFunction(_))
            ));
        }
    }

    #[test]
    fn reconstructs_every_function_of_arity_three() {
        for id in 1..255u64 {
            let f = TruthTable::from_id(3, id).unwrap();
            let ls = layer_structure(&f).unwrap();
            assert_eq!(ls.reconstruct().unwrap(), f, "id {id}");
            assert!(ls.satisfies_exceptional_cases(), "id {id}");
        }
    }
}
