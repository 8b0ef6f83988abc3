//! Named function families.

use std::fmt;
use std::str::FromStr;

use crate::canalization::{Layer, LayerEntry, LayerStructure};
use crate::{Error, Result, TruthTable};

/// Layers of a nested canalizing function, outermost first.
///
/// Each entry `(variable, value)` contributes the factor `[x_variable == value]`
/// to its layer's monomial, so `x_variable = !value` is the canalizing input.
/// Variables not named in any layer are left as non-essential inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerSpec {
    pub sign: bool,
    pub layers: Vec<Vec<(usize, bool)>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionKind {
    Constant(bool),
    And,
    Or,
    /// `x1 ^ .. ^ xn ^ b`.
    Parity(bool),
    /// `x1 + .. + xn >= t`.
    Threshold(usize),
    Ncf(LayerSpec),
}

pub fn generate(kind: &FunctionKind, arity: usize) -> Result<TruthTable> {
    match kind {
        FunctionKind::Constant(b) => TruthTable::constant(arity, *b),
        FunctionKind::And => TruthTable::from_fn(arity, |i| i == (1 << arity) - 1),
        FunctionKind::Or => TruthTable::from_fn(arity, |i| i != 0),
        FunctionKind::Parity(b) => TruthTable::from_fn(arity, |i| (i.count_ones() % 2 == 1) ^ b),
        FunctionKind::Threshold(t) => {
            if *t == 0 || *t > arity {
                return Err(Error::InvalidArgument(format!(
                    "threshold {t} must lie in 1..={arity}"
                )));
            }
            TruthTable::from_fn(arity, |i| i.count_ones() as usize >= *t)
        }
        FunctionKind::Ncf(spec) => ncf(spec, arity),
    }
}

fn ncf(spec: &LayerSpec, arity: usize) -> Result<TruthTable> {
    if spec.layers.is_empty() {
        return Err(Error::InvalidLayerSpec("no layers given".into()));
    }
    let mut seen = vec![false; arity + 1];
    let mut layers = Vec::with_capacity(spec.layers.len());
    for (i, layer) in spec.layers.iter().enumerate() {
        if layer.is_empty() {
            return Err(Error::InvalidLayerSpec(format!("layer {} is empty", i + 1)));
        }
        let mut entries = Vec::with_capacity(layer.len());
        for &(variable, literal) in layer {
            if variable == 0 || variable > arity {
                return Err(Error::VariableOutOfRange { variable, arity });
            }
            if std::mem::replace(&mut seen[variable], true) {
                return Err(Error::DuplicateVariable(variable));
            }
            entries.push(LayerEntry { variable, literal });
        }
        entries.sort_by_key(|e| e.variable);
        layers.push(Layer { entries });
    }
    let r = layers.len();
    if r != 1 && layers[r - 1].entries.len() < 2 {
        return Err(Error::InvalidLayerSpec(
            "with a constant core the last of several layers needs at least two variables".into(),
        ));
    }
    if r == 1 && layers[0].entries.len() == 1 && spec.sign {
        return Err(Error::InvalidLayerSpec(
            "a single one-variable layer requires sign 0".into(),
        ));
    }
    let core_variables: Vec<usize> = (1..=arity).filter(|&v| !seen[v]).collect();
    let core = TruthTable::constant(core_variables.len(), true)?;
    let structure = LayerStructure {
        arity,
        sign: spec.sign,
        layers,
        core_variables,
        core,
    };
    structure.reconstruct()
}

impl FromStr for FunctionKind {
    type Err = Error;

    /// Accepts `and`, `or`, `constant:B`, `parity[:B]`, `threshold:T` and
    /// `ncf:B:x1=1/x2=0,x3=0` (layers separated by `/`).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unrecognized function kind {s:?}"));
        let parse_bit = |t: &str| match t.trim() {
            "0" => Ok(false),
            "1" => Ok(true),
            _ => Err(bad()),
        };
        let mut parts = s.trim().splitn(3, ':');
        let name = parts.next().unwrap_or("").to_ascii_lowercase();
        let arg = parts.next();
        match (name.as_str(), arg) {
            ("and", None) => Ok(FunctionKind::And),
            ("or", None) => Ok(FunctionKind::Or),
            ("constant", Some(b)) => Ok(FunctionKind::Constant(parse_bit(b)?)),
            ("parity", None) => Ok(FunctionKind::Parity(false)),
            ("parity", Some(b)) => Ok(FunctionKind::Parity(parse_bit(b)?)),
            ("threshold", Some(t)) => Ok(FunctionKind::Threshold(
                t.trim().parse().map_err(|_| bad())?,
            )),
            ("ncf", Some(b)) => {
                let sign = parse_bit(b)?;
                let body = parts.next().ok_or_else(bad)?;
                let mut layers = Vec::new();
                for layer in body.split('/') {
                    let mut entries = Vec::new();
                    for entry in layer.split(',').map(str::trim).filter(|e| !e.is_empty()) {
                        let (var, val) = entry.split_once('=').ok_or_else(bad)?;
                        let var = var.trim();
                        let var = var.strip_prefix(['x', 'X']).unwrap_or(var);
                        entries.push((var.parse().map_err(|_| bad())?, parse_bit(val)?));
                    }
                    layers.push(entries);
                }
                Ok(FunctionKind::Ncf(LayerSpec { sign, layers }))
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionKind::Constant(b) => write!(f, "constant:{}", *b as u8),
            FunctionKind::And => f.write_str("and"),
            FunctionKind::Or => f.write_str("or"),
            FunctionKind::Parity(b) => write!(f, "parity:{}", *b as u8),
            FunctionKind::Threshold(t) => write!(f, "threshold:{t}"),
            FunctionKind::Ncf(spec) => {
                write!(f, "ncf:{}:", spec.sign as u8)?;
                for (i, layer) in spec.layers.iter().enumerate() {
                    if i > 0 {
                        f.write_str("/")?;
                    }
                    for (j, (v, b)) in layer.iter().enumerate() {
                        if j > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "x{v}={}", *b as u8)?;
                    }
                }
                Ok(())
            }
        }
    }
}
