//! JSON payloads and their plain-text renderings.

use std::fmt::Write as _;

use canalyzer::canalization::{
    canalizing_components, layer_structure, profile, MAX_ENUMERATION_ARITY,
};
use canalyzer::decimal::{format_f64, format_rational, fraction};
use canalyzer::sensitivity::check_sensitivity_bounds;
use canalyzer::{Error, Rational, TruthTable};
use serde::Serialize;

/// An exact value next to its 6-significant-digit rendering.
#[derive(Clone, Serialize)]
pub struct Exact {
    pub exact: String,
    pub decimal: String,
}

impl From<&Rational> for Exact {
    fn from(q: &Rational) -> Self {
        Exact {
            exact: fraction(q),
            decimal: format_rational(q),
        }
    }
}

#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a [String],
    pub seeds: Vec<u64>,
    pub payload: T,
    pub elapsed_ms: u128,
}

#[derive(Serialize)]
pub struct Component {
    pub variable: usize,
    pub input: u8,
    pub output: u8,
}

#[derive(Serialize)]
pub struct LayerEntryOut {
    pub variable: usize,
    /// Value making the layer's monomial factor 1; the canalizing input is its complement.
    pub literal: u8,
    pub canalizing_input: u8,
}

#[derive(Serialize)]
pub struct LayersOut {
    pub depth: usize,
    pub sign: u8,
    pub layer_sizes: Vec<usize>,
    pub layers: Vec<Vec<LayerEntryOut>>,
    pub core_variables: Vec<usize>,
    pub core_bits: String,
}

#[derive(Serialize)]
pub struct ProportionOut {
    pub k: usize,
    pub count: u64,
    pub total: u64,
    #[serde(flatten)]
    pub value: Exact,
}

#[derive(Serialize)]
pub struct BoundOut {
    pub k: usize,
    pub proportion: Exact,
    pub lower: Exact,
    pub upper: String,
    pub holds: bool,
}

#[derive(Serialize)]
pub struct SensitivityOut {
    pub average: Exact,
    pub normalized: Exact,
}

#[derive(Serialize)]
pub struct Analysis {
    pub arity: usize,
    pub bits: String,
    pub hex: String,
    pub constant: bool,
    pub essential_variables: Vec<usize>,
    pub canalizing_components: Vec<Component>,
    /// Absent for constant functions.
    pub layers: Option<LayersOut>,
    pub proportions: Vec<ProportionOut>,
    pub strength: Option<Exact>,
    pub sensitivity: SensitivityOut,
    pub bounds: Vec<BoundOut>,
}

pub fn analyze(f: &TruthTable) -> Result<Analysis, Error> {
    let n = f.arity();
    if n > MAX_ENUMERATION_ARITY {
        return Err(Error::ArityCap {
            arity: n,
            cap: MAX_ENUMERATION_ARITY,
            what: "exact analysis; use `canalyzer estimate` for sampled proportions",
        });
    }
    let p = profile::<Rational>(f)?;
    let layers = match layer_structure(f) {
        Ok(ls) => Some(LayersOut {
            depth: ls.depth(),
            sign: ls.sign as u8,
            layer_sizes: ls.layer_sizes(),
            layers: ls
                .layers
                .iter()
                .map(|l| {
                    l.entries
                        .iter()
                        .map(|e| LayerEntryOut {
                            variable: e.variable,
                            literal: e.literal as u8,
                            canalizing_input: e.canalizing_input() as u8,
                        })
                        .collect()
                })
                .collect(),
            core_variables: ls.core_variables.clone(),
            core_bits: ls.core.to_bit_string(),
        }),
        Err(Error::ConstantFunction(_)) => None,
        Err(e) => return Err(e),
    };
    let (sensitivity, bounds) = if n == 0 {
        let zero = Exact::from(&Rational::from_integer(0.into()));
        (
            SensitivityOut {
                average: zero.clone(),
                normalized: zero,
            },
            Vec::new(),
        )
    } else {
        let ks: Vec<usize> = (1..=n).collect();
        let report = check_sensitivity_bounds(f, &ks)?;
        let bounds = report
            .bounds
            .iter()
            .map(|b| BoundOut {
                k: b.k,
                proportion: (&b.proportion).into(),
                lower: (&b.lower).into(),
                upper: format_f64(b.upper),
                holds: b.holds(),
            })
            .collect();
        (
            SensitivityOut {
                average: (&report.average).into(),
                normalized: (&report.normalized).into(),
            },
            bounds,
        )
    };
    Ok(Analysis {
        arity: n,
        bits: f.to_bit_string(),
        hex: f.to_hex_string(),
        constant: p.constant,
        essential_variables: f.essential_variables(),
        canalizing_components: canalizing_components(f)
            .into_iter()
            .map(|c| Component {
                variable: c.variable,
                input: c.input as u8,
                output: c.output as u8,
            })
            .collect(),
        layers,
        proportions: (0..=n)
            .map(|k| ProportionOut {
                k,
                count: p.counts[k],
                total: p.totals[k],
                value: (&p.proportions[k]).into(),
            })
            .collect(),
        strength: p.strength.as_ref().map(Exact::from),
        sensitivity,
        bounds,
    })
}

fn var_list(vars: &[usize]) -> String {
    if vars.is_empty() {
        return "none".into();
    }
    vars.iter()
        .map(|v| format!("x{v}"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn analysis_text(a: &Analysis) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "arity         {}", a.arity);
    let _ = writeln!(s, "table         {} (hex {})", a.bits, a.hex);
    let _ = writeln!(s, "essential     {}", var_list(&a.essential_variables));
    let comps: Vec<String> = a
        .canalizing_components
        .iter()
        .map(|c| format!("x{}={} -> {}", c.variable, c.input, c.output))
        .collect();
    let _ = writeln!(
        s,
        "canalizing    {}",
        if comps.is_empty() {
            "none".into()
        } else {
            comps.join(", ")
        }
    );
    match &a.layers {
        Some(l) => {
            let sizes: Vec<String> = l.layer_sizes.iter().map(usize::to_string).collect();
            let _ = writeln!(
                s,
                "depth         {} (layer sizes [{}], sign {})",
                l.depth,
                sizes.join(", "),
                l.sign
            );
            for (i, layer) in l.layers.iter().enumerate() {
                let entries: Vec<String> = layer
                    .iter()
                    .map(|e| format!("x{} (canalizing on {})", e.variable, e.canalizing_input))
                    .collect();
                let _ = writeln!(s, "  layer {}     {}", i + 1, entries.join(", "));
            }
            let _ = writeln!(
                s,
                "  core        {} on {}",
                l.core_bits,
                var_list(&l.core_variables)
            );
        }
        None => {
            let _ = writeln!(s, "depth         undefined (constant function)");
        }
    }
    let _ = writeln!(s, "proportions");
    for p in &a.proportions {
        let _ = writeln!(
            s,
            "  P_{:<3} {:>8}/{:<8} = {:<12} {}",
            p.k, p.count, p.total, p.value.exact, p.value.decimal
        );
    }
    match &a.strength {
        Some(c) => {
            let _ = writeln!(s, "strength      {} ({})", c.decimal, c.exact);
        }
        None => {
            let _ = writeln!(s, "strength      undefined");
        }
    }
    let _ = writeln!(
        s,
        "sensitivity   {} ({}), normalized {} ({})",
        a.sensitivity.average.decimal,
        a.sensitivity.average.exact,
        a.sensitivity.normalized.decimal,
        a.sensitivity.normalized.exact
    );
    if !a.bounds.is_empty() {
        let _ = writeln!(
            s,
            "bounds        k  lower        s(f)         upper        ok"
        );
        for b in &a.bounds {
            let _ = writeln!(
                s,
                "              {:<2} {:<12} {:<12} {:<12} {}",
                b.k,
                b.lower.decimal,
                a.sensitivity.normalized.decimal,
                b.upper,
                if b.holds { "yes" } else { "NO" }
            );
        }
    }
    s
}
