//! Bit-packed truth tables.
//!
//! Row `i` of a table on `n` variables holds `f(x1, .., xn)` where `xj` is bit
//! `j - 1` of `i`. Rows are packed 64 to a word, row 0 in the least
//! significant bit of word 0. Tables with fewer than 64 rows use a single word
//! whose unused high bits are always zero.

use std::fmt;

use crate::{Error, Result};

/// Largest arity a [`TruthTable`] may be built with.
pub const MAX_EXACT_ARITY: usize = 20;

/// For each in-word variable position, the rows whose bit at that position is 0.
pub(crate) const LOW_HALF: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    arity: usize,
    words: Vec<u64>,
}

#[inline]
pub(crate) fn word_count(arity: usize) -> usize {
    if arity <= 6 {
        1
    } else {
        1 << (arity - 6)
    }
}

#[inline]
pub(crate) fn valid_mask(arity: usize) -> u64 {
    if arity >= 6 {
        u64::MAX
    } else {
        (1u64 << (1u32 << arity)) - 1
    }
}

fn check_arity(arity: usize) -> Result<()> {
    if arity > MAX_EXACT_ARITY {
        return Err(Error::ArityCap {
            arity,
            cap: MAX_EXACT_ARITY,
            what: "table storage",
        });
    }
    Ok(())
}

impl TruthTable {
    pub fn constant(arity: usize, value: bool) -> Result<Self> {
        check_arity(arity)?;
        let fill = if value { u64::MAX } else { 0 };
        let mut words = vec![fill; word_count(arity)];
        words[0] &= valid_mask(arity);
        Ok(TruthTable { arity, words })
    }

    /// Builds a table by evaluating `f` on every row index.
    pub fn from_fn(arity: usize, mut f: impl FnMut(usize) -> bool) -> Result<Self> {
        check_arity(arity)?;
        let mut words = vec![0u64; word_count(arity)];
        for row in 0..1usize << arity {
            if f(row) {
                words[row >> 6] |= 1 << (row & 63);
            }
        }
        Ok(TruthTable { arity, words })
    }

    /// The projection `x_variable` as a table on `arity` variables.
    pub fn variable(arity: usize, variable: usize) -> Result<Self> {
        check_arity(arity)?;
        if variable == 0 || variable > arity {
            return Err(Error::VariableOutOfRange { variable, arity });
        }
        let pos = variable - 1;
        let words = (0..word_count(arity))
            .map(|j| {
                let w = if pos < 6 {
                    !LOW_HALF[pos]
                } else if j >> (pos - 6) & 1 == 1 {
                    u64::MAX
                } else {
                    0
                };
                w & valid_mask(arity)
            })
            .collect();
        Ok(TruthTable { arity, words })
    }

    /// Table whose row `i` is bit `i` of `id`. Requires `arity <= 6`.
    pub fn from_id(arity: usize, id: u64) -> Result<Self> {
        if arity > 6 {
            return Err(Error::ArityCap {
                arity,
                cap: 6,
                what: "integer function ids",
            });
        }
        if arity < 6 && id & !valid_mask(arity) != 0 {
            return Err(Error::InvalidArgument(format!(
                "function id {id} does not fit arity {arity}"
            )));
        }
        Ok(TruthTable {
            arity,
            words: vec![id],
        })
    }

    /// Inverse of [`TruthTable::from_id`]; `None` above arity 6.
    pub fn id(&self) -> Option<u64> {
        (self.arity <= 6).then(|| self.words[0])
    }

    pub(crate) fn from_words(arity: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), word_count(arity));
        TruthTable { arity, words }
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of rows, `2^arity`.
    #[inline]
    pub fn len(&self) -> usize {
        1 << self.arity
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, row: usize) -> bool {
        debug_assert!(row < self.len());
        self.words[row >> 6] >> (row & 63) & 1 == 1
    }

    /// Evaluates on an input vector given as `[x1, x2, ..]`.
    pub fn eval(&self, input: &[bool]) -> Result<bool> {
        if input.len() != self.arity {
            return Err(Error::LengthMismatch {
                arity: self.arity,
                expected: self.arity,
                actual: input.len(),
            });
        }
        Ok(self.get(row_index(input)))
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Pointwise complement.
    pub fn complement(&self) -> TruthTable {
        let mask = valid_mask(self.arity);
        let words = self.words.iter().map(|w| !w & mask).collect();
        TruthTable::from_words(self.arity, words)
    }

    /// `Some(b)` when every row equals `b`.
    pub fn is_constant(&self) -> Option<bool> {
        if self.words.iter().all(|&w| w == 0) {
            Some(false)
        } else if self.complement().words.iter().all(|&w| w == 0) {
            Some(true)
        } else {
            None
        }
    }

    /// The table of `x -> f(x XOR e_variable)` for a 0-based position.
    pub(crate) fn flip(&self, pos: usize) -> TruthTable {
        let words = if pos < 6 {
            let shift = 1u32 << pos;
            let lo = LOW_HALF[pos];
            self.words
                .iter()
                .map(|&w| ((w & lo) << shift) | ((w >> shift) & lo))
                .collect()
        } else {
            let stride = 1usize << (pos - 6);
            (0..self.words.len())
                .map(|j| self.words[j ^ stride])
                .collect()
        };
        TruthTable::from_words(self.arity, words)
    }

    /// `x -> f(x with x_pos := value)`, still on the full arity.
    pub(crate) fn cofactor(&self, pos: usize, value: bool) -> TruthTable {
        let words = if pos < 6 {
            let shift = 1u32 << pos;
            let lo = LOW_HALF[pos];
            self.words
                .iter()
                .map(|&w| {
                    if value {
                        let hi = w & !lo;
                        hi | (hi >> shift)
                    } else {
                        let low = w & lo;
                        low | (low << shift)
                    }
                })
                .collect()
        } else {
            let bit = 1usize << (pos - 6);
            (0..self.words.len())
                .map(|j| {
                    if value {
                        self.words[j | bit]
                    } else {
                        self.words[j & !bit]
                    }
                })
                .collect()
        };
        TruthTable::from_words(self.arity, words)
    }

    /// True when the function does not depend on the 0-based position.
    pub(crate) fn is_independent_of(&self, pos: usize) -> bool {
        self.flip(pos) == *self
    }

    /// Variables `i` (1-based) with some `x` such that `f(x) != f(x XOR e_i)`.
    pub fn essential_variables(&self) -> Vec<usize> {
        (0..self.arity)
            .filter(|&pos| !self.is_independent_of(pos))
            .map(|pos| pos + 1)
            .collect()
    }

    /// Subfunction on the variables not fixed by `assignment`, which keep their
    /// relative order and are renumbered `x1, x2, ..`.
    pub fn restrict(&self, assignment: &PartialAssignment) -> Result<TruthTable> {
        let mut fixed_mask = 0usize;
        let mut fixed_value = 0usize;
        for &(variable, value) in assignment.pairs() {
            if variable > self.arity {
                return Err(Error::VariableOutOfRange {
                    variable,
                    arity: self.arity,
                });
            }
            fixed_mask |= 1 << (variable - 1);
            if value {
                fixed_value |= 1 << (variable - 1);
            }
        }
        let free: Vec<usize> = (0..self.arity)
            .filter(|pos| fixed_mask >> pos & 1 == 0)
            .collect();
        TruthTable::from_fn(free.len(), |row| {
            let mut x = fixed_value;
            for (j, &pos) in free.iter().enumerate() {
                if row >> j & 1 == 1 {
                    x |= 1 << pos;
                }
            }
            self.get(x)
        })
    }

    pub fn from_bit_string(arity: usize, bits: &str) -> Result<Self> {
        check_arity(arity)?;
        let expected = 1usize << arity;
        let chars: Vec<char> = bits.trim().chars().collect();
        if chars.len() != expected {
            return Err(Error::LengthMismatch {
                arity,
                expected,
                actual: chars.len(),
            });
        }
        let mut out = vec![false; expected];
        for (position, (slot, c)) in out.iter_mut().zip(&chars).enumerate() {
            *slot = match c {
                '0' => false,
                '1' => true,
                &found => return Err(Error::InvalidCharacter { found, position }),
            };
        }
        TruthTable::from_fn(arity, |row| out[row])
    }

    /// Parses the hex form: the bit stream `f(0) .. f(2^n - 1)` left-padded with
    /// zeros to a multiple of four and read four bits per digit.
    pub fn from_hex_string(arity: usize, hex: &str) -> Result<Self> {
        check_arity(arity)?;
        let bits = 1usize << arity;
        let digits = bits.div_ceil(4);
        let hex = hex.trim();
        let hex = hex
            .strip_prefix("0x")
            .or_else(|| hex.strip_prefix("0X"))
            .unwrap_or(hex);
        let chars: Vec<char> = hex.chars().collect();
        if chars.len() != digits {
            return Err(Error::LengthMismatch {
                arity,
                expected: bits,
                actual: chars.len() * 4,
            });
        }
        let mut stream = Vec::with_capacity(digits * 4);
        for (position, &c) in chars.iter().enumerate() {
            let nibble = c
                .to_digit(16)
                .ok_or(Error::InvalidCharacter { found: c, position })?;
            stream.extend((0..4).rev().map(|b| nibble >> b & 1 == 1));
        }
        let pad = digits * 4 - bits;
        if stream[..pad].iter().any(|&b| b) {
            return Err(Error::NonZeroPadding);
        }
        TruthTable::from_fn(arity, |row| stream[pad + row])
    }

    /// `f(0) f(1) .. f(2^n - 1)` as `'0'`/`'1'` characters.
    pub fn to_bit_string(&self) -> String {
        (0..self.len())
            .map(|row| if self.get(row) { '1' } else { '0' })
            .collect()
    }

    pub fn to_hex_string(&self) -> String {
        let bits = self.len();
        let digits = bits.div_ceil(4);
        let pad = digits * 4 - bits;
        let bit_at = |i: usize| i >= pad && self.get(i - pad);
        (0..digits)
            .map(|d| {
                let nibble = (0..4).fold(0u32, |acc, b| acc << 1 | bit_at(d * 4 + b) as u32);
                char::from_digit(nibble, 16).unwrap()
            })
            .collect()
    }

    pub(crate) fn and(&self, other: &TruthTable) -> TruthTable {
        self.zip_words(other, |a, b| a & b)
    }

    pub(crate) fn or(&self, other: &TruthTable) -> TruthTable {
        self.zip_words(other, |a, b| a | b)
    }

    pub(crate) fn xor(&self, other: &TruthTable) -> TruthTable {
        self.zip_words(other, |a, b| a ^ b)
    }

    fn zip_words(&self, other: &TruthTable, op: impl Fn(u64, u64) -> u64) -> TruthTable {
        debug_assert_eq!(self.arity, other.arity);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| op(a, b))
            .collect();
        TruthTable::from_words(self.arity, words)
    }
}

/// Row index of an input vector `[x1, x2, ..]`.
pub fn row_index(input: &[bool]) -> usize {
    input
        .iter()
        .enumerate()
        .fold(0, |acc, (j, &b)| acc | (b as usize) << j)
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TruthTable({}, \"{}\")",
            self.arity,
            self.to_bit_string()
        )
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

/// A set of `(variable, value)` pairs with distinct 1-based variables, kept
/// sorted by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PartialAssignment {
    pairs: Vec<(usize, bool)>,
}

impl PartialAssignment {
    pub fn new(pairs: impl IntoIterator<Item = (usize, bool)>) -> Result<Self> {
        let mut pairs: Vec<(usize, bool)> = pairs.into_iter().collect();
        pairs.sort_unstable_by_key(|p| p.0);
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateVariable(w[0].0));
            }
        }
        if let Some(&(0, _)) = pairs.first() {
            return Err(Error::VariableOutOfRange {
                variable: 0,
                arity: 0,
            });
        }
        Ok(PartialAssignment { pairs })
    }

    pub fn pairs(&self) -> &[(usize, bool)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pa(pairs: &[(usize, bool)]) -> PartialAssignment {
        PartialAssignment::new(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn from_bits_examples() {
        let and2 = TruthTable::from_bit_string(2, "0001").unwrap();
        assert!(and2.get(3) && !and2.get(0) && !and2.get(1) && !and2.get(2));

        let id = TruthTable::from_bit_string(1, "01").unwrap();
        assert_eq!(id, TruthTable::variable(1, 1).unwrap());

        let parity = TruthTable::from_bit_string(3, "01101001").unwrap();
        for i in 0..8usize {
            assert_eq!(parity.get(i), i.count_ones() % 2 == 1);
        }
    }

    #[test]
    fn from_bits_errors() {
        assert_eq!(
            TruthTable::from_bit_string(2, "001"),
            Err(Error::LengthMismatch {
                arity: 2,
                expected: 4,
                actual: 3
            })
        );
        assert!(matches!(
            TruthTable::from_bit_string(2, "0021"),
            Err(Error::InvalidCharacter {
                found: '2',
                position: 2
            })
        ));
        assert!(matches!(
            TruthTable::from_hex_string(3, "6g"),
            Err(Error::InvalidCharacter { found: 'g', .. })
        ));
        assert!(matches!(
            TruthTable::from_bit_string(21, ""),
            Err(Error::ArityCap { .. })
        ));
    }

    #[test]
    fn hex_layout() {
        let parity = TruthTable::from_bit_string(3, "01101001").unwrap();
        assert_eq!(parity.to_hex_string(), "69");
        let and2 = TruthTable::from_hex_string(2, "1").unwrap();
        assert_eq!(and2.to_bit_string(), "0001");
        // arity 1: stream "01" is padded to "0001"
        let id = TruthTable::from_hex_string(1, "1").unwrap();
        assert_eq!(id.to_bit_string(), "01");
        assert_eq!(
            TruthTable::from_hex_string(1, "4"),
            Err(Error::NonZeroPadding)
        );
        assert_eq!(
            TruthTable::from_hex_string(0, "1").unwrap().to_bit_string(),
            "1"
        );
    }

    #[test]
    fn restrict_examples() {
        let and2 = TruthTable::from_bit_string(2, "0001").unwrap();
        let r = and2.restrict(&pa(&[(1, false)])).unwrap();
        assert_eq!(r.arity(), 1);
        assert_eq!(r.is_constant(), Some(false));

        let parity3 = TruthTable::from_bit_string(3, "01101001").unwrap();
        let r = parity3.restrict(&pa(&[(3, true)])).unwrap();
        assert_eq!(r.to_bit_string(), "1001");

        let err = and2.restrict(&pa(&[(3, true)]));
        assert_eq!(
            err,
            Err(Error::VariableOutOfRange {
                variable: 3,
                arity: 2
            })
        );
    }

    #[test]
    fn restrict_to_arity_zero() {
        let and2 = TruthTable::from_bit_string(2, "0001").unwrap();
        let r = and2.restrict(&pa(&[(1, true), (2, true)])).unwrap();
        assert_eq!(r.arity(), 0);
        assert_eq!(r.is_constant(), Some(true));
    }

    #[test]
    fn constants_and_essentials() {
        assert_eq!(
            TruthTable::constant(3, true).unwrap().is_constant(),
            Some(true)
        );
        assert_eq!(
            TruthTable::constant(7, false).unwrap().is_constant(),
            Some(false)
        );
        let and2 = TruthTable::from_bit_string(2, "0001").unwrap();
        assert_eq!(and2.is_constant(), None);

        let x1 = TruthTable::from_bit_string(2, "0101").unwrap();
        assert_eq!(x1.essential_variables(), vec![1]);
        assert!(TruthTable::constant(4, false)
            .unwrap()
            .essential_variables()
            .is_empty());
        let and3 = TruthTable::from_fn(3, |i| i == 7).unwrap();
        assert_eq!(and3.essential_variables(), vec![1, 2, 3]);
    }

    #[test]
    fn wide_tables_flip_and_cofactor() {
        // x7 lives in the word index for arity 8
        let f = TruthTable::from_fn(8, |i| (i >> 6 & 1 == 1) ^ (i & 1 == 1)).unwrap();
        assert_eq!(f.essential_variables(), vec![1, 7]);
        let c = f.cofactor(6, true);
        for i in 0..256usize {
            assert_eq!(c.get(i), f.get(i | 64));
        }
        let g = f.flip(6);
        for i in 0..256usize {
            assert_eq!(g.get(i), f.get(i ^ 64));
        }
    }

    #[test]
    fn duplicate_assignment_rejected() {
        assert_eq!(
            PartialAssignment::new([(2, true), (2, false)]),
            Err(Error::DuplicateVariable(2))
        );
    }

    #[test]
    fn ids_round_trip() {
        let f = TruthTable::from_id(4, 0x8000).unwrap();
        assert_eq!(f, TruthTable::from_fn(4, |i| i == 15).unwrap());
        assert_eq!(f.id(), Some(0x8000));
        assert!(TruthTable::from_id(2, 0x10).is_err());
    }
}
