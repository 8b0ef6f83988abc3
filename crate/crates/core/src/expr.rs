//! Boolean expression language.
//!
//! ```text
//! expr    = xor_expr { ("|" | "OR") xor_expr } ;
//! xor_expr = and_expr { ("^" | "XOR") and_expr } ;
//! and_expr = unary { ("&" | "AND") unary } ;
//! unary   = ("!" | "~" | "NOT") unary | primary ;
//! primary = "0" | "1" | identifier | "(" expr ")" ;
//! ```
//!
//! Keywords are case-insensitive. If every identifier has the form `x<k>`
//! (`k >= 1`) it names variable `k`; otherwise identifiers are numbered
//! `x1, x2, ..` in order of first appearance.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::table::MAX_EXACT_ARITY;
use crate::{Error as CrateError, TruthTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at column {column}")]
pub struct ParseError {
    pub message: String,
    /// 1-based character column.
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// 1-based variable index.
    Var(usize),
    Const(bool),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Xor(Vec<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    And,
    Xor,
    Or,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Lit(bool),
    Not,
    Bin(Op),
    LParen,
    RParen,
}

fn lex(input: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '!' | '~' => Tok::Not,
            '&' => Tok::Bin(Op::And),
            '|' => Tok::Bin(Op::Or),
            '^' => Tok::Bin(Op::Xor),
            '0' | '1' if !chars.get(i + 1).is_some_and(|d| d.is_ascii_alphanumeric()) => {
                Tok::Lit(c == '1')
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let tok = match word.to_ascii_uppercase().as_str() {
                    "AND" => Tok::Bin(Op::And),
                    "OR" => Tok::Bin(Op::Or),
                    "XOR" => Tok::Bin(Op::Xor),
                    "NOT" => Tok::Not,
                    _ => Tok::Ident(word),
                };
                out.push((tok, column));
                continue;
            }
            other => {
                return Err(ParseError {
                    message: format!("unknown token {other:?}"),
                    column,
                })
            }
        };
        out.push((tok, column));
        i += 1;
    }
    Ok(out)
}

fn x_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix(['x', 'X'])?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok().filter(|&k| k >= 1)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_column: usize,
    names: HashMap<String, usize>,
    numbered: bool,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |t| t.1)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            message: message.into(),
            column: self.column(),
        }
    }

    fn binary(&mut self, op: Op) -> Result<Expr, ParseError> {
        let mut operands = vec![self.operand(op)?];
        while self.peek() == Some(&Tok::Bin(op)) {
            self.pos += 1;
            operands.push(self.operand(op)?);
        }
        Ok(if operands.len() == 1 {
            operands.pop().unwrap()
        } else {
            match op {
                Op::And => Expr::And(operands),
                Op::Xor => Expr::Xor(operands),
                Op::Or => Expr::Or(operands),
            }
        })
    }

    fn operand(&mut self, op: Op) -> Result<Expr, ParseError> {
        match op {
            Op::Or => self.binary(Op::Xor),
            Op::Xor => self.binary(Op::And),
            Op::And => self.unary(),
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&Tok::Not) {
            self.pos += 1;
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error("unexpected end of input"));
        };
        match tok {
            Tok::Lit(b) => {
                self.pos += 1;
                Ok(Expr::Const(b))
            }
            Tok::Ident(name) => {
                self.pos += 1;
                let index = if self.numbered {
                    x_index(&name).unwrap()
                } else {
                    let next = self.names.len() + 1;
                    *self.names.entry(name).or_insert(next)
                };
                Ok(Expr::Var(index))
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.binary(Op::Or)?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Tok::RParen => Err(self.error("unexpected ')'")),
            Tok::Not | Tok::Bin(_) => Err(self.error("expected an operand")),
        }
    }
}

/// Parses `text`. With `declared_arity`, variable indices above it are
/// rejected.
pub fn parse(text: &str, declared_arity: Option<usize>) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let numbered = toks.iter().all(|(t, _)| match t {
        Tok::Ident(name) => x_index(name).is_some(),
        _ => true,
    });
    let mut parser = Parser {
        toks,
        pos: 0,
        end_column: text.chars().count() + 1,
        names: HashMap::new(),
        numbered,
    };
    let expr = parser.binary(Op::Or)?;
    if parser.pos != parser.toks.len() {
        return Err(parser.error("unexpected token"));
    }
    if let Some(n) = declared_arity {
        let max = expr.max_variable();
        if max > n {
            return Err(ParseError {
                message: format!("variable x{max} exceeds declared arity {n}"),
                column: 1,
            });
        }
    }
    Ok(expr)
}

impl Expr {
    /// Highest variable index referenced, 0 if none.
    pub fn max_variable(&self) -> usize {
        match self {
            Expr::Var(i) => *i,
            Expr::Const(_) => 0,
            Expr::Not(e) => e.max_variable(),
            Expr::And(es) | Expr::Or(es) | Expr::Xor(es) => {
                es.iter().map(Expr::max_variable).max().unwrap_or(0)
            }
        }
    }

    /// Evaluates over all `2^arity` rows, word-parallel.
    pub fn to_table(&self, arity: usize) -> Result<TruthTable, CrateError> {
        let max = self.max_variable();
        if max > arity {
            return Err(CrateError::VariableOutOfRange {
                variable: max,
                arity,
            });
        }
        if arity > MAX_EXACT_ARITY {
            return Err(CrateError::ArityCap {
                arity,
                cap: MAX_EXACT_ARITY,
                what: "table storage",
            });
        }
        Ok(self.eval_table(arity))
    }

    fn eval_table(&self, arity: usize) -> TruthTable {
        match self {
            Expr::Var(i) => TruthTable::variable(arity, *i).unwrap(),
            Expr::Const(b) => TruthTable::constant(arity, *b).unwrap(),
            Expr::Not(e) => e.eval_table(arity).complement(),
            Expr::And(es) => fold(es, arity, TruthTable::and),
            Expr::Or(es) => fold(es, arity, TruthTable::or),
            Expr::Xor(es) => fold(es, arity, TruthTable::xor),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Or(_) => 1,
            Expr::Xor(_) => 2,
            Expr::And(_) => 3,
            _ => 4,
        }
    }
}

fn fold(es: &[Expr], arity: usize, op: fn(&TruthTable, &TruthTable) -> TruthTable) -> TruthTable {
    let mut acc = es[0].eval_table(arity);
    for e in &es[1..] {
        acc = op(&acc, &e.eval_table(arity));
    }
    acc
}

/// Parses and tabulates; the arity defaults to the highest variable used.
pub fn parse_table(text: &str, arity: Option<usize>) -> Result<TruthTable, CrateError> {
    let expr = parse(text, arity)?;
    let n = arity.unwrap_or_else(|| expr.max_variable());
    expr.to_table(n)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (children, sym) = match self {
            Expr::Var(i) => return write!(f, "x{i}"),
            Expr::Const(b) => return write!(f, "{}", *b as u8),
            Expr::Not(e) => {
                return if e.precedence() < 4 {
                    write!(f, "!({e})")
                } else {
                    write!(f, "!{e}")
                }
            }
            Expr::And(es) => (es, " & "),
            Expr::Xor(es) => (es, " ^ "),
            Expr::Or(es) => (es, " | "),
        };
        let prec = self.precedence();
        for (i, child) in children.iter().enumerate() {
            if i > 0 {
                f.write_str(sym)?;
            }
            // same-precedence children are parenthesized so they stay nested
            if child.precedence() <= prec {
                write!(f, "({child})")?;
            } else {
                write!(f, "{child}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, FunctionKind};

    fn v(i: usize) -> Expr {
        Expr::Var(i)
    }

    #[test]
    fn precedence_and_grouping() {
        assert_eq!(
            parse("x1 & (x2 | x3)", None).unwrap(),
            Expr::And(vec![v(1), Expr::Or(vec![v(2), v(3)])])
        );
        assert_eq!(
            parse("x1 & x2 | x3", None).unwrap(),
            Expr::Or(vec![Expr::And(vec![v(1), v(2)]), v(3)])
        );
        assert_eq!(
            parse("x1 ^ x2 ^ x3 ^ 1", None).unwrap(),
            Expr::Xor(vec![v(1), v(2), v(3), Expr::Const(true)])
        );
        assert_eq!(
            parse("a | b ^ c & d", None).unwrap(),
            Expr::Or(vec![
                v(1),
                Expr::Xor(vec![v(2), Expr::And(vec![v(3), v(4)])])
            ])
        );
        assert_eq!(
            parse("NOT a and not B", None).unwrap(),
            Expr::And(vec![Expr::Not(Box::new(v(1))), Expr::Not(Box::new(v(2)))])
        );
    }

    #[test]
    fn bare_names_by_first_appearance() {
        assert_eq!(
            parse("b & a | b", None).unwrap(),
            Expr::Or(vec![Expr::And(vec![v(1), v(2)]), v(1)])
        );
        // mixing x-names with other names falls back to appearance order
        assert_eq!(parse("y & x3", None).unwrap(), Expr::And(vec![v(1), v(2)]));
    }

    #[test]
    fn tables() {
        assert_eq!(
            parse_table("x1 & x2", Some(2)).unwrap().to_bit_string(),
            "0001"
        );
        assert_eq!(
            parse_table("x1 ^ x2", Some(2)).unwrap().to_bit_string(),
            "0110"
        );
        assert_eq!(
            parse_table("x1 ^ x2 ^ x3 ^ x4 ^ x5 ^ x6 ^ x7 ^ x8", None).unwrap(),
            generate(&FunctionKind::Parity(false), 8).unwrap()
        );
        // unused declared variables are non-essential
        let f = parse_table("x1", Some(3)).unwrap();
        assert_eq!(f.essential_variables(), vec![1]);
        assert_eq!(parse_table("1", Some(0)).unwrap().to_bit_string(), "1");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("x1 & (x2 | x3", None).unwrap_err();
        assert_eq!(e.column, 14);
        let e = parse("x1 $ x2", None).unwrap_err();
        assert_eq!(e.column, 4);
        assert!(e.message.contains("unknown token"));
        let e = parse("x1 & & x2", None).unwrap_err();
        assert_eq!(e.column, 6);
        let e = parse("x1 x2", None).unwrap_err();
        assert_eq!(e.column, 4);
        assert!(parse("x5 & x1", Some(4)).is_err());
        assert!(matches!(
            parse("x3", None).unwrap().to_table(2),
            Err(CrateError::VariableOutOfRange {
                variable: 3,
                arity: 2
            })
        ));
    }

    #[test]
    fn display_round_trip() {
        for text in [
            "x1 & (x2 | x3)",
            "!(x1 ^ x2) | x3 & !x4",
            "(x1 & x2) & x3",
            "!!x1",
        ] {
            let e = parse(text, None).unwrap();
            assert_eq!(parse(&e.to_string(), None).unwrap(), e, "{text}");
        }
    }
}
