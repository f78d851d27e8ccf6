//! Text format for two-party states (`ket-v1`).
//!
//! ```text
//! state   := ['+'|'-'] term (('+' | '-') term)*
//! term    := [scalar ['*']] factor TENSOR factor
//! factor  := ket | '(' linear ')'
//! linear  := ['+'|'-'] sterm (('+' | '-') sterm)*
//! sterm   := [scalar ['*']] ket
//! ket     := '|' LABEL '>'
//! scalar  := real | real? 'i' | real '/' real | real '/sqrt(' real ')'
//!          | 'sqrt(' real ')' | '(' ['-'] real ('+'|'-') real? 'i' ')'
//! TENSOR  := '(x)' | 'x' | '⊗'
//! ```
//!
//! Kets left of the tensor belong to subsystem A (Latin), kets right of it to
//! subsystem B (Greek). Basis states are numbered in order of first appearance.
//! Parsing does not normalize; the state's norm is recorded instead.

mod format;
mod lexer;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub use format::{format_scalar, format_state};
use lexer::{tokenize, Tok, Token};

use crate::error::Result;
use crate::numlin::{re, Matrix, C64};
use crate::schmidt::BipartitePureState;

/// Version tag of the expression grammar.
pub const GRAMMAR_VERSION: &str = "ket-v1";

#[derive(Debug, Clone, PartialEq, Error)]
#[error("parse error at column {}: {kind}", .position + 1)]
pub struct ParseError {
    /// Zero-based character offset.
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    Empty,
    UnexpectedChar(char),
    InvalidNumber(String),
    Expected { expected: String, found: String },
    UnknownWord(String),
    MissingTensor,
    LabelOnBothSides(String),
    ZeroDenominator,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Empty => write!(f, "empty expression"),
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::InvalidNumber(s) => write!(f, "invalid number `{s}`"),
            ParseErrorKind::Expected { expected, found } => write!(f, "expected {expected}, found {found}"),
            ParseErrorKind::UnknownWord(w) => write!(f, "unknown word `{w}` outside a ket"),
            ParseErrorKind::MissingTensor => write!(f, "term has no tensor operator `(x)`"),
            ParseErrorKind::LabelOnBothSides(l) => {
                write!(f, "label `{l}` appears on both sides of the tensor product")
            }
            ParseErrorKind::ZeroDenominator => write!(f, "division by zero in coefficient"),
        }
    }
}

/// A ket label and where it was written.
#[derive(Debug, Clone, PartialEq)]
pub struct Label {
    pub name: String,
    pub position: usize,
}

/// A linear combination of kets of one subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct Factor {
    pub kets: Vec<(C64, Label)>,
}

/// `coefficient · latin ⊗ greek`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coefficient: C64,
    pub latin: Factor,
    pub greek: Factor,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KetExpression {
    pub terms: Vec<Term>,
}

/// Parses `text` into its syntax tree.
pub fn parse_expression(text: &str) -> std::result::Result<KetExpression, ParseError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(ParseError {
            position: 0,
            kind: ParseErrorKind::Empty,
        });
    }
    let mut p = Parser {
        toks: &tokens,
        at: 0,
        end: text.chars().count(),
    };
    let expr = p.state()?;
    Ok(expr)
}

/// Parses `text` and distributes the tensor products into an amplitude matrix.
pub fn parse_state(text: &str) -> Result<BipartitePureState> {
    let expr = parse_expression(text)?;
    Ok(assemble(&expr)?)
}

/// Builds the (unnormalized) state described by `expr`.
pub fn assemble(expr: &KetExpression) -> std::result::Result<BipartitePureState, ParseError> {
    let mut latin = Basis::default();
    let mut greek = Basis::default();
    for term in &expr.terms {
        for (_, label) in &term.latin.kets {
            latin.register(label, &greek)?;
        }
        for (_, label) in &term.greek.kets {
            greek.register(label, &latin)?;
        }
    }

    let mut amps = Matrix::zeros(latin.labels.len(), greek.labels.len());
    for term in &expr.terms {
        for (a, l) in &term.latin.kets {
            let n = latin.index[&l.name];
            for (b, g) in &term.greek.kets {
                let nu = greek.index[&g.name];
                amps[(n, nu)] += term.coefficient * a * b;
            }
        }
    }
    if !amps.is_finite() {
        return Err(ParseError {
            position: 0,
            kind: ParseErrorKind::InvalidNumber("coefficient overflows".into()),
        });
    }
    Ok(BipartitePureState::new(latin.labels, greek.labels, amps)
        .expect("labels are unique and the shape matches by construction"))
}

#[derive(Default)]
struct Basis {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl Basis {
    fn register(&mut self, label: &Label, other: &Basis) -> std::result::Result<(), ParseError> {
        if other.index.contains_key(&label.name) {
            return Err(ParseError {
                position: label.position,
                kind: ParseErrorKind::LabelOnBothSides(label.name.clone()),
            });
        }
        if !self.index.contains_key(&label.name) {
            self.index.insert(label.name.clone(), self.labels.len());
            self.labels.push(label.name.clone());
        }
        Ok(())
    }
}

type PResult<T> = std::result::Result<T, ParseError>;

struct Parser<'a> {
    toks: &'a [Token],
    at: usize,
    /// Character length of the input, reported for errors at end of input.
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.tok)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.toks.get(self.at + offset).map(|t| &t.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.pos)
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError {
            position: self.pos(),
            kind: ParseErrorKind::Expected {
                expected: expected.into(),
                found: self.peek().map_or_else(|| "end of input".into(), Tok::describe),
            },
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn sign(&mut self) -> Option<f64> {
        match self.peek() {
            Some(Tok::Plus) => {
                self.at += 1;
                Some(1.0)
            }
            Some(Tok::Minus) => {
                self.at += 1;
                Some(-1.0)
            }
            _ => None,
        }
    }

    fn state(&mut self) -> PResult<KetExpression> {
        let mut terms = Vec::new();
        let mut sign = self.sign().unwrap_or(1.0);
        loop {
            let mut term = self.term()?;
            term.coefficient *= sign;
            terms.push(term);
            match self.sign() {
                Some(s) => sign = s,
                None if self.peek().is_none() => break,
                None => return Err(self.error("`+`, `-` or end of input")),
            }
        }
        Ok(KetExpression { terms })
    }

    fn term(&mut self) -> PResult<Term> {
        let coefficient = if self.scalar_ahead() {
            let c = self.scalar()?;
            if self.peek() == Some(&Tok::Star) {
                self.at += 1;
            }
            c
        } else {
            re(1.0)
        };
        let latin = self.factor()?;
        if !self.tensor() {
            return Err(match self.peek() {
                None | Some(Tok::Plus | Tok::Minus) => ParseError {
                    position: self.pos(),
                    kind: ParseErrorKind::MissingTensor,
                },
                _ => self.error("tensor operator `(x)`"),
            });
        }
        let greek = self.factor()?;
        if self.tensor() {
            return Err(self.error("a single tensor operator per term"));
        }
        Ok(Term {
            coefficient,
            latin,
            greek,
        })
    }

    /// Consumes `⊗`, `x` or `(x)` if present.
    fn tensor(&mut self) -> bool {
        let is_x = |t: Option<&Tok>| matches!(t, Some(Tok::Word(w)) if w == "x");
        match self.peek() {
            Some(Tok::Tensor) => {
                self.at += 1;
                true
            }
            t if is_x(t) => {
                self.at += 1;
                true
            }
            Some(Tok::LParen)
                if (is_x(self.peek_at(1)) || self.peek_at(1) == Some(&Tok::Tensor))
                    && self.peek_at(2) == Some(&Tok::RParen) =>
            {
                self.at += 3;
                true
            }
            _ => false,
        }
    }

    /// Whether the next tokens start a scalar rather than a factor.
    fn scalar_ahead(&self) -> bool {
        match self.peek() {
            Some(Tok::Number(_)) => true,
            Some(Tok::Word(w)) => w == "i" || w == "sqrt",
            Some(Tok::LParen) => {
                // A parenthesized group is a coefficient unless it holds a ket.
                let mut depth = 0usize;
                for t in &self.toks[self.at..] {
                    match t.tok {
                        Tok::LParen => depth += 1,
                        Tok::RParen => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        Tok::Bar | Tok::Tensor => return false,
                        Tok::Word(ref w) if w == "x" => return false,
                        _ => {}
                    }
                }
                true
            }
            _ => false,
        }
    }

    fn factor(&mut self) -> PResult<Factor> {
        match self.peek() {
            Some(Tok::Bar) => {
                let label = self.ket()?;
                Ok(Factor {
                    kets: vec![(re(1.0), label)],
                })
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let kets = self.linear()?;
                self.expect(Tok::RParen, "`)` closing the ket combination")?;
                Ok(Factor { kets })
            }
            Some(Tok::Word(w)) if w != "x" => Err(ParseError {
                position: self.pos(),
                kind: ParseErrorKind::UnknownWord(w.clone()),
            }),
            _ => Err(self.error("a ket `|label>` or `(`")),
        }
    }

    fn linear(&mut self) -> PResult<Vec<(C64, Label)>> {
        let mut kets = Vec::new();
        let mut sign = self.sign().unwrap_or(1.0);
        loop {
            let coefficient = if self.peek() == Some(&Tok::Bar) {
                re(1.0)
            } else {
                let c = self.scalar()?;
                if self.peek() == Some(&Tok::Star) {
                    self.at += 1;
                }
                c
            };
            let label = self.ket()?;
            kets.push((coefficient * sign, label));
            match self.sign() {
                Some(s) => sign = s,
                None => break,
            }
        }
        Ok(kets)
    }

    fn ket(&mut self) -> PResult<Label> {
        self.expect(Tok::Bar, "`|` opening a ket")?;
        let position = self.pos();
        let name = match self.peek() {
            Some(Tok::Word(w)) => w.clone(),
            _ => return Err(self.error("a ket label")),
        };
        self.at += 1;
        self.expect(Tok::Close, "`>` closing the ket")?;
        Ok(Label { name, position })
    }

    fn number(&mut self) -> PResult<f64> {
        match self.peek() {
            Some(&Tok::Number(x)) => {
                self.at += 1;
                Ok(x)
            }
            _ => Err(self.error("a number")),
        }
    }

    fn word(&mut self, w: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Word(x)) if x == w) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn sqrt_call(&mut self) -> PResult<f64> {
        self.expect(Tok::LParen, "`(` after sqrt")?;
        let x = self.number()?;
        self.expect(Tok::RParen, "`)` closing sqrt")?;
        Ok(x.sqrt())
    }

    fn scalar(&mut self) -> PResult<C64> {
        let start = self.pos();
        match self.peek().cloned() {
            Some(Tok::Number(x)) => {
                self.at += 1;
                if self.word("i") {
                    return Ok(C64::new(0.0, x));
                }
                if self.peek() == Some(&Tok::Slash) {
                    self.at += 1;
                    let denom = if self.word("sqrt") { self.sqrt_call()? } else { self.number()? };
                    if denom == 0.0 {
                        return Err(ParseError {
                            position: start,
                            kind: ParseErrorKind::ZeroDenominator,
                        });
                    }
                    return Ok(re(x / denom));
                }
                Ok(re(x))
            }
            Some(Tok::Word(w)) if w == "i" => {
                self.at += 1;
                Ok(C64::i())
            }
            Some(Tok::Word(w)) if w == "sqrt" => {
                self.at += 1;
                Ok(re(self.sqrt_call()?))
            }
            Some(Tok::Word(w)) => Err(ParseError {
                position: start,
                kind: ParseErrorKind::UnknownWord(w),
            }),
            Some(Tok::LParen) => {
                self.at += 1;
                let real_sign = if self.peek() == Some(&Tok::Minus) {
                    self.at += 1;
                    -1.0
                } else {
                    1.0
                };
                let real = real_sign * self.number()?;
                let imag_sign = self.sign().ok_or_else(|| self.error("`+` or `-` in a complex number"))?;
                let imag = match self.peek() {
                    Some(Tok::Number(_)) => self.number()?,
                    _ => 1.0,
                };
                if !self.word("i") {
                    return Err(self.error("`i` ending the imaginary part"));
                }
                self.expect(Tok::RParen, "`)` closing the complex number")?;
                Ok(C64::new(real, imag_sign * imag))
            }
            _ => Err(self.error("a coefficient or a ket")),
        }
    }
}
