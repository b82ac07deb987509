//! Recursive-descent parser for sentences and probability assertions.
//!
//! ```text
//! sentence  := iff
//! iff       := implies ("<->" iff)?
//! implies   := or ("->" implies)?
//! or        := and ("|" and)*
//! and       := unary ("&" unary)*
//! unary     := "~" unary | primary
//! primary   := "true" | "false" | IDENT | "(" sentence ")"
//! assertion := core | "~" "(" core ")" | "~" core
//! core      := "P" "(" sentence ("|" sentence)? ")" ">" NUMBER
//! ```
//!
//! Inside `P(...)` the first top-level `|` is the conditioning bar, so a
//! disjunction on either side of it has to be parenthesised.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::assertion::ProbAssertion;
use crate::rational::parse_rational;
use crate::sentence::{Atom, Sentence};
use crate::world::Probability;

const MAX_NESTING: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    Unexpected { found: String, expected: Vec<&'static str> },
    ReservedWord(String),
    NestedProbability,
    AmbiguousBar,
    BadNumber(String),
    BoundOutOfRange(String),
    TooDeep,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: ", self.offset)?;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::Unexpected { found, expected } => {
                write!(f, "expected {}, found {found}", expected.join(" or "))
            }
            ParseErrorKind::ReservedWord(w) => write!(f, "`{w}` is reserved and cannot be used as an atom"),
            ParseErrorKind::NestedProbability => {
                f.write_str("probability operator inside a sentence; assertions cannot nest")
            }
            ParseErrorKind::AmbiguousBar => {
                f.write_str("more than one top-level `|` inside P(...); parenthesise the disjunction")
            }
            ParseErrorKind::BadNumber(n) => write!(f, "`{n}` is not a decimal or fraction"),
            ParseErrorKind::BoundOutOfRange(n) => write!(f, "bound {n} is outside [0, 1]"),
            ParseErrorKind::TooDeep => write!(f, "nesting deeper than {MAX_NESTING} levels"),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Prob,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Gt,
    Number(String),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Prob => "`P`".into(),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Number(n) => format!("`{n}`"),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = text[i..].chars().next().expect("in bounds");
        let start = i;
        let simple = |tok| Token { tok, offset: start };
        match c {
            c if c.is_whitespace() => {
                i += c.len_utf8();
                continue;
            }
            '~' => out.push(simple(Tok::Not)),
            '&' => out.push(simple(Tok::And)),
            '|' => out.push(simple(Tok::Or)),
            '(' => out.push(simple(Tok::LParen)),
            ')' => out.push(simple(Tok::RParen)),
            '>' => out.push(simple(Tok::Gt)),
            '-' if text[i..].starts_with("->") => {
                out.push(simple(Tok::Implies));
                i += 2;
                continue;
            }
            '<' if text[i..].starts_with("<->") => {
                out.push(simple(Tok::Iff));
                i += 3;
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let end = text[i..]
                    .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                    .map_or(text.len(), |n| i + n);
                let word = &text[i..end];
                let tok = match word {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "P" => Tok::Prob,
                    _ => Tok::Ident(word.to_string()),
                };
                out.push(Token { tok, offset: start });
                i = end;
                continue;
            }
            c if c.is_ascii_digit() || c == '.' || c == '-' => {
                let end = text[i + 1..]
                    .find(|c: char| !(c.is_ascii_alphanumeric() || c == '.' || c == '/' || c == '_'))
                    .map_or(text.len(), |n| i + 1 + n);
                out.push(Token { tok: Tok::Number(text[i..end].to_string()), offset: start });
                i = end;
                continue;
            }
            other => {
                return Err(ParseError { offset: start, kind: ParseErrorKind::UnexpectedChar(other) });
            }
        }
        i += c.len_utf8();
    }
    out.push(Token { tok: Tok::End, offset: text.len() });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    /// Tokens at or beyond `end` are invisible; the parser sees `Tok::End`.
    end: usize,
    depth: usize,
}

const SENTENCE_START: &[&str] = &["`~`", "`(`", "an atom", "`true`", "`false`"];

impl Parser {
    fn new(tokens: Vec<Token>) -> Self {
        let end = tokens.len() - 1;
        Parser { tokens, pos: 0, end, depth: 0 }
    }

    fn peek(&self) -> &Tok {
        if self.pos >= self.end {
            &Tok::End
        } else {
            &self.tokens[self.pos].tok
        }
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos.min(self.tokens.len() - 1)].offset
    }

    fn found(&self) -> String {
        self.tokens[self.pos.min(self.tokens.len() - 1)].tok.describe()
    }

    fn unexpected<T>(&self, expected: &[&'static str]) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.offset(),
            kind: ParseErrorKind::Unexpected { found: self.found(), expected: expected.to_vec() },
        })
    }

    fn error<T>(&self, kind: ParseErrorKind) -> Result<T, ParseError> {
        Err(ParseError { offset: self.offset(), kind })
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.unexpected(&[name])
        }
    }

    fn expect_end(&self, expected: &[&'static str]) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            self.unexpected(expected)
        }
    }

    fn sentence(&mut self) -> Result<Sentence, ParseError> {
        self.right_chain(Tok::Iff, Parser::implication, Sentence::iff)
    }

    fn implication(&mut self) -> Result<Sentence, ParseError> {
        self.right_chain(Tok::Implies, Parser::disjunction, Sentence::implies)
    }

    fn right_chain(
        &mut self,
        op: Tok,
        operand: fn(&mut Parser) -> Result<Sentence, ParseError>,
        join: fn(Sentence, Sentence) -> Sentence,
    ) -> Result<Sentence, ParseError> {
        let mut operands = vec![operand(self)?];
        while self.eat(&op) {
            operands.push(operand(self)?);
        }
        let mut acc = operands.pop().expect("at least one operand");
        while let Some(left) = operands.pop() {
            acc = join(left, acc);
        }
        Ok(acc)
    }

    fn disjunction(&mut self) -> Result<Sentence, ParseError> {
        let mut acc = self.conjunction()?;
        while self.eat(&Tok::Or) {
            acc = Sentence::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Sentence, ParseError> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::And) {
            acc = Sentence::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Sentence, ParseError> {
        let mut negations = 0usize;
        while self.eat(&Tok::Not) {
            negations += 1;
        }
        let mut s = self.primary()?;
        for _ in 0..negations {
            s = Sentence::not(s);
        }
        Ok(s)
    }

    fn primary(&mut self) -> Result<Sentence, ParseError> {
        match self.peek().clone() {
            Tok::True => {
                self.pos += 1;
                Ok(Sentence::Const(true))
            }
            Tok::False => {
                self.pos += 1;
                Ok(Sentence::Const(false))
            }
            Tok::Ident(name) => {
                self.pos += 1;
                Ok(Sentence::Atom(Atom::new(name).expect("lexer only yields identifiers")))
            }
            Tok::LParen => {
                if self.depth >= MAX_NESTING {
                    return self.error(ParseErrorKind::TooDeep);
                }
                self.pos += 1;
                self.depth += 1;
                let inner = self.sentence()?;
                self.depth -= 1;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Prob => {
                let nested = self.pos + 1 < self.end && self.tokens[self.pos + 1].tok == Tok::LParen;
                if nested {
                    self.error(ParseErrorKind::NestedProbability)
                } else {
                    self.error(ParseErrorKind::ReservedWord("P".into()))
                }
            }
            _ => self.unexpected(SENTENCE_START),
        }
    }

    /// Parses a complete sentence occupying tokens `[from, to)`.
    fn sentence_in(&mut self, from: usize, to: usize) -> Result<Sentence, ParseError> {
        let saved_end = self.end;
        self.pos = from;
        self.end = to;
        let s = self.sentence()?;
        self.expect_end(&["an operator", "`)`"])?;
        self.end = saved_end;
        Ok(s)
    }

    fn assertion_core(&mut self) -> Result<(Sentence, Sentence, Probability), ParseError> {
        self.expect(Tok::Prob, "`P`")?;
        self.expect(Tok::LParen, "`(`")?;
        let open = self.pos;
        let mut depth = 0usize;
        let mut bars = Vec::new();
        let mut close = None;
        for i in open..self.end {
            match self.tokens[i].tok {
                Tok::LParen => depth += 1,
                Tok::RParen if depth == 0 => {
                    close = Some(i);
                    break;
                }
                Tok::RParen => depth -= 1,
                Tok::Or if depth == 0 => bars.push(i),
                _ => {}
            }
        }
        let Some(close) = close else {
            self.pos = self.end;
            return self.unexpected(&["`)`"]);
        };
        if bars.len() > 1 {
            self.pos = bars[1];
            return self.error(ParseErrorKind::AmbiguousBar);
        }
        let (sentence, evidence) = match bars.first() {
            Some(&bar) => (self.sentence_in(open, bar)?, self.sentence_in(bar + 1, close)?),
            None => (self.sentence_in(open, close)?, Sentence::Const(true)),
        };
        self.pos = close + 1;
        self.expect(Tok::Gt, "`>`")?;
        let Tok::Number(text) = self.peek().clone() else {
            return self.unexpected(&["a number"]);
        };
        let bound = match parse_rational(&text) {
            Ok(r) => r,
            Err(_) => return self.error(ParseErrorKind::BadNumber(text)),
        };
        if bound < BigRational::zero() || bound > BigRational::one() {
            return self.error(ParseErrorKind::BoundOutOfRange(text));
        }
        self.pos += 1;
        Ok((sentence, evidence, Probability::new(bound).expect("range checked")))
    }
}

/// Parses a propositional sentence.
pub fn parse_sentence(text: &str) -> Result<Sentence, ParseError> {
    let mut p = Parser::new(lex(text)?);
    let s = p.sentence()?;
    p.expect_end(&["an operator"])?;
    Ok(s)
}

/// Parses `P(S | e) > b`, optionally negated as `~(P(S | e) > b)`.
pub fn parse_assertion(text: &str) -> Result<ProbAssertion, ParseError> {
    let mut p = Parser::new(lex(text)?);
    let negated = p.eat(&Tok::Not);
    let wrapped = negated && p.eat(&Tok::LParen);
    let (sentence, evidence, bound) = p.assertion_core()?;
    if wrapped {
        p.expect(Tok::RParen, "`)`")?;
    }
    p.expect_end(&[])?;
    Ok(ProbAssertion::new(sentence, evidence, bound, negated))
}
