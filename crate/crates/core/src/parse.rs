//! Parser for the concrete syntax of formulas, sequents and proof scripts.
//!
//! ```text
//! formula  := iff
//! iff      := imp ( "<->" iff )?
//! imp      := or ( "->" imp )?
//! or       := and ( "|" and )*
//! and      := unary ( "&" unary )*
//! unary    := "~" unary | ("forall" | "exists") VAR "." formula
//!           | "(" "lam" VAR "." formula ")" lamarg
//!           | "(" formula ")" | term "=" term | PRED ( "(" term,* ")" )?
//! lamarg   := term | "(" "iota" VAR "." formula ")" | "iota" VAR "." unary
//! term     := VAR | "#" NAME | "$" NAME
//! sequent  := formula,* "=>" formula,*
//! ```

use std::collections::BTreeMap;
use std::fmt;

use crate::proof::{Annotations, ProofNode, Rule};
use crate::syntax::{validate_formula, validate_sequent, Formula, LamArg, Sequent, Term};

/// Input text together with where it came from, for error messages.
#[derive(Clone, Debug)]
pub struct SourceText {
    pub text: String,
    pub origin: String,
}

impl SourceText {
    pub fn new(text: impl Into<String>, origin: impl Into<String>) -> SourceText {
        SourceText {
            text: text.into(),
            origin: origin.into(),
        }
    }

    pub fn stdin(text: impl Into<String>) -> SourceText {
        SourceText::new(text, "<stdin>")
    }
}

impl From<&str> for SourceText {
    fn from(s: &str) -> SourceText {
        SourceText::stdin(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{origin}:{line}:{col}: {message}")]
pub struct ParseError {
    pub origin: String,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Param(String),
    Const(String),
    Keyword(String),
    Num(usize),
    LParen,
    RParen,
    Comma,
    Dot,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DArrow,
    Turnstile,
    Equals,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Param(s) => write!(f, "`#{s}`"),
            Tok::Const(s) => write!(f, "`${s}`"),
            Tok::Keyword(s) => write!(f, "`:{s}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Tilde => f.write_str("`~`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::DArrow => f.write_str("`<->`"),
            Tok::Turnstile => f.write_str("`=>`"),
            Tok::Equals => f.write_str("`=`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const RESERVED: [&str; 4] = ["forall", "exists", "lam", "iota"];

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

struct Lexer<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    origin: &'a str,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &str, origin: &'a str) -> Lexer<'a> {
        Lexer {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
            origin,
        }
    }

    fn err(&self, line: usize, col: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            origin: self.origin.to_string(),
            line,
            col,
            message: message.into(),
        }
    }

    fn peek(&self, off: usize) -> Option<char> {
        self.chars.get(self.pos + off).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek(0)?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn word(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek(0).filter(|c| is_ident_char(*c)) {
            s.push(c);
            self.bump();
        }
        s
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        loop {
            while self.peek(0).is_some_and(char::is_whitespace) {
                self.bump();
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek(0) else {
                out.push(Spanned {
                    tok: Tok::Eof,
                    line,
                    col,
                });
                return Ok(out);
            };
            let tok = match c {
                '(' => {
                    self.bump();
                    Tok::LParen
                }
                ')' => {
                    self.bump();
                    Tok::RParen
                }
                ',' => {
                    self.bump();
                    Tok::Comma
                }
                '.' => {
                    self.bump();
                    Tok::Dot
                }
                '~' => {
                    self.bump();
                    Tok::Tilde
                }
                '&' => {
                    self.bump();
                    Tok::Amp
                }
                '|' => {
                    self.bump();
                    Tok::Bar
                }
                '-' if self.peek(1) == Some('>') => {
                    self.bump();
                    self.bump();
                    Tok::Arrow
                }
                '<' if self.peek(1) == Some('-') && self.peek(2) == Some('>') => {
                    self.bump();
                    self.bump();
                    self.bump();
                    Tok::DArrow
                }
                '=' if self.peek(1) == Some('>') => {
                    self.bump();
                    self.bump();
                    Tok::Turnstile
                }
                '=' => {
                    self.bump();
                    Tok::Equals
                }
                '#' | '$' | ':' => {
                    self.bump();
                    if !self.peek(0).is_some_and(is_ident_start) {
                        return Err(self.err(line, col, format!("expected a name after `{c}`")));
                    }
                    let w = self.word();
                    match c {
                        '#' => Tok::Param(w),
                        '$' => Tok::Const(w),
                        _ => Tok::Keyword(w),
                    }
                }
                c if c.is_ascii_digit() => {
                    let w = self.word();
                    Tok::Num(w.parse().map_err(|_| self.err(line, col, "bad number"))?)
                }
                c if is_ident_start(c) => Tok::Ident(self.word()),
                other => return Err(self.err(line, col, format!("unexpected character `{other}`"))),
            };
            out.push(Spanned { tok, line, col });
        }
    }
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    origin: &'a str,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn new(src: &'a SourceText) -> PResult<Parser<'a>> {
        Ok(Parser {
            toks: Lexer::new(&src.text, &src.origin).tokens()?,
            pos: 0,
            origin: &src.origin,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, off: usize) -> &Tok {
        let i = (self.pos + off).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, message: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            origin: self.origin.to_string(),
            line: s.line,
            col: s.col,
            message: message.into(),
        }
    }

    fn expect(&mut self, want: Tok) -> PResult<()> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(self.err_here(format!("expected {want}, found {}", self.peek())))
        }
    }

    fn is_ident(&self, off: usize, word: &str) -> bool {
        matches!(self.peek_at(off), Tok::Ident(w) if w == word)
    }

    fn var_name(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(w) if !RESERVED.contains(&w.as_str()) => {
                self.next();
                Ok(w)
            }
            t => Err(self.err_here(format!("expected a variable name, found {t}"))),
        }
    }

    fn term(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Param(p) => {
                self.next();
                Ok(Term::Param(p))
            }
            Tok::Const(c) => {
                self.next();
                Ok(Term::Const(c))
            }
            Tok::Ident(w) if w == "iota" => {
                Err(self.err_here("iota outside lambda-atom argument"))
            }
            Tok::Ident(w) if !RESERVED.contains(&w.as_str()) => {
                self.next();
                Ok(Term::Var(w))
            }
            Tok::LParen if self.is_ident(1, "iota") => {
                Err(self.err_here("iota outside lambda-atom argument"))
            }
            t => Err(self.err_here(format!("expected a term, found {t}"))),
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.imp()?;
        if *self.peek() == Tok::DArrow {
            self.next();
            let rhs = self.formula()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> PResult<Formula> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.next();
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> PResult<Formula> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Bar {
            self.next();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> PResult<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.next();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Formula> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.next();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Ident(w) if w == "forall" || w == "exists" => {
                self.next();
                let v = self.var_name()?;
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                Ok(if w == "forall" {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                })
            }
            Tok::Ident(w) if w == "iota" => Err(self.err_here("iota outside lambda-atom argument")),
            Tok::Ident(w) if w == "lam" => {
                Err(self.err_here("a lambda abstract must be written `(lam x. BODY) ARG`"))
            }
            Tok::LParen if self.is_ident(1, "lam") => self.lambda_atom(),
            Tok::LParen if self.is_ident(1, "iota") => {
                Err(self.err_here("iota outside lambda-atom argument"))
            }
            Tok::LParen => {
                self.next();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(p) if *self.peek_at(1) != Tok::Equals => {
                self.next();
                let mut args = Vec::new();
                if *self.peek() == Tok::LParen {
                    self.next();
                    if *self.peek() != Tok::RParen {
                        loop {
                            args.push(self.term()?);
                            if *self.peek() == Tok::Comma {
                                self.next();
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect(Tok::RParen)?;
                }
                if *self.peek() == Tok::Equals {
                    return Err(self.err_here("only terms may stand on either side of `=`"));
                }
                Ok(Formula::Pred(p, args))
            }
            Tok::Ident(_) | Tok::Param(_) | Tok::Const(_) => {
                let lhs = self.term()?;
                self.expect(Tok::Equals)?;
                let rhs = self.term()?;
                Ok(Formula::eq(lhs, rhs))
            }
            t => Err(self.err_here(format!("expected a formula, found {t}"))),
        }
    }

    fn lambda_atom(&mut self) -> PResult<Formula> {
        self.expect(Tok::LParen)?;
        self.next(); // lam
        let v = self.var_name()?;
        self.expect(Tok::Dot)?;
        let body = self.formula()?;
        self.expect(Tok::RParen)?;
        let arg = if *self.peek() == Tok::LParen && self.is_ident(1, "iota") {
            self.next();
            self.next();
            let w = self.var_name()?;
            self.expect(Tok::Dot)?;
            let ib = self.formula()?;
            self.expect(Tok::RParen)?;
            LamArg::Iota(w, Box::new(ib))
        } else if self.is_ident(0, "iota") {
            self.next();
            let w = self.var_name()?;
            self.expect(Tok::Dot)?;
            LamArg::Iota(w, Box::new(self.unary()?))
        } else {
            LamArg::Term(self.term()?)
        };
        Ok(Formula::Lambda(v, Box::new(body), arg))
    }

    fn formula_list(&mut self, stop: &[Tok]) -> PResult<Vec<Formula>> {
        let mut out = Vec::new();
        if stop.contains(self.peek()) {
            return Ok(out);
        }
        loop {
            out.push(self.formula()?);
            if *self.peek() == Tok::Comma {
                self.next();
            } else {
                return Ok(out);
            }
        }
    }

    fn sequent(&mut self) -> PResult<Sequent> {
        let ante = self.formula_list(&[Tok::Turnstile])?;
        self.expect(Tok::Turnstile)?;
        let succ = self.formula_list(&[Tok::Eof, Tok::RParen])?;
        Ok(Sequent::new(ante, succ))
    }

    fn end(&mut self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.err_here(format!("unexpected {} after end of input", self.peek())))
        }
    }

    fn paren_list(&mut self) -> PResult<Vec<Formula>> {
        self.expect(Tok::LParen)?;
        let fs = self.formula_list(&[Tok::RParen])?;
        self.expect(Tok::RParen)?;
        Ok(fs)
    }

    fn proof(&mut self) -> PResult<ProofNode> {
        self.expect(Tok::LParen)?;
        let (line, col) = (self.toks[self.pos].line, self.toks[self.pos].col);
        let rule: Rule = match self.next() {
            Tok::Ident(w) => w.parse().map_err(|m: String| self.err_at(line, col, m))?,
            t => return Err(self.err_at(line, col, format!("expected a rule name, found {t}"))),
        };
        let mut ann = Annotations::none();
        let mut conclusion = None;
        let mut premises = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::RParen => {
                    self.next();
                    break;
                }
                Tok::Keyword(k) => {
                    self.next();
                    match k.as_str() {
                        "term" => ann.terms.push(self.annotation_term("term")?),
                        "eigen" => {
                            let t = self.annotation_term("eigen")?;
                            if !matches!(t, Term::Param(_)) {
                                return Err(self.err_here("malformed annotation: :eigen takes a parameter"));
                            }
                            if ann.eigen.replace(t).is_some() {
                                return Err(self.err_here("malformed annotation: repeated :eigen"));
                            }
                        }
                        "at" => match self.next() {
                            Tok::Num(n) => ann.at = Some(n),
                            t => {
                                return Err(self.err_here(format!(
                                    "malformed annotation: :at expects an index, found {t}"
                                )))
                            }
                        },
                        other => {
                            return Err(self.err_here(format!("malformed annotation: unknown keyword :{other}")))
                        }
                    }
                }
                Tok::LParen if self.is_ident(1, "seq") => {
                    self.next();
                    self.next();
                    let ante = self.paren_list()?;
                    let succ = self.paren_list()?;
                    self.expect(Tok::RParen)?;
                    if conclusion.replace(Sequent::new(ante, succ)).is_some() {
                        return Err(self.err_here("a node has exactly one (seq ...) conclusion"));
                    }
                }
                Tok::LParen => premises.push(self.proof()?),
                t => return Err(self.err_here(format!("unexpected {t} in proof node"))),
            }
        }
        let conclusion =
            conclusion.ok_or_else(|| self.err_at(line, col, format!("{rule} node lacks a (seq ...) conclusion")))?;
        if premises.len() != rule.arity() {
            return Err(self.err_at(
                line,
                col,
                format!(
                    "rule {rule} takes {} premise(s), found {}",
                    rule.arity(),
                    premises.len()
                ),
            ));
        }
        validate_sequent(&conclusion).map_err(|v| self.err_at(line, col, v.to_string()))?;
        Ok(ProofNode::new(rule, conclusion, ann, premises))
    }

    fn annotation_term(&mut self, key: &str) -> PResult<Term> {
        match self.peek() {
            Tok::Param(_) | Tok::Const(_) => self.term(),
            t => Err(self.err_here(format!(
                "malformed annotation: :{key} expects a parameter or constant, found {t}"
            ))),
        }
    }

    fn err_at(&self, line: usize, col: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            origin: self.origin.to_string(),
            line,
            col,
            message: message.into(),
        }
    }
}

/// Parses a single formula. Free variables are allowed; arities must agree.
pub fn parse_formula(src: impl Into<SourceText>) -> Result<Formula, ParseError> {
    let src = src.into();
    let mut p = Parser::new(&src)?;
    let f = p.formula()?;
    p.end()?;
    validate_formula(&f, &mut BTreeMap::new()).map_err(|v| ParseError {
        origin: src.origin.clone(),
        line: 1,
        col: 1,
        message: v.to_string(),
    })?;
    Ok(f)
}

/// Parses `A, B => C, D`. Every variable must be bound.
pub fn parse_sequent(src: impl Into<SourceText>) -> Result<Sequent, ParseError> {
    let src = src.into();
    let mut p = Parser::new(&src)?;
    let s = p.sequent()?;
    p.end()?;
    validate_sequent(&s).map_err(|v| ParseError {
        origin: src.origin.clone(),
        line: 1,
        col: 1,
        message: v.to_string(),
    })?;
    Ok(s)
}

/// Parses a proof script. Rule arities and annotation syntax are checked;
/// rule correctness is left to the kernel.
pub fn parse_proof(src: impl Into<SourceText>) -> Result<ProofNode, ParseError> {
    let src = src.into();
    let mut p = Parser::new(&src)?;
    let node = p.proof()?;
    p.end()?;
    Ok(node)
}

/// One entry of a `.rlf` file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Formula(Formula),
    Sequent(Sequent),
}

/// Parses a `.rlf` file: one formula or sequent per line. Blank lines and
/// lines starting with `#` followed by a non-name character are comments.
pub fn parse_items(src: impl Into<SourceText>) -> Result<Vec<Item>, ParseError> {
    let src = src.into();
    let mut out = Vec::new();
    for (i, line) in src.text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || is_comment(trimmed) {
            continue;
        }
        let one = SourceText::new(line, src.origin.clone());
        let relocate = |mut e: ParseError| {
            e.line = i + 1;
            e
        };
        let item = if line.contains("=>") {
            Item::Sequent(parse_sequent(one).map_err(relocate)?)
        } else {
            Item::Formula(parse_formula(one).map_err(relocate)?)
        };
        out.push(item);
    }
    Ok(out)
}

fn is_comment(line: &str) -> bool {
    let mut cs = line.chars();
    cs.next() == Some('#') && !cs.next().is_some_and(is_ident_start)
}
