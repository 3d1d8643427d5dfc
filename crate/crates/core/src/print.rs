//! Pretty-printing of terms, formulas, sequents and proof scripts.
//!
//! Output is parenthesized only where precedence requires, and parses back
//! to an alpha-equal value.

use std::fmt::{self, Write};

use crate::proof::ProofNode;
use crate::syntax::{Formula, LamArg, Sequent, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Glyphs {
    pub forall: &'static str,
    pub exists: &'static str,
    pub lam: &'static str,
    pub iota: &'static str,
    pub not: &'static str,
    pub and: &'static str,
    pub or: &'static str,
    pub imp: &'static str,
    pub iff: &'static str,
    pub turnstile: &'static str,
}

pub const ASCII: Glyphs = Glyphs {
    forall: "forall ",
    exists: "exists ",
    lam: "lam ",
    iota: "iota ",
    not: "~",
    and: "&",
    or: "|",
    imp: "->",
    iff: "<->",
    turnstile: "=>",
};

pub const UNICODE: Glyphs = Glyphs {
    forall: "∀",
    exists: "∃",
    lam: "λ",
    iota: "ι",
    not: "¬",
    and: "∧",
    or: "∨",
    imp: "→",
    iff: "↔",
    turnstile: "⇒",
};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Param(p) => write!(f, "#{p}"),
            Term::Const(c) => write!(f, "${c}"),
        }
    }
}

const BINDER: u8 = 0;
const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Forall(..) | Formula::Exists(..) => BINDER,
        Formula::Iff(..) => IFF,
        Formula::Imp(..) => IMP,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

pub fn write_formula(out: &mut String, f: &Formula, g: &Glyphs) {
    write_prec(out, f, BINDER, g);
}

fn write_prec(out: &mut String, f: &Formula, min: u8, g: &Glyphs) {
    if level(f) < min {
        out.push('(');
        write_prec(out, f, BINDER, g);
        out.push(')');
        return;
    }
    let binary = |out: &mut String, a: &Formula, op: &str, b: &Formula, l: u8, r: u8| {
        write_prec(out, a, l, g);
        let _ = write!(out, " {op} ");
        write_prec(out, b, r, g);
    };
    match f {
        Formula::Pred(p, args) => {
            out.push_str(p);
            if !args.is_empty() {
                out.push('(');
                for (i, t) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    let _ = write!(out, "{t}");
                }
                out.push(')');
            }
        }
        Formula::Eq(a, b) => {
            let _ = write!(out, "{a} = {b}");
        }
        Formula::Not(a) => {
            out.push_str(g.not);
            write_prec(out, a, UNARY, g);
        }
        Formula::And(a, b) => binary(out, a, g.and, b, AND, UNARY),
        Formula::Or(a, b) => binary(out, a, g.or, b, OR, AND),
        Formula::Imp(a, b) => binary(out, a, g.imp, b, OR, IMP),
        Formula::Iff(a, b) => binary(out, a, g.iff, b, IMP, IFF),
        Formula::Forall(v, a) => {
            let _ = write!(out, "{}{v}. ", g.forall);
            write_prec(out, a, BINDER, g);
        }
        Formula::Exists(v, a) => {
            let _ = write!(out, "{}{v}. ", g.exists);
            write_prec(out, a, BINDER, g);
        }
        Formula::Lambda(v, body, arg) => {
            let _ = write!(out, "({}{v}. ", g.lam);
            write_prec(out, body, BINDER, g);
            out.push_str(") ");
            match arg {
                LamArg::Term(t) => {
                    let _ = write!(out, "{t}");
                }
                LamArg::Iota(w, ib) => {
                    let _ = write!(out, "({}{w}. ", g.iota);
                    write_prec(out, ib, BINDER, g);
                    out.push(')');
                }
            }
        }
    }
}

pub fn formula_to_string(f: &Formula, g: &Glyphs) -> String {
    let mut s = String::new();
    write_formula(&mut s, f, g);
    s
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&formula_to_string(self, &ASCII))
    }
}

fn write_list(out: &mut String, fs: &[Formula], g: &Glyphs) {
    for (i, f) in fs.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_formula(out, f, g);
    }
}

pub fn sequent_to_string(s: &Sequent, g: &Glyphs) -> String {
    let mut out = String::new();
    write_list(&mut out, &s.ante, g);
    if !s.ante.is_empty() {
        out.push(' ');
    }
    out.push_str(g.turnstile);
    if !s.succ.is_empty() {
        out.push(' ');
    }
    write_list(&mut out, &s.succ, g);
    out
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&sequent_to_string(self, &ASCII))
    }
}

/// Renders a proof script as an indented s-expression, one node per line.
pub fn proof_to_string(p: &ProofNode, g: &Glyphs) -> String {
    let mut out = String::new();
    write_proof(&mut out, p, 0, g);
    out.push('\n');
    out
}

fn write_proof(out: &mut String, p: &ProofNode, indent: usize, g: &Glyphs) {
    for _ in 0..indent {
        out.push_str("  ");
    }
    out.push('(');
    out.push_str(p.rule.name());
    for t in &p.ann.terms {
        let _ = write!(out, " :term {t}");
    }
    if let Some(a) = &p.ann.eigen {
        let _ = write!(out, " :eigen {a}");
    }
    if let Some(i) = p.ann.at {
        let _ = write!(out, " :at {i}");
    }
    out.push_str(" (seq (");
    write_list(out, &p.conclusion.ante, g);
    out.push_str(") (");
    write_list(out, &p.conclusion.succ, g);
    out.push_str("))");
    for q in &p.premises {
        out.push('\n');
        write_proof(out, q, indent + 1, g);
    }
    out.push(')');
}

impl fmt::Display for ProofNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(proof_to_string(self, &ASCII).trim_end())
    }
}
