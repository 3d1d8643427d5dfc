//! Terms, formulas and sequents, with substitution and alpha-equivalence.
//!
//! Definite descriptions (`iota y. phi`) have no constructor of their own in
//! [`Formula`] or [`Term`]; they only exist as [`LamArg::Iota`], the argument
//! slot of a lambda atom.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

/// An individual term: a variable, a parameter or a constant.
///
/// The three sorts are separate namespaces, so `Var("a")` and `Param("a")`
/// are different terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Param(String),
    Const(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn param(name: impl Into<String>) -> Term {
        Term::Param(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn is_var(&self, name: &str) -> bool {
        matches!(self, Term::Var(v) if v == name)
    }

    pub fn as_param(&self) -> Option<&str> {
        match self {
            Term::Param(p) => Some(p),
            _ => None,
        }
    }

    /// Closed terms may appear in sequents and as rule instantiations.
    pub fn is_closed(&self) -> bool {
        !matches!(self, Term::Var(_))
    }
}

/// The argument of a lambda atom: an ordinary term or a definite description.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LamArg {
    Term(Term),
    /// `iota var. body`
    Iota(String, Box<Formula>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Pred(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    /// `(lam var. body) arg`
    Lambda(String, Box<Formula>, LamArg),
}

impl Formula {
    pub fn pred(name: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Pred(name.into(), args)
    }

    pub fn eq(lhs: Term, rhs: Term) -> Formula {
        Formula::Eq(lhs, rhs)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(body))
    }

    /// `(lam var. body) t`
    pub fn lam_term(var: impl Into<String>, body: Formula, arg: Term) -> Formula {
        Formula::Lambda(var.into(), Box::new(body), LamArg::Term(arg))
    }

    /// `(lam var. body) (iota ivar. ibody)`
    pub fn lam_iota(
        var: impl Into<String>,
        body: Formula,
        ivar: impl Into<String>,
        ibody: Formula,
    ) -> Formula {
        Formula::Lambda(
            var.into(),
            Box::new(body),
            LamArg::Iota(ivar.into(), Box::new(ibody)),
        )
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Pred(..) | Formula::Eq(..))
    }

    /// Number of logical constants: connectives, quantifiers, and the
    /// lambda and iota operators. Atoms and identities count zero.
    pub fn degree(&self) -> usize {
        match self {
            Formula::Pred(..) | Formula::Eq(..) => 0,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.degree(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                1 + a.degree() + b.degree()
            }
            Formula::Lambda(_, body, LamArg::Term(_)) => 1 + body.degree(),
            Formula::Lambda(_, body, LamArg::Iota(_, ib)) => 2 + body.degree() + ib.degree(),
        }
    }

    /// Nesting depth of the syntax tree; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Pred(..) | Formula::Eq(..) => 0,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                1 + a.depth().max(b.depth())
            }
            Formula::Lambda(_, body, LamArg::Term(_)) => 1 + body.depth(),
            Formula::Lambda(_, body, LamArg::Iota(_, ib)) => 1 + body.depth().max(ib.depth()),
        }
    }

    /// True when the formula contains no lambda atom.
    pub fn is_lambda_free(&self) -> bool {
        match self {
            Formula::Pred(..) | Formula::Eq(..) => true,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.is_lambda_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.is_lambda_free() && b.is_lambda_free()
            }
            Formula::Lambda(..) => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        collect_free_vars(self, &mut bound, &mut out);
        out
    }

    pub fn has_free_var(&self, x: &str) -> bool {
        has_free(self, x)
    }

    pub fn params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| {
            if let Term::Param(p) = t {
                out.insert(p.clone());
            }
        });
        out
    }

    pub fn consts(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| {
            if let Term::Const(c) = t {
                out.insert(c.clone());
            }
        });
        out
    }

    pub fn has_param(&self, p: &str) -> bool {
        let mut found = false;
        self.visit_terms(&mut |t| {
            if matches!(t, Term::Param(q) if q == p) {
                found = true;
            }
        });
        found
    }

    /// Every name used anywhere, bound or free, of every sort.
    pub fn all_names(&self, out: &mut HashSet<String>) {
        self.visit_terms(&mut |t| match t {
            Term::Var(n) | Term::Param(n) | Term::Const(n) => {
                out.insert(n.clone());
            }
        });
        self.visit_binders(&mut |v| {
            out.insert(v.to_string());
        });
    }

    /// Calls `f` on every term occurrence, including bound variables.
    pub fn visit_terms(&self, f: &mut impl FnMut(&Term)) {
        match self {
            Formula::Pred(_, args) => args.iter().for_each(|t| f(t)),
            Formula::Eq(a, b) => {
                f(a);
                f(b);
            }
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.visit_terms(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.visit_terms(f);
                b.visit_terms(f);
            }
            Formula::Lambda(_, body, arg) => {
                body.visit_terms(f);
                match arg {
                    LamArg::Term(t) => f(t),
                    LamArg::Iota(_, ib) => ib.visit_terms(f),
                }
            }
        }
    }

    fn visit_binders(&self, f: &mut impl FnMut(&str)) {
        match self {
            Formula::Pred(..) | Formula::Eq(..) => {}
            Formula::Not(a) => a.visit_binders(f),
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                f(v);
                a.visit_binders(f);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.visit_binders(f);
                b.visit_binders(f);
            }
            Formula::Lambda(v, body, arg) => {
                f(v);
                body.visit_binders(f);
                if let LamArg::Iota(w, ib) = arg {
                    f(w);
                    ib.visit_binders(f);
                }
            }
        }
    }

    /// Predicate symbols with their arities, in first-occurrence order.
    pub fn predicates(&self, out: &mut Vec<(String, usize)>) {
        match self {
            Formula::Pred(p, args) => {
                let key = (p.clone(), args.len());
                if !out.contains(&key) {
                    out.push(key);
                }
            }
            Formula::Eq(..) => {}
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.predicates(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
                a.predicates(out);
                b.predicates(out);
            }
            Formula::Lambda(_, body, arg) => {
                body.predicates(out);
                if let LamArg::Iota(_, ib) = arg {
                    ib.predicates(out);
                }
            }
        }
    }

    /// Replaces every occurrence of parameter `from` by `to`.
    pub fn rename_param(&self, from: &str, to: &Term) -> Formula {
        self.map_terms(&|t| match t {
            Term::Param(p) if p == from => to.clone(),
            other => other.clone(),
        })
    }

    fn map_terms(&self, f: &impl Fn(&Term) -> Term) -> Formula {
        match self {
            Formula::Pred(p, args) => Formula::Pred(p.clone(), args.iter().map(f).collect()),
            Formula::Eq(a, b) => Formula::Eq(f(a), f(b)),
            Formula::Not(a) => Formula::not(a.map_terms(f)),
            Formula::And(a, b) => Formula::and(a.map_terms(f), b.map_terms(f)),
            Formula::Or(a, b) => Formula::or(a.map_terms(f), b.map_terms(f)),
            Formula::Imp(a, b) => Formula::imp(a.map_terms(f), b.map_terms(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_terms(f), b.map_terms(f)),
            Formula::Forall(v, a) => Formula::forall(v.clone(), a.map_terms(f)),
            Formula::Exists(v, a) => Formula::exists(v.clone(), a.map_terms(f)),
            Formula::Lambda(v, body, arg) => Formula::Lambda(
                v.clone(),
                Box::new(body.map_terms(f)),
                match arg {
                    LamArg::Term(t) => LamArg::Term(f(t)),
                    LamArg::Iota(w, ib) => LamArg::Iota(w.clone(), Box::new(ib.map_terms(f))),
                },
            ),
        }
    }

    /// Renames every bound variable to a name determined by its binding
    /// depth. Two formulas are alpha-equal iff their canonical forms are
    /// syntactically equal.
    pub fn canonical(&self) -> Formula {
        let mut env = Vec::new();
        canon(self, &mut env)
    }
}

/// Prefix for canonical bound-variable names; never a valid identifier.
const CANON_PREFIX: char = '%';

fn canon_name(level: usize) -> String {
    format!("{CANON_PREFIX}{level}")
}

fn canon_term(t: &Term, env: &[(String, String)]) -> Term {
    match t {
        Term::Var(v) => match env.iter().rev().find(|(orig, _)| orig == v) {
            Some((_, c)) => Term::Var(c.clone()),
            None => t.clone(),
        },
        _ => t.clone(),
    }
}

fn canon(f: &Formula, env: &mut Vec<(String, String)>) -> Formula {
    let bind = |v: &String, body: &Formula, env: &mut Vec<(String, String)>| {
        let c = canon_name(env.len());
        env.push((v.clone(), c.clone()));
        let b = canon(body, env);
        env.pop();
        (c, b)
    };
    match f {
        Formula::Pred(p, args) => {
            Formula::Pred(p.clone(), args.iter().map(|t| canon_term(t, env)).collect())
        }
        Formula::Eq(a, b) => Formula::Eq(canon_term(a, env), canon_term(b, env)),
        Formula::Not(a) => Formula::not(canon(a, env)),
        Formula::And(a, b) => Formula::and(canon(a, env), canon(b, env)),
        Formula::Or(a, b) => Formula::or(canon(a, env), canon(b, env)),
        Formula::Imp(a, b) => Formula::imp(canon(a, env), canon(b, env)),
        Formula::Iff(a, b) => Formula::iff(canon(a, env), canon(b, env)),
        Formula::Forall(v, a) => {
            let (c, b) = bind(v, a, env);
            Formula::Forall(c, Box::new(b))
        }
        Formula::Exists(v, a) => {
            let (c, b) = bind(v, a, env);
            Formula::Exists(c, Box::new(b))
        }
        Formula::Lambda(v, body, arg) => {
            let arg = match arg {
                LamArg::Term(t) => LamArg::Term(canon_term(t, env)),
                LamArg::Iota(w, ib) => {
                    let (c, b) = bind(w, ib, env);
                    LamArg::Iota(c, Box::new(b))
                }
            };
            let (c, b) = bind(v, body, env);
            Formula::Lambda(c, Box::new(b), arg)
        }
    }
}

fn collect_free_vars(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    let term = |t: &Term, bound: &Vec<String>, out: &mut BTreeSet<String>| {
        if let Term::Var(v) = t {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        }
    };
    match f {
        Formula::Pred(_, args) => args.iter().for_each(|t| term(t, bound, out)),
        Formula::Eq(a, b) => {
            term(a, bound, out);
            term(b, bound, out);
        }
        Formula::Not(a) => collect_free_vars(a, bound, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
            collect_free_vars(a, bound, out);
            collect_free_vars(b, bound, out);
        }
        Formula::Forall(v, a) | Formula::Exists(v, a) => {
            bound.push(v.clone());
            collect_free_vars(a, bound, out);
            bound.pop();
        }
        Formula::Lambda(v, body, arg) => {
            match arg {
                LamArg::Term(t) => term(t, bound, out),
                LamArg::Iota(w, ib) => {
                    bound.push(w.clone());
                    collect_free_vars(ib, bound, out);
                    bound.pop();
                }
            }
            bound.push(v.clone());
            collect_free_vars(body, bound, out);
            bound.pop();
        }
    }
}

fn has_free(f: &Formula, x: &str) -> bool {
    match f {
        Formula::Pred(_, args) => args.iter().any(|t| t.is_var(x)),
        Formula::Eq(a, b) => a.is_var(x) || b.is_var(x),
        Formula::Not(a) => has_free(a, x),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
            has_free(a, x) || has_free(b, x)
        }
        Formula::Forall(v, a) | Formula::Exists(v, a) => v != x && has_free(a, x),
        Formula::Lambda(v, body, arg) => {
            let in_arg = match arg {
                LamArg::Term(t) => t.is_var(x),
                LamArg::Iota(w, ib) => w != x && has_free(ib, x),
            };
            in_arg || (v != x && has_free(body, x))
        }
    }
}

/// Smallest `base<n>` (n >= 1) not rejected by `taken`.
pub fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    (1..)
        .map(|n| format!("{stem}{n}"))
        .find(|cand| !taken(cand))
        .expect("unbounded name supply")
}

/// `phi[x/t]`: replaces the free occurrences of variable `x` by `t`,
/// renaming binders that would capture a variable `t`.
pub fn substitute(phi: &Formula, x: &str, t: &Term) -> Formula {
    if !phi.has_free_var(x) {
        return phi.clone();
    }
    subst(phi, x, t)
}

fn subst_term(s: &Term, x: &str, t: &Term) -> Term {
    if s.is_var(x) {
        t.clone()
    } else {
        s.clone()
    }
}

/// Substitution under a binder `v` with scope `body`.
fn subst_binder(v: &str, body: &Formula, x: &str, t: &Term) -> (String, Formula) {
    if v == x || !has_free(body, x) {
        return (v.to_string(), body.clone());
    }
    match t {
        Term::Var(tv) if tv == v => {
            let mut avoid = HashSet::new();
            body.all_names(&mut avoid);
            avoid.insert(x.to_string());
            avoid.insert(tv.clone());
            let nv = fresh_name(v, |n| avoid.contains(n));
            let renamed = subst(body, v, &Term::Var(nv.clone()));
            (nv, subst(&renamed, x, t))
        }
        _ => (v.to_string(), subst(body, x, t)),
    }
}

fn subst(phi: &Formula, x: &str, t: &Term) -> Formula {
    match phi {
        Formula::Pred(p, args) => {
            Formula::Pred(p.clone(), args.iter().map(|s| subst_term(s, x, t)).collect())
        }
        Formula::Eq(a, b) => Formula::Eq(subst_term(a, x, t), subst_term(b, x, t)),
        Formula::Not(a) => Formula::not(subst(a, x, t)),
        Formula::And(a, b) => Formula::and(subst(a, x, t), subst(b, x, t)),
        Formula::Or(a, b) => Formula::or(subst(a, x, t), subst(b, x, t)),
        Formula::Imp(a, b) => Formula::imp(subst(a, x, t), subst(b, x, t)),
        Formula::Iff(a, b) => Formula::iff(subst(a, x, t), subst(b, x, t)),
        Formula::Forall(v, a) => {
            let (v, a) = subst_binder(v, a, x, t);
            Formula::Forall(v, Box::new(a))
        }
        Formula::Exists(v, a) => {
            let (v, a) = subst_binder(v, a, x, t);
            Formula::Exists(v, Box::new(a))
        }
        Formula::Lambda(v, body, arg) => {
            let arg = match arg {
                LamArg::Term(s) => LamArg::Term(subst_term(s, x, t)),
                LamArg::Iota(w, ib) => {
                    let (w, ib) = subst_binder(w, ib, x, t);
                    LamArg::Iota(w, Box::new(ib))
                }
            };
            let (v, body) = subst_binder(v, body, x, t);
            Formula::Lambda(v, Box::new(body), arg)
        }
    }
}

/// Alpha-equivalence: equality up to renaming of bound variables.
pub fn alpha_equal(phi: &Formula, psi: &Formula) -> bool {
    matches!(match_instance(phi, None, psi), Some(_))
}

/// Finds `t` with `pattern[x/t]` alpha-equal to `target`.
///
/// Returns `None` when no such term exists, `Some(None)` when `x` does not
/// occur free in `pattern` (any `t` works), and `Some(Some(t))` otherwise.
/// With `x = None` this is plain alpha-equivalence.
pub fn match_instance(pattern: &Formula, x: Option<&str>, target: &Formula) -> Option<Option<Term>> {
    let mut m = Matcher {
        x,
        env: Vec::new(),
        found: None,
    };
    if m.formula(pattern, target) {
        Some(m.found)
    } else {
        None
    }
}

struct Matcher<'a> {
    x: Option<&'a str>,
    /// Pairs of bound names, innermost last.
    env: Vec<(String, String)>,
    found: Option<Term>,
}

impl Matcher<'_> {
    fn lookup<'e>(env: &'e [(String, String)], name: &str, left: bool) -> Option<usize> {
        env.iter()
            .rposition(|(l, r)| if left { l == name } else { r == name })
    }

    fn term(&mut self, p: &Term, q: &Term) -> bool {
        if let Term::Var(pv) = p {
            let pi = Self::lookup(&self.env, pv, true);
            if pi.is_none() && Some(pv.as_str()) == self.x {
                // Free occurrence of the hole: `q` must be a free term.
                if let Term::Var(qv) = q {
                    if Self::lookup(&self.env, qv, false).is_some() {
                        return false;
                    }
                }
                return match &self.found {
                    Some(prev) => prev == q,
                    None => {
                        self.found = Some(q.clone());
                        true
                    }
                };
            }
            return match q {
                Term::Var(qv) => {
                    let qi = Self::lookup(&self.env, qv, false);
                    match (pi, qi) {
                        (Some(a), Some(b)) => a == b,
                        (None, None) => pv == qv,
                        _ => false,
                    }
                }
                _ => false,
            };
        }
        if let Term::Var(qv) = q {
            if Self::lookup(&self.env, qv, false).is_some() {
                return false;
            }
        }
        p == q
    }

    fn binder(&mut self, pv: &str, pb: &Formula, qv: &str, qb: &Formula) -> bool {
        self.env.push((pv.to_string(), qv.to_string()));
        let ok = self.formula(pb, qb);
        self.env.pop();
        ok
    }

    fn formula(&mut self, p: &Formula, q: &Formula) -> bool {
        match (p, q) {
            (Formula::Pred(a, xs), Formula::Pred(b, ys)) => {
                a == b
                    && xs.len() == ys.len()
                    && xs.iter().zip(ys).all(|(s, t)| self.term(s, t))
            }
            (Formula::Eq(a1, b1), Formula::Eq(a2, b2)) => self.term(a1, a2) && self.term(b1, b2),
            (Formula::Not(a), Formula::Not(b)) => self.formula(a, b),
            (Formula::And(a1, b1), Formula::And(a2, b2))
            | (Formula::Or(a1, b1), Formula::Or(a2, b2))
            | (Formula::Imp(a1, b1), Formula::Imp(a2, b2))
            | (Formula::Iff(a1, b1), Formula::Iff(a2, b2)) => {
                self.formula(a1, a2) && self.formula(b1, b2)
            }
            (Formula::Forall(v, a), Formula::Forall(w, b))
            | (Formula::Exists(v, a), Formula::Exists(w, b)) => self.binder(v, a, w, b),
            (Formula::Lambda(v, a, arg1), Formula::Lambda(w, b, arg2)) => {
                let args = match (arg1, arg2) {
                    (LamArg::Term(s), LamArg::Term(t)) => self.term(s, t),
                    (LamArg::Iota(y1, c1), LamArg::Iota(y2, c2)) => self.binder(y1, c1, y2, c2),
                    _ => false,
                };
                args && self.binder(v, a, w, b)
            }
            _ => false,
        }
    }
}

/// An ordered pair of finite multisets of formulas.
///
/// The lists keep a presentation order for printing; all comparisons treat
/// them as multisets modulo alpha-equivalence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub ante: Vec<Formula>,
    pub succ: Vec<Formula>,
}

impl Sequent {
    pub fn new(ante: Vec<Formula>, succ: Vec<Formula>) -> Sequent {
        Sequent { ante, succ }
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.ante.iter().chain(self.succ.iter())
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.formulas().flat_map(|f| f.params()).collect()
    }

    pub fn consts(&self) -> BTreeSet<String> {
        self.formulas().flat_map(|f| f.consts()).collect()
    }

    pub fn has_param(&self, p: &str) -> bool {
        self.formulas().any(|f| f.has_param(p))
    }

    pub fn predicates(&self) -> Vec<(String, usize)> {
        let mut out = Vec::new();
        for f in self.formulas() {
            f.predicates(&mut out);
        }
        out
    }

    pub fn rename_param(&self, from: &str, to: &Term) -> Sequent {
        Sequent {
            ante: self.ante.iter().map(|f| f.rename_param(from, to)).collect(),
            succ: self.succ.iter().map(|f| f.rename_param(from, to)).collect(),
        }
    }

    /// Multiset equality modulo alpha-equivalence.
    pub fn same_as(&self, other: &Sequent) -> bool {
        multiset_eq(&self.ante, &other.ante) && multiset_eq(&self.succ, &other.succ)
    }

    /// Sorted canonical forms of both sides; equal keys mean equal sequents.
    pub fn key(&self) -> (Vec<Formula>, Vec<Formula>) {
        (canonical_sorted(&self.ante), canonical_sorted(&self.succ))
    }
}

pub fn canonical_sorted(fs: &[Formula]) -> Vec<Formula> {
    let mut v: Vec<Formula> = fs.iter().map(Formula::canonical).collect();
    v.sort();
    v
}

/// Multiset equality modulo alpha-equivalence.
pub fn multiset_eq(a: &[Formula], b: &[Formula]) -> bool {
    a.len() == b.len() && canonical_sorted(a) == canonical_sorted(b)
}

/// Counts of canonical forms.
pub fn multiset_counts(fs: &[Formula]) -> BTreeMap<Formula, usize> {
    let mut m = BTreeMap::new();
    for f in fs {
        *m.entry(f.canonical()).or_insert(0) += 1;
    }
    m
}

/// Generator of fresh parameter and variable names.
///
/// Names are drawn as `base1`, `base2`, ... skipping every name recorded as
/// used, so the output depends only on the recorded names and the order of
/// requests.
#[derive(Clone, Debug, Default)]
pub struct NameSupply {
    used: HashSet<String>,
}

impl NameSupply {
    pub fn new() -> NameSupply {
        NameSupply::default()
    }

    pub fn avoid(&mut self, name: impl Into<String>) {
        self.used.insert(name.into());
    }

    pub fn avoid_formula(&mut self, f: &Formula) {
        f.all_names(&mut self.used);
    }

    pub fn avoid_sequent(&mut self, s: &Sequent) {
        for f in s.formulas() {
            self.avoid_formula(f);
        }
    }

    pub fn avoid_term(&mut self, t: &Term) {
        match t {
            Term::Var(n) | Term::Param(n) | Term::Const(n) => {
                self.used.insert(n.clone());
            }
        }
    }

    pub fn is_used(&self, name: &str) -> bool {
        self.used.contains(name)
    }

    pub fn fresh(&mut self, base: &str) -> String {
        let name = fresh_name(base, |n| self.used.contains(n));
        self.used.insert(name.clone());
        name
    }

    pub fn fresh_param(&mut self, base: &str) -> Term {
        Term::Param(self.fresh(base))
    }
}

/// A structural problem found by [`validate_formula`] or [`validate_sequent`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Child indices from the root to the offending node.
    pub path: Vec<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            let p: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
            write!(f, "{} (at {})", self.message, p.join("."))
        }
    }
}

/// Checks predicate arities for consistency, within `phi` and against `arities`.
pub fn validate_formula(
    phi: &Formula,
    arities: &mut BTreeMap<String, usize>,
) -> Result<(), Violation> {
    let mut path = Vec::new();
    check_arities(phi, arities, &mut path)
}

fn check_arities(
    phi: &Formula,
    arities: &mut BTreeMap<String, usize>,
    path: &mut Vec<usize>,
) -> Result<(), Violation> {
    let mut child = |i: usize, f: &Formula, arities: &mut BTreeMap<String, usize>| {
        path.push(i);
        let r = check_arities(f, arities, path);
        path.pop();
        r
    };
    match phi {
        Formula::Pred(p, args) => match arities.get(p) {
            Some(&n) if n != args.len() => Err(Violation {
                path: path.clone(),
                message: format!(
                    "predicate {p} used with arity {} but elsewhere with arity {n}",
                    args.len()
                ),
            }),
            _ => {
                arities.insert(p.clone(), args.len());
                Ok(())
            }
        },
        Formula::Eq(..) => Ok(()),
        Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => child(0, a, arities),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
            child(0, a, arities)?;
            child(1, b, arities)
        }
        Formula::Lambda(_, body, arg) => {
            child(0, body, arities)?;
            match arg {
                LamArg::Iota(_, ib) => child(1, ib, arities),
                LamArg::Term(_) => Ok(()),
            }
        }
    }
}

/// Checks arities across the sequent and that no variable occurs free.
pub fn validate_sequent(s: &Sequent) -> Result<(), Violation> {
    let mut arities = BTreeMap::new();
    for (i, f) in s.formulas().enumerate() {
        validate_formula(f, &mut arities).map_err(|mut v| {
            v.path.insert(0, i);
            v
        })?;
        if let Some(x) = f.free_vars().into_iter().next() {
            return Err(Violation {
                path: vec![i],
                message: format!("free variable {x} in sequent (use a parameter #{x})"),
            });
        }
    }
    Ok(())
}
