//! The trusted checker: one function per rule instance, one for whole proofs.
//!
//! Everything else in the crate (builders, cut elimination, search) produces
//! proofs that are only believed once [`check_proof`] accepts them.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::proof::{Annotations, ProofNode, Rule};
use crate::syntax::{match_instance, substitute, Formula, LamArg, Sequent, Term};

pub mod build;
mod subst;

pub use build::{
    ax, build_derived_iota, build_leibniz, build_rlambda, build_sym_trans, cut, derive, eq_minus,
    eq_plus, fit, flip, BuildError, Direction, FitError, IotaInstance,
};
pub use subst::{rename_eigens_in_subtree, subst_param_proof};

/// Checker configuration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct KernelOptions {
    /// Let the eigenparameter of `iotar` occur in the abstract's body.
    pub lax_iota_eigen: bool,
}

/// A failed proof check: the path of child indices to the offending node
/// and the reason.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("REJECT path={} reason={reason}", format_path(path))]
pub struct Rejection {
    pub path: Vec<usize>,
    pub reason: String,
}

pub fn format_path(path: &[usize]) -> String {
    let mut s = String::from("root");
    for i in path {
        s.push('.');
        s.push_str(&i.to_string());
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Severity {
    Shape,
    Annotation,
    SideCondition,
}

#[derive(Clone, Debug)]
struct StepError {
    severity: Severity,
    message: String,
}

fn shape(message: impl Into<String>) -> StepError {
    StepError {
        severity: Severity::Shape,
        message: message.into(),
    }
}

fn annotation(message: impl Into<String>) -> StepError {
    StepError {
        severity: Severity::Annotation,
        message: format!("annotation inconsistent with premises: {}", message.into()),
    }
}

fn side_condition(message: impl Into<String>) -> StepError {
    StepError {
        severity: Severity::SideCondition,
        message: format!("side condition violated: {}", message.into()),
    }
}

/// Formulas a rule adds to one premise on top of the context.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Side {
    pub ante: Vec<Formula>,
    pub succ: Vec<Formula>,
}

impl Side {
    fn new(ante: Vec<Formula>, succ: Vec<Formula>) -> Side {
        Side { ante, succ }
    }
}

/// How an accepted rule instance splits into principal, side and context
/// formulas. Formulas are taken from the instance itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub rule: Rule,
    /// Principal formulas in the conclusion's antecedent: the identity
    /// first and the atom second for `eqminus`.
    pub principal_ante: Vec<Formula>,
    pub principal_succ: Vec<Formula>,
    /// Per premise, what the rule adds to the context. For `cut` these are
    /// the cut formula occurrences only.
    pub sides: Vec<Side>,
    /// The conclusion minus the principal formulas. For `cut`, the whole
    /// conclusion.
    pub context: Sequent,
    pub eigen: Option<Term>,
    /// Instantiation terms: `b` for quantifier rules, `[b1, b2]` for
    /// `eqminus` and `iota2l`, `[b]` for `eqplus` and `iotar`.
    pub terms: Vec<Term>,
    pub cut_formula: Option<Formula>,
}

/// Formulas of a sequent side together with their canonical forms.
struct Cs<'a> {
    items: &'a [Formula],
    canon: Vec<Formula>,
}

impl<'a> Cs<'a> {
    fn new(items: &'a [Formula]) -> Cs<'a> {
        Cs {
            items,
            canon: items.iter().map(Formula::canonical).collect(),
        }
    }

    fn without(&self, skip: &[usize]) -> (Vec<Formula>, Vec<Formula>) {
        let mut a = Vec::new();
        let mut c = Vec::new();
        for i in 0..self.items.len() {
            if !skip.contains(&i) {
                a.push(self.items[i].clone());
                c.push(self.canon[i].clone());
            }
        }
        (a, c)
    }
}

/// Indices of `whole` left after removing one occurrence of each of `part`.
fn subtract(whole: &[Formula], part: &[Formula]) -> Option<Vec<usize>> {
    let mut used = vec![false; whole.len()];
    for p in part {
        let i = (0..whole.len()).find(|&i| !used[i] && whole[i] == *p)?;
        used[i] = true;
    }
    Some((0..whole.len()).filter(|&i| !used[i]).collect())
}

fn sorted(mut v: Vec<Formula>) -> Vec<Formula> {
    v.sort();
    v
}

fn same_multiset(canon: &[Formula], actual: &[Formula]) -> bool {
    canon.len() == actual.len()
        && sorted(canon.to_vec()) == sorted(actual.iter().map(Formula::canonical).collect())
}

/// Leftover of one premise once the context is removed.
struct Leftover {
    ante: Vec<Formula>,
    succ: Vec<Formula>,
    cante: Vec<Formula>,
    csucc: Vec<Formula>,
}

fn leftover(p: &Sequent, pa: &Cs, ps: &Cs, ctx_a: &[Formula], ctx_s: &[Formula], j: usize) -> Result<Leftover, StepError> {
    let _ = p;
    let ra = subtract(&pa.canon, ctx_a)
        .ok_or_else(|| shape(format!("premise {j} does not contain the context antecedent")))?;
    let rs = subtract(&ps.canon, ctx_s)
        .ok_or_else(|| shape(format!("premise {j} does not contain the context succedent")))?;
    Ok(Leftover {
        ante: ra.iter().map(|&i| pa.items[i].clone()).collect(),
        succ: rs.iter().map(|&i| ps.items[i].clone()).collect(),
        cante: ra.iter().map(|&i| pa.canon[i].clone()).collect(),
        csucc: rs.iter().map(|&i| ps.canon[i].clone()).collect(),
    })
}

fn is_closed_term(t: &Term) -> bool {
    !matches!(t, Term::Var(_))
}

pub fn principal_on_left(rule: Rule) -> bool {
    matches!(
        rule,
        Rule::WeakenL
            | Rule::ContractL
            | Rule::NotL
            | Rule::AndL
            | Rule::OrL
            | Rule::ImpL
            | Rule::IffL
            | Rule::ForallL
            | Rule::ExistsL
            | Rule::LamL
            | Rule::Iota1L
            | Rule::Iota2L
    )
}

fn fits_rule(rule: Rule, f: &Formula) -> bool {
    match rule {
        Rule::WeakenL | Rule::WeakenR | Rule::ContractL | Rule::ContractR => true,
        Rule::NotL | Rule::NotR => matches!(f, Formula::Not(_)),
        Rule::AndL | Rule::AndR => matches!(f, Formula::And(..)),
        Rule::OrL | Rule::OrR => matches!(f, Formula::Or(..)),
        Rule::ImpL | Rule::ImpR => matches!(f, Formula::Imp(..)),
        Rule::IffL | Rule::IffR => matches!(f, Formula::Iff(..)),
        Rule::ForallL | Rule::ForallR => matches!(f, Formula::Forall(..)),
        Rule::ExistsL | Rule::ExistsR => matches!(f, Formula::Exists(..)),
        Rule::LamL | Rule::LamR => matches!(f, Formula::Lambda(_, _, LamArg::Term(_))),
        Rule::Iota1L | Rule::Iota2L | Rule::IotaR => matches!(f, Formula::Lambda(_, _, LamArg::Iota(..))),
        Rule::Ax | Rule::Cut | Rule::EqMinus | Rule::EqPlus => false,
    }
}

/// Side formulas of a rule with a single principal formula, given its
/// instantiation data. `terms` and `eigen` follow [`Decomposition`].
pub fn sides_for(rule: Rule, principal: &Formula, terms: &[Term], eigen: Option<&Term>) -> Option<Vec<Side>> {
    use Formula as F;
    let inst = |body: &Formula, v: &str, t: Option<&Term>| match t {
        Some(t) => substitute(body, v, t),
        None => body.clone(),
    };
    let s = match (rule, principal) {
        (Rule::WeakenL | Rule::WeakenR, _) => vec![Side::default()],
        (Rule::ContractL, f) => vec![Side::new(vec![f.clone(), f.clone()], vec![])],
        (Rule::ContractR, f) => vec![Side::new(vec![], vec![f.clone(), f.clone()])],
        (Rule::NotL, F::Not(a)) => vec![Side::new(vec![], vec![(**a).clone()])],
        (Rule::NotR, F::Not(a)) => vec![Side::new(vec![(**a).clone()], vec![])],
        (Rule::AndL, F::And(a, b)) => vec![Side::new(vec![(**a).clone(), (**b).clone()], vec![])],
        (Rule::AndR, F::And(a, b)) => vec![
            Side::new(vec![], vec![(**a).clone()]),
            Side::new(vec![], vec![(**b).clone()]),
        ],
        (Rule::OrL, F::Or(a, b)) => vec![
            Side::new(vec![(**a).clone()], vec![]),
            Side::new(vec![(**b).clone()], vec![]),
        ],
        (Rule::OrR, F::Or(a, b)) => vec![Side::new(vec![], vec![(**a).clone(), (**b).clone()])],
        (Rule::ImpL, F::Imp(a, b)) => vec![
            Side::new(vec![], vec![(**a).clone()]),
            Side::new(vec![(**b).clone()], vec![]),
        ],
        (Rule::ImpR, F::Imp(a, b)) => vec![Side::new(vec![(**a).clone()], vec![(**b).clone()])],
        (Rule::IffL, F::Iff(a, b)) => vec![
            Side::new(vec![], vec![(**a).clone(), (**b).clone()]),
            Side::new(vec![(**a).clone(), (**b).clone()], vec![]),
        ],
        (Rule::IffR, F::Iff(a, b)) => vec![
            Side::new(vec![(**a).clone()], vec![(**b).clone()]),
            Side::new(vec![(**b).clone()], vec![(**a).clone()]),
        ],
        (Rule::ForallL, F::Forall(x, a)) => vec![Side::new(vec![inst(a, x, terms.first())], vec![])],
        (Rule::ExistsR, F::Exists(x, a)) => vec![Side::new(vec![], vec![inst(a, x, terms.first())])],
        (Rule::ForallR, F::Forall(x, a)) => vec![Side::new(vec![], vec![inst(a, x, eigen)])],
        (Rule::ExistsL, F::Exists(x, a)) => vec![Side::new(vec![inst(a, x, eigen)], vec![])],
        (Rule::LamL, F::Lambda(x, body, LamArg::Term(t))) => {
            vec![Side::new(vec![substitute(body, x, t)], vec![])]
        }
        (Rule::LamR, F::Lambda(x, body, LamArg::Term(t))) => {
            vec![Side::new(vec![], vec![substitute(body, x, t)])]
        }
        (Rule::Iota1L, F::Lambda(x, psi, LamArg::Iota(y, phi))) => vec![Side::new(
            vec![inst(phi, y, eigen), inst(psi, x, eigen)],
            vec![],
        )],
        (Rule::Iota2L, F::Lambda(_, _, LamArg::Iota(y, phi))) => {
            let (b1, b2) = (terms.first()?, terms.get(1)?);
            vec![
                Side::new(vec![], vec![substitute(phi, y, b1)]),
                Side::new(vec![], vec![substitute(phi, y, b2)]),
                Side::new(vec![Formula::eq(b1.clone(), b2.clone())], vec![]),
            ]
        }
        (Rule::IotaR, F::Lambda(x, psi, LamArg::Iota(y, phi))) => {
            let b = terms.first()?;
            let a = eigen?;
            vec![
                Side::new(vec![], vec![substitute(phi, y, b)]),
                Side::new(vec![], vec![substitute(psi, x, b)]),
                Side::new(vec![substitute(phi, y, a)], vec![Formula::eq(a.clone(), b.clone())]),
            ]
        }
        _ => return None,
    };
    Some(s)
}

/// Checks one rule instance: `conclusion` inferred from `premises` by `rule`.
pub fn check_step(
    rule: Rule,
    conclusion: &Sequent,
    premises: &[&Sequent],
    ann: &Annotations,
    opts: &KernelOptions,
) -> Result<Decomposition, String> {
    if premises.len() != rule.arity() {
        return Err(format!(
            "rule {rule} takes {} premise(s), found {}",
            rule.arity(),
            premises.len()
        ));
    }
    if let Some(e) = &ann.eigen {
        if !rule.has_eigen() {
            return Err(format!("annotation inconsistent with premises: rule {rule} has no eigenparameter"));
        }
        if !matches!(e, Term::Param(_)) {
            return Err("side condition violated: eigenvariable must be a parameter".into());
        }
        let p = e.as_param().unwrap_or_default();
        if !(opts.lax_iota_eigen && rule == Rule::IotaR) && conclusion.has_param(p) {
            return Err(format!("side condition violated: eigenvariable {e} occurs in context"));
        }
    }
    let result = match rule {
        Rule::Ax => check_ax(conclusion),
        Rule::Cut => check_cut(conclusion, premises[0], premises[1]),
        Rule::EqPlus => check_eq_plus(conclusion, premises[0], ann),
        Rule::EqMinus => check_eq_minus(conclusion, premises[0], ann),
        _ => check_principal(rule, conclusion, premises, ann, opts),
    };
    result.map_err(|e| e.message)
}

fn check_ax(c: &Sequent) -> Result<Decomposition, StepError> {
    if c.ante.len() != 1 || c.succ.len() != 1 {
        return Err(shape("ax must have exactly one formula on each side"));
    }
    if c.ante[0].canonical() != c.succ[0].canonical() {
        return Err(shape("ax sides differ"));
    }
    Ok(Decomposition {
        rule: Rule::Ax,
        principal_ante: c.ante.clone(),
        principal_succ: c.succ.clone(),
        sides: Vec::new(),
        context: Sequent::default(),
        eigen: None,
        terms: Vec::new(),
        cut_formula: None,
    })
}

fn check_cut(c: &Sequent, p0: &Sequent, p1: &Sequent) -> Result<Decomposition, StepError> {
    let p0s = Cs::new(&p0.succ);
    let p1a = Cs::new(&p1.ante);
    let want_a = sorted(c.ante.iter().map(Formula::canonical).collect());
    let want_s = sorted(c.succ.iter().map(Formula::canonical).collect());
    let mut tried = BTreeSet::new();
    for i in 0..p0s.items.len() {
        let chi = &p0s.canon[i];
        if !tried.insert(chi.clone()) {
            continue;
        }
        let Some(j) = p1a.canon.iter().position(|f| f == chi) else {
            continue;
        };
        let mut ante: Vec<Formula> = p0.ante.iter().map(Formula::canonical).collect();
        ante.extend(p1a.without(&[j]).1);
        let mut succ = p0s.without(&[i]).1;
        succ.extend(p1.succ.iter().map(Formula::canonical));
        if sorted(ante) == want_a && sorted(succ) == want_s {
            let chi = p0s.items[i].clone();
            return Ok(Decomposition {
                rule: Rule::Cut,
                principal_ante: Vec::new(),
                principal_succ: Vec::new(),
                sides: vec![
                    Side::new(vec![], vec![chi.clone()]),
                    Side::new(vec![chi.clone()], vec![]),
                ],
                context: c.clone(),
                eigen: None,
                terms: Vec::new(),
                cut_formula: Some(chi),
            });
        }
    }
    Err(shape("no cut formula splits the conclusion into the premises' contexts"))
}

fn check_eq_plus(c: &Sequent, p: &Sequent, ann: &Annotations) -> Result<Decomposition, StepError> {
    let ca = Cs::new(&c.ante);
    let cs = Cs::new(&c.succ);
    let pa = Cs::new(&p.ante);
    let ps = Cs::new(&p.succ);
    let lo = leftover(p, &pa, &ps, &ca.canon, &cs.canon, 0)?;
    if !lo.succ.is_empty() || lo.ante.len() != 1 {
        return Err(shape("eqplus premise must add exactly one identity b = b"));
    }
    let b = match &lo.ante[0] {
        Formula::Eq(s, t) if s == t && is_closed_term(s) => s.clone(),
        _ => return Err(shape("eqplus premise must add exactly one identity b = b")),
    };
    if let Some(t) = ann.terms.first() {
        if *t != b {
            return Err(annotation(format!(":term {t} but the premise adds {b} = {b}")));
        }
    }
    Ok(Decomposition {
        rule: Rule::EqPlus,
        principal_ante: Vec::new(),
        principal_succ: Vec::new(),
        sides: vec![Side::new(lo.ante, vec![])],
        context: c.clone(),
        eigen: None,
        terms: vec![b],
        cut_formula: None,
    })
}

/// `a` is `phi[x/b1]` and `a2` is `phi[x/b2]` for some atom `phi`.
fn atom_step(a: &Formula, a2: &Formula, b1: &Term, b2: &Term) -> bool {
    let pos = |s: &Term, t: &Term| s == t || (s == b1 && t == b2);
    match (a, a2) {
        (Formula::Pred(p, xs), Formula::Pred(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(s, t)| pos(s, t))
        }
        (Formula::Eq(s1, t1), Formula::Eq(s2, t2)) => pos(s1, s2) && pos(t1, t2),
        _ => false,
    }
}

fn check_eq_minus(c: &Sequent, p: &Sequent, ann: &Annotations) -> Result<Decomposition, StepError> {
    let ca = Cs::new(&c.ante);
    let cs = Cs::new(&c.succ);
    let pa = Cs::new(&p.ante);
    let ps = Cs::new(&p.succ);
    let mut err = shape("no identity and atom in the antecedent match the premise");
    let mut seen = BTreeSet::new();
    for ie in 0..ca.items.len() {
        if ann.at.is_some_and(|k| k != ie) {
            continue;
        }
        let (b1, b2) = match &ca.items[ie] {
            Formula::Eq(s, t) if is_closed_term(s) && is_closed_term(t) => (s, t),
            _ => continue,
        };
        if let [t1, t2] = ann.terms.as_slice() {
            if t1 != b1 || t2 != b2 {
                continue;
            }
        }
        for ia in 0..ca.items.len() {
            if ia == ie || !seen.insert((ca.canon[ie].clone(), ca.canon[ia].clone())) {
                continue;
            }
            let ctx_a = ca.without(&[ie, ia]).1;
            let Ok(lo) = leftover(p, &pa, &ps, &ctx_a, &cs.canon, 0) else {
                continue;
            };
            if !lo.succ.is_empty() || lo.ante.len() != 1 {
                continue;
            }
            let atom = &ca.items[ia];
            if !atom.is_atomic() {
                err = side_condition("eqminus principal formula is not atomic");
                continue;
            }
            if atom_step(atom, &lo.ante[0], b1, b2) {
                return Ok(Decomposition {
                    rule: Rule::EqMinus,
                    principal_ante: vec![ca.items[ie].clone(), atom.clone()],
                    principal_succ: Vec::new(),
                    sides: vec![Side::new(lo.ante, vec![])],
                    context: Sequent::new(ca.without(&[ie, ia]).0, c.succ.clone()),
                    eigen: None,
                    terms: vec![b1.clone(), b2.clone()],
                    cut_formula: None,
                });
            }
        }
    }
    if ann.at.is_some_and(|k| k >= ca.items.len()) {
        return Err(annotation(":at index out of range"));
    }
    Err(err)
}

/// Infers `t` with `pattern[v/t]` alpha-equal to `target`.
fn infer(pattern: &Formula, v: &str, target: &Formula) -> Result<Option<Term>, StepError> {
    match match_instance(pattern, Some(v), target) {
        Some(t) => Ok(t),
        None => Err(shape(format!("{target} is not an instance of {pattern}"))),
    }
}

fn merge(a: Option<Term>, b: Option<Term>) -> Result<Option<Term>, StepError> {
    match (a, b) {
        (Some(s), Some(t)) if s != t => Err(shape("side formulas use different parameters")),
        (Some(s), _) => Ok(Some(s)),
        (None, t) => Ok(t),
    }
}

fn single(v: &[Formula], what: &str) -> Result<Formula, StepError> {
    match v {
        [f] => Ok(f.clone()),
        _ => Err(shape(format!("expected exactly one {what} side formula, found {}", v.len()))),
    }
}

fn check_principal(
    rule: Rule,
    c: &Sequent,
    premises: &[&Sequent],
    ann: &Annotations,
    opts: &KernelOptions,
) -> Result<Decomposition, StepError> {
    let left = principal_on_left(rule);
    let ca = Cs::new(&c.ante);
    let cs = Cs::new(&c.succ);
    let side = if left { &ca } else { &cs };
    if let Some(k) = ann.at {
        if k >= side.items.len() {
            return Err(annotation(":at index out of range"));
        }
    }
    let pcs: Vec<(Cs, Cs)> = premises
        .iter()
        .map(|p| (Cs::new(&p.ante), Cs::new(&p.succ)))
        .collect();
    let mut best: Option<StepError> = None;
    let mut seen = BTreeSet::new();
    for i in 0..side.items.len() {
        if ann.at.is_some_and(|k| k != i) || !fits_rule(rule, &side.items[i]) {
            continue;
        }
        if !seen.insert(side.canon[i].clone()) {
            continue;
        }
        let (ctx_a, ctx_s) = if left {
            (ca.without(&[i]), (c.succ.clone(), cs.canon.clone()))
        } else {
            ((c.ante.clone(), ca.canon.clone()), cs.without(&[i]))
        };
        let attempt = (|| {
            let mut los = Vec::new();
            for (j, (p, (pa, ps))) in premises.iter().zip(&pcs).enumerate() {
                los.push(leftover(p, pa, ps, &ctx_a.1, &ctx_s.1, j)?);
            }
            try_candidate(rule, &side.items[i], c, &los, ann, opts, Sequent::new(ctx_a.0.clone(), ctx_s.0.clone()))
        })();
        match attempt {
            Ok(d) => return Ok(d),
            Err(e) => {
                if best.as_ref().is_none_or(|b| e.severity > b.severity) {
                    best = Some(e);
                }
            }
        }
    }
    Err(best.unwrap_or_else(|| {
        shape(format!(
            "no principal formula for {rule} in the {}",
            if left { "antecedent" } else { "succedent" }
        ))
    }))
}

fn try_candidate(
    rule: Rule,
    principal: &Formula,
    c: &Sequent,
    los: &[Leftover],
    ann: &Annotations,
    opts: &KernelOptions,
    context: Sequent,
) -> Result<Decomposition, StepError> {
    let mut terms: Vec<Term> = Vec::new();
    let mut eigen: Option<Term> = ann.eigen.clone();
    match (rule, principal) {
        (Rule::ForallL, Formula::Forall(x, body)) | (Rule::ExistsR, Formula::Exists(x, body)) => {
            let t = match ann.terms.first() {
                Some(t) => Some(t.clone()),
                None => {
                    let f = if rule == Rule::ForallL {
                        single(&los[0].ante, "antecedent")?
                    } else {
                        single(&los[0].succ, "succedent")?
                    };
                    infer(body, x, &f)?
                }
            };
            if let Some(t) = t {
                if !is_closed_term(&t) {
                    return Err(shape("instantiation term must be a parameter or constant"));
                }
                terms.push(t);
            }
        }
        (Rule::ForallR, Formula::Forall(x, body)) | (Rule::ExistsL, Formula::Exists(x, body)) => {
            if eigen.is_none() {
                let f = if rule == Rule::ForallR {
                    single(&los[0].succ, "succedent")?
                } else {
                    single(&los[0].ante, "antecedent")?
                };
                eigen = infer(body, x, &f)?;
            }
        }
        (Rule::Iota1L, Formula::Lambda(x, psi, LamArg::Iota(y, phi))) => {
            if eigen.is_none() {
                let [f1, f2] = los[0].ante.as_slice() else {
                    return Err(shape("iota1l premise must add two antecedent formulas"));
                };
                let one = infer(phi, y, f1).and_then(|s| merge(s, infer(psi, x, f2)?));
                let two = infer(phi, y, f2).and_then(|s| merge(s, infer(psi, x, f1)?));
                eigen = one.or(two)?;
            }
        }
        (Rule::Iota2L, _) => {
            if let [b1, b2] = ann.terms.as_slice() {
                terms = vec![b1.clone(), b2.clone()];
            } else {
                match single(&los[2].ante, "antecedent")? {
                    Formula::Eq(b1, b2) => terms = vec![b1, b2],
                    f => return Err(shape(format!("third premise adds {f}, not an identity"))),
                }
            }
        }
        (Rule::IotaR, _) => match single(&los[2].succ, "succedent")? {
            Formula::Eq(a, b) => {
                if let Some(e) = &eigen {
                    if *e != a {
                        return Err(annotation(format!(":eigen {e} but the third premise proves {a} = {b}")));
                    }
                }
                if let Some(t) = ann.terms.first() {
                    if *t != b {
                        return Err(annotation(format!(":term {t} but the third premise proves {a} = {b}")));
                    }
                }
                eigen = Some(a);
                terms = vec![b];
            }
            f => return Err(shape(format!("third premise adds {f}, not an identity"))),
        },
        _ => {}
    }
    if terms.iter().any(|t| !is_closed_term(t)) {
        return Err(shape("instantiation term must be a parameter or constant"));
    }
    let sides = sides_for(rule, principal, &terms, eigen.as_ref())
        .ok_or_else(|| shape(format!("{principal} is not a principal formula for {rule}")))?;
    for (j, (lo, s)) in los.iter().zip(&sides).enumerate() {
        if !same_multiset(&lo.cante, &s.ante) || !same_multiset(&lo.csucc, &s.succ) {
            return Err(shape(format!("premise {j} does not match the {rule} schema")));
        }
    }
    if rule.has_eigen() {
        if let Some(a) = &eigen {
            let Term::Param(p) = a else {
                return Err(side_condition("eigenvariable must be a parameter"));
            };
            let clash = if rule == Rule::IotaR && opts.lax_iota_eigen {
                let phi_has = match principal {
                    Formula::Lambda(_, _, LamArg::Iota(_, phi)) => phi.has_param(p),
                    _ => false,
                };
                context.has_param(p) || phi_has
            } else {
                c.has_param(p)
            };
            if clash {
                return Err(side_condition(format!("eigenvariable {a} occurs in context")));
            }
            if rule == Rule::IotaR && terms.first() == Some(a) {
                return Err(side_condition(format!("eigenvariable {a} coincides with the instantiation term")));
            }
        }
    }
    let (principal_ante, principal_succ) = if principal_on_left(rule) {
        (vec![principal.clone()], Vec::new())
    } else {
        (Vec::new(), vec![principal.clone()])
    };
    Ok(Decomposition {
        rule,
        principal_ante,
        principal_succ,
        sides: los
            .iter()
            .map(|lo| Side::new(lo.ante.clone(), lo.succ.clone()))
            .collect(),
        context,
        eigen,
        terms,
        cut_formula: None,
    })
}

/// Checks a single node against its premises' conclusions.
pub fn decompose(node: &ProofNode, opts: &KernelOptions) -> Result<Decomposition, String> {
    let prem: Vec<&Sequent> = node.premises.iter().map(|p| &p.conclusion).collect();
    check_step(node.rule, &node.conclusion, &prem, &node.ann, opts)
}

/// A proof every node of which has been checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    root: ProofNode,
    height: usize,
    params: BTreeSet<String>,
    cut_degrees: BTreeSet<usize>,
}

impl Proof {
    pub fn root(&self) -> &ProofNode {
        &self.root
    }

    pub fn into_root(self) -> ProofNode {
        self.root
    }

    pub fn end_sequent(&self) -> &Sequent {
        &self.root.conclusion
    }

    /// Number of nodes on the longest branch.
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn params(&self) -> &BTreeSet<String> {
        &self.params
    }

    /// Degrees of all cut formulas.
    pub fn cut_degrees(&self) -> &BTreeSet<usize> {
        &self.cut_degrees
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

/// Subtrees at most this deep in the tree are checked in parallel.
const PAR_DEPTH: usize = 3;

/// Checks every node, premises before conclusions. The reported failure is
/// the leftmost innermost one.
///
/// The returned proof carries explicit annotations: every eigenparameter
/// and instantiation term the checker inferred is filled in.
pub fn check_proof(p: &ProofNode, opts: &KernelOptions) -> Result<Proof, Rejection> {
    crate::stack::deep(|| check_proof_here(p, opts))
}

fn check_proof_here(p: &ProofNode, opts: &KernelOptions) -> Result<Proof, Rejection> {
    let mut path = Vec::new();
    let mut cut_degrees = BTreeSet::new();
    let root = check_node(p, opts, &mut path, 0, &mut cut_degrees)?;
    Ok(Proof {
        height: root.height(),
        params: root.params(),
        root,
        cut_degrees,
    })
}

fn check_node(
    p: &ProofNode,
    opts: &KernelOptions,
    path: &mut Vec<usize>,
    depth: usize,
    cuts: &mut BTreeSet<usize>,
) -> Result<ProofNode, Rejection> {
    let premises: Vec<ProofNode> = if depth < PAR_DEPTH && p.premises.len() > 1 {
        let results: Vec<Result<(ProofNode, BTreeSet<usize>), Rejection>> = p
            .premises
            .par_iter()
            .enumerate()
            .map(|(i, q)| {
                let mut sub = path.clone();
                sub.push(i);
                let mut c = BTreeSet::new();
                check_node(q, opts, &mut sub, depth + 1, &mut c).map(|n| (n, c))
            })
            .collect();
        let mut out = Vec::new();
        for r in results {
            let (n, c) = r?;
            cuts.extend(c);
            out.push(n);
        }
        out
    } else {
        let mut out = Vec::new();
        for (i, q) in p.premises.iter().enumerate() {
            path.push(i);
            out.push(check_node(q, opts, path, depth + 1, cuts)?);
            path.pop();
        }
        out
    };
    let d = decompose(p, opts).map_err(|reason| Rejection {
        path: path.clone(),
        reason,
    })?;
    let mut ann = p.ann.clone();
    if ann.eigen.is_none() {
        ann.eigen = d.eigen.clone();
    }
    if ann.terms.is_empty() {
        ann.terms = d.terms.clone();
    }
    if let Some(chi) = &d.cut_formula {
        cuts.insert(chi.degree());
    }
    Ok(ProofNode::new(p.rule, p.conclusion.clone(), ann, premises))
}

/// Parameters that are eigenparameters of some node, with every
/// violation of regularity: an eigenparameter used by two nodes, or
/// occurring outside the premises of its node.
pub fn regularity_violations(p: &ProofNode) -> Vec<Vec<usize>> {
    let mut eigen_nodes: Vec<(Vec<usize>, String)> = Vec::new();
    collect_eigen_nodes(p, &mut Vec::new(), &mut eigen_nodes);
    let mut out = Vec::new();
    for (path, a) in &eigen_nodes {
        let owners = eigen_nodes.iter().filter(|(_, b)| b == a).count();
        if owners > 1 || occurs_outside(p, path, a) {
            out.push(path.clone());
        }
    }
    out
}

fn collect_eigen_nodes(p: &ProofNode, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, String)>) {
    if let Some(Term::Param(a)) = &p.ann.eigen {
        out.push((path.clone(), a.clone()));
    }
    for (i, q) in p.premises.iter().enumerate() {
        path.push(i);
        collect_eigen_nodes(q, path, out);
        path.pop();
    }
}

fn occurs_outside(p: &ProofNode, path: &[usize], a: &str) -> bool {
    let here = p.conclusion.has_param(a) || p.ann.terms.iter().any(|t| t.as_param() == Some(a));
    match path.split_first() {
        None => here,
        Some((&i, rest)) => {
            let own_eigen = p.ann.eigen.as_ref().and_then(Term::as_param) == Some(a);
            here || own_eigen
                || p.premises
                    .iter()
                    .enumerate()
                    .any(|(j, q)| if j == i { occurs_outside(q, rest, a) } else { q.has_param(a) })
        }
    }
}

/// Every eigenparameter is fresh for the whole proof.
pub fn is_regular(p: &ProofNode) -> bool {
    regularity_violations(p).is_empty()
}

#[cfg(test)]
mod tests;
