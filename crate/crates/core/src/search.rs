//! Bounded backward proof search without cut.
//!
//! The search works on sets of formulas, keeping principal formulas of the
//! non-invertible rules. Each search step returns a GRL proof of some
//! subsequent of the goal; [`fit`] supplies the weakenings and contractions
//! that make rule applications match exactly. Identities in the antecedent
//! are saturated with `eqplus` and `eqminus` before any other rule.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};
use std::rc::Rc;
use std::fmt;

use crate::kernel::{ax, check_proof, derive, eq_minus, eq_plus, fit, sides_for, KernelOptions, Proof};
use crate::proof::{Annotations, ProofNode, Rule};
use crate::semantics::{self, Assignment, Enumeration, Model, SemanticsError};
use crate::syntax::{substitute, Formula, LamArg, NameSupply, Sequent, Term};

/// Limits of a single search. All of them are finite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Rule applications on a branch, saturation steps excluded.
    pub max_depth: usize,
    /// Candidate terms tried per instantiation.
    pub term_pool_cap: usize,
    /// How often a kept principal formula may be used again on a branch.
    pub contraction_cap: usize,
    /// Largest domain tried for countermodels.
    pub model_cap: usize,
    /// Search nodes expanded over all depths before giving up.
    pub node_cap: usize,
    /// Candidate (model, assignment) pairs examined before giving up.
    pub enumeration_cap: u128,
    /// Worker threads; proof and countermodel search run side by side
    /// when this is above 1.
    pub jobs: usize,
}

impl Default for SearchBudget {
    fn default() -> SearchBudget {
        SearchBudget {
            max_depth: 20,
            term_pool_cap: 4,
            contraction_cap: 2,
            model_cap: 3,
            node_cap: 20_000,
            enumeration_cap: 1 << 24,
            jobs: 1,
        }
    }
}

impl SearchBudget {
    /// Defaults overridden by `RL_MAX_DEPTH` and `RL_MAX_MODEL`.
    pub fn from_env() -> SearchBudget {
        let mut b = SearchBudget::default();
        if let Some(d) = env_usize("RL_MAX_DEPTH") {
            b.max_depth = d;
        }
        if let Some(m) = env_usize("RL_MAX_MODEL") {
            b.model_cap = m;
        }
        b
    }
}

fn env_usize(name: &str) -> Option<usize> {
    std::env::var(name).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnknownReason {
    BudgetExhausted,
    SignatureCap,
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnknownReason::BudgetExhausted => "budget-exhausted",
            UnknownReason::SignatureCap => "signature-cap",
        })
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Proved(Proof),
    Refuted(Model, Assignment),
    Unknown(UnknownReason),
}

impl Verdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted(..))
    }
}

fn canon(f: &Formula) -> Formula {
    f.canonical()
}

fn contains(fs: &[Formula], f: &Formula) -> bool {
    let c = canon(f);
    fs.iter().any(|g| canon(g) == c)
}

fn hash_of<T: Hash>(t: &T) -> u64 {
    let mut h = DefaultHasher::new();
    t.hash(&mut h);
    h.finish()
}

/// One side of a search sequent: formulas without repetition, with their
/// canonical forms.
#[derive(Clone, Default)]
struct Side {
    fs: Vec<Rc<Formula>>,
    canon: Vec<Rc<Formula>>,
    set: HashSet<Rc<Formula>>,
}

impl Side {
    fn has(&self, f: &Formula) -> bool {
        self.set.contains(&canon(f))
    }

    fn push(&mut self, f: Formula) -> bool {
        let c = Rc::new(canon(&f));
        if !self.set.insert(c.clone()) {
            return false;
        }
        self.fs.push(Rc::new(f));
        self.canon.push(c);
        true
    }

    fn without(&self, f: &Formula) -> Side {
        let c = canon(f);
        let mut out = self.clone();
        if let Some(i) = out.canon.iter().position(|g| **g == c) {
            out.fs.remove(i);
            out.canon.remove(i);
            out.set.remove(&c);
        }
        out
    }

    fn hash(&self) -> u64 {
        let mut hs: Vec<u64> = self.canon.iter().map(hash_of).collect();
        hs.sort_unstable();
        hash_of(&hs)
    }
}

/// A sequent read as a pair of sets.
#[derive(Clone, Default)]
struct Goal {
    ante: Side,
    succ: Side,
    /// Antecedent formulas before this index are closed under saturation.
    closed: usize,
}

impl Goal {
    fn new(s: &Sequent) -> Goal {
        let mut g = Goal::default();
        for f in &s.ante {
            g.ante.push(f.clone());
        }
        for f in &s.succ {
            g.succ.push(f.clone());
        }
        g
    }

    fn sequent(&self) -> Sequent {
        let v = |fs: &[Rc<Formula>]| fs.iter().map(|f| (**f).clone()).collect();
        Sequent::new(v(&self.ante.fs), v(&self.succ.fs))
    }

    fn key(&self) -> (u64, u64) {
        (self.ante.hash(), self.succ.hash())
    }
}

/// One saturation step, recorded for building the proof afterwards.
#[derive(Clone, Debug)]
enum EqStep {
    /// `t = t` added by `eqplus`.
    Refl(Term),
    /// `phi[x/b2]` added from `b1 = b2` and `phi[x/b1]` by `eqminus`.
    Rewrite { phi: Formula, b1: Term, b2: Term },
}

impl EqStep {
    fn added(&self) -> Formula {
        match self {
            EqStep::Refl(t) => Formula::eq(t.clone(), t.clone()),
            EqStep::Rewrite { phi, b2, .. } => substitute(phi, HOLE, b2),
        }
    }
}

const HOLE: &str = "x";

/// Atoms obtained from `atom` by replacing one occurrence of `b1` by `b2`,
/// each with the pattern that has a hole at that occurrence.
fn rewrites(atom: &Formula, b1: &Term) -> Vec<Formula> {
    let args: Vec<Term> = match atom {
        Formula::Pred(_, args) => args.clone(),
        Formula::Eq(s, t) => vec![s.clone(), t.clone()],
        _ => return Vec::new(),
    };
    let mut out = Vec::new();
    for i in 0..args.len() {
        if args[i] != *b1 {
            continue;
        }
        let mut a = args.clone();
        a[i] = Term::var(HOLE);
        out.push(match atom {
            Formula::Pred(p, _) => Formula::pred(p.clone(), a),
            _ => Formula::eq(a[0].clone(), a[1].clone()),
        });
    }
    out
}

/// Things done on the current branch, undone on the way back.
#[derive(Default)]
struct Branch {
    done: HashSet<(Rc<Formula>, Vec<Term>)>,
    uses: HashMap<Rc<Formula>, usize>,
    witnessed: HashSet<Rc<Formula>>,
    seen: HashSet<(u64, u64)>,
}

/// A rule application found by search.
#[derive(Clone, Debug)]
struct Step {
    rule: Rule,
    principal: Formula,
    ann: Annotations,
    keep: bool,
    sides: Vec<crate::kernel::Side>,
}

impl Step {
    fn new(rule: Rule, principal: &Formula, ann: Annotations, keep: bool) -> Step {
        let sides = sides_for(rule, principal, &ann.terms, ann.eigen.as_ref()).unwrap_or_default();
        Step {
            rule,
            principal: principal.clone(),
            ann,
            keep,
            sides,
        }
    }

    fn sides(&self, i: usize) -> &crate::kernel::Side {
        &self.sides[i]
    }

    /// The context left after removing the principal formula, and the
    /// premises.
    fn premises(&self, g: &Goal) -> Option<(Goal, Vec<Goal>)> {
        if self.sides.is_empty() {
            return None;
        }
        let ctx = if self.keep {
            g.clone()
        } else if crate::kernel::principal_on_left(self.rule) {
            let ante = g.ante.without(&self.principal);
            let c = canon(&self.principal);
            let removed_before = g.ante.canon[..g.closed].iter().any(|g| **g == c);
            let closed = g.closed - removed_before as usize;
            Goal {
                ante,
                succ: g.succ.clone(),
                closed,
            }
        } else {
            Goal {
                ante: g.ante.clone(),
                succ: g.succ.without(&self.principal),
                closed: g.closed,
            }
        };
        let prems = self
            .sides
            .iter()
            .map(|side| {
                let mut prem = ctx.clone();
                for f in &side.ante {
                    prem.ante.push(f.clone());
                }
                for f in &side.succ {
                    prem.succ.push(f.clone());
                }
                prem
            })
            .collect();
        Some((ctx, prems))
    }
}

/// A proof found by search, built into a derivation only once it is known
/// to be needed.
#[derive(Debug)]
enum Plan {
    Leaf(ProofNode),
    /// Saturate, then continue.
    Saturated(Vec<EqStep>, Box<Plan>),
    Rule(Step, Vec<Plan>),
}

impl Plan {
    /// The end-sequent when it can be smaller than the goal.
    fn conclusion(&self) -> Option<(&[Formula], &[Formula])> {
        match self {
            Plan::Leaf(p) => Some((&p.conclusion.ante, &p.conclusion.succ)),
            _ => None,
        }
    }
}

struct Searcher<'a> {
    budget: &'a SearchBudget,
    supply: NameSupply,
    nodes: usize,
    hit_depth: bool,
    br: Branch,
}

/// Maximum atoms added by one saturation.
const SATURATION_CAP: usize = 48;
const SATURATION_PASSES: usize = 3;

impl Searcher<'_> {
    fn out_of_nodes(&self) -> bool {
        self.nodes >= self.budget.node_cap
    }

    fn axiom(&self, g: &Goal) -> Option<ProofNode> {
        for (f, c) in g.ante.fs.iter().zip(&g.ante.canon) {
            if g.succ.set.contains(c) {
                return Some(ax(f));
            }
        }
        for f in &g.succ.fs {
            if let Formula::Eq(a, b) = &**f {
                if a == b {
                    return Some(eq_plus(ax(f), a));
                }
            }
        }
        None
    }

    /// Saturation steps and the goal they lead to. Only pairs involving a
    /// formula past `g.closed` are considered.
    fn saturate(&self, g: &Goal) -> (Vec<EqStep>, Goal) {
        let mut next = g.clone();
        let mut steps = Vec::new();
        let mut start = g.closed;
        for _ in 0..SATURATION_PASSES {
            let end = next.ante.fs.len();
            if start == end {
                break;
            }
            let fs = next.ante.fs.clone();
            let id = |f: &Formula| match f {
                Formula::Eq(a, b) if a != b => Some((a.clone(), b.clone())),
                _ => None,
            };
            let mut found = Vec::new();
            for (i, f) in fs.iter().enumerate() {
                let Some((b1, b2)) = id(f) else { continue };
                if i >= start {
                    found.push(EqStep::Refl(b1.clone()));
                }
                for (j, atom) in fs.iter().enumerate() {
                    if (i >= start || j >= start) && atom.is_atomic() {
                        for phi in rewrites(atom, &b1) {
                            found.push(EqStep::Rewrite {
                                phi,
                                b1: b1.clone(),
                                b2: b2.clone(),
                            });
                        }
                    }
                }
            }
            for step in found {
                if steps.len() >= SATURATION_CAP {
                    next.closed = start;
                    return (steps, next);
                }
                if next.ante.push(step.added()) {
                    steps.push(step);
                }
            }
            start = end;
        }
        next.closed = start;
        (steps, next)
    }

    /// Applies saturation steps below a proof of the saturated sequent.
    fn unwind(&self, mut p: ProofNode, steps: &[EqStep], base: &Sequent) -> ProofNode {
        for (i, step) in steps.iter().enumerate().rev() {
            let added = step.added();
            if !contains(&p.conclusion.ante, &added) {
                continue;
            }
            let mut before = base.clone();
            for s in &steps[..i] {
                before.ante.push(s.added());
            }
            let mut target = before.clone();
            target.ante.push(added.clone());
            let q = fit(p, &target).expect("saturated premise fits");
            p = match step {
                EqStep::Refl(t) => eq_plus(q, t),
                EqStep::Rewrite { phi, b1, b2 } => eq_minus(q, phi, HOLE, b1, b2),
            };
            p = fit(p, &before).expect("saturation conclusion contracts");
        }
        p
    }

    fn prove(&mut self, g: &Goal, depth: usize, saturate: bool) -> Option<Plan> {
        if let Some(p) = self.axiom(g) {
            return Some(Plan::Leaf(p));
        }
        if saturate {
            let (steps, next) = self.saturate(g);
            if !steps.is_empty() {
                let p = self.prove(&next, depth, false)?;
                return Some(Plan::Saturated(steps, Box::new(p)));
            }
            return self.expand(&next, depth);
        }
        self.expand(g, depth)
    }

    fn expand(&mut self, g: &Goal, depth: usize) -> Option<Plan> {
        if depth == 0 {
            self.hit_depth = true;
            return None;
        }
        if self.out_of_nodes() {
            return None;
        }
        let key = g.key();
        if !self.br.seen.insert(key) {
            return None;
        }
        self.nodes += 1;
        let r = match self.invertible(g, depth) {
            Some(r) => r,
            None => self.choices(g, depth),
        };
        self.br.seen.remove(&key);
        r
    }

    /// Applies `rule` at `g` with premises searched one by one. `keep`
    /// leaves the principal formula in the premises.
    fn apply(&mut self, g: &Goal, step: Step, depth: usize) -> Option<Plan> {
        let (ctx, prems) = step.premises(g)?;
        let mut kids = Vec::new();
        for (i, prem) in prems.iter().enumerate() {
            let p = self.prove(prem, depth - 1, true)?;
            if let Some((ante, succ)) = p.conclusion() {
                let side = &step.sides(i);
                let uses_side = side.ante.iter().all(|f| contains(ante, f)) && side.succ.iter().all(|f| contains(succ, f));
                let within_ctx = ante.iter().all(|f| ctx.ante.has(f)) && succ.iter().all(|f| ctx.succ.has(f));
                if !uses_side && within_ctx {
                    // The premise was proved without the rule's side formulas.
                    return Some(p);
                }
            }
            kids.push(p);
        }
        Some(Plan::Rule(step, kids))
    }

    fn build(&self, plan: Plan, g: &Goal) -> ProofNode {
        match plan {
            Plan::Leaf(p) => p,
            Plan::Saturated(steps, inner) => {
                let mut next = g.clone();
                for step in &steps {
                    next.ante.push(step.added());
                }
                let p = self.build(*inner, &next);
                self.unwind(p, &steps, &g.sequent())
            }
            Plan::Rule(step, kids) => {
                let (ctx, prems) = step.premises(g).expect("planned step applies");
                let proofs: Vec<ProofNode> = kids
                    .into_iter()
                    .zip(&prems)
                    .zip(&step.sides)
                    .map(|((kid, prem), side)| {
                        let p = self.build(kid, prem);
                        let target = Sequent::new(
                            side.ante.iter().cloned().chain(ctx.ante.fs.iter().map(|f| (**f).clone())).collect(),
                            ctx.succ.fs.iter().map(|f| (**f).clone()).chain(side.succ.iter().cloned()).collect(),
                        );
                        fit(p, &target).expect("premise fits")
                    })
                    .collect();
                let node = derive(step.rule, &step.principal, step.ann, proofs);
                let set = Goal::new(&node.conclusion).sequent();
                fit(node, &set).expect("conclusion contracts")
            }
        }
    }

    fn invertible(&mut self, g: &Goal, depth: usize) -> Option<Option<Plan>> {
        use Formula::*;
        let none = Annotations::none;
        // Non-branching first, then eigenparameter rules, then branching.
        for f in &g.ante.fs {
            let rule = match &**f {
                Not(_) => Rule::NotL,
                And(..) => Rule::AndL,
                Lambda(_, _, LamArg::Term(_)) => Rule::LamL,
                _ => continue,
            };
            return Some(self.apply(g, Step::new(rule, f, none(), false), depth));
        }
        for f in &g.succ.fs {
            let rule = match &**f {
                Not(_) => Rule::NotR,
                Or(..) => Rule::OrR,
                Imp(..) => Rule::ImpR,
                Lambda(_, _, LamArg::Term(_)) => Rule::LamR,
                _ => continue,
            };
            return Some(self.apply(g, Step::new(rule, f, none(), false), depth));
        }
        let both = || g.ante.fs.iter().map(|f| (true, &**f)).chain(g.succ.fs.iter().map(|f| (false, &**f)));
        for (left, f) in both() {
            let rule = match (left, f) {
                (true, Exists(..)) => Rule::ExistsL,
                (false, Forall(..)) => Rule::ForallR,
                _ => continue,
            };
            let a = self.supply.fresh_param("a");
            return Some(self.apply(g, Step::new(rule, f, Annotations::eigen(a), false), depth));
        }
        for (left, f) in both() {
            let rule = match (left, f) {
                (true, Or(..)) => Rule::OrL,
                (true, Imp(..)) => Rule::ImpL,
                (true, Iff(..)) => Rule::IffL,
                (false, And(..)) => Rule::AndR,
                (false, Iff(..)) => Rule::IffR,
                _ => continue,
            };
            return Some(self.apply(g, Step::new(rule, f, none(), false), depth));
        }
        for (f, c) in g.ante.fs.iter().zip(&g.ante.canon) {
            if let Lambda(_, _, LamArg::Iota(..)) = &**f {
                if self.br.witnessed.contains(c) {
                    continue;
                }
                self.br.witnessed.insert(c.clone());
                let a = self.supply.fresh_param("a");
                let r = self.apply(g, Step::new(Rule::Iota1L, f, Annotations::eigen(a), true), depth);
                self.br.witnessed.remove(c);
                return Some(r);
            }
        }
        None
    }

    fn pool(&mut self, g: &Goal) -> Vec<Term> {
        let mut out: Vec<Term> = Vec::new();
        for f in g.ante.fs.iter().chain(&g.succ.fs) {
            f.visit_terms(&mut |t| {
                if t.is_closed() && !out.contains(t) {
                    out.push(t.clone());
                }
            });
        }
        if out.is_empty() {
            out.push(self.supply.fresh_param("c"));
        }
        out.truncate(self.budget.term_pool_cap.max(1));
        out
    }

    fn choices(&mut self, g: &Goal, depth: usize) -> Option<Plan> {
        use Formula::*;
        let pool = self.pool(g);
        let cap = self.budget.contraction_cap + 1;
        let mut candidates: Vec<(Rule, &Formula, &Rc<Formula>, Annotations)> = Vec::new();
        let both = g
            .ante
            .fs
            .iter()
            .zip(&g.ante.canon)
            .map(|(f, c)| (true, f, c))
            .chain(g.succ.fs.iter().zip(&g.succ.canon).map(|(f, c)| (false, f, c)));
        for (left, f, c) in both {
            let (rule, x, body) = match (left, &**f) {
                (true, Forall(x, b)) => (Rule::ForallL, x, b),
                (false, Exists(x, b)) => (Rule::ExistsR, x, b),
                _ => continue,
            };
            for t in &pool {
                let inst = substitute(body, x, t);
                let present = if left { g.ante.has(&inst) } else { g.succ.has(&inst) };
                if !present {
                    candidates.push((rule, f, c, Annotations::term(t.clone())));
                }
            }
        }
        for (f, c) in g.ante.fs.iter().zip(&g.ante.canon) {
            if let Lambda(_, _, LamArg::Iota(..)) = &**f {
                for (i, b1) in pool.iter().enumerate() {
                    for b2 in &pool[i + 1..] {
                        let ann = Annotations {
                            terms: vec![b1.clone(), b2.clone()],
                            ..Annotations::default()
                        };
                        candidates.push((Rule::Iota2L, f, c, ann));
                    }
                }
            }
        }
        for (f, c) in g.succ.fs.iter().zip(&g.succ.canon) {
            if let Lambda(_, _, LamArg::Iota(..)) = &**f {
                for b in &pool {
                    candidates.push((Rule::IotaR, f, c, Annotations::term(b.clone())));
                }
            }
        }
        for (rule, f, c, mut ann) in candidates {
            let key = (c.clone(), ann.terms.clone());
            if self.br.done.contains(&key) || self.br.uses.get(c).copied().unwrap_or(0) >= cap {
                continue;
            }
            if self.out_of_nodes() {
                return None;
            }
            self.br.done.insert(key.clone());
            *self.br.uses.entry(c.clone()).or_insert(0) += 1;
            if rule == Rule::IotaR {
                ann.eigen = Some(self.supply.fresh_param("a"));
            }
            let r = self.apply(g, Step::new(rule, f, ann, true), depth);
            self.br.done.remove(&key);
            *self.br.uses.get_mut(c).unwrap() -= 1;
            if r.is_some() {
                return r;
            }
        }
        None
    }
}

/// What became of the proof search part.
enum Outcome {
    Proof(ProofNode),
    Exhausted,
}

fn search_proof(goal: &Sequent, budget: &SearchBudget) -> Outcome {
    let start = Goal::new(goal);
    let mut nodes = 0;
    for depth in 1..=budget.max_depth {
        let mut supply = NameSupply::new();
        supply.avoid_sequent(goal);
        let mut s = Searcher {
            budget,
            supply,
            nodes,
            hit_depth: false,
            br: Branch::default(),
        };
        if let Some(plan) = s.prove(&start, depth, true) {
            let p = s.build(plan, &start);
            return match fit(p, goal) {
                Ok(p) => Outcome::Proof(p),
                Err(_) => Outcome::Exhausted,
            };
        }
        nodes = s.nodes;
        if !s.hit_depth || s.out_of_nodes() {
            break;
        }
    }
    Outcome::Exhausted
}

fn search_model(goal: &Sequent, budget: &SearchBudget) -> Result<Option<(Model, Assignment)>, SemanticsError> {
    // Growing sizes, so a cap hit at a large size still leaves the small
    // ones searched.
    for n in 1..=budget.model_cap.max(1) {
        let opts = Enumeration {
            cap: budget.enumeration_cap,
            ..Enumeration::new(n)
        };
        if let Some(found) = semantics::search(goal, &opts)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// Searches for a proof of `goal` and for a countermodel.
///
/// A proof is reported only after the kernel accepts it; a countermodel
/// only if it falsifies the goal.
pub fn prove(goal: &Sequent, budget: &SearchBudget) -> Verdict {
    crate::stack::deep(|| prove_here(goal, budget))
}

fn prove_here(goal: &Sequent, budget: &SearchBudget) -> Verdict {
    let (proof, model) = if budget.jobs > 1 {
        rayon::join(|| search_proof(goal, budget), || search_model(goal, budget))
    } else {
        let m = search_model(goal, budget);
        if let Ok(Some(_)) = m {
            (Outcome::Exhausted, m)
        } else {
            (search_proof(goal, budget), m)
        }
    };
    if let Outcome::Proof(p) = proof {
        if let Ok(checked) = check_proof(&p, &KernelOptions::default()) {
            return Verdict::Proved(checked);
        }
    }
    match model {
        Ok(Some((m, v))) => {
            if semantics::eval_sequent(&m, &v, goal) == Ok(false) {
                Verdict::Refuted(m, v)
            } else {
                Verdict::Unknown(UnknownReason::BudgetExhausted)
            }
        }
        Ok(None) => Verdict::Unknown(UnknownReason::BudgetExhausted),
        Err(_) => Verdict::Unknown(UnknownReason::SignatureCap),
    }
}

/// Proof search alone, without looking for countermodels. The proof has
/// passed the kernel.
pub fn find_proof(goal: &Sequent, budget: &SearchBudget) -> Option<Proof> {
    crate::stack::deep(|| match search_proof(goal, budget) {
        Outcome::Proof(p) => check_proof(&p, &KernelOptions::default()).ok(),
        Outcome::Exhausted => None,
    })
}

/// Outcome of both directions of the Russellian equivalence for one
/// description.
#[derive(Clone, Debug)]
pub struct SuiteEntry {
    pub atom: Formula,
    pub left: Verdict,
    pub right: Verdict,
}

/// Runs [`prove`] on `atom => expansion` and `expansion => atom` for each
/// description.
pub fn decide_rlambda_suite(atoms: &[crate::kernel::IotaInstance], budget: &SearchBudget) -> Vec<SuiteEntry> {
    atoms
        .iter()
        .map(|inst| {
            let (a, e) = (inst.atom(), inst.expansion());
            SuiteEntry {
                atom: a.clone(),
                left: prove(&Sequent::new(vec![a.clone()], vec![e.clone()]), budget),
                right: prove(&Sequent::new(vec![e], vec![a]), budget),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::IotaInstance;
    use crate::parse::{parse_formula, parse_sequent};

    fn sq(s: &str) -> Sequent {
        parse_sequent(s).unwrap()
    }

    #[test]
    fn axiom_and_refl() {
        match prove(&sq("P(#a) => P(#a)"), &SearchBudget::default()) {
            Verdict::Proved(p) => assert_eq!(p.root().rule, Rule::Ax),
            v => panic!("{v:?}"),
        }
        assert!(prove(&sq("=> #a = #a"), &SearchBudget::default()).is_proved());
    }

    #[test]
    fn description_examples() {
        let b = SearchBudget::default();
        let v = prove(&sq("=> (lam x. P(x)) iota y. P(y) -> exists y. P(y)"), &b);
        assert!(v.is_proved(), "{v:?}");
        match prove(&sq("=> (lam x. P(x)) iota y. Q(y)"), &b) {
            Verdict::Refuted(m, _) => {
                assert_eq!(m.size, 1);
                assert!(m.preds.values().all(|(_, e)| e.is_empty()));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn identity_reasoning() {
        let b = SearchBudget::default();
        for s in [
            "#a = #b => #b = #a",
            "#a = #b, #b = #c => #a = #c",
            "#a = #b, P(#a) => P(#b)",
            "#a = #b, R(#a, #a) => R(#b, #a)",
            "=> forall x. forall y. (x = y -> (P(x) -> P(y)))",
        ] {
            assert!(prove(&sq(s), &b).is_proved(), "{s}");
        }
    }

    #[test]
    fn quantifiers() {
        let b = SearchBudget::default();
        assert!(prove(&sq("forall x. P(x) => exists x. P(x)"), &b).is_proved());
        assert!(prove(&sq("exists x. forall y. R(x, y) => forall y. exists x. R(x, y)"), &b).is_proved());
        assert!(prove(&sq("forall y. exists x. R(x, y) => exists x. forall y. R(x, y)"), &b).is_refuted());
    }

    #[test]
    fn rlambda_suite() {
        let f = |s: &str| parse_formula(s).unwrap();
        let insts = [
            IotaInstance::new(f("P(x)"), "x", f("Q(y)"), "y"),
            IotaInstance::new(f("x = x"), "x", f("Q(y)"), "y"),
            IotaInstance::new(f("P(x)"), "x", f("Q(y) & R(y)"), "y"),
        ];
        for e in decide_rlambda_suite(&insts, &SearchBudget::default()) {
            assert!(e.left.is_proved() && e.right.is_proved(), "{}: {:?} {:?}", e.atom, e.left, e.right);
        }
    }

    #[test]
    fn rlambda_pairs() {
        let f = |s: &str| parse_formula(s).unwrap();
        let pairs = [
            ("P(x)", "Q(y)"),
            ("x = x", "Q(y)"),
            ("P(x)", "Q(y) & R(y, y)"),
            ("~P(x)", "Q(y)"),
            ("P(x) | Q(x)", "R(y, y)"),
            ("R(x, #a)", "Q(y)"),
            ("P(x) -> Q(x)", "P(y)"),
            ("x = #a", "Q(y)"),
            ("P(x)", "y = #a"),
            ("exists z. R(x, z)", "Q(y)"),
        ];
        let insts: Vec<IotaInstance> = pairs.iter().map(|(p, q)| IotaInstance::new(f(p), "x", f(q), "y")).collect();
        for e in decide_rlambda_suite(&insts, &SearchBudget::default()) {
            assert!(e.left.is_proved() && e.right.is_proved(), "{}: {:?} {:?}", e.atom, e.left, e.right);
        }
    }

    #[test]
    fn env_overrides() {
        std::env::set_var("RL_MAX_DEPTH", "7");
        let b = SearchBudget::from_env();
        std::env::remove_var("RL_MAX_DEPTH");
        assert_eq!(b.max_depth, 7);
        assert_eq!(b.model_cap, 3);
    }
}
