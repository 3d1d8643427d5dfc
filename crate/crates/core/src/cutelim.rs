//! Cut elimination: regularization, cut degrees, the right and left
//! reductions, and the main loop that removes the topmost maximal cut.
//!
//! The reductions work on occurrence counts. `right_reduce` removes every
//! antecedent occurrence of the cut formula from the right proof and
//! `left_reduce` every succedent occurrence from the left one. Internally
//! the intermediate proofs are kept with each formula at most once per side
//! and brought to the exact shape a rule needs by [`fit`].

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::kernel::{
    build_sym_trans, check_proof, cut, decompose, fit, format_path, is_regular, rename_eigens_in_subtree,
    Decomposition, KernelOptions, Proof, Rejection,
};
use crate::proof::{ProofNode, Rule};
use crate::syntax::{Formula, NameSupply, Sequent, Term};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CutElimError {
    #[error("input rejected at {}: {}", format_path(&.0.path), .0.reason)]
    Rejected(Rejection),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal error: {0}")]
    Internal(String),
}

/// Cut degrees of a proof.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CutMetrics {
    /// Path and degree of every cut, in preorder.
    pub cut_degrees: Vec<(Vec<usize>, usize)>,
    /// The largest cut degree, 0 without cuts.
    pub proof_degree: usize,
    /// Number of cuts of the largest degree.
    pub maximal_cuts: usize,
}

impl CutMetrics {
    /// The measure the main loop decreases: (degree, number of maximal cuts).
    pub fn measure(&self) -> (usize, usize) {
        (self.proof_degree, self.maximal_cuts)
    }
}

fn cut_formula(n: &ProofNode) -> Option<Formula> {
    if n.rule != Rule::Cut {
        return None;
    }
    decompose(n, &KernelOptions::default()).ok().and_then(|d| d.cut_formula)
}

fn degree_opt(p: &ProofNode) -> Option<usize> {
    let mut d = None;
    p.walk(&mut |n| {
        if let Some(f) = cut_formula(n) {
            d = d.max(Some(f.degree()));
        }
    });
    d
}

pub fn metrics(p: &ProofNode) -> CutMetrics {
    let mut m = CutMetrics::default();
    collect_cuts(p, &mut Vec::new(), &mut m.cut_degrees);
    m.proof_degree = m.cut_degrees.iter().map(|(_, d)| *d).max().unwrap_or(0);
    m.maximal_cuts = m.cut_degrees.iter().filter(|(_, d)| *d == m.proof_degree).count();
    m
}

fn collect_cuts(n: &ProofNode, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, usize)>) {
    if let Some(f) = cut_formula(n) {
        out.push((path.clone(), f.degree()));
    }
    for (i, q) in n.premises.iter().enumerate() {
        path.push(i);
        collect_cuts(q, path, out);
        path.pop();
    }
}

fn supply_for(p: &ProofNode) -> NameSupply {
    let mut names = NameSupply::new();
    p.walk(&mut |n| {
        names.avoid_sequent(&n.conclusion);
        for t in n.ann.terms.iter().chain(n.ann.eigen.iter()) {
            names.avoid_term(t);
        }
    });
    names
}

fn node_at_mut<'a>(p: &'a mut ProofNode, path: &[usize]) -> &'a mut ProofNode {
    let mut cur = p;
    for &i in path {
        cur = &mut cur.premises[i];
    }
    cur
}

fn eigen_paths(n: &ProofNode, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if n.ann.eigen.as_ref().and_then(Term::as_param).is_some() {
        out.push(path.clone());
    }
    for (i, q) in n.premises.iter().enumerate() {
        path.push(i);
        eigen_paths(q, path, out);
        path.pop();
    }
}

fn mentions(n: &ProofNode, a: &str) -> usize {
    let mut k = 0;
    n.walk(&mut |m| {
        if m.conclusion.has_param(a) {
            k += 1;
        }
        if m.ann.terms.iter().chain(m.ann.eigen.iter()).any(|t| t.as_param() == Some(a)) {
            k += 1;
        }
    });
    k
}

fn rename_below(node: &mut ProofNode, a: &str, supply: &mut NameSupply) {
    let fresh = supply.fresh_param(a);
    node.ann.eigen = Some(fresh.clone());
    for q in &mut node.premises {
        *q = q.rename_param(a, &fresh);
    }
}

/// Makes every eigenparameter the eigenparameter of a single node and
/// confines it to that node's premises. The first node in preorder keeps
/// its name; later ones get fresh names. Conclusions and height are
/// unchanged, and a regular proof is returned as is.
///
/// Eigenparameters must be explicit, as in the output of [`check_proof`].
pub fn regularize(p: &ProofNode) -> ProofNode {
    if is_regular(p) {
        return p.clone();
    }
    let mut supply = supply_for(p);
    regularize_with(p, &mut supply)
}

fn regularize_with(p: &ProofNode, supply: &mut NameSupply) -> ProofNode {
    let mut out = p.clone();
    let mut paths = Vec::new();
    eigen_paths(&out, &mut Vec::new(), &mut paths);
    let mut claimed = HashSet::new();
    for path in &paths {
        let node = node_at_mut(&mut out, path);
        let a = node.ann.eigen.as_ref().and_then(Term::as_param).unwrap().to_string();
        if !claimed.insert(a.clone()) {
            rename_below(node, &a, supply);
            let b = node.ann.eigen.as_ref().and_then(Term::as_param).unwrap().to_string();
            claimed.insert(b);
        }
    }
    for path in &paths {
        let a = node_at_mut(&mut out, path)
            .ann
            .eigen
            .as_ref()
            .and_then(Term::as_param)
            .unwrap()
            .to_string();
        let total = mentions(&out, &a);
        let node = node_at_mut(&mut out, path);
        let inside: usize = node.premises.iter().map(|q| mentions(q, &a)).sum();
        if total > inside + 1 {
            rename_below(node, &a, supply);
        }
    }
    out
}

fn contains(fs: &[Formula], f: &Formula) -> bool {
    let c = f.canonical();
    fs.iter().any(|g| g.canonical() == c)
}

fn count(fs: &[Formula], f: &Formula) -> usize {
    let c = f.canonical();
    fs.iter().filter(|g| g.canonical() == c).count()
}

fn without(fs: &[Formula], f: &Formula) -> Vec<Formula> {
    let c = f.canonical();
    fs.iter().filter(|g| g.canonical() != c).cloned().collect()
}

fn without_one(fs: &[Formula], f: &Formula) -> Vec<Formula> {
    let c = f.canonical();
    let mut out = fs.to_vec();
    if let Some(i) = out.iter().position(|g| g.canonical() == c) {
        out.remove(i);
    }
    out
}

fn dedup(fs: impl IntoIterator<Item = Formula>) -> Vec<Formula> {
    let mut seen = HashSet::new();
    fs.into_iter().filter(|f| seen.insert(f.canonical())).collect()
}

fn cat(a: &[Formula], b: &[Formula]) -> Vec<Formula> {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

fn internal<E: fmt::Display>(e: E) -> CutElimError {
    CutElimError::Internal(e.to_string())
}

struct Reducer<'a> {
    opts: &'a KernelOptions,
    supply: NameSupply,
    /// Reduction cases fired, by name.
    cases: BTreeMap<String, usize>,
}

impl Reducer<'_> {
    fn decompose(&self, n: &ProofNode) -> Result<Decomposition, CutElimError> {
        decompose(n, self.opts).map_err(internal)
    }

    fn fit(&self, p: ProofNode, target: &Sequent) -> Result<ProofNode, CutElimError> {
        fit(p, target).map_err(internal)
    }

    /// Contracts duplicates on both sides.
    fn tidy(&self, p: ProofNode) -> Result<ProofNode, CutElimError> {
        let target = Sequent::new(dedup(p.conclusion.ante.clone()), dedup(p.conclusion.succ.clone()));
        if target.ante.len() == p.conclusion.ante.len() && target.succ.len() == p.conclusion.succ.len() {
            return Ok(p);
        }
        self.fit(p, &target)
    }

    /// Cut on `chi` after contracting both premises. A premise without
    /// `chi` already proves a subsequent of the result and is returned.
    fn cut_on(&self, p0: ProofNode, p1: ProofNode, chi: &Formula) -> Result<ProofNode, CutElimError> {
        if !contains(&p0.conclusion.succ, chi) {
            return self.tidy(p0);
        }
        if !contains(&p1.conclusion.ante, chi) {
            return self.tidy(p1);
        }
        let t0 = Sequent::new(
            dedup(p0.conclusion.ante.clone()),
            cat(&dedup(without(&p0.conclusion.succ, chi)), std::slice::from_ref(chi)),
        );
        let t1 = Sequent::new(
            cat(std::slice::from_ref(chi), &dedup(without(&p1.conclusion.ante, chi))),
            dedup(p1.conclusion.succ.clone()),
        );
        let p0 = self.fit(p0, &t0)?;
        let p1 = self.fit(p1, &t1)?;
        self.tidy(cut(p0, p1, chi))
    }

    /// Applies the rule of `dec` again below `premises`, with the context
    /// replaced by `ctx`.
    fn reapply(&self, dec: &Decomposition, node: &ProofNode, premises: Vec<ProofNode>, ctx: &Sequent) -> Result<ProofNode, CutElimError> {
        let p = self.reapply_raw(dec, node, premises, ctx)?;
        self.tidy(p)
    }

    fn reapply_raw(&self, dec: &Decomposition, node: &ProofNode, premises: Vec<ProofNode>, ctx: &Sequent) -> Result<ProofNode, CutElimError> {
        let mut fitted = Vec::new();
        for (q, side) in premises.into_iter().zip(&dec.sides) {
            let target = Sequent::new(cat(&side.ante, &ctx.ante), cat(&ctx.succ, &side.succ));
            fitted.push(self.fit(q, &target)?);
        }
        let conclusion = Sequent::new(cat(&dec.principal_ante, &ctx.ante), cat(&ctx.succ, &dec.principal_succ));
        let mut ann = node.ann.clone();
        if ann.eigen.is_none() {
            ann.eigen = dec.eigen.clone();
        }
        if ann.terms.is_empty() {
            ann.terms = dec.terms.clone();
        }
        Ok(ProofNode::new(dec.rule, conclusion, ann, fitted))
    }

    fn note(&mut self, case: &str) {
        *self.cases.entry(case.to_string()).or_insert(0) += 1;
    }

    /// `p` with parameter `a` replaced by `t`, eigenparameters renamed apart.
    fn subst(&mut self, p: &ProofNode, a: &Term, t: &Term) -> Result<ProofNode, CutElimError> {
        let a = a
            .as_param()
            .ok_or_else(|| CutElimError::Internal(format!("eigenparameter {a} is not a parameter")))?;
        let mut clash = vec![a];
        if let Some(b) = t.as_param() {
            clash.push(b);
        }
        let renamed = rename_eigens_in_subtree(p, &clash, &mut self.supply);
        Ok(renamed.rename_param(a, t))
    }

    /// `d1` ends with `phi` principal on the right. Removes every
    /// antecedent occurrence of `phi` from `d2`'s end-sequent. The result
    /// proves a sequent whose antecedent is drawn from `d1`'s antecedent and
    /// `d2`'s antecedent without `phi`, and whose succedent is drawn from
    /// `d1`'s succedent without the principal occurrence and `d2`'s
    /// succedent.
    fn right(&mut self, d1: &ProofNode, d2: &ProofNode, phi: &Formula) -> Result<ProofNode, CutElimError> {
        if !contains(&d2.conclusion.ante, phi) {
            return self.tidy(d2.clone());
        }
        if d1.rule == Rule::Ax {
            self.note("axiom");
            return self.tidy(d2.clone());
        }
        if d1.rule == Rule::WeakenR {
            self.note("weakening");
            return self.tidy(d1.premises[0].clone());
        }
        if d2.rule == Rule::Ax {
            self.note("axiom");
            return self.tidy(d1.clone());
        }
        let dec2 = self.decompose(d2)?;
        if d2.rule == Rule::Cut {
            let chi = dec2.cut_formula.clone().ok_or_else(|| internal("cut without cut formula"))?;
            let r0 = self.right(d1, &d2.premises[0], phi)?;
            let r1 = self.right(d1, &d2.premises[1], phi)?;
            return self.cut_on(r0, r1, &chi);
        }
        let mut reduced = Vec::new();
        for q in &d2.premises {
            reduced.push(self.right(d1, q, phi)?);
        }
        let principal = dec2.principal_ante.len() == 1 && dec2.principal_ante[0].canonical() == phi.canonical();
        if principal {
            self.note(&format!("{}/{}", d1.rule, d2.rule));
            return match d2.rule {
                Rule::WeakenL | Rule::ContractL => Ok(reduced.pop().unwrap()),
                _ => self.principal(d1, d2, &dec2, reduced),
            };
        }
        if dec2.principal_ante.iter().any(|f| f.canonical() == phi.canonical()) {
            return Err(CutElimError::Internal(format!(
                "{} introduces the cut formula {phi} but the left proof ends with {}",
                d2.rule, d1.rule
            )));
        }
        let delta1 = without_one(&d1.conclusion.succ, phi);
        let ctx = Sequent::new(
            dedup(cat(&without(&dec2.context.ante, phi), &d1.conclusion.ante)),
            dedup(cat(&dec2.context.succ, &delta1)),
        );
        self.reapply(&dec2, d2, reduced, &ctx)
    }

    /// The cut formula is principal on both sides. `r` are the premises of
    /// `d2` with the remaining occurrences already removed.
    fn principal(&mut self, d1: &ProofNode, d2: &ProofNode, dec2: &Decomposition, r: Vec<ProofNode>) -> Result<ProofNode, CutElimError> {
        let dec1 = self.decompose(d1)?;
        let q = &d1.premises;
        let s1 = &dec1.sides;
        let s2 = &dec2.sides;
        let mut r = r.into_iter();
        let mut next = || r.next().ok_or_else(|| internal("missing premise"));
        use Rule::*;
        match (d1.rule, d2.rule) {
            (NotR, NotL) => {
                let alpha = &s1[0].ante[0];
                let r0 = next()?;
                self.cut_on(r0, q[0].clone(), alpha)
            }
            (AndR, AndL) => {
                let (a, b) = (&s1[0].succ[0], &s1[1].succ[0]);
                let r0 = next()?;
                let x = self.cut_on(q[0].clone(), r0, a)?;
                self.cut_on(q[1].clone(), x, b)
            }
            (OrR, OrL) => {
                let (a, b) = (&s1[0].succ[0], &s1[0].succ[1]);
                let (r0, r1) = (next()?, next()?);
                let x = self.cut_on(q[0].clone(), r0, a)?;
                self.cut_on(x, r1, b)
            }
            (ImpR, ImpL) => {
                let (a, b) = (&s1[0].ante[0], &s1[0].succ[0]);
                let (r0, r1) = (next()?, next()?);
                let x = self.cut_on(q[0].clone(), r1, b)?;
                self.cut_on(r0, x, a)
            }
            (IffR, IffL) => {
                let (a, b) = (&s1[0].ante[0], &s1[0].succ[0]);
                let (r0, r1) = (next()?, next()?);
                let x = self.cut_on(r0, q[0].clone(), a)?;
                let y = self.cut_on(q[1].clone(), r1, a)?;
                self.cut_on(x, y, b)
            }
            (ForallR, ForallL) => {
                let a = dec1.eigen.as_ref().ok_or_else(|| internal("forallr without eigenparameter"))?;
                let t = &dec2.terms[0];
                let q0 = self.subst(&q[0], a, t)?;
                let r0 = next()?;
                self.cut_on(q0, r0, &s2[0].ante[0])
            }
            (ExistsR, ExistsL) => {
                let a = dec2.eigen.as_ref().ok_or_else(|| internal("existsl without eigenparameter"))?;
                let t = &dec1.terms[0];
                let r0 = next()?;
                let r0 = self.subst(&r0, a, t)?;
                self.cut_on(q[0].clone(), r0, &s1[0].succ[0])
            }
            (LamR, LamL) => {
                let r0 = next()?;
                self.cut_on(q[0].clone(), r0, &s1[0].succ[0])
            }
            (IotaR, Iota1L) => {
                let a = dec2.eigen.as_ref().ok_or_else(|| internal("iota1l without eigenparameter"))?;
                let b = &dec1.terms[0];
                let r0 = next()?;
                let r0 = self.subst(&r0, a, b)?;
                let (phi_b, psi_b) = (&s1[0].succ[0], &s1[1].succ[0]);
                let x = self.cut_on(q[1].clone(), r0, psi_b)?;
                self.cut_on(q[0].clone(), x, phi_b)
            }
            (IotaR, Iota2L) => {
                let a = dec1.eigen.as_ref().ok_or_else(|| internal("iotar without eigenparameter"))?;
                let b = &dec1.terms[0];
                let (b1, b2) = (&dec2.terms[0], &dec2.terms[1]);
                let qa = self.subst(&q[2], a, b1)?;
                let qb = self.subst(&q[2], a, b2)?;
                let (r0, r1, r2) = (next()?, next()?, next()?);
                let e1 = Formula::eq(b1.clone(), b.clone());
                let e2 = Formula::eq(b2.clone(), b.clone());
                let x1 = self.cut_on(r0, qa, &s2[0].succ[0])?;
                let x2 = self.cut_on(r1, qb, &s2[1].succ[0])?;
                let st = build_sym_trans(b1, b2, b);
                let y = self.cut_on(st, r2, &Formula::eq(b1.clone(), b2.clone()))?;
                let y = self.cut_on(x1, y, &e1)?;
                self.cut_on(x2, y, &e2)
            }
            (l, r) => Err(CutElimError::Internal(format!("no principal reduction for {l} against {r}"))),
        }
    }

    /// Removes every succedent occurrence of `phi` from `d1`'s end-sequent,
    /// cutting against `d2`, whose antecedent contains `phi`.
    fn left(&mut self, d1: &ProofNode, d2: &ProofNode, phi: &Formula) -> Result<ProofNode, CutElimError> {
        if !contains(&d1.conclusion.succ, phi) {
            return self.tidy(d1.clone());
        }
        if d1.rule == Rule::Ax {
            self.note("axiom");
            return self.tidy(d2.clone());
        }
        let dec1 = self.decompose(d1)?;
        if d1.rule == Rule::Cut {
            let chi = dec1.cut_formula.clone().ok_or_else(|| internal("cut without cut formula"))?;
            let r0 = self.left(&d1.premises[0], d2, phi)?;
            let r1 = self.left(&d1.premises[1], d2, phi)?;
            return self.cut_on(r0, r1, &chi);
        }
        let mut reduced = Vec::new();
        for q in &d1.premises {
            reduced.push(self.left(q, d2, phi)?);
        }
        let principal = dec1.principal_succ.len() == 1 && dec1.principal_succ[0].canonical() == phi.canonical();
        if principal && matches!(d1.rule, Rule::WeakenR | Rule::ContractR) {
            return Ok(reduced.pop().unwrap());
        }
        let pi = without_one(&d2.conclusion.ante, phi);
        let sigma = &d2.conclusion.succ;
        let ctx = Sequent::new(
            dedup(cat(&dec1.context.ante, &pi)),
            dedup(cat(&without(&dec1.context.succ, phi), sigma)),
        );
        if !principal {
            return self.reapply(&dec1, d1, reduced, &ctx);
        }
        // The rule is applied again without contracting, so that it stays
        // last and its principal occurrence is the only new one.
        let node = self.reapply_raw(&dec1, d1, reduced, &ctx)?;
        self.right(&node, d2, phi)
    }
}

fn check_reduction_input(d1: &ProofNode, d2: &ProofNode, phi: &Formula, opts: &KernelOptions) -> Result<(ProofNode, ProofNode), CutElimError> {
    let d1 = check_proof(d1, opts).map_err(CutElimError::Rejected)?.into_root();
    let d2 = check_proof(d2, opts).map_err(CutElimError::Rejected)?.into_root();
    for (name, d) in [("left", &d1), ("right", &d2)] {
        if let Some(k) = degree_opt(d) {
            if k >= phi.degree() {
                return Err(CutElimError::Precondition(format!(
                    "{name} proof has a cut of degree {k}, not below {}",
                    phi.degree()
                )));
            }
        }
    }
    if !contains(&d1.conclusion.succ, phi) {
        return Err(CutElimError::Precondition(format!("{phi} is not in the left succedent")));
    }
    if !contains(&d2.conclusion.ante, phi) {
        return Err(CutElimError::Precondition(format!("{phi} is not in the right antecedent")));
    }
    Ok((d1, d2))
}

fn reducer_for<'a>(d1: &ProofNode, d2: &ProofNode, opts: &'a KernelOptions) -> Reducer<'a> {
    let mut supply = supply_for(d1);
    d2.walk(&mut |n| supply.avoid_sequent(&n.conclusion));
    d2.walk(&mut |n| {
        for t in n.ann.terms.iter().chain(n.ann.eigen.iter()) {
            supply.avoid_term(t);
        }
    });
    Reducer {
        opts,
        supply,
        cases: BTreeMap::new(),
    }
}

fn repeat(fs: &[Formula], k: usize) -> Vec<Formula> {
    (0..k).flat_map(|_| fs.iter().cloned()).collect()
}

fn disjoint_eigens(d1: &ProofNode, d2: &ProofNode) -> bool {
    let mut names = HashSet::new();
    let mut ok = true;
    for d in [d1, d2] {
        let mut local = HashSet::new();
        d.walk(&mut |n| {
            if let Some(a) = n.ann.eigen.as_ref().and_then(Term::as_param) {
                local.insert(a.to_string());
            }
        });
        if !names.is_disjoint(&local) {
            ok = false;
        }
        names.extend(local);
    }
    let both = Sequent::new(cat(&d1.conclusion.ante, &d2.conclusion.ante), cat(&d1.conclusion.succ, &d2.conclusion.succ));
    ok && names.iter().all(|a| !both.has_param(a))
}

/// From a proof of `G => D, phi` with `phi` principal in its last rule and
/// a proof of `phi^k, P => S`, a proof of `G^k, P => D^k, S` whose cuts
/// are all of lower degree than `phi`.
pub fn right_reduce(d1: &ProofNode, d2: &ProofNode, phi: &Formula, opts: &KernelOptions) -> Result<ProofNode, CutElimError> {
    let (d1, d2) = check_reduction_input(d1, d2, phi, opts)?;
    let dec1 = decompose(&d1, opts).map_err(internal)?;
    let principal = d1.rule == Rule::Ax || dec1.principal_succ.iter().any(|f| f.canonical() == phi.canonical());
    if !principal || d1.rule == Rule::ContractR {
        return Err(CutElimError::Precondition(format!("{phi} is not principal in the left proof")));
    }
    if !is_regular(&d1) || !is_regular(&d2) || !disjoint_eigens(&d1, &d2) {
        return Err(CutElimError::Precondition("proofs are not regular".into()));
    }
    let mut red = reducer_for(&d1, &d2, opts);
    let out = red.right(&d1, &d2, phi)?;
    let k = count(&d2.conclusion.ante, phi);
    let target = Sequent::new(
        cat(&repeat(&d1.conclusion.ante, k), &without(&d2.conclusion.ante, phi)),
        cat(&repeat(&without_one(&d1.conclusion.succ, phi), k), &d2.conclusion.succ),
    );
    red.fit(out, &target)
}

/// From a proof of `G => D, phi^k` and a proof of `phi, P => S`, a proof
/// of `G, P^k => D, S^k` whose cuts are all of lower degree than `phi`.
pub fn left_reduce(d1: &ProofNode, d2: &ProofNode, phi: &Formula, opts: &KernelOptions) -> Result<ProofNode, CutElimError> {
    let (d1, d2) = check_reduction_input(d1, d2, phi, opts)?;
    if !is_regular(&d1) || !is_regular(&d2) || !disjoint_eigens(&d1, &d2) {
        return Err(CutElimError::Precondition("proofs are not regular".into()));
    }
    let mut red = reducer_for(&d1, &d2, opts);
    let out = red.left(&d1, &d2, phi)?;
    let k = count(&d1.conclusion.succ, phi);
    let target = Sequent::new(
        cat(&d1.conclusion.ante, &repeat(&without_one(&d2.conclusion.ante, phi), k)),
        cat(&without(&d1.conclusion.succ, phi), &repeat(&d2.conclusion.succ, k)),
    );
    red.fit(out, &target)
}

/// One iteration of the main loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub path: Vec<usize>,
    pub cut_formula: Formula,
    pub before: (usize, usize),
    pub after: (usize, usize),
    /// Number of nodes after the step.
    pub size: usize,
    /// Reduction cases applied, with how often each fired.
    pub cases: BTreeMap<String, usize>,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cut at {} on {} (degree {}): ({}, {}) -> ({}, {}), size {}",
            format_path(&self.path),
            self.cut_formula,
            self.cut_formula.degree(),
            self.before.0,
            self.before.1,
            self.after.0,
            self.after.1,
            self.size
        )?;
        for (i, (case, n)) in self.cases.iter().enumerate() {
            write!(f, "{}{case} x{n}", if i == 0 { "; " } else { ", " })?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Elimination {
    pub proof: Proof,
    pub trace: Vec<TraceStep>,
}

/// The first maximal cut in postorder: no maximal cut lies above it, and
/// of several such the one in the leftmost branch wins.
fn topmost_maximal(n: &ProofNode, degree: usize, path: &mut Vec<usize>) -> Option<Vec<usize>> {
    for (i, q) in n.premises.iter().enumerate() {
        path.push(i);
        let found = topmost_maximal(q, degree, path);
        path.pop();
        if found.is_some() {
            return found;
        }
    }
    match cut_formula(n) {
        Some(f) if f.degree() == degree => Some(path.clone()),
        _ => None,
    }
}

/// A cut-free proof of the end-sequent of `p`.
pub fn eliminate_cuts(p: &ProofNode, opts: &KernelOptions) -> Result<Elimination, CutElimError> {
    crate::stack::deep(|| eliminate_here(p, opts))
}

fn eliminate_here(p: &ProofNode, opts: &KernelOptions) -> Result<Elimination, CutElimError> {
    let mut cur = check_proof(p, opts).map_err(CutElimError::Rejected)?.into_root();
    let mut supply = supply_for(&cur);
    cur = regularize_with(&cur, &mut supply);
    let mut trace = Vec::new();
    loop {
        let m = metrics(&cur);
        if m.cut_degrees.is_empty() {
            break;
        }
        let path = topmost_maximal(&cur, m.proof_degree, &mut Vec::new()).expect("a maximal cut exists");
        let node = node_at_mut(&mut cur, &path);
        let dec = decompose(node, opts).map_err(internal)?;
        let chi = dec.cut_formula.ok_or_else(|| internal("cut without cut formula"))?;
        let mut red = Reducer {
            opts,
            supply: supply.clone(),
            cases: BTreeMap::new(),
        };
        let out = red.left(&node.premises[0], &node.premises[1], &chi)?;
        let out = red.fit(out, &node.conclusion)?;
        supply = red.supply;
        let cases = red.cases;
        *node = out;
        let checked = check_proof(&cur, opts).map_err(|r| {
            CutElimError::Internal(format!(
                "reduction of the cut at {} produced a rejected proof: {} at {}",
                format_path(&path),
                r.reason,
                format_path(&r.path)
            ))
        })?;
        cur = checked.into_root();
        cur = regularize_with(&cur, &mut supply);
        debug_assert!(is_regular(&cur));
        let after = metrics(&cur).measure();
        trace.push(TraceStep {
            path,
            cut_formula: chi,
            before: m.measure(),
            after,
            size: cur.size(),
            cases,
        });
    }
    let proof = check_proof(&cur, opts).map_err(|r| internal(r.reason))?;
    Ok(Elimination { proof, trace })
}

#[cfg(test)]
mod tests;
