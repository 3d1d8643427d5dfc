//! Proof construction: structural plumbing and the standard derivations
//! (Leibniz's law, symmetry/transitivity of identity, both directions of the
//! Russellian equivalence, and the description rules derived by cut).
//!
//! Builders are not trusted. Their output is meant to be passed to
//! [`super::check_proof`].

use std::collections::BTreeMap;

use crate::proof::{Annotations, ProofNode, Rule};
use crate::syntax::{substitute, Formula, LamArg, NameSupply, Sequent, Term};
use crate::translate::russell_expansion;

use super::{check_proof, principal_on_left, sides_for, KernelOptions};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FitError {
    #[error("cannot remove {0} from the {1}: it does not occur in the target")]
    Excess(Formula, &'static str),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct BuildError(pub String);

impl From<FitError> for BuildError {
    fn from(e: FitError) -> BuildError {
        BuildError(e.to_string())
    }
}

type Built = Result<ProofNode, BuildError>;

pub fn ax(f: &Formula) -> ProofNode {
    ProofNode::leaf(Rule::Ax, Sequent::new(vec![f.clone()], vec![f.clone()]))
}

/// Removes one alpha-equal occurrence of each of `remove` from `from`.
fn remove_all(from: &[Formula], remove: &[Formula]) -> Option<Vec<Formula>> {
    let mut out: Vec<Formula> = from.to_vec();
    let mut canon: Vec<Formula> = from.iter().map(Formula::canonical).collect();
    for r in remove {
        let c = r.canonical();
        let i = canon.iter().position(|f| *f == c)?;
        canon.remove(i);
        out.remove(i);
    }
    Some(out)
}

/// Applies a rule with one principal formula below `premises`, computing
/// the conclusion from the first premise.
///
/// Panics when the first premise lacks the side formulas; callers build
/// the premises to fit.
pub fn derive(rule: Rule, principal: &Formula, ann: Annotations, premises: Vec<ProofNode>) -> ProofNode {
    let sides = sides_for(rule, principal, &ann.terms, ann.eigen.as_ref())
        .unwrap_or_else(|| panic!("{principal} is not principal for {rule}"));
    let p0 = &premises[0].conclusion;
    let ante = remove_all(&p0.ante, &sides[0].ante)
        .unwrap_or_else(|| panic!("{rule}: premise {p0} lacks antecedent side formulas"));
    let succ = remove_all(&p0.succ, &sides[0].succ)
        .unwrap_or_else(|| panic!("{rule}: premise {p0} lacks succedent side formulas"));
    let conclusion = if principal_on_left(rule) {
        let mut a = vec![principal.clone()];
        a.extend(ante);
        Sequent::new(a, succ)
    } else {
        let mut s = succ;
        s.push(principal.clone());
        Sequent::new(ante, s)
    };
    ProofNode::new(rule, conclusion, ann, premises)
}

/// `(=-)` below `p`, whose antecedent holds `phi[x/b2]`; the conclusion
/// holds `b1 = b2, phi[x/b1]` instead.
pub fn eq_minus(p: ProofNode, phi: &Formula, x: &str, b1: &Term, b2: &Term) -> ProofNode {
    let from = substitute(phi, x, b2);
    let rest = remove_all(&p.conclusion.ante, &[from])
        .unwrap_or_else(|| panic!("eqminus: premise lacks {}", substitute(phi, x, b2)));
    let mut ante = vec![Formula::eq(b1.clone(), b2.clone()), substitute(phi, x, b1)];
    ante.extend(rest);
    let conclusion = Sequent::new(ante, p.conclusion.succ.clone());
    let ann = Annotations {
        terms: vec![b1.clone(), b2.clone()],
        ..Annotations::default()
    };
    ProofNode::new(Rule::EqMinus, conclusion, ann, vec![p])
}

/// `(=+)` below `p`, discharging `b = b` from its antecedent.
pub fn eq_plus(p: ProofNode, b: &Term) -> ProofNode {
    let refl = Formula::eq(b.clone(), b.clone());
    let ante = remove_all(&p.conclusion.ante, &[refl]).expect("eqplus: premise lacks b = b");
    let conclusion = Sequent::new(ante, p.conclusion.succ.clone());
    ProofNode::new(Rule::EqPlus, conclusion, Annotations::term(b.clone()), vec![p])
}

/// Cut on `chi`: `p0` proves `G => D, chi`, `p1` proves `chi, P => S`.
pub fn cut(p0: ProofNode, p1: ProofNode, chi: &Formula) -> ProofNode {
    let mut ante = p0.conclusion.ante.clone();
    ante.extend(remove_all(&p1.conclusion.ante, std::slice::from_ref(chi)).expect("cut: right premise lacks the cut formula"));
    let mut succ = remove_all(&p0.conclusion.succ, std::slice::from_ref(chi)).expect("cut: left premise lacks the cut formula");
    succ.extend(p1.conclusion.succ.iter().cloned());
    ProofNode::new(Rule::Cut, Sequent::new(ante, succ), Annotations::none(), vec![p0, p1])
}

/// Turns `s = t` in the antecedent of `p` into `t = s`.
pub fn flip(p: ProofNode, s: &Term, t: &Term) -> ProofNode {
    if s == t {
        return p;
    }
    let atom = Formula::eq(Term::var("x"), t.clone());
    let q = eq_minus(p, &atom, "x", t, s);
    eq_plus(q, t)
}

fn counts(fs: &[Formula]) -> BTreeMap<Formula, usize> {
    crate::syntax::multiset_counts(fs)
}

/// Adapts `p` to prove `target` by contractions followed by weakenings,
/// antecedent before succedent, then relabels the conclusion with the
/// target's presentation.
pub fn fit(p: ProofNode, target: &Sequent) -> Result<ProofNode, FitError> {
    let mut cur = p;
    for left in [true, false] {
        let (want, have) = if left {
            (counts(&target.ante), cur.conclusion.ante.clone())
        } else {
            (counts(&target.succ), cur.conclusion.succ.clone())
        };
        let mut seen = BTreeMap::new();
        for f in &have {
            let c = f.canonical();
            let n = seen.entry(c.clone()).or_insert(0usize);
            *n += 1;
            if *n > want.get(&c).copied().unwrap_or(0) {
                if want.get(&c).copied().unwrap_or(0) == 0 {
                    return Err(FitError::Excess(f.clone(), if left { "antecedent" } else { "succedent" }));
                }
                let rule = if left { Rule::ContractL } else { Rule::ContractR };
                cur = derive(rule, f, Annotations::none(), vec![cur]);
            }
        }
    }
    for left in [true, false] {
        let (list, have) = if left {
            (&target.ante, counts(&cur.conclusion.ante))
        } else {
            (&target.succ, counts(&cur.conclusion.succ))
        };
        let mut missing: BTreeMap<Formula, usize> = BTreeMap::new();
        for (c, n) in counts(list) {
            let h = have.get(&c).copied().unwrap_or(0);
            if n > h {
                missing.insert(c, n - h);
            }
        }
        for f in list {
            if let Some(n) = missing.get_mut(&f.canonical()) {
                if *n > 0 {
                    *n -= 1;
                    let rule = if left { Rule::WeakenL } else { Rule::WeakenR };
                    cur = derive(rule, f, Annotations::none(), vec![cur]);
                }
            }
        }
    }
    cur.conclusion = target.clone();
    Ok(cur)
}

fn seq(ante: Vec<Formula>, succ: Vec<Formula>) -> Sequent {
    Sequent::new(ante, succ)
}

fn cat(a: &[Formula], b: &[Formula]) -> Vec<Formula> {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

fn supply_for_formulas<'a>(fs: impl IntoIterator<Item = &'a Formula>, ts: &[&Term]) -> NameSupply {
    let mut names = NameSupply::new();
    for f in fs {
        names.avoid_formula(f);
    }
    for t in ts {
        names.avoid_term(t);
    }
    names
}

fn closed(t: &Term) -> bool {
    !matches!(t, Term::Var(_))
}

/// A proof of `b1 = b2, phi[x/b1] => phi[x/b2]`.
///
/// `phi` may have no free variable other than `x`; `b1`, `b2` must be
/// parameters or constants.
pub fn build_leibniz(phi: &Formula, x: &str, b1: &Term, b2: &Term) -> Built {
    if !closed(b1) || !closed(b2) {
        return Err(BuildError("identity terms must be parameters or constants".into()));
    }
    if let Some(v) = phi.free_vars().into_iter().find(|v| v != x) {
        return Err(BuildError(format!("free variable {v} other than {x}")));
    }
    let mut names = supply_for_formulas([phi], &[b1, b2]);
    Ok(leibniz(phi, x, b1, b2, &mut names))
}

/// `b1 = b2, phi[x/b2] => phi[x/b1]`.
fn reverse_leibniz(phi: &Formula, x: &str, b1: &Term, b2: &Term, names: &mut NameSupply) -> ProofNode {
    flip(leibniz(phi, x, b2, b1, names), b2, b1)
}

fn fit_ok(p: ProofNode, target: Sequent) -> ProofNode {
    fit(p, &target).unwrap_or_else(|e| panic!("builder produced an unfittable proof: {e}"))
}

fn leibniz(phi: &Formula, x: &str, b1: &Term, b2: &Term, names: &mut NameSupply) -> ProofNode {
    use Formula as F;
    let e = Formula::eq(b1.clone(), b2.clone());
    let f1 = substitute(phi, x, b1);
    let f2 = substitute(phi, x, b2);
    let target = seq(vec![e.clone(), f1.clone()], vec![f2.clone()]);
    if !phi.has_free_var(x) || b1 == b2 {
        return fit_ok(ax(&f1), target);
    }
    let none = Annotations::none;
    let proof = match phi {
        F::Pred(..) | F::Eq(..) => eq_minus(ax(&f2), phi, x, b1, b2),
        F::Not(a) => {
            let (a1, a2) = (substitute(a, x, b1), substitute(a, x, b2));
            let r = reverse_leibniz(a, x, b1, b2, names);
            let r = derive(Rule::NotR, &F::not(a2), none(), vec![r]);
            derive(Rule::NotL, &F::not(a1), none(), vec![r])
        }
        F::And(a, b) => {
            let (a1, a2, b1f, b2f) = parts(a, b, x, b1, b2);
            let g = vec![e.clone(), a1.clone(), b1f.clone()];
            let p0 = fit_ok(leibniz(a, x, b1, b2, names), seq(g.clone(), vec![a2.clone()]));
            let p1 = fit_ok(leibniz(b, x, b1, b2, names), seq(g, vec![b2f.clone()]));
            let r = derive(Rule::AndR, &F::and(a2, b2f), none(), vec![p0, p1]);
            derive(Rule::AndL, &F::and(a1, b1f), none(), vec![r])
        }
        F::Or(a, b) => {
            let (a1, a2, b1f, b2f) = parts(a, b, x, b1, b2);
            let d = vec![a2.clone(), b2f.clone()];
            let p0 = fit_ok(leibniz(a, x, b1, b2, names), seq(vec![e.clone(), a1.clone()], d.clone()));
            let p1 = fit_ok(leibniz(b, x, b1, b2, names), seq(vec![e.clone(), b1f.clone()], d));
            let r = derive(Rule::OrL, &F::or(a1, b1f), none(), vec![p0, p1]);
            derive(Rule::OrR, &F::or(a2, b2f), none(), vec![r])
        }
        F::Imp(a, b) => {
            let (a1, a2, b1f, b2f) = parts(a, b, x, b1, b2);
            let p0 = fit_ok(
                reverse_leibniz(a, x, b1, b2, names),
                seq(vec![e.clone(), a2.clone()], vec![b2f.clone(), a1.clone()]),
            );
            let p1 = fit_ok(
                leibniz(b, x, b1, b2, names),
                seq(vec![b1f.clone(), e.clone(), a2.clone()], vec![b2f.clone()]),
            );
            let r = derive(Rule::ImpL, &F::imp(a1, b1f), none(), vec![p0, p1]);
            derive(Rule::ImpR, &F::imp(a2, b2f), none(), vec![r])
        }
        F::Iff(a, b) => {
            let (a1, a2, b1f, b2f) = parts(a, b, x, b1, b2);
            let left_iff = F::iff(a1.clone(), b1f.clone());
            let q0 = fit_ok(
                reverse_leibniz(a, x, b1, b2, names),
                seq(vec![a2.clone(), e.clone()], vec![b2f.clone(), a1.clone(), b1f.clone()]),
            );
            let q1 = fit_ok(
                leibniz(b, x, b1, b2, names),
                seq(vec![a1.clone(), b1f.clone(), a2.clone(), e.clone()], vec![b2f.clone()]),
            );
            let r1 = derive(Rule::IffL, &left_iff, none(), vec![q0, q1]);
            let q0 = fit_ok(
                reverse_leibniz(b, x, b1, b2, names),
                seq(vec![b2f.clone(), e.clone()], vec![a2.clone(), a1.clone(), b1f.clone()]),
            );
            let q1 = fit_ok(
                leibniz(a, x, b1, b2, names),
                seq(vec![a1.clone(), b1f.clone(), b2f.clone(), e.clone()], vec![a2.clone()]),
            );
            let r2 = derive(Rule::IffL, &left_iff, none(), vec![q0, q1]);
            let g = vec![left_iff.clone(), e.clone()];
            let r1 = fit_ok(r1, seq(cat(&[a2.clone()], &g), vec![b2f.clone()]));
            let r2 = fit_ok(r2, seq(cat(&[b2f.clone()], &g), vec![a2.clone()]));
            derive(Rule::IffR, &F::iff(a2, b2f), none(), vec![r1, r2])
        }
        F::Forall(z, a) | F::Exists(z, a) => {
            let c = names.fresh_param("c");
            let body = substitute(a, z, &c);
            let l = leibniz(&body, x, b1, b2, names);
            if matches!(phi, F::Forall(..)) {
                let r = derive(Rule::ForallL, &f1, Annotations::term(c.clone()), vec![l]);
                derive(Rule::ForallR, &f2, Annotations::eigen(c), vec![r])
            } else {
                let r = derive(Rule::ExistsR, &f2, Annotations::term(c.clone()), vec![l]);
                derive(Rule::ExistsL, &f1, Annotations::eigen(c), vec![r])
            }
        }
        F::Lambda(z, psi, LamArg::Term(t)) => {
            let theta = substitute(psi, z, t);
            let l = leibniz(&theta, x, b1, b2, names);
            let r = derive(Rule::LamL, &f1, none(), vec![l]);
            derive(Rule::LamR, &f2, none(), vec![r])
        }
        F::Lambda(z, psi, LamArg::Iota(y, theta)) => {
            leibniz_description(z, psi, y, theta, x, b1, b2, &f1, &f2, names)
        }
    };
    fit_ok(proof, target)
}

fn parts(a: &Formula, b: &Formula, x: &str, b1: &Term, b2: &Term) -> (Formula, Formula, Formula, Formula) {
    (
        substitute(a, x, b1),
        substitute(a, x, b2),
        substitute(b, x, b1),
        substitute(b, x, b2),
    )
}

fn iota_parts(f: &Formula) -> (&str, &Formula, &str, &Formula) {
    match f {
        Formula::Lambda(z, psi, LamArg::Iota(y, theta)) => (z, psi, y, theta),
        _ => unreachable!("not a description atom"),
    }
}

/// The description case of Leibniz's law: `L1 = (lam z. psi1) iota y. theta1`
/// and `R2` likewise with `b2`.
#[allow(clippy::too_many_arguments)]
fn leibniz_description(
    z: &str,
    psi: &Formula,
    y: &str,
    theta: &Formula,
    x: &str,
    b1: &Term,
    b2: &Term,
    l1: &Formula,
    r2: &Formula,
    names: &mut NameSupply,
) -> ProofNode {
    let e = Formula::eq(b1.clone(), b2.clone());
    let a = names.fresh_param("a");
    let c = names.fresh_param("c");
    let (z1, psi1, y1, theta1) = iota_parts(l1);
    let (_, _, y2, theta2) = iota_parts(r2);
    let theta1_a = substitute(theta1, y1, &a);
    let psi1_a = substitute(psi1, z1, &a);
    let theta2_c = substitute(theta2, y2, &c);
    let theta1_c = substitute(theta1, y1, &c);
    let c_eq_a = Formula::eq(c.clone(), a.clone());

    // The uniqueness premise, by iota2l on the left description.
    let ctx = vec![theta2_c.clone(), theta1_a.clone(), psi1_a.clone(), e.clone()];
    let q0 = fit_ok(
        reverse_leibniz(&substitute(theta, y, &c), x, b1, b2, names),
        seq(ctx.clone(), vec![c_eq_a.clone(), theta1_c]),
    );
    let q1 = fit_ok(ax(&theta1_a), seq(ctx.clone(), vec![c_eq_a.clone(), theta1_a.clone()]));
    let q2 = fit_ok(ax(&c_eq_a), seq(cat(&[c_eq_a.clone()], &ctx), vec![c_eq_a.clone()]));
    let d = derive(
        Rule::Iota2L,
        l1,
        Annotations {
            terms: vec![c.clone(), a.clone()],
            ..Annotations::default()
        },
        vec![q0, q1, q2],
    );

    let gamma = vec![theta1_a.clone(), psi1_a.clone(), e.clone(), l1.clone()];
    let (_, _, _, _) = iota_parts(r2);
    let theta2_a = substitute(theta2, y2, &a);
    let psi2_a = {
        let (z2, psi2, _, _) = iota_parts(r2);
        substitute(psi2, z2, &a)
    };
    let p0 = fit_ok(
        leibniz(&substitute(theta, y, &a), x, b1, b2, names),
        seq(gamma.clone(), vec![theta2_a]),
    );
    let p1 = fit_ok(
        leibniz(&substitute(psi, z, &a), x, b1, b2, names),
        seq(gamma.clone(), vec![psi2_a]),
    );
    let p2 = fit_ok(d, seq(cat(&[theta2_c], &gamma), vec![c_eq_a]));
    let r = derive(
        Rule::IotaR,
        r2,
        Annotations {
            terms: vec![a.clone()],
            eigen: Some(c),
            at: None,
        },
        vec![p0, p1, p2],
    );
    let r = derive(Rule::Iota1L, l1, Annotations::eigen(a), vec![r]);
    derive(Rule::ContractL, l1, Annotations::none(), vec![r])
}

/// A cut-free proof of `b1 = b, b2 = b => b1 = b2` from `ax`, `eqminus`
/// and `eqplus` alone.
pub fn build_sym_trans(b1: &Term, b2: &Term, b: &Term) -> ProofNode {
    let goal = Formula::eq(b1.clone(), b2.clone());
    let p = ax(&goal);
    let p = eq_minus(p, &Formula::eq(b1.clone(), Term::var("x")), "x", b, b2);
    let p = eq_minus(p, &Formula::eq(Term::var("x"), b2.clone()), "x", b2, b);
    let p = eq_plus(p, b2);
    let target = seq(
        vec![Formula::eq(b1.clone(), b.clone()), Formula::eq(b2.clone(), b.clone())],
        vec![goal],
    );
    fit_ok(p, target)
}

/// Which half of the Russellian equivalence to prove.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Description atom to its expansion.
    Left,
    /// Expansion to description atom.
    Right,
}

/// The data of a description atom `(lam x. psi) iota y. phi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IotaInstance {
    pub psi: Formula,
    pub x: String,
    pub phi: Formula,
    pub y: String,
}

impl IotaInstance {
    pub fn new(psi: Formula, x: impl Into<String>, phi: Formula, y: impl Into<String>) -> IotaInstance {
        IotaInstance {
            psi,
            x: x.into(),
            phi,
            y: y.into(),
        }
    }

    pub fn from_atom(f: &Formula) -> Option<IotaInstance> {
        match f {
            Formula::Lambda(x, psi, LamArg::Iota(y, phi)) => {
                Some(IotaInstance::new((**psi).clone(), x.clone(), (**phi).clone(), y.clone()))
            }
            _ => None,
        }
    }

    pub fn atom(&self) -> Formula {
        Formula::lam_iota(self.x.clone(), self.psi.clone(), self.y.clone(), self.phi.clone())
    }

    pub fn expansion(&self) -> Formula {
        russell_expansion(&self.x, &self.psi, &self.y, &self.phi)
    }

    fn check(&self) -> Result<(), BuildError> {
        let atom = self.atom();
        if let Some(v) = atom.free_vars().into_iter().next() {
            return Err(BuildError(format!("description atom has free variable {v}")));
        }
        Ok(())
    }
}

/// Pieces of `exists u. (forall y. (phi <-> y = u)) & psi'` instantiated
/// at `t`: the conjunction, its universal conjunct, and the instance of the
/// biconditional at `s`.
struct Expansion {
    t: Formula,
}

impl Expansion {
    fn at(&self, t: &Term) -> Formula {
        match &self.t {
            Formula::Exists(u, body) => substitute(body, u, t),
            _ => unreachable!(),
        }
    }

    fn forall_at(&self, t: &Term) -> Formula {
        match self.at(t) {
            Formula::And(a, _) => *a,
            _ => unreachable!(),
        }
    }

    fn iff_at(&self, t: &Term, s: &Term) -> Formula {
        match self.forall_at(t) {
            Formula::Forall(y, body) => substitute(&body, &y, s),
            _ => unreachable!(),
        }
    }

    fn psi_at(&self, t: &Term) -> Formula {
        match self.at(t) {
            Formula::And(_, b) => *b,
            _ => unreachable!(),
        }
    }
}

/// A cut-free proof of one direction of
/// `(lam x. psi) iota y. phi <-> exists x. (forall y. (phi <-> y = x)) & psi`.
pub fn build_rlambda(inst: &IotaInstance, dir: Direction) -> Built {
    inst.check()?;
    let mut names = supply_for_formulas([&inst.psi, &inst.phi], &[]);
    Ok(rlambda(inst, dir, &mut names))
}

fn rlambda(inst: &IotaInstance, dir: Direction, names: &mut NameSupply) -> ProofNode {
    let l = inst.atom();
    let t = inst.expansion();
    let ex = Expansion { t: t.clone() };
    let phi_at = |s: &Term| substitute(&inst.phi, &inst.y, s);
    let psi_at = |s: &Term| substitute(&inst.psi, &inst.x, s);
    match dir {
        Direction::Left => {
            let a = names.fresh_param("a");
            let a1 = names.fresh_param("a");
            let (phi_a, psi_a, phi_a1) = (phi_at(&a), psi_at(&a), phi_at(&a1));
            let a1_eq_a = Formula::eq(a1.clone(), a.clone());
            let gamma = vec![phi_a.clone(), psi_a.clone(), l.clone()];

            let ctx = vec![phi_a1.clone(), phi_a.clone(), psi_a.clone()];
            let q0 = fit_ok(ax(&phi_a1), seq(ctx.clone(), vec![a1_eq_a.clone(), phi_a1.clone()]));
            let q1 = fit_ok(ax(&phi_a), seq(ctx.clone(), vec![a1_eq_a.clone(), phi_a.clone()]));
            let q2 = fit_ok(ax(&a1_eq_a), seq(cat(&[a1_eq_a.clone()], &ctx), vec![a1_eq_a.clone()]));
            let d = derive(
                Rule::Iota2L,
                &l,
                Annotations {
                    terms: vec![a1.clone(), a.clone()],
                    ..Annotations::default()
                },
                vec![q0, q1, q2],
            );
            let first = fit_ok(d, seq(cat(&[phi_a1.clone()], &gamma), vec![a1_eq_a.clone()]));
            let lz = leibniz(&inst.phi, &inst.y, &a, &a1, names);
            let second = fit_ok(flip(lz, &a, &a1), seq(cat(&[a1_eq_a], &gamma), vec![phi_a1]));
            let r = derive(Rule::IffR, &ex.iff_at(&a, &a1), Annotations::none(), vec![first, second]);
            let r = derive(Rule::ForallR, &ex.forall_at(&a), Annotations::eigen(a1), vec![r]);
            let p1 = fit_ok(ax(&psi_a), seq(gamma.clone(), vec![ex.psi_at(&a)]));
            let r = derive(Rule::AndR, &ex.at(&a), Annotations::none(), vec![r, p1]);
            let r = derive(Rule::ExistsR, &t, Annotations::term(a.clone()), vec![r]);
            let r = derive(Rule::Iota1L, &l, Annotations::eigen(a), vec![r]);
            derive(Rule::ContractL, &l, Annotations::none(), vec![r])
        }
        Direction::Right => {
            let b = names.fresh_param("b");
            let a = names.fresh_param("a");
            let (phi_b, psi_b, phi_a) = (phi_at(&b), ex.psi_at(&b), phi_at(&a));
            let fb = ex.forall_at(&b);
            let gamma = vec![fb.clone(), psi_b.clone()];
            let b_eq_b = Formula::eq(b.clone(), b.clone());
            let a_eq_b = Formula::eq(a.clone(), b.clone());

            let refl = eq_plus(ax(&b_eq_b), &b);
            let q0 = fit_ok(refl, seq(vec![psi_b.clone()], vec![phi_b.clone(), phi_b.clone(), b_eq_b.clone()]));
            let q1 = fit_ok(ax(&phi_b), seq(vec![phi_b.clone(), b_eq_b, psi_b.clone()], vec![phi_b.clone()]));
            let r0 = derive(Rule::IffL, &ex.iff_at(&b, &b), Annotations::none(), vec![q0, q1]);
            let p0 = derive(Rule::ForallL, &fb, Annotations::term(b.clone()), vec![r0]);

            let p1 = fit_ok(ax(&psi_at(&b)), seq(gamma.clone(), vec![psi_at(&b)]));

            let q0 = fit_ok(
                ax(&phi_a),
                seq(vec![phi_a.clone(), psi_b.clone()], vec![a_eq_b.clone(), phi_a.clone(), a_eq_b.clone()]),
            );
            let q1 = fit_ok(
                ax(&a_eq_b),
                seq(vec![phi_a.clone(), a_eq_b.clone(), phi_a.clone(), psi_b.clone()], vec![a_eq_b.clone()]),
            );
            let r2 = derive(Rule::IffL, &ex.iff_at(&b, &a), Annotations::none(), vec![q0, q1]);
            let r2 = derive(Rule::ForallL, &fb, Annotations::term(a.clone()), vec![r2]);
            let p2 = fit_ok(r2, seq(cat(&[phi_a], &gamma), vec![a_eq_b]));

            let r = derive(
                Rule::IotaR,
                &l,
                Annotations {
                    terms: vec![b.clone()],
                    eigen: Some(a),
                    at: None,
                },
                vec![p0, p1, p2],
            );
            let r = derive(Rule::AndL, &ex.at(&b), Annotations::none(), vec![r]);
            derive(Rule::ExistsL, &t, Annotations::eigen(b), vec![r])
        }
    }
}

fn supply_for_proofs(ps: &[ProofNode], inst: &IotaInstance) -> NameSupply {
    let mut names = supply_for_formulas([&inst.psi, &inst.phi], &[]);
    for p in ps {
        p.walk(&mut |n| {
            names.avoid_sequent(&n.conclusion);
            for t in n.ann.terms.iter().chain(n.ann.eigen.iter()) {
                names.avoid_term(t);
            }
        });
    }
    names
}

/// Derives a description rule from the Russellian equivalence by cut.
///
/// * `Iota1L`: `terms` empty, `eigen` is `a`, one premise
///   `phi[y/a], psi[x/a], G => D`.
/// * `Iota2L`: `terms` are `b1, b2`, premises `G => D, phi[y/b1]`,
///   `G => D, phi[y/b2]` and `b1 = b2, G => D`.
/// * `IotaR`: `terms` is `b`, `eigen` is `a`, premises `G => D, phi[y/b]`,
///   `G => D, psi[x/b]` and `phi[y/a], G => D, a = b`.
pub fn build_derived_iota(
    rule: Rule,
    inst: &IotaInstance,
    terms: &[Term],
    eigen: Option<&Term>,
    premises: Vec<ProofNode>,
) -> Built {
    inst.check()?;
    for (i, p) in premises.iter().enumerate() {
        check_proof(p, &KernelOptions::default())
            .map_err(|e| BuildError(format!("premise {i} does not check: {e}")))?;
    }
    if premises.len() != rule.arity() {
        return Err(BuildError(format!("{rule} takes {} premises", rule.arity())));
    }
    let mut names = supply_for_proofs(&premises, inst);
    let t = inst.expansion();
    let ex = Expansion { t: t.clone() };
    let phi_at = |s: &Term| substitute(&inst.phi, &inst.y, s);
    let psi_at = |s: &Term| substitute(&inst.psi, &inst.x, s);
    let missing = |what: &str| BuildError(format!("premise lacks {what}"));
    let mut premises = premises;
    match rule {
        Rule::Iota1L => {
            let a = eigen.ok_or_else(|| BuildError("iota1l needs an eigenparameter".into()))?;
            let p = premises.remove(0);
            let (phi_a, psi_a) = (phi_at(a), psi_at(a));
            let gamma = remove_all(&p.conclusion.ante, &[phi_a.clone(), psi_a.clone()])
                .ok_or_else(|| missing("phi[y/a], psi[x/a]"))?;
            let delta = p.conclusion.succ.clone();
            let a_eq_a = Formula::eq(a.clone(), a.clone());
            let refl = eq_plus(ax(&a_eq_a), a);
            let q0 = fit(refl, &seq(cat(&[psi_a.clone()], &gamma), cat(&delta, &[phi_a.clone(), a_eq_a.clone()])))?;
            let q1 = fit(p, &seq(cat(&[phi_a, a_eq_a, psi_a], &gamma), delta))?;
            let r = derive(Rule::IffL, &ex.iff_at(a, a), Annotations::none(), vec![q0, q1]);
            let r = derive(Rule::ForallL, &ex.forall_at(a), Annotations::term(a.clone()), vec![r]);
            let r = derive(Rule::AndL, &ex.at(a), Annotations::none(), vec![r]);
            let r = derive(Rule::ExistsL, &t, Annotations::eigen(a.clone()), vec![r]);
            let left = rlambda(inst, Direction::Left, &mut names);
            Ok(cut(left, r, &t))
        }
        Rule::Iota2L => {
            let [b1, b2] = terms else {
                return Err(BuildError("iota2l needs terms b1, b2".into()));
            };
            let p3 = premises.pop().expect("three premises");
            let p2 = premises.pop().expect("three premises");
            let p1 = premises.pop().expect("three premises");
            let e = Formula::eq(b1.clone(), b2.clone());
            let gamma = remove_all(&p3.conclusion.ante, &[e]).ok_or_else(|| missing("b1 = b2"))?;
            let delta = p3.conclusion.succ.clone();
            let a = names.fresh_param("a");
            let s = eq_minus(p3, &Formula::eq(b1.clone(), Term::var("x")), "x", &a, b2);
            let s = flip(s, &a, b2);
            let (b1_eq_a, b2_eq_a) = (Formula::eq(b1.clone(), a.clone()), Formula::eq(b2.clone(), a.clone()));
            let (iff1, iff2) = (ex.iff_at(&a, b1), ex.iff_at(&a, b2));
            let (phi_b1, phi_b2) = (phi_at(b1), phi_at(b2));
            let q0 = fit(p2, &seq(cat(&[b1_eq_a.clone()], &gamma), cat(&delta, &[phi_b2.clone(), b2_eq_a.clone()])))?;
            let q1 = fit(s, &seq(cat(&[phi_b2, b2_eq_a, b1_eq_a.clone()], &gamma), delta.clone()))?;
            let inner = derive(Rule::IffL, &iff2, Annotations::none(), vec![q0, q1]);
            let q0 = fit(p1, &seq(cat(&[iff2.clone()], &gamma), cat(&delta, &[phi_b1.clone(), b1_eq_a.clone()])))?;
            let q1 = fit(inner, &seq(cat(&[phi_b1, b1_eq_a, iff2], &gamma), delta.clone()))?;
            let outer = derive(Rule::IffL, &iff1, Annotations::none(), vec![q0, q1]);
            let fa = ex.forall_at(&a);
            let r = derive(Rule::ForallL, &fa, Annotations::term(b2.clone()), vec![outer]);
            let r = derive(Rule::ForallL, &fa, Annotations::term(b1.clone()), vec![r]);
            let r = derive(Rule::ContractL, &fa, Annotations::none(), vec![r]);
            let r = derive(Rule::WeakenL, &ex.psi_at(&a), Annotations::none(), vec![r]);
            let r = fit(r, &seq(cat(&[fa, ex.psi_at(&a)], &gamma), delta))?;
            let r = derive(Rule::AndL, &ex.at(&a), Annotations::none(), vec![r]);
            let r = derive(Rule::ExistsL, &t, Annotations::eigen(a), vec![r]);
            let left = rlambda(inst, Direction::Left, &mut names);
            Ok(cut(left, r, &t))
        }
        Rule::IotaR => {
            let [b] = terms else {
                return Err(BuildError("iotar needs a term b".into()));
            };
            let a = eigen.ok_or_else(|| BuildError("iotar needs an eigenparameter".into()))?;
            let p3 = premises.pop().expect("three premises");
            let p2 = premises.pop().expect("three premises");
            let p1 = premises.pop().expect("three premises");
            let phi_b = phi_at(b);
            let gamma = p1.conclusion.ante.clone();
            let delta = remove_all(&p1.conclusion.succ, std::slice::from_ref(&phi_b)).ok_or_else(|| missing("phi[y/b]"))?;
            let lz = leibniz(&inst.phi, &inst.y, b, a, &mut names);
            let fl = flip(lz, b, a);
            let c1 = cut(p1, fl, &phi_b);
            let a_eq_b = Formula::eq(a.clone(), b.clone());
            let phi_a = phi_at(a);
            let q0 = fit(p3, &seq(cat(&[phi_a.clone()], &gamma), cat(&delta, &[a_eq_b.clone()])))?;
            let q1 = fit(c1, &seq(cat(&[a_eq_b], &gamma), cat(&delta, &[phi_a])))?;
            let r = derive(Rule::IffR, &ex.iff_at(b, a), Annotations::none(), vec![q0, q1]);
            let r = derive(Rule::ForallR, &ex.forall_at(b), Annotations::eigen(a.clone()), vec![r]);
            let p2 = fit(p2, &seq(gamma.clone(), cat(&delta, &[ex.psi_at(b)])))?;
            let r = derive(Rule::AndR, &ex.at(b), Annotations::none(), vec![r, p2]);
            let r = derive(Rule::ExistsR, &t, Annotations::term(b.clone()), vec![r]);
            let right = rlambda(inst, Direction::Right, &mut names);
            Ok(cut(r, right, &t))
        }
        other => Err(BuildError(format!("{other} is not a description rule"))),
    }
}
