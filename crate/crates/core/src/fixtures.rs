//! Golden proofs built from the standard derivations, and a corpus of
//! proofs with cuts made by composing them.

use crate::kernel::{
    ax, build_derived_iota, build_leibniz, build_rlambda, build_sym_trans, cut, derive, fit, BuildError, Direction,
    IotaInstance,
};
use crate::parse::{parse_formula, parse_sequent};
use crate::proof::{Annotations, ProofNode, Rule};
use crate::syntax::{substitute, Formula, Term};

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub proof: ProofNode,
}

impl Fixture {
    fn new(name: impl Into<String>, proof: ProofNode) -> Fixture {
        Fixture {
            name: name.into(),
            proof,
        }
    }
}

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap_or_else(|e| panic!("fixture formula {s}: {e}"))
}

fn fit_to(p: ProofNode, s: &str) -> ProofNode {
    fit(p, &parse_sequent(s).unwrap()).unwrap_or_else(|e| panic!("fixture {s}: {e}"))
}

fn param(s: &str) -> Term {
    Term::param(s)
}

/// `(lam x. P(x)) iota y. Q(y)`.
pub fn pq() -> IotaInstance {
    IotaInstance::new(f("P(x)"), "x", f("Q(y)"), "y")
}

/// Description instances with and without binder clashes.
pub fn iota_instances() -> Vec<IotaInstance> {
    [
        ("P(x)", "x", "Q(y)", "y"),
        ("~P(x)", "x", "Q(y)", "y"),
        ("P(y)", "y", "Q(y)", "y"),
        ("R(x, x)", "x", "exists x. R(y, x)", "y"),
        ("(lam z. P(z)) iota w. R(w, x)", "x", "Q(y) & P(y)", "y"),
        ("forall z. R(x, z)", "x", "P(y) | Q(y)", "y"),
    ]
    .into_iter()
    .map(|(psi, x, phi, y)| IotaInstance::new(f(psi), x, f(phi), y))
    .collect()
}

/// Formulas in `x` used for Leibniz samples and cut compositions.
pub const LEIBNIZ_TEMPLATES: &[&str] = &[
    "P(x)",
    "x = $c",
    "$c = x",
    "~P(x)",
    "P(x) & Q(x)",
    "P(x) | R(x, $c)",
    "P(x) -> Q(x)",
    "P(x) <-> Q(x)",
    "forall z. R(x, z)",
    "exists z. R(z, x)",
    "~(P(x) & ~Q(x))",
    "forall z. (R(x, z) -> exists w. R(w, x))",
    "(lam z. R(z, x)) $c",
    "(lam z. P(z)) x",
    "(lam z. P(z)) iota y. R(y, x)",
    "(lam z. R(z, x)) iota y. Q(y)",
    "(lam z. R(x, z)) iota y. (lam w. P(w)) iota v. R(v, y)",
    "exists z. (lam w. R(w, z)) iota y. R(y, x)",
];

/// `(lam x. ~Q(x)) iota y. Q(y) =>` by the derived left rule for
/// a witness.
pub fn derived_iota1() -> ProofNode {
    let inst = IotaInstance::new(f("~Q(x)"), "x", f("Q(y)"), "y");
    let premise = derive(Rule::NotL, &f("~Q(#a)"), Annotations::none(), vec![ax(&f("Q(#a)"))]);
    let premise = fit_to(premise, "Q(#a), ~Q(#a) =>");
    build_derived_iota(Rule::Iota1L, &inst, &[], Some(&param("a")), vec![premise]).expect("derived iota1l")
}

/// `(lam x. P(x)) iota y. Q(y), Q(#b1), Q(#b2) => Q(#b1)` by the derived
/// left rule for uniqueness.
pub fn derived_iota2() -> ProofNode {
    let p1 = fit_to(ax(&f("Q(#b1)")), "Q(#b1), Q(#b2) => Q(#b1)");
    let p2 = fit_to(ax(&f("Q(#b2)")), "Q(#b1), Q(#b2) => Q(#b2)");
    let p3 = fit_to(ax(&f("Q(#b1)")), "#b1 = #b2, Q(#b1), Q(#b2) => Q(#b1)");
    build_derived_iota(Rule::Iota2L, &pq(), &[param("b1"), param("b2")], None, vec![p1, p2, p3])
        .expect("derived iota2l")
}

/// `Q(#b), P(#b), forall z. (Q(z) -> z = #b) => (lam x. P(x)) iota y. Q(y)`
/// by the derived right rule.
pub fn derived_iotar() -> ProofNode {
    build_derived_iota(Rule::IotaR, &pq(), &[param("b")], Some(&param("a")), derived_iotar_premises())
        .expect("derived iotar")
}

/// `(lam x. P(x)) iota y. Q(y) => exists x. P(x)` by the derived left rule.
pub fn derived_iota1_pq() -> ProofNode {
    let premise = derive(Rule::ExistsR, &f("exists x. P(x)"), Annotations::term(param("a")), vec![ax(&f("P(#a)"))]);
    let premise = fit_to(premise, "Q(#a), P(#a) => exists x. P(x)");
    build_derived_iota(Rule::Iota1L, &pq(), &[], Some(&param("a")), vec![premise]).expect("derived iota1l")
}

/// Proofs of the standard derivations, all cut-free except the derived
/// description rules.
pub fn golden() -> Result<Vec<Fixture>, BuildError> {
    let mut out = Vec::new();
    for (i, t) in LEIBNIZ_TEMPLATES.iter().enumerate() {
        let p = build_leibniz(&f(t), "x", &param("b1"), &param("b2"))?;
        out.push(Fixture::new(format!("leibniz-{i}"), p));
    }
    out.push(Fixture::new(
        "sym-trans",
        build_sym_trans(&param("b1"), &param("b2"), &param("b")),
    ));
    for (i, inst) in iota_instances().iter().enumerate() {
        out.push(Fixture::new(format!("rlambda-left-{i}"), build_rlambda(inst, Direction::Left)?));
        out.push(Fixture::new(format!("rlambda-right-{i}"), build_rlambda(inst, Direction::Right)?));
    }
    out.push(Fixture::new("derived-iota1", derived_iota1()));
    out.push(Fixture::new("derived-iota2", derived_iota2()));
    out.push(Fixture::new("derived-iotar", derived_iotar()));
    out.push(Fixture::new("derived-iota1-pq", derived_iota1_pq()));
    Ok(out)
}

/// Proofs containing cuts: the derived description rules and cut
/// compositions of golden proofs.
pub fn cut_corpus() -> Result<Vec<Fixture>, BuildError> {
    let mut out = vec![
        Fixture::new("derived-iota1", derived_iota1()),
        Fixture::new("derived-iota2", derived_iota2()),
        Fixture::new("derived-iotar", derived_iotar()),
        Fixture::new("derived-iota1-pq", derived_iota1_pq()),
    ];
    let pa = f("P(#a)");
    out.push(Fixture::new("ax-ax", cut(ax(&pa), ax(&pa), &pa)));
    let (b1, b2, b3) = (param("b1"), param("b2"), param("b3"));
    for (i, t) in LEIBNIZ_TEMPLATES.iter().enumerate() {
        let phi = f(t);
        let l12 = build_leibniz(&phi, "x", &b1, &b2)?;
        let l23 = build_leibniz(&phi, "x", &b2, &b3)?;
        let mid = substitute(&phi, "x", &b2);
        let chain = cut(l12, l23, &mid);
        out.push(Fixture::new(format!("leibniz-chain-{i}"), chain.clone()));
        let l34 = build_leibniz(&phi, "x", &b3, &param("b4"))?;
        let end = substitute(&phi, "x", &b3);
        out.push(Fixture::new(format!("leibniz-chain3-{i}"), cut(chain, l34, &end)));
    }
    for (i, inst) in iota_instances().iter().enumerate() {
        let left = build_rlambda(inst, Direction::Left)?;
        let right = build_rlambda(inst, Direction::Right)?;
        let atom = inst.atom();
        let exp = inst.expansion();
        out.push(Fixture::new(
            format!("rlambda-on-atom-{i}"),
            cut(right.clone(), left.clone(), &atom),
        ));
        out.push(Fixture::new(format!("rlambda-on-expansion-{i}"), cut(left, right, &exp)));
    }
    let atom = pq().atom();
    out.push(Fixture::new(
        "derived-iotar-iota1",
        cut(derived_iotar(), derived_iota1_pq(), &atom),
    ));
    out.push(Fixture::new(
        "derived-iotar-iota2",
        cut(derived_iotar(), derived_iota2(), &atom),
    ));
    out.push(Fixture::new(
        "rlambda-right-iota1",
        cut(build_rlambda(&pq(), Direction::Right)?, derived_iota1_pq(), &atom),
    ));
    Ok(out)
}

/// The premises of [`derived_iotar`] closed by the primitive right rule.
pub fn iotar_primitive() -> ProofNode {
    let premises = derived_iotar_premises();
    let ann = Annotations {
        terms: vec![param("b")],
        eigen: Some(param("a")),
        ..Annotations::default()
    };
    derive(Rule::IotaR, &pq().atom(), ann, premises)
}

fn derived_iotar_premises() -> Vec<ProofNode> {
    let ctx = "Q(#b), P(#b), forall z. (Q(z) -> z = #b)";
    let p1 = fit_to(ax(&f("Q(#b)")), &format!("{ctx} => Q(#b)"));
    let p2 = fit_to(ax(&f("P(#b)")), &format!("{ctx} => P(#b)"));
    let inner = derive(
        Rule::ImpL,
        &f("Q(#a) -> #a = #b"),
        Annotations::none(),
        vec![
            fit_to(ax(&f("Q(#a)")), "Q(#a) => #a = #b, Q(#a)"),
            fit_to(ax(&f("#a = #b")), "#a = #b, Q(#a) => #a = #b"),
        ],
    );
    let inner = derive(
        Rule::ForallL,
        &f("forall z. (Q(z) -> z = #b)"),
        Annotations::term(param("a")),
        vec![inner],
    );
    vec![p1, p2, fit_to(inner, &format!("Q(#a), {ctx} => #a = #b"))]
}

/// `(lam x. P(x)) iota y. Q(y) => exists x. P(x)` by the primitive left
/// rule for a witness, with eigenparameter `#c`.
pub fn iota1_primitive() -> ProofNode {
    let premise = derive(Rule::ExistsR, &f("exists x. P(x)"), Annotations::term(param("c")), vec![ax(&f("P(#c)"))]);
    let premise = fit_to(premise, "Q(#c), P(#c) => exists x. P(x)");
    derive(Rule::Iota1L, &pq().atom(), Annotations::eigen(param("c")), vec![premise])
}

/// `(lam x. P(x)) iota y. Q(y), Q(#b1), Q(#b2) => Q(#b1)` by the primitive
/// left rule for uniqueness.
pub fn iota2_primitive() -> ProofNode {
    let p1 = fit_to(ax(&f("Q(#b1)")), "Q(#b1), Q(#b2) => Q(#b1), Q(#b1)");
    let p2 = fit_to(ax(&f("Q(#b2)")), "Q(#b1), Q(#b2) => Q(#b1), Q(#b2)");
    let p3 = fit_to(ax(&f("Q(#b1)")), "#b1 = #b2, Q(#b1), Q(#b2) => Q(#b1)");
    let ann = Annotations {
        terms: vec![param("b1"), param("b2")],
        ..Annotations::default()
    };
    derive(Rule::Iota2L, &pq().atom(), ann, vec![p1, p2, p3])
}
