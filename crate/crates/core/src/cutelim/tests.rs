use super::*;
use crate::fixtures;
use crate::kernel::{ax, build_rlambda, cut, derive, fit, Direction};
use crate::parse::{parse_formula, parse_sequent};
use crate::proof::Annotations;

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn sq(s: &str) -> Sequent {
    parse_sequent(s).unwrap()
}

fn opts() -> KernelOptions {
    KernelOptions::default()
}

fn checks(p: &ProofNode) -> ProofNode {
    check_proof(p, &opts()).unwrap_or_else(|e| panic!("{e:?}\n{p}")).into_root()
}

#[test]
fn degrees() {
    let dd = f("(lam x. P(x)) iota y. Q(y)");
    assert_eq!(dd.degree(), 2);
    let pa = f("P(#a)");
    let m = metrics(&cut(ax(&pa), ax(&pa), &pa));
    assert_eq!(m.measure(), (0, 1));
    assert_eq!(metrics(&ax(&pa)).measure(), (0, 0));
    let p = cut(
        build_rlambda(&fixtures::pq(), Direction::Right).unwrap(),
        build_rlambda(&fixtures::pq(), Direction::Left).unwrap(),
        &dd,
    );
    let m = metrics(&p);
    assert_eq!(m.cut_degrees, vec![(vec![], 2)]);
}

fn forall_twice() -> ProofNode {
    // Both conjuncts proved with eigenparameter #a.
    let branch = || {
        let inner = derive(Rule::ForallL, &f("forall x. P(x)"), Annotations::term(Term::param("a")), vec![ax(&f("P(#a)"))]);
        derive(Rule::ForallR, &f("forall x. P(x)"), Annotations::eigen(Term::param("a")), vec![inner])
    };
    let conj = f("(forall x. P(x)) & (forall x. P(x))");
    derive(Rule::AndR, &conj, Annotations::none(), vec![branch(), branch()])
}

#[test]
fn regularize_renames_later_duplicates() {
    let p = checks(&forall_twice());
    assert!(!is_regular(&p));
    let r = regularize(&p);
    assert!(is_regular(&r));
    assert_eq!(r.premises[0].ann.eigen, Some(Term::param("a")));
    assert_eq!(r.premises[1].ann.eigen, Some(Term::param("a1")));
    assert_eq!(r.height(), p.height());
    assert_eq!(r.conclusion, p.conclusion);
    checks(&r);
    assert_eq!(regularize(&r), r);
    let golden = checks(&fixtures::derived_iotar());
    assert_eq!(regularize(&golden), golden);
}

#[test]
fn regularize_moves_eigen_off_foreign_occurrences() {
    // #a is an eigenparameter in one branch and a free parameter in the other.
    let left = derive(
        Rule::ForallR,
        &f("forall x. P(x) | ~P(x)"),
        Annotations::eigen(Term::param("a")),
        vec![derive(Rule::OrR, &f("P(#a) | ~P(#a)"), Annotations::none(), vec![derive(
            Rule::NotR,
            &f("~P(#a)"),
            Annotations::none(),
            vec![ax(&f("P(#a)"))],
        )])],
    );
    let right = fit(ax(&f("Q(#a)")), &sq("Q(#a) => Q(#a)")).unwrap();
    let both = derive(
        Rule::AndR,
        &f("(forall x. P(x) | ~P(x)) & Q(#a)"),
        Annotations::none(),
        vec![fit(left, &sq("Q(#a) => forall x. P(x) | ~P(x)")).unwrap(), right],
    );
    let p = checks(&both);
    assert!(!is_regular(&p));
    let r = regularize(&p);
    assert!(is_regular(&r));
    checks(&r);
}

#[test]
fn right_reduce_base_cases() {
    let pa = f("P(#a)");
    let d2 = fit(ax(&pa), &sq("P(#a), Q => P(#a)")).unwrap();
    let out = right_reduce(&ax(&pa), &d2, &pa, &opts()).unwrap();
    assert!(out.conclusion.same_as(&sq("P(#a), Q => P(#a)")));
    checks(&out);
    let d1 = fit(ax(&pa), &sq("P(#a), R => P(#a)")).unwrap();
    let e = right_reduce(&d1, &ax(&pa), &pa, &opts()).unwrap_err();
    assert!(matches!(e, CutElimError::Precondition(_)), "{e}");
}

#[test]
fn right_reduce_description_cases() {
    let atom = fixtures::pq().atom();
    let d1 = checks(&fixtures::iotar_primitive());
    let gamma = "Q(#b), P(#b), forall z. (Q(z) -> z = #b)";
    let d2 = checks(&fixtures::iota1_primitive());
    let out = checks(&right_reduce(&d1, &d2, &atom, &opts()).unwrap());
    assert!(out.conclusion.same_as(&sq(&format!("{gamma} => exists x. P(x)"))));
    let m = metrics(&out);
    assert_eq!(m.cut_degrees.len(), 2);
    assert!(m.cut_degrees.iter().all(|(_, d)| *d < atom.degree()));

    let d2 = checks(&fixtures::iota2_primitive());
    let out = checks(&right_reduce(&d1, &d2, &atom, &opts()).unwrap());
    assert!(out.conclusion.same_as(&sq(&format!("{gamma}, Q(#b1), Q(#b2) => Q(#b1)"))));
    assert!(metrics(&out).cut_degrees.iter().all(|(_, d)| *d < atom.degree()));
}

#[test]
fn right_reduce_conjunction() {
    let a = f("P(#a)");
    let b = f("Q(#a)");
    let conj = f("P(#a) & Q(#a)");
    let d1 = derive(
        Rule::AndR,
        &conj,
        Annotations::none(),
        vec![
            fit(ax(&a), &sq("P(#a), Q(#a) => P(#a)")).unwrap(),
            fit(ax(&b), &sq("P(#a), Q(#a) => Q(#a)")).unwrap(),
        ],
    );
    let d2 = derive(Rule::AndL, &conj, Annotations::none(), vec![fit(ax(&a), &sq("P(#a), Q(#a) => P(#a)")).unwrap()]);
    let out = right_reduce(&d1, &d2, &conj, &opts()).unwrap();
    assert!(out.conclusion.same_as(&sq("P(#a), Q(#a) => P(#a)")));
    let out = checks(&out);
    assert!(metrics(&out).cut_degrees.iter().all(|(_, d)| *d < conj.degree()));
}

#[test]
fn left_reduce_two_occurrences() {
    // P(#a) twice on the right, parametric down to a weakened axiom.
    let pa = f("P(#a)");
    let d1 = fit(ax(&pa), &sq("P(#a) => P(#a), P(#a)")).unwrap();
    let d2 = fit(ax(&pa), &sq("P(#a), R => P(#a)")).unwrap();
    let out = left_reduce(&d1, &d2, &pa, &opts()).unwrap();
    assert!(out.conclusion.same_as(&sq("P(#a), R, R => P(#a), P(#a)")));
    assert!(checks(&out).is_cut_free());
}

#[test]
fn eliminate_degenerate_and_cut_free() {
    let pa = f("P(#a)");
    let e = eliminate_cuts(&cut(ax(&pa), ax(&pa), &pa), &opts()).unwrap();
    assert_eq!(e.proof.root().rule, Rule::Ax);
    assert_eq!(e.trace.len(), 1);
    assert_eq!(e.trace[0].cases.get("axiom"), Some(&1));
    let golden = checks(&build_rlambda(&fixtures::pq(), Direction::Left).unwrap());
    let e = eliminate_cuts(&golden, &opts()).unwrap();
    assert!(e.trace.is_empty());
}

#[test]
fn eliminate_cut_corpus() {
    for fx in fixtures::cut_corpus().unwrap() {
        let before = checks(&fx.proof);
        let e = eliminate_cuts(&before, &opts()).unwrap_or_else(|e| panic!("{}: {e}", fx.name));
        assert!(e.proof.root().is_cut_free(), "{}", fx.name);
        assert!(e.proof.end_sequent().same_as(&before.conclusion), "{}", fx.name);
        for s in &e.trace {
            assert!(s.after < s.before, "{}: {s}", fx.name);
        }
    }
}

#[test]
fn trace_names_description_case() {
    let p = cut(fixtures::iotar_primitive(), fixtures::iota1_primitive(), &fixtures::pq().atom());
    let e = eliminate_cuts(&p, &opts()).unwrap();
    let first = &e.trace[0];
    assert!(first.cases.contains_key("iotar/iota1l"), "{first}");
    assert!(first.to_string().contains("iotar/iota1l x1"), "{first}");
}
