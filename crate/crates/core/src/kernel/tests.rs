use super::*;
use crate::parse::{parse_formula, parse_proof, parse_sequent};

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn sq(s: &str) -> Sequent {
    parse_sequent(s).unwrap()
}

fn p(s: &str) -> Term {
    Term::param(s)
}

fn step(rule: Rule, concl: &str, prems: &[&str], ann: Annotations) -> Result<Decomposition, String> {
    let prems: Vec<Sequent> = prems.iter().map(|s| sq(s)).collect();
    let refs: Vec<&Sequent> = prems.iter().collect();
    check_step(rule, &sq(concl), &refs, &ann, &KernelOptions::default())
}

fn checks(node: &ProofNode) -> Proof {
    check_proof(node, &KernelOptions::default()).unwrap_or_else(|e| panic!("{e}\n{node}"))
}

#[test]
fn axiom() {
    assert!(step(Rule::Ax, "P(#a) => P(#a)", &[], Annotations::none()).is_ok());
    assert!(step(Rule::Ax, "P(#a) => P(#b)", &[], Annotations::none()).is_err());
    assert!(step(Rule::Ax, "Q, P(#a) => P(#a)", &[], Annotations::none()).is_err());
    let proof = checks(&ax(&f("P(#a)")));
    assert_eq!(proof.height(), 1);
}

#[test]
fn forall_right_eigen() {
    assert!(step(Rule::ForallR, "=> forall x. P(x)", &["=> P(#a)"], Annotations::eigen(p("a"))).is_ok());
    assert!(step(Rule::ForallR, "=> forall x. P(x)", &["=> P(#a)"], Annotations::none()).is_ok());
    let e = step(
        Rule::ForallR,
        "P(#a) => forall x. P(x)",
        &["=> P(#a)"],
        Annotations::eigen(p("a")),
    )
    .unwrap_err();
    assert!(e.contains("eigenvariable #a occurs in context"), "{e}");
    let e = step(Rule::ForallR, "P(#a) => forall x. P(x)", &["P(#a) => P(#a)"], Annotations::none()).unwrap_err();
    assert!(e.contains("eigenvariable #a occurs in context"), "{e}");
}

#[test]
fn iota2_schema() {
    let d = step(
        Rule::Iota2L,
        "(lam x. P(x)) iota y. Q(y) =>",
        &["=> Q(#b1)", "=> Q(#b2)", "#b1 = #b2 =>"],
        Annotations::none(),
    )
    .unwrap();
    assert_eq!(d.terms, vec![p("b1"), p("b2")]);
}

#[test]
fn iota1_and_iotar() {
    assert!(step(
        Rule::Iota1L,
        "(lam x. P(x)) iota y. Q(y) => R",
        &["Q(#a), P(#a) => R"],
        Annotations::none()
    )
    .is_ok());
    assert!(step(
        Rule::Iota1L,
        "(lam x. P(x)) iota y. Q(y), Q(#a) => R",
        &["Q(#a), P(#a), Q(#a) => R"],
        Annotations::none()
    )
    .is_err());
    let ok = step(
        Rule::IotaR,
        "S => (lam x. P(x)) iota y. Q(y)",
        &["S => Q(#b)", "S => P(#b)", "Q(#a), S => #a = #b"],
        Annotations::none(),
    )
    .unwrap();
    assert_eq!(ok.eigen, Some(p("a")));
    let e = step(
        Rule::IotaR,
        "=> (lam x. P(x)) iota y. Q(y)",
        &["=> Q(#a)", "=> P(#a)", "Q(#a) => #a = #a"],
        Annotations::none(),
    )
    .unwrap_err();
    assert!(e.contains("coincides"), "{e}");
}

#[test]
fn iotar_eigen_in_abstract_body() {
    let concl = "=> (lam x. R(x, #a)) iota y. Q(y)";
    let prems = ["=> Q(#b)", "=> R(#b, #a)", "Q(#a) => #a = #b"];
    assert!(step(Rule::IotaR, concl, &prems, Annotations::none()).is_err());
    let prems: Vec<Sequent> = prems.iter().map(|s| sq(s)).collect();
    let refs: Vec<&Sequent> = prems.iter().collect();
    let lax = KernelOptions { lax_iota_eigen: true };
    assert!(check_step(Rule::IotaR, &sq(concl), &refs, &Annotations::none(), &lax).is_ok());
}

#[test]
fn eq_minus_needs_atom() {
    assert!(step(Rule::EqMinus, "#a = #b, P(#a) => P(#b)", &["P(#b) => P(#b)"], Annotations::none()).is_ok());
    let e = step(Rule::EqMinus, "#a = #b, ~P(#a) => P(#b)", &["~P(#b) => P(#b)"], Annotations::none()).unwrap_err();
    assert!(e.contains("not atomic"), "{e}");
    assert!(step(Rule::EqMinus, "#b = #a, P(#a) => P(#b)", &["P(#b) => P(#b)"], Annotations::none()).is_err());
    assert!(step(Rule::EqMinus, "$c = #b, P($c) => P(#b)", &["P(#b) => P(#b)"], Annotations::none()).is_ok());
}

#[test]
fn lambda_terms_may_be_constants() {
    assert!(step(Rule::LamL, "(lam x. P(x)) $c => P($c)", &["P($c) => P($c)"], Annotations::none()).is_ok());
    assert!(step(Rule::LamR, "P(#a) => (lam x. P(x)) #a", &["P(#a) => P(#a)"], Annotations::none()).is_ok());
}

#[test]
fn cut_and_structural() {
    assert!(step(Rule::Cut, "P => R", &["P => Q", "Q => R"], Annotations::none()).is_ok());
    assert!(step(Rule::Cut, "P => R, S", &["P => Q", "Q => R"], Annotations::none()).is_err());
    assert!(step(Rule::ContractL, "P => Q", &["P, P => Q"], Annotations::none()).is_ok());
    assert!(step(Rule::WeakenR, "P => Q, R", &["P => Q"], Annotations::none()).is_ok());
    assert!(step(Rule::EqPlus, "P => Q", &["#b = #b, P => Q"], Annotations::none()).is_ok());
}

#[test]
fn alpha_variants_match() {
    assert!(step(Rule::Ax, "forall x. P(x) => forall y. P(y)", &[], Annotations::none()).is_ok());
    assert!(step(
        Rule::ForallL,
        "forall x. (lam z. R(z, x)) iota y. Q(y) => S",
        &["(lam w. R(w, #b)) iota v. Q(v) => S"],
        Annotations::none()
    )
    .is_ok());
}

#[test]
fn rejection_path_is_leftmost_innermost() {
    let src = "(andr (seq () (P & Q)) (ax (seq (P) (Q))) (ax (seq (Q) (P))))";
    let node = parse_proof(src).unwrap();
    let e = check_proof(&node, &KernelOptions::default()).unwrap_err();
    assert_eq!(e.path, vec![0]);
    assert!(e.to_string().starts_with("REJECT path=root.0 reason="));
}

#[test]
fn fit_contracts_and_weakens() {
    let base = ax(&f("P"));
    let target = sq("Q, P => P, R");
    let fitted = fit(base, &target).unwrap();
    assert!(fitted.conclusion.same_as(&target));
    checks(&fitted);
    let doubled = fit(fitted.clone(), &sq("Q, P => P, R")).unwrap();
    checks(&doubled);
    assert!(fit(fitted, &sq("P => P")).is_err());
}

#[test]
fn flip_turns_identity() {
    let base = ax(&f("#s = #t"));
    let flipped = flip(base, &p("s"), &p("t"));
    assert!(flipped.conclusion.same_as(&sq("#t = #s => #s = #t")));
    checks(&flipped);
}

#[test]
fn leibniz_samples() {
    for (phi, want_rules) in [
        ("P(x)", vec![Rule::EqMinus, Rule::Ax]),
        ("Q", vec![Rule::WeakenL, Rule::Ax]),
    ] {
        let proof = build_leibniz(&f(phi), "x", &p("b1"), &p("b2")).unwrap();
        assert_eq!(proof.rules_preorder(), want_rules);
        checks(&proof);
    }
    for phi in [
        "~P(x) & (Q(x) | R(x, x))",
        "P(x) -> Q(x) <-> ~R(x, #c)",
        "forall y. exists z. R(y, x) & z = x",
        "(lam z. R(z, x)) #d",
        "(lam z. R(z, x)) iota y. S(y, x)",
        "(lam x. P(x)) iota y. R(y, x)",
        "(lam z. (lam w. R(w, z) & P(x)) iota v. S(v, x)) iota y. ~S(y, x)",
    ] {
        let proof = build_leibniz(&f(phi), "x", &p("b1"), &p("b2")).unwrap();
        let want = sq(&format!(
            "#b1 = #b2, {} => {}",
            substitute(&f(phi), "x", &p("b1")),
            substitute(&f(phi), "x", &p("b2"))
        ));
        assert!(proof.conclusion.same_as(&want), "{phi}: {}", proof.conclusion);
        checks(&proof);
        assert!(proof.is_cut_free());
    }
}

#[test]
fn leibniz_description_rule_order() {
    let proof = build_leibniz(&f("(lam z. R(z, x)) iota y. S(y, x)"), "x", &p("b1"), &p("b2")).unwrap();
    let order: Vec<Rule> = proof
        .rules_preorder()
        .into_iter()
        .filter(|r| matches!(r, Rule::Iota2L | Rule::IotaR | Rule::Iota1L | Rule::ContractL))
        .collect();
    assert_eq!(&order[..3], &[Rule::ContractL, Rule::Iota1L, Rule::IotaR]);
    assert!(order.contains(&Rule::Iota2L));
    assert_eq!(proof.rule, Rule::ContractL);
    assert_eq!(proof.premises[0].rule, Rule::Iota1L);
}

#[test]
fn sym_trans_shape() {
    let proof = build_sym_trans(&p("b1"), &p("b2"), &p("b"));
    assert_eq!(
        proof.rules_preorder(),
        vec![Rule::EqPlus, Rule::EqMinus, Rule::EqMinus, Rule::Ax]
    );
    assert!(proof.conclusion.same_as(&sq("#b1 = #b, #b2 = #b => #b1 = #b2")));
    checks(&proof);
    let same = build_sym_trans(&p("t"), &p("t"), &p("b"));
    assert!(same.conclusion.same_as(&sq("#t = #b, #t = #b => #t = #t")));
    checks(&same);
}

fn pq() -> IotaInstance {
    IotaInstance::new(f("P(x)"), "x", f("Q(y)"), "y")
}

#[test]
fn rlambda_both_directions() {
    let left = build_rlambda(&pq(), Direction::Left).unwrap();
    assert_eq!(left.rule, Rule::ContractL);
    assert_eq!(left.premises[0].rule, Rule::Iota1L);
    assert!(left
        .conclusion
        .same_as(&sq("(lam x. P(x)) iota y. Q(y) => exists x. (forall y. Q(y) <-> y = x) & P(x)")));
    checks(&left);
    let right = build_rlambda(&pq(), Direction::Right).unwrap();
    assert_eq!(right.rule, Rule::ExistsL);
    assert_eq!(right.premises[0].premises[0].rule, Rule::IotaR);
    checks(&right);
    assert!(is_regular(&left) && is_regular(&right));
}

#[test]
fn rlambda_with_clashing_names() {
    for (psi, x, phi, y) in [
        ("P(y)", "y", "Q(y)", "y"),
        ("R(x, x)", "x", "exists x. R(y, x)", "y"),
        ("(lam z. P(z)) iota w. R(w, x)", "x", "Q(y) & P(y)", "y"),
    ] {
        let inst = IotaInstance::new(f(psi), x, f(phi), y);
        for dir in [Direction::Left, Direction::Right] {
            checks(&build_rlambda(&inst, dir).unwrap());
        }
    }
}

#[test]
fn derived_rules() {
    let inst = IotaInstance::new(f("~Q(x)"), "x", f("Q(y)"), "y");
    let premise = derive(Rule::NotL, &f("~Q(#a)"), Annotations::none(), vec![ax(&f("Q(#a)"))]);
    let premise = fit(premise, &sq("Q(#a), ~Q(#a) =>")).unwrap();
    let d1 = build_derived_iota(Rule::Iota1L, &inst, &[], Some(&p("a")), vec![premise]).unwrap();
    assert_eq!(d1.count_rule(Rule::Cut), 1);
    assert!(d1.conclusion.same_as(&sq("(lam x. ~Q(x)) iota y. Q(y) =>")));
    checks(&d1);

    let inst = pq();
    let p1 = fit(ax(&f("Q(#b1)")), &sq("Q(#b1), Q(#b2) => Q(#b1)")).unwrap();
    let p2 = fit(ax(&f("Q(#b2)")), &sq("Q(#b1), Q(#b2) => Q(#b2)")).unwrap();
    let p3 = fit(ax(&f("Q(#b1)")), &sq("#b1 = #b2, Q(#b1), Q(#b2) => Q(#b1)")).unwrap();
    let d2 = build_derived_iota(Rule::Iota2L, &inst, &[p("b1"), p("b2")], None, vec![p1, p2, p3]).unwrap();
    assert_eq!(d2.count_rule(Rule::Cut), 1);
    assert!(d2.conclusion.same_as(&sq("(lam x. P(x)) iota y. Q(y), Q(#b1), Q(#b2) => Q(#b1)")));
    checks(&d2);

    let p1 = fit(ax(&f("Q(#b)")), &sq("Q(#b), P(#b), forall z. (Q(z) -> z = #b) => Q(#b)")).unwrap();
    let p2 = fit(ax(&f("P(#b)")), &sq("Q(#b), P(#b), forall z. (Q(z) -> z = #b) => P(#b)")).unwrap();
    let imp = f("Q(#a) -> #a = #b");
    let inner = derive(
        Rule::ImpL,
        &imp,
        Annotations::none(),
        vec![
            fit(ax(&f("Q(#a)")), &sq("Q(#a) => #a = #b, Q(#a)")).unwrap(),
            fit(ax(&f("#a = #b")), &sq("#a = #b, Q(#a) => #a = #b")).unwrap(),
        ],
    );
    let inner = derive(
        Rule::ForallL,
        &f("forall z. (Q(z) -> z = #b)"),
        Annotations::term(p("a")),
        vec![inner],
    );
    let p3 = fit(inner, &sq("Q(#a), Q(#b), P(#b), forall z. (Q(z) -> z = #b) => #a = #b")).unwrap();
    let d3 = build_derived_iota(Rule::IotaR, &inst, &[p("b")], Some(&p("a")), vec![p1, p2, p3]).unwrap();
    assert_eq!(d3.count_rule(Rule::Cut), 2);
    checks(&d3);
}

#[test]
fn subst_param_proof_cases() {
    let a = build_leibniz(&f("P(x)"), "x", &p("b1"), &p("b3")).unwrap();
    let s = subst_param_proof(&a, "b1", &p("b2"));
    assert_eq!(s.height(), a.height());
    assert!(s.conclusion.same_as(&sq("#b2 = #b3, P(#b2) => P(#b3)")));
    checks(&s);
    assert_eq!(subst_param_proof(&a, "zz", &p("b2")), a);

    // eigenparameter clash: forall-right with eigen #b2, then substitute #b1 -> #b2
    let inner = fit(ax(&f("R(#b2, #b1)")), &sq("R(#b2, #b1) => R(#b2, #b1)")).unwrap();
    let node = derive(Rule::ExistsR, &f("exists u. R(u, #b1)"), Annotations::term(p("b2")), vec![inner]);
    let node = derive(Rule::NotR, &f("~R(#b2, #b1)"), Annotations::none(), vec![node]);
    let node = derive(Rule::ForallR, &f("forall v. (exists u. R(u, #b1)) | ~R(v, #b1)"), Annotations::eigen(p("b2")), vec![
        derive(Rule::OrR, &f("(exists u. R(u, #b1)) | ~R(#b2, #b1)"), Annotations::none(), vec![node]),
    ]);
    let h = checks(&node).height();
    let s = subst_param_proof(&node, "b1", &p("b2"));
    assert_eq!(s.height(), h);
    assert!(s.conclusion.same_as(&sq("=> forall v. (exists u. R(u, #b2)) | ~R(v, #b2)")));
    checks(&s);
}

#[test]
fn regularity() {
    let one = derive(Rule::ForallR, &f("forall x. P(x) | ~P(x)"), Annotations::eigen(p("a")), vec![
        derive(Rule::OrR, &f("P(#a) | ~P(#a)"), Annotations::none(), vec![derive(
            Rule::NotR,
            &f("~P(#a)"),
            Annotations::none(),
            vec![ax(&f("P(#a)"))],
        )]),
    ]);
    assert!(is_regular(&one));
    let both = derive(Rule::AndR, &f("(forall x. P(x) | ~P(x)) & (forall x. P(x) | ~P(x))"), Annotations::none(), vec![one.clone(), one]);
    checks(&both);
    assert!(!is_regular(&both));
}
