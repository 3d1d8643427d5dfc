mod common;

use common::*;
use grl::cutelim::{eliminate_cuts, metrics};
use grl::kernel::{build_leibniz, build_rlambda, cut, subst_param_proof, Direction, IotaInstance};
use grl::print::{formula_to_string, proof_to_string, sequent_to_string, ASCII};
use grl::search::{find_proof, prove, SearchBudget, Verdict};
use grl::semantics::{eval_sequent, valid_upto};
use grl::syntax::{Formula, Sequent, Term};
use grl::translate::translate;
use grl::{check_proof, parse_formula, parse_proof, parse_sequent, KernelOptions};
use proptest::prelude::*;
use rand::Rng;

fn opts() -> KernelOptions {
    KernelOptions::default()
}

fn closed_formula(seed: u64, size: usize) -> Formula {
    Gen::default().formula(&mut rng(seed), size, &[])
}

fn small_budget() -> SearchBudget {
    SearchBudget {
        max_depth: 6,
        node_cap: 1_000,
        ..SearchBudget::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn formula_round_trip(seed in any::<u64>(), size in 0usize..8) {
        let f = closed_formula(seed, size);
        let text = formula_to_string(&f, &ASCII);
        prop_assert_eq!(parse_formula(text.as_str()).unwrap(), f);
    }

    #[test]
    fn sequent_round_trip(seed in any::<u64>()) {
        let s = random_sequents(seed, 1, 6).remove(0);
        let text = sequent_to_string(&s, &ASCII);
        prop_assert_eq!(parse_sequent(text.as_str()).unwrap(), s);
    }

    #[test]
    fn translation_is_first_order_and_idempotent(seed in any::<u64>(), size in 0usize..7) {
        let f = closed_formula(seed, size);
        let t = translate(&f);
        prop_assert!(t.is_lambda_free());
        prop_assert_eq!(translate(&t), t.clone());
        if !has_description(&f) && f.is_lambda_free() {
            prop_assert_eq!(t, f);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn translation_preserves_truth(seed in any::<u64>(), size in 0usize..4) {
        let f = closed_formula(seed, size);
        let iff = Formula::iff(f.clone(), translate(&f));
        prop_assert!(valid_upto(&Sequent::new(vec![], vec![iff]), 2).unwrap());
    }

    #[test]
    fn proof_script_round_trip(seed in any::<u64>()) {
        let p = random_proofs(seed, 1).remove(0);
        let text = proof_to_string(&p, &ASCII);
        let back = parse_proof(text.as_str()).unwrap();
        prop_assert!(proofs_alpha_equal(&p, &back));
    }

    #[test]
    fn parameter_substitution_keeps_height(seed in any::<u64>(), target in 0usize..3) {
        let p = random_proofs(seed, 1).remove(0);
        let to = [Term::param("b2"), Term::constant("c"), Term::param("q")][target].clone();
        let before = check_proof(&p, &opts()).unwrap();
        let from = p.conclusion.params().into_iter().next().unwrap_or_else(|| "b1".into());
        let after = check_proof(&subst_param_proof(&p, &from, &to), &opts()).unwrap();
        prop_assert_eq!(after.height(), before.height());
        prop_assert!(after.end_sequent().same_as(&p.conclusion.rename_param(&from, &to)));
    }

    #[test]
    fn cut_elimination_invariants(seed in any::<u64>(), size in 0usize..4) {
        let mut r = rng(seed);
        let g = Gen::default();
        let p = if r.gen_bool(0.5) {
            let phi = g.formula(&mut r, size, &["x".to_string()]);
            let (b1, b2, b3) = (Term::param("b1"), Term::param("b2"), Term::param("b3"));
            let l12 = build_leibniz(&phi, "x", &b1, &b2).unwrap();
            let l23 = build_leibniz(&phi, "x", &b2, &b3).unwrap();
            cut(l12, l23, &grl::substitute(&phi, "x", &b2))
        } else {
            let psi = g.formula(&mut r, size.min(2), &["x".to_string()]);
            let phi = g.formula(&mut r, size.min(2), &["y".to_string()]);
            let inst = IotaInstance::new(psi, "x", phi, "y");
            let left = build_rlambda(&inst, Direction::Left).unwrap();
            let right = build_rlambda(&inst, Direction::Right).unwrap();
            cut(left, right, &inst.expansion())
        };
        let input = check_proof(&p, &opts()).unwrap();
        let e = eliminate_cuts(&p, &opts()).unwrap();
        prop_assert!(e.proof.root().is_cut_free());
        prop_assert!(e.proof.end_sequent().same_as(input.end_sequent()));
        let mut last = metrics(&p).measure();
        for step in &e.trace {
            prop_assert_eq!(step.before, last);
            prop_assert!(step.after < step.before);
            last = step.after;
        }
        prop_assert_eq!(last, (0, 0));
    }

    #[test]
    fn search_is_sound(seed in any::<u64>()) {
        let s = random_sequents(seed, 1, 3).remove(0);
        match prove(&s, &small_budget()) {
            Verdict::Proved(p) => {
                prop_assert!(p.end_sequent().same_as(&s));
                prop_assert!(check_proof(p.root(), &opts()).is_ok());
                prop_assert!(valid_upto(&s, 2).unwrap());
            }
            Verdict::Refuted(m, v) => prop_assert!(!eval_sequent(&m, &v, &s).unwrap()),
            Verdict::Unknown(_) => {}
        }
    }

    #[test]
    fn larger_budgets_prove_more(seed in any::<u64>()) {
        let s = random_sequents(seed, 1, 4).remove(0);
        let small = SearchBudget { max_depth: 4, node_cap: 300, ..SearchBudget::default() };
        let large = SearchBudget { max_depth: 8, node_cap: 3_000, ..SearchBudget::default() };
        if find_proof(&s, &small).is_some() {
            prop_assert!(find_proof(&s, &large).is_some());
        }
    }
}
