//! Elimination of lambda atoms: beta reduction for term arguments and the
//! Russellian expansion for descriptions. The output is pure first-order.

use crate::syntax::{fresh_name, substitute, Formula, LamArg, Sequent, Term};

/// `exists u. (forall y. (phi <-> y = u)) & psi[x/u]`, where `u` is `x`
/// unless that would be captured or would clash with `y`.
pub fn russell_expansion(x: &str, psi: &Formula, y: &str, phi: &Formula) -> Formula {
    let phi_fv = phi.free_vars();
    let clash = |v: &str| v == y || (phi_fv.contains(v) && v != y);
    let u = if clash(x) {
        let mut names = std::collections::HashSet::new();
        psi.all_names(&mut names);
        phi.all_names(&mut names);
        names.insert(x.to_string());
        names.insert(y.to_string());
        fresh_name(x, |n| names.contains(n))
    } else {
        x.to_string()
    };
    let psi_u = if u == x {
        psi.clone()
    } else {
        substitute(psi, x, &Term::Var(u.clone()))
    };
    Formula::exists(
        u.clone(),
        Formula::and(
            Formula::forall(
                y,
                Formula::iff(phi.clone(), Formula::eq(Term::var(y), Term::Var(u))),
            ),
            psi_u,
        ),
    )
}

/// Removes every lambda atom.
pub fn translate(phi: &Formula) -> Formula {
    match phi {
        Formula::Pred(..) | Formula::Eq(..) => phi.clone(),
        Formula::Not(a) => Formula::not(translate(a)),
        Formula::And(a, b) => Formula::and(translate(a), translate(b)),
        Formula::Or(a, b) => Formula::or(translate(a), translate(b)),
        Formula::Imp(a, b) => Formula::imp(translate(a), translate(b)),
        Formula::Iff(a, b) => Formula::iff(translate(a), translate(b)),
        Formula::Forall(v, a) => Formula::forall(v.clone(), translate(a)),
        Formula::Exists(v, a) => Formula::exists(v.clone(), translate(a)),
        Formula::Lambda(x, body, LamArg::Term(t)) => substitute(&translate(body), x, t),
        Formula::Lambda(x, body, LamArg::Iota(y, ib)) => {
            russell_expansion(x, &translate(body), y, &translate(ib))
        }
    }
}

pub fn translate_sequent(s: &Sequent) -> Sequent {
    Sequent::new(
        s.ante.iter().map(translate).collect(),
        s.succ.iter().map(translate).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_formula;
    use crate::syntax::alpha_equal;

    fn tr(s: &str) -> Formula {
        translate(&parse_formula(s).unwrap())
    }

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn beta() {
        assert_eq!(tr("(lam x. P(x)) #a"), f("P(#a)"));
    }

    #[test]
    fn russell() {
        let got = tr("(lam x. P(x)) iota y. Q(y)");
        assert!(alpha_equal(&got, &f("exists x. (forall y. Q(y) <-> y = x) & P(x)")), "{got}");
    }

    #[test]
    fn narrow_scope_negation() {
        let got = tr("(lam x. ~P(x)) iota y. Q(y)");
        assert!(alpha_equal(&got, &f("exists x. (forall y. Q(y) <-> y = x) & ~P(x)")));
        let wide = Formula::not(tr("(lam x. P(x)) iota y. Q(y)"));
        assert!(!alpha_equal(&got, &wide));
    }

    #[test]
    fn binder_clash_is_renamed() {
        let got = tr("(lam y. P(y)) iota y. Q(y)");
        assert!(alpha_equal(&got, &f("exists u. (forall y. Q(y) <-> y = u) & P(u)")), "{got}");
    }

    #[test]
    fn idempotent_and_lambda_free() {
        let g = tr("forall z. (lam x. R(x, z)) iota y. (lam w. Q(w)) iota v. R(v, y)");
        assert!(g.is_lambda_free());
        assert_eq!(translate(&g), g);
    }
}
