#![allow(dead_code)]

use grl::kernel::{build_leibniz, build_rlambda, Direction, IotaInstance};
use grl::syntax::{alpha_equal, Formula, Sequent, Term};
use grl::ProofNode;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape of random formulas.
#[derive(Clone, Debug)]
pub struct Gen {
    /// Unary predicates, then binary ones.
    pub unary: Vec<&'static str>,
    pub binary: Vec<&'static str>,
    /// Closed terms available at leaves.
    pub closed: Vec<Term>,
    /// Names for bound variables.
    pub binders: Vec<&'static str>,
    /// Weight out of 100 for descriptions among compound formulas.
    pub dd_weight: u32,
    /// Nesting bound for descriptions.
    pub max_dd: usize,
}

impl Default for Gen {
    fn default() -> Gen {
        Gen {
            unary: vec!["P", "Q"],
            binary: vec!["R"],
            closed: vec![Term::param("p"), Term::constant("c")],
            binders: vec!["x", "y", "z"],
            dd_weight: 15,
            max_dd: 2,
        }
    }
}

impl Gen {
    fn term(&self, rng: &mut Rng8, scope: &[String]) -> Term {
        let n = scope.len() + self.closed.len();
        let i = rng.gen_range(0..n);
        if i < scope.len() {
            Term::var(scope[i].clone())
        } else {
            self.closed[i - scope.len()].clone()
        }
    }

    fn atom(&self, rng: &mut Rng8, scope: &[String]) -> Formula {
        let k = self.unary.len() + self.binary.len() + 1;
        let i = rng.gen_range(0..k);
        if i < self.unary.len() {
            Formula::pred(self.unary[i], vec![self.term(rng, scope)])
        } else if i < k - 1 {
            let p = self.binary[i - self.unary.len()];
            Formula::pred(p, vec![self.term(rng, scope), self.term(rng, scope)])
        } else {
            Formula::eq(self.term(rng, scope), self.term(rng, scope))
        }
    }

    /// A formula with exactly `size` logical constants whose free variables
    /// are among `scope`.
    pub fn formula(&self, rng: &mut Rng8, size: usize, scope: &[String]) -> Formula {
        self.formula_dd(rng, size, scope, 0)
    }

    fn formula_dd(&self, rng: &mut Rng8, size: usize, scope: &[String], dd: usize) -> Formula {
        if size == 0 {
            return self.atom(rng, scope);
        }
        let bind = |rng: &mut Rng8| -> (String, Vec<String>) {
            let x = self.binders.choose(rng).unwrap().to_string();
            let mut inner = scope.to_vec();
            if !inner.contains(&x) {
                inner.push(x.clone());
            }
            (x, inner)
        };
        if size >= 2 && dd < self.max_dd && rng.gen_range(0..100) < self.dd_weight {
            let rest = size - 2;
            let a = rng.gen_range(0..=rest);
            let (x, sx) = bind(rng);
            let (y, sy) = bind(rng);
            let psi = self.formula_dd(rng, a, &sx, dd + 1);
            let phi = self.formula_dd(rng, rest - a, &sy, dd + 1);
            return Formula::lam_iota(x, psi, y, phi);
        }
        match rng.gen_range(0..9) {
            0 => Formula::not(self.formula_dd(rng, size - 1, scope, dd)),
            1..=4 => {
                let rest = size - 1;
                let a = rng.gen_range(0..=rest);
                let l = self.formula_dd(rng, a, scope, dd);
                let r = self.formula_dd(rng, rest - a, scope, dd);
                match rng.gen_range(0..4) {
                    0 => Formula::and(l, r),
                    1 => Formula::or(l, r),
                    2 => Formula::imp(l, r),
                    _ => Formula::iff(l, r),
                }
            }
            5 | 6 => {
                let (x, sx) = bind(rng);
                let body = self.formula_dd(rng, size - 1, &sx, dd);
                if rng.gen_bool(0.5) {
                    Formula::forall(x, body)
                } else {
                    Formula::exists(x, body)
                }
            }
            _ => {
                let (x, sx) = bind(rng);
                let arg = self.term(rng, scope);
                Formula::lam_term(x, self.formula_dd(rng, size - 1, &sx, dd), arg)
            }
        }
    }
}

pub fn has_description(f: &Formula) -> bool {
    use grl::LamArg;
    match f {
        Formula::Pred(..) | Formula::Eq(..) => false,
        Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => has_description(a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
            has_description(a) || has_description(b)
        }
        Formula::Lambda(_, _, LamArg::Iota(..)) => true,
        Formula::Lambda(_, body, LamArg::Term(_)) => has_description(body),
    }
}

pub fn dd_nesting(f: &Formula) -> usize {
    use grl::LamArg;
    match f {
        Formula::Pred(..) | Formula::Eq(..) => 0,
        Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => dd_nesting(a),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) | Formula::Iff(a, b) => {
            dd_nesting(a).max(dd_nesting(b))
        }
        Formula::Lambda(_, body, LamArg::Iota(_, phi)) => 1 + dd_nesting(body).max(dd_nesting(phi)),
        Formula::Lambda(_, body, LamArg::Term(_)) => dd_nesting(body),
    }
}

/// Formulas in `x` for Leibniz instances: `count` of them with up to
/// `max_size` constants, at least `min_dd` containing a description.
pub fn leibniz_formulas(seed: u64, count: usize, max_size: usize, min_dd: usize) -> Vec<Formula> {
    let mut r = rng(seed);
    let g = Gen::default();
    let scope = vec!["x".to_string()];
    let mut out = Vec::new();
    let mut with_dd = 0;
    while out.len() < count {
        let size = r.gen_range(0..=max_size);
        let f = g.formula(&mut r, size, &scope);
        let dd = has_description(&f);
        let need = min_dd.saturating_sub(with_dd);
        if !dd && need >= count - out.len() {
            continue;
        }
        with_dd += dd as usize;
        out.push(f);
    }
    out
}

/// Checked-proof material: Leibniz proofs and both directions of the
/// Russellian equivalence on random instances.
pub fn random_proofs(seed: u64, count: usize) -> Vec<ProofNode> {
    let mut r = rng(seed);
    let g = Gen::default();
    let xs = vec!["x".to_string()];
    let ys = vec!["y".to_string()];
    let mut out = Vec::new();
    while out.len() < count {
        let p = if r.gen_bool(0.5) {
            let size = r.gen_range(0..=6);
            let phi = g.formula(&mut r, size, &xs);
            build_leibniz(&phi, "x", &Term::param("b1"), &Term::param("b2"))
        } else {
            let (a, b) = (r.gen_range(0..=3), r.gen_range(0..=3));
            let psi = g.formula(&mut r, a, &xs);
            let phi = g.formula(&mut r, b, &ys);
            let inst = IotaInstance::new(psi, "x", phi, "y");
            let dir = if r.gen_bool(0.5) { Direction::Left } else { Direction::Right };
            build_rlambda(&inst, dir)
        };
        out.push(p.expect("random proof builds"));
    }
    out
}

/// Closed sequents with at most `max_size` constants in total over one
/// unary and one binary predicate.
pub fn random_sequents(seed: u64, count: usize, max_size: usize) -> Vec<Sequent> {
    let mut r = rng(seed);
    let g = Gen {
        unary: vec!["P"],
        binary: vec!["R"],
        closed: vec![Term::param("a"), Term::param("b")],
        binders: vec!["x", "y"],
        dd_weight: 20,
        max_dd: 1,
    };
    (0..count)
        .map(|_| {
            let total = r.gen_range(0..=max_size);
            let n = r.gen_range(1..=3usize);
            let mut sizes = vec![0; n];
            for _ in 0..total {
                sizes[r.gen_range(0..n)] += 1;
            }
            let split = r.gen_range(0..=n);
            let fs: Vec<Formula> = sizes.iter().map(|&k| g.formula(&mut r, k, &[])).collect();
            Sequent::new(fs[..split].to_vec(), fs[split..].to_vec())
        })
        .collect()
}

/// Node-by-node equality with alpha-equal formulas.
pub fn proofs_alpha_equal(a: &ProofNode, b: &ProofNode) -> bool {
    let side = |x: &[Formula], y: &[Formula]| x.len() == y.len() && x.iter().zip(y).all(|(f, g)| alpha_equal(f, g));
    a.rule == b.rule
        && a.ann == b.ann
        && side(&a.conclusion.ante, &b.conclusion.ante)
        && side(&a.conclusion.succ, &b.conclusion.succ)
        && a.premises.len() == b.premises.len()
        && a.premises.iter().zip(&b.premises).all(|(p, q)| proofs_alpha_equal(p, q))
}
