//! Replacing a parameter throughout a proof.

use crate::proof::ProofNode;
use crate::syntax::{NameSupply, Term};

fn supply_for(p: &ProofNode, extra: &Term) -> NameSupply {
    let mut names = NameSupply::new();
    p.walk(&mut |n| {
        names.avoid_sequent(&n.conclusion);
        for t in n.ann.terms.iter().chain(n.ann.eigen.iter()) {
            names.avoid_term(t);
        }
    });
    names.avoid_term(extra);
    names
}

/// Renames, inside the premises of every node whose eigenparameter is one
/// of `names`, that eigenparameter to a fresh one. Conclusions of those
/// nodes are unchanged, so the result checks whenever `p` does.
pub fn rename_eigens_in_subtree(p: &ProofNode, names: &[&str], supply: &mut NameSupply) -> ProofNode {
    let mut node = p.clone();
    rename_rec(&mut node, names, supply);
    node
}

fn rename_rec(n: &mut ProofNode, names: &[&str], supply: &mut NameSupply) {
    if let Some(a) = n.ann.eigen.as_ref().and_then(Term::as_param).map(str::to_string) {
        if names.contains(&a.as_str()) {
            let fresh = supply.fresh_param(&a);
            n.ann.eigen = Some(fresh.clone());
            for q in &mut n.premises {
                *q = q.rename_param(&a, &fresh);
            }
        }
    }
    for q in &mut n.premises {
        rename_rec(q, names, supply);
    }
}

/// A proof of the end-sequent of `p` with parameter `b1` replaced by `b2`.
///
/// Eigenparameters equal to `b1` or `b2` are first renamed apart, so every
/// side condition survives. The height is unchanged.
pub fn subst_param_proof(p: &ProofNode, b1: &str, b2: &Term) -> ProofNode {
    if !p.has_param(b1) || b2.as_param() == Some(b1) {
        return p.clone();
    }
    let mut supply = supply_for(p, b2);
    let mut clash = vec![b1];
    if let Some(b) = b2.as_param() {
        clash.push(b);
    }
    let renamed = rename_eigens_in_subtree(p, &clash, &mut supply);
    renamed.rename_param(b1, b2)
}
