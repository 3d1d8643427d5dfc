//! Proof trees: one node per rule application.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::syntax::{Sequent, Term};

/// The rules of the calculus. Names in proof files are given by [`Rule::name`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Ax,
    Cut,
    WeakenL,
    WeakenR,
    ContractL,
    ContractR,
    NotL,
    NotR,
    AndL,
    AndR,
    OrL,
    OrR,
    ImpL,
    ImpR,
    IffL,
    IffR,
    ForallL,
    ForallR,
    ExistsL,
    ExistsR,
    EqMinus,
    EqPlus,
    LamL,
    LamR,
    Iota1L,
    Iota2L,
    IotaR,
}

impl Rule {
    pub const ALL: [Rule; 27] = [
        Rule::Ax,
        Rule::Cut,
        Rule::WeakenL,
        Rule::WeakenR,
        Rule::ContractL,
        Rule::ContractR,
        Rule::NotL,
        Rule::NotR,
        Rule::AndL,
        Rule::AndR,
        Rule::OrL,
        Rule::OrR,
        Rule::ImpL,
        Rule::ImpR,
        Rule::IffL,
        Rule::IffR,
        Rule::ForallL,
        Rule::ForallR,
        Rule::ExistsL,
        Rule::ExistsR,
        Rule::EqMinus,
        Rule::EqPlus,
        Rule::LamL,
        Rule::LamR,
        Rule::Iota1L,
        Rule::Iota2L,
        Rule::IotaR,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Ax => "ax",
            Rule::Cut => "cut",
            Rule::WeakenL => "wl",
            Rule::WeakenR => "wr",
            Rule::ContractL => "cl",
            Rule::ContractR => "cr",
            Rule::NotL => "negl",
            Rule::NotR => "negr",
            Rule::AndL => "andl",
            Rule::AndR => "andr",
            Rule::OrL => "orl",
            Rule::OrR => "orr",
            Rule::ImpL => "impl",
            Rule::ImpR => "impr",
            Rule::IffL => "iffl",
            Rule::IffR => "iffr",
            Rule::ForallL => "foralll",
            Rule::ForallR => "forallr",
            Rule::ExistsL => "existsl",
            Rule::ExistsR => "existsr",
            Rule::EqMinus => "eqminus",
            Rule::EqPlus => "eqplus",
            Rule::LamL => "laml",
            Rule::LamR => "lamr",
            Rule::Iota1L => "iota1l",
            Rule::Iota2L => "iota2l",
            Rule::IotaR => "iotar",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Rule::Ax => 0,
            Rule::Cut | Rule::AndR | Rule::OrL | Rule::ImpL | Rule::IffL | Rule::IffR => 2,
            Rule::Iota2L | Rule::IotaR => 3,
            _ => 1,
        }
    }

    /// Rules whose side condition demands a fresh parameter.
    pub fn has_eigen(self) -> bool {
        matches!(
            self,
            Rule::ForallR | Rule::ExistsL | Rule::Iota1L | Rule::IotaR
        )
    }

    pub fn is_structural(self) -> bool {
        matches!(
            self,
            Rule::WeakenL | Rule::WeakenR | Rule::ContractL | Rule::ContractR
        )
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Rule, String> {
        Rule::ALL
            .iter()
            .copied()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule name `{s}`"))
    }
}

/// Optional per-node data: instantiation terms, eigenparameter, and the
/// index of the principal formula on its side of the conclusion.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Annotations {
    pub terms: Vec<Term>,
    pub eigen: Option<Term>,
    pub at: Option<usize>,
}

impl Annotations {
    pub fn none() -> Annotations {
        Annotations::default()
    }

    pub fn term(t: Term) -> Annotations {
        Annotations {
            terms: vec![t],
            ..Annotations::default()
        }
    }

    pub fn eigen(a: Term) -> Annotations {
        Annotations {
            eigen: Some(a),
            ..Annotations::default()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty() && self.eigen.is_none() && self.at.is_none()
    }

    fn rename_param(&self, from: &str, to: &Term) -> Annotations {
        let r = |t: &Term| match t {
            Term::Param(p) if p == from => to.clone(),
            other => other.clone(),
        };
        Annotations {
            terms: self.terms.iter().map(r).collect(),
            eigen: self.eigen.as_ref().map(r),
            at: self.at,
        }
    }
}

/// A proof tree as written in a proof script. Nothing here is checked;
/// see [`crate::kernel::check_proof`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProofNode {
    pub rule: Rule,
    pub conclusion: Sequent,
    pub ann: Annotations,
    pub premises: Vec<ProofNode>,
}

impl ProofNode {
    pub fn new(rule: Rule, conclusion: Sequent, ann: Annotations, premises: Vec<ProofNode>) -> Self {
        ProofNode {
            rule,
            conclusion,
            ann,
            premises,
        }
    }

    pub fn leaf(rule: Rule, conclusion: Sequent) -> Self {
        ProofNode::new(rule, conclusion, Annotations::none(), Vec::new())
    }

    /// Number of nodes on the longest branch.
    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(ProofNode::height).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(ProofNode::size).sum::<usize>()
    }

    pub fn count_rule(&self, rule: Rule) -> usize {
        usize::from(self.rule == rule)
            + self.premises.iter().map(|p| p.count_rule(rule)).sum::<usize>()
    }

    pub fn is_cut_free(&self) -> bool {
        self.count_rule(Rule::Cut) == 0
    }

    /// Rule names in preorder (node before premises, premises left to right).
    pub fn rules_preorder(&self) -> Vec<Rule> {
        let mut out = Vec::new();
        self.walk(&mut |n| out.push(n.rule));
        out
    }

    pub fn walk(&self, f: &mut impl FnMut(&ProofNode)) {
        f(self);
        for p in &self.premises {
            p.walk(f);
        }
    }

    /// Every parameter occurring in any sequent or annotation.
    pub fn params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |n| {
            out.extend(n.conclusion.params());
            for t in n.ann.terms.iter().chain(n.ann.eigen.iter()) {
                if let Term::Param(p) = t {
                    out.insert(p.clone());
                }
            }
        });
        out
    }

    pub fn has_param(&self, p: &str) -> bool {
        self.conclusion.has_param(p)
            || self.ann.eigen.as_ref().and_then(Term::as_param) == Some(p)
            || self.ann.terms.iter().any(|t| t.as_param() == Some(p))
            || self.premises.iter().any(|q| q.has_param(p))
    }

    /// Replaces parameter `from` by `to` everywhere, without any renaming.
    pub fn rename_param(&self, from: &str, to: &Term) -> ProofNode {
        ProofNode {
            rule: self.rule,
            conclusion: self.conclusion.rename_param(from, to),
            ann: self.ann.rename_param(from, to),
            premises: self
                .premises
                .iter()
                .map(|p| p.rename_param(from, to))
                .collect(),
        }
    }

    pub fn node_at(&self, path: &[usize]) -> Option<&ProofNode> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.premises.get(*i)?.node_at(rest),
        }
    }
}
