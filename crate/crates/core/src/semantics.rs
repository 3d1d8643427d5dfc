//! Finite models, the satisfaction relation, and countermodel enumeration.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;

use crate::syntax::{fresh_name, substitute, Formula, LamArg, Sequent, Term};

/// A finite structure with domain `0..size`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    pub size: usize,
    /// Predicate name to arity and extension.
    pub preds: BTreeMap<String, (usize, BTreeSet<Vec<usize>>)>,
    pub consts: BTreeMap<String, usize>,
}

/// Values of variables and parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    pub vars: BTreeMap<String, usize>,
    pub params: BTreeMap<String, usize>,
}

impl Assignment {
    fn with_var(&self, x: &str, d: usize) -> Assignment {
        let mut v = self.clone();
        v.vars.insert(x.to_string(), d);
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("unbound name {0}")]
    Unbound(String),
    #[error("uninterpreted symbol {0}")]
    Uninterpreted(String),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("signature too large: {0} candidate models exceed the cap of {1}")]
    SignatureTooLarge(u128, u128),
    #[error("max size must be at least 1")]
    ZeroSize,
    #[error("predicate {0} used with arities {1} and {2}")]
    Arity(String, usize, usize),
}

impl Model {
    fn term(&self, v: &Assignment, t: &Term) -> Result<usize, EvalError> {
        match t {
            Term::Var(x) => v.vars.get(x).copied().ok_or_else(|| EvalError::Unbound(x.clone())),
            Term::Param(p) => v
                .params
                .get(p)
                .copied()
                .ok_or_else(|| EvalError::Unbound(format!("#{p}"))),
            Term::Const(c) => self
                .consts
                .get(c)
                .copied()
                .ok_or_else(|| EvalError::Uninterpreted(format!("${c}"))),
        }
    }
}

/// Satisfaction, clause by clause.
pub fn eval(m: &Model, v: &Assignment, phi: &Formula) -> Result<bool, EvalError> {
    Ok(match phi {
        Formula::Pred(p, args) => {
            let (_, ext) = m.preds.get(p).ok_or_else(|| EvalError::Uninterpreted(p.clone()))?;
            let tuple = args.iter().map(|t| m.term(v, t)).collect::<Result<Vec<_>, _>>()?;
            ext.contains(&tuple)
        }
        Formula::Eq(a, b) => m.term(v, a)? == m.term(v, b)?,
        Formula::Not(a) => !eval(m, v, a)?,
        Formula::And(a, b) => eval(m, v, a)? && eval(m, v, b)?,
        Formula::Or(a, b) => eval(m, v, a)? || eval(m, v, b)?,
        Formula::Imp(a, b) => !eval(m, v, a)? || eval(m, v, b)?,
        Formula::Iff(a, b) => eval(m, v, a)? == eval(m, v, b)?,
        Formula::Forall(x, a) => {
            for d in 0..m.size {
                if !eval(m, &v.with_var(x, d), a)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Exists(x, a) => {
            for d in 0..m.size {
                if eval(m, &v.with_var(x, d), a)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Lambda(x, body, LamArg::Term(t)) => {
            let d = m.term(v, t)?;
            eval(m, &v.with_var(x, d), body)?
        }
        Formula::Lambda(x, body, LamArg::Iota(y, phi)) => {
            // The abstract's variable must not capture a free variable of the
            // description body, so it is renamed apart first.
            let (x, body) = if phi.free_vars().iter().any(|z| z == x && z != y) {
                let mut names = std::collections::HashSet::new();
                body.all_names(&mut names);
                phi.all_names(&mut names);
                names.extend(v.vars.keys().cloned());
                let nx = fresh_name(x, |n| names.contains(n));
                let nb = substitute(body, x, &Term::Var(nx.clone()));
                (nx, nb)
            } else {
                (x.clone(), (**body).clone())
            };
            let phi_x = substitute(phi, y, &Term::Var(x.clone()));
            for o in 0..m.size {
                let vo = v.with_var(&x, o);
                if !eval(m, &vo, &body)? || !eval(m, &vo, &phi_x)? {
                    continue;
                }
                let mut unique = true;
                for d in 0..m.size {
                    if d != o && eval(m, &vo.with_var(y, d), phi)? {
                        unique = false;
                        break;
                    }
                }
                if unique {
                    return Ok(true);
                }
            }
            false
        }
    })
}

/// Every antecedent formula true implies some succedent formula true.
pub fn eval_sequent(m: &Model, v: &Assignment, s: &Sequent) -> Result<bool, EvalError> {
    for f in &s.ante {
        if !eval(m, v, f)? {
            return Ok(true);
        }
    }
    for f in &s.succ {
        if eval(m, v, f)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Predicates, parameters and constants of a sequent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    /// Sorted by name.
    pub preds: Vec<(String, usize)>,
    pub params: Vec<String>,
    pub consts: Vec<String>,
}

impl Signature {
    pub fn of_sequent(s: &Sequent) -> Result<Signature, SemanticsError> {
        let mut arities: BTreeMap<String, usize> = BTreeMap::new();
        for (p, n) in s.predicates() {
            if let Some(&k) = arities.get(&p) {
                if k != n {
                    return Err(SemanticsError::Arity(p, k, n));
                }
            }
            arities.insert(p, n);
        }
        Ok(Signature {
            preds: arities.into_iter().collect(),
            params: s.params().into_iter().collect(),
            consts: s.consts().into_iter().collect(),
        })
    }

    pub fn of_formula(f: &Formula) -> Result<Signature, SemanticsError> {
        Signature::of_sequent(&Sequent::new(vec![f.clone()], vec![]))
    }

    fn bits(&self, n: usize) -> usize {
        self.preds.iter().map(|(_, k)| n.pow(*k as u32)).sum()
    }

    fn slots(&self) -> usize {
        self.params.len() + self.consts.len()
    }

    /// Number of (interpretation, assignment) pairs of size `n`, with
    /// `extra` free variables besides the parameters and constants.
    pub fn count(&self, n: usize, extra: usize) -> u128 {
        let bits = self.bits(n) as u32;
        if bits >= 127 {
            return u128::MAX;
        }
        (1u128 << bits).saturating_mul((n as u128).saturating_pow((self.slots() + extra) as u32))
    }
}

/// A formula compiled against a signature. Every variable occurrence is
/// resolved to a slot of a flat environment; binders get their own slots.
#[derive(Clone, Debug)]
enum Code {
    Pred(usize, Vec<usize>),
    Eq(usize, usize),
    Not(Box<Code>),
    And(Box<Code>, Box<Code>),
    Or(Box<Code>, Box<Code>),
    Imp(Box<Code>, Box<Code>),
    Iff(Box<Code>, Box<Code>),
    Forall(usize, Box<Code>),
    Exists(usize, Box<Code>),
    Let(usize, usize, Box<Code>),
    Iota {
        x: usize,
        body: Box<Code>,
        y: usize,
        phi: Box<Code>,
    },
}

struct Compiler<'a> {
    pred_index: HashMap<&'a str, usize>,
    /// Slots of free names: parameters and constants, then free variables.
    free: HashMap<Term, usize>,
    next: usize,
}

impl Compiler<'_> {
    fn fresh(&mut self) -> usize {
        self.next += 1;
        self.next - 1
    }

    fn term(&self, t: &Term, scope: &[(String, usize)]) -> usize {
        if let Term::Var(x) = t {
            if let Some((_, s)) = scope.iter().rev().find(|(n, _)| n == x) {
                return *s;
            }
        }
        *self.free.get(t).unwrap_or_else(|| panic!("unresolved term {t}"))
    }

    fn compile(&mut self, f: &Formula, scope: &mut Vec<(String, usize)>) -> Code {
        let b = |c: Code| Box::new(c);
        match f {
            Formula::Pred(p, args) => Code::Pred(
                self.pred_index[p.as_str()],
                args.iter().map(|t| self.term(t, scope)).collect(),
            ),
            Formula::Eq(s, t) => Code::Eq(self.term(s, scope), self.term(t, scope)),
            Formula::Not(a) => Code::Not(b(self.compile(a, scope))),
            Formula::And(x, y) => Code::And(b(self.compile(x, scope)), b(self.compile(y, scope))),
            Formula::Or(x, y) => Code::Or(b(self.compile(x, scope)), b(self.compile(y, scope))),
            Formula::Imp(x, y) => Code::Imp(b(self.compile(x, scope)), b(self.compile(y, scope))),
            Formula::Iff(x, y) => Code::Iff(b(self.compile(x, scope)), b(self.compile(y, scope))),
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                let s = self.fresh();
                scope.push((v.clone(), s));
                let body = self.compile(a, scope);
                scope.pop();
                if matches!(f, Formula::Forall(..)) {
                    Code::Forall(s, b(body))
                } else {
                    Code::Exists(s, b(body))
                }
            }
            Formula::Lambda(v, body, LamArg::Term(t)) => {
                let src = self.term(t, scope);
                let s = self.fresh();
                scope.push((v.clone(), s));
                let c = self.compile(body, scope);
                scope.pop();
                Code::Let(s, src, b(c))
            }
            Formula::Lambda(v, body, LamArg::Iota(w, phi)) => {
                let ys = self.fresh();
                scope.push((w.clone(), ys));
                let pc = self.compile(phi, scope);
                scope.pop();
                let xs = self.fresh();
                scope.push((v.clone(), xs));
                let bc = self.compile(body, scope);
                scope.pop();
                Code::Iota {
                    x: xs,
                    body: b(bc),
                    y: ys,
                    phi: b(pc),
                }
            }
        }
    }
}

/// Predicate extensions as bitsets over tuple indices.
struct Interp {
    n: usize,
    /// Per predicate, bitset words.
    ext: Vec<Vec<u64>>,
}

impl Interp {
    fn holds(&self, p: usize, env: &[usize], args: &[usize]) -> bool {
        let mut idx = 0usize;
        for &a in args.iter().rev() {
            idx = idx * self.n + env[a];
        }
        (self.ext[p][idx / 64] >> (idx % 64)) & 1 == 1
    }
}

fn run(c: &Code, m: &Interp, env: &mut [usize]) -> bool {
    match c {
        Code::Pred(p, args) => m.holds(*p, env, args),
        Code::Eq(a, b) => env[*a] == env[*b],
        Code::Not(a) => !run(a, m, env),
        Code::And(a, b) => run(a, m, env) && run(b, m, env),
        Code::Or(a, b) => run(a, m, env) || run(b, m, env),
        Code::Imp(a, b) => !run(a, m, env) || run(b, m, env),
        Code::Iff(a, b) => run(a, m, env) == run(b, m, env),
        Code::Forall(s, a) => (0..m.n).all(|d| {
            env[*s] = d;
            run(a, m, env)
        }),
        Code::Exists(s, a) => (0..m.n).any(|d| {
            env[*s] = d;
            run(a, m, env)
        }),
        Code::Let(s, src, a) => {
            env[*s] = env[*src];
            run(a, m, env)
        }
        Code::Iota { x, body, y, phi } => {
            let mut witness = None;
            for d in 0..m.n {
                env[*y] = d;
                if run(phi, m, env) {
                    if witness.is_some() {
                        return false;
                    }
                    witness = Some(d);
                }
            }
            match witness {
                Some(o) => {
                    env[*x] = o;
                    run(body, m, env)
                }
                None => false,
            }
        }
    }
}

/// A sequent compiled for fast repeated evaluation over one signature.
pub struct Compiled {
    sig: Signature,
    ante: Vec<Code>,
    succ: Vec<Code>,
    slots: usize,
    /// Environment slots of the signature's parameters, then constants.
    name_slots: Vec<usize>,
    /// Slots of free variables, in name order.
    var_slots: Vec<(String, usize)>,
}

impl Compiled {
    pub fn new(s: &Sequent, sig: &Signature) -> Compiled {
        let pred_index = sig
            .preds
            .iter()
            .enumerate()
            .map(|(i, (p, _))| (p.as_str(), i))
            .collect();
        let mut free = HashMap::new();
        let mut next = 0;
        let mut name_slots = Vec::new();
        for p in &sig.params {
            free.insert(Term::param(p.clone()), next);
            name_slots.push(next);
            next += 1;
        }
        for c in &sig.consts {
            free.insert(Term::constant(c.clone()), next);
            name_slots.push(next);
            next += 1;
        }
        let mut fv = BTreeSet::new();
        for f in s.formulas() {
            fv.extend(f.free_vars());
        }
        let mut var_slots = Vec::new();
        for v in fv {
            free.insert(Term::var(v.clone()), next);
            var_slots.push((v, next));
            next += 1;
        }
        let mut comp = Compiler {
            pred_index,
            free,
            next,
        };
        let ante = s.ante.iter().map(|f| comp.compile(f, &mut Vec::new())).collect();
        let succ = s.succ.iter().map(|f| comp.compile(f, &mut Vec::new())).collect();
        Compiled {
            sig: sig.clone(),
            ante,
            succ,
            slots: comp.next,
            name_slots,
            var_slots,
        }
    }

    fn holds(&self, m: &Interp, env: &mut [usize]) -> bool {
        self.ante.iter().any(|c| !run(c, m, env)) || self.succ.iter().any(|c| run(c, m, env))
    }

    fn interp(&self, n: usize, index: u128) -> Interp {
        let mut ext = Vec::new();
        let mut bit = 0u32;
        // The first predicate takes the most significant bits.
        let total = self.sig.bits(n) as u32;
        for (_, k) in &self.sig.preds {
            let width = n.pow(*k as u32);
            let mut words = vec![0u64; width.div_ceil(64).max(1)];
            for t in 0..width {
                let pos = total - 1 - (bit + (width - 1 - t) as u32);
                if (index >> pos) & 1 == 1 {
                    words[t / 64] |= 1 << (t % 64);
                }
            }
            bit += width as u32;
            ext.push(words);
        }
        Interp { n, ext }
    }

    fn to_model(&self, m: &Interp, env: &[usize]) -> (Model, Assignment) {
        let mut preds = BTreeMap::new();
        for (i, (p, k)) in self.sig.preds.iter().enumerate() {
            let mut set = BTreeSet::new();
            for idx in 0..m.n.pow(*k as u32) {
                if (m.ext[i][idx / 64] >> (idx % 64)) & 1 == 1 {
                    let mut tuple = Vec::new();
                    let mut r = idx;
                    for _ in 0..*k {
                        tuple.push(r % m.n);
                        r /= m.n;
                    }
                    set.insert(tuple);
                }
            }
            preds.insert(p.clone(), (*k, set));
        }
        let np = self.sig.params.len();
        let mut v = Assignment::default();
        for (i, p) in self.sig.params.iter().enumerate() {
            v.params.insert(p.clone(), env[self.name_slots[i]]);
        }
        for (name, s) in &self.var_slots {
            v.vars.insert(name.clone(), env[*s]);
        }
        let consts = self
            .sig
            .consts
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), env[self.name_slots[np + i]]))
            .collect();
        (
            Model {
                size: m.n,
                preds,
                consts,
            },
            v,
        )
    }
}

/// Default cap on the number of candidate pairs examined.
pub const DEFAULT_CAP: u128 = 1 << 32;

/// Options for countermodel search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub max_size: usize,
    pub cap: u128,
    /// Only assignments in restricted-growth form: the first name gets
    /// element 0, each later one at most one more than the largest used.
    /// Every model is isomorphic to one of these, so this is enough for
    /// deciding existence but changes which witness is found first.
    pub up_to_isomorphism: bool,
}

impl Enumeration {
    pub fn new(max_size: usize) -> Enumeration {
        Enumeration {
            max_size,
            cap: DEFAULT_CAP,
            up_to_isomorphism: false,
        }
    }
}

/// The first model and assignment, in enumeration order, that falsify `s`.
///
/// Models are ordered by size, then by predicate extensions (predicates by
/// name, each extension read as a binary number over its tuples, first
/// tuple most significant), then by the values of parameters followed by
/// constants. Free variables are treated like parameters.
pub fn find_countermodel(s: &Sequent, max_size: usize) -> Result<Option<(Model, Assignment)>, SemanticsError> {
    search(s, &Enumeration::new(max_size))
}

/// As [`find_countermodel`], with explicit options.
pub fn search(s: &Sequent, opts: &Enumeration) -> Result<Option<(Model, Assignment)>, SemanticsError> {
    if opts.max_size == 0 {
        return Err(SemanticsError::ZeroSize);
    }
    let sig = Signature::of_sequent(s)?;
    let fv: BTreeSet<String> = s.formulas().flat_map(Formula::free_vars).collect();
    let total: u128 = (1..=opts.max_size)
        .map(|n| sig.count(n, fv.len()))
        .fold(0u128, u128::saturating_add);
    if total > opts.cap {
        return Err(SemanticsError::SignatureTooLarge(total, opts.cap));
    }
    let code = Compiled::new(s, &sig);
    let names = code.name_slots.len() + code.var_slots.len();
    let all_slots: Vec<usize> = code
        .name_slots
        .iter()
        .copied()
        .chain(code.var_slots.iter().map(|(_, s)| *s))
        .collect();
    for n in 1..=opts.max_size {
        let interps = 1u128 << sig.bits(n);
        let found = (0..interps as u64).into_par_iter().find_map_first(|i| {
            let m = code.interp(n, i as u128);
            let mut env = vec![0usize; code.slots];
            let mut vals = vec![0usize; names];
            loop {
                for (k, &s) in all_slots.iter().enumerate() {
                    env[s] = vals[k];
                }
                if !code.holds(&m, &mut env) {
                    for (k, &s) in all_slots.iter().enumerate() {
                        env[s] = vals[k];
                    }
                    return Some(code.to_model(&m, &env));
                }
                if !next_assignment(&mut vals, n, opts.up_to_isomorphism) {
                    return None;
                }
            }
        });
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Advances `vals` to the next assignment in lexicographic order (last
/// position fastest). Returns false after the last one.
fn next_assignment(vals: &mut [usize], n: usize, restricted: bool) -> bool {
    for i in (0..vals.len()).rev() {
        let bound = if restricted {
            let prefix_max = vals[..i].iter().copied().max().map_or(0, |m| m + 1);
            prefix_max.min(n - 1)
        } else {
            n - 1
        };
        if vals[i] < bound {
            vals[i] += 1;
            for v in &mut vals[i + 1..] {
                *v = 0;
            }
            return true;
        }
    }
    false
}

/// True when no model of size at most `max_size` falsifies `s`.
pub fn valid_upto(s: &Sequent, max_size: usize) -> Result<bool, SemanticsError> {
    let opts = Enumeration {
        up_to_isomorphism: true,
        ..Enumeration::new(max_size)
    };
    Ok(search(s, &opts)?.is_none())
}

/// Evaluates formulas against every model and assignment of a fixed
/// signature, for exhaustive agreement checks.
pub struct Evaluator {
    code: Compiled,
}

impl Evaluator {
    /// `formulas` are compiled together; free variables and parameters of
    /// all of them share slots.
    pub fn new(formulas: &[Formula], sig: &Signature) -> Evaluator {
        Evaluator {
            code: Compiled::new(&Sequent::new(vec![], formulas.to_vec()), sig),
        }
    }

    /// Calls `f` with the truth values of the formulas for every model of
    /// size `n` and every assignment to parameters, constants and free
    /// variables. Stops early when `f` returns false.
    pub fn for_all(&self, n: usize, mut f: impl FnMut(&[bool]) -> bool) -> bool {
        let names = self.code.name_slots.len() + self.code.var_slots.len();
        let all: Vec<usize> = self
            .code
            .name_slots
            .iter()
            .copied()
            .chain(self.code.var_slots.iter().map(|(_, s)| *s))
            .collect();
        let mut out = vec![false; self.code.succ.len()];
        for i in 0..(1u128 << self.code.sig.bits(n)) {
            let m = self.code.interp(n, i);
            let mut env = vec![0usize; self.code.slots];
            let mut vals = vec![0usize; names];
            loop {
                for (k, &s) in all.iter().enumerate() {
                    env[s] = vals[k];
                }
                for (j, c) in self.code.succ.iter().enumerate() {
                    out[j] = run(c, &m, &mut env);
                }
                if !f(&out) {
                    return false;
                }
                if !next_assignment(&mut vals, n, false) {
                    break;
                }
            }
        }
        true
    }

    pub fn signature(&self) -> &Signature {
        &self.code.sig
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain: {}", self.size)?;
        for (p, (k, ext)) in &self.preds {
            let items: Vec<String> = ext
                .iter()
                .map(|t| {
                    if *k == 1 {
                        t[0].to_string()
                    } else {
                        let parts: Vec<String> = t.iter().map(usize::to_string).collect();
                        format!("({})", parts.join(","))
                    }
                })
                .collect();
            writeln!(f, "{p} = {{{}}}", items.join(", "))?;
        }
        for (c, d) in &self.consts {
            writeln!(f, "${c} = {d}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, d) in &self.params {
            writeln!(f, "#{p} = {d}")?;
        }
        for (x, d) in &self.vars {
            writeln!(f, "{x} = {d}")?;
        }
        Ok(())
    }
}

/// The countermodel text block: domain size, extensions, then values.
pub fn countermodel_to_string(m: &Model, v: &Assignment) -> String {
    format!("{m}{v}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_formula, parse_sequent};

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn model(size: usize, preds: &[(&str, usize, &[&[usize]])]) -> Model {
        Model {
            size,
            preds: preds
                .iter()
                .map(|(p, k, ext)| (p.to_string(), (*k, ext.iter().map(|t| t.to_vec()).collect())))
                .collect(),
            consts: BTreeMap::new(),
        }
    }

    #[test]
    fn description_clause() {
        let dd = f("(lam x. P(x)) (iota y. P(y))");
        let v = Assignment::default();
        assert!(eval(&model(2, &[("P", 1, &[&[0]])]), &v, &dd).unwrap());
        assert!(!eval(&model(2, &[("P", 1, &[&[0], &[1]])]), &v, &dd).unwrap());
        assert!(!eval(&model(2, &[("P", 1, &[])]), &v, &dd).unwrap());
    }

    #[test]
    fn identity_and_errors() {
        let mut v = Assignment::default();
        v.params.insert("a".into(), 1);
        let m = model(2, &[]);
        assert!(eval(&m, &v, &f("#a = #a")).unwrap());
        assert!(matches!(eval(&m, &v, &f("#b = #b")), Err(EvalError::Unbound(_))));
        assert!(matches!(eval(&m, &v, &f("P(#a)")), Err(EvalError::Uninterpreted(_))));
    }

    #[test]
    fn sequent_semantics() {
        let m = model(1, &[("P", 1, &[])]);
        let mut v = Assignment::default();
        v.params.insert("a".into(), 0);
        assert!(eval_sequent(&m, &v, &parse_sequent("P(#a) => P(#a)").unwrap()).unwrap());
        assert!(!eval_sequent(&m, &v, &parse_sequent("=> P(#a)").unwrap()).unwrap());
    }

    #[test]
    fn countermodels() {
        let s = parse_sequent("=> (lam x. P(x)) iota y. Q(y)").unwrap();
        let (m, _) = find_countermodel(&s, 1).unwrap().unwrap();
        assert_eq!(m.size, 1);
        assert!(m.preds["P"].1.is_empty() && m.preds["Q"].1.is_empty());
        assert_eq!(countermodel_to_string(&m, &Assignment::default()), "domain: 1\nP = {}\nQ = {}\n");
        assert!(find_countermodel(&parse_sequent("P(#a) => P(#a)").unwrap(), 3).unwrap().is_none());
        let (m, _) = find_countermodel(&parse_sequent("=> forall x. P(x)").unwrap(), 1).unwrap().unwrap();
        assert!(m.preds["P"].1.is_empty());
        let s = parse_sequent("(lam x. P(x)) iota y. P(y) => exists x. P(x)").unwrap();
        assert!(find_countermodel(&s, 2).unwrap().is_none());
    }

    #[test]
    fn enumeration_order_is_lexicographic() {
        // P's bits are more significant than Q's, so P = {} with Q = {0}
        // comes before P = {0} with Q = {}.
        let (m, v) = find_countermodel(&parse_sequent("P(#a) => Q(#a)").unwrap(), 2).unwrap().unwrap();
        assert_eq!(m.size, 1);
        assert_eq!(m.preds["P"].1, BTreeSet::from([vec![0]]));
        assert!(m.preds["Q"].1.is_empty());
        assert_eq!(v.params["a"], 0);
        let (m, v) = find_countermodel(&parse_sequent("#a = #a => #a = #b").unwrap(), 3).unwrap().unwrap();
        assert_eq!((m.size, v.params["a"], v.params["b"]), (2, 0, 1));
    }

    #[test]
    fn cap_guard() {
        let s = parse_sequent("=> R(#a, #b, #c, #d) | S(#a, #b, #c)").unwrap();
        let opts = Enumeration {
            cap: 1000,
            ..Enumeration::new(3)
        };
        assert!(matches!(search(&s, &opts), Err(SemanticsError::SignatureTooLarge(..))));
    }

    #[test]
    fn compiled_agrees_with_reference() {
        let forms = [
            "(lam x. P(x)) iota y. R(y, #a)",
            "forall z. (lam x. R(x, z)) iota y. (lam w. P(w)) iota v. R(v, y)",
            "(lam x. ~Q(x)) iota y. Q(y) & P(y)",
            "exists x. (lam y. R(x, y)) iota x. P(x)",
        ];
        for s in forms {
            let phi = f(s);
            let sig = Signature::of_formula(&phi).unwrap();
            let ev = Evaluator::new(std::slice::from_ref(&phi), &sig);
            for n in 1..=3 {
                let mut idx = 0u128;
                let k = ev.code.name_slots.len() + ev.code.var_slots.len();
                let assignments = (n as u128).pow(k as u32);
                ev.for_all(n, |vals| {
                    let interp = ev.code.interp(n, idx / assignments);
                    let mut env = vec![0usize; ev.code.slots];
                    let mut rem = idx % assignments;
                    let mut digits = vec![0usize; k];
                    for d in digits.iter_mut().rev() {
                        *d = (rem % n as u128) as usize;
                        rem /= n as u128;
                    }
                    for (i, &slot) in ev.code.name_slots.iter().chain(ev.code.var_slots.iter().map(|(_, s)| s)).enumerate() {
                        env[slot] = digits[i];
                    }
                    let (m, v) = ev.code.to_model(&interp, &env);
                    assert_eq!(eval(&m, &v, &phi).unwrap(), vals[0], "{s} at {m}{v}");
                    idx += 1;
                    true
                });
            }
        }
    }
}
