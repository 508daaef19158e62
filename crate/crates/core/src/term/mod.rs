//! Lambda-C terms in locally nameless form.
//!
//! Bound variables are de Bruijn indices, free variables carry names. Binders
//! keep their source name only as a printing hint, so structural equality of
//! two terms is alpha-equivalence.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::hash::{Hash, Hasher};

pub mod mu;
pub mod syntax;

pub use mu::{MuName, MuTerm};

/// A term of the pure lambda-calculus extended with the control constant `C`
/// and inert stack constants.
#[derive(Clone, Debug)]
pub enum Term {
    /// De Bruijn index of an enclosing `Lam`.
    Bound(usize),
    Free(String),
    /// Abstraction. The string is the binder's display hint.
    Lam(String, Box<Term>),
    App(Box<Term>, Box<Term>),
    /// The control constant `C`.
    Control,
    /// A stack constant `#p`.
    Stack(String),
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Term::Bound(a), Term::Bound(b)) => a == b,
            (Term::Free(a), Term::Free(b)) => a == b,
            (Term::Lam(_, a), Term::Lam(_, b)) => a == b,
            (Term::App(f, a), Term::App(g, b)) => f == g && a == b,
            (Term::Control, Term::Control) => true,
            (Term::Stack(a), Term::Stack(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        core::mem::discriminant(self).hash(state);
        match self {
            Term::Bound(i) => i.hash(state),
            Term::Free(x) | Term::Stack(x) => x.hash(state),
            Term::Lam(_, body) => body.hash(state),
            Term::App(f, a) => {
                f.hash(state);
                a.hash(state);
            }
            Term::Control => {}
        }
    }
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Free(name.to_string())
    }

    pub fn stack(name: &str) -> Term {
        Term::Stack(name.to_string())
    }

    /// `λname.body`, binding every free occurrence of `name` in `body`.
    pub fn lam(name: &str, body: Term) -> Term {
        Term::Lam(name.to_string(), Box::new(body.close(name, 0)))
    }

    /// Nested abstraction `λx₁…λxₙ.body`.
    pub fn lams(names: &[&str], body: Term) -> Term {
        names.iter().rev().fold(body, |acc, x| Term::lam(x, acc))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    /// `(head)a₁…aₙ`.
    pub fn apply<I: IntoIterator<Item = Term>>(head: Term, args: I) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    /// `(f)ⁿx`.
    pub fn iterate(f: &Term, n: usize, x: Term) -> Term {
        (0..n).fold(x, |acc, _| Term::app(f.clone(), acc))
    }

    fn close(&self, name: &str, depth: usize) -> Term {
        match self {
            Term::Free(x) if x == name => Term::Bound(depth),
            Term::Lam(h, b) => Term::Lam(h.clone(), Box::new(b.close(name, depth + 1))),
            Term::App(f, a) => Term::app(f.close(name, depth), a.close(name, depth)),
            other => other.clone(),
        }
    }

    /// Adds `by` to every index at or above `cutoff`.
    pub(crate) fn shift_up(&self, by: usize, cutoff: usize) -> Term {
        if by == 0 {
            return self.clone();
        }
        match self {
            Term::Bound(i) if *i >= cutoff => Term::Bound(i + by),
            Term::Lam(h, b) => Term::Lam(h.clone(), Box::new(b.shift_up(by, cutoff + 1))),
            Term::App(f, a) => Term::app(f.shift_up(by, cutoff), a.shift_up(by, cutoff)),
            other => other.clone(),
        }
    }

    /// Replaces index `target` (seen at depth 0) by `with` and lowers the
    /// indices above it: the body half of a beta step.
    fn replace_bound(&self, target: usize, with: &Term) -> Term {
        match self {
            Term::Bound(i) if *i == target => with.shift_up(target, 0),
            Term::Bound(i) if *i > target => Term::Bound(i - 1),
            Term::Lam(h, b) => Term::Lam(h.clone(), Box::new(b.replace_bound(target + 1, with))),
            Term::App(f, a) => Term::app(f.replace_bound(target, with), a.replace_bound(target, with)),
            other => other.clone(),
        }
    }

    /// Body of an abstraction with its bound variable replaced by `arg`.
    pub fn instantiate(body: &Term, arg: &Term) -> Term {
        body.replace_bound(0, arg)
    }

    /// Body of an abstraction with its bound variable made free under `name`.
    pub fn open(body: &Term, name: &str) -> Term {
        Term::instantiate(body, &Term::var(name))
    }

    /// Head and argument list of the application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut head = self;
        while let Term::App(f, a) = head {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    /// Free lambda-variables.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect(&mut |t| {
            if let Term::Free(x) = t {
                out.insert(x.clone());
            }
        });
        out
    }

    /// Stack constants occurring anywhere in the term.
    pub fn stack_constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect(&mut |t| {
            if let Term::Stack(p) = t {
                out.insert(p.clone());
            }
        });
        out
    }

    pub fn contains_control(&self) -> bool {
        let mut found = false;
        self.collect(&mut |t| found |= matches!(t, Term::Control));
        found
    }

    pub fn contains_stack(&self) -> bool {
        let mut found = false;
        self.collect(&mut |t| found |= matches!(t, Term::Stack(_)));
        found
    }

    /// True when no bound index escapes its binder.
    pub fn is_locally_closed(&self) -> bool {
        fn go(t: &Term, depth: usize) -> bool {
            match t {
                Term::Bound(i) => *i < depth,
                Term::Lam(_, b) => go(b, depth + 1),
                Term::App(f, a) => go(f, depth) && go(a, depth),
                _ => true,
            }
        }
        go(self, 0)
    }

    pub fn is_closed(&self) -> bool {
        self.is_locally_closed() && self.free_vars().is_empty()
    }

    /// Pure lambda-term: no `C`, no stack constant.
    pub fn is_pure(&self) -> bool {
        !self.contains_control() && !self.contains_stack()
    }

    /// Stack constants occur only as arguments of applications.
    pub fn is_lambda_cp(&self) -> bool {
        match self {
            Term::Stack(_) => false,
            Term::Lam(_, b) => b.is_lambda_cp(),
            Term::App(f, a) => f.is_lambda_cp() && (matches!(**a, Term::Stack(_)) || a.is_lambda_cp()),
            _ => true,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Lam(_, b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
            _ => 1,
        }
    }

    fn collect(&self, f: &mut impl FnMut(&Term)) {
        f(self);
        match self {
            Term::Lam(_, b) => b.collect(f),
            Term::App(g, a) => {
                g.collect(f);
                a.collect(f);
            }
            _ => {}
        }
    }

    /// Capture-avoiding simultaneous substitution. Stack-constant entries
    /// expand `(t)#p` into `(t)t₁…tₙ`.
    pub fn substitute(&self, s: &Substitution) -> Term {
        self.subst_at(s, 0)
    }

    fn subst_at(&self, s: &Substitution, depth: usize) -> Term {
        match self {
            Term::Free(x) => match s.vars.get(x) {
                Some(t) => t.shift_up(depth, 0),
                None => self.clone(),
            },
            Term::Lam(h, b) => Term::Lam(h.clone(), Box::new(b.subst_at(s, depth + 1))),
            Term::App(f, a) => {
                let f = f.subst_at(s, depth);
                match &**a {
                    Term::Stack(p) => match s.stacks.get(p) {
                        Some(seq) => Term::apply(f, seq.iter().map(|t| t.shift_up(depth, 0))),
                        None => Term::app(f, (**a).clone()),
                    },
                    _ => Term::app(f, a.subst_at(s, depth)),
                }
            }
            other => other.clone(),
        }
    }

    /// Alpha-equivalence; with indexed binders this is structural equality.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        self == other
    }

    /// First-order matching of `self` as a pattern whose free variables are
    /// metavariables. Returns the substitution that maps the pattern onto
    /// `target`, if any.
    pub fn match_against(&self, target: &Term) -> Option<BTreeMap<String, Term>> {
        fn go(p: &Term, t: &Term, depth: usize, env: &mut BTreeMap<String, Term>) -> bool {
            match (p, t) {
                (Term::Free(x), _) => {
                    // the image must not mention binders crossed on the way down
                    let lowered = match lower(t, depth) {
                        Some(l) => l,
                        None => return false,
                    };
                    match env.get(x) {
                        Some(prev) => *prev == lowered,
                        None => {
                            env.insert(x.clone(), lowered);
                            true
                        }
                    }
                }
                (Term::Lam(_, a), Term::Lam(_, b)) => go(a, b, depth + 1, env),
                (Term::App(f, a), Term::App(g, b)) => go(f, g, depth, env) && go(a, b, depth, env),
                _ => p == t,
            }
        }
        fn lower(t: &Term, depth: usize) -> Option<Term> {
            fn walk(t: &Term, depth: usize, cutoff: usize) -> Option<Term> {
                Some(match t {
                    Term::Bound(i) if *i >= cutoff => {
                        if *i - cutoff < depth {
                            return None;
                        }
                        Term::Bound(i - depth)
                    }
                    Term::Lam(h, b) => Term::Lam(h.clone(), Box::new(walk(b, depth, cutoff + 1)?)),
                    Term::App(f, a) => Term::app(walk(f, depth, cutoff)?, walk(a, depth, cutoff)?),
                    other => other.clone(),
                })
            }
            walk(t, depth, 0)
        }
        let mut env = BTreeMap::new();
        go(self, target, 0, &mut env).then_some(env)
    }
}

/// Simultaneous substitution of lambda-variables together with the
/// stack-constant part of a P-substitution.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Substitution {
    pub vars: BTreeMap<String, Term>,
    pub stacks: BTreeMap<String, Vec<Term>>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var(mut self, x: &str, t: Term) -> Self {
        self.vars.insert(x.to_string(), t);
        self
    }

    pub fn stack(mut self, p: &str, seq: Vec<Term>) -> Self {
        self.stacks.insert(p.to_string(), seq);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty() && self.stacks.is_empty()
    }
}

/// Church numeral `λx.λf.(f)ⁿx` (base first, step second).
pub fn church(n: usize) -> Term {
    Term::lams(&["x", "f"], Term::iterate(&Term::var("f"), n, Term::var("x")))
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &["zero", "succ", "T1", "T2", "abort", "Cprime", "Cwrap", "muC"];

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown builtin `{0}`")]
pub struct UnknownBuiltin(pub String);

/// The successor `λn.λx.λf.(f)((n)x)f`.
pub fn succ() -> Term {
    let (n, x, f) = (Term::var("n"), Term::var("x"), Term::var("f"));
    Term::lams(&["n", "x", "f"], Term::app(f.clone(), Term::apply(n, [x, f])))
}

/// `T₁ = λn.((n)δ)G` with `G = λx.λy.(x)λz.(y)(s)z` and `δ = λf.(f)0`.
pub fn storage_t1() -> Term {
    let delta = Term::lam("f", Term::app(Term::var("f"), church(0)));
    let g = Term::lams(
        &["x", "y"],
        Term::app(
            Term::var("x"),
            Term::lam("z", Term::app(Term::var("y"), Term::app(succ(), Term::var("z")))),
        ),
    );
    Term::lam("n", Term::apply(Term::var("n"), [delta, g]))
}

/// `T₂ = λn.λf.(((n)f)F)0` with `F = λx.λy.(x)(s)y`.
pub fn storage_t2() -> Term {
    let step = Term::lams(&["x", "y"], Term::app(Term::var("x"), Term::app(succ(), Term::var("y"))));
    Term::lams(&["n", "f"], Term::apply(Term::var("n"), [Term::var("f"), step, church(0)]))
}

/// `A = λx.(C)λy.x`.
pub fn abort() -> Term {
    Term::lam("x", Term::app(Term::Control, Term::lam("y", Term::var("x"))))
}

/// `C′ = λx.(C)λd.(x)λy.(x)λz.(d)y`.
pub fn c_prime() -> Term {
    let inner = Term::app(Term::var("x"), Term::lam("z", Term::app(Term::var("d"), Term::var("y"))));
    let body = Term::app(Term::var("x"), Term::lam("y", inner));
    Term::lam("x", Term::app(Term::Control, Term::lam("d", body)))
}

/// `λx.(C)x`, the control constant wrapped as an abstraction.
pub fn c_wrapper() -> Term {
    Term::lam("x", Term::app(Term::Control, Term::var("x")))
}

/// Closed lambda-C terms by name. `muC` lives on the lambda-mu side, see
/// [`mu::builtin_mu`].
pub fn builtin(name: &str) -> Result<Term, UnknownBuiltin> {
    Ok(match name {
        "zero" => church(0),
        "succ" => succ(),
        "T1" => storage_t1(),
        "T2" => storage_t2(),
        "abort" => abort(),
        "Cprime" => c_prime(),
        "Cwrap" => c_wrapper(),
        _ => return Err(UnknownBuiltin(name.to_string())),
    })
}

/// Deterministic fresh-name supply.
#[derive(Clone, Debug, Default)]
pub struct Fresh {
    next: u64,
}

impl Fresh {
    pub fn new(seed: u64) -> Self {
        Fresh { next: seed }
    }

    /// `base` if unused, otherwise `base<k>` for the next counter value `k`
    /// that avoids `taken`.
    pub fn name(&mut self, base: &str, taken: &BTreeSet<String>) -> String {
        if self.next == 0 && !taken.contains(base) {
            self.next += 1;
            return base.to_string();
        }
        loop {
            let candidate = alloc::format!("{base}{}", self.next);
            self.next += 1;
            if !taken.contains(&candidate) {
                return candidate;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn x() -> Term {
        Term::var("x")
    }
    fn y() -> Term {
        Term::var("y")
    }

    #[test]
    fn substitute_direct_hit() {
        let id = Term::lam("y", y());
        assert_eq!(x().substitute(&Substitution::new().var("x", id.clone())), id);
    }

    #[test]
    fn substitute_avoids_capture() {
        // λx.(x)y with y := x must not capture the substituted x
        let t = Term::lam("x", Term::app(x(), y()));
        let got = t.substitute(&Substitution::new().var("y", x()));
        let want = Term::lam("z", Term::app(Term::var("z"), x()));
        assert_eq!(got, want);
        assert_eq!(got.free_vars(), BTreeSet::from(["x".to_string()]));
    }

    #[test]
    fn substitute_expands_stack_constants() {
        let t = Term::app(Term::var("t"), Term::stack("p"));
        let s = Substitution::new().stack("p", vec![Term::var("u1"), Term::var("u2")]);
        assert_eq!(t.substitute(&s), Term::apply(Term::var("t"), [Term::var("u1"), Term::var("u2")]));
        let empty = Substitution::new().stack("p", vec![]);
        assert_eq!(t.substitute(&empty), Term::var("t"));
    }

    #[test]
    fn alpha_equivalence() {
        assert!(Term::lam("x", x()).alpha_eq(&Term::lam("y", y())));
        let a = Term::lams(&["x", "y"], Term::app(x(), y()));
        let b = Term::lams(&["y", "x"], Term::app(y(), x()));
        assert!(a.alpha_eq(&b));
        assert!(!Term::lam("x", x()).alpha_eq(&Term::lam("x", Term::app(x(), x()))));
    }

    #[test]
    fn free_variables() {
        assert_eq!(Term::lam("x", Term::app(x(), y())).free_vars(), BTreeSet::from(["y".to_string()]));
        assert!(Term::lam("x", x()).free_vars().is_empty());
        assert_eq!(Term::app(Term::Control, x()).free_vars(), BTreeSet::from(["x".to_string()]));
    }

    #[test]
    fn church_numerals() {
        assert_eq!(church(0), Term::lams(&["x", "f"], x()));
        let f = Term::var("f");
        assert_eq!(church(1), Term::lams(&["x", "f"], Term::app(f.clone(), x())));
        assert_eq!(church(2), Term::lams(&["x", "f"], Term::app(f.clone(), Term::app(f, x()))));
        for n in 0..20 {
            assert!(church(n).is_closed());
            assert_ne!(church(n), church(n + 1));
        }
    }

    #[test]
    fn builtins_are_closed() {
        for name in BUILTIN_NAMES.iter().filter(|n| **n != "muC") {
            assert!(builtin(name).unwrap().is_closed(), "{name}");
        }
        assert_eq!(builtin("nope"), Err(UnknownBuiltin("nope".into())));
    }

    #[test]
    fn lambda_cp_membership() {
        let ok = Term::app(Term::lam("x", Term::app(x(), Term::stack("p"))), y());
        assert!(ok.is_lambda_cp());
        assert!(!Term::app(Term::stack("p"), y()).is_lambda_cp());
        assert!(!Term::stack("p").is_lambda_cp());
        assert!(!Term::lam("x", Term::stack("p")).is_lambda_cp());
    }

    #[test]
    fn matching_binds_metavariables() {
        let pat = Term::app(Term::var("f"), Term::var("w"));
        let target = Term::app(Term::var("f"), church(2));
        let env = pat.match_against(&target).unwrap();
        assert_eq!(env["w"], church(2));
        // a metavariable cannot capture a bound index
        let pat = Term::lam("z", Term::var("w"));
        assert!(pat.match_against(&Term::lam("z", Term::var("z"))).is_none());
    }

    #[test]
    fn fresh_names_are_deterministic() {
        let taken = BTreeSet::from(["f".to_string(), "f2".to_string()]);
        let mut fresh = Fresh::new(0);
        assert_eq!(fresh.name("g", &taken), "g");
        assert_eq!(fresh.name("f", &taken), "f1");
        assert_eq!(fresh.name("f", &taken), "f3");
    }
}
