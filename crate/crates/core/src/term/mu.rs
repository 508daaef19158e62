//! Lambda-mu terms `t ::= x | λx.t | (t)t | μα[β]t`.
//!
//! Lambda-variables and mu-variables use two independent de Bruijn index
//! spaces. In `Mu(_, target, body)` both `target` and `body` are in the scope
//! of the new mu-binder, so `μα[α]t` has target `MuName::Bound(0)`.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};

use super::Term;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MuName {
    Bound(usize),
    Free(String),
}

#[derive(Clone, Debug)]
pub enum MuTerm {
    Bound(usize),
    Free(String),
    Lam(String, Box<MuTerm>),
    App(Box<MuTerm>, Box<MuTerm>),
    /// `μα[β]t`: binder hint, named mu-variable, body.
    Mu(String, MuName, Box<MuTerm>),
}

impl PartialEq for MuTerm {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (MuTerm::Bound(a), MuTerm::Bound(b)) => a == b,
            (MuTerm::Free(a), MuTerm::Free(b)) => a == b,
            (MuTerm::Lam(_, a), MuTerm::Lam(_, b)) => a == b,
            (MuTerm::App(f, a), MuTerm::App(g, b)) => f == g && a == b,
            (MuTerm::Mu(_, n, a), MuTerm::Mu(_, m, b)) => n == m && a == b,
            _ => false,
        }
    }
}

impl Eq for MuTerm {}

impl MuTerm {
    pub fn var(name: &str) -> MuTerm {
        MuTerm::Free(name.to_string())
    }

    pub fn lam(name: &str, body: MuTerm) -> MuTerm {
        MuTerm::Lam(name.to_string(), Box::new(body.close_lambda(name, 0, 0)))
    }

    pub fn lams(names: &[&str], body: MuTerm) -> MuTerm {
        names.iter().rev().fold(body, |acc, x| MuTerm::lam(x, acc))
    }

    pub fn app(fun: MuTerm, arg: MuTerm) -> MuTerm {
        MuTerm::App(Box::new(fun), Box::new(arg))
    }

    pub fn apply<I: IntoIterator<Item = MuTerm>>(head: MuTerm, args: I) -> MuTerm {
        args.into_iter().fold(head, MuTerm::app)
    }

    /// `μbinder[target]body` where `binder` and `target` are mu-variable names
    /// and `target` may equal `binder`.
    pub fn mu(binder: &str, target: &str, body: MuTerm) -> MuTerm {
        let target = if target == binder {
            MuName::Bound(0)
        } else {
            MuName::Free(target.to_string())
        };
        MuTerm::Mu(binder.to_string(), target, Box::new(body.close_mu(binder, 0)))
    }

    pub fn from_term(t: &Term) -> Option<MuTerm> {
        Some(match t {
            Term::Bound(i) => MuTerm::Bound(*i),
            Term::Free(x) => MuTerm::Free(x.clone()),
            Term::Lam(h, b) => MuTerm::Lam(h.clone(), Box::new(MuTerm::from_term(b)?)),
            Term::App(f, a) => MuTerm::app(MuTerm::from_term(f)?, MuTerm::from_term(a)?),
            Term::Control | Term::Stack(_) => return None,
        })
    }

    /// The same term as a lambda-C term, if it has no mu-abstraction.
    pub fn to_term(&self) -> Option<Term> {
        Some(match self {
            MuTerm::Bound(i) => Term::Bound(*i),
            MuTerm::Free(x) => Term::Free(x.clone()),
            MuTerm::Lam(h, b) => Term::Lam(h.clone(), Box::new(b.to_term()?)),
            MuTerm::App(f, a) => Term::app(f.to_term()?, a.to_term()?),
            MuTerm::Mu(..) => return None,
        })
    }

    fn close_lambda(&self, name: &str, depth: usize, _mu: usize) -> MuTerm {
        match self {
            MuTerm::Free(x) if x == name => MuTerm::Bound(depth),
            MuTerm::Lam(h, b) => MuTerm::Lam(h.clone(), Box::new(b.close_lambda(name, depth + 1, _mu))),
            MuTerm::App(f, a) => MuTerm::app(f.close_lambda(name, depth, _mu), a.close_lambda(name, depth, _mu)),
            MuTerm::Mu(h, n, b) => MuTerm::Mu(h.clone(), n.clone(), Box::new(b.close_lambda(name, depth, _mu + 1))),
            other => other.clone(),
        }
    }

    fn close_mu(&self, name: &str, depth: usize) -> MuTerm {
        match self {
            MuTerm::Lam(h, b) => MuTerm::Lam(h.clone(), Box::new(b.close_mu(name, depth))),
            MuTerm::App(f, a) => MuTerm::app(f.close_mu(name, depth), a.close_mu(name, depth)),
            MuTerm::Mu(h, n, b) => {
                let n = match n {
                    MuName::Free(x) if x == name => MuName::Bound(depth + 1),
                    other => other.clone(),
                };
                MuTerm::Mu(h.clone(), n, Box::new(b.close_mu(name, depth + 1)))
            }
            other => other.clone(),
        }
    }

    /// Shifts lambda indices at or above `lc` by `dl` and mu indices at or
    /// above `mc` by `dm`.
    pub(crate) fn shift(&self, dl: usize, dm: usize, lc: usize, mc: usize) -> MuTerm {
        if dl == 0 && dm == 0 {
            return self.clone();
        }
        match self {
            MuTerm::Bound(i) if *i >= lc => MuTerm::Bound(i + dl),
            MuTerm::Lam(h, b) => MuTerm::Lam(h.clone(), Box::new(b.shift(dl, dm, lc + 1, mc))),
            MuTerm::App(f, a) => MuTerm::app(f.shift(dl, dm, lc, mc), a.shift(dl, dm, lc, mc)),
            MuTerm::Mu(h, n, b) => {
                let n = match n {
                    MuName::Bound(j) if *j > mc => MuName::Bound(j + dm),
                    other => other.clone(),
                };
                MuTerm::Mu(h.clone(), n, Box::new(b.shift(dl, dm, lc, mc + 1)))
            }
            other => other.clone(),
        }
    }

    fn replace_lambda(&self, target: usize, mu_depth: usize, with: &MuTerm) -> MuTerm {
        match self {
            MuTerm::Bound(i) if *i == target => with.shift(target, mu_depth, 0, 0),
            MuTerm::Bound(i) if *i > target => MuTerm::Bound(i - 1),
            MuTerm::Lam(h, b) => MuTerm::Lam(h.clone(), Box::new(b.replace_lambda(target + 1, mu_depth, with))),
            MuTerm::App(f, a) => {
                MuTerm::app(f.replace_lambda(target, mu_depth, with), a.replace_lambda(target, mu_depth, with))
            }
            MuTerm::Mu(h, n, b) => MuTerm::Mu(h.clone(), n.clone(), Box::new(b.replace_lambda(target, mu_depth + 1, with))),
            other => other.clone(),
        }
    }

    /// `body[arg/x]` for the lambda-binder of `body`.
    pub fn instantiate(body: &MuTerm, arg: &MuTerm) -> MuTerm {
        body.replace_lambda(0, 0, arg)
    }

    pub fn open(body: &MuTerm, name: &str) -> MuTerm {
        MuTerm::instantiate(body, &MuTerm::var(name))
    }

    /// Inside a mu-body: every named subterm `[α]w`, with `α` the mu-variable
    /// of index `alpha`, becomes `[α](w)v`. The caller provides `v` already
    /// placed in the scope of `self`.
    pub(crate) fn append_to_named(&self, alpha: usize, v: &MuTerm) -> MuTerm {
        match self {
            MuTerm::Lam(h, b) => MuTerm::Lam(h.clone(), Box::new(b.append_to_named(alpha, &v.shift(1, 0, 0, 0)))),
            MuTerm::App(f, a) => MuTerm::app(f.append_to_named(alpha, v), a.append_to_named(alpha, v)),
            MuTerm::Mu(h, n, b) => {
                let inner_v = v.shift(0, 1, 0, 0);
                let mut body = b.append_to_named(alpha + 1, &inner_v);
                if *n == MuName::Bound(alpha + 1) {
                    body = MuTerm::app(body, inner_v);
                }
                MuTerm::Mu(h.clone(), n.clone(), Box::new(body))
            }
            other => other.clone(),
        }
    }

    /// Replaces mu-variable `target` (at depth 0) by `with` and lowers the
    /// mu indices above it.
    pub(crate) fn rename_mu(&self, target: usize, with: &MuName) -> MuTerm {
        match self {
            MuTerm::Lam(h, b) => MuTerm::Lam(h.clone(), Box::new(b.rename_mu(target, with))),
            MuTerm::App(f, a) => MuTerm::app(f.rename_mu(target, with), a.rename_mu(target, with)),
            MuTerm::Mu(h, n, b) => MuTerm::Mu(
                h.clone(),
                rename_name(n, target + 1, with),
                Box::new(b.rename_mu(target + 1, with)),
            ),
            other => other.clone(),
        }
    }

    /// Removes an unused mu-binder sitting directly above `self`: lowers every
    /// mu index that points past it.
    pub(crate) fn drop_mu(&self, cutoff: usize) -> MuTerm {
        match self {
            MuTerm::Lam(h, b) => MuTerm::Lam(h.clone(), Box::new(b.drop_mu(cutoff))),
            MuTerm::App(f, a) => MuTerm::app(f.drop_mu(cutoff), a.drop_mu(cutoff)),
            MuTerm::Mu(h, n, b) => {
                let n = match n {
                    MuName::Bound(j) if *j > cutoff => MuName::Bound(j - 1),
                    other => other.clone(),
                };
                MuTerm::Mu(h.clone(), n, Box::new(b.drop_mu(cutoff + 1)))
            }
            other => other.clone(),
        }
    }

    /// Does mu-variable `alpha` (index seen at depth 0) occur?
    pub(crate) fn mentions_mu(&self, alpha: usize) -> bool {
        match self {
            MuTerm::Lam(_, b) => b.mentions_mu(alpha),
            MuTerm::App(f, a) => f.mentions_mu(alpha) || a.mentions_mu(alpha),
            MuTerm::Mu(_, n, b) => *n == MuName::Bound(alpha + 1) || b.mentions_mu(alpha + 1),
            _ => false,
        }
    }

    /// Does some named subterm `[α]λy.w` occur, `α` of index `alpha`?
    pub(crate) fn names_abstraction(&self, alpha: usize) -> bool {
        match self {
            MuTerm::Lam(_, b) => b.names_abstraction(alpha),
            MuTerm::App(f, a) => f.names_abstraction(alpha) || a.names_abstraction(alpha),
            MuTerm::Mu(_, n, b) => {
                (*n == MuName::Bound(alpha + 1) && matches!(**b, MuTerm::Lam(..))) || b.names_abstraction(alpha + 1)
            }
            _ => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |t| {
            if let MuTerm::Free(x) = t {
                out.insert(x.clone());
            }
        });
        out
    }

    /// Free mu-variables: named ones plus dangling indices rendered as `#i`.
    pub fn free_mu_vars(&self) -> BTreeSet<String> {
        fn go(t: &MuTerm, depth: usize, out: &mut BTreeSet<String>) {
            match t {
                MuTerm::Lam(_, b) => go(b, depth, out),
                MuTerm::App(f, a) => {
                    go(f, depth, out);
                    go(a, depth, out);
                }
                MuTerm::Mu(_, n, b) => {
                    match n {
                        MuName::Free(x) => {
                            out.insert(x.clone());
                        }
                        MuName::Bound(j) if *j > depth => {
                            out.insert(alloc::format!("#{}", j - depth - 1));
                        }
                        _ => {}
                    }
                    go(b, depth + 1, out);
                }
                _ => {}
            }
        }
        let mut out = BTreeSet::new();
        go(self, 0, &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        fn lam_ok(t: &MuTerm, depth: usize) -> bool {
            match t {
                MuTerm::Bound(i) => *i < depth,
                MuTerm::Free(_) => false,
                MuTerm::Lam(_, b) => lam_ok(b, depth + 1),
                MuTerm::App(f, a) => lam_ok(f, depth) && lam_ok(a, depth),
                MuTerm::Mu(_, _, b) => lam_ok(b, depth),
            }
        }
        lam_ok(self, 0) && self.free_mu_vars().is_empty()
    }

    pub fn size(&self) -> usize {
        match self {
            MuTerm::Lam(_, b) | MuTerm::Mu(_, _, b) => 1 + b.size(),
            MuTerm::App(f, a) => 1 + f.size() + a.size(),
            _ => 1,
        }
    }

    fn walk(&self, f: &mut impl FnMut(&MuTerm)) {
        f(self);
        match self {
            MuTerm::Lam(_, b) | MuTerm::Mu(_, _, b) => b.walk(f),
            MuTerm::App(g, a) => {
                g.walk(f);
                a.walk(f);
            }
            _ => {}
        }
    }

    pub fn alpha_eq(&self, other: &MuTerm) -> bool {
        self == other
    }
}

fn rename_name(n: &MuName, target: usize, with: &MuName) -> MuName {
    match n {
        MuName::Bound(j) if *j == target => match with {
            MuName::Bound(k) => MuName::Bound(k + target),
            free => free.clone(),
        },
        MuName::Bound(j) if *j > target => MuName::Bound(j - 1),
        other => other.clone(),
    }
}

/// `λx.μα[φ](x)λy.μβ[α]y`, the control operator written with mu-abstraction.
/// `φ` stays free: it names the discarded `⊥` conclusion.
pub fn mu_control() -> MuTerm {
    let inner = MuTerm::lam("y", MuTerm::mu("beta", "alpha", MuTerm::var("y")));
    MuTerm::lam("x", MuTerm::mu("alpha", "phi", MuTerm::app(MuTerm::var("x"), inner)))
}

pub fn church_mu(n: usize) -> MuTerm {
    MuTerm::from_term(&super::church(n)).expect("numerals are pure")
}

pub fn builtin_mu(name: &str) -> Result<MuTerm, super::UnknownBuiltin> {
    if name == "muC" {
        return Ok(mu_control());
    }
    let t = super::builtin(name)?;
    MuTerm::from_term(&t).ok_or_else(|| super::UnknownBuiltin(name.to_string()))
}
