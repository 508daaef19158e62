//! Proptest strategies shared by the property and acceptance tests.
#![allow(dead_code)]

use mixlogic::formula::{Comprehension, FoTerm, Formula, Pred};
use mixlogic::{MuTerm, Term};
use proptest::prelude::*;

const LAM_NAMES: [&str; 3] = ["x", "y", "z"];
const FREE_NAMES: [&str; 3] = ["a", "b", "c"];

/// Named lambda-term; binders close over matching names when converted.
#[derive(Clone, Debug)]
pub enum Raw {
    Var(&'static str),
    Lam(&'static str, Box<Raw>),
    App(Box<Raw>, Box<Raw>),
    Control,
}

impl Raw {
    pub fn term(&self) -> Term {
        match self {
            Raw::Var(x) => Term::var(x),
            Raw::Lam(x, b) => Term::lam(x, b.term()),
            Raw::App(f, a) => Term::app(f.term(), a.term()),
            Raw::Control => Term::Control,
        }
    }
}

fn var_name() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["x", "y", "z", "a", "b", "c"])
}

fn raw(with_control: bool) -> impl Strategy<Value = Raw> {
    let leaf = if with_control {
        prop_oneof![4 => var_name().prop_map(Raw::Var), 1 => Just(Raw::Control)].boxed()
    } else {
        var_name().prop_map(Raw::Var).boxed()
    };
    leaf.prop_recursive(5, 24, 2, |inner| {
        prop_oneof![
            (prop::sample::select(LAM_NAMES.to_vec()), inner.clone()).prop_map(|(x, b)| Raw::Lam(x, Box::new(b))),
            (inner.clone(), inner).prop_map(|(f, a)| Raw::App(Box::new(f), Box::new(a))),
        ]
    })
}

/// Pure lambda-terms over the free variables `a`, `b`, `c` (and any of
/// `x`, `y`, `z` left unbound).
pub fn pure_term() -> impl Strategy<Value = Term> {
    raw(false).prop_map(|r| r.term())
}

/// Lambda-C terms.
pub fn c_term() -> impl Strategy<Value = Term> {
    raw(true).prop_map(|r| r.term())
}

/// Small closed pure terms used as substitution images.
pub fn closed_term() -> impl Strategy<Value = Term> {
    pure_term().prop_map(|t| {
        let fv: Vec<String> = t.free_vars().into_iter().collect();
        let names: Vec<&str> = fv.iter().map(String::as_str).collect();
        Term::lams(&names, t)
    })
}

/// Argument vectors of length 0..=3.
pub fn args() -> impl Strategy<Value = Vec<Term>> {
    prop::collection::vec(pure_term(), 0..=3)
}

/// A substitution for the free variables `a`, `b`, `c`.
pub fn var_images() -> impl Strategy<Value = Vec<(&'static str, Term)>> {
    prop::collection::vec((prop::sample::select(FREE_NAMES.to_vec()), pure_term()), 0..=3)
}

#[derive(Clone, Debug)]
pub enum RawMu {
    Var(&'static str),
    Lam(&'static str, Box<RawMu>),
    App(Box<RawMu>, Box<RawMu>),
    Mu(&'static str, &'static str, Box<RawMu>),
}

impl RawMu {
    pub fn term(&self) -> MuTerm {
        match self {
            RawMu::Var(x) => MuTerm::var(x),
            RawMu::Lam(x, b) => MuTerm::lam(x, b.term()),
            RawMu::App(f, a) => MuTerm::app(f.term(), a.term()),
            RawMu::Mu(al, be, b) => MuTerm::mu(al, be, b.term()),
        }
    }
}

/// Small lambda-mu terms with mu-names `al`, `be` and free `ph`.
pub fn mu_term() -> impl Strategy<Value = MuTerm> {
    let mu_name = || prop::sample::select(vec!["al", "be"]);
    var_name()
        .prop_map(RawMu::Var)
        .prop_recursive(5, 20, 2, move |inner| {
            prop_oneof![
                (prop::sample::select(LAM_NAMES.to_vec()), inner.clone())
                    .prop_map(|(x, b)| RawMu::Lam(x, Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(f, a)| RawMu::App(Box::new(f), Box::new(a))),
                (mu_name(), prop::sample::select(vec!["al", "be", "ph"]), inner)
                    .prop_map(|(a, b, t)| RawMu::Mu(a, b, Box::new(t))),
            ]
        })
        .prop_map(|r| r.term())
}

pub fn fo_term() -> impl Strategy<Value = FoTerm> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["x", "y", "z"]).prop_map(FoTerm::var),
        Just(FoTerm::zero()),
    ];
    leaf.prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(FoTerm::succ),
            (inner.clone(), inner).prop_map(|(a, b)| FoTerm::App("f".into(), vec![a, b])),
        ]
    })
}

/// Predicates: ordinary `X`, `Y` (unary), `Z` (nullary); classical `P`,
/// `Q` (unary); the constant `D` (unary).
fn atom(classical: bool) -> impl Strategy<Value = Formula> {
    let mut preds: Vec<(Pred, usize)> = vec![
        (Pred::Var("X".into()), 1),
        (Pred::Var("Y".into()), 1),
        (Pred::Var("Z".into()), 0),
        (Pred::Symbol("D".into()), 1),
    ];
    if classical {
        preds.push((Pred::Classical("P".into()), 1));
        preds.push((Pred::Classical("Q".into()), 1));
    }
    (prop::sample::select(preds), fo_term()).prop_map(|((p, arity), t)| {
        let args = if arity == 1 { vec![t] } else { Vec::new() };
        Formula::Atom(p, args)
    })
}

fn formula_with(classical: bool) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![4 => atom(classical), 1 => Just(Formula::Bottom)];
    leaf.prop_recursive(4, 16, 2, move |inner| {
        let mut arms = vec![
            (3, (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::arrow(a, b)).boxed()),
            (
                1,
                (prop::sample::select(vec!["x", "y"]), inner.clone())
                    .prop_map(|(x, b)| Formula::forall_fo(x, b))
                    .boxed(),
            ),
            (
                1,
                (prop::sample::select(vec!["X", "Y"]), inner.clone())
                    .prop_map(|(x, b)| Formula::forall_so(x, b))
                    .boxed(),
            ),
        ];
        if classical {
            arms.push((
                1,
                (prop::sample::select(vec!["P", "Q"]), inner)
                    .prop_map(|(x, b)| Formula::forall_classical(x, b))
                    .boxed(),
            ));
        }
        prop::strategy::Union::new_weighted(arms)
    })
}

/// Formulas that may use classical variables.
pub fn formula() -> impl Strategy<Value = Formula> {
    formula_with(true)
}

/// Formulas without classical variables.
pub fn ordinary_formula() -> impl Strategy<Value = Formula> {
    formula_with(false)
}

/// Unary comprehensions `λu.B`, where `B` mentions `u` through the
/// first-order variable `x` renamed.
pub fn comprehension(classical: bool) -> impl Strategy<Value = Comprehension> {
    formula_with(classical).prop_map(|b| Comprehension::new(&["u"], b.subst_fo("x", &FoTerm::var("u"))))
}

/// One link of a chain `u ::= x | (f)u | μα[β]u`.
#[derive(Clone, Debug, PartialEq)]
pub enum Link {
    F,
    /// Target: this binder (`None`) or the binder of an earlier link.
    Mu(Option<usize>),
    /// Target: a free mu-name.
    MuFree,
}

/// Chains of links with targets resolved to earlier mu-links.
pub fn chain() -> impl Strategy<Value = Vec<Link>> {
    prop::collection::vec((0..3u8, any::<prop::sample::Index>(), 0..8u8), 0..8).prop_map(|raw| {
        let mut out = Vec::new();
        let mut mus = Vec::new();
        for (kind, pick, free) in raw {
            match kind {
                0 => out.push(Link::F),
                _ if free == 0 => {
                    mus.push(out.len());
                    out.push(Link::MuFree);
                }
                _ => {
                    let k = pick.index(mus.len() + 1);
                    let target = mus.get(k).copied();
                    mus.push(out.len());
                    out.push(Link::Mu(target));
                }
            }
        }
        out
    })
}

/// `λx.λf.u` for the chain `u`.
pub fn chain_term(links: &[Link]) -> MuTerm {
    let name = |i: usize| format!("m{i}");
    let mut body = MuTerm::var("x");
    for (i, l) in links.iter().enumerate().rev() {
        body = match l {
            Link::F => MuTerm::app(MuTerm::var("f"), body),
            Link::Mu(None) => MuTerm::mu(&name(i), &name(i), body),
            Link::Mu(Some(j)) => MuTerm::mu(&name(i), &name(*j), body),
            Link::MuFree => MuTerm::mu(&name(i), "free", body),
        };
    }
    MuTerm::lams(&["x", "f"], body)
}

/// Sets of naturals for [`chain_rep`].
#[derive(Clone, Debug, PartialEq)]
pub enum Naturals {
    Set(std::collections::BTreeSet<usize>),
    From(usize),
}

impl Naturals {
    fn shift(self) -> Self {
        match self {
            Naturals::Set(s) => Naturals::Set(s.into_iter().map(|k| k + 1).collect()),
            Naturals::From(k) => Naturals::From(k + 1),
        }
    }

    fn meet(self, other: Naturals) -> Self {
        match (self, other) {
            (Naturals::From(a), Naturals::From(b)) => Naturals::From(a.max(b)),
            (Naturals::Set(s), Naturals::From(k)) | (Naturals::From(k), Naturals::Set(s)) => {
                Naturals::Set(s.into_iter().filter(|n| *n >= k).collect())
            }
            (Naturals::Set(a), Naturals::Set(b)) => Naturals::Set(a.intersection(&b).copied().collect()),
        }
    }
}

/// Independent reading of `rep` on a chain, computed bottom-up over the
/// suffixes of the link list.
pub fn chain_rep(links: &[Link]) -> Naturals {
    let n = links.len();
    let mut suffix: Vec<Naturals> = vec![Naturals::From(0); n + 1];
    suffix[n] = Naturals::Set([0].into());
    for i in (0..n).rev() {
        suffix[i] = match &links[i] {
            Link::F => suffix[i + 1].clone().shift(),
            Link::Mu(_) | Link::MuFree => (i..n)
                .filter(|&j| match &links[j] {
                    Link::Mu(None) => j == i,
                    Link::Mu(Some(k)) => *k == i,
                    _ => false,
                })
                .fold(Naturals::From(0), |acc, j| acc.meet(suffix[j + 1].clone())),
        };
    }
    suffix[0].clone()
}
