//! Second-order formulas over first-order terms.
//!
//! Formulas use names for every variable kind. Substitutions rename bound
//! variables when needed and [`Formula::alpha_eq`] compares up to renaming.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

pub mod classify;
pub mod equations;
pub mod syntax;

pub use classify::{ends_with, instantiate_top, instantiates, is_classical_type, polarity, Instantiation, Polarity, WitnessItem};
pub use equations::{check_adequate, equal_modulo, formula_equal_modulo, Decision, EquationSet};

/// First-order term. Constants are applications with no argument.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FoTerm {
    Var(String),
    App(String, Vec<FoTerm>),
}

impl FoTerm {
    pub fn var(x: &str) -> FoTerm {
        FoTerm::Var(x.to_string())
    }

    pub fn constant(c: &str) -> FoTerm {
        FoTerm::App(c.to_string(), Vec::new())
    }

    pub fn zero() -> FoTerm {
        FoTerm::constant("0")
    }

    pub fn succ(t: FoTerm) -> FoTerm {
        FoTerm::App("s".into(), alloc::vec![t])
    }

    /// `sⁿ(0)`.
    pub fn numeral(n: usize) -> FoTerm {
        (0..n).fold(FoTerm::zero(), |t, _| FoTerm::succ(t))
    }

    /// `n` when the term is `sⁿ(0)`.
    pub fn as_numeral(&self) -> Option<usize> {
        match self {
            FoTerm::App(f, args) if f == "0" && args.is_empty() => Some(0),
            FoTerm::App(f, args) if f == "s" && args.len() == 1 => args[0].as_numeral().map(|n| n + 1),
            _ => None,
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            FoTerm::Var(x) => {
                out.insert(x.clone());
            }
            FoTerm::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            FoTerm::Var(_) => false,
            FoTerm::App(_, args) => args.iter().all(FoTerm::is_ground),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            FoTerm::Var(_) => 1,
            FoTerm::App(_, args) => 1 + args.iter().map(FoTerm::size).sum::<usize>(),
        }
    }

    pub fn subst(&self, map: &BTreeMap<String, FoTerm>) -> FoTerm {
        match self {
            FoTerm::Var(x) => map.get(x).cloned().unwrap_or_else(|| self.clone()),
            FoTerm::App(f, args) => FoTerm::App(f.clone(), args.iter().map(|a| a.subst(map)).collect()),
        }
    }

    pub fn subst_one(&self, x: &str, t: &FoTerm) -> FoTerm {
        let mut m = BTreeMap::new();
        m.insert(x.to_string(), t.clone());
        self.subst(&m)
    }

    /// Function symbols with their arities.
    pub fn symbols(&self, out: &mut BTreeSet<(String, usize)>) {
        if let FoTerm::App(f, args) = self {
            out.insert((f.clone(), args.len()));
            args.iter().for_each(|a| a.symbols(out));
        }
    }
}

/// Predicate position of an atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pred {
    /// A predicate constant such as `D`.
    Symbol(String),
    /// An ordinary second-order variable `X`.
    Var(String),
    /// A classical variable `X_C`.
    Classical(String),
}

impl Pred {
    pub fn name(&self) -> &str {
        match self {
            Pred::Symbol(s) | Pred::Var(s) | Pred::Classical(s) => s,
        }
    }

    pub fn is_variable(&self) -> bool {
        !matches!(self, Pred::Symbol(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Bottom,
    Atom(Pred, Vec<FoTerm>),
    Arrow(Box<Formula>, Box<Formula>),
    ForallFo(String, Box<Formula>),
    ForallSo(String, Box<Formula>),
    ForallClassical(String, Box<Formula>),
}

/// A formula abstracted over first-order parameters, the value of a
/// second-order variable in an instantiation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Comprehension {
    pub params: Vec<String>,
    pub body: Formula,
}

impl Comprehension {
    pub fn new(params: &[&str], body: Formula) -> Self {
        Comprehension { params: params.iter().map(|p| p.to_string()).collect(), body }
    }

    /// A 0-ary comprehension.
    pub fn formula(body: Formula) -> Self {
        Comprehension { params: Vec::new(), body }
    }

    /// `body[args/params]`. Extra arguments are ignored and missing ones
    /// leave their parameter free.
    pub fn apply(&self, args: &[FoTerm]) -> Formula {
        let map: BTreeMap<String, FoTerm> = self.params.iter().cloned().zip(args.iter().cloned()).collect();
        self.body.subst_fo_map(&map)
    }

    pub fn fo_free_vars(&self) -> BTreeSet<String> {
        let mut fv = self.body.fo_free_vars();
        for p in &self.params {
            fv.remove(p);
        }
        fv
    }

    pub fn alpha_eq(&self, other: &Comprehension) -> bool {
        if self.params.len() != other.params.len() {
            return false;
        }
        let fresh: Vec<FoTerm> = (0..self.params.len()).map(|i| FoTerm::Var(alloc::format!("%p{i}"))).collect();
        self.apply(&fresh).alpha_eq(&other.apply(&fresh))
    }
}

/// `base` if unused, otherwise the first `base<k>` not in `taken`.
pub(crate) fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..).map(|k| alloc::format!("{base}{k}")).find(|c| !taken.contains(c)).unwrap()
}

impl Formula {
    pub fn atom(p: Pred, args: Vec<FoTerm>) -> Formula {
        Formula::Atom(p, args)
    }

    /// `X(args)` for an ordinary variable `X`.
    pub fn var_atom(x: &str, args: Vec<FoTerm>) -> Formula {
        Formula::Atom(Pred::Var(x.to_string()), args)
    }

    pub fn classical_atom(x: &str, args: Vec<FoTerm>) -> Formula {
        Formula::Atom(Pred::Classical(x.to_string()), args)
    }

    pub fn arrow(a: Formula, b: Formula) -> Formula {
        Formula::Arrow(Box::new(a), Box::new(b))
    }

    /// `A₁ → … → Aₙ → B`.
    pub fn arrows<I: IntoIterator<Item = Formula>>(premises: I, conclusion: Formula) -> Formula
    where
        I::IntoIter: DoubleEndedIterator,
    {
        premises.into_iter().rev().fold(conclusion, |acc, p| Formula::arrow(p, acc))
    }

    /// `¬A`, that is `A → ⊥`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::arrow(a, Formula::Bottom)
    }

    pub fn forall_fo(x: &str, body: Formula) -> Formula {
        Formula::ForallFo(x.to_string(), Box::new(body))
    }

    pub fn forall_so(x: &str, body: Formula) -> Formula {
        Formula::ForallSo(x.to_string(), Box::new(body))
    }

    pub fn forall_classical(x: &str, body: Formula) -> Formula {
        Formula::ForallClassical(x.to_string(), Box::new(body))
    }

    /// The premise when the formula is `¬A`.
    pub fn negated(&self) -> Option<&Formula> {
        match self {
            Formula::Arrow(a, b) if **b == Formula::Bottom => Some(a),
            _ => None,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Bottom | Formula::Atom(..) => 1,
            Formula::Arrow(a, b) => 1 + a.size() + b.size(),
            Formula::ForallFo(_, b) | Formula::ForallSo(_, b) | Formula::ForallClassical(_, b) => 1 + b.size(),
        }
    }

    pub fn fo_free_vars(&self) -> BTreeSet<String> {
        match self {
            Formula::Bottom => BTreeSet::new(),
            Formula::Atom(_, args) => args.iter().flat_map(|a| a.vars()).collect(),
            Formula::Arrow(a, b) => {
                let mut s = a.fo_free_vars();
                s.extend(b.fo_free_vars());
                s
            }
            Formula::ForallFo(x, b) => {
                let mut s = b.fo_free_vars();
                s.remove(x);
                s
            }
            Formula::ForallSo(_, b) | Formula::ForallClassical(_, b) => b.fo_free_vars(),
        }
    }

    /// Free predicate variables, ordinary and classical.
    pub fn pred_free_vars(&self) -> BTreeSet<Pred> {
        match self {
            Formula::Bottom => BTreeSet::new(),
            Formula::Atom(p, _) if p.is_variable() => BTreeSet::from([p.clone()]),
            Formula::Atom(..) => BTreeSet::new(),
            Formula::Arrow(a, b) => {
                let mut s = a.pred_free_vars();
                s.extend(b.pred_free_vars());
                s
            }
            Formula::ForallFo(_, b) => b.pred_free_vars(),
            Formula::ForallSo(x, b) => {
                let mut s = b.pred_free_vars();
                s.remove(&Pred::Var(x.clone()));
                s
            }
            Formula::ForallClassical(x, b) => {
                let mut s = b.pred_free_vars();
                s.remove(&Pred::Classical(x.clone()));
                s
            }
        }
    }

    pub fn has_free_pred(&self, p: &Pred) -> bool {
        self.pred_free_vars().contains(p)
    }

    /// Does any classical variable occur, free or bound?
    pub fn mentions_classical(&self) -> bool {
        match self {
            Formula::Atom(Pred::Classical(_), _) | Formula::ForallClassical(..) => true,
            Formula::Arrow(a, b) => a.mentions_classical() || b.mentions_classical(),
            Formula::ForallFo(_, b) | Formula::ForallSo(_, b) => b.mentions_classical(),
            _ => false,
        }
    }

    /// Every name used for a first-order variable, free or bound.
    pub fn fo_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| match f {
            Formula::Atom(_, args) => args.iter().for_each(|a| a.collect_vars(&mut out)),
            Formula::ForallFo(x, _) => {
                out.insert(x.clone());
            }
            _ => {}
        });
        out
    }

    /// Every predicate name (any kind), free or bound.
    pub fn pred_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| match f {
            Formula::Atom(p, _) => {
                out.insert(p.name().to_string());
            }
            Formula::ForallSo(x, _) | Formula::ForallClassical(x, _) => {
                out.insert(x.clone());
            }
            _ => {}
        });
        out
    }

    fn walk(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Arrow(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            Formula::ForallFo(_, b) | Formula::ForallSo(_, b) | Formula::ForallClassical(_, b) => b.walk(f),
            _ => {}
        }
    }

    /// Capture-avoiding `A[t/x]`.
    pub fn subst_fo(&self, x: &str, t: &FoTerm) -> Formula {
        let mut m = BTreeMap::new();
        m.insert(x.to_string(), t.clone());
        self.subst_fo_map(&m)
    }

    /// Capture-avoiding simultaneous first-order substitution.
    pub fn subst_fo_map(&self, map: &BTreeMap<String, FoTerm>) -> Formula {
        if map.is_empty() {
            return self.clone();
        }
        match self {
            Formula::Bottom => Formula::Bottom,
            Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|a| a.subst(map)).collect()),
            Formula::Arrow(a, b) => Formula::arrow(a.subst_fo_map(map), b.subst_fo_map(map)),
            Formula::ForallFo(y, b) => {
                let mut inner = map.clone();
                inner.remove(y);
                if inner.is_empty() {
                    return self.clone();
                }
                let image_vars: BTreeSet<String> = inner.values().flat_map(|t| t.vars()).collect();
                if image_vars.contains(y) {
                    let mut taken = image_vars;
                    taken.extend(b.fo_names());
                    taken.extend(inner.keys().cloned());
                    let y2 = fresh_name(y, &taken);
                    let renamed = b.subst_fo(y, &FoTerm::Var(y2.clone()));
                    Formula::ForallFo(y2, Box::new(renamed.subst_fo_map(&inner)))
                } else {
                    Formula::ForallFo(y.clone(), Box::new(b.subst_fo_map(&inner)))
                }
            }
            Formula::ForallSo(y, b) => Formula::ForallSo(y.clone(), Box::new(b.subst_fo_map(map))),
            Formula::ForallClassical(y, b) => Formula::ForallClassical(y.clone(), Box::new(b.subst_fo_map(map))),
        }
    }

    /// Renames the free occurrences of predicate variable `from` to `to`.
    fn rename_pred(&self, from: &Pred, to: &Pred) -> Formula {
        match self {
            Formula::Atom(p, args) if p == from => Formula::Atom(to.clone(), args.clone()),
            Formula::Arrow(a, b) => Formula::arrow(a.rename_pred(from, to), b.rename_pred(from, to)),
            Formula::ForallFo(y, b) => Formula::ForallFo(y.clone(), Box::new(b.rename_pred(from, to))),
            Formula::ForallSo(y, b) if *from != Pred::Var(y.clone()) => {
                Formula::ForallSo(y.clone(), Box::new(b.rename_pred(from, to)))
            }
            Formula::ForallClassical(y, b) if *from != Pred::Classical(y.clone()) => {
                Formula::ForallClassical(y.clone(), Box::new(b.rename_pred(from, to)))
            }
            other => other.clone(),
        }
    }

    /// Capture-avoiding `A[G/X]` for a predicate variable `X` (ordinary or
    /// classical).
    pub fn subst_pred(&self, x: &Pred, g: &Comprehension) -> Formula {
        let fo_fv = g.fo_free_vars();
        let pred_fv = g.body.pred_free_vars();
        self.subst_pred_with(x, g, &fo_fv, &pred_fv)
    }

    fn subst_pred_with(
        &self,
        x: &Pred,
        g: &Comprehension,
        fo_fv: &BTreeSet<String>,
        pred_fv: &BTreeSet<Pred>,
    ) -> Formula {
        let taken = || {
            let mut t: BTreeSet<String> = self.pred_names();
            t.extend(g.body.pred_names());
            t.extend(self.fo_names());
            t.extend(g.body.fo_names());
            t.insert(x.name().to_string());
            t
        };
        match self {
            Formula::Bottom => Formula::Bottom,
            Formula::Atom(p, args) if p == x => g.apply(args),
            Formula::Atom(..) => self.clone(),
            Formula::Arrow(a, b) => Formula::arrow(
                a.subst_pred_with(x, g, fo_fv, pred_fv),
                b.subst_pred_with(x, g, fo_fv, pred_fv),
            ),
            Formula::ForallFo(y, b) => {
                if !b.has_free_pred(x) {
                    return self.clone();
                }
                if fo_fv.contains(y) {
                    let y2 = fresh_name(y, &taken());
                    let renamed = b.subst_fo(y, &FoTerm::Var(y2.clone()));
                    Formula::ForallFo(y2, Box::new(renamed.subst_pred_with(x, g, fo_fv, pred_fv)))
                } else {
                    Formula::ForallFo(y.clone(), Box::new(b.subst_pred_with(x, g, fo_fv, pred_fv)))
                }
            }
            Formula::ForallSo(y, b) | Formula::ForallClassical(y, b) => {
                let classical = matches!(self, Formula::ForallClassical(..));
                let bound = if classical { Pred::Classical(y.clone()) } else { Pred::Var(y.clone()) };
                if bound == *x || !b.has_free_pred(x) {
                    return self.clone();
                }
                let (y, body) = if pred_fv.contains(&bound) {
                    let y2 = fresh_name(y, &taken());
                    let to = if classical { Pred::Classical(y2.clone()) } else { Pred::Var(y2.clone()) };
                    (y2, b.rename_pred(&bound, &to))
                } else {
                    (y.clone(), (**b).clone())
                };
                let body = Box::new(body.subst_pred_with(x, g, fo_fv, pred_fv));
                if classical {
                    Formula::ForallClassical(y, body)
                } else {
                    Formula::ForallSo(y, body)
                }
            }
        }
    }

    /// Bound variables renamed to `%k` by binding depth. Two formulas are
    /// alpha-equivalent exactly when their canonical forms are equal.
    pub fn canonical(&self) -> Formula {
        self.canon(0)
    }

    fn canon(&self, depth: usize) -> Formula {
        let name = alloc::format!("%{depth}");
        match self {
            Formula::Bottom | Formula::Atom(..) => self.clone(),
            Formula::Arrow(a, b) => Formula::arrow(a.canon(depth), b.canon(depth)),
            Formula::ForallFo(y, b) => {
                Formula::ForallFo(name.clone(), Box::new(b.subst_fo(y, &FoTerm::Var(name)).canon(depth + 1)))
            }
            Formula::ForallSo(y, b) => Formula::ForallSo(
                name.clone(),
                Box::new(b.rename_pred(&Pred::Var(y.clone()), &Pred::Var(name)).canon(depth + 1)),
            ),
            Formula::ForallClassical(y, b) => Formula::ForallClassical(
                name.clone(),
                Box::new(b.rename_pred(&Pred::Classical(y.clone()), &Pred::Classical(name)).canon(depth + 1)),
            ),
        }
    }

    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self.canonical() == other.canonical()
    }

    /// Applies `f` to every first-order argument of every atom.
    pub fn map_fo_terms(&self, f: &mut impl FnMut(&FoTerm) -> FoTerm) -> Formula {
        match self {
            Formula::Bottom => Formula::Bottom,
            Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(&mut *f).collect()),
            Formula::Arrow(a, b) => {
                let a = a.map_fo_terms(f);
                Formula::arrow(a, b.map_fo_terms(f))
            }
            Formula::ForallFo(y, b) => Formula::ForallFo(y.clone(), Box::new(b.map_fo_terms(f))),
            Formula::ForallSo(y, b) => Formula::ForallSo(y.clone(), Box::new(b.map_fo_terms(f))),
            Formula::ForallClassical(y, b) => Formula::ForallClassical(y.clone(), Box::new(b.map_fo_terms(f))),
        }
    }
}

/// Named formulas used throughout: the integer types.
pub mod library {
    use super::*;

    fn induction_var(t: &FoTerm) -> String {
        fresh_name("y", &t.vars())
    }

    /// `N[t] = ∀X{X(0), ∀y(X(y) → X(sy)) → X(t)}`.
    pub fn nat(t: FoTerm) -> Formula {
        nat_with(t, |a| a, Pred::Var("X".into()), false)
    }

    /// `N*[t] = ∀X{¬X(0), ∀y(¬X(y) → ¬X(sy)) → ¬X(t)}`.
    pub fn nat_star(t: FoTerm) -> Formula {
        nat_with(t, Formula::not, Pred::Var("X".into()), false)
    }

    /// `N^C[t]`: `N[t]` over a classical variable.
    pub fn nat_classical(t: FoTerm) -> Formula {
        nat_with(t, |a| a, Pred::Classical("X".into()), true)
    }

    fn nat_with(t: FoTerm, wrap: impl Fn(Formula) -> Formula, x: Pred, classical: bool) -> Formula {
        let y = induction_var(&t);
        let at = |arg: FoTerm| wrap(Formula::Atom(x.clone(), alloc::vec![arg]));
        let step = Formula::forall_fo(
            &y,
            Formula::arrow(at(FoTerm::var(&y)), at(FoTerm::succ(FoTerm::var(&y)))),
        );
        let body = Formula::arrows([at(FoTerm::zero()), step], at(t));
        if classical {
            Formula::forall_classical(x.name(), body)
        } else {
            Formula::forall_so(x.name(), body)
        }
    }

    /// Propositional `N = ∀X{X, (X → X) → X}`.
    pub fn nat_prop() -> Formula {
        let x = || Formula::var_atom("X", Vec::new());
        Formula::forall_so("X", Formula::arrows([x(), Formula::arrow(x(), x())], x()))
    }

    /// `∀X{¬¬X → X}`.
    pub fn double_negation() -> Formula {
        let x = || Formula::var_atom("X", Vec::new());
        Formula::forall_so("X", Formula::arrow(Formula::not(Formula::not(x())), x()))
    }

    /// `∀X_C{¬¬X_C → X_C}`.
    pub fn double_negation_classical() -> Formula {
        let x = || Formula::classical_atom("X", Vec::new());
        Formula::forall_classical("X", Formula::arrow(Formula::not(Formula::not(x())), x()))
    }

    /// `∀X_C{⊥ → X_C}`.
    pub fn ex_falso_classical() -> Formula {
        Formula::forall_classical("X", Formula::arrow(Formula::Bottom, Formula::classical_atom("X", Vec::new())))
    }

    /// `∀x{N*[x] → ¬¬N[x]}`, the storage type.
    pub fn storage_type() -> Formula {
        let x = FoTerm::var("x");
        Formula::forall_fo(
            "x",
            Formula::arrow(nat_star(x.clone()), Formula::not(Formula::not(nat(x)))),
        )
    }
}
