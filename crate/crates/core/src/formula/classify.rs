//! Syntactic classes of formulas: ending, classical types, polarity, and the
//! instantiation relation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use super::{fresh_name, Comprehension, FoTerm, Formula, Pred};

/// The formula left after removing every premise and quantifier: `⊥` or an
/// atom.
pub fn conclusion(a: &Formula) -> &Formula {
    match a {
        Formula::Arrow(_, b) | Formula::ForallFo(_, b) | Formula::ForallSo(_, b) | Formula::ForallClassical(_, b) => {
            conclusion(b)
        }
        other => other,
    }
}

/// Does `a` end with the predicate `x`?
pub fn ends_with(a: &Formula, x: &Pred) -> bool {
    matches!(conclusion(a), Formula::Atom(p, _) if p == x)
}

pub fn ends_with_bottom(a: &Formula) -> bool {
    *conclusion(a) == Formula::Bottom
}

/// Ends with `⊥` or with a classical variable.
pub fn is_classical_type(a: &Formula) -> bool {
    matches!(conclusion(a), Formula::Bottom | Formula::Atom(Pred::Classical(_), _))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
    Both,
    Neither,
}

impl Polarity {
    fn from_flags(pos: bool, neg: bool) -> Self {
        match (pos, neg) {
            (true, true) => Polarity::Both,
            (true, false) => Polarity::Positive,
            (false, true) => Polarity::Negative,
            (false, false) => Polarity::Neither,
        }
    }

    /// Member of the positive class.
    pub fn is_positive(self) -> bool {
        matches!(self, Polarity::Positive | Polarity::Both)
    }

    /// Member of the negative class.
    pub fn is_negative(self) -> bool {
        matches!(self, Polarity::Negative | Polarity::Both)
    }
}

fn flags(a: &Formula) -> (bool, bool) {
    match a {
        Formula::Bottom | Formula::Atom(..) => (true, true),
        Formula::Arrow(l, r) => {
            let (lp, ln) = flags(l);
            let (rp, rn) = flags(r);
            (ln && rp, lp && rn)
        }
        Formula::ForallFo(_, b) => flags(b),
        Formula::ForallSo(x, b) => {
            let (p, n) = flags(b);
            (p, n && !b.has_free_pred(&Pred::Var(x.clone())))
        }
        Formula::ForallClassical(x, b) => {
            let (p, n) = flags(b);
            (p, n && !b.has_free_pred(&Pred::Classical(x.clone())))
        }
    }
}

/// Membership in the positive and negative classes.
pub fn polarity(a: &Formula) -> Polarity {
    let (p, n) = flags(a);
    Polarity::from_flags(p, n)
}

/// A value for one instantiated quantifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessItem {
    Fo(String, FoTerm),
    So(String, Comprehension),
    Classical(String, Comprehension),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InstantiateError {
    #[error("formula is not quantified")]
    NotQuantified,
    #[error("witness kind does not match the quantifier")]
    KindMismatch,
    #[error("classical variable instantiated with a non-classical type")]
    NonClassical,
}

/// One instantiation step `∀v A ◁ A[w/v]`.
pub fn instantiate_top(a: &Formula, w: &WitnessItem) -> Result<Formula, InstantiateError> {
    match (a, w) {
        (Formula::ForallFo(x, b), WitnessItem::Fo(_, t)) => Ok(b.subst_fo(x, t)),
        (Formula::ForallSo(x, b), WitnessItem::So(_, g)) => Ok(b.subst_pred(&Pred::Var(x.clone()), g)),
        (Formula::ForallClassical(x, b), WitnessItem::Classical(_, g)) => {
            if !is_classical_type(&g.body) {
                return Err(InstantiateError::NonClassical);
            }
            Ok(b.subst_pred(&Pred::Classical(x.clone()), g))
        }
        (Formula::ForallFo(..) | Formula::ForallSo(..) | Formula::ForallClassical(..), _) => {
            Err(InstantiateError::KindMismatch)
        }
        _ => Err(InstantiateError::NotQuantified),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instantiation {
    /// Witnesses for the outermost quantifiers, in order.
    Witness(Vec<WitnessItem>),
    No(NoInstance),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoInstance {
    NotAnInstance,
    /// Only a non-classical value fits a classical variable.
    NonClassical,
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Fo,
    So,
    Classical,
}

struct Matcher {
    fo_metas: BTreeSet<String>,
    pred_metas: BTreeSet<Pred>,
    fo_env: BTreeMap<String, FoTerm>,
    pred_env: BTreeMap<Pred, Comprehension>,
    /// Occurrences of each unbound predicate left unmatched before one is
    /// used to build its value. The final verification covers them.
    defer: usize,
    seen: BTreeMap<Pred, usize>,
}

fn mentions_bound(t: &FoTerm) -> bool {
    t.vars().iter().any(|v| v.starts_with('%'))
}

fn abstract_term(t: &FoTerm, pats: &[(FoTerm, String)]) -> FoTerm {
    if let Some((_, p)) = pats.iter().find(|(u, _)| u == t) {
        return FoTerm::Var(p.clone());
    }
    match t {
        FoTerm::App(f, args) => FoTerm::App(f.clone(), args.iter().map(|a| abstract_term(a, pats)).collect()),
        v => v.clone(),
    }
}

impl Matcher {
    fn fo(&mut self, p: &FoTerm, t: &FoTerm) -> bool {
        match p {
            FoTerm::Var(x) if self.fo_metas.contains(x) => {
                if mentions_bound(t) {
                    return false;
                }
                match self.fo_env.get(x) {
                    Some(prev) => prev == t,
                    None => {
                        self.fo_env.insert(x.clone(), t.clone());
                        true
                    }
                }
            }
            FoTerm::Var(_) => p == t,
            FoTerm::App(f, pargs) => match t {
                FoTerm::App(g, targs) if f == g && pargs.len() == targs.len() => {
                    pargs.iter().zip(targs).all(|(a, b)| self.fo(a, b))
                }
                _ => false,
            },
        }
    }

    fn formula(&mut self, p: &Formula, t: &Formula) -> bool {
        match (p, t) {
            (Formula::Atom(x, pargs), _) if self.pred_metas.contains(x) => {
                let args: Vec<FoTerm> = pargs.iter().map(|a| a.subst(&self.fo_env)).collect();
                if let Some(g) = self.pred_env.get(x) {
                    return g.apply(&args).canonical() == *t;
                }
                let seen = self.seen.entry(x.clone()).or_default();
                *seen += 1;
                if *seen <= self.defer {
                    return true;
                }
                if t.pred_free_vars().iter().any(|q| q.name().starts_with('%')) {
                    return false;
                }
                let mut taken = t.fo_names();
                taken.extend(args.iter().flat_map(|a| a.vars()));
                let mut params = Vec::new();
                let mut pats = Vec::new();
                for a in &args {
                    let name = fresh_name("u", &taken);
                    taken.insert(name.clone());
                    let known = !a.vars().iter().any(|v| self.fo_metas.contains(v) || v.starts_with('%'));
                    if known && !pats.iter().any(|(u, _): &(FoTerm, String)| u == a) {
                        pats.push((a.clone(), name.clone()));
                    }
                    params.push(name);
                }
                let body = t.map_fo_terms(&mut |u| abstract_term(u, &pats));
                self.pred_env.insert(x.clone(), Comprehension { params, body });
                true
            }
            (Formula::Bottom, Formula::Bottom) => true,
            (Formula::Atom(x, pargs), Formula::Atom(y, targs)) => {
                x == y && pargs.len() == targs.len() && pargs.iter().zip(targs).all(|(a, b)| self.fo(a, b))
            }
            (Formula::Arrow(a, b), Formula::Arrow(c, d)) => self.formula(a, c) && self.formula(b, d),
            (Formula::ForallFo(x, a), Formula::ForallFo(y, b))
            | (Formula::ForallSo(x, a), Formula::ForallSo(y, b))
            | (Formula::ForallClassical(x, a), Formula::ForallClassical(y, b)) => x == y && self.formula(a, b),
            _ => false,
        }
    }
}

fn prefix(a: &Formula) -> Vec<(Kind, String)> {
    let mut out = Vec::new();
    let mut cur = a;
    loop {
        match cur {
            Formula::ForallFo(x, b) => {
                out.push((Kind::Fo, x.clone()));
                cur = b;
            }
            Formula::ForallSo(x, b) => {
                out.push((Kind::So, x.clone()));
                cur = b;
            }
            Formula::ForallClassical(x, b) => {
                out.push((Kind::Classical, x.clone()));
                cur = b;
            }
            _ => return out,
        }
    }
}

fn strip(a: &Formula, k: usize) -> &Formula {
    let mut cur = a;
    for _ in 0..k {
        cur = match cur {
            Formula::ForallFo(_, b) | Formula::ForallSo(_, b) | Formula::ForallClassical(_, b) => b,
            other => other,
        };
    }
    cur
}

/// Decides `a ◁ b` along chains that instantiate a prefix of the outer
/// quantifiers of `a`, returning the witnesses. Second-order values are
/// found by abstracting the atom arguments; the result is always verified.
pub fn instantiates(a: &Formula, b: &Formula) -> Instantiation {
    let target = b.canonical();
    let pre = prefix(a);
    let mut non_classical = false;
    for k in 0..=pre.len() {
        let metas = &pre[..k];
        let names: BTreeSet<&String> = metas.iter().map(|(_, n)| n).collect();
        if names.len() != k {
            continue;
        }
        let fo_metas: BTreeSet<String> =
            metas.iter().filter(|(kd, _)| *kd == Kind::Fo).map(|(_, n)| n.clone()).collect();
        let pred_metas: BTreeSet<Pred> = metas
            .iter()
            .filter_map(|(kd, n)| match kd {
                Kind::So => Some(Pred::Var(n.clone())),
                Kind::Classical => Some(Pred::Classical(n.clone())),
                Kind::Fo => None,
            })
            .collect();
        let pattern = strip(a, k).canonical();
        for defer in 0..MAX_DEFER {
            let mut m = Matcher {
                fo_metas: fo_metas.clone(),
                pred_metas: pred_metas.clone(),
                fo_env: BTreeMap::new(),
                pred_env: BTreeMap::new(),
                defer,
                seen: BTreeMap::new(),
            };
            let matched = m.formula(&pattern, &target);
            if !matched && m.seen.values().all(|n| *n <= defer) {
                break;
            }
            if !matched {
                continue;
            }
            match verify(a, metas, &m, &target) {
                Verified::Yes(ws) => return Instantiation::Witness(ws),
                Verified::NonClassical => non_classical = true,
                Verified::No => {}
            }
            if m.seen.values().all(|n| *n <= defer) {
                break;
            }
        }
    }
    Instantiation::No(if non_classical { NoInstance::NonClassical } else { NoInstance::NotAnInstance })
}

const MAX_DEFER: usize = 6;

enum Verified {
    Yes(Vec<WitnessItem>),
    NonClassical,
    No,
}

fn verify(a: &Formula, metas: &[(Kind, String)], m: &Matcher, target: &Formula) -> Verified {
    let witnesses: Vec<WitnessItem> = metas
        .iter()
        .map(|(kd, n)| match kd {
            Kind::Fo => WitnessItem::Fo(n.clone(), m.fo_env.get(n).cloned().unwrap_or_else(|| FoTerm::var(n))),
            Kind::So | Kind::Classical => {
                let p = if *kd == Kind::So { Pred::Var(n.clone()) } else { Pred::Classical(n.clone()) };
                let g = m.pred_env.get(&p).cloned().unwrap_or_else(|| Comprehension::formula(Formula::Atom(p, Vec::new())));
                if *kd == Kind::So {
                    WitnessItem::So(n.clone(), g)
                } else {
                    WitnessItem::Classical(n.clone(), g)
                }
            }
        })
        .collect();
    let mut cur = a.clone();
    for w in &witnesses {
        match instantiate_top(&cur, w) {
            Ok(next) => cur = next,
            Err(InstantiateError::NonClassical) => return Verified::NonClassical,
            Err(_) => return Verified::No,
        }
    }
    if cur.canonical() == *target {
        Verified::Yes(witnesses)
    } else {
        Verified::No
    }
}
