//! Equational reasoning over first-order terms.
//!
//! Equations are oriented by size, then closed under critical pairs. When
//! completion succeeds the rewrite system decides the theory; otherwise a
//! common normal form still proves an equality and anything else is
//! inconclusive.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use super::{FoTerm, Formula};
use crate::reduce::Budget;

/// Universally closed equations `lhs = rhs`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EquationSet {
    pub equations: Vec<(FoTerm, FoTerm)>,
}

impl EquationSet {
    pub fn new(equations: Vec<(FoTerm, FoTerm)>) -> Self {
        EquationSet { equations }
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// `p(0) = 0, p(s(x)) = x`.
    pub fn predecessor() -> Self {
        let p = |t: FoTerm| FoTerm::App("p".into(), alloc::vec![t]);
        EquationSet::new(alloc::vec![
            (p(FoTerm::zero()), FoTerm::zero()),
            (p(FoTerm::succ(FoTerm::var("x"))), FoTerm::var("x")),
        ])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Yes,
    No,
    Inconclusive,
}

fn occurrences(t: &FoTerm, out: &mut BTreeMap<String, usize>) {
    match t {
        FoTerm::Var(x) => *out.entry(x.clone()).or_default() += 1,
        FoTerm::App(_, args) => args.iter().for_each(|a| occurrences(a, out)),
    }
}

/// `a` is bigger than `b` under every instance.
fn greater(a: &FoTerm, b: &FoTerm) -> bool {
    if a.size() <= b.size() {
        return false;
    }
    let (mut oa, mut ob) = (BTreeMap::new(), BTreeMap::new());
    occurrences(a, &mut oa);
    occurrences(b, &mut ob);
    ob.iter().all(|(v, n)| oa.get(v).copied().unwrap_or(0) >= *n)
}

fn orient(l: &FoTerm, r: &FoTerm) -> Option<(FoTerm, FoTerm)> {
    if greater(l, r) {
        Some((l.clone(), r.clone()))
    } else if greater(r, l) {
        Some((r.clone(), l.clone()))
    } else {
        None
    }
}

fn match_term(p: &FoTerm, t: &FoTerm, env: &mut BTreeMap<String, FoTerm>) -> bool {
    match p {
        FoTerm::Var(x) => match env.get(x) {
            Some(prev) => prev == t,
            None => {
                env.insert(x.clone(), t.clone());
                true
            }
        },
        FoTerm::App(f, pargs) => match t {
            FoTerm::App(g, targs) if f == g && pargs.len() == targs.len() => {
                pargs.iter().zip(targs).all(|(a, b)| match_term(a, b, env))
            }
            _ => false,
        },
    }
}

fn resolve(t: &FoTerm, env: &BTreeMap<String, FoTerm>) -> FoTerm {
    match t {
        FoTerm::Var(x) => match env.get(x) {
            Some(u) => resolve(u, env),
            None => t.clone(),
        },
        FoTerm::App(f, args) => FoTerm::App(f.clone(), args.iter().map(|a| resolve(a, env)).collect()),
    }
}

fn unify(a: &FoTerm, b: &FoTerm) -> Option<BTreeMap<String, FoTerm>> {
    let mut env = BTreeMap::new();
    let mut todo = alloc::vec![(a.clone(), b.clone())];
    while let Some((x, y)) = todo.pop() {
        let (x, y) = (resolve(&x, &env), resolve(&y, &env));
        match (&x, &y) {
            _ if x == y => {}
            (FoTerm::Var(v), t) | (t, FoTerm::Var(v)) => {
                if t.vars().contains(v) {
                    return None;
                }
                env.insert(v.clone(), t.clone());
            }
            (FoTerm::App(f, xs), FoTerm::App(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return None;
                }
                todo.extend(xs.iter().cloned().zip(ys.iter().cloned()));
            }
        }
    }
    Some(env.keys().map(|k| (k.clone(), resolve(&FoTerm::Var(k.clone()), &env))).collect())
}

fn rename_apart(t: &FoTerm) -> FoTerm {
    match t {
        FoTerm::Var(x) => FoTerm::Var(alloc::format!("{x}'")),
        FoTerm::App(f, args) => FoTerm::App(f.clone(), args.iter().map(rename_apart).collect()),
    }
}

/// Non-variable subterm positions.
fn positions(t: &FoTerm, here: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if let FoTerm::App(_, args) = t {
        out.push(here.clone());
        for (i, a) in args.iter().enumerate() {
            here.push(i);
            positions(a, here, out);
            here.pop();
        }
    }
}

fn at<'a>(t: &'a FoTerm, pos: &[usize]) -> &'a FoTerm {
    match (t, pos.split_first()) {
        (FoTerm::App(_, args), Some((i, rest))) => at(&args[*i], rest),
        _ => t,
    }
}

fn replace_at(t: &FoTerm, pos: &[usize], with: &FoTerm) -> FoTerm {
    match (t, pos.split_first()) {
        (FoTerm::App(f, args), Some((i, rest))) => {
            let mut args = args.clone();
            args[*i] = replace_at(&args[*i], rest, with);
            FoTerm::App(f.clone(), args)
        }
        _ => with.clone(),
    }
}

/// An oriented rewrite system obtained by bounded completion.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    rules: Vec<(FoTerm, FoTerm)>,
    /// Every equation was oriented and every critical pair joins.
    pub complete: bool,
}

const MAX_RULES: usize = 64;

impl RewriteSystem {
    pub fn complete(e: &EquationSet, budget: Budget) -> Self {
        let mut sys = RewriteSystem { rules: Vec::new(), complete: true };
        for (l, r) in &e.equations {
            match orient(l, r) {
                Some(rule) => sys.rules.push(rule),
                None if l == r => {}
                None => sys.complete = false,
            }
        }
        let mut fuel = budget.max_steps();
        let mut checked = 0;
        while checked < sys.rules.len() {
            // critical pairs between the new rule `checked` and every rule up to it
            let i = checked;
            checked += 1;
            for j in 0..=i {
                for (a, b) in [(i, j), (j, i)] {
                    for (s, t) in sys.critical_pairs(a, b) {
                        let (s, t) = match (sys.normalize(&s, &mut fuel), sys.normalize(&t, &mut fuel)) {
                            (Some(s), Some(t)) => (s, t),
                            _ => {
                                sys.complete = false;
                                return sys;
                            }
                        };
                        if s == t {
                            continue;
                        }
                        match orient(&s, &t) {
                            Some(rule) if sys.rules.len() < MAX_RULES => sys.rules.push(rule),
                            _ => sys.complete = false,
                        }
                    }
                }
            }
        }
        sys
    }

    fn critical_pairs(&self, a: usize, b: usize) -> Vec<(FoTerm, FoTerm)> {
        let (l1, r1) = &self.rules[a];
        let l2 = rename_apart(&self.rules[b].0);
        let r2 = rename_apart(&self.rules[b].1);
        let mut pos = Vec::new();
        positions(l1, &mut Vec::new(), &mut pos);
        let mut out = Vec::new();
        for p in pos {
            if p.is_empty() && a == b {
                continue;
            }
            if let Some(env) = unify(at(l1, &p), &l2) {
                let left = resolve(r1, &env);
                let right = resolve(&replace_at(l1, &p, &r2), &env);
                out.push((left, right));
            }
        }
        out
    }

    /// Innermost normal form; `None` once `fuel` runs out.
    pub fn normalize(&self, t: &FoTerm, fuel: &mut usize) -> Option<FoTerm> {
        let t = match t {
            FoTerm::Var(_) => return Some(t.clone()),
            FoTerm::App(f, args) => {
                let args = args.iter().map(|a| self.normalize(a, fuel)).collect::<Option<Vec<_>>>()?;
                FoTerm::App(f.clone(), args)
            }
        };
        for (l, r) in &self.rules {
            let mut env = BTreeMap::new();
            if match_term(l, &t, &mut env) {
                *fuel = fuel.checked_sub(1)?;
                return self.normalize(&r.subst(&env), fuel);
            }
        }
        Some(t)
    }
}

/// Is `a ≈ b` a consequence of `e`?
pub fn equal_modulo(e: &EquationSet, a: &FoTerm, b: &FoTerm, budget: Budget) -> Decision {
    if a == b {
        return Decision::Yes;
    }
    if e.is_empty() {
        return Decision::No;
    }
    let sys = RewriteSystem::complete(e, budget);
    let mut fuel = budget.max_steps();
    match (sys.normalize(a, &mut fuel), sys.normalize(b, &mut fuel)) {
        (Some(x), Some(y)) if x == y => Decision::Yes,
        (Some(_), Some(_)) if sys.complete => Decision::No,
        _ => Decision::Inconclusive,
    }
}

/// `A ≈ B`: equal up to renaming of bound variables and replacement of
/// first-order arguments by provably equal ones.
pub fn formula_equal_modulo(e: &EquationSet, a: &Formula, b: &Formula, budget: Budget) -> Decision {
    fn go(e: &EquationSet, a: &Formula, b: &Formula, budget: Budget) -> Decision {
        match (a, b) {
            (Formula::Bottom, Formula::Bottom) => Decision::Yes,
            (Formula::Atom(p, xs), Formula::Atom(q, ys)) if p == q && xs.len() == ys.len() => {
                combine(xs.iter().zip(ys).map(|(x, y)| equal_modulo(e, x, y, budget)))
            }
            (Formula::Arrow(a1, a2), Formula::Arrow(b1, b2)) => {
                combine([go(e, a1, b1, budget), go(e, a2, b2, budget)].into_iter())
            }
            (Formula::ForallFo(x, a), Formula::ForallFo(y, b))
            | (Formula::ForallSo(x, a), Formula::ForallSo(y, b))
            | (Formula::ForallClassical(x, a), Formula::ForallClassical(y, b))
                if x == y =>
            {
                go(e, a, b, budget)
            }
            _ => Decision::No,
        }
    }
    fn combine(ds: impl Iterator<Item = Decision>) -> Decision {
        let mut out = Decision::Yes;
        for d in ds {
            match d {
                Decision::No => return Decision::No,
                Decision::Inconclusive => out = Decision::Inconclusive,
                Decision::Yes => {}
            }
        }
        out
    }
    go(e, &a.canonical(), &b.canonical(), budget)
}

fn ground_terms(symbols: &BTreeSet<(String, usize)>, depth: usize, cap: usize) -> Vec<FoTerm> {
    let mut all: Vec<FoTerm> = symbols
        .iter()
        .filter(|(_, n)| *n == 0)
        .map(|(c, _)| FoTerm::constant(c))
        .collect();
    for _ in 0..depth {
        let mut next = Vec::new();
        for (f, n) in symbols.iter().filter(|(_, n)| *n > 0) {
            let mut tuples: Vec<Vec<FoTerm>> = alloc::vec![Vec::new()];
            for _ in 0..*n {
                tuples = tuples
                    .into_iter()
                    .flat_map(|t| {
                        all.iter().map(move |a| {
                            let mut t = t.clone();
                            t.push(a.clone());
                            t
                        })
                    })
                    .take(cap)
                    .collect();
            }
            next.extend(tuples.into_iter().map(|args| FoTerm::App(f.clone(), args)));
        }
        for t in next {
            if all.len() >= cap {
                break;
            }
            if !all.contains(&t) {
                all.push(t);
            }
        }
    }
    all
}

/// Bounded search for a ground counterexample to adequacy with the
/// integers: `s(a) ≈ 0`, or `s(a) ≈ s(b)` with `a ≉ b`.
pub fn check_adequate(e: &EquationSet, budget: Budget) -> Decision {
    if e.is_empty() {
        return Decision::Yes;
    }
    let sys = RewriteSystem::complete(e, budget);
    let mut symbols = BTreeSet::from([(String::from("0"), 0), (String::from("s"), 1)]);
    for (l, r) in &e.equations {
        l.symbols(&mut symbols);
        r.symbols(&mut symbols);
    }
    let mut fuel = budget.max_steps();
    let zero = match sys.normalize(&FoTerm::zero(), &mut fuel) {
        Some(z) => z,
        None => return Decision::Inconclusive,
    };
    let mut classes: BTreeMap<FoTerm, FoTerm> = BTreeMap::new();
    for a in ground_terms(&symbols, 3, 400) {
        let (na, nsa) = match (sys.normalize(&a, &mut fuel), sys.normalize(&FoTerm::succ(a), &mut fuel)) {
            (Some(x), Some(y)) => (x, y),
            _ => return Decision::Inconclusive,
        };
        if nsa == zero {
            return Decision::No;
        }
        match classes.get(&nsa) {
            Some(prev) if *prev != na && sys.complete => return Decision::No,
            Some(_) => {}
            None => {
                classes.insert(nsa, na);
            }
        }
    }
    if sys.complete {
        Decision::Yes
    } else {
        Decision::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(t: FoTerm) -> FoTerm {
        FoTerm::App("p".into(), vec![t])
    }

    fn b() -> Budget {
        Budget::new(10_000)
    }

    #[test]
    fn predecessor_theory() {
        let e = EquationSet::predecessor();
        assert_eq!(equal_modulo(&e, &p(FoTerm::numeral(1)), &FoTerm::zero(), b()), Decision::Yes);
        assert_eq!(equal_modulo(&e, &p(p(FoTerm::numeral(3))), &FoTerm::numeral(1), b()), Decision::Yes);
        assert_eq!(equal_modulo(&e, &p(FoTerm::numeral(2)), &FoTerm::zero(), b()), Decision::No);
        assert_eq!(
            equal_modulo(&e, &p(FoTerm::succ(FoTerm::var("y"))), &FoTerm::var("y"), b()),
            Decision::Yes
        );
    }

    #[test]
    fn empty_theory_is_syntactic() {
        let e = EquationSet::default();
        let t = FoTerm::var("t");
        assert_eq!(equal_modulo(&e, &t, &t, b()), Decision::Yes);
        assert_eq!(equal_modulo(&e, &FoTerm::numeral(1), &FoTerm::zero(), b()), Decision::No);
    }

    #[test]
    fn completion_adds_critical_pairs() {
        // f(g(x)) = x and g(f(x)) = x force f(g(f(y))) = f(y) and friends
        let f = |t: FoTerm| FoTerm::App("f".into(), vec![t]);
        let g = |t: FoTerm| FoTerm::App("g".into(), vec![t]);
        let x = FoTerm::var("x");
        let e = EquationSet::new(vec![(f(g(x.clone())), x.clone()), (g(f(x.clone())), x)]);
        let y = FoTerm::var("y");
        assert_eq!(equal_modulo(&e, &f(g(f(y.clone()))), &f(y.clone()), b()), Decision::Yes);
        assert_eq!(equal_modulo(&e, &f(y.clone()), &g(y), b()), Decision::No);
    }

    #[test]
    fn commutativity_is_inconclusive() {
        let plus = |a: FoTerm, c: FoTerm| FoTerm::App("plus".into(), vec![a, c]);
        let (x, y) = (FoTerm::var("x"), FoTerm::var("y"));
        let e = EquationSet::new(vec![(plus(x.clone(), y.clone()), plus(y, x))]);
        let (a, c) = (FoTerm::constant("a"), FoTerm::constant("c"));
        assert_eq!(equal_modulo(&e, &plus(a.clone(), c.clone()), &plus(c, a), b()), Decision::Inconclusive);
    }

    #[test]
    fn adequacy() {
        assert_eq!(check_adequate(&EquationSet::predecessor(), b()), Decision::Yes);
        let bad = EquationSet::new(vec![(FoTerm::numeral(1), FoTerm::zero())]);
        assert_eq!(check_adequate(&bad, b()), Decision::No);
        assert_eq!(check_adequate(&EquationSet::default(), b()), Decision::Yes);
        // s(s(0)) = s(0) identifies 1 and 0 under a successor
        let bad2 = EquationSet::new(vec![(FoTerm::numeral(2), FoTerm::numeral(1))]);
        assert_eq!(check_adequate(&bad2, b()), Decision::No);
    }

    #[test]
    fn formula_level_equality() {
        let e = EquationSet::predecessor();
        let a = super::super::library::nat(p(FoTerm::numeral(1)));
        let c = super::super::library::nat(FoTerm::zero());
        assert_eq!(formula_equal_modulo(&e, &a, &c, b()), Decision::Yes);
        let d = super::super::library::nat(FoTerm::numeral(1));
        assert_eq!(formula_equal_modulo(&e, &a, &d, b()), Decision::No);
    }
}
