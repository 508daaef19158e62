//! The five lambda-mu rules: computation rules C1, C2 and simplification
//! rules S1, S2, S3.

use alloc::boxed::Box;
use alloc::vec::Vec;

use super::{drive, Budget, Dir, Path, ReduceError, Rule, Trace};
use crate::term::{MuName, MuTerm};

/// Contracts a redex sitting exactly at the root of `t`. Computation rules
/// come first, then S1, S2, S3.
fn root_step(t: &MuTerm) -> Option<(Rule, MuTerm)> {
    match t {
        MuTerm::App(f, a) => match &**f {
            MuTerm::Lam(_, body) => Some((Rule::C1, MuTerm::instantiate(body, a))),
            MuTerm::Mu(h, n, body) => {
                let v = a.shift(0, 1, 0, 0);
                let mut body = body.append_to_named(0, &v);
                if *n == MuName::Bound(0) {
                    body = MuTerm::app(body, v);
                }
                Some((Rule::C2, MuTerm::Mu(h.clone(), n.clone(), Box::new(body))))
            }
            _ => None,
        },
        MuTerm::Mu(h, n, body) => {
            if let MuTerm::Mu(_, inner_target, inner_body) = &**body {
                // [n]μβ[inner_target]inner_body with β renamed to n
                let target = rename_top(inner_target, n);
                return Some((Rule::S1, MuTerm::Mu(h.clone(), target, Box::new(inner_body.rename_mu(0, n)))));
            }
            if *n == MuName::Bound(0) && !body.mentions_mu(0) {
                return Some((Rule::S2, body.drop_mu(0)));
            }
            let names_lam = (*n == MuName::Bound(0) && matches!(**body, MuTerm::Lam(..))) || body.names_abstraction(0);
            if names_lam {
                let x = MuTerm::Bound(0);
                let mut inner = body.shift(1, 0, 0, 0).append_to_named(0, &x);
                if *n == MuName::Bound(0) {
                    inner = MuTerm::app(inner, x);
                }
                let mu = MuTerm::Mu(h.clone(), n.clone(), Box::new(inner));
                return Some((Rule::S3, MuTerm::Lam("x".into(), Box::new(mu))));
            }
            None
        }
        _ => None,
    }
}

fn rename_top(name: &MuName, with: &MuName) -> MuName {
    match name {
        MuName::Bound(0) => with.clone(),
        MuName::Bound(j) => MuName::Bound(j - 1),
        free => free.clone(),
    }
}

fn rebuild(t: &MuTerm, dir: Dir, child: MuTerm) -> MuTerm {
    match (t, dir) {
        (MuTerm::Lam(h, _), Dir::Body) => MuTerm::Lam(h.clone(), Box::new(child)),
        (MuTerm::Mu(h, n, _), Dir::Body) => MuTerm::Mu(h.clone(), n.clone(), Box::new(child)),
        (MuTerm::App(_, a), Dir::Fun) => MuTerm::App(Box::new(child), a.clone()),
        (MuTerm::App(f, _), Dir::Arg) => MuTerm::App(f.clone(), Box::new(child)),
        _ => unreachable!("child direction does not match node"),
    }
}

fn children(t: &MuTerm) -> Vec<(Dir, &MuTerm)> {
    match t {
        MuTerm::Lam(_, b) | MuTerm::Mu(_, _, b) => alloc::vec![(Dir::Body, &**b)],
        MuTerm::App(f, a) => alloc::vec![(Dir::Fun, &**f), (Dir::Arg, &**a)],
        _ => Vec::new(),
    }
}

fn outermost_step(t: &MuTerm) -> Option<(Rule, Path, MuTerm)> {
    if let Some((rule, u)) = root_step(t) {
        return Some((rule, Path::root(), u));
    }
    for (dir, c) in children(t) {
        if let Some((rule, p, u)) = outermost_step(c) {
            let mut dirs = p.0;
            dirs.insert(0, dir);
            return Some((rule, Path(dirs), rebuild(t, dir, u)));
        }
    }
    None
}

fn innermost_step(t: &MuTerm) -> Option<(Rule, Path, MuTerm)> {
    for (dir, c) in children(t) {
        if let Some((rule, p, u)) = innermost_step(c) {
            let mut dirs = p.0;
            dirs.insert(0, dir);
            return Some((rule, Path(dirs), rebuild(t, dir, u)));
        }
    }
    root_step(t).map(|(rule, u)| (rule, Path::root(), u))
}

/// Leftmost-outermost reduction to normal form.
pub fn mu_reduce(t: &MuTerm, budget: Budget) -> Result<Trace<MuTerm>, ReduceError> {
    drive(t.clone(), budget, outermost_step)
}

/// Leftmost-innermost reduction to normal form.
pub fn mu_normalize_innermost(t: &MuTerm, budget: Budget) -> Result<Trace<MuTerm>, ReduceError> {
    drive(t.clone(), budget, innermost_step)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    /// Both sides reached distinct normal forms.
    Distinct,
    Inconclusive,
}

fn fingerprint(t: &MuTerm) -> u64 {
    fn mix(h: u64, v: u64) -> u64 {
        (h ^ v).wrapping_mul(0x100_0000_01b3)
    }
    fn go(t: &MuTerm, h: u64) -> u64 {
        match t {
            MuTerm::Bound(i) => mix(mix(h, 1), *i as u64),
            MuTerm::Free(x) => x.bytes().fold(mix(h, 2), |h, b| mix(h, b as u64)),
            MuTerm::Lam(_, b) => go(b, mix(h, 3)),
            MuTerm::App(f, a) => go(a, go(f, mix(h, 4))),
            MuTerm::Mu(_, n, b) => {
                let h = match n {
                    MuName::Bound(j) => mix(mix(h, 5), *j as u64),
                    MuName::Free(x) => x.bytes().fold(mix(h, 6), |h, b| mix(h, b as u64)),
                };
                go(b, h)
            }
        }
    }
    go(t, 0xcbf2_9ce4_8422_2325)
}

/// Reducts of `t` in order, and whether a normal form was reached.
fn reducts(t: &MuTerm, budget: Budget) -> (Vec<MuTerm>, bool) {
    let mut out = alloc::vec![t.clone()];
    while out.len() <= budget.max_steps() {
        match outermost_step(out.last().unwrap()) {
            Some((_, _, u)) => out.push(u),
            None => return (out, true),
        }
    }
    (out, false)
}

/// Head equivalence: do the two terms share a reduct?
pub fn mu_head_equiv(a: &MuTerm, b: &MuTerm, budget: Budget) -> Equivalence {
    let (ra, done_a) = reducts(a, budget);
    let (rb, done_b) = reducts(b, budget);
    let mut keys: Vec<(u64, usize)> = ra.iter().enumerate().map(|(i, t)| (fingerprint(t), i)).collect();
    keys.sort_unstable();
    for t in &rb {
        let h = fingerprint(t);
        let start = keys.partition_point(|(k, _)| *k < h);
        if keys[start..].iter().take_while(|(k, _)| *k == h).any(|(_, i)| ra[*i] == *t) {
            return Equivalence::Equivalent;
        }
    }
    if done_a && done_b {
        Equivalence::Distinct
    } else {
        Equivalence::Inconclusive
    }
}
