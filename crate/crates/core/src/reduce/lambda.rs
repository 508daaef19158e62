//! Head reduction, head C-reduction, stack-constant reduction and
//! beta normalization on lambda-C terms.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use super::{drive, Budget, Dir, Path, ReduceError, Rule, Step, Trace};
use crate::term::Term;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Plain head reduction: only beta.
    Head,
    /// Beta and the control rule.
    HeadC,
    /// As `HeadC`, but a stack constant may never be consumed as the first
    /// argument of a redex.
    Stack,
}

fn head_step(t: &Term, mode: Mode) -> Option<(Rule, Path, Term)> {
    if let Term::Lam(h, b) = t {
        let (rule, path, body) = head_step(b, mode)?;
        let mut dirs = path.0;
        dirs.insert(0, Dir::Body);
        return Some((rule, Path(dirs), Term::Lam(h.clone(), Box::new(body))));
    }
    let (head, args) = t.spine();
    let first = *args.first()?;
    if mode == Mode::Stack && matches!(first, Term::Stack(_)) {
        return None;
    }
    let rest = args[1..].iter().map(|a| (*a).clone());
    match head {
        Term::Lam(_, body) => {
            let reduct = Term::apply(Term::instantiate(body, first), rest);
            let path = Path((1..args.len()).map(|_| Dir::Fun).collect());
            Some((Rule::Beta, path, reduct))
        }
        Term::Control if mode != Mode::Head => {
            let k = Term::apply(Term::Bound(0), rest.map(|a| a.shift_up(1, 0)));
            let reduct = Term::app(first.clone(), Term::Lam("x".into(), Box::new(k)));
            Some((Rule::Control, Path::root(), reduct))
        }
        _ => None,
    }
}

/// Head reduction of a pure lambda-term to head normal form.
pub fn head_reduce(t: &Term, budget: Budget) -> Result<Trace<Term>, ReduceError> {
    if !t.is_pure() {
        return Err(ReduceError::PreconditionViolated(
            "head reduction needs a term without C or stack constants".into(),
        ));
    }
    drive(t.clone(), budget, |u| head_step(u, Mode::Head))
}

/// Head C-reduction: beta and the control rule at the head.
pub fn head_c_reduce(t: &Term, budget: Budget) -> Result<Trace<Term>, ReduceError> {
    drive(t.clone(), budget, |u| head_step(u, Mode::HeadC))
}

/// One head C-reduction step, if the term has a head redex.
pub fn head_c_step(t: &Term) -> Option<Step<Term>> {
    head_step(t, Mode::HeadC).map(|(rule, path, term)| Step { rule, path, term })
}

/// Head C-reduction restricted to terms whose stack constants sit in
/// argument positions. A redex whose first argument is a stack constant is
/// not contracted, so the result stays in the same sublanguage.
pub fn stack_reduce(t: &Term, budget: Budget) -> Result<Trace<Term>, ReduceError> {
    if !t.is_lambda_cp() {
        return Err(ReduceError::PreconditionViolated(
            "stack constants must occur in argument position only".into(),
        ));
    }
    drive(t.clone(), budget, |u| head_step(u, Mode::Stack))
}

fn beta_step(t: &Term) -> Option<(Path, Term)> {
    match t {
        Term::App(f, a) => {
            if let Term::Lam(_, body) = &**f {
                return Some((Path::root(), Term::instantiate(body, a)));
            }
            if let Some((p, f2)) = beta_step(f) {
                let mut dirs = p.0;
                dirs.insert(0, Dir::Fun);
                return Some((Path(dirs), Term::app(f2, (**a).clone())));
            }
            let (p, a2) = beta_step(a)?;
            let mut dirs = p.0;
            dirs.insert(0, Dir::Arg);
            Some((Path(dirs), Term::app((**f).clone(), a2)))
        }
        Term::Lam(h, b) => {
            let (p, b2) = beta_step(b)?;
            let mut dirs = p.0;
            dirs.insert(0, Dir::Body);
            Some((Path(dirs), Term::Lam(h.clone(), Box::new(b2))))
        }
        _ => None,
    }
}

/// Leftmost-outermost beta reduction with a full trace. `C` and stack
/// constants are inert.
pub fn beta_reduce(t: &Term, budget: Budget) -> Result<Trace<Term>, ReduceError> {
    drive(t.clone(), budget, |u| beta_step(u).map(|(p, v)| (Rule::Beta, p, v)))
}

/// Beta normal form by normal-order evaluation, without keeping a trace.
pub fn beta_normalize(t: &Term, budget: Budget) -> Result<Term, ReduceError> {
    let mut fuel = budget.max_steps();
    normalize(t.clone(), &mut fuel).ok_or(ReduceError::Exhausted(budget.max_steps()))
}

fn normalize(mut t: Term, fuel: &mut usize) -> Option<Term> {
    loop {
        if let Term::Lam(h, b) = t {
            return Some(Term::Lam(h, Box::new(normalize(*b, fuel)?)));
        }
        let (head, args) = t.spine();
        match (head, args.first()) {
            (Term::Lam(_, body), Some(first)) => {
                *fuel = fuel.checked_sub(1)?;
                let rest: Vec<Term> = args[1..].iter().map(|a| (*a).clone()).collect();
                t = Term::apply(Term::instantiate(body, first), rest);
            }
            _ => {
                let head = head.clone();
                let args: Vec<Term> = args.into_iter().cloned().collect();
                let mut out = head;
                for a in args {
                    out = Term::app(out, normalize(a, fuel)?);
                }
                return Some(out);
            }
        }
    }
}

/// Outcome of a C-solvability test.
#[derive(Clone, Debug, PartialEq)]
pub enum Solvability {
    /// The term head-C-reduces to `(head)args` with `head` a free variable.
    Solvable { head: String, args: Vec<Term> },
    /// Head normal form reached, but not of that shape.
    Stuck(Term),
    /// Inconclusive: the budget ran out first.
    NotWithinBudget,
}

pub fn is_c_solvable(t: &Term, budget: Budget) -> Solvability {
    match head_c_reduce(t, budget) {
        Err(_) => Solvability::NotWithinBudget,
        Ok(trace) => {
            let r = trace.into_result();
            let (head, args) = r.spine();
            match head {
                Term::Free(x) => Solvability::Solvable {
                    head: x.clone(),
                    args: args.into_iter().cloned().collect(),
                },
                _ => Solvability::Stuck(r),
            }
        }
    }
}
