//! Integer machines: value extraction from classical integers with stack
//! constants, and the lambda-mu integer classifier.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::reduce::{head_c_step, mu_reduce, stack_reduce, Budget, ReduceError, Step, Trace};
use crate::term::{Fresh, MuName, MuTerm, Substitution, Term};

/// Record of one value extraction.
///
/// Segment 0 starts from `(θ)x g #p0`, segment `i > 0` from `(tᵢ)#pᵢ`.
/// Every segment but the last ends in `(g)tᵢ₊₁#p_{rᵢ}`; the last ends in
/// `(x)#p_{rₘ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueTrace {
    pub n: usize,
    pub m: usize,
    /// `I(0) … I(m)`.
    pub i: Vec<usize>,
    /// `r₀ … rₘ`.
    pub r: Vec<usize>,
    /// `t₁ … tₘ`.
    pub t: Vec<Term>,
    pub segments: Vec<Trace<Term>>,
    /// Names used for the base, the step and the stack constants.
    pub x: String,
    pub g: String,
}

impl ValueTrace {
    pub fn stack_name(i: usize) -> String {
        format!("p{i}")
    }

    /// `I(0) = n`, `I(rₘ) = 0` and `I(i+1) = I(rᵢ) − 1`.
    pub fn arithmetic_holds(&self) -> bool {
        let len_ok = self.i.len() == self.m + 1 && self.r.len() == self.m + 1;
        len_ok
            && self.i[0] == self.n
            && self.i[self.r[self.m]] == 0
            && (0..self.m).all(|k| self.i[self.r[k]].checked_sub(1) == Some(self.i[k + 1]))
    }
}

impl fmt::Display for ValueTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} m={} I={:?} r={:?}", self.n, self.m, self.i, self.r)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExtractError {
    #[error("budget of {0} steps exhausted")]
    BudgetExhausted(usize),
    #[error("segment {segment} ends in a forbidden shape: {term}")]
    BadHead { segment: usize, term: String },
    #[error("index arithmetic fails at segment {segment}")]
    Arithmetic { segment: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("open run diverges from the abstract trace at segment {segment}")]
    OpenMismatch { segment: usize },
}

impl From<ReduceError> for ExtractError {
    fn from(e: ReduceError) -> Self {
        match e {
            ReduceError::Exhausted(n) => ExtractError::BudgetExhausted(n),
            ReduceError::PreconditionViolated(s) => ExtractError::Precondition(s),
        }
    }
}

fn stack_index(t: &Term, allocated: usize) -> Option<usize> {
    match t {
        Term::Stack(p) => {
            let k: usize = p.strip_prefix('p')?.parse().ok()?;
            (k < allocated && ValueTrace::stack_name(k) == *p).then_some(k)
        }
        _ => None,
    }
}

enum End {
    Step(Term, usize),
    Base(usize),
}

fn classify_end(t: &Term, x: &str, g: &str, allocated: usize) -> Option<End> {
    let (head, args) = t.spine();
    match (head, args.as_slice()) {
        (Term::Free(h), [u, p]) if h == g && !matches!(u, Term::Stack(_)) => {
            Some(End::Step((*u).clone(), stack_index(p, allocated)?))
        }
        (Term::Free(h), [p]) if h == x => Some(End::Base(stack_index(p, allocated)?)),
        _ => None,
    }
}

/// Runs the extraction machine on a closed lambda-C term.
pub fn extract_value(theta: &Term, budget: Budget) -> Result<ValueTrace, ExtractError> {
    if !theta.is_closed() || theta.contains_stack() {
        return Err(ExtractError::Precondition("expected a closed term without stack constants".into()));
    }
    let taken = theta.free_vars();
    let mut fresh = Fresh::new(0);
    let x = fresh.name("x", &taken);
    let g = fresh.name("g", &taken);
    let mut left = budget.max_steps();
    let mut start = Term::apply(theta.clone(), [Term::var(&x), Term::var(&g), Term::stack("p0")]);
    // c[i] = I(0) − I(i)
    let mut c = alloc::vec![0usize];
    let (mut r, mut ts, mut segments) = (Vec::new(), Vec::new(), Vec::new());
    loop {
        let segment = segments.len();
        let trace = stack_reduce(&start, Budget::new(left)).map_err(|e| match e {
            ReduceError::Exhausted(_) => ExtractError::BudgetExhausted(budget.max_steps()),
            other => other.into(),
        })?;
        left = left.saturating_sub(trace.step_count());
        let end = classify_end(trace.result(), &x, &g, segment + 1)
            .ok_or_else(|| ExtractError::BadHead { segment, term: format!("{}", trace.result()) })?;
        segments.push(trace);
        match end {
            End::Base(j) => {
                r.push(j);
                let n = c[j];
                let i: Vec<usize> = c.iter().map(|ci| n.checked_sub(*ci)).collect::<Option<_>>().ok_or(
                    ExtractError::Arithmetic { segment },
                )?;
                let vt = ValueTrace { n, m: segment, i, r, t: ts, segments, x, g };
                if !vt.arithmetic_holds() {
                    return Err(ExtractError::Arithmetic { segment });
                }
                return Ok(vt);
            }
            End::Step(t, j) => {
                if left == 0 {
                    return Err(ExtractError::BudgetExhausted(budget.max_steps()));
                }
                left -= 1;
                r.push(j);
                c.push(c[j] + 1);
                start = Term::app(t.clone(), Term::stack(&ValueTrace::stack_name(segment + 1)));
                ts.push(t);
            }
        }
    }
}

/// The machine with `a`, `f` in place of the base and step variables and
/// `stacks[i]` in place of `#pᵢ` (missing entries are empty sequences).
///
/// The abstract trace is computed first; every segment is then replayed
/// under the substitution with head C-reduction and must reach the image of
/// the abstract segment end. The returned trace carries the replayed
/// segments.
pub fn extract_value_open(
    theta: &Term,
    a: &Term,
    f: &Term,
    stacks: &[Vec<Term>],
    budget: Budget,
) -> Result<ValueTrace, ExtractError> {
    let mut vt = extract_value(theta, budget)?;
    let mut s = Substitution::new().var(&vt.x, a.clone()).var(&vt.g, f.clone());
    for k in 0..=vt.m {
        s = s.stack(&ValueTrace::stack_name(k), stacks.get(k).cloned().unwrap_or_default());
    }
    let mut left = budget.max_steps();
    let mut replayed = Vec::with_capacity(vt.segments.len());
    for (segment, abs) in vt.segments.iter().enumerate() {
        let target = abs.result().substitute(&s);
        let mut trace = Trace::new(abs.initial.substitute(&s));
        while *trace.result() != target {
            let Step { rule, path, term } =
                head_c_step(trace.result()).ok_or(ExtractError::OpenMismatch { segment })?;
            if left == 0 {
                return Err(ExtractError::BudgetExhausted(budget.max_steps()));
            }
            left -= 1;
            trace.steps.push(Step { rule, path, term });
        }
        replayed.push(trace);
    }
    vt.segments = replayed;
    Ok(vt)
}

/// `u ::= x | (f)u | μα[β]u`.
pub fn in_nxf(u: &MuTerm, x: &str, f: &str) -> bool {
    match u {
        MuTerm::Free(y) => y == x,
        MuTerm::App(g, v) => matches!(&**g, MuTerm::Free(h) if h == f) && in_nxf(v, x, f),
        MuTerm::Mu(_, _, v) => in_nxf(v, x, f),
        _ => false,
    }
}

/// A set of naturals of the form `{…}` or `{k, k+1, …}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RepSet {
    Finite(BTreeSet<usize>),
    AtLeast(usize),
}

impl RepSet {
    pub fn all() -> Self {
        RepSet::AtLeast(0)
    }

    pub fn single(n: usize) -> Self {
        RepSet::Finite(BTreeSet::from([n]))
    }

    pub fn succ(&self) -> Self {
        match self {
            RepSet::Finite(s) => RepSet::Finite(s.iter().map(|n| n + 1).collect()),
            RepSet::AtLeast(k) => RepSet::AtLeast(k + 1),
        }
    }

    pub fn intersect(&self, other: &RepSet) -> RepSet {
        match (self, other) {
            (RepSet::Finite(a), RepSet::Finite(b)) => RepSet::Finite(a.intersection(b).copied().collect()),
            (RepSet::Finite(a), RepSet::AtLeast(k)) | (RepSet::AtLeast(k), RepSet::Finite(a)) => {
                RepSet::Finite(a.iter().copied().filter(|n| n >= k).collect())
            }
            (RepSet::AtLeast(a), RepSet::AtLeast(b)) => RepSet::AtLeast(*a.max(b)),
        }
    }

    pub fn as_single(&self) -> Option<usize> {
        match self {
            RepSet::Finite(s) if s.len() == 1 => s.first().copied(),
            _ => None,
        }
    }
}

impl fmt::Display for RepSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepSet::AtLeast(0) => f.write_str("all"),
            RepSet::AtLeast(k) => write!(f, "{{n >= {k}}}"),
            RepSet::Finite(s) => {
                f.write_str("{")?;
                for (i, n) in s.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{n}")?;
                }
                f.write_str("}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("term is not generated by u ::= x | (f)u | mu a[b]u")]
pub struct NotInGrammar;

/// Result of [`rep`], with a flag for μ-binders that name no subterm (their
/// clause is an empty intersection, read as every natural).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rep {
    pub set: RepSet,
    pub vacuous: bool,
}

pub fn rep(u: &MuTerm, x: &str, f: &str) -> Result<Rep, NotInGrammar> {
    if !in_nxf(u, x, f) {
        return Err(NotInGrammar);
    }
    let mut vacuous = false;
    let set = rep_of(u, &mut vacuous);
    Ok(Rep { set, vacuous })
}

fn rep_of(u: &MuTerm, vacuous: &mut bool) -> RepSet {
    match u {
        MuTerm::App(_, v) => rep_of(v, vacuous).succ(),
        MuTerm::Mu(_, target, body) => {
            let mut named = Vec::new();
            if *target == MuName::Bound(0) {
                named.push(&**body);
            }
            collect_named(body, 0, &mut named);
            if named.is_empty() {
                *vacuous = true;
            }
            named.iter().fold(RepSet::all(), |acc, v| acc.intersect(&rep_of(v, vacuous)))
        }
        _ => RepSet::single(0),
    }
}

/// Bodies `v` of the named subterms `[α]v` inside `u`, `α` of index `alpha`.
fn collect_named<'a>(u: &'a MuTerm, alpha: usize, out: &mut Vec<&'a MuTerm>) {
    match u {
        MuTerm::Lam(_, b) => collect_named(b, alpha, out),
        MuTerm::App(g, a) => {
            collect_named(g, alpha, out);
            collect_named(a, alpha, out);
        }
        MuTerm::Mu(_, n, b) => {
            if *n == MuName::Bound(alpha + 1) {
                out.push(b);
            }
            collect_named(b, alpha + 1, out);
        }
        _ => {}
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NotMuInteger {
    #[error("term is not mu-normal")]
    NotNormal,
    #[error("normalization check ran out of budget")]
    Exhausted,
    #[error("term does not start with two abstractions")]
    Prefix,
    #[error("body is outside the integer grammar")]
    Grammar,
    #[error("free mu-variable {0}")]
    FreeMuVariable(String),
    #[error("rep is {0}, not a singleton")]
    Rep(RepSet),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuInteger {
    pub n: usize,
    /// Some μ-binder named no subterm.
    pub vacuous: bool,
}

/// Recognizes normal lambda-mu classical integers `λx.λf.u` with `u` in the
/// grammar, no free mu-variable and `rep(u) = {n}`.
pub fn classify_mu_integer(t: &MuTerm, budget: Budget) -> Result<MuInteger, NotMuInteger> {
    match mu_reduce(t, budget) {
        Ok(tr) if tr.step_count() > 0 => return Err(NotMuInteger::NotNormal),
        Ok(_) => {}
        Err(_) => return Err(NotMuInteger::Exhausted),
    }
    let MuTerm::Lam(_, inner) = t else { return Err(NotMuInteger::Prefix) };
    let MuTerm::Lam(_, body) = &**inner else { return Err(NotMuInteger::Prefix) };
    let mut taken = t.free_vars();
    let mut fresh = Fresh::new(0);
    let x = fresh.name("x", &taken);
    taken.insert(x.clone());
    let f = fresh.name("f", &taken);
    let u = MuTerm::open(&MuTerm::open(body, &f), &x);
    let r = rep(&u, &x, &f).map_err(|_| NotMuInteger::Grammar)?;
    if let Some(a) = t.free_mu_vars().into_iter().next() {
        return Err(NotMuInteger::FreeMuVariable(a));
    }
    r.set.as_single().map(|n| MuInteger { n, vacuous: r.vacuous }).ok_or(NotMuInteger::Rep(r.set))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::mu::church_mu;
    use crate::term::church;
    use crate::{parse_mu_term, parse_term};
    use alloc::vec;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn church_numerals() {
        let z = extract_value(&church(0), b()).unwrap();
        assert_eq!((z.n, z.m, z.r.clone()), (0, 0, vec![0]));
        assert_eq!(format!("{}", z.segments[0].result()), "x #p0");
        let v = extract_value(&church(3), b()).unwrap();
        assert_eq!(format!("{v}"), "n=3 m=3 I=[3, 2, 1, 0] r=[0, 1, 2, 3]");
        assert!(v.arithmetic_holds());
    }

    #[test]
    fn control_integer() {
        let t = parse_term("C (\\k. k (\\x. \\f. f (f x)))").unwrap();
        let v = extract_value(&t, b()).unwrap();
        assert_eq!(v.n, 2);
        assert!(v.arithmetic_holds());
    }

    #[test]
    fn non_integers_fail() {
        let id = parse_term("\\x. x").unwrap();
        assert!(matches!(extract_value(&id, b()), Err(ExtractError::BadHead { segment: 0, .. })));
        let omega = parse_term("(\\x. x x) (\\x. x x)").unwrap();
        assert!(matches!(extract_value(&omega, Budget::new(50)), Err(ExtractError::BudgetExhausted(50))));
        assert!(matches!(extract_value(&Term::var("y"), b()), Err(ExtractError::Precondition(_))));
    }

    #[test]
    fn arithmetic_check() {
        let mut v = extract_value(&church(2), b()).unwrap();
        v.i = vec![2, 1, 1];
        assert!(!v.arithmetic_holds());
        v.i = vec![2, 1, 0];
        v.r = vec![0, 0, 2];
        assert!(!v.arithmetic_holds());
    }

    #[test]
    fn open_replay() {
        let a = Term::var("a");
        let f = Term::var("F");
        let u = Term::var("u");
        let open = extract_value_open(&church(2), &a, &f, &[vec![u.clone()]], b()).unwrap();
        let closed = extract_value(&church(2), b()).unwrap();
        assert_eq!((open.m, &open.i, &open.r), (closed.m, &closed.i, &closed.r));
        assert_eq!(*open.segments[0].result(), Term::apply(f.clone(), [Term::app(f.clone(), a.clone()), u]));
        let id = parse_term("\\z. z").unwrap();
        let w = Term::var("w");
        let z = extract_value_open(&church(0), &id, &f, &[vec![w.clone()]], b()).unwrap();
        assert_eq!(*z.segments[0].result(), Term::app(id, w));
        assert!(matches!(
            extract_value_open(&church(5), &a, &f, &[], Budget::new(1)),
            Err(ExtractError::BudgetExhausted(1))
        ));
    }

    fn mu(s: &str) -> MuTerm {
        parse_mu_term(s).unwrap()
    }

    #[test]
    fn grammar_and_rep() {
        assert!(in_nxf(&mu("x"), "x", "f"));
        assert!(in_nxf(&mu("f (f x)"), "x", "f"));
        assert!(!in_nxf(&mu("\\y. x"), "x", "f"));
        assert_eq!(rep(&mu("x"), "x", "f").unwrap().set, RepSet::single(0));
        assert_eq!(rep(&mu("f (f x)"), "x", "f").unwrap().set, RepSet::single(2));
        let r = rep(&mu("mu a. [b] f (mu c. [a] f x)"), "x", "f").unwrap();
        assert_eq!(r, Rep { set: RepSet::single(1), vacuous: false });
        assert_eq!(rep(&mu("\\y. x"), "x", "f"), Err(NotInGrammar));
    }

    #[test]
    fn rep_set_algebra() {
        let all = RepSet::all();
        assert_eq!(all.succ(), RepSet::AtLeast(1));
        assert_eq!(RepSet::single(3).intersect(&RepSet::AtLeast(1)), RepSet::single(3));
        assert_eq!(RepSet::single(0).intersect(&RepSet::AtLeast(1)), RepSet::Finite(BTreeSet::new()));
        assert_eq!(format!("{all}"), "all");
    }

    #[test]
    fn mu_integers() {
        let classify = |s: &str| classify_mu_integer(&mu(s), b());
        assert_eq!(classify("\\x. \\f. f (f x)").unwrap().n, 2);
        assert_eq!(classify("\\x. \\f. x").unwrap().n, 0);
        assert_eq!(classify("\\x. \\f. \\y. x"), Err(NotMuInteger::Grammar));
        assert_eq!(classify("\\x. \\f. mu a. [b] x"), Err(NotMuInteger::FreeMuVariable("b".into())));
        assert_eq!(classify("\\x. (\\y. y) x"), Err(NotMuInteger::NotNormal));
        assert_eq!(classify("\\x. x"), Err(NotMuInteger::Prefix));
        let two = classify("\\x. \\f. mu a. [a] f (mu c. [a] f (f x))").unwrap();
        assert_eq!(two, MuInteger { n: 2, vacuous: true });
        let none = classify("\\x. \\f. mu a. [a] f (mu c. [a] x)");
        assert_eq!(none, Err(NotMuInteger::Rep(RepSet::Finite(BTreeSet::new()))));
        for n in 0..6 {
            assert_eq!(classify_mu_integer(&church_mu(n), b()).unwrap().n, n);
        }
    }
}
