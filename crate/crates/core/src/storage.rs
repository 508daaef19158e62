//! Operational checks for storage operators and for terms of type `⊥ → X`
//! and `¬¬X → X`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::RangeInclusive;

use crate::machines::{classify_mu_integer, extract_value};
use crate::reduce::{beta_normalize, head_c_reduce, head_c_step, mu_reduce, stack_reduce, Budget, ReduceError};
use crate::term::mu::church_mu;
use crate::term::{church, succ, Fresh, MuName, MuTerm, Substitution, Term};

/// Integer representatives, grouped by value.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ThetaCorpus {
    /// `(n, representatives)`.
    pub entries: Vec<(usize, Vec<Term>)>,
}

/// `(C)λk.(k)t`.
fn throw_to_self(t: Term) -> Term {
    Term::app(Term::Control, Term::lam("k", Term::app(Term::var("k"), t)))
}

/// Pure representatives of `n`: the numeral, `(s)ⁿ0`, and the numeral with
/// an administrative redex under its binders.
pub fn pure_representatives(n: usize) -> Vec<Term> {
    let redex = Term::lams(
        &["x", "f"],
        Term::app(Term::lam("z", Term::iterate(&Term::var("f"), n, Term::var("z"))), Term::var("x")),
    );
    alloc::vec![church(n), Term::iterate(&succ(), n, church(0)), redex]
}

/// Classical representatives of `n`: `(C)λk.(k)n` and
/// `(C)λk.(k)(C)λh.(k)n`, which escapes through the outer continuation.
pub fn classical_representatives(n: usize) -> Vec<Term> {
    let escape = Term::app(Term::Control, Term::lam("h", Term::app(Term::var("k"), church(n))));
    alloc::vec![
        throw_to_self(church(n)),
        Term::app(Term::Control, Term::lam("k", Term::app(Term::var("k"), escape))),
    ]
}

impl ThetaCorpus {
    pub fn pure(ns: RangeInclusive<usize>) -> Self {
        ThetaCorpus { entries: ns.map(|n| (n, pure_representatives(n))).collect() }
    }

    pub fn classical(ns: RangeInclusive<usize>) -> Self {
        ThetaCorpus { entries: ns.map(|n| (n, classical_representatives(n))).collect() }
    }

    /// Both kinds together.
    pub fn full(ns: RangeInclusive<usize>) -> Self {
        let entries = ns
            .map(|n| {
                let mut reps = pure_representatives(n);
                reps.extend(classical_representatives(n));
                (n, reps)
            })
            .collect();
        ThetaCorpus { entries }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    /// Reached `(f)w` with `w` normalizing to the numeral of the entry.
    Simulated { value: usize, head_steps: usize },
    /// The head normal form is not `(f)w`.
    HeadMismatch(String),
    /// `(f)w` reached, but `w` contains `C` or does not normalize to the
    /// expected numeral.
    PayloadMismatch(String),
    Exhausted,
}

impl Outcome {
    pub fn is_simulated(&self) -> bool {
        matches!(self, Outcome::Simulated { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StorageReport {
    pub n: usize,
    pub index: usize,
    pub representative: Term,
    /// `w` in `(f)w`, before normalization.
    pub payload: Option<Term>,
    pub outcome: Outcome,
}

impl fmt::Display for StorageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} rep={} ", self.n, self.index)?;
        match &self.outcome {
            Outcome::Simulated { value, head_steps } => write!(f, "simulated value={value} steps={head_steps}"),
            Outcome::HeadMismatch(t) => write!(f, "head-mismatch {t}"),
            Outcome::PayloadMismatch(t) => write!(f, "payload-mismatch {t}"),
            Outcome::Exhausted => f.write_str("exhausted"),
        }
    }
}

/// Numeral value of a closed beta-normal term.
fn numeral_value(t: &Term) -> Option<usize> {
    (0..=t.size()).find(|k| church(*k) == *t)
}

fn run_entry(t: &Term, n: usize, index: usize, theta: &Term, budget: Budget) -> StorageReport {
    let mut report = StorageReport { n, index, representative: theta.clone(), payload: None, outcome: Outcome::Exhausted };
    let mut taken = t.free_vars();
    taken.extend(theta.free_vars());
    let f = Fresh::new(0).name("f", &taken);
    let trace = match head_c_reduce(&Term::apply(t.clone(), [theta.clone(), Term::var(&f)]), budget) {
        Ok(tr) => tr,
        Err(_) => return report,
    };
    let (head, args) = trace.result().spine();
    let w = match (head, args.as_slice()) {
        (Term::Free(h), [w]) if *h == f => (*w).clone(),
        _ => {
            report.outcome = Outcome::HeadMismatch(format!("{}", trace.result()));
            return report;
        }
    };
    report.payload = Some(w.clone());
    report.outcome = if w.contains_control() || w.contains_stack() {
        Outcome::PayloadMismatch(format!("{w}"))
    } else {
        match beta_normalize(&w, budget) {
            Err(_) => Outcome::Exhausted,
            Ok(nf) => match numeral_value(&nf) {
                Some(v) if v == n => Outcome::Simulated { value: v, head_steps: trace.step_count() },
                _ => Outcome::PayloadMismatch(format!("{nf}")),
            },
        }
    };
    report
}

/// Runs `(T)θ f` to head normal form for every representative. Reports are
/// ordered by `(n, index)`.
pub fn verify_storage(t: &Term, corpus: &ThetaCorpus, budget: Budget) -> Vec<StorageReport> {
    let mut out = Vec::new();
    for (n, reps) in &corpus.entries {
        for (i, theta) in reps.iter().enumerate() {
            out.push(run_entry(t, *n, i, theta, budget));
        }
    }
    out
}

/// As [`verify_storage`] on classical representatives, which must also
/// yield `n` under the extraction machine.
pub fn verify_storage_classical(t: &Term, ns: RangeInclusive<usize>, budget: Budget) -> Vec<StorageReport> {
    let corpus = ThetaCorpus::classical(ns);
    let mut out = verify_storage(t, &corpus, budget);
    for r in &mut out {
        if let Outcome::Simulated { value, .. } = r.outcome {
            match extract_value(&r.representative, budget) {
                Ok(vt) if vt.n == value => {}
                Ok(vt) => r.outcome = Outcome::PayloadMismatch(format!("extracted value {}", vt.n)),
                Err(e) => r.outcome = Outcome::PayloadMismatch(format!("extraction failed: {e}")),
            }
        }
    }
    out
}

/// Within each `n`, do all simulated entries carry the same payload up to
/// alpha-equivalence?
pub fn payloads_uniform(reports: &[StorageReport]) -> bool {
    let ns: BTreeSet<usize> = reports.iter().map(|r| r.n).collect();
    ns.into_iter().all(|n| {
        let mut ps = reports.iter().filter(|r| r.n == n && r.outcome.is_simulated()).filter_map(|r| r.payload.as_ref());
        match ps.next() {
            Some(first) => ps.all(|p| p == first),
            None => true,
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum BottomVerdict {
    Confirmed,
    /// At this arity the head normal form is not the first argument.
    Refuted { arity: usize, result: String },
    Exhausted { arity: usize },
}

fn fresh_vars(base: &str, count: usize, taken: &mut BTreeSet<String>, fresh: &mut Fresh) -> Vec<String> {
    (0..count)
        .map(|_| {
            let x = fresh.name(base, taken);
            taken.insert(x.clone());
            x
        })
        .collect()
}

/// `(T)z z₁…zₙ` head C-reduces to `z` for each arity `n`.
pub fn characterize_bottom_arrow(t: &Term, arities: RangeInclusive<usize>, budget: Budget) -> BottomVerdict {
    for arity in arities {
        let mut taken = t.free_vars();
        let mut fresh = Fresh::new(0);
        let z = fresh_vars("z", 1 + arity, &mut taken, &mut fresh);
        let start = Term::apply(t.clone(), z.iter().map(|x| Term::var(x)));
        match head_c_reduce(&start, budget) {
            Err(_) => return BottomVerdict::Exhausted { arity },
            Ok(tr) if *tr.result() == Term::var(&z[0]) => {}
            Ok(tr) => return BottomVerdict::Refuted { arity, result: format!("{}", tr.result()) },
        }
    }
    BottomVerdict::Confirmed
}

/// Behaviour of a term of type `¬¬X → X`.
#[derive(Clone, Debug, PartialEq)]
pub enum CcVerdict {
    /// `(T)t t̄ ≻ (t)V₁`, `(Vᵢ)yᵢ ≻ (t)Vᵢ₊₁` for `i < m`, and
    /// `(Vₘ)yₘ ≻ (y_j)t̄`.
    Shape { m: usize, j: usize },
    Refuted { stage: String, result: String },
    Exhausted,
}

/// Longest chain `(t)V₁, …, (t)Vₘ` followed before giving up.
pub const MAX_CHAIN: usize = 64;

/// Runs `(T)t #p` with the stack constant standing for any argument list,
/// then replays the chain for every arity in `arities` with concrete
/// argument variables in place of `#p`.
pub fn characterize_cc(t: &Term, arities: RangeInclusive<usize>, budget: Budget) -> CcVerdict {
    let mut taken = t.free_vars();
    let mut fresh = Fresh::new(0);
    let tv = fresh_vars("t", 1, &mut taken, &mut fresh).remove(0);
    let p = "p";
    let refuted = |stage: String, result: &Term| CcVerdict::Refuted { stage, result: format!("{result}") };
    // (start, end) of every segment, with stack constants
    let mut segments: Vec<(Term, Term)> = Vec::new();
    let mut ys: Vec<String> = Vec::new();
    let mut start = Term::apply(t.clone(), [Term::var(&tv), Term::stack(p)]);
    let j = loop {
        let end = match stack_reduce(&start, budget) {
            Ok(tr) => tr.into_result(),
            Err(ReduceError::Exhausted(_)) => return CcVerdict::Exhausted,
            Err(e) => return CcVerdict::Refuted { stage: format!("segment {}", segments.len()), result: format!("{e}") },
        };
        segments.push((start, end.clone()));
        let (head, args) = end.spine();
        let stage = format!("segment {}", segments.len() - 1);
        match (head, args.as_slice()) {
            (Term::Free(h), [v]) if *h == tv && !matches!(v, Term::Stack(_)) => {
                if segments.len() > MAX_CHAIN {
                    return CcVerdict::Exhausted;
                }
                let y = fresh_vars("y", 1, &mut taken, &mut fresh).remove(0);
                start = Term::app((*v).clone(), Term::var(&y));
                ys.push(y);
            }
            (Term::Free(h), [q]) if !ys.is_empty() && **q == Term::stack(p) => match ys.iter().position(|y| y == h) {
                Some(k) => break k + 1,
                None => return refuted(stage, &end),
            },
            _ => return refuted(stage, &end),
        }
    };
    let m = ys.len();
    for arity in arities {
        let args = fresh_vars("a", arity, &mut taken.clone(), &mut Fresh::new(0));
        let s = Substitution::new().stack(p, args.iter().map(|a| Term::var(a)).collect());
        for (k, (from, to)) in segments.iter().enumerate() {
            let target = to.substitute(&s);
            let mut cur = from.substitute(&s);
            let mut left = budget.max_steps();
            while cur != target {
                match head_c_step(&cur) {
                    Some(step) if left > 0 => {
                        left -= 1;
                        cur = step.term;
                    }
                    Some(_) => return CcVerdict::Exhausted,
                    None => return refuted(format!("arity {arity} segment {k}"), &cur),
                }
            }
        }
    }
    CcVerdict::Shape { m, j }
}

/// Lambda-mu integers used by [`verify_storage_mu`]: the numeral and, for
/// `n ≥ 1`, `λx.λf.μα[α](f)μβ[α](f)ⁿx`.
pub fn mu_representatives(n: usize) -> Vec<MuTerm> {
    let mut out = alloc::vec![church_mu(n)];
    if n >= 1 {
        let (x, f) = (MuTerm::var("x"), MuTerm::var("f"));
        let inner = (0..n).fold(x, |acc, _| MuTerm::app(f.clone(), acc));
        let named = MuTerm::mu("beta", "alpha", inner);
        let body = MuTerm::mu("alpha", "alpha", MuTerm::app(f, named));
        out.push(MuTerm::lams(&["x", "f"], body));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct MuStorageReport {
    pub n: usize,
    pub index: usize,
    pub representative: MuTerm,
    pub payload: Option<MuTerm>,
    pub outcome: Outcome,
}

impl fmt::Display for MuStorageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = StorageReport {
            n: self.n,
            index: self.index,
            representative: Term::Control,
            payload: None,
            outcome: self.outcome.clone(),
        };
        r.fmt(f)
    }
}

/// Strips `μα[α]` wrappers and returns `w` from `(f)w`.
fn mu_payload<'a>(t: &'a MuTerm, f: &str) -> Option<&'a MuTerm> {
    match t {
        MuTerm::Mu(_, MuName::Bound(0), b) => mu_payload(b, f),
        MuTerm::App(h, w) if matches!(&**h, MuTerm::Free(g) if g == f) => Some(w),
        _ => None,
    }
}

/// Normalizes `(T)θ f` and expects `μα[α](f)w` (or `(f)w`) with `w` a
/// lambda-mu integer of value `n` that uses no mu-abstraction.
pub fn verify_storage_mu(t: &MuTerm, ns: RangeInclusive<usize>, budget: Budget) -> Vec<MuStorageReport> {
    let mut out = Vec::new();
    for n in ns {
        for (index, theta) in mu_representatives(n).into_iter().enumerate() {
            let mut taken = t.free_vars();
            taken.extend(theta.free_vars());
            let f = Fresh::new(0).name("f", &taken);
            let start = MuTerm::apply(t.clone(), [theta.clone(), MuTerm::var(&f)]);
            let mut report = MuStorageReport { n, index, representative: theta, payload: None, outcome: Outcome::Exhausted };
            if let Ok(tr) = mu_reduce(&start, budget) {
                let nf = tr.result();
                report.outcome = match mu_payload(nf, &f) {
                    None => Outcome::HeadMismatch(format!("{nf}")),
                    Some(w) if w.free_mu_vars().is_empty() => {
                        report.payload = Some(w.clone());
                        match classify_mu_integer(w, budget) {
                            Ok(k) if k.n == n && w.to_term().is_some() => Outcome::Simulated { value: n, head_steps: tr.step_count() },
                            _ => Outcome::PayloadMismatch(format!("{w}")),
                        }
                    }
                    Some(w) => Outcome::PayloadMismatch(format!("{w}")),
                };
            }
            out.push(report);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::mu::builtin_mu;
    use crate::term::{abort, c_prime, c_wrapper, storage_t1, storage_t2};
    use crate::parse_term;

    fn b() -> Budget {
        Budget::default()
    }

    fn all_simulated(rs: &[StorageReport]) -> bool {
        rs.iter().all(|r| r.outcome.is_simulated())
    }

    #[test]
    fn corpus_is_well_formed() {
        for n in 0..6 {
            for t in pure_representatives(n) {
                assert_eq!(beta_normalize(&t, b()).unwrap(), church(n));
            }
            for t in classical_representatives(n) {
                assert_eq!(extract_value(&t, b()).unwrap().n, n);
            }
        }
    }

    #[test]
    fn t1_and_t2_store_church_integers() {
        let corpus = ThetaCorpus::full(0..=6);
        for t in [storage_t1(), storage_t2()] {
            let rs = verify_storage(&t, &corpus, b());
            assert!(all_simulated(&rs), "{rs:?}");
            assert!(payloads_uniform(&rs));
            for r in &rs {
                assert_eq!(r.payload.as_ref().unwrap(), &Term::iterate(&succ(), r.n, church(0)));
            }
        }
    }

    #[test]
    fn identity_like_term_keeps_the_argument() {
        let t = parse_term("\\n. \\f. f n").unwrap();
        let rs = verify_storage(&t, &ThetaCorpus::pure(2..=2), b());
        // every payload normalizes correctly, but it is the representative itself
        assert!(all_simulated(&rs));
        assert!(!payloads_uniform(&rs));
        assert!(rs.iter().all(|r| r.payload.as_ref() == Some(&r.representative)));
    }

    #[test]
    fn classical_storage_and_lazy_operator() {
        for t in [storage_t1(), storage_t2()] {
            assert!(all_simulated(&verify_storage_classical(&t, 0..=5, b())));
        }
        let lazy = parse_term("\\v. \\f. f (C (T1 v))")
            .map(|t| t.substitute(&Substitution::new().var("T1", storage_t1())))
            .unwrap();
        let rs = verify_storage_classical(&lazy, 0..=3, b());
        assert!(rs.iter().all(|r| matches!(r.outcome, Outcome::PayloadMismatch(_))));
    }

    #[test]
    fn bottom_arrow() {
        assert_eq!(characterize_bottom_arrow(&abort(), 0..=5, b()), BottomVerdict::Confirmed);
        assert_eq!(characterize_bottom_arrow(&abort(), 0..=0, b()), BottomVerdict::Confirmed);
        let id = parse_term("\\x. x").unwrap();
        assert!(matches!(characterize_bottom_arrow(&id, 1..=1, b()), BottomVerdict::Refuted { arity: 1, .. }));
    }

    #[test]
    fn double_negation_elimination() {
        assert_eq!(characterize_cc(&c_wrapper(), 0..=5, b()), CcVerdict::Shape { m: 1, j: 1 });
        assert!(matches!(characterize_cc(&c_prime(), 0..=5, b()), CcVerdict::Shape { m: 2, .. }));
        let id = parse_term("\\x. x").unwrap();
        assert!(matches!(characterize_cc(&id, 0..=5, b()), CcVerdict::Refuted { .. }));
    }

    #[test]
    fn mu_storage() {
        let t1 = builtin_mu("T1").unwrap();
        let rs = verify_storage_mu(&t1, 0..=5, b());
        for r in &rs {
            assert_eq!(r.payload.as_ref().unwrap(), &church_mu(r.n));
        }
        assert!(rs.iter().all(|r| r.outcome.is_simulated()), "{rs:?}");
        let lazy = crate::parse_mu_term("\\v. \\f. f v").unwrap();
        let rs = verify_storage_mu(&lazy, 1..=3, b());
        assert!(rs.iter().any(|r| !r.outcome.is_simulated()));
    }
}
