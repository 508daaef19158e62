//! Deterministic end-to-end checks over the shipped fixtures. Shared by
//! `fixtures run-all` and the acceptance test target.

use std::fmt;

use mixlogic::derivation::{check, embed_c2_in_m2, library, subject_of, Derivation, Reason, Subject, System};
use mixlogic::formula::library::nat;
use mixlogic::formula::FoTerm;
use mixlogic::machines::{classify_mu_integer, extract_value, rep, RepSet};
use mixlogic::reduce::{beta_normalize, mu_reduce, Budget, Rule};
use mixlogic::storage::{
    characterize_bottom_arrow, characterize_cc, payloads_uniform, verify_storage, verify_storage_classical,
    verify_storage_mu, BottomVerdict, CcVerdict, ThetaCorpus,
};
use mixlogic::term::{builtin, succ, MuTerm};
use mixlogic::{church, parse_mu_term, Term};

use crate::corrupt::corruptions;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub failures: Vec<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check { name, failures: Vec::new() }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "PASS {}", self.name);
        }
        write!(f, "FAIL {}: {}", self.name, self.failures.join("; "))
    }
}

fn storage_candidates() -> [(&'static str, Term); 2] {
    [("T1", builtin("T1").unwrap()), ("T2", builtin("T2").unwrap())]
}

/// `λν.λf.(f)(C)(T₁)ν`.
pub fn lazy_term() -> Term {
    let t1nu = Term::app(builtin("T1").unwrap(), Term::var("nu"));
    Term::lams(&["nu", "f"], Term::app(Term::var("f"), Term::app(Term::Control, t1nu)))
}

pub fn storage_simulation(budget: Budget) -> Check {
    let mut c = Check::new("storage simulation on pure integers, n in 0..=15");
    let corpus = ThetaCorpus::pure(0..=15);
    for (name, t) in storage_candidates() {
        let reports = verify_storage(&t, &corpus, budget);
        c.expect(reports.len() >= 16 * 3, || format!("{name}: only {} entries", reports.len()));
        for r in &reports {
            c.expect(r.outcome.is_simulated(), || format!("{name} {r}"));
            let expected = Term::iterate(&succ(), r.n, church(0));
            c.expect(r.payload.as_ref().is_some_and(|p| p.alpha_eq(&expected)), || {
                format!("{name} n={} rep={}: payload is not (s)^n 0", r.n, r.index)
            });
        }
        c.expect(payloads_uniform(&reports), || format!("{name}: payloads differ"));
    }
    c
}

pub fn value_extraction(budget: Budget) -> Check {
    let mut c = Check::new("value extraction on pure and control integers, n in 0..=10");
    for n in 0..=10 {
        let control = Term::app(Term::Control, Term::lam("k", Term::app(Term::var("k"), church(n))));
        for (kind, theta) in [("church", church(n)), ("control", control)] {
            match extract_value(&theta, budget) {
                Ok(v) => {
                    c.expect(v.n == n && v.arithmetic_holds(), || format!("{kind} {n}: {v}"));
                    c.expect(v.i.first() == Some(&n) && v.i.get(v.r[v.m]) == Some(&0), || format!("{kind} {n}: {v}"));
                    if kind == "church" {
                        let r: Vec<usize> = (0..=n).collect();
                        c.expect(v.m == n && v.r == r, || format!("church {n}: {v}"));
                    }
                }
                Err(e) => c.failures.push(format!("{kind} {n}: {e}")),
            }
        }
    }
    c
}

pub fn classical_storage(budget: Budget) -> Check {
    let mut c = Check::new("storage simulation on control integers, n in 0..=10");
    for (name, t) in storage_candidates() {
        for r in verify_storage_classical(&t, 0..=10, budget) {
            c.expect(matches!(r.outcome, mixlogic::storage::Outcome::Simulated { value, .. } if value == r.n), || {
                format!("{name} {r}")
            });
        }
    }
    let lazy = verify_storage_classical(&lazy_term(), 0..=10, budget);
    c.expect(lazy.iter().any(|r| !r.outcome.is_simulated()), || "lazy operator reported simulated".into());
    let lazy_pure = verify_storage(&lazy_term(), &ThetaCorpus::pure(0..=10), budget);
    c.expect(lazy_pure.iter().all(|r| !r.outcome.is_simulated()), || "lazy operator simulated a pure entry".into());
    c
}

pub fn control_characterization(budget: Budget) -> Check {
    let mut c = Check::new("bottom-arrow and double-negation operators, arities 0..=5");
    let abort = builtin("abort").unwrap();
    let v = characterize_bottom_arrow(&abort, 0..=5, budget);
    c.expect(v == BottomVerdict::Confirmed, || format!("abort: {v:?}"));
    for (name, m) in [("Cwrap", 1), ("Cprime", 2)] {
        let t = builtin(name).unwrap();
        for arity in 0..=5 {
            let v = characterize_cc(&t, arity..=arity, budget);
            c.expect(matches!(v, CcVerdict::Shape { m: k, .. } if k == m), || format!("{name} arity {arity}: {v:?}"));
        }
    }
    // control negative: the identity is not of type ⊥ → X
    let id = Term::lam("x", Term::var("x"));
    c.expect(characterize_bottom_arrow(&Term::lam("z", id.clone()), 0..=2, budget) != BottomVerdict::Confirmed, || {
        "λz.λx.x confirmed".into()
    });
    c
}

/// The eight derivations the checker must accept.
pub const SHIPPED: [&str; 8] = ["zero", "succ", "C", "abort", "Cprime", "T1", "muC", "lazy"];

pub fn derivation_fixtures() -> Check {
    let mut c = Check::new("derivation fixtures, corruptions and embedding");
    let all = library::all();
    for name in SHIPPED {
        match all.iter().find(|(n, _)| n == name) {
            Some((_, d)) => c.expect(check(d).is_ok(), || format!("{name}: {}", check(d).unwrap_err())),
            None => c.failures.push(format!("{name} missing")),
        }
    }
    let mut seen = Vec::new();
    for (name, d, reason) in corruptions() {
        match check(&d) {
            Ok(()) => c.failures.push(format!("{name}: accepted")),
            Err(e) => c.expect(e.reason == reason, || format!("{name}: expected {reason}, got {e}")),
        }
        seen.push(reason);
    }
    for r in [Reason::BadWitness, Reason::SideConditionViolated, Reason::WrongSystem, Reason::NonClassicalInstantiation] {
        c.expect(seen.contains(&r), || format!("no corruption for {r}"));
    }
    for (name, d) in all.iter().filter(|(_, d)| d.system == System::C2) {
        match embed_c2_in_m2(d) {
            Ok(e) => c.expect(e.system == System::M2 && check(&e).is_ok(), || format!("{name}: embedding rejected")),
            Err(e) => c.failures.push(format!("{name}: {e}")),
        }
    }
    c
}

/// `(rule, input, normal form)` with `rule` the first rule fired.
pub const MU_RULE_CASES: [(Rule, &str, &str); 5] = [
    (Rule::C1, r"(\x. x) y", "y"),
    (Rule::C2, "(mu a.[a] x) v", "x v"),
    (Rule::S1, "mu a.[b] mu g.[a] x", "x"),
    (Rule::S2, "mu a.[a] f (mu b.[b] x)", "f x"),
    (Rule::S3, r"mu a.[b] f (mu g.[a] \y. y)", r"\x. mu a.[b] f (mu g.[a] x)"),
];

fn numeral_body(n: usize) -> MuTerm {
    (0..n).fold(MuTerm::var("x"), |u, _| MuTerm::app(MuTerm::var("f"), u))
}

pub fn mu_layer(budget: Budget) -> Check {
    let mut c = Check::new("lambda-mu rules, rep and lambda-mu storage");
    for (rule, input, expected) in MU_RULE_CASES {
        let (t, e) = (parse_mu_term(input).unwrap(), parse_mu_term(expected).unwrap());
        match mu_reduce(&t, budget) {
            Ok(tr) => {
                c.expect(tr.steps.first().map(|s| s.rule) == Some(rule), || format!("{input}: first rule not {rule}"));
                c.expect(*tr.result() == e, || format!("{input}: got {}", tr.result()));
            }
            Err(err) => c.failures.push(format!("{input}: {err}")),
        }
    }
    for n in 0..=10 {
        let r = rep(&numeral_body(n), "x", "f");
        c.expect(r.as_ref().is_ok_and(|r| r.set == RepSet::single(n)), || format!("rep of (f)^{n}x: {r:?}"));
        let k = classify_mu_integer(&mixlogic::term::mu::church_mu(n), budget);
        c.expect(k.as_ref().is_ok_and(|k| k.n == n), || format!("classify church {n}: {k:?}"));
    }
    let t1 = MuTerm::from_term(&builtin("T1").unwrap()).unwrap();
    for r in verify_storage_mu(&t1, 0..=5, budget) {
        c.expect(r.outcome.is_simulated(), || format!("T1 {r}"));
    }
    c
}

/// Pure subject and type `N[sⁿ0]` for some `n`.
fn numeral_typing(d: &Derivation) -> Option<(Term, usize)> {
    let (subject, ty) = subject_of(d);
    let Subject::Term(t) = subject else { return None };
    if !t.is_pure() {
        return None;
    }
    (0..=64).find(|n| nat(FoTerm::numeral(*n)).alpha_eq(&ty)).map(|n| (t, n))
}

pub fn unicity(budget: Budget) -> Check {
    let mut c = Check::new("integer-typed fixtures normalize to their numeral");
    let mut count = 0;
    for (name, d) in library::all() {
        let Some((t, n)) = numeral_typing(&d) else { continue };
        if check(&d).is_err() {
            continue;
        }
        count += 1;
        let nf = beta_normalize(&t, budget);
        c.expect(nf.as_ref().is_ok_and(|nf| nf.alpha_eq(&church(n))), || format!("{name}: {nf:?}"));
    }
    c.expect(count >= 2, || format!("only {count} integer-typed fixtures"));
    c
}

/// Every deterministic check, in order.
pub fn run_all(budget: Budget) -> Vec<Check> {
    vec![
        storage_simulation(budget),
        value_extraction(budget),
        classical_storage(budget),
        control_characterization(budget),
        derivation_fixtures(),
        mu_layer(budget),
        unicity(budget),
    ]
}
