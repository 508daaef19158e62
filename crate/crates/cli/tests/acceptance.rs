//! End-to-end acceptance run: one PASS/FAIL line per criterion.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use mixlogic::formula::library::{nat, nat_classical, nat_star};
use mixlogic::formula::{
    formula_equal_modulo, instantiate_top, is_classical_type, polarity, Comprehension, Decision, EquationSet, FoTerm,
    Formula, Polarity, Pred, WitnessItem,
};
use mixlogic::machines::{classify_mu_integer, NotMuInteger};
use mixlogic::reduce::{head_c_step, head_reduce, mu_reduce, Budget};
use mixlogic::translate::{godel, simple_godel};
use mixlogic::{MuName, MuTerm, Substitution, Term};
use mixlogic_cli::acceptance;
use proptest::prelude::*;
use proptest::sample::Index;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

/// Wall-clock limits, generous enough for unoptimized builds.
const STORAGE_LIMIT: Duration = Duration::from_secs(5);
const EXTRACTION_LIMIT: Duration = Duration::from_secs(2);
/// Generated cases per property.
const CASES: u32 = 1000;
const MU_CORPUS: u32 = 500;
const HEAD_BUDGET: usize = 200;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, max_global_rejects: 1_000_000, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn property<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Outcome {
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

fn fixture(rel: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    root.join(rel).display().to_string()
}

fn cli(args: &[&str]) -> mixlogic_cli::Outcome {
    let mut argv = vec!["mixlogic"];
    argv.extend_from_slice(args);
    mixlogic_cli::run(argv)
}

fn check(c: acceptance::Check) -> Outcome {
    if c.passed() {
        Ok(())
    } else {
        Err(c.failures.join("; "))
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    f()?;
    let took = start.elapsed();
    if took > limit {
        return Err(format!("took {took:?}, limit {limit:?}"));
    }
    Ok(())
}

fn storage_simulation() -> Outcome {
    timed(STORAGE_LIMIT, || {
        check(acceptance::storage_simulation(Budget::default()))?;
        for name in ["T1", "T2"] {
            let out = cli(&["storage-verify", "--candidate", &fixture(&format!("terms/{name}.lc")), "--n", "0..15"]);
            if out.code != 0 || out.stdout.lines().count() != 48 {
                return Err(format!("storage-verify {name}: exit {} {}", out.code, out.stderr));
            }
        }
        Ok(())
    })
}

fn value_extraction() -> Outcome {
    timed(EXTRACTION_LIMIT, || check(acceptance::value_extraction(Budget::default())))?;
    let out = cli(&["value", &fixture("terms/church3.lc")]);
    if out.stdout.trim() != "n=3 m=3 I=[3, 2, 1, 0] r=[0, 1, 2, 3]" {
        return Err(format!("value church3.lc printed {:?}", out.stdout));
    }
    Ok(())
}

fn classical_storage() -> Outcome {
    check(acceptance::classical_storage(Budget::default()))?;
    for name in ["T1", "T2"] {
        let out = cli(&["storage-verify", "--mode", "classical", "--candidate", &fixture(&format!("terms/{name}.lc")), "--n", "0..10"]);
        if out.code != 0 {
            return Err(format!("{name}: {}", out.stderr));
        }
    }
    let out = cli(&["storage-verify", "--mode", "classical", "--candidate", &fixture("terms/lazy.lc"), "--n", "0..10"]);
    if out.code != 1 {
        return Err("lazy operator accepted by storage-verify".into());
    }
    Ok(())
}

fn control_characterization() -> Outcome {
    check(acceptance::control_characterization(Budget::default()))?;
    let out = cli(&["characterize", "--type", "cc", "--candidate", &fixture("terms/Cprime.lc")]);
    if !out.stdout.starts_with("shape m=2") {
        return Err(format!("characterize Cprime printed {:?}", out.stdout));
    }
    Ok(())
}

fn derivation_fixtures() -> Outcome {
    check(acceptance::derivation_fixtures())?;
    for name in acceptance::SHIPPED {
        let out = cli(&["typecheck", &fixture(&format!("derivations/{name}.deriv"))]);
        if out.code != 0 {
            return Err(format!("typecheck {name}: {}", out.stderr));
        }
    }
    let out = cli(&["fixtures", "run-all", "--fixture-dir", &fixture("")]);
    if out.code != 0 {
        return Err(format!("fixtures run-all failed:\n{}", out.stdout));
    }
    Ok(())
}

/// Head steps from `from` until `to`, or `None` past `limit`.
fn steps_between(from: &Term, to: &Term, limit: usize) -> Option<usize> {
    let mut cur = from.clone();
    for k in 0..=limit {
        if cur == *to {
            return Some(k);
        }
        cur = head_c_step(&cur)?.term;
    }
    None
}

fn head_reduction_laws() -> Outcome {
    let budget = Budget::new(HEAD_BUDGET);
    property(CASES, (pure_term(), any::<Index>(), var_images()), |(t, k, images)| {
        let Ok(tr) = head_reduce(&t, budget) else { return Err(TestCaseError::reject("diverges")) };
        let terms: Vec<&Term> = tr.terms().collect();
        let k = k.index(terms.len());
        let s = images.iter().fold(Substitution::new(), |s, (x, u)| s.var(x, u.clone()));
        let (u, v) = (t.substitute(&s), terms[k].substitute(&s));
        prop_assert_eq!(steps_between(&u, &v, 4 * HEAD_BUDGET), Some(k));
        Ok(())
    })?;
    property(CASES, (pure_term(), any::<Index>(), args()), |(t, k, ws)| {
        let Ok(tr) = head_reduce(&t, budget) else { return Err(TestCaseError::reject("diverges")) };
        let terms: Vec<&Term> = tr.terms().collect();
        let k = k.index(terms.len());
        let vw = Term::apply(terms[k].clone(), ws.clone());
        let Ok(rest) = head_reduce(&vw, budget) else { return Err(TestCaseError::reject("diverges")) };
        let uw = Term::apply(t.clone(), ws);
        prop_assert_eq!(steps_between(&uw, rest.result(), 4 * HEAD_BUDGET), Some(rest.step_count() + k));
        Ok(())
    })
}

fn translation_laws() -> Outcome {
    property(CASES, (formula(), fo_term()), |(a, t)| {
        let (lhs, rhs) = (godel(&a.subst_fo("x", &t)), godel(&a).subst_fo("x", &t));
        prop_assert!(lhs.alpha_eq(&rhs), "{} vs {}", lhs, rhs);
        Ok(())
    })?;
    property(CASES, (formula(), comprehension(true)), |(a, g)| {
        let x = Pred::Var("X".into());
        let g_star = Comprehension { params: g.params.clone(), body: godel(&g.body) };
        let (lhs, rhs) = (godel(&a.subst_pred(&x, &g)), godel(&a).subst_pred(&x, &g_star));
        prop_assert!(lhs.alpha_eq(&rhs), "{} vs {}", lhs, rhs);
        Ok(())
    })?;
    let x = FoTerm::var("x");
    let star = nat_star(x.clone());
    let via_godel = godel(&nat_classical(x.clone()));
    let via_simple = simple_godel(&nat(x)).map_err(|e| e.to_string())?;
    if !(via_godel.alpha_eq(&star) && via_simple.alpha_eq(&star)) {
        return Err(format!("godel gave {via_godel}, simple_godel gave {via_simple}, expected {star}"));
    }
    Ok(())
}

fn instantiate_chain(a: &Formula, ws: &[(FoTerm, Comprehension, Comprehension)], stop_at_arrow: bool) -> Formula {
    let mut cur = a.clone();
    for (fo, so, cl) in ws {
        let item = match &cur {
            Formula::Arrow(..) if stop_at_arrow => break,
            Formula::ForallFo(x, _) => WitnessItem::Fo(x.clone(), fo.clone()),
            Formula::ForallSo(x, _) => WitnessItem::So(x.clone(), so.clone()),
            Formula::ForallClassical(x, _) => WitnessItem::Classical(x.clone(), cl.clone()),
            _ => break,
        };
        cur = instantiate_top(&cur, &item).expect("witness kind matches");
    }
    cur
}

fn classifier_closure() -> Outcome {
    let witnesses = || {
        let classical = comprehension(true).prop_filter("classical", |g| is_classical_type(&g.body));
        prop::collection::vec((fo_term(), comprehension(true), classical), 1..=3)
    };
    property(CASES, (formula().prop_filter("classical", is_classical_type), witnesses()), |(a, ws)| {
        let b = instantiate_chain(&a, &ws, false);
        prop_assert!(is_classical_type(&b), "{} gave {}", a, b);
        Ok(())
    })?;
    property(CASES, formula(), |a| {
        // every argument t rewritten to p(s(t)), equal under p(s(x)) = x
        let b = a.map_fo_terms(&mut |t| FoTerm::App("p".into(), vec![FoTerm::succ(t.clone())]));
        prop_assert_eq!(formula_equal_modulo(&EquationSet::predecessor(), &a, &b, Budget::default()), Decision::Yes);
        prop_assert_eq!(is_classical_type(&a), is_classical_type(&b));
        Ok(())
    })?;
    property(CASES, (formula().prop_filter("negative", |a| polarity(a).is_negative()), witnesses()), |(a, ws)| {
        if let Formula::Arrow(l, r) = instantiate_chain(&a, &ws, true) {
            prop_assert!(polarity(&l).is_positive() && polarity(&r).is_negative());
        }
        Ok(())
    })?;
    // N[x] = ∀X(X(0) → ∀y(X(y) → X(sy)) → X(x)).
    // Atoms are in both classes. ∀y(X(y) → X(sy)) is in both (arrow of two
    // atoms, first-order quantifier). The inner arrow ∀y(..) → X(x) is in both,
    // so X(0) → (..) is in both. ∀X keeps it positive but not negative
    // because X is free in the body. Hence Positive.
    let p = polarity(&nat(FoTerm::var("x")));
    if p != Polarity::Positive {
        return Err(format!("polarity(N[x]) = {p:?}"));
    }
    Ok(())
}

/// Reads `λx.λf.u` as a chain when `u` is built from `x`, `(f)_` and
/// `μα[β]_` only.
fn as_chain(t: &MuTerm) -> Option<Vec<Link>> {
    let MuTerm::Lam(_, inner) = t else { return None };
    let MuTerm::Lam(_, mut u) = (**inner).clone() else { return None };
    let mut links = Vec::new();
    let mut mus: Vec<usize> = Vec::new();
    loop {
        match *u {
            MuTerm::Bound(1) => return Some(links),
            MuTerm::App(g, v) if *g == MuTerm::Bound(0) => {
                links.push(Link::F);
                u = v;
            }
            MuTerm::Mu(_, target, v) => {
                let link = match target {
                    MuName::Bound(0) => Link::Mu(None),
                    MuName::Bound(k) => Link::Mu(Some(mus[mus.len().checked_sub(k)?])),
                    MuName::Free(_) => Link::MuFree,
                };
                mus.push(links.len());
                links.push(link);
                u = v;
            }
            _ => return None,
        }
    }
}

fn is_normal(t: &MuTerm) -> bool {
    mu_reduce(t, Budget::new(50)).is_ok_and(|tr| tr.step_count() == 0)
}

fn mu_layer() -> Outcome {
    check(acceptance::mu_layer(Budget::default()))?;
    let corpus = prop_oneof![
        chain().prop_map(|l| chain_term(&l)),
        mu_term(),
        mu_term().prop_map(|t| MuTerm::lams(&["x", "f"], t)),
    ];
    property(MU_CORPUS, corpus, |t| {
        prop_assume!(is_normal(&t));
        let got = classify_mu_integer(&t, Budget::default());
        let expected = as_chain(&t).filter(|l| !l.contains(&Link::MuFree)).and_then(|l| match chain_rep(&l) {
            Naturals::Set(s) if s.len() == 1 => s.first().copied(),
            _ => None,
        });
        match expected {
            Some(n) => prop_assert_eq!(got.clone().map(|k| k.n), Ok(n), "{}", t),
            None => prop_assert!(got.is_err(), "{} accepted", t),
        }
        if as_chain(&t).is_none() && got.is_err() {
            prop_assert!(!matches!(got, Err(NotMuInteger::Rep(_))), "{}", t);
        }
        Ok(())
    })?;
    let out = cli(&["rep", r"\x. \f. f (f (f x))"]);
    if out.stdout.trim() != "{3}" {
        return Err(format!("rep printed {:?}", out.stdout));
    }
    Ok(())
}

fn unicity() -> Outcome {
    check(acceptance::unicity(Budget::default()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("storage simulation on pure integers", storage_simulation),
        ("value extraction", value_extraction),
        ("storage simulation on control integers", classical_storage),
        ("control operator characterization", control_characterization),
        ("derivation fixtures", derivation_fixtures),
        ("head reduction laws", head_reduction_laws),
        ("translation laws", translation_laws),
        ("classifier closure", classifier_closure),
        ("lambda-mu layer", mu_layer),
        ("unicity on fixtures", unicity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(()) => println!("criterion {}: PASS {name}", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
