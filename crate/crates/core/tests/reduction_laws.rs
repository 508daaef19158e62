mod common;

use common::*;
use mixlogic::reduce::{
    beta_normalize, head_c_reduce, head_c_step, head_reduce, mu_normalize_innermost, mu_reduce, stack_reduce,
    Budget,
};
use mixlogic::{Substitution, Term};
use proptest::prelude::*;
use proptest::sample::Index;

const BUDGET: usize = 200;

/// Head C-steps from `from` until `to` is reached.
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

fn subst(images: &[(&str, Term)]) -> Substitution {
    images.iter().fold(Substitution::new(), |s, (x, t)| s.var(x, t.clone()))
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, max_global_rejects: 100_000, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn head_steps_survive_substitution(t in pure_term(), k in any::<Index>(), images in var_images()) {
        let Ok(tr) = head_reduce(&t, Budget::new(BUDGET)) else { return Err(TestCaseError::reject("diverges")) };
        let terms: Vec<&Term> = tr.terms().collect();
        let k = k.index(terms.len());
        let s = subst(&images);
        let (u, v) = (t.substitute(&s), terms[k].substitute(&s));
        prop_assert_eq!(steps_between(&u, &v, 4 * BUDGET), Some(k));
    }

    #[test]
    fn head_steps_compose_with_arguments(t in pure_term(), k in any::<Index>(), ws in args()) {
        let Ok(tr) = head_reduce(&t, Budget::new(BUDGET)) else { return Err(TestCaseError::reject("diverges")) };
        let terms: Vec<&Term> = tr.terms().collect();
        let k = k.index(terms.len());
        let uw = Term::apply(t.clone(), ws.clone());
        let vw = Term::apply(terms[k].clone(), ws);
        let Ok(common) = head_reduce(&vw, Budget::new(BUDGET)) else { return Err(TestCaseError::reject("diverges")) };
        let w = common.result();
        let h_vw = common.step_count();
        prop_assert_eq!(steps_between(&uw, w, 4 * BUDGET), Some(h_vw + k));
    }
}

proptest! {
    #![proptest_config(config(500))]

    #[test]
    fn head_c_matches_head_on_pure_terms(t in pure_term()) {
        let a = head_reduce(&t, Budget::new(BUDGET));
        let b = head_c_reduce(&t, Budget::new(BUDGET));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn control_reduction_survives_substitution(t in c_term(), k in any::<Index>(), images in var_images()) {
        let Ok(tr) = head_c_reduce(&t, Budget::new(BUDGET)) else { return Err(TestCaseError::reject("diverges")) };
        let terms: Vec<&Term> = tr.terms().collect();
        let k = k.index(terms.len());
        let s = subst(&images);
        prop_assert!(steps_between(&t.substitute(&s), &terms[k].substitute(&s), 4 * BUDGET).is_some());
    }

    #[test]
    fn stack_reduction_survives_p_substitution(
        t in c_term(),
        k in any::<Index>(),
        images in var_images(),
        stack in args(),
    ) {
        let start = Term::app(t, Term::stack("p"));
        let Ok(tr) = stack_reduce(&start, Budget::new(BUDGET)) else { return Err(TestCaseError::reject("diverges")) };
        let terms: Vec<&Term> = tr.terms().collect();
        let k = k.index(terms.len());
        prop_assert!(terms[k].is_lambda_cp());
        let s = subst(&images).stack("p", stack);
        let (u, v) = (start.substitute(&s), terms[k].substitute(&s));
        prop_assert!(u.is_lambda_cp());
        prop_assert!(steps_between(&u, &v, 4 * BUDGET).is_some());
    }

    #[test]
    fn beta_normal_forms_are_fixed_points(t in pure_term()) {
        if let Ok(nf) = beta_normalize(&t, Budget::new(BUDGET)) {
            prop_assert_eq!(beta_normalize(&nf, Budget::new(BUDGET)), Ok(nf));
        }
    }

    #[test]
    fn mu_strategies_agree(t in mu_term()) {
        let outer = mu_reduce(&t, Budget::new(BUDGET));
        let inner = mu_normalize_innermost(&t, Budget::new(BUDGET));
        if let (Ok(a), Ok(b)) = (outer, inner) {
            prop_assert_eq!(a.result(), b.result());
        }
    }
}
