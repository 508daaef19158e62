//! Formula translations: Gödel `*`, classical `^C`, the atom-negating
//! variant used for storage types, and propositional erasure.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::formula::{fresh_name, Formula, Pred};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error("classical variable {0}c in a formula without classical variables")]
    ClassicalVariable(String),
}

/// The ordinary variable standing for each classical variable.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StarTable {
    pub map: BTreeMap<String, String>,
}

impl StarTable {
    /// `X ↦ X*`, made fresh for every name already used in `a`.
    pub fn for_formula(a: &Formula) -> Self {
        let mut classical = BTreeSet::new();
        collect_classical(a, &mut classical);
        let mut taken = a.pred_names();
        let mut map = BTreeMap::new();
        for x in classical {
            let star = fresh_name(&alloc::format!("{x}*"), &taken);
            taken.insert(star.clone());
            map.insert(x, star);
        }
        StarTable { map }
    }

    fn star(&self, x: &str) -> String {
        self.map.get(x).cloned().unwrap_or_else(|| alloc::format!("{x}*"))
    }
}

fn collect_classical(a: &Formula, out: &mut BTreeSet<String>) {
    match a {
        Formula::Bottom => {}
        Formula::Atom(Pred::Classical(x), _) => {
            out.insert(x.clone());
        }
        Formula::Atom(..) => {}
        Formula::Arrow(l, r) => {
            collect_classical(l, out);
            collect_classical(r, out);
        }
        Formula::ForallClassical(x, b) => {
            out.insert(x.clone());
            collect_classical(b, out);
        }
        Formula::ForallFo(_, b) | Formula::ForallSo(_, b) => collect_classical(b, out),
    }
}

/// `A*`: `X_C(t̄) ↦ ¬X*(t̄)` and `∀X_C ↦ ∀X*`, everything else unchanged.
pub fn godel(a: &Formula) -> Formula {
    godel_with(a, &StarTable::for_formula(a))
}

pub fn godel_with(a: &Formula, table: &StarTable) -> Formula {
    match a {
        Formula::Atom(Pred::Classical(x), args) => {
            Formula::not(Formula::Atom(Pred::Var(table.star(x)), args.clone()))
        }
        Formula::Bottom | Formula::Atom(..) => a.clone(),
        Formula::Arrow(l, r) => Formula::arrow(godel_with(l, table), godel_with(r, table)),
        Formula::ForallFo(x, b) => Formula::ForallFo(x.clone(), Box::new(godel_with(b, table))),
        Formula::ForallSo(x, b) => Formula::ForallSo(x.clone(), Box::new(godel_with(b, table))),
        Formula::ForallClassical(x, b) => Formula::ForallSo(table.star(x), Box::new(godel_with(b, table))),
    }
}

fn reject_classical(a: &Formula) -> Result<(), TranslateError> {
    let mut found = BTreeSet::new();
    collect_classical(a, &mut found);
    match found.into_iter().next() {
        Some(x) => Err(TranslateError::ClassicalVariable(x)),
        None => Ok(()),
    }
}

/// Every atom `A` becomes `¬A`; `⊥` is left alone.
pub fn simple_godel(a: &Formula) -> Result<Formula, TranslateError> {
    reject_classical(a)?;
    fn go(a: &Formula) -> Formula {
        match a {
            Formula::Bottom => Formula::Bottom,
            Formula::Atom(..) => Formula::not(a.clone()),
            Formula::Arrow(l, r) => Formula::arrow(go(l), go(r)),
            Formula::ForallFo(x, b) => Formula::ForallFo(x.clone(), Box::new(go(b))),
            Formula::ForallSo(x, b) => Formula::ForallSo(x.clone(), Box::new(go(b))),
            Formula::ForallClassical(..) => unreachable!("rejected above"),
        }
    }
    Ok(go(a))
}

/// `A^C`: every ordinary predicate variable becomes classical.
pub fn classical(a: &Formula) -> Result<Formula, TranslateError> {
    reject_classical(a)?;
    fn go(a: &Formula) -> Formula {
        match a {
            Formula::Atom(Pred::Var(x), args) => Formula::Atom(Pred::Classical(x.clone()), args.clone()),
            Formula::Bottom | Formula::Atom(..) => a.clone(),
            Formula::Arrow(l, r) => Formula::arrow(go(l), go(r)),
            Formula::ForallFo(x, b) => Formula::ForallFo(x.clone(), Box::new(go(b))),
            Formula::ForallSo(x, b) => Formula::ForallClassical(x.clone(), Box::new(go(b))),
            Formula::ForallClassical(..) => unreachable!("rejected above"),
        }
    }
    Ok(go(a))
}

/// `A◇`: first-order quantifiers and arguments are forgotten.
pub fn prop_erase(a: &Formula) -> Formula {
    match a {
        Formula::Bottom => Formula::Bottom,
        Formula::Atom(p, _) => Formula::Atom(p.clone(), Vec::new()),
        Formula::Arrow(l, r) => Formula::arrow(prop_erase(l), prop_erase(r)),
        Formula::ForallFo(_, b) => prop_erase(b),
        Formula::ForallSo(x, b) => Formula::ForallSo(x.clone(), Box::new(prop_erase(b))),
        Formula::ForallClassical(x, b) => Formula::ForallClassical(x.clone(), Box::new(prop_erase(b))),
    }
}

/// No first-order quantifier and only 0-ary atoms.
pub fn is_propositional(a: &Formula) -> bool {
    match a {
        Formula::Bottom => true,
        Formula::Atom(_, args) => args.is_empty(),
        Formula::Arrow(l, r) => is_propositional(l) && is_propositional(r),
        Formula::ForallFo(..) => false,
        Formula::ForallSo(_, b) | Formula::ForallClassical(_, b) => is_propositional(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::library::*;
    use crate::formula::syntax::parse_formula;
    use crate::formula::{ends_with, is_classical_type, FoTerm};

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn godel_examples() {
        assert_eq!(godel(&p("Xc(0)")), p("~X*(0)"));
        assert_eq!(godel(&p("$D(x)")), p("$D(x)"));
        assert!(godel(&nat_classical(FoTerm::var("x"))).alpha_eq(&nat_star(FoTerm::var("x"))));
        // X* already in use
        let a = p("X*(0) -> Xc(0)");
        let g = godel(&a);
        assert_eq!(g, p("X*(0) -> ~X*1(0)"));
    }

    #[test]
    fn godel_of_classical_type_ends_with_bottom() {
        for s in ["forall Xc. ~~Xc -> Xc", "forall Xc. _|_ -> Xc", "N^C[x]", "A -> _|_"] {
            let a = p(s);
            assert!(is_classical_type(&a), "{s}");
            assert!(crate::formula::classify::ends_with_bottom(&godel(&a)), "{s}");
        }
    }

    #[test]
    fn simple_godel_examples() {
        assert_eq!(simple_godel(&nat(FoTerm::var("x"))).unwrap(), nat_star(FoTerm::var("x")));
        assert_eq!(simple_godel(&p("X(0)")).unwrap(), p("~X(0)"));
        assert_eq!(simple_godel(&p("A -> B")).unwrap(), p("~A -> ~B"));
        assert_eq!(simple_godel(&p("_|_")).unwrap(), Formula::Bottom);
        assert!(simple_godel(&p("Xc")).is_err());
    }

    #[test]
    fn classical_examples() {
        assert_eq!(classical(&p("forall X. X(0) -> X(0)")).unwrap(), p("forall Xc. Xc(0) -> Xc(0)"));
        assert_eq!(classical(&p("$D(t)")).unwrap(), p("$D(t)"));
        assert_eq!(classical(&nat(FoTerm::var("x"))).unwrap(), nat_classical(FoTerm::var("x")));
        assert!(classical(&p("Yc")).is_err());
        assert!(ends_with(&classical(&p("A -> X(0)")).unwrap(), &Pred::Classical("X".into())));
    }

    #[test]
    fn erasure() {
        assert_eq!(prop_erase(&nat(FoTerm::var("x"))), nat_prop());
        assert_eq!(prop_erase(&p("$D(t)")), p("$D"));
        assert_eq!(prop_erase(&p("forall x. A(x) -> B")), p("A -> B"));
        let a = storage_type();
        assert_eq!(prop_erase(&prop_erase(&a)), prop_erase(&a));
        assert!(is_propositional(&prop_erase(&a)));
        assert!(!is_propositional(&a));
    }
}
