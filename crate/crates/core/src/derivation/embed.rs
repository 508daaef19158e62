use alloc::vec::Vec;

use super::{check, CheckError, Context, Derivation, Node, RuleTag, Sequent, System, Witness};
use crate::formula::{is_classical_type, Comprehension};
use crate::translate::{classical, TranslateError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EmbedError {
    #[error("input derivation is invalid: {0}")]
    Invalid(CheckError),
    #[error("expected a C2 derivation, found {0}")]
    NotC2(System),
    /// A second-order witness whose translation is not a classical type,
    /// typically one ending with a predicate constant.
    #[error("witness at node {path:?} does not translate to a classical type")]
    NonClassicalWitness { path: Vec<usize> },
    #[error(transparent)]
    Translate(#[from] TranslateError),
}

/// The same proof with every formula replaced by its classical translation
/// and second-order rules replaced by their classical versions.
pub fn embed_c2_in_m2(d: &Derivation) -> Result<Derivation, EmbedError> {
    if !matches!(d.system, System::C2 | System::AF2) {
        return Err(EmbedError::NotC2(d.system));
    }
    check(d).map_err(EmbedError::Invalid)?;
    let mut path = Vec::new();
    let root = embed_node(&d.root, &mut path)?;
    Ok(Derivation { system: System::M2, equations: d.equations.clone(), root })
}

fn ctx_c(ctx: &Context) -> Result<Context, EmbedError> {
    ctx.iter().map(|(x, a)| Ok((x.clone(), classical(a)?))).collect()
}

fn embed_node(n: &Node, path: &mut Vec<usize>) -> Result<Node, EmbedError> {
    let c = &n.conclusion;
    let conclusion = Sequent {
        ctx: ctx_c(&c.ctx)?,
        subject: c.subject.clone(),
        ty: classical(&c.ty)?,
        mu_ctx: ctx_c(&c.mu_ctx)?,
    };
    let rule = match n.rule {
        RuleTag::SoGen => RuleTag::ClassGen,
        RuleTag::SoInst => RuleTag::ClassInst,
        other => other,
    };
    let witness = match &n.witness {
        Some(Witness::Formula(g)) => {
            let body = classical(&g.body)?;
            if !is_classical_type(&body) {
                return Err(EmbedError::NonClassicalWitness { path: path.clone() });
            }
            Some(Witness::Formula(Comprehension { params: g.params.clone(), body }))
        }
        Some(Witness::Eq { var, motive, from, to }) => {
            Some(Witness::Eq { var: var.clone(), motive: classical(motive)?, from: from.clone(), to: to.clone() })
        }
        other => other.clone(),
    };
    let mut premises = Vec::with_capacity(n.premises.len());
    for (i, p) in n.premises.iter().enumerate() {
        path.push(i);
        premises.push(embed_node(p, path)?);
        path.pop();
    }
    Ok(Node { rule, conclusion, witness, premises })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::{library, subject_of};
    use crate::formula::library::{double_negation_classical, nat_classical};
    use crate::formula::{FoTerm, Formula};

    #[test]
    fn c_axiom_embeds() {
        let m = embed_c2_in_m2(&library::c_axiom()).unwrap();
        assert_eq!(check(&m), Ok(()));
        assert!(subject_of(&m).1.alpha_eq(&double_negation_classical()));
    }

    #[test]
    fn zero_embeds_as_classical_integer() {
        let mut d = library::zero();
        d.system = System::C2;
        let m = embed_c2_in_m2(&d).unwrap();
        assert_eq!(check(&m), Ok(()));
        assert!(subject_of(&m).1.alpha_eq(&nat_classical(FoTerm::zero())));
    }

    #[test]
    fn rejects_other_systems_and_invalid_input() {
        assert!(matches!(embed_c2_in_m2(&library::abort()), Err(EmbedError::NotC2(System::M2))));
        let mut d = library::zero();
        d.root.conclusion.ty = Formula::Bottom;
        assert!(matches!(embed_c2_in_m2(&d), Err(EmbedError::Invalid(_))));
    }

    #[test]
    fn lazy_derivation_embeds() {
        let m = embed_c2_in_m2(&library::lazy()).unwrap();
        assert_eq!(check(&m), Ok(()));
    }
}
