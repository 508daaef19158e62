use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{lookup, Context, Derivation, Node, RuleTag, Sequent, Subject, System, Witness};
use crate::formula::classify::{instantiate_top, InstantiateError, NoInstance};
use crate::formula::library::{double_negation, double_negation_classical};
use crate::formula::{
    equal_modulo, instantiates, Decision, EquationSet, Formula, Instantiation, Pred, WitnessItem,
};
use crate::reduce::Budget;
use crate::term::{MuName, MuTerm, Term};
use crate::translate::is_propositional;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reason {
    BadWitness,
    SideConditionViolated,
    WrongSystem,
    ContextMismatch,
    NonClassicalInstantiation,
    SubjectMismatch,
    TypeMismatch,
    WrongPremiseCount,
    EquationNotDerivable,
    NotPropositional,
    DuplicateLabel,
}

impl Reason {
    pub fn tag(self) -> &'static str {
        match self {
            Reason::BadWitness => "BadWitness",
            Reason::SideConditionViolated => "SideConditionViolated",
            Reason::WrongSystem => "WrongSystem",
            Reason::ContextMismatch => "ContextMismatch",
            Reason::NonClassicalInstantiation => "NonClassicalInstantiation",
            Reason::SubjectMismatch => "SubjectMismatch",
            Reason::TypeMismatch => "TypeMismatch",
            Reason::WrongPremiseCount => "WrongPremiseCount",
            Reason::EquationNotDerivable => "EquationNotDerivable",
            Reason::NotPropositional => "NotPropositional",
            Reason::DuplicateLabel => "DuplicateLabel",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// The first failing node, as premise indices from the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckError {
    pub path: Vec<usize>,
    pub reason: Reason,
    pub detail: String,
}

impl CheckError {
    pub fn path_string(&self) -> String {
        if self.path.is_empty() {
            return "root".into();
        }
        let parts: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        parts.join(".")
    }
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node {}: {}: {}", self.path_string(), self.reason, self.detail)
    }
}

impl core::error::Error for CheckError {}

type Local = Result<(), (Reason, String)>;

fn fail(reason: Reason, detail: impl Into<String>) -> Local {
    Err((reason, detail.into()))
}

/// Validates every node, root first.
pub fn check(d: &Derivation) -> Result<(), CheckError> {
    let mut path = Vec::new();
    walk(d.system, &d.equations, &d.root, &mut path)
}

fn walk(sys: System, eqs: &EquationSet, node: &Node, path: &mut Vec<usize>) -> Result<(), CheckError> {
    check_node(sys, eqs, node).map_err(|(reason, detail)| CheckError { path: path.clone(), reason, detail })?;
    for (i, p) in node.premises.iter().enumerate() {
        path.push(i);
        walk(sys, eqs, p, path)?;
        path.pop();
    }
    Ok(())
}

fn well_formed(sys: System, s: &Sequent) -> Local {
    for ctx in [&s.ctx, &s.mu_ctx] {
        let mut seen = BTreeSet::new();
        for (x, _) in ctx {
            if !seen.insert(x) {
                return fail(Reason::DuplicateLabel, alloc::format!("label {x} appears twice"));
            }
        }
    }
    match (&s.subject, sys) {
        (Subject::Mu(_), System::FD2) | (Subject::Term(_), System::AF2 | System::C2 | System::M2 | System::M) => {}
        (Subject::Mu(_), _) => return fail(Reason::SubjectMismatch, "lambda-mu subject outside FD2"),
        (Subject::Term(_), _) => return fail(Reason::SubjectMismatch, "FD2 subjects are lambda-mu terms"),
    }
    if sys != System::FD2 && !s.mu_ctx.is_empty() {
        return fail(Reason::ContextMismatch, "mu-context outside FD2");
    }
    if s.mu_ctx.iter().any(|(_, a)| *a == Formula::Bottom) {
        return fail(Reason::ContextMismatch, "mu-variables of type _|_ are not listed");
    }
    if sys == System::M {
        let all = s.ctx.iter().map(|(_, a)| a).chain(core::iter::once(&s.ty));
        if let Some(a) = all.into_iter().find(|a| !is_propositional(a)) {
            return fail(Reason::NotPropositional, alloc::format!("{a}"));
        }
    }
    Ok(())
}

/// Every entry of `sub` except `skip` occurs in `sup` with the same type.
fn included(sub: &Context, sup: &Context, skip: Option<&str>) -> Local {
    for (x, a) in sub {
        if Some(x.as_str()) == skip {
            continue;
        }
        match lookup(sup, x) {
            Some(b) if a.alpha_eq(b) => {}
            Some(b) => return fail(Reason::ContextMismatch, alloc::format!("{x} : {a} but {x} : {b} below")),
            None => return fail(Reason::ContextMismatch, alloc::format!("{x} : {a} is not in the conclusion")),
        }
    }
    Ok(())
}

fn same_type(expected: &Formula, got: &Formula, what: &str) -> Local {
    if expected.alpha_eq(got) {
        Ok(())
    } else {
        fail(Reason::TypeMismatch, alloc::format!("{what}: expected {expected}, found {got}"))
    }
}

fn premises(node: &Node, n: usize) -> Result<&[Node], (Reason, String)> {
    if node.premises.len() == n {
        Ok(&node.premises)
    } else {
        Err((Reason::WrongPremiseCount, alloc::format!("{} takes {n}, found {}", node.rule, node.premises.len())))
    }
}

fn check_node(sys: System, eqs: &EquationSet, node: &Node) -> Local {
    let c = &node.conclusion;
    well_formed(sys, c)?;
    if !sys.allows(node.rule) {
        return fail(Reason::WrongSystem, alloc::format!("{} is not a rule of {sys}", node.rule));
    }
    if let Some(Witness::Formula(g)) = &node.witness {
        if sys == System::M && (!g.params.is_empty() || !is_propositional(&g.body)) {
            return fail(Reason::NotPropositional, alloc::format!("witness {g}"));
        }
    }
    match node.rule {
        RuleTag::Ax => {
            premises(node, 0)?;
            let x = match &c.subject {
                Subject::Term(Term::Free(x)) | Subject::Mu(MuTerm::Free(x)) => x,
                _ => return fail(Reason::SubjectMismatch, "axiom subject must be a variable"),
            };
            match lookup(&c.ctx, x) {
                Some(a) => same_type(a, &c.ty, "axiom"),
                None => fail(Reason::ContextMismatch, alloc::format!("{x} is not declared")),
            }
        }
        RuleTag::CAxiom => {
            premises(node, 0)?;
            if c.subject != Subject::Term(Term::Control) {
                return fail(Reason::SubjectMismatch, "subject must be C");
            }
            let want = if sys == System::C2 { double_negation() } else { double_negation_classical() };
            same_type(&want, &c.ty, "type of C")
        }
        RuleTag::ArrIntro => arr_intro(c, &premises(node, 1)?[0].conclusion),
        RuleTag::ArrElim => {
            let ps = premises(node, 2)?;
            let (f, a) = (&ps[0].conclusion, &ps[1].conclusion);
            if f.subject.app(&a.subject).as_ref() != Some(&c.subject) {
                return fail(Reason::SubjectMismatch, "subject is not the application of the premises");
            }
            match &f.ty {
                Formula::Arrow(l, r) => {
                    same_type(l, &a.ty, "argument")?;
                    same_type(r, &c.ty, "result")?;
                }
                other => return fail(Reason::TypeMismatch, alloc::format!("{other} is not an implication")),
            }
            for p in [f, a] {
                included(&p.ctx, &c.ctx, None)?;
                included(&p.mu_ctx, &c.mu_ctx, None)?;
            }
            Ok(())
        }
        RuleTag::FoGen | RuleTag::SoGen | RuleTag::ClassGen => {
            let p = same_subject(c, node)?;
            let (x, body) = match (&c.ty, node.rule) {
                (Formula::ForallFo(x, b), RuleTag::FoGen)
                | (Formula::ForallSo(x, b), RuleTag::SoGen)
                | (Formula::ForallClassical(x, b), RuleTag::ClassGen) => (x, b),
                (other, _) => {
                    return fail(Reason::TypeMismatch, alloc::format!("{other} is not quantified for {}", node.rule))
                }
            };
            same_type(body, &p.ty, "generalized body")?;
            let occurs = |a: &Formula| match node.rule {
                RuleTag::FoGen => a.fo_free_vars().contains(x),
                RuleTag::SoGen => a.has_free_pred(&Pred::Var(x.clone())),
                _ => a.has_free_pred(&Pred::Classical(x.clone())),
            };
            for s in [c, p] {
                if let Some((y, _)) = s.ctx.iter().chain(&s.mu_ctx).find(|(_, a)| occurs(a)) {
                    return fail(Reason::SideConditionViolated, alloc::format!("{x} is free in the type of {y}"));
                }
            }
            Ok(())
        }
        RuleTag::FoInst | RuleTag::SoInst | RuleTag::ClassInst => {
            let p = same_subject(c, node)?;
            instantiation(node, p, c)
        }
        RuleTag::Eq => {
            let p = same_subject(c, node)?;
            let Some(Witness::Eq { var, motive, from, to }) = &node.witness else {
                return fail(Reason::BadWitness, "Eq needs an equation witness");
            };
            if !motive.subst_fo(var, from).alpha_eq(&p.ty) || !motive.subst_fo(var, to).alpha_eq(&c.ty) {
                return fail(Reason::BadWitness, "premise and conclusion do not match the motive");
            }
            match equal_modulo(eqs, from, to, Budget::default()) {
                Decision::Yes => Ok(()),
                Decision::No => fail(Reason::EquationNotDerivable, alloc::format!("{from} = {to} does not follow")),
                Decision::Inconclusive => {
                    fail(Reason::EquationNotDerivable, alloc::format!("{from} = {to} could not be established"))
                }
            }
        }
        RuleTag::MuNaming => mu_naming(c, &premises(node, 1)?[0].conclusion),
    }
}

/// The single premise of a rule that keeps the subject and contexts.
fn same_subject<'a>(c: &Sequent, node: &'a Node) -> Result<&'a Sequent, (Reason, String)> {
    let p = &premises(node, 1)?[0].conclusion;
    if p.subject != c.subject {
        return Err((Reason::SubjectMismatch, "premise has a different subject".into()));
    }
    included(&p.ctx, &c.ctx, None)?;
    included(&p.mu_ctx, &c.mu_ctx, None)?;
    Ok(p)
}

fn instantiation(node: &Node, p: &Sequent, c: &Sequent) -> Local {
    let kind_ok = matches!(
        (&p.ty, node.rule),
        (Formula::ForallFo(..), RuleTag::FoInst)
            | (Formula::ForallSo(..), RuleTag::SoInst)
            | (Formula::ForallClassical(..), RuleTag::ClassInst)
    );
    if !kind_ok {
        return fail(Reason::TypeMismatch, alloc::format!("{} cannot be instantiated by {}", p.ty, node.rule));
    }
    let item = match (&node.witness, &p.ty) {
        (Some(Witness::Term(u)), Formula::ForallFo(x, _)) => WitnessItem::Fo(x.clone(), u.clone()),
        (Some(Witness::Formula(g)), Formula::ForallSo(x, _)) => WitnessItem::So(x.clone(), g.clone()),
        (Some(Witness::Formula(g)), Formula::ForallClassical(x, _)) => WitnessItem::Classical(x.clone(), g.clone()),
        (Some(_), _) => return fail(Reason::BadWitness, "witness kind does not match the quantifier"),
        (None, _) => {
            // search for a single-step witness
            return match instantiates(&p.ty, &c.ty) {
                Instantiation::Witness(ws) if ws.len() == 1 => Ok(()),
                Instantiation::No(NoInstance::NonClassical) => {
                    fail(Reason::NonClassicalInstantiation, "only a non-classical type fits")
                }
                _ => fail(Reason::BadWitness, alloc::format!("{} is not an instance of {}", c.ty, p.ty)),
            };
        }
    };
    match instantiate_top(&p.ty, &item) {
        Ok(a) if a.alpha_eq(&c.ty) => Ok(()),
        Ok(a) => fail(Reason::BadWitness, alloc::format!("instance is {a}, conclusion is {}", c.ty)),
        Err(InstantiateError::NonClassical) => {
            fail(Reason::NonClassicalInstantiation, "witness for a classical variable is not a classical type")
        }
        Err(e) => fail(Reason::BadWitness, e.to_string()),
    }
}

fn arr_intro(c: &Sequent, p: &Sequent) -> Local {
    let (a, b) = match &c.ty {
        Formula::Arrow(a, b) => (a, b),
        other => return fail(Reason::TypeMismatch, alloc::format!("{other} is not an implication")),
    };
    let opened = |x: &str| match &c.subject {
        Subject::Term(Term::Lam(_, body)) => Some(Subject::Term(Term::open(body, x))),
        Subject::Mu(MuTerm::Lam(_, body)) => Some(Subject::Mu(MuTerm::open(body, x))),
        _ => None,
    };
    if opened("x").is_none() {
        return fail(Reason::SubjectMismatch, "subject is not an abstraction");
    }
    let fv = c.subject.free_vars();
    let fresh = crate::formula::fresh_name("%x", &fv);
    let candidates = p
        .ctx
        .iter()
        .map(|(x, _)| x.clone())
        .filter(|x| lookup(&c.ctx, x).is_none() && !fv.contains(x))
        .chain(core::iter::once(fresh));
    let Some(x) = candidates.into_iter().find(|x| opened(x).as_ref() == Some(&p.subject)) else {
        return fail(Reason::SubjectMismatch, "premise subject is not the body of the abstraction");
    };
    if let Some(ax) = lookup(&p.ctx, &x) {
        same_type(a, ax, "abstracted variable")?;
    }
    same_type(b, &p.ty, "body")?;
    included(&p.ctx, &c.ctx, Some(&x))?;
    included(&p.mu_ctx, &c.mu_ctx, None)
}

/// `Γ ⊢ t : A, β : B, Δ` gives `Γ ⊢ μβ[α]t : B, α : A, Δ`.
fn mu_naming(c: &Sequent, p: &Sequent) -> Local {
    let Subject::Mu(MuTerm::Mu(_, target, body)) = &c.subject else {
        return fail(Reason::SubjectMismatch, "subject is not a mu-abstraction");
    };
    let premise_fmv = p.subject.as_mu().map(MuTerm::free_mu_vars).unwrap_or_default();
    let concl_fmv = c.subject.as_mu().map(MuTerm::free_mu_vars).unwrap_or_default();
    let mut taken = premise_fmv.clone();
    taken.extend(concl_fmv.iter().cloned());
    let fresh = crate::formula::fresh_name("%beta", &taken);
    let candidates: Vec<String> = p
        .mu_ctx
        .iter()
        .map(|(b, _)| b.clone())
        .chain(premise_fmv.iter().cloned())
        .filter(|b| lookup(&c.mu_ctx, b).is_none() && !concl_fmv.contains(b))
        .chain(core::iter::once(fresh))
        .collect();
    let open = |b: &str| Subject::Mu(body.rename_mu(0, &MuName::Free(b.to_string())));
    let Some(beta) = candidates.iter().find(|b| open(b) == p.subject) else {
        return fail(Reason::SubjectMismatch, "premise subject is not the body of the mu-abstraction");
    };
    // the type of β, `⊥` when unlisted
    match lookup(&p.mu_ctx, beta) {
        Some(bt) => same_type(bt, &c.ty, "mu-bound variable")?,
        None if c.ty == Formula::Bottom || !premise_fmv.contains(beta) => {}
        None => return fail(Reason::ContextMismatch, alloc::format!("{beta} is used but has no type")),
    }
    match target {
        MuName::Bound(0) => same_type(&c.ty, &p.ty, "self-named body")?,
        MuName::Free(alpha) => {
            if p.ty != Formula::Bottom {
                match lookup(&c.mu_ctx, alpha) {
                    Some(at) => same_type(&p.ty, at, "named variable")?,
                    None => return fail(Reason::ContextMismatch, alloc::format!("{alpha} : {} is missing", p.ty)),
                }
            }
        }
        MuName::Bound(_) => return fail(Reason::SubjectMismatch, "dangling mu-variable"),
    }
    included(&p.ctx, &c.ctx, None)?;
    included(&p.mu_ctx, &c.mu_ctx, Some(beta))
}
