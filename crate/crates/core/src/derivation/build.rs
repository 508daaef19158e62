//! Forward construction: each function computes its conclusion from its
//! premises without validating anything. Run [`super::check`] afterwards.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use super::{lookup, Context, Node, RuleTag, Sequent, Subject, System, Witness};
use crate::formula::library::{double_negation, double_negation_classical};
use crate::formula::{Comprehension, FoTerm, Formula, Pred};
use crate::term::{MuTerm, Term};

fn node(rule: RuleTag, conclusion: Sequent, witness: Option<Witness>, premises: Vec<Node>) -> Node {
    Node { rule, conclusion, witness, premises }
}

/// `x : a` in the context holding just that assumption; the other rules
/// merge contexts.
pub fn ax(x: &str, a: Formula) -> Node {
    let ctx = alloc::vec![(String::from(x), a.clone())];
    node(RuleTag::Ax, Sequent::new(ctx, Subject::Term(Term::var(x)), a), None, Vec::new())
}

/// Axiom with a lambda-mu variable as subject.
pub fn ax_mu(x: &str, a: Formula) -> Node {
    let mut n = ax(x, a);
    n.conclusion.subject = Subject::Mu(MuTerm::var(x));
    n
}

/// `C` with the type of its system.
pub fn c_axiom(sys: System) -> Node {
    let ty = if sys == System::C2 { double_negation() } else { double_negation_classical() };
    node(RuleTag::CAxiom, Sequent::new(Vec::new(), Subject::Term(Term::Control), ty), None, Vec::new())
}

/// Discharges `x`, taking its type from the premise context.
pub fn intro(x: &str, p: Node) -> Node {
    let a = lookup(&p.conclusion.ctx, x).cloned().unwrap_or(Formula::Bottom);
    intro_typed(x, a, p)
}

/// Discharges `x : a`, which the premise need not use.
pub fn intro_typed(x: &str, a: Formula, p: Node) -> Node {
    let s = &p.conclusion;
    let ctx = s.ctx.iter().filter(|(y, _)| y != x).cloned().collect();
    let conclusion = Sequent {
        ctx,
        subject: s.subject.lam(x),
        ty: Formula::arrow(a, s.ty.clone()),
        mu_ctx: s.mu_ctx.clone(),
    };
    node(RuleTag::ArrIntro, conclusion, None, alloc::vec![p])
}

fn union(a: &Context, b: &Context) -> Context {
    let mut out = a.clone();
    for (x, t) in b {
        if lookup(&out, x).is_none() {
            out.push((x.clone(), t.clone()));
        }
    }
    out
}

pub fn elim(f: Node, a: Node) -> Node {
    let (fs, as_) = (&f.conclusion, &a.conclusion);
    let ty = match &fs.ty {
        Formula::Arrow(_, r) => (**r).clone(),
        _ => Formula::Bottom,
    };
    let subject = fs.subject.app(&as_.subject).unwrap_or_else(|| fs.subject.clone());
    let conclusion =
        Sequent { ctx: union(&fs.ctx, &as_.ctx), subject, ty, mu_ctx: union(&fs.mu_ctx, &as_.mu_ctx) };
    node(RuleTag::ArrElim, conclusion, None, alloc::vec![f, a])
}

/// `(f)a₁…aₙ`.
pub fn elims(f: Node, args: impl IntoIterator<Item = Node>) -> Node {
    args.into_iter().fold(f, elim)
}

fn retype(rule: RuleTag, p: Node, ty: Formula, witness: Option<Witness>) -> Node {
    let mut conclusion = p.conclusion.clone();
    conclusion.ty = ty;
    node(rule, conclusion, witness, alloc::vec![p])
}

pub fn fo_gen(x: &str, p: Node) -> Node {
    let ty = Formula::ForallFo(x.into(), Box::new(p.conclusion.ty.clone()));
    retype(RuleTag::FoGen, p, ty, None)
}

pub fn so_gen(x: &str, p: Node) -> Node {
    let ty = Formula::ForallSo(x.into(), Box::new(p.conclusion.ty.clone()));
    retype(RuleTag::SoGen, p, ty, None)
}

pub fn class_gen(x: &str, p: Node) -> Node {
    let ty = Formula::ForallClassical(x.into(), Box::new(p.conclusion.ty.clone()));
    retype(RuleTag::ClassGen, p, ty, None)
}

pub fn fo_inst(p: Node, u: FoTerm) -> Node {
    let ty = match &p.conclusion.ty {
        Formula::ForallFo(x, b) => b.subst_fo(x, &u),
        other => other.clone(),
    };
    retype(RuleTag::FoInst, p, ty, Some(Witness::Term(u)))
}

/// Second-order or classical instantiation, by the outer quantifier. The
/// classical side condition is not enforced here.
pub fn so_inst(p: Node, g: Comprehension) -> Node {
    let (rule, ty) = match &p.conclusion.ty {
        Formula::ForallSo(x, b) => (RuleTag::SoInst, b.subst_pred(&Pred::Var(x.clone()), &g)),
        Formula::ForallClassical(x, b) => (RuleTag::ClassInst, b.subst_pred(&Pred::Classical(x.clone()), &g)),
        other => (RuleTag::SoInst, other.clone()),
    };
    retype(rule, p, ty, Some(Witness::Formula(g)))
}

/// Rewrites `motive[from/var]` to `motive[to/var]`.
pub fn eq(p: Node, var: &str, motive: Formula, from: FoTerm, to: FoTerm) -> Node {
    let ty = motive.subst_fo(var, &to);
    retype(RuleTag::Eq, p, ty, Some(Witness::Eq { var: var.into(), motive, from, to }))
}

/// `μβ[α]t`: β leaves the mu-context, α receives the premise type.
pub fn mu_name(p: Node, beta: &str, alpha: &str) -> Node {
    let s = &p.conclusion;
    let ty = lookup(&s.mu_ctx, beta).cloned().unwrap_or(Formula::Bottom);
    let mut mu_ctx: Context = s.mu_ctx.iter().filter(|(b, _)| b != beta).cloned().collect();
    if alpha != beta && s.ty != Formula::Bottom && lookup(&mu_ctx, alpha).is_none() {
        mu_ctx.push((String::from(alpha), s.ty.clone()));
    }
    let body = s.subject.as_mu().cloned().unwrap_or(MuTerm::var("?"));
    let conclusion = Sequent { ctx: s.ctx.clone(), subject: Subject::Mu(MuTerm::mu(beta, alpha, body)), ty, mu_ctx };
    node(RuleTag::MuNaming, conclusion, None, alloc::vec![p])
}

/// Replaces every lambda-C subject by its lambda-mu image, for reuse of
/// pure derivations in FD2.
pub fn to_mu(mut n: Node) -> Node {
    if let Subject::Term(t) = &n.conclusion.subject {
        if let Some(m) = MuTerm::from_term(t) {
            n.conclusion.subject = Subject::Mu(m);
        }
    }
    n.premises = n.premises.into_iter().map(to_mu).collect();
    n
}
