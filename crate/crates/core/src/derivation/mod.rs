//! Explicit typing derivations for AF2, C2, M2, M and FD2, and a checker.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::{Comprehension, EquationSet, FoTerm, Formula};
use crate::term::{MuTerm, Term};

pub mod build;
mod check;
mod embed;
pub mod library;

pub use check::{check, CheckError, Reason};
pub use embed::{embed_c2_in_m2, EmbedError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum System {
    AF2,
    C2,
    M2,
    /// The propositional part of M2.
    M,
    FD2,
}

impl System {
    pub const ALL: [System; 5] = [System::AF2, System::C2, System::M2, System::M, System::FD2];

    pub fn name(self) -> &'static str {
        match self {
            System::AF2 => "AF2",
            System::C2 => "C2",
            System::M2 => "M2",
            System::M => "M",
            System::FD2 => "FD2",
        }
    }

    pub fn from_name(s: &str) -> Option<System> {
        System::ALL.into_iter().find(|sys| sys.name() == s)
    }

    pub fn allows(self, rule: RuleTag) -> bool {
        use RuleTag::*;
        match rule {
            Ax | ArrIntro | ArrElim | SoGen | SoInst => true,
            FoGen | FoInst | Eq => self != System::M,
            CAxiom => matches!(self, System::C2 | System::M2 | System::M),
            ClassGen | ClassInst => matches!(self, System::M2 | System::M),
            MuNaming => self == System::FD2,
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleTag {
    Ax,
    ArrIntro,
    ArrElim,
    FoGen,
    FoInst,
    SoGen,
    SoInst,
    Eq,
    CAxiom,
    ClassGen,
    ClassInst,
    MuNaming,
}

impl RuleTag {
    pub const ALL: [RuleTag; 12] = [
        RuleTag::Ax,
        RuleTag::ArrIntro,
        RuleTag::ArrElim,
        RuleTag::FoGen,
        RuleTag::FoInst,
        RuleTag::SoGen,
        RuleTag::SoInst,
        RuleTag::Eq,
        RuleTag::CAxiom,
        RuleTag::ClassGen,
        RuleTag::ClassInst,
        RuleTag::MuNaming,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            RuleTag::Ax => "Ax",
            RuleTag::ArrIntro => "ArrIntro",
            RuleTag::ArrElim => "ArrElim",
            RuleTag::FoGen => "FoGen",
            RuleTag::FoInst => "FoInst",
            RuleTag::SoGen => "SoGen",
            RuleTag::SoInst => "SoInst",
            RuleTag::Eq => "Eq",
            RuleTag::CAxiom => "CAxiom",
            RuleTag::ClassGen => "ClassGen",
            RuleTag::ClassInst => "ClassInst",
            RuleTag::MuNaming => "MuNaming",
        }
    }

    pub fn from_tag(s: &str) -> Option<RuleTag> {
        RuleTag::ALL.into_iter().find(|r| r.tag() == s)
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A lambda-C term, or a lambda-mu term in FD2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subject {
    Term(Term),
    Mu(MuTerm),
}

impl Subject {
    pub fn free_vars(&self) -> alloc::collections::BTreeSet<String> {
        match self {
            Subject::Term(t) => t.free_vars(),
            Subject::Mu(t) => t.free_vars(),
        }
    }

    pub fn lam(&self, x: &str) -> Subject {
        match self {
            Subject::Term(t) => Subject::Term(Term::lam(x, t.clone())),
            Subject::Mu(t) => Subject::Mu(MuTerm::lam(x, t.clone())),
        }
    }

    /// `(self)arg`, or `None` when the kinds differ.
    pub fn app(&self, arg: &Subject) -> Option<Subject> {
        match (self, arg) {
            (Subject::Term(f), Subject::Term(a)) => Some(Subject::Term(Term::app(f.clone(), a.clone()))),
            (Subject::Mu(f), Subject::Mu(a)) => Some(Subject::Mu(MuTerm::app(f.clone(), a.clone()))),
            _ => None,
        }
    }

    pub fn as_term(&self) -> Option<&Term> {
        match self {
            Subject::Term(t) => Some(t),
            Subject::Mu(_) => None,
        }
    }

    pub fn as_mu(&self) -> Option<&MuTerm> {
        match self {
            Subject::Mu(t) => Some(t),
            Subject::Term(_) => None,
        }
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Term(t) => write!(f, "{t}"),
            Subject::Mu(t) => write!(f, "{t}"),
        }
    }
}

/// Labelled formulas.
pub type Context = Vec<(String, Formula)>;

/// `Γ ⊢ t : A, Δ`. `Δ` is empty outside FD2 and never mentions `⊥`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequent {
    pub ctx: Context,
    pub subject: Subject,
    pub ty: Formula,
    pub mu_ctx: Context,
}

impl Sequent {
    pub fn new(ctx: Context, subject: Subject, ty: Formula) -> Self {
        Sequent { ctx, subject, ty, mu_ctx: Vec::new() }
    }

    pub fn lookup(&self, x: &str) -> Option<&Formula> {
        lookup(&self.ctx, x)
    }
}

pub(crate) fn lookup<'a>(ctx: &'a Context, x: &str) -> Option<&'a Formula> {
    ctx.iter().find(|(y, _)| y == x).map(|(_, a)| a)
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, a)) in self.ctx.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} : {a}")?;
        }
        if !self.ctx.is_empty() {
            f.write_str(" ")?;
        }
        write!(f, "|- {} : {}", self.subject, self.ty)?;
        for (a, b) in &self.mu_ctx {
            write!(f, ", {a} : {b}")?;
        }
        Ok(())
    }
}

/// Data a rule needs beyond its premises.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// First-order instantiation.
    Term(FoTerm),
    /// Second-order or classical instantiation.
    Formula(Comprehension),
    /// `motive[from/var]` rewritten to `motive[to/var]`, with `from ≈ to`.
    Eq { var: String, motive: Formula, from: FoTerm, to: FoTerm },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub rule: RuleTag,
    pub conclusion: Sequent,
    pub witness: Option<Witness>,
    pub premises: Vec<Node>,
}

impl Node {
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Node::size).sum::<usize>()
    }

    /// The node reached by following premise indices.
    pub fn at(&self, path: &[usize]) -> Option<&Node> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.premises.get(*i)?.at(rest),
        }
    }

    pub fn at_mut(&mut self, path: &[usize]) -> Option<&mut Node> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.premises.get_mut(*i)?.at_mut(rest),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub system: System,
    /// Equations available to the equational rule.
    pub equations: EquationSet,
    pub root: Node,
}

impl Derivation {
    pub fn new(system: System, root: Node) -> Self {
        Derivation { system, equations: EquationSet::default(), root }
    }

    pub fn with_equations(mut self, equations: EquationSet) -> Self {
        self.equations = equations;
        self
    }

    pub fn conclusion(&self) -> &Sequent {
        &self.root.conclusion
    }
}

/// The subject and type proved at the root.
pub fn subject_of(d: &Derivation) -> (Subject, Formula) {
    (d.root.conclusion.subject.clone(), d.root.conclusion.ty.clone())
}
