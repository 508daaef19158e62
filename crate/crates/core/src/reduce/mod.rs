//! Reduction relations with explicit step budgets and traces.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub mod lambda;
pub mod mu;

pub use lambda::{
    beta_normalize, beta_reduce, head_c_reduce, head_c_step, head_reduce, is_c_solvable, stack_reduce, Solvability,
};
pub use mu::{mu_head_equiv, mu_normalize_innermost, mu_reduce, Equivalence};

/// Upper bound on the number of reduction steps an operation may take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    max_steps: usize,
}

impl Budget {
    pub const DEFAULT_STEPS: usize = 100_000;

    /// A budget of `max_steps`, raised to 1 if zero.
    pub fn new(max_steps: usize) -> Self {
        Budget { max_steps: max_steps.max(1) }
    }

    pub fn max_steps(&self) -> usize {
        self.max_steps
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(Self::DEFAULT_STEPS)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `(λx.u)v → u[v/x]`.
    Beta,
    /// `(C)t t₁…tₙ → (t)λx.(x)t₁…tₙ`.
    Control,
    C1,
    C2,
    S1,
    S2,
    S3,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::Beta => "beta",
            Rule::Control => "control",
            Rule::C1 => "C1",
            Rule::C2 => "C2",
            Rule::S1 => "S1",
            Rule::S2 => "S2",
            Rule::S3 => "S3",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// One move from a node to a child.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    /// Body of an abstraction (lambda or mu).
    Body,
    Fun,
    Arg,
}

/// Position of a redex, from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Path(pub Vec<Dir>);

impl Path {
    pub fn root() -> Self {
        Path(Vec::new())
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            f.write_str(match d {
                Dir::Body => "body",
                Dir::Fun => "fun",
                Dir::Arg => "arg",
            })?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step<T> {
    pub rule: Rule,
    pub path: Path,
    pub term: T,
}

/// A finished reduction sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace<T> {
    pub initial: T,
    pub steps: Vec<Step<T>>,
}

impl<T> Trace<T> {
    pub fn new(initial: T) -> Self {
        Trace { initial, steps: Vec::new() }
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    /// The last term of the sequence.
    pub fn result(&self) -> &T {
        self.steps.last().map_or(&self.initial, |s| &s.term)
    }

    /// All terms of the sequence, initial first.
    pub fn terms(&self) -> impl Iterator<Item = &T> {
        core::iter::once(&self.initial).chain(self.steps.iter().map(|s| &s.term))
    }

    pub fn into_result(mut self) -> T {
        match self.steps.pop() {
            Some(s) => s.term,
            None => self.initial,
        }
    }
}

impl<T: fmt::Display> fmt::Display for Trace<T> {
    /// One line per step: `step <k>: <rule> @ <path> => <term>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.steps.iter().enumerate() {
            writeln!(f, "step {}: {} @ {} => {}", k + 1, s.rule, s.path, s.term)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReduceError {
    #[error("budget of {0} steps exhausted")]
    Exhausted(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// Runs `step` until it yields nothing, recording every step.
pub(crate) fn drive<T: Clone>(
    initial: T,
    budget: Budget,
    mut step: impl FnMut(&T) -> Option<(Rule, Path, T)>,
) -> Result<Trace<T>, ReduceError> {
    let mut trace = Trace::new(initial);
    loop {
        let next = step(trace.result());
        match next {
            None => return Ok(trace),
            Some(_) if trace.steps.len() >= budget.max_steps() => {
                return Err(ReduceError::Exhausted(budget.max_steps()))
            }
            Some((rule, path, term)) => trace.steps.push(Step { rule, path, term }),
        }
    }
}
