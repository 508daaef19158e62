//! Derivation files.
//!
//! ```text
//! (derivation (system C2) (equations "p(0) = 0" ...)
//!   (rule ArrIntro (ctx (x "A") ...) (mu-ctx (a "B") ...) (term "\x. x") (type "A -> A")
//!     (witness (term "s(0)"))
//!     (premises (rule ...) ...)))
//! ```
//!
//! `mu-term` replaces `term` for lambda-mu subjects. Witnesses are
//! `(term "t")`, `(formula "\u. A")` or `(eq x "motive" "from" "to")`.

use mixlogic::derivation::{Context, Derivation, Node, RuleTag, Sequent, Subject, System, Witness};
use mixlogic::formula::syntax::{parse_comprehension, parse_equation, parse_fo_term, parse_formula};
use mixlogic::formula::EquationSet;
use mixlogic::{parse_mu_term, parse_term, ParseError};

use crate::sexp::{parse_all, Pos, Sexp};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: {message}")]
pub struct FileError {
    pub pos: Pos,
    pub message: String,
}

fn err<T>(pos: Pos, message: impl Into<String>) -> Result<T, FileError> {
    Err(FileError { pos, message: message.into() })
}

/// Moves a position inside a string literal to file coordinates.
fn shift(at: Pos, e: ParseError) -> FileError {
    let pos = if e.line <= 1 {
        Pos { line: at.line, column: at.column + e.column.saturating_sub(1) }
    } else {
        Pos { line: at.line + e.line - 1, column: e.column }
    };
    FileError { pos, message: e.message }
}

fn string(e: &Sexp) -> Result<(&str, Pos), FileError> {
    match e {
        Sexp::Str(s, p) => Ok((s, *p)),
        other => err(other.pos(), "expected a string"),
    }
}

fn atom(e: &Sexp) -> Result<&str, FileError> {
    match e {
        Sexp::Atom(s, _) => Ok(s),
        Sexp::Str(s, _) => Ok(s),
        other => err(other.pos(), "expected a name"),
    }
}

fn with<T>(e: &Sexp, f: impl Fn(&str) -> Result<T, ParseError>) -> Result<T, FileError> {
    let (s, p) = string(e)?;
    f(s).map_err(|x| shift(p, x))
}

fn form<'a>(e: &'a Sexp, head: &str) -> Result<&'a [Sexp], FileError> {
    match e.as_form() {
        Some((h, rest)) if h == head => Ok(rest),
        _ => err(e.pos(), format!("expected `({head} ...)`")),
    }
}

fn single<'a>(e: &'a Sexp, head: &str) -> Result<&'a Sexp, FileError> {
    match form(e, head)? {
        [x] => Ok(x),
        _ => err(e.pos(), format!("`{head}` takes one argument")),
    }
}

fn context(items: &[Sexp]) -> Result<Context, FileError> {
    items
        .iter()
        .map(|b| match b {
            Sexp::List(xs, p) => match xs.as_slice() {
                [x, a] => Ok((atom(x)?.to_string(), with(a, parse_formula)?)),
                _ => err(*p, "binding must be `(name \"formula\")`"),
            },
            other => err(other.pos(), "binding must be `(name \"formula\")`"),
        })
        .collect()
}

fn witness(e: &Sexp) -> Result<Witness, FileError> {
    let inner = single(e, "witness")?;
    match inner.as_form() {
        Some(("term", [t])) => Ok(Witness::Term(with(t, parse_fo_term)?)),
        Some(("formula", [g])) => Ok(Witness::Formula(with(g, parse_comprehension)?)),
        Some(("eq", [x, m, a, b])) => Ok(Witness::Eq {
            var: atom(x)?.to_string(),
            motive: with(m, parse_formula)?,
            from: with(a, parse_fo_term)?,
            to: with(b, parse_fo_term)?,
        }),
        _ => err(inner.pos(), "witness must be `(term ..)`, `(formula ..)` or `(eq x ..)`"),
    }
}

fn node(e: &Sexp) -> Result<Node, FileError> {
    let items = form(e, "rule")?;
    let Some((tag, fields)) = items.split_first() else {
        return err(e.pos(), "missing rule tag");
    };
    let rule = RuleTag::from_tag(atom(tag)?).ok_or_else(|| FileError {
        pos: tag.pos(),
        message: format!("unknown rule `{}`", atom(tag).unwrap_or("?")),
    })?;
    let (mut ctx, mut mu_ctx, mut subject, mut ty, mut wit, mut premises) =
        (Vec::new(), Vec::new(), None, None, None, Vec::new());
    for f in fields {
        match f.as_form() {
            Some(("ctx", xs)) => ctx = context(xs)?,
            Some(("mu-ctx", xs)) => mu_ctx = context(xs)?,
            Some(("term", [t])) => subject = Some(Subject::Term(with(t, parse_term)?)),
            Some(("mu-term", [t])) => subject = Some(Subject::Mu(with(t, parse_mu_term)?)),
            Some(("type", [a])) => ty = Some(with(a, parse_formula)?),
            Some(("witness", _)) => wit = Some(witness(f)?),
            Some(("premises", ps)) => premises = ps.iter().map(node).collect::<Result<_, _>>()?,
            _ => return err(f.pos(), "unexpected field"),
        }
    }
    let Some(subject) = subject else { return err(e.pos(), "missing `term`") };
    let Some(ty) = ty else { return err(e.pos(), "missing `type`") };
    Ok(Node { rule, conclusion: Sequent { ctx, subject, ty, mu_ctx }, witness: wit, premises })
}

/// Reads the single `(derivation ...)` form in `src`.
pub fn read_derivation(src: &str) -> Result<Derivation, FileError> {
    let forms = parse_all(src).map_err(|e| FileError { pos: e.pos, message: e.message })?;
    let [top] = forms.as_slice() else {
        return err(Pos { line: 1, column: 1 }, "expected exactly one `(derivation ...)` form");
    };
    let (mut system, mut equations, mut root) = (None, Vec::new(), None);
    for f in form(top, "derivation")? {
        match f.as_form() {
            Some(("system", [s])) => {
                let name = atom(s)?;
                system = Some(System::from_name(name).ok_or_else(|| FileError {
                    pos: s.pos(),
                    message: format!("unknown system `{name}`"),
                })?);
            }
            Some(("equations", es)) => {
                equations = es.iter().map(|e| with(e, parse_equation)).collect::<Result<_, _>>()?;
            }
            Some(("rule", _)) if root.is_none() => root = Some(node(f)?),
            _ => return err(f.pos(), "unexpected field"),
        }
    }
    let Some(system) = system else { return err(top.pos(), "missing `system`") };
    let Some(root) = root else { return err(top.pos(), "missing root `rule`") };
    Ok(Derivation { system, equations: EquationSet::new(equations), root })
}

fn context_sexp(head: &str, ctx: &Context) -> Sexp {
    Sexp::form(head, ctx.iter().map(|(x, a)| Sexp::list(vec![Sexp::atom(x), Sexp::string(a.to_string())])))
}

fn node_sexp(n: &Node) -> Sexp {
    let s = &n.conclusion;
    let mut items = vec![Sexp::atom("rule"), Sexp::atom(n.rule.tag())];
    if !s.ctx.is_empty() {
        items.push(context_sexp("ctx", &s.ctx));
    }
    if !s.mu_ctx.is_empty() {
        items.push(context_sexp("mu-ctx", &s.mu_ctx));
    }
    items.push(match &s.subject {
        Subject::Term(t) => Sexp::form("term", [Sexp::string(t.to_string())]),
        Subject::Mu(t) => Sexp::form("mu-term", [Sexp::string(t.to_string())]),
    });
    items.push(Sexp::form("type", [Sexp::string(s.ty.to_string())]));
    if let Some(w) = &n.witness {
        let inner = match w {
            Witness::Term(t) => Sexp::form("term", [Sexp::string(t.to_string())]),
            Witness::Formula(g) => Sexp::form("formula", [Sexp::string(g.to_string())]),
            Witness::Eq { var, motive, from, to } => Sexp::form(
                "eq",
                [
                    Sexp::atom(var),
                    Sexp::string(motive.to_string()),
                    Sexp::string(from.to_string()),
                    Sexp::string(to.to_string()),
                ],
            ),
        };
        items.push(Sexp::form("witness", [inner]));
    }
    items.push(Sexp::form("premises", n.premises.iter().map(node_sexp)));
    Sexp::list(items)
}

pub fn write_derivation(d: &Derivation) -> String {
    let mut items = vec![Sexp::form("system", [Sexp::atom(d.system.name())])];
    if !d.equations.is_empty() {
        let eqs = d.equations.equations.iter().map(|(l, r)| Sexp::string(format!("{l} = {r}")));
        items.push(Sexp::form("equations", eqs));
    }
    items.push(node_sexp(&d.root));
    format!("{}\n", Sexp::form("derivation", items))
}
