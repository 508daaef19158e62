//! Surface syntax for terms.
//!
//! ```text
//! t ::= \x y. t | mu a.[b] t | t t | (t) | x | C | #p
//! ```
//! `λ` and `μ` are accepted for `\` and `mu`. Application is left
//! associative and a trailing abstraction extends as far right as possible.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{MuName, MuTerm, Term};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Shared cursor over UTF-8 input with line and column tracking.
pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub(crate) fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub(crate) fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub(crate) fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('-') if self.rest().starts_with("--") => {
                    while !matches!(self.peek(), None | Some('\n')) {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }

    pub(crate) fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.error(alloc::format!("expected `{s}`")))
        }
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> ParseError {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        ParseError { line, column, message: message.into() }
    }

    /// Identifier: a letter or `_`, then letters, digits, `_`, `'`.
    pub(crate) fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let rest = self.rest();
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_alphabetic() && c != 'λ' && c != 'μ' || c == '_' => {}
            _ => return None,
        }
        let end = chars
            .find(|(_, c)| !(c.is_alphanumeric() || *c == '_' || *c == '\''))
            .map_or(rest.len(), |(i, _)| i);
        self.pos += end;
        Some(rest[..end].to_string())
    }

    pub(crate) fn expect_ident(&mut self, what: &str) -> Result<String, ParseError> {
        self.ident().ok_or_else(|| self.error(alloc::format!("expected {what}")))
    }
}

/// Surface tree shared by both term languages.
enum Raw {
    Var(String),
    Control,
    Stack(String),
    Lam(String, Box<Raw>),
    App(Box<Raw>, Box<Raw>),
    Mu(String, String, Box<Raw>),
}

struct RawParser<'a> {
    cur: Cursor<'a>,
}

impl RawParser<'_> {
    fn term(&mut self) -> Result<Raw, ParseError> {
        let mut head: Option<Raw> = None;
        loop {
            self.cur.skip_ws();
            let arg = match self.cur.peek() {
                Some('\\') | Some('λ') => {
                    let t = self.abstraction()?;
                    head = Some(match head {
                        Some(h) => Raw::App(Box::new(h), Box::new(t)),
                        None => t,
                    });
                    return Ok(head.unwrap());
                }
                Some('μ') => {
                    self.cur.bump();
                    let t = self.mu_rest()?;
                    return Ok(match head {
                        Some(h) => Raw::App(Box::new(h), Box::new(t)),
                        None => t,
                    });
                }
                Some('(') => {
                    self.cur.bump();
                    let t = self.term()?;
                    self.cur.expect(")")?;
                    t
                }
                Some('#') => {
                    self.cur.bump();
                    Raw::Stack(self.cur.expect_ident("stack constant name")?)
                }
                Some(_) => {
                    let save = self.cur.pos;
                    match self.cur.ident() {
                        Some(id) if id == "mu" => {
                            let t = self.mu_rest()?;
                            return Ok(match head {
                                Some(h) => Raw::App(Box::new(h), Box::new(t)),
                                None => t,
                            });
                        }
                        Some(id) if id == "C" => Raw::Control,
                        Some(id) => Raw::Var(id),
                        None => {
                            self.cur.pos = save;
                            break;
                        }
                    }
                }
                None => break,
            };
            head = Some(match head {
                Some(h) => Raw::App(Box::new(h), Box::new(arg)),
                None => arg,
            });
        }
        head.ok_or_else(|| self.cur.error("expected a term"))
    }

    fn abstraction(&mut self) -> Result<Raw, ParseError> {
        self.cur.bump();
        let mut names = Vec::new();
        while let Some(x) = self.cur.ident() {
            if x == "C" || x == "mu" {
                return Err(self.cur.error(alloc::format!("`{x}` cannot be bound")));
            }
            names.push(x);
        }
        if names.is_empty() {
            return Err(self.cur.error("expected a binder name"));
        }
        self.cur.expect(".")?;
        let body = self.term()?;
        Ok(names.into_iter().rev().fold(body, |b, x| Raw::Lam(x, Box::new(b))))
    }

    fn mu_rest(&mut self) -> Result<Raw, ParseError> {
        let a = self.cur.expect_ident("mu-variable")?;
        self.cur.expect(".")?;
        self.cur.expect("[")?;
        let b = self.cur.expect_ident("mu-variable")?;
        self.cur.expect("]")?;
        let body = self.term()?;
        Ok(Raw::Mu(a, b, Box::new(body)))
    }
}

fn parse_raw(src: &str) -> Result<Raw, ParseError> {
    let mut p = RawParser { cur: Cursor::new(src) };
    let t = p.term()?;
    if !p.cur.at_end() {
        return Err(p.cur.error("unexpected input after term"));
    }
    Ok(t)
}

fn raw_to_term(r: Raw) -> Result<Term, String> {
    Ok(match r {
        Raw::Var(x) => Term::Free(x),
        Raw::Control => Term::Control,
        Raw::Stack(p) => Term::Stack(p),
        Raw::Lam(x, b) => Term::lam(&x, raw_to_term(*b)?),
        Raw::App(f, a) => Term::app(raw_to_term(*f)?, raw_to_term(*a)?),
        Raw::Mu(..) => return Err("mu-abstraction is not a lambda-C term".into()),
    })
}

fn raw_to_mu(r: Raw) -> Result<MuTerm, String> {
    Ok(match r {
        Raw::Var(x) => MuTerm::Free(x),
        Raw::Control => return Err("`C` is not a lambda-mu term".into()),
        Raw::Stack(_) => return Err("stack constants are not lambda-mu terms".into()),
        Raw::Lam(x, b) => MuTerm::lam(&x, raw_to_mu(*b)?),
        Raw::App(f, a) => MuTerm::app(raw_to_mu(*f)?, raw_to_mu(*a)?),
        Raw::Mu(a, b, body) => MuTerm::mu(&a, &b, raw_to_mu(*body)?),
    })
}

/// Parses a lambda-C term (stack constants allowed).
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let raw = parse_raw(src)?;
    raw_to_term(raw).map_err(|m| ParseError { line: 1, column: 1, message: m })
}

/// Parses a lambda-mu term.
pub fn parse_mu_term(src: &str) -> Result<MuTerm, ParseError> {
    let raw = parse_raw(src)?;
    raw_to_mu(raw).map_err(|m| ParseError { line: 1, column: 1, message: m })
}

impl core::str::FromStr for Term {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s)
    }
}

impl core::str::FromStr for MuTerm {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_mu_term(s)
    }
}

fn pick(hint: &str, taken: &BTreeSet<String>, scope: &[String]) -> String {
    let base = if hint.is_empty() || hint == "C" || hint == "mu" { "v" } else { hint };
    let clash = |s: &str| taken.contains(s) || scope.iter().any(|n| n == s);
    if !clash(base) {
        return base.to_string();
    }
    (1..).map(|k| alloc::format!("{base}{k}")).find(|c| !clash(c)).unwrap()
}

#[derive(Clone, Copy, PartialEq)]
enum Pos {
    Top,
    Fun,
    Arg,
}

fn write_term(t: &Term, f: &mut fmt::Formatter<'_>, free: &BTreeSet<String>, scope: &mut Vec<String>, pos: Pos) -> fmt::Result {
    match t {
        Term::Bound(i) => match scope.len().checked_sub(i + 1) {
            Some(k) => f.write_str(&scope[k]),
            None => write!(f, "?{i}"),
        },
        Term::Free(x) => f.write_str(x),
        Term::Control => f.write_str("C"),
        Term::Stack(p) => write!(f, "#{p}"),
        Term::Lam(h, b) => {
            if pos != Pos::Top {
                f.write_str("(")?;
            }
            let name = pick(h, free, scope);
            write!(f, "\\{name}. ")?;
            scope.push(name);
            write_term(b, f, free, scope, Pos::Top)?;
            scope.pop();
            if pos != Pos::Top {
                f.write_str(")")?;
            }
            Ok(())
        }
        Term::App(g, a) => {
            if pos == Pos::Arg {
                f.write_str("(")?;
            }
            write_term(g, f, free, scope, Pos::Fun)?;
            f.write_str(" ")?;
            write_term(a, f, free, scope, Pos::Arg)?;
            if pos == Pos::Arg {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let free = self.free_vars();
        write_term(self, f, &free, &mut Vec::new(), Pos::Top)
    }
}

struct MuScopes {
    lam: Vec<String>,
    mu: Vec<String>,
}

fn write_mu(t: &MuTerm, f: &mut fmt::Formatter<'_>, free: &BTreeSet<String>, sc: &mut MuScopes, pos: Pos) -> fmt::Result {
    match t {
        MuTerm::Bound(i) => match sc.lam.len().checked_sub(i + 1) {
            Some(k) => f.write_str(&sc.lam[k]),
            None => write!(f, "?{i}"),
        },
        MuTerm::Free(x) => f.write_str(x),
        MuTerm::Lam(h, b) => {
            if pos != Pos::Top {
                f.write_str("(")?;
            }
            let name = pick(h, free, &sc.lam);
            write!(f, "\\{name}. ")?;
            sc.lam.push(name);
            write_mu(b, f, free, sc, Pos::Top)?;
            sc.lam.pop();
            if pos != Pos::Top {
                f.write_str(")")?;
            }
            Ok(())
        }
        MuTerm::App(g, a) => {
            if pos == Pos::Arg {
                f.write_str("(")?;
            }
            write_mu(g, f, free, sc, Pos::Fun)?;
            f.write_str(" ")?;
            write_mu(a, f, free, sc, Pos::Arg)?;
            if pos == Pos::Arg {
                f.write_str(")")?;
            }
            Ok(())
        }
        MuTerm::Mu(h, n, b) => {
            if pos != Pos::Top {
                f.write_str("(")?;
            }
            let name = pick(h, free, &sc.mu);
            sc.mu.push(name.clone());
            let target = match n {
                MuName::Bound(j) => match sc.mu.len().checked_sub(j + 1) {
                    Some(k) => sc.mu[k].clone(),
                    None => alloc::format!("?{j}"),
                },
                MuName::Free(x) => x.clone(),
            };
            write!(f, "mu {name}.[{target}] ")?;
            write_mu(b, f, free, sc, Pos::Top)?;
            sc.mu.pop();
            if pos != Pos::Top {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for MuTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut free = self.free_vars();
        free.extend(self.free_mu_vars());
        write_mu(self, f, &free, &mut MuScopes { lam: Vec::new(), mu: Vec::new() }, Pos::Top)
    }
}
