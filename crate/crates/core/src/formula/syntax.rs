//! Surface syntax for formulas.
//!
//! ```text
//! A ::= forall v... . A | forall v... {A} | A, ..., A -> A | ~A | _|_ | P(t, ...) | N[t] | N*[t] | N^C[t] | (A) | {A}
//! t ::= 0 | 3 | x | f(t, ...)
//! ```
//! `∀`, `→`, `¬`, `⊥` are accepted as well. A binder starting with a
//! lowercase letter is first-order. An uppercase binder is second-order and
//! becomes classical with a trailing `c` (`Xc`). Free predicate names made
//! of one uppercase letter plus digits, primes or `*` are variables, other
//! names are constants; `$D` forces a constant.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::library::{nat, nat_classical, nat_star};
use super::{Comprehension, EquationSet, FoTerm, Formula, Pred};
use crate::term::syntax::{Cursor, ParseError};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Fo,
    So,
    Classical,
}

struct Parser<'a> {
    cur: Cursor<'a>,
    scope: Vec<(String, Kind)>,
}

fn is_var_pattern(name: &str) -> bool {
    let mut cs = name.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_uppercase())
        && cs.all(|c| c.is_ascii_digit() || c == '\'' || c == '*')
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { cur: Cursor::new(src), scope: Vec::new() }
    }

    fn finish<T>(mut self, v: T) -> Result<T, ParseError> {
        if self.cur.at_end() {
            Ok(v)
        } else {
            Err(self.cur.error("unexpected input"))
        }
    }

    /// A predicate name with an optional `*` suffix.
    fn pred_name(&mut self) -> Option<String> {
        let mut name = self.cur.ident()?;
        while self.cur.peek() == Some('*') {
            self.cur.bump();
            name.push('*');
            while let Some(c) = self.cur.peek().filter(|c| c.is_ascii_digit() || *c == '\'') {
                self.cur.bump();
                name.push(c);
            }
            // `X*c`
            if self.cur.rest().starts_with('c')
                && !self.cur.rest()[1..].starts_with(|c: char| c.is_alphanumeric() || c == '_')
            {
                self.cur.bump();
                name.push('c');
            }
        }
        Some(name)
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut premises = alloc::vec![self.unary()?];
        while self.cur.eat(",") {
            premises.push(self.unary()?);
        }
        if self.cur.eat("->") || self.cur.eat("→") {
            let rest = self.formula()?;
            return Ok(Formula::arrows(premises, rest));
        }
        if premises.len() > 1 {
            return Err(self.cur.error("expected `->` after premise list"));
        }
        Ok(premises.pop().unwrap())
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        self.cur.skip_ws();
        if self.cur.eat("~") || self.cur.eat("¬") {
            return Ok(Formula::not(self.unary()?));
        }
        if self.cur.eat("_|_") || self.cur.eat("⊥") {
            return Ok(Formula::Bottom);
        }
        if self.cur.eat("(") {
            let a = self.formula()?;
            self.cur.expect(")")?;
            return Ok(a);
        }
        if self.cur.eat("{") {
            let a = self.formula()?;
            self.cur.expect("}")?;
            return Ok(a);
        }
        if self.cur.eat("∀") || self.eat_keyword("forall") {
            return self.quantifier();
        }
        if self.cur.eat("$") {
            let name = self.pred_name().ok_or_else(|| self.cur.error("expected predicate name"))?;
            let args = self.atom_args()?;
            return Ok(Formula::Atom(Pred::Symbol(name), args));
        }
        let name = self.pred_name().ok_or_else(|| self.cur.error("expected formula"))?;
        if !name.starts_with(|c: char| c.is_uppercase()) {
            return Err(self.cur.error(alloc::format!("`{name}` is not a predicate name")));
        }
        if name == "N" || name == "N*" {
            if self.cur.eat("[") {
                let t = self.fo_term()?;
                self.cur.expect("]")?;
                return Ok(if name == "N" { nat(t) } else { nat_star(t) });
            }
            if name == "N" && self.cur.eat("^C[") {
                let t = self.fo_term()?;
                self.cur.expect("]")?;
                return Ok(nat_classical(t));
            }
        }
        let args = self.atom_args()?;
        Ok(Formula::Atom(self.resolve(&name), args))
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        self.cur.skip_ws();
        let rest = self.cur.rest();
        if rest.starts_with(kw) && !rest[kw.len()..].starts_with(|c: char| c.is_alphanumeric() || c == '_') {
            self.cur.eat(kw)
        } else {
            false
        }
    }

    fn resolve(&self, name: &str) -> Pred {
        for (n, k) in self.scope.iter().rev() {
            match k {
                Kind::So if n == name => return Pred::Var(name.to_string()),
                Kind::Classical if name.strip_suffix('c') == Some(n) => return Pred::Classical(n.clone()),
                _ => {}
            }
        }
        match name.strip_suffix('c') {
            Some(base) if is_var_pattern(base) => Pred::Classical(base.to_string()),
            _ if is_var_pattern(name) => Pred::Var(name.to_string()),
            _ => Pred::Symbol(name.to_string()),
        }
    }

    fn atom_args(&mut self) -> Result<Vec<FoTerm>, ParseError> {
        if self.cur.rest().starts_with('(') && self.cur.eat("(") {
            let args = self.fo_args()?;
            Ok(args)
        } else {
            Ok(Vec::new())
        }
    }

    /// After `(`: terms separated by commas, then `)`.
    fn fo_args(&mut self) -> Result<Vec<FoTerm>, ParseError> {
        let mut args = Vec::new();
        if self.cur.eat(")") {
            return Ok(args);
        }
        loop {
            args.push(self.fo_term()?);
            if self.cur.eat(")") {
                return Ok(args);
            }
            self.cur.expect(",")?;
        }
    }

    fn quantifier(&mut self) -> Result<Formula, ParseError> {
        let mut binders = Vec::new();
        // `forall X {A}` scopes over the bracketed group only
        let mut grouped = false;
        loop {
            self.cur.skip_ws();
            if self.cur.eat(".") {
                break;
            }
            if !binders.is_empty() && self.cur.rest().starts_with(['(', '{']) {
                grouped = true;
                break;
            }
            let name = self.pred_name().ok_or_else(|| self.cur.error("expected binder or `.`"))?;
            let binder = if name.starts_with(|c: char| c.is_uppercase()) {
                match name.strip_suffix('c') {
                    Some(base) if is_var_pattern(base) => (base.to_string(), Kind::Classical),
                    _ => (name, Kind::So),
                }
            } else {
                (name, Kind::Fo)
            };
            binders.push(binder);
        }
        if binders.is_empty() {
            return Err(self.cur.error("quantifier without binder"));
        }
        let depth = self.scope.len();
        self.scope.extend(binders.iter().cloned());
        let body = if grouped { self.unary() } else { self.formula() };
        self.scope.truncate(depth);
        let mut a = body?;
        for (name, kind) in binders.into_iter().rev() {
            a = match kind {
                Kind::Fo => Formula::ForallFo(name, Box::new(a)),
                Kind::So => Formula::ForallSo(name, Box::new(a)),
                Kind::Classical => Formula::ForallClassical(name, Box::new(a)),
            };
        }
        Ok(a)
    }

    fn fo_term(&mut self) -> Result<FoTerm, ParseError> {
        self.cur.skip_ws();
        if self.cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            let digits: String = self.cur.rest().chars().take_while(|c| c.is_ascii_digit()).collect();
            let n: usize = digits.parse().map_err(|_| self.cur.error("numeral too large"))?;
            for _ in 0..digits.len() {
                self.cur.bump();
            }
            return Ok(FoTerm::numeral(n));
        }
        let name = self.cur.ident().ok_or_else(|| self.cur.error("expected first-order term"))?;
        if !name.starts_with(|c: char| c.is_lowercase() || c == '_') {
            return Err(self.cur.error(alloc::format!("`{name}` is not a first-order term")));
        }
        if self.cur.peek() == Some('(') {
            self.cur.bump();
            let args = self.fo_args()?;
            return Ok(FoTerm::App(name, args));
        }
        Ok(FoTerm::Var(name))
    }

    fn comprehension(&mut self) -> Result<Comprehension, ParseError> {
        self.cur.skip_ws();
        if self.cur.eat("\\") || self.cur.eat("λ") {
            let mut params = Vec::new();
            while !self.cur.eat(".") {
                params.push(self.cur.expect_ident("parameter or `.`")?);
            }
            let body = self.formula()?;
            return Ok(Comprehension { params, body });
        }
        Ok(Comprehension::formula(self.formula()?))
    }
}

pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(src);
    let a = p.formula()?;
    p.finish(a)
}

pub fn parse_fo_term(src: &str) -> Result<FoTerm, ParseError> {
    let mut p = Parser::new(src);
    let t = p.fo_term()?;
    p.finish(t)
}

/// `\x y. A`, or a bare formula for a 0-ary comprehension.
pub fn parse_comprehension(src: &str) -> Result<Comprehension, ParseError> {
    let mut p = Parser::new(src);
    let c = p.comprehension()?;
    p.finish(c)
}

/// `l = r`.
pub fn parse_equation(src: &str) -> Result<(FoTerm, FoTerm), ParseError> {
    let mut p = Parser::new(src);
    let l = p.fo_term()?;
    p.cur.expect("=")?;
    let r = p.fo_term()?;
    p.finish((l, r))
}

/// One equation per line; blank lines and `--` comments are skipped.
pub fn parse_equations(src: &str) -> Result<EquationSet, ParseError> {
    let mut p = Parser::new(src);
    let mut eqs = Vec::new();
    while !p.cur.at_end() {
        let l = p.fo_term()?;
        p.cur.expect("=")?;
        let r = p.fo_term()?;
        eqs.push((l, r));
        p.cur.eat(";");
    }
    Ok(EquationSet::new(eqs))
}

impl core::str::FromStr for Formula {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

impl core::str::FromStr for FoTerm {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_fo_term(s)
    }
}

impl fmt::Display for FoTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_numeral() {
            return write!(f, "{n}");
        }
        match self {
            FoTerm::Var(x) => f.write_str(x),
            FoTerm::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pred::Var(x) => f.write_str(x),
            Pred::Classical(x) => write!(f, "{x}c"),
            Pred::Symbol(s) if is_var_pattern(s) || s == "N" => write!(f, "${s}"),
            Pred::Symbol(s) => f.write_str(s),
        }
    }
}

/// `N[t]`, `N*[t]` or `N^C[t]` when `a` is one of the integer types.
fn integer_sugar(a: &Formula) -> Option<(&'static str, FoTerm)> {
    if !matches!(a, Formula::ForallSo(..) | Formula::ForallClassical(..)) || a.size() > 20 {
        return None;
    }
    // the argument is the last unary atom argument
    let mut t = None;
    a.map_fo_terms(&mut |u| {
        t = Some(u.clone());
        u.clone()
    });
    let t = t?;
    [("N", nat as fn(FoTerm) -> Formula), ("N*", nat_star), ("N^C", nat_classical)]
        .into_iter()
        .find(|(_, f)| f(t.clone()).alpha_eq(a))
        .map(|(name, _)| (name, t))
}

fn write_formula(a: &Formula, f: &mut fmt::Formatter<'_>, left_of_arrow: bool) -> fmt::Result {
    if let Some((name, t)) = integer_sugar(a) {
        return write!(f, "{name}[{t}]");
    }
    match a {
        Formula::Bottom => f.write_str("_|_"),
        Formula::Atom(p, args) => {
            write!(f, "{p}")?;
            if !args.is_empty() {
                f.write_str("(")?;
                for (i, t) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str(")")?;
            }
            Ok(())
        }
        Formula::Arrow(l, r) if **r == Formula::Bottom => {
            f.write_str("~")?;
            write_formula(l, f, true)
        }
        Formula::Arrow(l, r) => {
            if left_of_arrow {
                f.write_str("(")?;
            }
            write_formula(l, f, true)?;
            f.write_str(" -> ")?;
            write_formula(r, f, false)?;
            if left_of_arrow {
                f.write_str(")")?;
            }
            Ok(())
        }
        Formula::ForallFo(x, b) | Formula::ForallSo(x, b) | Formula::ForallClassical(x, b) => {
            if left_of_arrow {
                f.write_str("(")?;
            }
            let suffix = if matches!(a, Formula::ForallClassical(..)) { "c" } else { "" };
            write!(f, "forall {x}{suffix}. ")?;
            write_formula(b, f, false)?;
            if left_of_arrow {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f, false)
    }
}

impl fmt::Display for Comprehension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.params.is_empty() {
            return write!(f, "{}", self.body);
        }
        f.write_str("\\")?;
        for p in &self.params {
            write!(f, "{p} ")?;
        }
        write!(f, ". {}", self.body)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn sugar_expands() {
        assert_eq!(p("N[x]"), nat(FoTerm::var("x")));
        assert_eq!(p("N*[0]"), nat_star(FoTerm::zero()));
        assert_eq!(p("N^C[2]"), nat_classical(FoTerm::numeral(2)));
        assert_eq!(p("~A"), Formula::not(Formula::var_atom("A", vec![])));
        assert_eq!(
            p("A, B -> C"),
            Formula::arrows([Formula::var_atom("A", vec![]), Formula::var_atom("B", vec![])], Formula::var_atom("C", vec![]))
        );
    }

    #[test]
    fn quantifier_kinds() {
        let a = p("forall Xc. ~~Xc -> Xc");
        assert_eq!(a, super::super::library::double_negation_classical());
        let b = p("forall x X. X(x) -> X(s(x))");
        assert!(matches!(b, Formula::ForallFo(_, ref body) if matches!(**body, Formula::ForallSo(..))));
        // a long bound name is still a variable
        assert_eq!(p("forall Foo. Foo"), Formula::forall_so("Foo", Formula::var_atom("Foo", vec![])));
        assert_eq!(p("Foo"), Formula::Atom(Pred::Symbol("Foo".into()), vec![]));
        assert_eq!(p("$D(x)"), Formula::Atom(Pred::Symbol("D".into()), vec![FoTerm::var("x")]));
        assert_eq!(p("forall X {~~X -> X}"), p("forall X. ~~X -> X"));
        assert_eq!(p("forall X (X(0)) -> $D"), p("(forall X. X(0)) -> $D"));
    }

    #[test]
    fn round_trips() {
        for s in [
            "forall x. N*[x] -> ~~N[x]",
            "(A -> B) -> C",
            "forall X. (forall y. X(y)) -> X(f(y, 3))",
            "~(A -> B)",
            "forall Xc. _|_ -> Xc",
            "X*(0) -> $D",
            "N^C[s(x)]",
            "N[p(1)]",
        ] {
            let a = p(s);
            let printed = alloc::format!("{a}");
            assert_eq!(p(&printed), a, "{s} printed as {printed}");
        }
        assert_eq!(alloc::format!("{}", p("forall x. N*[x] -> ~~N[x]")), "forall x. N*[x] -> ~~N[x]");
    }

    #[test]
    fn terms_and_equations() {
        assert_eq!(parse_fo_term("3").unwrap(), FoTerm::numeral(3));
        assert_eq!(parse_fo_term("p(s(x))").unwrap(), FoTerm::App("p".into(), vec![FoTerm::succ(FoTerm::var("x"))]));
        let e = parse_equations("-- predecessor\np(0) = 0\np(s(x)) = x\n").unwrap();
        assert_eq!(e, EquationSet::predecessor());
        assert!(parse_equation("p(0) = ").is_err());
    }

    #[test]
    fn comprehensions() {
        let c = parse_comprehension("\\y. ~N[y]").unwrap();
        assert_eq!(c.params, ["y"]);
        assert!(c.apply(&[FoTerm::zero()]).alpha_eq(&Formula::not(nat(FoTerm::zero()))));
        assert_eq!(parse_comprehension("_|_").unwrap(), Comprehension::formula(Formula::Bottom));
    }

    #[test]
    fn errors_have_positions() {
        let e = parse_formula("A ->\n  x").unwrap_err();
        assert_eq!((e.line, e.column), (2, 4));
        assert!(parse_formula("A, B").is_err());
        assert!(parse_formula("forall . A").is_err());
    }
}
