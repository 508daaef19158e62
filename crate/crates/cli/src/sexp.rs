//! S-expressions with source positions, for derivation files.
//!
//! Atoms are runs of characters other than whitespace, parentheses and
//! `"`. Strings use `"` with `\"` and `\\` escapes. `;` starts a comment.

use std::fmt::{self, Write as _};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Sexp {
    Atom(String, Pos),
    /// Contents and the position of the first character after the quote.
    Str(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::Str(_, p) | Sexp::List(_, p) => *p,
        }
    }

    pub fn atom(s: &str) -> Sexp {
        Sexp::Atom(s.into(), Pos::default())
    }

    pub fn string(s: impl Into<String>) -> Sexp {
        Sexp::Str(s.into(), Pos::default())
    }

    pub fn list(items: Vec<Sexp>) -> Sexp {
        Sexp::List(items, Pos::default())
    }

    /// `(head args…)`.
    pub fn form(head: &str, args: impl IntoIterator<Item = Sexp>) -> Sexp {
        let mut items = vec![Sexp::atom(head)];
        items.extend(args);
        Sexp::list(items)
    }

    /// The head atom and the remaining items of a list.
    pub fn as_form(&self) -> Option<(&str, &[Sexp])> {
        match self {
            Sexp::List(items, _) => match items.split_first()? {
                (Sexp::Atom(h, _), rest) => Some((h.as_str(), rest)),
                _ => None,
            },
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{pos}: {message}")]
pub struct SexpError {
    pub pos: Pos,
    pub message: String,
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl Reader<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn skip(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while !matches!(self.chars.peek(), None | Some('\n')) {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn err<T>(&self, pos: Pos, message: &str) -> Result<T, SexpError> {
        Err(SexpError { pos, message: message.into() })
    }

    fn read(&mut self) -> Result<Sexp, SexpError> {
        self.skip();
        let start = self.pos;
        match self.chars.peek().copied() {
            None => self.err(start, "unexpected end of input"),
            Some(')') => self.err(start, "unexpected `)`"),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip();
                    match self.chars.peek() {
                        None => return self.err(start, "unclosed `(`"),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List(items, start));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some('"') => {
                self.bump();
                let inner = self.pos;
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return self.err(start, "unterminated string"),
                        Some('"') => return Ok(Sexp::Str(s, inner)),
                        // other backslashes are literal, so `"\x. x"` reads as written
                        Some('\\') => match self.chars.peek().copied() {
                            Some(c @ ('"' | '\\')) => {
                                self.bump();
                                s.push(c);
                            }
                            Some('n') => {
                                self.bump();
                                s.push('\n');
                            }
                            _ => s.push('\\'),
                        },
                        Some(c) => s.push(c),
                    }
                }
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';') {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(Sexp::Atom(s, start))
            }
        }
    }
}

/// Every top-level expression of `src`.
pub fn parse_all(src: &str) -> Result<Vec<Sexp>, SexpError> {
    let mut r = Reader { chars: src.chars().peekable(), pos: Pos { line: 1, column: 1 } };
    let mut out = Vec::new();
    loop {
        r.skip();
        if r.chars.peek().is_none() {
            return Ok(out);
        }
        out.push(r.read()?);
    }
}

fn quote(s: &str, out: &mut String) {
    out.push('"');
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' if matches!(chars.peek(), None | Some('"' | '\\' | 'n')) => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
}

fn flat(e: &Sexp, out: &mut String) {
    match e {
        Sexp::Atom(a, _) => out.push_str(a),
        Sexp::Str(s, _) => quote(s, out),
        Sexp::List(items, _) => {
            out.push('(');
            for (i, it) in items.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                flat(it, out);
            }
            out.push(')');
        }
    }
}

/// Short lists go on one line. Longer ones keep the head and any atoms
/// right after it on the first line and put each remaining item on its own
/// indented line.
fn pretty(e: &Sexp, indent: usize, out: &mut String) {
    let mut one = String::new();
    flat(e, &mut one);
    let Sexp::List(items, _) = e else {
        out.push_str(&one);
        return;
    };
    if one.len() + indent <= 100 || items.len() < 2 {
        out.push_str(&one);
        return;
    }
    out.push('(');
    flat(&items[0], out);
    let inline = items.iter().skip(1).take_while(|it| matches!(it, Sexp::Atom(..))).count();
    for it in &items[1..=inline] {
        out.push(' ');
        flat(it, out);
    }
    for it in &items[1 + inline..] {
        let _ = write!(out, "\n{:width$}", "", width = indent + 2);
        pretty(it, indent + 2, out);
    }
    out.push(')');
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        pretty(self, 0, &mut s);
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists_with_positions() {
        let src = "; header\n(a (b \"x \\\"y\\\"\")\n  c)";
        let es = parse_all(src).unwrap();
        assert_eq!(es.len(), 1);
        let (head, rest) = es[0].as_form().unwrap();
        assert_eq!(head, "a");
        assert_eq!(rest[1], Sexp::Atom("c".into(), Pos { line: 3, column: 3 }));
        let (_, inner) = rest[0].as_form().unwrap();
        assert_eq!(inner[0], Sexp::Str("x \"y\"".into(), Pos { line: 2, column: 8 }));
    }

    #[test]
    fn reports_errors_with_positions() {
        let e = parse_all("(a\n  (b").unwrap_err();
        assert_eq!(e.pos, Pos { line: 2, column: 3 });
        assert!(parse_all(")").is_err());
        assert!(parse_all("\"abc").is_err());
    }

    #[test]
    fn backslashes_are_literal_unless_escaping() {
        let e = parse_all(r#"("\x. x" "a\"b" "c\\")"#).unwrap().remove(0);
        let Sexp::List(items, _) = &e else { panic!() };
        assert_eq!(items[0], Sexp::Str(r"\x. x".into(), Pos { line: 1, column: 3 }));
        assert!(matches!(&items[1], Sexp::Str(s, _) if s == "a\"b"));
        assert!(matches!(&items[2], Sexp::Str(s, _) if s == "c\\"));
        let printed = e.to_string();
        assert_eq!(printed, r#"("\x. x" "a\"b" "c\\")"#);
    }

    #[test]
    fn printing_round_trips() {
        let src = "(rule Ax (ctx (x \"X(0)\")) (term \"x\") (type \"X(0)\") (premises))";
        let e = parse_all(src).unwrap().remove(0);
        let printed = e.to_string();
        assert_eq!(printed, src);
        let back = parse_all(&printed).unwrap().remove(0);
        assert_eq!(back.to_string(), printed);
    }
}
