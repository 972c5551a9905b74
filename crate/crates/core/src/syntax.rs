//! Concrete syntax: parsing, printing, context filling and JSON export.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! term  := ('λ' | '\') ident+ '.' term  |  atom+ [lambda]
//! atom  := ident | hole | '(' term ')'
//! hole  := ('ξ' | '?') digits?
//! ident := letter (letter | digit | '_' | '\'')*
//! ```
//!
//! Application associates to the left. A bare `ξ` is hole 0.

use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;

use crate::term::{bind_free, HoleId, Name, Term, TermKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at column {column}: {message}")]
pub struct ParseError {
    /// 1-based character column.
    pub column: usize,
    pub message: String,
}

pub fn parse(text: &str) -> Result<Term, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut p = Parser { chars, pos: 0 };
    let t = p.term()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected `{}`", p.chars[p.pos])));
    }
    Ok(t)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

fn is_ident_start(c: char) -> bool {
    (c.is_alphabetic() && c != 'λ' && c != 'ξ') || c == '_'
}

fn is_ident_char(c: char) -> bool {
    is_ident_start(c) || c.is_ascii_digit() || c == '\''
}

impl Parser {
    fn error(&self, message: String) -> ParseError {
        ParseError { column: self.pos + 1, message }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some('λ') | Some('\\') => self.lambda(),
            Some(_) => self.application(),
            None => Err(self.error("expected a term".into())),
        }
    }

    fn lambda(&mut self) -> Result<Term, ParseError> {
        self.pos += 1;
        let mut names = Vec::new();
        loop {
            match self.peek() {
                Some('.') if !names.is_empty() => {
                    self.pos += 1;
                    break;
                }
                Some(c) if is_ident_start(c) => names.push(self.ident()),
                Some(c) => return Err(self.error(format!("expected binder name or `.`, found `{c}`"))),
                None => return Err(self.error("unterminated abstraction".into())),
            }
        }
        let mut body = self.term()?;
        for name in names.iter().rev() {
            body = Term::lam(name, bind_free(&body, name, 0));
        }
        Ok(body)
    }

    fn application(&mut self) -> Result<Term, ParseError> {
        let mut acc: Option<Term> = None;
        loop {
            let (arg, last) = match self.peek() {
                // an unparenthesised abstraction extends to the end
                Some('λ') | Some('\\') => (self.lambda()?, true),
                Some(c) if c == '(' || c == 'ξ' || c == '?' || is_ident_start(c) => (self.atom()?, false),
                _ => break,
            };
            acc = Some(match acc {
                None => arg,
                Some(f) => Term::app(f, arg),
            });
            if last {
                break;
            }
        }
        acc.ok_or_else(|| match self.peek() {
            Some(c) => self.error(format!("unexpected `{c}`")),
            None => self.error("expected a term".into()),
        })
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let t = self.term()?;
                match self.peek() {
                    Some(')') => {
                        self.pos += 1;
                        Ok(t)
                    }
                    _ => Err(self.error("expected `)`".into())),
                }
            }
            Some('ξ') | Some('?') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                let id: HoleId = if digits.is_empty() {
                    0
                } else {
                    digits.parse().map_err(|_| self.error("hole index out of range".into()))?
                };
                Ok(Term::hole(id))
            }
            Some(c) if is_ident_start(c) => {
                let name = self.ident();
                Ok(Term::free(&name))
            }
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
            None => Err(self.error("expected a term".into())),
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && is_ident_char(self.chars[self.pos]) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }
}

/// Binder names as they are printed: the hint unless it would capture a free
/// name of the body or shadow an outer binder the body refers to.
pub(crate) fn choose_name(hint: &str, body: &Term, scope: &[Name]) -> Name {
    let base: &str = if is_valid_ident(hint) { hint } else { "x" };
    let free = body.free_names();
    let outer: Vec<&Name> = body
        .loose_indices()
        .into_iter()
        .filter(|k| *k >= 1 && (*k as usize) <= scope.len())
        .map(|k| &scope[scope.len() - k as usize])
        .collect();
    let clashes = |c: &str| free.iter().any(|n| &**n == c) || outer.iter().any(|n| &***n == c);
    if !clashes(base) {
        return Arc::from(base);
    }
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "x" } else { stem };
    (1u32..)
        .map(|i| format!("{stem}{i}"))
        .find(|c| !clashes(c))
        .map(|c| Arc::from(c.as_str()))
        .expect("fresh name")
}

fn is_valid_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if is_ident_start(c)) && cs.all(is_ident_char)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    Top,
    Fun,
    Arg { tail: bool },
}

fn write_term(t: &Term, scope: &mut Vec<Name>, ctx: Ctx, out: &mut String) {
    match t.kind() {
        TermKind::Var(i) => {
            let i = *i as usize;
            if i < scope.len() {
                out.push_str(&scope[scope.len() - 1 - i]);
            } else {
                // loose index: only for internal debugging output
                out.push_str(&format!("#{i}"));
            }
        }
        TermKind::Free(n) => out.push_str(n),
        TermKind::Hole(0) => out.push('ξ'),
        TermKind::Hole(h) => {
            out.push('ξ');
            out.push_str(&h.to_string());
        }
        TermKind::Lam(hint, body) => {
            let parens = matches!(ctx, Ctx::Fun | Ctx::Arg { tail: false });
            if parens {
                out.push('(');
            }
            let name = choose_name(hint, body, scope);
            out.push('λ');
            out.push_str(&name);
            out.push('.');
            scope.push(name);
            write_term(body, scope, Ctx::Top, out);
            scope.pop();
            if parens {
                out.push(')');
            }
        }
        TermKind::App(f, a) => {
            let parens = matches!(ctx, Ctx::Arg { .. });
            if parens {
                out.push('(');
            }
            write_term(f, scope, Ctx::Fun, out);
            out.push(' ');
            let tail = parens || ctx == Ctx::Top;
            write_term(a, scope, Ctx::Arg { tail }, out);
            if parens {
                out.push(')');
            }
        }
    }
}

/// Prints with `λ` and minimal parentheses; `parse(&print(t)) == t`.
pub fn print(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &mut Vec::new(), Ctx::Top, &mut out);
    out
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

/// Textual replacement of hole `id` by `s`, capture permitted: free names of
/// `s` that coincide with the printed name of an enclosing binder of the hole
/// become bound by it.
pub fn fill_context(c: &Term, id: HoleId, s: &Term) -> Term {
    fn go(t: &Term, id: HoleId, s: &Term, scope: &mut Vec<Name>) -> Term {
        if !t.has_holes() {
            return t.clone();
        }
        match t.kind() {
            TermKind::Hole(h) if *h == id => capture(s, scope),
            TermKind::Lam(hint, body) => {
                let name = choose_name(hint, body, scope);
                scope.push(name.clone());
                let b = go(body, id, s, scope);
                scope.pop();
                // keep the printed name so the filled term prints as the text did
                Term::lam_named(name, b)
            }
            TermKind::App(f, a) => Term::app(go(f, id, s, scope), go(a, id, s, scope)),
            _ => t.clone(),
        }
    }
    go(c, id, s, &mut Vec::new())
}

/// Fills several holes at once.
pub fn fill_all(c: &Term, fills: &[(HoleId, Term)]) -> Term {
    fills.iter().fold(c.clone(), |acc, (id, s)| fill_context(&acc, *id, s))
}

fn capture(s: &Term, scope: &[Name]) -> Term {
    fn go(t: &Term, depth: u32, scope: &[Name]) -> Term {
        match t.kind() {
            TermKind::Free(n) => match scope.iter().rposition(|m| m == n) {
                Some(j) => Term::var(depth + (scope.len() - 1 - j) as u32),
                None => t.clone(),
            },
            // loose indices of s point past the hole's binders
            TermKind::Var(i) if *i >= depth => Term::var(i + scope.len() as u32),
            TermKind::Lam(h, b) => Term::lam_named(h.clone(), go(b, depth + 1, scope)),
            TermKind::App(f, a) => Term::app(go(f, depth, scope), go(a, depth, scope)),
            _ => t.clone(),
        }
    }
    if scope.is_empty() {
        return s.clone();
    }
    go(s, 0, scope)
}

/// JSON tree: `{"kind": ..., "children": [...]}` plus `name`, `index` or `id`.
pub fn to_json(t: &Term) -> Value {
    fn go(t: &Term, scope: &mut Vec<Name>) -> Value {
        match t.kind() {
            TermKind::Var(i) => {
                let name = scope.len().checked_sub(1 + *i as usize).map(|j| scope[j].to_string());
                json!({"kind": "var", "index": i, "name": name, "children": []})
            }
            TermKind::Free(n) => json!({"kind": "free", "name": &**n, "children": []}),
            TermKind::Hole(h) => json!({"kind": "hole", "id": h, "children": []}),
            TermKind::Lam(hint, body) => {
                let name = choose_name(hint, body, scope);
                scope.push(name.clone());
                let b = go(body, scope);
                scope.pop();
                json!({"kind": "lam", "name": &*name, "children": [b]})
            }
            TermKind::App(f, a) => json!({"kind": "app", "children": [go(f, scope), go(a, scope)]}),
        }
    }
    go(t, &mut Vec::new())
}
