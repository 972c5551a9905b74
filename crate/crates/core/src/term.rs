//! Untyped λ-terms with nameless bound variables.
//!
//! Bound variables are de Bruijn indices; every abstraction keeps the name it
//! was written with as a display hint. Hints never take part in equality or
//! hashing, so `==` on [`Term`] is α-equivalence.
//!
//! Terms are immutable and reference counted, so cloning is cheap and terms can
//! be shared freely between threads. Each node caches its structural hash, its
//! size and the number of loose indices it has, which keeps hashing graph nodes
//! and shifting closed subterms cheap.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// Binder hints and free variable names.
pub type Name = Arc<str>;

/// Identifier of a context hole `ξi`.
pub type HoleId = u32;

#[derive(Clone)]
pub struct Term(Arc<Node>);

struct Node {
    kind: TermKind,
    hash: u64,
    size: u32,
    // One more than the largest loose de Bruijn index, 0 when there is none.
    loose: u32,
    has_free: bool,
    has_holes: bool,
}

#[derive(Clone)]
pub enum TermKind {
    /// Bound variable as a de Bruijn index.
    Var(u32),
    /// Free variable.
    Free(Name),
    /// Algebraic variable (context hole).
    Hole(HoleId),
    /// Abstraction: display hint and body.
    Lam(Name, Term),
    App(Term, Term),
}

fn mix(a: u64, b: u64) -> u64 {
    // splitmix64 finalizer over a combined word
    let mut z = a ^ b.rotate_left(29) ^ 0x9e37_79b9_7f4a_7c15;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn str_hash(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

impl Term {
    fn from_kind(kind: TermKind) -> Term {
        let (hash, size, loose, has_free, has_holes) = match &kind {
            TermKind::Var(i) => (mix(1, *i as u64), 1, i + 1, false, false),
            TermKind::Free(n) => (mix(2, str_hash(n)), 1, 0, true, false),
            TermKind::Hole(h) => (mix(3, *h as u64), 1, 0, false, true),
            TermKind::Lam(_, b) => (
                mix(4, b.0.hash),
                b.0.size.saturating_add(1),
                b.0.loose.saturating_sub(1),
                b.0.has_free,
                b.0.has_holes,
            ),
            TermKind::App(f, a) => (
                mix(mix(5, f.0.hash), a.0.hash),
                f.0.size.saturating_add(a.0.size).saturating_add(1),
                f.0.loose.max(a.0.loose),
                f.0.has_free || a.0.has_free,
                f.0.has_holes || a.0.has_holes,
            ),
        };
        Term(Arc::new(Node { kind, hash, size, loose, has_free, has_holes }))
    }

    pub fn var(index: u32) -> Term {
        Term::from_kind(TermKind::Var(index))
    }

    pub fn free(name: &str) -> Term {
        Term::from_kind(TermKind::Free(Arc::from(name)))
    }

    pub fn free_name(name: Name) -> Term {
        Term::from_kind(TermKind::Free(name))
    }

    pub fn hole(id: HoleId) -> Term {
        Term::from_kind(TermKind::Hole(id))
    }

    /// Abstraction over an already nameless body.
    pub fn lam(hint: &str, body: Term) -> Term {
        Term::from_kind(TermKind::Lam(Arc::from(hint), body))
    }

    pub fn lam_named(hint: Name, body: Term) -> Term {
        Term::from_kind(TermKind::Lam(hint, body))
    }

    /// `λname.body` where `body` refers to the binder through the free name
    /// `name`. Occurrences of `name` in `body` become bound.
    pub fn abstract_free(name: &str, body: &Term) -> Term {
        Term::lam(name, bind_free(body, name, 0))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::from_kind(TermKind::App(f, a))
    }

    /// Left-associated application `f a1 a2 ... an`.
    pub fn apps<I: IntoIterator<Item = Term>>(f: Term, args: I) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        self.0.size as usize
    }

    /// One more than the largest loose index (0 for locally closed terms).
    pub fn loose_bound(&self) -> u32 {
        self.0.loose
    }

    /// No loose indices and no free names.
    pub fn is_closed(&self) -> bool {
        self.0.loose == 0 && !self.0.has_free
    }

    pub fn has_holes(&self) -> bool {
        self.0.has_holes
    }

    pub fn is_lam(&self) -> bool {
        matches!(self.kind(), TermKind::Lam(..))
    }

    pub fn as_app(&self) -> Option<(&Term, &Term)> {
        match self.kind() {
            TermKind::App(f, a) => Some((f, a)),
            _ => None,
        }
    }

    pub fn as_lam(&self) -> Option<(&Name, &Term)> {
        match self.kind() {
            TermKind::Lam(h, b) => Some((h, b)),
            _ => None,
        }
    }

    /// Head and argument list of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut head = self;
        while let TermKind::App(f, a) = head.kind() {
            args.push(a);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Free variable names, with multiplicity.
    pub fn free_name_counts(&self) -> BTreeMap<Name, usize> {
        let mut out = BTreeMap::new();
        self.walk_free(&mut |n| *out.entry(n.clone()).or_insert(0) += 1);
        out
    }

    pub fn free_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.walk_free(&mut |n| {
            out.insert(n.clone());
        });
        out
    }

    fn walk_free(&self, f: &mut impl FnMut(&Name)) {
        if !self.0.has_free {
            return;
        }
        match self.kind() {
            TermKind::Free(n) => f(n),
            TermKind::Lam(_, b) => b.walk_free(f),
            TermKind::App(x, y) => {
                x.walk_free(f);
                y.walk_free(f);
            }
            _ => {}
        }
    }

    pub fn hole_ids(&self) -> BTreeSet<HoleId> {
        fn go(t: &Term, out: &mut BTreeSet<HoleId>) {
            if !t.has_holes() {
                return;
            }
            match t.kind() {
                TermKind::Hole(h) => {
                    out.insert(*h);
                }
                TermKind::Lam(_, b) => go(b, out),
                TermKind::App(x, y) => {
                    go(x, out);
                    go(y, out);
                }
                _ => {}
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }

    /// Whether index `k` (relative to this term's root) occurs loose.
    pub fn has_loose(&self, k: u32) -> bool {
        if self.0.loose <= k {
            return false;
        }
        match self.kind() {
            TermKind::Var(i) => *i == k,
            TermKind::Lam(_, b) => b.has_loose(k + 1),
            TermKind::App(x, y) => x.has_loose(k) || y.has_loose(k),
            _ => false,
        }
    }

    /// Loose indices relative to this term's root.
    pub fn loose_indices(&self) -> BTreeSet<u32> {
        fn go(t: &Term, depth: u32, out: &mut BTreeSet<u32>) {
            if t.0.loose <= depth {
                return;
            }
            match t.kind() {
                TermKind::Var(i) => {
                    out.insert(i - depth);
                }
                TermKind::Lam(_, b) => go(b, depth + 1, out),
                TermKind::App(x, y) => {
                    go(x, depth, out);
                    go(y, depth, out);
                }
                _ => {}
            }
        }
        let mut out = BTreeSet::new();
        go(self, 0, &mut out);
        out
    }

    /// Adds `delta` to every loose index at or above `cutoff`.
    pub fn shift(&self, delta: i64, cutoff: u32) -> Term {
        if self.0.loose <= cutoff || delta == 0 {
            return self.clone();
        }
        match self.kind() {
            TermKind::Var(i) => {
                let shifted = *i as i64 + delta;
                debug_assert!(shifted >= 0, "negative de Bruijn index");
                Term::var(shifted as u32)
            }
            TermKind::Lam(h, b) => Term::lam_named(h.clone(), b.shift(delta, cutoff + 1)),
            TermKind::App(x, y) => Term::app(x.shift(delta, cutoff), y.shift(delta, cutoff)),
            _ => self.clone(),
        }
    }

    /// Body of a β-redex with index 0 replaced by `arg`: the contractum of
    /// `(λ.self) arg`. Indices above the binder are decremented.
    pub fn instantiate(&self, arg: &Term) -> Term {
        fn go(t: &Term, depth: u32, arg: &Term) -> Term {
            if t.0.loose <= depth {
                return t.clone();
            }
            match t.kind() {
                TermKind::Var(i) => {
                    if *i == depth {
                        arg.shift(depth as i64, 0)
                    } else {
                        Term::var(i - 1)
                    }
                }
                TermKind::Lam(h, b) => Term::lam_named(h.clone(), go(b, depth + 1, arg)),
                TermKind::App(x, y) => Term::app(go(x, depth, arg), go(y, depth, arg)),
                _ => t.clone(),
            }
        }
        go(self, 0, arg)
    }

    /// Capture-avoiding substitution of `s` for the free name `x`.
    ///
    /// `s` must not have loose indices. Capture cannot happen in the nameless
    /// representation; binder hints that would print as captures are renamed
    /// by the printer.
    pub fn substitute(&self, x: &str, s: &Term) -> Term {
        assert_eq!(s.loose_bound(), 0, "substituted term has loose indices");
        fn go(t: &Term, x: &str, s: &Term) -> Term {
            if !t.0.has_free {
                return t.clone();
            }
            match t.kind() {
                TermKind::Free(n) if &**n == x => s.clone(),
                TermKind::Lam(h, b) => Term::lam_named(h.clone(), go(b, x, s)),
                TermKind::App(f, a) => Term::app(go(f, x, s), go(a, x, s)),
                _ => t.clone(),
            }
        }
        go(self, x, s)
    }

    /// Replaces every hole `id` with `s` (no shifting: `s` is inserted verbatim,
    /// so its loose indices are captured by the enclosing binders).
    pub fn replace_hole_raw(&self, id: HoleId, s: &Term) -> Term {
        if !self.has_holes() {
            return self.clone();
        }
        match self.kind() {
            TermKind::Hole(h) if *h == id => s.clone(),
            TermKind::Lam(h, b) => Term::lam_named(h.clone(), b.replace_hole_raw(id, s)),
            TermKind::App(f, a) => Term::app(f.replace_hole_raw(id, s), a.replace_hole_raw(id, s)),
            _ => self.clone(),
        }
    }

    pub fn subterm(&self, pos: &Position) -> Option<&Term> {
        let mut cur = self;
        for d in pos.dirs() {
            cur = match (d, cur.kind()) {
                (Dir::Body, TermKind::Lam(_, b)) => b,
                (Dir::Fun, TermKind::App(f, _)) => f,
                (Dir::Arg, TermKind::App(_, a)) => a,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// Copy of `self` with the subterm at `pos` replaced (no index adjustment).
    pub fn replace_at(&self, pos: &Position, new: Term) -> Option<Term> {
        fn go(t: &Term, dirs: &[Dir], new: Term) -> Option<Term> {
            let Some((d, rest)) = dirs.split_first() else {
                return Some(new);
            };
            match (d, t.kind()) {
                (Dir::Body, TermKind::Lam(h, b)) => Some(Term::lam_named(h.clone(), go(b, rest, new)?)),
                (Dir::Fun, TermKind::App(f, a)) => Some(Term::app(go(f, rest, new)?, a.clone())),
                (Dir::Arg, TermKind::App(f, a)) => Some(Term::app(f.clone(), go(a, rest, new)?)),
                _ => None,
            }
        }
        go(self, pos.dirs(), new)
    }

    /// Number of binders crossed on the way down to `pos`.
    pub fn binders_above(&self, pos: &Position) -> u32 {
        pos.dirs().iter().filter(|d| **d == Dir::Body).count() as u32
    }

    /// All positions, in pre-order (leftmost-outermost first).
    pub fn positions(&self) -> Vec<Position> {
        fn go(t: &Term, cur: &mut Vec<Dir>, out: &mut Vec<Position>) {
            out.push(Position(cur.clone()));
            match t.kind() {
                TermKind::Lam(_, b) => {
                    cur.push(Dir::Body);
                    go(b, cur, out);
                    cur.pop();
                }
                TermKind::App(f, a) => {
                    cur.push(Dir::Fun);
                    go(f, cur, out);
                    cur.pop();
                    cur.push(Dir::Arg);
                    go(a, cur, out);
                    cur.pop();
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Nameless rendering, used as the α-canonical key in exports.
    pub fn canonical_key(&self) -> String {
        fn go(t: &Term, out: &mut String) {
            match t.kind() {
                TermKind::Var(i) => out.push_str(&i.to_string()),
                TermKind::Free(n) => {
                    out.push('$');
                    out.push_str(n);
                }
                TermKind::Hole(h) => {
                    out.push('?');
                    out.push_str(&h.to_string());
                }
                TermKind::Lam(_, b) => {
                    out.push_str("λ(");
                    go(b, out);
                    out.push(')');
                }
                TermKind::App(f, a) => {
                    out.push('[');
                    go(f, out);
                    out.push(' ');
                    go(a, out);
                    out.push(']');
                }
            }
        }
        let mut s = String::new();
        go(self, &mut s);
        s
    }
}

/// Replaces free `name` with the index of a binder `depth` levels up.
pub(crate) fn bind_free(t: &Term, name: &str, depth: u32) -> Term {
    if !t.0.has_free {
        return t.clone();
    }
    match t.kind() {
        TermKind::Free(n) if &**n == name => Term::var(depth),
        TermKind::Lam(h, b) => Term::lam_named(h.clone(), bind_free(b, name, depth + 1)),
        TermKind::App(f, a) => Term::app(bind_free(f, name, depth), bind_free(a, name, depth)),
        _ => t.clone(),
    }
}

fn structural_eq(a: &Term, b: &Term) -> bool {
    if Arc::ptr_eq(&a.0, &b.0) {
        return true;
    }
    if a.0.hash != b.0.hash || a.0.size != b.0.size {
        return false;
    }
    match (a.kind(), b.kind()) {
        (TermKind::Var(i), TermKind::Var(j)) => i == j,
        (TermKind::Free(x), TermKind::Free(y)) => x == y,
        (TermKind::Hole(x), TermKind::Hole(y)) => x == y,
        (TermKind::Lam(_, x), TermKind::Lam(_, y)) => structural_eq(x, y),
        (TermKind::App(f, x), TermKind::App(g, y)) => structural_eq(f, g) && structural_eq(x, y),
        _ => false,
    }
}

/// α-equivalence. Holes compare by id.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    structural_eq(a, b)
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        structural_eq(self, other)
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// One step down the syntax tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    /// Body of an abstraction.
    Body,
    /// Function side of an application.
    Fun,
    /// Argument side of an application.
    Arg,
}

/// Path from the root to a subterm occurrence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Position(Vec<Dir>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn from_dirs(dirs: Vec<Dir>) -> Position {
        Position(dirs)
    }

    pub fn dirs(&self) -> &[Dir] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, d: Dir) -> Position {
        let mut v = self.0.clone();
        v.push(d);
        Position(v)
    }

    pub fn concat(&self, rest: &Position) -> Position {
        let mut v = self.0.clone();
        v.extend_from_slice(&rest.0);
        Position(v)
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_strict_prefix_of(&self, other: &Position) -> bool {
        self.0.len() < other.0.len() && self.is_prefix_of(other)
    }

    pub fn disjoint(&self, other: &Position) -> bool {
        !self.is_prefix_of(other) && !other.is_prefix_of(self)
    }

    /// The remainder of `other` below `self`, if `self` is a prefix.
    pub fn strip_prefix(&self, other: &Position) -> Option<Position> {
        other.0.strip_prefix(self.0.as_slice()).map(|r| Position(r.to_vec()))
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            let c = match d {
                Dir::Body => "b",
                Dir::Fun => "f",
                Dir::Arg => "a",
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Position {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "ε" || s == "root" {
            return Ok(Position::root());
        }
        s.split('.')
            .map(|p| match p {
                "b" => Ok(Dir::Body),
                "f" => Ok(Dir::Fun),
                "a" => Ok(Dir::Arg),
                other => Err(format!("bad position component `{other}`")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Position)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id() -> Term {
        Term::lam("x", Term::var(0))
    }

    #[test]
    fn hints_do_not_affect_equality() {
        assert_eq!(Term::lam("x", Term::var(0)), Term::lam("y", Term::var(0)));
        assert_ne!(
            Term::lam("x", Term::lam("y", Term::var(1))),
            Term::lam("x", Term::lam("y", Term::var(0)))
        );
    }

    #[test]
    fn instantiate_shifts_under_binders() {
        // (λx.λy.x) z  →  λy.z
        let body = Term::lam("y", Term::var(1));
        assert_eq!(body.instantiate(&Term::free("z")), Term::lam("y", Term::free("z")));
        // (λx.λy.x y) applied to a loose index keeps it loose past the binder
        let body = Term::lam("y", Term::app(Term::var(1), Term::var(0)));
        let out = body.instantiate(&Term::var(3));
        assert_eq!(out, Term::lam("y", Term::app(Term::var(4), Term::var(0))));
    }

    #[test]
    fn loose_bookkeeping() {
        let t = Term::lam("x", Term::app(Term::var(0), Term::var(2)));
        assert_eq!(t.loose_bound(), 2);
        assert!(t.has_loose(1));
        assert!(!t.has_loose(0));
        assert_eq!(t.loose_indices().into_iter().collect::<Vec<_>>(), vec![1]);
        assert!(id().is_closed());
    }

    #[test]
    fn positions_and_replacement() {
        let t = Term::app(id(), Term::free("y"));
        let p: Position = "f.b".parse().unwrap();
        assert_eq!(t.subterm(&p), Some(&Term::var(0)));
        let r = t.replace_at(&p, Term::free("q")).unwrap();
        assert_eq!(r, Term::app(Term::lam("x", Term::free("q")), Term::free("y")));
        assert_eq!(p.to_string(), "f.b");
        assert!(Position::root().is_strict_prefix_of(&p));
        assert!("a".parse::<Position>().unwrap().disjoint(&p));
    }

    #[test]
    fn free_name_multiset() {
        let t = Term::apps(Term::free("x"), [Term::free("y"), Term::free("x")]);
        let counts = t.free_name_counts();
        assert_eq!(counts.get("x"), Some(&2));
        assert_eq!(counts.get("y"), Some(&1));
    }
}
