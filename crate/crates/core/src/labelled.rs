//! Labelled λ-terms Λ^ℕ: λ-terms in which certain residual subterms carry a
//! positive integer label, used to trace residuals along βηπ reductions.
//!
//! A label may sit on any node whose erasure has one of the shapes in the
//! active [`LabelScheme`]. Reduction keeps a label as long as the labelled
//! subterm keeps an allowed shape, and drops it otherwise.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog;
use crate::graph::reduction_graph;
use crate::pi::{is_psi, PiOracle};
use crate::reduction::{Budget, Rule, RuleSet};
use crate::syntax::choose_name;
use crate::term::{Dir, Name, Position, Term, TermKind};
use crate::Verdict;

#[derive(Clone, Debug)]
pub struct LTerm {
    pub label: Option<u32>,
    pub node: LNode,
}

#[derive(Clone, Debug)]
pub enum LNode {
    Var(u32),
    Free(Name),
    Hole(u32),
    Lam(Name, Box<LTerm>),
    App(Box<LTerm>, Box<LTerm>),
}

impl PartialEq for LTerm {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label
            && match (&self.node, &other.node) {
                (LNode::Var(i), LNode::Var(j)) => i == j,
                (LNode::Free(x), LNode::Free(y)) => x == y,
                (LNode::Hole(x), LNode::Hole(y)) => x == y,
                (LNode::Lam(_, a), LNode::Lam(_, b)) => a == b,
                (LNode::App(f, a), LNode::App(g, b)) => f == g && a == b,
                _ => false,
            }
    }
}

impl Eq for LTerm {}

impl std::hash::Hash for LTerm {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.label.hash(state);
        self.erase().hash(state);
    }
}

fn unl(node: LNode) -> LTerm {
    LTerm { label: None, node }
}

impl LTerm {
    pub fn from_term(t: &Term) -> LTerm {
        let node = match t.kind() {
            TermKind::Var(i) => LNode::Var(*i),
            TermKind::Free(n) => LNode::Free(n.clone()),
            TermKind::Hole(h) => LNode::Hole(*h),
            TermKind::Lam(h, b) => LNode::Lam(h.clone(), Box::new(LTerm::from_term(b))),
            TermKind::App(f, a) => LNode::App(Box::new(LTerm::from_term(f)), Box::new(LTerm::from_term(a))),
        };
        unl(node)
    }

    /// `(t)ⁿ`; replaces an existing label on the root.
    pub fn labelled(n: u32, t: &Term) -> LTerm {
        assert!(n >= 1, "labels are positive");
        LTerm { label: Some(n), ..LTerm::from_term(t) }
    }

    pub fn with_label(mut self, n: u32) -> LTerm {
        assert!(n >= 1, "labels are positive");
        self.label = Some(n);
        self
    }

    pub fn app(f: LTerm, a: LTerm) -> LTerm {
        unl(LNode::App(Box::new(f), Box::new(a)))
    }

    pub fn lam(hint: &str, body: LTerm) -> LTerm {
        unl(LNode::Lam(Arc::from(hint), Box::new(body)))
    }

    /// The underlying λ-term.
    pub fn erase(&self) -> Term {
        match &self.node {
            LNode::Var(i) => Term::var(*i),
            LNode::Free(n) => Term::free_name(n.clone()),
            LNode::Hole(h) => Term::hole(*h),
            LNode::Lam(h, b) => Term::lam_named(h.clone(), b.erase()),
            LNode::App(f, a) => Term::app(f.erase(), a.erase()),
        }
    }

    /// Labelled positions in pre-order.
    pub fn labels(&self) -> Vec<(Position, u32)> {
        fn go(t: &LTerm, path: &mut Vec<Dir>, out: &mut Vec<(Position, u32)>) {
            if let Some(n) = t.label {
                out.push((Position::from_dirs(path.clone()), n));
            }
            match &t.node {
                LNode::Lam(_, b) => {
                    path.push(Dir::Body);
                    go(b, path, out);
                    path.pop();
                }
                LNode::App(f, a) => {
                    path.push(Dir::Fun);
                    go(f, path, out);
                    path.pop();
                    path.push(Dir::Arg);
                    go(a, path, out);
                    path.pop();
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn label_set(&self) -> BTreeSet<u32> {
        self.labels().into_iter().map(|(_, n)| n).collect()
    }

    pub fn strip_labels(&self) -> LTerm {
        LTerm::from_term(&self.erase())
    }

    fn has_loose(&self, k: u32) -> bool {
        match &self.node {
            LNode::Var(i) => *i == k,
            LNode::Lam(_, b) => b.has_loose(k + 1),
            LNode::App(f, a) => f.has_loose(k) || a.has_loose(k),
            _ => false,
        }
    }

    fn shift(&self, delta: i64, cutoff: u32) -> LTerm {
        let node = match &self.node {
            LNode::Var(i) if *i >= cutoff => LNode::Var((*i as i64 + delta) as u32),
            LNode::Lam(h, b) => LNode::Lam(h.clone(), Box::new(b.shift(delta, cutoff + 1))),
            LNode::App(f, a) => LNode::App(Box::new(f.shift(delta, cutoff)), Box::new(a.shift(delta, cutoff))),
            other => other.clone(),
        };
        LTerm { label: self.label, node }
    }

    /// Body with index 0 replaced by `arg`; labels travel with the copies.
    fn instantiate(&self, arg: &LTerm) -> LTerm {
        fn go(t: &LTerm, depth: u32, arg: &LTerm) -> LTerm {
            let node = match &t.node {
                LNode::Var(i) if *i == depth => {
                    let mut a = arg.shift(depth as i64, 0);
                    // a labelled occurrence of the variable itself cannot exist:
                    // variables are not an allowed leaf shape
                    if a.label.is_none() {
                        a.label = t.label;
                    }
                    return a;
                }
                LNode::Var(i) if *i > depth => LNode::Var(i - 1),
                LNode::Lam(h, b) => LNode::Lam(h.clone(), Box::new(go(b, depth + 1, arg))),
                LNode::App(f, a) => LNode::App(Box::new(go(f, depth, arg)), Box::new(go(a, depth, arg))),
                other => other.clone(),
            };
            LTerm { label: t.label, node }
        }
        go(self, 0, arg)
    }

    pub fn subterm(&self, pos: &Position) -> Option<&LTerm> {
        let mut cur = self;
        for d in pos.dirs() {
            cur = match (d, &cur.node) {
                (Dir::Body, LNode::Lam(_, b)) => b,
                (Dir::Fun, LNode::App(f, _)) => f,
                (Dir::Arg, LNode::App(_, a)) => a,
                _ => return None,
            };
        }
        Some(cur)
    }
}

/// Residual shapes that may carry a label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeafShape {
    /// `λx.Ψ x Ω`
    AbsPsiOmega,
    /// `Ψ M Ω`
    PsiArgOmega,
    /// `Ω`
    Omega,
    /// `Ψ₂ Ω` with Ψ₂ ∈ 𝒢_β(Θ₂)
    Psi2Omega,
    /// `Ψ₂ (Ψ M N)`
    Psi2Diff,
}

/// 𝒢_β(Θ₂), computed once from the engine.
pub fn g_beta_theta2() -> &'static [Term] {
    static G: OnceLock<Vec<Term>> = OnceLock::new();
    G.get_or_init(|| {
        let g = reduction_graph(&catalog::theta_n(2), RuleSet::BETA, Budget::default());
        assert!(g.is_complete(), "𝒢_β(Θ₂) is finite");
        g.nodes().to_vec()
    })
}

fn is_psi2(t: &Term) -> bool {
    g_beta_theta2().iter().any(|g| g == t)
}

impl LeafShape {
    pub fn matches(self, t: &Term) -> bool {
        let omega = || catalog::omega();
        match self {
            LeafShape::Omega => *t == omega(),
            LeafShape::PsiArgOmega => matches!(t.as_app(), Some((fm, o)) if *o == omega()
                && matches!(fm.as_app(), Some((psi, _)) if is_psi(psi))),
            LeafShape::AbsPsiOmega => {
                let Some((_, body)) = t.as_lam() else { return false };
                matches!(body.as_app(), Some((fx, o)) if *o == omega()
                    && matches!(fx.as_app(), Some((psi, x)) if is_psi(psi) && matches!(x.kind(), TermKind::Var(0))))
            }
            LeafShape::Psi2Omega => matches!(t.as_app(), Some((p2, o)) if *o == omega() && is_psi2(p2)),
            LeafShape::Psi2Diff => matches!(t.as_app(), Some((p2, d)) if is_psi2(p2)
                && matches!(d.as_app(), Some((fm, _)) if matches!(fm.as_app(), Some((psi, _)) if is_psi(psi)))),
        }
    }
}

/// Allowed labels and leaf shapes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelScheme {
    /// `None` admits every positive label.
    pub labels: Option<BTreeSet<u32>>,
    pub shapes: Vec<LeafShape>,
}

impl LabelScheme {
    /// The three residual shapes of λx.ΘxΩ.
    pub fn standard() -> LabelScheme {
        LabelScheme { labels: None, shapes: vec![LeafShape::AbsPsiOmega, LeafShape::PsiArgOmega, LeafShape::Omega] }
    }

    /// Adds the Θ₂-shaped leaves, with the label alphabet {1,2,3,4,5,9,10,11,21}.
    pub fn theta2() -> LabelScheme {
        LabelScheme {
            labels: Some([1, 2, 3, 4, 5, 9, 10, 11, 21].into_iter().collect()),
            shapes: vec![
                LeafShape::AbsPsiOmega,
                LeafShape::PsiArgOmega,
                LeafShape::Omega,
                LeafShape::Psi2Omega,
                LeafShape::Psi2Diff,
            ],
        }
    }

    pub fn admits_shape(&self, t: &Term) -> bool {
        self.shapes.iter().any(|s| s.matches(t))
    }

    pub fn admits_label(&self, n: u32) -> bool {
        n >= 1 && self.labels.as_ref().is_none_or(|ls| ls.contains(&n))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("label {label} at {position} is not in the alphabet")]
    BadLabel { position: Position, label: u32 },
    #[error("label at {position} sits on a subterm that is not a leaf shape")]
    BadShape { position: Position },
    #[error("erasures differ at {0}")]
    ErasureMismatch(Position),
}

/// Checks labels and shapes against `scheme`.
pub fn validate(l: &LTerm, scheme: &LabelScheme) -> Result<(), LabelError> {
    for (position, label) in l.labels() {
        if !scheme.admits_label(label) {
            return Err(LabelError::BadLabel { position, label });
        }
        let sub = l.subterm(&position).expect("labelled position");
        if !scheme.admits_shape(&sub.erase()) {
            return Err(LabelError::BadShape { position });
        }
    }
    Ok(())
}

pub fn erase(l: &LTerm) -> Term {
    l.erase()
}

/// Superposition of two labelled terms with the same erasure: labels are
/// summed where both are labelled and copied where one is.
pub fn superpose(a: &LTerm, b: &LTerm) -> Result<LTerm, LabelError> {
    fn go(a: &LTerm, b: &LTerm, path: &mut Vec<Dir>) -> Result<LTerm, LabelError> {
        let mismatch = |path: &Vec<Dir>| LabelError::ErasureMismatch(Position::from_dirs(path.clone()));
        let label = match (a.label, b.label) {
            (Some(m), Some(n)) => Some(m + n),
            (Some(m), None) => Some(m),
            (None, Some(n)) => Some(n),
            (None, None) => None,
        };
        let node = match (&a.node, &b.node) {
            (LNode::Var(i), LNode::Var(j)) if i == j => LNode::Var(*i),
            (LNode::Free(x), LNode::Free(y)) if x == y => LNode::Free(x.clone()),
            (LNode::Hole(x), LNode::Hole(y)) if x == y => LNode::Hole(*x),
            (LNode::Lam(h, x), LNode::Lam(_, y)) => {
                path.push(Dir::Body);
                let body = go(x, y, path)?;
                path.pop();
                LNode::Lam(h.clone(), Box::new(body))
            }
            (LNode::App(f, x), LNode::App(g, y)) => {
                path.push(Dir::Fun);
                let fun = go(f, g, path)?;
                path.pop();
                path.push(Dir::Arg);
                let arg = go(x, y, path)?;
                path.pop();
                LNode::App(Box::new(fun), Box::new(arg))
            }
            _ => return Err(mismatch(path)),
        };
        Ok(LTerm { label, node })
    }
    go(a, b, &mut Vec::new())
}

/// A labelled one-step reduct with the rule and position of the step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabStep {
    pub rule: Rule,
    /// `true` for the labelled-application clause `(λx.ΨxΩ)ⁿ M → (ΨMΩ)ⁿ`.
    pub labelled_app: bool,
    pub position: Position,
    pub result: LTerm,
}

fn keep_label(label: Option<u32>, t: &LTerm, scheme: &LabelScheme) -> Option<u32> {
    label.filter(|_| scheme.admits_shape(&t.erase()))
}

fn root_steps(l: &LTerm, o: &PiOracle, scheme: &LabelScheme) -> Vec<(Rule, bool, LTerm)> {
    let mut out = Vec::new();
    if let LNode::App(f, a) = &l.node {
        if let LNode::Lam(_, body) = &f.node {
            let mut r = body.instantiate(a);
            let clause = f.label.is_some() && LeafShape::AbsPsiOmega.matches(&f.erase());
            if clause {
                r.label = f.label;
            } else {
                r.label = r.label.or(keep_label(l.label, &r, scheme));
            }
            out.push((Rule::Beta, clause, r));
        }
        if let LNode::App(psi, m) = &f.node {
            if is_psi(&psi.erase()) {
                let fuel = o.fuel;
                if fuel > 0 && o.eq_at(&m.erase(), &a.erase(), fuel - 1) == Verdict::Proved {
                    let mut r = LTerm::from_term(&catalog::omega());
                    r.label = keep_label(l.label, &r, scheme);
                    out.push((Rule::Pi, false, r));
                }
            }
        }
    }
    if let LNode::Lam(_, body) = &l.node {
        if let LNode::App(m, x) = &body.node {
            if matches!(x.node, LNode::Var(0)) && x.label.is_none() && !m.has_loose(0) {
                let mut r = m.shift(-1, 0);
                if l.label.is_some() {
                    r.label = r.label.or(keep_label(l.label, &r, scheme));
                }
                out.push((Rule::Eta, false, r));
            }
        }
    }
    out
}

/// All one-step successors under →lab, with π-premises decided by the
/// oracle at one less than its fuel. Reduction under labels is allowed.
pub fn lab_steps(l: &LTerm, o: &PiOracle, scheme: &LabelScheme) -> Vec<LabStep> {
    fn go(l: &LTerm, o: &PiOracle, scheme: &LabelScheme, out: &mut Vec<(Rule, bool, Vec<Dir>, LTerm)>) {
        for (rule, clause, r) in root_steps(l, o, scheme) {
            out.push((rule, clause, Vec::new(), r));
        }
        match &l.node {
            LNode::Lam(h, b) => {
                let mut sub = Vec::new();
                go(b, o, scheme, &mut sub);
                for (r, c, mut p, b2) in sub {
                    p.push(Dir::Body);
                    let mut t = unl(LNode::Lam(h.clone(), Box::new(b2)));
                    t.label = keep_label(l.label, &t, scheme);
                    out.push((r, c, p, t));
                }
            }
            LNode::App(f, a) => {
                let mut sub = Vec::new();
                go(f, o, scheme, &mut sub);
                for (r, c, mut p, f2) in sub {
                    p.push(Dir::Fun);
                    let mut t = unl(LNode::App(Box::new(f2), a.clone()));
                    t.label = keep_label(l.label, &t, scheme);
                    out.push((r, c, p, t));
                }
                let mut sub = Vec::new();
                go(a, o, scheme, &mut sub);
                for (r, c, mut p, a2) in sub {
                    p.push(Dir::Arg);
                    let mut t = unl(LNode::App(f.clone(), Box::new(a2)));
                    t.label = keep_label(l.label, &t, scheme);
                    out.push((r, c, p, t));
                }
            }
            _ => {}
        }
    }
    let mut raw = Vec::new();
    go(l, o, scheme, &mut raw);
    raw.into_iter()
        .map(|(rule, labelled_app, mut p, result)| {
            p.reverse();
            LabStep { rule, labelled_app, position: Position::from_dirs(p), result }
        })
        .collect()
}

/// Distinct successors.
pub fn lab_step(l: &LTerm, o: &PiOracle, scheme: &LabelScheme) -> Vec<LTerm> {
    let mut seen = HashSet::new();
    lab_steps(l, o, scheme).into_iter().map(|s| s.result).filter(|r| seen.insert(r.clone())).collect()
}

impl fmt::Display for LTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        #[derive(Clone, Copy, PartialEq)]
        enum Ctx {
            Top,
            Fun,
            Arg { tail: bool },
        }
        fn go(t: &LTerm, scope: &mut Vec<Name>, ctx: Ctx, out: &mut String) {
            if let Some(n) = t.label {
                out.push('(');
                go(&LTerm { label: None, node: t.node.clone() }, scope, Ctx::Top, out);
                out.push_str(&format!(")^{n}"));
                return;
            }
            match &t.node {
                LNode::Var(i) => {
                    let i = *i as usize;
                    match scope.len().checked_sub(i + 1) {
                        Some(j) => out.push_str(&scope[j]),
                        None => out.push_str(&format!("#{i}")),
                    }
                }
                LNode::Free(n) => out.push_str(n),
                LNode::Hole(0) => out.push('ξ'),
                LNode::Hole(h) => out.push_str(&format!("ξ{h}")),
                LNode::Lam(h, b) => {
                    let parens = matches!(ctx, Ctx::Fun | Ctx::Arg { tail: false });
                    if parens {
                        out.push('(');
                    }
                    let name = choose_name(h, &b.erase(), scope);
                    out.push_str(&format!("λ{name}."));
                    scope.push(name);
                    go(b, scope, Ctx::Top, out);
                    scope.pop();
                    if parens {
                        out.push(')');
                    }
                }
                LNode::App(fun, arg) => {
                    let parens = matches!(ctx, Ctx::Arg { .. });
                    if parens {
                        out.push('(');
                    }
                    go(fun, scope, Ctx::Fun, out);
                    out.push(' ');
                    go(arg, scope, Ctx::Arg { tail: parens || ctx == Ctx::Top }, out);
                    if parens {
                        out.push(')');
                    }
                }
            }
        }
        let mut s = String::new();
        go(self, &mut Vec::new(), Ctx::Top, &mut s);
        f.write_str(&s)
    }
}

/// `λx.Θ x Ω`
pub fn abs_theta_omega() -> Term {
    Term::lam("x", Term::apps(catalog::theta(), [Term::var(0), catalog::omega()]))
}
