//! One-step β/η reduction, leftmost-outermost normalization and head reduction.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::term::{Dir, Position, Term, TermKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Beta,
    Eta,
    Pi,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Beta => "β",
            Rule::Eta => "η",
            Rule::Pi => "π",
        })
    }
}

impl Rule {
    pub fn ascii(self) -> &'static str {
        match self {
            Rule::Beta => "beta",
            Rule::Eta => "eta",
            Rule::Pi => "pi",
        }
    }
}

/// Which of β and η are enabled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleSet {
    pub beta: bool,
    pub eta: bool,
}

impl RuleSet {
    pub const BETA: RuleSet = RuleSet { beta: true, eta: false };
    pub const ETA: RuleSet = RuleSet { beta: false, eta: true };
    pub const BETA_ETA: RuleSet = RuleSet { beta: true, eta: true };

    pub fn parse(s: &str) -> Option<RuleSet> {
        let mut rs = RuleSet { beta: false, eta: false };
        for part in s.split([',', '+']) {
            match part.trim() {
                "beta" | "β" => rs.beta = true,
                "eta" | "η" => rs.eta = true,
                "betaeta" | "βη" => {
                    rs.beta = true;
                    rs.eta = true;
                }
                _ => return None,
            }
        }
        Some(rs)
    }
}

/// A single contraction: rule, redex position and the whole resulting term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub rule: Rule,
    pub position: Position,
    pub result: Term,
}

/// Contractum of a β-redex `(λ.b) a`.
pub fn contract_beta(t: &Term) -> Option<Term> {
    let (f, a) = t.as_app()?;
    let (_, body) = f.as_lam()?;
    Some(body.instantiate(a))
}

/// Contractum of an η-redex: `λ.(M 0)` with 0 not loose in `M`.
pub fn contract_eta(t: &Term) -> Option<Term> {
    let (_, body) = t.as_lam()?;
    let (m, x) = body.as_app()?;
    if !matches!(x.kind(), TermKind::Var(0)) || m.has_loose(0) {
        return None;
    }
    Some(m.shift(-1, 0))
}

pub fn contract(t: &Term, rule: Rule) -> Option<Term> {
    match rule {
        Rule::Beta => contract_beta(t),
        Rule::Eta => contract_eta(t),
        Rule::Pi => None,
    }
}

/// Applies `rule` at `pos`, if the subterm there is a redex of that rule.
pub fn contract_at(t: &Term, pos: &Position, rule: Rule) -> Option<Term> {
    let sub = t.subterm(pos)?;
    let new = contract(sub, rule)?;
    t.replace_at(pos, new)
}

/// Every one-step reduct, in leftmost-outermost (pre-order) order of redexes.
pub fn one_steps(t: &Term, rules: RuleSet) -> Vec<Step> {
    // paths are accumulated reversed while rebuilding parents
    fn go(t: &Term, rules: RuleSet, out: &mut Vec<(Rule, Vec<Dir>, Term)>) {
        if rules.beta {
            if let Some(r) = contract_beta(t) {
                out.push((Rule::Beta, Vec::new(), r));
            }
        }
        if rules.eta {
            if let Some(r) = contract_eta(t) {
                out.push((Rule::Eta, Vec::new(), r));
            }
        }
        match t.kind() {
            TermKind::Lam(h, b) => {
                let mut sub = Vec::new();
                go(b, rules, &mut sub);
                for (r, mut p, b2) in sub {
                    p.push(Dir::Body);
                    out.push((r, p, Term::lam_named(h.clone(), b2)));
                }
            }
            TermKind::App(f, a) => {
                let mut sub = Vec::new();
                go(f, rules, &mut sub);
                for (r, mut p, f2) in sub {
                    p.push(Dir::Fun);
                    out.push((r, p, Term::app(f2, a.clone())));
                }
                let mut sub = Vec::new();
                go(a, rules, &mut sub);
                for (r, mut p, a2) in sub {
                    p.push(Dir::Arg);
                    out.push((r, p, Term::app(f.clone(), a2)));
                }
            }
            _ => {}
        }
    }
    let mut raw = Vec::new();
    go(t, rules, &mut raw);
    raw.into_iter()
        .map(|(rule, mut p, result)| {
            p.reverse();
            Step { rule, position: Position::from_dirs(p), result }
        })
        .collect()
}

/// The set of one-step reducts as α-classes, in first-occurrence order.
pub fn step(t: &Term, rules: RuleSet) -> Vec<Term> {
    let mut seen = HashSet::new();
    one_steps(t, rules).into_iter().map(|s| s.result).filter(|r| seen.insert(r.clone())).collect()
}

/// Leftmost-outermost redex, if any.
pub fn leftmost_outermost(t: &Term, rules: RuleSet) -> Option<Step> {
    fn go(t: &Term, rules: RuleSet, path: &mut Vec<Dir>) -> Option<(Rule, Position, Term)> {
        if rules.beta {
            if let Some(r) = contract_beta(t) {
                return Some((Rule::Beta, Position::from_dirs(path.clone()), r));
            }
        }
        if rules.eta {
            if let Some(r) = contract_eta(t) {
                return Some((Rule::Eta, Position::from_dirs(path.clone()), r));
            }
        }
        match t.kind() {
            TermKind::Lam(_, b) => {
                path.push(Dir::Body);
                let r = go(b, rules, path);
                path.pop();
                r
            }
            TermKind::App(f, a) => {
                path.push(Dir::Fun);
                if let Some(r) = go(f, rules, path) {
                    path.pop();
                    return Some(r);
                }
                path.pop();
                path.push(Dir::Arg);
                let r = go(a, rules, path);
                path.pop();
                r
            }
            _ => None,
        }
    }
    let (rule, position, sub) = go(t, rules, &mut Vec::new())?;
    let result = t.replace_at(&position, sub)?;
    Some(Step { rule, position, result })
}

pub fn is_normal(t: &Term, rules: RuleSet) -> bool {
    leftmost_outermost(t, rules).is_none()
}

/// Resource limits for reduction and graph exploration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Budget {
    /// Reduction steps (normalization) or node expansions (graphs).
    pub max_steps: usize,
    pub max_nodes: usize,
    /// Terms larger than this are not expanded further.
    pub max_term_size: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_steps: 10_000, max_nodes: 2_000, max_term_size: 400 }
    }
}

impl Budget {
    pub fn new(max_steps: usize, max_nodes: usize, max_term_size: usize) -> Budget {
        assert!(max_steps > 0 && max_nodes > 0 && max_term_size > 0, "budget bounds must be positive");
        Budget { max_steps, max_nodes, max_term_size }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExhaustReason {
    Steps,
    TermSize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalizeOutcome {
    NormalForm { term: Term, steps: usize },
    /// The last term reached when the budget tripped.
    Exhausted { last: Term, steps: usize, reason: ExhaustReason },
    /// `node` was reached twice along the leftmost-outermost path.
    CycleDetected { node: Term, steps: usize },
}

impl NormalizeOutcome {
    pub fn normal_form(&self) -> Option<&Term> {
        match self {
            NormalizeOutcome::NormalForm { term, .. } => Some(term),
            _ => None,
        }
    }
}

/// Leftmost-outermost βη-normalization.
pub fn normalize(t: &Term, budget: Budget) -> NormalizeOutcome {
    normalize_with(t, RuleSet::BETA_ETA, budget)
}

pub fn normalize_with(t: &Term, rules: RuleSet, budget: Budget) -> NormalizeOutcome {
    let mut seen: HashSet<Term> = HashSet::new();
    let mut cur = t.clone();
    let mut steps = 0;
    loop {
        if cur.size() > budget.max_term_size {
            return NormalizeOutcome::Exhausted { last: cur, steps, reason: ExhaustReason::TermSize };
        }
        if !seen.insert(cur.clone()) {
            return NormalizeOutcome::CycleDetected { node: cur, steps };
        }
        let Some(s) = leftmost_outermost(&cur, rules) else {
            return NormalizeOutcome::NormalForm { term: cur, steps };
        };
        if steps == budget.max_steps {
            return NormalizeOutcome::Exhausted { last: cur, steps, reason: ExhaustReason::Steps };
        }
        steps += 1;
        cur = s.result;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeadStatus {
    Solvable,
    UnsolvableEvidence,
    Unknown,
}

impl fmt::Display for HeadStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HeadStatus::Solvable => "solvable",
            HeadStatus::UnsolvableEvidence => "unsolvable-evidence",
            HeadStatus::Unknown => "unknown",
        })
    }
}

/// Position of the head redex, if the term is not in head normal form.
pub fn head_redex(t: &Term) -> Option<Position> {
    let mut dirs = Vec::new();
    let mut cur = t;
    while let TermKind::Lam(_, b) = cur.kind() {
        dirs.push(Dir::Body);
        cur = b;
    }
    let (head, args) = cur.spine();
    if !head.is_lam() || args.is_empty() {
        return None;
    }
    // the redex is the innermost application on the spine
    dirs.extend(std::iter::repeat(Dir::Fun).take(args.len() - 1));
    Some(Position::from_dirs(dirs))
}

/// Head reduction: solvable on reaching `λx⃗.y N⃗`, unsolvable evidence when
/// the deterministic head path revisits a term.
pub fn head_status(t: &Term, budget: Budget) -> HeadStatus {
    let mut seen: HashSet<Term> = HashSet::new();
    let mut cur = t.clone();
    for _ in 0..=budget.max_steps {
        let Some(pos) = head_redex(&cur) else {
            return HeadStatus::Solvable;
        };
        if cur.size() > budget.max_term_size {
            return HeadStatus::Unknown;
        }
        if !seen.insert(cur.clone()) {
            return HeadStatus::UnsolvableEvidence;
        }
        cur = contract_at(&cur, &pos, Rule::Beta).expect("head redex contracts");
    }
    HeadStatus::Unknown
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::syntax::parse;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn step_examples() {
        assert_eq!(step(&p("(λx.x) y"), RuleSet::BETA), vec![p("y")]);
        assert_eq!(step(&catalog::omega(), RuleSet::BETA), vec![catalog::omega()]);
        assert_eq!(step(&p("λx.M x"), RuleSet::ETA), vec![p("M")]);
        assert!(step(&p("λx.x x"), RuleSet::ETA).is_empty());
    }

    #[test]
    fn eta_shifts_outer_indices() {
        // λy.λx.y x  →η  λy.y
        assert_eq!(step(&p("λy.λx.y x"), RuleSet::ETA), vec![p("λy.y")]);
    }

    #[test]
    fn redexes_come_in_preorder() {
        let t = p("(λx.x) ((λy.y) z)");
        let s = one_steps(&t, RuleSet::BETA);
        assert_eq!(s.len(), 2);
        assert!(s[0].position.is_root());
        assert_eq!(s[1].position.to_string(), "a");
        assert_eq!(contract_at(&t, &s[1].position, Rule::Beta), Some(s[1].result.clone()));
    }

    #[test]
    fn normalize_examples() {
        let b = Budget::default();
        assert_eq!(normalize(&p("(λx.x) y"), b), NormalizeOutcome::NormalForm { term: p("y"), steps: 1 });
        match normalize(&catalog::theta(), b) {
            NormalizeOutcome::CycleDetected { node, steps } => {
                assert_eq!(node, catalog::theta());
                assert_eq!(steps, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
        let t2 = Term::app(catalog::theta_n(2), Term::free("x"));
        assert!(matches!(
            normalize(&t2, b),
            NormalizeOutcome::CycleDetected { .. } | NormalizeOutcome::Exhausted { .. }
        ));
    }

    #[test]
    fn theta_zero_needs_three_steps_to_omega() {
        let mut cur = catalog::theta_n(0);
        for _ in 0..3 {
            assert_ne!(cur, catalog::omega());
            let next = step(&cur, RuleSet::BETA);
            assert_eq!(next.len(), 1);
            cur = next[0].clone();
        }
        assert_eq!(cur, catalog::omega());
    }

    #[test]
    fn head_status_examples() {
        let b = Budget::default();
        assert_eq!(head_status(&catalog::i(), b), HeadStatus::Solvable);
        assert_eq!(head_status(&catalog::omega(), b), HeadStatus::UnsolvableEvidence);
        assert_eq!(head_status(&catalog::theta(), b), HeadStatus::UnsolvableEvidence);
        assert_eq!(head_status(&p("λx.x Ω"), b), HeadStatus::Solvable);
        // (λx.x x x)(λx.x x x) grows without repeating
        assert_eq!(head_status(&p("(λx.x x x) (λx.x x x)"), Budget::new(50, 10, 1000)), HeadStatus::Unknown);
    }
}
