//! Proof skeletons of λπ-equalities between closed λ-terms and the
//! transformation that removes one link at a time.
//!
//! A skeleton with links F₁…Fₙ and packs P⃗, Q⃗ records the chain
//!
//! ```text
//! T = F₁ P⃗ Q⃗,   Fⱼ Q⃗ P⃗ = Fⱼ₊₁ P⃗ Q⃗,   Fₙ Q⃗ P⃗ = F
//! ```
//!
//! Given witnesses G₁…Gₙ₋₁ with `Gⱼ P⃗ Q⃗ = Fⱼ Q⃗ Q⃗` and `Gⱼ Q⃗ P⃗ = Fⱼ₊₁ Q⃗ Q⃗`,
//! [`transform_proof`] produces the skeleton with links G₁…Gₙ₋₁. Every
//! equation used is checked by the oracle; undecided ones are kept as
//! assumptions in the audit log.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::parse_named;
use crate::pi::PiOracle;
use crate::reduction::{is_normal, RuleSet};
use crate::syntax::print;
use crate::term::Term;
use crate::Verdict;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofSkeleton {
    pub start: Term,
    pub end: Term,
    pub links: Vec<Term>,
    pub p: Vec<Term>,
    pub q: Vec<Term>,
}

#[derive(Serialize, Deserialize)]
struct SkeletonJson {
    start: String,
    end: String,
    links: Vec<String>,
    p: Vec<String>,
    q: Vec<String>,
}

#[derive(Debug, Error)]
pub enum JkError {
    #[error("term {field}: {message}")]
    Parse { field: String, message: String },
    #[error("packs have lengths {p} and {q}")]
    PackMismatch { p: usize, q: usize },
    #[error("expected {expected} witnesses, got {got}")]
    WitnessCount { expected: usize, got: usize },
    #[error("skeleton has no links")]
    Empty,
    #[error("{claim} is refuted (check {index})")]
    Refuted { index: usize, claim: String },
    #[error("normal form check: {0}")]
    NotNormal(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl ProofSkeleton {
    pub fn new(start: Term, end: Term, links: Vec<Term>, p: Vec<Term>, q: Vec<Term>) -> Result<Self, JkError> {
        if p.len() != q.len() {
            return Err(JkError::PackMismatch { p: p.len(), q: q.len() });
        }
        Ok(ProofSkeleton { start, end, links, p, q })
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn from_json(text: &str) -> Result<Self, JkError> {
        let raw: SkeletonJson = serde_json::from_str(text)?;
        let parse = |field: String, s: &str| {
            parse_named(s).map_err(|e| JkError::Parse { field, message: e.to_string() })
        };
        let many = |name: &str, v: &[String]| -> Result<Vec<Term>, JkError> {
            v.iter().enumerate().map(|(i, s)| parse(format!("{name}[{i}]"), s)).collect()
        };
        ProofSkeleton::new(
            parse("start".into(), &raw.start)?,
            parse("end".into(), &raw.end)?,
            many("links", &raw.links)?,
            many("p", &raw.p)?,
            many("q", &raw.q)?,
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        let all = |v: &[Term]| v.iter().map(print).collect::<Vec<_>>();
        serde_json::to_value(SkeletonJson {
            start: print(&self.start),
            end: print(&self.end),
            links: all(&self.links),
            p: all(&self.p),
            q: all(&self.q),
        })
        .expect("skeleton serializes")
    }

    /// `f x⃗ y⃗`
    fn apply(f: &Term, xs: &[Term], ys: &[Term]) -> Term {
        Term::apps(f.clone(), xs.iter().chain(ys).cloned())
    }

    /// The equations that make up the chain, in order.
    pub fn claims(&self) -> Vec<Claim> {
        let (p, q) = (&self.p, &self.q);
        let n = self.links.len();
        if n == 0 {
            return vec![Claim::new("T = F", self.start.clone(), self.end.clone())];
        }
        let f = |j: usize| &self.links[j - 1];
        let mut out = vec![Claim::new("T = F1 P Q", self.start.clone(), Self::apply(f(1), p, q))];
        for j in 1..n {
            out.push(Claim::new(
                format!("F{j} Q P = F{} P Q", j + 1),
                Self::apply(f(j), q, p),
                Self::apply(f(j + 1), p, q),
            ));
        }
        out.push(Claim::new(format!("F{n} Q P = F"), Self::apply(f(n), q, p), self.end.clone()));
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim {
    pub name: String,
    pub lhs: Term,
    pub rhs: Term,
}

impl Claim {
    fn new(name: impl Into<String>, lhs: Term, rhs: Term) -> Claim {
        Claim { name: name.into(), lhs, rhs }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Input,
    OpDefiniteness,
    Witness,
    Output,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AuditEntry {
    pub stage: Stage,
    pub claim: String,
    pub lhs: String,
    pub rhs: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug)]
pub struct Transformed {
    pub skeleton: ProofSkeleton,
    /// `Hⱼ = λy⃗.Fⱼ Q⃗ y⃗`
    pub h: Vec<Term>,
    /// `H'ⱼ = λy⃗.Fⱼ y⃗ Q⃗`
    pub h_prime: Vec<Term>,
    pub audit: Vec<AuditEntry>,
}

impl Transformed {
    /// Audit entries the oracle could not decide.
    pub fn assumptions(&self) -> impl Iterator<Item = &AuditEntry> {
        self.audit.iter().filter(|e| e.verdict == Verdict::Unknown)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "skeleton": self.skeleton.to_json(),
            "h": self.h.iter().map(print).collect::<Vec<_>>(),
            "h_prime": self.h_prime.iter().map(print).collect::<Vec<_>>(),
            "audit": self.audit,
            "assumptions": self.assumptions().count(),
        })
    }
}

struct Auditor<'a> {
    oracle: &'a PiOracle,
    log: Vec<AuditEntry>,
}

impl Auditor<'_> {
    fn check(&mut self, stage: Stage, c: &Claim) -> Result<Verdict, JkError> {
        let verdict = self.oracle.eq(&c.lhs, &c.rhs);
        let index = self.log.len();
        self.log.push(AuditEntry {
            stage,
            claim: c.name.clone(),
            lhs: print(&c.lhs),
            rhs: print(&c.rhs),
            verdict,
        });
        if verdict == Verdict::Refuted {
            return Err(JkError::Refuted { index, claim: c.name.clone() });
        }
        Ok(verdict)
    }
}

/// `λy₁…yₖ.f a⃗ y⃗` when `vars_last`, else `λy₁…yₖ.f y⃗ a⃗`.
fn abstract_pack(f: &Term, fixed: &[Term], vars_last: bool) -> Term {
    let k = fixed.len() as u32;
    let vars: Vec<Term> = (0..k).rev().map(Term::var).collect();
    let fixed: Vec<Term> = fixed.iter().map(|t| t.shift(k as i64, 0)).collect();
    let f = f.shift(k as i64, 0);
    let body = if vars_last { ProofSkeleton::apply(&f, &fixed, &vars) } else { ProofSkeleton::apply(&f, &vars, &fixed) };
    (0..k).fold(body, |b, i| Term::lam(&format!("y{}", k - i), b))
}

/// Candidate witnesses `Gⱼ = λx⃗ y⃗.Fⱼ Q⃗ Q⃗`. They satisfy the first witness
/// equation by β; the second holds when `Fⱼ Q⃗ Q⃗ = Fⱼ₊₁ Q⃗ Q⃗`.
pub fn constant_witnesses(s: &ProofSkeleton) -> Vec<Term> {
    let k = s.p.len() * 2;
    (0..s.links.len().saturating_sub(1))
        .map(|j| {
            let body = ProofSkeleton::apply(&s.links[j], &s.q, &s.q).shift(k as i64, 0);
            (0..k).fold(body, |b, i| Term::lam(&format!("x{}", k - i), b))
        })
        .collect()
}

/// One elimination step: n links become n - 1 (or the direct chain
/// `T = F₁ Q⃗ Q⃗ = F` when n = 1).
pub fn transform_proof(s: &ProofSkeleton, witnesses: &[Term], oracle: &PiOracle) -> Result<Transformed, JkError> {
    let n = s.links.len();
    if n == 0 {
        return Err(JkError::Empty);
    }
    if witnesses.len() != n - 1 {
        return Err(JkError::WitnessCount { expected: n - 1, got: witnesses.len() });
    }
    let (p, q) = (&s.p, &s.q);
    let f = |j: usize| &s.links[j - 1];
    let g = |j: usize| &witnesses[j - 1];
    let ap = ProofSkeleton::apply;
    let mut a = Auditor { oracle, log: Vec::new() };

    for c in s.claims() {
        a.check(Stage::Input, &c)?;
    }

    let h: Vec<Term> = (1..=n).map(|j| abstract_pack(f(j), q, true)).collect();
    let h_prime: Vec<Term> = (1..=n).map(|j| abstract_pack(f(j), q, false)).collect();
    // Hⱼ y⃗ = Fⱼ Q⃗ y⃗ and H'ⱼ y⃗ = Fⱼ y⃗ Q⃗; op-definiteness moves each P⃗ to Q⃗
    let q_at = |t: &Term| Term::apps(t.clone(), q.iter().cloned());
    a.check(Stage::OpDefiniteness, &Claim::new("T = H'1 Q", s.start.clone(), q_at(&h_prime[0])))?;
    for j in 1..n {
        a.check(
            Stage::OpDefiniteness,
            &Claim::new(format!("H{j} Q = H'{} Q", j + 1), q_at(&h[j - 1]), q_at(&h_prime[j])),
        )?;
    }
    a.check(Stage::OpDefiniteness, &Claim::new(format!("H{n} Q = F"), q_at(&h[n - 1]), s.end.clone()))?;

    for j in 1..n {
        a.check(Stage::Witness, &Claim::new(format!("G{j} P Q = F{j} Q Q"), ap(g(j), p, q), ap(f(j), q, q)))?;
        a.check(
            Stage::Witness,
            &Claim::new(format!("G{j} Q P = F{} Q Q", j + 1), ap(g(j), q, p), ap(f(j + 1), q, q)),
        )?;
    }

    // the new chain, replayed link by link
    let mut chain = vec![Claim::new("T = F1 Q Q", s.start.clone(), ap(f(1), q, q))];
    if n == 1 {
        chain.push(Claim::new("F1 Q Q = F", ap(f(1), q, q), s.end.clone()));
    } else {
        chain.push(Claim::new("F1 Q Q = G1 P Q", ap(f(1), q, q), ap(g(1), p, q)));
        for j in 1..n - 1 {
            chain.push(Claim::new(format!("G{j} Q P = F{} Q Q", j + 1), ap(g(j), q, p), ap(f(j + 1), q, q)));
            chain.push(Claim::new(
                format!("F{} Q Q = G{} P Q", j + 1, j + 1),
                ap(f(j + 1), q, q),
                ap(g(j + 1), p, q),
            ));
        }
        chain.push(Claim::new(format!("G{} Q P = F{n} Q Q", n - 1), ap(g(n - 1), q, p), ap(f(n), q, q)));
        chain.push(Claim::new(format!("F{n} Q Q = F"), ap(f(n), q, q), s.end.clone()));
    }
    for c in &chain {
        a.check(Stage::Output, c)?;
    }

    let skeleton = ProofSkeleton { start: s.start.clone(), end: s.end.clone(), links: witnesses.to_vec(), p: p.clone(), q: q.clone() };
    Ok(Transformed { skeleton, h, h_prime, audit: a.log })
}

/// Repeats [`transform_proof`] with [`constant_witnesses`] until no links
/// remain. Returns every intermediate result.
pub fn eliminate_all(s: &ProofSkeleton, oracle: &PiOracle) -> Result<Vec<Transformed>, JkError> {
    let mut cur = s.clone();
    let mut out = Vec::new();
    while !cur.is_empty() {
        let w = constant_witnesses(&cur);
        let t = transform_proof(&cur, &w, oracle)?;
        cur = t.skeleton.clone();
        out.push(t);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OpDefReport {
    /// `F P⃗ = N`
    pub antecedent: Verdict,
    /// `F Q⃗ = N`
    pub consequent: Verdict,
    /// `Proved` when both hold, `Refuted` when the antecedent holds and the
    /// consequent fails, `Unknown` otherwise (including when the instance
    /// does not apply).
    pub verdict: Verdict,
}

/// One instance of operational definiteness: `λπ ⊢ F P⃗ = N` implies
/// `λπ ⊢ F Q⃗ = N` for βη-normal `N`.
pub fn check_op_definiteness_instance(
    f: &Term,
    p: &[Term],
    q: &[Term],
    n: &Term,
    oracle: &PiOracle,
) -> Result<OpDefReport, JkError> {
    if p.len() != q.len() {
        return Err(JkError::PackMismatch { p: p.len(), q: q.len() });
    }
    if !is_normal(n, RuleSet::BETA_ETA) {
        return Err(JkError::NotNormal(print(n)));
    }
    let antecedent = oracle.eq(&Term::apps(f.clone(), p.iter().cloned()), n);
    let consequent = oracle.eq(&Term::apps(f.clone(), q.iter().cloned()), n);
    let verdict = match (antecedent, consequent) {
        (Verdict::Proved, Verdict::Proved) => Verdict::Proved,
        (Verdict::Proved, Verdict::Refuted) => Verdict::Refuted,
        _ => Verdict::Unknown,
    };
    Ok(OpDefReport { antecedent, consequent, verdict })
}

/// `P = λx.Θ x Ω`, `Q = I`.
pub fn standard_packs() -> (Vec<Term>, Vec<Term>) {
    (vec![crate::labelled::abs_theta_omega()], vec![crate::catalog::i()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::reduction::Budget;

    fn n(s: &str) -> Term {
        parse_named(s).unwrap()
    }

    fn oracle() -> PiOracle {
        PiOracle::new(2, Budget::new(2000, 2000, 300))
    }

    /// Links `λa b.bodyⱼ` with bodyⱼ₊₁ the swap of bodyⱼ; the pack slots only
    /// occur applied to Ω or erased.
    fn swap_skeleton(len: usize) -> ProofSkeleton {
        let (p, q) = standard_packs();
        let bodies = ["F (a Omega) ((\\u.I) b) T", "F (b Omega) ((\\u.I) a) T"];
        let links: Vec<Term> =
            (0..len).map(|j| n(&format!("\\a b.{}", bodies[j % 2]))).collect();
        let start = Term::apps(links[0].clone(), p.iter().chain(&q).cloned());
        let end = Term::apps(links[len - 1].clone(), q.iter().chain(&p).cloned());
        ProofSkeleton::new(start, end, links, p, q).unwrap()
    }

    #[test]
    fn json_round_trip() {
        let s = swap_skeleton(2);
        let text = s.to_json().to_string();
        assert_eq!(ProofSkeleton::from_json(&text).unwrap(), s);
    }

    #[test]
    fn removes_one_link() {
        let o = oracle();
        for len in 1..=3 {
            let s = swap_skeleton(len);
            let w = constant_witnesses(&s);
            let t = transform_proof(&s, &w, &o).unwrap();
            assert_eq!(t.skeleton.len(), len - 1);
            assert_eq!(t.skeleton.start, s.start);
            assert_eq!(t.skeleton.end, s.end);
            assert_eq!(t.assumptions().count(), 0, "{:#?}", t.audit);
        }
    }

    #[test]
    fn eliminates_to_direct_chain() {
        let o = oracle();
        let steps = eliminate_all(&swap_skeleton(3), &o).unwrap();
        assert_eq!(steps.iter().map(|t| t.skeleton.len()).collect::<Vec<_>>(), vec![2, 1, 0]);
    }

    #[test]
    fn refuted_witness_aborts() {
        let o = oracle();
        let s = swap_skeleton(2);
        let err = transform_proof(&s, &[catalog::i()], &o).unwrap_err();
        assert!(matches!(err, JkError::Refuted { .. }), "{err}");
    }

    #[test]
    fn h_terms() {
        let s = swap_skeleton(1);
        let (_, q) = standard_packs();
        let h = abstract_pack(&s.links[0], &q, true);
        assert_eq!(h, Term::lam("y", Term::apps(s.links[0].clone(), [catalog::i(), Term::var(0)])));
        let hp = abstract_pack(&s.links[0], &q, false);
        assert_eq!(hp, Term::lam("y", Term::apps(s.links[0].clone(), [Term::var(0), catalog::i()])));
    }

    #[test]
    fn op_definiteness_instances() {
        let o = oracle();
        let (p, q) = standard_packs();
        let r = check_op_definiteness_instance(&n("\\z.z Omega"), &p, &q, &catalog::omega(), &o);
        // Ω is not normal
        assert!(matches!(r, Err(JkError::NotNormal(_))));
        let r = check_op_definiteness_instance(&n("\\z.(\\u.I) z"), &p, &q, &catalog::i(), &o).unwrap();
        assert_eq!(r.verdict, Verdict::Proved);
        let r = check_op_definiteness_instance(&n("\\z.z I"), &p, &q, &catalog::i(), &o).unwrap();
        assert_eq!(r.antecedent, Verdict::Refuted);
        assert_eq!(r.verdict, Verdict::Unknown);
    }
}
