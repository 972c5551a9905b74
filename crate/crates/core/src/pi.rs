//! The π-rule `Ψ M N → Ω` (Ψ ∈ 𝒢_β(Θ), λπ ⊢ M = N) and a fuel-bounded oracle
//! for λπ-provability.
//!
//! Provability is approximated from below by joinability under βηπ, where each
//! π-contraction needs a nested proof at one unit less fuel. Answers are
//! three-valued: `Proved` comes with a join path, `Refuted` only from two
//! complete graphs with every π-position decided.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::graph::{join_search, ReductionGraph, Stepper, Successors};
use crate::reduction::{contract_at, one_steps, Budget, Rule, RuleSet, Step};
use crate::term::{Dir, Position, Term, TermKind};
use crate::Verdict;

/// 𝒢_β(Θ) = {Θ, C(λy.y C), (λy.y C)B}.
pub fn g_beta_theta() -> &'static [Term; 3] {
    static G: OnceLock<[Term; 3]> = OnceLock::new();
    G.get_or_init(|| {
        let (b, c) = (catalog::b(), catalog::c());
        let yc = catalog::a_n(1).substitute("x", &c);
        [Term::app(b.clone(), c.clone()), Term::app(c, yc.clone()), Term::app(yc, b)]
    })
}

/// Membership in 𝒢_β(Θ), by α-equality.
pub fn is_psi(t: &Term) -> bool {
    g_beta_theta().iter().any(|g| g == t)
}

/// `(M, N)` when `t ≡ Ψ M N`.
pub fn as_pi_redex(t: &Term) -> Option<(&Term, &Term)> {
    let (fm, n) = t.as_app()?;
    let (psi, m) = fm.as_app()?;
    is_psi(psi).then_some((m, n))
}

/// All occurrences of `Ψ M N`, in pre-order.
pub fn pi_redex_sites(t: &Term) -> Vec<(Position, Term, Term)> {
    fn go(t: &Term, path: &mut Vec<Dir>, out: &mut Vec<(Position, Term, Term)>) {
        // Ψ has at least 18 nodes, so smaller subterms hold no π-redex
        if t.size() < 22 {
            return;
        }
        if let Some((m, n)) = as_pi_redex(t) {
            out.push((Position::from_dirs(path.clone()), m.clone(), n.clone()));
        }
        match t.kind() {
            TermKind::Lam(_, b) => {
                path.push(Dir::Body);
                go(b, path, out);
                path.pop();
            }
            TermKind::App(f, a) => {
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
    go(t, &mut Vec::new(), &mut out);
    out
}

/// Replaces the π-redex at `pos` with Ω, if the subterm there has the shape.
pub fn contract_pi_shape(t: &Term, pos: &Position) -> Option<Term> {
    let sub = t.subterm(pos)?;
    as_pi_redex(sub)?;
    t.replace_at(pos, catalog::omega())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleStats {
    pub queries: usize,
    pub memo_hits: usize,
}

/// Fuel-bounded, memoized approximation of `λπ ⊢ M = N`.
pub struct PiOracle {
    pub fuel: u32,
    pub budget: Budget,
    memo: Mutex<HashMap<(Term, Term, u32), Verdict>>,
    queries: AtomicUsize,
    hits: AtomicUsize,
}

impl PiOracle {
    pub fn new(fuel: u32, budget: Budget) -> PiOracle {
        PiOracle {
            fuel,
            budget,
            memo: Mutex::new(HashMap::new()),
            queries: AtomicUsize::new(0),
            hits: AtomicUsize::new(0),
        }
    }

    pub fn stats(&self) -> OracleStats {
        OracleStats { queries: self.queries.load(Ordering::Relaxed), memo_hits: self.hits.load(Ordering::Relaxed) }
    }

    pub fn clear_memo(&self) {
        self.memo.lock().expect("memo lock").clear();
    }

    /// Verdict at the oracle's own fuel.
    pub fn eq(&self, a: &Term, b: &Term) -> Verdict {
        self.eq_at(a, b, self.fuel)
    }

    pub fn eq_at(&self, a: &Term, b: &Term, fuel: u32) -> Verdict {
        self.queries.fetch_add(1, Ordering::Relaxed);
        if a == b {
            return Verdict::Proved;
        }
        let key = (a.clone(), b.clone(), fuel);
        {
            let memo = self.memo.lock().expect("memo lock");
            let cached = memo.get(&key).or_else(|| memo.get(&(b.clone(), a.clone(), fuel)));
            if let Some(v) = cached {
                self.hits.fetch_add(1, Ordering::Relaxed);
                return *v;
            }
        }
        // the lock is not held while searching: nested queries re-enter
        let v = join_search(&PiStepper { oracle: self, fuel }, a, b, self.budget).verdict;
        self.memo.lock().expect("memo lock").insert(key, v);
        v
    }

    /// A βηπ join of `a` and `b` at `fuel`, if one is found.
    pub fn witness_at(&self, a: &Term, b: &Term, fuel: u32) -> Option<JoinWitness> {
        let out = join_search(&PiStepper { oracle: self, fuel }, a, b, self.budget);
        let (left, right) = out.witness()?;
        Some(JoinWitness { meet: out.meet?, left, right })
    }

    /// Verdict for each π-redex occurrence of `t`, at the oracle's fuel.
    pub fn pi_redexes(&self, t: &Term) -> Vec<(Position, Verdict)> {
        pi_redex_sites(t).into_iter().map(|(p, m, n)| (p, self.eq(&m, &n))).collect()
    }

    /// βηπ successors with π-verdicts taken at `fuel - 1`.
    pub fn stepper(&self, fuel: u32) -> PiStepper<'_> {
        PiStepper { oracle: self, fuel }
    }

    /// 𝒢_βηπ(t) at the oracle's fuel.
    pub fn graph(&self, t: &Term, budget: Budget) -> ReductionGraph {
        ReductionGraph::build(t.clone(), &self.stepper(self.fuel), budget)
    }

    /// Checks that `steps` is a βηπ path from `start`; π-steps are re-proved
    /// and their nested witnesses replayed. Returns the endpoint.
    pub fn replay(&self, start: &Term, steps: &[Step], fuel: u32) -> Result<Term, ReplayError> {
        let mut cur = start.clone();
        for (i, s) in steps.iter().enumerate() {
            let next = match s.rule {
                Rule::Beta | Rule::Eta => contract_at(&cur, &s.position, s.rule),
                Rule::Pi => {
                    let sub = cur.subterm(&s.position).ok_or(ReplayError { index: i, reason: "bad position" })?;
                    let (m, n) = as_pi_redex(sub).ok_or(ReplayError { index: i, reason: "not a π-redex" })?;
                    if fuel == 0 {
                        return Err(ReplayError { index: i, reason: "no fuel left" });
                    }
                    let w = self
                        .witness_at(m, n, fuel - 1)
                        .ok_or(ReplayError { index: i, reason: "π-premise not proved" })?;
                    self.check_witness(m, n, &w, fuel - 1)
                        .map_err(|_| ReplayError { index: i, reason: "nested witness does not replay" })?;
                    cur.replace_at(&s.position, catalog::omega())
                }
            };
            let next = next.ok_or(ReplayError { index: i, reason: "not a redex" })?;
            if next != s.result {
                return Err(ReplayError { index: i, reason: "result mismatch" });
            }
            cur = next;
        }
        Ok(cur)
    }

    pub fn check_witness(&self, a: &Term, b: &Term, w: &JoinWitness, fuel: u32) -> Result<(), ReplayError> {
        let l = self.replay(a, &w.left, fuel)?;
        let r = self.replay(b, &w.right, fuel)?;
        if l == w.meet && r == w.meet {
            Ok(())
        } else {
            Err(ReplayError { index: usize::MAX, reason: "paths do not meet" })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JoinWitness {
    pub meet: Term,
    pub left: Vec<Step>,
    pub right: Vec<Step>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("step {index}: {reason}")]
pub struct ReplayError {
    pub index: usize,
    pub reason: &'static str,
}

/// βηπ one-step reduction; π at `Ψ M N` when the oracle proves `M = N` at
/// one less fuel.
pub struct PiStepper<'a> {
    oracle: &'a PiOracle,
    fuel: u32,
}

impl Stepper for PiStepper<'_> {
    fn successors(&self, t: &Term) -> Successors {
        let mut steps = one_steps(t, RuleSet::BETA_ETA);
        let mut unresolved = Vec::new();
        for (pos, m, n) in pi_redex_sites(t) {
            let v = if self.fuel == 0 { Verdict::Unknown } else { self.oracle.eq_at(&m, &n, self.fuel - 1) };
            match v {
                Verdict::Proved => {
                    let result = t.replace_at(&pos, catalog::omega()).expect("site position");
                    steps.push(Step { rule: Rule::Pi, position: pos, result });
                }
                Verdict::Refuted => {}
                Verdict::Unknown => unresolved.push(pos),
            }
        }
        Successors { steps, unresolved }
    }
}

/// λπ-equality at the oracle's fuel.
pub fn lambda_pi_eq(a: &Term, b: &Term, o: &PiOracle) -> Verdict {
    o.eq(a, b)
}

pub fn betaetapi_graph(t: &Term, o: &PiOracle, b: Budget) -> ReductionGraph {
    o.graph(t, b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Consistency {
    Consistent,
    Violation,
    Unknown,
}

/// `Θ M N =βηπ Ω` against `λπ ⊢ M = N`, both at the oracle's fuel.
pub fn theorem_2_4_ii_check(m: &Term, n: &Term, o: &PiOracle) -> (Consistency, Verdict, Verdict) {
    let lhs = o.eq(&Term::apps(catalog::theta(), [m.clone(), n.clone()]), &catalog::omega());
    let rhs = o.eq(m, n);
    let c = match (lhs, rhs) {
        (Verdict::Unknown, _) | (_, Verdict::Unknown) => Consistency::Unknown,
        (x, y) if x == y => Consistency::Consistent,
        _ => Consistency::Violation,
    };
    (c, lhs, rhs)
}

/// `μx.M ≡ Y(λx.M)`, binding the free name `x` of `body`.
pub fn mu(y: &Term, x: &str, body: &Term) -> Term {
    Term::app(y.clone(), Term::abstract_free(x, body))
}

/// Terms of the fixpoint construction of a λ-term that equals Θ applied to
/// itself twice: `D ≡ μy.μx.Θ x y`, `Θ D D` and `Y I`.
#[derive(Clone, Debug)]
pub struct PlotkinSimpson {
    pub d: Term,
    pub theta_dd: Term,
    pub y_i: Term,
}

pub fn plotkin_simpson_d(y: &Term) -> PlotkinSimpson {
    assert!(y.is_closed(), "Y must be closed");
    let inner = Term::apps(catalog::theta(), [Term::free("x"), Term::free("y")]);
    let d = mu(y, "y", &mu(y, "x", &inner));
    let theta_dd = Term::apps(catalog::theta(), [d.clone(), d.clone()]);
    let y_i = Term::app(y.clone(), catalog::i());
    PlotkinSimpson { d, theta_dd, y_i }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::parse_named;

    fn n(s: &str) -> Term {
        parse_named(s).unwrap()
    }

    fn oracle() -> PiOracle {
        PiOracle::new(2, Budget::new(2_000, 2_000, 300))
    }

    #[test]
    fn g_beta_theta_matches_the_graph() {
        let g = crate::graph::reduction_graph(&catalog::theta(), RuleSet::BETA, Budget::default());
        for psi in g_beta_theta() {
            assert!(g.contains(psi));
        }
        assert_eq!(g.node_count(), 3);
    }

    #[test]
    fn pi_redex_examples() {
        let o = oracle();
        assert_eq!(o.pi_redexes(&n("Theta x x")), vec![(Position::root(), Verdict::Proved)]);
        assert!(o.pi_redexes(&catalog::omega()).is_empty());
        assert_eq!(o.pi_redexes(&n("Theta T F")), vec![(Position::root(), Verdict::Refuted)]);
    }

    #[test]
    fn lambda_pi_eq_examples() {
        let o = oracle();
        assert_eq!(lambda_pi_eq(&n("Theta (λz.z z) (λz.z z)"), &catalog::omega(), &o), Verdict::Proved);
        assert_eq!(lambda_pi_eq(&catalog::theta(), &catalog::omega(), &o), Verdict::Refuted);
        assert_eq!(lambda_pi_eq(&catalog::i(), &catalog::i(), &o), Verdict::Proved);
        // needs one nested proof: I y = y
        assert_eq!(lambda_pi_eq(&n("Theta (I y) y"), &catalog::omega(), &o), Verdict::Proved);
    }

    #[test]
    fn pi_graphs() {
        let o = oracle();
        let g = o.graph(&n("Theta x x"), Budget::default());
        assert!(g.edges().iter().any(|e| e.rule == Rule::Pi && g.node(e.to) == &catalog::omega()));
        assert!(g.to_dot().contains("color=red"));
        let g = o.graph(&catalog::theta(), Budget::default());
        assert_eq!(g.node_count(), 3);
        assert!(g.is_settled());
        assert!(!g.rules_used().contains(&Rule::Pi));
        let g = o.graph(&catalog::i(), Budget::default());
        assert_eq!(g.node_count(), 1);
    }

    #[test]
    fn zero_fuel_leaves_pi_unresolved() {
        let o = PiOracle::new(0, Budget::default());
        assert_eq!(o.eq(&n("Theta x x"), &catalog::omega()), Verdict::Unknown);
        let g = o.graph(&n("Theta x x"), Budget::default());
        assert!(g.has_unresolved());
    }

    #[test]
    fn witnesses_replay() {
        let o = oracle();
        let (a, b) = (n("Theta (I y) y"), catalog::omega());
        let w = o.witness_at(&a, &b, o.fuel).unwrap();
        o.check_witness(&a, &b, &w, o.fuel).unwrap();
        assert!(w.left.iter().any(|s| s.rule == Rule::Pi));
    }

    #[test]
    fn theorem_2_4_ii_examples() {
        let o = oracle();
        assert_eq!(theorem_2_4_ii_check(&catalog::i(), &catalog::i(), &o).0, Consistency::Consistent);
        assert_eq!(theorem_2_4_ii_check(&catalog::t(), &catalog::f(), &o).0, Consistency::Consistent);
        let small = PiOracle::new(1, Budget::new(30, 30, 100));
        let omega_omega = Term::app(catalog::omega(), catalog::omega());
        assert_ne!(theorem_2_4_ii_check(&catalog::omega(), &omega_omega, &small).0, Consistency::Violation);
    }

    #[test]
    fn mu_of_identity_is_y_i() {
        let y = catalog::curry_y();
        assert_eq!(mu(&y, "x", &Term::free("x")), plotkin_simpson_d(&y).y_i);
    }
}
