//! βηπ reduction traces and their factorization into βη steps followed by
//! π steps.

use thiserror::Error;

use crate::catalog;
use crate::pi::{as_pi_redex, PiOracle};
use crate::reduction::{contract_at, Rule, Step};
use crate::term::{Dir, Position, Term, TermKind};
use crate::Verdict;

/// A start term and the steps taken from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub start: Term,
    pub steps: Vec<Step>,
}

impl Trace {
    pub fn new(start: Term) -> Trace {
        Trace { start, steps: Vec::new() }
    }

    pub fn end(&self) -> &Term {
        self.steps.last().map(|s| &s.result).unwrap_or(&self.start)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn count(&self, rule: Rule) -> usize {
        self.steps.iter().filter(|s| s.rule == rule).count()
    }

    /// No π step is followed by a β or η step.
    pub fn is_factorized(&self) -> bool {
        let first_pi = self.steps.iter().position(|s| s.rule == Rule::Pi).unwrap_or(self.steps.len());
        self.steps[first_pi..].iter().all(|s| s.rule == Rule::Pi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("step {index}: {reason}")]
    InvalidStep { index: usize, reason: &'static str },
    #[error("step {index}: η-step above a π-redex whose arguments mention the η-bound variable")]
    NonFactorizable { index: usize },
    #[error("factorized trace exceeds {0} steps")]
    TooLong(usize),
}

/// Outcome of checking a trace: the shape is valid; π-premises were proved
/// except for `unproved_pi` of them, which the oracle left undecided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceCheck {
    pub unproved_pi: usize,
}

/// Validates every step. β/η steps are checked exactly, π steps by shape and
/// by the oracle; a refuted π-premise is an error.
pub fn validate(trace: &Trace, o: &PiOracle) -> Result<TraceCheck, TraceError> {
    let mut cur = trace.start.clone();
    let mut unproved_pi = 0;
    for (index, s) in trace.steps.iter().enumerate() {
        let next = match s.rule {
            Rule::Beta | Rule::Eta => contract_at(&cur, &s.position, s.rule),
            Rule::Pi => {
                let sub = cur.subterm(&s.position).ok_or(TraceError::InvalidStep { index, reason: "bad position" })?;
                let (m, n) = as_pi_redex(sub).ok_or(TraceError::InvalidStep { index, reason: "not a π-redex" })?;
                match o.eq(m, n) {
                    Verdict::Proved => {}
                    Verdict::Unknown => unproved_pi += 1,
                    Verdict::Refuted => return Err(TraceError::InvalidStep { index, reason: "π-premise refuted" }),
                }
                cur.replace_at(&s.position, catalog::omega())
            }
        };
        let next = next.ok_or(TraceError::InvalidStep { index, reason: "no redex of that rule" })?;
        if next != s.result {
            return Err(TraceError::InvalidStep { index, reason: "result mismatch" });
        }
        cur = next;
    }
    Ok(TraceCheck { unproved_pi })
}

/// Structural validation without consulting an oracle for π-premises.
pub fn validate_shape(trace: &Trace) -> Result<(), TraceError> {
    let mut cur = trace.start.clone();
    for (index, s) in trace.steps.iter().enumerate() {
        let next = match s.rule {
            Rule::Beta | Rule::Eta => contract_at(&cur, &s.position, s.rule),
            Rule::Pi => {
                let sub = cur.subterm(&s.position).ok_or(TraceError::InvalidStep { index, reason: "bad position" })?;
                as_pi_redex(sub).ok_or(TraceError::InvalidStep { index, reason: "not a π-redex" })?;
                cur.replace_at(&s.position, catalog::omega())
            }
        };
        let next = next.ok_or(TraceError::InvalidStep { index, reason: "no redex of that rule" })?;
        if next != s.result {
            return Err(TraceError::InvalidStep { index, reason: "result mismatch" });
        }
        cur = next;
    }
    Ok(())
}

/// Marker standing for Ψ while a βη step is replayed above a π-redex.
const MARKER: u32 = u32::MAX;

/// Positions of `App(App(marker, _), _)`.
fn marker_sites(t: &Term) -> Vec<Position> {
    fn go(t: &Term, path: &mut Vec<Dir>, out: &mut Vec<Position>) {
        if !t.has_holes() {
            return;
        }
        if let Some((fm, _)) = t.as_app() {
            if let Some((h, _)) = fm.as_app() {
                if matches!(h.kind(), TermKind::Hole(MARKER)) {
                    out.push(Position::from_dirs(path.clone()));
                }
            }
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

/// `M →π N →ρ Q` (ρ ∈ {β, η}) rewritten as `M →ρ⁼ M' ↠π Q`.
///
/// `m` is the term before the π step at `pi_pos`; `rho` is the βη step taken
/// from the π result.
fn commute(m: &Term, pi_pos: &Position, rho: &Step, index: usize) -> Result<Vec<Step>, TraceError> {
    let q = &rho.position;
    let pi_step = |from: &Term, pos: &Position| -> Result<Step, TraceError> {
        let result = from
            .replace_at(pos, catalog::omega())
            .ok_or(TraceError::InvalidStep { index, reason: "bad π position" })?;
        Ok(Step { rule: Rule::Pi, position: pos.clone(), result })
    };
    if q.disjoint(pi_pos) {
        let m1 = contract_at(m, q, rho.rule).ok_or(TraceError::InvalidStep { index, reason: "redex lost" })?;
        let p = pi_step(&m1, pi_pos)?;
        return Ok(vec![Step { rule: rho.rule, position: q.clone(), result: m1 }, p]);
    }
    if pi_pos.is_prefix_of(q) {
        // inside Ω the only redex is Ω itself, and Ω → Ω
        return Ok(vec![pi_step(m, pi_pos)?]);
    }
    // the βη redex sits strictly above the π-redex
    let sub = m.subterm(pi_pos).ok_or(TraceError::InvalidStep { index, reason: "bad π position" })?;
    let (a, b) = as_pi_redex(sub).ok_or(TraceError::InvalidStep { index, reason: "not a π-redex" })?;
    let marked_redex = Term::apps(Term::hole(MARKER), [a.clone(), b.clone()]);
    let marked = m.replace_at(pi_pos, marked_redex).expect("position exists");
    let Some(after) = contract_at(&marked, q, rho.rule) else {
        return Err(if rho.rule == Rule::Eta {
            TraceError::NonFactorizable { index }
        } else {
            TraceError::InvalidStep { index, reason: "redex lost" }
        });
    };
    let sites = marker_sites(&after);
    let psi = sub.as_app().and_then(|(f, _)| f.as_app()).map(|(p, _)| p.clone()).expect("π-redex shape");
    let mut cur = after;
    for s in &sites {
        let site = cur.subterm(s).expect("marker site");
        let (fm, n) = site.as_app().expect("marker app");
        let (_, mm) = fm.as_app().expect("marker app");
        let restored = Term::apps(psi.clone(), [mm.clone(), n.clone()]);
        cur = cur.replace_at(s, restored).expect("marker site");
    }
    let mut out = vec![Step { rule: rho.rule, position: q.clone(), result: cur.clone() }];
    for s in &sites {
        let p = pi_step(&cur, s)?;
        cur = p.result.clone();
        out.push(p);
    }
    Ok(out)
}

/// Reorders a βηπ trace so that all β/η steps precede all π steps, keeping
/// the endpoints. Only the shape of the input is checked; π-premises of the
/// residual π steps are substitution instances of the original ones.
pub fn factorize(trace: &Trace) -> Result<Trace, TraceError> {
    factorize_bounded(trace, 10_000)
}

pub fn factorize_bounded(trace: &Trace, max_len: usize) -> Result<Trace, TraceError> {
    validate_shape(trace)?;
    let mut steps = trace.steps.clone();
    loop {
        // first βη step preceded by a π step
        let Some(j) = (1..steps.len()).find(|&j| steps[j].rule != Rule::Pi && steps[j - 1].rule == Rule::Pi) else {
            break;
        };
        let before = if j >= 2 { steps[j - 2].result.clone() } else { trace.start.clone() };
        let replacement = commute(&before, &steps[j - 1].position, &steps[j], j)?;
        steps.splice(j - 1..=j, replacement);
        if steps.len() > max_len {
            return Err(TraceError::TooLong(max_len));
        }
    }
    let out = Trace { start: trace.start.clone(), steps };
    debug_assert!(validate_shape(&out).is_ok());
    Ok(out)
}
