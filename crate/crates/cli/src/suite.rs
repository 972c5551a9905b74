//! The acceptance battery. Each criterion runs at pinned sizes and budgets;
//! only the seed of the sampled criteria is configurable.

use std::fmt;
use std::time::{Duration, Instant};

use ordlam_algebra::corpus;
use ordlam_algebra::order::{enumerate_compatible_partial_orders, is_0_symmetric, is_0_unorderable, DEFAULT_MAX_SIZE};
use ordlam_algebra::search::{check_malcev, find_subtractive_witnesses, ChainSearch};
use ordlam_algebra::topalg::{separation_sweep, SepClaim};
use ordlam_algebra::topology::{enumerate_topologies, gamma_iteration, Level};
use ordlam_algebra::BinRel;
use ordlam_core::catalog::{self, parse_named};
use ordlam_core::gen::TermGen;
use ordlam_core::graph::{join_search, reduction_graph, Stepper};
use ordlam_core::jk::{constant_witnesses, eliminate_all, standard_packs, ProofSkeleton};
use ordlam_core::pi::{lambda_pi_eq, plotkin_simpson_d, PiOracle};
use ordlam_core::reduction::{normalize, RuleSet};
use ordlam_core::trace::{factorize, validate};
use ordlam_core::{graph::joinable, Budget, Rule, Term, Verdict};
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub limit: Duration,
}

impl fmt::Display for Outcome {
    /// One line, without timings so reports stay reproducible.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{verdict} [{:>2}] {}: {}", self.id, self.name, self.detail)
    }
}

pub struct Criterion {
    pub id: usize,
    pub name: &'static str,
    pub limit: Duration,
    run: fn(u64) -> (bool, String),
}

impl Criterion {
    pub fn run(&self, seed: u64) -> Outcome {
        let t = Instant::now();
        let (ok, detail) = (self.run)(seed);
        let elapsed = t.elapsed();
        let in_time = elapsed <= self.limit;
        let detail = if in_time { detail } else { format!("{detail}; over the {:?} limit", self.limit) };
        Outcome { id: self.id, name: self.name, pass: ok && in_time, detail, elapsed, limit: self.limit }
    }
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

pub const CRITERIA: [Criterion; 12] = [
    Criterion { id: 1, name: "Θ β-cycle", limit: secs(1), run: theta_cycle },
    Criterion { id: 2, name: "Θₙ family", limit: secs(5), run: theta_family },
    Criterion { id: 3, name: "π-axioms", limit: secs(30), run: pi_axioms },
    Criterion { id: 4, name: "sampled Church–Rosser", limit: secs(300), run: church_rosser },
    Criterion { id: 5, name: "factorization", limit: secs(120), run: factorization },
    Criterion { id: 6, name: "βη-normal ⇒ βηπ-normal", limit: secs(60), run: normal_forms },
    Criterion { id: 7, name: "2-subtractive ⇒ 0-unorderable, 0-symmetric", limit: secs(600), run: zero_sweep },
    Criterion { id: 8, name: "Mal'cev ⇒ unorderable", limit: secs(600), run: malcev_sweep },
    Criterion { id: 9, name: "separation sweep", limit: secs(900), run: separation },
    Criterion { id: 10, name: "Γ₁ ⇔ T₂", limit: secs(10), run: gamma_t2 },
    Criterion { id: 11, name: "proof transformation audit", limit: secs(60), run: jk_audit },
    Criterion { id: 12, name: "fixpoint construction", limit: secs(10), run: plotkin_simpson },
];

pub fn criterion(id: usize) -> &'static Criterion {
    CRITERIA.iter().find(|c| c.id == id).expect("criterion ids are 1..=12")
}

pub fn run_all(seed: u64, only: &[usize]) -> Vec<Outcome> {
    CRITERIA.iter().filter(|c| only.is_empty() || only.contains(&c.id)).map(|c| c.run(seed)).collect()
}

fn theta_cycle(_: u64) -> (bool, String) {
    let g = reduction_graph(&catalog::theta(), RuleSet::BETA, Budget::default());
    let shape = g.functional_shape();
    let ok = g.is_complete()
        && g.frontier().is_empty()
        && g.node_count() == 3
        && shape.is_some_and(|s| s.tail == 0 && s.cycle == 3)
        && g.rules_used() == vec![Rule::Beta];
    let shape = shape.map_or("not functional".to_string(), |s| format!("tail {} cycle {}", s.tail, s.cycle));
    (ok, format!("{} nodes, {} edges, {shape}, β only: {}", g.node_count(), g.edges().len(), g.rules_used() == vec![Rule::Beta]))
}

fn theta_family(_: u64) -> (bool, String) {
    let graphs: Vec<_> = (0..=5).map(|n| reduction_graph(&catalog::theta_n(n), RuleSet::BETA_ETA, Budget::default())).collect();
    let mut ok = graphs.iter().all(|g| g.is_complete());
    let mut shapes = Vec::new();
    for (n, g) in graphs.iter().enumerate() {
        let s = g.functional_shape();
        shapes.push(match s {
            Some(s) => format!("Θ{n} {}+{}", s.tail, s.cycle),
            None => format!("Θ{n} branching"),
        });
        if n >= 1 {
            ok &= s.is_some() && g.rules_used() == vec![Rule::Beta];
        }
    }
    ok &= graphs[0].contains(&catalog::omega());
    let mut overlaps = 0;
    for n in 0..graphs.len() {
        for m in n + 1..graphs.len() {
            overlaps += graphs[n].nodes().iter().filter(|t| graphs[m].contains(t)).count();
        }
    }
    ok &= overlaps == 0;
    (ok, format!("{}; Θ0 reaches Ω: {}; shared nodes {overlaps}", shapes.join(", "), graphs[0].contains(&catalog::omega())))
}

fn oracle() -> PiOracle {
    PiOracle::new(2, Budget::new(200, 200, 120))
}

fn pi_axioms(seed: u64) -> (bool, String) {
    let o = PiOracle::new(2, Budget::new(2_000, 2_000, 300));
    let mut g = TermGen::new(seed.wrapping_add(3));
    let mut proved = 0;
    let omega = catalog::omega();
    for _ in 0..100 {
        let m = g.term(12);
        debug_assert!(m.is_closed());
        if lambda_pi_eq(&Term::apps(catalog::theta(), [m.clone(), m]), &omega, &o) == Verdict::Proved {
            proved += 1;
        }
    }
    let theta = lambda_pi_eq(&catalog::theta(), &omega, &o);
    (proved == 100 && theta == Verdict::Refuted, format!("Θ M M = Ω proved {proved}/100; Θ = Ω {theta}"))
}

fn church_rosser(seed: u64) -> (bool, String) {
    let o = oracle();
    let st = o.stepper(o.fuel);
    let mut g = TermGen::new(seed.wrapping_add(4));
    let join_budget = Budget::new(300, 300, 150);
    let (mut peaks, mut joined, mut refuted, mut unknown) = (0, 0, 0, 0);
    let mut first_bad = None;
    for _ in 0..10_000 {
        let t = g.term(14);
        let succ = st.successors(&t).steps;
        for i in 0..succ.len() {
            for j in i + 1..succ.len() {
                peaks += 1;
                match join_search(&st, &succ[i].result, &succ[j].result, join_budget).verdict {
                    Verdict::Proved => joined += 1,
                    Verdict::Unknown => unknown += 1,
                    Verdict::Refuted => {
                        refuted += 1;
                        first_bad.get_or_insert_with(|| t.to_string());
                    }
                }
            }
        }
    }
    let mut detail = format!("10000 terms, {peaks} peaks: {joined} joined, {refuted} counterexamples, {unknown} unresolved");
    if let Some(t) = first_bad {
        detail.push_str(&format!("; first at {t}"));
    }
    (refuted == 0 && joined > 0, detail)
}

fn factorization(seed: u64) -> (bool, String) {
    let o = oracle();
    let mut g = TermGen::new(seed.wrapping_add(5));
    let (mut ok, mut pi_steps, mut unproved) = (0, 0, 0);
    let mut first_bad = None;
    for i in 0..1000 {
        let t = g.term(12);
        let tr = g.trace(t, 20, &o, 150);
        pi_steps += tr.count(Rule::Pi);
        let good = match factorize(&tr) {
            Ok(f) => {
                let shape = f.start == tr.start && f.end() == tr.end() && f.is_factorized();
                match validate(&f, &o) {
                    Ok(c) if shape => {
                        unproved += c.unproved_pi;
                        true
                    }
                    _ => false,
                }
            }
            Err(_) => false,
        };
        if good {
            ok += 1;
        } else {
            first_bad.get_or_insert(i);
        }
    }
    let mut detail = format!("{ok}/1000 traces factorized ({pi_steps} π-steps in input, {unproved} π-premises undecided)");
    if let Some(i) = first_bad {
        detail.push_str(&format!("; first failure at trace {i}"));
    }
    (ok == 1000, detail)
}

fn normal_forms(seed: u64) -> (bool, String) {
    let o = oracle();
    let mut g = TermGen::new(seed.wrapping_add(6));
    let (mut corpus, mut bad) = (0, 0);
    for _ in 0..10_000 {
        let t = g.term(14);
        if let Some(nf) = normalize(&t, Budget::new(500, 500, 200)).normal_form() {
            corpus += 1;
            if !o.pi_redexes(nf).is_empty() || !o.stepper(o.fuel).successors(nf).steps.is_empty() {
                bad += 1;
            }
        }
    }
    (bad == 0 && corpus > 0, format!("{corpus} normal forms, {bad} with a βηπ-redex"))
}

fn zero_sweep(_: u64) -> (bool, String) {
    let (mut with, mut bad) = (0, 0);
    for a in corpus::all_binary_tables(3) {
        if find_subtractive_witnesses(&a, 0, 2, 3).ok().flatten().is_some() {
            with += 1;
            let good = is_0_unorderable(&a, 0, DEFAULT_MAX_SIZE).unwrap_or(false)
                && is_0_symmetric(&a, 0, DEFAULT_MAX_SIZE).unwrap_or(false);
            bad += !good as usize;
        }
    }
    (bad == 0 && with > 0, format!("{} tables, {with} 2-subtractive, {bad} violations", corpus::binary_table_count(3)))
}

/// Checked in contrapositive form: Mal'cev terms are searched for in every
/// algebra that has a compatible partial order other than equality.
fn malcev_sweep(_: u64) -> (bool, String) {
    let algebras = corpus::curated()
        .into_iter()
        .map(|(_, a)| a)
        .chain((1..=3).flat_map(corpus::all_binary_tables));
    let (mut total, mut orderable, mut bad, mut errors) = (0, 0, 0, 0);
    for a in algebras {
        total += 1;
        let Ok(orders) = enumerate_compatible_partial_orders(&a, DEFAULT_MAX_SIZE) else {
            errors += 1;
            continue;
        };
        if orders == vec![BinRel::equality(a.size)] {
            continue;
        }
        orderable += 1;
        if let Some((_, ps)) = ChainSearch::malcev(&a, 3).least_witness(3) {
            bad += 1;
            debug_assert!(check_malcev(&a, &ps).unwrap_or(false));
        }
    }
    let detail = format!("{total} algebras, {orderable} orderable, {bad} of those with Mal'cev terms (n ≤ 3, depth ≤ 3)");
    (bad == 0 && errors == 0 && orderable > 0, detail)
}

fn separation(_: u64) -> (bool, String) {
    let wanted = [SepClaim::ZeroClosed, SepClaim::T1InZero, SepClaim::TwoSubtractiveT2Half, SepClaim::StepHausdorffInZero];
    match separation_sweep(3, 3) {
        Ok(s) => {
            let cited = s.failures.iter().filter(|f| wanted.iter().any(|c| c.name() == f.3)).count();
            let detail = format!(
                "{} tables ({} 2-subtractive) × {} T₀ spaces: {} topological algebras, {} failed statements ({cited} cited)",
                s.tables,
                s.subtractive_tables,
                s.spaces,
                s.checked,
                s.failures.len()
            );
            (s.failures.is_empty() && s.checked > 0, detail)
        }
        Err(e) => (false, e.to_string()),
    }
}

fn gamma_t2(_: u64) -> (bool, String) {
    let (mut spaces, mut bad) = (0, 0);
    for k in 1..=3 {
        for s in enumerate_topologies(k) {
            spaces += 1;
            let one_step = (0..k).all(|a| gamma_iteration(&s, a)[1] == s.full() & !(1 << a));
            bad += (one_step != s.satisfies(Level::T2)) as usize;
        }
    }
    (bad == 0, format!("{spaces} spaces, {bad} disagreements"))
}

/// Link bodies over slots `a`, `b` (packs of length one). The second body
/// swaps the slots, so consecutive links agree under `P, Q ↦ Q, P`.
fn swap_bodies(head: &str, erased: &str, tail: &str) -> [String; 2] {
    [format!("{head} (a Omega) ((\\u.{erased}) b) {tail}"), format!("{head} (b Omega) ((\\u.{erased}) a) {tail}")]
}

pub fn hand_built_skeletons() -> Vec<ProofSkeleton> {
    let variants = [("F", "I", "T"), ("T", "F", "I"), ("\\z.z", "T", "F"), ("\\x y z.y", "K", "Omega"), ("\\w.w w", "B", "C")];
    let (p, q) = standard_packs();
    let mut out = Vec::new();
    for len in 1..=4 {
        for (head, erased, tail) in variants {
            let bodies = swap_bodies(head, erased, tail);
            let links: Vec<Term> =
                (0..len).map(|j| parse_named(&format!("\\a b.{}", bodies[j % 2])).expect("skeleton bodies parse")).collect();
            let start = Term::apps(links[0].clone(), p.iter().chain(&q).cloned());
            let end = Term::apps(links[len - 1].clone(), q.iter().chain(&p).cloned());
            out.push(ProofSkeleton::new(start, end, links, p.clone(), q.clone()).expect("packs have equal length"));
        }
    }
    out
}

fn jk_audit(_: u64) -> (bool, String) {
    let o = PiOracle::new(2, Budget::new(2_000, 2_000, 300));
    let skeletons = hand_built_skeletons();
    let (mut ok, mut steps, mut assumptions) = (0, 0, 0);
    let mut first_bad = None;
    for (i, s) in skeletons.iter().enumerate() {
        debug_assert_eq!(constant_witnesses(s).len(), s.len() - 1);
        let good = match eliminate_all(s, &o) {
            Ok(ts) => {
                steps += ts.len();
                let lens: Vec<usize> = ts.iter().map(|t| t.skeleton.len()).collect();
                let expect: Vec<usize> = (0..s.len()).rev().collect();
                assumptions += ts.iter().map(|t| t.assumptions().count()).sum::<usize>();
                lens == expect
                    && ts.iter().all(|t| t.skeleton.start == s.start && t.skeleton.end == s.end && t.assumptions().count() == 0)
            }
            Err(_) => false,
        };
        if good {
            ok += 1;
        } else {
            first_bad.get_or_insert(i);
        }
    }
    let mut detail = format!("{ok}/{} skeletons, {steps} eliminations, {assumptions} undecided claims", skeletons.len());
    if let Some(i) = first_bad {
        detail.push_str(&format!("; first failure at skeleton {i}"));
    }
    (ok == skeletons.len() && skeletons.len() == 20, detail)
}

fn plotkin_simpson(_: u64) -> (bool, String) {
    let ps = plotkin_simpson_d(&catalog::curry_y());
    let b = Budget::new(20_000, 20_000, 400);
    let d = joinable(&ps.d, &ps.theta_dd, RuleSet::BETA, b);
    let y = joinable(&ps.y_i, &catalog::omega(), RuleSet::BETA, b);
    (d == Verdict::Proved && y == Verdict::Proved, format!("D ~ Θ D D {d}; Y I ~ Ω {y}"))
}
