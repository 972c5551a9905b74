//! Subcommands. Each returns its report text and whether an invariant was
//! violated.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use ordlam_algebra::order::{
    enumerate_compatible_partial_orders, enumerate_compatible_preorders, hasse_dot, is_0_symmetric, is_0_unorderable,
    DEFAULT_PREORDER_BUDGET,
};
use ordlam_algebra::search::{find_malcev_terms, find_subtractive_witnesses, ChainSearch};
use ordlam_algebra::topalg::{check_top_algebra, separation_sweep, subtractive_separation_suite, Mode, Outcome};
use ordlam_algebra::topology::{elements, gamma_iteration, specialization_dot, FiniteSpace, Level};
use ordlam_algebra::{AlgTerm, FiniteAlgebra};
use ordlam_core::catalog::parse_named;
use ordlam_core::jk::{constant_witnesses, eliminate_all, transform_proof, ProofSkeleton};
use ordlam_core::pi::{lambda_pi_eq, PiOracle};
use ordlam_core::reduction::{normalize_with, NormalizeOutcome, RuleSet};
use ordlam_core::{graph::reduction_graph, print, Term};
use serde_json::json;

use crate::config::{Format, Overrides, RunConfig};
use crate::suite;

#[derive(Debug, Parser)]
#[command(name = "ordlam", version, about = "Reduction graphs, λπ equality, finite (topological) algebras")]
pub struct Cli {
    #[command(flatten)]
    pub overrides: Overrides,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Leftmost-outermost normalization.
    Reduce {
        term: String,
        #[arg(long, default_value = "betaeta")]
        rules: String,
    },
    /// β/η reduction graph (DOT by default).
    Graph {
        term: String,
        #[arg(long, default_value = "betaeta")]
        rules: String,
    },
    /// Bounded λπ equality.
    PiEq { left: String, right: String },
    /// βηπ reduction graph (DOT by default).
    PiGraph { term: String },
    /// Remove links from a proof skeleton (JSON file).
    JkTransform {
        skeleton: PathBuf,
        /// JSON list of witness terms; defaults to the constant witnesses.
        #[arg(long)]
        witnesses: Option<PathBuf>,
        /// Repeat until no links remain.
        #[arg(long)]
        all: bool,
    },
    /// Compatible orders and zero conditions of an algebra (JSON file).
    AlgCheck {
        algebra: PathBuf,
        /// Name of the distinguished constant.
        #[arg(long, default_value = "0")]
        zero: String,
    },
    /// Search for subtractive or Mal'cev witness terms.
    AlgSearch {
        algebra: PathBuf,
        #[arg(long, conflicts_with = "malcev")]
        subtractive: bool,
        #[arg(long)]
        malcev: bool,
        /// Chain length; the least one up to 4 when omitted.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value = "0")]
        zero: String,
    },
    /// Continuity and separation statements for an algebra on a space.
    TopCheck {
        algebra: PathBuf,
        space: PathBuf,
        #[arg(long, default_value = "topological")]
        mode: Mode,
        #[arg(long, default_value = "0")]
        zero: String,
    },
    /// Separation statements over every table and T₀ topology on small carriers.
    TopSweep {
        #[arg(long, default_value_t = 3)]
        carrier: usize,
    },
    /// Γᵢ iteration at a point of a space.
    Gamma {
        space: PathBuf,
        #[arg(long, default_value_t = 0)]
        point: usize,
    },
    /// The acceptance battery.
    Suite {
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

/// A usage or input problem (exit 2), as opposed to a violated invariant.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub struct Report {
    pub text: String,
    pub violated: bool,
}

impl Report {
    fn ok(text: String) -> Report {
        Report { text, violated: false }
    }
}

fn term(s: &str) -> Result<Term> {
    parse_named(s).map_err(|e| usage(format!("cannot parse `{s}`: {e}")))
}

fn rules(s: &str) -> Result<RuleSet> {
    RuleSet::parse(s).ok_or_else(|| usage(format!("unknown rule set `{s}` (beta, eta, betaeta)")))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))
}

fn algebra(path: &Path) -> Result<FiniteAlgebra> {
    FiniteAlgebra::from_json(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn space(path: &Path) -> Result<FiniteSpace> {
    FiniteSpace::from_json(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn zero_of(a: &FiniteAlgebra, name: &str) -> Result<usize> {
    a.constant(name).or_else(|_| name.parse::<usize>().map_err(|_| usage(format!("no constant `{name}`"))))
        .and_then(|z| a.check_element(z).map_err(|e| usage(e.to_string())))
}

fn render(cfg: &RunConfig, cmd: &str, default: Format, text: impl FnOnce() -> String, value: serde_json::Value) -> String {
    match cfg.format_or(default) {
        Format::Json => {
            let mut v = json!({ "header": cfg.header_json(cmd) });
            v["report"] = value;
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
        Format::Text | Format::Dot => format!("# {}\n{}", cfg.header(cmd), text()),
    }
}

fn show_terms(a: &FiniteAlgebra, ts: &[AlgTerm], vars: &[&str]) -> Vec<String> {
    ts.iter().map(|t| t.display(a, vars).to_string()).collect()
}

pub fn run(cli: &Cli) -> Result<Report> {
    let cfg = RunConfig::resolve(&cli.overrides).map_err(|e| usage(format!("{e:#}")))?;
    let oracle = || PiOracle::new(cfg.fuel, cfg.budget());
    match &cli.command {
        Command::Reduce { term: t, rules: r } => {
            let t = term(t)?;
            let out = normalize_with(&t, rules(r)?, cfg.budget());
            let (status, last, steps) = match &out {
                NormalizeOutcome::NormalForm { term, steps } => ("normal-form", term, *steps),
                NormalizeOutcome::Exhausted { last, steps, .. } => ("budget-exhausted", last, *steps),
                NormalizeOutcome::CycleDetected { node, steps } => ("cycle", node, *steps),
            };
            let text = || format!("{status} after {steps} steps\n{}\n", print(last));
            Ok(Report::ok(render(&cfg, "reduce", Format::Text, text, json!({"status": status, "steps": steps, "term": print(last)}))))
        }
        Command::Graph { term: t, rules: r } => {
            let g = reduction_graph(&term(t)?, rules(r)?, cfg.budget());
            Ok(Report::ok(graph_out(&cfg, "graph", &g)))
        }
        Command::PiEq { left, right } => {
            let v = lambda_pi_eq(&term(left)?, &term(right)?, &oracle());
            Ok(Report::ok(render(&cfg, "pi-eq", Format::Text, || format!("{v}\n"), json!({"verdict": v}))))
        }
        Command::PiGraph { term: t } => {
            let g = oracle().graph(&term(t)?, cfg.budget());
            Ok(Report::ok(graph_out(&cfg, "pi-graph", &g)))
        }
        Command::JkTransform { skeleton, witnesses, all } => jk(&cfg, skeleton, witnesses.as_deref(), *all),
        Command::AlgCheck { algebra: p, zero } => alg_check(&cfg, &algebra(p)?, zero),
        Command::AlgSearch { algebra: p, subtractive, malcev, n, zero } => {
            if !subtractive && !malcev {
                return Err(usage("pass --subtractive or --malcev"));
            }
            alg_search(&cfg, &algebra(p)?, *malcev, *n, zero)
        }
        Command::TopCheck { algebra: a, space: s, mode, zero } => top_check(&cfg, &algebra(a)?, &space(s)?, *mode, zero),
        Command::TopSweep { carrier } => {
            if !(1..=3).contains(carrier) {
                return Err(usage("--carrier must be 1, 2 or 3"));
            }
            let s = separation_sweep(*carrier, cfg.depth).map_err(|e| anyhow!(e))?;
            let text = || {
                let mut t = format!(
                    "tables {} (2-subtractive {}), T0 spaces {}, topological algebras {}, failures {}\n",
                    s.tables,
                    s.subtractive_tables,
                    s.spaces,
                    s.checked,
                    s.failures.len()
                );
                for f in &s.failures {
                    t.push_str(&format!("carrier {} table {} space {}: {} {:?}\n", f.0, f.1, f.2, f.3, f.4));
                }
                t
            };
            let violated = !s.failures.is_empty();
            Ok(Report { text: render(&cfg, "top-sweep", Format::Text, text, serde_json::to_value(&s)?), violated })
        }
        Command::Gamma { space: p, point } => {
            let s = space(p)?;
            if *point >= s.size() {
                return Err(usage(format!("point {point} is outside the carrier")));
            }
            let g = gamma_iteration(&s, *point);
            let sets: Vec<Vec<usize>> = g.iter().map(|&x| elements(x)).collect();
            let steps = (1..g.len()).find(|&n| g[n] == s.full() & !(1 << point));
            if cfg.format_or(Format::Text) == Format::Dot {
                return Ok(Report::ok(format!("// {}\n{}", cfg.header("gamma"), specialization_dot(&s))));
            }
            let text = || {
                let mut t = String::new();
                for (i, x) in sets.iter().enumerate() {
                    t.push_str(&format!("Γ{i}({point}) = {x:?}\n"));
                }
                match steps {
                    Some(n) => t.push_str(&format!("{n}-step Hausdorff in {point}\n")),
                    None => t.push_str(&format!("not n-step Hausdorff in {point} for any n\n")),
                }
                t
            };
            Ok(Report::ok(render(&cfg, "gamma", Format::Text, text, json!({"point": point, "gamma": sets, "steps": steps}))))
        }
        Command::Suite { only } => {
            if let Some(bad) = only.iter().find(|&&i| !(1..=suite::CRITERIA.len()).contains(&i)) {
                return Err(usage(format!("no criterion {bad}")));
            }
            let outcomes = suite::run_all(cfg.seed, only);
            for o in &outcomes {
                eprintln!("[{:>2}] {:.2?}", o.id, o.elapsed);
            }
            let violated = outcomes.iter().any(|o| !o.pass);
            let text = || outcomes.iter().map(|o| format!("{o}\n")).collect::<String>();
            Ok(Report { text: render(&cfg, "suite", Format::Text, text, serde_json::to_value(&outcomes)?), violated })
        }
    }
}

fn graph_out(cfg: &RunConfig, cmd: &str, g: &ordlam_core::ReductionGraph) -> String {
    match cfg.format_or(Format::Dot) {
        Format::Dot => format!("// {}\n{}", cfg.header(cmd), g.to_dot()),
        _ => render(
            cfg,
            cmd,
            Format::Dot,
            || {
                let mut t = format!(
                    "{} nodes, {} edges, complete {}, frontier {}\n",
                    g.node_count(),
                    g.edges().len(),
                    g.is_complete(),
                    g.frontier().len()
                );
                for (i, n) in g.nodes().iter().enumerate() {
                    t.push_str(&format!("{i}: {}\n", print(n)));
                }
                for e in g.edges() {
                    t.push_str(&format!("{} -{}-> {}\n", e.from, e.rule, e.to));
                }
                t
            },
            g.to_json(),
        ),
    }
}

fn jk(cfg: &RunConfig, path: &Path, witnesses: Option<&Path>, all: bool) -> Result<Report> {
    let s = ProofSkeleton::from_json(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let o = PiOracle::new(cfg.fuel, cfg.budget());
    let result = if all {
        eliminate_all(&s, &o)
    } else {
        let w = match witnesses {
            Some(p) => {
                let raw: Vec<String> = serde_json::from_str(&read(p)?).with_context(|| format!("parsing {}", p.display()))?;
                raw.iter().map(|t| term(t)).collect::<Result<Vec<_>>>()?
            }
            None => constant_witnesses(&s),
        };
        transform_proof(&s, &w, &o).map(|t| vec![t])
    };
    match result {
        Ok(ts) => {
            let text = || {
                let mut t = String::new();
                for (i, tr) in ts.iter().enumerate() {
                    t.push_str(&format!(
                        "round {}: {} links, {} claims checked, {} assumptions\n",
                        i + 1,
                        tr.skeleton.len(),
                        tr.audit.len(),
                        tr.assumptions().count()
                    ));
                    for e in &tr.audit {
                        t.push_str(&format!("  {:?} {}: {}\n", e.stage, e.claim, e.verdict));
                    }
                }
                t
            };
            let v = serde_json::Value::Array(ts.iter().map(|t| t.to_json()).collect());
            Ok(Report::ok(render(cfg, "jk-transform", Format::Text, text, v)))
        }
        Err(e @ ordlam_core::jk::JkError::Refuted { .. }) => Ok(Report {
            text: render(cfg, "jk-transform", Format::Text, || format!("refuted: {e}\n"), json!({"error": e.to_string()})),
            violated: true,
        }),
        Err(e) => Err(usage(e.to_string())),
    }
}

fn alg_check(cfg: &RunConfig, a: &FiniteAlgebra, zero: &str) -> Result<Report> {
    let orders = enumerate_compatible_partial_orders(a, cfg.max_size).map_err(|e| usage(e.to_string()))?;
    let pre = enumerate_compatible_preorders(a, DEFAULT_PREORDER_BUDGET);
    let z = zero_of(a, zero).ok();
    let zero_facts = z.map(|z| {
        (
            is_0_unorderable(a, z, cfg.max_size).unwrap_or(false),
            is_0_symmetric(a, z, cfg.max_size).ok(),
            find_subtractive_witnesses(a, z, 2, cfg.depth).ok().flatten(),
        )
    });
    let malcev = ChainSearch::malcev(a, cfg.depth).least_witness(3);
    // a 2-subtractive algebra must satisfy both zero conditions
    let violated = zero_facts.as_ref().is_some_and(|(u, s, w)| w.is_some() && !(*u && *s == Some(true)))
        || (malcev.is_some() && orders.iter().any(|r| *r != ordlam_algebra::BinRel::equality(a.size)));
    if cfg.format_or(Format::Text) == Format::Dot {
        let dots: String = orders.iter().map(|r| hasse_dot(r, None)).collect();
        return Ok(Report { text: format!("// {}\n{dots}", cfg.header("alg-check")), violated });
    }
    let text = || {
        let mut t = format!("carrier {}, operations {}\n", a.size, a.operations.len());
        t.push_str(&format!("compatible preorders {}{}\n", pre.relations.len(), if pre.complete { "" } else { " (budget hit)" }));
        t.push_str(&format!("compatible partial orders {}\n", orders.len()));
        for r in &orders {
            t.push_str(&format!("  {r}\n"));
        }
        if let (Some(z), Some((u, s, w))) = (z, &zero_facts) {
            t.push_str(&format!("0 = {z}: 0-unorderable {u}, 0-symmetric {}\n", s.map_or("unknown".into(), |b| b.to_string())));
            t.push_str(&format!(
                "2-subtractive witness (depth ≤ {}): {}\n",
                cfg.depth,
                w.as_ref().map_or("none".into(), |w| show_terms(a, w, &["x", "y"]).join(", "))
            ));
        }
        t.push_str(&format!(
            "Mal'cev terms (n ≤ 3, depth ≤ {}): {}\n",
            cfg.depth,
            malcev.as_ref().map_or("none".into(), |(n, ps)| format!("n = {n}: {}", show_terms(a, ps, &["x", "y", "z"]).join(", ")))
        ));
        t
    };
    let v = json!({
        "carrier": a.size,
        "preorders": pre.relations.len(),
        "preorders_complete": pre.complete,
        "partial_orders": orders.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "zero": z,
        "zero_unorderable": zero_facts.as_ref().map(|f| f.0),
        "zero_symmetric": zero_facts.as_ref().and_then(|f| f.1),
        "subtractive": zero_facts.as_ref().and_then(|f| f.2.as_ref().map(|w| show_terms(a, w, &["x", "y"]))),
        "malcev": malcev.as_ref().map(|(n, ps)| json!({"n": n, "terms": show_terms(a, ps, &["x", "y", "z"])})),
    });
    Ok(Report { text: render(cfg, "alg-check", Format::Text, text, v), violated })
}

fn alg_search(cfg: &RunConfig, a: &FiniteAlgebra, malcev: bool, n: Option<usize>, zero: &str) -> Result<Report> {
    if a.size > cfg.max_size {
        return Err(usage(format!("carrier {} exceeds --max-size {}", a.size, cfg.max_size)));
    }
    let (kind, vars): (&str, &[&str]) = if malcev { ("malcev", &["x", "y", "z"]) } else { ("subtractive", &["x", "y"]) };
    let found = if malcev {
        match n {
            Some(n) => find_malcev_terms(a, n, cfg.depth).map(|w| w.map(|w| (n, w))),
            None => Ok(ChainSearch::malcev(a, cfg.depth).least_witness(4)),
        }
    } else {
        let z = zero_of(a, zero)?;
        match n {
            Some(n) => find_subtractive_witnesses(a, z, n, cfg.depth).map(|w| w.map(|w| (n, w))),
            None => ChainSearch::subtractive(a, z, cfg.depth).map(|s| s.least_witness(4)),
        }
    }
    .map_err(|e| usage(e.to_string()))?;
    let shown = found.as_ref().map(|(n, w)| (n, show_terms(a, w, vars)));
    let text = || match &shown {
        Some((n, w)) => format!("{kind} n = {n}: {}\n", w.join(", ")),
        None => format!("no {kind} witness at depth ≤ {}\n", cfg.depth),
    };
    let v = json!({"kind": kind, "depth": cfg.depth, "n": shown.as_ref().map(|s| s.0), "terms": shown.as_ref().map(|s| &s.1)});
    Ok(Report::ok(render(cfg, "alg-search", Format::Text, text, v)))
}

fn top_check(cfg: &RunConfig, a: &FiniteAlgebra, s: &FiniteSpace, mode: Mode, zero: &str) -> Result<Report> {
    let c = check_top_algebra(a, s, mode).map_err(|e| usage(e.to_string()))?;
    let mut violated = !c.lemma_1_1;
    let suite = match zero_of(a, zero) {
        Ok(z) => match ChainSearch::subtractive(a, z, cfg.depth).ok().and_then(|cs| cs.least_witness(4)) {
            Some((_, w)) => Some(subtractive_separation_suite(a, s, z, &w).map_err(|e| anyhow!(e))?),
            None => None,
        },
        Err(_) => None,
    };
    if let Some(r) = &suite {
        violated |= r.failures().next().is_some();
    }
    if cfg.format_or(Format::Text) == Format::Dot {
        return Ok(Report { text: format!("// {}\n{}", cfg.header("top-check"), specialization_dot(s)), violated });
    }
    let text = || {
        let mut t = format!(
            "{:?}: {}{}\n",
            c.mode,
            if c.holds { "holds" } else { "fails" },
            if c.product_checked { "" } else { " (neighbourhood boxes)" }
        );
        for f in &c.failures {
            t.push_str(&format!("  {} discontinuous at {:?}: preimage of {:?}\n", f.function, f.point, f.open));
        }
        for (name, m) in &c.monotone {
            t.push_str(&format!("  {name} monotone in specialization: {m}\n"));
        }
        t.push_str(&format!("continuous ⇒ monotone: {}\n", c.lemma_1_1));
        t.push_str(&format!("T0 {}, T1 {}, T2 {}\n", s.is_t0(), s.satisfies(Level::T1), s.satisfies(Level::T2)));
        match &suite {
            Some(r) => {
                t.push_str(&format!("{}-subtractive, κ = {:?}\n", r.n, r.ranks.kappa));
                for st in &r.statements {
                    let mark = match st.outcome {
                        Outcome::Pass => "pass",
                        Outcome::Fail => "FAIL",
                        Outcome::NotApplicable => "n/a",
                    };
                    t.push_str(&format!("  {mark:<4} {}{}\n", st.name, st.witness.as_ref().map_or(String::new(), |w| format!(" ({w})"))));
                }
            }
            None => t.push_str("no subtractive witnesses: separation statements skipped\n"),
        }
        t
    };
    let v = json!({"continuity": c, "separation": suite});
    Ok(Report { text: render(cfg, "top-check", Format::Text, text, v), violated })
}
