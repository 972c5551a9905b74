//! Reduction graphs 𝒢_γ(M), explored breadth first under a [`Budget`].

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::reduction::{one_steps, Budget, Rule, RuleSet, Step};
use crate::syntax::print;
use crate::term::{Position, Term};
use crate::Verdict;

/// One-step successors of a term plus positions whose status is undecided.
#[derive(Clone, Debug, Default)]
pub struct Successors {
    pub steps: Vec<Step>,
    pub unresolved: Vec<Position>,
}

pub trait Stepper {
    fn successors(&self, t: &Term) -> Successors;
}

/// Plain β and/or η reduction.
#[derive(Clone, Copy, Debug)]
pub struct BetaEta(pub RuleSet);

impl Stepper for BetaEta {
    fn successors(&self, t: &Term) -> Successors {
        Successors { steps: one_steps(t, self.0), unresolved: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub rule: Rule,
    pub position: Position,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expansion {
    /// A node was expanded; the new node ids are `first_new..node_count`.
    Expanded { node: usize, first_new: usize },
    /// Nothing left to expand.
    Done,
    /// The budget stops further expansion.
    Blocked,
}

/// Shape of a graph in which every node has exactly one successor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleShape {
    /// Nodes before the cycle is entered.
    pub tail: usize,
    pub cycle: usize,
}

#[derive(Clone, Debug)]
pub struct ReductionGraph {
    nodes: Vec<Term>,
    index: HashMap<Term, usize>,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    expanded: Vec<bool>,
    unresolved: Vec<Vec<Position>>,
    queue: VecDeque<usize>,
    expansions: usize,
    budget: Budget,
}

impl ReductionGraph {
    pub fn new(root: Term, budget: Budget) -> ReductionGraph {
        let mut g = ReductionGraph {
            nodes: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            out: Vec::new(),
            parent: Vec::new(),
            expanded: Vec::new(),
            unresolved: Vec::new(),
            queue: VecDeque::new(),
            expansions: 0,
            budget,
        };
        g.insert(root, None);
        g
    }

    /// Builds the graph as far as the budget allows.
    pub fn build<S: Stepper + ?Sized>(root: Term, stepper: &S, budget: Budget) -> ReductionGraph {
        let mut g = ReductionGraph::new(root, budget);
        g.run(stepper);
        g
    }

    fn insert(&mut self, t: Term, parent: Option<usize>) -> (usize, bool) {
        if let Some(&id) = self.index.get(&t) {
            return (id, false);
        }
        let id = self.nodes.len();
        self.nodes.push(t.clone());
        self.index.insert(t, id);
        self.out.push(Vec::new());
        self.parent.push(parent);
        self.expanded.push(false);
        self.unresolved.push(Vec::new());
        self.queue.push_back(id);
        (id, true)
    }

    pub fn expand_next<S: Stepper + ?Sized>(&mut self, stepper: &S) -> Expansion {
        loop {
            if self.expansions >= self.budget.max_steps || self.nodes.len() >= self.budget.max_nodes {
                return if self.queue.is_empty() { Expansion::Done } else { Expansion::Blocked };
            }
            let Some(id) = self.queue.pop_front() else {
                return Expansion::Done;
            };
            if self.nodes[id].size() > self.budget.max_term_size {
                // stays unexpanded, hence on the frontier
                continue;
            }
            let first_new = self.nodes.len();
            self.expansions += 1;
            let succ = stepper.successors(&self.nodes[id].clone());
            for s in succ.steps {
                let eid = self.edges.len();
                let (to, _) = self.insert(s.result, Some(eid));
                self.edges.push(Edge { from: id, to, rule: s.rule, position: s.position });
                self.out[id].push(eid);
            }
            self.unresolved[id] = succ.unresolved;
            self.expanded[id] = true;
            return Expansion::Expanded { node: id, first_new };
        }
    }

    pub fn run<S: Stepper + ?Sized>(&mut self, stepper: &S) {
        while let Expansion::Expanded { .. } = self.expand_next(stepper) {}
    }

    pub fn root(&self) -> &Term {
        &self.nodes[0]
    }

    pub fn nodes(&self) -> &[Term] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &Term {
        &self.nodes[id]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn id_of(&self, t: &Term) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.index.contains_key(t)
    }

    pub fn out_edges(&self, id: usize) -> impl Iterator<Item = &Edge> {
        self.out[id].iter().map(move |e| &self.edges[*e])
    }

    pub fn is_expanded(&self, id: usize) -> bool {
        self.expanded[id]
    }

    /// Ids of nodes whose successors were not computed.
    pub fn frontier(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|i| !self.expanded[*i]).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.expanded.iter().all(|e| *e)
    }

    pub fn unresolved(&self, id: usize) -> &[Position] {
        &self.unresolved[id]
    }

    pub fn has_unresolved(&self) -> bool {
        self.unresolved.iter().any(|u| !u.is_empty())
    }

    /// Complete and with every π-position decided.
    pub fn is_settled(&self) -> bool {
        self.is_complete() && !self.has_unresolved()
    }

    pub fn rules_used(&self) -> Vec<Rule> {
        let mut rs: Vec<Rule> = self.edges.iter().map(|e| e.rule).collect();
        rs.sort();
        rs.dedup();
        rs
    }

    /// Steps of the discovery path from the root to `id`.
    pub fn path_to(&self, id: usize) -> Vec<Step> {
        let mut steps = Vec::new();
        let mut cur = id;
        while let Some(eid) = self.parent[cur] {
            let e = &self.edges[eid];
            steps.push(Step { rule: e.rule, position: e.position.clone(), result: self.nodes[e.to].clone() });
            cur = e.from;
        }
        steps.reverse();
        steps
    }

    /// For a complete graph where every node has exactly one successor.
    pub fn functional_shape(&self) -> Option<CycleShape> {
        if !self.is_complete() {
            return None;
        }
        let mut succ = Vec::with_capacity(self.nodes.len());
        for id in 0..self.nodes.len() {
            let mut targets: Vec<usize> = self.out_edges(id).map(|e| e.to).collect();
            targets.sort();
            targets.dedup();
            if targets.len() != 1 {
                return None;
            }
            succ.push(targets[0]);
        }
        let mut order = vec![usize::MAX; self.nodes.len()];
        let mut cur = 0;
        let mut k = 0;
        while order[cur] == usize::MAX {
            order[cur] = k;
            k += 1;
            cur = succ[cur];
        }
        Some(CycleShape { tail: order[cur], cycle: k - order[cur] })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph reductions {\n  node [shape=box, fontname=\"monospace\"];\n");
        for (i, t) in self.nodes.iter().enumerate() {
            let mut attrs = format!("label=\"{}\"", escape(&print(t)));
            if i == 0 {
                attrs.push_str(", penwidth=2");
            }
            if !self.expanded[i] {
                attrs.push_str(", style=dashed");
            }
            if !self.unresolved[i].is_empty() {
                attrs.push_str(", color=orange");
            }
            let _ = writeln!(s, "  n{i} [{attrs}];");
        }
        for e in &self.edges {
            let style = match e.rule {
                Rule::Pi => ", color=red, style=bold, fontcolor=red",
                _ => "",
            };
            let _ = writeln!(s, "  n{} -> n{} [label=\"{}\"{}];", e.from, e.to, e.rule, style);
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> Value {
        let nodes: Vec<Value> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, t)| {
                json!({
                    "id": i,
                    "key": t.canonical_key(),
                    "term": print(t),
                    "expanded": self.expanded[i],
                    "unresolved": self.unresolved[i].iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|e| json!({"from": e.from, "to": e.to, "rule": e.rule.ascii(), "position": e.position.to_string()}))
            .collect();
        json!({"complete": self.is_complete(), "nodes": nodes, "edges": edges})
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// The βη-reduction graph.
pub fn reduction_graph(t: &Term, rules: RuleSet, budget: Budget) -> ReductionGraph {
    ReductionGraph::build(t.clone(), &BetaEta(rules), budget)
}

#[derive(Clone, Debug)]
pub struct JoinOutcome {
    pub verdict: Verdict,
    /// A common reduct, when one was found.
    pub meet: Option<Term>,
    pub left: ReductionGraph,
    pub right: ReductionGraph,
}

impl JoinOutcome {
    /// Reduction paths from each side to the meeting term.
    pub fn witness(&self) -> Option<(Vec<Step>, Vec<Step>)> {
        let m = self.meet.as_ref()?;
        Some((self.left.path_to(self.left.id_of(m)?), self.right.path_to(self.right.id_of(m)?)))
    }
}

/// Explores both graphs in alternation until they share a node.
pub fn join_search<S: Stepper + ?Sized>(stepper: &S, a: &Term, b: &Term, budget: Budget) -> JoinOutcome {
    let mut left = ReductionGraph::new(a.clone(), budget);
    let mut right = ReductionGraph::new(b.clone(), budget);
    if a == b {
        return JoinOutcome { verdict: Verdict::Proved, meet: Some(a.clone()), left, right };
    }
    let mut left_live = true;
    let mut right_live = true;
    while left_live || right_live {
        for side in [true, false] {
            let (g, other, live) =
                if side { (&mut left, &right, &mut left_live) } else { (&mut right, &left, &mut right_live) };
            if !*live {
                continue;
            }
            match g.expand_next(stepper) {
                Expansion::Expanded { first_new, .. } => {
                    for id in first_new..g.node_count() {
                        if other.contains(g.node(id)) {
                            let meet = Some(g.node(id).clone());
                            return JoinOutcome { verdict: Verdict::Proved, meet, left, right };
                        }
                    }
                }
                Expansion::Done | Expansion::Blocked => *live = false,
            }
        }
    }
    let verdict = if left.is_settled() && right.is_settled() { Verdict::Refuted } else { Verdict::Unknown };
    JoinOutcome { verdict, meet: None, left, right }
}

/// Whether `a` and `b` have a common reduct.
pub fn joinable(a: &Term, b: &Term, rules: RuleSet, budget: Budget) -> Verdict {
    join_search(&BetaEta(rules), a, b, budget).verdict
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroStatus {
    /// The complete β-graph contains no abstraction.
    TrueEvidence,
    /// Some reduct is an abstraction.
    False,
    Unknown,
}

pub fn is_zero_term_bounded(t: &Term, budget: Budget) -> ZeroStatus {
    let stepper = BetaEta(RuleSet::BETA);
    let mut g = ReductionGraph::new(t.clone(), budget);
    if t.is_lam() {
        return ZeroStatus::False;
    }
    while let Expansion::Expanded { first_new, .. } = g.expand_next(&stepper) {
        if (first_new..g.node_count()).any(|id| g.node(id).is_lam()) {
            return ZeroStatus::False;
        }
    }
    if g.is_complete() {
        ZeroStatus::TrueEvidence
    } else {
        ZeroStatus::Unknown
    }
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
    fn theta_beta_graph_is_the_three_cycle() {
        let g = reduction_graph(&catalog::theta(), RuleSet::BETA, Budget::default());
        assert!(g.is_complete());
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.functional_shape(), Some(CycleShape { tail: 0, cycle: 3 }));
        assert_eq!(g.rules_used(), vec![Rule::Beta]);
        let expected = [
            catalog::theta(),
            Term::app(catalog::c(), p("λy.y C").substitute("C", &catalog::c())),
            Term::app(p("λy.y C").substitute("C", &catalog::c()), catalog::b()),
        ];
        for t in &expected {
            assert!(g.contains(t), "missing {t}");
        }
    }

    #[test]
    fn omega_graph_is_a_loop() {
        let g = reduction_graph(&catalog::omega(), RuleSet::BETA_ETA, Budget::default());
        assert!(g.is_complete());
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.edges()[0].from, g.edges()[0].to);
    }

    #[test]
    fn frontier_records_budget() {
        let t = p("(λx.x x x) (λx.x x x)");
        let g = reduction_graph(&t, RuleSet::BETA, Budget::new(5, 100, 1000));
        assert!(!g.is_complete());
        assert!(!g.frontier().is_empty());
    }

    #[test]
    fn joinable_examples() {
        let b = Budget::default();
        assert_eq!(joinable(&catalog::theta(), &catalog::theta(), RuleSet::BETA, b), Verdict::Proved);
        assert_eq!(joinable(&catalog::theta(), &catalog::omega(), RuleSet::BETA_ETA, b), Verdict::Refuted);
        let n = |s: &str| catalog::parse_named(s).unwrap();
        assert_eq!(joinable(&n("(λx.x x) I"), &n("I"), RuleSet::BETA, b), Verdict::Proved);
        assert_eq!(
            joinable(&p("(λx.x x) (λy.y)"), &p("λz.z"), RuleSet::BETA, b),
            Verdict::Proved
        );
    }

    #[test]
    fn join_witness_replays() {
        let out = join_search(&BetaEta(RuleSet::BETA), &p("(λx.x x) (λy.y)"), &p("(λz.z) (λw.w)"), Budget::default());
        let (l, r) = out.witness().unwrap();
        let meet = out.meet.unwrap();
        assert_eq!(l.last().map(|s| &s.result).unwrap_or(out.left.root()), &meet);
        assert_eq!(r.last().map(|s| &s.result).unwrap_or(out.right.root()), &meet);
    }

    #[test]
    fn zero_term_examples() {
        let b = Budget::default();
        assert_eq!(is_zero_term_bounded(&catalog::theta(), b), ZeroStatus::TrueEvidence);
        assert_eq!(is_zero_term_bounded(&catalog::i(), b), ZeroStatus::False);
        assert_eq!(is_zero_term_bounded(&catalog::theta_n(3), b), ZeroStatus::TrueEvidence);
        assert_eq!(is_zero_term_bounded(&p("(λx.x) (λy.y)"), b), ZeroStatus::False);
    }

    #[test]
    fn dot_marks_rules() {
        let g = reduction_graph(&catalog::theta(), RuleSet::BETA, Budget::default());
        let dot = g.to_dot();
        assert_eq!(dot.matches("->").count(), 3);
        assert!(dot.contains("label=\"β\""));
        let js = g.to_json();
        assert_eq!(js["nodes"].as_array().unwrap().len(), 3);
        assert_eq!(js["complete"], true);
    }
}
