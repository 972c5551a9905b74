//! λ-terms, βη and βηπ reduction, the π-provability oracle and the labelled
//! term machinery used to transform λπ proofs.

use std::fmt;

use serde::{Deserialize, Serialize};

pub mod catalog;
pub mod pi;
pub mod gen;
pub mod graph;
pub mod jk;
pub mod labelled;
pub mod reduction;
pub mod syntax;
pub mod term;
pub mod trace;

pub use graph::{join_search, joinable, reduction_graph, ReductionGraph};
pub use reduction::{normalize, step, Budget, Rule, RuleSet, Step};
pub use syntax::{fill_context, parse, print};
pub use term::{alpha_eq, Position, Term, TermKind};

/// Three-valued answer of a bounded decision procedure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Proved,
    Refuted,
    Unknown,
}

impl Verdict {
    pub fn is_decided(self) -> bool {
        self != Verdict::Unknown
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Proved => "proved",
            Verdict::Refuted => "refuted",
            Verdict::Unknown => "unknown",
        })
    }
}
