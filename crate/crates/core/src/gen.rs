//! Seeded random terms and βηπ traces for property drivers.
//!
//! Sizes count nodes of the generated skeleton, with each catalog atom
//! (Θ, Ω, I, T, F) counting as a single leaf.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog;
use crate::graph::Stepper;
use crate::pi::PiOracle;
use crate::term::Term;
use crate::trace::Trace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Theta,
    Omega,
    I,
    T,
    F,
}

impl Atom {
    pub const ALL: [Atom; 5] = [Atom::Theta, Atom::Omega, Atom::I, Atom::T, Atom::F];

    pub fn term(self) -> Term {
        match self {
            Atom::Theta => catalog::theta(),
            Atom::Omega => catalog::omega(),
            Atom::I => catalog::i(),
            Atom::T => catalog::t(),
            Atom::F => catalog::f(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenConfig {
    /// Weight of the catalog atoms among leaves, in percent.
    pub atom_percent: u32,
    /// Chance, in percent, of producing `Θ M M` at a node of size ≥ 3.
    pub theta_mm_percent: u32,
    /// Free names usable as leaves; empty for closed terms.
    pub free_names: Vec<String>,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { atom_percent: 35, theta_mm_percent: 15, free_names: Vec::new() }
    }
}

pub struct TermGen {
    rng: ChaCha8Rng,
    cfg: GenConfig,
}

impl TermGen {
    pub fn new(seed: u64) -> TermGen {
        TermGen::with_config(seed, GenConfig::default())
    }

    pub fn with_config(seed: u64, cfg: GenConfig) -> TermGen {
        TermGen { rng: ChaCha8Rng::seed_from_u64(seed), cfg }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A term whose skeleton size is uniform in `1..=max_size`.
    pub fn term(&mut self, max_size: usize) -> Term {
        assert!(max_size >= 1);
        let size = self.rng.gen_range(1..=max_size);
        self.sized(size, 0)
    }

    /// A term of exactly `size` skeleton nodes.
    pub fn sized(&mut self, size: usize, depth: u32) -> Term {
        if size == 1 {
            return self.leaf(depth);
        }
        if size >= 3 && self.rng.gen_range(0..100) < self.cfg.theta_mm_percent {
            // Θ M M: Θ + two copies + two application nodes
            let m_size = (size.saturating_sub(3) / 2).max(1);
            let m = self.sized(m_size, depth);
            return Term::apps(catalog::theta(), [m.clone(), m]);
        }
        if size == 2 || self.rng.gen_bool(0.4) {
            let hint = ["x", "y", "z", "u", "v", "w"][depth as usize % 6];
            return Term::lam(hint, self.sized(size - 1, depth + 1));
        }
        let left = self.rng.gen_range(1..size - 1);
        let f = self.sized(left, depth);
        let a = self.sized(size - 1 - left, depth);
        Term::app(f, a)
    }

    fn leaf(&mut self, depth: u32) -> Term {
        let names = self.cfg.free_names.len() as u32;
        let choices = depth + names;
        if choices == 0 || self.rng.gen_range(0..100) < self.cfg.atom_percent {
            return Atom::ALL.choose(&mut self.rng).expect("atoms").term();
        }
        let k = self.rng.gen_range(0..choices);
        if k < depth {
            Term::var(k)
        } else {
            Term::free(&self.cfg.free_names[(k - depth) as usize])
        }
    }

    /// A random βηπ trace of at most `max_len` steps, stopping early at a
    /// normal form. π-steps are taken only when the oracle proves them.
    pub fn trace(&mut self, start: Term, max_len: usize, o: &PiOracle, max_term_size: usize) -> Trace {
        let stepper = o.stepper(o.fuel);
        let mut tr = Trace::new(start);
        for _ in 0..max_len {
            let succ = stepper.successors(tr.end()).steps;
            let succ: Vec<_> = succ.into_iter().filter(|s| s.result.size() <= max_term_size).collect();
            let Some(s) = succ.choose(&mut self.rng) else { break };
            tr.steps.push(s.clone());
        }
        tr
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let a: Vec<Term> = (0..20).map({
            let mut g = TermGen::new(7);
            move |_| g.term(10)
        }).collect();
        let mut g = TermGen::new(7);
        for t in a {
            assert_eq!(t, g.term(10));
        }
    }

    #[test]
    fn closed_by_default() {
        let mut g = TermGen::new(1);
        for _ in 0..200 {
            assert!(g.term(14).is_closed());
        }
    }

    #[test]
    fn free_names_used() {
        let cfg = GenConfig { atom_percent: 0, theta_mm_percent: 0, free_names: vec!["a".into()] };
        let mut g = TermGen::with_config(3, cfg);
        assert!((0..100).any(|_| !g.term(6).free_names().is_empty()));
    }
}
