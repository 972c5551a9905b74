//! Finite topological spaces as families of bit-set opens.
//!
//! Every point `a` of a finite space has a least open neighbourhood `N(a)`,
//! the intersection of all opens containing it. Separation and Γ conditions
//! quantify over open pairs; since the conditions are monotone in the opens,
//! it suffices to try `N(a)` and `N(b)`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::algebra::AlgError;
use crate::relation::{bits, full, BinRel};

pub type Set = u64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteSpace {
    size: usize,
    /// Sorted, deduplicated.
    opens: Vec<Set>,
}

#[derive(Serialize, Deserialize)]
struct RawSpace {
    size: usize,
    opens: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    T0,
    T1,
    T2,
    #[serde(rename = "T2half")]
    T2Half,
}

impl std::str::FromStr for Level {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "t0" => Ok(Level::T0),
            "t1" => Ok(Level::T1),
            "t2" => Ok(Level::T2),
            "t2half" | "t2.5" | "t2½" => Ok(Level::T2Half),
            _ => Err(format!("unknown separation level `{s}`")),
        }
    }
}

pub fn set_of(xs: impl IntoIterator<Item = usize>) -> Set {
    xs.into_iter().fold(0, |s, x| s | 1 << x)
}

pub fn elements(s: Set) -> Vec<usize> {
    bits(s).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceViolation {
    MissingEmpty,
    MissingFull,
    OutOfRange(Set),
    Union(Set, Set),
    Intersection(Set, Set),
}

impl std::fmt::Display for SpaceViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let show = |s: &Set| format!("{:?}", elements(*s));
        match self {
            SpaceViolation::MissingEmpty => write!(f, "∅ is not open"),
            SpaceViolation::MissingFull => write!(f, "the carrier is not open"),
            SpaceViolation::OutOfRange(s) => write!(f, "open {} leaves the carrier", show(s)),
            SpaceViolation::Union(a, b) => write!(f, "union of {} and {} is not open", show(a), show(b)),
            SpaceViolation::Intersection(a, b) => write!(f, "intersection of {} and {} is not open", show(a), show(b)),
        }
    }
}

impl FiniteSpace {
    /// Takes any family; use [`validate_space`] to check it is a topology.
    pub fn from_family(size: usize, opens: impl IntoIterator<Item = Set>) -> FiniteSpace {
        assert!((1..=64).contains(&size), "carrier of 1 to 64 points");
        let opens: BTreeSet<Set> = opens.into_iter().collect();
        FiniteSpace { size, opens: opens.into_iter().collect() }
    }

    /// Validated construction.
    pub fn new(size: usize, opens: impl IntoIterator<Item = Set>) -> Result<FiniteSpace, AlgError> {
        let s = FiniteSpace::from_family(size, opens);
        match validate_space(&s) {
            Ok(()) => Ok(s),
            Err(v) => Err(AlgError::Invalid(v.to_string())),
        }
    }

    /// Least topology containing `family`.
    pub fn generated(size: usize, family: impl IntoIterator<Item = Set>) -> FiniteSpace {
        let all = full(size);
        let mut opens: BTreeSet<Set> = family.into_iter().map(|o| o & all).chain([0, all]).collect();
        loop {
            let cur: Vec<Set> = opens.iter().copied().collect();
            let before = opens.len();
            for (i, &u) in cur.iter().enumerate() {
                for &v in &cur[i + 1..] {
                    opens.insert(u | v);
                    opens.insert(u & v);
                }
            }
            if opens.len() == before {
                return FiniteSpace::from_family(size, opens);
            }
        }
    }

    pub fn discrete(size: usize) -> FiniteSpace {
        FiniteSpace::from_family(size, 0..=full(size))
    }

    pub fn indiscrete(size: usize) -> FiniteSpace {
        FiniteSpace::from_family(size, [0, full(size)])
    }

    /// {∅, {1}, {0,1}}.
    pub fn sierpinski() -> FiniteSpace {
        FiniteSpace::from_family(2, [0, 0b10, 0b11])
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn opens(&self) -> &[Set] {
        &self.opens
    }

    pub fn full(&self) -> Set {
        full(self.size)
    }

    pub fn is_open(&self, s: Set) -> bool {
        self.opens.binary_search(&s).is_ok()
    }

    pub fn is_closed(&self, s: Set) -> bool {
        self.is_open(self.full() & !s)
    }

    pub fn from_json(text: &str) -> Result<FiniteSpace, AlgError> {
        let raw: RawSpace = serde_json::from_str(text).map_err(|e| AlgError::Json(e.to_string()))?;
        if raw.size == 0 || raw.size > 64 {
            return Err(AlgError::Invalid("carrier of 1 to 64 points".into()));
        }
        let opens = raw.opens.iter().map(|o| set_of(o.iter().copied())).collect::<Vec<_>>();
        FiniteSpace::new(raw.size, opens)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RawSpace { size: self.size, opens: self.opens.iter().map(|&o| elements(o)).collect() })
            .expect("space serializes")
    }

    /// Least open containing `a`.
    pub fn neighbourhood(&self, a: usize) -> Set {
        self.opens.iter().filter(|&&o| o >> a & 1 == 1).fold(self.full(), |acc, &o| acc & o)
    }

    pub fn neighbourhoods(&self) -> Vec<Set> {
        (0..self.size).map(|a| self.neighbourhood(a)).collect()
    }

    /// Smallest closed superset.
    pub fn closure(&self, s: Set) -> Set {
        let outside = self.opens.iter().filter(|&&o| o & s == 0).fold(0, |acc, &o| acc | o);
        self.full() & !outside
    }

    /// Largest open subset.
    pub fn interior(&self, s: Set) -> Set {
        self.opens.iter().filter(|&&o| o & !s == 0).fold(0, |acc, &o| acc | o)
    }

    /// `a ≤ b` iff `a ∈ cl{b}` iff every open containing `a` contains `b`.
    pub fn specialization(&self) -> BinRel {
        let mut r = BinRel::empty(self.size);
        for a in 0..self.size {
            let n = self.neighbourhood(a);
            for b in bits(n) {
                r.insert(a, b);
            }
        }
        r
    }

    pub fn is_t0(&self) -> bool {
        self.specialization().is_antisymmetric()
    }

    pub fn separated(&self, a: usize, b: usize, level: Level) -> bool {
        let (na, nb) = (self.neighbourhood(a), self.neighbourhood(b));
        match level {
            Level::T0 => nb >> a & 1 == 0 || na >> b & 1 == 0,
            Level::T1 => nb >> a & 1 == 0 && na >> b & 1 == 0,
            Level::T2 => na & nb == 0,
            Level::T2Half => self.closure(na) & self.closure(nb) == 0,
        }
    }

    /// Separated from every other point.
    pub fn separated_in(&self, a: usize, level: Level) -> bool {
        (0..self.size).all(|b| b == a || self.separated(a, b, level))
    }

    pub fn satisfies(&self, level: Level) -> bool {
        (0..self.size).all(|a| self.separated_in(a, level))
    }

    /// The subspace on `s`, re-indexed in increasing order; returns the old
    /// indices as well.
    pub fn subspace(&self, s: Set) -> (FiniteSpace, Vec<usize>) {
        let pts = elements(s);
        let reindex = |o: Set| pts.iter().enumerate().filter(|(_, &p)| o >> p & 1 == 1).fold(0, |acc, (i, _)| acc | 1 << i);
        (FiniteSpace::from_family(pts.len().max(1), self.opens.iter().map(|&o| reindex(o & s))), pts)
    }

    /// Quotient by mutual specialization, with the class of each point.
    pub fn t0_quotient(&self) -> (FiniteSpace, Vec<usize>) {
        let spec = self.specialization();
        let mut class = vec![usize::MAX; self.size];
        let mut reps = Vec::new();
        for a in 0..self.size {
            if class[a] == usize::MAX {
                for b in a..self.size {
                    if spec.contains(a, b) && spec.contains(b, a) {
                        class[b] = reps.len();
                    }
                }
                reps.push(a);
            }
        }
        let image = |o: Set| bits(o).fold(0, |acc, x| acc | 1 << class[x]);
        (FiniteSpace::from_family(reps.len(), self.opens.iter().map(|&o| image(o))), class)
    }

    /// Explicit product topology on `size^n` points (row-major tuples):
    /// unions of boxes of opens.
    pub fn product(&self, n: usize) -> FiniteSpace {
        let k = self.size;
        let points = k.pow(n as u32);
        assert!(points <= 64, "product too large");
        let mut boxes: BTreeSet<Set> = BTreeSet::new();
        let mut choice = vec![0usize; n];
        'boxes: loop {
            let mut b: Set = 0;
            for p in 0..points {
                let mut rest = p;
                let mut inside = true;
                for j in (0..n).rev() {
                    let coord = rest % k;
                    rest /= k;
                    inside &= self.opens[choice[j]] >> coord & 1 == 1;
                }
                if inside {
                    b |= 1 << p;
                }
            }
            boxes.insert(b);
            let mut i = n;
            loop {
                if i == 0 {
                    break 'boxes;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < self.opens.len() {
                    break;
                }
                choice[i] = 0;
            }
        }
        let mut opens: BTreeSet<Set> = boxes.clone();
        loop {
            let cur: Vec<Set> = opens.iter().copied().collect();
            let before = opens.len();
            for &x in &cur {
                for &b in &boxes {
                    opens.insert(x | b);
                }
            }
            if opens.len() == before {
                break;
            }
        }
        FiniteSpace::from_family(points, opens)
    }
}

/// `∅`, `X` open and the family closed under ∪ and ∩.
pub fn validate_space(s: &FiniteSpace) -> Result<(), SpaceViolation> {
    if !s.is_open(0) {
        return Err(SpaceViolation::MissingEmpty);
    }
    if !s.is_open(s.full()) {
        return Err(SpaceViolation::MissingFull);
    }
    if let Some(&o) = s.opens.iter().find(|&&o| o & !s.full() != 0) {
        return Err(SpaceViolation::OutOfRange(o));
    }
    for (i, &u) in s.opens.iter().enumerate() {
        for &v in &s.opens[i + 1..] {
            if !s.is_open(u | v) {
                return Err(SpaceViolation::Union(u, v));
            }
            if !s.is_open(u & v) {
                return Err(SpaceViolation::Intersection(u, v));
            }
        }
    }
    Ok(())
}

/// Closures of any two non-empty opens meet, checked over all pairs.
pub fn coconnected(s: &FiniteSpace) -> bool {
    let ne: Vec<Set> = s.opens.iter().copied().filter(|&o| o != 0).collect();
    ne.iter().all(|&u| ne.iter().all(|&v| s.closure(u) & s.closure(v) != 0))
}

/// Γ₀(a) = ∅, Γᵢ₊₁(a) = {b : ∃ open U ∋ a, V ∋ b, U ∩ V ⊆ Γᵢ(a)}, up to
/// and including the first repeated set.
pub fn gamma_iteration(s: &FiniteSpace, a: usize) -> Vec<Set> {
    let nb = s.neighbourhoods();
    let na = nb[a];
    let mut out = vec![0 as Set];
    loop {
        let g = *out.last().expect("nonempty");
        let next = (0..s.size).filter(|&b| na & nb[b] & !g == 0).fold(0, |acc, b| acc | 1 << b);
        out.push(next);
        if next == g {
            return out;
        }
    }
}

/// Γₙ(a) with the iteration continued past its fixpoint.
pub fn gamma_at(steps: &[Set], n: usize) -> Set {
    steps[n.min(steps.len() - 1)]
}

/// Γₙ(a) = X ∖ {a}.
pub fn n_step_hausdorff_in(s: &FiniteSpace, a: usize, n: usize) -> bool {
    gamma_at(&gamma_iteration(s, a), n) == s.full() & !(1 << a)
}

/// All topologies on `k ≤ 3` points: every family of proper non-empty
/// subsets, completed with ∅ and X, kept when closed under ∪ and ∩.
pub fn enumerate_topologies(k: usize) -> Vec<FiniteSpace> {
    assert!((1..=3).contains(&k), "exhaustive enumeration only for k ≤ 3");
    let fullset = full(k);
    let middle: Vec<Set> = (1..fullset).collect();
    let mut out = Vec::new();
    for mask in 0u64..1 << middle.len() {
        let fam = bits(mask).map(|i| middle[i]).chain([0, fullset]);
        let s = FiniteSpace::from_family(k, fam);
        if validate_space(&s).is_ok() {
            out.push(s);
        }
    }
    out
}

pub fn specialization_dot(s: &FiniteSpace) -> String {
    crate::order::hasse_dot(&s.specialization(), None)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Separation straight from the definitions, over all open pairs.
    fn separated_brute(s: &FiniteSpace, a: usize, b: usize, level: Level) -> bool {
        let has = |o: Set, x: usize| o >> x & 1 == 1;
        let os = s.opens();
        match level {
            Level::T0 => os.iter().any(|&u| has(u, a) != has(u, b)),
            Level::T1 => os.iter().any(|&u| has(u, a) && !has(u, b)) && os.iter().any(|&u| has(u, b) && !has(u, a)),
            Level::T2 => os.iter().any(|&u| os.iter().any(|&v| has(u, a) && has(v, b) && u & v == 0)),
            Level::T2Half => os
                .iter()
                .any(|&u| os.iter().any(|&v| has(u, a) && has(v, b) && s.closure(u) & s.closure(v) == 0)),
        }
    }

    fn gamma_brute(s: &FiniteSpace, a: usize, steps: usize) -> Vec<Set> {
        let has = |o: Set, x: usize| o >> x & 1 == 1;
        let mut out = vec![0];
        for _ in 0..steps {
            let g = *out.last().unwrap();
            let next = (0..s.size())
                .filter(|&b| s.opens().iter().any(|&u| s.opens().iter().any(|&v| has(u, a) && has(v, b) && u & v & !g == 0)))
                .fold(0, |acc, b| acc | 1 << b);
            out.push(next);
        }
        out
    }

    #[test]
    fn validation() {
        assert!(validate_space(&FiniteSpace::sierpinski()).is_ok());
        let bad = FiniteSpace::from_family(2, [0, 0b01, 0b10]);
        assert_eq!(validate_space(&bad), Err(SpaceViolation::MissingFull));
        assert!(validate_space(&FiniteSpace::discrete(3)).is_ok());
    }

    #[test]
    fn topology_counts() {
        assert_eq!(enumerate_topologies(1).len(), 1);
        assert_eq!(enumerate_topologies(2).len(), 4);
        assert_eq!(enumerate_topologies(3).len(), 29);
    }

    #[test]
    fn specialization_examples() {
        let s = FiniteSpace::sierpinski();
        assert_eq!(s.specialization(), BinRel::from_pairs(2, [(0, 0), (1, 1), (0, 1)]));
        assert_eq!(FiniteSpace::discrete(3).specialization(), BinRel::equality(3));
        let ind = FiniteSpace::indiscrete(2);
        assert_eq!(ind.specialization(), BinRel::total(2));
        assert!(!ind.is_t0());
    }

    #[test]
    fn closure_and_separation() {
        let s = FiniteSpace::sierpinski();
        assert_eq!(s.closure(0b10), 0b11);
        assert!(!s.separated(0, 1, Level::T1));
        assert!(!s.separated_in(0, Level::T1));
        let d = FiniteSpace::discrete(3);
        assert!((0..3).all(|a| (0..3).all(|b| a == b || d.separated(a, b, Level::T2Half))));
        let one = FiniteSpace::discrete(1);
        for l in [Level::T0, Level::T1, Level::T2, Level::T2Half] {
            assert!(one.separated_in(0, l));
        }
    }

    #[test]
    fn neighbourhood_shortcut_matches_definitions() {
        for k in 1..=3 {
            for s in enumerate_topologies(k) {
                for a in 0..k {
                    for b in 0..k {
                        if a != b {
                            for l in [Level::T0, Level::T1, Level::T2, Level::T2Half] {
                                assert_eq!(s.separated(a, b, l), separated_brute(&s, a, b, l));
                            }
                        }
                    }
                    let g = gamma_iteration(&s, a);
                    let brute = gamma_brute(&s, a, g.len() - 1);
                    assert_eq!(g, brute);
                }
            }
        }
    }

    #[test]
    fn gamma_examples() {
        let d = FiniteSpace::discrete(3);
        assert_eq!(gamma_iteration(&d, 0)[1], 0b110);
        let s = FiniteSpace::sierpinski();
        assert!(gamma_iteration(&s, 0).iter().all(|&g| g == 0));
        let one = FiniteSpace::discrete(1);
        assert_eq!(gamma_iteration(&one, 0)[1], 0);
        assert!(n_step_hausdorff_in(&one, 0, 1));
    }

    #[test]
    fn coconnected_examples() {
        assert!(coconnected(&FiniteSpace::indiscrete(3)));
        assert!(!coconnected(&FiniteSpace::discrete(2)));
        assert!(coconnected(&FiniteSpace::sierpinski()));
    }

    #[test]
    fn t0_quotient_and_t1_order() {
        for k in 1..=3 {
            for s in enumerate_topologies(k) {
                let (q, _) = s.t0_quotient();
                assert!(validate_space(&q).is_ok());
                assert!(q.is_t0());
                assert_eq!(s.specialization() == BinRel::equality(k), s.satisfies(Level::T1));
            }
        }
    }

    #[test]
    fn product_of_sierpinski() {
        let p = FiniteSpace::sierpinski().product(2);
        assert!(validate_space(&p).is_ok());
        // opens are the up-sets of the product order on {0,1}²
        assert_eq!(p.opens().len(), 6);
    }

    #[test]
    fn json_round_trip() {
        let s = FiniteSpace::sierpinski();
        assert_eq!(FiniteSpace::from_json(&s.to_json().to_string()).unwrap(), s);
        assert!(FiniteSpace::from_json(r#"{"size":2,"opens":[[],[0],[1]]}"#).is_err());
    }
}
