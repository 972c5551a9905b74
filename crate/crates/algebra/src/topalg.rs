//! Topological and semitopological algebras: continuity, the monotonicity
//! companion, and the separation statements for n-subtractive algebras.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{binary_table, AlgError, AlgTerm, FiniteAlgebra};
use crate::order::for_each_tuple;
use crate::relation::{bits, BinRel};
use crate::subtractive::{rank_and_diagonals, Ranks};
use crate::topology::{elements, gamma_iteration, set_of, FiniteSpace, Level, Set};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Topological,
    Semitopological,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "topological" | "top" => Ok(Mode::Topological),
            "semitopological" | "semi" => Ok(Mode::Semitopological),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

/// A function and an open whose preimage is not open, with a point of the
/// preimage none of whose neighbourhoods maps into the open.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discontinuity {
    pub function: String,
    pub open: Vec<usize>,
    pub point: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TopCheck {
    pub mode: Mode,
    pub holds: bool,
    /// First failure per function.
    pub failures: Vec<Discontinuity>,
    /// Every operation was checked against the explicit product topology
    /// (otherwise against boxes of least neighbourhoods).
    pub product_checked: bool,
    /// Number of unary polynomial functions, semitopological mode only.
    pub polynomials: Option<usize>,
    /// Each basic operation against the specialization preorder.
    pub monotone: Vec<(String, bool)>,
    /// Continuous operations are monotone.
    pub lemma_1_1: bool,
}

/// Largest product carrier checked explicitly.
const PRODUCT_POINTS: usize = 64;
/// Cap on |polynomials|^arity in the closure computation.
const POLY_WORK: usize = 50_000_000;

/// A space with cached products and neighbourhoods, for repeated checks.
pub struct TopContext<'s> {
    pub space: &'s FiniteSpace,
    nbhd: Vec<Set>,
    spec: BinRel,
    products: HashMap<usize, FiniteSpace>,
}

impl<'s> TopContext<'s> {
    pub fn new(space: &'s FiniteSpace) -> TopContext<'s> {
        TopContext { space, nbhd: space.neighbourhoods(), spec: space.specialization(), products: HashMap::new() }
    }

    fn product(&mut self, n: usize) -> Option<&FiniteSpace> {
        let k = self.space.size();
        if n == 0 || k.checked_pow(n as u32).is_none_or(|p| p > PRODUCT_POINTS) {
            return None;
        }
        let space = self.space;
        Some(self.products.entry(n).or_insert_with(|| space.product(n)))
    }

    /// Point `t` whose box of least neighbourhoods leaves `open` although
    /// `f(t) ∈ open`.
    fn bad_point(&self, arity: usize, f: &dyn Fn(&[usize]) -> usize, open: Set) -> Option<Vec<usize>> {
        let k = self.space.size();
        let mut found = None;
        for_each_tuple(k, arity, |t| {
            if found.is_some() || open >> f(t) & 1 == 0 {
                return;
            }
            let mut u = vec![0; arity];
            let mut escapes = false;
            let boxes: Vec<Vec<usize>> = t.iter().map(|&x| elements(self.nbhd[x])).collect();
            let mut idx = vec![0; arity];
            'outer: loop {
                for i in 0..arity {
                    u[i] = boxes[i][idx[i]];
                }
                if open >> f(&u) & 1 == 0 {
                    escapes = true;
                    break;
                }
                let mut i = arity;
                loop {
                    if i == 0 {
                        break 'outer;
                    }
                    i -= 1;
                    idx[i] += 1;
                    if idx[i] < boxes[i].len() {
                        break;
                    }
                    idx[i] = 0;
                }
            }
            if escapes {
                found = Some(t.to_vec());
            }
        });
        found
    }

    /// Continuity of `f: A^arity → A`. The explicit product is used when it
    /// fits in a bit set.
    fn continuity(&mut self, name: &str, arity: usize, f: &dyn Fn(&[usize]) -> usize) -> (Option<Discontinuity>, bool) {
        let k = self.space.size();
        let opens: Vec<Set> = self.space.opens().to_vec();
        if arity == 0 {
            return (None, true);
        }
        let explicit = self.product(arity).cloned();
        let bad_open = match &explicit {
            Some(p) => opens.iter().copied().find(|&u| {
                let mut pre: Set = 0;
                let mut i = 0;
                for_each_tuple(k, arity, |t| {
                    if u >> f(t) & 1 == 1 {
                        pre |= 1 << i;
                    }
                    i += 1;
                });
                !p.is_open(pre)
            }),
            // least neighbourhoods are the only opens that matter
            None => self.nbhd.iter().copied().find(|&u| self.bad_point(arity, f, u).is_some()),
        };
        let failure = bad_open.map(|u| Discontinuity {
            function: name.to_string(),
            open: elements(u),
            point: self.bad_point(arity, f, u).expect("a preimage that is not open has a bad point"),
        });
        (failure, explicit.is_some())
    }

    fn monotone(&self, arity: usize, f: &dyn Fn(&[usize]) -> usize) -> bool {
        let k = self.space.size();
        let mut ok = true;
        for_each_tuple(k, arity, |t| {
            if !ok {
                return;
            }
            let mut u = t.to_vec();
            for i in 0..arity {
                for b in bits(self.spec.row(t[i])) {
                    u[i] = b;
                    if !self.spec.contains(f(t), f(&u)) {
                        ok = false;
                    }
                }
                u[i] = t[i];
            }
        });
        ok
    }

    pub fn check(&mut self, a: &FiniteAlgebra, mode: Mode) -> Result<TopCheck, AlgError> {
        if a.size != self.space.size() {
            return Err(AlgError::Invalid(format!(
                "algebra has {} elements, space has {}",
                a.size,
                self.space.size()
            )));
        }
        let mut failures = Vec::new();
        let mut product_checked = true;
        let mut op_continuous = Vec::new();
        let mut polynomials = None;
        match mode {
            Mode::Topological => {
                for (i, o) in a.operations.iter().enumerate() {
                    let f = |t: &[usize]| a.apply(i, t);
                    let (fail, explicit) = self.continuity(&o.name, o.arity, &f);
                    product_checked &= explicit;
                    op_continuous.push(fail.is_none());
                    failures.extend(fail);
                }
            }
            Mode::Semitopological => {
                let polys = unary_polynomials(a)?;
                polynomials = Some(polys.len());
                for p in &polys {
                    let f = |t: &[usize]| p[t[0]] as usize;
                    let (fail, explicit) = self.continuity(&poly_name(p), 1, &f);
                    product_checked &= explicit;
                    if let Some(d) = fail {
                        failures.push(d);
                        break;
                    }
                }
                op_continuous = vec![failures.is_empty(); a.operations.len()];
            }
        }
        let monotone: Vec<(String, bool)> = a
            .operations
            .iter()
            .enumerate()
            .map(|(i, o)| (o.name.clone(), self.monotone(o.arity, &|t: &[usize]| a.apply(i, t))))
            .collect();
        let lemma_1_1 = monotone.iter().zip(&op_continuous).all(|((_, m), &c)| !c || *m);
        Ok(TopCheck { mode, holds: failures.is_empty(), failures, product_checked, polynomials, monotone, lemma_1_1 })
    }
}

fn poly_name(p: &[u8]) -> String {
    let vals: Vec<String> = p.iter().map(|v| v.to_string()).collect();
    format!("x ↦ [{}]", vals.join(","))
}

/// Closure of the identity and the constant maps under the basic
/// operations, as value tables.
pub fn unary_polynomials(a: &FiniteAlgebra) -> Result<Vec<Vec<u8>>, AlgError> {
    let k = a.size;
    let max_arity = a.operations.iter().map(|o| o.arity).max().unwrap_or(0) as u32;
    let bound = k.checked_pow(k as u32).and_then(|m| m.checked_pow(max_arity));
    if k > 255 || bound.is_none_or(|w| w > POLY_WORK) {
        return Err(AlgError::TooLarge { size: k, limit: 5 });
    }
    let mut list: Vec<Vec<u8>> = vec![(0..k as u8).collect()];
    list.extend((0..k as u8).map(|c| vec![c; k]));
    list.sort();
    list.dedup();
    let mut index: HashMap<Vec<u8>, usize> = list.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut start = 0;
    while start < list.len() {
        let end = list.len();
        let mut fresh = Vec::new();
        for (oi, o) in a.operations.iter().enumerate() {
            for_each_tuple(end, o.arity, |t| {
                if t.iter().all(|&i| i < start) {
                    return;
                }
                let mut args = vec![0; o.arity];
                let g: Vec<u8> = (0..k)
                    .map(|x| {
                        for (j, &fi) in t.iter().enumerate() {
                            args[j] = list[fi][x] as usize;
                        }
                        a.apply(oi, &args) as u8
                    })
                    .collect();
                if !index.contains_key(&g) {
                    index.insert(g.clone(), usize::MAX);
                    fresh.push(g);
                }
            });
        }
        start = end;
        list.extend(fresh);
    }
    Ok(list)
}

pub fn check_top_algebra(a: &FiniteAlgebra, s: &FiniteSpace, mode: Mode) -> Result<TopCheck, AlgError> {
    TopContext::new(s).check(a, mode)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    NotApplicable,
}

/// The statements checked by [`subtractive_separation_suite`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SepClaim {
    ROpen,
    SigmaOpen,
    RBelowNextSigma,
    T1InZero,
    ZeroClosed,
    DiagClosed,
    DiagT1,
    InOwnSigma,
    RBelowSigma,
    SigmaTop,
    DiagT2,
    DiagT2Half,
    TwoSubtractiveT2Half,
    StepHausdorffInZero,
}

impl SepClaim {
    pub const ALL: [SepClaim; 14] = [
        SepClaim::ROpen,
        SepClaim::SigmaOpen,
        SepClaim::RBelowNextSigma,
        SepClaim::T1InZero,
        SepClaim::ZeroClosed,
        SepClaim::DiagClosed,
        SepClaim::DiagT1,
        SepClaim::InOwnSigma,
        SepClaim::RBelowSigma,
        SepClaim::SigmaTop,
        SepClaim::DiagT2,
        SepClaim::DiagT2Half,
        SepClaim::TwoSubtractiveT2Half,
        SepClaim::StepHausdorffInZero,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SepClaim::ROpen => "R_i open",
            SepClaim::SigmaOpen => "Σ_i open",
            SepClaim::RBelowNextSigma => "R_{i-1} ⊆ Σ_i",
            SepClaim::T1InZero => "T1-separated in 0",
            SepClaim::ZeroClosed => "{0} closed",
            SepClaim::DiagClosed => "Diag_i closed",
            SepClaim::DiagT1 => "s_i(a,b) ≠ 0 ⇒ a,b T1-separated",
            SepClaim::InOwnSigma => "a ∈ Σ_κ(a)",
            SepClaim::RBelowSigma => "R_i ⊆ Σ_i",
            SepClaim::SigmaTop => "Σ_{n-1} = A∖{0}",
            SepClaim::DiagT2 => "T2 in Diag_i",
            SepClaim::DiagT2Half => "T2½ in Diag_i",
            SepClaim::TwoSubtractiveT2Half => "n = 2: s_1(a,b) ≠ 0 ⇒ T2½",
            SepClaim::StepHausdorffInZero => "(n-1)-step Hausdorff in 0",
        }
    }

    /// Needs a topological (not just semitopological) T₀ algebra.
    pub fn needs_topological(self) -> bool {
        matches!(
            self,
            SepClaim::InOwnSigma
                | SepClaim::RBelowSigma
                | SepClaim::SigmaTop
                | SepClaim::DiagT2
                | SepClaim::DiagT2Half
                | SepClaim::TwoSubtractiveT2Half
                | SepClaim::StepHausdorffInZero
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Statement {
    pub claim: SepClaim,
    pub name: &'static str,
    pub outcome: Outcome,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    /// n, one more than the number of witnesses.
    pub n: usize,
    pub zero: usize,
    pub t0: bool,
    pub topological: bool,
    pub semitopological: bool,
    pub ranks: Ranks,
    /// `r[i]` = R_i for 0 ≤ i ≤ n − 1.
    pub r: Vec<Vec<usize>>,
    /// `sigma[i - 1]` = Σ_i for 1 ≤ i ≤ n.
    pub sigma: Vec<Vec<usize>>,
    /// Γ₀(0), Γ₁(0), … up to the fixpoint.
    pub gamma_zero: Vec<Vec<usize>>,
    pub statements: Vec<Statement>,
}

impl SeparationReport {
    pub fn outcome(&self, c: SepClaim) -> Outcome {
        self.statements.iter().find(|s| s.claim == c).map(|s| s.outcome).expect("every claim is reported")
    }

    pub fn failures(&self) -> impl Iterator<Item = &Statement> {
        self.statements.iter().filter(|s| s.outcome == Outcome::Fail)
    }
}

fn first<T>(it: impl IntoIterator<Item = T>, show: impl Fn(T) -> String) -> Option<String> {
    it.into_iter().next().map(show)
}

pub fn subtractive_separation_suite(
    a: &FiniteAlgebra,
    s: &FiniteSpace,
    zero: usize,
    witnesses: &[AlgTerm],
) -> Result<SeparationReport, AlgError> {
    let mut ctx = TopContext::new(s);
    subtractive_separation_suite_in(&mut ctx, a, zero, witnesses)
}

/// As [`subtractive_separation_suite`], reusing a prepared space.
pub fn subtractive_separation_suite_in(
    ctx: &mut TopContext<'_>,
    a: &FiniteAlgebra,
    zero: usize,
    witnesses: &[AlgTerm],
) -> Result<SeparationReport, AlgError> {
    if witnesses.is_empty() {
        return Err(AlgError::Invalid("at least one subtractive witness is needed".into()));
    }
    let ranks = rank_and_diagonals(a, zero, witnesses)?;
    let topological = ctx.check(a, Mode::Topological)?.holds;
    let semitopological = topological || ctx.check(a, Mode::Semitopological)?.holds;
    let s = ctx.space;
    let t0 = s.is_t0();
    let k = a.size;
    let links = witnesses.len();
    let n = links + 1;
    let nb = s.neighbourhoods();
    let sv = |i: usize, x: usize, y: usize| ranks.s(i, x, y);

    let r: Vec<Set> = (0..n).map(|i| set_of(ranks.r(i))).collect();
    // a ∈ Σ_i iff N(a) ∩ N(0) ⊆ R_{i-1}
    let sigma: Vec<Set> = (1..=n)
        .map(|i| (0..k).filter(|&x| nb[x] & nb[zero] & !r[i - 1] == 0).fold(0, |acc, x| acc | 1 << x))
        .collect();
    let diag: Vec<Set> = ranks.diag.iter().map(|d| set_of(d.iter().copied())).collect();
    let gamma = gamma_iteration(s, zero);
    let not_zero = s.full() & !(1 << zero);
    let pairs_in = |d: Set| {
        let pts = elements(d);
        pts.iter().flat_map(|&x| pts.iter().map(move |&y| (x, y))).collect::<Vec<_>>()
    };

    let mut statements = Vec::new();
    for claim in SepClaim::ALL {
        let pre = t0 && if claim.needs_topological() { topological } else { semitopological };
        let pre = pre && (claim != SepClaim::TwoSubtractiveT2Half || n == 2);
        if !pre {
            statements.push(Statement { claim, name: claim.name(), outcome: Outcome::NotApplicable, witness: None });
            continue;
        }
        let witness = match claim {
            SepClaim::ROpen => first((0..n).filter(|&i| !s.is_open(r[i])), |i| format!("R_{i} = {:?}", elements(r[i]))),
            SepClaim::SigmaOpen => {
                first((1..=n).filter(|&i| !s.is_open(sigma[i - 1])), |i| format!("Σ_{i} = {:?}", elements(sigma[i - 1])))
            }
            SepClaim::RBelowNextSigma => first((1..=n).filter(|&i| r[i - 1] & !sigma[i - 1] != 0), |i| format!("i = {i}")),
            SepClaim::T1InZero => first((0..k).filter(|&b| b != zero && !s.separated(zero, b, Level::T1)), |b| format!("b = {b}")),
            SepClaim::ZeroClosed => (!s.is_closed(1 << zero)).then(|| format!("closure = {:?}", elements(s.closure(1 << zero)))),
            SepClaim::DiagClosed => first((1..=links).filter(|&i| !s.is_closed(diag[i - 1])), |i| format!("Diag_{i}")),
            SepClaim::DiagT1 => first(
                (1..=links).flat_map(|i| pairs_in(diag[i - 1]).into_iter().map(move |(x, y)| (i, x, y))).filter(|&(i, x, y)| {
                    sv(i, x, y) != zero && !s.separated(x, y, Level::T1)
                }),
                |(i, x, y)| format!("i = {i}, a = {x}, b = {y}"),
            ),
            SepClaim::InOwnSigma => first(
                (0..k).filter(|&x| x != zero && sigma[ranks.kappa[x].expect("nonzero has a rank") - 1] >> x & 1 == 0),
                |x| format!("a = {x}"),
            ),
            SepClaim::RBelowSigma => first((1..n).filter(|&i| r[i] & !sigma[i - 1] != 0), |i| format!("i = {i}")),
            SepClaim::SigmaTop => (sigma[n - 2] != not_zero).then(|| format!("Σ_{} = {:?}", n - 1, elements(sigma[n - 2]))),
            SepClaim::DiagT2 | SepClaim::DiagT2Half => {
                let mut bad = None;
                for i in 1..=links {
                    let (sub, pts) = s.subspace(diag[i - 1]);
                    for (ix, &x) in pts.iter().enumerate() {
                        for (iy, &y) in pts.iter().enumerate() {
                            let v = sv(i, x, y);
                            let fails = if claim == SepClaim::DiagT2 {
                                v != zero && !sub.separated(ix, iy, Level::T2)
                            } else {
                                v != zero && s.separated(v, zero, Level::T2) && !sub.separated(ix, iy, Level::T2Half)
                            };
                            if fails && bad.is_none() {
                                bad = Some(format!("i = {i}, a = {x}, b = {y}"));
                            }
                        }
                    }
                }
                bad
            }
            SepClaim::TwoSubtractiveT2Half => first(
                pairs_in(s.full()).into_iter().filter(|&(x, y)| sv(1, x, y) != zero && !s.separated(x, y, Level::T2Half)),
                |(x, y)| format!("a = {x}, b = {y}"),
            ),
            SepClaim::StepHausdorffInZero => {
                let g = crate::topology::gamma_at(&gamma, n - 1);
                (g != not_zero).then(|| format!("Γ_{}(0) = {:?}", n - 1, elements(g)))
            }
        };
        let outcome = if witness.is_some() { Outcome::Fail } else { Outcome::Pass };
        statements.push(Statement { claim, name: claim.name(), outcome, witness });
    }

    Ok(SeparationReport {
        n,
        zero,
        t0,
        topological,
        semitopological,
        r: r.iter().map(|&x| elements(x)).collect(),
        sigma: sigma.iter().map(|&x| elements(x)).collect(),
        gamma_zero: gamma.iter().map(|&x| elements(x)).collect(),
        ranks,
        statements,
    })
}

/// With `t(a,a) = t(b,b)`, `t(a,b) ≠ t(a,a)` and those two values
/// T₀-separated, a semitopological algebra separates `a` and `b` (T₁).
pub fn lemma_semi_check(a: &FiniteAlgebra, s: &FiniteSpace, t: &AlgTerm, x: usize, y: usize) -> Result<Outcome, AlgError> {
    a.check_element(x)?;
    a.check_element(y)?;
    let table = binary_table(a, t)?;
    let tv = |p: usize, q: usize| table[p * a.size + q];
    let (c, d) = (tv(x, x), tv(x, y));
    if c != tv(y, y) || d == c || !s.separated(c, d, Level::T0) {
        return Ok(Outcome::NotApplicable);
    }
    if !check_top_algebra(a, s, Mode::Semitopological)?.holds {
        return Ok(Outcome::NotApplicable);
    }
    Ok(if s.separated(x, y, Level::T1) { Outcome::Pass } else { Outcome::Fail })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SweepSummary {
    pub tables: usize,
    pub subtractive_tables: usize,
    pub spaces: usize,
    /// (table, space) pairs that are T₀ topological algebras.
    pub checked: usize,
    /// (carrier, table index, space index, claim, witness).
    pub failures: Vec<(usize, usize, usize, &'static str, Option<String>)>,
}

/// Every one-operation table on carriers `1..=max_k` with a 2-subtractive
/// witness of depth ≤ `depth`, against every T₀ topology.
pub fn separation_sweep(max_k: usize, depth: usize) -> Result<SweepSummary, AlgError> {
    let mut out = SweepSummary::default();
    for k in 1..=max_k {
        let spaces: Vec<FiniteSpace> = crate::topology::enumerate_topologies(k).into_iter().filter(|s| s.is_t0()).collect();
        out.spaces += spaces.len();
        let mut ctxs: Vec<TopContext<'_>> = spaces.iter().map(TopContext::new).collect();
        for idx in 0..crate::corpus::binary_table_count(k) {
            let a = crate::corpus::binary_table(k, idx);
            out.tables += 1;
            let Some(w) = crate::search::find_subtractive_witnesses(&a, 0, 2, depth)? else { continue };
            out.subtractive_tables += 1;
            for (si, ctx) in ctxs.iter_mut().enumerate() {
                if !ctx.check(&a, Mode::Topological)?.holds {
                    continue;
                }
                out.checked += 1;
                let rep = subtractive_separation_suite_in(ctx, &a, 0, &w)?;
                for st in rep.failures() {
                    out.failures.push((k, idx, si, st.name, st.witness.clone()));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::search::find_subtractive_witnesses;
    use crate::topology::enumerate_topologies;

    fn xor() -> AlgTerm {
        AlgTerm::Op(0, vec![AlgTerm::Var(0), AlgTerm::Var(1)])
    }

    #[test]
    fn z2_discrete_is_topological() {
        let c = check_top_algebra(&corpus::z2_xor(), &FiniteSpace::discrete(2), Mode::Topological).unwrap();
        assert!(c.holds && c.product_checked && c.lemma_1_1);
    }

    #[test]
    fn z2_sierpinski_is_not() {
        let z2 = corpus::z2_xor();
        let s = FiniteSpace::sierpinski();
        let c = check_top_algebra(&z2, &s, Mode::Topological).unwrap();
        assert!(!c.holds);
        assert_eq!(c.monotone, vec![("⊕".to_string(), false)]);
        assert!(c.lemma_1_1, "discontinuous, so nothing is claimed");
        let semi = check_top_algebra(&z2, &s, Mode::Semitopological).unwrap();
        assert!(!semi.holds);
        assert_eq!(semi.polynomials, Some(4));
    }

    #[test]
    fn constant_ops_on_every_space() {
        for k in 1..=3 {
            let a = corpus::constant_ops(k);
            for s in enumerate_topologies(k) {
                assert!(check_top_algebra(&a, &s, Mode::Topological).unwrap().holds);
            }
        }
    }

    #[test]
    fn carrier_mismatch() {
        assert!(check_top_algebra(&corpus::z2_xor(), &FiniteSpace::discrete(3), Mode::Topological).is_err());
    }

    /// The explicit product and the neighbourhood-box test agree.
    #[test]
    fn product_and_boxes_agree() {
        for idx in (0..corpus::binary_table_count(3)).step_by(211) {
            let a = corpus::binary_table(3, idx);
            for s in enumerate_topologies(3) {
                let mut ctx = TopContext::new(&s);
                let f = |t: &[usize]| a.apply(0, t);
                let (explicit, used) = ctx.continuity("·", 2, &f);
                assert!(used);
                let boxes = ctx.nbhd.iter().any(|&u| ctx.bad_point(2, &f, u).is_some());
                assert_eq!(explicit.is_some(), boxes);
            }
        }
    }

    /// Continuity implies semitopological, and Lemma 1.1 never fails.
    #[test]
    fn modes_and_lemma_1_1() {
        for idx in (0..corpus::binary_table_count(3)).step_by(97) {
            let a = corpus::binary_table(3, idx);
            for s in enumerate_topologies(3) {
                let top = check_top_algebra(&a, &s, Mode::Topological).unwrap();
                let semi = check_top_algebra(&a, &s, Mode::Semitopological).unwrap();
                assert!(top.lemma_1_1 && semi.lemma_1_1);
                assert!(!top.holds || semi.holds);
            }
        }
    }

    #[test]
    fn z2_discrete_suite() {
        let z2 = corpus::z2_xor();
        let rep = subtractive_separation_suite(&z2, &FiniteSpace::discrete(2), 0, &[xor()]).unwrap();
        assert!(rep.topological && rep.t0);
        assert_eq!(rep.ranks.diag, vec![vec![0, 1]]);
        assert_eq!(rep.outcome(SepClaim::ZeroClosed), Outcome::Pass);
        assert_eq!(rep.outcome(SepClaim::TwoSubtractiveT2Half), Outcome::Pass);
        assert_eq!(rep.outcome(SepClaim::StepHausdorffInZero), Outcome::Pass);
        assert_eq!(rep.failures().count(), 0);
        assert_eq!(rep.sigma, vec![vec![1], vec![1]]);
    }

    #[test]
    fn z2_sierpinski_suite_not_applicable() {
        let rep = subtractive_separation_suite(&corpus::z2_xor(), &FiniteSpace::sierpinski(), 0, &[xor()]).unwrap();
        assert!(rep.statements.iter().all(|s| s.outcome == Outcome::NotApplicable));
    }

    #[test]
    fn trivial_suite_vacuous() {
        let t = corpus::trivial();
        let rep = subtractive_separation_suite(&t, &FiniteSpace::discrete(1), 0, &[AlgTerm::Var(0)]).unwrap();
        assert_eq!(rep.failures().count(), 0);
    }

    /// Without T₀ the open-rank statement genuinely fails, so it is gated.
    #[test]
    fn indiscrete_is_gated() {
        let z2 = corpus::z2_xor();
        let s = FiniteSpace::indiscrete(2);
        assert!(check_top_algebra(&z2, &s, Mode::Topological).unwrap().holds);
        assert!(!s.is_open(0b10));
        let rep = subtractive_separation_suite(&z2, &s, 0, &[xor()]).unwrap();
        assert_eq!(rep.outcome(SepClaim::ROpen), Outcome::NotApplicable);
    }

    #[test]
    fn lemma_semi_examples() {
        let z2 = corpus::z2_xor();
        let d = FiniteSpace::discrete(2);
        assert_eq!(lemma_semi_check(&z2, &d, &xor(), 0, 1).unwrap(), Outcome::Pass);
        assert_eq!(lemma_semi_check(&z2, &d, &xor(), 1, 1).unwrap(), Outcome::NotApplicable);
        let t = corpus::trivial();
        assert_eq!(lemma_semi_check(&t, &FiniteSpace::discrete(1), &AlgTerm::Var(0), 0, 0).unwrap(), Outcome::NotApplicable);
    }

    /// Every 2-element table with a 2-subtractive witness, on every T₀
    /// space where it is topological.
    #[test]
    fn two_element_sweep() {
        let mut checked = 0;
        for a in corpus::all_binary_tables(2) {
            let Some(w) = find_subtractive_witnesses(&a, 0, 2, 3).unwrap() else { continue };
            for s in enumerate_topologies(2) {
                let rep = subtractive_separation_suite(&a, &s, 0, &w).unwrap();
                assert_eq!(rep.failures().count(), 0, "{:?}", rep.failures().collect::<Vec<_>>());
                checked += rep.topological as usize;
            }
        }
        assert!(checked > 0);
    }
}
