//! Ranks and diagonals of n-subtractive algebras, and the subtraction
//! sequence of a pair in an applicative algebra.

use serde::Serialize;

use crate::algebra::{binary_table, AlgError, AlgTerm, FiniteAlgebra};
use crate::order::{connected_components, is_compatible};
use crate::relation::BinRel;
use crate::search::check_subtractive;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ranks {
    pub zero: usize,
    /// Number of witnesses, n − 1.
    pub links: usize,
    /// κ(a), `None` for the zero.
    pub kappa: Vec<Option<usize>>,
    /// `diag[i - 1]` = Diag_i = {a : sᵢ(a,a) = 0}, for 1 ≤ i ≤ n − 1.
    pub diag: Vec<Vec<usize>>,
    /// Tables of the witnesses, row-major.
    pub tables: Vec<Vec<usize>>,
}

impl Ranks {
    /// R_i = {a : κ(a) ≤ i}.
    pub fn r(&self, i: usize) -> Vec<usize> {
        (0..self.kappa.len()).filter(|&a| self.kappa[a].is_some_and(|k| k <= i)).collect()
    }

    /// sᵢ(x, y), 1-based `i`.
    pub fn s(&self, i: usize, x: usize, y: usize) -> usize {
        self.tables[i - 1][x * self.kappa.len() + y]
    }
}

pub fn rank_and_diagonals(a: &FiniteAlgebra, zero: usize, witnesses: &[AlgTerm]) -> Result<Ranks, AlgError> {
    a.check_element(zero)?;
    if !check_subtractive(a, zero, witnesses)? {
        return Err(AlgError::Invalid("witnesses do not satisfy the subtractive identities".into()));
    }
    let k = a.size;
    let tables = witnesses.iter().map(|w| binary_table(a, w)).collect::<Result<Vec<_>, _>>()?;
    let s = |i: usize, x: usize, y: usize| tables[i][x * k + y];
    let kappa = (0..k)
        .map(|x| if x == zero { None } else { (0..tables.len()).find(|&i| s(i, x, zero) != zero).map(|i| i + 1) })
        .collect();
    let diag = (0..tables.len()).map(|i| (0..k).filter(|&x| s(i, x, x) == zero).collect()).collect();
    Ok(Ranks { zero, links: witnesses.len(), kappa, diag, tables })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeqVerdict {
    /// θPQ ≠ ω and P, Q lie in distinct components.
    Consistent,
    /// θPQ ≠ ω but the order puts P and Q in one component.
    Violation,
    /// θPQ = ω: nothing to check.
    NotApplicable,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubtractionSequence {
    /// s₁ = θPQ, s_{n+1} = θ s_n ω, until it repeats.
    pub sequence: Vec<usize>,
    pub order_compatible: bool,
    pub components: Vec<Vec<usize>>,
    pub verdict: SeqVerdict,
}

/// In an applicative algebra (binary `app`), with `θ x x = ω` and
/// `θ x ω = x`: if θPQ ≠ ω then P and Q are in distinct components of any
/// compatible partial order.
pub fn subtraction_sequence_check(
    a: &FiniteAlgebra,
    app: &str,
    theta: usize,
    omega: usize,
    order: &BinRel,
    p: usize,
    q: usize,
) -> Result<SubtractionSequence, AlgError> {
    let op = a.op_index(app)?;
    if a.operations[op].arity != 2 {
        return Err(AlgError::Invalid(format!("`{app}` is not binary")));
    }
    for e in [theta, omega, p, q] {
        a.check_element(e)?;
    }
    if order.size() != a.size {
        return Err(AlgError::Invalid("order has the wrong carrier".into()));
    }
    let ap = |x: usize, y: usize| a.apply(op, &[x, y]);
    let th = |x: usize, y: usize| ap(ap(theta, x), y);
    if let Some(x) = (0..a.size).find(|&x| th(x, x) != omega || th(x, omega) != x) {
        return Err(AlgError::Invalid(format!("subtractive laws fail at {x}")));
    }
    let mut sequence = vec![th(p, q)];
    loop {
        let next = th(*sequence.last().expect("nonempty"), omega);
        if sequence.contains(&next) {
            break;
        }
        sequence.push(next);
    }
    let components = connected_components(order)?;
    let comp = |x: usize| components.iter().position(|c| c.contains(&x));
    let verdict = if sequence[0] == omega {
        SeqVerdict::NotApplicable
    } else if comp(p) == comp(q) {
        SeqVerdict::Violation
    } else {
        SeqVerdict::Consistent
    };
    Ok(SubtractionSequence { sequence, order_compatible: is_compatible(a, order), components, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::search::find_subtractive_witnesses;

    #[test]
    fn z2_ranks() {
        let z2 = corpus::z2_xor();
        let w = find_subtractive_witnesses(&z2, 0, 2, 2).unwrap().unwrap();
        let r = rank_and_diagonals(&z2, 0, &w).unwrap();
        assert_eq!(r.kappa, vec![None, Some(1)]);
        assert_eq!(r.diag, vec![vec![0, 1]]);
        assert_eq!(r.r(0), Vec::<usize>::new());
        assert_eq!(r.r(1), vec![1]);
    }

    #[test]
    fn invalid_witnesses_rejected() {
        let z2 = corpus::z2_xor();
        assert!(rank_and_diagonals(&z2, 0, &[AlgTerm::Var(0)]).is_err());
    }

    /// Size-3 tables with 3-subtractive witnesses and an element of rank 2.
    #[test]
    fn rank_two_exists() {
        let found = corpus::all_binary_tables(3).find_map(|a| {
            let w = find_subtractive_witnesses(&a, 0, 3, 2).ok()??;
            let r = rank_and_diagonals(&a, 0, &w).ok()?;
            r.kappa.contains(&Some(2)).then_some((a, r))
        });
        let (a, r) = found.expect("a rank-2 example");
        for x in 1..3 {
            let k = r.kappa[x].unwrap();
            assert!((1..=2).contains(&k));
            assert!(r.diag[k - 1].contains(&x), "a ∈ Diag_κ(a)");
        }
        assert_eq!(r.diag[0], vec![0, 1, 2]);
        assert!(a.size == 3);
    }

    /// First 3-element table and (θ, ω) satisfying the laws with some
    /// θPQ ≠ ω.
    fn applicative() -> Option<(FiniteAlgebra, usize, usize)> {
        corpus::all_binary_tables(3).find_map(|a| {
            let ap = |x: usize, y: usize| a.apply(0, &[x, y]);
            (0..3).flat_map(|t| (0..3).map(move |o| (t, o))).find_map(|(t, o)| {
                let ok = (0..3).all(|x| ap(ap(t, x), x) == o && ap(ap(t, x), o) == x);
                let nontrivial = (0..3).any(|p| (0..3).any(|q| ap(ap(t, p), q) != o));
                (ok && nontrivial).then_some((a.clone(), t, o))
            })
        })
    }

    #[test]
    fn sequence_on_searched_table() {
        let (a, theta, omega) = applicative().expect("an applicative table");
        let ap = |x: usize, y: usize| a.apply(0, &[x, y]);
        let (p, q) = (0..3).flat_map(|p| (0..3).map(move |q| (p, q))).find(|&(p, q)| ap(ap(theta, p), q) != omega).unwrap();
        let eq = BinRel::equality(3);
        let r = subtraction_sequence_check(&a, "·", theta, omega, &eq, p, q).unwrap();
        assert_eq!(r.verdict, SeqVerdict::Consistent);
        assert_eq!(r.sequence.len(), 1, "s_n = s_1 under the laws");
        // a broken order placing P and Q together is flagged
        let mut all = BinRel::equality(3);
        all.insert(p.min(q), p.max(q));
        if p != q {
            let r = subtraction_sequence_check(&a, "·", theta, omega, &all, p, q).unwrap();
            assert_eq!(r.verdict, SeqVerdict::Violation);
            assert!(!r.order_compatible);
        }
    }

    #[test]
    fn trivial_sequence() {
        let t = corpus::trivial();
        let r = subtraction_sequence_check(&t, "·", 0, 0, &BinRel::equality(1), 0, 0).unwrap();
        assert_eq!(r.verdict, SeqVerdict::NotApplicable);
    }
}
