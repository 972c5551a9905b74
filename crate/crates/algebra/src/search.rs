//! Bounded-depth term enumeration and witness search for subtractive and
//! Mal'cev identities.
//!
//! Identities are checked pointwise, so a term only matters through its
//! values on the tuples the identities mention. Terms are grouped by those
//! values, and each group is represented by its least term in the canonical
//! order (size, then kind and index, then arguments left to right).

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::{eval, AlgError, AlgTerm, FiniteAlgebra};

#[derive(Clone, Debug)]
pub struct Class {
    pub term: AlgTerm,
    pub size: usize,
    pub values: Box<[u8]>,
}

/// The term classes of depth ≤ `depth` in `vars` variables, restricted to
/// `points`.
#[derive(Clone, Debug)]
pub struct TermClasses {
    pub classes: Vec<Class>,
    pub points: Vec<Vec<usize>>,
}

impl TermClasses {
    pub fn build(a: &FiniteAlgebra, vars: usize, points: Vec<Vec<usize>>, depth: usize) -> TermClasses {
        assert!(a.size <= 256, "values are stored as bytes");
        let np = points.len();
        let mut classes: Vec<Class> = Vec::new();
        let mut index: HashMap<Box<[u8]>, usize> = HashMap::new();
        fn offer(term: AlgTerm, size: usize, values: Vec<u8>, classes: &mut Vec<Class>, index: &mut HashMap<Box<[u8]>, usize>) {
            if let Some(&i) = index.get(&values[..]) {
                let c = &mut classes[i];
                if size < c.size || size == c.size && term.canonical_cmp(&c.term) == Ordering::Less {
                    c.term = term;
                    c.size = size;
                }
            } else {
                let values: Box<[u8]> = values.into();
                index.insert(values.clone(), classes.len());
                classes.push(Class { term, size, values });
            }
        }
        for v in 0..vars {
            let vals = points.iter().map(|p| p[v] as u8).collect();
            offer(AlgTerm::Var(v), 1, vals, &mut classes, &mut index);
        }
        for (ci, c) in a.constants.iter().enumerate() {
            offer(AlgTerm::Const(ci), 1, vec![c.value as u8; np], &mut classes, &mut index);
        }
        for (oi, op) in a.operations.iter().enumerate() {
            if op.arity == 0 {
                offer(AlgTerm::Op(oi, vec![]), 1, vec![op.table[0] as u8; np], &mut classes, &mut index);
            }
        }
        let k = a.size;
        let mut vals = vec![0u8; np];
        for _ in 0..depth {
            let prev: Vec<Class> = classes.clone();
            for (oi, op) in a.operations.iter().enumerate() {
                let n = op.arity;
                if n == 0 {
                    continue;
                }
                let mut idx = vec![0usize; n];
                'tuples: loop {
                    for (p, slot) in vals.iter_mut().enumerate() {
                        let t = idx.iter().fold(0usize, |acc, &c| acc * k + prev[c].values[p] as usize);
                        *slot = op.table[t] as u8;
                    }
                    let size = 1 + idx.iter().map(|&c| prev[c].size).sum::<usize>();
                    let better = match index.get(&vals[..]) {
                        None => true,
                        Some(&i) => size <= classes[i].size,
                    };
                    if better {
                        let term = AlgTerm::Op(oi, idx.iter().map(|&c| prev[c].term.clone()).collect());
                        offer(term, size, vals.clone(), &mut classes, &mut index);
                    }
                    let mut i = n;
                    loop {
                        if i == 0 {
                            break 'tuples;
                        }
                        i -= 1;
                        idx[i] += 1;
                        if idx[i] < prev.len() {
                            break;
                        }
                        idx[i] = 0;
                    }
                }
            }
        }
        classes.sort_by(|x, y| x.term.canonical_cmp(&y.term));
        TermClasses { classes, points }
    }
}

/// Witnesses `w₁…w_{n−1}` for a chain of identities `L(w₁) = start`,
/// `R(wᵢ) = L(wᵢ₊₁)`, `R(w_{n−1}) = end`, where `L` and `R` read a class's
/// values at two index lists of the same length.
fn chain_search(tc: &TermClasses, l: &[usize], r: &[usize], start: &[u8], end: &[u8], links: usize) -> Option<Vec<AlgTerm>> {
    let read = |c: &Class, ix: &[usize]| -> Vec<u8> { ix.iter().map(|&i| c.values[i]).collect() };
    let mut by_left: HashMap<Vec<u8>, Vec<usize>> = HashMap::new();
    for (i, c) in tc.classes.iter().enumerate() {
        by_left.entry(read(c, l)).or_default().push(i);
    }
    let rights: Vec<Vec<u8>> = tc.classes.iter().map(|c| read(c, r)).collect();
    // memo of (position, left vector) already known to fail
    let mut dead: std::collections::HashSet<(usize, Vec<u8>)> = Default::default();
    fn dfs(
        pos: usize,
        want: &[u8],
        links: usize,
        end: &[u8],
        by_left: &HashMap<Vec<u8>, Vec<usize>>,
        rights: &[Vec<u8>],
        dead: &mut std::collections::HashSet<(usize, Vec<u8>)>,
        out: &mut Vec<usize>,
    ) -> bool {
        if dead.contains(&(pos, want.to_vec())) {
            return false;
        }
        if let Some(cands) = by_left.get(want) {
            for &c in cands {
                out.push(c);
                let done = if pos + 1 == links {
                    rights[c] == end
                } else {
                    dfs(pos + 1, &rights[c], links, end, by_left, rights, dead, out)
                };
                if done {
                    return true;
                }
                out.pop();
            }
        }
        dead.insert((pos, want.to_vec()));
        false
    }
    let mut out = Vec::new();
    if links == 0 {
        return (start == end).then(Vec::new);
    }
    dfs(0, start, links, end, &by_left, &rights, &mut dead, &mut out)
        .then(|| out.into_iter().map(|i| tc.classes[i].term.clone()).collect())
}

/// Term classes prepared for a chain of identities `L(w₁) = start`,
/// `R(wᵢ) = L(wᵢ₊₁)`, `R(w_{n−1}) = end`; one build answers every `n`.
pub struct ChainSearch {
    classes: TermClasses,
    l: Vec<usize>,
    r: Vec<usize>,
    start: Vec<u8>,
    end: Vec<u8>,
}

impl ChainSearch {
    /// Points `(x,x)` and `(x,0)`.
    pub fn subtractive(a: &FiniteAlgebra, zero: usize, depth: usize) -> Result<ChainSearch, AlgError> {
        a.check_element(zero)?;
        let k = a.size;
        let mut points: Vec<Vec<usize>> = (0..k).map(|x| vec![x, x]).collect();
        points.extend((0..k).map(|x| vec![x, zero]));
        Ok(ChainSearch {
            classes: TermClasses::build(a, 2, points, depth),
            l: (0..k).collect(),
            r: (k..2 * k).collect(),
            start: vec![zero as u8; k],
            end: (0..k as u8).collect(),
        })
    }

    /// Points `(x,y,y)` and `(x,x,y)`.
    pub fn malcev(a: &FiniteAlgebra, depth: usize) -> ChainSearch {
        let k = a.size;
        let pairs: Vec<(usize, usize)> = (0..k).flat_map(|x| (0..k).map(move |y| (x, y))).collect();
        let mut points: Vec<Vec<usize>> = pairs.iter().map(|&(x, y)| vec![x, y, y]).collect();
        points.extend(pairs.iter().map(|&(x, y)| vec![x, x, y]));
        let m = pairs.len();
        ChainSearch {
            classes: TermClasses::build(a, 3, points, depth),
            l: (0..m).collect(),
            r: (m..2 * m).collect(),
            start: pairs.iter().map(|&(x, _)| x as u8).collect(),
            end: pairs.iter().map(|&(_, y)| y as u8).collect(),
        }
    }

    pub fn class_count(&self) -> usize {
        self.classes.classes.len()
    }

    /// The first witness tuple of length `n − 1`.
    pub fn witness(&self, n: usize) -> Result<Option<Vec<AlgTerm>>, AlgError> {
        if n < 2 {
            return Err(AlgError::Invalid("n must be at least 2".into()));
        }
        Ok(chain_search(&self.classes, &self.l, &self.r, &self.start, &self.end, n - 1))
    }

    /// The least `n ≤ max_n` with a witness.
    pub fn least_witness(&self, max_n: usize) -> Option<(usize, Vec<AlgTerm>)> {
        (2..=max_n).find_map(|n| self.witness(n).ok().flatten().map(|w| (n, w)))
    }
}

/// `s₁…s_{n−1}` with `0 = s₁(x,x)`, `sᵢ(x,0) = sᵢ₊₁(x,x)`, `s_{n−1}(x,0) = x`,
/// the first such tuple in enumeration order among terms of depth ≤ `depth`.
pub fn find_subtractive_witnesses(a: &FiniteAlgebra, zero: usize, n: usize, depth: usize) -> Result<Option<Vec<AlgTerm>>, AlgError> {
    ChainSearch::subtractive(a, zero, depth)?.witness(n)
}

/// `p₁…p_{n−1}` with `x = p₁(x,y,y)`, `pᵢ(x,x,y) = pᵢ₊₁(x,y,y)`,
/// `p_{n−1}(x,x,y) = y`.
pub fn find_malcev_terms(a: &FiniteAlgebra, n: usize, depth: usize) -> Result<Option<Vec<AlgTerm>>, AlgError> {
    ChainSearch::malcev(a, depth).witness(n)
}

/// Checks the subtractive identities for `ws` on all of `a`.
pub fn check_subtractive(a: &FiniteAlgebra, zero: usize, ws: &[AlgTerm]) -> Result<bool, AlgError> {
    if ws.is_empty() {
        return Ok(false);
    }
    let s = |i: usize, x: usize, y: usize| eval(a, &ws[i], &[x, y]);
    for x in 0..a.size {
        if s(0, x, x)? != zero || s(ws.len() - 1, x, zero)? != x {
            return Ok(false);
        }
        for i in 0..ws.len() - 1 {
            if s(i, x, zero)? != s(i + 1, x, x)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Checks the Mal'cev identities for `ps` on all of `a`.
pub fn check_malcev(a: &FiniteAlgebra, ps: &[AlgTerm]) -> Result<bool, AlgError> {
    if ps.is_empty() {
        return Ok(false);
    }
    let p = |i: usize, x: usize, y: usize, z: usize| eval(a, &ps[i], &[x, y, z]);
    for x in 0..a.size {
        for y in 0..a.size {
            if p(0, x, y, y)? != x || p(ps.len() - 1, x, x, y)? != y {
                return Ok(false);
            }
            for i in 0..ps.len() - 1 {
                if p(i, x, x, y)? != p(i + 1, x, y, y)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Three-valued verdict of a bounded check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bounded {
    Holds,
    Fails,
    Unknown,
}

/// Mal'cev identities in the extension of `a` by free generators, at
/// bounded depth. Identities of `a` are inherited by every algebra of its
/// variety, so a term witness settles the question; an unsuccessful bounded
/// search leaves it open.
pub fn free_extension_malcev(a: &FiniteAlgebra, n: usize, depth: usize) -> Result<Bounded, AlgError> {
    Ok(match find_malcev_terms(a, n, depth)? {
        Some(_) => Bounded::Holds,
        None => Bounded::Unknown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn show(a: &FiniteAlgebra, ws: &[AlgTerm], vars: &[&str]) -> Vec<String> {
        ws.iter().map(|w| w.display(a, vars).to_string()).collect()
    }

    #[test]
    fn subtractive_examples() {
        let z2 = corpus::z2_xor();
        let w = find_subtractive_witnesses(&z2, 0, 2, 2).unwrap().unwrap();
        assert_eq!(show(&z2, &w, &["x", "y"]), ["x⊕y"]);
        assert!(check_subtractive(&z2, 0, &w).unwrap());
        let meet = corpus::meet_semilattice2();
        for n in 2..=3 {
            assert_eq!(find_subtractive_witnesses(&meet, 0, n, 3).unwrap(), None);
        }
        let z4 = corpus::zk_minus(4);
        let w = find_subtractive_witnesses(&z4, 0, 2, 1).unwrap().unwrap();
        assert_eq!(show(&z4, &w, &["x", "y"]), ["x−y"]);
    }

    #[test]
    fn malcev_examples() {
        let z2 = corpus::z2_xor();
        let p = find_malcev_terms(&z2, 2, 2).unwrap().unwrap();
        assert!(check_malcev(&z2, &p).unwrap());
        // x⊕y⊕z in the smallest form the order admits
        assert_eq!(show(&z2, &p, &["x", "y", "z"]), ["x⊕(y⊕z)"]);
        assert_eq!(find_malcev_terms(&corpus::meet_semilattice2(), 2, 3).unwrap(), None);
        let p = find_malcev_terms(&corpus::trivial(), 2, 0).unwrap().unwrap();
        assert_eq!(p, vec![AlgTerm::Var(0)]);
    }

    #[test]
    fn witnesses_are_least_in_order() {
        // brute force over all depth-≤2 binary terms for the first witness
        let z3 = corpus::zk_minus(3);
        let tc = TermClasses::build(&z3, 2, (0..3).flat_map(|x| (0..3).map(move |y| vec![x, y])).collect(), 2);
        let mut all: Vec<AlgTerm> = tc.classes.iter().map(|c| c.term.clone()).collect();
        all.sort_by(|a, b| a.canonical_cmp(b));
        let first = all.into_iter().find(|t| check_subtractive(&z3, 0, std::slice::from_ref(t)).unwrap());
        let found = find_subtractive_witnesses(&z3, 0, 2, 2).unwrap().unwrap();
        assert_eq!(Some(found[0].clone()), first);
    }

    #[test]
    fn free_extension() {
        assert_eq!(free_extension_malcev(&corpus::z2_xor(), 2, 2).unwrap(), Bounded::Holds);
        assert_eq!(free_extension_malcev(&corpus::meet_semilattice2(), 2, 2).unwrap(), Bounded::Unknown);
    }
}
