//! Compatible relations: closure, enumeration of compatible preorders and
//! partial orders, unorderability predicates, connected components.

use std::collections::{BTreeSet, HashSet};

use crate::algebra::{AlgError, FiniteAlgebra};
use crate::relation::{bits, BinRel};

/// Default carrier guard for enumerations.
pub const DEFAULT_MAX_SIZE: usize = 6;
/// Default cap on the number of enumerated compatible preorders.
pub const DEFAULT_PREORDER_BUDGET: usize = 200_000;

pub(crate) fn for_each_tuple(k: usize, n: usize, mut f: impl FnMut(&[usize])) {
    let mut t = vec![0; n];
    loop {
        f(&t);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < k {
                break;
            }
            t[i] = 0;
        }
    }
}

/// `r` is preserved by every operation.
pub fn is_compatible(a: &FiniteAlgebra, r: &BinRel) -> bool {
    let pairs: Vec<(usize, usize)> = r.pairs().collect();
    if pairs.is_empty() {
        return a.operations.iter().all(|op| op.arity > 0);
    }
    a.operations.iter().enumerate().all(|(oi, op)| {
        let mut ok = true;
        let (mut xs, mut ys) = (vec![0; op.arity], vec![0; op.arity]);
        for_each_tuple(pairs.len(), op.arity, |idx| {
            if ok {
                for (j, &i) in idx.iter().enumerate() {
                    (xs[j], ys[j]) = pairs[i];
                }
                ok = r.contains(a.apply(oi, &xs), a.apply(oi, &ys));
            }
        });
        ok
    })
}

/// The least reflexive, transitive, compatible relation containing `r`.
pub fn compatible_closure(a: &FiniteAlgebra, r: &BinRel) -> BinRel {
    let k = a.size;
    let mut cur = r.preorder_closure();
    loop {
        let mut next = cur.clone();
        for (oi, op) in a.operations.iter().enumerate() {
            let n = op.arity;
            if n == 0 {
                continue;
            }
            // for a preorder, compatibility reduces to monotonicity in each
            // argument with the others fixed
            for j in 0..n {
                for_each_tuple(k, n - 1, |rest| {
                    let mut xs = Vec::with_capacity(n);
                    xs.extend_from_slice(&rest[..j]);
                    xs.push(0);
                    xs.extend_from_slice(&rest[j..]);
                    for (p, q) in cur.pairs() {
                        if p == q {
                            continue;
                        }
                        xs[j] = p;
                        let u = a.apply(oi, &xs);
                        xs[j] = q;
                        let v = a.apply(oi, &xs);
                        next.insert(u, v);
                    }
                });
            }
        }
        let next = next.preorder_closure();
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

#[derive(Clone, Debug)]
pub struct PreorderEnumeration {
    /// Sorted by the lexicographic matrix order.
    pub relations: Vec<BinRel>,
    /// `false` when the budget cut the enumeration short.
    pub complete: bool,
}

/// Every compatible preorder is the join of the closures of its pairs, so
/// closing the principal closures under joins enumerates all of them.
pub fn enumerate_compatible_preorders(a: &FiniteAlgebra, budget: usize) -> PreorderEnumeration {
    let k = a.size;
    let eq = compatible_closure(a, &BinRel::equality(k));
    let mut principal: Vec<BinRel> = Vec::new();
    for x in 0..k {
        for y in 0..k {
            if x != y {
                let p = compatible_closure(a, &BinRel::from_pairs(k, [(x, y)]));
                if !principal.contains(&p) {
                    principal.push(p);
                }
            }
        }
    }
    let mut seen: HashSet<BinRel> = HashSet::new();
    let mut queue = vec![eq.clone()];
    seen.insert(eq);
    let mut complete = true;
    while let Some(r) = queue.pop() {
        for p in &principal {
            if p.is_subset(&r) {
                continue;
            }
            let j = compatible_closure(a, &r.union(p));
            if !seen.contains(&j) {
                if seen.len() >= budget {
                    complete = false;
                    break;
                }
                seen.insert(j.clone());
                queue.push(j);
            }
        }
    }
    let mut relations: Vec<BinRel> = seen.into_iter().collect();
    relations.sort();
    PreorderEnumeration { relations, complete }
}

fn guard(a: &FiniteAlgebra, max_size: usize) -> Result<(), AlgError> {
    if a.size > max_size {
        Err(AlgError::TooLarge { size: a.size, limit: max_size })
    } else {
        Ok(())
    }
}

/// All compatible partial orders, in lexicographic matrix order.
pub fn enumerate_compatible_partial_orders(a: &FiniteAlgebra, max_size: usize) -> Result<Vec<BinRel>, AlgError> {
    guard(a, max_size)?;
    let e = enumerate_compatible_preorders(a, DEFAULT_PREORDER_BUDGET);
    if !e.complete {
        return Err(AlgError::Invalid("preorder budget exhausted".into()));
    }
    Ok(e.relations.into_iter().filter(BinRel::is_antisymmetric).collect())
}

/// Only equality is a compatible partial order.
pub fn is_unorderable(a: &FiniteAlgebra, max_size: usize) -> Result<bool, AlgError> {
    Ok(enumerate_compatible_partial_orders(a, max_size)?.iter().all(|r| *r == BinRel::equality(a.size)))
}

/// No compatible partial order compares `zero` with another element.
pub fn is_0_unorderable(a: &FiniteAlgebra, zero: usize, max_size: usize) -> Result<bool, AlgError> {
    a.check_element(zero)?;
    let orders = enumerate_compatible_partial_orders(a, max_size)?;
    Ok(orders.iter().all(|r| (0..a.size).all(|x| x == zero || !r.contains(zero, x) && !r.contains(x, zero))))
}

/// Every compatible preorder relates `zero` symmetrically.
pub fn is_0_symmetric(a: &FiniteAlgebra, zero: usize, max_size: usize) -> Result<bool, AlgError> {
    a.check_element(zero)?;
    guard(a, max_size)?;
    let e = enumerate_compatible_preorders(a, DEFAULT_PREORDER_BUDGET);
    if !e.complete {
        return Err(AlgError::Invalid("preorder budget exhausted".into()));
    }
    Ok(e.relations.iter().all(|r| (0..a.size).all(|x| r.contains(zero, x) == r.contains(x, zero))))
}

/// Brute force over all k² relations; only for checking the enumeration.
pub fn brute_force_compatible_preorders(a: &FiniteAlgebra) -> Vec<BinRel> {
    let k = a.size;
    assert!(k <= 4, "brute force limited to 4 elements");
    let off: Vec<(usize, usize)> = (0..k).flat_map(|x| (0..k).map(move |y| (x, y))).filter(|(x, y)| x != y).collect();
    let mut out: BTreeSet<BinRel> = BTreeSet::new();
    for mask in 0u64..1 << off.len() {
        let mut r = BinRel::equality(k);
        for b in bits(mask) {
            r.insert(off[b].0, off[b].1);
        }
        if r.is_transitive() && is_compatible(a, &r) {
            out.insert(r);
        }
    }
    out.into_iter().collect()
}

/// Classes of the least equivalence containing a partial order, each sorted,
/// ordered by least element.
pub fn connected_components(order: &BinRel) -> Result<Vec<Vec<usize>>, AlgError> {
    if !order.is_partial_order() {
        return Err(AlgError::Invalid("not a partial order".into()));
    }
    let k = order.size();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let n = p[c];
            p[c] = r;
            c = n;
        }
        r
    }
    for (x, y) in order.pairs() {
        let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
        if rx != ry {
            parent[rx.max(ry)] = rx.min(ry);
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; k];
    for x in 0..k {
        let r = find(&mut parent, x);
        if index[r] == usize::MAX {
            index[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[index[r]].push(x);
    }
    Ok(classes)
}

/// Hasse diagram (covering pairs, drawn upwards) in DOT.
pub fn hasse_dot(order: &BinRel, labels: Option<&[String]>) -> String {
    let k = order.size();
    let name = |x: usize| labels.and_then(|l| l.get(x).cloned()).unwrap_or_else(|| x.to_string());
    let mut s = String::from("digraph order {\n  rankdir=BT;\n");
    for x in 0..k {
        s.push_str(&format!("  n{x} [label=\"{}\"];\n", name(x)));
    }
    for (x, y) in order.pairs() {
        if x == y {
            continue;
        }
        let covered = (0..k).any(|z| z != x && z != y && order.contains(x, z) && order.contains(z, y));
        if !covered {
            s.push_str(&format!("  n{x} -> n{y};\n"));
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn closure_examples() {
        let z2 = corpus::z2_xor();
        assert_eq!(compatible_closure(&z2, &BinRel::empty(2)), BinRel::equality(2));
        assert_eq!(compatible_closure(&z2, &BinRel::from_pairs(2, [(0, 1)])), BinRel::total(2));
        let meet = corpus::meet_semilattice2();
        let lt = BinRel::from_pairs(2, [(0, 0), (1, 1), (0, 1)]);
        assert_eq!(compatible_closure(&meet, &BinRel::from_pairs(2, [(0, 1)])), lt);
    }

    #[test]
    fn partial_order_examples() {
        let z2 = corpus::z2_xor();
        assert_eq!(enumerate_compatible_partial_orders(&z2, 6).unwrap(), vec![BinRel::equality(2)]);
        // ∧ is monotone for 0 ≤ 1 and for 1 ≤ 0 alike
        let meet = corpus::meet_semilattice2();
        let orders = enumerate_compatible_partial_orders(&meet, 6).unwrap();
        assert_eq!(
            orders,
            vec![
                BinRel::equality(2),
                BinRel::from_pairs(2, [(0, 0), (1, 1), (1, 0)]),
                BinRel::from_pairs(2, [(0, 0), (1, 1), (0, 1)]),
            ]
        );
        assert_eq!(enumerate_compatible_partial_orders(&corpus::trivial(), 6).unwrap(), vec![BinRel::equality(1)]);
        assert!(enumerate_compatible_partial_orders(&corpus::zk_minus(7), 6).is_err());
    }

    #[test]
    fn zero_predicates() {
        let z2 = corpus::z2_xor();
        assert!(is_0_unorderable(&z2, 0, 6).unwrap());
        assert!(is_0_symmetric(&z2, 0, 6).unwrap());
        assert!(!is_0_unorderable(&corpus::meet_semilattice2(), 0, 6).unwrap());
        assert!(is_0_unorderable(&corpus::trivial(), 0, 6).unwrap());
        assert!(is_0_symmetric(&corpus::trivial(), 0, 6).unwrap());
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for a in corpus::all_binary_tables(2) {
            assert_eq!(enumerate_compatible_preorders(&a, 1000).relations, brute_force_compatible_preorders(&a));
        }
        for i in (0..corpus::binary_table_count(3)).step_by(97) {
            let a = corpus::binary_table(3, i);
            assert_eq!(enumerate_compatible_preorders(&a, 1000).relations, brute_force_compatible_preorders(&a), "table {i}");
        }
    }

    #[test]
    fn components() {
        assert_eq!(connected_components(&BinRel::equality(3)).unwrap(), vec![vec![0], vec![1], vec![2]]);
        let lt = BinRel::from_pairs(2, [(0, 0), (1, 1), (0, 1)]);
        assert_eq!(connected_components(&lt).unwrap(), vec![vec![0, 1]]);
        let diamond = BinRel::from_pairs(4, [(0, 1), (0, 2), (1, 3), (2, 3)]).preorder_closure();
        assert_eq!(connected_components(&diamond).unwrap(), vec![vec![0, 1, 2, 3]]);
        assert!(connected_components(&BinRel::total(2)).is_err());
        let dot = hasse_dot(&diamond, None);
        assert!(dot.contains("n0 -> n1") && !dot.contains("n0 -> n3"));
    }
}
