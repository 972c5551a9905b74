//! Binary relations on a finite carrier, as bit rows.

use std::cmp::Ordering;
use std::fmt;

/// `rows[a]` has bit `b` set iff `a ρ b`. Carriers up to 64 elements.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BinRel {
    size: usize,
    rows: Vec<u64>,
}

impl BinRel {
    pub fn empty(size: usize) -> BinRel {
        assert!(size <= 64, "carrier too large for a bit relation");
        BinRel { size, rows: vec![0; size] }
    }

    pub fn equality(size: usize) -> BinRel {
        let mut r = BinRel::empty(size);
        for a in 0..size {
            r.insert(a, a);
        }
        r
    }

    pub fn total(size: usize) -> BinRel {
        let mut r = BinRel::empty(size);
        for a in 0..size {
            r.rows[a] = full(size);
        }
        r
    }

    pub fn from_pairs(size: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> BinRel {
        let mut r = BinRel::empty(size);
        for (a, b) in pairs {
            r.insert(a, b);
        }
        r
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.rows[a] >> b & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, a: usize, b: usize) -> bool {
        let had = self.contains(a, b);
        self.rows[a] |= 1 << b;
        !had
    }

    pub fn row(&self, a: usize) -> u64 {
        self.rows[a]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.size).flat_map(move |a| (0..self.size).filter(move |&b| self.contains(a, b)).map(move |b| (a, b)))
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn union(&self, other: &BinRel) -> BinRel {
        BinRel { size: self.size, rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a | b).collect() }
    }

    pub fn is_subset(&self, other: &BinRel) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    pub fn converse(&self) -> BinRel {
        BinRel::from_pairs(self.size, self.pairs().map(|(a, b)| (b, a)))
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.size).all(|a| self.contains(a, a))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(a, b)| self.contains(b, a))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.pairs().all(|(a, b)| a == b || !self.contains(b, a))
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.size).all(|a| {
            let mut reach = 0;
            for b in bits(self.rows[a]) {
                reach |= self.rows[b];
            }
            reach & !self.rows[a] == 0
        })
    }

    pub fn is_preorder(&self) -> bool {
        self.is_reflexive() && self.is_transitive()
    }

    pub fn is_partial_order(&self) -> bool {
        self.is_preorder() && self.is_antisymmetric()
    }

    /// Reflexive-transitive closure (Warshall).
    pub fn preorder_closure(&self) -> BinRel {
        let mut r = self.clone();
        for a in 0..r.size {
            r.rows[a] |= 1 << a;
        }
        for k in 0..r.size {
            for a in 0..r.size {
                if r.contains(a, k) {
                    r.rows[a] |= r.rows[k];
                }
            }
        }
        r
    }

    /// Row-major bit string, used for the lexicographic matrix order.
    pub fn flat(&self) -> Vec<bool> {
        (0..self.size).flat_map(|a| (0..self.size).map(move |b| self.contains(a, b))).collect()
    }
}

impl PartialOrd for BinRel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on the row-major matrix, `false < true`.
impl Ord for BinRel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size.cmp(&other.size).then_with(|| self.flat().cmp(&other.flat()))
    }
}

impl fmt::Display for BinRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strict: Vec<String> = self.pairs().filter(|(a, b)| a != b).map(|(a, b)| format!("{a}≤{b}")).collect();
        if strict.is_empty() {
            f.write_str("=")
        } else {
            write!(f, "{}", strict.join(" "))
        }
    }
}

pub(crate) fn full(size: usize) -> u64 {
    if size == 64 {
        u64::MAX
    } else {
        (1u64 << size) - 1
    }
}

pub(crate) fn bits(mut x: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if x == 0 {
            None
        } else {
            let b = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(b)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predicates() {
        let eq = BinRel::equality(3);
        assert!(eq.is_partial_order() && eq.is_symmetric());
        let lt = BinRel::from_pairs(2, [(0, 0), (1, 1), (0, 1)]);
        assert!(lt.is_partial_order() && !lt.is_symmetric());
        assert!(BinRel::total(2).is_preorder() && !BinRel::total(2).is_antisymmetric());
        let chain = BinRel::from_pairs(3, [(0, 1), (1, 2)]).preorder_closure();
        assert!(chain.contains(0, 2) && chain.is_partial_order());
    }

    #[test]
    fn lexicographic_order() {
        let eq = BinRel::equality(2);
        let lt = BinRel::from_pairs(2, [(0, 0), (1, 1), (0, 1)]);
        let gt = BinRel::from_pairs(2, [(0, 0), (1, 1), (1, 0)]);
        let mut v = vec![lt.clone(), eq.clone(), gt.clone()];
        v.sort();
        assert_eq!(v, vec![eq, gt, lt]);
    }
}
