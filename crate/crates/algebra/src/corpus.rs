//! Named example algebras and exhaustive table families.

use crate::algebra::{Constant, FiniteAlgebra, Operation};

/// Z₂ with ⊕ and 0.
pub fn z2_xor() -> FiniteAlgebra {
    FiniteAlgebra::binary(2, "⊕", vec![0, 1, 1, 0]).expect("valid")
}

/// The two-element meet semilattice {0 < 1} with constant 0.
pub fn meet_semilattice2() -> FiniteAlgebra {
    FiniteAlgebra::binary(2, "∧", vec![0, 0, 0, 1]).expect("valid")
}

/// `x − y` on Z_k with constant 0.
pub fn zk_minus(k: usize) -> FiniteAlgebra {
    let table = (0..k * k).map(|i| (i / k + k - i % k) % k).collect();
    FiniteAlgebra::binary(k, "−", table).expect("valid")
}

/// The one-element algebra with one binary operation.
pub fn trivial() -> FiniteAlgebra {
    FiniteAlgebra::binary(1, "·", vec![0]).expect("valid")
}

/// An algebra whose only operations are constants.
pub fn constant_ops(k: usize) -> FiniteAlgebra {
    FiniteAlgebra::new(
        k,
        vec![Operation { name: "c".into(), arity: 2, table: vec![0; k * k] }],
        vec![Constant { name: "0".into(), value: 0 }],
    )
    .expect("valid")
}

/// Number of one-binary-operation algebras on `k` elements.
pub fn binary_table_count(k: usize) -> usize {
    k.pow((k * k) as u32)
}

/// The `index`-th binary table on `k` elements (base-k digits, first entry
/// least significant), with constant 0.
pub fn binary_table(k: usize, index: usize) -> FiniteAlgebra {
    let mut rest = index;
    let table = (0..k * k)
        .map(|_| {
            let d = rest % k;
            rest /= k;
            d
        })
        .collect();
    FiniteAlgebra::binary(k, "·", table).expect("valid")
}

/// All one-binary-operation algebras on `k` elements with constant 0.
pub fn all_binary_tables(k: usize) -> impl Iterator<Item = FiniteAlgebra> {
    (0..binary_table_count(k)).map(move |i| binary_table(k, i))
}

/// Curated algebras used alongside the exhaustive families.
pub fn curated() -> Vec<(&'static str, FiniteAlgebra)> {
    vec![
        ("z2-xor", z2_xor()),
        ("meet-2", meet_semilattice2()),
        ("z3-minus", zk_minus(3)),
        ("z4-minus", zk_minus(4)),
        ("z5-minus", zk_minus(5)),
        ("trivial", trivial()),
        ("const-3", constant_ops(3)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_family() {
        assert_eq!(binary_table_count(3), 19683);
        assert_eq!(all_binary_tables(2).count(), 16);
        let mut seen = std::collections::HashSet::new();
        for a in all_binary_tables(2) {
            assert!(seen.insert(a.operations[0].table.clone()));
        }
    }

    #[test]
    fn minus_table() {
        let z4 = zk_minus(4);
        assert_eq!(z4.apply(0, &[1, 3]), 2);
        assert_eq!(z4.apply(0, &[0, 1]), 3);
    }
}
