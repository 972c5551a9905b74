use ordlam_algebra::corpus;
use ordlam_algebra::order::{
    compatible_closure, enumerate_compatible_partial_orders, is_0_symmetric, is_0_unorderable, is_compatible,
    DEFAULT_MAX_SIZE,
};
use ordlam_algebra::search::{find_malcev_terms, find_subtractive_witnesses};
use ordlam_algebra::subtractive::rank_and_diagonals;
use ordlam_algebra::topalg::{check_top_algebra, Mode};
use ordlam_algebra::topology::{
    enumerate_topologies, gamma_iteration, set_of, validate_space, FiniteSpace, Level,
};
use ordlam_algebra::{BinRel, FiniteAlgebra};
use proptest::prelude::*;

fn table(k: usize) -> impl Strategy<Value = FiniteAlgebra> {
    (0..corpus::binary_table_count(k)).prop_map(move |i| corpus::binary_table(k, i))
}

fn relation(k: usize) -> impl Strategy<Value = BinRel> {
    proptest::collection::vec((0..k, 0..k), 0..6).prop_map(move |ps| BinRel::from_pairs(k, ps))
}

fn space() -> impl Strategy<Value = FiniteSpace> {
    (1usize..=5).prop_flat_map(|k| {
        proptest::collection::vec(0u64..1 << k, 0..5).prop_map(move |fam| FiniteSpace::generated(k, fam))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closure_is_a_closure_operator(a in table(3), r in relation(3), extra in relation(3)) {
        let c = compatible_closure(&a, &r);
        prop_assert!(r.is_subset(&c));
        prop_assert!(c.is_preorder() && is_compatible(&a, &c));
        prop_assert_eq!(&compatible_closure(&a, &c), &c);
        let bigger = compatible_closure(&a, &r.union(&extra));
        prop_assert!(c.is_subset(&bigger));
    }

    #[test]
    fn two_subtractive_implies_zero_conditions(a in table(3)) {
        if find_subtractive_witnesses(&a, 0, 2, 3).unwrap().is_some() {
            prop_assert!(is_0_unorderable(&a, 0, DEFAULT_MAX_SIZE).unwrap());
            prop_assert!(is_0_symmetric(&a, 0, DEFAULT_MAX_SIZE).unwrap());
        }
    }

    #[test]
    fn malcev_implies_unorderable(a in table(3)) {
        if find_malcev_terms(&a, 3, 3).unwrap().is_some() {
            let orders = enumerate_compatible_partial_orders(&a, DEFAULT_MAX_SIZE).unwrap();
            prop_assert_eq!(orders, vec![BinRel::equality(3)]);
        }
    }

    #[test]
    fn rank_lies_on_its_diagonal(a in table(3)) {
        if let Some(w) = find_subtractive_witnesses(&a, 0, 3, 2).unwrap() {
            let r = rank_and_diagonals(&a, 0, &w).unwrap();
            prop_assert_eq!(&r.diag[0], &vec![0, 1, 2]);
            for x in 1..3 {
                let k = r.kappa[x].unwrap();
                prop_assert!((1..=2).contains(&k));
                prop_assert!(r.diag[k - 1].contains(&x));
            }
        }
    }

    #[test]
    fn generated_spaces_are_valid(s in space()) {
        prop_assert!(validate_space(&s).is_ok());
        let (q, class) = s.t0_quotient();
        prop_assert!(validate_space(&q).is_ok() && q.is_t0());
        prop_assert_eq!(class.len(), s.size());
    }

    #[test]
    fn specialization_is_closure_of_points(s in space()) {
        let spec = s.specialization();
        prop_assert!(spec.is_preorder());
        prop_assert_eq!(spec.is_partial_order(), s.is_t0());
        for b in 0..s.size() {
            let below = set_of((0..s.size()).filter(|&a| spec.contains(a, b)));
            prop_assert_eq!(s.closure(1 << b), below);
        }
        prop_assert_eq!(spec == BinRel::equality(s.size()), s.satisfies(Level::T1));
    }

    #[test]
    fn gamma_is_monotone_and_short(s in space()) {
        for a in 0..s.size() {
            let g = gamma_iteration(&s, a);
            prop_assert!(g.windows(2).all(|w| w[0] & !w[1] == 0));
            prop_assert!(g.len() - 1 <= s.size());
            prop_assert_eq!(g[1] == s.full() & !(1 << a), s.separated_in(a, Level::T2));
        }
    }

    #[test]
    fn separation_levels_are_nested(s in space()) {
        for a in 0..s.size() {
            for b in 0..s.size() {
                if a != b {
                    let l = [Level::T0, Level::T1, Level::T2, Level::T2Half].map(|l| s.separated(a, b, l));
                    prop_assert!(l.windows(2).all(|w| w[0] || !w[1]));
                }
            }
        }
    }

    #[test]
    fn continuity_gives_compatible_specialization(a in table(3), si in 0usize..29) {
        let s = &enumerate_topologies(3)[si];
        let c = check_top_algebra(&a, s, Mode::Semitopological).unwrap();
        if c.holds {
            prop_assert!(is_compatible(&a, &s.specialization()));
        }
    }

    #[test]
    fn algebra_json_round_trip(a in table(3)) {
        let back = FiniteAlgebra::from_json(&a.to_json().to_string()).unwrap();
        prop_assert_eq!(back, a);
    }
}

#[test]
fn two_element_family_exhaustive() {
    for a in corpus::all_binary_tables(2) {
        if find_subtractive_witnesses(&a, 0, 2, 3).unwrap().is_some() {
            assert!(is_0_unorderable(&a, 0, DEFAULT_MAX_SIZE).unwrap());
            assert!(is_0_symmetric(&a, 0, DEFAULT_MAX_SIZE).unwrap());
        }
    }
}

#[test]
fn hausdorff_iff_one_step_on_enumerated_spaces() {
    for k in 1..=3 {
        for s in enumerate_topologies(k) {
            let one_step = (0..k).all(|a| gamma_iteration(&s, a)[1] == s.full() & !(1 << a));
            assert_eq!(one_step, s.satisfies(Level::T2));
        }
    }
}
