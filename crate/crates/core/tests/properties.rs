use std::collections::BTreeMap;

use ordlam_core::gen::{GenConfig, TermGen};
use ordlam_core::graph::Stepper;
use ordlam_core::labelled::{lab_steps, superpose, validate, LTerm, LNode, LabelScheme};
use ordlam_core::pi::{pi_redex_sites, PiOracle};
use ordlam_core::reduction::{normalize, one_steps, NormalizeOutcome};
use ordlam_core::reduction::Rule;
use ordlam_core::trace::{factorize, validate as validate_trace, TraceError};
use ordlam_core::{fill_context, parse, print, Budget, RuleSet, Term};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn open_cfg() -> GenConfig {
    GenConfig { atom_percent: 25, theta_mm_percent: 10, free_names: vec!["x".into(), "y".into(), "x1".into()] }
}

fn open_term(max: usize) -> impl Strategy<Value = Term> {
    any::<u64>().prop_map(move |s| TermGen::with_config(s, open_cfg()).term(max))
}

fn closed_term(max: usize) -> impl Strategy<Value = Term> {
    any::<u64>().prop_map(move |s| TermGen::new(s).term(max))
}

fn counts(t: &Term) -> BTreeMap<String, usize> {
    t.free_name_counts().into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Labels each admitted subterm with probability 1/2.
fn random_labelling(t: &Term, rng: &mut ChaCha8Rng, scheme: &LabelScheme) -> LTerm {
    fn go(l: LTerm, rng: &mut ChaCha8Rng, scheme: &LabelScheme) -> LTerm {
        let erased = l.erase();
        let node = match l.node {
            LNode::Lam(h, b) => LNode::Lam(h, Box::new(go(*b, rng, scheme))),
            LNode::App(f, a) => LNode::App(Box::new(go(*f, rng, scheme)), Box::new(go(*a, rng, scheme))),
            other => other,
        };
        let label = (scheme.admits_shape(&erased) && rng.gen_bool(0.5)).then(|| rng.gen_range(1..=4));
        LTerm { label, node }
    }
    go(LTerm::from_term(t), rng, scheme)
}

/// Terms that contain labellable leaves: Ω atoms and λx.ΘxΩ.
fn labellable(seed: u64) -> Term {
    let mut g = TermGen::new(seed);
    let t = g.term(8);
    let leaf = if seed % 2 == 0 { ordlam_core::catalog::omega() } else { ordlam_core::labelled::abs_theta_omega() };
    Term::app(Term::lam("v", Term::app(Term::var(0), t)), leaf)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_parse_round_trip(t in open_term(16)) {
        let back = parse(&print(&t)).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn substitute_free_name_counts(t in open_term(12), s in open_term(6)) {
        let r = t.substitute("x", &s);
        let k = counts(&t).get("x").copied().unwrap_or(0);
        let mut want = counts(&t);
        want.remove("x");
        for (n, c) in counts(&s) {
            if k > 0 {
                *want.entry(n).or_default() += k * c;
            }
        }
        prop_assert_eq!(counts(&r), want);
    }

    #[test]
    fn fill_context_agrees_with_substitute_on_closed(t in open_term(12), s in closed_term(6)) {
        let c = t.substitute("x", &Term::hole(1));
        prop_assert_eq!(fill_context(&c, 1, &s), t.substitute("x", &s));
    }

    #[test]
    fn beta_eta_peaks_have_equal_normal_forms(t in closed_term(12)) {
        let budget = Budget::new(300, 300, 200);
        let nfs: Vec<Term> = one_steps(&t, RuleSet::BETA_ETA)
            .into_iter()
            .filter_map(|s| match normalize(&s.result, budget) {
                NormalizeOutcome::NormalForm { term, .. } => Some(term),
                _ => None,
            })
            .collect();
        for w in nfs.windows(2) {
            prop_assert_eq!(&w[0], &w[1]);
        }
    }

    #[test]
    fn normal_forms_have_no_pi_redex(t in closed_term(14)) {
        if let NormalizeOutcome::NormalForm { term, .. } = normalize(&t, Budget::new(300, 300, 200)) {
            prop_assert!(pi_redex_sites(&term).is_empty());
        }
    }

    #[test]
    fn superpose_laws(seed in any::<u64>()) {
        let scheme = LabelScheme::standard();
        let t = labellable(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (
            random_labelling(&t, &mut rng, &scheme),
            random_labelling(&t, &mut rng, &scheme),
            random_labelling(&t, &mut rng, &scheme),
        );
        let ab = superpose(&a, &b).unwrap();
        prop_assert_eq!(&ab, &superpose(&b, &a).unwrap());
        prop_assert_eq!(superpose(&ab, &c).unwrap(), superpose(&a, &superpose(&b, &c).unwrap()).unwrap());
        prop_assert_eq!(ab.erase(), t);
    }

    #[test]
    fn labelled_steps_simulate(seed in any::<u64>()) {
        let scheme = LabelScheme::standard();
        let o = PiOracle::new(1, Budget::new(200, 200, 150));
        let t = labellable(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let l = random_labelling(&t, &mut rng, &scheme);
        validate(&l, &scheme).unwrap();
        let mut expect: Vec<Term> = o.stepper(1).successors(&t).steps.into_iter().map(|s| s.result).collect();
        let mut got: Vec<Term> = lab_steps(&l, &o, &scheme).into_iter().map(|s| s.result.erase()).collect();
        for s in lab_steps(&l, &o, &scheme) {
            validate(&s.result, &scheme).unwrap();
        }
        expect.sort_by_key(|t| t.canonical_key());
        got.sort_by_key(|t| t.canonical_key());
        prop_assert_eq!(got, expect);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factorization_keeps_endpoints(seed in any::<u64>()) {
        let o = PiOracle::new(2, Budget::new(200, 200, 150));
        let mut g = TermGen::new(seed);
        let start = g.term(12);
        let tr = g.trace(start, 20, &o, 150);
        // an η-step enabled by a π-step has no βη-first counterpart
        let f = match factorize(&tr) {
            Err(TraceError::NonFactorizable { .. }) if tr.count(Rule::Eta) > 0 => return Ok(()),
            r => r.unwrap(),
        };
        prop_assert!(f.is_factorized());
        prop_assert_eq!(f.start.clone(), tr.start.clone());
        prop_assert_eq!(f.end(), tr.end());
        prop_assert!(validate_trace(&f, &o).is_ok());
    }
}
