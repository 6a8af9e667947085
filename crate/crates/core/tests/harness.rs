use contmodel::harness::{
    check_limsup_bound, evaluate_instance, gen_instance, gen_instance_from_seed, run_suite,
    search_counterexample, FormulaClass, InstanceSpec, SuiteOptions, Verdict, EXAMPLE_SENTENCE,
};
use contmodel::logic::parse_cont_inferring;
use contmodel::products::Filter;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn conditional_sentences_are_preserved(seed in any::<u64>()) {
        let spec = InstanceSpec { seed, ..Default::default() };
        let inst = gen_instance(&spec, 0).unwrap();
        let e = evaluate_instance(&inst.family, &inst.filter, &inst.formula, spec.max_product_size).unwrap();
        for eps in e.epsilons(&spec.grid().values()) {
            prop_assert_ne!(e.verdict(eps), Verdict::Violated, "{} at {}", inst.formula, eps);
        }
        let b = check_limsup_bound(&inst.family, &inst.filter, &inst.formula, spec.max_product_size).unwrap();
        prop_assert!(b.holds);
        if inst.filter.is_ultrafilter() {
            prop_assert_eq!(b.product_value, b.bound);
        }
    }

    #[test]
    fn trials_replay_from_their_seed(seed in any::<u64>(), trial in 0usize..1000) {
        let spec = InstanceSpec { seed, class: FormulaClass::Unrestricted, ..Default::default() };
        let a = gen_instance(&spec, trial).unwrap();
        let b = gen_instance_from_seed(&spec, a.seed).unwrap();
        prop_assert_eq!(a.family, b.family);
        prop_assert_eq!(a.filter, b.filter);
        prop_assert_eq!(a.formula, b.formula);
    }
}

#[test]
fn single_factor_bound_is_tight() {
    let spec = InstanceSpec {
        index_set: (1, 1),
        ..Default::default()
    };
    for t in 0..100 {
        let inst = gen_instance(&spec, t).unwrap();
        let b = check_limsup_bound(&inst.family, &Filter::full(1).unwrap(), &inst.formula, 4096)
            .unwrap();
        assert_eq!(b.product_value, b.bound, "{}", inst.formula);
    }
}

#[test]
fn search_is_deterministic_and_finds_the_example() {
    let (phi, _) = parse_cont_inferring(EXAMPLE_SENTENCE).unwrap();
    let budget = InstanceSpec {
        universe: (1, 1),
        index_set: (2, 2),
        ..Default::default()
    };
    let w = search_counterexample(&phi, &budget)
        .unwrap()
        .expect("witness within 1000 trials");
    assert_eq!(w.kernel, vec![0, 1]);
    assert!(w.factor_values.iter().all(|v| *v <= w.epsilon) && w.product_value > w.epsilon);
    assert_eq!(search_counterexample(&phi, &budget).unwrap(), Some(w));
}

#[test]
fn suite_reports_are_byte_identical() {
    for name in [
        "conditional-preservation",
        "product-commutation",
        "morphism-monotonicity",
    ] {
        let opts = SuiteOptions {
            seed: 5,
            trials: Some(50),
            ..Default::default()
        };
        let a = serde_json::to_string(&run_suite(name, &opts).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite(name, &opts).unwrap()).unwrap();
        assert_eq!(a, b, "{name}");
    }
}
