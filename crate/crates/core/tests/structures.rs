use contmodel::downup::Grid;
use contmodel::harness::{gen, rng_for, FormulaClass, InstanceSpec};
use contmodel::oracle::leibniz_by_enumeration;
use contmodel::structures::{
    check_morphism, find_isomorphism, parse_structure, write_structure, MorphismKind,
};
use contmodel::{
    eval_formula, leibniz_partition, reduce_structure, Assignment, Structure, Value, Vocabulary,
};
use proptest::prelude::*;
use rand::Rng;

fn vocab() -> Vocabulary {
    InstanceSpec::default().vocabulary()
}

fn grid() -> Grid {
    Grid::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn evaluation_is_invariant_under_reduction(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let v = vocab();
        let size = rng.gen_range(1..=4);
        // a coarse grid makes collapses common
        let m = gen::gen_structure(&mut rng, &v, size, Grid::new(1).unwrap());
        let phi = gen::gen_cont_formula(
            &mut rng, &v, grid(), FormulaClass::Unrestricted, gen::Shape { depth: 4, quantifiers: 2 }, &["x", "y"],
        );
        let (r, q) = reduce_structure(&m).unwrap();
        let a = gen::gen_tuple(&mut rng, size, 2);
        let before = eval_formula(&m, &phi, &Assignment::new().with("x", a[0]).with("y", a[1])).unwrap();
        let after = eval_formula(&r, &phi, &Assignment::new().with("x", q.class_of(a[0])).with("y", q.class_of(a[1])))
            .unwrap();
        prop_assert_eq!(before, after, "{}", phi);
    }

    #[test]
    fn structure_files_round_trip(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let size = rng.gen_range(1..=3);
        let m = gen::gen_structure(&mut rng, &vocab(), size, grid());
        prop_assert_eq!(parse_structure::<Value>(&write_structure(&m)).unwrap(), m);
        let k = gen::gen_fo_structure(&mut rng, &vocab(), size);
        prop_assert_eq!(parse_structure::<bool>(&write_structure(&k)).unwrap(), k);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduction_commutes_with_parts(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let v = vocab();
        let size = rng.gen_range(1..=4);
        let m = gen::gen_structure(&mut rng, &v, size, Grid::new(1).unwrap());
        // keep F and c, drop a random nonempty set of predicates
        let mut sub = Vocabulary::new();
        for s in v.predicates() {
            if rng.gen_bool(0.5) {
                sub.add_predicate(&s.name, s.arity).unwrap();
            }
        }
        if sub.predicates().is_empty() {
            sub.add_predicate("P", 1).unwrap();
        }
        sub.add_function("F", 1).unwrap();
        sub.add_constant("c").unwrap();
        let part_then_reduce = reduce_structure(&m.vocabulary_part(&sub).unwrap()).unwrap().0;
        let reduce_then_part = reduce_structure(&m).unwrap().0.vocabulary_part(&sub).unwrap();
        prop_assert!(find_isomorphism(&part_then_reduce, &reduce_then_part).is_some());
    }

    #[test]
    fn fixpoint_matches_enumeration(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let mut v = Vocabulary::new();
        v.add_predicate("P", rng.gen_range(0..=2)).unwrap();
        for name in ["F", "G"].iter().take(rng.gen_range(0..=2)) {
            v.add_function(name, 1).unwrap();
        }
        let size = rng.gen_range(1..=4);
        let m = gen::gen_structure(&mut rng, &v, size, Grid::new(1).unwrap());
        prop_assert_eq!(leibniz_partition(&m), leibniz_by_enumeration(&m, 3));
    }

    #[test]
    fn reduction_map_is_an_onto_embedding(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let size = rng.gen_range(1..=4);
        let m = gen::gen_structure(&mut rng, &vocab(), size, Grid::new(1).unwrap());
        let (r, q) = reduce_structure(&m).unwrap();
        prop_assert_eq!(check_morphism(MorphismKind::Homomorphism, q.map(), &m, &r), Ok(()));
        prop_assert_eq!(check_morphism(MorphismKind::Embedding, q.map(), &m, &r), Ok(()));
        prop_assert!(leibniz_partition(&r).is_discrete());
    }
}

#[test]
fn isolated_duplicates_collapse() {
    // elements 1 and 2 agree everywhere, 0 differs
    let v = Vocabulary::new().with_predicate("P", 1).unwrap();
    let p = [Value::ZERO, Value::HALF, Value::HALF];
    let m = Structure::from_fn(v, 3, |_, t| p[t[0]], |_, _| 0, |_| 0).unwrap();
    let (r, q) = reduce_structure(&m).unwrap();
    assert_eq!(r.size(), 2);
    assert_eq!(q.map(), &[0, 1, 1]);
}
