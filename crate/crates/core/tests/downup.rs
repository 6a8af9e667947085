use contmodel::downup::{
    increasing_violation, is_increasing, structure_down, structure_up, structure_up_unreduced,
    vocab_down, Grid,
};
use contmodel::harness::{gen, rng_for, FormulaClass, InstanceSpec};
use contmodel::products::{
    fo_reduced_product, reduced_product, IndexedFamily, DEFAULT_MAX_PRODUCT_SIZE,
};
use contmodel::structures::{check_morphism, find_isomorphism, MorphismKind};
use contmodel::{eval_formula, Assignment, Structure, Value, Vocabulary};
use proptest::prelude::*;
use rand::Rng;

const CAP: usize = DEFAULT_MAX_PRODUCT_SIZE;

fn vocab() -> Vocabulary {
    InstanceSpec::default().vocabulary()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn down_then_up_is_the_identity(seed in any::<u64>(), bits in 1u32..=4) {
        let mut rng = rng_for(seed);
        let grid = Grid::new(bits).unwrap();
        let size = rng.gen_range(1..=4);
        let m = gen::gen_reduced_structure(&mut rng, &vocab(), size, grid);
        let k = structure_down(&m, grid).unwrap();
        prop_assert_eq!(k.vocabulary(), &vocab_down(m.vocabulary(), grid).unwrap());
        prop_assert_eq!(increasing_violation(&k).unwrap(), None);
        let back = structure_up(&k, grid).unwrap();
        prop_assert!(find_isomorphism(&back, &m).is_some());
    }

    #[test]
    fn up_then_down_is_the_reduction(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let grid = Grid::default();
        let size = rng.gen_range(1..=4);
        let k = gen::gen_increasing_structure(&mut rng, &vocab(), size, grid);
        let unreduced = structure_up_unreduced(&k, grid).unwrap();
        let up = structure_up(&k, grid).unwrap();
        prop_assert!(up.size() <= unreduced.size());
        let again = structure_down(&up, grid).unwrap();
        prop_assert!(is_increasing(&again).unwrap());
        prop_assert!(find_isomorphism(&structure_up(&again, grid).unwrap(), &up).is_some());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn products_commute_with_up(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let grid = Grid::default();
        let n = rng.gen_range(1..=3);
        let ks: Vec<Structure<bool>> = (0..n)
            .map(|_| {
                let size = rng.gen_range(1..=3);
                gen::gen_increasing_structure(&mut rng, &vocab(), size, grid)
            })
            .collect();
        let f = gen::gen_filter(&mut rng, n);
        let ups: Vec<_> = ks.iter().map(|k| structure_up(k, grid).unwrap()).collect();
        let lhs = reduced_product(&IndexedFamily::new(ups).unwrap(), &f, CAP).unwrap().0;
        let fo = fo_reduced_product(&IndexedFamily::new(ks).unwrap(), &f, CAP).unwrap().0;
        prop_assert!(is_increasing(&fo).unwrap());
        let rhs = structure_up(&fo, grid).unwrap();
        prop_assert!(find_isomorphism(&lhs, &rhs).is_some());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn morphisms_move_values_monotonically(seed in any::<u64>(), which in 0usize..4) {
        let mut rng = rng_for(seed);
        let (v, grid) = (vocab(), Grid::default());
        let size = rng.gen_range(1..=3);
        let n = gen::gen_structure(&mut rng, &v, size, grid);
        let class = [
            FormulaClass::Existential,
            FormulaClass::QuantifierFree,
            FormulaClass::Universal,
            FormulaClass::Positive,
        ][which];
        let (m, h) = if class == FormulaClass::Positive {
            gen::gen_homomorphism(&mut rng, &n, 4, grid)
        } else {
            gen::gen_embedding(&mut rng, &n, 4)
        };
        let kind = if class == FormulaClass::Positive { MorphismKind::Homomorphism } else { MorphismKind::Embedding };
        prop_assert_eq!(check_morphism(kind, &h, &m, &n), Ok(()));
        let phi = gen::gen_cont_formula(&mut rng, &v, grid, class, gen::Shape { depth: 4, quantifiers: 2 }, &["x"]);
        let a = rng.gen_range(0..m.size());
        let vm = eval_formula(&m, &phi, &Assignment::new().with("x", a)).unwrap();
        let vn = eval_formula(&n, &phi, &Assignment::new().with("x", h[a])).unwrap();
        match class {
            FormulaClass::QuantifierFree => prop_assert_eq!(vm, vn),
            FormulaClass::Universal => prop_assert!(vm <= vn, "{}: {} vs {}", phi, vm, vn),
            _ => prop_assert!(vm >= vn, "{}: {} vs {}", phi, vm, vn),
        }
    }
}

#[test]
fn thresholds_at_one_half() {
    let v = Vocabulary::new().with_predicate("P", 0).unwrap();
    let m = Structure::from_fn(v, 1, |_, _| Value::HALF, |_, _| 0, |_| 0).unwrap();
    let k = structure_down(&m, Grid::new(2).unwrap()).unwrap();
    let row: Vec<bool> = ["P_le_0", "P_le_1_4", "P_le_1_2", "P_le_3_4"]
        .iter()
        .map(|name| *k.pred_by_name(name, &[]).unwrap())
        .collect();
    assert_eq!(row, [false, false, true, true]);
}
