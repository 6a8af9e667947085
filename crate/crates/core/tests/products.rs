use contmodel::classes::fo_to_cont;
use contmodel::downup::Grid;
use contmodel::harness::{gen, rng_for, FormulaClass, InstanceSpec};
use contmodel::oracle::limsup_by_definition;
use contmodel::products::{
    direct_product, fo_reduced_product, limsup, pre_reduced_product, reduced_product,
    ultrafilters_extending, ultraproduct, Filter, IndexedFamily, ProductIndex,
    DEFAULT_MAX_PRODUCT_SIZE,
};
use contmodel::structures::{eval_fo, find_isomorphism, tuples};
use contmodel::{eval_formula, reduce_structure, Assignment, Structure, Value, Vocabulary};
use proptest::prelude::*;
use rand::Rng;

const CAP: usize = DEFAULT_MAX_PRODUCT_SIZE;

fn family<R: Rng>(rng: &mut R, v: &Vocabulary, max_index: usize) -> IndexedFamily<Value> {
    let n = rng.gen_range(1..=max_index);
    let members = (0..n)
        .map(|_| {
            let size = rng.gen_range(1..=3);
            gen::gen_structure(rng, v, size, Grid::default())
        })
        .collect();
    IndexedFamily::new(members).unwrap()
}

fn vocab() -> Vocabulary {
    InstanceSpec::default().vocabulary()
}

#[test]
fn limsup_identity_exhaustive_filters() {
    let values: Vec<Value> = (0..=4).map(|j| Value::dyadic(j, 2)).collect();
    for n in 1..=4usize {
        for f in Filter::all(n) {
            for s in 0..values.len().pow(n as u32) {
                let g: Vec<Value> = (0..n)
                    .map(|i| values[s / values.len().pow(i as u32) % values.len()])
                    .collect();
                let via_ultra = ultrafilters_extending(&f)
                    .iter()
                    .map(|u| g[u.kernel()[0]])
                    .max()
                    .unwrap();
                assert_eq!(via_ultra, limsup_by_definition(f.kernel(), &g));
                assert_eq!(limsup(&f, &g), via_ultra);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn atomic_values_are_limsups(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let v = vocab();
        let fam = family(&mut rng, &v, 3);
        let f = gen::gen_filter(&mut rng, fam.len());
        let pre = pre_reduced_product(&fam, &f, CAP).unwrap();
        let (red, q) = reduced_product(&fam, &f, CAP).unwrap();
        let idx = ProductIndex::new(fam.sizes());
        for (p, s) in v.predicates().iter().enumerate() {
            for t in tuples(pre.size(), s.arity) {
                let coords: Vec<Vec<usize>> = t.iter().map(|&e| idx.coords(e)).collect();
                let g: Vec<Value> =
                    (0..fam.len()).map(|i| *fam.get(i).pred(p, &coords.iter().map(|c| c[i]).collect::<Vec<_>>())).collect();
                let expected = limsup_by_definition(f.kernel(), &g);
                prop_assert_eq!(*pre.pred(p, &t), expected);
                let image: Vec<usize> = t.iter().map(|&e| q.class_of(e)).collect();
                prop_assert_eq!(*red.pred(p, &image), expected);
            }
        }
    }

    #[test]
    fn kernel_locality(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let fam = family(&mut rng, &vocab(), 3);
        let f = gen::gen_filter(&mut rng, fam.len());
        let whole = reduced_product(&fam, &f, CAP).unwrap().0;
        let local = direct_product(&fam.restrict(f.kernel()).unwrap(), CAP).unwrap().0;
        prop_assert!(find_isomorphism(&whole, &local).is_some());
    }

    #[test]
    fn principal_collapse(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let fam = family(&mut rng, &vocab(), 3);
        let i = rng.gen_range(0..fam.len());
        let u = ultraproduct(&fam, i, CAP).unwrap().0;
        let m = reduce_structure(fam.get(i)).unwrap().0;
        prop_assert!(find_isomorphism(&u, &m).is_some());
    }

    #[test]
    fn products_commute_with_parts(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let fam = family(&mut rng, &vocab(), 3);
        let f = gen::gen_filter(&mut rng, fam.len());
        let sub = Vocabulary::new().with_predicate("P", 1).and_then(|v| v.with_function("F", 1)).unwrap();
        let parts = fam.map(|m| m.vocabulary_part(&sub).unwrap());
        let a = reduced_product(&parts, &f, CAP).unwrap().0;
        let b = reduced_product(&fam, &f, CAP).unwrap().0.vocabulary_part(&sub).unwrap();
        prop_assert!(find_isomorphism(&a, &b).is_some());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    /// Each formula at a principal ultrafilter has the value it has in the
    /// chosen factor.
    #[test]
    fn los_at_principal_ultrafilters(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let v = vocab();
        let fam = family(&mut rng, &v, 3);
        let i = rng.gen_range(0..fam.len());
        let phi = gen::gen_cont_formula(
            &mut rng, &v, Grid::default(), FormulaClass::Unrestricted, gen::Shape { depth: 4, quantifiers: 2 }, &["x"],
        );
        let coords: Vec<usize> = fam.members().iter().map(|m| rng.gen_range(0..m.size())).collect();
        let (u, q) = ultraproduct(&fam, i, CAP).unwrap();
        let e = q.class_of(ProductIndex::new(fam.sizes()).element(&coords));
        prop_assert_eq!(
            eval_formula(&u, &phi, &Assignment::new().with("x", e)).unwrap(),
            eval_formula(fam.get(i), &phi, &Assignment::new().with("x", coords[i])).unwrap()
        );
    }

    /// Classical reduced products against general ones over `{0,1}`-valued
    /// factors: `θ` holds in the former iff `θ^c` is `0` in the latter.
    #[test]
    fn classical_and_general_products_agree(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let v = vocab();
        let n = rng.gen_range(1..=3);
        let ks: Vec<Structure<bool>> = (0..n)
            .map(|_| {
                let size = rng.gen_range(1..=3);
                gen::gen_fo_structure(&mut rng, &v, size)
            })
            .collect();
        let f = gen::gen_filter(&mut rng, n);
        let theta = gen::gen_fo_formula(
            &mut rng, &v, FormulaClass::FirstOrder, gen::Shape { depth: 3, quantifiers: 2 }, false, &[],
        );
        let fam = IndexedFamily::new(ks).unwrap();
        let fo = fo_reduced_product(&fam, &f, CAP).unwrap().0;
        let general = reduced_product(&fam.map(|k| k.to_general()), &f, CAP).unwrap().0;
        let holds = eval_fo(&fo, &theta, &Assignment::new()).unwrap();
        let value = eval_formula(&general, &fo_to_cont(&theta).unwrap(), &Assignment::new()).unwrap();
        prop_assert_eq!(holds, value.is_zero(), "{}", theta);
    }

    /// The basic topological lemma with random connectives and sequences.
    #[test]
    fn basic_lemma_seeded(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let n_idx = rng.gen_range(1..=4);
        let f = gen::gen_filter(&mut rng, n_idx);
        let k = rng.gen_range(1..=3);
        let cs: Vec<_> = (0..k).map(|_| gen::gen_connective(&mut rng)).collect();
        let ys: Vec<Vec<Value>> =
            (0..k).map(|_| (0..n_idx).map(|_| Value::dyadic(rng.gen_range(0..=16), 4)).collect()).collect();
        let term = |j: usize, y: Value| if j == 0 { cs[0].eval(y) } else { cs[j].eval(y.complement()) };
        let hyp = f.holds_on(|i| (0..k).map(|j| term(j, ys[j][i])).min().unwrap().is_zero());
        if hyp {
            let concl = (0..k).map(|j| term(j, limsup(&f, &ys[j]))).min().unwrap();
            prop_assert!(concl.is_zero());
        }
    }
}

#[test]
fn example_product_values() {
    for r in [Value::new(1, 4).unwrap(), Value::HALF] {
        let (fam, phi) = contmodel::harness::example_family(r);
        let full = Filter::full(2).unwrap();
        let (prod, _) = reduced_product(&fam, &full, CAP).unwrap();
        assert_eq!(eval_formula(&prod, &phi, &Assignment::new()).unwrap(), r);
        assert_eq!(*prod.pred_by_name("P", &[]).unwrap(), r);
        assert_eq!(*prod.pred_by_name("Q", &[]).unwrap(), r);
    }
}
