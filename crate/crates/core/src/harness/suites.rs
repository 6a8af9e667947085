//! Named property suites. Each suite runs its trials in parallel, each
//! trial from its own seed, and assembles the report in trial order.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::check::{
    evaluate_instance, search_counterexample, PreservationReport, TrialRecord, Verdict,
};
use super::gen::{self, Shape};
use super::{gen_instance, rng_for, trial_seed, FormulaClass, HarnessError, InstanceSpec};
use crate::classes::{classify_cont, fo_to_cont};
use crate::downup::{is_increasing, structure_down, structure_up, Grid};
use crate::logic::{parse_cont_inferring, ContFormula, MonotoneConnective, Value, Vocabulary};
use crate::oracle::{leibniz_by_enumeration, limsup_by_definition};
use crate::products::{
    fo_reduced_product, limsup, reduced_product, ultrafilters_extending, ultraproduct, Filter,
    IndexedFamily, ProductIndex, DEFAULT_MAX_PRODUCT_SIZE,
};
use crate::structures::{
    check_morphism, eval_fo, eval_formula, find_isomorphism, leibniz_partition, Assignment,
    MorphismKind, Structure,
};

pub const SUITES: [&str; 11] = [
    "limsup-identity",
    "los",
    "leibniz-oracle",
    "conditional-preservation",
    "basic-lemma",
    "downup-roundtrip",
    "product-commutation",
    "morphism-monotonicity",
    "example-reproduction",
    "horn-conditional",
    "counterexample-search",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub seed: u64,
    /// `None` uses the suite's own default.
    pub trials: Option<usize>,
    pub grid_bits: Option<u32>,
    pub max_product_size: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            trials: None,
            grid_bits: None,
            max_product_size: DEFAULT_MAX_PRODUCT_SIZE,
        }
    }
}

impl SuiteOptions {
    fn grid(&self) -> Result<Grid, HarnessError> {
        Ok(Grid::new(self.grid_bits.unwrap_or(Grid::DEFAULT_BITS))?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: usize,
    pub seed: u64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub checks: usize,
    pub failures: Vec<Failure>,
    pub details: serde_json::Value,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Default)]
struct Outcome {
    checks: usize,
    failures: Vec<String>,
}

impl Outcome {
    fn expect(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(detail());
        }
    }
}

struct Trials {
    trials: usize,
    checks: usize,
    failures: Vec<Failure>,
}

/// Runs `trial(index, seed)` for every trial index, in parallel.
fn run_trials<F>(master: u64, trials: usize, trial: F) -> Result<Trials, HarnessError>
where
    F: Fn(usize, u64) -> Result<Outcome, HarnessError> + Sync,
{
    let outcomes: Vec<(usize, u64, Outcome)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let seed = trial_seed(master, t);
            trial(t, seed).map(|o| (t, seed, o))
        })
        .collect::<Result<_, _>>()?;
    let mut checks = 0;
    let mut failures = Vec::new();
    for (t, seed, o) in outcomes {
        checks += o.checks;
        failures.extend(o.failures.into_iter().map(|detail| Failure {
            trial: t,
            seed,
            detail,
        }));
    }
    Ok(Trials {
        trials,
        checks,
        failures,
    })
}

fn report(name: &str, opts: &SuiteOptions, t: Trials, details: serde_json::Value) -> SuiteReport {
    SuiteReport {
        suite: name.to_string(),
        seed: opts.seed,
        trials: t.trials,
        checks: t.checks,
        failures: t.failures,
        details,
    }
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport, HarnessError> {
    match name {
        "limsup-identity" => limsup_identity(opts),
        "los" => los(opts),
        "leibniz-oracle" => leibniz_oracle(opts),
        "conditional-preservation" => conditional_preservation(opts),
        "basic-lemma" => basic_lemma(opts),
        "downup-roundtrip" => downup_roundtrip(opts),
        "product-commutation" => product_commutation(opts),
        "morphism-monotonicity" => morphism_monotonicity(opts),
        "example-reproduction" => example_reproduction(opts),
        "horn-conditional" => horn_conditional(opts),
        "counterexample-search" => counterexample_search(opts),
        other => Err(HarnessError::UnknownSuite(other.to_string())),
    }
}

fn family<R: Rng>(
    rng: &mut R,
    vocab: &Vocabulary,
    index: (usize, usize),
    universe: (usize, usize),
    grid: Grid,
) -> Result<IndexedFamily<Value>, HarnessError> {
    let n = rng.gen_range(index.0..=index.1);
    let members = (0..n)
        .map(|_| {
            let size = rng.gen_range(universe.0..=universe.1);
            gen::gen_structure(rng, vocab, size, grid)
        })
        .collect();
    Ok(IndexedFamily::new(members)?)
}

/// Every filter on every index set of size at most 5, against both the
/// ultrafilter characterization and the inf-of-sups definition.
fn limsup_identity(opts: &SuiteOptions) -> Result<SuiteReport, HarnessError> {
    let grid = opts.grid()?;
    let t = run_trials(opts.seed, opts.trials.unwrap_or(200), |_, seed| {
        let mut rng = rng_for(seed);
        let mut out = Outcome::default();
        for n in 1..=5 {
            for f in Filter::all(n) {
                let g: Vec<Value> = (0..n).map(|_| gen::gen_value(&mut rng, grid)).collect();
                let via_ultra = ultrafilters_extending(&f)
                    .iter()
                    .map(|u| g[u.kernel()[0]])
                    .max()
                    .expect("kernel is nonempty");
                let fast = limsup(&f, &g);
                let slow = limsup_by_definition(f.kernel(), &g);
                out.expect(via_ultra == slow && fast == slow, || {
                    format!("filter {f}, g={g:?}: ultrafilters {via_ultra}, limsup {fast}, definition {slow}")
                });
            }
        }
        Ok(out)
    })?;
    Ok(report(
        "limsup-identity",
        opts,
        t,
        json!({ "max_index_set": 5 }),
    ))
}

fn assignment(vars: &[&str], elems: &[usize]) -> Assignment {
    vars.iter()
        .zip(elems)
        .map(|(x, &a)| (x.to_string(), a))
        .collect()
}

/// Principal ultraproducts evaluate every formula at the principal point.
fn los(opts: &SuiteOptions) -> Result<SuiteReport, HarnessError> {
    let grid = opts.grid()?;
    let vocab = InstanceSpec::default().vocabulary();
    let vars = ["x", "y"];
    let t = run_trials(opts.seed, opts.trials.unwrap_or(500), |_, seed| {
        let mut rng = rng_for(seed);
        let fam = family(&mut rng, &vocab, (1, 3), (1, 3), grid)?;
        let i = rng.gen_range(0..fam.len());
        let phi = gen::gen_cont_formula(
            &mut rng,
            &vocab,
            grid,
            FormulaClass::Unrestricted,
            Shape {
                depth: 4,
                quantifiers: 2,
            },
            &vars,
        );
        let coords: Vec<Vec<usize>> = fam
            .members()
            .iter()
            .map(|m| gen::gen_tuple(&mut rng, m.size(), vars.len()))
            .collect();
        let (prod, classes) = ultraproduct(&fam, i, opts.max_product_size)?;
        let idx = ProductIndex::new(fam.sizes());
        let elems: Vec<usize> = (0..vars.len())
            .map(|k| {
                classes.class_of(idx.element(&coords.iter().map(|c| c[k]).collect::<Vec<_>>()))
            })
            .collect();
        let in_product = eval_formula(&prod, &phi, &assignment(&vars, &elems))?;
        let in_factor = eval_formula(fam.get(i), &phi, &assignment(&vars, &coords[i]))?;
        let mut out = Outcome::default();
        out.expect(in_product == in_factor, || {
            format!("{phi} at index {i}: ultraproduct {in_product}, factor {in_factor}")
        });
        Ok(out)
    })?;
    Ok(report("los", opts, t, json!({})))
}

fn leibniz_vocabulary<R: Rng>(rng: &mut R) -> Vocabulary {
    let mut v = Vocabulary::new();
    for (k, name) in ["P", "Q"].iter().enumerate().take(rng.gen_range(1..=2)) {
        let _ = k;
        v.add_predicate(name, rng.gen_range(0..=2))
            .expect("fresh name");
    }
    for name in ["F", "G"].iter().take(rng.gen_range(0..=2)) {
        v.add_function(name, 1).expect("fresh name");
    }
    if rng.gen_bool(0.5) {
        v.add_constant("c").expect("fresh name");
    }
    v
}

/// The fixpoint partition against atomic formulas of term depth at most 3.
fn leibniz_oracle(opts: &SuiteOptions) -> Result<SuiteReport, HarnessError> {
    let max_bits = opts.grid_bits.unwrap_or(Grid::DEFAULT_BITS);
    Grid::new(max_bits)?;
    let t = run_trials(opts.seed, opts.trials.unwrap_or(200), |_, seed| {
        let mut rng = rng_for(seed);
        let vocab = leibniz_vocabulary(&mut rng);
        // coarse grids give more ties
        let grid = Grid::new(rng.gen_range(1..=max_bits))?;
        let m = {
            let size = rng.gen_range(1..=4);
            gen::gen_structure(&mut rng, &vocab, size, grid)
        };
        let fast = leibniz_partition(&m);
        let slow = leibniz_by_enumeration(&m, 3);
        let mut out = Outcome::default();
        out.expect(fast == slow, || {
            format!(
                "fixpoint {:?} vs enumeration {:?}\n{m}",
                fast.blocks(),
                slow.blocks()
            )
        });
        Ok(out)
    })?;
    Ok(report(
        "leibniz-oracle",
        opts,
        t,
        json!({ "term_depth": 3, "max_universe": 4 }),
    ))
}

/// Conditional sentences never violate preservation, at any grid `ε`.
fn conditional_preservation(opts: &SuiteOptions) -> Result<SuiteReport, HarnessError> {
    let spec = InstanceSpec {
        seed: opts.seed,
        trials: opts.trials.unwrap_or(1000),
        grid_bits: opts.grid_bits.unwrap_or(Grid::DEFAULT_BITS),
        max_product_size: opts.max_product_size,
        ..Default::default()
    };
    spec.validate()?;
    let grid = spec.grid().values();
    let records: Vec<(TrialRecord, Outcome)> = (0..spec.trials)
        .into_par_iter()
        .map(|trial| {
            let inst = gen_instance(&spec, trial)?;
            let e = evaluate_instance(
                &inst.family,
                &inst.filter,
                &inst.formula,
                spec.max_product_size,
            )?;
            let mut out = Outcome::default();
            let eps = e.epsilons(&grid);
            for &x in &eps {
                out.expect(e.verdict(x) != Verdict::Violated, || {
                    format!(
                        "{} violated at ε={x}: factors {:?}, product {}",
                        inst.formula, e.factor_values, e.product_value
                    )
                });
            }
            let bound = limsup(&inst.filter, &e.factor_values);
            out.expect(e.product_value <= bound, || {
                format!(
                    "{}: product {} above limsup {bound}",
                    inst.formula, e.product_value
                )
            });
            let (verdict, epsilon) = e.judge(&eps);
            let rec = TrialRecord {
                trial,
                seed: inst.seed,
                factor_values: e.factor_values,
                kernel: e.kernel,
                epsilon,
                product_value: e.product_value,
                verdict,
            };
            Ok((rec, out))
        })
        .collect::<Result<_, HarnessError>>()?;
    let mut t = Trials {
        trials: spec.trials,
        checks: 0,
        failures: Vec::new(),
    };
    let mut recs = Vec::new();
    for (rec, out) in records {
        t.checks += out.checks;
        t.failures
            .extend(out.failures.into_iter().map(|detail| Failure {
                trial: rec.trial,
                seed: rec.seed,
                detail,
            }));
        recs.push(rec);
    }
    let pr = PreservationReport::from_records(recs);
    let details = serde_json::to_value(&pr).expect("report serializes");
    Ok(report("conditional-preservation", opts, t, details))
}

/// The connectives of the exhaustive basic-lemma run.
pub fn basic_lemma_connectives() -> Vec<MonotoneConnective> {
    let d = |j| Value::dyadic(j, 3);
    vec![
        MonotoneConnective::identity(),
        MonotoneConnective::trunc_sub(d(3)),
        MonotoneConnective::constant(Value::ZERO),
        MonotoneConnective::constant(Value::HALF),
        MonotoneConnective::new(vec![(d(0), d(0)), (d(4), d(0)), (d(6), d(4)), (d(8), d(8))])
            .expect("increasing breakpoints"),
        MonotoneConnective::trunc_add(d(1)),
        MonotoneConnective::constant(Value::ONE),
    ]
}

/// Exhaustive over `|I| <= 3`, every filter, every pair of connectives
/// and every pair of sequences on the denominator-8 grid. Values are
/// handled as grid indices, with each connective's zero set tabulated
/// exactly beforehand.
fn basic_lemma(opts: &SuiteOptions) -> Result<SuiteReport, HarnessError> {
    let values: Vec<Value> = (0..=8).map(|j| Value::dyadic(j, 3)).collect();
    let cs = basic_lemma_connectives();
    // zero0[c][v]: C(v) = 0; zero1[c][v]: C(1 - v) = 0
    let zero0: Vec<Vec<bool>> = cs
        .iter()
        .map(|c| values.iter().map(|&v| c.eval(v).is_zero()).collect())
        .collect();
    let zero1: Vec<Vec<bool>> = cs
        .iter()
        .map(|c| {
            values
                .iter()
                .map(|&v| c.eval(v.complement()).is_zero())
                .collect()
        })
        .collect();
    let mut cases = Vec::new();
    for n in 1..=3usize {
        for f in Filter::all(n) {
            for c0 in 0..cs.len() {
                cases.push((n, f.clone(), c0, None));
                for c1 in 0..cs.len() {
                    cases.push((n, f.clone(), c0, Some(c1)));
                }
            }
        }
    }
    let outcomes: Vec<Outcome> = cases
        .par_iter()
        .map(|(n, f, c0, c1)| {
            let n = *n;
            let mut out = Outcome::default();
            let seqs = 9usize.pow(n as u32);
            let digits = |mut s: usize| -> Vec<usize> {
                (0..n)
                    .map(|_| {
                        let d = s % 9;
                        s /= 9;
                        d
                    })
                    .collect()
            };
            let y1_range = if c1.is_some() { seqs } else { 1 };
            for s0 in 0..seqs {
                let y0 = digits(s0);
                for s1 in 0..y1_range {
                    let y1 = digits(s1);
                    let holds_at =
                        |i: usize| zero0[*c0][y0[i]] || c1.is_some_and(|c| zero1[c][y1[i]]);
                    if !f.holds_on(holds_at) {
                        continue;
                    }
                    let l0 = f.kernel().iter().map(|&i| y0[i]).max().unwrap();
                    let l1 = f.kernel().iter().map(|&i| y1[i]).max().unwrap();
                    let concl = zero0[*c0][l0] || c1.is_some_and(|c| zero1[c][l1]);
                    out.expect(concl, || {
                        format!(
                            "filter {f}, C0={}, C1={c1:?}, y0={y0:?}, y1={y1:?}",
                            cs[*c0]
                        )
                    });
                }
            }
            out
        })
        .collect();
    let mut t = Trials {
        trials: outcomes.len(),
        checks: 0,
        failures: Vec::new(),
    };
    for o in outcomes {
        t.checks += o.checks;
        t.failures
            .extend(o.failures.into_iter().map(|detail| Failure {
                trial: 0,
                seed: 0,
                detail,
            }));
    }
    let names: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
    Ok(report(
        "basic-lemma",
        opts,
        t,
        json!({ "grid_denominator": 8, "max_index_set": 3, "connectives": names }),
    ))
}

fn downup_roundtrip(opts: &SuiteOptions) -> Result<SuiteReport, HarnessError> {
    let grid = opts.grid()?;
    let vocab = InstanceSpec::default().vocabulary();
    let t = run_trials(opts.seed, opts.trials.unwrap_or(200), |_, seed| {
        let mut rng = rng_for(seed);
        let m = {
            let size = rng.gen_range(1..=4);
            gen::gen_reduced_structure(&mut rng, &vocab, size, grid)
        };
        let k = structure_down(&m, grid)?;
        let mut out = Outcome::default();
        out.expect(is_increasing(&k)?, || {
            format!("down image is not increasing\n{m}")
        });
        let back = structure_up(&k, grid)?;
        out.expect(find_isomorphism(&back, &m).is_some(), || {
            format!("round trip changed the structure\n{m}")
        });
        Ok(out)
    })?;
    Ok(report(
        "downup-roundtrip",
        opts,
        t,
        json!({ "grid_bits": grid.bits() }),
    ))
}

/// `∏_F (K_i↑) ≅ (∏_F K_i)↑`, and `∏_F M_i ≅ (∏_F M_i↓)↑`.
fn product_commutation(opts: &SuiteOptions) -> Result<SuiteReport, HarnessError> {
    let grid = opts.grid()?;
    let base = InstanceSpec::default().vocabulary();
    let cap = opts.max_product_size;
    let t = run_trials(opts.seed, opts.trials.unwrap_or(100), |_, seed| {
        let mut rng = rng_for(seed);
        let n = rng.gen_range(1..=3);
        let ks: Vec<Structure<bool>> = (0..n)
            .map(|_| {
                let size = rng.gen_range(1..=3);
                gen::gen_increasing_structure(&mut rng, &base, size, grid)
            })
            .collect();
        let f = gen::gen_filter(&mut rng, n);
        let ups = ks
            .iter()
            .map(|k| structure_up(k, grid))
            .collect::<Result<Vec<_>, _>>()?;
        let lhs = reduced_product(&IndexedFamily::new(ups)?, &f, cap)?.0;
        let fo = fo_reduced_product(&IndexedFamily::new(ks)?, &f, cap)?.0;
        let mut out = Outcome::default();
        out.expect(is_increasing(&fo)?, || {
            format!("product over {f} is not increasing")
        });
        let rhs = structure_up(&fo, grid)?;
        out.expect(find_isomorphism(&lhs, &rhs).is_some(), || {
            format!("K family over {f}: sides differ")
        });

        let ms: Vec<Structure<Value>> = (0..n)
            .map(|_| {
                let size = rng.gen_range(1..=3);
                gen::gen_reduced_structure(&mut rng, &base, size, grid)
            })
            .collect();
        let downs = ms
            .iter()
            .map(|m| structure_down(m, grid))
            .collect::<Result<Vec<_>, _>>()?;
        let direct = reduced_product(&IndexedFamily::new(ms)?, &f, cap)?.0;
        let via = structure_up(
            &fo_reduced_product(&IndexedFamily::new(downs)?, &f, cap)?.0,
            grid,
        )?;
        out.expect(find_isomorphism(&direct, &via).is_some(), || {
            format!("M family over {f}: sides differ")
        });
        Ok(out)
    })?;
    Ok(report(
        "product-commutation",
        opts,
        t,
        json!({ "max_index_set": 3, "grid_bits": grid.bits() }),
    ))
}

/// Embeddings against existential, quantifier-free and universal formulas,
/// and onto homomorphisms against positive ones.
fn morphism_monotonicity(opts: &SuiteOptions) -> Result<SuiteReport, HarnessError> {
    let grid = opts.grid()?;
    let vocab = InstanceSpec::default().vocabulary();
    let vars = ["x", "y"];
    let shape = Shape {
        depth: 4,
        quantifiers: 2,
    };
    let t = run_trials(opts.seed, opts.trials.unwrap_or(500), |_, seed| {
        let mut rng = rng_for(seed);
        let mut out = Outcome::default();
        let n = {
            let size = rng.gen_range(1..=3);
            gen::gen_structure(&mut rng, &vocab, size, grid)
        };

        let (m, h) = gen::gen_embedding(&mut rng, &n, 4);
        out.expect(
            check_morphism(MorphismKind::Embedding, &h, &m, &n).is_ok(),
            || "generated map is not an embedding".into(),
        );
        for class in [
            FormulaClass::Existential,
            FormulaClass::QuantifierFree,
            FormulaClass::Universal,
        ] {
            let phi = gen::gen_cont_formula(&mut rng, &vocab, grid, class, shape, &vars);
            let a = gen::gen_tuple(&mut rng, m.size(), vars.len());
            let ha: Vec<usize> = a.iter().map(|&e| h[e]).collect();
            let vm = eval_formula(&m, &phi, &assignment(&vars, &a))?;
            let vn = eval_formula(&n, &phi, &assignment(&vars, &ha))?;
            let ok = match class {
                FormulaClass::Existential => vm >= vn,
                FormulaClass::QuantifierFree => vm == vn,
                _ => vm <= vn,
            };
            out.expect(ok, || format!("{class} {phi}: source {vm}, target {vn}"));
        }

        let (m, h) = gen::gen_homomorphism(&mut rng, &n, 4, grid);
        out.expect(
            check_morphism(MorphismKind::Homomorphism, &h, &m, &n).is_ok(),
            || "generated map is not a homomorphism".into(),
        );
        let phi =
            gen::gen_cont_formula(&mut rng, &vocab, grid, FormulaClass::Positive, shape, &vars);
        let a = gen::gen_tuple(&mut rng, m.size(), vars.len());
        let ha: Vec<usize> = a.iter().map(|&e| h[e]).collect();
        let vm = eval_formula(&m, &phi, &assignment(&vars, &a))?;
        let vn = eval_formula(&n, &phi, &assignment(&vars, &ha))?;
        out.expect(vm >= vn, || {
            format!("positive {phi}: source {vm}, target {vn}")
        });
        Ok(out)
    })?;
    Ok(report(
        "morphism-monotonicity",
        opts,
        t,
        json!({ "checks_per_trial": 6 }),
    ))
}

pub const EXAMPLE_SENTENCE: &str = "min(P, Q, 1 -. min(P, Q))";

/// The two-factor family with `P = r, Q = 0` and `P = 0, Q = r`.
pub fn example_family(r: Value) -> (IndexedFamily<Value>, ContFormula) {
    let (phi, vocab) = parse_cont_inferring(EXAMPLE_SENTENCE).expect("example sentence parses");
    let factor = |p: Value, q: Value| {
        Structure::from_fn(vocab.clone(), 1, |i, _| [p, q][i], |_, _| 0, |_| 0)
            .expect("nullary tables")
    };
    let fam = IndexedFamily::new(vec![factor(r, Value::ZERO), factor(Value::ZERO, r)])
        .expect("shared vocabulary");
    (fam, phi)
}

fn example_reproduction(opts: &SuiteOptions) -> Result<SuiteReport, HarnessError> {
    let mut out = Outcome::default();
    let mut rows = Vec::new();
    let full = Filter::full(2)?;
    for r in [Value::new(1, 4).expect("in range"), Value::HALF] {
        let (fam, phi) = example_family(r);
        let e = evaluate_instance(&fam, &full, &phi, opts.max_product_size)?;
        out.expect(e.factor_values == [Value::ZERO, Value::ZERO], || {
            format!("r={r}: factors {:?}", e.factor_values)
        });
        out.expect(e.product_value == r, || {
            format!("r={r}: product {}", e.product_value)
        });
        out.expect(e.verdict(Value::ZERO) == Verdict::Violated, || {
            format!("r={r}: not violated at 0")
        });
        rows.push(json!({
            "r": r.to_string(),
            "factor_values": e.factor_values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "product_value": e.product_value.to_string(),
            "verdict": e.verdict(Value::ZERO),
        }));
    }

    // the classical shadow: each factor satisfies P or Q, the product does not
    let (theta, vocab) = crate::logic::parse_fo_inferring("P | Q").expect("parses");
    let k = |p: bool, q: bool| {
        Structure::from_fn(vocab.clone(), 1, |i, _| [p, q][i], |_, _| 0, |_| 0).expect("tables")
    };
    let ks = IndexedFamily::new(vec![k(true, false), k(false, true)])?;
    let (prod, _) = fo_reduced_product(&ks, &full, opts.max_product_size)?;
    let a = Assignment::new();
    let factors_hold = ks
        .members()
        .iter()
        .map(|m| eval_fo(m, &theta, &a))
        .collect::<Result<Vec<_>, _>>()?;
    let product_holds = eval_fo(&prod, &theta, &a)?;
    out.expect(factors_hold == [true, true] && !product_holds, || {
        "classical product satisfies P | Q".into()
    });

    let t = Trials {
        trials: 1,
        checks: out.checks,
        failures: fail_list(out.failures),
    };
    Ok(report(
        "example-reproduction",
        opts,
        t,
        json!({ "sentence": EXAMPLE_SENTENCE, "cases": rows, "classical_product_satisfies": product_holds }),
    ))
}

fn fail_list(details: Vec<String>) -> Vec<Failure> {
    details
        .into_iter()
        .map(|detail| Failure {
            trial: 0,
            seed: 0,
            detail,
        })
        .collect()
}

/// Horn sentences translate to conditional ones, with matching truth
/// values on random first-order structures.
fn horn_conditional(opts: &SuiteOptions) -> Result<SuiteReport, HarnessError> {
    let vocab = InstanceSpec::default().vocabulary();
    let t = run_trials(opts.seed, opts.trials.unwrap_or(500), |_, seed| {
        let mut rng = rng_for(seed);
        let theta = gen::gen_fo_formula(
            &mut rng,
            &vocab,
            FormulaClass::Horn,
            Shape {
                depth: 3,
                quantifiers: 2,
            },
            false,
            &[],
        );
        let tc = fo_to_cont(&theta)?;
        let mut out = Outcome::default();
        out.expect(classify_cont(&tc).is("conditional"), || {
            format!("{theta} translates to {tc}, not conditional")
        });
        let k = {
            let size = rng.gen_range(1..=3);
            gen::gen_fo_structure(&mut rng, &vocab, size)
        };
        let classical = eval_fo(&k, &theta, &Assignment::new())?;
        let cont = eval_formula(&k.to_general(), &tc, &Assignment::new())?;
        out.expect(
            classical == cont.is_zero() && (cont.is_zero() || cont == Value::ONE),
            || format!("{theta}: classical {classical}, continuous {cont}"),
        );
        Ok(out)
    })?;
    Ok(report("horn-conditional", opts, t, json!({})))
}

/// The example sentence has a witness within the budget; seeded
/// conditional sentences have none.
fn counterexample_search(opts: &SuiteOptions) -> Result<SuiteReport, HarnessError> {
    let budget = InstanceSpec {
        seed: opts.seed,
        trials: 1000,
        grid_bits: opts.grid_bits.unwrap_or(Grid::DEFAULT_BITS),
        max_product_size: opts.max_product_size,
        ..Default::default()
    };
    budget.validate()?;
    let mut head = Outcome::default();
    let (phi, _) = parse_cont_inferring(EXAMPLE_SENTENCE).expect("example sentence parses");
    let witness = search_counterexample(&phi, &budget)?;
    head.expect(witness.is_some(), || {
        format!("no witness for {phi} within {} trials", budget.trials)
    });

    let vocab = budget.vocabulary();
    let grid = budget.grid();
    let t = run_trials(opts.seed, opts.trials.unwrap_or(50), |_, seed| {
        let mut rng = rng_for(seed);
        let phi = gen::gen_cont_sentence(
            &mut rng,
            &vocab,
            grid,
            FormulaClass::Conditional,
            budget.shape(),
        );
        let found = search_counterexample(
            &phi,
            &InstanceSpec {
                seed,
                ..budget.clone()
            },
        )?;
        let mut out = Outcome::default();
        out.expect(found.is_none(), || {
            format!("conditional {phi} has witness {found:?}")
        });
        Ok(out)
    })?;
    let t = Trials {
        trials: t.trials,
        checks: t.checks + head.checks,
        failures: fail_list(head.failures)
            .into_iter()
            .chain(t.failures)
            .collect(),
    };
    Ok(report(
        "counterexample-search",
        opts,
        t,
        json!({ "budget": budget.trials, "example_witness": witness }),
    ))
}
