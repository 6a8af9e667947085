use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{gen_family, rng_for, trial_seed, HarnessError, InstanceSpec};
use crate::classes::classify_cont;
use crate::logic::{ContFormula, Term, Value, Vocabulary};
use crate::products::{limsup, reduced_product, Filter, IndexedFamily};
use crate::structures::{eval_formula, write_structure, Assignment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// `{i : φ^{M_i} <= ε}` is in the filter and the product value is `<= ε`.
    Preserved,
    /// The hypothesis fails for every `ε` tried.
    Vacuous,
    /// The hypothesis holds but the product value exceeds `ε`.
    Violated,
}

/// Values of a sentence in the factors and in the reduced product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    pub factor_values: Vec<Value>,
    pub kernel: Vec<usize>,
    pub product_value: Value,
}

impl Evaluation {
    /// Whether `{i : value_i <= eps}` belongs to the filter.
    pub fn hypothesis(&self, eps: Value) -> bool {
        self.kernel.iter().all(|&i| self.factor_values[i] <= eps)
    }

    pub fn verdict(&self, eps: Value) -> Verdict {
        match (self.hypothesis(eps), self.product_value <= eps) {
            (false, _) => Verdict::Vacuous,
            (true, true) => Verdict::Preserved,
            (true, false) => Verdict::Violated,
        }
    }

    /// All grid points and all factor values, ascending.
    pub fn epsilons(&self, grid: &[Value]) -> Vec<Value> {
        let mut eps: Vec<Value> = grid.iter().chain(&self.factor_values).copied().collect();
        eps.sort();
        eps.dedup();
        eps
    }

    /// The first `ε` in `eps` with a violation, else the first with the
    /// hypothesis holding, with its verdict.
    pub fn judge(&self, eps: &[Value]) -> (Verdict, Option<Value>) {
        if let Some(&e) = eps.iter().find(|&&e| self.verdict(e) == Verdict::Violated) {
            return (Verdict::Violated, Some(e));
        }
        match eps.iter().find(|&&e| self.hypothesis(e)) {
            Some(&e) => (Verdict::Preserved, Some(e)),
            None => (Verdict::Vacuous, None),
        }
    }
}

fn require_sentence(phi: &ContFormula) -> Result<(), HarnessError> {
    let free = phi.free_vars();
    if free.is_empty() {
        Ok(())
    } else {
        Err(HarnessError::NotSentence(free.into_iter().collect()))
    }
}

/// Evaluates the sentence `phi` in every factor and in `∏_F M_i`.
pub fn evaluate_instance(
    fam: &IndexedFamily<Value>,
    f: &Filter,
    phi: &ContFormula,
    cap: usize,
) -> Result<Evaluation, HarnessError> {
    require_sentence(phi)?;
    let a = Assignment::new();
    let factor_values = fam
        .members()
        .iter()
        .map(|m| eval_formula(m, phi, &a))
        .collect::<Result<Vec<_>, _>>()?;
    let (prod, _) = reduced_product(fam, f, cap)?;
    let product_value = eval_formula(&prod, phi, &a)?;
    Ok(Evaluation {
        factor_values,
        kernel: f.kernel().to_vec(),
        product_value,
    })
}

/// One trial of the preservation property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub factor_values: Vec<Value>,
    pub kernel: Vec<usize>,
    pub epsilon: Option<Value>,
    pub product_value: Value,
    pub verdict: Verdict,
}

/// `{i : φ^{M_i} <= ε} ∈ F` implies `φ^{∏_F M_i} <= ε`, at a single `ε`.
pub fn check_preservation(
    fam: &IndexedFamily<Value>,
    f: &Filter,
    phi: &ContFormula,
    eps: Value,
    cap: usize,
) -> Result<TrialRecord, HarnessError> {
    let e = evaluate_instance(fam, f, phi, cap)?;
    Ok(TrialRecord {
        trial: 0,
        seed: 0,
        verdict: e.verdict(eps),
        epsilon: Some(eps),
        factor_values: e.factor_values,
        kernel: e.kernel,
        product_value: e.product_value,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreservationReport {
    pub preserved: usize,
    pub vacuous: usize,
    pub violated: usize,
    pub first_violation: Option<TrialRecord>,
    pub records: Vec<TrialRecord>,
}

impl PreservationReport {
    pub fn from_records(records: Vec<TrialRecord>) -> Self {
        let count = |v| records.iter().filter(|r| r.verdict == v).count();
        PreservationReport {
            preserved: count(Verdict::Preserved),
            vacuous: count(Verdict::Vacuous),
            violated: count(Verdict::Violated),
            first_violation: records
                .iter()
                .find(|r| r.verdict == Verdict::Violated)
                .cloned(),
            records,
        }
    }
}

/// Both sides of `φ^{∏_F M_i} <= max_{i in kernel} φ^{M_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimsupBound {
    pub product_value: Value,
    pub bound: Value,
    pub holds: bool,
}

pub fn check_limsup_bound(
    fam: &IndexedFamily<Value>,
    f: &Filter,
    phi: &ContFormula,
    cap: usize,
) -> Result<LimsupBound, HarnessError> {
    if !classify_cont(phi).is("conditional") {
        return Err(HarnessError::NotConditional);
    }
    let e = evaluate_instance(fam, f, phi, cap)?;
    let bound = limsup(f, &e.factor_values);
    Ok(LimsupBound {
        product_value: e.product_value,
        bound,
        holds: e.product_value <= bound,
    })
}

/// Predicates, functions and constants occurring in `phi`, with the
/// arities of their occurrences.
pub fn vocabulary_of(phi: &ContFormula) -> Result<Vocabulary, HarnessError> {
    fn term(t: &Term, v: &mut Vocabulary) -> Result<(), HarnessError> {
        match t {
            Term::Var(_) => Ok(()),
            Term::Const(c) => {
                if v.constant_index(c).is_none() {
                    v.add_constant(c)
                        .map_err(|e| HarnessError::BadSpec(e.to_string()))?;
                }
                Ok(())
            }
            Term::App(g, args) => {
                match v.function_index(g) {
                    Some(i) if v.functions()[i].arity != args.len() => {
                        return Err(HarnessError::BadSpec(format!("{g} used with two arities")))
                    }
                    Some(_) => {}
                    None => v
                        .add_function(g, args.len())
                        .map_err(|e| HarnessError::BadSpec(e.to_string()))?,
                }
                args.iter().try_for_each(|a| term(a, v))
            }
        }
    }
    fn walk(f: &ContFormula, v: &mut Vocabulary) -> Result<(), HarnessError> {
        if let ContFormula::Atomic(a) = f {
            match v.predicate_index(&a.pred) {
                Some(i) if v.predicates()[i].arity != a.args.len() => {
                    return Err(HarnessError::BadSpec(format!(
                        "{} used with two arities",
                        a.pred
                    )))
                }
                Some(_) => {}
                None => v
                    .add_predicate(&a.pred, a.args.len())
                    .map_err(|e| HarnessError::BadSpec(e.to_string()))?,
            }
            a.args.iter().try_for_each(|t| term(t, v))?;
        }
        f.children().into_iter().try_for_each(|c| walk(c, v))
    }
    let mut v = Vocabulary::new();
    walk(phi, &mut v)?;
    Ok(v)
}

/// An instance violating preservation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub trial: usize,
    pub seed: u64,
    pub factors: Vec<String>,
    pub kernel: Vec<usize>,
    pub epsilon: Value,
    pub factor_values: Vec<Value>,
    pub product_value: Value,
}

/// Draws `budget.trials` families over the vocabulary of `phi` and returns
/// the first one, in trial order, on which preservation fails for some
/// `ε` among the grid points and factor values.
pub fn search_counterexample(
    phi: &ContFormula,
    budget: &InstanceSpec,
) -> Result<Option<Witness>, HarnessError> {
    require_sentence(phi)?;
    let vocab = vocabulary_of(phi)?;
    let spec = InstanceSpec {
        predicate_arities: vocab.predicates().iter().map(|s| s.arity).collect(),
        ..budget.clone()
    };
    if !vocab.predicates().is_empty() {
        spec.validate()?;
    }
    let grid = spec.grid().values();
    (0..spec.trials)
        .into_par_iter()
        .map(|trial| {
            let seed = trial_seed(spec.seed, trial);
            let mut rng = rng_for(seed);
            let (fam, f) = gen_family(&mut rng, &spec, &vocab)?;
            let e = evaluate_instance(&fam, &f, phi, spec.max_product_size)?;
            Ok(match e.judge(&e.epsilons(&grid)) {
                (Verdict::Violated, Some(epsilon)) => Some(Witness {
                    trial,
                    seed,
                    factors: fam.members().iter().map(write_structure).collect(),
                    kernel: e.kernel,
                    epsilon,
                    factor_values: e.factor_values,
                    product_value: e.product_value,
                }),
                _ => None,
            })
        })
        .find_map_first(|r: Result<Option<Witness>, HarnessError>| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .transpose()
        .map(Option::flatten)
}
