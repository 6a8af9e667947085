//! Seeded instance generation, the preservation checker and the suite
//! runner.
//!
//! Each trial draws from its own generator, seeded by [`trial_seed`] from
//! the master seed and the trial index, so a reported trial can be replayed
//! from its seed alone.

mod check;
pub mod gen;
mod suites;

pub use check::{
    check_limsup_bound, check_preservation, evaluate_instance, search_counterexample,
    vocabulary_of, Evaluation, LimsupBound, PreservationReport, TrialRecord, Verdict, Witness,
};
pub use suites::{
    basic_lemma_connectives, example_family, run_suite, Failure, SuiteOptions, SuiteReport,
    EXAMPLE_SENTENCE, SUITES,
};

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classes::TranslateError;
use crate::downup::{DownUpError, Grid};
use crate::logic::{ContFormula, Vocabulary};
use crate::products::{
    Filter, FilterError, FilterSpec, IndexedFamily, ProductError, DEFAULT_MAX_PRODUCT_SIZE,
};
use crate::structures::{EvalError, StructureError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("invalid instance spec: {0}")]
    BadSpec(String),
    #[error("formula has free variables {0:?}")]
    NotSentence(Vec<String>),
    #[error("formula is not conditional")]
    NotConditional,
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    DownUp(#[from] DownUpError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaClass {
    Unrestricted,
    Restricted,
    QuantifierFree,
    Conditional,
    PrimitiveConditional,
    Existential,
    Universal,
    Positive,
    Horn,
    FirstOrder,
}

impl FormulaClass {
    pub const ALL: [FormulaClass; 10] = [
        FormulaClass::Unrestricted,
        FormulaClass::Restricted,
        FormulaClass::QuantifierFree,
        FormulaClass::Conditional,
        FormulaClass::PrimitiveConditional,
        FormulaClass::Existential,
        FormulaClass::Universal,
        FormulaClass::Positive,
        FormulaClass::Horn,
        FormulaClass::FirstOrder,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FormulaClass::Unrestricted => "unrestricted",
            FormulaClass::Restricted => "restricted",
            FormulaClass::QuantifierFree => "quantifier-free",
            FormulaClass::Conditional => "conditional",
            FormulaClass::PrimitiveConditional => "primitive-conditional",
            FormulaClass::Existential => "existential",
            FormulaClass::Universal => "universal",
            FormulaClass::Positive => "positive",
            FormulaClass::Horn => "horn",
            FormulaClass::FirstOrder => "first-order",
        }
    }

    pub fn is_first_order(self) -> bool {
        matches!(self, FormulaClass::Horn | FormulaClass::FirstOrder)
    }
}

impl fmt::Display for FormulaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FormulaClass {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        FormulaClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| HarnessError::BadSpec(format!("unknown formula class `{s}`")))
    }
}

/// Everything needed to draw a batch of instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct InstanceSpec {
    pub predicate_arities: Vec<usize>,
    pub function_arities: Vec<usize>,
    pub constants: usize,
    /// Inclusive bounds on factor universe sizes.
    pub universe: (usize, usize),
    /// Inclusive bounds on the size of the index set.
    pub index_set: (usize, usize),
    /// `None` draws a random filter per trial.
    pub filter: Option<FilterSpec>,
    pub grid_bits: u32,
    pub class: FormulaClass,
    pub depth: usize,
    pub quantifiers: usize,
    pub seed: u64,
    pub trials: usize,
    pub max_product_size: usize,
}

impl Default for InstanceSpec {
    fn default() -> Self {
        InstanceSpec {
            predicate_arities: vec![1, 2, 0],
            function_arities: vec![1],
            constants: 1,
            universe: (1, 3),
            index_set: (1, 3),
            filter: None,
            grid_bits: Grid::DEFAULT_BITS,
            class: FormulaClass::Conditional,
            depth: 4,
            quantifiers: 2,
            seed: 0,
            trials: 1000,
            max_product_size: DEFAULT_MAX_PRODUCT_SIZE,
        }
    }
}

const PREDICATE_NAMES: [&str; 6] = ["P", "Q", "R", "S", "T", "U"];
const FUNCTION_NAMES: [&str; 3] = ["F", "G", "H"];
const CONSTANT_NAMES: [&str; 3] = ["c", "d", "e"];

fn symbol_name(base: &[&str], i: usize) -> String {
    match base.get(i) {
        Some(n) => n.to_string(),
        None => format!("{}{}", base[0], i),
    }
}

impl InstanceSpec {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::BadSpec(m.to_string()));
        if self.universe.0 == 0 || self.universe.0 > self.universe.1 {
            return bad("universe bounds must satisfy 1 <= min <= max");
        }
        if self.index_set.0 == 0 || self.index_set.0 > self.index_set.1 || self.index_set.1 > 16 {
            return bad("index set bounds must satisfy 1 <= min <= max <= 16");
        }
        if self.function_arities.contains(&0) {
            return bad("function arities must be positive");
        }
        if self.predicate_arities.is_empty() {
            return bad("at least one predicate symbol is needed");
        }
        Grid::new(self.grid_bits)?;
        let largest = (self.universe.1 as u128).checked_pow(self.index_set.1 as u32);
        if largest.is_none_or(|n| n > self.max_product_size as u128) {
            return bad("largest product universe exceeds the product size bound");
        }
        Ok(())
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.grid_bits).expect("validated grid")
    }

    pub fn shape(&self) -> gen::Shape {
        gen::Shape {
            depth: self.depth,
            quantifiers: self.quantifiers,
        }
    }

    pub fn vocabulary(&self) -> Vocabulary {
        let mut v = Vocabulary::new();
        for (i, &a) in self.predicate_arities.iter().enumerate() {
            v.add_predicate(&symbol_name(&PREDICATE_NAMES, i), a)
                .expect("fresh name");
        }
        for (i, &a) in self.function_arities.iter().enumerate() {
            v.add_function(&symbol_name(&FUNCTION_NAMES, i), a)
                .expect("fresh name");
        }
        for i in 0..self.constants {
            v.add_constant(&symbol_name(&CONSTANT_NAMES, i))
                .expect("fresh name");
        }
        v
    }
}

/// Seed for trial `index` under `master`, by a SplitMix64 step.
pub fn trial_seed(master: u64, index: usize) -> u64 {
    let mut z = master
        ^ (index as u64)
            .wrapping_add(1)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A family, a filter and a continuous sentence.
#[derive(Debug, Clone)]
pub struct Instance {
    pub seed: u64,
    pub family: IndexedFamily<crate::logic::Value>,
    pub filter: Filter,
    pub formula: ContFormula,
}

/// Draws a family and a filter over `vocab` from `rng`.
pub fn gen_family<R: rand::Rng>(
    rng: &mut R,
    spec: &InstanceSpec,
    vocab: &Vocabulary,
) -> Result<(IndexedFamily<crate::logic::Value>, Filter), HarnessError> {
    let n = rng.gen_range(spec.index_set.0..=spec.index_set.1);
    let members = (0..n)
        .map(|_| {
            let size = rng.gen_range(spec.universe.0..=spec.universe.1);
            gen::gen_structure(rng, vocab, size, spec.grid())
        })
        .collect();
    let family = IndexedFamily::new(members)?;
    let filter = match &spec.filter {
        Some(f) => f.resolve(n)?,
        None => gen::gen_filter(rng, n),
    };
    Ok((family, filter))
}

/// The instance of trial `trial`, deterministic in the master seed of `spec`.
pub fn gen_instance(spec: &InstanceSpec, trial: usize) -> Result<Instance, HarnessError> {
    gen_instance_from_seed(spec, trial_seed(spec.seed, trial))
}

/// The instance drawn from a recorded trial seed.
pub fn gen_instance_from_seed(spec: &InstanceSpec, seed: u64) -> Result<Instance, HarnessError> {
    spec.validate()?;
    if spec.class.is_first_order() {
        return Err(HarnessError::BadSpec(
            "instances carry continuous sentences".into(),
        ));
    }
    let mut rng = rng_for(seed);
    let vocab = spec.vocabulary();
    let (family, filter) = gen_family(&mut rng, spec, &vocab)?;
    let formula = gen::gen_cont_sentence(&mut rng, &vocab, spec.grid(), spec.class, spec.shape());
    Ok(Instance {
        seed,
        family,
        filter,
        formula,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::classify_cont;

    #[test]
    fn instances_are_deterministic() {
        let spec = InstanceSpec::default();
        let a = gen_instance(&spec, 7).unwrap();
        let b = gen_instance(&spec, 7).unwrap();
        assert_eq!(a.family, b.family);
        assert_eq!(a.filter, b.filter);
        assert_eq!(a.formula, b.formula);
        let c = gen_instance_from_seed(&spec, a.seed).unwrap();
        assert_eq!(c.formula, a.formula);
        assert_ne!(trial_seed(0, 0), trial_seed(0, 1));
    }

    #[test]
    fn conditional_instances_classify() {
        let spec = InstanceSpec::default();
        for t in 0..200 {
            let inst = gen_instance(&spec, t).unwrap();
            assert!(
                classify_cont(&inst.formula).is("conditional"),
                "{}",
                inst.formula
            );
            assert!(inst.formula.is_sentence(), "{}", inst.formula);
            let grid = spec.grid();
            for m in inst.family.members() {
                for p in 0..m.vocabulary().predicates().len() {
                    assert!(m.pred_table(p).iter().all(|v| grid.values().contains(v)));
                }
            }
        }
    }

    #[test]
    fn spec_validation() {
        let mut spec = InstanceSpec {
            universe: (0, 2),
            ..Default::default()
        };
        assert!(spec.validate().is_err());
        spec.universe = (1, 20);
        spec.index_set = (1, 3);
        assert!(spec.validate().is_err());
        spec.universe = (1, 3);
        spec.predicate_arities.clear();
        assert!(spec.validate().is_err());
        assert_eq!("horn".parse::<FormulaClass>().unwrap(), FormulaClass::Horn);
    }
}
