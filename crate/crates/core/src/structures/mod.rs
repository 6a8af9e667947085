//! Finite structures: general (`[0,1]`-valued) and first-order (boolean).

mod eval;
mod io;
mod iso;
mod leibniz;
mod morphism;

pub use eval::{eval_fo, eval_formula, Assignment, EvalError};
pub use io::{parse_structure, read_structure, write_structure, StructureFileError};
pub use iso::{find_isomorphism, is_isomorphic};
pub use leibniz::{
    leibniz_partition, quotient_structure, reduce_structure, Partition, QuotientMap,
};
pub use morphism::{check_morphism, MorphismKind, MorphismViolation};

use std::fmt;

use thiserror::Error;

use crate::logic::{Value, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("universe must be nonempty")]
    EmptyUniverse,
    #[error("table for `{0}` has the wrong shape")]
    BadTable(String),
    #[error("`{name}` maps to element {elem}, outside the universe of size {size}")]
    ElementOutOfRange {
        name: String,
        elem: usize,
        size: usize,
    },
    #[error("vocabularies differ")]
    VocabularyMismatch,
    #[error("not a sub-vocabulary")]
    NotSubvocabulary,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("reduction is inconsistent on `{0}`; the Leibniz partition is not a congruence")]
    InconsistentReduction(String),
}

/// A finite interpretation of a vocabulary over the universe `0..size`.
///
/// Predicate tables hold one `T` per argument tuple, in row-major order with
/// the first argument most significant. `GeneralStructure` and
/// `FOStructure` are the two instantiations used throughout the crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Structure<T> {
    vocab: Vocabulary,
    size: usize,
    preds: Vec<Vec<T>>,
    funcs: Vec<Vec<usize>>,
    consts: Vec<usize>,
}

pub type GeneralStructure = Structure<Value>;
pub type FOStructure = Structure<bool>;

/// `size^arity`, the number of argument tuples.
pub fn tuple_count(size: usize, arity: usize) -> usize {
    size.pow(arity as u32)
}

/// Row-major index of `tuple`.
pub fn tuple_index(size: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &a| acc * size + a)
}

/// Inverse of [`tuple_index`].
pub fn tuple_at(size: usize, arity: usize, mut index: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % size;
        index /= size;
    }
    out
}

/// All tuples of the given arity in row-major order.
pub fn tuples(size: usize, arity: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..tuple_count(size, arity)).map(move |i| tuple_at(size, arity, i))
}

impl<T: Clone> Structure<T> {
    pub fn new(
        vocab: Vocabulary,
        size: usize,
        preds: Vec<Vec<T>>,
        funcs: Vec<Vec<usize>>,
        consts: Vec<usize>,
    ) -> Result<Self, StructureError> {
        if size == 0 {
            return Err(StructureError::EmptyUniverse);
        }
        if preds.len() != vocab.predicates().len()
            || funcs.len() != vocab.functions().len()
            || consts.len() != vocab.constants().len()
        {
            return Err(StructureError::BadTable("<vocabulary>".into()));
        }
        for (sym, table) in vocab.predicates().iter().zip(&preds) {
            if table.len() != tuple_count(size, sym.arity) {
                return Err(StructureError::BadTable(sym.name.clone()));
            }
        }
        for (sym, table) in vocab.functions().iter().zip(&funcs) {
            if table.len() != tuple_count(size, sym.arity) {
                return Err(StructureError::BadTable(sym.name.clone()));
            }
            if let Some(&elem) = table.iter().find(|&&e| e >= size) {
                return Err(StructureError::ElementOutOfRange {
                    name: sym.name.clone(),
                    elem,
                    size,
                });
            }
        }
        for (name, &elem) in vocab.constants().iter().zip(&consts) {
            if elem >= size {
                return Err(StructureError::ElementOutOfRange {
                    name: name.clone(),
                    elem,
                    size,
                });
            }
        }
        Ok(Self {
            vocab,
            size,
            preds,
            funcs,
            consts,
        })
    }

    /// Builds every table from closures indexed by symbol position.
    pub fn from_fn(
        vocab: Vocabulary,
        size: usize,
        mut pred: impl FnMut(usize, &[usize]) -> T,
        mut func: impl FnMut(usize, &[usize]) -> usize,
        mut konst: impl FnMut(usize) -> usize,
    ) -> Result<Self, StructureError> {
        let preds = vocab
            .predicates()
            .iter()
            .enumerate()
            .map(|(p, s)| tuples(size, s.arity).map(|t| pred(p, &t)).collect())
            .collect();
        let funcs = vocab
            .functions()
            .iter()
            .enumerate()
            .map(|(g, s)| tuples(size, s.arity).map(|t| func(g, &t)).collect())
            .collect();
        let consts = (0..vocab.constants().len()).map(&mut konst).collect();
        Self::new(vocab, size, preds, funcs, consts)
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn pred_table(&self, p: usize) -> &[T] {
        &self.preds[p]
    }

    pub fn func_table(&self, g: usize) -> &[usize] {
        &self.funcs[g]
    }

    pub fn pred(&self, p: usize, args: &[usize]) -> &T {
        &self.preds[p][tuple_index(self.size, args)]
    }

    pub fn func(&self, g: usize, args: &[usize]) -> usize {
        self.funcs[g][tuple_index(self.size, args)]
    }

    pub fn constant(&self, c: usize) -> usize {
        self.consts[c]
    }

    pub fn pred_by_name(&self, name: &str, args: &[usize]) -> Option<&T> {
        self.vocab.predicate_index(name).map(|p| self.pred(p, args))
    }

    /// The part of `self` over `sub`: same universe, other symbols forgotten.
    pub fn vocabulary_part(&self, sub: &Vocabulary) -> Result<Self, StructureError> {
        if !sub.is_subvocabulary_of(&self.vocab) {
            return Err(StructureError::NotSubvocabulary);
        }
        let preds = sub
            .predicates()
            .iter()
            .map(|s| self.preds[self.vocab.predicate_index(&s.name).unwrap()].clone())
            .collect();
        let funcs = sub
            .functions()
            .iter()
            .map(|s| self.funcs[self.vocab.function_index(&s.name).unwrap()].clone())
            .collect();
        let consts = sub
            .constants()
            .iter()
            .map(|c| self.consts[self.vocab.constant_index(c).unwrap()])
            .collect();
        Self::new(sub.clone(), self.size, preds, funcs, consts)
    }

    /// Same universe and symbol interpretations with every predicate value
    /// passed through `f`.
    pub fn map_values<U: Clone>(&self, mut f: impl FnMut(&T) -> U) -> Structure<U> {
        Structure {
            vocab: self.vocab.clone(),
            size: self.size,
            preds: self
                .preds
                .iter()
                .map(|t| t.iter().map(&mut f).collect())
                .collect(),
            funcs: self.funcs.clone(),
            consts: self.consts.clone(),
        }
    }

    /// Replaces the vocabulary and predicate tables, keeping universe,
    /// functions and constants; used by the threshold translations.
    pub(crate) fn with_predicates<U: Clone>(
        &self,
        vocab: Vocabulary,
        preds: Vec<Vec<U>>,
    ) -> Result<Structure<U>, StructureError> {
        Structure::new(
            vocab,
            self.size,
            preds,
            self.funcs.clone(),
            self.consts.clone(),
        )
    }
}

/// [`Structure::vocabulary_part`] as a free function.
pub fn vocabulary_part<T: Clone>(
    m: &Structure<T>,
    sub: &Vocabulary,
) -> Result<Structure<T>, StructureError> {
    m.vocabulary_part(sub)
}

impl GeneralStructure {
    /// Reads a `{0,1}`-valued general structure as a first-order structure
    /// (`0` is true). Returns `None` if some value is strictly between.
    pub fn to_boolean(&self) -> Option<FOStructure> {
        if self
            .preds
            .iter()
            .flatten()
            .any(|v| *v != Value::ZERO && *v != Value::ONE)
        {
            return None;
        }
        Some(self.map_values(|v| v.is_zero()))
    }
}

impl FOStructure {
    /// The first-order structure viewed as a general structure with truth
    /// values in `{0, 1}`.
    pub fn to_general(&self) -> GeneralStructure {
        self.map_values(|&b| if b { Value::ZERO } else { Value::ONE })
    }
}

impl<T: Clone + fmt::Display> fmt::Display for Structure<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_structure(self))
    }
}

impl<T: Clone + fmt::Display> fmt::Debug for Structure<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_structure(self))
    }
}
