use rayon::prelude::*;
use thiserror::Error;

use super::filter::{limsup, Filter};
use crate::logic::{Value, Vocabulary};
use crate::structures::{
    quotient_structure, reduce_structure, tuple_at, tuple_count, tuple_index, Partition,
    QuotientMap, Structure, StructureError,
};

/// Default bound on the number of elements of a cartesian product.
pub const DEFAULT_MAX_PRODUCT_SIZE: usize = 4096;

/// Bound on the number of entries of any single product table.
const MAX_TABLE_ENTRIES: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("family must be nonempty")]
    EmptyFamily,
    #[error("factors have different vocabularies")]
    VocabularyMismatch,
    #[error("filter is on {filter} indices but the family has {family}")]
    IndexMismatch { filter: usize, family: usize },
    #[error("product has {size} elements, above the bound of {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// Structures over one vocabulary, indexed by `0..len`.
#[derive(Clone, PartialEq, Eq)]
pub struct IndexedFamily<T> {
    members: Vec<Structure<T>>,
}

impl<T: Clone> IndexedFamily<T> {
    pub fn new(members: Vec<Structure<T>>) -> Result<Self, ProductError> {
        let first = members.first().ok_or(ProductError::EmptyFamily)?;
        if members.iter().any(|m| m.vocabulary() != first.vocabulary()) {
            return Err(ProductError::VocabularyMismatch);
        }
        Ok(IndexedFamily { members })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn get(&self, i: usize) -> &Structure<T> {
        &self.members[i]
    }

    pub fn members(&self) -> &[Structure<T>] {
        &self.members
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        self.members[0].vocabulary()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.size()).collect()
    }

    /// Number of elements of the cartesian product, or `None` on overflow.
    pub fn product_size(&self) -> Option<usize> {
        self.members
            .iter()
            .try_fold(1usize, |acc, m| acc.checked_mul(m.size()))
    }

    /// The subfamily at the given indices, in order.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self, ProductError> {
        Self::new(indices.iter().map(|&i| self.members[i].clone()).collect())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&Structure<T>) -> Structure<U>) -> IndexedFamily<U> {
        IndexedFamily {
            members: self.members.iter().map(f).collect(),
        }
    }
}

impl<T: Clone + std::fmt::Display> std::fmt::Debug for IndexedFamily<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(&self.members).finish()
    }
}

/// Mixed-radix coordinates of product elements, first factor most
/// significant.
#[derive(Debug, Clone)]
pub struct ProductIndex {
    sizes: Vec<usize>,
}

impl ProductIndex {
    pub fn new(sizes: Vec<usize>) -> Self {
        ProductIndex { sizes }
    }

    pub fn size(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn coords(&self, mut e: usize) -> Vec<usize> {
        let mut out = vec![0; self.sizes.len()];
        for (slot, &n) in out.iter_mut().zip(&self.sizes).rev() {
            *slot = e % n;
            e /= n;
        }
        out
    }

    pub fn element(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .zip(&self.sizes)
            .fold(0, |acc, (&c, &n)| acc * n + c)
    }
}

fn check_family<T: Clone>(
    fam: &IndexedFamily<T>,
    f: &Filter,
    cap: usize,
) -> Result<ProductIndex, ProductError> {
    if f.index_count() != fam.len() {
        return Err(ProductError::IndexMismatch {
            filter: f.index_count(),
            family: fam.len(),
        });
    }
    let size = fam.product_size().unwrap_or(usize::MAX);
    if size > cap {
        return Err(ProductError::TooLarge { size, cap });
    }
    for s in fam
        .vocabulary()
        .predicates()
        .iter()
        .chain(fam.vocabulary().functions())
    {
        if size
            .checked_pow(s.arity as u32)
            .is_none_or(|n| n > MAX_TABLE_ENTRIES)
        {
            return Err(ProductError::TooLarge { size, cap });
        }
    }
    Ok(ProductIndex::new(fam.sizes()))
}

/// Cartesian product with coordinatewise functions and constants and
/// predicate values combined across factors by `combine`.
fn cartesian<T: Clone + Send + Sync, U: Clone + Send>(
    fam: &IndexedFamily<T>,
    idx: &ProductIndex,
    combine: impl Fn(&[T]) -> U + Sync,
) -> Result<Structure<U>, ProductError> {
    let vocab = fam.vocabulary();
    let size = idx.size();
    let coords: Vec<Vec<usize>> = (0..size).map(|e| idx.coords(e)).collect();
    let preds = vocab
        .predicates()
        .iter()
        .enumerate()
        .map(|(p, s)| {
            (0..tuple_count(size, s.arity))
                .into_par_iter()
                .map(|k| {
                    let t = tuple_at(size, s.arity, k);
                    let vals: Vec<T> = fam
                        .members()
                        .iter()
                        .enumerate()
                        .map(|(i, m)| {
                            let args: Vec<usize> = t.iter().map(|&e| coords[e][i]).collect();
                            m.pred_table(p)[tuple_index(m.size(), &args)].clone()
                        })
                        .collect();
                    combine(&vals)
                })
                .collect()
        })
        .collect();
    let funcs = vocab
        .functions()
        .iter()
        .enumerate()
        .map(|(g, s)| {
            (0..tuple_count(size, s.arity))
                .into_par_iter()
                .map(|k| {
                    let t = tuple_at(size, s.arity, k);
                    let image: Vec<usize> = fam
                        .members()
                        .iter()
                        .enumerate()
                        .map(|(i, m)| {
                            m.func(g, &t.iter().map(|&e| coords[e][i]).collect::<Vec<_>>())
                        })
                        .collect();
                    idx.element(&image)
                })
                .collect()
        })
        .collect();
    let consts = (0..vocab.constants().len())
        .map(|c| {
            idx.element(
                &fam.members()
                    .iter()
                    .map(|m| m.constant(c))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    Ok(Structure::new(vocab.clone(), size, preds, funcs, consts)?)
}

/// The cartesian product with atomic values `limsup_F` of the coordinate
/// values.
pub fn pre_reduced_product(
    fam: &IndexedFamily<Value>,
    f: &Filter,
    cap: usize,
) -> Result<Structure<Value>, ProductError> {
    let idx = check_family(fam, f, cap)?;
    cartesian(fam, &idx, |vals| limsup(f, vals))
}

/// The reduction of the pre-reduced product, with the class map.
pub fn reduced_product(
    fam: &IndexedFamily<Value>,
    f: &Filter,
    cap: usize,
) -> Result<(Structure<Value>, QuotientMap), ProductError> {
    let pre = pre_reduced_product(fam, f, cap)?;
    Ok(reduce_structure(&pre)?)
}

pub fn direct_product(
    fam: &IndexedFamily<Value>,
    cap: usize,
) -> Result<(Structure<Value>, QuotientMap), ProductError> {
    reduced_product(
        fam,
        &Filter::full(fam.len()).expect("family is nonempty"),
        cap,
    )
}

pub fn ultraproduct(
    fam: &IndexedFamily<Value>,
    i: usize,
    cap: usize,
) -> Result<(Structure<Value>, QuotientMap), ProductError> {
    let u = Filter::principal(fam.len(), i).map_err(|_| ProductError::IndexMismatch {
        filter: i + 1,
        family: fam.len(),
    })?;
    reduced_product(fam, &u, cap)
}

/// The classical reduced product: the cartesian product modulo agreement on
/// a filter set, with an atom true iff it holds on a filter set.
pub fn fo_reduced_product(
    fam: &IndexedFamily<bool>,
    f: &Filter,
    cap: usize,
) -> Result<(Structure<bool>, QuotientMap), ProductError> {
    let idx = check_family(fam, f, cap)?;
    let pre = cartesian(fam, &idx, |vals| f.holds_on(|i| vals[i]))?;
    let labels: Vec<Vec<usize>> = (0..idx.size())
        .map(|e| {
            let c = idx.coords(e);
            f.kernel().iter().map(|&i| c[i]).collect()
        })
        .collect();
    let part = Partition::from_labels(&labels);
    let k = quotient_structure(&pre, &part)?;
    Ok((k, part))
}
