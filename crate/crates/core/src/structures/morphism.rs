use std::fmt;

use serde::{Deserialize, Serialize};

use super::{tuples, Structure};
use crate::logic::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MorphismKind {
    /// Commutes with functions and constants and preserves every predicate
    /// value exactly. Need not be injective.
    Embedding,
    /// Onto, commutes with functions and constants, and `P^M >= P^N`
    /// pointwise.
    Homomorphism,
}

/// The first failure found by [`check_morphism`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MorphismViolation {
    VocabularyMismatch,
    WrongDomain {
        expected: usize,
        found: usize,
    },
    OutOfRange {
        elem: usize,
        image: usize,
    },
    NotOnto {
        missing: usize,
    },
    Constant {
        name: String,
    },
    Function {
        name: String,
        args: Vec<usize>,
    },
    Predicate {
        name: String,
        args: Vec<usize>,
        source: Value,
        target: Value,
    },
}

impl fmt::Display for MorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use MorphismViolation::*;
        match self {
            VocabularyMismatch => write!(f, "structures have different vocabularies"),
            WrongDomain { expected, found } => {
                write!(f, "map has {found} entries, source has {expected} elements")
            }
            OutOfRange { elem, image } => {
                write!(f, "element {elem} maps to {image}, outside the target")
            }
            NotOnto { missing } => write!(f, "target element {missing} is not hit"),
            Constant { name } => write!(f, "constant {name} is not preserved"),
            Function { name, args } => write!(f, "function {name} does not commute at {args:?}"),
            Predicate {
                name,
                args,
                source,
                target,
            } => {
                write!(
                    f,
                    "predicate {name} at {args:?}: source {source}, target {target}"
                )
            }
        }
    }
}

/// Checks that `h` (indexed by elements of `m`) is a morphism of the given
/// kind from `m` to `n`.
pub fn check_morphism(
    kind: MorphismKind,
    h: &[usize],
    m: &Structure<Value>,
    n: &Structure<Value>,
) -> Result<(), MorphismViolation> {
    use MorphismViolation::*;
    if m.vocabulary() != n.vocabulary() {
        return Err(VocabularyMismatch);
    }
    if h.len() != m.size() {
        return Err(WrongDomain {
            expected: m.size(),
            found: h.len(),
        });
    }
    if let Some((elem, &image)) = h.iter().enumerate().find(|&(_, &b)| b >= n.size()) {
        return Err(OutOfRange { elem, image });
    }
    if kind == MorphismKind::Homomorphism {
        let mut hit = vec![false; n.size()];
        for &b in h {
            hit[b] = true;
        }
        if let Some(missing) = hit.iter().position(|&x| !x) {
            return Err(NotOnto { missing });
        }
    }
    let vocab = m.vocabulary();
    for (c, name) in vocab.constants().iter().enumerate() {
        if h[m.constant(c)] != n.constant(c) {
            return Err(Constant { name: name.clone() });
        }
    }
    for (g, s) in vocab.functions().iter().enumerate() {
        for t in tuples(m.size(), s.arity) {
            let image: Vec<usize> = t.iter().map(|&a| h[a]).collect();
            if h[m.func(g, &t)] != n.func(g, &image) {
                return Err(Function {
                    name: s.name.clone(),
                    args: t,
                });
            }
        }
    }
    for (p, s) in vocab.predicates().iter().enumerate() {
        for t in tuples(m.size(), s.arity) {
            let image: Vec<usize> = t.iter().map(|&a| h[a]).collect();
            let (source, target) = (*m.pred(p, &t), *n.pred(p, &image));
            let ok = match kind {
                MorphismKind::Embedding => source == target,
                MorphismKind::Homomorphism => source >= target,
            };
            if !ok {
                return Err(Predicate {
                    name: s.name.clone(),
                    args: t,
                    source,
                    target,
                });
            }
        }
    }
    Ok(())
}
