//! Leibniz equality by partition refinement.
//!
//! Two elements are Leibniz equal when every atomic formula with one free
//! variable and element parameters takes the same value at both. The
//! relation is computed as a greatest fixpoint: start from "same predicate
//! rows under every single-slot substitution" and refine by requiring that
//! every function, with `a` or `b` placed in one slot and the other slots
//! fixed, sends them to related elements.
//!
//! Atoms with several occurrences of the distinguished variable, such as
//! `P(x, F(x))`, need no separate treatment. Replace the occurrences one at a
//! time: each step changes a single slot of a single symbol, so the fixpoint
//! relation relates the values before and after the step, and transitivity
//! closes the chain. The brute-force oracle in the `oracle` module checks
//! this against direct enumeration of atomic formulas.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use super::{tuple_at, tuple_count, tuple_index, Structure, StructureError};

/// A partition of `0..n` with blocks numbered by first appearance.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    class_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

/// The class map onto a quotient universe: element `a` goes to block
/// `class_of(a)`.
pub type QuotientMap = Partition;

impl Partition {
    /// Canonicalizes arbitrary labels: `a` and `b` share a block iff their
    /// labels are equal.
    pub fn from_labels<L: Eq + Hash>(labels: &[L]) -> Self {
        let mut ids: HashMap<&L, usize> = HashMap::new();
        let mut class_of = Vec::with_capacity(labels.len());
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (a, l) in labels.iter().enumerate() {
            let next = ids.len();
            let id = *ids.entry(l).or_insert(next);
            if id == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[id].push(a);
            class_of.push(id);
        }
        Partition { class_of, blocks }
    }

    pub fn discrete(n: usize) -> Self {
        Partition {
            class_of: (0..n).collect(),
            blocks: (0..n).map(|a| vec![a]).collect(),
        }
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    pub fn map(&self) -> &[usize] {
        &self.class_of
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.class_of.len()
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    pub fn representative(&self, block: usize) -> usize {
        self.blocks[block][0]
    }
}

/// For each element, the sequence of keys obtained by placing it in every
/// slot of every table, other slots ranging over all tuples.
fn slot_rows<V: Clone>(n: usize, tables: &[(usize, &[V])]) -> Vec<Vec<V>> {
    let mut rows: Vec<Vec<V>> = vec![Vec::new(); n];
    for &(arity, table) in tables {
        for slot in 0..arity {
            for rest in 0..tuple_count(n, arity - 1) {
                let mut t = tuple_at(n, arity - 1, rest);
                t.insert(slot, 0);
                for (a, row) in rows.iter_mut().enumerate() {
                    t[slot] = a;
                    row.push(table[tuple_index(n, &t)].clone());
                }
            }
        }
    }
    rows
}

/// The Leibniz partition of `m`.
pub fn leibniz_partition<T: Clone + Eq + Hash>(m: &Structure<T>) -> Partition {
    let n = m.size();
    let vocab = m.vocabulary();
    let pred_tables: Vec<(usize, &[T])> = vocab
        .predicates()
        .iter()
        .enumerate()
        .map(|(p, s)| (s.arity, m.pred_table(p)))
        .collect();
    let mut part = Partition::from_labels(&slot_rows(n, &pred_tables));

    let func_tables: Vec<(usize, &[usize])> = vocab
        .functions()
        .iter()
        .enumerate()
        .map(|(g, s)| (s.arity, m.func_table(g)))
        .collect();
    let images = slot_rows(n, &func_tables);
    // Each round either splits a block or stops, so at most n - 1 rounds.
    loop {
        let labels: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|a| {
                (
                    part.class_of(a),
                    images[a].iter().map(|&b| part.class_of(b)).collect(),
                )
            })
            .collect();
        let next = Partition::from_labels(&labels);
        if next.num_blocks() == part.num_blocks() {
            return part;
        }
        part = next;
    }
}

/// The quotient of `m` by `part`, taking block representatives. Fails if a
/// table is not constant on blocks.
pub fn quotient_structure<T: Clone + Eq>(
    m: &Structure<T>,
    part: &Partition,
) -> Result<Structure<T>, StructureError> {
    let n = m.size();
    let k = part.num_blocks();
    let vocab = m.vocabulary();
    let mut preds = Vec::new();
    for (p, s) in vocab.predicates().iter().enumerate() {
        let mut table: Vec<Option<T>> = vec![None; tuple_count(k, s.arity)];
        for (i, v) in m.pred_table(p).iter().enumerate() {
            let t = tuple_at(n, s.arity, i);
            let j = tuple_index(k, &t.iter().map(|&a| part.class_of(a)).collect::<Vec<_>>());
            match &table[j] {
                Some(w) if w != v => {
                    return Err(StructureError::InconsistentReduction(s.name.clone()))
                }
                _ => table[j] = Some(v.clone()),
            }
        }
        preds.push(table.into_iter().map(Option::unwrap).collect());
    }
    let mut funcs = Vec::new();
    for (g, s) in vocab.functions().iter().enumerate() {
        let mut table: Vec<Option<usize>> = vec![None; tuple_count(k, s.arity)];
        for (i, &b) in m.func_table(g).iter().enumerate() {
            let t = tuple_at(n, s.arity, i);
            let j = tuple_index(k, &t.iter().map(|&a| part.class_of(a)).collect::<Vec<_>>());
            let img = part.class_of(b);
            match table[j] {
                Some(w) if w != img => {
                    return Err(StructureError::InconsistentReduction(s.name.clone()))
                }
                _ => table[j] = Some(img),
            }
        }
        funcs.push(table.into_iter().map(Option::unwrap).collect());
    }
    let consts = (0..vocab.constants().len())
        .map(|c| part.class_of(m.constant(c)))
        .collect();
    Structure::new(vocab.clone(), k, preds, funcs, consts)
}

/// The reduction of `m` together with its class map.
pub fn reduce_structure<T: Clone + Eq + Hash>(
    m: &Structure<T>,
) -> Result<(Structure<T>, QuotientMap), StructureError> {
    let part = leibniz_partition(m);
    let reduced = quotient_structure(m, &part)?;
    Ok((reduced, part))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{Value, Vocabulary};

    fn q(n: i64, d: i64) -> Value {
        Value::new(n, d).unwrap()
    }

    fn pf_example() -> Structure<Value> {
        // P = (0, 0, 1); F(a) = a, F(b) = c, F(c) = c
        let v = Vocabulary::new()
            .with_predicate("P", 1)
            .and_then(|v| v.with_function("F", 1))
            .unwrap();
        let p = [Value::ZERO, Value::ZERO, Value::ONE];
        let f = [0, 2, 2];
        Structure::from_fn(v, 3, |_, t| p[t[0]], |_, t| f[t[0]], |_| 0).unwrap()
    }

    #[test]
    fn identical_rows_collapse() {
        let v = Vocabulary::new().with_predicate("P", 1).unwrap();
        let m = Structure::from_fn(v, 2, |_, _| q(1, 2), |_, _| 0, |_| 0).unwrap();
        assert_eq!(leibniz_partition(&m).num_blocks(), 1);
    }

    #[test]
    fn functions_separate() {
        let m = pf_example();
        let part = leibniz_partition(&m);
        assert!(!part.same(0, 1));
        assert!(!part.same(1, 2));
        assert_eq!(reduce_structure(&m).unwrap().0.size(), 3);
    }

    #[test]
    fn nullary_vocabulary_gives_one_block() {
        let v = Vocabulary::new()
            .with_predicate("A", 0)
            .and_then(|v| v.with_predicate("B", 0))
            .unwrap();
        let m = Structure::from_fn(v, 4, |p, _| q(p as i64, 2), |_, _| 0, |_| 0).unwrap();
        assert_eq!(leibniz_partition(&m).num_blocks(), 1);
    }

    #[test]
    fn binary_slots_are_separate() {
        // R(x, y) = [x == 0]; elements 1 and 2 agree in every slot.
        let v = Vocabulary::new().with_predicate("R", 2).unwrap();
        let m = Structure::from_fn(
            v,
            3,
            |_, t| if t[0] == 0 { Value::ZERO } else { Value::ONE },
            |_, _| 0,
            |_| 0,
        )
        .unwrap();
        let part = leibniz_partition(&m);
        assert!(part.same(1, 2));
        assert!(!part.same(0, 1));
        let (r, qm) = reduce_structure(&m).unwrap();
        assert_eq!(r.size(), 2);
        assert_eq!(qm.map(), &[0, 1, 1]);
    }

    #[test]
    fn reduction_is_idempotent() {
        let v = Vocabulary::new()
            .with_predicate("P", 1)
            .and_then(|v| v.with_function("F", 1))
            .unwrap();
        let p = [q(1, 2), q(1, 2), Value::ZERO, Value::ZERO];
        let f = [1, 0, 3, 2];
        let m = Structure::from_fn(v, 4, |_, t| p[t[0]], |_, t| f[t[0]], |_| 0).unwrap();
        let (r, _) = reduce_structure(&m).unwrap();
        assert_eq!(r.size(), 2);
        let (rr, qm) = reduce_structure(&r).unwrap();
        assert_eq!(rr, r);
        assert!(qm.is_discrete());
    }

    #[test]
    fn inconsistent_quotient_is_rejected() {
        let m = pf_example();
        let bad = Partition::from_labels(&[0, 0, 1]);
        assert!(matches!(
            quotient_structure(&m, &bad),
            Err(StructureError::InconsistentReduction(_))
        ));
    }
}
