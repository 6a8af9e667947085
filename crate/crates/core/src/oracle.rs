//! Slow reference computations used to cross-check the fast ones.
//!
//! Each function here follows a definition directly, by enumeration, and
//! is only meant for small inputs.

use std::collections::BTreeSet;

use crate::logic::Value;
use crate::structures::{tuple_count, tuples, Partition, Structure};

/// Unary term functions of depth at most `depth`: the identity and every
/// element parameter, closed under the function symbols. Each is given by
/// its value table.
pub fn unary_term_functions<T: Clone>(m: &Structure<T>, depth: usize) -> BTreeSet<Vec<usize>> {
    let n = m.size();
    let mut terms: BTreeSet<Vec<usize>> = BTreeSet::new();
    terms.insert((0..n).collect());
    for e in 0..n {
        terms.insert(vec![e; n]);
    }
    for _ in 0..depth {
        let current: Vec<Vec<usize>> = terms.iter().cloned().collect();
        let mut grown = terms.clone();
        for (g, s) in m.vocabulary().functions().iter().enumerate() {
            for i in 0..tuple_count(current.len(), s.arity) {
                let picks = crate::structures::tuple_at(current.len(), s.arity, i);
                let f: Vec<usize> = (0..n)
                    .map(|a| {
                        let args: Vec<usize> = picks.iter().map(|&k| current[k][a]).collect();
                        m.func(g, &args)
                    })
                    .collect();
                grown.insert(f);
            }
        }
        if grown.len() == terms.len() {
            break;
        }
        terms = grown;
    }
    terms
}

/// Leibniz equality by enumerating every atomic formula in one variable
/// with term depth at most `depth`.
pub fn leibniz_by_enumeration<T: Clone + Eq + std::hash::Hash>(
    m: &Structure<T>,
    depth: usize,
) -> Partition {
    let n = m.size();
    let terms: Vec<Vec<usize>> = unary_term_functions(m, depth).into_iter().collect();
    let mut labels: Vec<Vec<T>> = vec![Vec::new(); n];
    for (p, s) in m.vocabulary().predicates().iter().enumerate() {
        for picks in tuples(terms.len(), s.arity) {
            for (a, label) in labels.iter_mut().enumerate() {
                let args: Vec<usize> = picks.iter().map(|&k| terms[k][a]).collect();
                label.push(m.pred(p, &args).clone());
            }
        }
    }
    Partition::from_labels(&labels)
}

/// `inf` over every `J` in the filter with kernel `kernel` of `sup_{i in J} g(i)`,
/// enumerating all supersets of the kernel.
pub fn limsup_by_definition(kernel: &[usize], g: &[Value]) -> Value {
    let n = g.len();
    let base: u64 = kernel.iter().map(|&i| 1u64 << i).sum();
    let mut best = Value::ONE;
    for mask in 0u64..(1 << n) {
        if mask & base != base {
            continue;
        }
        let sup = (0..n)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| g[i])
            .max()
            .unwrap_or(Value::ZERO);
        best = best.min(sup);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Vocabulary;
    use crate::structures::leibniz_partition;

    #[test]
    fn separating_atom_has_depth_one() {
        let v = Vocabulary::new()
            .with_predicate("P", 1)
            .and_then(|v| v.with_function("F", 1))
            .unwrap();
        let p = [Value::ZERO, Value::ZERO, Value::ONE];
        let f = [0, 2, 2];
        let m = Structure::from_fn(v, 3, |_, t| p[t[0]], |_, t| f[t[0]], |_| 0).unwrap();
        assert!(leibniz_by_enumeration(&m, 0).same(0, 1));
        assert!(!leibniz_by_enumeration(&m, 1).same(0, 1));
        assert_eq!(leibniz_by_enumeration(&m, 3), leibniz_partition(&m));
    }

    #[test]
    fn limsup_definition() {
        let g = [Value::new(3, 4).unwrap(), Value::HALF];
        assert_eq!(limsup_by_definition(&[1], &g), Value::HALF);
        assert_eq!(limsup_by_definition(&[0, 1], &g), Value::new(3, 4).unwrap());
    }
}
