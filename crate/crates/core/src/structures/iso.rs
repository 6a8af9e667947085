use super::{
    check_morphism, reduce_structure, tuple_at, tuple_count, tuple_index, MorphismKind, Structure,
};
use crate::logic::Value;

/// Sorted predicate values seen by `a` in each slot, plus the constants
/// naming it. Isomorphisms preserve this.
fn invariants(m: &Structure<Value>) -> Vec<Vec<Vec<Value>>> {
    let n = m.size();
    let mut out = vec![Vec::new(); n];
    for (p, s) in m.vocabulary().predicates().iter().enumerate() {
        for slot in 0..s.arity {
            let mut per_elem = vec![Vec::new(); n];
            for i in 0..tuple_count(n, s.arity) {
                let t = tuple_at(n, s.arity, i);
                per_elem[t[slot]].push(m.pred_table(p)[i]);
            }
            for (a, mut vals) in per_elem.into_iter().enumerate() {
                vals.sort();
                out[a].push(vals);
            }
        }
    }
    for c in 0..m.vocabulary().constants().len() {
        for (a, inv) in out.iter_mut().enumerate() {
            let named = if m.constant(c) == a {
                Value::ZERO
            } else {
                Value::ONE
            };
            inv.push(vec![named]);
        }
    }
    out
}

struct Search<'a> {
    m: &'a Structure<Value>,
    n: &'a Structure<Value>,
    inv_m: Vec<Vec<Vec<Value>>>,
    inv_n: Vec<Vec<Vec<Value>>>,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    assigned: Vec<usize>,
}

impl Search<'_> {
    /// Every table entry whose arguments are all assigned agrees, and every
    /// function value already assigned commutes.
    fn consistent(&self) -> bool {
        let k = self.assigned.len();
        let size = self.m.size();
        let vocab = self.m.vocabulary();
        for (p, s) in vocab.predicates().iter().enumerate() {
            for i in 0..tuple_count(k, s.arity) {
                let t: Vec<usize> = tuple_at(k, s.arity, i)
                    .into_iter()
                    .map(|j| self.assigned[j])
                    .collect();
                let image: Vec<usize> = t.iter().map(|&a| self.map[a].unwrap()).collect();
                if self.m.pred_table(p)[tuple_index(size, &t)] != *self.n.pred(p, &image) {
                    return false;
                }
            }
        }
        for (g, s) in vocab.functions().iter().enumerate() {
            for i in 0..tuple_count(k, s.arity) {
                let t: Vec<usize> = tuple_at(k, s.arity, i)
                    .into_iter()
                    .map(|j| self.assigned[j])
                    .collect();
                let image: Vec<usize> = t.iter().map(|&a| self.map[a].unwrap()).collect();
                let target = self.n.func(g, &image);
                match self.map[self.m.func(g, &t)] {
                    Some(b) if b != target => return false,
                    None if self.used[target] => return false,
                    _ => {}
                }
            }
        }
        true
    }

    fn extend(&mut self, a: usize) -> bool {
        if a == self.m.size() {
            return true;
        }
        for b in 0..self.n.size() {
            if self.used[b] || self.inv_m[a] != self.inv_n[b] {
                continue;
            }
            self.map[a] = Some(b);
            self.used[b] = true;
            self.assigned.push(a);
            if self.consistent() && self.extend(a + 1) {
                return true;
            }
            self.assigned.pop();
            self.used[b] = false;
            self.map[a] = None;
        }
        false
    }
}

/// An isomorphism between the reductions of `m` and `n`, as a map from the
/// universe of `reduce(m)` to that of `reduce(n)`.
pub fn find_isomorphism(m: &Structure<Value>, n: &Structure<Value>) -> Option<Vec<usize>> {
    if m.vocabulary() != n.vocabulary() {
        return None;
    }
    let (rm, _) = reduce_structure(m).ok()?;
    let (rn, _) = reduce_structure(n).ok()?;
    if rm.size() != rn.size() {
        return None;
    }
    let (inv_m, inv_n) = (invariants(&rm), invariants(&rn));
    let mut sorted_m = inv_m.clone();
    let mut sorted_n = inv_n.clone();
    sorted_m.sort();
    sorted_n.sort();
    if sorted_m != sorted_n {
        return None;
    }
    let size = rm.size();
    let mut search = Search {
        m: &rm,
        n: &rn,
        inv_m,
        inv_n,
        map: vec![None; size],
        used: vec![false; size],
        assigned: Vec::new(),
    };
    if !search.extend(0) {
        return None;
    }
    let h: Vec<usize> = search.map.into_iter().map(Option::unwrap).collect();
    debug_assert_eq!(
        check_morphism(MorphismKind::Embedding, &h, &rm, &rn),
        Ok(())
    );
    Some(h)
}

pub fn is_isomorphic(m: &Structure<Value>, n: &Structure<Value>) -> bool {
    find_isomorphism(m, n).is_some()
}
