//! Threshold translation between general and first-order structures.
//!
//! Each predicate `P` of a general structure becomes predicates `P_le_r`
//! for the points `r` of a dyadic grid, with `P_le_r(x)` true iff
//! `P(x) <= r`. Grid point `j/2^k` is written `j_2k` in symbol names, for
//! example `P_le_3_8` and `P_le_0`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{LogicError, Value, Vocabulary};
use crate::structures::{leibniz_partition, reduce_structure, tuples, Structure, StructureError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DownUpError {
    #[error("grid exponent must be between 1 and 16")]
    BadGrid,
    #[error("structure is not reduced; reduce it first")]
    NotReduced,
    #[error("predicate `{0}` is not a threshold predicate")]
    NotThreshold(String),
    #[error("thresholds of `{0}` do not match the grid")]
    GridMismatch(String),
    #[error("structure is not increasing: {0}")]
    NotIncreasing(IncreasingViolation),
    #[error(transparent)]
    Vocabulary(#[from] LogicError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// The grid `{j / 2^k : 0 <= j < 2^k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid {
    bits: u32,
}

impl Grid {
    pub const DEFAULT_BITS: u32 = 3;

    pub fn new(bits: u32) -> Result<Self, DownUpError> {
        if (1..=16).contains(&bits) {
            Ok(Grid { bits })
        } else {
            Err(DownUpError::BadGrid)
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn points(&self) -> Vec<Value> {
        (0..(1i64 << self.bits))
            .map(|j| Value::dyadic(j, self.bits))
            .collect()
    }

    /// Grid points together with `1`: the values a round trip preserves.
    pub fn values(&self) -> Vec<Value> {
        let mut v = self.points();
        v.push(Value::ONE);
        v
    }

    pub fn contains(&self, v: Value) -> bool {
        v < Value::ONE && v.denom() <= (1i64 << self.bits)
    }
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            bits: Self::DEFAULT_BITS,
        }
    }
}

pub fn threshold_name(pred: &str, r: Value) -> String {
    if r.is_zero() {
        format!("{pred}_le_0")
    } else {
        format!("{pred}_le_{}_{}", r.numer(), r.denom())
    }
}

/// Splits `P_le_3_8` into `("P", 3/8)`.
pub fn parse_threshold_name(name: &str) -> Option<(&str, Value)> {
    let (base, r) = name.rsplit_once("_le_")?;
    let v = match r.split_once('_') {
        None if r == "0" => Value::ZERO,
        None => return None,
        Some((n, d)) => {
            let (n, d) = (n.parse().ok()?, d.parse().ok()?);
            let v = Value::new(n, d).ok()?;
            // canonical spelling only
            if v.numer() != n || v.denom() != d || v.is_zero() {
                return None;
            }
            v
        }
    };
    (!base.is_empty() && v < Value::ONE).then_some((base, v))
}

/// Same functions and constants; each `n`-ary predicate replaced by its
/// `n`-ary threshold predicates, one per grid point.
pub fn vocab_down(v: &Vocabulary, g: Grid) -> Result<Vocabulary, DownUpError> {
    let mut out = Vocabulary::new();
    for p in v.predicates() {
        for r in g.points() {
            out.add_predicate(&threshold_name(&p.name, r), p.arity)?;
        }
    }
    for f in v.functions() {
        out.add_function(&f.name, f.arity)?;
    }
    for c in v.constants() {
        out.add_constant(c)?;
    }
    Ok(out)
}

/// `M↓`: `P_le_r(x)` holds iff `P(x) <= r`.
pub fn structure_down(m: &Structure<Value>, g: Grid) -> Result<Structure<bool>, DownUpError> {
    if !leibniz_partition(m).is_discrete() {
        return Err(DownUpError::NotReduced);
    }
    threshold_structure(m, g)
}

/// The threshold tables of `m` without the reducedness check.
pub fn threshold_structure(m: &Structure<Value>, g: Grid) -> Result<Structure<bool>, DownUpError> {
    let vocab = vocab_down(m.vocabulary(), g)?;
    let mut preds = Vec::new();
    for (p, s) in m.vocabulary().predicates().iter().enumerate() {
        let table = m.pred_table(p);
        if let Some(v) = table.iter().find(|v| **v != Value::ONE && !g.contains(**v)) {
            log::warn!(
                "{} takes value {v}, off the grid; the round trip will not be exact",
                s.name
            );
        }
        for r in g.points() {
            preds.push(table.iter().map(|v| *v <= r).collect());
        }
    }
    Ok(m.with_predicates(vocab, preds)?)
}

/// A tuple where `P_le_r` holds but `P_le_s` fails although `r < s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncreasingViolation {
    pub lower: String,
    pub upper: String,
    pub args: Vec<usize>,
}

impl std::fmt::Display for IncreasingViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} holds at {:?} but {} does not",
            self.lower, self.args, self.upper
        )
    }
}

/// Threshold predicates grouped by base name, in order of first
/// appearance, each group sorted by threshold.
struct Thresholds {
    bases: Vec<(String, usize, Vec<(Value, usize)>)>,
}

fn thresholds(v: &Vocabulary) -> Result<Thresholds, DownUpError> {
    let mut order: Vec<String> = Vec::new();
    let mut groups: BTreeMap<String, (usize, Vec<(Value, usize)>)> = BTreeMap::new();
    for (i, s) in v.predicates().iter().enumerate() {
        let (base, r) = parse_threshold_name(&s.name)
            .ok_or_else(|| DownUpError::NotThreshold(s.name.clone()))?;
        let entry = groups.entry(base.to_string()).or_insert_with(|| {
            order.push(base.to_string());
            (s.arity, Vec::new())
        });
        if entry.0 != s.arity {
            return Err(DownUpError::NotThreshold(s.name.clone()));
        }
        entry.1.push((r, i));
    }
    let bases = order
        .into_iter()
        .map(|b| {
            let (arity, mut ts) = groups.remove(&b).unwrap();
            ts.sort();
            (b, arity, ts)
        })
        .collect();
    Ok(Thresholds { bases })
}

/// The first failure of monotonicity in the thresholds, if any.
pub fn increasing_violation(
    k: &Structure<bool>,
) -> Result<Option<IncreasingViolation>, DownUpError> {
    let th = thresholds(k.vocabulary())?;
    let names = k.vocabulary().predicates();
    for (_, arity, ts) in &th.bases {
        for w in ts.windows(2) {
            let (lo, hi) = (w[0].1, w[1].1);
            for t in tuples(k.size(), *arity) {
                if *k.pred(lo, &t) && !*k.pred(hi, &t) {
                    return Ok(Some(IncreasingViolation {
                        lower: names[lo].name.clone(),
                        upper: names[hi].name.clone(),
                        args: t,
                    }));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_increasing(k: &Structure<bool>) -> Result<bool, DownUpError> {
    Ok(increasing_violation(k)?.is_none())
}

/// `K↑` before reduction: `P(x)` is the least grid point `s` with
/// `P_le_s(x)`, or `1` if there is none.
pub fn structure_up_unreduced(
    k: &Structure<bool>,
    g: Grid,
) -> Result<Structure<Value>, DownUpError> {
    let th = thresholds(k.vocabulary())?;
    if let Some(v) = increasing_violation(k)? {
        return Err(DownUpError::NotIncreasing(v));
    }
    let grid = g.points();
    let mut vocab = Vocabulary::new();
    let mut preds = Vec::new();
    for (base, arity, ts) in &th.bases {
        if ts.iter().map(|t| t.0).ne(grid.iter().copied()) {
            return Err(DownUpError::GridMismatch(base.clone()));
        }
        vocab.add_predicate(base, *arity)?;
        let table = tuples(k.size(), *arity)
            .map(|t| {
                ts.iter()
                    .find(|&&(_, p)| *k.pred(p, &t))
                    .map_or(Value::ONE, |&(r, _)| r)
            })
            .collect();
        preds.push(table);
    }
    for f in k.vocabulary().functions() {
        vocab.add_function(&f.name, f.arity)?;
    }
    for c in k.vocabulary().constants() {
        vocab.add_constant(c)?;
    }
    Ok(k.with_predicates(vocab, preds)?)
}

/// `K↑`: the reduction of [`structure_up_unreduced`].
pub fn structure_up(k: &Structure<bool>, g: Grid) -> Result<Structure<Value>, DownUpError> {
    let n = structure_up_unreduced(k, g)?;
    Ok(reduce_structure(&n)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::find_isomorphism;

    fn q(n: i64, d: i64) -> Value {
        Value::new(n, d).unwrap()
    }

    fn nullary(v: Value) -> Structure<Value> {
        let voc = Vocabulary::new().with_predicate("P", 0).unwrap();
        Structure::from_fn(voc, 1, |_, _| v, |_, _| 0, |_| 0).unwrap()
    }

    #[test]
    fn names_round_trip() {
        assert_eq!(threshold_name("P", Value::ZERO), "P_le_0");
        assert_eq!(threshold_name("P", q(3, 8)), "P_le_3_8");
        assert_eq!(parse_threshold_name("P_le_3_8"), Some(("P", q(3, 8))));
        assert_eq!(
            parse_threshold_name("my_le_P_le_1_2"),
            Some(("my_le_P", q(1, 2)))
        );
        assert_eq!(parse_threshold_name("P_le_2_4"), None);
        assert_eq!(parse_threshold_name("P_le_1_1"), None);
        assert_eq!(parse_threshold_name("P"), None);
    }

    #[test]
    fn vocabulary_translation() {
        let v = Vocabulary::new()
            .with_predicate("P", 0)
            .and_then(|v| v.with_function("F", 2))
            .unwrap();
        let d = vocab_down(&v, Grid::new(1).unwrap()).unwrap();
        let names: Vec<&str> = d.predicates().iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, ["P_le_0", "P_le_1_2"]);
        assert_eq!(d.functions(), v.functions());
        assert_eq!(
            vocab_down(&v, Grid::new(3).unwrap())
                .unwrap()
                .predicates()
                .len(),
            8
        );
    }

    #[test]
    fn thresholds_of_one_half() {
        let k = structure_down(&nullary(Value::HALF), Grid::new(2).unwrap()).unwrap();
        assert_eq!(k.pred_table(0), &[false]);
        assert_eq!(k.pred_table(1), &[false]);
        assert_eq!(k.pred_table(2), &[true]);
        assert_eq!(k.pred_table(3), &[true]);
        let k = structure_down(&nullary(Value::ONE), Grid::new(2).unwrap()).unwrap();
        assert!((0..4).all(|p| !k.pred_table(p)[0]));
        assert!(is_increasing(&k).unwrap());
    }

    #[test]
    fn non_increasing_is_detected() {
        let v = Vocabulary::new()
            .with_predicate("P_le_0", 0)
            .and_then(|v| v.with_predicate("P_le_1_2", 0))
            .unwrap();
        let k = Structure::from_fn(v, 1, |p, _| p == 0, |_, _| 0, |_| 0).unwrap();
        let viol = increasing_violation(&k).unwrap().unwrap();
        assert_eq!(
            (viol.lower.as_str(), viol.upper.as_str()),
            ("P_le_0", "P_le_1_2")
        );
        assert!(matches!(
            structure_up(&k, Grid::new(1).unwrap()),
            Err(DownUpError::NotIncreasing(_))
        ));
        let empty =
            Structure::<bool>::from_fn(Vocabulary::new(), 2, |_, _| true, |_, _| 0, |_| 0).unwrap();
        assert!(is_increasing(&empty).unwrap());
        let bad = Vocabulary::new().with_predicate("Q", 0).unwrap();
        let k = Structure::from_fn(bad, 1, |_, _| true, |_, _| 0, |_| 0).unwrap();
        assert_eq!(
            is_increasing(&k),
            Err(DownUpError::NotThreshold("Q".into()))
        );
    }

    #[test]
    fn round_trip_and_reduction() {
        let v = Vocabulary::new()
            .with_predicate("P", 1)
            .and_then(|v| v.with_function("F", 1))
            .unwrap();
        let vals = [q(1, 4), Value::ONE, Value::ZERO];
        let m = Structure::from_fn(v, 3, |_, t| vals[t[0]], |_, t| [1, 2, 0][t[0]], |_| 0).unwrap();
        let g = Grid::new(2).unwrap();
        let k = structure_down(&m, g).unwrap();
        assert!(is_increasing(&k).unwrap());
        assert_eq!(structure_up(&k, g).unwrap(), m);

        // all thresholds false everywhere
        let voc = vocab_down(&Vocabulary::new().with_predicate("P", 1).unwrap(), g).unwrap();
        let k = Structure::from_fn(voc, 2, |_, _| false, |_, _| 0, |_| 0).unwrap();
        assert_eq!(
            structure_up_unreduced(&k, g).unwrap().pred_table(0),
            &[Value::ONE, Value::ONE]
        );
        assert_eq!(structure_up(&k, g).unwrap().size(), 1);
        assert!(find_isomorphism(
            &structure_up(&k, g).unwrap(),
            &structure_up_unreduced(&k, g).unwrap()
        )
        .is_some());
    }

    #[test]
    fn non_reduced_input_is_rejected() {
        let v = Vocabulary::new().with_predicate("P", 1).unwrap();
        let m = Structure::from_fn(v, 2, |_, _| Value::HALF, |_, _| 0, |_| 0).unwrap();
        assert_eq!(
            structure_down(&m, Grid::default()),
            Err(DownUpError::NotReduced)
        );
    }

    #[test]
    fn mismatched_grid_is_rejected() {
        let k = structure_down(&nullary(Value::HALF), Grid::new(2).unwrap()).unwrap();
        assert!(matches!(
            structure_up(&k, Grid::new(3).unwrap()),
            Err(DownUpError::GridMismatch(_))
        ));
    }
}
