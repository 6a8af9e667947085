use serde::{Deserialize, Serialize};

use crate::logic::{compose, Atom, ContFormula, FOFormula, MonotoneConnective, Value};

/// One syntactic judgement. When it fails, `violation` is the child-index
/// path (into the normalized formula) of the first offending subterm.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flag {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<Vec<usize>>,
}

impl Flag {
    fn from_check(r: Result<(), Vec<usize>>) -> Self {
        match r {
            Ok(()) => Flag {
                holds: true,
                violation: None,
            },
            Err(path) => Flag {
                holds: false,
                violation: Some(path),
            },
        }
    }
}

/// Flags for a continuous formula (`restricted` through `positive`) or a
/// first-order one (`basic_horn`, `horn`); the other side is absent.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restricted: Option<Flag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primitive_conditional: Option<Flag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conditional: Option<Flag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub existential: Option<Flag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub universal: Option<Flag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positive: Option<Flag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basic_horn: Option<Flag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horn: Option<Flag>,
}

impl ClassificationReport {
    /// Whether the named flag is present and holds. Hyphens and
    /// underscores are interchangeable in `name`.
    pub fn is(&self, name: &str) -> bool {
        let flag = match name.replace('-', "_").as_str() {
            "restricted" => &self.restricted,
            "primitive_conditional" => &self.primitive_conditional,
            "conditional" => &self.conditional,
            "existential" => &self.existential,
            "universal" => &self.universal,
            "positive" => &self.positive,
            "basic_horn" => &self.basic_horn,
            "horn" => &self.horn,
            _ => return false,
        };
        flag.as_ref().is_some_and(|f| f.holds)
    }

    /// Names of the flags that hold, in declaration order.
    pub fn holding(&self) -> Vec<&'static str> {
        [
            "restricted",
            "primitive_conditional",
            "conditional",
            "existential",
            "universal",
            "positive",
            "basic_horn",
            "horn",
        ]
        .into_iter()
        .filter(|n| self.is(n))
        .collect()
    }
}

/// `C(α)` or `C(1 ∸ α)` with `α` atomic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Literal {
    pub atom: Atom,
    pub negated: bool,
    pub connective: MonotoneConnective,
}

impl Literal {
    /// `α` or `1 ∸ α`, without the connective.
    pub fn base(&self) -> ContFormula {
        let a = ContFormula::Atomic(self.atom.clone());
        if self.negated {
            ContFormula::negate(a)
        } else {
            a
        }
    }

    pub fn to_formula(&self) -> ContFormula {
        if self.connective.is_identity() {
            self.base()
        } else {
            ContFormula::apply(self.connective.clone(), self.base())
        }
    }
}

/// `min` of literals with at most one positive, or a constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Primitive {
    Constant(Value),
    Literals(Vec<Literal>),
}

impl Primitive {
    pub fn to_formula(&self) -> ContFormula {
        match self {
            Primitive::Constant(v) => ContFormula::Const(*v),
            Primitive::Literals(ls) if ls.len() == 1 => ls[0].to_formula(),
            Primitive::Literals(ls) => {
                ContFormula::Min(ls.iter().map(Literal::to_formula).collect())
            }
        }
    }

    /// `b` composed into every connective; equal in value to `b(self)`.
    pub fn push(&self, b: &MonotoneConnective) -> Primitive {
        match self {
            Primitive::Constant(v) => Primitive::Constant(b.eval(*v)),
            Primitive::Literals(ls) => Primitive::Literals(
                ls.iter()
                    .map(|l| Literal {
                        connective: compose(b, &l.connective),
                        ..l.clone()
                    })
                    .collect(),
            ),
        }
    }
}

/// Reads `f` as a literal, folding unary wrappers with constant operands
/// into the connective.
pub fn as_literal(f: &ContFormula) -> Option<Literal> {
    use ContFormula::*;
    let wrap = |inner: &ContFormula, outer: MonotoneConnective| {
        as_literal(inner).map(|l| Literal {
            connective: compose(&outer, &l.connective),
            ..l
        })
    };
    match f {
        Atomic(a) => Some(Literal {
            atom: a.clone(),
            negated: false,
            connective: MonotoneConnective::identity(),
        }),
        TruncSub(l, r) => match (&**l, &**r) {
            (Const(one), Atomic(a)) if *one == Value::ONE => Some(Literal {
                atom: a.clone(),
                negated: true,
                connective: MonotoneConnective::identity(),
            }),
            (g, Const(e)) => wrap(g, MonotoneConnective::trunc_sub(*e)),
            _ => None,
        },
        TruncAdd(l, r) => match (&**l, &**r) {
            (g, Const(e)) | (Const(e), g) => wrap(g, MonotoneConnective::trunc_add(*e)),
            _ => None,
        },
        Half(g) => wrap(g, MonotoneConnective::half()),
        Apply(c, g) => wrap(g, c.clone()),
        _ => None,
    }
}

/// Reads a normalized formula as a primitive conditional.
pub fn as_primitive(f: &ContFormula) -> Result<Primitive, Vec<usize>> {
    match f {
        ContFormula::Const(v) => Ok(Primitive::Constant(*v)),
        ContFormula::Min(cs) => {
            let mut lits = Vec::new();
            let mut cap = None;
            for (i, c) in cs.iter().enumerate() {
                match c {
                    ContFormula::Const(v) => cap = Some(*v),
                    _ => lits.push(as_literal(c).ok_or_else(|| vec![i])?),
                }
            }
            let positives: Vec<usize> = lits
                .iter()
                .enumerate()
                .filter(|(_, l)| !l.negated)
                .map(|(i, _)| i)
                .collect();
            if positives.len() > 1 {
                // report the second positive literal
                let second = positives[1];
                let idx = cs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !matches!(c, ContFormula::Const(_)))
                    .nth(second);
                return Err(vec![idx.map(|(i, _)| i).unwrap_or(0)]);
            }
            if lits.is_empty() {
                return Ok(Primitive::Constant(cap.unwrap_or(Value::ONE)));
            }
            if let Some(c) = cap {
                lits[0].connective = compose(&MonotoneConnective::cap(c), &lits[0].connective);
            }
            Ok(Primitive::Literals(lits))
        }
        _ => as_literal(f)
            .map(|l| Primitive::Literals(vec![l]))
            .ok_or_else(Vec::new),
    }
}

fn prefixed(i: usize, r: Result<(), Vec<usize>>) -> Result<(), Vec<usize>> {
    r.map_err(|mut p| {
        p.insert(0, i);
        p
    })
}

fn check_conditional(f: &ContFormula) -> Result<(), Vec<usize>> {
    match f {
        ContFormula::Max(cs) => {
            for (i, c) in cs.iter().enumerate() {
                prefixed(i, check_conditional(c))?;
            }
            Ok(())
        }
        ContFormula::Sup(_, b) | ContFormula::Inf(_, b) => prefixed(0, check_conditional(b)),
        _ => as_primitive(f).map(|_| ()),
    }
}

fn check_restricted(f: &ContFormula) -> Result<(), Vec<usize>> {
    match f {
        ContFormula::Apply(..) => Err(vec![]),
        ContFormula::Const(v) if !v.is_dyadic() => Err(vec![]),
        _ => {
            for (i, c) in f.children().into_iter().enumerate() {
                prefixed(i, check_restricted(c))?;
            }
            Ok(())
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Existential,
    Universal,
    Positive,
}

/// Closure of a base class under the increasing connectives and one or both
/// quantifiers. `∸` is increasing in its left operand only, so its right
/// operand must have a value every morphism of the relevant kind keeps
/// fixed: a quantifier-free formula for embeddings, a constant for
/// homomorphisms.
fn check_monotone(f: &ContFormula, dir: Direction) -> Result<(), Vec<usize>> {
    use ContFormula::*;
    if dir != Direction::Positive && f.is_quantifier_free() {
        return Ok(());
    }
    match f {
        Atomic(_) | Const(_) => Ok(()),
        Min(_) | Max(_) | TruncAdd(..) | Half(_) | Apply(..) => {
            for (i, c) in f.children().into_iter().enumerate() {
                prefixed(i, check_monotone(c, dir))?;
            }
            Ok(())
        }
        TruncSub(l, r) => {
            prefixed(0, check_monotone(l, dir))?;
            let fixed = match dir {
                Direction::Positive => matches!(**r, Const(_)),
                _ => r.is_quantifier_free(),
            };
            if fixed {
                Ok(())
            } else {
                Err(vec![1])
            }
        }
        Inf(_, b) if dir != Direction::Universal => prefixed(0, check_monotone(b, dir)),
        Sup(_, b) if dir != Direction::Existential => prefixed(0, check_monotone(b, dir)),
        Inf(..) | Sup(..) => Err(vec![]),
    }
}

/// Syntactic classes of a continuous formula, judged on its normal form.
pub fn classify_cont(f: &ContFormula) -> ClassificationReport {
    let g = f.normalize();
    ClassificationReport {
        restricted: Some(Flag::from_check(check_restricted(&g))),
        primitive_conditional: Some(Flag::from_check(as_primitive(&g).map(|_| ()))),
        conditional: Some(Flag::from_check(check_conditional(&g))),
        existential: Some(Flag::from_check(check_monotone(&g, Direction::Existential))),
        universal: Some(Flag::from_check(check_monotone(&g, Direction::Universal))),
        positive: Some(Flag::from_check(check_monotone(&g, Direction::Positive))),
        ..Default::default()
    }
}

fn fo_literal(f: &FOFormula) -> Option<bool> {
    match f {
        FOFormula::Atomic(_) | FOFormula::Equal(..) => Some(true),
        FOFormula::Not(b) if matches!(**b, FOFormula::Atomic(_) | FOFormula::Equal(..)) => {
            Some(false)
        }
        _ => None,
    }
}

fn check_basic_horn(f: &FOFormula) -> Result<(), Vec<usize>> {
    let disjuncts: Vec<&FOFormula> = match f {
        FOFormula::Or(cs) => cs.iter().collect(),
        _ => vec![f],
    };
    let mut positive = false;
    for (i, d) in disjuncts.iter().enumerate() {
        let path = if matches!(f, FOFormula::Or(_)) {
            vec![i]
        } else {
            vec![]
        };
        match fo_literal(d) {
            None => return Err(path),
            Some(true) if positive => return Err(path),
            Some(true) => positive = true,
            Some(false) => {}
        }
    }
    Ok(())
}

fn check_horn(f: &FOFormula) -> Result<(), Vec<usize>> {
    match f {
        FOFormula::And(cs) => {
            for (i, c) in cs.iter().enumerate() {
                prefixed(i, check_horn(c))?;
            }
            Ok(())
        }
        FOFormula::Forall(_, b) | FOFormula::Exists(_, b) => prefixed(0, check_horn(b)),
        _ => check_basic_horn(f),
    }
}

/// Horn classes of a first-order formula, judged after flattening.
pub fn classify_horn(f: &FOFormula) -> ClassificationReport {
    let g = f.normalize();
    ClassificationReport {
        basic_horn: Some(Flag::from_check(check_basic_horn(&g))),
        horn: Some(Flag::from_check(check_horn(&g))),
        ..Default::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_cont_inferring, parse_fo_inferring};

    fn cont(s: &str) -> ClassificationReport {
        classify_cont(&parse_cont_inferring(s).unwrap().0)
    }

    fn fo(s: &str) -> ClassificationReport {
        classify_horn(&parse_fo_inferring(s).unwrap().0)
    }

    #[test]
    fn truncated_atom_is_primitive() {
        let r = cont("P -. 1/2");
        assert!(r.is("primitive_conditional") && r.is("conditional") && r.is("restricted"));
        let (f, _) = parse_cont_inferring("P -. 1/2").unwrap();
        let Ok(Primitive::Literals(ls)) = as_primitive(&f) else {
            panic!()
        };
        assert_eq!(ls[0].connective, MonotoneConnective::trunc_sub(Value::HALF));
    }

    #[test]
    fn closure_under_max_and_quantifiers() {
        let r = cont("sup x . max( (P(x) -. 1/2), C[(0,0),(1,1)](1 -. Q(x)) )");
        assert!(r.is("conditional"));
        assert!(!r.is("primitive_conditional"));
        assert!(
            r.is("restricted"),
            "identity connective disappears in normal form"
        );
    }

    #[test]
    fn truncated_sum_of_atoms_is_not_conditional() {
        let r = cont("P +. Q");
        assert!(r.is("restricted"));
        assert!(!r.is("conditional"));
        assert_eq!(r.conditional.unwrap().violation, Some(vec![]));
    }

    #[test]
    fn two_positive_literals_fail() {
        let r = cont("min(P, Q, 1 -. min(P, Q))");
        assert!(!r.is("conditional"));
        let r = cont("min(1 -. P, Q, 1/2)");
        assert!(r.is("primitive_conditional"));
        let r = cont("min(1 -. P, 1 -. Q)");
        assert!(r.is("primitive_conditional"));
        let r = cont("min(P, Q)");
        assert_eq!(r.primitive_conditional.unwrap().violation, Some(vec![1]));
    }

    #[test]
    fn violation_paths_point_inside() {
        let r = cont("sup x . max(P(x), P(x) +. Q(x))");
        assert_eq!(r.conditional.unwrap().violation, Some(vec![0, 1]));
        let r = cont("inf x . C[(0,0),(1/3,1/2),(1,1)](P(x))");
        assert_eq!(r.restricted.unwrap().violation, Some(vec![0]));
    }

    #[test]
    fn morphism_classes() {
        let r = cont("inf x . max(P(x), 1 -. Q(x))");
        assert!(r.is("existential") && !r.is("universal") && !r.is("positive"));
        let r = cont("sup x . P(x) -. 1/4");
        assert!(r.is("universal") && r.is("positive") && !r.is("existential"));
        let r = cont("(inf x . P(x)) -. (inf y . Q(y))");
        assert!(!r.is("existential"));
        assert!(cont("P(c) -. Q(c)").is("existential"));
        assert!(!cont("P(c) -. Q(c)").is("positive"));
    }

    #[test]
    fn horn_examples() {
        assert!(fo("~P(x) | Q(x)").is("basic_horn"));
        assert!(!fo("P | Q").is("horn"));
        assert!(fo("forall x . (P(x) & (~Q(x) | R(x)))").is("horn"));
        assert!(!fo("forall x . (P(x) & (~Q(x) | R(x)))").is("basic_horn"));
        assert!(fo("~P").is("basic_horn"));
        assert!(!fo("~(P & Q)").is("horn"));
        assert!(fo("exists x . ~(x = c) | P(x)").is("horn"));
    }

    #[test]
    fn report_serializes_present_flags_only() {
        let json = serde_json::to_value(fo("P | Q")).unwrap();
        assert_eq!(json["horn"]["holds"], false);
        assert!(json.get("conditional").is_none());
    }
}
