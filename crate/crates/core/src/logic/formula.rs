//! Terms and formula trees for continuous and classical first-order logic.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{MonotoneConnective, Value};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|t| t.collect_vars(out)),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }
}

/// An atomic formula `P(t_1, ..., t_n)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>) -> Atom {
        Atom {
            pred: pred.to_string(),
            args,
        }
    }
}

/// Continuous formulas. The variant order is significant: it is the sort
/// order used when normalizing the children of `Min` and `Max`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ContFormula {
    Atomic(Atom),
    /// A dyadic rational constant.
    Const(Value),
    Min(Vec<ContFormula>),
    Max(Vec<ContFormula>),
    /// `l ∸ r`
    TruncSub(Box<ContFormula>, Box<ContFormula>),
    /// `l ∔ r`
    TruncAdd(Box<ContFormula>, Box<ContFormula>),
    Half(Box<ContFormula>),
    Apply(MonotoneConnective, Box<ContFormula>),
    Sup(String, Box<ContFormula>),
    Inf(String, Box<ContFormula>),
}

impl ContFormula {
    pub fn atom(pred: &str, args: Vec<Term>) -> ContFormula {
        ContFormula::Atomic(Atom::new(pred, args))
    }

    pub fn konst(v: Value) -> ContFormula {
        ContFormula::Const(v)
    }

    pub fn trunc_sub(l: ContFormula, r: ContFormula) -> ContFormula {
        ContFormula::TruncSub(Box::new(l), Box::new(r))
    }

    pub fn trunc_add(l: ContFormula, r: ContFormula) -> ContFormula {
        ContFormula::TruncAdd(Box::new(l), Box::new(r))
    }

    /// `1 ∸ f`
    pub fn negate(f: ContFormula) -> ContFormula {
        ContFormula::trunc_sub(ContFormula::Const(Value::ONE), f)
    }

    pub fn half(f: ContFormula) -> ContFormula {
        ContFormula::Half(Box::new(f))
    }

    pub fn apply(c: MonotoneConnective, f: ContFormula) -> ContFormula {
        ContFormula::Apply(c, Box::new(f))
    }

    pub fn sup(x: &str, body: ContFormula) -> ContFormula {
        ContFormula::Sup(x.to_string(), Box::new(body))
    }

    pub fn inf(x: &str, body: ContFormula) -> ContFormula {
        ContFormula::Inf(x.to_string(), Box::new(body))
    }

    pub fn children(&self) -> Vec<&ContFormula> {
        use ContFormula::*;
        match self {
            Atomic(_) | Const(_) => vec![],
            Min(cs) | Max(cs) => cs.iter().collect(),
            TruncSub(l, r) | TruncAdd(l, r) => vec![l, r],
            Half(b) | Apply(_, b) | Sup(_, b) | Inf(_, b) => vec![b],
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            ContFormula::Atomic(a) => a.args.iter().for_each(|t| t.collect_vars(out)),
            ContFormula::Sup(x, b) | ContFormula::Inf(x, b) => {
                let mut inner = BTreeSet::new();
                b.collect_free(&mut inner);
                inner.remove(x);
                out.extend(inner);
            }
            _ => self
                .children()
                .into_iter()
                .for_each(|c| c.collect_free(out)),
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn is_quantifier_free(&self) -> bool {
        !matches!(self, ContFormula::Sup(..) | ContFormula::Inf(..))
            && self
                .children()
                .into_iter()
                .all(ContFormula::is_quantifier_free)
    }

    pub fn size(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(ContFormula::size)
            .sum::<usize>()
    }

    /// The node reached by following child indices.
    pub fn at_path(&self, path: &[usize]) -> Option<&ContFormula> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i)?.at_path(rest),
        }
    }

    /// Canonical form: nested `Min`/`Max` flattened, children sorted and
    /// deduplicated, singletons collapsed, and constant subterms folded.
    ///
    /// Folding only produces dyadic constants; an `Apply` of a constant
    /// whose result is not dyadic is left in place.
    pub fn normalize(&self) -> ContFormula {
        use ContFormula::*;
        match self {
            Atomic(_) | Const(_) => self.clone(),
            Min(cs) => normalize_lattice(cs, true),
            Max(cs) => normalize_lattice(cs, false),
            TruncSub(l, r) => {
                let (l, r) = (l.normalize(), r.normalize());
                match (&l, &r) {
                    (Const(a), Const(b)) => Const(a.trunc_sub(*b)),
                    (_, Const(b)) if b.is_zero() => l,
                    (Const(a), _) if a.is_zero() => Const(Value::ZERO),
                    _ => ContFormula::trunc_sub(l, r),
                }
            }
            TruncAdd(l, r) => {
                let (l, r) = (l.normalize(), r.normalize());
                match (&l, &r) {
                    (Const(a), Const(b)) => Const(a.trunc_add(*b)),
                    (_, Const(b)) if b.is_zero() => l,
                    (Const(a), _) if a.is_zero() => r,
                    _ => ContFormula::trunc_add(l, r),
                }
            }
            Half(b) => match b.normalize() {
                Const(a) => Const(a.half()),
                b => ContFormula::half(b),
            },
            Apply(c, b) => {
                let b = b.normalize();
                if c.is_identity() {
                    return b;
                }
                if let Some(k) = c.as_constant().filter(|k| k.is_dyadic()) {
                    return Const(k);
                }
                match b {
                    Const(a) if c.eval(a).is_dyadic() => Const(c.eval(a)),
                    b => ContFormula::apply(c.clone(), b),
                }
            }
            Sup(x, b) => ContFormula::sup(x, b.normalize()),
            Inf(x, b) => ContFormula::inf(x, b.normalize()),
        }
    }
}

fn normalize_lattice(children: &[ContFormula], is_min: bool) -> ContFormula {
    // identity element and absorbing element of the lattice operation
    let (unit, absorb) = if is_min {
        (Value::ONE, Value::ZERO)
    } else {
        (Value::ZERO, Value::ONE)
    };
    let mut flat = Vec::new();
    let mut folded: Option<Value> = None;
    let mut stack: Vec<ContFormula> = children.iter().map(ContFormula::normalize).collect();
    stack.reverse();
    while let Some(c) = stack.pop() {
        match c {
            ContFormula::Min(inner) if is_min => stack.extend(inner.into_iter().rev()),
            ContFormula::Max(inner) if !is_min => stack.extend(inner.into_iter().rev()),
            ContFormula::Const(v) => {
                folded = Some(match folded {
                    None => v,
                    Some(w) if is_min => w.min(v),
                    Some(w) => w.max(v),
                })
            }
            other => flat.push(other),
        }
    }
    if folded == Some(absorb) {
        return ContFormula::Const(absorb);
    }
    if let Some(v) = folded.filter(|v| *v != unit) {
        flat.push(ContFormula::Const(v));
    }
    flat.sort();
    flat.dedup();
    match flat.len() {
        0 => ContFormula::Const(folded.unwrap_or(unit)),
        1 => flat.pop().unwrap(),
        _ if is_min => ContFormula::Min(flat),
        _ => ContFormula::Max(flat),
    }
}

/// Classical first-order formulas with built-in equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FOFormula {
    Atomic(Atom),
    Equal(Term, Term),
    Not(Box<FOFormula>),
    And(Vec<FOFormula>),
    Or(Vec<FOFormula>),
    Forall(String, Box<FOFormula>),
    Exists(String, Box<FOFormula>),
}

impl FOFormula {
    pub fn atom(pred: &str, args: Vec<Term>) -> FOFormula {
        FOFormula::Atomic(Atom::new(pred, args))
    }

    pub fn not(f: FOFormula) -> FOFormula {
        FOFormula::Not(Box::new(f))
    }

    pub fn forall(x: &str, body: FOFormula) -> FOFormula {
        FOFormula::Forall(x.to_string(), Box::new(body))
    }

    pub fn exists(x: &str, body: FOFormula) -> FOFormula {
        FOFormula::Exists(x.to_string(), Box::new(body))
    }

    pub fn children(&self) -> Vec<&FOFormula> {
        match self {
            FOFormula::Atomic(_) | FOFormula::Equal(..) => vec![],
            FOFormula::Not(b) | FOFormula::Forall(_, b) | FOFormula::Exists(_, b) => vec![b],
            FOFormula::And(cs) | FOFormula::Or(cs) => cs.iter().collect(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            FOFormula::Atomic(a) => a.args.iter().for_each(|t| t.collect_vars(out)),
            FOFormula::Equal(s, t) => {
                s.collect_vars(out);
                t.collect_vars(out);
            }
            FOFormula::Forall(x, b) | FOFormula::Exists(x, b) => {
                let mut inner = BTreeSet::new();
                b.collect_free(&mut inner);
                inner.remove(x);
                out.extend(inner);
            }
            _ => self
                .children()
                .into_iter()
                .for_each(|c| c.collect_free(out)),
        }
    }

    pub fn at_path(&self, path: &[usize]) -> Option<&FOFormula> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i)?.at_path(rest),
        }
    }

    /// Flattens nested `And`/`Or` and collapses singletons; order is kept.
    pub fn normalize(&self) -> FOFormula {
        match self {
            FOFormula::Atomic(_) | FOFormula::Equal(..) => self.clone(),
            FOFormula::Not(b) => FOFormula::not(b.normalize()),
            FOFormula::Forall(x, b) => FOFormula::forall(x, b.normalize()),
            FOFormula::Exists(x, b) => FOFormula::exists(x, b.normalize()),
            FOFormula::And(cs) => flatten_fo(cs, true),
            FOFormula::Or(cs) => flatten_fo(cs, false),
        }
    }
}

fn flatten_fo(children: &[FOFormula], is_and: bool) -> FOFormula {
    let mut flat = Vec::new();
    for c in children.iter().map(FOFormula::normalize) {
        match c {
            FOFormula::And(inner) if is_and => flat.extend(inner),
            FOFormula::Or(inner) if !is_and => flat.extend(inner),
            other => flat.push(other),
        }
    }
    if flat.len() == 1 {
        return flat.pop().unwrap();
    }
    if is_and {
        FOFormula::And(flat)
    } else {
        FOFormula::Or(flat)
    }
}

// ---------------------------------------------------------------------------
// rendering

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) | Term::Const(x) => write!(f, "{x}"),
            Term::App(g, args) => {
                write!(f, "{g}(")?;
                write_list(f, args)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            write_list(f, &self.args)?;
            write!(f, ")")?;
        }
        Ok(())
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, t) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{t}")?;
    }
    Ok(())
}

impl ContFormula {
    /// Operands of the infix operators need parentheses unless they are
    /// atoms, constants or function-call style nodes.
    fn is_tight(&self) -> bool {
        !matches!(
            self,
            ContFormula::TruncSub(..)
                | ContFormula::TruncAdd(..)
                | ContFormula::Sup(..)
                | ContFormula::Inf(..)
        )
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_tight() {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }
}

impl fmt::Display for ContFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContFormula::Atomic(a) => write!(f, "{a}"),
            ContFormula::Const(v) => write!(f, "{v}"),
            ContFormula::Min(cs) => {
                write!(f, "min(")?;
                write_list(f, cs)?;
                write!(f, ")")
            }
            ContFormula::Max(cs) => {
                write!(f, "max(")?;
                write_list(f, cs)?;
                write!(f, ")")
            }
            ContFormula::TruncSub(l, r) => {
                l.fmt_operand(f)?;
                write!(f, " -. ")?;
                r.fmt_operand(f)
            }
            ContFormula::TruncAdd(l, r) => {
                l.fmt_operand(f)?;
                write!(f, " +. ")?;
                r.fmt_operand(f)
            }
            ContFormula::Half(b) => write!(f, "half({b})"),
            ContFormula::Apply(c, b) => write!(f, "{c}({b})"),
            ContFormula::Sup(x, b) => write!(f, "sup {x} . {b}"),
            ContFormula::Inf(x, b) => write!(f, "inf {x} . {b}"),
        }
    }
}

impl FOFormula {
    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FOFormula::Atomic(_) | FOFormula::Not(_) => write!(f, "{self}"),
            _ => write!(f, "({self})"),
        }
    }
}

impl fmt::Display for FOFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FOFormula::Atomic(a) => write!(f, "{a}"),
            FOFormula::Equal(s, t) => write!(f, "{s} = {t}"),
            FOFormula::Not(b) => {
                write!(f, "~")?;
                b.fmt_operand(f)
            }
            FOFormula::And(cs) | FOFormula::Or(cs) => {
                let op = if matches!(self, FOFormula::And(_)) {
                    " & "
                } else {
                    " | "
                };
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{op}")?;
                    }
                    c.fmt_operand(f)?;
                }
                Ok(())
            }
            FOFormula::Forall(x, b) => write!(f, "forall {x} . {b}"),
            FOFormula::Exists(x, b) => write!(f, "exists {x} . {b}"),
        }
    }
}
