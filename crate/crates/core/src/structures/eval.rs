use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Structure;
use crate::logic::{Atom, ContFormula, FOFormula, Term, Value};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable `{0}` is not assigned")]
    Unassigned(String),
    #[error("symbol `{0}` is not in the structure's vocabulary")]
    UnknownSymbol(String),
    #[error("`{name}` expects {expected} arguments, got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("variable `{name}` is assigned element {elem}, outside the universe")]
    OutOfUniverse { name: String, elem: usize },
}

/// Variables to universe elements.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment(BTreeMap<String, usize>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: &str, elem: usize) -> Self {
        self.0.insert(var.to_string(), elem);
        self
    }

    pub fn insert(&mut self, var: &str, elem: usize) {
        self.0.insert(var.to_string(), elem);
    }

    pub fn get(&self, var: &str) -> Option<usize> {
        self.0.get(var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Applies an element map to every assigned value.
    pub fn map(&self, h: impl Fn(usize) -> usize) -> Assignment {
        Assignment(self.0.iter().map(|(k, &v)| (k.clone(), h(v))).collect())
    }
}

impl<S: Into<String>> FromIterator<(S, usize)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (S, usize)>>(iter: I) -> Self {
        Assignment(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

/// Bound variables shadow the assignment; innermost binding last.
struct Env<'a> {
    outer: &'a Assignment,
    bound: Vec<(&'a str, usize)>,
}

impl<'a> Env<'a> {
    fn lookup(&self, x: &str) -> Result<usize, EvalError> {
        self.bound
            .iter()
            .rev()
            .find(|(name, _)| *name == x)
            .map(|&(_, e)| e)
            .or_else(|| self.outer.get(x))
            .ok_or_else(|| EvalError::Unassigned(x.to_string()))
    }
}

fn eval_term<T: Clone>(m: &Structure<T>, t: &Term, env: &Env) -> Result<usize, EvalError> {
    match t {
        Term::Var(x) => env.lookup(x),
        Term::Const(c) => m
            .vocabulary()
            .constant_index(c)
            .map(|i| m.constant(i))
            .ok_or_else(|| EvalError::UnknownSymbol(c.clone())),
        Term::App(g, args) => {
            let gi = m
                .vocabulary()
                .function_index(g)
                .ok_or_else(|| EvalError::UnknownSymbol(g.clone()))?;
            let arity = m.vocabulary().functions()[gi].arity;
            if arity != args.len() {
                return Err(EvalError::Arity {
                    name: g.clone(),
                    expected: arity,
                    found: args.len(),
                });
            }
            let elems = args
                .iter()
                .map(|a| eval_term(m, a, env))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(m.func(gi, &elems))
        }
    }
}

fn eval_atom<T: Clone>(m: &Structure<T>, a: &Atom, env: &Env) -> Result<T, EvalError> {
    let p = m
        .vocabulary()
        .predicate_index(&a.pred)
        .ok_or_else(|| EvalError::UnknownSymbol(a.pred.clone()))?;
    let arity = m.vocabulary().predicates()[p].arity;
    if arity != a.args.len() {
        return Err(EvalError::Arity {
            name: a.pred.clone(),
            expected: arity,
            found: a.args.len(),
        });
    }
    let elems = a
        .args
        .iter()
        .map(|t| eval_term(m, t, env))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(m.pred(p, &elems).clone())
}

fn check_assignment<T>(m: &Structure<T>, a: &Assignment) -> Result<(), EvalError> {
    match a.iter().find(|&(_, e)| e >= m.size) {
        Some((name, elem)) => Err(EvalError::OutOfUniverse {
            name: name.to_string(),
            elem,
        }),
        None => Ok(()),
    }
}

/// Truth value of `f` in `m` under `a` (`0` is true). Quantifiers range over
/// the whole finite universe: `sup` is a maximum and `inf` a minimum.
pub fn eval_formula(
    m: &Structure<Value>,
    f: &ContFormula,
    a: &Assignment,
) -> Result<Value, EvalError> {
    check_assignment(m, a)?;
    let mut env = Env {
        outer: a,
        bound: Vec::new(),
    };
    eval_cont(m, f, &mut env)
}

fn eval_cont<'a>(
    m: &Structure<Value>,
    f: &'a ContFormula,
    env: &mut Env<'a>,
) -> Result<Value, EvalError> {
    use ContFormula::*;
    Ok(match f {
        Atomic(a) => eval_atom(m, a, env)?,
        Const(v) => *v,
        Min(fs) => {
            let mut acc = Value::ONE;
            for g in fs {
                acc = acc.min(eval_cont(m, g, env)?);
            }
            acc
        }
        Max(fs) => {
            let mut acc = Value::ZERO;
            for g in fs {
                acc = acc.max(eval_cont(m, g, env)?);
            }
            acc
        }
        TruncSub(l, r) => eval_cont(m, l, env)?.trunc_sub(eval_cont(m, r, env)?),
        TruncAdd(l, r) => eval_cont(m, l, env)?.trunc_add(eval_cont(m, r, env)?),
        Half(g) => eval_cont(m, g, env)?.half(),
        Apply(c, g) => c.eval(eval_cont(m, g, env)?),
        Sup(x, body) | Inf(x, body) => {
            let is_sup = matches!(f, Sup(..));
            let mut acc = if is_sup { Value::ZERO } else { Value::ONE };
            for e in 0..m.size() {
                env.bound.push((x, e));
                let v = eval_cont(m, body, env);
                env.bound.pop();
                let v = v?;
                acc = if is_sup { acc.max(v) } else { acc.min(v) };
            }
            acc
        }
    })
}

/// Classical satisfaction of `f` in a first-order structure with identity.
pub fn eval_fo(m: &Structure<bool>, f: &FOFormula, a: &Assignment) -> Result<bool, EvalError> {
    check_assignment(m, a)?;
    let mut env = Env {
        outer: a,
        bound: Vec::new(),
    };
    eval_fo_in(m, f, &mut env)
}

fn eval_fo_in<'a>(
    m: &Structure<bool>,
    f: &'a FOFormula,
    env: &mut Env<'a>,
) -> Result<bool, EvalError> {
    use FOFormula::*;
    Ok(match f {
        Atomic(a) => eval_atom(m, a, env)?,
        Equal(s, t) => eval_term(m, s, env)? == eval_term(m, t, env)?,
        Not(g) => !eval_fo_in(m, g, env)?,
        And(fs) => {
            for g in fs {
                if !eval_fo_in(m, g, env)? {
                    return Ok(false);
                }
            }
            true
        }
        Or(fs) => {
            for g in fs {
                if eval_fo_in(m, g, env)? {
                    return Ok(true);
                }
            }
            false
        }
        Forall(x, body) | Exists(x, body) => {
            let want = matches!(f, Exists(..));
            for e in 0..m.size() {
                env.bound.push((x, e));
                let v = eval_fo_in(m, body, env);
                env.bound.pop();
                if v? == want {
                    return Ok(want);
                }
            }
            !want
        }
    })
}
