//! Restricted approximations of monotone connectives.
//!
//! For `c` nondecreasing with Lipschitz constant `L`, grid step `h = 2^-m`,
//! slope `K = 2^s` and value precision `2^-p`, the template
//!
//! ```text
//! A(u) = max(q_0, max_{0 < j <= 2^m} min(q_j, K·(u ∸ j·h)))
//! ```
//!
//! with `q_j` the `p`-bit floor of `c(j·h)` satisfies
//! `c(u) - L·(h + 1/K) - 2^-p <= A(u) <= c(u)`.

use crate::logic::{Atom, ContFormula, MonotoneConnective, Value, Vocabulary};
use crate::structures::{eval_formula, Assignment, Structure};

/// Name of the 0-ary predicate standing for the argument of a template.
pub const HOLE: &str = "u";

/// Grid parameters of a template built by [`approx_restricted`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApproxParams {
    pub step_bits: u32,
    pub slope_bits: u32,
    pub value_bits: u32,
}

fn hole() -> ContFormula {
    ContFormula::Atomic(Atom::new(HOLE, vec![]))
}

/// `2^bits · f` truncated at 1, by repeated `∔`.
fn scaled(f: ContFormula, bits: u32) -> ContFormula {
    (0..bits).fold(f, |g, _| ContFormula::trunc_add(g.clone(), g))
}

/// A restricted template `A(u)` with `|A(x) - c(x)| <= eps` on `[0,1]`,
/// and the grid it was built on (`None` when the template is exact).
pub fn approx_restricted_with_params(
    c: &MonotoneConnective,
    eps: Value,
) -> (ContFormula, Option<ApproxParams>) {
    assert!(eps > Value::ZERO, "eps must be positive");
    if c.is_identity() {
        return (hole(), None);
    }
    if let Some(k) = c.as_constant().filter(|k| k.is_dyadic()) {
        return (ContFormula::Const(k), None);
    }
    let pts = c.points();
    if pts.len() == 3
        && pts[0] == (Value::ZERO, Value::ZERO)
        && pts[1].1 == Value::ZERO
        && pts[1].0.is_dyadic()
    {
        let e = pts[1].0;
        if *c == MonotoneConnective::trunc_sub(e) {
            return (ContFormula::trunc_sub(hole(), ContFormula::Const(e)), None);
        }
    }

    // 2^-p <= eps/2 and L·2^(1-m) <= eps/2, with s = m
    let half_eps = eps.half().ratio();
    let mut p = 0u32;
    while num_rational::Ratio::new(1, 1i64 << p) > half_eps {
        p += 1;
    }
    let lip = c.lipschitz();
    let mut m = 0u32;
    while lip * num_rational::Ratio::new(2, 1i64 << m) > half_eps {
        m += 1;
    }
    let params = ApproxParams {
        step_bits: m,
        slope_bits: m,
        value_bits: p,
    };

    let q = |t: Value| c.eval(t).floor_dyadic(p);
    let mut terms = vec![ContFormula::Const(q(Value::ZERO))];
    for j in 1..=(1i64 << m) {
        let t = Value::dyadic(j, m);
        let ramp = scaled(ContFormula::trunc_sub(hole(), ContFormula::Const(t)), m);
        terms.push(ContFormula::Min(vec![ContFormula::Const(q(t)), ramp]));
    }
    (ContFormula::Max(terms), Some(params))
}

pub fn approx_restricted(c: &MonotoneConnective, eps: Value) -> ContFormula {
    approx_restricted_with_params(c, eps).0
}

/// Value of a template at `x`.
pub fn eval_template(template: &ContFormula, x: Value) -> Value {
    let vocab = Vocabulary::new()
        .with_predicate(HOLE, 0)
        .expect("fresh vocabulary");
    let m = Structure::from_fn(vocab, 1, |_, _| x, |_, _| 0, |_| 0).expect("one-element structure");
    eval_formula(&m, template, &Assignment::new()).expect("templates mention only the hole")
}

/// Replaces the hole by `f`.
pub fn fill_hole(template: &ContFormula, f: &ContFormula) -> ContFormula {
    use ContFormula::*;
    match template {
        Atomic(a) if a.pred == HOLE && a.args.is_empty() => f.clone(),
        Atomic(_) | Const(_) => template.clone(),
        Min(cs) => Min(cs.iter().map(|c| fill_hole(c, f)).collect()),
        Max(cs) => Max(cs.iter().map(|c| fill_hole(c, f)).collect()),
        TruncSub(l, r) => ContFormula::trunc_sub(fill_hole(l, f), fill_hole(r, f)),
        TruncAdd(l, r) => ContFormula::trunc_add(fill_hole(l, f), fill_hole(r, f)),
        Half(b) => ContFormula::half(fill_hole(b, f)),
        Apply(c, b) => ContFormula::apply(c.clone(), fill_hole(b, f)),
        Sup(x, b) => ContFormula::sup(x, fill_hole(b, f)),
        Inf(x, b) => ContFormula::inf(x, fill_hole(b, f)),
    }
}
