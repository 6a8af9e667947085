use thiserror::Error;

use super::classify::{as_primitive, classify_cont};
use crate::logic::{ContFormula, FOFormula, MonotoneConnective};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("equality `{0}` has no counterpart in structures without identity")]
    Equality(String),
    #[error("formula is not conditional (first violation at {0:?})")]
    NotConditional(Vec<usize>),
}

/// The continuous formula `θ^c` with the same truth conditions as `θ` on
/// `{0,1}`-valued structures, `0` being true: disjunction becomes `min`,
/// conjunction `max`, negation `1 ∸ ·`, `∀` becomes `sup` and `∃` `inf`.
pub fn fo_to_cont(f: &FOFormula) -> Result<ContFormula, TranslateError> {
    Ok(match f {
        FOFormula::Atomic(a) => ContFormula::Atomic(a.clone()),
        FOFormula::Equal(..) => {
            let shown = FOFormula::to_string(f);
            return Err(TranslateError::Equality(shown));
        }
        FOFormula::Not(b) => ContFormula::negate(fo_to_cont(b)?),
        FOFormula::And(cs) => {
            ContFormula::Max(cs.iter().map(fo_to_cont).collect::<Result<_, _>>()?)
        }
        FOFormula::Or(cs) => ContFormula::Min(cs.iter().map(fo_to_cont).collect::<Result<_, _>>()?),
        FOFormula::Forall(x, b) => ContFormula::sup(x, fo_to_cont(b)?),
        FOFormula::Exists(x, b) => ContFormula::inf(x, fo_to_cont(b)?),
    })
}

/// A conditional formula with the value of `b(f)` on every structure: `b`
/// passes through `max`, `sup` and `inf` and is composed into the
/// connectives at the primitive conditionals.
pub fn push_unary(b: &MonotoneConnective, f: &ContFormula) -> Result<ContFormula, TranslateError> {
    let report = classify_cont(f);
    let flag = report.conditional.expect("continuous report has the flag");
    if !flag.holds {
        return Err(TranslateError::NotConditional(
            flag.violation.unwrap_or_default(),
        ));
    }
    if b.is_identity() {
        return Ok(f.clone());
    }
    Ok(push(b, &f.normalize()))
}

fn push(b: &MonotoneConnective, f: &ContFormula) -> ContFormula {
    match f {
        ContFormula::Max(cs) => ContFormula::Max(cs.iter().map(|c| push(b, c)).collect()),
        ContFormula::Sup(x, body) => ContFormula::sup(x, push(b, body)),
        ContFormula::Inf(x, body) => ContFormula::inf(x, push(b, body)),
        _ => as_primitive(f)
            .expect("checked conditional")
            .push(b)
            .to_formula(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_cont_inferring, parse_fo_inferring, Value};

    fn translate(s: &str) -> String {
        fo_to_cont(&parse_fo_inferring(s).unwrap().0)
            .unwrap()
            .to_string()
    }

    #[test]
    fn translation_examples() {
        assert_eq!(translate("P | Q | ~(P | Q)"), "min(P, Q, 1 -. min(P, Q))");
        assert_eq!(translate("~P(x) | Q(x)"), "min(1 -. P(x), Q(x))");
        assert_eq!(translate("forall x . P(x)"), "sup x . P(x)");
        assert_eq!(
            translate("exists x . P(x) & Q(x)"),
            "inf x . max(P(x), Q(x))"
        );
        let horn = fo_to_cont(&parse_fo_inferring("~P(x) | Q(x)").unwrap().0).unwrap();
        assert!(classify_cont(&horn).is("primitive_conditional"));
        assert!(matches!(
            fo_to_cont(&parse_fo_inferring("x = y").unwrap().0),
            Err(TranslateError::Equality(_))
        ));
    }

    #[test]
    fn identity_push_is_noop() {
        let (f, _) = parse_cont_inferring("sup x . min(1 -. P(x), Q(x) -. 1/4)").unwrap();
        assert_eq!(
            push_unary(&MonotoneConnective::identity(), &f)
                .unwrap()
                .normalize(),
            f.normalize()
        );
    }

    #[test]
    fn push_composes_at_the_leaf() {
        let (f, _) = parse_cont_inferring("P -. 1/2").unwrap();
        let b = MonotoneConnective::trunc_sub(Value::new(1, 4).unwrap());
        let g = push_unary(&b, &f).unwrap();
        assert!(classify_cont(&g).is("primitive_conditional"));
        let ContFormula::Apply(c, _) = &g else {
            panic!("{g}")
        };
        assert_eq!(*c, MonotoneConnective::trunc_sub(Value::new(3, 4).unwrap()));
    }

    #[test]
    fn push_rejects_nonconditional() {
        let (f, _) = parse_cont_inferring("P +. Q").unwrap();
        assert!(push_unary(&MonotoneConnective::half(), &f).is_err());
    }
}
