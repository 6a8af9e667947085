//! Syntactic classes of formulas and translations between them.

mod approx;
mod classify;
mod translate;

pub use approx::{
    approx_restricted, approx_restricted_with_params, eval_template, fill_hole, ApproxParams, HOLE,
};
pub use classify::{
    as_literal, as_primitive, classify_cont, classify_horn, ClassificationReport, Flag, Literal,
    Primitive,
};
pub use translate::{fo_to_cont, push_unary, TranslateError};
