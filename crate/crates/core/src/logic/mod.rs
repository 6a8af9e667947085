//! Truth values, vocabularies, connectives and formula syntax.

mod connective;
mod formula;
mod parse;
mod value;
mod vocab;

pub use connective::{compose, MonotoneConnective};
pub use formula::{Atom, ContFormula, FOFormula, Term};
pub use parse::{
    parse_cont_formula, parse_cont_inferring, parse_fo_formula, parse_fo_inferring, ParseError,
};
pub use value::Value;
pub use vocab::{is_identifier, Symbol, SymbolKind, Vocabulary};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("value {0} is outside [0,1]")]
    ValueOutOfRange(String),
    #[error("malformed numeric literal `{0}`")]
    BadLiteral(String),
    #[error("invalid connective: {0}")]
    BadConnective(String),
    #[error("invalid vocabulary: {0}")]
    BadVocabulary(String),
}
