//! Exact continuous (`[0,1]`-valued) model theory over finite structures.
//!
//! Truth values are exact rationals with `0` meaning true. The crate covers
//! formula syntax for continuous and first-order logic, finite general
//! structures and their Leibniz reduction, reduced products modulo filters
//! on finite index sets, syntactic classes (restricted, conditional, Horn),
//! the threshold translation between continuous and first-order
//! structures, and a seeded harness that checks the preservation
//! properties of these constructions.

pub mod classes;
pub mod downup;
pub mod harness;
pub mod logic;
pub mod oracle;
pub mod products;
pub mod structures;

pub use logic::{
    compose, parse_cont_formula, parse_fo_formula, Atom, ContFormula, FOFormula, LogicError,
    MonotoneConnective, ParseError, Term, Value, Vocabulary,
};
pub use structures::{
    eval_formula, leibniz_partition, reduce_structure, Assignment, FOStructure, GeneralStructure,
    QuotientMap, Structure,
};
