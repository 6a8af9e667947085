use std::fmt;

use serde::{Deserialize, Serialize};

use super::LogicError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolKind {
    Predicate,
    Function,
    Constant,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// Predicate, function and constant symbols. Names are unique across kinds
/// and symbols keep their declaration order, which fixes table layout in
/// structures.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vocabulary {
    predicates: Vec<Symbol>,
    functions: Vec<Symbol>,
    constants: Vec<String>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_predicate(mut self, name: &str, arity: usize) -> Result<Self, LogicError> {
        self.add_predicate(name, arity)?;
        Ok(self)
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Result<Self, LogicError> {
        self.add_function(name, arity)?;
        Ok(self)
    }

    pub fn with_constant(mut self, name: &str) -> Result<Self, LogicError> {
        self.add_constant(name)?;
        Ok(self)
    }

    pub fn add_predicate(&mut self, name: &str, arity: usize) -> Result<(), LogicError> {
        self.check_fresh(name)?;
        self.predicates.push(Symbol {
            name: name.to_string(),
            arity,
        });
        Ok(())
    }

    pub fn add_function(&mut self, name: &str, arity: usize) -> Result<(), LogicError> {
        if arity == 0 {
            return Err(LogicError::BadVocabulary(format!(
                "function symbol {name} must have arity >= 1"
            )));
        }
        self.check_fresh(name)?;
        self.functions.push(Symbol {
            name: name.to_string(),
            arity,
        });
        Ok(())
    }

    pub fn add_constant(&mut self, name: &str) -> Result<(), LogicError> {
        self.check_fresh(name)?;
        self.constants.push(name.to_string());
        Ok(())
    }

    fn check_fresh(&self, name: &str) -> Result<(), LogicError> {
        if !is_identifier(name) {
            return Err(LogicError::BadVocabulary(format!(
                "`{name}` is not an identifier"
            )));
        }
        if super::parse::is_keyword(name) {
            return Err(LogicError::BadVocabulary(format!(
                "`{name}` is a reserved word"
            )));
        }
        if self.kind_of(name).is_some() {
            return Err(LogicError::BadVocabulary(format!(
                "symbol {name} declared twice"
            )));
        }
        Ok(())
    }

    pub fn predicates(&self) -> &[Symbol] {
        &self.predicates
    }

    pub fn functions(&self) -> &[Symbol] {
        &self.functions
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn predicate_index(&self, name: &str) -> Option<usize> {
        self.predicates.iter().position(|s| s.name == name)
    }

    pub fn function_index(&self, name: &str) -> Option<usize> {
        self.functions.iter().position(|s| s.name == name)
    }

    pub fn constant_index(&self, name: &str) -> Option<usize> {
        self.constants.iter().position(|s| s == name)
    }

    pub fn kind_of(&self, name: &str) -> Option<SymbolKind> {
        if self.predicate_index(name).is_some() {
            Some(SymbolKind::Predicate)
        } else if self.function_index(name).is_some() {
            Some(SymbolKind::Function)
        } else if self.constant_index(name).is_some() {
            Some(SymbolKind::Constant)
        } else {
            None
        }
    }

    /// Every symbol of `self` occurs in `other` with the same kind and arity.
    pub fn is_subvocabulary_of(&self, other: &Vocabulary) -> bool {
        self.predicates
            .iter()
            .all(|s| other.predicates.iter().any(|t| t == s))
            && self
                .functions
                .iter()
                .all(|s| other.functions.iter().any(|t| t == s))
            && self.constants.iter().all(|c| other.constants.contains(c))
    }

    pub fn is_empty(&self) -> bool {
        self.predicates.is_empty() && self.functions.is_empty() && self.constants.is_empty()
    }
}

/// ASCII identifier: a letter or `_`, then letters, digits or `_`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Vocabulary {
    /// The `vocabulary` header block of the structure file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vocabulary")?;
        for p in &self.predicates {
            writeln!(f, "predicate {} {}", p.name, p.arity)?;
        }
        for g in &self.functions {
            writeln!(f, "function {} {}", g.name, g.arity)?;
        }
        for c in &self.constants {
            writeln!(f, "constant {c}")?;
        }
        Ok(())
    }
}
