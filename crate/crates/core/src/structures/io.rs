//! Text format for finite structures.
//!
//! ```text
//! vocabulary
//! predicate P 2
//! function F 1
//! constant c
//! universe 3
//! P 0 1 = 3/4
//! F 1 -> 0
//! c = 2
//! ```
//!
//! Every table entry must be given exactly once. `#` starts a comment.

use std::fmt::{Display, Write as _};
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use super::{tuple_count, tuple_index, tuples, Structure, StructureError};
use crate::logic::{SymbolKind, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureFileError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("missing entry: {0}")]
    Missing(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("{0}")]
    Io(String),
}

pub fn write_structure<T: Clone + Display>(m: &Structure<T>) -> String {
    let mut out = m.vocabulary().to_string();
    let _ = writeln!(out, "universe {}", m.size());
    let vocab = m.vocabulary();
    let args = |t: &[usize]| t.iter().map(|a| format!(" {a}")).collect::<String>();
    for (p, s) in vocab.predicates().iter().enumerate() {
        for t in tuples(m.size(), s.arity) {
            let _ = writeln!(out, "{}{} = {}", s.name, args(&t), m.pred(p, &t));
        }
    }
    for (g, s) in vocab.functions().iter().enumerate() {
        for t in tuples(m.size(), s.arity) {
            let _ = writeln!(out, "{}{} -> {}", s.name, args(&t), m.func(g, &t));
        }
    }
    for (c, name) in vocab.constants().iter().enumerate() {
        let _ = writeln!(out, "{name} = {}", m.constant(c));
    }
    out
}

fn line_err(line: usize, msg: impl Into<String>) -> StructureFileError {
    StructureFileError::Line {
        line,
        msg: msg.into(),
    }
}

pub fn parse_structure<T: Clone + FromStr>(text: &str) -> Result<Structure<T>, StructureFileError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .peekable();

    match lines.next() {
        Some((_, "vocabulary")) => {}
        Some((n, _)) => return Err(line_err(n, "expected `vocabulary`")),
        None => return Err(line_err(1, "empty file")),
    }
    let mut vocab = Vocabulary::new();
    let size = loop {
        let Some((n, line)) = lines.next() else {
            return Err(line_err(0, "missing `universe` line"));
        };
        let words: Vec<&str> = line.split_whitespace().collect();
        let result = match words.as_slice() {
            ["predicate", name, arity] => {
                let arity = arity.parse().map_err(|_| line_err(n, "bad arity"))?;
                vocab.add_predicate(name, arity)
            }
            ["function", name, arity] => {
                let arity = arity.parse().map_err(|_| line_err(n, "bad arity"))?;
                vocab.add_function(name, arity)
            }
            ["constant", name] => vocab.add_constant(name),
            ["universe", size] => {
                break size
                    .parse::<usize>()
                    .map_err(|_| line_err(n, "bad universe size"))?
            }
            _ => {
                return Err(line_err(
                    n,
                    format!("unexpected `{line}` in vocabulary block"),
                ))
            }
        };
        result.map_err(|e| line_err(n, e.to_string()))?;
    };
    if size == 0 {
        return Err(StructureError::EmptyUniverse.into());
    }

    let mut preds: Vec<Vec<Option<T>>> = vocab
        .predicates()
        .iter()
        .map(|s| vec![None; tuple_count(size, s.arity)])
        .collect();
    let mut funcs: Vec<Vec<Option<usize>>> = vocab
        .functions()
        .iter()
        .map(|s| vec![None; tuple_count(size, s.arity)])
        .collect();
    let mut consts: Vec<Option<usize>> = vec![None; vocab.constants().len()];

    let elem = |n: usize, w: &str| -> Result<usize, StructureFileError> {
        match w.parse::<usize>() {
            Ok(e) if e < size => Ok(e),
            _ => Err(line_err(
                n,
                format!("`{w}` is not an element of the universe"),
            )),
        }
    };

    for (n, line) in lines {
        let (lhs, rhs, arrow) = if let Some((l, r)) = line.split_once("->") {
            (l, r, true)
        } else if let Some((l, r)) = line.split_once('=') {
            (l, r, false)
        } else {
            return Err(line_err(n, "expected `=` or `->`"));
        };
        let mut words = lhs.split_whitespace();
        let name = words.next().ok_or_else(|| line_err(n, "missing symbol"))?;
        let args = words.map(|w| elem(n, w)).collect::<Result<Vec<_>, _>>()?;
        let rhs = rhs.trim();
        match (vocab.kind_of(name), arrow) {
            (Some(SymbolKind::Predicate), false) => {
                let p = vocab.predicate_index(name).unwrap();
                if args.len() != vocab.predicates()[p].arity {
                    return Err(line_err(n, format!("wrong number of arguments for {name}")));
                }
                let v = rhs
                    .parse::<T>()
                    .map_err(|_| line_err(n, format!("bad value `{rhs}`")))?;
                let slot = &mut preds[p][tuple_index(size, &args)];
                if slot.replace(v).is_some() {
                    return Err(line_err(n, "duplicate entry"));
                }
            }
            (Some(SymbolKind::Function), true) => {
                let g = vocab.function_index(name).unwrap();
                if args.len() != vocab.functions()[g].arity {
                    return Err(line_err(n, format!("wrong number of arguments for {name}")));
                }
                let v = elem(n, rhs)?;
                if funcs[g][tuple_index(size, &args)].replace(v).is_some() {
                    return Err(line_err(n, "duplicate entry"));
                }
            }
            (Some(SymbolKind::Constant), false) if args.is_empty() => {
                let c = vocab.constant_index(name).unwrap();
                if consts[c].replace(elem(n, rhs)?).is_some() {
                    return Err(line_err(n, "duplicate entry"));
                }
            }
            (None, _) => return Err(line_err(n, format!("unknown symbol `{name}`"))),
            _ => return Err(line_err(n, format!("malformed entry for `{name}`"))),
        }
    }

    let missing = |name: &str, i: usize, arity: usize| {
        let t = super::tuple_at(size, arity, i);
        StructureFileError::Missing(format!(
            "{name}{}",
            t.iter().map(|a| format!(" {a}")).collect::<String>()
        ))
    };
    let mut pred_tables = Vec::new();
    for (s, table) in vocab.predicates().iter().zip(preds) {
        let mut out = Vec::with_capacity(table.len());
        for (i, v) in table.into_iter().enumerate() {
            out.push(v.ok_or_else(|| missing(&s.name, i, s.arity))?);
        }
        pred_tables.push(out);
    }
    let mut func_tables = Vec::new();
    for (s, table) in vocab.functions().iter().zip(funcs) {
        let mut out = Vec::with_capacity(table.len());
        for (i, v) in table.into_iter().enumerate() {
            out.push(v.ok_or_else(|| missing(&s.name, i, s.arity))?);
        }
        func_tables.push(out);
    }
    let const_values = vocab
        .constants()
        .iter()
        .zip(consts)
        .map(|(c, v)| v.ok_or_else(|| StructureFileError::Missing(c.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Structure::new(
        vocab,
        size,
        pred_tables,
        func_tables,
        const_values,
    )?)
}

pub fn read_structure<T: Clone + FromStr>(path: &Path) -> Result<Structure<T>, StructureFileError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| StructureFileError::Io(format!("{}: {e}", path.display())))?;
    parse_structure(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Value;

    const SAMPLE: &str = "\
vocabulary
predicate P 2
function F 1
constant c
universe 2
P 0 0 = 0
P 0 1 = 3/4   # comment
P 1 0 = 1/2
P 1 1 = 1
F 0 -> 1
F 1 -> 0
c = 1
";

    #[test]
    fn round_trip() {
        let m: Structure<Value> = parse_structure(SAMPLE).unwrap();
        assert_eq!(*m.pred(0, &[0, 1]), Value::new(3, 4).unwrap());
        assert_eq!(m.func(0, &[1]), 0);
        assert_eq!(m.constant(0), 1);
        let again: Structure<Value> = parse_structure(&write_structure(&m)).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn boolean_tables() {
        let text = "vocabulary\npredicate P 1\nuniverse 2\nP 0 = true\nP 1 = false\n";
        let k: Structure<bool> = parse_structure(text).unwrap();
        assert!(*k.pred(0, &[0]));
        assert_eq!(parse_structure::<bool>(&write_structure(&k)).unwrap(), k);
    }

    #[test]
    fn missing_and_bad_entries() {
        let short = SAMPLE.replace("P 1 0 = 1/2\n", "");
        assert_eq!(
            parse_structure::<Value>(&short).unwrap_err(),
            StructureFileError::Missing("P 1 0".into())
        );
        let dup = SAMPLE.replace("c = 1", "c = 1\nc = 0");
        assert!(matches!(
            parse_structure::<Value>(&dup),
            Err(StructureFileError::Line { line: 13, .. })
        ));
        let out = SAMPLE.replace("F 0 -> 1", "F 0 -> 2");
        assert!(parse_structure::<Value>(&out).is_err());
        let bad = SAMPLE.replace("= 3/4", "= 5/4");
        assert!(parse_structure::<Value>(&bad).is_err());
        let unknown = SAMPLE.replace("c = 1", "d = 1");
        assert!(parse_structure::<Value>(&unknown).is_err());
    }
}
