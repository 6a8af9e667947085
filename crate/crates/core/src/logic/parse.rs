//! Recursive-descent parser for the formula grammar.
//!
//! Continuous formulas:
//!
//! ```text
//! expr    := unary (("-." | "+.") unary)*            left associative
//! unary   := ("sup" | "inf") IDENT "." expr | primary
//! primary := literal | "min" "(" expr ("," expr)* ")" | "max" "(" ... ")"
//!          | "half" "(" expr ")" | "C" "[" point ("," point)* "]" "(" expr ")"
//!          | "(" expr ")" | IDENT [ "(" term ("," term)* ")" ]
//! literal := INT [ "/" INT [ "^" INT ] ]                 dyadic, in [0,1]
//! point   := "(" rational "," rational ")"
//! ```
//!
//! First-order formulas:
//!
//! ```text
//! expr  := conj ("|" conj)*
//! conj  := unary ("&" unary)*
//! unary := "~" unary | ("forall" | "exists") IDENT "." expr | "(" expr ")"
//!        | IDENT [ "(" term,* ")" ] | term "=" term
//! ```
//!
//! Whitespace is insignificant and `#` starts a comment that runs to the end
//! of the line. Quantifier bodies extend as far to the right as possible.

use thiserror::Error;

use super::{
    Atom, ContFormula, FOFormula, MonotoneConnective, SymbolKind, Term, Value, Vocabulary,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("{line}:{col}: unknown symbol `{name}`")]
    UnknownSymbol {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("{line}:{col}: `{name}` expects {expected} argument(s), found {found}")]
    Arity {
        line: usize,
        col: usize,
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("{line}:{col}: constant `{literal}` is not a dyadic rational in [0,1]")]
    NonDyadic {
        line: usize,
        col: usize,
        literal: String,
    },
    #[error("{line}:{col}: `{name}` is a {kind:?} and cannot be used here")]
    WrongKind {
        line: usize,
        col: usize,
        name: String,
        kind: SymbolKind,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    MinusDot,
    PlusDot,
    Tilde,
    Amp,
    Bar,
    Eq,
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let mut push = |tok: Tok, len: usize, i: &mut usize, col: &mut usize| {
            out.push(Spanned {
                tok,
                line: tl,
                col: tc,
            });
            *i += len;
            *col += len;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            '[' => push(Tok::LBracket, 1, &mut i, &mut col),
            ']' => push(Tok::RBracket, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            '/' => push(Tok::Slash, 1, &mut i, &mut col),
            '^' => push(Tok::Caret, 1, &mut i, &mut col),
            '~' => push(Tok::Tilde, 1, &mut i, &mut col),
            '&' => push(Tok::Amp, 1, &mut i, &mut col),
            '|' => push(Tok::Bar, 1, &mut i, &mut col),
            '=' => push(Tok::Eq, 1, &mut i, &mut col),
            '.' => push(Tok::Dot, 1, &mut i, &mut col),
            '-' | '+' if chars.get(i + 1) == Some(&'.') => {
                let tok = if c == '-' {
                    Tok::MinusDot
                } else {
                    Tok::PlusDot
                };
                push(tok, 2, &mut i, &mut col)
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let n = s.parse().map_err(|_| ParseError::Syntax {
                    line: tl,
                    col: tc,
                    msg: format!("integer `{s}` too large"),
                })?;
                col += i - start;
                out.push(Spanned {
                    tok: Tok::Int(n),
                    line: tl,
                    col: tc,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                col += i - start;
                out.push(Spanned {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line: tl,
                    col: tc,
                });
            }
            other => {
                return Err(ParseError::Syntax {
                    line: tl,
                    col: tc,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        col,
    });
    Ok(out)
}

const CONT_KEYWORDS: &[&str] = &["sup", "inf", "min", "max", "half"];
const FO_KEYWORDS: &[&str] = &["forall", "exists"];

/// A term before its head symbols are resolved against the vocabulary.
struct RawTerm {
    name: String,
    args: Option<Vec<RawTerm>>,
    line: usize,
    col: usize,
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    vocab: std::borrow::Cow<'a, Vocabulary>,
    infer: bool,
}

impl<'a> Parser<'a> {
    fn new(
        text: &str,
        vocab: std::borrow::Cow<'a, Vocabulary>,
        infer: bool,
    ) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            vocab,
            infer,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> (usize, usize) {
        let s = &self.toks[self.pos];
        (s.line, s.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError::Syntax {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.syntax(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => self.syntax(format!("expected identifier, found {}", describe(&other))),
        }
    }

    fn int(&mut self, what: &str) -> Result<i64, ParseError> {
        match *self.peek() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            ref other => self.syntax(format!("expected {what}, found {}", describe(other))),
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            self.syntax(format!("unexpected {}", describe(self.peek())))
        }
    }

    // -- terms -------------------------------------------------------------

    fn raw_term(&mut self) -> Result<RawTerm, ParseError> {
        let (line, col) = self.here();
        let name = self.ident()?;
        let args = if *self.peek() == Tok::LParen {
            self.bump();
            let mut args = vec![self.raw_term()?];
            while *self.peek() == Tok::Comma {
                self.bump();
                args.push(self.raw_term()?);
            }
            self.expect(Tok::RParen, "`)`")?;
            Some(args)
        } else {
            None
        };
        Ok(RawTerm {
            name,
            args,
            line,
            col,
        })
    }

    fn resolve_term(&mut self, raw: RawTerm) -> Result<Term, ParseError> {
        let RawTerm {
            name,
            args,
            line,
            col,
        } = raw;
        match args {
            None => match self.vocab.kind_of(&name) {
                Some(SymbolKind::Constant) => Ok(Term::Const(name)),
                None => Ok(Term::Var(name)),
                Some(kind) => Err(ParseError::WrongKind {
                    line,
                    col,
                    name,
                    kind,
                }),
            },
            Some(args) => {
                let found = args.len();
                match self.vocab.kind_of(&name) {
                    Some(SymbolKind::Function) => {
                        let expected =
                            self.vocab.functions()[self.vocab.function_index(&name).unwrap()].arity;
                        if expected != found {
                            return Err(ParseError::Arity {
                                line,
                                col,
                                name,
                                expected,
                                found,
                            });
                        }
                    }
                    None if self.infer => {
                        self.vocab
                            .to_mut()
                            .add_function(&name, found)
                            .expect("fresh identifier");
                    }
                    None => return Err(ParseError::UnknownSymbol { line, col, name }),
                    Some(kind) => {
                        return Err(ParseError::WrongKind {
                            line,
                            col,
                            name,
                            kind,
                        })
                    }
                }
                let args = args
                    .into_iter()
                    .map(|a| self.resolve_term(a))
                    .collect::<Result<_, _>>()?;
                Ok(Term::App(name, args))
            }
        }
    }

    /// Resolves `raw` as an atomic formula `P(args)`.
    fn resolve_atom(&mut self, raw: RawTerm) -> Result<Atom, ParseError> {
        let RawTerm {
            name,
            args,
            line,
            col,
        } = raw;
        let args = args.unwrap_or_default();
        let found = args.len();
        match self.vocab.kind_of(&name) {
            Some(SymbolKind::Predicate) => {
                let expected =
                    self.vocab.predicates()[self.vocab.predicate_index(&name).unwrap()].arity;
                if expected != found {
                    return Err(ParseError::Arity {
                        line,
                        col,
                        name,
                        expected,
                        found,
                    });
                }
            }
            None if self.infer => {
                self.vocab
                    .to_mut()
                    .add_predicate(&name, found)
                    .expect("fresh identifier");
            }
            None => return Err(ParseError::UnknownSymbol { line, col, name }),
            Some(kind) => {
                return Err(ParseError::WrongKind {
                    line,
                    col,
                    name,
                    kind,
                })
            }
        }
        let args = args
            .into_iter()
            .map(|a| self.resolve_term(a))
            .collect::<Result<_, _>>()?;
        Ok(Atom { pred: name, args })
    }

    fn binder(&mut self) -> Result<String, ParseError> {
        let x = self.ident()?;
        if is_keyword(&x) {
            return self.syntax(format!("keyword `{x}` cannot be bound"));
        }
        if self.vocab.kind_of(&x).is_some() {
            return self.syntax(format!("cannot bind declared symbol `{x}`"));
        }
        self.expect(Tok::Dot, "`.` after bound variable")?;
        Ok(x)
    }

    // -- numbers -----------------------------------------------------------

    fn rational(&mut self) -> Result<(Value, String), ParseError> {
        let (line, col) = self.here();
        let numer = self.int("number")?;
        let mut text = numer.to_string();
        let mut denom: i64 = 1;
        if *self.peek() == Tok::Slash {
            self.bump();
            let base = self.int("denominator")?;
            text.push_str(&format!("/{base}"));
            denom = base;
            if *self.peek() == Tok::Caret {
                self.bump();
                let exp = self.int("exponent")?;
                text.push_str(&format!("^{exp}"));
                denom = u32::try_from(exp)
                    .ok()
                    .and_then(|e| base.checked_pow(e))
                    .unwrap_or(0);
            }
        }
        let value = Value::new(numer, denom).map_err(|_| ParseError::NonDyadic {
            line,
            col,
            literal: text.clone(),
        })?;
        Ok((value, text))
    }

    fn dyadic(&mut self) -> Result<Value, ParseError> {
        let (line, col) = self.here();
        let (v, literal) = self.rational()?;
        if !v.is_dyadic() {
            return Err(ParseError::NonDyadic { line, col, literal });
        }
        Ok(v)
    }

    // -- continuous formulas -------------------------------------------------

    fn cont_expr(&mut self) -> Result<ContFormula, ParseError> {
        let mut lhs = self.cont_unary()?;
        loop {
            match self.peek() {
                Tok::MinusDot => {
                    self.bump();
                    lhs = ContFormula::trunc_sub(lhs, self.cont_unary()?);
                }
                Tok::PlusDot => {
                    self.bump();
                    lhs = ContFormula::trunc_add(lhs, self.cont_unary()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn cont_unary(&mut self) -> Result<ContFormula, ParseError> {
        match self.peek().clone() {
            Tok::Ident(kw) if kw == "sup" || kw == "inf" => {
                self.bump();
                let x = self.binder()?;
                let body = self.cont_expr()?;
                Ok(if kw == "sup" {
                    ContFormula::sup(&x, body)
                } else {
                    ContFormula::inf(&x, body)
                })
            }
            _ => self.cont_primary(),
        }
    }

    fn cont_list(&mut self) -> Result<Vec<ContFormula>, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut items = vec![self.cont_expr()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            items.push(self.cont_expr()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(items)
    }

    fn cont_primary(&mut self) -> Result<ContFormula, ParseError> {
        match self.peek().clone() {
            Tok::Int(_) => Ok(ContFormula::Const(self.dyadic()?)),
            Tok::LParen => {
                self.bump();
                let f = self.cont_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(kw) if kw == "min" || kw == "max" => {
                self.bump();
                let items = self.cont_list()?;
                Ok(if kw == "min" {
                    ContFormula::Min(items)
                } else {
                    ContFormula::Max(items)
                })
            }
            Tok::Ident(kw) if kw == "half" => {
                self.bump();
                let mut items = self.cont_list()?;
                if items.len() != 1 {
                    return self.syntax("half takes exactly one argument");
                }
                Ok(ContFormula::half(items.pop().unwrap()))
            }
            Tok::Ident(kw) if kw == "C" && *self.peek_at(1) == Tok::LBracket => {
                self.bump();
                let c = self.connective_literal()?;
                self.expect(Tok::LParen, "`(` after connective")?;
                let body = self.cont_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(ContFormula::apply(c, body))
            }
            Tok::Ident(kw) if CONT_KEYWORDS.contains(&kw.as_str()) => {
                self.syntax(format!("misplaced keyword `{kw}`"))
            }
            Tok::Ident(_) => {
                let raw = self.raw_term()?;
                Ok(ContFormula::Atomic(self.resolve_atom(raw)?))
            }
            other => self.syntax(format!("expected formula, found {}", describe(&other))),
        }
    }

    fn connective_literal(&mut self) -> Result<MonotoneConnective, ParseError> {
        let (line, col) = self.here();
        self.expect(Tok::LBracket, "`[`")?;
        let mut pts = Vec::new();
        loop {
            self.expect(Tok::LParen, "`(` opening a breakpoint")?;
            let (x, _) = self.rational()?;
            self.expect(Tok::Comma, "`,`")?;
            let (y, _) = self.rational()?;
            self.expect(Tok::RParen, "`)` closing a breakpoint")?;
            pts.push((x, y));
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        self.expect(Tok::RBracket, "`]`")?;
        MonotoneConnective::new(pts).map_err(|e| ParseError::Syntax {
            line,
            col,
            msg: e.to_string(),
        })
    }

    // -- first-order formulas ------------------------------------------------

    fn fo_expr(&mut self) -> Result<FOFormula, ParseError> {
        let mut items = vec![self.fo_conj()?];
        while *self.peek() == Tok::Bar {
            self.bump();
            items.push(self.fo_conj()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            FOFormula::Or(items)
        })
    }

    fn fo_conj(&mut self) -> Result<FOFormula, ParseError> {
        let mut items = vec![self.fo_unary()?];
        while *self.peek() == Tok::Amp {
            self.bump();
            items.push(self.fo_unary()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            FOFormula::And(items)
        })
    }

    fn fo_unary(&mut self) -> Result<FOFormula, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(FOFormula::not(self.fo_unary()?))
            }
            Tok::Ident(kw) if kw == "forall" || kw == "exists" => {
                self.bump();
                let x = self.binder()?;
                let body = self.fo_expr()?;
                Ok(if kw == "forall" {
                    FOFormula::forall(&x, body)
                } else {
                    FOFormula::exists(&x, body)
                })
            }
            Tok::LParen => {
                self.bump();
                let f = self.fo_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(name) => {
                let is_pred = self.vocab.kind_of(&name) == Some(SymbolKind::Predicate);
                let raw = self.raw_term()?;
                if !is_pred && *self.peek() == Tok::Eq {
                    self.bump();
                    let lhs = self.resolve_term(raw)?;
                    let rhs = self.raw_term()?;
                    let rhs = self.resolve_term(rhs)?;
                    return Ok(FOFormula::Equal(lhs, rhs));
                }
                if !is_pred && !self.infer {
                    // an undeclared head here is either a misspelt predicate or
                    // an equality missing its `=`
                    return match self.vocab.kind_of(&raw.name) {
                        None => Err(ParseError::UnknownSymbol {
                            line: raw.line,
                            col: raw.col,
                            name: raw.name,
                        }),
                        Some(_) => self.syntax("expected `=`"),
                    };
                }
                Ok(FOFormula::Atomic(self.resolve_atom(raw)?))
            }
            other => self.syntax(format!("expected formula, found {}", describe(&other))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int(n) => format!("`{n}`"),
        Tok::End => "end of input".to_string(),
        other => format!("{other:?}"),
    }
}

/// Parses a continuous formula over a fixed vocabulary.
pub fn parse_cont_formula(text: &str, vocab: &Vocabulary) -> Result<ContFormula, ParseError> {
    let mut p = Parser::new(text, std::borrow::Cow::Borrowed(vocab), false)?;
    let f = p.cont_expr()?;
    p.finish()?;
    Ok(f)
}

/// Parses a first-order formula over a fixed vocabulary.
pub fn parse_fo_formula(text: &str, vocab: &Vocabulary) -> Result<FOFormula, ParseError> {
    let mut p = Parser::new(text, std::borrow::Cow::Borrowed(vocab), false)?;
    let f = p.fo_expr()?;
    p.finish()?;
    Ok(f)
}

/// Parses a continuous formula, declaring symbols on first use: identifiers
/// in formula position become predicates, applied identifiers in term
/// position become functions, and bare identifiers in term position are
/// variables.
pub fn parse_cont_inferring(text: &str) -> Result<(ContFormula, Vocabulary), ParseError> {
    let mut p = Parser::new(text, std::borrow::Cow::Owned(Vocabulary::new()), true)?;
    let f = p.cont_expr()?;
    p.finish()?;
    Ok((f, p.vocab.into_owned()))
}

/// First-order counterpart of [`parse_cont_inferring`].
pub fn parse_fo_inferring(text: &str) -> Result<(FOFormula, Vocabulary), ParseError> {
    let mut p = Parser::new(text, std::borrow::Cow::Owned(Vocabulary::new()), true)?;
    let f = p.fo_expr()?;
    p.finish()?;
    Ok((f, p.vocab.into_owned()))
}

pub(crate) fn is_keyword(s: &str) -> bool {
    CONT_KEYWORDS.contains(&s) || FO_KEYWORDS.contains(&s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vocab() -> Vocabulary {
        Vocabulary::new()
            .with_predicate("P", 1)
            .and_then(|v| v.with_predicate("Q", 1))
            .and_then(|v| v.with_predicate("R", 1))
            .and_then(|v| v.with_predicate("E", 2))
            .and_then(|v| v.with_function("F", 1))
            .and_then(|v| v.with_constant("c"))
            .unwrap()
    }

    fn nullary() -> Vocabulary {
        Vocabulary::new()
            .with_predicate("P", 0)
            .and_then(|v| v.with_predicate("Q", 0))
            .unwrap()
    }

    fn v(s: &str) -> Value {
        s.parse().unwrap()
    }

    fn px(p: &str) -> ContFormula {
        ContFormula::atom(p, vec![Term::var("x")])
    }

    #[test]
    fn sup_of_min() {
        let f = parse_cont_formula("sup x . min(P(x), 1 -. Q(x))", &vocab()).unwrap();
        let expected = ContFormula::sup(
            "x",
            ContFormula::Min(vec![px("P"), ContFormula::negate(px("Q"))]),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn nullary_minus_literal() {
        let f = parse_cont_formula("P -. 1/2", &nullary()).unwrap();
        assert_eq!(
            f,
            ContFormula::trunc_sub(ContFormula::atom("P", vec![]), ContFormula::Const(v("1/2")))
        );
    }

    #[test]
    fn unknown_symbol() {
        let voc = Vocabulary::new().with_predicate("P", 1).unwrap();
        let err = parse_cont_formula("sup x . R(x)", &voc).unwrap_err();
        assert!(
            matches!(err, ParseError::UnknownSymbol { ref name, .. } if name == "R"),
            "{err}"
        );
    }

    #[test]
    fn literal_forms_and_errors() {
        let f = parse_cont_formula("3/2^3 +. 1", &nullary()).unwrap();
        assert_eq!(
            f,
            ContFormula::trunc_add(ContFormula::Const(v("3/8")), ContFormula::Const(Value::ONE))
        );
        assert!(matches!(
            parse_cont_formula("P -. 1/3", &nullary()).unwrap_err(),
            ParseError::NonDyadic { .. }
        ));
        assert!(matches!(
            parse_cont_formula("P -. 3/2", &nullary()).unwrap_err(),
            ParseError::NonDyadic { .. }
        ));
        assert!(matches!(
            parse_cont_formula("min(P,", &nullary()).unwrap_err(),
            ParseError::Syntax { .. }
        ));
    }

    #[test]
    fn syntax_error_position() {
        let err = parse_cont_formula("min(P,\n  Q ) )", &nullary()).unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                line: 2,
                col: 7,
                msg: "unexpected RParen".into()
            }
        );
    }

    #[test]
    fn connective_literal_and_comments() {
        let text = "# threshold\nC[(0,0),(1/3,1/2),(1,1)](P) # trailing\n";
        let f = parse_cont_formula(text, &nullary()).unwrap();
        match f {
            ContFormula::Apply(c, _) => assert_eq!(c.eval(v("1/3")), v("1/2")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_cont_formula("C[(0,1),(1,0)](P)", &nullary()).is_err());
    }

    #[test]
    fn terms_and_arity() {
        let f = parse_cont_formula("inf y . E(F(y), c)", &vocab()).unwrap();
        assert_eq!(
            f,
            ContFormula::inf(
                "y",
                ContFormula::atom(
                    "E",
                    vec![
                        Term::App("F".into(), vec![Term::var("y")]),
                        Term::Const("c".into())
                    ]
                )
            )
        );
        assert!(matches!(
            parse_cont_formula("E(x)", &vocab()).unwrap_err(),
            ParseError::Arity { .. }
        ));
        assert!(matches!(
            parse_cont_formula("P(F(x, x))", &vocab()).unwrap_err(),
            ParseError::Arity { .. }
        ));
    }

    #[test]
    fn binary_ops_are_left_associative() {
        let f = parse_cont_formula("P -. 1/2 +. Q", &nullary()).unwrap();
        let p = ContFormula::atom("P", vec![]);
        let q = ContFormula::atom("Q", vec![]);
        assert_eq!(
            f,
            ContFormula::trunc_add(ContFormula::trunc_sub(p, ContFormula::Const(v("1/2"))), q)
        );
    }

    #[test]
    fn fo_examples() {
        let f = parse_fo_formula("forall x . (~P(x) | Q(x))", &vocab()).unwrap();
        let expected = FOFormula::forall(
            "x",
            FOFormula::Or(vec![
                FOFormula::not(FOFormula::atom("P", vec![Term::var("x")])),
                FOFormula::atom("Q", vec![Term::var("x")]),
            ]),
        );
        assert_eq!(f, expected);

        let g = parse_fo_formula("P | Q | ~(P | Q)", &nullary()).unwrap();
        let (p, q) = (FOFormula::atom("P", vec![]), FOFormula::atom("Q", vec![]));
        assert_eq!(
            g,
            FOFormula::Or(vec![
                p.clone(),
                q.clone(),
                FOFormula::not(FOFormula::Or(vec![p, q]))
            ])
        );

        let two = Vocabulary::new().with_predicate("P", 1).unwrap();
        assert!(matches!(
            parse_fo_formula("P(x,y)", &two).unwrap_err(),
            ParseError::Arity { .. }
        ));
    }

    #[test]
    fn fo_equality_and_precedence() {
        let f = parse_fo_formula("exists y . F(y) = c & P(y) | x = y", &vocab()).unwrap();
        let expected = FOFormula::exists(
            "y",
            FOFormula::Or(vec![
                FOFormula::And(vec![
                    FOFormula::Equal(
                        Term::App("F".into(), vec![Term::var("y")]),
                        Term::Const("c".into()),
                    ),
                    FOFormula::atom("P", vec![Term::var("y")]),
                ]),
                FOFormula::Equal(Term::var("x"), Term::var("y")),
            ]),
        );
        assert_eq!(f, expected);
        assert!(matches!(
            parse_fo_formula("S(x)", &vocab()).unwrap_err(),
            ParseError::UnknownSymbol { .. }
        ));
    }

    #[test]
    fn inferring_mode_builds_vocabulary() {
        let (f, voc) = parse_fo_inferring("P | Q | ~(P | Q)").unwrap();
        assert_eq!(voc, nullary());
        assert_eq!(f, parse_fo_formula("P | Q | ~(P | Q)", &nullary()).unwrap());
        let (_, voc) = parse_cont_inferring("sup x . E(G(x), x) -. 1/2").unwrap();
        assert_eq!(voc.predicates()[0].arity, 2);
        assert_eq!(voc.functions()[0].name, "G");
        let (_, voc) = parse_fo_inferring("forall x . G(x) = x | P(x)").unwrap();
        assert_eq!(voc.functions().len(), 1);
        assert_eq!(voc.predicates().len(), 1);
    }
}
