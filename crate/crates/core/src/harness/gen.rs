//! Seeded random instances. Every choice is uniform over its options.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::downup::{threshold_structure, Grid};
use crate::logic::{Atom, ContFormula, FOFormula, MonotoneConnective, Term, Value, Vocabulary};
use crate::products::Filter;
use crate::structures::{reduce_structure, tuple_count, tuples, Structure};

use super::FormulaClass;

pub fn gen_value<R: Rng>(rng: &mut R, grid: Grid) -> Value {
    *grid.values().choose(rng).unwrap()
}

fn gen_tables<R: Rng, T>(
    rng: &mut R,
    vocab: &Vocabulary,
    size: usize,
    mut value: impl FnMut(&mut R) -> T,
) -> (Vec<Vec<T>>, Vec<Vec<usize>>, Vec<usize>) {
    let preds = vocab
        .predicates()
        .iter()
        .map(|s| {
            (0..tuple_count(size, s.arity))
                .map(|_| value(rng))
                .collect()
        })
        .collect();
    let funcs = vocab
        .functions()
        .iter()
        .map(|s| {
            (0..tuple_count(size, s.arity))
                .map(|_| rng.gen_range(0..size))
                .collect()
        })
        .collect();
    let consts = (0..vocab.constants().len())
        .map(|_| rng.gen_range(0..size))
        .collect();
    (preds, funcs, consts)
}

/// Predicate values drawn from the grid together with `1`.
pub fn gen_structure<R: Rng>(
    rng: &mut R,
    vocab: &Vocabulary,
    size: usize,
    grid: Grid,
) -> Structure<Value> {
    let values = grid.values();
    let (preds, funcs, consts) = gen_tables(rng, vocab, size, |rng| *values.choose(rng).unwrap());
    Structure::new(vocab.clone(), size, preds, funcs, consts)
        .expect("generated tables have the right shape")
}

/// A grid-valued reduced structure with at most `size` elements.
pub fn gen_reduced_structure<R: Rng>(
    rng: &mut R,
    vocab: &Vocabulary,
    size: usize,
    grid: Grid,
) -> Structure<Value> {
    reduce_structure(&gen_structure(rng, vocab, size, grid))
        .expect("reduction is consistent")
        .0
}

pub fn gen_fo_structure<R: Rng>(rng: &mut R, vocab: &Vocabulary, size: usize) -> Structure<bool> {
    let (preds, funcs, consts) = gen_tables(rng, vocab, size, |rng| rng.gen_bool(0.5));
    Structure::new(vocab.clone(), size, preds, funcs, consts)
        .expect("generated tables have the right shape")
}

/// An increasing first-order structure over the threshold vocabulary of
/// `base`, not necessarily the image of a reduced structure.
pub fn gen_increasing_structure<R: Rng>(
    rng: &mut R,
    base: &Vocabulary,
    size: usize,
    grid: Grid,
) -> Structure<bool> {
    threshold_structure(&gen_structure(rng, base, size, grid), grid)
        .expect("base vocabulary translates")
}

/// A proper filter with a uniformly chosen nonempty kernel.
pub fn gen_filter<R: Rng>(rng: &mut R, n: usize) -> Filter {
    let mask: u32 = rng.gen_range(1..(1u32 << n));
    let kernel: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
    Filter::new(n, &kernel).expect("nonempty kernel")
}

/// A monotone connective with up to three interior breakpoints on the
/// denominator-16 grid.
pub fn gen_connective<R: Rng>(rng: &mut R) -> MonotoneConnective {
    let interior = rng.gen_range(0..=3);
    let mut xs: Vec<i64> = (1..16).collect();
    xs.shuffle(rng);
    let mut xs: Vec<i64> = xs.into_iter().take(interior).collect();
    xs.sort();
    xs.insert(0, 0);
    xs.push(16);
    let mut ys: Vec<i64> = (0..xs.len()).map(|_| rng.gen_range(0..=16)).collect();
    ys.sort();
    let pts = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| (Value::dyadic(x, 4), Value::dyadic(y, 4)))
        .collect();
    MonotoneConnective::new(pts).expect("sorted breakpoints")
}

/// Formula shape parameters.
#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub depth: usize,
    pub quantifiers: usize,
}

struct FormulaGen<'a, R> {
    rng: &'a mut R,
    vocab: &'a Vocabulary,
    grid: Grid,
    scope: Vec<String>,
}

const VARS: [&str; 3] = ["x", "y", "z"];

impl<R: Rng> FormulaGen<'_, R> {
    fn term(&mut self, depth: usize) -> Option<Term> {
        let mut options: Vec<Term> = self.scope.iter().map(|x| Term::Var(x.clone())).collect();
        options.extend(
            self.vocab
                .constants()
                .iter()
                .map(|c| Term::Const(c.clone())),
        );
        let funcs: Vec<_> = self.vocab.functions().to_vec();
        if depth > 0 && !funcs.is_empty() && !options.is_empty() && self.rng.gen_bool(0.3) {
            let f = funcs.choose(self.rng).unwrap();
            let args = (0..f.arity)
                .map(|_| self.term(depth - 1))
                .collect::<Option<Vec<_>>>()?;
            return Some(Term::App(f.name.clone(), args));
        }
        options.choose(self.rng).cloned()
    }

    /// A random atom whose terms use only variables in scope, if any
    /// predicate admits one.
    fn atom(&mut self) -> Option<Atom> {
        let have_terms = !self.scope.is_empty() || !self.vocab.constants().is_empty();
        let preds: Vec<_> = self
            .vocab
            .predicates()
            .iter()
            .filter(|s| s.arity == 0 || have_terms)
            .cloned()
            .collect();
        let p = preds.choose(self.rng)?;
        let args = (0..p.arity)
            .map(|_| self.term(1))
            .collect::<Option<Vec<_>>>()?;
        Some(Atom::new(&p.name, args))
    }

    fn konst(&mut self) -> ContFormula {
        ContFormula::Const(gen_value(self.rng, self.grid))
    }

    fn atom_or_const(&mut self) -> ContFormula {
        match self.atom() {
            Some(a) if self.rng.gen_bool(0.9) => ContFormula::Atomic(a),
            _ => self.konst(),
        }
    }

    fn bind<T>(&mut self, body: impl FnOnce(&mut Self) -> T) -> (String, T) {
        let x = VARS[self.scope.len() % VARS.len()].to_string();
        self.scope.push(x.clone());
        let b = body(self);
        self.scope.pop();
        (x, b)
    }

    fn quantifier_first(&self, q: usize) -> bool {
        q > 0 && self.scope.is_empty() && self.vocab.constants().is_empty()
    }

    /// The full grammar, optionally without connective applications or
    /// quantifiers.
    fn general(&mut self, d: usize, q: usize, apply: bool) -> ContFormula {
        if self.quantifier_first(q) {
            let (x, b) = self.bind(|g| g.general(d.saturating_sub(1), q - 1, apply));
            return if self.rng.gen_bool(0.5) {
                ContFormula::sup(&x, b)
            } else {
                ContFormula::inf(&x, b)
            };
        }
        if d == 0 {
            return self.atom_or_const();
        }
        let kinds = if apply { 8 } else { 7 };
        match self.rng.gen_range(0..kinds + usize::from(q > 0) * 2) {
            0 => self.atom_or_const(),
            1 => ContFormula::Min(self.children(d, q, apply)),
            2 => ContFormula::Max(self.children(d, q, apply)),
            3 => {
                ContFormula::trunc_sub(self.general(d - 1, q, apply), self.general(d - 1, q, apply))
            }
            4 => {
                ContFormula::trunc_add(self.general(d - 1, q, apply), self.general(d - 1, q, apply))
            }
            5 => ContFormula::half(self.general(d - 1, q, apply)),
            6 => ContFormula::negate(self.general(d - 1, q, apply)),
            7 if apply => {
                let c = gen_connective(self.rng);
                ContFormula::apply(c, self.general(d - 1, q, apply))
            }
            k => {
                let (x, b) = self.bind(|g| g.general(d - 1, q - 1, apply));
                if k % 2 == 0 {
                    ContFormula::sup(&x, b)
                } else {
                    ContFormula::inf(&x, b)
                }
            }
        }
    }

    fn children(&mut self, d: usize, q: usize, apply: bool) -> Vec<ContFormula> {
        let n = self.rng.gen_range(2..=3);
        (0..n).map(|_| self.general(d - 1, q, apply)).collect()
    }

    fn literal(&mut self, negated: bool) -> Option<ContFormula> {
        let a = ContFormula::Atomic(self.atom()?);
        let base = if negated { ContFormula::negate(a) } else { a };
        Some(match self.rng.gen_range(0..5) {
            0 => base,
            1 => ContFormula::trunc_sub(base, self.konst()),
            2 => ContFormula::half(base),
            3 => ContFormula::trunc_add(base, self.konst()),
            _ => ContFormula::apply(gen_connective(self.rng), base),
        })
    }

    fn primitive(&mut self) -> ContFormula {
        let n = self.rng.gen_range(1..=3);
        let positive = self.rng.gen_range(0..=n);
        let mut lits: Vec<ContFormula> =
            (0..n).filter_map(|i| self.literal(i != positive)).collect();
        if lits.is_empty() || self.rng.gen_bool(0.1) {
            lits.push(self.konst());
        }
        if lits.len() == 1 {
            lits.pop().unwrap()
        } else {
            ContFormula::Min(lits)
        }
    }

    fn conditional(&mut self, d: usize, q: usize) -> ContFormula {
        if self.quantifier_first(q) {
            let (x, b) = self.bind(|g| g.conditional(d.saturating_sub(1), q - 1));
            return if self.rng.gen_bool(0.5) {
                ContFormula::sup(&x, b)
            } else {
                ContFormula::inf(&x, b)
            };
        }
        if d == 0 {
            return self.primitive();
        }
        match self.rng.gen_range(0..2 + usize::from(q > 0) * 2) {
            0 => self.primitive(),
            1 => {
                let n = self.rng.gen_range(2..=3);
                ContFormula::Max((0..n).map(|_| self.conditional(d - 1, q)).collect())
            }
            k => {
                let (x, b) = self.bind(|g| g.conditional(d - 1, q - 1));
                if k == 2 {
                    ContFormula::sup(&x, b)
                } else {
                    ContFormula::inf(&x, b)
                }
            }
        }
    }

    /// Closure of quantifier-free formulas (or of atoms, for `positive`)
    /// under increasing connectives and the allowed quantifiers.
    fn monotone(&mut self, d: usize, q: usize, class: FormulaClass) -> ContFormula {
        let (inf_ok, sup_ok) = match class {
            FormulaClass::Existential => (true, false),
            FormulaClass::Universal => (false, true),
            _ => (true, true),
        };
        let quant = q > 0;
        if d == 0 || (class != FormulaClass::Positive && self.rng.gen_bool(0.2)) {
            return if class == FormulaClass::Positive {
                self.atom_or_const()
            } else {
                self.general(d.min(2), 0, true)
            };
        }
        match self.rng.gen_range(0..6 + usize::from(quant)) {
            0 => ContFormula::Min(vec![
                self.monotone(d - 1, q, class),
                self.monotone(d - 1, q, class),
            ]),
            1 => ContFormula::Max(vec![
                self.monotone(d - 1, q, class),
                self.monotone(d - 1, q, class),
            ]),
            2 => ContFormula::trunc_add(
                self.monotone(d - 1, q, class),
                self.monotone(d - 1, q, class),
            ),
            3 => ContFormula::half(self.monotone(d - 1, q, class)),
            4 => ContFormula::apply(gen_connective(self.rng), self.monotone(d - 1, q, class)),
            5 => {
                let right = if class == FormulaClass::Positive {
                    self.konst()
                } else {
                    self.general(d.min(2) - 1, 0, true)
                };
                ContFormula::trunc_sub(self.monotone(d - 1, q, class), right)
            }
            _ => {
                let (x, b) = self.bind(|g| g.monotone(d - 1, q - 1, class));
                let use_sup = match (inf_ok, sup_ok) {
                    (true, true) => self.rng.gen_bool(0.5),
                    (_, sup) => sup,
                };
                if use_sup {
                    ContFormula::sup(&x, b)
                } else {
                    ContFormula::inf(&x, b)
                }
            }
        }
    }
}

/// A continuous formula of the given class whose free variables are among
/// `free`.
pub fn gen_cont_formula<R: Rng>(
    rng: &mut R,
    vocab: &Vocabulary,
    grid: Grid,
    class: FormulaClass,
    shape: Shape,
    free: &[&str],
) -> ContFormula {
    let mut g = FormulaGen {
        rng,
        vocab,
        grid,
        scope: free.iter().map(|s| s.to_string()).collect(),
    };
    let Shape {
        depth: d,
        quantifiers: q,
    } = shape;
    match class {
        FormulaClass::Unrestricted => g.general(d, q, true),
        FormulaClass::Restricted => g.general(d, q, false),
        FormulaClass::QuantifierFree => g.general(d, 0, true),
        FormulaClass::Conditional => g.conditional(d, q),
        FormulaClass::PrimitiveConditional => g.primitive(),
        FormulaClass::Existential | FormulaClass::Universal | FormulaClass::Positive => {
            g.monotone(d, q, class)
        }
        FormulaClass::Horn | FormulaClass::FirstOrder => {
            panic!("first-order classes are generated by gen_fo_formula")
        }
    }
}

/// A continuous sentence of the given class.
pub fn gen_cont_sentence<R: Rng>(
    rng: &mut R,
    vocab: &Vocabulary,
    grid: Grid,
    class: FormulaClass,
    shape: Shape,
) -> ContFormula {
    gen_cont_formula(rng, vocab, grid, class, shape, &[])
}

struct FoGen<'a, R> {
    inner: FormulaGen<'a, R>,
    equality: bool,
}

impl<R: Rng> FoGen<'_, R> {
    fn atomic(&mut self) -> FOFormula {
        if self.equality && !self.inner.scope.is_empty() && self.inner.rng.gen_bool(0.2) {
            if let (Some(s), Some(t)) = (self.inner.term(1), self.inner.term(1)) {
                return FOFormula::Equal(s, t);
            }
        }
        match self.inner.atom() {
            Some(a) => FOFormula::Atomic(a),
            None => panic!("vocabulary has no usable predicate"),
        }
    }

    fn basic_horn(&mut self) -> FOFormula {
        let n = self.inner.rng.gen_range(1..=3);
        let positive = self.inner.rng.gen_range(0..=n);
        let lits: Vec<FOFormula> = (0..n)
            .map(|i| {
                let a = self.atomic();
                if i == positive {
                    a
                } else {
                    FOFormula::not(a)
                }
            })
            .collect();
        if lits.len() == 1 {
            lits.into_iter().next().unwrap()
        } else {
            FOFormula::Or(lits)
        }
    }

    fn quantified(&mut self, body: impl FnOnce(&mut Self) -> FOFormula) -> FOFormula {
        let x = VARS[self.inner.scope.len() % VARS.len()].to_string();
        self.inner.scope.push(x.clone());
        let b = body(self);
        self.inner.scope.pop();
        if self.inner.rng.gen_bool(0.5) {
            FOFormula::forall(&x, b)
        } else {
            FOFormula::exists(&x, b)
        }
    }

    fn needs_binder(&self, q: usize) -> bool {
        q > 0 && self.inner.quantifier_first(q)
    }

    fn horn(&mut self, d: usize, q: usize) -> FOFormula {
        if self.needs_binder(q) {
            return self.quantified(|g| g.horn(d.saturating_sub(1), q - 1));
        }
        if d == 0 {
            return self.basic_horn();
        }
        match self.inner.rng.gen_range(0..2 + usize::from(q > 0)) {
            0 => self.basic_horn(),
            1 => FOFormula::And(vec![self.horn(d - 1, q), self.horn(d - 1, q)]),
            _ => self.quantified(|g| g.horn(d - 1, q - 1)),
        }
    }

    fn any(&mut self, d: usize, q: usize) -> FOFormula {
        if self.needs_binder(q) {
            return self.quantified(|g| g.any(d.saturating_sub(1), q - 1));
        }
        if d == 0 {
            return self.atomic();
        }
        match self.inner.rng.gen_range(0..4 + usize::from(q > 0)) {
            0 => self.atomic(),
            1 => FOFormula::not(self.any(d - 1, q)),
            2 => FOFormula::And(vec![self.any(d - 1, q), self.any(d - 1, q)]),
            3 => FOFormula::Or(vec![self.any(d - 1, q), self.any(d - 1, q)]),
            _ => self.quantified(|g| g.any(d - 1, q - 1)),
        }
    }
}

/// A first-order formula, Horn or unrestricted, with free variables among
/// `free`.
pub fn gen_fo_formula<R: Rng>(
    rng: &mut R,
    vocab: &Vocabulary,
    class: FormulaClass,
    shape: Shape,
    equality: bool,
    free: &[&str],
) -> FOFormula {
    let inner = FormulaGen {
        rng,
        vocab,
        grid: Grid::default(),
        scope: free.iter().map(|s| s.to_string()).collect(),
    };
    let mut g = FoGen { inner, equality };
    match class {
        FormulaClass::Horn => g.horn(shape.depth, shape.quantifiers),
        FormulaClass::FirstOrder => g.any(shape.depth, shape.quantifiers),
        _ => panic!("continuous classes are generated by gen_cont_formula"),
    }
}

/// A random element tuple of the given arity.
pub fn gen_tuple<R: Rng>(rng: &mut R, size: usize, arity: usize) -> Vec<usize> {
    (0..arity).map(|_| rng.gen_range(0..size)).collect()
}

/// `m` together with an embedding into it: `h` is onto a subset closed
/// under the functions and containing the constants, and the source takes
/// predicate values by pullback. Sources may repeat elements.
pub fn gen_embedding<R: Rng>(
    rng: &mut R,
    n: &Structure<Value>,
    max_size: usize,
) -> (Structure<Value>, Vec<usize>) {
    let vocab = n.vocabulary();
    let mut image: Vec<usize> = (0..vocab.constants().len())
        .map(|c| n.constant(c))
        .collect();
    image.push(rng.gen_range(0..n.size()));
    image.sort();
    image.dedup();
    loop {
        let mut grown = image.clone();
        for (g, s) in vocab.functions().iter().enumerate() {
            let k = image.len();
            for i in 0..tuple_count(k, s.arity) {
                let t: Vec<usize> = crate::structures::tuple_at(k, s.arity, i)
                    .into_iter()
                    .map(|j| image[j])
                    .collect();
                grown.push(n.func(g, &t));
            }
        }
        grown.sort();
        grown.dedup();
        if grown.len() == image.len() {
            break;
        }
        image = grown;
    }
    pullback(rng, n, &image, max_size, |_, v| v)
}

/// `m` together with a homomorphism onto `n`: `P^M = P^N ∔ δ` with `δ` a
/// random grid value, often `0`.
pub fn gen_homomorphism<R: Rng>(
    rng: &mut R,
    n: &Structure<Value>,
    max_size: usize,
    grid: Grid,
) -> (Structure<Value>, Vec<usize>) {
    let all: Vec<usize> = (0..n.size()).collect();
    pullback(rng, n, &all, max_size, |rng, v| {
        if rng.gen_bool(0.5) {
            v
        } else {
            v.trunc_add(gen_value(rng, grid))
        }
    })
}

fn pullback<R: Rng>(
    rng: &mut R,
    n: &Structure<Value>,
    targets: &[usize],
    max_size: usize,
    mut adjust: impl FnMut(&mut R, Value) -> Value,
) -> (Structure<Value>, Vec<usize>) {
    let size = rng.gen_range(targets.len()..=max_size.max(targets.len()));
    let mut h: Vec<usize> = targets.to_vec();
    while h.len() < size {
        h.push(*targets.choose(rng).unwrap());
    }
    h.shuffle(rng);
    let preimages = |b: usize, rng: &mut R| -> usize {
        let options: Vec<usize> = (0..h.len()).filter(|&a| h[a] == b).collect();
        *options.choose(rng).expect("target is hit")
    };
    let vocab = n.vocabulary().clone();
    let preds = vocab
        .predicates()
        .iter()
        .enumerate()
        .map(|(p, s)| {
            tuples(size, s.arity)
                .map(|t| {
                    let v = *n.pred(p, &t.iter().map(|&a| h[a]).collect::<Vec<_>>());
                    adjust(rng, v)
                })
                .collect()
        })
        .collect();
    let funcs = vocab
        .functions()
        .iter()
        .enumerate()
        .map(|(g, s)| {
            tuples(size, s.arity)
                .map(|t| preimages(n.func(g, &t.iter().map(|&a| h[a]).collect::<Vec<_>>()), rng))
                .collect()
        })
        .collect();
    let consts = (0..vocab.constants().len())
        .map(|c| preimages(n.constant(c), rng))
        .collect();
    let m = Structure::new(vocab, size, preds, funcs, consts).expect("pullback tables are total");
    (m, h)
}
