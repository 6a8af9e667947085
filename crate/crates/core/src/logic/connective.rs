//! Piecewise-linear nondecreasing unary connectives with rational breakpoints.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{LogicError, Value};

/// A continuous nondecreasing map `[0,1] -> [0,1]` given by breakpoints
/// `(x_0, y_0), ..., (x_n, y_n)` with `x_0 = 0`, `x_n = 1`, strictly
/// increasing `x` and nondecreasing `y`, evaluated by linear interpolation.
///
/// Collinear interior breakpoints are dropped on construction, so two
/// connectives are equal as values iff they are equal as functions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<(Value, Value)>", into = "Vec<(Value, Value)>")]
pub struct MonotoneConnective {
    points: Vec<(Value, Value)>,
}

impl MonotoneConnective {
    pub fn new(points: Vec<(Value, Value)>) -> Result<Self, LogicError> {
        let bad = |msg: &str| Err(LogicError::BadConnective(msg.to_string()));
        if points.len() < 2 {
            return bad("need at least two breakpoints");
        }
        if points[0].0 != Value::ZERO || points[points.len() - 1].0 != Value::ONE {
            return bad("breakpoints must start at x = 0 and end at x = 1");
        }
        for w in points.windows(2) {
            if w[0].0 >= w[1].0 {
                return bad("breakpoint x coordinates must be strictly increasing");
            }
            if w[0].1 > w[1].1 {
                return bad("breakpoint y coordinates must be nondecreasing");
            }
        }
        Ok(Self {
            points: simplify(points),
        })
    }

    pub fn identity() -> Self {
        Self {
            points: vec![(Value::ZERO, Value::ZERO), (Value::ONE, Value::ONE)],
        }
    }

    pub fn constant(c: Value) -> Self {
        Self {
            points: vec![(Value::ZERO, c), (Value::ONE, c)],
        }
    }

    /// `u ∸ e`.
    pub fn trunc_sub(e: Value) -> Self {
        if e == Value::ZERO {
            return Self::identity();
        }
        Self::new(vec![
            (Value::ZERO, Value::ZERO),
            (e, Value::ZERO),
            (Value::ONE, Value::ONE.trunc_sub(e)),
        ])
        .unwrap_or_else(|_| Self::constant(Value::ZERO))
    }

    /// `u ∔ e`.
    pub fn trunc_add(e: Value) -> Self {
        let knee = Value::ONE.trunc_sub(e);
        if knee == Value::ZERO {
            return Self::constant(Value::ONE);
        }
        Self::new(vec![
            (Value::ZERO, e),
            (knee, Value::ONE),
            (Value::ONE, Value::ONE),
        ])
        .expect("u + e is monotone")
    }

    /// `u / 2`.
    pub fn half() -> Self {
        Self {
            points: vec![(Value::ZERO, Value::ZERO), (Value::ONE, Value::HALF)],
        }
    }

    /// `min(u, c)`.
    pub fn cap(c: Value) -> Self {
        if c == Value::ZERO {
            return Self::constant(Value::ZERO);
        }
        Self::new(vec![(Value::ZERO, Value::ZERO), (c, c), (Value::ONE, c)])
            .expect("min(u, c) is monotone")
    }

    pub fn points(&self) -> &[(Value, Value)] {
        &self.points
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// `Some(c)` when the connective is the constant `c`.
    pub fn as_constant(&self) -> Option<Value> {
        let first = self.points[0].1;
        (self.points.iter().all(|p| p.1 == first)).then_some(first)
    }

    pub fn eval(&self, x: Value) -> Value {
        let pts = &self.points;
        // first segment whose right end is >= x
        let j = pts.partition_point(|p| p.0 < x).max(1);
        let (x0, y0) = pts[j - 1];
        let (x1, y1) = pts[j];
        Value::from_ratio(interpolate(x0, y0, x1, y1, x.ratio()))
            .expect("interpolation stays inside the segment's y range")
    }

    /// The connective `u ↦ outer(self(u))`.
    ///
    /// Breakpoints are those of `self` together with the preimages under
    /// `self` of the breakpoints of `outer`.
    pub fn then(&self, outer: &MonotoneConnective) -> MonotoneConnective {
        compose(outer, self)
    }

    /// Maximum slope over all segments.
    pub fn lipschitz(&self) -> Ratio<i64> {
        self.points
            .windows(2)
            .map(|w| (w[1].1.ratio() - w[0].1.ratio()) / (w[1].0.ratio() - w[0].0.ratio()))
            .max()
            .unwrap_or_default()
    }

    /// `sup { x : self(x) = 0 }`, or `None` if `self(0) > 0`.
    pub fn zero_threshold(&self) -> Option<Value> {
        if self.points[0].1 != Value::ZERO {
            return None;
        }
        let last_zero = self
            .points
            .iter()
            .rposition(|p| p.1 == Value::ZERO)
            .unwrap();
        Some(self.points[last_zero].0)
    }
}

fn interpolate(x0: Value, y0: Value, x1: Value, y1: Value, x: Ratio<i64>) -> Ratio<i64> {
    let (x0, y0, x1, y1) = (x0.ratio(), y0.ratio(), x1.ratio(), y1.ratio());
    if y0 == y1 {
        return y0;
    }
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

fn simplify(points: Vec<(Value, Value)>) -> Vec<(Value, Value)> {
    let mut out: Vec<(Value, Value)> = Vec::with_capacity(points.len());
    for p in points {
        while out.len() >= 2 {
            let (a, b) = (out[out.len() - 2], out[out.len() - 1]);
            let lhs = (b.1.ratio() - a.1.ratio()) * (p.0.ratio() - a.0.ratio());
            let rhs = (p.1.ratio() - a.1.ratio()) * (b.0.ratio() - a.0.ratio());
            if lhs == rhs {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

/// `outer ∘ inner`, exact.
pub fn compose(outer: &MonotoneConnective, inner: &MonotoneConnective) -> MonotoneConnective {
    let mut xs: Vec<Value> = inner.points.iter().map(|p| p.0).collect();
    for w in inner.points.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if y0 == y1 {
            continue;
        }
        for &(bx, _) in &outer.points {
            if bx > y0 && bx < y1 {
                // inverse interpolation on an increasing segment
                let t = (bx.ratio() - y0.ratio()) / (y1.ratio() - y0.ratio());
                let x = x0.ratio() + t * (x1.ratio() - x0.ratio());
                xs.push(Value::from_ratio(x).expect("preimage inside segment"));
            }
        }
    }
    xs.sort();
    xs.dedup();
    let points = xs
        .into_iter()
        .map(|x| (x, outer.eval(inner.eval(x))))
        .collect();
    MonotoneConnective::new(points).expect("composition of monotone maps is monotone")
}

impl TryFrom<Vec<(Value, Value)>> for MonotoneConnective {
    type Error = LogicError;
    fn try_from(points: Vec<(Value, Value)>) -> Result<Self, LogicError> {
        Self::new(points)
    }
}

impl From<MonotoneConnective> for Vec<(Value, Value)> {
    fn from(c: MonotoneConnective) -> Self {
        c.points
    }
}

impl fmt::Display for MonotoneConnective {
    /// The literal form `C[(x0,y0),...,(xn,yn)]` used by the formula grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C[")?;
        for (i, (x, y)) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({x},{y})")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for MonotoneConnective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
