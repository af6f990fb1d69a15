//! Gate parameters: literal angles or small symbolic expressions.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A gate parameter.
///
/// Literals are radians. Symbols are free variables (variational parameters)
/// that stay symbolic until bound by [`ParamExpr::bind`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ParamExpr {
    Num(f64),
    Sym(String),
    Neg(Box<ParamExpr>),
    Add(Box<ParamExpr>, Box<ParamExpr>),
    Sub(Box<ParamExpr>, Box<ParamExpr>),
    Mul(Box<ParamExpr>, Box<ParamExpr>),
    Div(Box<ParamExpr>, Box<ParamExpr>),
}

impl ParamExpr {
    pub fn sym(name: impl Into<String>) -> Self {
        ParamExpr::Sym(name.into())
    }

    /// Literal value, if the expression is a plain number.
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            ParamExpr::Num(v) => Some(*v),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, ParamExpr::Num(_))
    }

    /// Evaluates the expression if it contains no free symbols.
    pub fn eval(&self) -> Option<f64> {
        self.eval_with(&BTreeMap::new())
    }

    pub fn eval_with(&self, bindings: &BTreeMap<String, f64>) -> Option<f64> {
        Some(match self {
            ParamExpr::Num(v) => *v,
            ParamExpr::Sym(s) => *bindings.get(s)?,
            ParamExpr::Neg(a) => -a.eval_with(bindings)?,
            ParamExpr::Add(a, b) => a.eval_with(bindings)? + b.eval_with(bindings)?,
            ParamExpr::Sub(a, b) => a.eval_with(bindings)? - b.eval_with(bindings)?,
            ParamExpr::Mul(a, b) => a.eval_with(bindings)? * b.eval_with(bindings)?,
            ParamExpr::Div(a, b) => a.eval_with(bindings)? / b.eval_with(bindings)?,
        })
    }

    /// Names of the free symbols, sorted and deduplicated.
    pub fn symbols(&self) -> Vec<String> {
        fn walk(e: &ParamExpr, out: &mut Vec<String>) {
            match e {
                ParamExpr::Num(_) => {}
                ParamExpr::Sym(s) => out.push(s.clone()),
                ParamExpr::Neg(a) => walk(a, out),
                ParamExpr::Add(a, b)
                | ParamExpr::Sub(a, b)
                | ParamExpr::Mul(a, b)
                | ParamExpr::Div(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort();
        out.dedup();
        out
    }

    /// Replaces bound symbols by their values and folds constants.
    pub fn bind(&self, bindings: &BTreeMap<String, f64>) -> ParamExpr {
        let bound = match self {
            ParamExpr::Sym(s) => match bindings.get(s) {
                Some(v) => ParamExpr::Num(*v),
                None => self.clone(),
            },
            ParamExpr::Num(_) => self.clone(),
            ParamExpr::Neg(a) => ParamExpr::Neg(Box::new(a.bind(bindings))),
            ParamExpr::Add(a, b) => ParamExpr::Add(Box::new(a.bind(bindings)), Box::new(b.bind(bindings))),
            ParamExpr::Sub(a, b) => ParamExpr::Sub(Box::new(a.bind(bindings)), Box::new(b.bind(bindings))),
            ParamExpr::Mul(a, b) => ParamExpr::Mul(Box::new(a.bind(bindings)), Box::new(b.bind(bindings))),
            ParamExpr::Div(a, b) => ParamExpr::Div(Box::new(a.bind(bindings)), Box::new(b.bind(bindings))),
        };
        bound.simplify()
    }

    /// Constant folding. Fully literal expressions collapse to a number.
    pub fn simplify(self) -> ParamExpr {
        if let Some(v) = self.eval() {
            return ParamExpr::Num(v);
        }
        self
    }

    /// Sum of two parameters, folded when both are literal.
    pub fn plus(&self, other: &ParamExpr) -> ParamExpr {
        match (self, other) {
            (ParamExpr::Num(a), ParamExpr::Num(b)) => ParamExpr::Num(a + b),
            (ParamExpr::Num(a), e) | (e, ParamExpr::Num(a)) if *a == 0.0 => e.clone(),
            _ => ParamExpr::Add(Box::new(self.clone()), Box::new(other.clone())),
        }
    }

    /// Multiplies by a literal factor.
    pub fn scaled(&self, k: f64) -> ParamExpr {
        match self {
            ParamExpr::Num(a) => ParamExpr::Num(a * k),
            _ if k == 1.0 => self.clone(),
            _ if k == -1.0 => ParamExpr::Neg(Box::new(self.clone())),
            _ => ParamExpr::Mul(Box::new(ParamExpr::Num(k)), Box::new(self.clone())),
        }
    }

    pub fn neg(&self) -> ParamExpr {
        self.scaled(-1.0)
    }
}

impl From<f64> for ParamExpr {
    fn from(v: f64) -> Self {
        ParamExpr::Num(v)
    }
}

/// Prints a literal so that `str::parse::<f64>` recovers it bit-exactly.
pub(crate) fn fmt_literal(v: f64) -> String {
    if v.is_finite() && v == v.trunc() && v.abs() < 1e15 {
        format!("{v:.1}")
    } else {
        format!("{v:?}")
    }
}

impl fmt::Display for ParamExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamExpr::Num(v) if *v < 0.0 => write!(f, "({})", fmt_literal(*v)),
            ParamExpr::Num(v) => write!(f, "{}", fmt_literal(*v)),
            ParamExpr::Sym(s) => write!(f, "{s}"),
            ParamExpr::Neg(a) => write!(f, "(-{a})"),
            ParamExpr::Add(a, b) => write!(f, "({a}+{b})"),
            ParamExpr::Sub(a, b) => write!(f, "({a}-{b})"),
            ParamExpr::Mul(a, b) => write!(f, "({a}*{b})"),
            ParamExpr::Div(a, b) => write!(f, "({a}/{b})"),
        }
    }
}

/// Maps an angle to (-pi, pi].
pub fn canonical_angle(theta: f64) -> f64 {
    let mut t = theta % (2.0 * PI);
    if t <= -PI {
        t += 2.0 * PI;
    } else if t > PI {
        t -= 2.0 * PI;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bind_folds_constants() {
        let e = ParamExpr::sym("theta").plus(&ParamExpr::Num(PI));
        let mut b = BTreeMap::new();
        b.insert("theta".to_string(), 0.2);
        assert_eq!(e.bind(&b), ParamExpr::Num(0.2 + PI));
        assert_eq!(e.bind(&BTreeMap::new()), e);
    }

    #[test]
    fn canonical_angle_range() {
        assert!((canonical_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((canonical_angle(-PI) - PI).abs() < 1e-12);
        assert!((canonical_angle(0.5) - 0.5).abs() < 1e-15);
        assert!((canonical_angle(-7.0) - (-7.0 + 2.0 * PI)).abs() < 1e-12);
    }

    #[test]
    fn literal_printing_round_trips() {
        for v in [0.1, -2.5, PI, 1e-17, 3.0, 123456.789] {
            let s = fmt_literal(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }
}
