use std::collections::BTreeMap;

use thiserror::Error;

use super::{BinOp, Expr, Func, Tape};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unbound symbol `{0}`")]
    Unbound(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("logarithm of non-positive value {0}")]
    LogNonPositive(f64),
    #[error("square root of negative value {0}")]
    SqrtNegative(f64),
    #[error("zero raised to negative power {0}")]
    ZeroToNegative(f64),
    #[error("negative base {base} raised to non-integer power {exponent}")]
    NegativeBase { base: f64, exponent: f64 },
    #[error("non-finite result in {0}")]
    NonFinite(&'static str),
}

/// Values for the free symbols of an expression.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Bindings(BTreeMap<String, f64>);

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.insert(name, value);
        self
    }

    pub fn insert(&mut self, name: &str, value: f64) {
        self.0.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl<S: AsRef<str>> FromIterator<(S, f64)> for Bindings {
    fn from_iter<I: IntoIterator<Item = (S, f64)>>(iter: I) -> Self {
        Bindings(
            iter.into_iter()
                .map(|(k, v)| (k.as_ref().to_string(), v))
                .collect(),
        )
    }
}

fn finite(v: f64, what: &'static str) -> Result<f64, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite(what))
    }
}

pub(crate) fn apply_binary(op: BinOp, a: f64, b: f64) -> Result<f64, EvalError> {
    match op {
        BinOp::Add => finite(a + b, "+"),
        BinOp::Sub => finite(a - b, "-"),
        BinOp::Mul => finite(a * b, "*"),
        BinOp::Div => {
            if b == 0.0 {
                Err(EvalError::DivisionByZero)
            } else {
                finite(a / b, "/")
            }
        }
        BinOp::Pow => {
            if a == 0.0 && b < 0.0 {
                return Err(EvalError::ZeroToNegative(b));
            }
            if a < 0.0 && b.fract() != 0.0 {
                return Err(EvalError::NegativeBase {
                    base: a,
                    exponent: b,
                });
            }
            finite(a.powf(b), "^")
        }
    }
}

pub(crate) fn apply_func(f: Func, x: f64) -> Result<f64, EvalError> {
    let v = match f {
        Func::Sin => x.sin(),
        Func::Cos => x.cos(),
        Func::Tan => x.tan(),
        Func::Exp => x.exp(),
        Func::Ln => {
            if x <= 0.0 {
                return Err(EvalError::LogNonPositive(x));
            }
            x.ln()
        }
        Func::Sqrt => {
            if x < 0.0 {
                return Err(EvalError::SqrtNegative(x));
            }
            x.sqrt()
        }
        Func::Abs => x.abs(),
    };
    finite(v, f.name())
}

pub(crate) fn eval(e: &Expr, bindings: &Bindings) -> Result<f64, EvalError> {
    let symbols: Vec<String> = e.free_symbols().into_iter().collect();
    let inputs = symbols
        .iter()
        .map(|s| bindings.get(s).ok_or_else(|| EvalError::Unbound(s.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let tape = Tape::compile(std::slice::from_ref(e), &symbols)?;
    Ok(tape.eval(&inputs)?[0])
}
