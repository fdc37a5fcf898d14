//! Expression trees over named symbols.
//!
//! An [`Expr`] is an immutable, reference-counted tree. Cloning is cheap and
//! subtrees are shared freely, so derivative trees are DAGs in memory. Every
//! traversal that could revisit shared nodes memoizes by node address.

mod diff;
mod eval;
mod lexer;
mod parser;
mod simplify;
mod tape;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

pub use eval::{Bindings, EvalError};
pub use lexer::{LexError, Token, TokenKind};
pub use parser::{parse, ParseError};
pub use tape::Tape;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
    Abs,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Ln,
        Func::Sqrt,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, PartialEq)]
pub enum Node {
    Const(f64),
    Sym(Arc<str>),
    Neg(Expr),
    Binary(BinOp, Expr, Expr),
    Func(Func, Expr),
}

#[derive(Clone, PartialEq)]
pub struct Expr(Arc<Node>);

macro_rules! binary_operator {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for Expr {
            type Output = Expr;

            fn $method(self, rhs: Expr) -> Expr {
                Expr::$method(self, rhs)
            }
        }
    };
}

binary_operator!(Add, add);
binary_operator!(Sub, sub);
binary_operator!(Mul, mul);
binary_operator!(Div, div);

impl std::ops::Neg for Expr {
    type Output = Expr;

    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    pub(crate) fn ptr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn constant(v: f64) -> Expr {
        Expr(Arc::new(Node::Const(v)))
    }

    pub fn zero() -> Expr {
        Expr::constant(0.0)
    }

    pub fn one() -> Expr {
        Expr::constant(1.0)
    }

    pub fn symbol(name: &str) -> Expr {
        Expr(Arc::new(Node::Sym(Arc::from(name))))
    }

    /// Builds a node without any folding. Parser output uses this so the
    /// tree mirrors the source text.
    pub fn raw_binary(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr(Arc::new(Node::Binary(op, l, r)))
    }

    pub fn raw_neg(e: Expr) -> Expr {
        Expr(Arc::new(Node::Neg(e)))
    }

    pub fn raw_func(f: Func, e: Expr) -> Expr {
        Expr(Arc::new(Node::Func(f, e)))
    }

    pub fn as_const(&self) -> Option<f64> {
        match self.node() {
            Node::Const(v) => Some(*v),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    // Folding constructors. Each applies one level of identity elimination
    // and constant folding, so trees built from them stay compact.

    pub fn add(self, rhs: Expr) -> Expr {
        simplify::fold(Node::Binary(BinOp::Add, self, rhs))
    }

    pub fn sub(self, rhs: Expr) -> Expr {
        simplify::fold(Node::Binary(BinOp::Sub, self, rhs))
    }

    pub fn mul(self, rhs: Expr) -> Expr {
        simplify::fold(Node::Binary(BinOp::Mul, self, rhs))
    }

    pub fn div(self, rhs: Expr) -> Expr {
        simplify::fold(Node::Binary(BinOp::Div, self, rhs))
    }

    pub fn pow(self, rhs: Expr) -> Expr {
        simplify::fold(Node::Binary(BinOp::Pow, self, rhs))
    }

    pub fn powf(self, exponent: f64) -> Expr {
        self.pow(Expr::constant(exponent))
    }

    pub fn neg(self) -> Expr {
        simplify::fold(Node::Neg(self))
    }

    pub fn apply(self, f: Func) -> Expr {
        simplify::fold(Node::Func(f, self))
    }

    pub fn sin(self) -> Expr {
        self.apply(Func::Sin)
    }

    pub fn cos(self) -> Expr {
        self.apply(Func::Cos)
    }

    pub fn exp(self) -> Expr {
        self.apply(Func::Exp)
    }

    pub fn ln(self) -> Expr {
        self.apply(Func::Ln)
    }

    pub fn sqrt(self) -> Expr {
        self.apply(Func::Sqrt)
    }

    pub fn scale(self, k: f64) -> Expr {
        Expr::constant(k).mul(self)
    }

    /// Exact partial derivative with respect to `var`.
    pub fn diff(&self, var: &str) -> Expr {
        diff::diff(self, var)
    }

    /// Repeated partial derivative, applied left to right.
    pub fn diff_many(&self, vars: &[&str]) -> Expr {
        vars.iter().fold(self.clone(), |e, v| e.diff(v))
    }

    pub fn simplify(&self) -> Expr {
        simplify::simplify(self)
    }

    pub fn eval(&self, bindings: &Bindings) -> Result<f64, EvalError> {
        eval::eval(self, bindings)
    }

    pub fn free_symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut seen = HashMap::new();
        collect_symbols(self, &mut out, &mut seen);
        out
    }

    pub fn depends_on(&self, var: &str) -> bool {
        self.free_symbols().contains(var)
    }

    /// Replaces every occurrence of `var` with `value`, then simplifies.
    pub fn substitute(&self, var: &str, value: &Expr) -> Expr {
        let mut memo = HashMap::new();
        substitute(self, var, value, &mut memo).simplify()
    }

    /// Number of distinct nodes (shared subtrees counted once).
    pub fn node_count(&self) -> usize {
        let mut seen = HashMap::new();
        count_nodes(self, &mut seen);
        seen.len()
    }
}

fn collect_symbols(e: &Expr, out: &mut BTreeSet<String>, seen: &mut HashMap<usize, ()>) {
    if seen.insert(e.ptr(), ()).is_some() {
        return;
    }
    match e.node() {
        Node::Const(_) => {}
        Node::Sym(s) => {
            out.insert(s.to_string());
        }
        Node::Neg(a) | Node::Func(_, a) => collect_symbols(a, out, seen),
        Node::Binary(_, a, b) => {
            collect_symbols(a, out, seen);
            collect_symbols(b, out, seen);
        }
    }
}

fn count_nodes(e: &Expr, seen: &mut HashMap<usize, ()>) {
    if seen.insert(e.ptr(), ()).is_some() {
        return;
    }
    match e.node() {
        Node::Const(_) | Node::Sym(_) => {}
        Node::Neg(a) | Node::Func(_, a) => count_nodes(a, seen),
        Node::Binary(_, a, b) => {
            count_nodes(a, seen);
            count_nodes(b, seen);
        }
    }
}

fn substitute(e: &Expr, var: &str, value: &Expr, memo: &mut HashMap<usize, Expr>) -> Expr {
    if let Some(done) = memo.get(&e.ptr()) {
        return done.clone();
    }
    let out = match e.node() {
        Node::Const(_) => e.clone(),
        Node::Sym(s) if &**s == var => value.clone(),
        Node::Sym(_) => e.clone(),
        Node::Neg(a) => Expr::raw_neg(substitute(a, var, value, memo)),
        Node::Func(f, a) => Expr::raw_func(*f, substitute(a, var, value, memo)),
        Node::Binary(op, a, b) => Expr::raw_binary(
            *op,
            substitute(a, var, value, memo),
            substitute(b, var, value, memo),
        ),
    };
    memo.insert(e.ptr(), out.clone());
    out
}

impl From<f64> for Expr {
    fn from(v: f64) -> Self {
        Expr::constant(v)
    }
}

// Printing. Binding strengths: sums 1, products 2, unary minus 3, powers 4,
// atoms 5. Output re-parses to a tree with the same evaluation.

fn precedence(e: &Expr) -> u8 {
    match e.node() {
        Node::Const(v) if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) => 3,
        Node::Const(_) | Node::Sym(_) | Node::Func(..) => 5,
        Node::Neg(_) => 3,
        Node::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
        Node::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
        Node::Binary(BinOp::Pow, ..) => 4,
    }
}

fn write_wrapped(f: &mut fmt::Formatter<'_>, e: &Expr, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Const(v) => {
                if *v < 0.0 {
                    write!(f, "-{}", -v)
                } else {
                    write!(f, "{v}")
                }
            }
            Node::Sym(s) => f.write_str(s),
            Node::Neg(a) => {
                f.write_str("-")?;
                write_wrapped(f, a, precedence(a) < 3)
            }
            Node::Func(func, a) => write!(f, "{}({a})", func.name()),
            Node::Binary(op, a, b) => {
                let p = precedence(self);
                if *op == BinOp::Pow {
                    write_wrapped(f, a, precedence(a) <= 4)?;
                    f.write_str("^")?;
                    write_wrapped(f, b, precedence(b) < 5)
                } else {
                    write_wrapped(f, a, precedence(a) < p)?;
                    f.write_str(op.symbol())?;
                    write_wrapped(f, b, precedence(b) <= p)
                }
            }
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_respects_precedence() {
        let e = parse("-(r^2)*(a+b)/c").unwrap();
        assert_eq!(e.to_string(), "-r^2*(a+b)/c");
        let e = parse("a-(b-c)").unwrap();
        assert_eq!(e.to_string(), "a-(b-c)");
        let e = parse("(-2)^x").unwrap();
        assert_eq!(e.to_string(), "(-2)^x");
    }

    #[test]
    fn free_symbols_and_substitution() {
        let e = parse("16*r^(3/2)*(1+sin(t))").unwrap();
        let syms: Vec<_> = e.free_symbols().into_iter().collect();
        assert_eq!(syms, vec!["r".to_string(), "t".to_string()]);
        let at0 = e.substitute("t", &Expr::zero());
        assert!(!at0.depends_on("t"));
        let b = Bindings::new().with("r", 4.0);
        assert_eq!(at0.eval(&b).unwrap(), 128.0);
    }

    #[test]
    fn operators_fold_like_the_methods() {
        let r = Expr::symbol("r");
        let e = (r.clone() + Expr::zero()) * Expr::one() - -r.clone() / Expr::constant(2.0);
        let m = r.clone().add(Expr::zero()).mul(Expr::one()).sub(r.clone().neg().div(Expr::constant(2.0)));
        assert_eq!(e, m);
    }
}
