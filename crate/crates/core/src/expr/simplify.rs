//! Best-effort algebraic cleanup: constant folding plus the identities
//! `x+0`, `x-0`, `0-x`, `x*1`, `x*0`, `x/1`, `0/x`, `x^1`, `x^0`, `1^x` and
//! `--x`.
//!
//! `x*0 -> 0` and `0/x -> 0` assume `x` finite and nonzero, and `x^0 -> 1`
//! assumes `x != 0`. Folding never produces a non-finite constant; a fold
//! that would hit a domain error is left unevaluated.

use std::collections::HashMap;
use std::sync::Arc;

use super::eval::{apply_binary, apply_func};
use super::{BinOp, Expr, Node};

pub(crate) fn fold(node: Node) -> Expr {
    match node {
        Node::Neg(a) => match a.node() {
            Node::Const(v) => Expr::constant(-v),
            Node::Neg(inner) => inner.clone(),
            _ => Expr::raw_neg(a),
        },
        Node::Func(f, a) => match a.as_const().map(|v| apply_func(f, v)) {
            Some(Ok(v)) => Expr::constant(v),
            _ => Expr::raw_func(f, a),
        },
        Node::Binary(op, a, b) => fold_binary(op, a, b),
        other => Expr(Arc::new(other)),
    }
}

fn fold_binary(op: BinOp, a: Expr, b: Expr) -> Expr {
    let (ca, cb) = (a.as_const(), b.as_const());
    if let (Some(x), Some(y)) = (ca, cb) {
        if let Ok(v) = apply_binary(op, x, y) {
            return Expr::constant(v);
        }
        return Expr::raw_binary(op, a, b);
    }
    match op {
        BinOp::Add => {
            if ca == Some(0.0) {
                return b;
            }
            if cb == Some(0.0) {
                return a;
            }
        }
        BinOp::Sub => {
            if cb == Some(0.0) {
                return a;
            }
            if ca == Some(0.0) {
                return fold(Node::Neg(b));
            }
        }
        BinOp::Mul => {
            if ca == Some(0.0) || cb == Some(0.0) {
                return Expr::zero();
            }
            if ca == Some(1.0) {
                return b;
            }
            if cb == Some(1.0) {
                return a;
            }
            if ca == Some(-1.0) {
                return fold(Node::Neg(b));
            }
            if cb == Some(-1.0) {
                return fold(Node::Neg(a));
            }
            // c1 * (c2 * x) -> (c1*c2) * x
            if let (Some(c1), Node::Binary(BinOp::Mul, inner_a, inner_b)) = (ca, b.node()) {
                if let Some(c2) = inner_a.as_const() {
                    if let Ok(c) = apply_binary(BinOp::Mul, c1, c2) {
                        return fold_binary(BinOp::Mul, Expr::constant(c), inner_b.clone());
                    }
                }
            }
        }
        BinOp::Div => {
            if cb == Some(1.0) {
                return a;
            }
            if ca == Some(0.0) {
                return Expr::zero();
            }
        }
        BinOp::Pow => {
            if cb == Some(1.0) {
                return a;
            }
            if cb == Some(0.0) || ca == Some(1.0) {
                return Expr::one();
            }
        }
    }
    Expr::raw_binary(op, a, b)
}

pub(crate) fn simplify(e: &Expr) -> Expr {
    let mut memo = HashMap::new();
    simplify_rec(e, &mut memo)
}

fn simplify_rec(e: &Expr, memo: &mut HashMap<usize, Expr>) -> Expr {
    if let Some(done) = memo.get(&e.ptr()) {
        return done.clone();
    }
    let out = match e.node() {
        Node::Const(_) | Node::Sym(_) => e.clone(),
        Node::Neg(a) => fold(Node::Neg(simplify_rec(a, memo))),
        Node::Func(f, a) => fold(Node::Func(*f, simplify_rec(a, memo))),
        Node::Binary(op, a, b) => {
            let a = simplify_rec(a, memo);
            let b = simplify_rec(b, memo);
            fold_binary(*op, a, b)
        }
    };
    memo.insert(e.ptr(), out.clone());
    out
}
