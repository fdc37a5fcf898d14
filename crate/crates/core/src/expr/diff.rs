//! Exact symbolic differentiation by rewrite rules.

use std::collections::HashMap;

use super::{BinOp, Expr, Func, Node};

pub(crate) fn diff(e: &Expr, var: &str) -> Expr {
    let mut d = Differ {
        var,
        memo: HashMap::new(),
        deps: HashMap::new(),
    };
    d.diff(e)
}

struct Differ<'a> {
    var: &'a str,
    memo: HashMap<usize, (Expr, Expr)>,
    deps: HashMap<usize, bool>,
}

impl Differ<'_> {
    fn depends(&mut self, e: &Expr) -> bool {
        if let Some(&d) = self.deps.get(&e.ptr()) {
            return d;
        }
        let d = match e.node() {
            Node::Const(_) => false,
            Node::Sym(s) => &**s == self.var,
            Node::Neg(a) | Node::Func(_, a) => self.depends(a),
            Node::Binary(_, a, b) => self.depends(a) || self.depends(b),
        };
        self.deps.insert(e.ptr(), d);
        d
    }

    fn diff(&mut self, e: &Expr) -> Expr {
        if let Some((_, d)) = self.memo.get(&e.ptr()) {
            return d.clone();
        }
        let d = if self.depends(e) {
            self.rule(e)
        } else {
            Expr::zero()
        };
        // The source node is stored alongside so its address is not reused.
        self.memo.insert(e.ptr(), (e.clone(), d.clone()));
        d
    }

    fn rule(&mut self, e: &Expr) -> Expr {
        match e.node() {
            Node::Const(_) => Expr::zero(),
            Node::Sym(_) => Expr::one(),
            Node::Neg(a) => self.diff(a).neg(),
            Node::Func(f, a) => {
                let da = self.diff(a);
                let outer = match f {
                    Func::Sin => a.clone().cos(),
                    Func::Cos => a.clone().sin().neg(),
                    Func::Tan => return da.div(a.clone().cos().powf(2.0)),
                    Func::Exp => e.clone(),
                    Func::Ln => return da.div(a.clone()),
                    Func::Sqrt => return da.div(e.clone().scale(2.0)),
                    // sign(a) = a/|a|; undefined at 0, where evaluation
                    // reports a division by zero.
                    Func::Abs => return da.mul(a.clone()).div(e.clone()),
                };
                outer.mul(da)
            }
            Node::Binary(op, a, b) => {
                let (a, b) = (a.clone(), b.clone());
                match op {
                    BinOp::Add => self.diff(&a).add(self.diff(&b)),
                    BinOp::Sub => self.diff(&a).sub(self.diff(&b)),
                    BinOp::Mul => {
                        let da = self.diff(&a);
                        let db = self.diff(&b);
                        da.mul(b).add(a.mul(db))
                    }
                    BinOp::Div => {
                        let da = self.diff(&a);
                        let db = self.diff(&b);
                        if db.is_zero() {
                            da.div(b)
                        } else {
                            da.mul(b.clone()).sub(a.mul(db)).div(b.powf(2.0))
                        }
                    }
                    BinOp::Pow => {
                        if !self.depends(&b) {
                            // Power rule with an exponent free of the variable.
                            let da = self.diff(&a);
                            let lowered = b.clone().sub(Expr::one());
                            b.mul(a.pow(lowered)).mul(da)
                        } else {
                            // a^b = exp(b ln a)
                            let rewritten = b.mul(a.ln()).exp();
                            self.diff(&rewritten)
                        }
                    }
                }
            }
        }
    }
}
