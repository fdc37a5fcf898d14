//! Flat, common-subexpression-eliminated evaluation program.
//!
//! A metric together with all its partial derivatives is a few hundred
//! expressions that share most of their structure. Compiling them into one
//! tape evaluates every distinct subexpression once per point.

use std::collections::HashMap;

use super::eval::{apply_binary, apply_func, EvalError};
use super::{BinOp, Expr, Func, Node};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Op {
    Const(u64),
    Input(u32),
    Neg(u32),
    Binary(BinOp, u32, u32),
    Func(Func, u32),
}

#[derive(Debug, Clone)]
pub struct Tape {
    ops: Vec<Op>,
    outputs: Vec<u32>,
    inputs: usize,
}

struct Builder<'a> {
    symbols: &'a [String],
    ops: Vec<Op>,
    dedup: HashMap<Op, u32>,
    by_ptr: HashMap<usize, u32>,
    // Keeps visited nodes alive so their addresses stay unique.
    pinned: Vec<Expr>,
}

impl Builder<'_> {
    fn push(&mut self, op: Op) -> u32 {
        if let Some(&slot) = self.dedup.get(&op) {
            return slot;
        }
        let slot = self.ops.len() as u32;
        self.ops.push(op);
        self.dedup.insert(op, slot);
        slot
    }

    fn visit(&mut self, e: &Expr) -> Result<u32, EvalError> {
        if let Some(&slot) = self.by_ptr.get(&e.ptr()) {
            return Ok(slot);
        }
        let op = match e.node() {
            Node::Const(v) => Op::Const(v.to_bits()),
            Node::Sym(s) => {
                let idx = self
                    .symbols
                    .iter()
                    .position(|name| name.as_str() == &**s)
                    .ok_or_else(|| EvalError::Unbound(s.to_string()))?;
                Op::Input(idx as u32)
            }
            Node::Neg(a) => Op::Neg(self.visit(a)?),
            Node::Func(f, a) => Op::Func(*f, self.visit(a)?),
            Node::Binary(op, a, b) => {
                let a = self.visit(a)?;
                let b = self.visit(b)?;
                Op::Binary(*op, a, b)
            }
        };
        let slot = self.push(op);
        self.by_ptr.insert(e.ptr(), slot);
        self.pinned.push(e.clone());
        Ok(slot)
    }
}

impl Tape {
    /// Compiles `exprs` against the ordered input `symbols`. Any free symbol
    /// not listed is reported as unbound.
    pub fn compile(exprs: &[Expr], symbols: &[String]) -> Result<Tape, EvalError> {
        let mut b = Builder {
            symbols,
            ops: Vec::new(),
            dedup: HashMap::new(),
            by_ptr: HashMap::new(),
            pinned: Vec::new(),
        };
        let outputs = exprs
            .iter()
            .map(|e| b.visit(e))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Tape {
            ops: b.ops,
            outputs,
            inputs: symbols.len(),
        })
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn eval(&self, inputs: &[f64]) -> Result<Vec<f64>, EvalError> {
        let mut regs = Vec::with_capacity(self.ops.len());
        self.eval_into(inputs, &mut regs)
    }

    /// Evaluates with a caller-owned register buffer.
    pub fn eval_into(&self, inputs: &[f64], regs: &mut Vec<f64>) -> Result<Vec<f64>, EvalError> {
        assert_eq!(inputs.len(), self.inputs, "tape input arity");
        regs.clear();
        for op in &self.ops {
            let v = match *op {
                Op::Const(bits) => f64::from_bits(bits),
                Op::Input(i) => inputs[i as usize],
                Op::Neg(a) => -regs[a as usize],
                Op::Binary(op, a, b) => apply_binary(op, regs[a as usize], regs[b as usize])?,
                Op::Func(f, a) => apply_func(f, regs[a as usize])?,
            };
            regs.push(v);
        }
        Ok(self.outputs.iter().map(|&o| regs[o as usize]).collect())
    }
}
