//! Seeded draws of "arbitrary" free functions and of evaluation points.
//!
//! Free functions of `t` are trigonometric polynomials of degree ≤ 3: smooth,
//! periodic and closed under differentiation. Coefficients are bounded so
//! `f ∈ [1.5, 2.5]` and `|c| ≥ 0.2` everywhere.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{AnsatzFunctions, SolutionParams};
use crate::expr::Expr;
use crate::tensor::Point;

pub use rand::SeedableRng;

pub type SeededRng = ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 42;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `c0 + Σ_k (a_k cos kt + b_k sin kt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    pub c0: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl TrigPoly {
    pub fn constant(c0: f64) -> Self {
        TrigPoly {
            c0,
            cos: Vec::new(),
            sin: Vec::new(),
        }
    }

    /// Random polynomial of degree ≤ `max_degree` whose oscillating part has
    /// `Σ|a_k| + |b_k| = amplitude` exactly (so `|p − c0| ≤ amplitude`).
    pub fn random(rng: &mut impl Rng, c0: f64, amplitude: f64, max_degree: usize) -> Self {
        let degree = rng.gen_range(1..=max_degree);
        let mut cos: Vec<f64> = (0..degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut sin: Vec<f64> = (0..degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let total: f64 = cos.iter().chain(&sin).map(|x: &f64| x.abs()).sum();
        if total > 0.0 {
            let k = amplitude / total;
            cos.iter_mut().chain(sin.iter_mut()).for_each(|x| *x *= k);
        }
        TrigPoly { c0, cos, sin }
    }

    pub fn to_expr(&self, var: &str) -> Expr {
        let t = Expr::symbol(var);
        let mut e = Expr::constant(self.c0);
        for (k, (&a, &b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let kt = t.clone().scale((k + 1) as f64);
            e = e
                .add(kt.clone().cos().scale(a))
                .add(kt.sin().scale(b));
        }
        e
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.cos
            .iter()
            .zip(&self.sin)
            .enumerate()
            .fold(self.c0, |acc, (k, (&a, &b))| {
                let kt = (k + 1) as f64 * t;
                acc + a * kt.cos() + b * kt.sin()
            })
    }
}

/// A randomized member of the Ricci-flat family.
#[derive(Debug, Clone)]
pub struct ParamDraw {
    pub f: TrigPoly,
    pub c: TrigPoly,
    pub q: TrigPoly,
    pub h0: TrigPoly,
    pub h1: TrigPoly,
}

impl ParamDraw {
    pub fn random(rng: &mut impl Rng) -> Self {
        let amp = rng.gen_range(0.1..0.5);
        let f = TrigPoly::random(rng, 2.0, amp, 3);
        let c_sign: f64 = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let c0 = c_sign * rng.gen_range(0.7..1.2);
        let amp = rng.gen_range(0.0..(c0.abs() - 0.2));
        let c = TrigPoly::random(rng, c0, amp, 3);
        let q_mean = rng.gen_range(-1.0..1.0);
        let amp = rng.gen_range(0.1..1.0);
        let q = TrigPoly::random(rng, q_mean, amp, 3);
        let h0_mean = rng.gen_range(-1.0..1.0);
        let amp = rng.gen_range(0.0..1.0);
        let h0 = TrigPoly::random(rng, h0_mean, amp, 3);
        let h1_mean = rng.gen_range(-1.0..1.0);
        let amp = rng.gen_range(0.0..1.0);
        let h1 = TrigPoly::random(rng, h1_mean, amp, 3);
        ParamDraw { f, c, q, h0, h1 }
    }

    /// The same draw with `q ≡ 0`.
    pub fn without_q(&self) -> Self {
        ParamDraw {
            q: TrigPoly::constant(0.0),
            ..self.clone()
        }
    }

    pub fn has_q(&self) -> bool {
        self.q.c0 != 0.0 || self.q.cos.iter().chain(&self.q.sin).any(|&x| x != 0.0)
    }

    pub fn params(&self) -> SolutionParams {
        SolutionParams {
            f: self.f.to_expr("t"),
            c: self.c.to_expr("t"),
            q: self.q.to_expr("t"),
            h0: self.h0.to_expr("t"),
            h1: self.h1.to_expr("t"),
        }
    }
}

/// Random raw-ansatz functions: `u, v, a` depend on `(t, r)`, `b, q` on `t`.
/// `a`, `b` and `v` stay bounded away from zero for `r > 0`.
pub fn random_ansatz(rng: &mut impl Rng) -> AnsatzFunctions {
    let t = Expr::symbol("t");
    let r = Expr::symbol("r");
    let mut coef = |lo: f64, hi: f64| Expr::constant(rng.gen_range(lo..hi));

    let u = coef(0.5, 1.5)
        .add(coef(-0.5, 0.5).mul(t.clone().sin()))
        .add(coef(0.1, 0.6).mul(r.clone()))
        .add(coef(-0.2, 0.2).mul(r.clone().powf(2.0)).mul(t.clone().cos()));
    let v = coef(0.5, 1.5)
        .mul(r.clone())
        .add(coef(0.1, 0.5).mul(r.clone().powf(2.0)))
        .mul(t.clone().scale(0.7).cos().scale(0.3).add(Expr::one()));
    let a = Expr::one()
        .add(coef(0.1, 0.8).mul(r.clone()))
        .add(coef(-0.3, 0.3).mul(t.clone().sin()).mul(r.clone().powf(0.5)).scale(0.5));
    let b = coef(1.2, 2.0).add(coef(-0.5, 0.5).mul(t.clone().scale(1.3).cos()));
    let q = coef(-1.0, 1.0).add(coef(-1.0, 1.0).mul(t.clone().sin()));
    AnsatzFunctions { u, v, a, b, q }
}

/// Evaluation window for randomized checks: `t ∈ [−1.2, 4.4]` outside
/// `|t + π/2| < 0.05` and `|t − 3π/2| < 0.05`, `r` log-uniform in
/// `[0.05, 20]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingWindow {
    pub t: (f64, f64),
    pub t_exclusion: f64,
    pub r: (f64, f64),
}

impl Default for SamplingWindow {
    fn default() -> Self {
        SamplingWindow {
            t: (-1.2, 4.4),
            t_exclusion: 0.05,
            r: (0.05, 20.0),
        }
    }
}

impl SamplingWindow {
    pub fn excludes_t(&self, t: f64) -> bool {
        (t + PI / 2.0).abs() < self.t_exclusion || (t - 1.5 * PI).abs() < self.t_exclusion
    }

    /// `(t, r)` plus generic angles `θ ∈ [0.3, 2.8]`, `φ ∈ [−1, 1]`.
    pub fn sample(&self, rng: &mut impl Rng) -> Point {
        let t = loop {
            let t = rng.gen_range(self.t.0..=self.t.1);
            if !self.excludes_t(t) {
                break t;
            }
        };
        let r = rng.gen_range(self.r.0.ln()..=self.r.1.ln()).exp();
        [t, r, rng.gen_range(0.3..2.8), rng.gen_range(-1.0..1.0)]
    }

    pub fn samples(&self, rng: &mut impl Rng, n: usize) -> Vec<Point> {
        (0..n).map(|_| self.sample(rng)).collect()
    }
}
