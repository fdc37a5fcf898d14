use crate::expr::{Expr, Tape};

use super::curvature::{self, BianchiReport, CurvatureBundle, Geometry, RiemannSign};
use super::scalar::Dual;
use super::{compile, MetricSpec, Point, TensorError};

type Partials1 = [[[Expr; 4]; 4]; 4];
type Partials2 = [[[[Expr; 4]; 4]; 4]; 4];

/// Third partials of the metric, indexed `[j][k][l][m][n]`.
pub type ThirdPartials = [[[[[f64; 4]; 4]; 4]; 4]; 4];

/// Metric values and partials at one point. `dg[l][m][n] = ∂_l g_mn`,
/// `ddg[k][l][m][n] = ∂_k ∂_l g_mn`, and `dddg` (when derived to third
/// order) is indexed `[j][k][l][m][n]`.
#[derive(Debug, Clone)]
pub struct MetricJet {
    pub point: Point,
    pub g: [[f64; 4]; 4],
    pub dg: [[[f64; 4]; 4]; 4],
    pub ddg: [[[[f64; 4]; 4]; 4]; 4],
    pub dddg: Option<Box<ThirdPartials>>,
}

/// A metric with its symbolic partials materialized once and compiled into
/// a single evaluation tape.
#[derive(Clone)]
pub struct DerivedMetric {
    spec: MetricSpec,
    d1: Box<Partials1>,
    d2: Box<Partials2>,
    d3: Option<Box<[Partials2; 4]>>,
    tape: Tape,
    sign: RiemannSign,
}

impl std::fmt::Debug for DerivedMetric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DerivedMetric")
            .field("spec", &self.spec.name())
            .field("third_order", &self.d3.is_some())
            .field("tape_len", &self.tape.len())
            .field("sign", &self.sign)
            .finish()
    }
}

fn zeros4() -> [[Expr; 4]; 4] {
    std::array::from_fn(|_| std::array::from_fn(|_| Expr::zero()))
}

impl DerivedMetric {
    /// First and second partials.
    pub fn new(spec: &MetricSpec) -> Result<Self, TensorError> {
        Self::build(spec, false)
    }

    /// First, second and third partials (needed for the Bianchi self-test).
    pub fn with_third_order(spec: &MetricSpec) -> Result<Self, TensorError> {
        Self::build(spec, true)
    }

    fn build(spec: &MetricSpec, third: bool) -> Result<Self, TensorError> {
        let coords = spec.coords();
        let g = spec.entries();

        let mut d1: Box<Partials1> = Box::new(std::array::from_fn(|_| zeros4()));
        for (l, x) in coords.iter().enumerate() {
            for m in 0..4 {
                for n in m..4 {
                    let d = g[m][n].diff(x);
                    d1[l][m][n] = d.clone();
                    d1[l][n][m] = d;
                }
            }
        }

        let mut d2: Box<Partials2> =
            Box::new(std::array::from_fn(|_| std::array::from_fn(|_| zeros4())));
        for k in 0..4 {
            for l in k..4 {
                for m in 0..4 {
                    for n in m..4 {
                        let d = d1[l][m][n].diff(&coords[k]);
                        d2[k][l][m][n] = d.clone();
                        d2[k][l][n][m] = d.clone();
                        d2[l][k][m][n] = d.clone();
                        d2[l][k][n][m] = d;
                    }
                }
            }
        }

        let d3 = if third {
            let mut d3: Box<[Partials2; 4]> = Box::new(std::array::from_fn(|_| {
                std::array::from_fn(|_| std::array::from_fn(|_| zeros4()))
            }));
            for j in 0..4 {
                for k in j..4 {
                    for l in k..4 {
                        for m in 0..4 {
                            for n in m..4 {
                                let d = d2[k][l][m][n].diff(&coords[j]);
                                for [a, b, c] in permutations3(j, k, l) {
                                    d3[a][b][c][m][n] = d.clone();
                                    d3[a][b][c][n][m] = d.clone();
                                }
                            }
                        }
                    }
                }
            }
            Some(d3)
        } else {
            None
        };

        let mut outputs: Vec<Expr> = g.iter().flatten().cloned().collect();
        outputs.extend(d1.iter().flatten().flatten().cloned());
        outputs.extend(d2.iter().flatten().flatten().flatten().cloned());
        if let Some(d3) = &d3 {
            outputs.extend(d3.iter().flatten().flatten().flatten().flatten().cloned());
        }
        let tape = compile(&outputs, coords, spec.params())?;

        Ok(DerivedMetric {
            spec: spec.clone(),
            d1,
            d2,
            d3,
            tape,
            sign: RiemannSign::default(),
        })
    }

    pub fn with_sign(mut self, sign: RiemannSign) -> Self {
        self.sign = sign;
        self
    }

    pub fn sign(&self) -> RiemannSign {
        self.sign
    }

    pub fn spec(&self) -> &MetricSpec {
        &self.spec
    }

    /// `∂_l g_mn` as an expression.
    pub fn partial(&self, l: usize, m: usize, n: usize) -> &Expr {
        &self.d1[l][m][n]
    }

    /// `∂_k ∂_l g_mn` as an expression.
    pub fn second_partial(&self, k: usize, l: usize, m: usize, n: usize) -> &Expr {
        &self.d2[k][l][m][n]
    }

    pub fn has_third_order(&self) -> bool {
        self.d3.is_some()
    }

    pub fn jet(&self, p: &Point) -> Result<MetricJet, TensorError> {
        let v = self
            .tape
            .eval(&self.spec.inputs(p))
            .map_err(|source| TensorError::Eval { point: *p, source })?;
        let mut it = v.into_iter();
        let mut next = || it.next().expect("tape output count");
        let g = std::array::from_fn(|_| std::array::from_fn(|_| next()));
        let dg = std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| next())));
        let ddg = std::array::from_fn(|_| {
            std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| next())))
        });
        let dddg = self.d3.as_ref().map(|_| {
            Box::new(std::array::from_fn(|_| {
                std::array::from_fn(|_| {
                    std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| next())))
                })
            }))
        });
        Ok(MetricJet {
            point: *p,
            g,
            dg,
            ddg,
            dddg,
        })
    }

    pub fn det_metric(&self, p: &Point) -> Result<f64, TensorError> {
        self.spec.det_at(p)
    }

    fn geometry(&self, p: &Point) -> Result<Geometry<f64>, TensorError> {
        let jet = self.jet(p)?;
        curvature::assemble(&jet.g, &jet.dg, &jet.ddg, self.sign.factor()).ok_or(
            TensorError::Degenerate {
                point: *p,
                det: super::linalg::det4(&jet.g),
            },
        )
    }

    pub fn curvature(&self, p: &Point) -> Result<CurvatureBundle, TensorError> {
        Ok(CurvatureBundle::from_geometry(*p, self.geometry(p)?))
    }

    /// `Γ^λ_{μν}` indexed `[λ][μ][ν]`.
    pub fn christoffel(&self, p: &Point) -> Result<[[[f64; 4]; 4]; 4], TensorError> {
        Ok(self.geometry(p)?.gamma)
    }

    /// Lowered Riemann tensor `R_{αβμν}` under the configured sign.
    pub fn riemann(&self, p: &Point) -> Result<[[[[f64; 4]; 4]; 4]; 4], TensorError> {
        Ok(self.geometry(p)?.riemann)
    }

    pub fn ricci(&self, p: &Point) -> Result<[[f64; 4]; 4], TensorError> {
        Ok(self.geometry(p)?.ricci)
    }

    pub fn scalar(&self, p: &Point) -> Result<f64, TensorError> {
        Ok(self.geometry(p)?.scalar)
    }

    pub fn einstein(&self, p: &Point) -> Result<[[f64; 4]; 4], TensorError> {
        Ok(self.geometry(p)?.einstein)
    }

    pub fn kretschmann(&self, p: &Point) -> Result<f64, TensorError> {
        Ok(self.curvature(p)?.kretschmann)
    }

    /// `∇_μ G^μ_ν` from exact third metric partials. Requires a metric built
    /// with [`DerivedMetric::with_third_order`].
    pub fn bianchi_residual(&self, p: &Point) -> Result<BianchiReport, TensorError> {
        if self.d3.is_none() {
            return Err(TensorError::Invalid(
                "Bianchi residual needs third-order partials".into(),
            ));
        }
        let jet = self.jet(p)?;
        let dddg = jet.dddg.as_ref().expect("third-order jet");
        let g = std::array::from_fn(|m| {
            std::array::from_fn(|n| Dual::new(jet.g[m][n], std::array::from_fn(|k| jet.dg[k][m][n])))
        });
        let dg = std::array::from_fn(|l| {
            std::array::from_fn(|m| {
                std::array::from_fn(|n| {
                    Dual::new(jet.dg[l][m][n], std::array::from_fn(|k| jet.ddg[k][l][m][n]))
                })
            })
        });
        let ddg = std::array::from_fn(|k| {
            std::array::from_fn(|l| {
                std::array::from_fn(|m| {
                    std::array::from_fn(|n| {
                        Dual::new(jet.ddg[k][l][m][n], std::array::from_fn(|j| dddg[j][k][l][m][n]))
                    })
                })
            })
        });
        let geo = curvature::assemble(&g, &dg, &ddg, self.sign.factor()).ok_or(
            TensorError::Degenerate {
                point: *p,
                det: super::linalg::det4(&jet.g),
            },
        )?;
        Ok(curvature::bianchi(&geo))
    }
}

fn permutations3(a: usize, b: usize, c: usize) -> [[usize; 3]; 6] {
    [
        [a, b, c],
        [a, c, b],
        [b, a, c],
        [b, c, a],
        [c, a, b],
        [c, b, a],
    ]
}
