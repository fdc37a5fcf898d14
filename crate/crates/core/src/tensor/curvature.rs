use super::linalg::{identity_residual, invert4, Mat4};
use super::scalar::{Dual, Scalar};
use super::Point;

type T3<T> = [[[T; 4]; 4]; 4];
type T4<T> = [[[[T; 4]; 4]; 4]; 4];

/// Global sign applied when lowering the Riemann tensor.
///
/// `Standard` is `R_{αβμν} = g_{αρ} R^ρ_{βμν}` with
/// `R^ρ_{σμν} = ∂_μΓ^ρ_{νσ} − ∂_νΓ^ρ_{μσ} + Γ^ρ_{μλ}Γ^λ_{νσ} − Γ^ρ_{νλ}Γ^λ_{μσ}`.
/// Ricci, scalar and Einstein tensors inherit the sign; the Kretschmann
/// scalar does not.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum RiemannSign {
    #[default]
    Standard,
    Flipped,
}

impl RiemannSign {
    pub fn factor(self) -> f64 {
        match self {
            RiemannSign::Standard => 1.0,
            RiemannSign::Flipped => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            RiemannSign::Standard => RiemannSign::Flipped,
            RiemannSign::Flipped => RiemannSign::Standard,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            RiemannSign::Standard => "+1",
            RiemannSign::Flipped => "-1",
        }
    }
}

/// Everything assembled from the metric jet at one point.
#[derive(Debug, Clone)]
pub(crate) struct Geometry<T> {
    pub g: Mat4<T>,
    pub g_inv: Mat4<T>,
    pub det: T,
    pub gamma: T3<T>,
    /// `dgamma[k][l][m][n] = ∂_k Γ^l_{mn}`
    pub dgamma: T4<T>,
    pub riemann: T4<T>,
    pub ricci: Mat4<T>,
    pub scalar: T,
    pub einstein: Mat4<T>,
}

fn zero3<T: Scalar>() -> T3<T> {
    [[[T::zero(); 4]; 4]; 4]
}

fn zero4<T: Scalar>() -> T4<T> {
    [[[[T::zero(); 4]; 4]; 4]; 4]
}

pub(crate) fn assemble<T: Scalar>(
    g: &Mat4<T>,
    dg: &T3<T>,
    ddg: &T4<T>,
    sign: f64,
) -> Option<Geometry<T>> {
    let (g_inv, det) = invert4(g)?;
    let half = T::from_f64(0.5);

    // ∂_k g^{ab} = -g^{ac} ∂_k g_{cd} g^{db}
    let mut dg_inv = zero3::<T>();
    for k in 0..4 {
        for a in 0..4 {
            for b in 0..4 {
                let mut acc = T::zero();
                for c in 0..4 {
                    for d in 0..4 {
                        acc = acc + g_inv[a][c] * dg[k][c][d] * g_inv[d][b];
                    }
                }
                dg_inv[k][a][b] = -acc;
            }
        }
    }

    // Γ_{σμν} and its partials, then raise.
    let mut gamma_low = zero3::<T>();
    let mut dgamma_low = zero4::<T>();
    for s in 0..4 {
        for m in 0..4 {
            for n in 0..4 {
                gamma_low[s][m][n] = half * (dg[m][s][n] + dg[n][s][m] - dg[s][m][n]);
                for k in 0..4 {
                    dgamma_low[k][s][m][n] =
                        half * (ddg[k][m][s][n] + ddg[k][n][s][m] - ddg[k][s][m][n]);
                }
            }
        }
    }
    let mut gamma = zero3::<T>();
    let mut dgamma = zero4::<T>();
    for l in 0..4 {
        for m in 0..4 {
            for n in 0..4 {
                let mut acc = T::zero();
                for s in 0..4 {
                    acc = acc + g_inv[l][s] * gamma_low[s][m][n];
                }
                gamma[l][m][n] = acc;
                for k in 0..4 {
                    let mut acc = T::zero();
                    for s in 0..4 {
                        acc = acc
                            + dg_inv[k][l][s] * gamma_low[s][m][n]
                            + g_inv[l][s] * dgamma_low[k][s][m][n];
                    }
                    dgamma[k][l][m][n] = acc;
                }
            }
        }
    }

    // R^ρ_{σμν}
    let mut riemann_up = zero4::<T>();
    for rho in 0..4 {
        for sig in 0..4 {
            for mu in 0..4 {
                for nu in 0..4 {
                    let mut acc = dgamma[mu][rho][nu][sig] - dgamma[nu][rho][mu][sig];
                    for lam in 0..4 {
                        acc = acc + gamma[rho][mu][lam] * gamma[lam][nu][sig]
                            - gamma[rho][nu][lam] * gamma[lam][mu][sig];
                    }
                    riemann_up[rho][sig][mu][nu] = acc;
                }
            }
        }
    }
    let s = T::from_f64(sign);
    let mut riemann = zero4::<T>();
    for a in 0..4 {
        for b in 0..4 {
            for m in 0..4 {
                for n in 0..4 {
                    let mut acc = T::zero();
                    for rho in 0..4 {
                        acc = acc + g[a][rho] * riemann_up[rho][b][m][n];
                    }
                    riemann[a][b][m][n] = s * acc;
                }
            }
        }
    }

    let mut ricci = [[T::zero(); 4]; 4];
    for m in 0..4 {
        for n in 0..4 {
            let mut acc = T::zero();
            for a in 0..4 {
                for b in 0..4 {
                    acc = acc + g_inv[a][b] * riemann[a][m][b][n];
                }
            }
            ricci[m][n] = acc;
        }
    }
    let mut scalar = T::zero();
    for m in 0..4 {
        for n in 0..4 {
            scalar = scalar + g_inv[m][n] * ricci[m][n];
        }
    }
    let einstein = std::array::from_fn(|m| {
        std::array::from_fn(|n| ricci[m][n] - half * g[m][n] * scalar)
    });

    Some(Geometry {
        g: *g,
        g_inv,
        det,
        gamma,
        dgamma,
        riemann,
        ricci,
        scalar,
        einstein,
    })
}

/// Pointwise curvature data.
#[derive(Debug, Clone)]
pub struct CurvatureBundle {
    pub point: Point,
    pub g: Mat4<f64>,
    pub g_inv: Mat4<f64>,
    pub det: f64,
    /// `Γ^λ_{μν}` indexed `[λ][μ][ν]`.
    pub gamma: T3<f64>,
    /// `∂_κ Γ^λ_{μν}` indexed `[κ][λ][μ][ν]`.
    pub dgamma: T4<f64>,
    pub riemann_low: T4<f64>,
    pub ricci: Mat4<f64>,
    pub scalar: f64,
    pub einstein: Mat4<f64>,
    pub kretschmann: f64,
}

/// Scaled residuals of the algebraic Riemann symmetries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryResiduals {
    pub first_pair: f64,
    pub second_pair: f64,
    pub pair_exchange: f64,
    pub first_bianchi: f64,
    pub ricci_symmetry: f64,
}

impl SymmetryResiduals {
    pub fn max(&self) -> f64 {
        [
            self.first_pair,
            self.second_pair,
            self.pair_exchange,
            self.first_bianchi,
            self.ricci_symmetry,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl CurvatureBundle {
    pub(crate) fn from_geometry(point: Point, geo: Geometry<f64>) -> Self {
        let kretschmann = kretschmann(&geo.g_inv, &geo.riemann);
        CurvatureBundle {
            point,
            g: geo.g,
            g_inv: geo.g_inv,
            det: geo.det,
            gamma: geo.gamma,
            dgamma: geo.dgamma,
            riemann_low: geo.riemann,
            ricci: geo.ricci,
            scalar: geo.scalar,
            einstein: geo.einstein,
            kretschmann,
        }
    }

    pub fn riemann(&self, idx: [usize; 4]) -> f64 {
        self.riemann_low[idx[0]][idx[1]][idx[2]][idx[3]]
    }

    pub fn max_abs_riemann(&self) -> f64 {
        self.riemann_low
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_ricci(&self) -> f64 {
        self.ricci.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Local curvature scale `sqrt(|K|)`.
    pub fn curvature_scale(&self) -> f64 {
        self.kretschmann.abs().sqrt()
    }

    /// `max |R_μν| / (1 + sqrt|K|)`; a vacuum metric gives rounding noise.
    pub fn zero_scaled_ricci(&self) -> f64 {
        self.max_abs_ricci() / (1.0 + self.curvature_scale())
    }

    /// `max |g·g⁻¹ − I|`, relative to the magnitude of the products.
    pub fn inverse_residual(&self) -> f64 {
        identity_residual(&self.g, &self.g_inv)
    }

    pub fn symmetry_residuals(&self) -> SymmetryResiduals {
        let r = &self.riemann_low;
        let scale = self.max_abs_riemann().max(f64::MIN_POSITIVE);
        let mut out = SymmetryResiduals {
            first_pair: 0.0,
            second_pair: 0.0,
            pair_exchange: 0.0,
            first_bianchi: 0.0,
            ricci_symmetry: 0.0,
        };
        for a in 0..4 {
            for b in 0..4 {
                for m in 0..4 {
                    for n in 0..4 {
                        let x = r[a][b][m][n];
                        out.first_pair = out.first_pair.max((x + r[b][a][m][n]).abs());
                        out.second_pair = out.second_pair.max((x + r[a][b][n][m]).abs());
                        out.pair_exchange = out.pair_exchange.max((x - r[m][n][a][b]).abs());
                        let cyc = x + r[a][m][n][b] + r[a][n][b][m];
                        out.first_bianchi = out.first_bianchi.max(cyc.abs());
                    }
                }
            }
        }
        let ricci_scale = self.max_abs_ricci().max(scale);
        for m in 0..4 {
            for n in 0..4 {
                out.ricci_symmetry = out
                    .ricci_symmetry
                    .max((self.ricci[m][n] - self.ricci[n][m]).abs());
            }
        }
        out.first_pair /= scale;
        out.second_pair /= scale;
        out.pair_exchange /= scale;
        out.first_bianchi /= scale;
        out.ricci_symmetry /= ricci_scale;
        out
    }
}

fn kretschmann(g_inv: &Mat4<f64>, low: &T4<f64>) -> f64 {
    // Raise one index at a time.
    let mut cur = *low;
    for slot in 0..4 {
        let mut next = [[[[0.0; 4]; 4]; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let idx = [a, b, c, d];
                        let mut acc = 0.0;
                        for x in 0..4 {
                            let mut j = idx;
                            j[slot] = x;
                            acc += g_inv[idx[slot]][x] * cur[j[0]][j[1]][j[2]][j[3]];
                        }
                        next[a][b][c][d] = acc;
                    }
                }
            }
        }
        cur = next;
    }
    let mut k = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    k += low[a][b][c][d] * cur[a][b][c][d];
                }
            }
        }
    }
    k
}

/// Maps an index quadruple onto the canonical representative of its
/// symmetry class: `a < b`, `c < d`, `(a, b) <= (c, d)`. Returns the sign
/// relating the two, or `None` when antisymmetry forces the component to 0.
pub fn canonical_index(idx: [usize; 4]) -> Option<(f64, [usize; 4])> {
    let [mut a, mut b, mut c, mut d] = idx;
    if a == b || c == d {
        return None;
    }
    let mut sign = 1.0;
    if a > b {
        std::mem::swap(&mut a, &mut b);
        sign = -sign;
    }
    if c > d {
        std::mem::swap(&mut c, &mut d);
        sign = -sign;
    }
    if (a, b) > (c, d) {
        std::mem::swap(&mut a, &mut c);
        std::mem::swap(&mut b, &mut d);
    }
    Some((sign, [a, b, c, d]))
}

/// Residual of the contracted Bianchi identity `∇_μ G^μ_ν = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BianchiReport {
    pub residual: [f64; 4],
    /// Magnitude of the derivative terms the divergence is built from.
    pub scale: f64,
}

impl BianchiReport {
    pub fn max_abs(&self) -> f64 {
        self.residual.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn normalized(&self) -> f64 {
        self.max_abs() / (1.0 + self.scale)
    }
}

pub(crate) fn bianchi(geo: &Geometry<Dual>) -> BianchiReport {
    let mixed: Mat4<Dual> = std::array::from_fn(|m| {
        std::array::from_fn(|n| {
            (0..4).fold(Dual::zero(), |acc, a| acc + geo.g_inv[m][a] * geo.einstein[a][n])
        })
    });
    let mut residual = [0.0; 4];
    for (nu, out) in residual.iter_mut().enumerate() {
        let mut acc = 0.0;
        for mu in 0..4 {
            acc += mixed[mu][nu].d[mu];
            for lam in 0..4 {
                acc += geo.gamma[mu][mu][lam].v * mixed[lam][nu].v;
                acc -= geo.gamma[lam][mu][nu].v * mixed[mu][lam].v;
            }
        }
        *out = acc;
    }

    let max_of = |it: &mut dyn Iterator<Item = f64>| it.fold(0.0f64, |m, x| m.max(x.abs()));
    let gamma = max_of(&mut geo.gamma.iter().flatten().flatten().map(|x| x.v));
    let dgamma = max_of(&mut geo.dgamma.iter().flatten().flatten().flatten().map(|x| x.v));
    let ddgamma = max_of(
        &mut geo
            .dgamma
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .flat_map(|x| x.d.into_iter()),
    );
    let g_inv = max_of(&mut geo.g_inv.iter().flatten().map(|x| x.v));
    let curvature = dgamma + gamma * gamma;
    let derivative = ddgamma + gamma * dgamma;
    BianchiReport {
        residual,
        scale: g_inv * (derivative + gamma * curvature),
    }
}
