//! Ascent averages of translated grid data as Fourier multipliers.
//!
//! With spectral interpolation, `Σ_ν w_ν f(x + τω_ν)` has Fourier multiplier
//! `Σ_ν w_ν e^{iτω_ν·k}`; the rules are closed under coordinate
//! reflections, so this equals `Σ_ν w_ν Π_j cos(τω_{ν,j}k_j)`, a sum of
//! separable products of one-dimensional cosines. A constant operator `a`
//! (mass term) contributes one more factor `cos(τω_{ν,N}a)`, or `cosh` for
//! the damped continuation.

use std::f64::consts::PI;

use ascent_core::quadrature::{build_ball_rule, build_sphere_rule, QuadratureRule};
use ascent_core::{Error, Result};
use rayon::prelude::*;

/// Constant operator appended to the spatial momenta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mass {
    None,
    /// `+a²` in `S`: factor `cos(τωa)`.
    Real(f64),
    /// `−a²` in `S`: factor `cosh(τωa)`.
    Imaginary(f64),
}

impl Mass {
    fn factor(self, x: f64) -> f64 {
        match self {
            Mass::None => 1.0,
            Mass::Real(a) => (x * a).cos(),
            Mass::Imaginary(a) => (x * a).cosh(),
        }
    }

    fn magnitude(self) -> f64 {
        match self {
            Mass::None => 0.0,
            Mass::Real(a) | Mass::Imaginary(a) => a.abs(),
        }
    }
}

/// Weighted rule for `N = spatial + [mass]` operators with the matching
/// prefactor and ladder depth.
#[derive(Debug, Clone)]
pub struct FieldAscent {
    spatial: usize,
    mass: Mass,
    n_ops: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl FieldAscent {
    pub fn new(spatial: usize, mass: Mass, level: usize) -> Result<Self> {
        if !(1..=3).contains(&spatial) {
            return Err(Error::Grid(format!("unsupported spatial dimension {spatial}")));
        }
        let n_ops = spatial + usize::from(mass != Mass::None);
        let set = if n_ops % 2 == 1 {
            build_sphere_rule(n_ops, level)?.node_set().clone()
        } else {
            build_ball_rule(n_ops, level)?.node_set().clone()
        };
        let mut nodes = Vec::with_capacity(set.len() * n_ops);
        let mut weights = Vec::with_capacity(set.len());
        for (x, w) in set.iter() {
            nodes.extend_from_slice(x);
            weights.push(w);
        }
        Ok(Self {
            spatial,
            mass,
            n_ops,
            nodes,
            weights,
        })
    }

    pub fn n_ops(&self) -> usize {
        self.n_ops
    }

    /// `n = 2m+1` or `n = 2m`.
    pub fn m(&self) -> usize {
        self.n_ops / 2
    }

    pub fn node_count(&self) -> usize {
        self.weights.len()
    }

    pub fn prefactor(&self) -> f64 {
        let p = (2.0 * PI).powi(-(self.m() as i32));
        if self.n_ops % 2 == 1 {
            0.5 * p
        } else {
            p
        }
    }

    /// `I(τ)(k) = Σ_ν w_ν Π_j cos(τω_{ν,j}k_j) · mass factor`, on the
    /// frequency grid `ks` (one wavenumber list per axis, row-major).
    pub fn average_multiplier(&self, ks: &[Vec<f64>], tau: f64) -> Vec<f64> {
        assert_eq!(ks.len(), self.spatial);
        let dims: Vec<usize> = ks.iter().map(Vec::len).collect();
        let count = self.node_count();
        let n = self.n_ops;
        // per-node one-dimensional cosine tables
        let tables: Vec<Vec<Vec<f64>>> = (0..self.spatial)
            .map(|axis| {
                (0..count)
                    .map(|v| {
                        let om = self.nodes[v * n + axis];
                        ks[axis].iter().map(|&k| (tau * om * k).cos()).collect()
                    })
                    .collect()
            })
            .collect();
        let scale: Vec<f64> = (0..count)
            .map(|v| {
                let extra = if self.n_ops > self.spatial {
                    self.mass.factor(tau * self.nodes[v * n + self.spatial])
                } else {
                    1.0
                };
                self.weights[v] * extra
            })
            .collect();
        let row: usize = dims[1..].iter().product();
        let mut out = vec![0.0; dims.iter().product()];
        out.par_chunks_mut(row).enumerate().for_each(|(i0, slot)| {
            for v in 0..count {
                let c0 = scale[v] * tables[0][v][i0];
                match self.spatial {
                    1 => slot[0] += c0,
                    2 => {
                        for (s, c1) in slot.iter_mut().zip(&tables[1][v]) {
                            *s += c0 * c1;
                        }
                    }
                    _ => {
                        let d2 = dims[2];
                        for (i1, c1) in tables[1][v].iter().enumerate() {
                            let c01 = c0 * c1;
                            for (s, c2) in slot[i1 * d2..(i1 + 1) * d2].iter_mut().zip(&tables[2][v]) {
                                *s += c01 * c2;
                            }
                        }
                    }
                }
            }
        });
        out
    }

    /// `prefactor · D[τ^{2m−1} I(τ)]` at `τ = t`; `∂/∂t` by a five-point
    /// stencil with one Richardson step. Only `m ≤ 1`.
    pub fn multiplier_stencil(&self, ks: &[Vec<f64>], t: f64) -> Result<Vec<f64>> {
        let pref = self.prefactor();
        match self.m() {
            0 => Ok(self.average_multiplier(ks, t).into_iter().map(|v| pref * v).collect()),
            1 => {
                let bracket = |tau: f64| -> Vec<f64> {
                    self.average_multiplier(ks, tau).into_iter().map(|v| tau * v).collect()
                };
                let d = stencil_derivative(bracket, t);
                Ok(d.into_iter().map(|v| pref * v).collect())
            }
            m => Err(Error::Parity(format!("stencil route handles m <= 1, got m = {m}"))),
        }
    }

    /// `prefactor · D[τ^{2m−1} I(τ)]` with `I` fitted by a Chebyshev series
    /// in `s = τ²` and the ladder applied exactly to the fit. `weights`
    /// (e.g. `|f̂|`) decide which modes the fit residual is checked on.
    pub fn multiplier_chebyshev(&self, ks: &[Vec<f64>], t: f64, weights: &[f64]) -> Result<ChebyshevMultiplier> {
        let pref = self.prefactor();
        let m = self.m();
        if m == 0 {
            let values = self.average_multiplier(ks, t).into_iter().map(|v| pref * v).collect();
            return Ok(ChebyshevMultiplier {
                values,
                degree: 0,
                residual: 0.0,
            });
        }
        let s_max = (1.1 * t).powi(2).max(1e-6);
        let wmax = weights.iter().copied().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let mut degree = 16;
        loop {
            let pts = degree + 1;
            let samples: Vec<Vec<f64>> = (0..pts)
                .map(|i| {
                    let x = (PI * (i as f64 + 0.5) / pts as f64).cos();
                    let s = 0.5 * s_max * (1.0 + x);
                    self.average_multiplier(ks, s.sqrt())
                })
                .collect();
            let modes = samples[0].len();
            let basis: Vec<Vec<f64>> = (0..pts)
                .map(|j| {
                    (0..pts)
                        .map(|i| (PI * j as f64 * (i as f64 + 0.5) / pts as f64).cos())
                        .collect()
                })
                .collect();
            let ladder = ladder_polynomial(m);
            let x_eval = 2.0 * t * t / s_max - 1.0;
            let s_eval = t * t;
            let results: Vec<(f64, f64)> = (0..modes)
                .into_par_iter()
                .map(|mode| {
                    let mut c: Vec<f64> = basis
                        .iter()
                        .map(|row| {
                            row.iter().zip(&samples).map(|(b, s)| b * s[mode]).sum::<f64>() * 2.0 / pts as f64
                        })
                        .collect();
                    c[0] *= 0.5;
                    let tail = c[degree].abs() + c[degree - 1].abs();
                    let mut value = 0.0;
                    let mut deriv = c;
                    for (r, &coef) in ladder.iter().enumerate() {
                        if r > 0 {
                            deriv = chebyshev_derivative(&deriv, 2.0 / s_max);
                        }
                        if coef != 0.0 {
                            value += coef * s_eval.powi(r as i32) * clenshaw(&deriv, x_eval);
                        }
                    }
                    (pref * value, tail * weights[mode] / wmax)
                })
                .collect();
            let residual = results.iter().map(|r| r.1).fold(0.0, f64::max);
            if residual <= FIT_TOL {
                return Ok(ChebyshevMultiplier {
                    values: results.into_iter().map(|r| r.0).collect(),
                    degree,
                    residual,
                });
            }
            if degree >= MAX_FIT_DEGREE {
                return Err(Error::FitResidual {
                    residual,
                    tol: FIT_TOL,
                    degree,
                });
            }
            degree *= 2;
        }
    }

    /// Largest `τ·(Σ_j |ω_j||k_j| + |ω_N||a|)` the rule must resolve for
    /// wavenumbers up to `kmax` per axis.
    pub fn argument_bound(&self, kmax: &[f64], t: f64) -> f64 {
        t.abs() * (kmax.iter().sum::<f64>() + self.mass.magnitude())
    }
}

pub const FIT_TOL: f64 = 1e-11;
pub const MAX_FIT_DEGREE: usize = 64;

#[derive(Debug, Clone)]
pub struct ChebyshevMultiplier {
    pub values: Vec<f64>,
    pub degree: usize,
    pub residual: f64,
}

/// Five-point centered derivative with `Δt = 10⁻³·max(1,|t|)`, refined by
/// one Richardson step.
pub fn stencil_derivative(g: impl Fn(f64) -> Vec<f64>, t: f64) -> Vec<f64> {
    let h = 1e-3 * t.abs().max(1.0);
    let five = |h: f64| -> Vec<f64> {
        let (a, b, c, d) = (g(t + 2.0 * h), g(t + h), g(t - h), g(t - 2.0 * h));
        (0..a.len())
            .map(|i| (-a[i] + 8.0 * b[i] - 8.0 * c[i] + d[i]) / (12.0 * h))
            .collect()
    };
    let coarse = five(h);
    let fine = five(0.5 * h);
    coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (16.0 * f - c) / 15.0)
        .collect()
}

/// Coefficients `c_r` with `D[t^{2m−1}P(t²)] = Σ_r c_r s^r P^{(r)}(s)`,
/// from `(1/t ∂/∂t)(t^{2j+1}P) = t^{2j−1}((2j+1)P + 2sP′)`.
pub fn ladder_polynomial(m: usize) -> Vec<f64> {
    let mut c = vec![0.0; m + 1];
    c[0] = 1.0;
    for j in (0..m).rev() {
        let a = (2 * j + 1) as f64;
        let mut next = vec![0.0; m + 1];
        for r in 0..=m {
            next[r] += (a + 2.0 * r as f64) * c[r];
            if r + 1 <= m {
                next[r + 1] += 2.0 * c[r];
            }
        }
        c = next;
    }
    c
}

fn chebyshev_derivative(c: &[f64], scale: f64) -> Vec<f64> {
    let n = c.len();
    if n <= 1 {
        return vec![0.0];
    }
    let mut d = vec![0.0; n];
    for j in (1..n).rev() {
        let upper = if j + 1 < n { d[j + 1] } else { 0.0 };
        d[j - 1] = upper + 2.0 * j as f64 * c[j];
    }
    d[0] *= 0.5;
    d.truncate(n - 1);
    for v in d.iter_mut() {
        *v *= scale;
    }
    d
}

fn clenshaw(c: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &cj in c.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + cj;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + c[0]
}
