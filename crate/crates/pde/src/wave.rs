//! Wave, Klein–Gordon and damped-wave propagators `u(t) = cos(t√S)f` on
//! periodic grids, by ascent averages of the translated data.

use std::f64::consts::PI;

use ascent_core::quadrature::{build_ball_rule, build_sphere_rule, gauss_jacobi, gauss_legendre, QuadratureRule, MAX_LEVEL};
use ascent_core::series::cosine_truncation;
use ascent_core::special::{bessel_i0, bessel_j0};
use ascent_core::{Error, Result};
use serde::Serialize;

use crate::grid::GridField;
use crate::kernel::{stencil_derivative, FieldAscent, Mass};

/// Modes below this fraction of the peak amplitude do not drive level
/// selection or the fit residual.
const SIGNIFICANT: f64 = 1e-13;

fn wavenumber_table(f: &GridField) -> Vec<Vec<f64>> {
    (0..f.ndim()).map(|a| f.wavenumbers(a)).collect()
}

fn guard_time(f: &GridField, t: f64) -> Result<()> {
    if !t.is_finite() || t.abs() >= 0.5 * f.min_length() {
        return Err(Error::Grid(format!(
            "|t| = {} must stay below half the box side {}",
            t.abs(),
            0.5 * f.min_length()
        )));
    }
    Ok(())
}

/// Largest `|k_j|` per axis among modes carrying more than `SIGNIFICANT`
/// of the peak amplitude.
pub fn significant_wavenumbers(f: &GridField) -> Vec<f64> {
    let spec = f.fft();
    let peak = spec.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let ks = wavenumber_table(f);
    let mut kmax = vec![0.0_f64; f.ndim()];
    let mut idx = vec![0; f.ndim()];
    for (i, z) in spec.iter().enumerate() {
        if z.norm() > SIGNIFICANT * peak {
            f.multi_index(i, &mut idx);
            for a in 0..f.ndim() {
                kmax[a] = kmax[a].max(ks[a][idx[a]].abs());
            }
        }
    }
    kmax
}

/// Rule level resolving `Πcos(tω_jk_j)` for the significant modes of `f`.
pub fn suggest_level(f: &GridField, t: f64, mass: f64) -> usize {
    let kmax = significant_wavenumbers(f);
    let x = t.abs() * (kmax.iter().sum::<f64>() + mass.abs());
    (cosine_truncation(x, 1e-14) + 2).min(MAX_LEVEL)
}

/// `u = (1/2π)∂/∂t[t ∫_{disk} f(x+tω)(1−|ω|²)^{−1/2} dω]`.
pub fn wave2d_poisson(f: &GridField, t: f64, level: usize) -> Result<GridField> {
    if f.ndim() != 2 {
        return Err(Error::Grid("wave2d needs a 2-D field".into()));
    }
    guard_time(f, t)?;
    let k = FieldAscent::new(2, Mass::None, level)?;
    f.apply_real_multiplier(&k.multiplier_stencil(&wavenumber_table(f), t)?)
}

/// `u = (1/4π)∂/∂t[t ∮_{S²} f(x+tω) dω]`.
pub fn wave3d_kirchhoff(f: &GridField, t: f64, level: usize) -> Result<GridField> {
    if f.ndim() != 3 {
        return Err(Error::Grid("wave3d needs a 3-D field".into()));
    }
    guard_time(f, t)?;
    let k = FieldAscent::new(3, Mass::None, level)?;
    f.apply_real_multiplier(&k.multiplier_stencil(&wavenumber_table(f), t)?)
}

/// General-dimension kernel with the ladder applied exactly to a Chebyshev
/// fit of the bracket; `n = 1` is the two-point average.
pub fn wave_general(f: &GridField, t: f64, level: usize) -> Result<GridField> {
    guard_time(f, t)?;
    ascent_chebyshev(f, t, Mass::None, level)
}

fn ascent_chebyshev(f: &GridField, t: f64, mass: Mass, level: usize) -> Result<GridField> {
    let k = FieldAscent::new(f.ndim(), mass, level)?;
    let weights: Vec<f64> = f.fft().iter().map(|z| z.norm()).collect();
    let fit = k.multiplier_chebyshev(&wavenumber_table(f), t, &weights)?;
    f.apply_real_multiplier(&fit.values)
}

fn ascent_auto(f: &GridField, t: f64, mass: Mass, level: usize) -> Result<GridField> {
    let k = FieldAscent::new(f.ndim(), mass, level)?;
    if k.m() <= 1 {
        f.apply_real_multiplier(&k.multiplier_stencil(&wavenumber_table(f), t)?)
    } else {
        ascent_chebyshev(f, t, mass, level)
    }
}

/// Mass parameter, spatial dimension, and the ladder depth `m` of the
/// `(n+1)`-operator family `(1/i)∂₁, …, (1/i)∂_n, a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KGKernelSpec {
    pub a: f64,
    pub n: usize,
    pub m: usize,
    /// `S = −Δ − a²` instead of `−Δ + a²`.
    pub damped: bool,
}

impl KGKernelSpec {
    pub fn new(n: usize, a: f64) -> Result<Self> {
        Self::build(n, a, false)
    }

    pub fn damped(n: usize, a: f64) -> Result<Self> {
        Self::build(n, a, true)
    }

    fn build(n: usize, a: f64, damped: bool) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::Grid(format!("unsupported spatial dimension {n}")));
        }
        if !(a >= 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!("mass must be finite and >= 0, got {a}")));
        }
        Ok(Self {
            a,
            n,
            m: (n + 1) / 2,
            damped,
        })
    }

    fn mass(&self) -> Mass {
        if self.damped {
            Mass::Imaginary(self.a)
        } else {
            Mass::Real(self.a)
        }
    }
}

/// `cos(t√(−Δ + a²))f` (or the damped continuation) by ascent over the
/// family `(1/i)∂₁, …, (1/i)∂_n, a`.
pub fn klein_gordon(f: &GridField, t: f64, spec: &KGKernelSpec, level: usize) -> Result<GridField> {
    if f.ndim() != spec.n {
        return Err(Error::Grid(format!("field has {} axes, spec says {}", f.ndim(), spec.n)));
    }
    guard_time(f, t)?;
    ascent_auto(f, t, spec.mass(), level)
}

/// `cos(t√(−Δ − a²))f`.
pub fn damped_wave(f: &GridField, t: f64, a: f64, level: usize) -> Result<GridField> {
    klein_gordon(f, t, &KGKernelSpec::damped(f.ndim(), a)?, level)
}

/// One-dimensional Klein–Gordon through the Bessel kernel,
/// `u = ∂/∂t ½∫_{−t}^{t} J₀(a√(t²−y²)) f(x+y) dy` (`I₀` when damped),
/// with `y = t sin θ` to remove the endpoint square roots.
pub fn klein_gordon_bessel_1d(f: &GridField, t: f64, a: f64, damped: bool, order: usize) -> Result<GridField> {
    if f.ndim() != 1 {
        return Err(Error::Grid("the Bessel route is one-dimensional".into()));
    }
    guard_time(f, t)?;
    let ks = f.wavenumbers(0);
    let rule = gauss_legendre(order)?;
    let kernel = |z: f64| if damped { bessel_i0(z) } else { bessel_j0(z) };
    let bracket = |tau: f64| -> Vec<f64> {
        ks.iter()
            .map(|&k| {
                let s: f64 = rule
                    .nodes
                    .iter()
                    .zip(&rule.weights)
                    .map(|(&x, &w)| {
                        let th = 0.5 * PI * x;
                        w * kernel(a * tau * th.cos()) * (k * tau * th.sin()).cos() * th.cos()
                    })
                    .sum();
                0.5 * tau * s * 0.5 * PI
            })
            .collect()
    };
    f.apply_real_multiplier(&stencil_derivative(bracket, t))
}

/// Both sides of `∫_{−c}^{c} cos(atω)(c²−ω²)^{−1/2} dω = πJ₀(atc)`, the
/// left by Gauss–Chebyshev quadrature.
pub fn bessel_identity_check(c: f64, at: f64) -> Result<(f64, f64)> {
    let rule = gauss_jacobi(48, -0.5, -0.5)?;
    let lhs = rule.integrate(|x| (at * c * x).cos());
    Ok((lhs, PI * bessel_j0(at * c)))
}

/// Pointwise ascent for an analytic initial datum:
/// `(1/2π)∂/∂t[t∫_{disk}…]` for `n = 2`, `(1/4π)∂/∂t[t∮_{S²}…]` for `n = 3`.
pub fn wave_at_point(f: &dyn Fn(&[f64]) -> f64, x: &[f64], t: f64, level: usize) -> Result<f64> {
    let n = x.len();
    let set = match n {
        2 => build_ball_rule(2, level)?.node_set().clone(),
        3 => build_sphere_rule(3, level)?.node_set().clone(),
        _ => return Err(Error::Grid(format!("pointwise evaluation needs n = 2 or 3, got {n}"))),
    };
    let bracket = |tau: f64| -> Vec<f64> {
        let mut y = vec![0.0; n];
        let s: f64 = set
            .iter()
            .map(|(om, w)| {
                for j in 0..n {
                    y[j] = x[j] + tau * om[j];
                }
                w * f(&y)
            })
            .sum();
        vec![tau * s]
    };
    let pref = if n == 2 { 1.0 / (2.0 * PI) } else { 1.0 / (4.0 * PI) };
    Ok(pref * stencil_derivative(bracket, t)[0])
}
