//! `cos(t√(A₁²+⋯+Aₙ²))` for commuting Hermitian `Aᵢ`, assembled from the
//! one-dimensional cosines `cos(tωᵢAᵢ)` averaged over a sphere (odd `n`) or
//! over the ball with weight `(1 − |ω|²)^{−1/2}` (even `n`).
//!
//! Each node's product `Πcos(tωᵢAᵢ)` is expanded in even powers of `t`; the
//! quadrature sum then contracts against the rule's moment table, so the
//! bracket `t^{2m−1}∫…` is an exact odd series and the ladder
//! `∂/∂t(1/t ∂/∂t)^{m−1}` acts on it symbolically.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{
    heat_semigroup, CMatrix, HermitianOperator, SpectralDecomposition,
};
use crate::quadrature::{
    build_ball_rule, build_sphere_rule, composite_gauss_legendre, dirichlet_moment, gauss_laguerre,
    sphere_moment, MomentTable, MultiIndex, QuadratureRule, MAX_LEVEL,
};
use crate::series::{
    cosine_tail_bound, cosine_truncation, d_operator_apply, ladder_factor, sine_ladder_apply,
    sine_ladder_factor, Coefficient, OddTimeSeries, TimeSeries,
};
use crate::special::inverse_factorials;

pub const COMMUTATOR_TOL: f64 = 1e-10;
pub const TRUNCATION_EPS: f64 = 1e-12;

/// Pairwise commuting Hermitian operators of a common dimension.
#[derive(Debug, Clone)]
pub struct CommutingFamily {
    ops: Vec<HermitianOperator>,
    commutator_defect: f64,
}

impl CommutingFamily {
    pub fn new(ops: Vec<HermitianOperator>) -> Result<Self> {
        let first = ops.first().ok_or(Error::Empty)?;
        let dim = first.dim();
        let mut worst = 0.0_f64;
        for (i, a) in ops.iter().enumerate() {
            if a.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: a.dim(),
                });
            }
            for b in &ops[i + 1..] {
                let scale = a.frobenius_norm() * b.frobenius_norm();
                let defect = a.commutator_norm(b)?;
                if defect > COMMUTATOR_TOL * scale {
                    return Err(Error::NotCommuting {
                        defect,
                        tolerance: COMMUTATOR_TOL * scale,
                    });
                }
                worst = worst.max(defect);
            }
        }
        Ok(Self {
            ops,
            commutator_defect: worst,
        })
    }

    pub fn ops(&self) -> &[HermitianOperator] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.ops[0].dim()
    }

    pub fn commutator_defect(&self) -> f64 {
        self.commutator_defect
    }

    /// The family with a zero operator appended.
    pub fn with_zero(&self) -> Self {
        let mut ops = self.ops.clone();
        ops.push(HermitianOperator::zeros(self.dim()));
        Self {
            ops,
            commutator_defect: self.commutator_defect,
        }
    }

    /// `Σ ‖Aᵢ‖₂`, which bounds `‖√S‖`.
    pub fn norm_sum(&self) -> Result<f64> {
        self.ops.iter().map(|a| a.norm2()).sum()
    }
}

/// Series truncation order for a family at time `t`.
pub fn required_level(fam: &CommutingFamily, t: f64) -> Result<usize> {
    Ok(cosine_truncation(fam.norm_sum()? * t.abs(), TRUNCATION_EPS))
}

/// Integration domain of the ascent formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// `S^{n−1}` for odd `n`.
    Sphere,
    /// Unit ball in `Rⁿ` for even `n`.
    Ball,
}

/// Moments of the rule that realizes the ascent integral, with their
/// deviation from the closed forms.
#[derive(Debug, Clone)]
pub struct AscentMoments {
    pub domain: Domain,
    pub n: usize,
    pub level: usize,
    pub table: MomentTable,
    /// Largest relative deviation of the rule's moments from the closed form.
    pub moment_error: f64,
}

impl AscentMoments {
    pub fn build(n: usize, level: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if level > MAX_LEVEL {
            return Err(Error::UnsupportedRule {
                dim: n,
                level,
                reason: "level above the supported maximum",
            });
        }
        let (domain, table, moment_error) = if n % 2 == 1 {
            let rule = build_sphere_rule(n, level)?;
            let table = rule.moment_table(level as u32);
            let err = table.max_relative_error(|a| sphere_moment(a, n).unwrap_or(f64::NAN));
            (Domain::Sphere, table, err)
        } else {
            let rule = build_ball_rule(n, level)?;
            let table = rule.moment_table(level as u32);
            let err = table.max_relative_error(|a| dirichlet_moment(a, n).unwrap_or(f64::NAN));
            (Domain::Ball, table, err)
        };
        Ok(Self {
            domain,
            n,
            level,
            table,
            moment_error,
        })
    }

    /// Moments taken from a caller-supplied table (e.g. a Monte-Carlo rule).
    pub fn from_table(domain: Domain, n: usize, table: MomentTable, moment_error: f64) -> Self {
        Self {
            domain,
            n,
            level: table.max_total as usize,
            table,
            moment_error,
        }
    }

    /// `m` with `n = 2m+1` (sphere) or `n = 2m` (ball).
    pub fn m(&self) -> usize {
        self.n / 2
    }

    /// `1/(2(2π)^m)` on the sphere, `(2π)^{−m}` on the ball.
    pub fn prefactor(&self) -> f64 {
        let p = (2.0 * PI).powi(-(self.m() as i32));
        match self.domain {
            Domain::Sphere => 0.5 * p,
            Domain::Ball => p,
        }
    }
}

/// Bracket coefficients `b_k = (−1)^k Σ_{|α|=k} Q(α)/(2α)! · X₁^{2α₁}⋯Xₙ^{2αₙ}·target`,
/// with `X₁` leftmost, so that `∫ Πcos(tωᵢXᵢ) target dω = Σ b_k t^{2k}`.
pub(crate) fn bracket_coefficients<T: Coefficient>(
    ops: &[CMatrix],
    target: &T,
    table: &MomentTable,
    order: usize,
) -> Result<Vec<T>> {
    let n = ops.len();
    if n != table.dim {
        return Err(Error::DimensionMismatch {
            expected: table.dim,
            found: n,
        });
    }
    if order > table.max_total as usize {
        return Err(Error::InsufficientLevel {
            level: table.max_total as usize,
            needed: order,
        });
    }
    let squares: Vec<CMatrix> = ops.iter().map(|x| x * x).collect();
    let inv_fact = inverse_factorials(2 * order + 1);
    let mut out = vec![target.zeros_like(); order + 1];
    let mut alpha = vec![0u32; n];
    let mut walker = Walker {
        squares: &squares,
        table,
        inv_fact: &inv_fact,
        alpha: &mut alpha,
        out: &mut out,
        missing: None,
    };
    walker.descend(n, order, target.clone(), 1.0);
    if let Some(needed) = walker.missing {
        return Err(Error::InsufficientLevel {
            level: table.max_total as usize,
            needed,
        });
    }
    for (k, b) in out.iter_mut().enumerate() {
        if k % 2 == 1 {
            b.scale(-1.0);
        }
    }
    Ok(out)
}

struct Walker<'a, T> {
    squares: &'a [CMatrix],
    table: &'a MomentTable,
    inv_fact: &'a [f64],
    alpha: &'a mut Vec<u32>,
    out: &'a mut Vec<T>,
    missing: Option<usize>,
}

impl<T: Coefficient> Walker<'_, T> {
    // Operators are applied right to left: index `i−1` acts on the product
    // already built from indices `i..n`.
    fn descend(&mut self, i: usize, left: usize, current: T, weight: f64) {
        if i == 0 {
            let total = self.alpha.iter().sum::<u32>() as usize;
            let key = MultiIndex::new(self.alpha.clone());
            match self.table.get(&key) {
                Some(q) => self.out[total].add_scaled(q * weight, &current),
                None => self.missing = Some(total),
            }
            return;
        }
        let idx = i - 1;
        let mut v = current;
        for a in 0..=left {
            self.alpha[idx] = a as u32;
            let w = weight * self.inv_fact[2 * a];
            let next = if a < left { Some(v.left_mul(&self.squares[idx])) } else { None };
            self.descend(idx, left - a, v, w);
            match next {
                Some(nv) => v = nv,
                None => break,
            }
        }
        self.alpha[idx] = 0;
    }
}

/// Evaluated propagator with its error budget.
#[derive(Debug, Clone)]
pub struct AscentValue {
    pub value: HermitianOperator,
    pub truncation: usize,
    pub tail_bound: f64,
    pub moment_error: f64,
    /// `(moment_error + rounding)·majorant + tail_bound`.
    pub certified_error: f64,
}

/// Precomputed ladder series for one family and one rule level; evaluation
/// at any `t` with `required_level(fam, t) ≤ level` is a Horner sum.
#[derive(Debug, Clone)]
pub struct CommutativeAscent {
    fam: CommutingFamily,
    moments: AscentMoments,
    cos_series: TimeSeries<CMatrix>,
    sin_series: TimeSeries<CMatrix>,
    /// Scalar series of the same shape with `Aᵢ` replaced by `‖Aᵢ‖₂` and
    /// closed-form moments; majorizes every coefficient.
    majorant: Vec<f64>,
    norm_sum: f64,
}

impl CommutativeAscent {
    pub fn new(fam: CommutingFamily, level: usize) -> Result<Self> {
        let moments = AscentMoments::build(fam.len(), level)?;
        Self::with_moments(fam, moments)
    }

    pub fn with_moments(fam: CommutingFamily, moments: AscentMoments) -> Result<Self> {
        if moments.n != fam.len() {
            return Err(Error::DimensionMismatch {
                expected: moments.n,
                found: fam.len(),
            });
        }
        let order = moments.level;
        let m = moments.m();
        let ops: Vec<CMatrix> = fam.ops().iter().map(|a| a.matrix().clone()).collect();
        let identity = CMatrix::identity(fam.dim(), fam.dim());
        let bracket = bracket_coefficients(&ops, &identity, &moments.table, order)?;
        let (cos_series, sin_series) = ladder_pair(bracket, m, moments.prefactor())?;

        let norms: Vec<f64> = fam.ops().iter().map(|a| a.norm2()).collect::<Result<_>>()?;
        let norm_sum = norms.iter().sum();
        let majorant = majorant_coefficients(&norms, moments.domain, order, moments.prefactor())?;
        Ok(Self {
            fam,
            moments,
            cos_series,
            sin_series,
            majorant,
            norm_sum,
        })
    }

    pub fn family(&self) -> &CommutingFamily {
        &self.fam
    }

    pub fn moments(&self) -> &AscentMoments {
        &self.moments
    }

    /// Coefficients `e_k` of `cos(t√S) = Σ e_k t^{2k}` as computed.
    pub fn cos_series(&self) -> &TimeSeries<CMatrix> {
        &self.cos_series
    }

    pub fn sin_series(&self) -> &TimeSeries<CMatrix> {
        &self.sin_series
    }

    fn plan(&self, t: f64) -> Result<(usize, f64, f64)> {
        let x = self.norm_sum * t.abs();
        let order = cosine_truncation(x, TRUNCATION_EPS);
        if order > self.moments.level {
            return Err(Error::InsufficientLevel {
                level: self.moments.level,
                needed: order,
            });
        }
        let t2 = t * t;
        let majorant: f64 = self.majorant[..=order]
            .iter()
            .enumerate()
            .map(|(k, c)| c * t2.powi(k as i32))
            .sum();
        Ok((order, cosine_tail_bound(x, order), majorant))
    }

    pub fn cos(&self, t: f64) -> Result<AscentValue> {
        let (order, tail, majorant) = self.plan(t)?;
        let value = self.cos_series.evaluate_to(t, order).ok_or(Error::Empty)?;
        self.finish(value, order, tail, majorant)
    }

    /// `sin(t√S)/√S`.
    pub fn sin(&self, t: f64) -> Result<AscentValue> {
        let (order, tail, majorant) = self.plan(t)?;
        let value = self.sin_series.evaluate_to(t, order).ok_or(Error::Empty)?;
        let s = t.abs();
        self.finish(value, order, tail * s, majorant * s)
    }

    fn finish(&self, value: CMatrix, order: usize, tail: f64, majorant: f64) -> Result<AscentValue> {
        let rounding = 64.0 * f64::EPSILON * (order + 1) as f64 * (self.fam.len() + 1) as f64;
        let certified_error = (self.moments.moment_error + rounding) * majorant + tail;
        Ok(AscentValue {
            value: HermitianOperator::new(value)?,
            truncation: order,
            tail_bound: tail,
            moment_error: self.moments.moment_error,
            certified_error,
        })
    }
}

/// `|b_k|·(2k+1)⋯(2k+2m−1)·prefactor` for the scalar family `‖Xᵢ‖₂` with
/// closed-form moments; bounds the coefficients of the computed series.
pub(crate) fn majorant_coefficients(norms: &[f64], domain: Domain, order: usize, prefactor: f64) -> Result<Vec<f64>> {
    let n = norms.len();
    let closed = match domain {
        Domain::Sphere => MomentTable::from_fn(n, order as u32, |a| sphere_moment(a, n).unwrap_or(f64::NAN)),
        Domain::Ball => MomentTable::from_fn(n, order as u32, |a| dirichlet_moment(a, n).unwrap_or(f64::NAN)),
    };
    let norm_ops: Vec<CMatrix> = norms
        .iter()
        .map(|&v| CMatrix::from_element(1, 1, Complex64::new(v, 0.0)))
        .collect();
    let raw = bracket_coefficients(&norm_ops, &1.0_f64, &closed, order)?;
    Ok(raw
        .iter()
        .enumerate()
        .map(|(k, b)| b.abs() * ladder_factor(k, n / 2) * prefactor)
        .collect())
}

/// Prefactor and ladder for both propagators. The one-dimensional case has
/// no ladder: the two-point sphere average is already `cos(tA)`, and the
/// sine is its antiderivative.
pub(crate) fn ladder_pair<T: Coefficient>(
    bracket: Vec<T>,
    m: usize,
    prefactor: f64,
) -> Result<(TimeSeries<T>, TimeSeries<T>)> {
    let mut bracket = bracket;
    for b in bracket.iter_mut() {
        b.scale(prefactor);
    }
    if m == 0 {
        let sin = bracket
            .iter()
            .enumerate()
            .map(|(k, b)| {
                let mut b = b.clone();
                b.scale(sine_ladder_factor(k, 0));
                b
            })
            .collect();
        return Ok((
            TimeSeries {
                leading_power: 0,
                coefficients: bracket,
                tail_bound: 0.0,
            },
            TimeSeries {
                leading_power: 1,
                coefficients: sin,
                tail_bound: 0.0,
            },
        ));
    }
    let odd = OddTimeSeries::new(m, bracket, 0.0);
    Ok((d_operator_apply(&odd, m)?, sine_ladder_apply(&odd, m)?))
}

fn parity_guard(fam: &CommutingFamily, odd: bool) -> Result<()> {
    if (fam.len() % 2 == 1) != odd {
        return Err(Error::Parity(format!(
            "family of {} operators has the wrong parity for this formula",
            fam.len()
        )));
    }
    Ok(())
}

/// Even `n = 2m`: `(2π)^{−m} D[t^{2m−1} ∫_{ball} Πcos(tωᵢAᵢ)(1−|ω|²)^{−1/2} dω]`.
pub fn cos_ascent_even(fam: &CommutingFamily, t: f64, rule_level: usize) -> Result<HermitianOperator> {
    parity_guard(fam, false)?;
    Ok(CommutativeAscent::new(fam.clone(), rule_level)?.cos(t)?.value)
}

/// Odd `n = 2m+1`: `(2(2π)^m)^{−1} D[t^{2m−1} ∫_{S^{2m}} Πcos(tωᵢAᵢ) dω]`.
pub fn cos_ascent_odd(fam: &CommutingFamily, t: f64, rule_level: usize) -> Result<HermitianOperator> {
    parity_guard(fam, true)?;
    Ok(CommutativeAscent::new(fam.clone(), rule_level)?.cos(t)?.value)
}

/// `sin(t√S)/√S` by the ladder without its leftmost `∂/∂t`.
pub fn sin_ascent(fam: &CommutingFamily, t: f64, rule_level: usize) -> Result<HermitianOperator> {
    Ok(CommutativeAscent::new(fam.clone(), rule_level)?.sin(t)?.value)
}

/// Both sides of `exp(−ρB²) = (4πρ)^{−1/2} ∫ e^{−t²/4ρ} cos(Bt) dt`.
#[derive(Debug, Clone)]
pub struct TransmutationCheck {
    pub lhs: HermitianOperator,
    pub rhs: HermitianOperator,
    pub gap: f64,
    /// Cut-off `T` of the `t`-integral and the Gaussian mass beyond it.
    pub cutoff: f64,
    pub tail_bound: f64,
}

pub fn transmutation_check(b: &HermitianOperator, rho: f64) -> Result<TransmutationCheck> {
    transmutation_check_tol(b, rho, 1e-14)
}

pub fn transmutation_check_tol(b: &HermitianOperator, rho: f64, tol: f64) -> Result<TransmutationCheck> {
    let lhs = heat_semigroup(b, rho)?;
    let cutoff = (4.0 * rho * (1.0 / tol).ln()).sqrt();
    let spec = SpectralDecomposition::new(b)?;
    let lam_max = spec.eigenvalues.iter().fold(0.0_f64, |a, &l| a.max(l.abs()));
    // about two panels per oscillation and per Gaussian width
    let span = 2.0 * cutoff * (lam_max + 1.0 / rho.sqrt());
    let panels = (span.ceil() as usize).max(8);
    let rule = composite_gauss_legendre(-cutoff, cutoff, panels, 16)?;
    let norm = (4.0 * PI * rho).sqrt().recip();
    let dim = b.dim();
    let mut acc = CMatrix::zeros(dim, dim);
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let g = norm * w * (-t * t / (4.0 * rho)).exp();
        let c = spec.apply(|l| (l * t).cos());
        acc.add_scaled(g, c.matrix());
    }
    let rhs = HermitianOperator::new(acc)?;
    let gap = lhs.frobenius_distance(&rhs)?;
    Ok(TransmutationCheck {
        lhs,
        rhs,
        gap,
        cutoff,
        tail_bound: (-cutoff * cutoff / (4.0 * rho)).exp() * (dim as f64).sqrt(),
    })
}

/// Frobenius gap between `Π exp(−ρAᵢ²)` and the radial double quadrature
/// `(4πρ)^{−n/2} ∫₀^∞ t^{n−1} e^{−t²/4ρ} ∫_{S^{n−1}} Πcos(tωᵢAᵢ) dω dt`.
pub fn product_heat_expansion_check(fam: &CommutingFamily, rho: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
    }
    let n = fam.len();
    let dim = fam.dim();
    let mut reference = CMatrix::identity(dim, dim);
    for a in fam.ops() {
        reference = &reference * heat_semigroup(a, rho)?.matrix();
    }

    // s = t²/4ρ: t^{n−1} e^{−t²/4ρ} dt = 2^{n−1} ρ^{n/2} s^{n/2−1} e^{−s} ds
    let radial = gauss_laguerre(48, n as f64 / 2.0 - 1.0)?;
    let sphere = build_sphere_rule(n, 24)?;
    let specs: Vec<SpectralDecomposition> = fam
        .ops()
        .iter()
        .map(SpectralDecomposition::new)
        .collect::<Result<_>>()?;
    let scale = 2f64.powi(n as i32 - 1) * rho.powf(n as f64 / 2.0) * (4.0 * PI * rho).powf(-(n as f64) / 2.0);
    let mut acc = CMatrix::zeros(dim, dim);
    for (&s, &ws) in radial.nodes.iter().zip(&radial.weights) {
        let t = 2.0 * (rho * s).sqrt();
        for (omega, wo) in sphere.node_set().iter() {
            let mut prod = CMatrix::identity(dim, dim);
            for (spec, &w) in specs.iter().zip(omega) {
                prod = &prod * spec.apply(|l| (t * w * l).cos()).matrix();
            }
            acc.add_scaled(scale * ws * wo, &prod);
        }
    }
    Ok((acc - reference).norm())
}
