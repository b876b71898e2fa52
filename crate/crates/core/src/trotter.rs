//! `cos(t√(A₁²+⋯+A_q²))h` for non-commuting bounded Hermitian `Aᵢ` as the
//! `m → ∞` limit of
//!
//! ```text
//! F_m(t) = Σ_n (−1)ⁿ t^{2n} n!/(2n)! · W_n h,
//! W_n = [zⁿ] (e^{zA₁²/m} ⋯ e^{zA_q²/m})^m.
//! ```
//!
//! For `q = 2` and `m ≤ 3`, `F_m` is also evaluated directly as the ball
//! average of alternating one-dimensional cosines in dimension `2m`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::commutative::{bracket_coefficients, ladder_pair, majorant_coefficients, Domain};
use crate::error::{Error, Result};
use crate::operator::{analytic_bound_many, sum_of_squares, CMatrix, CVector, HermitianOperator, StateVector};
use crate::quadrature::{build_ball_rule, dirichlet_moment, BallRule, QuadratureRule};
use crate::series::{cosine_tail_bound, cosine_truncation, Coefficient};

pub const COMMUTING_TOL: f64 = 1e-12;
/// Documented constant `C′` in `‖result − cos(t√S)h‖ ≤ C′·tol·‖h‖`.
pub const LIMIT_CONSTANT: f64 = 2.0;
const MEMORY_BUDGET_BYTES: usize = 1 << 30;
const MAX_ORDER: usize = 4096;

/// `W₀h, …, W_N h` for one value of `m`.
#[derive(Debug, Clone)]
pub struct TaylorOperatorSeries {
    pub order: usize,
    pub coeffs: Vec<CVector>,
    pub m: usize,
    /// `‖Xⱼ‖₂/m` for each factor of the repeating pattern.
    pub factor_norms: Vec<f64>,
}

/// Series multiplication through the `q·m` factors `exp(zXⱼ/m)`, rightmost
/// first; each exponential is cut at order `N`, which is exact for the
/// coefficients kept.
pub fn taylor_series_build(
    squares: &[HermitianOperator],
    h: &StateVector,
    m: usize,
    order: usize,
) -> Result<TaylorOperatorSeries> {
    if squares.is_empty() {
        return Err(Error::Empty);
    }
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    let dim = h.dim();
    for x in squares {
        if x.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: x.dim(),
            });
        }
    }
    let bytes = (order + 1).saturating_mul(dim).saturating_mul(16);
    if order > MAX_ORDER || bytes > MEMORY_BUDGET_BYTES {
        return Err(Error::MemoryBudget { order, dim });
    }
    let inv_m = Complex64::new(1.0 / m as f64, 0.0);
    let scaled: Vec<CMatrix> = squares.iter().map(|x| x.matrix() * inv_m).collect();
    let factor_norms = squares
        .iter()
        .map(|x| x.norm2().map(|v| v / m as f64))
        .collect::<Result<Vec<_>>>()?;

    let mut v = vec![CVector::zeros(dim); order + 1];
    v[0] = h.entries().clone();
    let mut next = vec![CVector::zeros(dim); order + 1];
    for _ in 0..m {
        for y in scaled.iter().rev() {
            for slot in next.iter_mut() {
                slot.fill(Complex64::new(0.0, 0.0));
            }
            for i in 0..=order {
                let mut u = v[i].clone();
                next[i] += &u;
                for j in 1..=order - i {
                    u = y * &u;
                    u *= Complex64::new(1.0 / j as f64, 0.0);
                    next[i + j] += &u;
                }
            }
            std::mem::swap(&mut v, &mut next);
        }
    }
    Ok(TaylorOperatorSeries {
        order,
        coeffs: v,
        m,
        factor_norms,
    })
}

/// `A ↦ A²` for every operator.
pub fn squares_of(ops: &[HermitianOperator]) -> Vec<HermitianOperator> {
    ops.iter().map(HermitianOperator::square).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Propagator {
    /// `cos(t√S)`
    Cos,
    /// `sin(t√S)/√S`
    Sin,
}

impl Propagator {
    /// Time factors `(−1)ⁿ t^{2n} n!/(2n)!` or `(−1)ⁿ t^{2n+1} n!/(2n+1)!`.
    fn time_factors(self, t: f64, order: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(order + 1);
        let (mut f, offset) = match self {
            Propagator::Cos => (1.0, 1.0),
            Propagator::Sin => (t, 3.0),
        };
        out.push(f);
        for n in 1..=order {
            f *= -t * t / (2.0 * (2.0 * n as f64 - 2.0 + offset));
            out.push(f);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailMode {
    /// Require `√q|t|K < 1` and the geometric tail bound.
    Strict,
    /// Fall back to empirical order refinement outside the radius.
    Caution,
}

#[derive(Debug, Clone)]
pub struct FmValue {
    pub state: StateVector,
    pub order: usize,
    /// `C(√q|t|K)^{2N+2}/(1 − qt²K²)`; `None` outside the radius.
    pub tail_bound: Option<f64>,
    pub radius: f64,
    pub caution: bool,
    /// Norm of the last series term kept.
    pub last_term: f64,
}

/// `F_m(t; A, B; h)` with the rigorous tail bound `≤ tol`.
pub fn fm_evaluate(
    a: &HermitianOperator,
    b: &HermitianOperator,
    h: &StateVector,
    m: usize,
    t: f64,
    tol: f64,
) -> Result<StateVector> {
    Ok(fm_evaluate_with(&[a.clone(), b.clone()], h, m, t, tol, TailMode::Strict, Propagator::Cos)?.state)
}

pub fn fm_evaluate_with(
    ops: &[HermitianOperator],
    h: &StateVector,
    m: usize,
    t: f64,
    tol: f64,
    mode: TailMode,
    prop: Propagator,
) -> Result<FmValue> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    let q = ops.len();
    let bound = analytic_bound_many(ops, h)?;
    let radius = bound.radius_for(q);
    let r = q as f64 * t * t * bound.k * bound.k;
    let time_scale = match prop {
        Propagator::Cos => 1.0,
        Propagator::Sin => t.abs(),
    };
    let squares = squares_of(ops);

    if r < 1.0 {
        let geometric = |n: usize| time_scale * bound.c * r.powi(n as i32 + 1) / (1.0 - r);
        let mut order = 0;
        while geometric(order) > tol {
            order += 1;
            if order > MAX_ORDER {
                return Err(Error::TruncationFailed { order, tol });
            }
        }
        let series = taylor_series_build(&squares, h, m, order)?;
        let (state, last_term) = sum_series(&series, t, prop);
        return Ok(FmValue {
            state,
            order,
            tail_bound: Some(geometric(order)),
            radius,
            caution: false,
            last_term,
        });
    }
    if mode == TailMode::Strict {
        return Err(Error::OutsideRadius { t, radius });
    }
    // terms are at most C(√q|t|K)^{2n}/(2n)! for bounded operators
    let x = (q as f64).sqrt() * t.abs() * bound.k;
    let mut order = cosine_truncation(x, tol / (bound.c * time_scale).max(f64::MIN_POSITIVE)).max(2);
    loop {
        let series = taylor_series_build(&squares, h, m, order)?;
        let (state, last_term) = sum_series(&series, t, prop);
        let factors = prop.time_factors(t, order);
        let previous = factors[order - 1].abs() * series.coeffs[order - 1].norm();
        if last_term < tol && previous < tol {
            return Ok(FmValue {
                state,
                order,
                tail_bound: None,
                radius,
                caution: true,
                last_term,
            });
        }
        order += 8;
        if order > MAX_ORDER {
            return Err(Error::TruncationFailed { order, tol });
        }
    }
}

fn sum_series(series: &TaylorOperatorSeries, t: f64, prop: Propagator) -> (StateVector, f64) {
    let factors = prop.time_factors(t, series.order);
    let mut acc = series.coeffs[0].zeros_like();
    for (c, &f) in series.coeffs.iter().zip(&factors).rev() {
        acc.add_scaled(f, c);
    }
    let last = factors[series.order].abs() * series.coeffs[series.order].norm();
    (StateVector::new(acc), last)
}

/// Direct evaluation of `F_m` as the `2m`-dimensional ball average of
/// `cos(ω₁tA/√m)cos(ω₂tB/√m)⋯cos(ω_{2m}tB/√m)h`, with the ladder in `t`.
#[derive(Debug, Clone)]
pub struct CrossCheck {
    pub state: StateVector,
    pub level: usize,
    pub certified_error: f64,
    /// Largest relative moment deviation (tensor) or relative standard
    /// error (Monte Carlo) of the rule.
    pub moment_error: f64,
}

pub fn fm_quadrature_crosscheck(
    a: &HermitianOperator,
    b: &HermitianOperator,
    h: &StateVector,
    m: usize,
    t: f64,
    mc_samples: Option<(usize, u64)>,
) -> Result<CrossCheck> {
    if !(1..=3).contains(&m) {
        return Err(Error::UnsupportedRule {
            dim: 2 * m,
            level: 0,
            reason: "the direct ball route is limited to m <= 3",
        });
    }
    let d = 2 * m;
    let s = Complex64::new((m as f64).sqrt().recip(), 0.0);
    let mut ops = Vec::with_capacity(d);
    let mut norms = Vec::with_capacity(d);
    let (na, nb) = (a.norm2()? / (m as f64).sqrt(), b.norm2()? / (m as f64).sqrt());
    for _ in 0..m {
        ops.push(a.matrix() * s);
        ops.push(b.matrix() * s);
        norms.push(na);
        norms.push(nb);
    }
    let x = norms.iter().sum::<f64>() * t.abs();
    let level = cosine_truncation(x, 1e-12);
    let (table, moment_error) = match mc_samples {
        None => {
            let rule = build_ball_rule(d, level)?;
            let table = rule.moment_table(level as u32);
            let err = table.max_relative_error(|al| dirichlet_moment(al, d).unwrap_or(f64::NAN));
            (table, err)
        }
        Some((samples, seed)) => {
            let rule = BallRule::monte_carlo(d, samples, seed)?;
            let table = rule.moment_table(level as u32);
            let err = crate::quadrature::MultiIndex::all_up_to(d, level as u32)
                .iter()
                .map(|al| {
                    let v = table.get(al).unwrap_or(f64::NAN);
                    table.std_error(al).unwrap_or(0.0) / v.abs()
                })
                .fold(0.0, f64::max);
            (table, err)
        }
    };
    let prefactor = (2.0 * PI).powi(-(m as i32));
    let bracket = bracket_coefficients(&ops, h.entries(), &table, level)?;
    let (cos, _) = ladder_pair(bracket, m, prefactor)?;
    let value = cos.evaluate_to(t, level).ok_or(Error::Empty)?;
    let t2 = t * t;
    let majorant: f64 = majorant_coefficients(&norms, Domain::Ball, level, prefactor)?
        .iter()
        .enumerate()
        .map(|(k, c)| c * t2.powi(k as i32))
        .sum();
    let rounding = 64.0 * f64::EPSILON * (level + 1) as f64 * (d + 1) as f64;
    let certified_error = ((moment_error + rounding) * majorant + cosine_tail_bound(x, level)) * h.norm();
    Ok(CrossCheck {
        state: StateVector::new(value),
        level,
        certified_error,
        moment_error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Converged,
    /// The `m` cap was reached before the successive differences met `tol`.
    Slow,
    /// Converged empirically, but `t` lies outside the radius of the
    /// rigorous tail bound.
    OutsideRadius,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub m_values: Vec<usize>,
    /// Errors against the reference when one was supplied, otherwise the
    /// successive differences (first entry 0 as there is nothing to compare).
    pub errors: Vec<f64>,
    pub error_kind: ErrorKind,
    /// `‖F_{m_i} − F_{m_{i−1}}‖`, one fewer than `m_values`.
    pub differences: Vec<f64>,
    pub truncation_order: usize,
    pub tail_bound: Option<f64>,
    pub radius: f64,
    pub verdict: Verdict,
    pub caution: bool,
    pub commuting: bool,
    pub richardson: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Reference,
    SuccessiveDifference,
}

#[derive(Debug, Clone)]
pub struct LimitOptions {
    pub m0: usize,
    pub m_cap: usize,
    /// Absolute truncation tolerance of each `F_m`; defaults to
    /// `1e−12·‖h‖`.
    pub series_tol: Option<f64>,
    /// Return `2F_{2m} − F_m` instead of `F_{2m}`.
    pub richardson: bool,
    pub reference: Option<StateVector>,
    pub propagator: Propagator,
}

impl Default for LimitOptions {
    fn default() -> Self {
        Self {
            m0: 4,
            m_cap: 1024,
            series_tol: None,
            richardson: false,
            reference: None,
            propagator: Propagator::Cos,
        }
    }
}

/// Doubles `m` from `m0` until `‖F_{2m} − F_m‖ ≤ tol·‖h‖` or `m > m_cap`.
pub fn noncomm_limit(
    ops: &[HermitianOperator],
    h: &StateVector,
    t: f64,
    tol: f64,
    opts: &LimitOptions,
) -> Result<(StateVector, ConvergenceReport)> {
    if ops.len() < 2 {
        return Err(Error::InvalidParameter("at least two operators are required".into()));
    }
    if opts.m0 == 0 || opts.m_cap < opts.m0 {
        return Err(Error::InvalidParameter("need 1 <= m0 <= m_cap".into()));
    }
    let hn = h.norm();
    let series_tol = opts.series_tol.unwrap_or(1e-12 * hn).max(f64::MIN_POSITIVE);
    let mut commuting = true;
    for (i, a) in ops.iter().enumerate() {
        for b in &ops[i + 1..] {
            if a.commutator_norm(b)? > COMMUTING_TOL * a.frobenius_norm() * b.frobenius_norm() {
                commuting = false;
            }
        }
    }
    let reference_error = |v: &StateVector| -> Result<Option<f64>> {
        opts.reference.as_ref().map(|r| r.distance(v)).transpose()
    };

    let mut m = opts.m0;
    let first = fm_evaluate_with(ops, h, m, t, series_tol, TailMode::Caution, opts.propagator)?;
    let mut m_values = vec![m];
    let mut ref_errors = vec![reference_error(&first.state)?];
    let mut differences = Vec::new();
    let mut order = first.order;
    let mut tail_bound = first.tail_bound;
    let radius = first.radius;
    let caution = first.caution;
    let mut current = first.state;
    let mut result = current.clone();
    let mut converged = commuting || hn == 0.0;

    while !converged && 2 * m <= opts.m_cap {
        m *= 2;
        let next = fm_evaluate_with(ops, h, m, t, series_tol, TailMode::Caution, opts.propagator)?;
        let diff = next.state.distance(&current)?;
        m_values.push(m);
        ref_errors.push(reference_error(&next.state)?);
        differences.push(diff);
        order = order.max(next.order);
        tail_bound = match (tail_bound, next.tail_bound) {
            (Some(x), Some(y)) => Some(x.max(y)),
            _ => None,
        };
        result = if opts.richardson {
            let mut r = next.state.entries().clone();
            r *= Complex64::new(2.0, 0.0);
            r -= current.entries();
            StateVector::new(r)
        } else {
            next.state.clone()
        };
        current = next.state;
        converged = diff <= tol * hn;
    }

    let (errors, error_kind) = if opts.reference.is_some() {
        (ref_errors.into_iter().map(|e| e.unwrap_or(f64::NAN)).collect(), ErrorKind::Reference)
    } else {
        let mut e = vec![0.0];
        e.extend(&differences);
        (e, ErrorKind::SuccessiveDifference)
    };
    let verdict = match (converged, caution) {
        (false, _) => Verdict::Slow,
        (true, true) => Verdict::OutsideRadius,
        (true, false) => Verdict::Converged,
    };
    Ok((
        result,
        ConvergenceReport {
            m_values,
            errors,
            error_kind,
            differences,
            truncation_order: order,
            tail_bound,
            radius,
            verdict,
            caution,
            commuting,
            richardson: opts.richardson,
        },
    ))
}

pub fn cos_noncomm(
    a: &HermitianOperator,
    b: &HermitianOperator,
    h: &StateVector,
    t: f64,
    tol: f64,
) -> Result<(StateVector, ConvergenceReport)> {
    cos_noncomm_q(&[a.clone(), b.clone()], h, t, tol)
}

pub fn cos_noncomm_q(
    ops: &[HermitianOperator],
    h: &StateVector,
    t: f64,
    tol: f64,
) -> Result<(StateVector, ConvergenceReport)> {
    noncomm_limit(ops, h, t, tol, &LimitOptions::default())
}

/// `sin(t√(A²+B²))/√(A²+B²) h`.
pub fn sin_noncomm(
    a: &HermitianOperator,
    b: &HermitianOperator,
    h: &StateVector,
    t: f64,
    tol: f64,
) -> Result<StateVector> {
    let opts = LimitOptions {
        propagator: Propagator::Sin,
        ..LimitOptions::default()
    };
    Ok(noncomm_limit(&[a.clone(), b.clone()], h, t, tol, &opts)?.0)
}

/// `‖(A²+B²)ⁿh/n! − W_n h‖` for each `m`.
pub fn taylor_limit_check(
    a: &HermitianOperator,
    b: &HermitianOperator,
    n: usize,
    h: &StateVector,
    m_values: &[usize],
) -> Result<Vec<f64>> {
    if n > 8 {
        return Err(Error::InvalidParameter(format!("n = {n} exceeds 8")));
    }
    let s = sum_of_squares(&[a.clone(), b.clone()])?;
    let mut lhs = h.entries().clone();
    for k in 1..=n {
        lhs = s.matrix() * lhs;
        lhs *= Complex64::new(1.0 / k as f64, 0.0);
    }
    let squares = squares_of(&[a.clone(), b.clone()]);
    m_values
        .iter()
        .map(|&m| {
            let series = taylor_series_build(&squares, h, m, n)?;
            Ok((&series.coeffs[n] - &lhs).norm())
        })
        .collect()
}
