//! Power series in `t` with operator or vector coefficients, and the ladder
//! `∂/∂t (1/t ∂/∂t)^{m−1}` applied term by term.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{CMatrix, CVector};

/// Coefficient types a time series can carry.
pub trait Coefficient: Clone {
    fn zeros_like(&self) -> Self;
    fn scale(&mut self, s: f64);
    /// `self += a·x`
    fn add_scaled(&mut self, a: f64, x: &Self);
    fn left_mul(&self, m: &CMatrix) -> Self;
    fn norm(&self) -> f64;
}

impl Coefficient for CMatrix {
    fn zeros_like(&self) -> Self {
        CMatrix::zeros(self.nrows(), self.ncols())
    }

    fn scale(&mut self, s: f64) {
        *self *= Complex64::new(s, 0.0);
    }

    fn add_scaled(&mut self, a: f64, x: &Self) {
        self.zip_apply(x, |y, v| *y += v * a);
    }

    fn left_mul(&self, m: &CMatrix) -> Self {
        m * self
    }

    fn norm(&self) -> f64 {
        self.norm()
    }
}

impl Coefficient for CVector {
    fn zeros_like(&self) -> Self {
        CVector::zeros(self.len())
    }

    fn scale(&mut self, s: f64) {
        *self *= Complex64::new(s, 0.0);
    }

    fn add_scaled(&mut self, a: f64, x: &Self) {
        self.zip_apply(x, |y, v| *y += v * a);
    }

    fn left_mul(&self, m: &CMatrix) -> Self {
        m * self
    }

    fn norm(&self) -> f64 {
        self.norm()
    }
}

impl Coefficient for f64 {
    fn zeros_like(&self) -> Self {
        0.0
    }

    fn scale(&mut self, s: f64) {
        *self *= s;
    }

    fn add_scaled(&mut self, a: f64, x: &Self) {
        *self += a * x;
    }

    fn left_mul(&self, m: &CMatrix) -> Self {
        m[(0, 0)].re * self
    }

    fn norm(&self) -> f64 {
        self.abs()
    }
}

/// `Σ_k c_k t^{2k+p}`: even when `p = 0`, odd when `p = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<T> {
    pub leading_power: u32,
    pub coefficients: Vec<T>,
    pub tail_bound: f64,
}

impl<T: Coefficient> TimeSeries<T> {
    pub fn truncation(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    /// Horner evaluation in `t²`.
    pub fn evaluate(&self, t: f64) -> Option<T> {
        self.evaluate_to(t, self.truncation())
    }

    /// Evaluation using only `c_0, …, c_order`.
    pub fn evaluate_to(&self, t: f64, order: usize) -> Option<T> {
        let coeffs = &self.coefficients[..=order.min(self.truncation())];
        let (last, rest) = coeffs.split_last()?;
        let t2 = t * t;
        let mut acc = last.clone();
        for c in rest.iter().rev() {
            acc.scale(t2);
            acc.add_scaled(1.0, c);
        }
        if self.leading_power > 0 {
            acc.scale(t.powi(self.leading_power as i32));
        }
        Some(acc)
    }
}

pub type EvenTimeSeries<T> = TimeSeries<T>;

/// `t^{2m−1} Σ_k c_k t^{2k}`, the bracket the ladder acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct OddTimeSeries<T> {
    /// `2m − 1`; equals −1 for the one-dimensional case `m = 0`.
    pub parity_order: i32,
    pub coefficients: Vec<T>,
    pub tail_bound: f64,
}

impl<T: Coefficient> OddTimeSeries<T> {
    pub fn new(m: usize, coefficients: Vec<T>, tail_bound: f64) -> Self {
        Self {
            parity_order: 2 * m as i32 - 1,
            coefficients,
            tail_bound,
        }
    }

    pub fn truncation(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    /// Direct evaluation; undefined at `t = 0` when `m = 0`.
    pub fn evaluate(&self, t: f64) -> Option<T> {
        let inner = TimeSeries {
            leading_power: 0,
            coefficients: self.coefficients.clone(),
            tail_bound: 0.0,
        }
        .evaluate(t)?;
        let mut out = inner;
        out.scale(t.powi(self.parity_order));
        Some(out)
    }
}

/// `(2k+1)(2k+3)⋯(2k+2m−1)`: the full ladder on `t^{2k+2m−1}` leaves
/// this factor on `t^{2k}`.
pub fn ladder_factor(k: usize, m: usize) -> f64 {
    (0..m).map(|j| (2 * k + 2 * j + 1) as f64).product()
}

/// Ladder without the final `∂/∂t`: factor on `t^{2k+1}`. For `m = 0`
/// this is the antiderivative factor `1/(2k+1)`.
pub fn sine_ladder_factor(k: usize, m: usize) -> f64 {
    ladder_factor(k, m) / (2 * k + 1) as f64
}

fn check_parity<T>(series: &OddTimeSeries<T>, m: usize) -> Result<()> {
    if series.parity_order != 2 * m as i32 - 1 {
        return Err(Error::Parity(format!(
            "series has t-power {} but the ladder for m = {m} needs {}",
            series.parity_order,
            2 * m as i32 - 1
        )));
    }
    if m == 0 {
        return Err(Error::Parity("the ladder needs m >= 1".into()));
    }
    Ok(())
}

/// `∂/∂t (1/t ∂/∂t)^{m−1}` applied coefficient-wise to `t^{2m−1} Σ c_k t^{2k}`.
pub fn d_operator_apply<T: Coefficient>(series: &OddTimeSeries<T>, m: usize) -> Result<EvenTimeSeries<T>> {
    check_parity(series, m)?;
    Ok(ladder(series, |k| ladder_factor(k, m), 0))
}

/// The same ladder with the leftmost `∂/∂t` dropped; result is odd in `t`.
pub fn sine_ladder_apply<T: Coefficient>(series: &OddTimeSeries<T>, m: usize) -> Result<TimeSeries<T>> {
    check_parity(series, m)?;
    Ok(ladder(series, |k| sine_ladder_factor(k, m), 1))
}

fn ladder<T: Coefficient>(series: &OddTimeSeries<T>, factor: impl Fn(usize) -> f64, leading_power: u32) -> TimeSeries<T> {
    let coefficients = series
        .coefficients
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let mut c = c.clone();
            c.scale(factor(k));
            c
        })
        .collect();
    TimeSeries {
        leading_power,
        coefficients,
        tail_bound: series.tail_bound,
    }
}

/// Smallest `N` with `x^{2N+2}/(2N+2)! ≤ eps`.
pub fn cosine_truncation(x: f64, eps: f64) -> usize {
    let x = x.abs();
    let mut n = 0;
    let mut term = x * x / 2.0;
    while term > eps {
        n += 1;
        term *= x * x / ((2 * n + 1) * (2 * n + 2)) as f64;
    }
    n
}

/// `Σ_{k>N} x^{2k}/(2k)!` bounded by a geometric majorant.
pub fn cosine_tail_bound(x: f64, n: usize) -> f64 {
    let x2 = x * x;
    let mut term = 1.0;
    for k in 1..=n + 1 {
        term *= x2 / ((2 * k - 1) * (2 * k)) as f64;
    }
    let ratio = x2 / ((2 * n + 3) * (2 * n + 4)) as f64;
    if ratio >= 1.0 {
        f64::INFINITY
    } else {
        term / (1.0 - ratio)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_m1_on_linear_term_gives_constant() {
        let s = OddTimeSeries::new(1, vec![2.5_f64], 0.0);
        let e = d_operator_apply(&s, 1).unwrap();
        assert_eq!(e.evaluate(0.7).unwrap(), 2.5);
    }

    #[test]
    fn ladder_m2_on_cubic() {
        let s = OddTimeSeries::new(2, vec![1.0_f64], 0.0);
        let e = d_operator_apply(&s, 2).unwrap();
        assert_eq!(e.coefficients, vec![3.0]);
    }

    #[test]
    fn ladder_matches_finite_differences() {
        let s = OddTimeSeries::new(1, vec![0.0_f64, 1.0], 0.0);
        let e = d_operator_apply(&s, 1).unwrap();
        let t = 0.8;
        let h = 1e-4;
        let fd = (s.evaluate(t + h).unwrap() - s.evaluate(t - h).unwrap()) / (2.0 * h);
        assert!((e.evaluate(t).unwrap() - 3.0 * t * t).abs() < 1e-14);
        assert!((fd - 3.0 * t * t).abs() < 1e-7);
    }

    #[test]
    fn ladder_m3_against_finite_differences() {
        // (∂/∂t)(1/t ∂/∂t)² t^{2k+5}
        let coeffs = vec![0.3_f64, -0.2, 0.05];
        let s = OddTimeSeries::new(3, coeffs.clone(), 0.0);
        let e = d_operator_apply(&s, 3).unwrap();
        let g = |t: f64| s.evaluate(t).unwrap();
        let h = 1e-3;
        let d = |f: &dyn Fn(f64) -> f64, t: f64| (f(t + h) - f(t - h)) / (2.0 * h);
        let step1 = |t: f64| d(&g, t) / t;
        let step2 = |t: f64| d(&step1, t) / t;
        let t = 0.9;
        let fd = d(&step2, t);
        assert!((fd - e.evaluate(t).unwrap()).abs() < 1e-4);
    }

    #[test]
    fn sine_ladder_is_antiderivative_of_cosine_ladder() {
        for m in 0..4 {
            for k in 0..6 {
                let lhs = sine_ladder_factor(k, m) * (2 * k + 1) as f64;
                assert_eq!(lhs, ladder_factor(k, m));
            }
        }
    }

    #[test]
    fn parity_mismatch_is_rejected() {
        let s = OddTimeSeries::new(2, vec![1.0_f64], 0.0);
        assert!(matches!(d_operator_apply(&s, 1), Err(Error::Parity(_))));
        let s0 = OddTimeSeries::new(0, vec![1.0_f64], 0.0);
        assert!(d_operator_apply(&s0, 0).is_err());
    }

    #[test]
    fn truncation_rule() {
        assert_eq!(cosine_truncation(0.0, 1e-12), 0);
        let x: f64 = 2.0;
        let n = cosine_truncation(x, 1e-12);
        let term = |n: usize| x.powi(2 * n as i32 + 2) / crate::special::gamma(2.0 * n as f64 + 3.0);
        assert!(term(n) <= 1e-12);
        assert!(term(n - 1) > 1e-12);
        let exact_tail: f64 = x.cosh() - (0..=n).map(|k| x.powi(2 * k as i32) / crate::special::gamma(2.0 * k as f64 + 1.0)).sum::<f64>();
        assert!(cosine_tail_bound(x, n) >= exact_tail);
    }
}
