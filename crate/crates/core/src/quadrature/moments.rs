//! Closed-form moments of the sphere and of the ball with the weight
//! `(1 − |ω|²)^{−1/2}`, evaluated in log-Gamma arithmetic.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{gamma, ln_gamma, odd_double_factorial, sqrt_pi};

/// A multi-index `α = (α₁, …, α_d)` standing for the even monomial `ω^{2α}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex {
    components: Vec<u32>,
    total: u32,
}

impl MultiIndex {
    pub fn new(components: Vec<u32>) -> Self {
        let total = components.iter().sum();
        Self { components, total }
    }

    pub fn zero(d: usize) -> Self {
        Self::new(vec![0; d])
    }

    pub fn components(&self) -> &[u32] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// `|α| = Σ αᵢ`.
    pub fn total(&self) -> u32 {
        self.total
    }

    /// All multi-indices of length `d` with `|α| ≤ max_total`, in the
    /// depth-first order used by the moment tables.
    pub fn all_up_to(d: usize, max_total: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; d];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if i == cur.len() {
                out.push(MultiIndex::new(cur.clone()));
                return;
            }
            for a in 0..=left {
                cur[i] = a;
                rec(i + 1, left - a, cur, out);
            }
            cur[i] = 0;
        }
        rec(0, max_total, &mut cur, &mut out);
        out
    }

    pub fn all_with_total(d: usize, total: u32) -> Vec<MultiIndex> {
        Self::all_up_to(d, total)
            .into_iter()
            .filter(|a| a.total == total)
            .collect()
    }
}

/// `∫_{|ω|≤1} ω^{2α} (1 − |ω|²)^{−1/2} dω
///   = Γ(α₁+½)⋯Γ(α_d+½) Γ(½) / Γ(|α| + d/2 + ½)`.
pub fn dirichlet_moment(alpha: &MultiIndex, d: usize) -> Result<f64> {
    if d == 0 || alpha.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: alpha.dim(),
        });
    }
    let numer: f64 = alpha
        .components()
        .iter()
        .map(|&a| ln_gamma(a as f64 + 0.5))
        .sum::<f64>()
        + ln_gamma(0.5);
    let denom = ln_gamma(alpha.total() as f64 + d as f64 / 2.0 + 0.5);
    Ok((numer - denom).exp())
}

/// The same moment in the reduced form obtained through the duplication
/// formula, valid for even `d = 2m`:
/// `(2π)^m (2α)! / (2^{|α|} α! (2m + 2|α| − 1)!!)`.
pub fn dirichlet_moment_reduced(alpha: &MultiIndex) -> Result<f64> {
    let d = alpha.dim();
    if d == 0 || d % 2 != 0 {
        return Err(Error::Parity(format!(
            "reduced Dirichlet form needs an even dimension, got {d}"
        )));
    }
    let m = (d / 2) as f64;
    let k = alpha.total() as f64;
    let ln_ratio: f64 = alpha
        .components()
        .iter()
        .map(|&a| ln_gamma(2.0 * a as f64 + 1.0) - ln_gamma(a as f64 + 1.0))
        .sum();
    // (2j−1)!! = 2^j Γ(j+½)/√π with j = m + |α|
    let j = m + k;
    let ln_double = j * LN_2 + ln_gamma(j + 0.5) - 0.5 * PI.ln();
    let ln = m * (2.0 * PI).ln() + ln_ratio - k * LN_2 - ln_double;
    Ok(ln.exp())
}

/// `∫_{S^{n−1}} ω^{2α} dω = 2 Γ(α₁+½)⋯Γ(α_n+½) / Γ(|α| + n/2)`.
pub fn sphere_moment(alpha: &MultiIndex, n: usize) -> Result<f64> {
    if n == 0 || alpha.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: alpha.dim(),
        });
    }
    let numer: f64 = alpha
        .components()
        .iter()
        .map(|&a| ln_gamma(a as f64 + 0.5))
        .sum();
    let denom = ln_gamma(alpha.total() as f64 + n as f64 / 2.0);
    Ok(2.0 * (numer - denom).exp())
}

/// Surface area `2π^{n/2}/Γ(n/2)` of the unit sphere `S^{n−1} ⊂ Rⁿ`.
pub fn sphere_area(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("sphere dimension must be positive".into()));
    }
    let nf = n as f64;
    Ok(2.0 * PI.powf(nf / 2.0) / gamma(nf / 2.0))
}

/// Both sides of `1·3⋯(n−2) · |S^{n−1}| = 2(2π)^m` for odd `n = 2m + 1 ≥ 3`.
pub fn sphere_area_identity(n: usize) -> Result<(f64, f64)> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::Parity(format!(
            "area identity needs odd n >= 3, got {n}"
        )));
    }
    let m = (n - 1) / 2;
    let lhs = odd_double_factorial(m) * sphere_area(n)?;
    let rhs = 2.0 * (2.0 * PI).powi(m as i32);
    Ok((lhs, rhs))
}

/// Both sides of `Γ(k+½) = √π Γ(2k) / (2^{2k−1} Γ(k))`; the right side is
/// evaluated in log space.
pub fn gamma_duplication_check(k: u32) -> Result<(f64, f64)> {
    if k == 0 {
        return Err(Error::InvalidParameter("duplication check needs k >= 1".into()));
    }
    let kf = k as f64;
    let lhs = gamma(kf + 0.5);
    let ln_rhs = ln_gamma(2.0 * kf) - (2.0 * kf - 1.0) * LN_2 - ln_gamma(kf);
    Ok((lhs, sqrt_pi() * ln_rhs.exp()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn enumeration_counts() {
        // C(k + d, d)
        assert_eq!(MultiIndex::all_up_to(2, 4).len(), 15);
        assert_eq!(MultiIndex::all_up_to(4, 6).len(), 210);
        assert_eq!(MultiIndex::all_with_total(3, 2).len(), 6);
        assert!(MultiIndex::all_up_to(3, 5).iter().all(|a| a.total() <= 5));
    }

    #[test]
    fn disk_moments_by_polar_integration() {
        // ∫₀¹∫₀^{2π} (r cosθ)^{2a}(r sinθ)^{2b} r (1−r²)^{−1/2} dθ dr, done with
        // a trapezoid rule in θ and r = sin φ in the radius.
        let polar = |a: i32, b: i32| {
            let nt = 64;
            let angular: f64 = (0..nt)
                .map(|j| {
                    let th = 2.0 * PI * j as f64 / nt as f64;
                    th.cos().powi(2 * a) * th.sin().powi(2 * b)
                })
                .sum::<f64>()
                * 2.0
                * PI
                / nt as f64;
            // radial part ∫₀^{π/2} sin^{2k+1}φ dφ is the Wallis product
            let k = (a + b) as usize;
            let wallis: f64 = (1..=k).map(|j| (2 * j) as f64 / (2 * j + 1) as f64).product();
            angular * wallis
        };
        let a00 = dirichlet_moment(&MultiIndex::new(vec![0, 0]), 2).unwrap();
        assert!(rel(a00, 2.0 * PI) < 1e-14);
        assert!(rel(a00, polar(0, 0)) < 1e-13);
        let a10 = dirichlet_moment(&MultiIndex::new(vec![1, 0]), 2).unwrap();
        assert!(rel(a10, 2.0 * PI / 3.0) < 1e-14);
        assert!(rel(a10, polar(1, 0)) < 1e-13);
        let a21 = dirichlet_moment(&MultiIndex::new(vec![2, 1]), 2).unwrap();
        assert!(rel(a21, polar(2, 1)) < 1e-13);
    }

    #[test]
    fn reduced_form_agrees() {
        for d in [2usize, 4, 6] {
            for alpha in MultiIndex::all_up_to(d, 8) {
                let a = dirichlet_moment(&alpha, d).unwrap();
                let b = dirichlet_moment_reduced(&alpha).unwrap();
                assert!(rel(a, b) <= 1e-12, "{alpha:?}: {a} vs {b}");
            }
        }
        assert!(dirichlet_moment_reduced(&MultiIndex::zero(3)).is_err());
    }

    #[test]
    fn large_orders_stay_finite() {
        let alpha = MultiIndex::new(vec![80, 70]);
        let v = dirichlet_moment(&alpha, 2).unwrap();
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn interval_moment_is_arcsine_integral() {
        let v = dirichlet_moment(&MultiIndex::zero(1), 1).unwrap();
        assert!(rel(v, PI) < 1e-15);
    }

    #[test]
    fn sphere_areas() {
        assert!(rel(sphere_area(2).unwrap(), 2.0 * PI) < 1e-15);
        assert!(rel(sphere_area(3).unwrap(), 4.0 * PI) < 1e-15);
        assert!(rel(sphere_area(5).unwrap(), 8.0 * PI * PI / 3.0) < 1e-15);
        for n in [3usize, 5, 7, 9] {
            let (l, r) = sphere_area_identity(n).unwrap();
            assert!(rel(l, r) <= 1e-12, "n={n}");
        }
        let (l3, r3) = sphere_area_identity(3).unwrap();
        assert!(rel(l3, 4.0 * PI) < 1e-15 && rel(r3, 4.0 * PI) < 1e-15);
    }

    #[test]
    fn sphere_moment_is_area_over_n_for_squares() {
        let m = sphere_moment(&MultiIndex::new(vec![1, 0, 0]), 3).unwrap();
        assert!(rel(m, 4.0 * PI / 3.0) < 1e-15);
    }

    #[test]
    fn duplication_formula() {
        let (l, r) = gamma_duplication_check(1).unwrap();
        assert!(rel(l, sqrt_pi() / 2.0) < 1e-15 && rel(r, sqrt_pi() / 2.0) < 1e-15);
        let (l, r) = gamma_duplication_check(2).unwrap();
        assert!(rel(l, 0.75 * sqrt_pi()) < 1e-15 && rel(r, 0.75 * sqrt_pi()) < 1e-14);
        for k in 1..=10 {
            let (l, r) = gamma_duplication_check(k).unwrap();
            assert!(rel(l, r) <= 1e-13, "k={k}");
        }
    }
}
