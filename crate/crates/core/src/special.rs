//! Special functions: Gamma in log space, factorial tables, Bessel `J₀`/`I₀`.

use std::f64::consts::PI;

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `1/k!` for `k = 0..=n`, by the recurrence `1/k! = 1/(k−1)! / k`.
pub fn inverse_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 1.0;
    out.push(acc);
    for k in 1..=n {
        acc /= k as f64;
        out.push(acc);
    }
    out
}

/// `(2k−1)!! = 1·3⋯(2k−1)`, with `(−1)!! = 1`.
pub fn odd_double_factorial(k: usize) -> f64 {
    (1..=k).map(|j| (2 * j - 1) as f64).product()
}

/// Bessel function of the first kind of order zero.
pub fn bessel_j0(x: f64) -> f64 {
    libm::j0(x)
}

/// Modified Bessel function `I₀` by its power series `Σ (x²/4)^k/(k!)²`.
pub fn bessel_i0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > 1e-17 * sum {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
    }
    sum
}

pub fn sqrt_pi() -> f64 {
    PI.sqrt()
}
