//! Replacing one factor `cos(tω_ja_j)` of the ascent integrand by
//! `exp(itω_ja_j)`, which leaves the integral unchanged on a rule that is
//! symmetric under `ω_j → −ω_j`.

use ascent_core::quadrature::{build_ball_rule, build_sphere_rule, NodeSet, QuadratureRule};
use ascent_core::{Error, Result};
use num_complex::Complex64;

fn ascent_nodes(n: usize, level: usize) -> Result<NodeSet> {
    match n {
        0 => Err(Error::InvalidParameter("empty scalar family".into())),
        _ if n % 2 == 1 => Ok(build_sphere_rule(n, level)?.node_set().clone()),
        _ => Ok(build_ball_rule(n, level)?.node_set().clone()),
    }
}

/// `|∫Π_j cos(tω_ja_j) − ∫e^{itω₁a₁}Π_{j>1} cos(tω_ja_j)|` over the given
/// weighted nodes.
pub fn rewrite_gap<'a>(scalars: &[f64], t: f64, nodes: impl Iterator<Item = (&'a [f64], f64)>) -> f64 {
    let mut cos_form = 0.0;
    let mut exp_form = Complex64::new(0.0, 0.0);
    for (w, wt) in nodes {
        let rest: f64 = scalars[1..]
            .iter()
            .zip(&w[1..])
            .map(|(a, o)| (t * o * a).cos())
            .product();
        let x = t * w[0] * scalars[0];
        cos_form += wt * x.cos() * rest;
        exp_form += wt * rest * Complex64::from_polar(1.0, x);
    }
    (exp_form - cos_form).norm()
}

/// Gap between the cos and exp forms of the ascent integral for a family of
/// scalars, on the symmetric sphere (odd count) or ball (even count) rule.
pub fn cos_to_exp_rewrite_check(scalars: &[f64], t: f64, level: usize) -> Result<f64> {
    let set = ascent_nodes(scalars.len(), level)?;
    Ok(rewrite_gap(scalars, t, set.iter()))
}

/// The same comparison on a deliberately one-sided rule: only nodes with
/// `ω₁ > 0`, weights doubled.
pub fn asymmetric_rewrite_gap(scalars: &[f64], t: f64, level: usize) -> Result<f64> {
    let set = ascent_nodes(scalars.len(), level)?;
    let half: Vec<(&[f64], f64)> = set.iter().filter(|(w, _)| w[0] > 0.0).map(|(w, wt)| (w, 2.0 * wt)).collect();
    Ok(rewrite_gap(scalars, t, half.into_iter()))
}
