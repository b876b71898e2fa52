//! Sphere rules on `S^{n−1}` and ball rules for the weight `(1 − |ω|²)^{−1/2}`.
//!
//! Tensor rules split the ball into a radial Gauss–Jacobi factor (exponent
//! −½ at the boundary, so the singular weight is absorbed exactly) times a
//! product-angle sphere rule built by peeling off one coordinate at a time:
//!
//! ```text
//! ∫_{S^{n−1}} f = ∫_{−1}^{1} (1 − z²)^{(n−3)/2} ∫_{S^{n−2}} f(√(1−z²) θ, z) dθ dz
//! ```
//!
//! A tensor rule of level `L` integrates every monomial `ω^β` with
//! `|β| ≤ 2L + 1` exactly; odd monomials vanish by the mirror symmetry of
//! the nodes. Above the tensor dimension limit, Monte-Carlo rules sample
//! the radius from its exact marginal density and the direction uniformly.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::io::Write;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::gauss::gauss_jacobi;
use super::moments::{dirichlet_moment, sphere_area, MultiIndex};
use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

pub const TENSOR_MAX_BALL_DIM: usize = 6;
pub const TENSOR_MAX_SPHERE_DIM: usize = 7;
pub const MONTE_CARLO_MAX_DIM: usize = 12;
pub const MAX_LEVEL: usize = 48;
pub const DEFAULT_SEED: u64 = 20_240_917;

const CHUNK: usize = 4096;
const SHARD: usize = 1 << 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RuleKind {
    Tensor { level: usize },
    MonteCarlo { samples: usize, seed: u64 },
}

/// A quadrature value, with its standard error for Monte-Carlo rules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: Option<f64>,
}

/// Flat node storage: node `i` occupies `nodes[i*dim .. (i+1)*dim]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    dim: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl NodeSet {
    fn new(dim: usize, nodes: Vec<f64>, weights: Vec<f64>) -> Self {
        debug_assert_eq!(nodes.len(), dim * weights.len());
        Self {
            dim,
            nodes,
            weights,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.nodes
            .chunks_exact(self.dim.max(1))
            .zip(self.weights.iter().copied())
    }
}

/// Common behaviour of sphere and ball rules.
pub trait QuadratureRule {
    fn node_set(&self) -> &NodeSet;
    fn kind(&self) -> RuleKind;

    fn dim(&self) -> usize {
        self.node_set().dim()
    }

    fn len(&self) -> usize {
        self.node_set().len()
    }

    /// `Σ wᵢ f(xᵢ)`, compensated, in a fixed chunked reduction order.
    fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        self.integrate_with_error(f).value
    }

    fn integrate_with_error<F>(&self, f: F) -> Estimate
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let set = self.node_set();
        let n = set.len();
        let partials: Vec<(CompensatedSum, CompensatedSum, CompensatedSum)> = (0..n)
            .into_par_iter()
            .step_by(CHUNK)
            .map(|start| {
                let mut s = CompensatedSum::new();
                let mut f1 = CompensatedSum::new();
                let mut f2 = CompensatedSum::new();
                for i in start..(start + CHUNK).min(n) {
                    let v = f(set.node(i));
                    s.add(set.weights[i] * v);
                    f1.add(v);
                    f2.add(v * v);
                }
                (s, f1, f2)
            })
            .collect();
        let mut s = CompensatedSum::new();
        let mut f1 = CompensatedSum::new();
        let mut f2 = CompensatedSum::new();
        for (a, b, c) in &partials {
            s.merge(a);
            f1.merge(b);
            f2.merge(c);
        }
        let std_error = match self.kind() {
            RuleKind::Tensor { .. } => None,
            RuleKind::MonteCarlo { samples, .. } => {
                let nf = samples as f64;
                let mean = f1.value() / nf;
                let var = (f2.value() / nf - mean * mean).max(0.0) * nf / (nf - 1.0).max(1.0);
                let total: f64 = set.weights.iter().sum();
                Some(total * (var / nf).sqrt())
            }
        };
        Estimate {
            value: s.value(),
            std_error,
        }
    }

    /// Quadrature value of the even monomial `ω^{2α}`.
    fn moment(&self, alpha: &MultiIndex) -> Result<Estimate> {
        if alpha.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: alpha.dim(),
            });
        }
        let exps: Vec<i32> = alpha.components().iter().map(|&a| 2 * a as i32).collect();
        Ok(self.integrate_with_error(|x| {
            x.iter().zip(&exps).map(|(&xi, &e)| xi.powi(e)).product()
        }))
    }

    /// Every even moment with `|α| ≤ max_total`, computed in one pass over
    /// the nodes.
    fn moment_table(&self, max_total: u32) -> MomentTable {
        let set = self.node_set();
        let d = set.dim();
        let index = MultiIndex::all_up_to(d, max_total);
        let count = index.len();
        let n = set.len();
        let mc = matches!(self.kind(), RuleKind::MonteCarlo { .. });
        let partials: Vec<Vec<(CompensatedSum, CompensatedSum, CompensatedSum)>> = (0..n)
            .into_par_iter()
            .step_by(CHUNK)
            .map(|start| {
                let mut acc = vec![(CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new()); count];
                let mut powers = vec![vec![0.0; max_total as usize + 1]; d];
                let mut values = vec![0.0; count];
                for i in start..(start + CHUNK).min(n) {
                    let x = set.node(i);
                    for (k, p) in powers.iter_mut().enumerate() {
                        let sq = x[k] * x[k];
                        p[0] = 1.0;
                        for a in 1..p.len() {
                            p[a] = p[a - 1] * sq;
                        }
                    }
                    let mut pos = 0;
                    expand_products(&powers, 0, max_total, 1.0, &mut values, &mut pos);
                    let w = set.weights[i];
                    for (slot, &v) in acc.iter_mut().zip(&values) {
                        slot.0.add(w * v);
                        if mc {
                            slot.1.add(v);
                            slot.2.add(v * v);
                        }
                    }
                }
                acc
            })
            .collect();
        let mut totals = vec![(CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new()); count];
        for part in &partials {
            for (t, p) in totals.iter_mut().zip(part) {
                t.0.merge(&p.0);
                t.1.merge(&p.1);
                t.2.merge(&p.2);
            }
        }
        let weight_total: f64 = set.weights.iter().sum();
        let mut values = HashMap::with_capacity(count);
        let mut std_errors = HashMap::new();
        for (alpha, t) in index.into_iter().zip(&totals) {
            if mc {
                let nf = n as f64;
                let mean = t.1.value() / nf;
                let var = (t.2.value() / nf - mean * mean).max(0.0) * nf / (nf - 1.0).max(1.0);
                std_errors.insert(alpha.clone(), weight_total * (var / nf).sqrt());
            }
            values.insert(alpha, t.0.value());
        }
        MomentTable {
            dim: d,
            max_total,
            values,
            std_errors: if mc { Some(std_errors) } else { None },
        }
    }

    /// CSV export: one row per node, coordinates then weight.
    fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let set = self.node_set();
        let header: Vec<String> = (1..=set.dim())
            .map(|i| format!("x{i}"))
            .chain(std::iter::once("weight".to_string()))
            .collect();
        writeln!(out, "{}", header.join(","))?;
        for (x, w) in set.iter() {
            let mut row: Vec<String> = x.iter().map(|v| format!("{v:.17e}")).collect();
            row.push(format!("{w:.17e}"));
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

fn expand_products(
    powers: &[Vec<f64>],
    i: usize,
    left: u32,
    prod: f64,
    out: &mut [f64],
    pos: &mut usize,
) {
    if i == powers.len() {
        out[*pos] = prod;
        *pos += 1;
        return;
    }
    for a in 0..=left {
        expand_products(powers, i + 1, left - a, prod * powers[i][a as usize], out, pos);
    }
}

/// Even moments `∫ ω^{2α}` of a rule, keyed by multi-index.
#[derive(Debug, Clone)]
pub struct MomentTable {
    pub dim: usize,
    pub max_total: u32,
    values: HashMap<MultiIndex, f64>,
    std_errors: Option<HashMap<MultiIndex, f64>>,
}

impl MomentTable {
    /// A table filled from a closed form instead of a rule.
    pub fn from_fn(dim: usize, max_total: u32, f: impl Fn(&MultiIndex) -> f64) -> Self {
        let values = MultiIndex::all_up_to(dim, max_total)
            .into_iter()
            .map(|a| {
                let v = f(&a);
                (a, v)
            })
            .collect();
        Self {
            dim,
            max_total,
            values,
            std_errors: None,
        }
    }

    pub fn get(&self, alpha: &MultiIndex) -> Option<f64> {
        self.values.get(alpha).copied()
    }

    pub fn std_error(&self, alpha: &MultiIndex) -> Option<f64> {
        self.std_errors.as_ref().and_then(|m| m.get(alpha).copied())
    }

    /// Largest relative deviation from a reference moment function.
    pub fn max_relative_error(&self, reference: impl Fn(&MultiIndex) -> f64) -> f64 {
        self.values
            .iter()
            .map(|(a, &v)| {
                let r = reference(a);
                (v - r).abs() / r.abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Product-angle rule on the unit sphere `S^{n−1} ⊂ Rⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    n: usize,
    set: NodeSet,
    kind: RuleKind,
}

impl SphereRule {
    /// Ambient dimension `n`.
    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn monte_carlo(n: usize, samples: usize, seed: u64) -> Result<Self> {
        if n == 0 || n > MONTE_CARLO_MAX_DIM || samples < 2 {
            return Err(Error::UnsupportedRule {
                dim: n,
                level: 0,
                reason: "Monte-Carlo sphere rules need 1 <= n <= 12 and at least 2 samples",
            });
        }
        let w = sphere_area(n)? / samples as f64;
        let nodes = sample_shards(n, samples, seed, |rng, out| {
            sample_direction(rng, out);
        });
        Ok(Self {
            n,
            set: NodeSet::new(n, nodes, vec![w; samples]),
            kind: RuleKind::MonteCarlo { samples, seed },
        })
    }
}

impl QuadratureRule for SphereRule {
    fn node_set(&self) -> &NodeSet {
        &self.set
    }

    fn kind(&self) -> RuleKind {
        self.kind
    }
}

/// Tensor sphere rule exact for `ω^{2α}`, `|α| ≤ level`.
pub fn build_sphere_rule(n: usize, level: usize) -> Result<SphereRule> {
    if n == 0 || n > TENSOR_MAX_SPHERE_DIM {
        return Err(Error::UnsupportedRule {
            dim: n,
            level,
            reason: "tensor sphere rules cover 1 <= n <= 7",
        });
    }
    if level > MAX_LEVEL {
        return Err(Error::UnsupportedRule {
            dim: n,
            level,
            reason: "level above the supported maximum",
        });
    }
    Ok(SphereRule {
        n,
        set: tensor_sphere(n, level)?,
        kind: RuleKind::Tensor { level },
    })
}

fn tensor_sphere(n: usize, level: usize) -> Result<NodeSet> {
    match n {
        1 => Ok(NodeSet::new(1, vec![-1.0, 1.0], vec![1.0, 1.0])),
        2 => {
            // offset angles keep the set closed under both axis reflections
            let m = 2 * level + 2;
            let w = 2.0 * PI / m as f64;
            let mut nodes = Vec::with_capacity(2 * m);
            for j in 0..m {
                let th = 2.0 * PI * (j as f64 + 0.5) / m as f64;
                nodes.push(th.cos());
                nodes.push(th.sin());
            }
            Ok(NodeSet::new(2, nodes, vec![w; m]))
        }
        _ => {
            let expo = (n as f64 - 3.0) / 2.0;
            let z = gauss_jacobi(level + 1, expo, expo)?;
            let inner = tensor_sphere(n - 1, level)?;
            let mut nodes = Vec::with_capacity(n * z.len() * inner.len());
            let mut weights = Vec::with_capacity(z.len() * inner.len());
            for (&zk, &wk) in z.nodes.iter().zip(&z.weights) {
                let rho = (1.0 - zk * zk).max(0.0).sqrt();
                for (theta, wt) in inner.iter() {
                    nodes.extend(theta.iter().map(|&c| rho * c));
                    nodes.push(zk);
                    weights.push(wk * wt);
                }
            }
            Ok(NodeSet::new(n, nodes, weights))
        }
    }
}

/// Rule for `∫_{|ω|≤1} f(ω) (1 − |ω|²)^{−1/2} dω`, weight folded into the
/// node weights.
#[derive(Debug, Clone, PartialEq)]
pub struct BallRule {
    d: usize,
    set: NodeSet,
    kind: RuleKind,
}

impl BallRule {
    pub fn ball_dim(&self) -> usize {
        self.d
    }

    /// Radius sampled from the exact marginal `r^{d−1}(1 − r²)^{−1/2}`
    /// (`r²` is Beta(d/2, ½)), direction uniform; equal weights summing to
    /// the total mass of the weight.
    pub fn monte_carlo(d: usize, samples: usize, seed: u64) -> Result<Self> {
        if d == 0 || d > MONTE_CARLO_MAX_DIM || samples < 2 {
            return Err(Error::UnsupportedRule {
                dim: d,
                level: 0,
                reason: "Monte-Carlo ball rules need 1 <= d <= 12 and at least 2 samples",
            });
        }
        let total = dirichlet_moment(&MultiIndex::zero(d), d)?;
        let beta = Beta::new(d as f64 / 2.0, 0.5)
            .map_err(|e| Error::InvalidParameter(format!("radial law: {e}")))?;
        let nodes = sample_shards(d, samples, seed, |rng, out| {
            let r = beta.sample(rng).sqrt();
            sample_direction(rng, out);
            for x in out.iter_mut() {
                *x *= r;
            }
        });
        Ok(Self {
            d,
            set: NodeSet::new(d, nodes, vec![total / samples as f64; samples]),
            kind: RuleKind::MonteCarlo { samples, seed },
        })
    }
}

impl QuadratureRule for BallRule {
    fn node_set(&self) -> &NodeSet {
        &self.set
    }

    fn kind(&self) -> RuleKind {
        self.kind
    }
}

/// Tensor ball rule exact for `ω^{2α}(1 − |ω|²)^{−1/2}`, `|α| ≤ level`.
pub fn build_ball_rule(d: usize, level: usize) -> Result<BallRule> {
    if d == 0 || d > TENSOR_MAX_BALL_DIM {
        return Err(Error::UnsupportedRule {
            dim: d,
            level,
            reason: "tensor ball rules cover 1 <= d <= 6; use the Monte-Carlo variant",
        });
    }
    if level > MAX_LEVEL {
        return Err(Error::UnsupportedRule {
            dim: d,
            level,
            reason: "level above the supported maximum",
        });
    }
    // s = r² = (1+u)/2 turns the radial integral into
    // 2^{−(d+1)/2} ∫ (1−u)^{−1/2} (1+u)^{(d−2)/2} g(u) du.
    let radial = gauss_jacobi(level / 2 + 1, -0.5, (d as f64 - 2.0) / 2.0)?;
    let scale = 2f64.powf(-(d as f64 + 1.0) / 2.0);
    let sphere = tensor_sphere(d, level)?;
    let mut nodes = Vec::with_capacity(d * radial.len() * sphere.len());
    let mut weights = Vec::with_capacity(radial.len() * sphere.len());
    for (&u, &wu) in radial.nodes.iter().zip(&radial.weights) {
        let r = (0.5 * (1.0 + u)).sqrt();
        for (theta, wt) in sphere.iter() {
            nodes.extend(theta.iter().map(|&c| r * c));
            weights.push(scale * wu * wt);
        }
    }
    Ok(BallRule {
        d,
        set: NodeSet::new(d, nodes, weights),
        kind: RuleKind::Tensor { level },
    })
}

fn sample_direction<R: RngExt + ?Sized>(rng: &mut R, out: &mut [f64]) {
    if out.len() == 1 {
        out[0] = if rng.random::<bool>() { 1.0 } else { -1.0 };
        return;
    }
    loop {
        let mut norm2 = 0.0;
        for x in out.iter_mut() {
            *x = StandardNormal.sample(rng);
            norm2 += *x * *x;
        }
        if norm2 > 1e-300 {
            let inv = norm2.sqrt().recip();
            for x in out.iter_mut() {
                *x *= inv;
            }
            return;
        }
    }
}

/// Samples in fixed-size shards, each with its own stream derived from
/// `seed`, so the result does not depend on the thread count.
fn sample_shards<G>(dim: usize, samples: usize, seed: u64, draw: G) -> Vec<f64>
where
    G: Fn(&mut ChaCha8Rng, &mut [f64]) + Sync,
{
    let shards: Vec<Vec<f64>> = (0..samples)
        .into_par_iter()
        .step_by(SHARD)
        .map(|start| {
            let shard = (start / SHARD) as u64;
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed ^ shard.wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let len = (start + SHARD).min(samples) - start;
            let mut out = vec![0.0; len * dim];
            for chunk in out.chunks_exact_mut(dim) {
                draw(&mut rng, chunk);
            }
            out
        })
        .collect();
    shards.concat()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::moments::sphere_moment;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn interval_rule_is_arcsine_integral() {
        let rule = build_ball_rule(1, 3).unwrap();
        assert!(rel(rule.integrate(|_| 1.0), PI) < 1e-14);
    }

    #[test]
    fn disk_rule_moments() {
        let rule = build_ball_rule(2, 4).unwrap();
        for c in [[0, 0], [1, 0], [1, 1], [2, 0]] {
            let alpha = MultiIndex::new(c.to_vec());
            let q = rule.moment(&alpha).unwrap().value;
            let exact = dirichlet_moment(&alpha, 2).unwrap();
            assert!(rel(q, exact) <= 1e-10, "{alpha:?}");
        }
    }

    #[test]
    fn ball_rules_exact_up_to_level() {
        for d in 1..=TENSOR_MAX_BALL_DIM {
            let level = 5;
            let rule = build_ball_rule(d, level).unwrap();
            let table = rule.moment_table(level as u32);
            let err = table.max_relative_error(|a| dirichlet_moment(a, d).unwrap());
            assert!(err <= 1e-12, "d={d}: {err}");
            assert!(rule.node_set().iter().all(|(x, _)| x.iter().map(|v| v * v).sum::<f64>() < 1.0));
        }
    }

    #[test]
    fn sphere_rules_exact_up_to_level() {
        for n in 1..=TENSOR_MAX_SPHERE_DIM {
            let rule = build_sphere_rule(n, 4).unwrap();
            let table = rule.moment_table(4);
            let err = table.max_relative_error(|a| sphere_moment(a, n).unwrap());
            assert!(err <= 1e-12, "n={n}: {err}");
            for (x, _) in rule.node_set().iter() {
                let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                assert!((norm - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn sphere_examples() {
        let s2 = build_sphere_rule(3, 3).unwrap();
        assert!(rel(s2.integrate(|_| 1.0), 4.0 * PI) < 1e-12);
        assert!(rel(s2.integrate(|x| x[0] * x[0]), 4.0 * PI / 3.0) < 1e-12);
        let s4 = build_sphere_rule(5, 2).unwrap();
        assert!(rel(s4.integrate(|_| 1.0), 8.0 * PI * PI / 3.0) < 1e-12);
    }

    #[test]
    fn odd_monomials_vanish() {
        let rule = build_ball_rule(3, 4).unwrap();
        for f in [
            |x: &[f64]| x[0],
            |x: &[f64]| x[0] * x[1] * x[1],
            |x: &[f64]| x[2].powi(5),
            |x: &[f64]| x[0] * x[1] * x[2],
        ] {
            assert!(rule.integrate(f).abs() <= 1e-12);
        }
    }

    #[test]
    fn csv_export_has_one_row_per_node() {
        let rule = build_sphere_rule(2, 1).unwrap();
        let mut buf = Vec::new();
        rule.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), rule.len() + 1);
        assert!(text.starts_with("x1,x2,weight"));
    }

    #[test]
    fn monte_carlo_is_seed_deterministic() {
        let a = BallRule::monte_carlo(3, 70_000, 11).unwrap();
        let b = BallRule::monte_carlo(3, 70_000, 11).unwrap();
        assert_eq!(a, b);
        let c = BallRule::monte_carlo(3, 70_000, 12).unwrap();
        assert_ne!(a, c);
        assert!(a.node_set().iter().all(|(x, _)| x.iter().map(|v| v * v).sum::<f64>() < 1.0));
    }

    #[test]
    fn monte_carlo_constant_is_exact_total() {
        let rule = BallRule::monte_carlo(6, 20_000, DEFAULT_SEED).unwrap();
        let est = rule.integrate_with_error(|_| 1.0);
        let exact = dirichlet_moment(&MultiIndex::zero(6), 6).unwrap();
        assert!(rel(est.value, exact) < 1e-12);
        assert!(est.std_error.unwrap() <= 1e-9 * exact);
    }

    #[test]
    fn unsupported_requests() {
        assert!(build_ball_rule(7, 2).is_err());
        assert!(build_ball_rule(0, 2).is_err());
        assert!(build_sphere_rule(3, MAX_LEVEL + 1).is_err());
        assert!(BallRule::monte_carlo(13, 100, 1).is_err());
    }
}
