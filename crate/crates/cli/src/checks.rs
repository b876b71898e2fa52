//! The verification suite run by `ascent verify`.

use std::time::Instant;

use ascent_core::commutative::{required_level, transmutation_check, CommutativeAscent, CommutingFamily};
use ascent_core::fixtures::{random_diagonal, random_hermitian, random_hermitian_with_norm, random_unit_state, seeded_rng};
use ascent_core::quadrature::{
    build_ball_rule, dirichlet_moment, gamma_duplication_check, sphere_area_identity, BallRule, MultiIndex,
    QuadratureRule,
};
use ascent_core::trotter::{
    fm_evaluate_with, fm_quadrature_crosscheck, noncomm_limit, taylor_limit_check, LimitOptions, Propagator,
    TailMode,
};
use ascent_core::{cos_sqrt_sum_oracle, sinc_sqrt_sum_oracle, HermitianOperator, Result};
use ascent_pde::grid::{spectral_wave_reference, GridField, SpectralOperator};
use ascent_pde::matrix::{field_state, harmonic_oscillator_with, oscillator_pair};
use ascent_pde::wave::{
    bessel_identity_check, damped_wave, klein_gordon, suggest_level, wave2d_poisson, wave3d_kirchhoff, wave_general,
    KGKernelSpec,
};
use serde::Serialize;

use crate::report::Gap;

pub struct Check {
    pub id: usize,
    pub name: &'static str,
    pub formula: &'static str,
    run: fn(u64) -> Result<Vec<Gap>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub id: usize,
    pub name: String,
    pub formula: String,
    pub gaps: Vec<Gap>,
    pub error: Option<String>,
    pub pass: bool,
}

impl Check {
    pub fn run(&self, seed: u64) -> (CheckOutcome, f64) {
        let start = Instant::now();
        let result = (self.run)(seed);
        let secs = start.elapsed().as_secs_f64();
        let (gaps, error) = match result {
            Ok(g) => (g, None),
            Err(e) => (Vec::new(), Some(e.to_string())),
        };
        let pass = error.is_none() && !gaps.is_empty() && gaps.iter().all(|g| g.pass);
        (
            CheckOutcome {
                id: self.id,
                name: self.name.into(),
                formula: self.formula.into(),
                gaps,
                error,
                pass,
            },
            secs,
        )
    }
}

pub fn all() -> Vec<Check> {
    vec![
        Check { id: 1, name: "scalar ascent, two operators", formula: "two-dimensional disk ascent", run: scalar_pair },
        Check { id: 2, name: "scalar ascent, three operators", formula: "three-dimensional sphere ascent", run: scalar_triple },
        Check { id: 3, name: "Dirichlet moments", formula: "Dirichlet ball moments", run: moments },
        Check { id: 4, name: "sphere-area identity", formula: "odd sphere area identity", run: sphere_area },
        Check { id: 5, name: "transmutation", formula: "heat-cosine transmutation", run: transmutation },
        Check { id: 6, name: "commuting-matrix ascent", formula: "even/odd ascent for commuting families", run: commuting },
        Check { id: 7, name: "non-commutative convergence", formula: "product-formula cosine limit", run: noncommutative },
        Check { id: 8, name: "series/quadrature cross-check", formula: "ball average of split cosines", run: crosscheck },
        Check { id: 9, name: "Taylor-coefficient limit", formula: "Taylor coefficients of the split products", run: taylor },
        Check { id: 10, name: "harmonic oscillator", formula: "oscillator cosine via the product limit", run: oscillator },
        Check { id: 11, name: "wave 2-D", formula: "Poisson formula", run: wave2d },
        Check { id: 12, name: "wave 3-D", formula: "Kirchhoff formula", run: wave3d },
        Check { id: 13, name: "Klein-Gordon", formula: "Klein-Gordon Bessel kernel", run: kg },
        Check { id: 14, name: "sine propagator", formula: "sine propagator sin(t√S)/√S", run: sine },
        Check { id: 15, name: "double-angle on grid operators", formula: "cosine double-angle identity", run: double_angle },
    ]
}

fn scalars(v: &[f64]) -> Result<CommutingFamily> {
    CommutingFamily::new(v.iter().map(|&a| HermitianOperator::scalar(a)).collect())
}

fn scalar_cos(fam: &CommutingFamily, t: f64) -> Result<f64> {
    let v = CommutativeAscent::new(fam.clone(), required_level(fam, t)?)?.cos(t)?;
    Ok(v.value.matrix()[(0, 0)].re)
}

fn scalar_pair(_: u64) -> Result<Vec<Gap>> {
    let fam = scalars(&[1.0, 1.0])?;
    [0.5, 1.0, 2.0]
        .iter()
        .map(|&t| Ok(Gap::new(format!("t={t}"), (scalar_cos(&fam, t)? - (2f64.sqrt() * t).cos()).abs(), 1e-6)))
        .collect()
}

fn scalar_triple(_: u64) -> Result<Vec<Gap>> {
    let v = scalar_cos(&scalars(&[1.0, 1.0, 1.0])?, 0.5)?;
    Ok(vec![Gap::new("t=0.5", (v - (3f64.sqrt() / 2.0).cos()).abs(), 1e-6)])
}

fn moments(seed: u64) -> Result<Vec<Gap>> {
    let mut gaps = Vec::new();
    for d in [2usize, 4] {
        let rule = build_ball_rule(d, 6)?;
        let mc = BallRule::monte_carlo(d, 1_000_000, seed)?;
        let (mut tensor, mut sigmas) = (0.0_f64, 0.0_f64);
        for a in MultiIndex::all_up_to(d, 6) {
            let exact = dirichlet_moment(&a, d)?;
            tensor = tensor.max((rule.moment(&a)?.value - exact).abs() / exact);
            let est = mc.moment(&a)?;
            sigmas = sigmas.max((est.value - exact).abs() / est.std_error.unwrap_or(f64::NAN));
        }
        gaps.push(Gap::new(format!("d={d} tensor relative"), tensor, 1e-8));
        gaps.push(Gap::new(format!("d={d} Monte Carlo sigmas"), sigmas, 3.0));
    }
    let mut dup = 0.0_f64;
    for k in 1..=10 {
        let (l, r) = gamma_duplication_check(k)?;
        dup = dup.max((l - r).abs() / r);
    }
    gaps.push(Gap::new("duplication relative", dup, 1e-13));
    Ok(gaps)
}

fn sphere_area(_: u64) -> Result<Vec<Gap>> {
    [3usize, 5, 7, 9]
        .iter()
        .map(|&n| {
            let (l, r) = sphere_area_identity(n)?;
            Ok(Gap::new(format!("n={n}"), (l - r).abs() / r, 1e-12))
        })
        .collect()
}

fn transmutation(seed: u64) -> Result<Vec<Gap>> {
    let b = random_hermitian(6, &mut seeded_rng(seed))?;
    [0.1, 1.0]
        .iter()
        .map(|&rho| Ok(Gap::new(format!("rho={rho}"), transmutation_check(&b, rho)?.gap, 1e-8)))
        .collect()
}

fn commuting(seed: u64) -> Result<Vec<Gap>> {
    let mut rng = seeded_rng(seed);
    let ops = (0..4).map(|_| random_diagonal(3, -1.0, 1.0, &mut rng)).collect::<Result<Vec<_>>>()?;
    let fam = CommutingFamily::new(ops.clone())?;
    let t = 0.7;
    let level = required_level(&fam, t)?;
    let v = CommutativeAscent::new(fam.clone(), level)?.cos(t)?.value;
    let up = CommutativeAscent::new(fam.with_zero(), level)?.cos(t)?.value;
    Ok(vec![
        Gap::new("oracle frobenius", v.frobenius_distance(&cos_sqrt_sum_oracle(&ops, t)?)?, 1e-5),
        Gap::new("descent drift", v.frobenius_distance(&up)?, 1e-8),
    ])
}

fn noncommutative(seed: u64) -> Result<Vec<Gap>> {
    let mut rng = seeded_rng(seed);
    let a = random_hermitian_with_norm(4, 1.0, &mut rng)?;
    let b = random_hermitian_with_norm(4, 1.0, &mut rng)?;
    let h = random_unit_state(4, &mut rng);
    let t = 0.3;
    let reference = cos_sqrt_sum_oracle(&[a.clone(), b.clone()], t)?.apply(&h)?;
    let opts = LimitOptions {
        m0: 8,
        m_cap: 32,
        series_tol: Some(1e-12),
        reference: Some(reference),
        ..LimitOptions::default()
    };
    let (_, report) = noncomm_limit(&[a, b], &h, t, f64::MIN_POSITIVE, &opts)?;
    let e = &report.errors;
    let decreasing = e.windows(2).filter(|w| w[1] >= w[0]).count();
    Ok(vec![
        Gap::new("non-decreasing steps", decreasing as f64, 0.0),
        Gap::new("error(32)", e[e.len() - 1], 1e-2),
        Gap::at_least("decay exponent", fitted_exponent(&report.m_values, e), 0.9),
        Gap::new("tail bound", report.tail_bound.unwrap_or(f64::INFINITY), 1e-10),
    ])
}

/// Least-squares slope `p` of `log e ≈ c − p log m`.
pub fn fitted_exponent(m: &[usize], e: &[f64]) -> f64 {
    let xs: Vec<f64> = m.iter().map(|&v| (v as f64).ln()).collect();
    let ys: Vec<f64> = e.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    -sxy / sxx
}

fn crosscheck(seed: u64) -> Result<Vec<Gap>> {
    let mut rng = seeded_rng(seed);
    let a = random_hermitian_with_norm(3, 1.0, &mut rng)?;
    let b = random_hermitian_with_norm(3, 1.0, &mut rng)?;
    let h = random_unit_state(3, &mut rng);
    let t = 0.2;
    let series = fm_evaluate_with(&[a.clone(), b.clone()], &h, 2, t, 1e-14, TailMode::Strict, Propagator::Cos)?;
    let quad = fm_quadrature_crosscheck(&a, &b, &h, 2, t, None)?;
    Ok(vec![Gap::new("m=2", series.state.distance(&quad.state)?, 1e-4)])
}

fn taylor(seed: u64) -> Result<Vec<Gap>> {
    let mut rng = seeded_rng(seed);
    let a = random_hermitian_with_norm(4, 1.0, &mut rng)?;
    let b = random_hermitian_with_norm(4, 1.0, &mut rng)?;
    let h = random_unit_state(4, &mut rng);
    let g = taylor_limit_check(&a, &b, 2, &h, &[8, 64])?;
    Ok(vec![Gap::new("gap(64)·6/gap(8)", 6.0 * g[1] / g[0], 1.3)])
}

fn oscillator(_: u64) -> Result<Vec<Gap>> {
    let t = 0.2;
    let mut gaps = Vec::new();
    for (label, lambda, f) in [
        ("ground", 1.0_f64, GridField::from_fn(vec![64], vec![16.0], |x| (-x[0] * x[0] / 2.0).exp())?),
        ("excited", 3.0, GridField::from_fn(vec![64], vec![16.0], |x| x[0] * (-x[0] * x[0] / 2.0).exp())?),
    ] {
        let pair = oscillator_pair(&f)?;
        let reference = cos_sqrt_sum_oracle(&pair, t)?.apply(&field_state(&f))?;
        let opts = LimitOptions {
            m0: 8,
            m_cap: 32,
            reference: Some(reference.clone()),
            ..LimitOptions::default()
        };
        let (_, report) = harmonic_oscillator_with(&f, t, f64::MIN_POSITIVE, opts)?;
        let hn = field_state(&f).norm();
        gaps.push(Gap::new(format!("{label} vs dense, m=32"), report.errors[report.errors.len() - 1] / hn, 1e-3));
        let scaled = field_state(&f.map(|z| z * (t * lambda.sqrt()).cos()));
        gaps.push(Gap::new(format!("{label} cos(√λ t) factor"), reference.distance(&scaled)? / hn, 1e-3));
    }
    Ok(gaps)
}

fn gaussian(dims: Vec<usize>, side: f64, sigma: f64) -> Result<GridField> {
    let n = dims.len();
    GridField::from_fn(dims, vec![side; n], |x| {
        (-x.iter().map(|v| v * v).sum::<f64>() / (2.0 * sigma * sigma)).exp()
    })
}

fn wave2d(_: u64) -> Result<Vec<Gap>> {
    let f = gaussian(vec![256, 256], 16.0, 0.5)?;
    let t = 0.5;
    let u = wave2d_poisson(&f, t, suggest_level(&f, t, 0.0))?;
    let r = spectral_wave_reference(&f, t, &SpectralOperator::wave(&f))?;
    let c = GridField::constant(vec![256, 256], vec![16.0; 2], 1.0)?;
    let uc = wave2d_poisson(&c, t, 8)?;
    Ok(vec![
        Gap::new("L2 relative", u.relative_l2_gap(&r)?, 1e-3),
        Gap::new("constant preserved", uc.max_abs_gap(&c)?, 1e-10),
    ])
}

fn wave3d(_: u64) -> Result<Vec<Gap>> {
    let f = gaussian(vec![64, 64, 64], 16.0, 0.6)?;
    let t = 0.4;
    let level = suggest_level(&f, t, 0.0);
    let u = wave3d_kirchhoff(&f, t, level)?;
    let r = spectral_wave_reference(&f, t, &SpectralOperator::wave(&f))?;
    let exterior = u.values()[u.nearest(&[5.0, 0.0, 0.0])].norm();
    let f2 = gaussian(vec![64, 64], 16.0, 0.6)?;
    let lifted = f2.extend_constant(8, 16.0)?;
    let u3 = wave3d_kirchhoff(&lifted, t, level)?.slice_last(0)?;
    let u2 = wave2d_poisson(&f2, t, level)?;
    Ok(vec![
        Gap::new("L2 relative", u.relative_l2_gap(&r)?, 1e-3),
        Gap::new("Huygens exterior |u|", exterior, 1e-8),
        Gap::new("descent 3-D to 2-D", u3.relative_l2_gap(&u2)?, 5e-3),
    ])
}

fn kg(_: u64) -> Result<Vec<Gap>> {
    let f = gaussian(vec![256], 16.0, 0.6)?;
    let t = 0.5;
    let u = klein_gordon(&f, t, &KGKernelSpec::new(1, 1.0)?, suggest_level(&f, t, 1.0))?;
    let r = spectral_wave_reference(&f, t, &SpectralOperator::klein_gordon(&f, 1.0))?;
    let mut bessel = 0.0_f64;
    for c in [0.3, 1.0] {
        for at in [0.5, 2.0] {
            let (l, rr) = bessel_identity_check(c, at)?;
            bessel = bessel.max((l - rr).abs());
        }
    }
    let level = suggest_level(&f, t, 0.0);
    let zero = klein_gordon(&f, t, &KGKernelSpec::new(1, 0.0)?, level)?;
    let wave = wave_general(&f, t, level)?;
    let c = GridField::constant(vec![32], vec![8.0], 1.0)?;
    let damped = damped_wave(&c, t, 1.0, 12)?;
    let cosh = damped.values().iter().map(|z| (z - (1.0 * t).cosh()).norm()).fold(0.0, f64::max);
    Ok(vec![
        Gap::new("n=1 a=1 L2 relative", u.relative_l2_gap(&r)?, 1e-3),
        Gap::new("Bessel identity", bessel, 1e-8),
        Gap::new("a=0 collapse", zero.max_abs_gap(&wave)?, 1e-8),
        Gap::new("damped k=0 cosh", cosh, 1e-6),
    ])
}

fn sine(seed: u64) -> Result<Vec<Gap>> {
    let mut rng = seeded_rng(seed);
    let ops = (0..3).map(|_| random_diagonal(3, -1.0, 1.0, &mut rng)).collect::<Result<Vec<_>>>()?;
    let fam = CommutingFamily::new(ops.clone())?;
    let t = 0.7;
    let s = CommutativeAscent::new(fam.clone(), required_level(&fam, t)?)?.sin(t)?.value;
    let a = random_hermitian_with_norm(4, 1.0, &mut rng)?;
    let b = random_hermitian_with_norm(4, 1.0, &mut rng)?;
    let h = random_unit_state(4, &mut rng);
    let (m, t, dt) = (16, 0.3, 1e-3);
    let ev = |t: f64, p| fm_evaluate_with(&[a.clone(), b.clone()], &h, m, t, 1e-14, TailMode::Strict, p);
    let (sp, sm) = (ev(t + dt, Propagator::Sin)?, ev(t - dt, Propagator::Sin)?);
    let c = ev(t, Propagator::Cos)?;
    let d = (sp.state.entries() - sm.state.entries()) / num_complex::Complex64::new(2.0 * dt, 0.0);
    Ok(vec![
        Gap::new("commuting vs sinc oracle", s.frobenius_distance(&sinc_sqrt_sum_oracle(&ops, 0.7)?)?, 1e-5),
        Gap::new("d/dt sine vs cosine", (d - c.state.entries()).norm(), 1e-5),
    ])
}

fn double_angle(_: u64) -> Result<Vec<Gap>> {
    let single_tol = 1e-6;
    let f = gaussian(vec![128, 128], 16.0, 0.6)?;
    let t = 0.6;
    let level = suggest_level(&f, 2.0 * t, 0.0);
    let once = wave2d_poisson(&f, t, level)?;
    let twice = wave2d_poisson(&f, 2.0 * t, level)?;
    let again = wave2d_poisson(&once, t, level)?;
    let rhs = again.zip_with(&f, |a, b| 2.0 * a - b)?;
    let r = spectral_wave_reference(&f, t, &SpectralOperator::wave(&f))?;
    Ok(vec![
        Gap::new("single run", once.relative_l2_gap(&r)?, single_tol),
        Gap::new("cos 2t vs 2cos² t − 1", twice.relative_l2_gap(&rhs)?, 2.0 * single_tol),
    ])
}
