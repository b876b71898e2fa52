//! Acceptance suite: one line per criterion, then a single assertion over
//! all of them so every line is printed.

use std::io::Write;
use std::time::Instant;

use ascent_core::commutative::{required_level, transmutation_check, CommutativeAscent, CommutingFamily};
use ascent_core::fixtures::{random_diagonal, random_hermitian, random_hermitian_with_norm, random_unit_state, seeded_rng};
use ascent_core::quadrature::{
    build_ball_rule, dirichlet_moment, gamma_duplication_check, sphere_area_identity, BallRule, MultiIndex,
    QuadratureRule, DEFAULT_SEED,
};
use ascent_core::trotter::{
    fm_evaluate_with, fm_quadrature_crosscheck, noncomm_limit, taylor_limit_check, LimitOptions, Propagator,
    TailMode,
};
use ascent_core::{CMatrix, HermitianOperator, StateVector};
use ascent_pde::grid::{spectral_wave_reference, GridField, SpectralOperator};
use ascent_pde::matrix::{field_state, harmonic_oscillator_with, oscillator_pair};
use ascent_pde::wave::{
    bessel_identity_check, damped_wave, klein_gordon, suggest_level, wave2d_poisson, wave3d_kirchhoff, wave_general,
    KGKernelSpec,
};
use nalgebra::DVector;
use num_complex::Complex64;

struct Line {
    id: usize,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn line(id: usize, name: &'static str, items: &[(&str, f64, f64)]) -> Line {
    let pass = items.iter().all(|&(_, v, tol)| v <= tol);
    let detail = items
        .iter()
        .map(|(l, v, tol)| format!("{l}={v:.3e} (<= {tol:e})"))
        .collect::<Vec<_>>()
        .join(", ");
    Line { id, name, pass, detail }
}

/// `f(S)` for `S = ΣAᵢ²` by a dense Hermitian eigendecomposition.
fn dense_function(ops: &[HermitianOperator], f: impl Fn(f64) -> f64) -> CMatrix {
    let n = ops[0].dim();
    let mut s = CMatrix::zeros(n, n);
    for a in ops {
        s += a.matrix() * a.matrix();
    }
    let s = (&s + s.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = s.symmetric_eigen();
    let d = DVector::from_iterator(n, eig.eigenvalues.iter().map(|&l| Complex64::new(f(l.max(0.0)), 0.0)));
    &eig.eigenvectors * CMatrix::from_diagonal(&d) * eig.eigenvectors.adjoint()
}

fn dense_cos(ops: &[HermitianOperator], t: f64) -> CMatrix {
    dense_function(ops, |l| (t * l.sqrt()).cos())
}

fn dense_sinc(ops: &[HermitianOperator], t: f64) -> CMatrix {
    dense_function(ops, |l| if l == 0.0 { t } else { (t * l.sqrt()).sin() / l.sqrt() })
}

fn frob(a: &HermitianOperator, b: &CMatrix) -> f64 {
    (a.matrix() - b).norm()
}

fn scalar_cos(values: &[f64], t: f64) -> f64 {
    let fam = CommutingFamily::new(values.iter().map(|&a| HermitianOperator::scalar(a)).collect()).unwrap();
    let eng = CommutativeAscent::new(fam.clone(), required_level(&fam, t).unwrap()).unwrap();
    eng.cos(t).unwrap().value.matrix()[(0, 0)].re
}

fn gaussian(dims: Vec<usize>, side: f64, sigma: f64) -> GridField {
    let n = dims.len();
    GridField::from_fn(dims, vec![side; n], |x| {
        (-x.iter().map(|v| v * v).sum::<f64>() / (2.0 * sigma * sigma)).exp()
    })
    .unwrap()
}

fn pair(rng: &mut rand_chacha::ChaCha8Rng, dim: usize) -> (HermitianOperator, HermitianOperator, StateVector) {
    let a = random_hermitian_with_norm(dim, 1.0, rng).unwrap();
    let b = random_hermitian_with_norm(dim, 1.0, rng).unwrap();
    (a, b, random_unit_state(dim, rng))
}

fn c1_scalar_pair() -> Line {
    let start = Instant::now();
    let gaps: Vec<f64> = [0.5, 1.0, 2.0].iter().map(|&t| (scalar_cos(&[1.0, 1.0], t) - (2f64.sqrt() * t).cos()).abs()).collect();
    let secs = start.elapsed().as_secs_f64();
    line(1, "scalar ascent n=2", &[
        ("t=0.5", gaps[0], 1e-6),
        ("t=1", gaps[1], 1e-6),
        ("t=2", gaps[2], 1e-6),
        ("seconds", secs, 1.0),
    ])
}

fn c2_scalar_triple() -> Line {
    let v = scalar_cos(&[1.0, 1.0, 1.0], 0.5);
    line(2, "scalar ascent n=3", &[("t=0.5", (v - (3f64.sqrt() / 2.0).cos()).abs(), 1e-6)])
}

fn c3_moments() -> Line {
    let mut items = Vec::new();
    for d in [2usize, 4] {
        let tensor = build_ball_rule(d, 6).unwrap();
        let mc = BallRule::monte_carlo(d, 1_000_000, DEFAULT_SEED).unwrap();
        let (mut rel, mut sig) = (0.0_f64, 0.0_f64);
        for a in MultiIndex::all_up_to(d, 6) {
            let exact = dirichlet_moment(&a, d).unwrap();
            rel = rel.max((tensor.moment(&a).unwrap().value - exact).abs() / exact);
            let est = mc.moment(&a).unwrap();
            sig = sig.max((est.value - exact).abs() / est.std_error.unwrap());
        }
        items.push((if d == 2 { "d=2 rel" } else { "d=4 rel" }, rel, 1e-8));
        items.push((if d == 2 { "d=2 mc sigmas" } else { "d=4 mc sigmas" }, sig, 3.0));
    }
    let dup = (1..=10)
        .map(|k| {
            let (l, r) = gamma_duplication_check(k).unwrap();
            (l - r).abs() / r
        })
        .fold(0.0, f64::max);
    items.push(("duplication", dup, 1e-13));
    line(3, "Dirichlet moments", &items)
}

fn c4_sphere_area() -> Line {
    let worst = [3usize, 5, 7, 9]
        .iter()
        .map(|&n| {
            let (l, r) = sphere_area_identity(n).unwrap();
            (l - r).abs() / r
        })
        .fold(0.0, f64::max);
    line(4, "sphere-area identity", &[("max rel n=3..9", worst, 1e-12)])
}

fn c5_transmutation() -> Line {
    let b = random_hermitian(6, &mut seeded_rng(DEFAULT_SEED)).unwrap();
    let g: Vec<f64> = [0.1, 1.0].iter().map(|&r| transmutation_check(&b, r).unwrap().gap).collect();
    line(5, "transmutation", &[("rho=0.1", g[0], 1e-8), ("rho=1", g[1], 1e-8)])
}

fn c6_commuting() -> Line {
    let mut rng = seeded_rng(DEFAULT_SEED);
    let ops: Vec<_> = (0..4).map(|_| random_diagonal(3, -1.0, 1.0, &mut rng).unwrap()).collect();
    let fam = CommutingFamily::new(ops.clone()).unwrap();
    let t = 0.7;
    let level = required_level(&fam, t).unwrap();
    let v = CommutativeAscent::new(fam.clone(), level).unwrap().cos(t).unwrap().value;
    let up = CommutativeAscent::new(fam.with_zero(), level).unwrap().cos(t).unwrap().value;
    line(6, "commuting-matrix ascent", &[
        ("oracle", frob(&v, &dense_cos(&ops, t)), 1e-5),
        ("descent drift", v.frobenius_distance(&up).unwrap(), 1e-8),
    ])
}

fn c7_noncommutative() -> Line {
    let start = Instant::now();
    let (a, b, h) = pair(&mut seeded_rng(DEFAULT_SEED), 4);
    let t = 0.3;
    let reference = StateVector::new(dense_cos(&[a.clone(), b.clone()], t) * h.entries());
    let opts = LimitOptions {
        m0: 8,
        m_cap: 32,
        series_tol: Some(1e-12),
        reference: Some(reference),
        ..LimitOptions::default()
    };
    let (_, report) = noncomm_limit(&[a, b], &h, t, f64::MIN_POSITIVE, &opts).unwrap();
    let e = &report.errors;
    let increases = e.windows(2).filter(|w| w[1] >= w[0]).count() as f64;
    // least-squares slope of log e against log m
    let xs: Vec<f64> = report.m_values.iter().map(|&m| (m as f64).ln()).collect();
    let ys: Vec<f64> = e.iter().map(|v| v.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
    let slope = -xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let secs = start.elapsed().as_secs_f64();
    line(7, "non-commutative convergence", &[
        ("m values 8,16,32", (report.m_values != [8, 16, 32]) as u8 as f64, 0.0),
        ("increases", increases, 0.0),
        ("error(32)", e[2], 1e-2),
        ("0.9 - exponent", 0.9 - slope, 0.0),
        ("tail", report.tail_bound.unwrap_or(f64::INFINITY), 1e-10),
        ("seconds", secs, 30.0),
    ])
}

fn c8_crosscheck() -> Line {
    let (a, b, h) = pair(&mut seeded_rng(DEFAULT_SEED), 3);
    let series = fm_evaluate_with(&[a.clone(), b.clone()], &h, 2, 0.2, 1e-14, TailMode::Strict, Propagator::Cos).unwrap();
    let quad = fm_quadrature_crosscheck(&a, &b, &h, 2, 0.2, None).unwrap();
    line(8, "series/quadrature cross-check", &[("m=2", series.state.distance(&quad.state).unwrap(), 1e-4)])
}

fn c9_taylor() -> Line {
    let (a, b, h) = pair(&mut seeded_rng(DEFAULT_SEED), 4);
    let g = taylor_limit_check(&a, &b, 2, &h, &[8, 64]).unwrap();
    line(9, "Taylor-coefficient limit", &[("gap64 / (gap8/6)", 6.0 * g[1] / g[0], 1.3)])
}

fn c10_oscillator() -> Line {
    let t = 0.2;
    let mut items = Vec::new();
    let fields = [
        (1.0_f64, GridField::from_fn(vec![64], vec![16.0], |x| (-x[0] * x[0] / 2.0).exp()).unwrap()),
        (3.0, GridField::from_fn(vec![64], vec![16.0], |x| x[0] * (-x[0] * x[0] / 2.0).exp()).unwrap()),
    ];
    for (lambda, f) in fields {
        let h = field_state(&f);
        let reference = StateVector::new(dense_cos(&oscillator_pair(&f).unwrap(), t) * h.entries());
        let opts = LimitOptions {
            m0: 8,
            m_cap: 32,
            reference: Some(reference.clone()),
            ..LimitOptions::default()
        };
        let (_, report) = harmonic_oscillator_with(&f, t, f64::MIN_POSITIVE, opts).unwrap();
        let factor = (reference.entries() - h.entries() * Complex64::new((t * lambda.sqrt()).cos(), 0.0)).norm();
        let label = if lambda == 1.0 { "ground" } else { "excited" };
        items.push((label, report.errors[2] / h.norm(), 1e-3));
        items.push((if lambda == 1.0 { "cos(t)" } else { "cos(√3t)" }, factor / h.norm(), 1e-3));
    }
    line(10, "harmonic oscillator", &items)
}

fn c11_wave2d() -> Line {
    let f = gaussian(vec![256, 256], 16.0, 0.5);
    let t = 0.5;
    let u = wave2d_poisson(&f, t, suggest_level(&f, t, 0.0)).unwrap();
    let r = spectral_wave_reference(&f, t, &SpectralOperator::wave(&f)).unwrap();
    let c = GridField::constant(vec![256, 256], vec![16.0; 2], 1.0).unwrap();
    let uc = wave2d_poisson(&c, t, 8).unwrap();
    line(11, "wave 2-D", &[
        ("L2 rel", u.relative_l2_gap(&r).unwrap(), 1e-3),
        ("constant", uc.max_abs_gap(&c).unwrap(), 1e-10),
    ])
}

fn c12_wave3d() -> Line {
    let f = gaussian(vec![64, 64, 64], 16.0, 0.6);
    let t = 0.4;
    let level = suggest_level(&f, t, 0.0);
    let u = wave3d_kirchhoff(&f, t, level).unwrap();
    let r = spectral_wave_reference(&f, t, &SpectralOperator::wave(&f)).unwrap();
    let exterior = u.values()[u.nearest(&[5.0, 0.0, 0.0])].norm();
    let f2 = gaussian(vec![64, 64], 16.0, 0.6);
    let u3 = wave3d_kirchhoff(&f2.extend_constant(8, 16.0).unwrap(), t, level).unwrap().slice_last(0).unwrap();
    let u2 = wave2d_poisson(&f2, t, level).unwrap();
    line(12, "wave 3-D", &[
        ("L2 rel", u.relative_l2_gap(&r).unwrap(), 1e-3),
        ("Huygens exterior", exterior, 1e-8),
        ("descent", u3.relative_l2_gap(&u2).unwrap(), 5e-3),
    ])
}

fn c13_klein_gordon() -> Line {
    let f = gaussian(vec![256], 16.0, 0.6);
    let t = 0.5;
    let u = klein_gordon(&f, t, &KGKernelSpec::new(1, 1.0).unwrap(), suggest_level(&f, t, 1.0)).unwrap();
    let r = spectral_wave_reference(&f, t, &SpectralOperator::klein_gordon(&f, 1.0)).unwrap();
    let mut bessel = 0.0_f64;
    for c in [0.3, 1.0] {
        for at in [0.5, 2.0] {
            let (l, rr) = bessel_identity_check(c, at).unwrap();
            bessel = bessel.max((l - rr).abs());
        }
    }
    let level = suggest_level(&f, t, 0.0);
    let zero = klein_gordon(&f, t, &KGKernelSpec::new(1, 0.0).unwrap(), level).unwrap();
    let wave = wave_general(&f, t, level).unwrap();
    let ones = GridField::constant(vec![32], vec![8.0], 1.0).unwrap();
    let grown = damped_wave(&ones, t, 1.0, 12).unwrap();
    let cosh = grown.values().iter().map(|z| (z - t.cosh()).norm()).fold(0.0, f64::max);
    line(13, "Klein-Gordon", &[
        ("L2 rel", u.relative_l2_gap(&r).unwrap(), 1e-3),
        ("Bessel identity", bessel, 1e-8),
        ("a=0 collapse", zero.max_abs_gap(&wave).unwrap(), 1e-8),
        ("damped cosh", cosh, 1e-6),
    ])
}

fn c14_sine() -> Line {
    let mut rng = seeded_rng(DEFAULT_SEED);
    let ops: Vec<_> = (0..3).map(|_| random_diagonal(3, -1.0, 1.0, &mut rng).unwrap()).collect();
    let fam = CommutingFamily::new(ops.clone()).unwrap();
    let s = CommutativeAscent::new(fam.clone(), required_level(&fam, 0.7).unwrap()).unwrap().sin(0.7).unwrap().value;
    let (a, b, h) = pair(&mut rng, 4);
    let (t, dt) = (0.3, 1e-3);
    let ev = |t: f64, p| fm_evaluate_with(&[a.clone(), b.clone()], &h, 16, t, 1e-14, TailMode::Strict, p).unwrap().state;
    let d = (ev(t + dt, Propagator::Sin).entries() - ev(t - dt, Propagator::Sin).entries()) / Complex64::new(2.0 * dt, 0.0);
    line(14, "sine propagator", &[
        ("commuting vs sinc", frob(&s, &dense_sinc(&ops, 0.7)), 1e-5),
        ("d/dt consistency", (d - ev(t, Propagator::Cos).entries()).norm(), 1e-5),
    ])
}

fn c15_double_angle() -> Line {
    let single_tol = 1e-6;
    let f = gaussian(vec![128, 128], 16.0, 0.6);
    let t = 0.6;
    let level = suggest_level(&f, 2.0 * t, 0.0);
    let once = wave2d_poisson(&f, t, level).unwrap();
    let twice = wave2d_poisson(&f, 2.0 * t, level).unwrap();
    let rhs = wave2d_poisson(&once, t, level).unwrap().zip_with(&f, |a, b| 2.0 * a - b).unwrap();
    let r = spectral_wave_reference(&f, t, &SpectralOperator::wave(&f)).unwrap();
    line(15, "double-angle", &[
        ("single run", once.relative_l2_gap(&r).unwrap(), single_tol),
        ("cos2t vs 2cos²t-1", twice.relative_l2_gap(&rhs).unwrap(), 2.0 * single_tol),
    ])
}

#[test]
fn acceptance() {
    let criteria: [fn() -> Line; 15] = [
        c1_scalar_pair,
        c2_scalar_triple,
        c3_moments,
        c4_sphere_area,
        c5_transmutation,
        c6_commuting,
        c7_noncommutative,
        c8_crosscheck,
        c9_taylor,
        c10_oscillator,
        c11_wave2d,
        c12_wave3d,
        c13_klein_gordon,
        c14_sine,
        c15_double_angle,
    ];
    let mut failed = Vec::new();
    for c in criteria {
        let l = c();
        // bypasses the harness capture so the lines show in a plain `cargo test`
        let text = format!("criterion {:>2} {:<30} {}  {}\n", l.id, l.name, if l.pass { "PASS" } else { "FAIL" }, l.detail);
        std::io::stderr().write_all(text.as_bytes()).unwrap();
        if !l.pass {
            failed.push(l.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
