use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use ascent_cli::checks;
use ascent_cli::report::{csv_table, output_path, write_file, Gap, Report};
use ascent_core::commutative::{required_level, CommutativeAscent, CommutingFamily};
use ascent_core::fixtures::{random_diagonal, random_hermitian_with_norm, random_unit_state, seeded_rng, Fixture};
use ascent_core::quadrature::{build_ball_rule, build_sphere_rule, QuadratureRule, DEFAULT_SEED};
use ascent_core::trotter::{noncomm_limit, LimitOptions, Propagator};
use ascent_core::{cos_sqrt_sum_oracle, sinc_sqrt_sum_oracle, HermitianOperator, StateVector};
use ascent_pde::grid::{spectral_wave_reference, GridField, SpectralOperator};
use ascent_pde::matrix::{field_state, grushin_demo_with, grushin_pair, harmonic_oscillator_with, oscillator_pair};
use ascent_pde::wave::{
    damped_wave, klein_gordon, suggest_level, wave2d_poisson, wave3d_kirchhoff, KGKernelSpec,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "ascent", version, about = "Operator cosine propagators by the method of ascent")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Directory for data files.
    #[arg(long, global = true, env = "ASCENT_OUT_DIR")]
    out_dir: Option<PathBuf>,
    /// Data file format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    out: Format,
    /// Convergence or series tolerance.
    #[arg(long, global = true, default_value_t = 1e-6, value_parser = positive)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite.
    Verify {
        /// List the checks and exit.
        #[arg(long)]
        list_checks: bool,
        /// Run only these check ids.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
        /// Also check a fixture file against the spectral oracle.
        #[arg(long)]
        fixture: Option<PathBuf>,
        #[arg(long, default_value_t = 0.3)]
        t: f64,
    },
    /// Commutative ascent for scalars or a fixture of commuting matrices.
    Ascent {
        #[arg(long, value_delimiter = ',', conflicts_with = "fixture")]
        scalars: Vec<f64>,
        #[arg(long)]
        fixture: Option<PathBuf>,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        level: Option<usize>,
        /// Evaluate sin(t√S)/√S instead of the cosine.
        #[arg(long)]
        sine: bool,
    },
    /// Error-versus-m study of the non-commutative limit.
    Noncomm {
        /// Operators and state; defaults to a seeded 4x4 pair.
        #[arg(long)]
        fixture: Option<PathBuf>,
        #[arg(long, default_value_t = 0.3)]
        t: f64,
        #[arg(long, default_value_t = 4)]
        m0: usize,
        #[arg(long, default_value_t = 256)]
        mcap: usize,
        #[arg(long)]
        richardson: bool,
        #[arg(long)]
        sine: bool,
    },
    /// Two-dimensional wave equation, Poisson formula.
    Wave2d(GridArgs),
    /// Three-dimensional wave equation, Kirchhoff formula.
    Wave3d(GridArgs),
    /// Klein-Gordon equation.
    Kg(MassArgs),
    /// Damped wave equation.
    Damped(MassArgs),
    /// Harmonic oscillator through the product limit.
    Oscillator {
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long, default_value_t = 16.0)]
        length: f64,
        #[arg(long, default_value_t = 0.2)]
        t: f64,
        #[arg(long, value_enum, default_value_t = State::Ground)]
        state: State,
        #[arg(long, default_value_t = 4)]
        m0: usize,
        #[arg(long, default_value_t = 64)]
        mcap: usize,
    },
    /// Grushin operator as a matrix sum of squares.
    Grushin {
        #[arg(long, default_value_t = 16)]
        grid: usize,
        #[arg(long, default_value_t = 8.0)]
        length: f64,
        #[arg(long, default_value_t = 0.2)]
        t: f64,
        #[arg(long, default_value_t = 4)]
        m0: usize,
        #[arg(long, default_value_t = 64)]
        mcap: usize,
    },
    /// Write a random operator fixture.
    Fixture {
        #[arg(long, value_enum, default_value_t = FixtureKind::Pair)]
        kind: FixtureKind,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        count: usize,
    },
    /// Export quadrature rules.
    Rule {
        #[command(subcommand)]
        action: RuleAction,
    },
}

#[derive(Args)]
struct GridArgs {
    /// Points per axis.
    #[arg(long, default_value_t = 64)]
    grid: usize,
    /// Box side.
    #[arg(long, default_value_t = 16.0)]
    length: f64,
    /// Width of the Gaussian initial datum.
    #[arg(long, default_value_t = 0.6)]
    sigma: f64,
    #[arg(long, default_value_t = 0.5)]
    t: f64,
    /// Rule level (default: chosen from the data spectrum).
    #[arg(long)]
    level: Option<usize>,
}

#[derive(Args)]
struct MassArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Spatial dimension.
    #[arg(long, default_value_t = 1)]
    n: usize,
}

#[derive(Subcommand)]
enum RuleAction {
    Export {
        #[arg(long, value_enum)]
        domain: Domain,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        level: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Domain {
    Sphere,
    Ball,
}

#[derive(Clone, Copy, ValueEnum)]
enum State {
    Ground,
    Excited,
}

#[derive(Clone, Copy, ValueEnum)]
enum FixtureKind {
    /// Two random Hermitian matrices of unit norm and a unit state.
    Pair,
    /// Random diagonal matrices with entries in [−1, 1].
    Commuting,
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be positive, got {v}"))
    }
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<ascent_core::Error> for Failure {
    fn from(e: ascent_core::Error) -> Self {
        match e {
            ascent_core::Error::Fixture(_) => Failure::Usage(e.to_string()),
            _ => Failure::Run(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let outcome = run(&cli);
    eprintln!("elapsed {:.3} s", start.elapsed().as_secs_f64());
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Run(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let dir = cli.out_dir.as_deref();
    match &cli.command {
        Command::Verify {
            list_checks,
            only,
            fixture,
            t,
        } => verify(cli.seed, *list_checks, only, fixture.as_deref(), *t),
        Command::Ascent {
            scalars,
            fixture,
            t,
            level,
            sine,
        } => ascent(cli, scalars, fixture.as_deref(), *t, *level, *sine),
        Command::Noncomm {
            fixture,
            t,
            m0,
            mcap,
            richardson,
            sine,
        } => noncomm(cli, fixture.as_deref(), *t, *m0, *mcap, *richardson, *sine),
        Command::Wave2d(g) => wave(cli, "wave2d", "Poisson formula (two-dimensional wave)", g, 2),
        Command::Wave3d(g) => wave(cli, "wave3d", "Kirchhoff formula (three-dimensional wave)", g, 3),
        Command::Kg(m) => mass(cli, "kg", m, false),
        Command::Damped(m) => mass(cli, "damped", m, true),
        Command::Oscillator {
            grid,
            length,
            t,
            state,
            m0,
            mcap,
        } => oscillator(cli, *grid, *length, *t, *state, *m0, *mcap),
        Command::Grushin {
            grid,
            length,
            t,
            m0,
            mcap,
        } => grushin(cli, *grid, *length, *t, *m0, *mcap),
        Command::Fixture { kind, dim, count } => fixture_cmd(cli.seed, dir, *kind, *dim, *count),
        Command::Rule {
            action: RuleAction::Export { domain, dim, level },
        } => rule_export(dir, *domain, *dim, *level),
    }
}

fn emit(report: &Report) -> Outcome {
    println!("{}", report.to_json());
    Ok(report.pass)
}

fn verify(seed: u64, list: bool, only: &[usize], fixture: Option<&Path>, t: f64) -> Outcome {
    let all = checks::all();
    if list {
        for c in &all {
            println!("{:>2}  {}  [{}]", c.id, c.name, c.formula);
        }
        return Ok(true);
    }
    if let Some(bad) = only.iter().find(|&&id| !all.iter().any(|c| c.id == id)) {
        return Err(Failure::Usage(format!("no check with id {bad}")));
    }
    let mut outcomes = Vec::new();
    let mut pass = true;
    for c in all.iter().filter(|c| only.is_empty() || only.contains(&c.id)) {
        let (o, secs) = c.run(seed);
        eprintln!("[{}] {:>2} {} ({secs:.2} s)", if o.pass { "PASS" } else { "FAIL" }, o.id, o.name);
        pass &= o.pass;
        outcomes.push(o);
    }
    let mut report = Report::new("verify", "verification suite", seed, json!({ "only": only }));
    if let Some(path) = fixture {
        let (gap, warnings) = fixture_check(path, t)?;
        report.warnings = warnings;
        report.push(gap);
    }
    report.results = json!(outcomes);
    report.pass &= pass;
    emit(&report)
}

/// Loads a fixture and compares the propagator against the dense oracle.
fn fixture_check(path: &Path, t: f64) -> Result<(Gap, Vec<String>), Failure> {
    let fx = Fixture::load(path)?;
    let ops = fx.operators()?;
    let warnings: Vec<String> = ops
        .iter()
        .enumerate()
        .filter(|(_, o)| o.was_symmetrized())
        .map(|(i, _)| format!("operator {i} was not Hermitian; replaced by its Hermitian part"))
        .collect();
    let dim = ops.first().map(HermitianOperator::dim).ok_or_else(|| Failure::Usage("fixture has no operators".into()))?;
    let h = fx.state()?.unwrap_or_else(|| random_unit_state(dim, &mut seeded_rng(DEFAULT_SEED)));
    let oracle = cos_sqrt_sum_oracle(&ops, t)?.apply(&h)?;
    let gap = match CommutingFamily::new(ops.clone()) {
        Ok(fam) => {
            let v = CommutativeAscent::new(fam.clone(), required_level(&fam, t)?)?.cos(t)?;
            Gap::new("fixture ascent vs oracle", v.value.apply(&h)?.distance(&oracle)?, 1e-5 * h.norm())
        }
        Err(_) => {
            let opts = LimitOptions {
                m_cap: 1024,
                ..LimitOptions::default()
            };
            let (u, _) = noncomm_limit(&ops, &h, t, 1e-4, &opts)?;
            Gap::new("fixture limit vs oracle", u.distance(&oracle)?, 1e-2 * h.norm())
        }
    };
    Ok((gap, warnings))
}

fn ascent(cli: &Cli, scalars: &[f64], fixture: Option<&Path>, t: f64, level: Option<usize>, sine: bool) -> Outcome {
    let ops = match fixture {
        Some(p) => Fixture::load(p)?.operators()?,
        None if !scalars.is_empty() => scalars.iter().map(|&a| HermitianOperator::scalar(a)).collect(),
        None => return Err(Failure::Usage("give --scalars or --fixture".into())),
    };
    let fam = CommutingFamily::new(ops.clone())?;
    let level = match level {
        Some(l) => l,
        None => required_level(&fam, t)?,
    };
    let eng = CommutativeAscent::new(fam, level)?;
    let (v, oracle, formula) = if sine {
        (eng.sin(t)?, sinc_sqrt_sum_oracle(&ops, t)?, "sine propagator by ascent")
    } else {
        let f = if ops.len() % 2 == 0 {
            "even-dimensional ball ascent"
        } else {
            "odd-dimensional sphere ascent"
        };
        (eng.cos(t)?, cos_sqrt_sum_oracle(&ops, t)?, f)
    };
    let mut report = Report::new(
        "ascent",
        formula,
        cli.seed,
        json!({ "t": t, "level": level, "operators": ops.len(), "dim": ops[0].dim() }),
    );
    let m = v.value.matrix();
    report.results = json!({
        "value": (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "truncation": v.truncation,
        "tail_bound": v.tail_bound,
        "moment_error": v.moment_error,
        "certified_error": v.certified_error,
    });
    let gap = v.value.frobenius_distance(&oracle)?;
    report.push(Gap::new("oracle frobenius", gap, (10.0 * v.certified_error).max(cli.tol)));
    emit(&report)
}

fn bundled_pair(seed: u64) -> Result<(Vec<HermitianOperator>, StateVector), Failure> {
    let mut rng = seeded_rng(seed);
    let a = random_hermitian_with_norm(4, 1.0, &mut rng)?;
    let b = random_hermitian_with_norm(4, 1.0, &mut rng)?;
    Ok((vec![a, b], random_unit_state(4, &mut rng)))
}

#[allow(clippy::too_many_arguments)]
fn noncomm(cli: &Cli, fixture: Option<&Path>, t: f64, m0: usize, mcap: usize, richardson: bool, sine: bool) -> Outcome {
    let (ops, h) = match fixture {
        Some(p) => {
            let fx = Fixture::load(p)?;
            let ops = fx.operators()?;
            let h = match fx.state()? {
                Some(h) => h,
                None => random_unit_state(ops[0].dim(), &mut seeded_rng(cli.seed)),
            };
            (ops, h)
        }
        None => bundled_pair(cli.seed)?,
    };
    let propagator = if sine { Propagator::Sin } else { Propagator::Cos };
    let oracle = if sine {
        sinc_sqrt_sum_oracle(&ops, t)?
    } else {
        cos_sqrt_sum_oracle(&ops, t)?
    };
    let opts = LimitOptions {
        m0,
        m_cap: mcap,
        richardson,
        reference: Some(oracle.apply(&h)?),
        propagator,
        ..LimitOptions::default()
    };
    let (_, conv) = noncomm_limit(&ops, &h, t, cli.tol, &opts)?;
    let rows: Vec<Vec<f64>> = conv
        .m_values
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let diff = if i == 0 { f64::NAN } else { conv.differences[i - 1] };
            vec![m as f64, conv.errors[i], diff]
        })
        .collect();
    let name = match cli.out {
        Format::Csv => "noncomm.csv",
        Format::Json => "noncomm.json",
    };
    let bytes = match cli.out {
        Format::Csv => csv_table(&["m", "error", "difference"], &rows),
        Format::Json => serde_json::to_vec_pretty(&conv).expect("report serializes"),
    };
    write_file(&output_path(cli.out_dir.as_deref(), name), &bytes)?;
    let formula = if sine {
        "sine product-formula limit"
    } else {
        "cosine product-formula limit"
    };
    let mut report = Report::new(
        "noncomm",
        formula,
        cli.seed,
        json!({ "t": t, "m0": m0, "mcap": mcap, "tol": cli.tol, "richardson": richardson, "operators": ops.len(), "dim": h.dim() }),
    );
    let last = *conv.errors.last().unwrap_or(&f64::NAN);
    report.results = json!(conv);
    report.push(Gap::new("final error vs oracle", last, (10.0 * cli.tol).max(1e-2) * h.norm()));
    emit(&report)
}

fn gaussian(dims: usize, g: &GridArgs) -> Result<GridField, Failure> {
    let s2 = 2.0 * g.sigma * g.sigma;
    Ok(GridField::from_fn(vec![g.grid; dims], vec![g.length; dims], |x| {
        (-x.iter().map(|v| v * v).sum::<f64>() / s2).exp()
    })?)
}

fn write_field(cli: &Cli, stem: &str, f: &GridField, t: f64) -> Result<(), Failure> {
    let path = output_path(cli.out_dir.as_deref(), &format!("{stem}.{}", if cli.out == Format::Csv { "csv" } else { "json" }));
    let bytes = match cli.out {
        Format::Csv => {
            let mut buf = Vec::new();
            f.write_csv(&mut buf)?;
            buf
        }
        Format::Json => {
            let values: Vec<[f64; 2]> = f.values().iter().map(|z| [z.re, z.im]).collect();
            serde_json::to_vec(&json!({ "header": f.header(), "t": t, "values": values })).expect("field serializes")
        }
    };
    write_file(&path, &bytes)?;
    Ok(())
}

fn wave(cli: &Cli, name: &str, formula: &str, g: &GridArgs, dims: usize) -> Outcome {
    let f = gaussian(dims, g)?;
    let level = g.level.unwrap_or_else(|| suggest_level(&f, g.t, 0.0));
    let u = if dims == 2 {
        wave2d_poisson(&f, g.t, level)?
    } else {
        wave3d_kirchhoff(&f, g.t, level)?
    };
    let r = spectral_wave_reference(&f, g.t, &SpectralOperator::wave(&f))?;
    write_field(cli, name, &u, g.t)?;
    let mut report = Report::new(
        name,
        formula,
        cli.seed,
        json!({ "grid": g.grid, "length": g.length, "sigma": g.sigma, "t": g.t, "level": level, "header": f.header() }),
    );
    report.results = json!({ "l2_norm": u.l2_norm(), "max_abs": u.max_abs() });
    report.push(Gap::new("L2 relative vs spectral", u.relative_l2_gap(&r)?, 1e-3));
    emit(&report)
}

fn mass(cli: &Cli, name: &str, m: &MassArgs, damped: bool) -> Outcome {
    let g = &m.grid;
    let f = gaussian(m.n, g)?;
    let level = g.level.unwrap_or_else(|| suggest_level(&f, g.t, m.a));
    let (u, symbol, formula) = if damped {
        (
            damped_wave(&f, g.t, m.a, level)?,
            SpectralOperator::damped(&f, m.a),
            "damped wave by continuation of the Klein-Gordon kernel",
        )
    } else {
        (
            klein_gordon(&f, g.t, &KGKernelSpec::new(m.n, m.a)?, level)?,
            SpectralOperator::klein_gordon(&f, m.a),
            if m.n % 2 == 1 {
                "Klein-Gordon Bessel kernel (odd dimension)"
            } else {
                "Klein-Gordon cosine kernel (even dimension)"
            },
        )
    };
    let r = spectral_wave_reference(&f, g.t, &symbol)?;
    write_field(cli, name, &u, g.t)?;
    let mut report = Report::new(
        name,
        formula,
        cli.seed,
        json!({ "grid": g.grid, "length": g.length, "sigma": g.sigma, "t": g.t, "a": m.a, "n": m.n, "level": level }),
    );
    report.results = json!({ "l2_norm": u.l2_norm(), "max_abs": u.max_abs() });
    report.push(Gap::new("L2 relative vs spectral", u.relative_l2_gap(&r)?, 1e-3));
    emit(&report)
}

fn oscillator(cli: &Cli, grid: usize, length: f64, t: f64, state: State, m0: usize, mcap: usize) -> Outcome {
    let f = match state {
        State::Ground => GridField::from_fn(vec![grid], vec![length], |x| (-x[0] * x[0] / 2.0).exp())?,
        State::Excited => GridField::from_fn(vec![grid], vec![length], |x| x[0] * (-x[0] * x[0] / 2.0).exp())?,
    };
    let reference = cos_sqrt_sum_oracle(&oscillator_pair(&f)?, t)?.apply(&field_state(&f))?;
    let opts = LimitOptions {
        m0,
        m_cap: mcap,
        reference: Some(reference),
        ..LimitOptions::default()
    };
    let (u, conv) = harmonic_oscillator_with(&f, t, cli.tol, opts)?;
    write_field(cli, "oscillator", &u, t)?;
    let hn = field_state(&f).norm();
    let mut report = Report::new(
        "oscillator",
        "harmonic oscillator cosine as the product-formula limit",
        cli.seed,
        json!({ "grid": grid, "length": length, "t": t, "tol": cli.tol, "m0": m0, "mcap": mcap }),
    );
    let last = *conv.errors.last().unwrap_or(&f64::NAN);
    report.results = json!(conv);
    report.push(Gap::new("relative error vs dense oracle", last / hn, 1e-3));
    emit(&report)
}

fn grushin(cli: &Cli, grid: usize, length: f64, t: f64, m0: usize, mcap: usize) -> Outcome {
    let f = GridField::from_fn(vec![grid, grid], vec![length; 2], |x| {
        (-x[0] * x[0] - 0.5 * x[1] * x[1]).exp()
    })?;
    let reference = cos_sqrt_sum_oracle(&grushin_pair(&f)?, t)?.apply(&field_state(&f))?;
    let opts = LimitOptions {
        m0,
        m_cap: mcap,
        reference: Some(reference),
        ..LimitOptions::default()
    };
    let (u, conv) = grushin_demo_with(&f, t, cli.tol, opts)?;
    write_field(cli, "grushin", &u, t)?;
    let hn = field_state(&f).norm();
    let mut report = Report::new(
        "grushin",
        "Grushin sum of squares via the product-formula limit",
        cli.seed,
        json!({ "grid": grid, "length": length, "t": t, "tol": cli.tol, "m0": m0, "mcap": mcap }),
    );
    let last = *conv.errors.last().unwrap_or(&f64::NAN);
    report.results = json!(conv);
    report.push(Gap::new("relative error vs dense oracle", last / hn, 1e-3));
    emit(&report)
}

fn fixture_cmd(seed: u64, dir: Option<&Path>, kind: FixtureKind, dim: usize, count: usize) -> Outcome {
    if dim == 0 || count == 0 {
        return Err(Failure::Usage("dim and count must be positive".into()));
    }
    let mut rng = seeded_rng(seed);
    let (label, ops) = match kind {
        FixtureKind::Pair => (
            "hermitian",
            (0..count).map(|_| random_hermitian_with_norm(dim, 1.0, &mut rng)).collect::<Result<Vec<_>, _>>()?,
        ),
        FixtureKind::Commuting => (
            "diagonal",
            (0..count).map(|_| random_diagonal(dim, -1.0, 1.0, &mut rng)).collect::<Result<Vec<_>, _>>()?,
        ),
    };
    let h = random_unit_state(dim, &mut rng);
    let fx = Fixture::new(format!("{label} dim={dim} count={count} seed={seed}"), &ops, Some(&h));
    let path = output_path(dir, "fixture.json");
    write_file(&path, fx.to_json().as_bytes())?;
    eprintln!("wrote {}", path.display());
    Ok(true)
}

fn rule_export(dir: Option<&Path>, domain: Domain, dim: usize, level: usize) -> Outcome {
    let mut buf = Vec::new();
    let name = match domain {
        Domain::Sphere => {
            build_sphere_rule(dim, level)?.write_csv(&mut buf)?;
            format!("sphere_n{dim}_l{level}.csv")
        }
        Domain::Ball => {
            build_ball_rule(dim, level)?.write_csv(&mut buf)?;
            format!("ball_d{dim}_l{level}.csv")
        }
    };
    let path = output_path(dir, &name);
    write_file(&path, &buf)?;
    eprintln!("wrote {}", path.display());
    Ok(true)
}
