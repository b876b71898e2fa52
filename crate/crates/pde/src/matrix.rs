//! Grid operators as dense matrices: the harmonic oscillator
//! `P = −d²/dx² + x²` and the Grushin operator `−∂₁² − x₁²∂₂²`, each a sum
//! of two non-commuting squares propagated by the product-formula limit.

use ascent_core::trotter::{noncomm_limit, ConvergenceReport, LimitOptions};
use ascent_core::{cos_sqrt_sum_oracle, CMatrix, Error, HermitianOperator, Result, StateVector};
use num_complex::Complex64;

use crate::grid::{wavenumbers, GridField};

/// Dense `(1/i)d/dx` on `n` periodic points over a box of side `length`,
/// with the Nyquist mode mapped to zero so the matrix is Hermitian.
pub fn momentum_matrix(n: usize, length: f64) -> Result<HermitianOperator> {
    if n == 0 || !(length > 0.0) {
        return Err(Error::Grid(format!("bad grid: {n} points on length {length}")));
    }
    let mut ks = wavenumbers(n, length);
    if n % 2 == 0 {
        ks[n / 2] = 0.0;
    }
    let h = length / n as f64;
    let m = CMatrix::from_fn(n, n, |j, l| {
        let d = (j as f64 - l as f64) * h;
        ks.iter().map(|&k| Complex64::from_polar(k, k * d)).sum::<Complex64>() / n as f64
    });
    HermitianOperator::new(m)
}

/// Multiplication by the grid coordinate `x`.
pub fn position_matrix(field_dims: usize, length: f64) -> Result<HermitianOperator> {
    let h = length / field_dims as f64;
    let x: Vec<f64> = (0..field_dims).map(|i| -0.5 * length + i as f64 * h).collect();
    HermitianOperator::from_diagonal(&x)
}

fn state_of(f: &GridField) -> StateVector {
    StateVector::new(ascent_core::CVector::from_column_slice(f.values()))
}

fn field_of(f: &GridField, v: &StateVector) -> Result<GridField> {
    GridField::new(f.dims().to_vec(), f.lengths().to_vec(), v.entries().iter().copied().collect())
}

/// `A = (1/i)d/dx`, `B = x` on the grid of a 1-D field.
pub fn oscillator_pair(f: &GridField) -> Result<[HermitianOperator; 2]> {
    if f.ndim() != 1 {
        return Err(Error::Grid("the oscillator needs a 1-D field".into()));
    }
    let (n, l) = (f.dims()[0], f.lengths()[0]);
    Ok([momentum_matrix(n, l)?, position_matrix(n, l)?])
}

/// `A = (1/i)∂₁ ⊗ I`, `B = x₁ ⊗ (1/i)∂₂` on the grid of a 2-D field.
pub fn grushin_pair(f: &GridField) -> Result<[HermitianOperator; 2]> {
    if f.ndim() != 2 {
        return Err(Error::Grid("the Grushin demo needs a 2-D field".into()));
    }
    let (n1, n2) = (f.dims()[0], f.dims()[1]);
    let (l1, l2) = (f.lengths()[0], f.lengths()[1]);
    let p1 = momentum_matrix(n1, l1)?;
    let p2 = momentum_matrix(n2, l2)?;
    let x1 = position_matrix(n1, l1)?;
    let id2 = CMatrix::identity(n2, n2);
    Ok([
        HermitianOperator::new(p1.matrix().kronecker(&id2))?,
        HermitianOperator::new(x1.matrix().kronecker(p2.matrix()))?,
    ])
}

fn propagate(
    f: &GridField,
    pair: &[HermitianOperator; 2],
    t: f64,
    tol: f64,
    opts: LimitOptions,
) -> Result<(GridField, ConvergenceReport)> {
    let (u, report) = noncomm_limit(pair, &state_of(f), t, tol, &opts)?;
    Ok((field_of(f, &u)?, report))
}

/// `cos(t√P)f` through the product-formula limit.
pub fn harmonic_oscillator(f: &GridField, t: f64, tol: f64) -> Result<(GridField, ConvergenceReport)> {
    propagate(f, &oscillator_pair(f)?, t, tol, LimitOptions::default())
}

/// As [`harmonic_oscillator`] with explicit driver options (for instance a
/// reference state to record errors against).
pub fn harmonic_oscillator_with(
    f: &GridField,
    t: f64,
    tol: f64,
    opts: LimitOptions,
) -> Result<(GridField, ConvergenceReport)> {
    propagate(f, &oscillator_pair(f)?, t, tol, opts)
}

pub fn grushin_demo(f: &GridField, t: f64, tol: f64) -> Result<(GridField, ConvergenceReport)> {
    propagate(f, &grushin_pair(f)?, t, tol, LimitOptions::default())
}

pub fn grushin_demo_with(
    f: &GridField,
    t: f64,
    tol: f64,
    opts: LimitOptions,
) -> Result<(GridField, ConvergenceReport)> {
    propagate(f, &grushin_pair(f)?, t, tol, opts)
}

/// `cos(t√(A²+B²))f` by diagonalizing the discretized sum of squares.
pub fn dense_reference(f: &GridField, pair: &[HermitianOperator; 2], t: f64) -> Result<GridField> {
    let c = cos_sqrt_sum_oracle(pair, t)?;
    field_of(f, &c.apply(&state_of(f))?)
}

pub fn oscillator_reference(f: &GridField, t: f64) -> Result<GridField> {
    dense_reference(f, &oscillator_pair(f)?, t)
}

pub fn grushin_reference(f: &GridField, t: f64) -> Result<GridField> {
    dense_reference(f, &grushin_pair(f)?, t)
}

/// Grid state of `f` as a vector, for driver options.
pub fn field_state(f: &GridField) -> StateVector {
    state_of(f)
}
