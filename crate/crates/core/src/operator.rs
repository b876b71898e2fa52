//! Dense Hermitian operators and the exact spectral oracle.
//!
//! Every propagator built elsewhere in the crate is compared against the
//! functional calculus implemented here: diagonalize `M = U Λ U*` and apply
//! a scalar function to the eigenvalues.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Relative Hermitian tolerance `‖M − M*‖_F ≤ HERMITIAN_TOL · ‖M‖_F`.
pub const HERMITIAN_TOL: f64 = 1e-12;

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;

/// A dense complex matrix certified Hermitian.
///
/// Inputs are always replaced by their Hermitian part `(M + M*)/2`; when the
/// input defect exceeded [`HERMITIAN_TOL`] the operator carries a warning
/// flag instead of being rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
    symmetrized: bool,
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::Empty);
        }
        let defect = hermitian_defect(&matrix);
        let scale = matrix.norm();
        let symmetrized = defect > HERMITIAN_TOL * scale;
        let matrix = (&matrix + matrix.adjoint()).scale(0.5);
        Ok(Self {
            matrix,
            symmetrized,
        })
    }

    pub fn from_real(matrix: DMatrix<f64>) -> Result<Self> {
        Self::new(matrix.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn from_diagonal(diagonal: &[f64]) -> Result<Self> {
        if diagonal.is_empty() {
            return Err(Error::Empty);
        }
        let d = DVector::from_iterator(
            diagonal.len(),
            diagonal.iter().map(|&x| Complex64::new(x, 0.0)),
        );
        Self::new(DMatrix::from_diagonal(&d))
    }

    /// The 1x1 operator `a`.
    pub fn scalar(a: f64) -> Self {
        Self {
            matrix: DMatrix::from_element(1, 1, Complex64::new(a, 0.0)),
            symmetrized: false,
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: DMatrix::zeros(dim, dim),
            symmetrized: false,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim),
            symmetrized: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// True when the input had to be symmetrized beyond rounding level.
    pub fn was_symmetrized(&self) -> bool {
        self.symmetrized
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// Exact operator 2-norm, read off the spectrum.
    pub fn norm2(&self) -> Result<f64> {
        let spec = self.spectral()?;
        Ok(spec
            .eigenvalues
            .iter()
            .fold(0.0_f64, |acc, &l| acc.max(l.abs())))
    }

    pub fn square(&self) -> Self {
        Self::hermitian_part(&self.matrix * &self.matrix)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            matrix: self.matrix.scale(s),
            symmetrized: self.symmetrized,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self::hermitian_part(&self.matrix + &other.matrix))
    }

    pub fn commutator_norm(&self, other: &Self) -> Result<f64> {
        check_dim(self.dim(), other.dim())?;
        let ab = &self.matrix * &other.matrix;
        let ba = &other.matrix * &self.matrix;
        Ok((ab - ba).norm())
    }

    pub fn frobenius_distance(&self, other: &Self) -> Result<f64> {
        check_dim(self.dim(), other.dim())?;
        Ok((&self.matrix - &other.matrix).norm())
    }

    pub fn apply(&self, h: &StateVector) -> Result<StateVector> {
        check_dim(self.dim(), h.dim())?;
        Ok(StateVector::new(&self.matrix * h.entries()))
    }

    pub fn spectral(&self) -> Result<SpectralDecomposition> {
        SpectralDecomposition::new(self)
    }

    /// Hermitian part of a matrix known to be Hermitian up to rounding.
    pub(crate) fn hermitian_part(matrix: CMatrix) -> Self {
        let matrix = (&matrix + matrix.adjoint()).scale(0.5);
        Self {
            matrix,
            symmetrized: false,
        }
    }
}

pub fn hermitian_defect(m: &CMatrix) -> f64 {
    (m - m.adjoint()).norm()
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `M = U diag(λ) U*` with eigenvalues sorted ascending.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn new(op: &HermitianOperator) -> Result<Self> {
        let m = op.matrix();
        let dim = m.nrows();
        let eig = m
            .clone()
            .try_symmetric_eigen(EIGEN_EPS, EIGEN_MAX_ITER)
            .ok_or_else(|| Error::Decomposition {
                dim,
                frobenius: m.norm(),
                defect: hermitian_defect(m),
            })?;
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues = DVector::from_iterator(dim, order.iter().map(|&i| eig.eigenvalues[i]));
        let eigenvectors = CMatrix::from_fn(dim, dim, |r, c| eig.eigenvectors[(r, order[c])]);
        Ok(Self {
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `U f(Λ) U*` for a real function `f`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let scaled = self.scaled_columns(|l| Complex64::new(f(l), 0.0));
        HermitianOperator::hermitian_part(scaled * self.eigenvectors.adjoint())
    }

    /// `U g(Λ) U*` for a complex-valued `g`; the result is normal but in
    /// general not Hermitian.
    pub fn apply_complex(&self, g: impl Fn(f64) -> Complex64) -> CMatrix {
        self.scaled_columns(g) * self.eigenvectors.adjoint()
    }

    fn scaled_columns(&self, g: impl Fn(f64) -> Complex64) -> CMatrix {
        let mut scaled = self.eigenvectors.clone();
        for (c, &l) in self.eigenvalues.iter().enumerate() {
            let v = g(l);
            for x in scaled.column_mut(c).iter_mut() {
                *x *= v;
            }
        }
        scaled
    }

    pub fn reconstruction_error(&self, op: &HermitianOperator) -> f64 {
        (self.apply(|l| l).matrix() - op.matrix()).norm()
    }

    pub fn unitarity_error(&self) -> f64 {
        let d = self.dim();
        (self.eigenvectors.adjoint() * &self.eigenvectors - CMatrix::identity(d, d)).norm()
    }
}

/// A vector of the Hilbert space the operators act on.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    entries: CVector,
}

impl StateVector {
    pub fn new(entries: CVector) -> Self {
        Self { entries }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(CVector::from_iterator(
            values.len(),
            values.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(CVector::zeros(dim))
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &CVector {
        &self.entries
    }

    pub fn into_entries(self) -> CVector {
        self.entries
    }

    pub fn norm(&self) -> f64 {
        self.entries.norm()
    }

    pub fn distance(&self, other: &Self) -> Result<f64> {
        check_dim(self.dim(), other.dim())?;
        Ok((&self.entries - &other.entries).norm())
    }
}

/// Functional calculus `U f(Λ) U*` of a Hermitian operator.
pub fn spectral_apply(m: &HermitianOperator, f: impl Fn(f64) -> f64) -> Result<HermitianOperator> {
    Ok(m.spectral()?.apply(f))
}

/// `S = A₁² + ⋯ + Aₙ²`.
pub fn sum_of_squares(ops: &[HermitianOperator]) -> Result<HermitianOperator> {
    let first = ops
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty operator list".into()))?;
    let dim = first.dim();
    let mut acc = CMatrix::zeros(dim, dim);
    for op in ops {
        check_dim(dim, op.dim())?;
        acc += op.matrix() * op.matrix();
    }
    Ok(HermitianOperator::hermitian_part(acc))
}

/// `cos(t √S)` with `S = ΣAᵢ²`, by diagonalizing `S`.
pub fn cos_sqrt_sum_oracle(ops: &[HermitianOperator], t: f64) -> Result<HermitianOperator> {
    let s = sum_of_squares(ops)?;
    spectral_apply(&s, |l| (t * l.max(0.0).sqrt()).cos())
}

/// `sin(t √S)/√S`, with value `t` on the kernel of `S`.
pub fn sinc_sqrt_sum_oracle(ops: &[HermitianOperator], t: f64) -> Result<HermitianOperator> {
    let s = sum_of_squares(ops)?;
    spectral_apply(&s, |l| sinc_sqrt(l.max(0.0), t))
}

/// `sin(t√λ)/√λ` for `λ ≥ 0`, continuous at `λ = 0`.
pub fn sinc_sqrt(lambda: f64, t: f64) -> f64 {
    let r = lambda.sqrt();
    let x = t * r;
    if x.abs() < 1e-4 {
        let x2 = x * x;
        t * (1.0 - x2 / 6.0 + x2 * x2 / 120.0)
    } else {
        x.sin() / r
    }
}

/// `exp(−ρ M²)`.
pub fn heat_semigroup(m: &HermitianOperator, rho: f64) -> Result<HermitianOperator> {
    if !(rho > 0.0) {
        return Err(Error::InvalidParameter(format!("rho must be positive, got {rho}")));
    }
    spectral_apply(m, |l| (-rho * l * l).exp())
}

/// `[exp(−ρA²/m) exp(−ρB²/m)]^m`; not Hermitian unless `A` and `B` commute.
pub fn trotter_product(
    a: &HermitianOperator,
    b: &HermitianOperator,
    rho: f64,
    m: usize,
) -> Result<CMatrix> {
    check_dim(a.dim(), b.dim())?;
    if m == 0 {
        return Err(Error::InvalidParameter("m must be at least 1".into()));
    }
    let step = rho / m as f64;
    let ea = heat_semigroup(a, step)?;
    let eb = heat_semigroup(b, step)?;
    let factor = ea.matrix() * eb.matrix();
    let mut out = CMatrix::identity(a.dim(), a.dim());
    for _ in 0..m {
        out = &out * &factor;
    }
    Ok(out)
}

/// Constants `C`, `K` of the factorial bound `‖A^{α₁}B^{α₂}⋯h‖ ≤ C K^{|α|} |α|!`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticBound {
    pub c: f64,
    pub k: f64,
}

impl AnalyticBound {
    /// Radius `1/(√q K)` of the q-operator series; infinite when `K = 0`.
    pub fn radius_for(&self, q: usize) -> f64 {
        if self.k == 0.0 {
            f64::INFINITY
        } else {
            1.0 / ((q as f64).sqrt() * self.k)
        }
    }

    pub fn radius(&self) -> f64 {
        self.radius_for(2)
    }
}

/// For bounded operators every vector is analytic with `C = ‖h‖`,
/// `K = max ‖Aᵢ‖₂`.
pub fn analytic_bound_many(ops: &[HermitianOperator], h: &StateVector) -> Result<AnalyticBound> {
    let mut k = 0.0_f64;
    for op in ops {
        check_dim(op.dim(), h.dim())?;
        k = k.max(op.norm2()?);
    }
    Ok(AnalyticBound { c: h.norm(), k })
}

pub fn analytic_bound(
    a: &HermitianOperator,
    b: &HermitianOperator,
    h: &StateVector,
) -> Result<AnalyticBound> {
    analytic_bound_many(&[a.clone(), b.clone()], h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample() -> HermitianOperator {
        let m = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, 0.0),
                c(0.2, 0.3),
                c(-0.1, 0.0),
                c(0.2, -0.3),
                c(-0.5, 0.0),
                c(0.0, 0.7),
                c(-0.1, 0.0),
                c(0.0, -0.7),
                c(0.25, 0.0),
            ],
        );
        HermitianOperator::new(m).unwrap()
    }

    #[test]
    fn rejects_non_square() {
        let m = CMatrix::zeros(2, 3);
        assert_eq!(
            HermitianOperator::new(m).unwrap_err(),
            Error::NotSquare { rows: 2, cols: 3 }
        );
    }

    #[test]
    fn symmetrizes_with_flag() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]);
        let op = HermitianOperator::new(m).unwrap();
        assert!(op.was_symmetrized());
        assert_eq!(op.matrix()[(0, 1)], c(0.5, 0.0));
        assert!(!sample().was_symmetrized());
    }

    #[test]
    fn decomposition_invariants() {
        let op = sample();
        let spec = op.spectral().unwrap();
        assert!(spec.reconstruction_error(&op) <= 1e-10 * op.frobenius_norm());
        assert!(spec.unitarity_error() <= 1e-10);
        for w in spec.eigenvalues.as_slice().windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn identity_function_reproduces_matrix() {
        let op = sample();
        let back = spectral_apply(&op, |l| l).unwrap();
        assert!(back.frobenius_distance(&op).unwrap() <= 1e-10);
    }

    #[test]
    fn cosine_of_zero_is_identity() {
        let z = HermitianOperator::zeros(3);
        let out = spectral_apply(&z, f64::cos).unwrap();
        assert!(out.frobenius_distance(&HermitianOperator::identity(3)).unwrap() < 1e-15);
    }

    #[test]
    fn cosine_of_diagonal() {
        let op = HermitianOperator::from_diagonal(&[PI / 3.0, PI]).unwrap();
        let out = spectral_apply(&op, f64::cos).unwrap();
        let expect = HermitianOperator::from_diagonal(&[0.5, -1.0]).unwrap();
        assert!(out.frobenius_distance(&expect).unwrap() < 1e-14);
    }

    #[test]
    fn oracle_scalar_values() {
        let zero = [HermitianOperator::zeros(2)];
        let out = cos_sqrt_sum_oracle(&zero, 3.7).unwrap();
        assert!(out.frobenius_distance(&HermitianOperator::identity(2)).unwrap() < 1e-15);

        let ops = [HermitianOperator::scalar(1.0), HermitianOperator::scalar(1.0)];
        let v = cos_sqrt_sum_oracle(&ops, 1.0).unwrap().matrix()[(0, 0)].re;
        assert!((v - 2f64.sqrt().cos()).abs() < 1e-15);
        assert!((v - 0.1559).abs() < 1e-4);

        let diag = [HermitianOperator::from_diagonal(&[-2.0, 0.5]).unwrap()];
        let out = cos_sqrt_sum_oracle(&diag, 0.9).unwrap();
        assert!((out.matrix()[(0, 0)].re - (1.8f64).cos()).abs() < 1e-14);
        assert!((out.matrix()[(1, 1)].re - (0.45f64).cos()).abs() < 1e-14);
    }

    #[test]
    fn sinc_oracle_values() {
        let zero = [HermitianOperator::zeros(2)];
        let out = sinc_sqrt_sum_oracle(&zero, 2.0).unwrap();
        assert!(out
            .frobenius_distance(&HermitianOperator::identity(2).scaled(2.0))
            .unwrap()
            < 1e-15);
        let ops = [HermitianOperator::scalar(1.0), HermitianOperator::scalar(1.0)];
        let v = sinc_sqrt_sum_oracle(&ops, 1.0).unwrap().matrix()[(0, 0)].re;
        assert!((v - 2f64.sqrt().sin() / 2f64.sqrt()).abs() < 1e-15);
        assert!((v - 0.6985).abs() < 1e-4);
        let at_zero = sinc_sqrt_sum_oracle(&[sample()], 0.0).unwrap();
        assert!(at_zero.frobenius_norm() < 1e-15);
    }

    #[test]
    fn sinc_is_continuous_at_small_arguments() {
        for &l in &[1e-20, 1e-12, 1e-9, 1e-8, 1e-7] {
            let t = 1.3;
            let exact = (t * f64::sqrt(l)).sin() / f64::sqrt(l);
            assert!((sinc_sqrt(l, t) - exact).abs() < 1e-12 * t);
        }
    }

    #[test]
    fn heat_semigroup_values() {
        let z = HermitianOperator::zeros(2);
        assert!(heat_semigroup(&z, 1.0)
            .unwrap()
            .frobenius_distance(&HermitianOperator::identity(2))
            .unwrap()
            < 1e-15);
        let one = HermitianOperator::from_diagonal(&[1.0]).unwrap();
        let v = heat_semigroup(&one, 1.0).unwrap().matrix()[(0, 0)].re;
        assert!((v - (-1f64).exp()).abs() < 1e-15);
        assert!(heat_semigroup(&one, 0.0).is_err());
    }

    #[test]
    fn heat_semigroup_factorizes_for_commuting_pair() {
        let a = HermitianOperator::from_diagonal(&[0.3, -1.2, 0.7]).unwrap();
        let b = HermitianOperator::from_diagonal(&[1.1, 0.4, -0.2]).unwrap();
        let s = sum_of_squares(&[a.clone(), b.clone()]).unwrap();
        let root = spectral_apply(&s, |l| l.max(0.0).sqrt()).unwrap();
        let lhs = heat_semigroup(&root, 0.8).unwrap();
        let rhs = heat_semigroup(&a, 0.8).unwrap().matrix() * heat_semigroup(&b, 0.8).unwrap().matrix();
        assert!((lhs.matrix() - rhs).norm() <= 1e-12);
    }

    #[test]
    fn trotter_exact_for_commuting() {
        let a = HermitianOperator::from_diagonal(&[0.3, -1.2]).unwrap();
        let b = HermitianOperator::from_diagonal(&[1.1, 0.4]).unwrap();
        let exact = heat_semigroup(
            &spectral_apply(&sum_of_squares(&[a.clone(), b.clone()]).unwrap(), |l| l.sqrt()).unwrap(),
            0.7,
        )
        .unwrap();
        for m in [1, 3, 8] {
            let p = trotter_product(&a, &b, 0.7, m).unwrap();
            assert!((p - exact.matrix()).norm() <= 1e-12);
        }
        let z = HermitianOperator::zeros(3);
        let p = trotter_product(&z, &z, 0.5, 4).unwrap();
        assert!((p - CMatrix::identity(3, 3)).norm() < 1e-15);
    }

    #[test]
    fn analytic_bound_examples() {
        let z = HermitianOperator::zeros(2);
        let h = StateVector::from_real(&[0.6, 0.8]);
        let b = analytic_bound(&z, &z, &h).unwrap();
        assert_eq!(b.k, 0.0);
        assert!(b.radius().is_infinite());

        let a = HermitianOperator::from_diagonal(&[1.0, -0.5]).unwrap();
        let bb = HermitianOperator::from_diagonal(&[0.2, 1.0]).unwrap();
        let bound = analytic_bound(&a, &bb, &h).unwrap();
        assert!((bound.c - 1.0).abs() < 1e-15);
        assert!((bound.k - 1.0).abs() < 1e-14);
        assert!((bound.radius() - 1.0 / 2f64.sqrt()).abs() < 1e-14);

        let doubled = analytic_bound(&a.scaled(2.0), &bb.scaled(2.0), &h).unwrap();
        assert!((doubled.k - 2.0).abs() < 1e-14);
        assert!((doubled.radius() - bound.radius() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = HermitianOperator::zeros(2);
        let b = HermitianOperator::zeros(3);
        assert_eq!(
            cos_sqrt_sum_oracle(&[a, b], 1.0).unwrap_err(),
            Error::DimensionMismatch { expected: 2, found: 3 }
        );
    }
}
