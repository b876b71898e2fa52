//! Periodic grid fields on boxes `[−L/2, L/2)^n` and Fourier multipliers.

use std::f64::consts::PI;
use std::io::Write;

use ascent_core::{Error, Result};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

/// Complex samples on a periodic box, row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    dims: Vec<usize>,
    lengths: Vec<f64>,
    values: Vec<Complex64>,
}

/// Self-describing header for serialized fields.
#[derive(Debug, Clone, Serialize)]
pub struct FieldHeader {
    pub dims: Vec<usize>,
    pub lengths: Vec<f64>,
    pub spacing: Vec<f64>,
    pub origin: Vec<f64>,
}

impl GridField {
    pub fn new(dims: Vec<usize>, lengths: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if dims.is_empty() || dims.len() > 3 || dims.len() != lengths.len() {
            return Err(Error::Grid("grids have 1 to 3 axes with one length each".into()));
        }
        if dims.iter().any(|&d| d < 2) || lengths.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::Grid("each axis needs at least 2 points and positive length".into()));
        }
        let total: usize = dims.iter().product();
        if values.len() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: values.len(),
            });
        }
        Ok(Self {
            dims,
            lengths,
            values,
        })
    }

    /// Samples `f(x)` at the grid points.
    pub fn from_fn(dims: Vec<usize>, lengths: Vec<f64>, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let total: usize = dims.iter().product();
        let probe = Self::new(dims.clone(), lengths.clone(), vec![Complex64::new(0.0, 0.0); total])?;
        let mut x = vec![0.0; dims.len()];
        let values = (0..total)
            .map(|i| {
                probe.coords_into(i, &mut x);
                Complex64::new(f(&x), 0.0)
            })
            .collect();
        Self::new(dims, lengths, values)
    }

    pub fn constant(dims: Vec<usize>, lengths: Vec<f64>, c: f64) -> Result<Self> {
        Self::from_fn(dims, lengths, |_| c)
    }

    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn spacing(&self) -> Vec<f64> {
        self.dims
            .iter()
            .zip(&self.lengths)
            .map(|(&n, &l)| l / n as f64)
            .collect()
    }

    pub fn origin(&self) -> Vec<f64> {
        self.lengths.iter().map(|l| -0.5 * l).collect()
    }

    pub fn header(&self) -> FieldHeader {
        FieldHeader {
            dims: self.dims.clone(),
            lengths: self.lengths.clone(),
            spacing: self.spacing(),
            origin: self.origin(),
        }
    }

    /// Shortest box side.
    pub fn min_length(&self) -> f64 {
        self.lengths.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn multi_index(&self, mut flat: usize, out: &mut [usize]) {
        for axis in (0..self.ndim()).rev() {
            out[axis] = flat % self.dims[axis];
            flat /= self.dims[axis];
        }
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.dims).fold(0, |acc, (&i, &n)| acc * n + i)
    }

    pub fn coords_into(&self, flat: usize, out: &mut [f64]) {
        let mut idx = vec![0; self.ndim()];
        self.multi_index(flat, &mut idx);
        for axis in 0..self.ndim() {
            out[axis] = -0.5 * self.lengths[axis] + idx[axis] as f64 * self.lengths[axis] / self.dims[axis] as f64;
        }
    }

    pub fn coords(&self, flat: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.ndim()];
        self.coords_into(flat, &mut x);
        x
    }

    /// Nearest grid point to `x`.
    pub fn nearest(&self, x: &[f64]) -> usize {
        let idx: Vec<usize> = (0..self.ndim())
            .map(|a| {
                let h = self.lengths[a] / self.dims[a] as f64;
                let i = ((x[a] + 0.5 * self.lengths[a]) / h).round() as i64;
                i.rem_euclid(self.dims[a] as i64) as usize
            })
            .collect();
        self.flat_index(&idx)
    }

    /// Angular wavenumbers `2πj/L` in FFT order; the Nyquist entry is `+π/h`.
    pub fn wavenumbers(&self, axis: usize) -> Vec<f64> {
        wavenumbers(self.dims[axis], self.lengths[axis])
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().iter().product()
    }

    /// Discrete `L²` norm `(Σ|u|² ΔV)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.cell_volume()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn same_grid(&self, other: &Self) -> Result<()> {
        if self.dims != other.dims || self.lengths != other.lengths {
            return Err(Error::Grid("fields live on different grids".into()));
        }
        Ok(())
    }

    /// `‖self − other‖ / ‖other‖`.
    pub fn relative_l2_gap(&self, other: &Self) -> Result<f64> {
        self.same_grid(other)?;
        let num: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let den: f64 = other.values.iter().map(|z| z.norm_sqr()).sum();
        Ok((num / den.max(f64::MIN_POSITIVE)).sqrt())
    }

    pub fn max_abs_gap(&self, other: &Self) -> Result<f64> {
        self.same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            dims: self.dims.clone(),
            lengths: self.lengths.clone(),
            values: self.values.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.same_grid(other)?;
        Ok(Self {
            dims: self.dims.clone(),
            lengths: self.lengths.clone(),
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    /// Unnormalized forward DFT.
    pub fn fft(&self) -> Vec<Complex64> {
        let mut data = self.values.clone();
        transform(&self.dims, &mut data, false);
        data
    }

    /// Field from Fourier coefficients, normalized so `from_spectrum(fft(u)) = u`.
    pub fn from_spectrum(&self, mut spectrum: Vec<Complex64>) -> Self {
        transform(&self.dims, &mut spectrum, true);
        let scale = 1.0 / spectrum.len() as f64;
        for z in spectrum.iter_mut() {
            *z *= scale;
        }
        Self {
            dims: self.dims.clone(),
            lengths: self.lengths.clone(),
            values: spectrum,
        }
    }

    /// `F⁻¹[μ · F u]`.
    pub fn apply_multiplier(&self, multiplier: &[Complex64]) -> Result<Self> {
        if multiplier.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: multiplier.len(),
            });
        }
        let mut spec = self.fft();
        for (z, m) in spec.iter_mut().zip(multiplier) {
            *z *= m;
        }
        Ok(self.from_spectrum(spec))
    }

    pub fn apply_real_multiplier(&self, multiplier: &[f64]) -> Result<Self> {
        let m: Vec<Complex64> = multiplier.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.apply_multiplier(&m)
    }

    /// A 3-D field constant along a new last axis of `n` points and length `l`.
    pub fn extend_constant(&self, n: usize, l: f64) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.push(n);
        let mut lengths = self.lengths.clone();
        lengths.push(l);
        let values = self.values.iter().flat_map(|&z| std::iter::repeat_n(z, n)).collect();
        Self::new(dims, lengths, values)
    }

    /// The slice at index `k` of the last axis.
    pub fn slice_last(&self, k: usize) -> Result<Self> {
        let n = *self.dims.last().expect("non-empty dims");
        if self.ndim() < 2 || k >= n {
            return Err(Error::Grid("slice index out of range".into()));
        }
        let values = self.values.iter().skip(k).step_by(n).copied().collect();
        Self::new(
            self.dims[..self.ndim() - 1].to_vec(),
            self.lengths[..self.ndim() - 1].to_vec(),
            values,
        )
    }

    /// CSV rows `index, x1[, x2, x3], re, im`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let axes: Vec<String> = (1..=self.ndim()).map(|a| format!("x{a}")).collect();
        writeln!(out, "index,{},re,im", axes.join(","))?;
        let mut x = vec![0.0; self.ndim()];
        for (i, z) in self.values.iter().enumerate() {
            self.coords_into(i, &mut x);
            let coords: Vec<String> = x.iter().map(|v| format!("{v:.17e}")).collect();
            writeln!(out, "{i},{},{:.17e},{:.17e}", coords.join(","), z.re, z.im)?;
        }
        Ok(())
    }
}

pub fn wavenumbers(n: usize, length: f64) -> Vec<f64> {
    let base = 2.0 * PI / length;
    (0..n)
        .map(|j| {
            let s = if j <= n / 2 { j as i64 } else { j as i64 - n as i64 };
            base * s as f64
        })
        .collect()
}

fn transform(dims: &[usize], data: &mut [Complex64], inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let total = data.len();
    let mut stride = 1;
    for axis in (0..dims.len()).rev() {
        let n = dims[axis];
        let fft: std::sync::Arc<dyn Fft<f64>> = if inverse {
            planner.plan_fft_inverse(n)
        } else {
            planner.plan_fft_forward(n)
        };
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        let block = n * stride;
        for start in (0..total).step_by(block) {
            for offset in 0..stride {
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = data[start + offset + k * stride];
                }
                fft.process(&mut line);
                for (k, v) in line.iter().enumerate() {
                    data[start + offset + k * stride] = *v;
                }
            }
        }
        stride *= n;
    }
}

/// Fourier multiplier of an operator on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralOperator {
    pub symbol: Vec<Complex64>,
}

impl SpectralOperator {
    fn from_fn(field: &GridField, f: impl Fn(&[f64], &[bool]) -> Complex64) -> Self {
        let ks: Vec<Vec<f64>> = (0..field.ndim()).map(|a| field.wavenumbers(a)).collect();
        let mut idx = vec![0; field.ndim()];
        let mut k = vec![0.0; field.ndim()];
        let mut nyq = vec![false; field.ndim()];
        let symbol = (0..field.len())
            .map(|i| {
                field.multi_index(i, &mut idx);
                for a in 0..field.ndim() {
                    k[a] = ks[a][idx[a]];
                    nyq[a] = field.dims()[a] % 2 == 0 && idx[a] == field.dims()[a] / 2;
                }
                f(&k, &nyq)
            })
            .collect();
        Self { symbol }
    }

    /// `(1/i)∂/∂x_axis`: real symbol `k`, odd in `k`, zero at Nyquist.
    pub fn momentum(field: &GridField, axis: usize) -> Self {
        Self::from_fn(field, |k, nyq| Complex64::new(if nyq[axis] { 0.0 } else { k[axis] }, 0.0))
    }

    /// `∂/∂x_axis`: purely imaginary symbol `ik`.
    pub fn derivative(field: &GridField, axis: usize) -> Self {
        let p = Self::momentum(field, axis);
        Self {
            symbol: p.symbol.iter().map(|z| z * Complex64::new(0.0, 1.0)).collect(),
        }
    }

    /// `√(−Δ)`: symbol `|k|`.
    pub fn wave(field: &GridField) -> Self {
        Self::from_fn(field, |k, _| Complex64::new(k.iter().map(|v| v * v).sum::<f64>().sqrt(), 0.0))
    }

    /// `√(−Δ + a²)`.
    pub fn klein_gordon(field: &GridField, a: f64) -> Self {
        Self::from_fn(field, |k, _| {
            Complex64::new(k.iter().map(|v| v * v).sum::<f64>() + a * a, 0.0).sqrt()
        })
    }

    /// `√(−Δ − a²)`, imaginary where `|k| < a`.
    pub fn damped(field: &GridField, a: f64) -> Self {
        Self::from_fn(field, |k, _| {
            Complex64::new(k.iter().map(|v| v * v).sum::<f64>() - a * a, 0.0).sqrt()
        })
    }

    /// `cos(t·symbol)`.
    pub fn cos_multiplier(&self, t: f64) -> Vec<Complex64> {
        self.symbol.iter().map(|s| (s * t).cos()).collect()
    }
}

/// `u(t) = cos(t·symbol) f`, the exact solution of `u_tt = −symbol² u`,
/// `u(0) = f`, `u_t(0) = 0`.
pub fn spectral_wave_reference(f: &GridField, t: f64, symbol: &SpectralOperator) -> Result<GridField> {
    f.apply_multiplier(&symbol.cos_multiplier(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian2d() -> GridField {
        GridField::from_fn(vec![32, 24], vec![16.0, 12.0], |x| (-(x[0] * x[0] + 2.0 * x[1] * x[1]) / 2.0).exp()).unwrap()
    }

    #[test]
    fn fft_roundtrip() {
        for f in [
            gaussian2d(),
            GridField::from_fn(vec![8, 6, 10], vec![4.0, 3.0, 5.0], |x| (x[0] + 2.0 * x[1] - x[2]).sin()).unwrap(),
            GridField::from_fn(vec![17], vec![2.0], |x| x[0].cos()).unwrap(),
        ] {
            let back = f.from_spectrum(f.fft());
            assert!(back.relative_l2_gap(&f).unwrap() < 1e-12);
        }
    }

    #[test]
    fn derivative_symbol_is_imaginary_and_odd() {
        let f = GridField::constant(vec![8], vec![2.0 * PI], 0.0).unwrap();
        let d = SpectralOperator::derivative(&f, 0);
        for (j, s) in d.symbol.iter().enumerate() {
            assert_eq!(s.re, 0.0);
            let mirror = d.symbol[(8 - j) % 8];
            assert_eq!(s.im, -mirror.im);
        }
    }

    #[test]
    fn derivative_of_sine() {
        let f = GridField::from_fn(vec![16], vec![2.0 * PI], |x| (3.0 * x[0]).sin()).unwrap();
        let df = f.apply_multiplier(&SpectralOperator::derivative(&f, 0).symbol).unwrap();
        let exact = GridField::from_fn(vec![16], vec![2.0 * PI], |x| 3.0 * (3.0 * x[0]).cos()).unwrap();
        assert!(df.max_abs_gap(&exact).unwrap() < 1e-12);
    }

    #[test]
    fn reference_examples() {
        let f = gaussian2d();
        let sym = SpectralOperator::wave(&f);
        assert!(spectral_wave_reference(&f, 0.0, &sym).unwrap().max_abs_gap(&f).unwrap() < 1e-14);
        let l = 2.0 * PI;
        let mode = GridField::from_fn(vec![16, 16], vec![l, l], |x| (2.0 * x[0] + 3.0 * x[1]).cos()).unwrap();
        let u = spectral_wave_reference(&mode, 0.7, &SpectralOperator::wave(&mode)).unwrap();
        let expected = mode.map(|z| z * (0.7 * 13f64.sqrt()).cos());
        assert!(u.max_abs_gap(&expected).unwrap() < 1e-13);
        let c = GridField::constant(vec![8], vec![3.0], 2.0).unwrap();
        let kg = spectral_wave_reference(&c, 0.9, &SpectralOperator::klein_gordon(&c, 1.5)).unwrap();
        assert!((kg.values()[3].re - 2.0 * (1.35_f64).cos()).abs() < 1e-13);
        let dm = spectral_wave_reference(&c, 0.9, &SpectralOperator::damped(&c, 1.5)).unwrap();
        assert!((dm.values()[3].re - 2.0 * (1.35_f64).cosh()).abs() < 1e-12);
    }

    #[test]
    fn extend_and_slice() {
        let f = gaussian2d();
        let g = f.extend_constant(4, 2.0).unwrap();
        assert_eq!(g.slice_last(2).unwrap(), f);
        let i = g.nearest(&[0.0, 0.0, 0.0]);
        assert_eq!(g.coords(i), vec![0.0, 0.0, 0.0]);
    }
}
