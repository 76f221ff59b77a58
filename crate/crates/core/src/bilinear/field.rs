//! Periodic grid functions stored through their Fourier coefficients.
//!
//! On a box of side `L` with `N` points per axis, the coefficients are
//!
//! ```text
//! f̂(ξ_k) = (2π)^{-d/2} (L/N)^d Σ_x f(x) e^{-i ξ_k·x},   ξ_k = (2π/L) k,
//! ```
//!
//! a Riemann sum of the continuous transform. The inverse is the matching
//! sum over the dual lattice with cell `(2π/L)^d`, and Parseval reads
//! `Σ |f|^2 (L/N)^d = Σ |f̂|^2 (2π/L)^d`.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// In-place FFT along every axis of a row-major array of the given shape.
/// Unnormalized in both directions.
pub fn fft_nd<T: Real>(data: &mut [Complex<T>], shape: &[usize], inverse: bool) {
    let total: usize = shape.iter().product();
    assert_eq!(data.len(), total, "shape does not match data");
    let mut planner = FftPlanner::<T>::new();
    let mut stride = total;
    for &n in shape {
        stride /= n;
        if n == 1 {
            continue;
        }
        let fft = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
        if stride == 1 {
            fft.process(data);
            continue;
        }
        let mut line = vec![Complex::new(T::zero(), T::zero()); n];
        let block = n * stride;
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for (i, v) in line.iter_mut().enumerate() {
                    *v = data[base + i * stride];
                }
                fft.process(&mut line);
                for (i, v) in line.iter().enumerate() {
                    data[base + i * stride] = *v;
                }
            }
        }
    }
}

/// Signed lattice index of position `k` in an FFT of length `n`.
pub fn signed_index(k: usize, n: usize) -> i64 {
    if k < n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField<T = f64> {
    dims: usize,
    n: usize,
    box_length: T,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> SpectralField<T> {
    fn check(dims: usize, n: usize, box_length: T) -> Result<()> {
        if dims != 1 && dims != 3 {
            return Err(Error::InvalidParameter { name: "dims", reason: format!("must be 1 or 3, got {dims}") });
        }
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        if dims == 3 && n > 64 {
            return Err(Error::InvalidParameter {
                name: "grid_size",
                reason: format!("3-D grids are limited to 64 points per axis, got {n}"),
            });
        }
        if !(box_length > T::zero() && box_length.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "box_length",
                reason: format!("must be positive and finite, got {box_length}"),
            });
        }
        Ok(())
    }

    pub fn zeros(dims: usize, n: usize, box_length: T) -> Result<Self> {
        Self::check(dims, n, box_length)?;
        Ok(Self { dims, n, box_length, coeffs: vec![Complex::new(T::zero(), T::zero()); n.pow(dims as u32)] })
    }

    pub fn from_coeffs(dims: usize, n: usize, box_length: T, coeffs: Vec<Complex<T>>) -> Result<Self> {
        Self::check(dims, n, box_length)?;
        if coeffs.len() != n.pow(dims as u32) {
            return Err(Error::SizeMismatch(format!("{} coefficients for a {dims}-D grid of size {n}", coeffs.len())));
        }
        Ok(Self { dims, n, box_length, coeffs })
    }

    /// Forward transform of grid values (row-major, `x_i = i L / N`).
    pub fn from_values(dims: usize, n: usize, box_length: T, mut values: Vec<Complex<T>>) -> Result<Self> {
        Self::check(dims, n, box_length)?;
        if values.len() != n.pow(dims as u32) {
            return Err(Error::SizeMismatch(format!("{} values for a {dims}-D grid of size {n}", values.len())));
        }
        fft_nd(&mut values, &vec![n; dims], false);
        let scale = (T::lit(2.0) * T::PI()).powf(-T::of_usize(dims) / T::lit(2.0))
            * (box_length / T::of_usize(n)).powi(dims as i32);
        for v in values.iter_mut() {
            *v = *v * scale;
        }
        Self::from_coeffs(dims, n, box_length, values)
    }

    /// Samples a real function of the position.
    pub fn from_fn(dims: usize, n: usize, box_length: T, f: impl Fn(&[T; 3]) -> T) -> Result<Self> {
        Self::check(dims, n, box_length)?;
        let probe = Self::zeros(dims, n, box_length)?;
        let values = (0..probe.len()).map(|i| Complex::new(f(&probe.position(i)), T::zero())).collect();
        Self::from_values(dims, n, box_length, values)
    }

    /// Inverse transform: grid values.
    pub fn values(&self) -> Vec<Complex<T>> {
        let mut v = self.coeffs.clone();
        fft_nd(&mut v, &vec![self.n; self.dims], true);
        let scale =
            (T::lit(2.0) * T::PI()).powf(-T::of_usize(self.dims) / T::lit(2.0)) * self.dxi().powi(self.dims as i32);
        for x in v.iter_mut() {
            *x = *x * scale;
        }
        v
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn grid_size(&self) -> usize {
        self.n
    }

    pub fn box_length(&self) -> T {
        self.box_length
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex<T>> {
        self.coeffs
    }

    /// Lattice spacing `2π / L`.
    pub fn dxi(&self) -> T {
        T::lit(2.0) * T::PI() / self.box_length
    }

    pub fn dx(&self) -> T {
        self.box_length / T::of_usize(self.n)
    }

    /// Volume of one spatial cell.
    pub fn cell(&self) -> T {
        self.dx().powi(self.dims as i32)
    }

    /// Volume of one frequency cell.
    pub fn dual_cell(&self) -> T {
        self.dxi().powi(self.dims as i32)
    }

    /// Per-axis positions in the flat array (unused axes are 0).
    pub fn multi_index(&self, flat: usize) -> [usize; 3] {
        let mut out = [0; 3];
        let mut rest = flat;
        for a in (0..self.dims).rev() {
            out[a] = rest % self.n;
            rest /= self.n;
        }
        out
    }

    pub fn flat_index(&self, idx: &[usize; 3]) -> usize {
        (0..self.dims).fold(0, |acc, a| acc * self.n + idx[a] % self.n)
    }

    /// Signed integer lattice coordinates of a coefficient.
    pub fn lattice(&self, flat: usize) -> [i64; 3] {
        let m = self.multi_index(flat);
        let mut out = [0; 3];
        for a in 0..self.dims {
            out[a] = signed_index(m[a], self.n);
        }
        out
    }

    /// Flat position of signed lattice coordinates (taken modulo `N`).
    pub fn flat_of_lattice(&self, k: &[i64; 3]) -> usize {
        let n = self.n as i64;
        let m = [0, 1, 2].map(|a| k[a].rem_euclid(n) as usize);
        self.flat_index(&m)
    }

    pub fn frequency(&self, flat: usize) -> [T; 3] {
        let k = self.lattice(flat);
        let h = self.dxi();
        k.map(|v| h * T::lit(v as f64))
    }

    pub fn position(&self, flat: usize) -> [T; 3] {
        let m = self.multi_index(flat);
        let h = self.dx();
        m.map(|v| h * T::of_usize(v))
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.dims == other.dims && self.n == other.n && self.box_length == other.box_length
    }

    pub fn ensure_same_grid(&self, other: &Self) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(Error::SizeMismatch(format!(
                "grids differ: ({}, {}, {}) vs ({}, {}, {})",
                self.dims, self.n, self.box_length, other.dims, other.n, other.box_length
            )))
        }
    }

    /// Applies a Fourier multiplier `m(ξ)`.
    pub fn multiply(&self, m: impl Fn(&[T; 3]) -> T) -> Self {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            *c = *c * m(&self.frequency(i));
        }
        out
    }

    /// `Σ |f̂|^2 (2π/L)^d`.
    pub fn spectral_l2_squared(&self) -> T {
        self.coeffs.iter().map(|c| c.norm_sqr()).fold(T::zero(), |a, b| a + b) * self.dual_cell()
    }

    /// `L^p` norm of the grid values with the spatial cell as weight;
    /// `p = ∞` gives the max modulus.
    pub fn lp_norm(&self, p: f64) -> T {
        lp_norm(&self.values(), p, self.cell())
    }

    pub fn scale(&self, a: Complex<T>) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = *c * a;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ensure_same_grid(other)?;
        let mut out = self.clone();
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a = *a + *b;
        }
        Ok(out)
    }
}

/// Discrete `L^p` norm `(Σ |v|^p cell)^{1/p}`.
pub fn lp_norm<T: Real>(values: &[Complex<T>], p: f64, cell: T) -> T {
    if p.is_infinite() {
        return values.iter().map(|v| v.norm()).fold(T::zero(), T::max);
    }
    let pt = T::lit(p);
    let s = values.iter().map(|v| v.norm().powf(pt)).fold(T::zero(), |a, b| a + b);
    (s * cell).powf(pt.recip())
}
