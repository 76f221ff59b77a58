//! Pseudo-products `T_m(f, g)` and the `ℓ^1` size of their symbols.
//!
//! On the lattice,
//!
//! ```text
//! T_m(f,g)^(ξ) = (2π)^{-d/2} (2π/L)^d Σ_η m(ξ, η) f̂(η) ĝ(ξ - η)
//! ```
//!
//! with `ξ - η` taken modulo the lattice, so `T_1(f, g) = f g` exactly.
//! Writing the symbol as a table `M(η, ζ) = m(η + ζ, η)` and expanding it
//! in characters, `M(η, ζ) = Σ μ(a, b) e^{i(η·a + ζ·b)}`, gives the exact
//! identity `T_m(f, g)(x) = Σ μ(a, b) f(x + a) g(x + b)`, hence
//! `‖T_m(f,g)‖_r <= Σ|μ| ‖f‖_p ‖g‖_q` whenever `1/p + 1/q = 1/r`.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use super::field::{fft_nd, signed_index, SpectralField};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A real symbol `m(ξ, η)`.
pub trait Symbol<T>: Sync {
    fn eval(&self, xi: &[T; 3], eta: &[T; 3]) -> T;
}

impl<T, F> Symbol<T> for F
where
    F: Fn(&[T; 3], &[T; 3]) -> T + Sync,
{
    fn eval(&self, xi: &[T; 3], eta: &[T; 3]) -> T {
        self(xi, eta)
    }
}

/// A symbol sampled on the product lattice: `values[j * len + l]` is
/// `m(ξ_{j+l}, η_j)` for input frequencies `η_j` and `ζ_l = ξ - η`.
#[derive(Clone, Debug)]
pub struct SymbolGrid<T> {
    pub dims: usize,
    pub n: usize,
    pub box_length: T,
    pub values: Vec<T>,
}

impl<T: Real> SymbolGrid<T> {
    pub fn sample<S: Symbol<T> + ?Sized>(m: &S, like: &SpectralField<T>) -> Result<Self> {
        let len = like.len();
        let mut values = vec![T::zero(); len * len];
        values.par_chunks_mut(len).enumerate().for_each(|(j, row)| {
            let eta = like.frequency(j);
            let kj = like.lattice(j);
            for (l, v) in row.iter_mut().enumerate() {
                let kl = like.lattice(l);
                let k = like.flat_of_lattice(&[kj[0] + kl[0], kj[1] + kl[1], kj[2] + kl[2]]);
                *v = m.eval(&like.frequency(k), &eta);
            }
        });
        let out = Self { dims: like.dims(), n: like.grid_size(), box_length: like.box_length(), values };
        if out.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter { name: "symbol", reason: "non-finite value on the lattice".into() });
        }
        Ok(out)
    }

    fn len(&self) -> usize {
        self.n.pow(self.dims as u32)
    }
}

fn conv_scale<T: Real>(f: &SpectralField<T>) -> T {
    (T::lit(2.0) * T::PI()).powf(-T::of_usize(f.dims()) / T::lit(2.0)) * f.dual_cell()
}

/// Direct lattice summation, `O(len^2)`.
pub fn pseudo_product<T: Real, S: Symbol<T> + ?Sized>(
    m: &S,
    f: &SpectralField<T>,
    g: &SpectralField<T>,
) -> Result<SpectralField<T>> {
    f.ensure_same_grid(g)?;
    let len = f.len();
    let c = conv_scale(f);
    let fc = f.coeffs();
    let gc = g.coeffs();
    let out: Vec<Complex<T>> = (0..len)
        .into_par_iter()
        .map(|k| {
            let xi = f.frequency(k);
            let kk = f.lattice(k);
            let mut acc = Complex::new(T::zero(), T::zero());
            for j in 0..len {
                if fc[j].re == T::zero() && fc[j].im == T::zero() {
                    continue;
                }
                let kj = f.lattice(j);
                let l = f.flat_of_lattice(&[kk[0] - kj[0], kk[1] - kj[1], kk[2] - kj[2]]);
                acc = acc + fc[j] * gc[l] * m.eval(&xi, &f.frequency(j));
            }
            acc * c
        })
        .collect();
    SpectralField::from_coeffs(f.dims(), f.grid_size(), f.box_length(), out)
}

/// Same as [`pseudo_product`] with a pre-sampled table.
pub fn pseudo_product_table<T: Real>(
    m: &SymbolGrid<T>,
    f: &SpectralField<T>,
    g: &SpectralField<T>,
) -> Result<SpectralField<T>> {
    f.ensure_same_grid(g)?;
    if m.dims != f.dims() || m.n != f.grid_size() || m.box_length != f.box_length() {
        return Err(Error::SizeMismatch("symbol table sampled on another grid".into()));
    }
    let len = f.len();
    let c = conv_scale(f);
    let fc = f.coeffs();
    let gc = g.coeffs();
    let out: Vec<Complex<T>> = (0..len)
        .into_par_iter()
        .map(|k| {
            let kk = f.lattice(k);
            let mut acc = Complex::new(T::zero(), T::zero());
            for j in 0..len {
                let kj = f.lattice(j);
                let l = f.flat_of_lattice(&[kk[0] - kj[0], kk[1] - kj[1], kk[2] - kj[2]]);
                acc = acc + fc[j] * gc[l] * m.values[j * len + l];
            }
            acc * c
        })
        .collect();
    SpectralField::from_coeffs(f.dims(), f.grid_size(), f.box_length(), out)
}

/// `(a(D) f) (b(D) g)`, the pseudo-product of `m = a(η) b(ξ - η)`.
pub fn separable_product<T: Real>(
    a: impl Fn(&[T; 3]) -> T,
    b: impl Fn(&[T; 3]) -> T,
    f: &SpectralField<T>,
    g: &SpectralField<T>,
) -> Result<SpectralField<T>> {
    f.ensure_same_grid(g)?;
    let fa = f.multiply(a).values();
    let gb = g.multiply(b).values();
    let prod = fa.iter().zip(&gb).map(|(x, y)| x * y).collect();
    SpectralField::from_values(f.dims(), f.grid_size(), f.box_length(), prod)
}

/// Symbol of translation type `m(ξ, η) = h(ξ - λη)` with integer `λ` and
/// `h` supported in `|s_a| <= support` on every axis.
///
/// `h` is evaluated at `ξ - λη` reduced to the fundamental lattice cell,
/// which is what makes the shift identity exact.
pub struct TranslationSymbol<T, H> {
    pub h: H,
    pub lambda: i64,
    pub support: T,
}

impl<T: Real, H: Fn(&[T; 3]) -> T + Sync> TranslationSymbol<T, H> {
    fn check(&self, f: &SpectralField<T>) -> Result<i64> {
        let nyq = f.dxi() * T::of_usize(f.grid_size() / 2);
        if !(self.support < nyq) {
            return Err(Error::InvalidParameter {
                name: "support",
                reason: format!("support {} must be below the Nyquist frequency {nyq}", self.support),
            });
        }
        Ok((self.support / f.dxi()).floor().to_i64().unwrap_or(0))
    }

    /// `h` at the reduced lattice point `s` (signed integer coordinates).
    fn h_at(&self, f: &SpectralField<T>, s: &[i64; 3]) -> T {
        let n = f.grid_size() as i64;
        let h = f.dxi();
        let red = s.map(|v| {
            let r = v.rem_euclid(n) as usize;
            h * T::lit(signed_index(r, n as usize) as f64)
        });
        (self.h)(&red)
    }

    /// Sparse evaluation of `T_m(f, g)` over the support of `h`.
    pub fn apply(&self, f: &SpectralField<T>, g: &SpectralField<T>) -> Result<SpectralField<T>> {
        f.ensure_same_grid(g)?;
        let w = self.check(f)?;
        let n = f.grid_size() as i64;
        let d = f.dims();
        let c = conv_scale(f);
        let fc = f.coeffs();
        let gc = g.coeffs();
        let window: Vec<i64> = (-w..=w).collect();
        let out: Vec<Complex<T>> = (0..f.len())
            .into_par_iter()
            .map(|k| {
                let kk = f.lattice(k);
                let mut acc = Complex::new(T::zero(), T::zero());
                // per axis: all (s, j) with λ j ≡ k - s (mod N)
                let mut per_axis: Vec<Vec<(i64, i64)>> = Vec::with_capacity(d);
                for a in 0..d {
                    let mut v = Vec::new();
                    for &s in &window {
                        for j in solve_congruence(self.lambda, kk[a] - s, n) {
                            v.push((s, j));
                        }
                    }
                    per_axis.push(v);
                }
                let mut counters = vec![0usize; d];
                if per_axis.iter().any(|v| v.is_empty()) {
                    return Complex::new(T::zero(), T::zero());
                }
                loop {
                    let mut s = [0i64; 3];
                    let mut j = [0i64; 3];
                    for a in 0..d {
                        let (sa, ja) = per_axis[a][counters[a]];
                        s[a] = sa;
                        j[a] = ja;
                    }
                    let hv = self.h_at(f, &s);
                    if hv != T::zero() {
                        let fj = f.flat_of_lattice(&j);
                        let gl = f.flat_of_lattice(&[kk[0] - j[0], kk[1] - j[1], kk[2] - j[2]]);
                        acc = acc + fc[fj] * gc[gl] * hv;
                    }
                    let mut a = 0;
                    loop {
                        if a == d {
                            return acc * c;
                        }
                        counters[a] += 1;
                        if counters[a] < per_axis[a].len() {
                            break;
                        }
                        counters[a] = 0;
                        a += 1;
                    }
                }
            })
            .collect();
        SpectralField::from_coeffs(f.dims(), f.grid_size(), f.box_length(), out)
    }

    /// The same symbol as a general [`Symbol`] (for table sampling).
    pub fn eval_reduced(&self, f: &SpectralField<T>, xi: &[T; 3], eta: &[T; 3]) -> T {
        let h = f.dxi();
        let s = [0, 1, 2].map(|a| ((xi[a] - T::lit(self.lambda as f64) * eta[a]) / h).round().to_i64().unwrap_or(0));
        self.h_at(f, &s)
    }

    /// Exact `Σ|μ|` of the symbol: the `ℓ^1` norm of the normalized DFT of
    /// `h` on the lattice.
    pub fn l1_norm(&self, like: &SpectralField<T>) -> Result<T> {
        self.check(like)?;
        let mut hv: Vec<Complex<T>> =
            (0..like.len()).map(|i| Complex::new(self.h_at(like, &like.lattice(i)), T::zero())).collect();
        fft_nd(&mut hv, &vec![like.grid_size(); like.dims()], false);
        let scale = T::of_usize(like.len()).recip();
        Ok(hv.iter().map(|v| v.norm()).fold(T::zero(), |a, b| a + b) * scale)
    }
}

/// Solutions `j` (signed, in `[-n/2, n/2)`) of `λ j ≡ m (mod n)`.
fn solve_congruence(lambda: i64, m: i64, n: i64) -> Vec<i64> {
    let lam = lambda.rem_euclid(n);
    let m = m.rem_euclid(n);
    let g = gcd(lam, n);
    if m % g != 0 {
        return Vec::new();
    }
    let (l2, m2, n2) = (lam / g, m / g, n / g);
    let j0 = if n2 == 1 { 0 } else { (m2 * mod_inverse(l2, n2)).rem_euclid(n2) };
    (0..g).map(|t| signed_index((j0 + t * n2) as usize, n as usize)).collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn mod_inverse(a: i64, n: i64) -> i64 {
    let (mut t, mut new_t, mut r, mut new_r) = (0i64, 1i64, n, a.rem_euclid(n));
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(n)
}

/// Best rational approximation `p/q` of `λ` with `q <= max_den`, and the
/// rounding error `|λ - p/q|`.
pub fn commensurate_lambda(lambda: f64, max_den: u64) -> (i64, u64, f64) {
    let mut best = (lambda.round() as i64, 1u64, (lambda - lambda.round()).abs());
    for q in 2..=max_den.max(1) {
        let p = (lambda * q as f64).round();
        let err = (lambda - p / q as f64).abs();
        if err < best.2 - 1e-15 {
            best = (p as i64, q, err);
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SymbolNorm {
    /// `Σ |μ(a, b)|`.
    pub norm: f64,
    /// Share of the norm carried by shifts with some coordinate beyond
    /// `3N/8` in modulus.
    pub boundary_fraction: f64,
    /// Set when `boundary_fraction > 1%`: the symbol is under-resolved.
    pub truncation_warning: bool,
}

/// `Σ|μ|` of a sampled symbol; the predicted operator-bound constant.
pub fn symbol_l1_norm<T: Real>(m: &SymbolGrid<T>) -> SymbolNorm {
    let len = m.len();
    let mut data: Vec<Complex<T>> = m.values.iter().map(|&v| Complex::new(v, T::zero())).collect();
    let shape = vec![m.n; 2 * m.dims];
    fft_nd(&mut data, &shape, false);
    let scale = T::of_usize(len * len).recip();
    let cut = (3 * m.n / 8) as i64;
    let mut total = 0.0;
    let mut edge = 0.0;
    for (i, v) in data.iter().enumerate() {
        let a = (v.norm() * scale).as_f64();
        total += a;
        let mut rest = i;
        let mut outer = false;
        for _ in 0..2 * m.dims {
            if signed_index(rest % m.n, m.n).abs() >= cut {
                outer = true;
            }
            rest /= m.n;
        }
        if outer {
            edge += a;
        }
    }
    let boundary_fraction = if total > 0.0 { edge / total } else { 0.0 };
    SymbolNorm { norm: total, boundary_fraction, truncation_warning: boundary_fraction > 0.01 }
}

/// `T_m(f, g)` evaluated through the shift identity with the coefficients
/// `μ` of the table. `O(len^3)`; for checking on small grids.
pub fn shift_representation<T: Real>(
    m: &SymbolGrid<T>,
    f: &SpectralField<T>,
    g: &SpectralField<T>,
) -> Result<Vec<Complex<T>>> {
    f.ensure_same_grid(g)?;
    let len = f.len();
    let mut mu: Vec<Complex<T>> = m.values.iter().map(|&v| Complex::new(v, T::zero())).collect();
    fft_nd(&mut mu, &vec![m.n; 2 * m.dims], false);
    let scale = T::of_usize(len * len).recip();
    let fv = f.values();
    let gv = g.values();
    let out = (0..len)
        .map(|x| {
            let px = f.multi_index(x);
            let mut acc = Complex::new(T::zero(), T::zero());
            for a in 0..len {
                let pa = f.multi_index(a);
                let xa = f.flat_index(&[px[0] + pa[0], px[1] + pa[1], px[2] + pa[2]]);
                for b in 0..len {
                    let pb = f.multi_index(b);
                    let xb = f.flat_index(&[px[0] + pb[0], px[1] + pb[1], px[2] + pb[2]]);
                    acc = acc + mu[a * len + b] * scale * fv[xa] * gv[xb];
                }
            }
            acc
        })
        .collect();
    Ok(out)
}
