//! Binary and CSV export of spectral fields.
//!
//! Binary layout, all little-endian: `dims: u64`, then `dims` grid sizes as
//! `u64`, then `box_length: f64`, then the coefficients as interleaved
//! `(re, im)` `f64` pairs in row-major order.

use std::io::{Read, Write};

use num_complex::Complex;

use super::field::SpectralField;
use crate::error::{Error, Result};
use crate::resonance::fmt17;
use crate::scalar::{norm3, Real};

pub fn write_field<T: Real, W: Write>(f: &SpectralField<T>, mut w: W) -> Result<()> {
    w.write_all(&(f.dims() as u64).to_le_bytes())?;
    for _ in 0..f.dims() {
        w.write_all(&(f.grid_size() as u64).to_le_bytes())?;
    }
    w.write_all(&f.box_length().as_f64().to_le_bytes())?;
    for c in f.coeffs() {
        w.write_all(&c.re.as_f64().to_le_bytes())?;
        w.write_all(&c.im.as_f64().to_le_bytes())?;
    }
    Ok(())
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

pub fn read_field<T: Real, R: Read>(mut r: R) -> Result<SpectralField<T>> {
    let dims = read_u64(&mut r)? as usize;
    if dims != 1 && dims != 3 {
        return Err(Error::Io(format!("bad header: dims = {dims}")));
    }
    let sizes: Vec<usize> = (0..dims).map(|_| read_u64(&mut r).map(|v| v as usize)).collect::<Result<_>>()?;
    if sizes.iter().any(|&s| s != sizes[0]) {
        return Err(Error::Io(format!("unequal axis sizes {sizes:?}")));
    }
    let n = sizes[0];
    let l = read_f64(&mut r)?;
    let len = n.checked_pow(dims as u32).ok_or_else(|| Error::Io("grid size overflows".into()))?;
    if len > 1 << 28 {
        return Err(Error::Io(format!("grid of {len} points is too large")));
    }
    let mut coeffs = Vec::with_capacity(len);
    for _ in 0..len {
        let re = read_f64(&mut r)?;
        let im = read_f64(&mut r)?;
        coeffs.push(Complex::new(T::lit(re), T::lit(im)));
    }
    SpectralField::from_coeffs(dims, n, T::lit(l), coeffs)
}

/// One line per coefficient: lattice indices, `|ξ|`, real and imaginary
/// parts and `|f̂|^2`.
pub fn spectrum_csv<T: Real>(f: &SpectralField<T>) -> String {
    let mut out = String::new();
    match f.dims() {
        1 => out.push_str("k0,xi_norm,re,im,abs2\n"),
        _ => out.push_str("k0,k1,k2,xi_norm,re,im,abs2\n"),
    }
    for (i, c) in f.coeffs().iter().enumerate() {
        let k = f.lattice(i);
        for v in &k[..f.dims()] {
            out.push_str(&format!("{v},"));
        }
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt17(norm3(&f.frequency(i)).as_f64()),
            fmt17(c.re.as_f64()),
            fmt17(c.im.as_f64()),
            fmt17(c.norm_sqr().as_f64())
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_round_trip() {
        let f = SpectralField::from_fn(3, 4, 2.5, |x| x[0] - 0.3 * x[2]).unwrap();
        let mut buf = Vec::new();
        write_field(&f, &mut buf).unwrap();
        assert_eq!(buf.len(), 8 * 5 + 16 * 64);
        let g: SpectralField<f64> = read_field(buf.as_slice()).unwrap();
        assert_eq!(f, g);
        assert!(read_field::<f64, _>(&buf[..20]).is_err());
    }

    #[test]
    fn csv_has_one_row_per_mode() {
        let f = SpectralField::from_fn(1, 8, 1.0, |x| x[0]).unwrap();
        assert_eq!(spectrum_csv(&f).lines().count(), 9);
    }
}
