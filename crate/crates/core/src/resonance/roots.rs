//! Bracketing scan for the zeros of a scalar function on an interval where
//! it may be undefined at some points.

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root<T> {
    pub x: T,
    pub value: T,
    /// Found as a local minimum of `|f|` without a sign change.
    pub tangent: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootScan<T> {
    pub roots: Vec<Root<T>>,
    /// Last point where the function was defined, and its value there.
    pub end: Option<(T, T)>,
}

#[derive(Clone, Copy, Debug)]
pub struct ScanOptions<T> {
    pub step: T,
    /// Target bracket width for bisection.
    pub x_tol: T,
    /// Local minima of `|f|` below this are reported as tangent roots.
    pub tangent_tol: T,
}

/// Scans `(lo, hi]` on a uniform grid, bisects every sign change down to
/// `x_tol`, polishes with one Newton step, and looks for tangent zeros at
/// grid-level local minima of `|f|`.
pub fn scan_roots<T, F>(f: F, lo: T, hi: T, opts: &ScanOptions<T>) -> RootScan<T>
where
    T: Real,
    F: Fn(T) -> Option<T>,
{
    let n = ((hi - lo) / opts.step).ceil().to_usize().unwrap_or(0).max(1);
    let h = (hi - lo) / T::of_usize(n);
    // the first node sits just off `lo` so that open intervals work
    let mut xs = Vec::with_capacity(n + 1);
    xs.push(lo + h * T::lit(1e-3));
    for i in 1..=n {
        xs.push(lo + h * T::of_usize(i));
    }
    let vals: Vec<Option<T>> = xs.iter().map(|&x| f(x).filter(|v| v.is_finite())).collect();

    let mut roots = Vec::new();
    for i in 0..xs.len() - 1 {
        let (Some(a), Some(b)) = (vals[i], vals[i + 1]) else {
            continue;
        };
        if a == T::zero() {
            roots.push(Root { x: xs[i], value: a, tangent: false });
            continue;
        }
        if a.signum() != b.signum() && b != T::zero() {
            if let Some(r) = bisect(&f, xs[i], xs[i + 1], a, opts.x_tol) {
                roots.push(r);
            }
        }
    }
    if let Some(Some(v)) = vals.last() {
        if *v == T::zero() {
            roots.push(Root { x: *xs.last().unwrap(), value: *v, tangent: false });
        }
    }

    for i in 1..xs.len().saturating_sub(1) {
        let (Some(a), Some(b), Some(c)) = (vals[i - 1], vals[i], vals[i + 1]) else {
            continue;
        };
        let same_sign = a.signum() == b.signum() && b.signum() == c.signum();
        if same_sign && b.abs() < a.abs() && b.abs() <= c.abs() {
            let (x, v) = golden_min_abs(&f, xs[i - 1], xs[i + 1]);
            if v.abs() < opts.tangent_tol {
                roots.push(Root { x, value: v, tangent: true });
            }
        }
    }
    roots.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());

    let end = xs.iter().zip(&vals).rev().find_map(|(&x, v)| v.map(|v| (x, v)));
    RootScan { roots, end }
}

/// Bisection on a sign change followed by a single guarded Newton step.
pub fn bisect<T, F>(f: &F, mut a: T, mut b: T, mut fa: T, x_tol: T) -> Option<Root<T>>
where
    T: Real,
    F: Fn(T) -> Option<T>,
{
    let two = T::lit(2.0);
    for _ in 0..200 {
        if (b - a).abs() <= x_tol {
            break;
        }
        let mid = (a + b) / two;
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid)?;
        if fm == T::zero() {
            return Some(Root { x: mid, value: fm, tangent: false });
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    let mut x = (a + b) / two;
    let mut fx = f(x)?;
    // Newton polish with a central difference slope
    let h = x.abs().max(T::one()) * T::lit(1e-7);
    if let (Some(fp), Some(fm)) = (f(x + h), f(x - h)) {
        let slope = (fp - fm) / (two * h);
        if slope != T::zero() && slope.is_finite() {
            let xn = x - fx / slope;
            if let Some(fxn) = f(xn) {
                if fxn.abs() < fx.abs() && (xn - x).abs() <= (b - a).abs().max(x_tol) * T::lit(10.0) {
                    x = xn;
                    fx = fxn;
                }
            }
        }
    }
    Some(Root { x, value: fx, tangent: false })
}

/// Golden-section minimization of `|f|` on `[a, b]`.
pub fn golden_min_abs<T, F>(f: &F, mut a: T, mut b: T) -> (T, T)
where
    T: Real,
    F: Fn(T) -> Option<T>,
{
    let g = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let eval = |x: T| f(x).map(|v| v.abs()).unwrap_or(T::infinity());
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = eval(c);
    let mut fd = eval(d);
    for _ in 0..200 {
        if (b - a).abs() <= T::epsilon() * (a.abs() + b.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = eval(d);
        }
    }
    let x = (a + b) / T::lit(2.0);
    (x, f(x).unwrap_or(T::infinity()))
}

/// Result of a log-log fit of `|f(root ± h)|` against `h`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct OrderFit {
    pub order: u32,
    pub slope: f64,
    /// Slope within 0.2 of an integer.
    pub ok: bool,
}

/// Estimates the order of the zero of `f` at `root` from offsets in
/// `[h_max / 100, h_max]` on each side that stays inside `(lo, hi)`, with
/// `h_max = min(0.1, half the distance to the domain edge)`.
pub fn estimate_zero_order<T, F>(f: F, root: T, lo: T, hi: T) -> OrderFit
where
    T: Real,
    F: Fn(T) -> Option<T>,
{
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for side in [-1.0, 1.0] {
        let room = if side < 0.0 { root - lo } else { hi - root };
        let h_max = T::lit(0.1).min(room * T::lit(0.5));
        if !(h_max > T::zero()) || !h_max.is_finite() {
            continue;
        }
        let h_min = h_max * T::lit(1e-2);
        let k = 12;
        for i in 0..k {
            let t = T::of_usize(i) / T::of_usize(k - 1);
            let h = h_min * (h_max / h_min).powf(t);
            if let Some(v) = f(root + T::lit(side) * h) {
                if v != T::zero() && v.is_finite() {
                    xs.push(h.as_f64().ln());
                    ys.push(v.abs().as_f64().ln());
                }
            }
        }
    }
    if xs.len() < 2 {
        return OrderFit { order: 1, slope: f64::NAN, ok: false };
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let order = slope.round().max(1.0);
    OrderFit { order: order as u32, slope, ok: (slope - order).abs() <= 0.2 }
}
