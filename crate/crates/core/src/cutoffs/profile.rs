//! One-dimensional smooth profiles built from `exp(-1/t)`.

use crate::scalar::Real;

/// `exp(-1/t)` for `t > 0`, `0` otherwise. Smooth on the real line.
pub fn flat_exp<T: Real>(t: T) -> T {
    if t > T::zero() {
        (-t.recip()).exp()
    } else {
        T::zero()
    }
}

/// The mollifier `exp(-1/(1 - x^2))` on `(-1, 1)`, zero outside. Not
/// normalized: `bump(0) = 1/e`.
pub fn bump<T: Real>(x: T) -> T {
    let s = T::one() - x * x;
    if s > T::zero() {
        (-s.recip()).exp()
    } else {
        T::zero()
    }
}

/// Smooth step: `0` for `t <= 0`, `1` for `t >= 1`, increasing in between.
pub fn smooth_step<T: Real>(t: T) -> T {
    if t <= T::zero() {
        return T::zero();
    }
    if t >= T::one() {
        return T::one();
    }
    let a = flat_exp(t);
    let b = flat_exp(T::one() - t);
    a / (a + b)
}

/// Even plateau: `1` on `|x| <= 1/2`, `0` on `|x| >= 1`.
pub fn plateau<T: Real>(x: T) -> T {
    smooth_step(T::lit(2.0) * (T::one() - x.abs()))
}

/// Transition from `0` on `(-∞, -1]` to `1` on `[1, ∞)`.
pub fn step_pm1<T: Real>(x: T) -> T {
    smooth_step((x + T::one()) / T::lit(2.0))
}
