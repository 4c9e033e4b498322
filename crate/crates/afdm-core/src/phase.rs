//! Phase evaluation on the unit circle, robust to very large chirp rates.

use num_complex::Complex64;
use std::f64::consts::TAU;

/// Largest magnitude at which `f64::fract` still resolves a fractional part.
const FRACT_LIMIT: f64 = 9.007_199_254_740_992e15; // 2^53

/// `exp(j*2*pi*turns)`.
///
/// For |turns| below 2^53 the argument is reduced modulo one full turn first,
/// which keeps the result accurate for moderately large chirp rates. Beyond
/// that the fractional part is below floating-point resolution; the angle is
/// handed to libm's sin/cos, whose extended-precision argument reduction
/// yields deterministic, effectively pseudo-random phases. Only statistical
/// properties of that regime are reproducible across platforms.
pub fn unit_phase(turns: f64) -> Complex64 {
    if turns.abs() < FRACT_LIMIT {
        let (s, c) = (TAU * turns.fract()).sin_cos();
        Complex64::new(c, s)
    } else {
        let (s, c) = (TAU * turns).sin_cos();
        Complex64::new(c, s)
    }
}

/// Exact phase for a rational number of turns `num/den * scale`.
///
/// Reduces `num * scale` modulo `den` in integer arithmetic before touching
/// floating point, so arbitrarily large `scale` keeps full accuracy.
pub fn unit_phase_rational(num: i64, den: i64, scale: u64) -> Complex64 {
    debug_assert!(den > 0);
    let den = den as i128;
    let m = (scale as i128) % den;
    let r = ((num as i128) * m).rem_euclid(den);
    let (s, c) = (TAU * (r as f64) / (den as f64)).sin_cos();
    Complex64::new(c, s)
}
