//! Complex-operation accounting and a counting radix-2 FFT.
//!
//! The counted FFT exists so measured multiplication totals line up with the
//! textbook `(N/2) log2 N` budget; production transforms go through the
//! cached planner in `fft` instead.

use crate::error::Error;
use crate::Result;
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Tally of complex arithmetic performed by an algorithm.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCount {
    pub mults: u64,
    pub adds: u64,
}

impl OpCount {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn mult(&mut self, n: u64) {
        self.mults += n;
    }

    pub fn add(&mut self, n: u64) {
        self.adds += n;
    }
}

impl std::ops::Add for OpCount {
    type Output = OpCount;

    fn add(self, rhs: OpCount) -> OpCount {
        OpCount {
            mults: self.mults + rhs.mults,
            adds: self.adds + rhs.adds,
        }
    }
}

impl std::ops::AddAssign for OpCount {
    fn add_assign(&mut self, rhs: OpCount) {
        self.mults += rhs.mults;
        self.adds += rhs.adds;
    }
}

/// In-place radix-2 DIT FFT that tallies one complex multiplication and two
/// complex additions per butterfly, for `(N/2) log2 N` total multiplications.
pub fn counted_fft(data: &mut [Complex64], inverse: bool, ops: &mut OpCount) -> Result<()> {
    let n = data.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    // bit-reversal permutation
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let ang = sign * TAU / len as f64;
        for start in (0..n).step_by(len) {
            for k in 0..len / 2 {
                let (s, c) = (ang * k as f64).sin_cos();
                let w = Complex64::new(c, s);
                let u = data[start + k];
                let v = data[start + k + len / 2] * w;
                data[start + k] = u + v;
                data[start + k + len / 2] = u - v;
                ops.mult(1);
                ops.add(2);
            }
        }
        len <<= 1;
    }
    Ok(())
}
