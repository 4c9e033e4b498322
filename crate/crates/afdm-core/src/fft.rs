//! Cached FFT plans shared across transform calls.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

thread_local! {
    static PLANS: RefCell<(FftPlanner<f64>, HashMap<(usize, bool), Arc<dyn Fft<f64>>>)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn with_plan(len: usize, inverse: bool, data: &mut [Complex64]) {
    PLANS.with(|cell| {
        let (planner, cache) = &mut *cell.borrow_mut();
        let plan = cache.entry((len, inverse)).or_insert_with(|| {
            if inverse {
                planner.plan_fft_inverse(len)
            } else {
                planner.plan_fft_forward(len)
            }
        });
        plan.process(data);
    });
}

/// In-place unnormalized forward DFT.
pub fn fft_in_place(data: &mut [Complex64]) {
    with_plan(data.len(), false, data);
}

/// In-place unnormalized inverse DFT (no 1/N factor).
pub fn ifft_in_place(data: &mut [Complex64]) {
    with_plan(data.len(), true, data);
}
