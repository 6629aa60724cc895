//! Transform helpers.
//!
//! Convention: the forward DFT carries no scale and the inverse DFT carries
//! `1/N`, so `idft(dft(x)) == x` and `sum |x|^2 == sum |X|^2 / N`.

use crate::Complex;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

type PlanPair = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

thread_local! {
    static PLANS: RefCell<(FftPlanner<f64>, HashMap<usize, PlanPair>)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn plans(n: usize) -> PlanPair {
    PLANS.with(|p| {
        let mut p = p.borrow_mut();
        let (planner, cache) = &mut *p;
        cache
            .entry(n)
            .or_insert_with(|| (planner.plan_fft_forward(n), planner.plan_fft_inverse(n)))
            .clone()
    })
}

/// In-place unscaled forward DFT.
pub(crate) fn dft_in_place(buf: &mut [Complex]) {
    if buf.is_empty() {
        return;
    }
    plans(buf.len()).0.process(buf);
}

/// In-place inverse DFT including the `1/N` factor.
pub(crate) fn idft_in_place(buf: &mut [Complex]) {
    if buf.is_empty() {
        return;
    }
    plans(buf.len()).1.process(buf);
    let scale = 1.0 / buf.len() as f64;
    buf.iter_mut().for_each(|x| *x *= scale);
}

/// Unscaled forward DFT: `X_k = sum_n x_n e^{-j 2 pi k n / N}`.
pub fn dft(x: &[Complex]) -> Vec<Complex> {
    let mut buf = x.to_vec();
    dft_in_place(&mut buf);
    buf
}

/// Inverse DFT: `x_n = (1/N) sum_k X_k e^{j 2 pi k n / N}`.
pub fn idft(x: &[Complex]) -> Vec<Complex> {
    let mut buf = x.to_vec();
    idft_in_place(&mut buf);
    buf
}
