//! Internal 2D FFT helpers with a process-wide plan cache.
//!
//! `cfft2`/`icfft2` implement the centered continuum-normalized transform
//! pair
//!
//!   G[l] = h^2 * sum_j f[j] exp(-i (x_j . xi_l)),   x_j = (j - n/2) h,
//!   f[j] = (n h)^-2 * sum_l G[l] exp(+i (x_j . xi_l)),
//!
//! with xi_l = (l - n/2) * 2*pi/(n h), realized exactly for any even n by
//! index rotations around the plain DFT.

use num_complex::Complex64;
use once_cell::sync::Lazy;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

static PLANNER: Lazy<Mutex<FftPlanner<f64>>> = Lazy::new(|| Mutex::new(FftPlanner::new()));
static PLANS: Lazy<Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut plans = PLANS.lock().unwrap();
    plans
        .entry((n, inverse))
        .or_insert_with(|| {
            let mut planner = PLANNER.lock().unwrap();
            if inverse {
                planner.plan_fft_inverse(n)
            } else {
                planner.plan_fft_forward(n)
            }
        })
        .clone()
}

fn transpose(buf: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in 0..i {
            buf.swap(i * n + j, j * n + i);
        }
    }
}

/// Unnormalized plain 2D DFT in place (row-major n x n).
pub(crate) fn fft2(buf: &mut [Complex64], n: usize, inverse: bool) {
    debug_assert_eq!(buf.len(), n * n);
    let fft = plan(n, inverse);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    for r in 0..n {
        fft.process_with_scratch(&mut buf[r * n..(r + 1) * n], &mut scratch);
    }
    transpose(buf, n);
    for r in 0..n {
        fft.process_with_scratch(&mut buf[r * n..(r + 1) * n], &mut scratch);
    }
    transpose(buf, n);
}

/// Rotate both axes by n/2 in place (fftshift; its own inverse for even n).
pub(crate) fn shift2(buf: &mut [Complex64], n: usize) {
    let half = n / 2;
    // Swap quadrants: (a b / c d) -> (d c / b a).
    for j2 in 0..half {
        for j1 in 0..n {
            let src = j2 * n + j1;
            let dst = (j2 + half) * n + (j1 + half) % n;
            buf.swap(src, dst);
        }
    }
}

/// Centered forward transform; `buf` holds samples on the x-grid in, spectrum
/// on the centered xi-grid out.
pub(crate) fn cfft2(buf: &mut [Complex64], n: usize, h: f64) {
    shift2(buf, n);
    fft2(buf, n, false);
    shift2(buf, n);
    let scale = h * h;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

/// Exact inverse of [`cfft2`].
pub(crate) fn icfft2(buf: &mut [Complex64], n: usize, h: f64) {
    shift2(buf, n);
    fft2(buf, n, true);
    shift2(buf, n);
    let scale = 1.0 / (n as f64 * h).powi(2);
    for v in buf.iter_mut() {
        *v *= scale;
    }
}
