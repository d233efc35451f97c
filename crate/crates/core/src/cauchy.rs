//! Solid Cauchy transforms (inverses of d-bar and d) and spectral
//! derivative helpers.
//!
//! With d-bar = (d/dx1 + i d/dx2)/2 and d = (d/dx1 - i d/dx2)/2, the decaying
//! solution of d-bar u = f for compactly supported f is the convolution with
//! the Cauchy kernel 1/(pi z); for d u = f the kernel is 1/(pi conj(z)).
//!
//! The convolution is evaluated with the truncated-kernel spectral method:
//! the kernel is cut off at a radius R large enough to cover every
//! source-target displacement inside the window, and the cut-off kernel's
//! Fourier transform has the closed form
//!
//!   F[ (1/(pi z)) 1_{|z|<=R} ](xi) = -2i e^{-i arg xi} (1 - J0(|xi| R)) / |xi|
//!
//! (J0 the Bessel function; the d kernel is e^{+i arg xi} instead). Sampling
//! this entire symbol on a 3x zero-padded grid periodizes the compactly
//! supported truncated kernel without overlap, so the only error left is the
//! band-limiting of f: spectral accuracy for smooth decaying data, and the
//! free-space (non-periodic) far field comes out right. Symbols are cached
//! per lattice.

use num_complex::Complex64;
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::fft::{cfft2, icfft2};
use crate::field::ComplexField;
use crate::transform::{ordinary_field, ordinary_spectrum};

/// Cached truncated-kernel symbols on the 3x grid, keyed by
/// (n, h-bits, conjugated).
static SYMBOLS: Lazy<Mutex<HashMap<(usize, u64, bool), Arc<Vec<Complex64>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn kernel_symbol(n: usize, h: f64, conjugated: bool) -> Arc<Vec<Complex64>> {
    let key = (n, h.to_bits(), conjugated);
    if let Some(k) = SYMBOLS.lock().unwrap().get(&key) {
        return k.clone();
    }
    let big = 3 * n;
    let extent = n as f64 * h;
    // Window displacements have |w| < sqrt(2) L; aliasing images of the
    // truncated kernel sit at distance >= 3L - R. R = 1.5 L satisfies both.
    let r_cut = 1.5 * extent;
    let step = 2.0 * std::f64::consts::PI / (big as f64 * h);
    let half = (big / 2) as f64;
    let mut buf = vec![Complex64::new(0.0, 0.0); big * big];
    for l2 in 0..big {
        let xi2 = (l2 as f64 - half) * step;
        for l1 in 0..big {
            // The symbol extends continuously to 0 at the origin; the
            // unpaired Nyquist row/column is zeroed so the symbol stays
            // closed under xi -> -xi (conj(dbar_inv f) = del_inv(conj f)
            // then holds exactly).
            if l1 == 0 || l2 == 0 {
                continue;
            }
            let xi1 = (l1 as f64 - half) * step;
            let r = xi1.hypot(xi2);
            if r == 0.0 {
                continue;
            }
            let amp = 2.0 * (1.0 - libm::j0(r * r_cut)) / (r * r);
            let dir = if conjugated {
                Complex64::new(xi1, xi2)
            } else {
                Complex64::new(xi1, -xi2)
            };
            buf[l2 * big + l1] = Complex64::new(0.0, -amp) * dir;
        }
    }
    let arc = Arc::new(buf);
    SYMBOLS.lock().unwrap().insert(key, arc.clone());
    arc
}

fn cauchy_apply(f: &ComplexField, conjugated: bool) -> ComplexField {
    let zl = *f.lattice();
    let n = zl.n();
    let h = zl.h();
    let big = 3 * n;
    let symbol = kernel_symbol(n, h, conjugated);

    let mut buf = vec![Complex64::new(0.0, 0.0); big * big];
    let lo = (big - n) / 2;
    for j2 in 0..n {
        for j1 in 0..n {
            buf[(lo + j2) * big + lo + j1] = f.samples()[zl.idx(j1, j2)];
        }
    }
    cfft2(&mut buf, big, h);
    for (v, s) in buf.iter_mut().zip(symbol.iter()) {
        *v *= s;
    }
    icfft2(&mut buf, big, h);

    let mut samples = Vec::with_capacity(n * n);
    for j2 in 0..n {
        for j1 in 0..n {
            samples.push(buf[(lo + j2) * big + lo + j1]);
        }
    }
    ComplexField::from_samples(zl, samples).expect("non-finite after convolution")
}

/// Decaying solution of d-bar u = f (convolution with 1/(pi z)).
pub fn dbar_inv(f: &ComplexField) -> ComplexField {
    cauchy_apply(f, false)
}

/// Decaying solution of d u = f (convolution with 1/(pi conj(z))).
pub fn del_inv(f: &ComplexField) -> ComplexField {
    cauchy_apply(f, true)
}

/// Apply a Fourier multiplier sym(xi1, xi2) on the ordinary frequency grid
/// of `f`'s lattice.
pub fn fourier_multiplier(f: &ComplexField, sym: impl Fn(f64, f64) -> Complex64) -> ComplexField {
    let zl = *f.lattice();
    let n = zl.n();
    let mut spec = ordinary_spectrum(f);
    for l2 in 0..n {
        let xi2 = zl.freq(l2);
        for l1 in 0..n {
            spec[l2 * n + l1] *= sym(zl.freq(l1), xi2);
        }
    }
    ordinary_field(spec, &zl)
}

/// Spectral d-bar derivative, symbol i (xi1 + i xi2) / 2.
pub fn spectral_dbar(f: &ComplexField) -> ComplexField {
    fourier_multiplier(f, |xi1, xi2| {
        Complex64::new(0.0, 0.5) * Complex64::new(xi1, xi2)
    })
}

/// Spectral d derivative, symbol i (xi1 - i xi2) / 2.
pub fn spectral_del(f: &ComplexField) -> ComplexField {
    fourier_multiplier(f, |xi1, xi2| {
        Complex64::new(0.0, 0.5) * Complex64::new(xi1, -xi2)
    })
}
