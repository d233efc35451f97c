//! Discrete Hardy-Littlewood maximal function over dyadic radii.
//!
//! M f(x) = max over r in {h, 2h, 4h, ..., 2L} of the average of |f| over
//! the lattice nodes with |y - x| < r (strict, so the radius-h ball is the
//! node itself and Mf >= |f| pointwise; the top radius covers the whole
//! window from any node, matching the zero extension of f). Each radius is
//! one FFT convolution with a disc indicator on a doubled grid (no
//! wrap-around), normalized by the full disc point count so that balls
//! reaching past the window still average against the zero extension;
//! indicator spectra are cached per lattice.

use num_complex::Complex64;
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::fft::fft2;
use crate::field::ComplexField;

/// Cached normalized disc-indicator spectra (one per dyadic radius), keyed
/// by (n, h-bits).
static DISCS: Lazy<Mutex<HashMap<(usize, u64), Arc<Vec<Vec<Complex64>>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn disc_spectra(n: usize, h: f64) -> Arc<Vec<Vec<Complex64>>> {
    let key = (n, h.to_bits());
    if let Some(d) = DISCS.lock().unwrap().get(&key) {
        return d.clone();
    }
    let big = 2 * n;
    let mut spectra = Vec::new();
    let mut t = 0u32;
    // Radii h * 2^t up to 2L = 2*n*h, enough to cover the window diagonal
    // from any node.
    while 1usize << t <= 2 * n {
        let r = 1i64 << t;
        let r2 = 1u64 << (2 * t); // (r/h)^2, exact in index units
                                  // Full disc point count over Z^2: balls may extend past the window,
                                  // where the zero extension contributes nothing to the sum but still
                                  // counts toward the average.
        let mut count = 0u64;
        for s2 in -r + 1..r {
            let rem = r2 - (s2 * s2) as u64;
            let mut w = (rem as f64).sqrt() as i64;
            while (w * w) as u64 >= rem {
                w -= 1;
            }
            count += (2 * w + 1) as u64;
        }
        let mut buf = vec![Complex64::new(0.0, 0.0); big * big];
        for d2 in 0..big {
            let s2 = if d2 < n {
                d2 as i64
            } else {
                d2 as i64 - big as i64
            };
            for d1 in 0..big {
                let s1 = if d1 < n {
                    d1 as i64
                } else {
                    d1 as i64 - big as i64
                };
                if ((s1 * s1 + s2 * s2) as u64) < r2 {
                    buf[d2 * big + d1] = Complex64::new(1.0, 0.0);
                }
            }
        }
        let w = 1.0 / count as f64;
        for v in buf.iter_mut() {
            *v *= w;
        }
        fft2(&mut buf, big, false);
        spectra.push(buf);
        t += 1;
    }
    let arc = Arc::new(spectra);
    DISCS.lock().unwrap().insert(key, arc.clone());
    arc
}

/// Discrete Hardy-Littlewood maximal function; the result is real-valued
/// (imaginary parts zero).
pub fn maximal_function(f: &ComplexField) -> ComplexField {
    let zl = *f.lattice();
    let n = zl.n();
    let big = 2 * n;
    let spectra = disc_spectra(n, zl.h());

    let mut fabs = vec![Complex64::new(0.0, 0.0); big * big];
    for j2 in 0..n {
        for j1 in 0..n {
            fabs[j2 * big + j1] = Complex64::new(f.samples()[zl.idx(j1, j2)].norm(), 0.0);
        }
    }
    fft2(&mut fabs, big, false);

    let mut out = vec![0.0f64; n * n];
    let norm = 1.0 / (big * big) as f64;
    for disc in spectra.iter() {
        let mut buf: Vec<Complex64> = fabs.iter().zip(disc).map(|(a, b)| a * b).collect();
        fft2(&mut buf, big, true);
        for j2 in 0..n {
            for j1 in 0..n {
                // Convolution averages |f| over the ball centered at the node
                // (f extended by zero outside the window); clamp tiny negative
                // roundoff.
                let avg = (buf[j2 * big + j1].re * norm).max(0.0);
                let o = &mut out[zl.idx(j1, j2)];
                if avg > *o {
                    *o = avg;
                }
            }
        }
    }
    ComplexField::from_samples(
        zl,
        out.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
    )
    .expect("non-finite maximal value")
}
