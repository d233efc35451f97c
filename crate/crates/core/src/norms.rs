//! Lattice norms: Lebesgue, homogeneous Sobolev, Besov, and the sharp
//! Littlewood-Paley projections they are built from.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::ComplexField;
use crate::lattice::Lattice;
use crate::transform::{ordinary_field, ordinary_spectrum};

/// Trapezoid-rule L^p lattice norm; `p = f64::INFINITY` gives the sup norm.
pub fn norm(f: &ComplexField, p: f64) -> f64 {
    assert!(p >= 1.0, "p = {p} out of range");
    if p.is_infinite() {
        return f.samples().iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    let h2 = f.lattice().h() * f.lattice().h();
    let s: f64 = f.samples().iter().map(|v| v.norm().powf(p)).sum();
    (h2 * s).powf(1.0 / p)
}

/// Homogeneous Sobolev norm via the frequency-weighted L² sum
/// ((2 pi)^-2 sum |xi|^{2s} |F f|^2 (d xi)^2)^{1/2}. The xi = 0 mode is
/// excluded for s < 0 (the mean is not controlled by homogeneous norms);
/// sobolev_norm(f, 0) coincides with norm(f, 2) to roundoff by the discrete
/// Parseval identity.
pub fn sobolev_norm(f: &ComplexField, s: f64) -> f64 {
    let zl = f.lattice();
    let n = zl.n();
    let spec = ordinary_spectrum(f);
    let mut acc = 0.0;
    for l2 in 0..n {
        let xi2 = zl.freq(l2);
        for l1 in 0..n {
            let xi1 = zl.freq(l1);
            let r2 = xi1 * xi1 + xi2 * xi2;
            if r2 == 0.0 {
                if s == 0.0 {
                    acc += spec[l2 * n + l1].norm_sqr();
                }
                continue;
            }
            acc += r2.powf(s) * spec[l2 * n + l1].norm_sqr();
        }
    }
    acc.sqrt() / zl.extent()
}

/// Dyadic shell index of a nonzero frequency: the unique j with
/// 2^{j-1} < |xi| <= 2^j.
fn shell_of(r: f64) -> i32 {
    debug_assert!(r > 0.0);
    let j = r.log2().ceil() as i32;
    // Guard against roundoff at exact powers of two.
    if 2f64.powi(j - 1) >= r {
        j - 1
    } else {
        j
    }
}

/// Range of shell indices that meet the lattice's nonzero frequencies:
/// the lowest shell containing 2*pi/L through the shell containing the
/// corner frequency sqrt(2)*pi/h.
pub fn shell_range(zl: &Lattice) -> (i32, i32) {
    let lo = shell_of(zl.freq_step());
    let hi = shell_of(std::f64::consts::SQRT_2 * zl.nyquist());
    (lo, hi)
}

/// Sharp Littlewood-Paley projection onto the dyadic shell
/// 2^{j-1} < |xi| <= 2^j. The shells are disjoint and, together with the
/// zero mode, partition the resolvable band.
pub fn lp_project(f: &ComplexField, j: i32) -> Result<ComplexField> {
    let zl = *f.lattice();
    let (lo, hi) = shell_range(&zl);
    if j < lo || j > hi {
        return Err(Error::OutOfBand { j });
    }
    let n = zl.n();
    let mut spec = ordinary_spectrum(f);
    for l2 in 0..n {
        let xi2 = zl.freq(l2);
        for l1 in 0..n {
            let xi1 = zl.freq(l1);
            let r = (xi1 * xi1 + xi2 * xi2).sqrt();
            let keep = r > 0.0 && shell_of(r) == j;
            if !keep {
                spec[l2 * n + l1] = Complex64::new(0.0, 0.0);
            }
        }
    }
    Ok(ordinary_field(spec, &zl))
}

/// Zero-frequency (mean) component as a constant field.
pub fn zero_mode(f: &ComplexField) -> ComplexField {
    let n = f.lattice().n();
    let mean = f.samples().iter().sum::<Complex64>() / (n * n) as f64;
    ComplexField::from_fn(*f.lattice(), |_| mean)
}

/// Homogeneous Besov norm sup_j 2^{j s} ||P_j f||_p over the resolvable
/// shells (third index q = infinity throughout).
pub fn besov_norm(f: &ComplexField, s: f64, p: f64) -> f64 {
    let (lo, hi) = shell_range(f.lattice());
    let mut best = 0.0f64;
    for j in lo..=hi {
        let pj = lp_project(f, j).expect("in-band shell");
        best = best.max(2f64.powi(j).powf(s) * norm(&pj, p));
    }
    best
}
