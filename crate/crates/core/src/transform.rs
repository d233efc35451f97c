//! The paper-convention Fourier transform and its inverse.
//!
//! With e_k(z) = exp(i (z k + conj(z k))) = exp(2 i (x1 k1 - x2 k2)), the
//! transform is
//!
//!   qhat(k) = (i/pi) * integral e_{-k}(z) q(z) dz,
//!
//! i.e. an ordinary transform evaluated at xi = (2 k1, -2 k2), scaled by
//! i/pi. With this convention ||qhat||_{L2(dk)} = ||q||_{L2(dz)} exactly in
//! the continuum, and the inverse is
//!
//!   q(z) = (-i/pi) * integral e_k(z) qhat(k) dk.
//!
//! Both directions are realized by one padded discrete transform plus index
//! remapping; this requires 2*dk to be an integer multiple of the padded
//! grid's frequency spacing.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fft::{cfft2, icfft2};
use crate::field::{ComplexField, SpectralField};
use crate::lattice::{KLattice, Lattice};

/// Maximum zero-padding factor probed when matching grid spacings.
const MAX_PAD: usize = 64;

/// Resolve 2*dk = stride * (2*pi / (pad * L)) with integer stride and
/// power-of-two pad, or report the spacings as non-commensurate.
fn commensurate(dk: f64, extent: f64) -> Result<(usize, usize)> {
    // ratio = dk * L / pi; stride / pad in lowest power-of-two terms.
    let ratio = dk * extent / PI;
    let mut pad = 1usize;
    while pad <= MAX_PAD {
        let stride = ratio * pad as f64;
        let rounded = stride.round();
        if rounded >= 1.0 && (stride - rounded).abs() < 1e-9 * pad as f64 {
            return Ok((rounded as usize, pad));
        }
        pad *= 2;
    }
    Err(Error::NonCommensurate(format!(
        "2*dk / freq-step = {ratio} is not an integer over pads 1..{MAX_PAD}"
    )))
}

/// Slot of the induced frequency xi = (2 k1, -2 k2) on a `big`-point grid.
/// The extreme node may wrap onto the unpaired Nyquist slot, which is the
/// same discrete frequency.
#[inline]
fn slot(big: usize, stride: usize, a: usize, half_m: usize, flip: bool) -> usize {
    let off = stride as isize * (a as isize - half_m as isize);
    let l = big as isize / 2 + if flip { -off } else { off };
    l.rem_euclid(big as isize) as usize
}

/// Forward transform of the paper convention, sampled on `kl`.
pub fn dft_paper(q: &ComplexField, kl: &KLattice) -> Result<SpectralField> {
    let zl = q.lattice();
    kl.check_nyquist(zl)?;
    let (stride, pad) = commensurate(kl.dk(), zl.extent())?;
    let n = zl.n();
    let big = n * pad;
    let m = kl.m();
    if stride * m > 2 * big {
        return Err(Error::NyquistViolation(format!(
            "k-window needs {} slots, padded grid has {}",
            stride * m,
            big
        )));
    }

    // Zero-pad to the center of the big grid and transform.
    let mut buf = vec![Complex64::new(0.0, 0.0); big * big];
    let lo = (big - n) / 2;
    for j2 in 0..n {
        for j1 in 0..n {
            buf[(lo + j2) * big + lo + j1] = q.samples()[zl.idx(j1, j2)];
        }
    }
    cfft2(&mut buf, big, zl.h());

    let scale = Complex64::new(0.0, 1.0 / PI);
    let mut samples = Vec::with_capacity(m * m);
    let mut window_mass = 0.0;
    for b in 0..m {
        let l2 = slot(big, stride, b, m / 2, true);
        for a in 0..m {
            let l1 = slot(big, stride, a, m / 2, false);
            let v = buf[l2 * big + l1];
            window_mass += v.norm_sqr();
            samples.push(scale * v);
        }
    }

    // Linear Plancherel deficit: compare the trapezoid k-norm against the
    // physical-space norm.
    let khat_l2 = kl.dk() * window_mass.sqrt() / PI;
    let q_l2 = q.l2_norm();
    let deficit = if q_l2 > 0.0 {
        (khat_l2 / q_l2 - 1.0).abs()
    } else {
        0.0
    };
    SpectralField::new(*kl, samples, deficit)
}

/// Inverse of [`dft_paper`]: trapezoid discretization of
/// q(z) = (-i/pi) * integral e_k(z) s(k) dk on the target lattice.
pub fn idft_paper(s: &SpectralField, zl: &Lattice) -> Result<ComplexField> {
    let kl = s.klattice();
    kl.check_nyquist(zl)?;
    let (stride, pad) = commensurate(kl.dk(), zl.extent())?;
    let n = zl.n();
    let big = n * pad;
    let m = kl.m();
    if stride * m > 2 * big {
        return Err(Error::NyquistViolation(format!(
            "k-window needs {} slots, padded grid has {}",
            stride * m,
            big
        )));
    }

    let mut buf = vec![Complex64::new(0.0, 0.0); big * big];
    for b in 0..m {
        let l2 = slot(big, stride, b, m / 2, true);
        for a in 0..m {
            let l1 = slot(big, stride, a, m / 2, false);
            buf[l2 * big + l1] += s.samples()[kl.idx(a, b)];
        }
    }
    icfft2(&mut buf, big, zl.h());

    // (-i/pi) * dk^2 * sum_k e_k(z) s(k) = (-i/pi) * dk^2 * (big*h)^2 * icfft2.
    let amp = kl.dk().powi(2) * (big as f64 * zl.h()).powi(2) / PI;
    let scale = Complex64::new(0.0, -amp);
    let lo = (big - n) / 2;
    let mut samples = Vec::with_capacity(n * n);
    for j2 in 0..n {
        for j1 in 0..n {
            samples.push(scale * buf[(lo + j2) * big + lo + j1]);
        }
    }
    ComplexField::from_samples(*zl, samples)
}

/// Pointwise multiplication by the unimodular character e_{sign*k}.
pub fn ek_modulate(f: &ComplexField, k: Complex64, sign: i8) -> ComplexField {
    let s = if sign >= 0 { 1.0 } else { -1.0 };
    let (k1, k2) = (k.re, k.im);
    let zl = *f.lattice();
    let n = zl.n();
    // Separable: e_k(z) = exp(2 i x1 k1) * exp(-2 i x2 k2).
    let row: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, 2.0 * s * zl.point(j, 0).re * k1))
        .collect();
    let col: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(1.0, -2.0 * s * zl.point(0, j).im * k2))
        .collect();
    let mut out = f.clone();
    for j2 in 0..n {
        let c = col[j2];
        for j1 in 0..n {
            out.samples_mut()[zl.idx(j1, j2)] *= c * row[j1];
        }
    }
    out
}

/// Ordinary centered spectrum of a field (continuum normalization); the
/// result lives on the frequency grid of `f`'s lattice.
pub(crate) fn ordinary_spectrum(f: &ComplexField) -> Vec<Complex64> {
    let mut buf = f.samples().to_vec();
    cfft2(&mut buf, f.lattice().n(), f.lattice().h());
    buf
}

/// Inverse of [`ordinary_spectrum`].
pub(crate) fn ordinary_field(spec: Vec<Complex64>, zl: &Lattice) -> ComplexField {
    let mut buf = spec;
    icfft2(&mut buf, zl.n(), zl.h());
    ComplexField::from_samples(*zl, buf).expect("non-finite after inverse transform")
}
