//! Reference potentials and seeded random ensembles used by the test and
//! audit suites.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::ComplexField;
use crate::lattice::Lattice;
use crate::transform::{ordinary_field, ordinary_spectrum};

/// Default seed for every randomized ensemble, so reports are reproducible.
pub const ENSEMBLE_SEED: u64 = 0x5EED;

/// Named shapes of the standard 5-potential ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Gaussian,
    ShiftedGaussian,
    ComplexPhaseGaussian,
    TwoBump,
    Ring,
}

impl Shape {
    pub const ALL: [Shape; 5] = [
        Shape::Gaussian,
        Shape::ShiftedGaussian,
        Shape::ComplexPhaseGaussian,
        Shape::TwoBump,
        Shape::Ring,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Shape::Gaussian => "gaussian",
            Shape::ShiftedGaussian => "shifted_gaussian",
            Shape::ComplexPhaseGaussian => "complex_phase_gaussian",
            Shape::TwoBump => "two_bump",
            Shape::Ring => "ring",
        }
    }
}

/// Sample one of the named shapes at the given amplitude.
pub fn shape(zl: Lattice, kind: Shape, amplitude: f64) -> ComplexField {
    match kind {
        Shape::Gaussian => ComplexField::from_fn(zl, |z| {
            Complex64::new(amplitude * (-z.norm_sqr()).exp(), 0.0)
        }),
        Shape::ShiftedGaussian => {
            let z0 = Complex64::new(1.0, 0.5);
            ComplexField::from_fn(zl, |z| {
                Complex64::new(amplitude * (-(z - z0).norm_sqr()).exp(), 0.0)
            })
        }
        Shape::ComplexPhaseGaussian => ComplexField::from_fn(zl, |z| {
            Complex64::from_polar(amplitude * (-z.norm_sqr()).exp(), 1.5 * z.re - 0.7 * z.im)
        }),
        Shape::TwoBump => {
            let a = Complex64::new(1.5, 0.0);
            ComplexField::from_fn(zl, |z| {
                Complex64::new(
                    amplitude * ((-(z - a).norm_sqr()).exp() + 0.8 * (-(z + a).norm_sqr()).exp()),
                    0.0,
                )
            })
        }
        Shape::Ring => ComplexField::from_fn(zl, |z| {
            let d = z.norm() - 2.0;
            Complex64::new(amplitude * (-d * d).exp(), 0.0)
        }),
    }
}

/// Seeded random band-limited field: independent complex Gaussian-ish
/// coefficients on frequencies |xi| <= cutoff, tapered and localized by a
/// Gaussian window, normalized to the requested L2 norm.
pub fn random_band_limited(
    zl: Lattice,
    cutoff: f64,
    l2_target: f64,
    rng: &mut ChaCha8Rng,
) -> ComplexField {
    let n = zl.n();
    let mut spec = vec![Complex64::new(0.0, 0.0); n * n];
    for l2 in 0..n {
        let xi2 = zl.freq(l2);
        for l1 in 0..n {
            let xi1 = zl.freq(l1);
            let r2 = xi1 * xi1 + xi2 * xi2;
            if r2 <= cutoff * cutoff {
                // Sum of uniforms is close enough to Gaussian for ensembles.
                let re: f64 = (0..4).map(|_| rng.gen_range(-0.5..0.5)).sum();
                let im: f64 = (0..4).map(|_| rng.gen_range(-0.5..0.5)).sum();
                spec[l2 * n + l1] = Complex64::new(re, im) * (-r2 / (cutoff * cutoff)).exp();
            }
        }
    }
    let raw = ordinary_field(spec, &zl);
    // Localize: random fields must decay toward the window boundary for the
    // free-space operators to make sense.
    let window = ComplexField::from_fn(zl, |z| {
        Complex64::new(
            (-(z.norm_sqr()) / (0.02 * zl.extent() * zl.extent())).exp(),
            0.0,
        )
    });
    let localized = raw.mul(&window);
    let norm = localized.l2_norm();
    if norm == 0.0 {
        localized
    } else {
        localized.scale(Complex64::new(l2_target / norm, 0.0))
    }
}

/// Fresh deterministic RNG for an ensemble.
pub fn ensemble_rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(ENSEMBLE_SEED)
}

/// Convenience: `count` random band-limited fields from the standard seed.
pub fn random_ensemble(
    zl: Lattice,
    cutoff: f64,
    l2_target: f64,
    count: usize,
) -> Vec<ComplexField> {
    let mut rng = ensemble_rng();
    (0..count)
        .map(|_| random_band_limited(zl, cutoff, l2_target, &mut rng))
        .collect()
}

/// Spectrum helper re-exported for audits that need q-hat in the ordinary
/// convention.
pub fn ordinary_hat(f: &ComplexField) -> Vec<Complex64> {
    ordinary_spectrum(f)
}
