//! Complex-valued fields sampled on the lattices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{KLattice, Lattice};

/// Complex function sampled on a physical lattice, row-major (j2 outer).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    lattice: Lattice,
    samples: Vec<Complex64>,
}

impl ComplexField {
    pub fn zeros(lattice: Lattice) -> Self {
        Self {
            lattice,
            samples: vec![Complex64::new(0.0, 0.0); lattice.n() * lattice.n()],
        }
    }

    /// Sample a closure at every node. Panics on non-finite values.
    pub fn from_fn(lattice: Lattice, f: impl Fn(Complex64) -> Complex64) -> Self {
        let n = lattice.n();
        let mut samples = Vec::with_capacity(n * n);
        for j2 in 0..n {
            for j1 in 0..n {
                let v = f(lattice.point(j1, j2));
                assert!(v.re.is_finite() && v.im.is_finite(), "non-finite sample");
                samples.push(v);
            }
        }
        Self { lattice, samples }
    }

    pub fn from_samples(lattice: Lattice, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != lattice.n() * lattice.n() {
            return Err(Error::InvalidParameter(format!(
                "expected {} samples, got {}",
                lattice.n() * lattice.n(),
                samples.len()
            )));
        }
        if samples
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::InvalidParameter("non-finite sample".into()));
        }
        Ok(Self { lattice, samples })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn get(&self, j1: usize, j2: usize) -> Complex64 {
        self.samples[self.lattice.idx(j1, j2)]
    }

    pub fn check_same_lattice(&self, other: &ComplexField) -> Result<()> {
        if self.lattice != other.lattice {
            return Err(Error::LatticeMismatch(format!(
                "{:?} vs {:?}",
                self.lattice, other.lattice
            )));
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            lattice: self.lattice,
            samples: self.samples.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination; panics on lattice mismatch (programming error
    /// at this level; the public operations validate).
    pub fn zip(&self, other: &ComplexField, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.lattice, other.lattice, "lattice mismatch");
        Self {
            lattice: self.lattice,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| c * v)
    }

    pub fn add(&self, other: &ComplexField) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ComplexField) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &ComplexField) -> Self {
        self.zip(other, |a, b| a * b)
    }

    /// Lattice L2 norm (trapezoid rule), h * sqrt(sum |f|^2).
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.samples.iter().map(|v| v.norm_sqr()).sum();
        self.lattice.h() * s.sqrt()
    }

    /// Fraction of squared mass outside the centered `side x side` window.
    pub fn tail_fraction(&self, side: usize) -> f64 {
        let n = self.lattice.n();
        let lo = (n - side) / 2;
        let hi = lo + side;
        let mut inner = 0.0;
        let mut total = 0.0;
        for j2 in 0..n {
            for j1 in 0..n {
                let m = self.samples[self.lattice.idx(j1, j2)].norm_sqr();
                total += m;
                if (lo..hi).contains(&j1) && (lo..hi).contains(&j2) {
                    inner += m;
                }
            }
        }
        if total == 0.0 {
            0.0
        } else {
            (total - inner) / total
        }
    }

    /// Smallest centered power-of-two side (>= 16, <= n) outside which every
    /// sample is below `threshold` times the peak magnitude. Used to restrict
    /// solves to the numerically active region.
    pub fn active_side(&self, threshold: f64) -> usize {
        let n = self.lattice.n();
        let peak = self.samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 16.min(n);
        }
        let cut = threshold * peak;
        let mut side = 16.min(n);
        while side < n {
            let lo = (n - side) / 2;
            let hi = lo + side;
            let mut ok = true;
            'scan: for j2 in 0..n {
                for j1 in 0..n {
                    if (lo..hi).contains(&j1) && (lo..hi).contains(&j2) {
                        continue;
                    }
                    if self.samples[self.lattice.idx(j1, j2)].norm() > cut {
                        ok = false;
                        break 'scan;
                    }
                }
            }
            if ok {
                return side;
            }
            side *= 2;
        }
        n
    }

    /// Centered `side x side` sub-field (same spacing).
    pub fn restrict_center(&self, side: usize) -> Result<ComplexField> {
        let n = self.lattice.n();
        if side > n || !side.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "restriction side {side} invalid for n = {n}"
            )));
        }
        let sub = Lattice::new(side, self.lattice.h())?;
        let lo = (n - side) / 2;
        let mut samples = Vec::with_capacity(side * side);
        for j2 in 0..side {
            for j1 in 0..side {
                samples.push(self.samples[self.lattice.idx(lo + j1, lo + j2)]);
            }
        }
        Ok(ComplexField {
            lattice: sub,
            samples,
        })
    }

    /// Embed into the center of a larger lattice with the same spacing,
    /// zero outside.
    pub fn embed_center(&self, big: Lattice) -> Result<ComplexField> {
        let n = self.lattice.n();
        let nn = big.n();
        if nn < n || (big.h() - self.lattice.h()).abs() > 1e-14 * self.lattice.h() {
            return Err(Error::InvalidParameter(
                "embedding target must be larger with equal spacing".into(),
            ));
        }
        let lo = (nn - n) / 2;
        let mut out = ComplexField::zeros(big);
        for j2 in 0..n {
            for j1 in 0..n {
                out.samples[big.idx(lo + j1, lo + j2)] = self.samples[self.lattice.idx(j1, j2)];
            }
        }
        Ok(out)
    }
}

/// Samples of the paper-convention transform q-hat on a k-lattice.
#[derive(Debug, Clone)]
pub struct SpectralField {
    klattice: KLattice,
    samples: Vec<Complex64>,
    /// Relative linear Plancherel deficit |1 - ||qhat||_2 / ||q||_2| recorded
    /// at construction (truncation of the spectrum to the k-window).
    plancherel_error: f64,
}

impl SpectralField {
    pub fn new(klattice: KLattice, samples: Vec<Complex64>, plancherel_error: f64) -> Result<Self> {
        if samples.len() != klattice.m() * klattice.m() {
            return Err(Error::InvalidParameter(format!(
                "expected {} samples, got {}",
                klattice.m() * klattice.m(),
                samples.len()
            )));
        }
        if samples
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::InvalidParameter("non-finite sample".into()));
        }
        Ok(Self {
            klattice,
            samples,
            plancherel_error,
        })
    }

    pub fn klattice(&self) -> &KLattice {
        &self.klattice
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn get(&self, l1: usize, l2: usize) -> Complex64 {
        self.samples[self.klattice.idx(l1, l2)]
    }

    pub fn plancherel_error(&self) -> f64 {
        self.plancherel_error
    }

    /// Trapezoid L2 norm over the k-lattice, dk * sqrt(sum |s|^2).
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.samples.iter().map(|v| v.norm_sqr()).sum();
        self.klattice.dk() * s.sqrt()
    }

    /// View the samples as a field on the k-lattice reinterpreted as a
    /// physical lattice (role swap used by the inverse transform and by
    /// maximal-function bounds in the k variable).
    pub fn as_field(&self) -> Result<ComplexField> {
        ComplexField::from_samples(self.klattice.as_lattice()?, self.samples.clone())
    }
}
