//! Square lattices for physical space and for the spectral parameter.
//!
//! The physical lattice discretizes R^2 ~ C with origin-centered nodes
//! z_{j1,j2} = (j1 - n/2) h + i (j2 - n/2) h, stored row-major with j2 as the
//! outer index. The spectral lattice holds the parameter k of the scattering
//! transform; the induced ordinary frequency is xi = (2 k1, -2 k2).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Origin-centered square lattice in physical space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    n: usize,
    h: f64,
}

impl Lattice {
    /// `n` must be a power of two >= 8, `h` positive.
    pub fn new(n: usize, h: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidLattice(format!(
                "n = {n} must be a power of two >= 8"
            )));
        }
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidLattice(format!("h = {h} must be positive")));
        }
        Ok(Self { n, h })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Side length L = n*h.
    pub fn extent(&self) -> f64 {
        self.n as f64 * self.h
    }

    /// Node z_{j1,j2}; the point z = 0 is the node (n/2, n/2).
    pub fn point(&self, j1: usize, j2: usize) -> Complex64 {
        let c = (self.n / 2) as f64;
        Complex64::new((j1 as f64 - c) * self.h, (j2 as f64 - c) * self.h)
    }

    /// Spacing of the ordinary frequency grid, 2*pi/L.
    pub fn freq_step(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.extent()
    }

    /// Centered frequency coordinate of slot `l` along one axis.
    pub fn freq(&self, l: usize) -> f64 {
        (l as f64 - (self.n / 2) as f64) * self.freq_step()
    }

    /// Largest frequency magnitude per axis (the unpaired Nyquist slot).
    pub fn nyquist(&self) -> f64 {
        std::f64::consts::PI / self.h
    }

    pub fn idx(&self, j1: usize, j2: usize) -> usize {
        j2 * self.n + j1
    }
}

/// Origin-centered square lattice of spectral parameters k.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KLattice {
    m: usize,
    dk: f64,
}

impl KLattice {
    pub fn new(m: usize, dk: f64) -> Result<Self> {
        if m < 2 || m % 2 != 0 {
            return Err(Error::InvalidLattice(format!("m = {m} must be even >= 2")));
        }
        if !(dk > 0.0) || !dk.is_finite() {
            return Err(Error::InvalidLattice(format!("dk = {dk} must be positive")));
        }
        Ok(Self { m, dk })
    }

    /// Spectral lattice dual to a physical lattice: same node count, dk = pi/L.
    /// This is the self-dual choice for which the forward and inverse
    /// transforms share one code path exactly.
    pub fn dual_to(zl: &Lattice) -> Self {
        Self {
            m: zl.n(),
            dk: std::f64::consts::PI / zl.extent(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dk(&self) -> f64 {
        self.dk
    }

    /// Side length of the covered k-square.
    pub fn extent(&self) -> f64 {
        self.m as f64 * self.dk
    }

    pub fn point(&self, l1: usize, l2: usize) -> Complex64 {
        let c = (self.m / 2) as f64;
        Complex64::new((l1 as f64 - c) * self.dk, (l2 as f64 - c) * self.dk)
    }

    pub fn idx(&self, l1: usize, l2: usize) -> usize {
        l2 * self.m + l1
    }

    /// Check that every induced frequency xi = (2 k1, -2 k2) is representable
    /// on `zl` (the extreme slot may land exactly on the unpaired Nyquist
    /// line, which the discrete transform represents).
    pub fn check_nyquist(&self, zl: &Lattice) -> Result<()> {
        let reach = self.m as f64 * self.dk; // 2 * (m/2) * dk
        if reach > zl.nyquist() * (1.0 + 1e-12) {
            return Err(Error::NyquistViolation(format!(
                "2*(m/2)*dk = {reach:.6} exceeds pi/h = {:.6}",
                zl.nyquist()
            )));
        }
        Ok(())
    }

    /// Reinterpret the k-lattice as a physical lattice (the involution swaps
    /// the roles of z and k). Requires m to be a power of two.
    pub fn as_lattice(&self) -> Result<Lattice> {
        Lattice::new(self.m, self.dk)
    }
}
