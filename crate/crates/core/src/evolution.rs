//! Time evolution of the defocusing DSII system, two ways.
//!
//! The system is
//!
//!   i q_t + 2(dbar^2 + del^2) q + q (g + conj g) = 0,   dbar g = -4 del |q|^2,
//!
//! so g + conj(g) = -8 L(D)|q|^2 with the zero-order multiplier
//! L(xi) = (xi1^2 - xi2^2)/|xi|^2 (zero mode 0). The linear group is
//! U(t) = e^{2it(del^2 + dbar^2)}, the multiplier e^{-it(xi1^2 - xi2^2)}.
//!
//! The IST path scatters the data forward, multiplies by the exact phase
//! e^{2i(k^2 + conj(k)^2)t} = e^{4i(k1^2 - k2^2)t}, and inverts; it is exact
//! in time, with all error coming from the transforms. The direct path is a
//! Strang split-step integrator whose nonlinear substep is a pointwise
//! unimodular phase, so it conserves mass to roundoff and serves as an
//! independent referee.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::cauchy::fourier_multiplier;
use crate::error::{Error, Result};
use crate::field::ComplexField;
use crate::lattice::{KLattice, Lattice};
use crate::norms::norm;
use crate::scattering::{forward, inverse, ScatteringData};
use crate::solver::SolverConfig;
use crate::transform::{dft_paper, idft_paper};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Strang,
}

#[derive(Debug, Clone, Copy)]
pub struct EvolutionConfig {
    pub t_final: f64,
    /// Direct-solver time step.
    pub dt: f64,
    pub scheme: Scheme,
    /// k-window for the IST path.
    pub kl: KLattice,
    pub cfg: SolverConfig,
}

impl EvolutionConfig {
    /// Check positivity and the phase-resolution (CFL-type) bound
    /// dt * max|xi1^2 - xi2^2| <= pi/4 on the target lattice.
    pub fn validate(&self, zl: &Lattice) -> Result<()> {
        if !(self.dt > 0.0) || !self.t_final.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "dt = {}, t_final = {} invalid",
                self.dt, self.t_final
            )));
        }
        let phase = self.dt * zl.nyquist() * zl.nyquist();
        if phase > PI / 4.0 {
            return Err(Error::CflViolation(phase));
        }
        self.cfg.validate()
    }
}

/// Diagnostics of one evolution run: time series of mass and of the
/// accumulated L4 spacetime integral, plus sweep diagnostics on the IST path.
#[derive(Debug, Clone, Serialize)]
pub struct EvolutionReport {
    pub method: String,
    pub times: Vec<f64>,
    pub mass: Vec<f64>,
    /// Running integral of ||q||_{L4}^4 (trapezoid in time).
    pub l4_accum: Vec<f64>,
    pub max_residual: f64,
    pub holes: usize,
}

/// The linear group U(t) = e^{2it(del^2 + dbar^2)}: with
/// del^2 + dbar^2 = -(xi1^2 - xi2^2)/2 on the Fourier side, the multiplier
/// is e^{-it(xi1^2 - xi2^2)}.
pub fn linear_propagate(q0: &ComplexField, t: f64) -> ComplexField {
    fourier_multiplier(q0, |x1, x2| {
        Complex64::from_polar(1.0, -t * (x1 * x1 - x2 * x2))
    })
}

/// The zero-order multiplier L(D) = (D1^2 - D2^2)/(D1^2 + D2^2), zero
/// mode 0.
fn l_multiplier(f: &ComplexField) -> ComplexField {
    fourier_multiplier(f, |x1, x2| {
        let r2 = x1 * x1 + x2 * x2;
        if r2 == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new((x1 * x1 - x2 * x2) / r2, 0.0)
        }
    })
}

/// Nonlinear substep over time tau: q <- q * e^{-8i tau L(D)|q|^2}. The
/// multiplier is real, so |q| is pointwise invariant.
fn nonlinear_substep(q: &ComplexField, tau: f64) -> ComplexField {
    let intensity = q.map(|v| Complex64::new(v.norm_sqr(), 0.0));
    let phi = l_multiplier(&intensity);
    q.zip(&phi, |v, p| {
        v * Complex64::from_polar(1.0, -8.0 * tau * p.re)
    })
}

/// Strang split-step solve of DSII up to time `t`.
pub fn evolve_direct(
    q0: &ComplexField,
    t: f64,
    ec: &EvolutionConfig,
) -> Result<(ComplexField, EvolutionReport)> {
    let zl = q0.lattice();
    ec.validate(zl)?;
    if t < 0.0 {
        return Err(Error::InvalidParameter("negative evolution time".into()));
    }
    let steps = (t / ec.dt).ceil() as usize;
    let mut times = vec![0.0];
    let mut mass = vec![q0.l2_norm()];
    let mut l4_accum = vec![0.0];
    let mut q = q0.clone();
    if steps == 0 {
        return Ok((
            q,
            EvolutionReport {
                method: "direct".into(),
                times,
                mass,
                l4_accum,
                max_residual: 0.0,
                holes: 0,
            },
        ));
    }
    let tau = t / steps as f64;
    let mut l4_prev = norm(&q, 4.0).powi(4);
    let mut accum = 0.0;
    for step in 1..=steps {
        q = nonlinear_substep(&q, tau / 2.0);
        q = linear_propagate(&q, tau);
        q = nonlinear_substep(&q, tau / 2.0);
        let l4 = norm(&q, 4.0).powi(4);
        accum += tau * (l4_prev + l4) / 2.0;
        l4_prev = l4;
        times.push(step as f64 * tau);
        mass.push(q.l2_norm());
        l4_accum.push(accum);
    }
    Ok((
        q,
        EvolutionReport {
            method: "direct".into(),
            times,
            mass,
            l4_accum,
            max_residual: 0.0,
            holes: 0,
        },
    ))
}

/// Exact-in-time IST evolution: forward scattering, phase multiplication by
/// e^{4i(k1^2 - k2^2)t}, inverse scattering.
pub fn evolve_ist(
    q0: &ComplexField,
    t: f64,
    ec: &EvolutionConfig,
) -> Result<(ComplexField, EvolutionReport)> {
    let zl = q0.lattice();
    ec.validate(zl)?;
    let s0 = forward(q0, &ec.kl, &ec.cfg)?;
    let st = phase_evolved(&s0, t)?;
    let (q, inv_data) = inverse(&st, zl, &ec.cfg)?;
    let report = EvolutionReport {
        method: "ist".into(),
        times: vec![0.0, t],
        mass: vec![q0.l2_norm(), q.l2_norm()],
        l4_accum: vec![0.0, 0.0],
        max_residual: s0.max_residual().max(inv_data.max_residual()),
        holes: s0.hole_count() + inv_data.hole_count(),
    };
    Ok((q, report))
}

/// Scattering data advanced by the exact linear phase.
pub fn phase_evolved(s: &ScatteringData, t: f64) -> Result<ScatteringData> {
    let kl = *s.klattice();
    let m = kl.m();
    let mut samples = s.samples().to_vec();
    for b in 0..m {
        for a in 0..m {
            let k = kl.point(a, b);
            let phase = 4.0 * t * (k.re * k.re - k.im * k.im);
            samples[kl.idx(a, b)] *= Complex64::from_polar(1.0, phase);
        }
    }
    ScatteringData::new(
        kl,
        samples,
        s.residuals().to_vec(),
        s.converged().to_vec(),
        s.source_norm,
        s.truncation,
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossValidationReport {
    /// ||q_ist - q_direct||_2 / ||q0||_2 at the final time.
    pub discrepancy: f64,
    pub ist: EvolutionReport,
    pub direct: EvolutionReport,
}

/// Run both evolution paths and report their relative L2 discrepancy.
pub fn cross_validate(
    q0: &ComplexField,
    t: f64,
    ec: &EvolutionConfig,
) -> Result<CrossValidationReport> {
    let (qi, ist) = evolve_ist(q0, t, ec)?;
    let (qd, direct) = evolve_direct(q0, t, ec)?;
    let denom = q0.l2_norm().max(1e-300);
    Ok(CrossValidationReport {
        discrepancy: qi.sub(&qd).l2_norm() / denom,
        ist,
        direct,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WaveOperatorReport {
    pub times: Vec<f64>,
    /// d(t) = ||U(-t) q(t) - q_plus||_2 with q_plus = conj(FT of s0).
    pub distances: Vec<f64>,
    pub non_increasing: bool,
    /// Largest time before dispersing waves wrap around the periodic window.
    pub t_max: f64,
    pub decay_times: Vec<f64>,
    pub decay_l4: Vec<f64>,
    /// Least-squares slope of log ||.||_{L4} against log t.
    pub decay_exponent: f64,
}

/// Default times of the stationary-phase decay fit.
const DECAY_TIMES: [f64; 4] = [1.0, 2.0, 4.0, 8.0];

/// Wave-operator and scattering-asymptotics diagnostics: checks that
/// U(-t) q(t) approaches q_plus = conj(FT(s0)) monotonically over `times`,
/// and fits the stationary-phase L4 decay exponent of the free evolution of
/// s0 (expected near -1/4).
pub fn wave_operator_check(
    q0: &ComplexField,
    times: &[f64],
    ec: &EvolutionConfig,
) -> Result<WaveOperatorReport> {
    let zl = q0.lattice();
    ec.validate(zl)?;
    if times.windows(2).any(|w| w[1] <= w[0]) || times.iter().any(|t| *t <= 0.0) {
        return Err(Error::InvalidParameter(
            "times must be positive and increasing".into(),
        ));
    }
    let s0 = forward(q0, &ec.kl, &ec.cfg)?;
    let sfield = s0.interpolated_field()?;

    // Dispersive validity window: waves of the 90%-mass spectral radius rho
    // travel at group speed 4 rho and must stay within L/4.
    let rho = mass_radius(&sfield, 0.9);
    let t_max = if rho > 0.0 {
        zl.extent() / (16.0 * rho)
    } else {
        f64::INFINITY
    };
    if let Some(last) = times.last() {
        if *last > t_max {
            return Err(Error::WindowViolation { t_max });
        }
    }

    // q_plus = conj of the transform of s0, sampled on the physical lattice.
    let shat = dft_paper(&sfield, &KLattice::new(zl.n(), zl.h())?)?;
    let q_plus = ComplexField::from_samples(*zl, shat.samples().to_vec())?.conj();

    let mut distances = Vec::with_capacity(times.len());
    let mut q = q0.clone();
    let mut t_prev = 0.0;
    for &t in times {
        let (next, _) = evolve_direct(&q, t - t_prev, ec)?;
        q = next;
        t_prev = t;
        distances.push(linear_propagate(&q, -t).sub(&q_plus).l2_norm());
    }
    let non_increasing = distances.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9));

    let (decay_l4, decay_exponent) = stationary_phase_decay(&sfield, &DECAY_TIMES)?;
    Ok(WaveOperatorReport {
        times: times.to_vec(),
        distances,
        non_increasing,
        t_max,
        decay_times: DECAY_TIMES.to_vec(),
        decay_l4,
        decay_exponent,
    })
}

/// Radius containing the given fraction of the squared mass of a field
/// (coordinates of its own lattice).
fn mass_radius(f: &ComplexField, fraction: f64) -> f64 {
    let zl = f.lattice();
    let mut by_radius: Vec<(f64, f64)> = Vec::with_capacity(f.samples().len());
    let mut total = 0.0;
    for j2 in 0..zl.n() {
        for j1 in 0..zl.n() {
            let w = f.get(j1, j2).norm_sqr();
            total += w;
            by_radius.push((zl.point(j1, j2).norm(), w));
        }
    }
    if total == 0.0 {
        return 0.0;
    }
    by_radius.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut acc = 0.0;
    for (r, w) in by_radius {
        acc += w;
        if acc >= fraction * total {
            return r;
        }
    }
    f64::INFINITY
}

/// Stationary-phase decay of the free k-space evolution: the function
///
///   w_t(z) = [dbar_k^{-1}(e_z e^{4it(k1^2-k2^2)} s0)](k = 0)
///          = -(1/pi) * integral e_z(k) e^{4it(k1^2-k2^2)} s0(k) / k dk
///
/// obeys |w_t| <~ t^{-1/2}(1 + t^{-1/2}|z|)^{-1}, whose L4 norm in z decays
/// like t^{-1/4}. Returns the L4 norms at the given times with the
/// least-squares log-log slope. `s0` lives on a k-lattice reinterpreted as
/// physical; the active window is refined by bilinear interpolation until
/// the phase at the largest time is resolved (the refinement also enlarges
/// the conjugate z-window, keeping the dispersed waves inside it).
pub fn stationary_phase_decay(s0: &ComplexField, times: &[f64]) -> Result<(Vec<f64>, f64)> {
    if times.is_empty() || times.iter().any(|t| *t <= 0.0) {
        return Err(Error::InvalidParameter(
            "decay times must be positive".into(),
        ));
    }
    let active = s0.restrict_center(s0.active_side(1e-4))?;
    let kl0 = active.lattice();
    let t_max = times.iter().cloned().fold(0.0, f64::max);
    let kmax = kl0.extent() / 2.0;
    let mut factor = 1usize;
    while factor * kl0.n() < 1024 && 8.0 * t_max * kmax * (kl0.h() / factor as f64) > 0.8 * PI {
        factor *= 2;
    }
    let fine = refine_bilinear(&active, factor)?;
    let m = fine.lattice().n();
    let dk = fine.lattice().h();
    let kl = KLattice::new(m, dk)?;
    // Conjugate z-lattice with stride 1: extent pi/dk, m nodes.
    let zl = Lattice::new(m, PI / (m as f64 * dk))?;

    let mut l4s = Vec::with_capacity(times.len());
    for &t in times {
        // H(k) = i pi * (-(1/pi)) g_t(k)/k, so that idft_paper's prefactor
        // -i/pi makes the quadrature of the integral above exact; the k = 0
        // node is dropped (the 1/k kernel is odd over the symmetric cell).
        let mut h = Vec::with_capacity(m * m);
        for b in 0..m {
            for a in 0..m {
                let k = kl.point(a, b);
                if k.norm_sqr() == 0.0 {
                    h.push(Complex64::new(0.0, 0.0));
                    continue;
                }
                let phase = 4.0 * t * (k.re * k.re - k.im * k.im);
                let g = fine.get(a, b) * Complex64::from_polar(1.0, phase);
                h.push(Complex64::new(0.0, -1.0) * g / k);
            }
        }
        let w = idft_paper(&crate::field::SpectralField::new(kl, h, 0.0)?, &zl)?;
        l4s.push(norm(&w, 4.0));
    }
    if l4s.iter().any(|v| *v <= 0.0) {
        return Ok((l4s, 0.0));
    }
    // Least-squares slope in log-log coordinates.
    let n = times.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for (t, v) in times.iter().zip(&l4s) {
        let (x, y) = (t.ln(), v.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let denom = n * sxx - sx * sx;
    let slope = if denom.abs() > 1e-300 {
        (n * sxy - sx * sy) / denom
    } else {
        0.0
    };
    Ok((l4s, slope))
}

/// Bilinear refinement onto a lattice with `factor` times the resolution and
/// the same extent.
fn refine_bilinear(f: &ComplexField, factor: usize) -> Result<ComplexField> {
    if factor == 1 {
        return Ok(f.clone());
    }
    let zl = f.lattice();
    let n = zl.n();
    let fine = Lattice::new(n * factor, zl.h() / factor as f64)?;
    let nf = fine.n();
    let mut samples = Vec::with_capacity(nf * nf);
    let coord = |j: usize| -> (usize, usize, f64) {
        // Coarse index-space coordinate of fine node j, clamped to the grid.
        let x = (j as f64 - (nf / 2) as f64) / factor as f64 + (n / 2) as f64;
        let lo = x.floor().clamp(0.0, (n - 1) as f64);
        let i0 = lo as usize;
        let i1 = (i0 + 1).min(n - 1);
        (i0, i1, (x - lo).clamp(0.0, 1.0))
    };
    for j2 in 0..nf {
        let (b0, b1, tb) = coord(j2);
        for j1 in 0..nf {
            let (a0, a1, ta) = coord(j1);
            let v = f.get(a0, b0) * ((1.0 - ta) * (1.0 - tb))
                + f.get(a1, b0) * (ta * (1.0 - tb))
                + f.get(a0, b1) * ((1.0 - ta) * tb)
                + f.get(a1, b1) * (ta * tb);
            samples.push(v);
        }
    }
    ComplexField::from_samples(fine, samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::SolverConfig;

    fn config(zl: &Lattice, m: usize) -> EvolutionConfig {
        EvolutionConfig {
            t_final: 1.0,
            dt: 1e-3,
            scheme: Scheme::Strang,
            kl: KLattice::new(m, PI / zl.extent()).unwrap(),
            cfg: SolverConfig::default(),
        }
    }

    fn wide_gaussian(zl: Lattice, amp: f64) -> ComplexField {
        ComplexField::from_fn(zl, |z| {
            Complex64::new(amp * (-z.norm_sqr() / 4.0).exp(), 0.0)
        })
    }

    #[test]
    fn linear_propagate_identity_unitarity_group_law() {
        let zl = Lattice::new(32, 0.5).unwrap();
        let q = ComplexField::from_fn(zl, |z| {
            Complex64::new((-z.norm_sqr()).exp(), 0.3 * (-z.norm_sqr() / 2.0).exp())
        });
        assert!(linear_propagate(&q, 0.0).sub(&q).l2_norm() < 1e-13);
        let ut = linear_propagate(&q, 0.7);
        assert!((ut.l2_norm() - q.l2_norm()).abs() < 1e-12);
        let comp = linear_propagate(&linear_propagate(&q, 0.3), 0.4);
        assert!(comp.sub(&ut).l2_norm() < 1e-12);
        // Inverse: U(-t) U(t) = I.
        assert!(linear_propagate(&ut, -0.7).sub(&q).l2_norm() < 1e-12);
    }

    #[test]
    fn linear_propagate_pure_mode_oracle() {
        // A single Fourier mode picks up exactly e^{-it(xi1^2 - xi2^2)}.
        let zl = Lattice::new(16, 0.5).unwrap();
        let (xi1, xi2) = (zl.freq(10), zl.freq(7));
        let q = ComplexField::from_fn(zl, |z| Complex64::from_polar(1.0, xi1 * z.re + xi2 * z.im));
        let t = 0.31;
        let out = linear_propagate(&q, t);
        let expected = q.scale(Complex64::from_polar(1.0, -t * (xi1 * xi1 - xi2 * xi2)));
        let err = out
            .sub(&expected)
            .samples()
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "mode phase error {err}");
    }

    #[test]
    fn direct_zero_stays_zero_and_mass_is_conserved() {
        let zl = Lattice::new(32, 0.5).unwrap();
        let ec = config(&zl, 16);
        let (z, _) = evolve_direct(&ComplexField::zeros(zl), 0.5, &ec).unwrap();
        assert!(z.l2_norm() == 0.0);

        let q0 = wide_gaussian(zl, 1.0);
        let (q, rep) = evolve_direct(&q0, 1.0, &ec).unwrap();
        assert_eq!(rep.times.len(), 1001);
        assert_eq!(rep.mass.len(), rep.l4_accum.len());
        let drift = (q.l2_norm() - q0.l2_norm()).abs() / q0.l2_norm();
        assert!(drift <= 1e-12, "mass drift {drift} over 1000 steps");
        assert!(rep.l4_accum.last().unwrap() > &0.0);
    }

    #[test]
    fn cfl_violation_rejected() {
        let zl = Lattice::new(32, 0.5).unwrap();
        let mut ec = config(&zl, 16);
        ec.dt = 0.1; // 0.1 * (2 pi)^2 > pi/4
        assert!(matches!(
            evolve_direct(&wide_gaussian(zl, 1.0), 0.2, &ec),
            Err(Error::CflViolation(_))
        ));
    }

    #[test]
    fn strang_self_convergence_is_second_order() {
        let zl = Lattice::new(32, 0.5).unwrap();
        let q0 = wide_gaussian(zl, 1.5);
        let t = 0.05;
        let run = |dt: f64| {
            let mut ec = config(&zl, 16);
            ec.dt = dt;
            evolve_direct(&q0, t, &ec).unwrap().0
        };
        let reference = run(6.25e-4);
        let e1 = run(5e-3).sub(&reference).l2_norm();
        let e2 = run(2.5e-3).sub(&reference).l2_norm();
        let ratio = e1 / e2;
        assert!((3.0..=5.5).contains(&ratio), "order ratio {ratio}");
    }

    #[test]
    fn ist_at_time_zero_is_the_involution() {
        let zl = Lattice::new(32, 0.5).unwrap();
        let q0 = wide_gaussian(zl, 0.3);
        let ec = config(&zl, 16);
        let (q, rep) = evolve_ist(&q0, 0.0, &ec).unwrap();
        assert_eq!(rep.holes, 0);
        let rel = q.sub(&q0).l2_norm() / q0.l2_norm();
        assert!(rel <= 2e-2, "t = 0 involution defect {rel}");
    }

    #[test]
    fn near_linear_regime_agrees_with_the_free_evolution() {
        // Small data: both paths must reduce to U(t) q0; this pins the sign
        // conventions of both the linear and the scattering-side phases.
        let zl = Lattice::new(32, 0.5).unwrap();
        let q0 = wide_gaussian(zl, 0.05);
        let mut ec = config(&zl, 16);
        ec.dt = 5e-4;
        let t = 0.05;
        let free = linear_propagate(&q0, t);
        let (qd, _) = evolve_direct(&q0, t, &ec).unwrap();
        let (qi, _) = evolve_ist(&q0, t, &ec).unwrap();
        let ed = qd.sub(&free).l2_norm() / q0.l2_norm();
        let ei = qi.sub(&free).l2_norm() / q0.l2_norm();
        assert!(ed <= 1e-3, "direct vs free {ed}");
        assert!(ei <= 5e-3, "ist vs free {ei}");
        let cv = cross_validate(&q0, t, &ec).unwrap();
        assert!(cv.discrepancy <= 5e-3, "cross {:}", cv.discrepancy);
    }

    #[test]
    fn wave_operator_zero_potential_is_degenerate() {
        let zl = Lattice::new(32, 0.5).unwrap();
        let ec = config(&zl, 16);
        let rep = wave_operator_check(&ComplexField::zeros(zl), &[0.1, 0.2], &ec).unwrap();
        assert!(rep.distances.iter().all(|d| *d == 0.0));
        assert!(rep.non_increasing);
    }

    #[test]
    fn window_violation_rejected() {
        let zl = Lattice::new(32, 0.5).unwrap();
        let ec = config(&zl, 16);
        let err = wave_operator_check(&wide_gaussian(zl, 0.3), &[1.0, 100.0], &ec).unwrap_err();
        assert!(matches!(err, Error::WindowViolation { .. }));
    }

    #[test]
    fn stationary_phase_decay_near_quarter_power() {
        // Synthetic Gaussian scattering data on its own fine k-grid; the
        // quadrature of the free k-space evolution must show the t^{-1/4}
        // L4 decay law.
        let kl = Lattice::new(256, 0.04).unwrap();
        let s0 = ComplexField::from_fn(kl, |k| Complex64::new((-k.norm_sqr()).exp(), 0.0));
        let (l4s, slope) = stationary_phase_decay(&s0, &[1.0, 2.0, 4.0, 8.0]).unwrap();
        assert!(
            l4s.windows(2).all(|w| w[1] < w[0]),
            "norms not decaying: {l4s:?}"
        );
        assert!(
            (-0.35..=-0.15).contains(&slope),
            "decay exponent {slope}, norms {l4s:?}"
        );
    }

    #[test]
    fn refine_bilinear_reproduces_smooth_fields() {
        let zl = Lattice::new(16, 0.5).unwrap();
        let f = ComplexField::from_fn(zl, |z| Complex64::new((-z.norm_sqr() / 8.0).exp(), 0.0));
        let fine = refine_bilinear(&f, 2).unwrap();
        assert_eq!(fine.lattice().n(), 32);
        // Coarse nodes are reproduced exactly.
        assert!((fine.get(16, 16) - f.get(8, 8)).norm() < 1e-14);
        let mid = fine.get(17, 16);
        let avg = (f.get(8, 8) + f.get(9, 8)) / 2.0;
        assert!((mid - avg).norm() < 1e-14);
    }
}
