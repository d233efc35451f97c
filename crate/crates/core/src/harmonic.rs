//! Fractional integrals, pseudo-differential operators with non-smooth
//! symbols, and the bilinear Besov estimate, with audit harnesses.
//!
//! The pseudo-differential machinery uses the symmetric pairing between the
//! spectral parameter x (a k-lattice node) and the frequency
//! xi = (2 z1, -2 z2) induced by a z-lattice node: with that identification
//! e_k(z) = e^{i x . xi}, and the operator
//!
//!   a(x, D)f(x) = (2 pi)^{-2} * integral e^{i x . xi} a(x, xi) fhat(xi) dxi
//!
//! becomes, for the Jost symbol a = m1 - 1 and f = conj(qhat), exactly the
//! nonlinear correction of the scattering transform. The pairing requires
//! the frequency step of the k-lattice to equal twice the z-spacing, i.e.
//! h * m * dk = pi.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::cauchy::fourier_multiplier;
use crate::error::{Error, Result};
use crate::field::ComplexField;
use crate::lattice::{KLattice, Lattice};
use crate::maximal::maximal_function;
use crate::norms::{besov_norm, norm, sobolev_norm};
use crate::report::InequalityReport;
use crate::transform::ordinary_spectrum;

/// Largest total sample count a symbol may hold.
const MAX_SYMBOL_SAMPLES: usize = 1 << 31;

/// A symbol a(x, xi) sampled as one z-lattice slice per k-lattice node x;
/// the slice value at z-node (j1, j2) represents a(x, xi) at
/// xi = (2 z1, -2 z2). Read-only after construction.
#[derive(Debug, Clone)]
pub struct SymbolField {
    klattice: KLattice,
    zlattice: Lattice,
    /// Slices in k-lattice index order.
    slices: Vec<ComplexField>,
}

impl SymbolField {
    pub fn new(klattice: KLattice, zlattice: Lattice, slices: Vec<ComplexField>) -> Result<Self> {
        let m = klattice.m();
        let n = zlattice.n();
        if slices.len() != m * m {
            return Err(Error::InvalidParameter(format!(
                "expected {} slices, got {}",
                m * m,
                slices.len()
            )));
        }
        if m * m * n * n > MAX_SYMBOL_SAMPLES {
            return Err(Error::InvalidParameter(format!(
                "symbol would hold {} samples (limit {MAX_SYMBOL_SAMPLES})",
                m * m * n * n
            )));
        }
        for s in &slices {
            if *s.lattice() != zlattice {
                return Err(Error::LatticeMismatch(
                    "symbol slice lattice differs from the declared zlattice".into(),
                ));
            }
        }
        Ok(Self {
            klattice,
            zlattice,
            slices,
        })
    }

    /// Sample a closure a(x, z) over both lattices.
    pub fn from_fn(
        klattice: KLattice,
        zlattice: Lattice,
        a: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        let m = klattice.m();
        let mut slices = Vec::with_capacity(m * m);
        for b in 0..m {
            for l in 0..m {
                let x = klattice.point(l, b);
                slices.push(ComplexField::from_fn(zlattice, |z| a(x, z)));
            }
        }
        Self::new(klattice, zlattice, slices)
    }

    pub fn klattice(&self) -> &KLattice {
        &self.klattice
    }

    pub fn zlattice(&self) -> &Lattice {
        &self.zlattice
    }

    pub fn slice(&self, l1: usize, l2: usize) -> &ComplexField {
        &self.slices[self.klattice.idx(l1, l2)]
    }

    /// ||(-Delta_xi)^{1/2} a||_{L^4_x L^{4/3}_xi} and the per-x inner norms
    /// (the alpha = 1, n = 2 mixed norm of the L2 and pointwise bounds).
    /// The half-Laplacian is spectral per slice; dxi = 4 dz.
    pub fn mixed_halflap_norm(&self) -> (f64, Vec<f64>) {
        let inner: Vec<f64> = self
            .slices
            .iter()
            .map(|s| {
                let b =
                    fourier_multiplier(s, |x1, x2| Complex64::new((x1 * x1 + x2 * x2).sqrt(), 0.0));
                // L^{4/3} with the xi measure (2h)^2 = 4 h^2.
                4.0f64.powf(0.75) * norm(&b, 4.0 / 3.0)
            })
            .collect();
        let dk = self.klattice.dk();
        let outer = (inner.iter().map(|v| v.powi(4)).sum::<f64>() * dk * dk).powf(0.25);
        (outer, inner)
    }
}

/// The fractional integral (-Delta)^{-alpha/2}: multiplier |xi|^{-alpha}
/// with the zero mode dropped. Requires alpha in (0, 2).
pub fn frac_laplacian(f: &ComplexField, alpha: f64) -> Result<ComplexField> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha = {alpha} outside (0, 2)"
        )));
    }
    Ok(fourier_multiplier(f, |x1, x2| {
        let r2 = x1 * x1 + x2 * x2;
        if r2 == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(r2.powf(-alpha / 2.0), 0.0)
        }
    }))
}

/// Maximal function of the ordinary spectrum of `f`, evaluated at xi = 0.
fn maximal_fhat_at_zero(f: &ComplexField) -> Result<f64> {
    let zl = f.lattice();
    let freq_lattice = Lattice::new(zl.n(), zl.freq_step())?;
    let fhat = ComplexField::from_samples(freq_lattice, ordinary_spectrum(f))?;
    let m = maximal_function(&fhat);
    Ok(m.get(zl.n() / 2, zl.n() / 2).re)
}

/// Audit the pointwise fractional-integral bounds (n = 2):
///
///   a) |(-Delta)^{-alpha/2} f(x)| <= c (lambda^{2-alpha} M fhat(0) + lambda^{-alpha} M f(x)),
///   b) |(-Delta)^{-alpha/2} f(x)| <= c (M fhat(0))^{alpha/2} (M f(x))^{1-alpha/2}.
///
/// Returns the (a)-form and (b)-form reports with the worst pointwise ratio.
pub fn audit_fractional_bound(
    f: &ComplexField,
    alpha: f64,
    lambda: f64,
) -> Result<(InequalityReport, InequalityReport)> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("lambda = {lambda} <= 0")));
    }
    let zl = f.lattice();
    let lhs = frac_laplacian(f, alpha)?;
    let mf = maximal_function(f);
    let mhat0 = maximal_fhat_at_zero(f)?;

    let mut worst_a = (0.0f64, 0.0f64);
    let mut worst_b = (0.0f64, 0.0f64);
    let ratio = |w: &(f64, f64)| {
        if w.1 > 0.0 {
            w.0 / w.1
        } else if w.0 > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    };
    for (i, v) in lhs.samples().iter().enumerate() {
        let l = v.norm();
        let m = mf.samples()[i].re;
        let rhs_a = lambda.powf(2.0 - alpha) * mhat0 + lambda.powf(-alpha) * m;
        let rhs_b = mhat0.powf(alpha / 2.0) * m.powf(1.0 - alpha / 2.0);
        if ratio(&(l, rhs_a)) > ratio(&worst_a) {
            worst_a = (l, rhs_a);
        }
        if ratio(&(l, rhs_b)) > ratio(&worst_b) {
            worst_b = (l, rhs_b);
        }
    }
    Ok((
        InequalityReport::single("fractional_bound_a", worst_a.0, worst_a.1, zl.n(), zl.h()),
        InequalityReport::single("fractional_bound_b", worst_b.0, worst_b.1, zl.n(), zl.h()),
    ))
}

/// Apply a(x, D) to a field living on the k-lattice of the symbol. The
/// ordinary spectrum of `f` is paired with the symbol slices through
/// xi = (2 z1, -2 z2); one weighted inverse transform per output point.
pub fn pdo_apply(a: &SymbolField, f: &ComplexField) -> Result<Vec<Complex64>> {
    let kl = a.klattice;
    let zl = a.zlattice;
    let m = kl.m();
    let n = zl.n();
    if *f.lattice() != kl.as_lattice()? {
        return Err(Error::LatticeMismatch(
            "field must live on the symbol's k-lattice".into(),
        ));
    }
    if m > n {
        return Err(Error::LatticeMismatch(format!(
            "k-lattice has {m} nodes per axis but the symbol's z-lattice only {n}"
        )));
    }
    // The m^2 frequency slots of f must be a subset of the symbol's
    // xi-samples: frequency step 2 pi/(m dk) = 2 h.
    let step = 2.0 * PI / (m as f64 * kl.dk());
    if (step - 2.0 * zl.h()).abs() > 1e-12 * step {
        return Err(Error::LatticeMismatch(format!(
            "frequency step {step:.6} differs from 2h = {:.6}; need h*m*dk = pi",
            2.0 * zl.h()
        )));
    }

    let fhat = ordinary_spectrum(f);
    // z-node indices of the frequency slots: j1 = n/2 + (l1 - m/2) and, with
    // the sign flip on the second axis, j2 = n/2 - (l2 - m/2), wrapped onto
    // the unpaired edge when m = n.
    let map1 = |l: usize| (n / 2 + l - m / 2) % n;
    let map2 = |l: usize| ((n / 2 + m / 2) as isize - l as isize).rem_euclid(n as isize) as usize;

    let scale = (step * step) / (4.0 * PI * PI);
    let mut out = Vec::with_capacity(m * m);
    let mut row = vec![Complex64::new(0.0, 0.0); m];
    let mut col = vec![Complex64::new(0.0, 0.0); m];
    for bx in 0..m {
        for ax in 0..m {
            let x = kl.point(ax, bx);
            for l in 0..m {
                let xi = (l as f64 - (m / 2) as f64) * step;
                row[l] = Complex64::from_polar(1.0, x.re * xi);
                col[l] = Complex64::from_polar(1.0, x.im * xi);
            }
            let slice = a.slice(ax, bx);
            let mut acc = Complex64::new(0.0, 0.0);
            for l2 in 0..m {
                let j2 = map2(l2);
                let mut inner = Complex64::new(0.0, 0.0);
                for l1 in 0..m {
                    inner += row[l1] * slice.get(map1(l1), j2) * fhat[l2 * m + l1];
                }
                acc += col[l2] * inner;
            }
            out.push(scale * acc);
        }
    }
    Ok(out)
}

/// Audit the L2 bound (PseudoDiff form, alpha = 1, n = 2)
///
///   ||a(x,D) f||_2 <= c ||f||_2 ||(-Delta_xi)^{1/2} a||_{L^4_x L^{4/3}_xi}
///
/// and the pointwise form
///
///   |a(x,D) f(x)| <= c (Mf(x))^{1/2} ||(-Delta_xi)^{1/2} a(x,.)||_{L^{4/3}} ||f||_2^{1/2}
///
/// over the supplied ensemble. Returns (L2 report, pointwise report).
pub fn audit_pdo_bound(
    a: &SymbolField,
    ensemble: &[ComplexField],
) -> Result<(InequalityReport, InequalityReport)> {
    let kl = a.klattice;
    let dk = kl.dk();
    let (mixed, inner) = a.mixed_halflap_norm();
    let mut l2_trials = Vec::with_capacity(ensemble.len());
    let mut pw_trials = Vec::with_capacity(ensemble.len());
    for f in ensemble {
        let g = pdo_apply(a, f)?;
        let f_l2 = f.l2_norm();
        let g_l2 = dk * g.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        l2_trials.push((g_l2, f_l2 * mixed));

        let mf = maximal_function(f);
        let ratio = |l: f64, r: f64| {
            if r > 0.0 {
                l / r
            } else if l > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        };
        let mut worst = (0.0f64, 0.0f64);
        for (i, v) in g.iter().enumerate() {
            let rhs = mf.samples()[i].re.sqrt() * inner[i] * f_l2.sqrt();
            if ratio(v.norm(), rhs) > ratio(worst.0, worst.1) {
                worst = (v.norm(), rhs);
            }
        }
        pw_trials.push(worst);
    }
    Ok((
        InequalityReport::ensemble("pdo_l2_bound", l2_trials, kl.m(), dk, None),
        InequalityReport::ensemble("pdo_pointwise_bound", pw_trials, kl.m(), dk, None),
    ))
}

/// Audit the bilinear Besov estimate (n = 2)
///
///   ||q u||_{H^{-r}} <= c ||q||_{B^{2/p - 2r, p}_inf} ||u||_{H^r},
///
/// homogeneous norms throughout; defaults r = 1/2, p = 3.
pub fn audit_bilinear_besov(
    q: &ComplexField,
    u: &ComplexField,
    r: f64,
    p: f64,
) -> Result<InequalityReport> {
    q.check_same_lattice(u)?;
    if !(r >= 0.0 && r < 1.0) {
        return Err(Error::InvalidParameter(format!("r = {r} outside [0, 1)")));
    }
    let p_lo = if r > 0.0 {
        (1.0 / r).max(2.0)
    } else {
        f64::INFINITY
    };
    let p_hi = if r > 0.0 { 2.0 / r } else { f64::INFINITY };
    if !(p >= p_lo && p < p_hi) {
        return Err(Error::InvalidParameter(format!(
            "p = {p} outside [{p_lo}, {p_hi}) for r = {r}"
        )));
    }
    let lhs = sobolev_norm(&q.mul(u), -r);
    let rhs = besov_norm(q, 2.0 / p - 2.0 * r, p) * sobolev_norm(u, r);
    Ok(InequalityReport::single(
        "bilinear_besov",
        lhs,
        rhs,
        q.lattice().n(),
        q.lattice().h(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::random_ensemble;
    use crate::solver::{jost_m1_sweep, SolverConfig};
    use crate::transform::{dft_paper, ek_modulate};

    fn gaussian(zl: Lattice, amp: f64) -> ComplexField {
        ComplexField::from_fn(zl, |z| Complex64::new(amp * (-z.norm_sqr()).exp(), 0.0))
    }

    #[test]
    fn frac_laplacian_zero_mode_and_range() {
        let zl = Lattice::new(16, 0.5).unwrap();
        assert!(frac_laplacian(&gaussian(zl, 1.0), 0.0).is_err());
        assert!(frac_laplacian(&gaussian(zl, 1.0), 2.0).is_err());
        let zero = frac_laplacian(&ComplexField::zeros(zl), 1.0).unwrap();
        assert!(zero.l2_norm() == 0.0);
        // Constants are pure zero mode, so they map to zero.
        let c = ComplexField::from_fn(zl, |_| Complex64::new(3.0, 0.0));
        assert!(frac_laplacian(&c, 1.0).unwrap().l2_norm() < 1e-12);
    }

    #[test]
    fn frac_laplacian_pure_mode_eigenfunction() {
        let zl = Lattice::new(16, 0.5).unwrap();
        let (x1, x2) = (zl.freq(11), zl.freq(6));
        let f = ComplexField::from_fn(zl, |z| Complex64::from_polar(1.0, x1 * z.re + x2 * z.im));
        let alpha = 0.7;
        let out = frac_laplacian(&f, alpha).unwrap();
        let expect = (x1 * x1 + x2 * x2).powf(-alpha / 2.0);
        let err = out.sub(&f.scale(Complex64::new(expect, 0.0))).l2_norm();
        assert!(err < 1e-12 * expect, "eigenvalue error {err}");
    }

    #[test]
    fn frac_laplacian_composes_with_its_inverse() {
        let zl = Lattice::new(32, 0.5).unwrap();
        let f = gaussian(zl, 1.0);
        let alpha = 1.0;
        let up = fourier_multiplier(&f, |x1, x2| {
            Complex64::new((x1 * x1 + x2 * x2).sqrt().powf(alpha), 0.0)
        });
        let back = frac_laplacian(&up, alpha).unwrap();
        // Recovers f minus its zero mode.
        let f0 = f.sub(&crate::norms::zero_mode(&f));
        assert!(back.sub(&f0).l2_norm() < 1e-10);
    }

    #[test]
    fn fractional_bound_reports() {
        let zl = Lattice::new(64, 0.3).unwrap();
        let f = gaussian(zl, 1.0);
        let (a, b) = audit_fractional_bound(&f, 1.0, 1.0).unwrap();
        assert!(!a.degenerate && !b.degenerate);
        assert!(a.constant.is_finite() && a.constant > 0.0);
        assert!(b.constant.is_finite() && b.constant > 0.0);
        // c = 1 headroom is modest for a Gaussian.
        assert!(
            a.constant < 5.0 && b.constant < 5.0,
            "{} {}",
            a.constant,
            b.constant
        );

        let (z, _) = audit_fractional_bound(&ComplexField::zeros(zl), 1.0, 1.0).unwrap();
        assert!(z.degenerate);
    }

    #[test]
    fn fractional_bound_b_stable_on_ensemble() {
        let zl = Lattice::new(32, 0.5).unwrap();
        let (_, base) = audit_fractional_bound(&gaussian(zl, 1.0), 1.0, 1.0).unwrap();
        let mut worst = 0.0f64;
        for f in random_ensemble(zl, 2.0, 1.0, 5) {
            let (_, b) = audit_fractional_bound(&f, 1.0, 1.0).unwrap();
            assert!(b.constant.is_finite());
            worst = worst.max(b.constant);
        }
        assert!(
            worst <= 10.0 * base.constant,
            "{worst} vs {}",
            base.constant
        );
    }

    /// Self-dual symbol geometry: m = n, h * m * dk = pi.
    fn dual_pair(n: usize, h: f64) -> (Lattice, KLattice) {
        let zl = Lattice::new(n, h).unwrap();
        (zl, KLattice::dual_to(&zl))
    }

    #[test]
    fn pdo_identity_symbol_is_identity() {
        let (zl, kl) = dual_pair(16, 0.5);
        let a = SymbolField::from_fn(kl, zl, |_, _| Complex64::new(1.0, 0.0)).unwrap();
        let f = ComplexField::from_fn(kl.as_lattice().unwrap(), |z| {
            Complex64::new((-z.norm_sqr()).exp(), 0.1 * z.re)
        });
        let g = pdo_apply(&a, &f).unwrap();
        let err = g
            .iter()
            .zip(f.samples())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-11, "identity defect {err}");
    }

    #[test]
    fn pdo_translation_symbol_translates() {
        // a(x, xi) = e^{i x0 . xi} evaluates f at x + x0 (in its own
        // lattice coordinates); pick x0 = one grid step of the k-lattice.
        let (zl, kl) = dual_pair(16, 0.5);
        let xl = kl.as_lattice().unwrap();
        let x0 = xl.h();
        let a = SymbolField::from_fn(kl, zl, |_, z| {
            // xi = (2 z1, -2 z2); shift only the first coordinate.
            Complex64::from_polar(1.0, x0 * 2.0 * z.re)
        })
        .unwrap();
        let f = ComplexField::from_fn(xl, |z| Complex64::new((-z.norm_sqr()).exp(), 0.0));
        let g = pdo_apply(&a, &f).unwrap();
        // Compare away from the wrap-around edge.
        for l2 in 1..15 {
            for l1 in 1..15 {
                let expected = f.get(l1 + 1, l2);
                let got = g[xl.idx(l1, l2)];
                assert!((got - expected).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn pdo_is_linear_in_f() {
        let (zl, kl) = dual_pair(16, 0.5);
        let a = SymbolField::from_fn(kl, zl, |x, z| {
            Complex64::new((-0.1 * (x.norm_sqr() + z.norm_sqr())).exp(), 0.0)
        })
        .unwrap();
        let xl = kl.as_lattice().unwrap();
        let f = ComplexField::from_fn(xl, |z| Complex64::new((-z.norm_sqr()).exp(), 0.0));
        let g = ComplexField::from_fn(xl, |z| Complex64::new(z.re * (-z.norm_sqr()).exp(), 0.3));
        let sum = pdo_apply(&a, &f.add(&g)).unwrap();
        let fa = pdo_apply(&a, &f).unwrap();
        let ga = pdo_apply(&a, &g).unwrap();
        let err = sum
            .iter()
            .zip(fa.iter().zip(&ga))
            .map(|(s, (x, y))| (s - x - y).norm())
            .fold(0.0, f64::max);
        assert!(
            err < 1e-12 * (f.l2_norm() + g.l2_norm()),
            "linearity defect {err}"
        );
    }

    #[test]
    fn pdo_x_independent_symbol_is_a_multiplier() {
        // For a(x, xi) = a(xi) the operator must agree with the plain
        // Fourier multiplier in the xi variable.
        let (zl, kl) = dual_pair(16, 0.5);
        let sym = |z: Complex64| Complex64::new((-0.3 * z.norm_sqr()).exp(), 0.1 * z.re);
        let a = SymbolField::from_fn(kl, zl, |_, z| sym(z)).unwrap();
        let xl = kl.as_lattice().unwrap();
        let f = ComplexField::from_fn(xl, |z| {
            Complex64::new((-z.norm_sqr()).exp(), 0.2 * (-z.norm_sqr() / 2.0).exp())
        });
        let g = pdo_apply(&a, &f).unwrap();
        // Multiplier path: the slot at frequency xi corresponds to the
        // z-node with z = (xi1/2, -xi2/2).
        let direct = fourier_multiplier(&f, |x1, x2| sym(Complex64::new(x1 / 2.0, -x2 / 2.0)));
        let err: f64 = g
            .iter()
            .zip(direct.samples())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
            / direct.l2_norm()
            * xl.h();
        assert!(err < 1e-10, "multiplier path mismatch {err}");
    }

    #[test]
    fn pdo_jost_symbol_reproduces_the_scattering_correction() {
        // a(x, z) = m1(z, k = x) - 1 with f = conj(qhat) must reproduce the
        // nonlinear correction of the scattering transform against a direct
        // double-sum quadrature.
        let (zl, kl) = dual_pair(32, 0.4);
        let q = gaussian(zl, 1.0);
        let cfg = SolverConfig::default();
        let m = kl.m();
        let mut slices = Vec::with_capacity(m * m);
        for b in 0..m {
            for a in 0..m {
                let k = kl.point(a, b);
                let out = jost_m1_sweep(&q, k, &cfg, None).unwrap();
                assert!(out.converged);
                slices.push(out.u); // m1 - 1
            }
        }
        let sym = SymbolField::new(kl, zl, slices.clone()).unwrap();
        let qhat = dft_paper(&q, &kl).unwrap();
        let f = ComplexField::from_samples(
            kl.as_lattice().unwrap(),
            qhat.samples().iter().map(|v| v.conj()).collect(),
        )
        .unwrap();
        let g = pdo_apply(&sym, &f).unwrap();

        // Direct quadrature: -(i/pi) h^2 sum_z e_k(z) conj(q)(z) (m1 - 1).
        let h2 = zl.h() * zl.h();
        let scale = Complex64::new(0.0, -h2 / PI);
        let mut worst = 0.0f64;
        let mut ref_norm = 0.0f64;
        for b in 0..m {
            for a in 0..m {
                let k = kl.point(a, b);
                let integrand = ek_modulate(&q.conj().mul(&slices[kl.idx(a, b)]), k, 1);
                let direct = scale * integrand.samples().iter().sum::<Complex64>();
                worst = worst.max((g[kl.idx(a, b)] - direct).norm());
                ref_norm = ref_norm.max(direct.norm());
            }
        }
        assert!(
            worst <= 1e-6 * ref_norm,
            "correction mismatch {worst} vs {ref_norm}"
        );
    }

    #[test]
    fn pdo_bound_reports() {
        let (zl, kl) = dual_pair(16, 0.5);
        let zero = SymbolField::from_fn(kl, zl, |_, _| Complex64::new(0.0, 0.0)).unwrap();
        let xl = kl.as_lattice().unwrap();
        let ensemble: Vec<ComplexField> = vec![ComplexField::from_fn(xl, |z| {
            Complex64::new((-z.norm_sqr()).exp(), 0.0)
        })];
        let (l2, _) = audit_pdo_bound(&zero, &ensemble).unwrap();
        assert_eq!(l2.lhs, 0.0);

        let smooth = SymbolField::from_fn(kl, zl, |_, z| {
            Complex64::new((-0.5 * z.norm_sqr()).exp(), 0.0)
        })
        .unwrap();
        let (l2s, pw) = audit_pdo_bound(&smooth, &ensemble).unwrap();
        assert!(l2s.constant.is_finite() && l2s.constant > 0.0);
        assert!(pw.constant.is_finite() && pw.constant > 0.0);
    }

    #[test]
    fn bilinear_besov_reports_and_domain() {
        let zl = Lattice::new(32, 0.5).unwrap();
        let q = gaussian(zl, 1.0);
        let u = ComplexField::from_fn(zl, |z| {
            Complex64::new((-(z - Complex64::new(0.5, 0.0)).norm_sqr()).exp(), 0.0)
        });
        let rep = audit_bilinear_besov(&q, &u, 0.5, 3.0).unwrap();
        assert!(rep.constant.is_finite() && rep.constant > 0.0);

        let zrep = audit_bilinear_besov(&ComplexField::zeros(zl), &u, 0.5, 3.0).unwrap();
        assert_eq!(zrep.lhs, 0.0);
        assert!(zrep.degenerate);

        assert!(audit_bilinear_besov(&q, &u, 1.2, 3.0).is_err());
        assert!(audit_bilinear_besov(&q, &u, 0.5, 4.5).is_err()); // p >= 2/r
        assert!(audit_bilinear_besov(&q, &u, 0.1, 3.0).is_err()); // p < 1/r
    }
}
