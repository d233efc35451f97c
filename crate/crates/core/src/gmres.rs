//! Matrix-free restarted GMRES over the real splitting of complex sample
//! vectors.
//!
//! The d-bar fixed-point operators are real-linear but not complex-linear
//! (they conjugate their argument), so Krylov iteration runs on R^{2N}:
//! vectors stay in complex storage, but inner products and scalars are real
//! (`<u,v> = sum(re*re + im*im)`), under which any real-linear operator is an
//! honest matrix.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy)]
pub struct IterationStats {
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

fn dot(u: &[Complex64], v: &[Complex64]) -> f64 {
    u.iter()
        .zip(v)
        .map(|(a, b)| a.re * b.re + a.im * b.im)
        .sum()
}

fn nrm(u: &[Complex64]) -> f64 {
    dot(u, u).sqrt()
}

fn axpy(y: &mut [Complex64], a: f64, x: &[Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Solve A x = b for a real-linear `apply`, with relative residual target
/// `tol`, restart length `restart`, and a total budget of `max_iter` inner
/// iterations. Returns the best iterate seen with its true (recomputed)
/// residual; `converged` reports whether the target was met.
pub fn gmres_real(
    apply: &dyn Fn(&[Complex64]) -> Vec<Complex64>,
    b: &[Complex64],
    x0: Vec<Complex64>,
    tol: f64,
    max_iter: usize,
    restart: usize,
) -> (Vec<Complex64>, IterationStats) {
    let n = b.len();
    let bnorm = nrm(b);
    if bnorm == 0.0 {
        return (
            vec![Complex64::new(0.0, 0.0); n],
            IterationStats {
                iterations: 0,
                residual: 0.0,
                converged: true,
            },
        );
    }
    let restart = restart.max(1);
    let mut x = x0;
    let mut best = x.clone();
    let mut best_res = f64::INFINITY;
    let mut total = 0usize;

    'outer: while total < max_iter {
        let ax = apply(&x);
        let r: Vec<Complex64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let beta = nrm(&r);
        if beta / bnorm < best_res {
            best_res = beta / bnorm;
            best.clone_from(&x);
        }
        if beta / bnorm <= tol {
            break;
        }

        let m = restart.min(max_iter - total);
        let mut v: Vec<Vec<Complex64>> = Vec::with_capacity(m + 1);
        v.push(r.iter().map(|c| c / beta).collect());
        let mut h = vec![vec![0.0f64; m]; m + 1];
        let mut cs = vec![0.0f64; m];
        let mut sn = vec![0.0f64; m];
        let mut g = vec![0.0f64; m + 1];
        g[0] = beta;
        let mut k_used = 0;

        for j in 0..m {
            total += 1;
            let mut w = apply(&v[j]);
            for (i, vi) in v.iter().enumerate().take(j + 1) {
                let hij = dot(&w, vi);
                h[i][j] = hij;
                axpy(&mut w, -hij, vi);
            }
            let hnext = nrm(&w);
            h[j + 1][j] = hnext;

            // Apply accumulated Givens rotations to the new column.
            for i in 0..j {
                let t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
                h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
                h[i][j] = t;
            }
            let denom = (h[j][j] * h[j][j] + hnext * hnext).sqrt();
            if denom == 0.0 {
                k_used = j;
                break;
            }
            cs[j] = h[j][j] / denom;
            sn[j] = hnext / denom;
            h[j][j] = denom;
            h[j + 1][j] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] *= cs[j];
            k_used = j + 1;

            let est = g[j + 1].abs() / bnorm;
            if hnext <= f64::EPSILON * bnorm || est <= tol || total >= max_iter {
                break;
            }
            v.push(w.iter().map(|c| c / hnext).collect());
        }

        if k_used == 0 {
            break; // stagnation: residual is not reducible in this basis
        }
        // Back-substitute y from the triangularized H and update x.
        let mut y = vec![0.0f64; k_used];
        for i in (0..k_used).rev() {
            let mut s = g[i];
            for (l, yl) in y.iter().enumerate().take(k_used).skip(i + 1) {
                s -= h[i][l] * yl;
            }
            y[i] = s / h[i][i];
        }
        for (j, yj) in y.iter().enumerate() {
            axpy(&mut x, *yj, &v[j]);
        }

        let est = g[k_used].abs() / bnorm;
        if est <= tol {
            // Verify on the way out (the estimate can drift from the true
            // residual after restarts).
            let ax = apply(&x);
            let res = b
                .iter()
                .zip(&ax)
                .map(|(bi, ai)| (bi - ai).norm_sqr())
                .sum::<f64>()
                .sqrt()
                / bnorm;
            if res < best_res {
                best_res = res;
                best.clone_from(&x);
            }
            if res <= tol {
                break 'outer;
            }
        }
    }

    // Final certification of the best iterate.
    let ax = apply(&best);
    let res = b
        .iter()
        .zip(&ax)
        .map(|(bi, ai)| (bi - ai).norm_sqr())
        .sum::<f64>()
        .sqrt()
        / bnorm;
    best_res = res;
    (
        best,
        IterationStats {
            iterations: total,
            residual: best_res,
            converged: best_res <= tol,
        },
    )
}
