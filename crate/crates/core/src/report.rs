//! Serializable records of empirically audited inequalities.

use serde::{Deserialize, Serialize};

/// One audited inequality lhs <= C * rhs: the observed sides, the empirical
/// constant, and enough metadata (grid, seed, per-trial data) to reproduce
/// the run. Serialized as JSON by the audit commands.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InequalityReport {
    pub label: String,
    /// Worst-case left-hand side over the trials.
    pub lhs: f64,
    /// Right-hand side at the worst trial.
    pub rhs: f64,
    /// Largest observed lhs/rhs ratio (the empirical constant).
    pub constant: f64,
    pub grid_n: usize,
    pub grid_h: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub trials: usize,
    /// (lhs, rhs) per trial, in trial order.
    pub per_trial: Vec<(f64, f64)>,
    /// Every right-hand side vanished; the constant is meaningless.
    #[serde(default)]
    pub degenerate: bool,
}

impl InequalityReport {
    /// Report from a single observation.
    pub fn single(label: &str, lhs: f64, rhs: f64, grid_n: usize, grid_h: f64) -> Self {
        Self::ensemble(label, vec![(lhs, rhs)], grid_n, grid_h, None)
    }

    /// Report from an ensemble of (lhs, rhs) observations; the headline
    /// numbers come from the trial with the largest ratio.
    pub fn ensemble(
        label: &str,
        per_trial: Vec<(f64, f64)>,
        grid_n: usize,
        grid_h: f64,
        seed: Option<u64>,
    ) -> Self {
        let mut lhs = 0.0;
        let mut rhs = 0.0;
        let mut constant = 0.0;
        for &(l, r) in &per_trial {
            let c = if r > 0.0 {
                l / r
            } else if l > 0.0 {
                f64::INFINITY
            } else {
                0.0
            };
            if c > constant {
                constant = c;
                lhs = l;
                rhs = r;
            }
        }
        let degenerate = !per_trial.is_empty() && per_trial.iter().all(|&(_, r)| r == 0.0);
        Self {
            label: label.to_string(),
            lhs,
            rhs,
            constant,
            grid_n,
            grid_h,
            seed,
            trials: per_trial.len(),
            per_trial,
            degenerate,
        }
    }

    /// True when every trial satisfied lhs <= bound * rhs.
    pub fn holds_with(&self, bound: f64) -> bool {
        self.constant <= bound
    }
}
