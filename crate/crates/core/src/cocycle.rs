//! The linear stochastic evolution cocycle, its norm-capped truncation, and
//! the exponential-dichotomy diagnostics.
//!
//! In the eigenbasis the operator is diagonal: mode `k` of `Phi(t, theta_s w)`
//! multiplies by `exp(mu_k t + sigma_k (W^k_{s+t} - W^k_s))`, which is also
//! its operator norm on that mode (the eigenfunctions are unit vectors), so
//! norms are closed-form rather than estimated. The capped variant clamps
//! that norm at `cap_level * exp(mu_k t / 2) * exp(Lambda |s|)`; the `|s|`
//! factor always uses the absolute shift (view origin plus local offset) so
//! that capped operators evaluated through shifted views compose exactly.

use crate::error::{Error, Result};
use crate::exec;
use crate::noise::{NoiseSpec, PathView, WienerGrid};
use crate::spectral::{Field, SpectralBasis};
use crate::stats;
use crate::timegrid;

/// Parameters binding a basis, noise intensities, the weight rate `Lambda`,
/// and the truncation level.
#[derive(Debug, Clone, Copy)]
pub struct CocycleParams<'a> {
    pub basis: &'a SpectralBasis,
    pub noise: &'a NoiseSpec,
    /// Weight rate of the dichotomy estimates; must lie in `(0, gap/4)`.
    pub lambda: f64,
    /// Norm cap `N` of the truncated operator.
    pub cap_level: f64,
}

impl<'a> CocycleParams<'a> {
    pub fn new(
        basis: &'a SpectralBasis,
        noise: &'a NoiseSpec,
        lambda: f64,
        cap_level: f64,
    ) -> Result<Self> {
        if noise.k_m() != basis.k_m() {
            return Err(Error::DimensionMismatch {
                expected: basis.k_m(),
                got: noise.k_m(),
                context: "cocycle params: noise modes",
            });
        }
        let gap = basis.dichotomy_gap()?;
        if !(lambda > 0.0 && lambda < 0.25 * gap) {
            return Err(Error::InvalidParameter(format!(
                "lambda = {lambda} outside the admissible interval (0, {})",
                0.25 * gap
            )));
        }
        if !(cap_level >= 0.0) {
            return Err(Error::InvalidParameter(
                "cap_level must be nonnegative".into(),
            ));
        }
        Ok(CocycleParams { basis, noise, lambda, cap_level })
    }

    /// Default weight rate: an eighth of the dichotomy gap, strictly inside
    /// the admissible interval.
    pub fn default_lambda(basis: &SpectralBasis) -> Result<f64> {
        Ok(basis.dichotomy_gap()? / 8.0)
    }

    /// Number of unstable modes (0-based split: modes `0..split` grow).
    pub fn split(&self) -> usize {
        self.basis.split_index
    }

    pub fn k_m(&self) -> usize {
        self.basis.k_m()
    }

    /// Is mode `k` (0-based) on the unstable side?
    pub fn is_unstable(&self, k: usize) -> bool {
        k < self.split()
    }

    /// Dichotomy-side time-sign check for mode `k`.
    pub(crate) fn check_time_sign(&self, k: usize, t_steps: i64) -> Result<()> {
        if self.is_unstable(k) {
            if t_steps > 0 {
                return Err(Error::WrongTimeSign {
                    mode: k + 1,
                    t: t_steps as f64,
                    side: "unstable (needs t <= 0)",
                });
            }
        } else if t_steps < 0 {
            return Err(Error::WrongTimeSign {
                mode: k + 1,
                t: t_steps as f64,
                side: "stable (needs t >= 0)",
            });
        }
        Ok(())
    }

    /// Log of the mode factor: `mu_k t + sigma_k (W(s+t) - W(s))`.
    pub(crate) fn log_factor(
        &self,
        k: usize,
        t_steps: i64,
        s_steps: i64,
        view: &PathView<'_>,
    ) -> f64 {
        let dt = view.dt();
        self.basis.mu[k] * timegrid::to_time(t_steps, dt)
            + self.noise.sigma[k] * view.increment(k, s_steps, s_steps + t_steps)
    }

    /// Log of the norm cap: `ln(cap) + mu_k t / 2 + Lambda |s_abs|`.
    pub(crate) fn log_cap(&self, k: usize, t_steps: i64, s_steps: i64, view: &PathView<'_>) -> f64 {
        let dt = view.dt();
        let s_abs = timegrid::to_time(view.origin_steps() + s_steps, dt).abs();
        self.cap_level.ln()
            + 0.5 * self.basis.mu[k] * timegrid::to_time(t_steps, dt)
            + self.lambda * s_abs
    }
}

/// Side of the spectral splitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitSide {
    /// Modes with positive eigenvalue (backward-contracting).
    Unstable,
    /// Modes with negative eigenvalue (forward-contracting).
    Stable,
}

/// Action of `Phi(t, theta_s w)` on mode `k`: both the scalar multiplier and
/// the operator norm of `Phi P^k`. Any grid-aligned `t` is accepted (the
/// semiflow integrates forward through stable and unstable modes alike).
pub fn phi_mode(
    params: &CocycleParams<'_>,
    k: usize,
    t: f64,
    s: f64,
    view: &PathView<'_>,
) -> Result<f64> {
    let dt = view.dt();
    let ts = timegrid::to_steps(t, dt)?;
    let ss = timegrid::to_steps(s, dt)?;
    view.check_window(ss.min(ss + ts), ss.max(ss + ts))?;
    Ok(params.log_factor(k, ts, ss, view).exp())
}

/// Apply `Phi(t, theta_s w)` coefficient-wise.
pub fn phi_apply(
    params: &CocycleParams<'_>,
    t: f64,
    s: f64,
    view: &PathView<'_>,
    u: &Field,
) -> Result<Field> {
    if u.len() != params.k_m() {
        return Err(Error::DimensionMismatch {
            expected: params.k_m(),
            got: u.len(),
            context: "phi_apply: field",
        });
    }
    let mut coeffs = Vec::with_capacity(u.len());
    for k in 0..u.len() {
        coeffs.push(u.coeffs[k] * phi_mode(params, k, t, s, view)?);
    }
    Ok(Field { coeffs })
}

/// Capped mode factor: `phi * min(1, cap / |phi|)`, never exceeding
/// `cap_level * exp(mu_k t / 2) * exp(Lambda |s|)`. Enforces the dichotomy
/// time sign (stable modes forward, unstable backward).
pub fn phi_truncated(
    params: &CocycleParams<'_>,
    k: usize,
    t: f64,
    s: f64,
    view: &PathView<'_>,
) -> Result<f64> {
    let dt = view.dt();
    let ts = timegrid::to_steps(t, dt)?;
    let ss = timegrid::to_steps(s, dt)?;
    params.check_time_sign(k, ts)?;
    view.check_window(ss.min(ss + ts), ss.max(ss + ts))?;
    let a = params.log_factor(k, ts, ss, view);
    let cap = params.log_cap(k, ts, ss, view);
    Ok(a.min(cap).exp())
}

/// Zero out one side of the splitting. `Unstable` keeps the modes with
/// positive eigenvalues; the two projections sum to the identity.
pub fn project_split(u: &Field, basis: &SpectralBasis, side: SplitSide) -> Field {
    let m = basis.split_index;
    let coeffs = u
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| match side {
            SplitSide::Unstable if k < m => *c,
            SplitSide::Stable if k >= m => *c,
            _ => 0.0,
        })
        .collect();
    Field { coeffs }
}

/// Maximum relative deviation of `Phi(t1+t2, theta_s)` from the composition
/// `Phi(t1, theta_{s+t2}) Phi(t2, theta_s)`, mode-wise.
pub fn cocycle_defect(
    params: &CocycleParams<'_>,
    t1: f64,
    t2: f64,
    s: f64,
    view: &PathView<'_>,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in 0..params.k_m() {
        let whole = phi_mode(params, k, t1 + t2, s, view)?;
        let part = phi_mode(params, k, t1, s + t2, view)? * phi_mode(params, k, t2, s, view)?;
        let denom = whole.abs().max(part.abs()).max(f64::MIN_POSITIVE);
        worst = worst.max((whole - part).abs() / denom);
    }
    Ok(worst)
}

/// Deviation of `T_t B u` from `B T_t u` where `B` acts diagonally by
/// `sigma_k`; both routes are diagonal so this vanishes to rounding.
pub fn commutation_defect(
    basis: &SpectralBasis,
    noise: &NoiseSpec,
    t: f64,
    u: &Field,
) -> Result<f64> {
    if t < 0.0 {
        return Err(Error::NegativeTime { t });
    }
    let mut worst: f64 = 0.0;
    for k in 0..basis.k_m() {
        let heat = (basis.mu[k] * t).exp();
        let a = heat * (noise.sigma[k] * u.coeffs[k]);
        let b = noise.sigma[k] * (heat * u.coeffs[k]);
        worst = worst.max((a - b).abs());
    }
    Ok(worst)
}

/// Monte-Carlo Lyapunov exponent of mode `k`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LyapunovEstimate {
    pub mode: usize,
    pub mu: f64,
    pub estimate: f64,
    /// `sigma_k / sqrt(T n)`: exact standard error of the noise term.
    pub stderr_analytic: f64,
    /// Empirical standard error across the ensemble.
    pub stderr_sample: f64,
}

/// Estimate the Lyapunov exponent of mode `k` from time-`T` growth rates.
///
/// Stable modes are driven forward to `+T`, unstable modes backward to `-T`
/// (the dichotomy sides); the estimator is the ensemble mean of
/// `log(phi_mode) / t`.
pub fn estimate_lyapunov(
    params: &CocycleParams<'_>,
    k: usize,
    t_horizon: f64,
    ensemble: &[WienerGrid],
) -> Result<LyapunovEstimate> {
    if t_horizon <= 0.0 {
        return Err(Error::InvalidParameter("t_horizon must be positive".into()));
    }
    let signed_t = if params.is_unstable(k) { -t_horizon } else { t_horizon };
    let rates = ensemble
        .iter()
        .map(|g| {
            let v = g.view();
            let ts = timegrid::to_steps(signed_t, v.dt())?;
            v.check_window(ts.min(0), ts.max(0))?;
            Ok(params.log_factor(k, ts, 0, &v) / signed_t)
        })
        .collect::<Result<Vec<f64>>>()?;
    let n = rates.len().max(1) as f64;
    Ok(LyapunovEstimate {
        mode: k,
        mu: params.basis.mu[k],
        estimate: stats::mean(&rates),
        stderr_analytic: params.noise.sigma[k] / (t_horizon * n).sqrt(),
        stderr_sample: stats::stderr(&rates),
    })
}

/// One grid point of the dichotomy-sup scan.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DichotomyRow {
    /// 1-based mode label, matching `mu_k = c - k² pi²`.
    pub mode: usize,
    pub t: f64,
    pub s: f64,
    /// `|Phi(t, theta_s) P^k| * exp(-mu_k t / 2) * exp(-Lambda |s|)`.
    pub normalized_norm: f64,
}

/// Empirical dichotomy constants of one path over a finite `(t, s)` grid.
///
/// The sup is certified on the scanned grid only; the almost-sure statement
/// it approximates holds for all admissible times.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DichotomyReport {
    /// Per-mode sup of the normalized norm (index 0 = mode 1).
    pub per_mode_sup: Vec<f64>,
    /// Max over modes and grid points.
    pub c_lambda: f64,
    /// Stable-side constant: sup over forward times of
    /// `|Phi P^-| * exp(-mu_{m+1} t / 2)`.
    pub c1: f64,
    /// Unstable-side constant over backward times.
    pub c2: f64,
    pub lambda: f64,
    pub rows: Vec<DichotomyRow>,
}

/// Scan the normalized cocycle norm over a `(t, s)` grid (nonnegative `t`
/// magnitudes; the sign per mode side is applied internally).
pub fn dichotomy_report(
    params: &CocycleParams<'_>,
    view: &PathView<'_>,
    t_grid: &[f64],
    s_grid: &[f64],
    keep_rows: bool,
) -> Result<DichotomyReport> {
    let dt = view.dt();
    let mut per_mode_sup = vec![0.0f64; params.k_m()];
    let mut rows = Vec::new();
    for k in 0..params.k_m() {
        let sign = if params.is_unstable(k) { -1.0 } else { 1.0 };
        for &t_mag in t_grid {
            let t = sign * t_mag;
            let ts = timegrid::to_steps(t, dt)?;
            for &s in s_grid {
                let ss = timegrid::to_steps(s, dt)?;
                view.check_window(ss.min(ss + ts), ss.max(ss + ts))?;
                let s_abs = timegrid::to_time(view.origin_steps() + ss, dt).abs();
                let log_norm = params.log_factor(k, ts, ss, view);
                let normalized =
                    (log_norm - 0.5 * params.basis.mu[k] * t - params.lambda * s_abs).exp();
                per_mode_sup[k] = per_mode_sup[k].max(normalized);
                if keep_rows {
                    rows.push(DichotomyRow {
                        mode: k + 1,
                        t,
                        s,
                        normalized_norm: normalized,
                    });
                }
            }
        }
    }
    let (c1, c2) = split_constants(params, view, t_grid)?;
    Ok(DichotomyReport {
        c_lambda: per_mode_sup.iter().fold(0.0f64, |a, b| a.max(*b)),
        per_mode_sup,
        c1,
        c2,
        lambda: params.lambda,
        rows,
    })
}

/// `C1` and `C2`: sups of the split-projected norms against the edge decay
/// rates, scanned over the `t` grid at the view origin. The norm of the
/// diagonal projected operator is the max over its modes, and `t = 0`
/// (value 1) is always included in the scan.
pub fn split_constants(
    params: &CocycleParams<'_>,
    view: &PathView<'_>,
    t_grid: &[f64],
) -> Result<(f64, f64)> {
    let dt = view.dt();
    let m = params.split();
    let mu_stable_edge = params.basis.mu[m];
    let mut c1_sq: f64 = 1.0;
    let mut c2_sq: f64 = if m > 0 { 1.0 } else { 0.0 };
    for &t_mag in t_grid {
        let ts = timegrid::to_steps(t_mag, dt)?;
        view.check_window(-ts, ts)?;
        for k in 0..params.k_m() {
            if params.is_unstable(k) {
                // backward side, normalized against exp(mu_m t) at t = -t_mag
                let log_norm = params.log_factor(k, -ts, 0, view);
                let normalized = (2.0 * log_norm + params.basis.mu[m - 1] * t_mag).exp();
                c2_sq = c2_sq.max(normalized);
            } else {
                let log_norm = params.log_factor(k, ts, 0, view);
                let normalized = (2.0 * log_norm - mu_stable_edge * t_mag).exp();
                c1_sq = c1_sq.max(normalized);
            }
        }
    }
    Ok((c1_sq.sqrt(), c2_sq.sqrt()))
}

/// Tempered-growth diagnostic: for each shift `s`, the ensemble mean of
/// `log+ C(theta_s w) / |s|`. Decay toward zero is the numerical signature
/// of temperedness. The combined constant is `max(C1, C2)` (equivalent to
/// the root-sum-square up to a factor sqrt(2), and exactly 1 in the
/// noiseless case).
pub fn temperedness_table(
    params: &CocycleParams<'_>,
    ensemble: &[WienerGrid],
    shifts: &[f64],
    t_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    for s in shifts {
        if *s == 0.0 {
            return Err(Error::InvalidParameter(
                "temperedness shift s = 0 is excluded (division by |s|)".into(),
            ));
        }
    }
    let mut out = Vec::with_capacity(shifts.len());
    for &s in shifts {
        let vals = ensemble
            .iter()
            .map(|g| {
                let shifted = g.view().shift(s)?;
                let (c1, c2) = split_constants(params, &shifted, t_grid)?;
                let c = c1.max(c2);
                Ok(c.ln().max(0.0) / s.abs())
            })
            .collect::<Result<Vec<f64>>>()?;
        out.push((s, stats::mean(&vals)));
    }
    Ok(out)
}

/// Both sides of the semigroup-deviation estimates at one `(k, t)`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SemigroupDeviation {
    /// `|T_t P^k - P^k|² = (1 - exp(mu_k t))²`, exact.
    pub lhs_t: f64,
    /// Bound `|mu_k| |t|`.
    pub rhs_t: f64,
    /// Monte-Carlo `E |Phi_t P^k - T_t P^k|²`.
    pub lhs_phi: f64,
    /// Shape `sigma_k² (|t| + t²) max(1, exp(2 mu_k t + 2 sigma_k² |t|))`.
    pub rhs_phi_shape: f64,
    /// Exact expectation `exp(2 mu_k t) (exp(2 sigma_k²|t|) - 2 exp(sigma_k²|t|/2) + 1)`.
    pub lhs_phi_exact: f64,
}

/// Evaluate the semigroup-deviation quantities for mode `k` at a
/// sign-correct time `t`.
pub fn semigroup_deviation(
    params: &CocycleParams<'_>,
    k: usize,
    t: f64,
    ensemble: &[WienerGrid],
) -> Result<SemigroupDeviation> {
    let mu = params.basis.mu[k];
    let sig = params.noise.sigma[k];
    let heat = (mu * t).exp();
    let devs = ensemble
        .iter()
        .map(|g| {
            let v = g.view();
            let ts = timegrid::to_steps(t, v.dt())?;
            params.check_time_sign(k, ts)?;
            v.check_window(ts.min(0), ts.max(0))?;
            let phi = params.log_factor(k, ts, 0, &v).exp();
            Ok((phi - heat) * (phi - heat))
        })
        .collect::<Result<Vec<f64>>>()?;
    let a = sig * sig * t.abs();
    Ok(SemigroupDeviation {
        lhs_t: (1.0 - heat) * (1.0 - heat),
        rhs_t: mu.abs() * t.abs(),
        lhs_phi: stats::mean(&devs),
        rhs_phi_shape: sig * sig * (t.abs() + t * t)
            * 1.0f64.max((2.0 * mu * t + 2.0 * sig * sig * t.abs()).exp()),
        lhs_phi_exact: (2.0 * mu * t).exp() * ((2.0 * a).exp() - 2.0 * (0.5 * a).exp() + 1.0),
    })
}

/// Monte-Carlo sweep asserting the truncation cap pathwise; returns the
/// number of violations (which the dichotomy structure makes zero).
pub fn cap_violation_sweep(
    params: &CocycleParams<'_>,
    ensemble: &[WienerGrid],
    t_grid: &[f64],
    s_grid: &[f64],
    slack: f64,
) -> Result<usize> {
    let counts = exec::map_slice(ensemble, |g| -> Result<usize> {
        let view = g.view();
        let dt = view.dt();
        let mut bad = 0usize;
        for k in 0..params.k_m() {
            let sign = if params.is_unstable(k) { -1.0 } else { 1.0 };
            for &t_mag in t_grid {
                let t = sign * t_mag;
                for &s in s_grid {
                    let val = phi_truncated(params, k, t, s, &view)?;
                    let ts = timegrid::to_steps(t, dt)?;
                    let ss = timegrid::to_steps(s, dt)?;
                    let cap = params.log_cap(k, ts, ss, &view).exp();
                    if val > cap * (1.0 + slack) {
                        bad += 1;
                    }
                }
            }
        }
        Ok(bad)
    });
    let mut total = 0;
    for c in counts {
        total += c?;
    }
    Ok(total)
}
