//! The coupled forward-backward infinite-horizon integral map on periodic
//! random fields, and its Picard fixed-point solver.
//!
//! The map evaluated at time `t` integrates the capped evolution kernel
//! against the projected drift: stable modes over `[t - T_win, t]`, unstable
//! modes (negated) over `[t, t + T_win]`, by composite trapezoid on the
//! Wiener grid. A candidate solution is stored on one period `[0, tau)` per
//! sample path; quadrature nodes outside the period fold back via the shift
//! identity `Y(t + n tau, w) = Y(t, theta_{n tau} w)`: the drift table is
//! indexed mod `tau` while every kernel factor keeps the true (absolute)
//! times of the node, so the identity is exact on the grid rather than
//! interpolated. Because the period, window, and quadrature step are all
//! grid multiples, the periodicity identity of the map holds structurally:
//! evaluating at `t + tau` on a path equals evaluating at `t` on the
//! tau-shifted view, float for float.

use crate::cocycle::CocycleParams;
use crate::drift::Drift;
use crate::error::{Error, Result};
use crate::exec;
use crate::noise::{PathView, WienerGrid};
use crate::spectral::{project, reconstruct, Field};
use crate::stats;
use crate::timegrid;

/// Quadrature, window, and iteration controls of the fixed-point solver.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize, PartialEq)]
pub struct SolverConfig {
    /// Period of the drift and of the solution.
    pub tau: f64,
    /// Quadrature nodes per period; `dt = tau / n_t`.
    pub n_t: usize,
    /// Half-width of the truncated horizon, in whole periods.
    pub t_win_periods: usize,
    /// Stopping tolerance on the weighted sup norm (a squared quantity).
    pub fp_tol: f64,
    pub max_iters: usize,
}

impl SolverConfig {
    pub fn dt(&self) -> f64 {
        self.tau / self.n_t as f64
    }

    pub fn t_win(&self) -> f64 {
        self.t_win_periods as f64 * self.tau
    }

    /// Window steps per side.
    pub fn n_win(&self) -> i64 {
        (self.t_win_periods * self.n_t) as i64
    }

    /// Cross-field constraint check; returns all violations.
    pub fn violations(&self, dichotomy_gap: f64) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.tau > 0.0) {
            v.push("tau must be positive".into());
        }
        if self.n_t < 2 {
            v.push("n_t must be at least 2".into());
        }
        if self.t_win_periods < 1 {
            v.push("t_win_periods must be at least 1".into());
        }
        if !(self.fp_tol > 0.0) {
            v.push("fp_tol must be positive".into());
        }
        if self.max_iters < 1 {
            v.push("max_iters must be at least 1".into());
        }
        let tail = (-0.5 * dichotomy_gap * self.t_win()).exp();
        if tail >= self.fp_tol / 10.0 {
            v.push(format!(
                "window tail exp(-gap*T_win/2) = {tail:e} is not below fp_tol/10 = {:e}; \
                 enlarge t_win_periods",
                self.fp_tol / 10.0
            ));
        }
        v
    }
}

/// A candidate periodic random field: one period of coefficient tables per
/// sample path.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicField {
    pub tau: f64,
    pub n_t: usize,
    pub k_m: usize,
    pub n_samples: usize,
    pub seed: u64,
    /// `data[((sample * n_t) + t) * k_m + mode]`.
    data: Vec<f64>,
}

impl PeriodicField {
    pub fn zeros(tau: f64, n_t: usize, k_m: usize, n_samples: usize, seed: u64) -> Self {
        PeriodicField {
            tau,
            n_t,
            k_m,
            n_samples,
            seed,
            data: vec![0.0; n_samples * n_t * k_m],
        }
    }

    fn offset(&self, sample: usize, t_idx: usize) -> usize {
        ((sample * self.n_t) + t_idx) * self.k_m
    }

    pub fn coeffs_at(&self, sample: usize, t_idx: usize) -> &[f64] {
        let o = self.offset(sample, t_idx);
        &self.data[o..o + self.k_m]
    }

    pub fn field_at(&self, sample: usize, t_idx: usize) -> Field {
        Field { coeffs: self.coeffs_at(sample, t_idx).to_vec() }
    }

    pub fn set_field(&mut self, sample: usize, t_idx: usize, f: &Field) {
        let o = self.offset(sample, t_idx);
        self.data[o..o + self.k_m].copy_from_slice(&f.coeffs);
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Ensemble mean of the squared L² norm at one grid time.
    pub fn mean_sq_at(&self, t_idx: usize) -> f64 {
        let sq: Vec<f64> = (0..self.n_samples)
            .map(|s| {
                self.coeffs_at(s, t_idx)
                    .iter()
                    .map(|c| c * c)
                    .sum::<f64>()
            })
            .collect();
        stats::mean(&sq)
    }

    /// `sup_t mean_sq_at(t)` over the stored period.
    pub fn sup_mean_sq(&self) -> f64 {
        (0..self.n_t)
            .map(|t| self.mean_sq_at(t))
            .fold(0.0, f64::max)
    }
}

/// Weighted sup norm of the space of periodic candidates:
/// `sup_t exp(-2 Lambda |t|) E |f(t)|²` over the stored grid.
pub fn weighted_norm(field: &PeriodicField, lambda: f64) -> f64 {
    let dt = field.tau / field.n_t as f64;
    (0..field.n_t)
        .map(|t| {
            let w = (-2.0 * lambda * (t as f64 * dt).abs()).exp();
            w * field.mean_sq_at(t)
        })
        .fold(0.0, f64::max)
}

/// Same norm applied to the difference of two candidates.
pub fn weighted_norm_diff(a: &PeriodicField, b: &PeriodicField, lambda: f64) -> f64 {
    assert_eq!(a.data.len(), b.data.len());
    let dt = a.tau / a.n_t as f64;
    (0..a.n_t)
        .map(|t| {
            let sq: Vec<f64> = (0..a.n_samples)
                .map(|s| {
                    a.coeffs_at(s, t)
                        .iter()
                        .zip(b.coeffs_at(s, t))
                        .map(|(x, y)| (x - y) * (x - y))
                        .sum::<f64>()
                })
                .collect();
            let w = (-2.0 * lambda * (t as f64 * dt).abs()).exp();
            w * stats::mean(&sq)
        })
        .fold(0.0, f64::max)
}

/// Exponents below this underflow to zero after `exp`; skipping them saves
/// the call without changing any output bit.
const DEAD_EXPONENT: f64 = -720.0;

/// One sample's quadrature engine for the integral map.
///
/// Holds the projected drift along the stored period; `map_at` may then be
/// evaluated at any grid time whose window fits the path extent, with nodes
/// folded back into the period.
pub struct MapSweep<'a, 'b> {
    pub cfg: &'a SolverConfig,
    pub params: &'a CocycleParams<'a>,
    pub view: PathView<'b>,
    /// Projected drift `F(t_j, Y(t_j))` per folded node.
    pub g_table: Vec<Field>,
}

/// Project the drift along one sample's stored period, tracking the sup of
/// `|F|` and `|dF/du|` over every grid evaluation.
pub fn project_drift_table(
    y: &PeriodicField,
    sample: usize,
    cfg: &SolverConfig,
    params: &CocycleParams<'_>,
    drift: &dyn Drift,
    sup_f: &mut f64,
    sup_grad: &mut f64,
) -> Result<Vec<Field>> {
    let dt = cfg.dt();
    let mut table = Vec::with_capacity(cfg.n_t);
    for j in 0..cfg.n_t {
        let t = j as f64 * dt;
        let u = y.field_at(sample, j);
        let values = reconstruct(&u, params.basis)?;
        let mut fv = vec![0.0; values.len()];
        for (i, v) in values.iter().enumerate() {
            let f = drift.eval(t, *v);
            if !f.is_finite() {
                return Err(Error::NonFiniteDrift { t, u: *v });
            }
            fv[i] = f;
            *sup_f = sup_f.max(f.abs());
            *sup_grad = sup_grad.max(drift.grad_u(t, *v).abs());
        }
        table.push(project(&fv, params.basis)?);
    }
    Ok(table)
}

impl<'a, 'b> MapSweep<'a, 'b> {
    pub fn new(
        cfg: &'a SolverConfig,
        params: &'a CocycleParams<'a>,
        view: PathView<'b>,
        g_table: Vec<Field>,
    ) -> Self {
        MapSweep { cfg, params, view, g_table }
    }

    /// Evaluate the map at grid time `t_steps` (view-relative steps).
    pub fn map_at(&self, t_steps: i64) -> Result<Field> {
        let n_win = self.cfg.n_win();
        self.view
            .check_window(t_steps - n_win, t_steps + n_win)
            .map_err(|_| Error::WindowExceedsExtent {
                lo: t_steps - n_win,
                hi: t_steps + n_win,
            })?;
        let params = self.params;
        let n_t = self.cfg.n_t as i64;
        let dt = self.cfg.dt();
        let m = params.split();
        let k_m = params.k_m();
        let mut acc = vec![0.0; k_m];

        // forward integral over stable modes: s in [t - T_win, t]
        for i in 0..=n_win {
            let s_steps = t_steps - n_win + i;
            let w = if i == 0 || i == n_win { 0.5 * dt } else { dt };
            let g = &self.g_table[s_steps.rem_euclid(n_t) as usize];
            let lag = t_steps - s_steps;
            for k in m..k_m {
                let gk = g.coeffs[k];
                if gk == 0.0 {
                    continue;
                }
                let a = params.log_factor(k, lag, s_steps, &self.view);
                let cap = params.log_cap(k, lag, s_steps, &self.view);
                let e = a.min(cap);
                if e > DEAD_EXPONENT {
                    acc[k] += w * e.exp() * gk;
                }
            }
        }
        // backward integral over unstable modes: s in [t, t + T_win], negated
        for i in 0..=n_win {
            let s_steps = t_steps + i;
            let w = if i == 0 || i == n_win { 0.5 * dt } else { dt };
            let g = &self.g_table[s_steps.rem_euclid(n_t) as usize];
            let lag = t_steps - s_steps;
            for k in 0..m {
                let gk = g.coeffs[k];
                if gk == 0.0 {
                    continue;
                }
                let a = params.log_factor(k, lag, s_steps, &self.view);
                let cap = params.log_cap(k, lag, s_steps, &self.view);
                let e = a.min(cap);
                if e > DEAD_EXPONENT {
                    acc[k] -= w * e.exp() * gk;
                }
            }
        }
        Ok(Field { coeffs: acc })
    }
}

/// Apply the integral map once at grid time `t` for a single sample path.
///
/// `t` may lie outside `[0, tau)`: nodes fold back into the stored period
/// through the shift identity while the kernel keeps absolute times.
pub fn apply_map(
    y: &PeriodicField,
    sample: usize,
    cfg: &SolverConfig,
    params: &CocycleParams<'_>,
    view: &PathView<'_>,
    t: f64,
    drift: &dyn Drift,
) -> Result<Field> {
    let t_steps = timegrid::to_steps(t, cfg.dt())?;
    let mut sup_f = 0.0;
    let mut sup_g = 0.0;
    let g_table = project_drift_table(y, sample, cfg, params, drift, &mut sup_f, &mut sup_g)?;
    MapSweep::new(cfg, params, *view, g_table).map_at(t_steps)
}

/// Result of the Picard iteration.
#[derive(Debug, Clone)]
pub struct FixedPointRun {
    pub field: PeriodicField,
    pub iterations: usize,
    pub converged: bool,
    /// Weighted sup norms (squared scale) of successive differences.
    pub diff_history: Vec<f64>,
    /// Largest drift magnitude seen on the encountered range.
    pub observed_sup_f: f64,
    /// Largest drift `u`-gradient seen on the encountered range.
    pub observed_sup_grad_f: f64,
}

impl FixedPointRun {
    /// Error if the run stopped on `max_iters`.
    pub fn ensure_converged(&self, cfg: &SolverConfig) -> Result<()> {
        if self.converged {
            Ok(())
        } else {
            Err(Error::NoConvergence {
                iters: self.iterations,
                last: self.diff_history.last().copied().unwrap_or(f64::NAN),
                tol: cfg.fp_tol,
            })
        }
    }

    /// Observed contraction ratio of successive difference amplitudes
    /// (square roots of the recorded squared norms).
    pub fn contraction_ratio(&self) -> Option<f64> {
        let n = self.diff_history.len();
        if n < 2 || self.diff_history[n - 2] == 0.0 {
            return None;
        }
        Some((self.diff_history[n - 1] / self.diff_history[n - 2]).sqrt())
    }

    /// A-posteriori residual bound `d_last² / (1 - rho)²` from the last
    /// difference amplitude and the observed contraction ratio.
    pub fn residual_certificate(&self) -> Option<f64> {
        let d_last_sq = *self.diff_history.last()?;
        match self.contraction_ratio() {
            Some(rho) if rho < 1.0 => Some(d_last_sq / ((1.0 - rho) * (1.0 - rho))),
            _ => {
                if d_last_sq == 0.0 {
                    Some(0.0)
                } else {
                    None
                }
            }
        }
    }
}

/// Picard iteration `Y_{n+1} = M(Y_n)` from `Y_0 = 0`, per sample path, in
/// lockstep across the ensemble. Stops when the weighted sup norm of the
/// difference drops below `fp_tol`; hitting `max_iters` is reported, not
/// fatal.
pub fn solve_fixed_point(
    cfg: &SolverConfig,
    params: &CocycleParams<'_>,
    ensemble: &[WienerGrid],
    drift: &dyn Drift,
) -> Result<FixedPointRun> {
    let k_m = params.k_m();
    let seed = ensemble.first().map(|g| g.seed).unwrap_or(0);
    let mut field = PeriodicField::zeros(cfg.tau, cfg.n_t, k_m, ensemble.len(), seed);
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut sup_f = 0.0f64;
    let mut sup_grad = 0.0f64;

    for _ in 0..cfg.max_iters {
        iterations += 1;
        let sweeps: Vec<Result<(Vec<Field>, f64, f64)>> =
            exec::map_range(ensemble.len(), |s| {
                let mut local_sup_f = 0.0;
                let mut local_sup_g = 0.0;
                let g_table = project_drift_table(
                    &field,
                    s,
                    cfg,
                    params,
                    drift,
                    &mut local_sup_f,
                    &mut local_sup_g,
                )?;
                let sweep = MapSweep::new(cfg, params, ensemble[s].view(), g_table);
                let mut new_fields = Vec::with_capacity(cfg.n_t);
                for j in 0..cfg.n_t {
                    new_fields.push(sweep.map_at(j as i64)?);
                }
                Ok((new_fields, local_sup_f, local_sup_g))
            });

        let mut next = PeriodicField::zeros(cfg.tau, cfg.n_t, k_m, ensemble.len(), seed);
        for (s, res) in sweeps.into_iter().enumerate() {
            let (fields, lf, lg) = res?;
            sup_f = sup_f.max(lf);
            sup_grad = sup_grad.max(lg);
            for (j, f) in fields.into_iter().enumerate() {
                if !f.is_finite() {
                    return Err(Error::NonFiniteDrift { t: j as f64 * cfg.dt(), u: f64::NAN });
                }
                next.set_field(s, j, &f);
            }
        }

        let diff = weighted_norm_diff(&next, &field, params.lambda);
        history.push(diff);
        field = next;
        if diff < cfg.fp_tol {
            converged = true;
            break;
        }
    }

    Ok(FixedPointRun {
        field,
        iterations,
        converged,
        diff_history: history,
        observed_sup_f: sup_f,
        observed_sup_grad_f: sup_grad,
    })
}

/// `sup_t E |Y(t) - M(Y)(t)|²` over the stored period (unweighted).
pub fn residual(
    y: &PeriodicField,
    cfg: &SolverConfig,
    params: &CocycleParams<'_>,
    ensemble: &[WienerGrid],
    drift: &dyn Drift,
) -> Result<f64> {
    let per_sample: Vec<Result<Vec<f64>>> = exec::map_range(ensemble.len(), |s| {
        let mut a = 0.0;
        let mut b = 0.0;
        let g_table = project_drift_table(y, s, cfg, params, drift, &mut a, &mut b)?;
        let sweep = MapSweep::new(cfg, params, ensemble[s].view(), g_table);
        let mut sq = Vec::with_capacity(cfg.n_t);
        for j in 0..cfg.n_t {
            let mapped = sweep.map_at(j as i64)?;
            sq.push(mapped.sub(&y.field_at(s, j)).norm_sq());
        }
        Ok(sq)
    });
    let mut per_t = vec![Vec::with_capacity(ensemble.len()); cfg.n_t];
    for res in per_sample {
        for (j, v) in res?.into_iter().enumerate() {
            per_t[j].push(v);
        }
    }
    Ok(per_t
        .iter()
        .map(|v| stats::mean(v))
        .fold(0.0, f64::max))
}

/// `sup_t E |M(Y)(t + tau, w) - M(Y)(t, theta_tau w)|²`.
///
/// Grid alignment makes the identity structural; the gap certifies that the
/// shifted-view code path reproduces the absolute-time evaluation.
pub fn periodicity_gap(
    y: &PeriodicField,
    cfg: &SolverConfig,
    params: &CocycleParams<'_>,
    ensemble: &[WienerGrid],
    drift: &dyn Drift,
) -> Result<f64> {
    let n_t = cfg.n_t as i64;
    let per_sample: Vec<Result<Vec<f64>>> = exec::map_range(ensemble.len(), |s| {
        let mut a = 0.0;
        let mut b = 0.0;
        let g_table = project_drift_table(y, s, cfg, params, drift, &mut a, &mut b)?;
        let base = ensemble[s].view();
        let shifted = base.shift_steps(n_t)?;
        let sweep_base = MapSweep::new(cfg, params, base, g_table.clone());
        let sweep_shift = MapSweep::new(cfg, params, shifted, g_table);
        let mut sq = Vec::with_capacity(cfg.n_t);
        for j in 0..n_t {
            let lhs = sweep_base.map_at(j + n_t)?;
            let rhs = sweep_shift.map_at(j)?;
            sq.push(lhs.sub(&rhs).norm_sq());
        }
        Ok(sq)
    });
    let mut per_t = vec![Vec::with_capacity(ensemble.len()); cfg.n_t];
    for res in per_sample {
        for (j, v) in res?.into_iter().enumerate() {
            per_t[j].push(v);
        }
    }
    Ok(per_t
        .iter()
        .map(|v| stats::mean(v))
        .fold(0.0, f64::max))
}

/// One truncation level offered to the localization: the solved field and
/// the per-sample dichotomy constants at that cap.
pub struct LocalizationLevel<'a> {
    pub cap_level: f64,
    pub field: &'a PeriodicField,
    pub c_lambda: &'a [f64],
}

/// Localized assembly across truncation levels.
#[derive(Debug, Clone)]
pub struct Localized {
    pub field: PeriodicField,
    /// Index into the level list chosen per sample; `None` when no level
    /// admitted the sample.
    pub chosen_level: Vec<Option<usize>>,
    /// Fraction of samples covered by some level.
    pub coverage_fraction: f64,
}

/// Per sample, select the smallest cap level whose dichotomy constant
/// admits the path (`C_Lambda < cap`), and assemble the corresponding
/// solution. Uncovered samples keep the largest level's values but are
/// flagged and excluded from coverage.
pub fn localize(levels: &[LocalizationLevel<'_>]) -> Result<Localized> {
    let first = levels.first().ok_or_else(|| {
        Error::InvalidParameter("localize needs at least one level".into())
    })?;
    let n_samples = first.field.n_samples;
    for lv in levels.windows(2) {
        if lv[0].cap_level >= lv[1].cap_level {
            return Err(Error::InvalidParameter(
                "localization levels must be strictly increasing in cap".into(),
            ));
        }
    }
    for lv in levels {
        if lv.field.n_samples != n_samples || lv.c_lambda.len() != n_samples {
            return Err(Error::DimensionMismatch {
                expected: n_samples,
                got: lv.c_lambda.len().min(lv.field.n_samples),
                context: "localize: level sample count",
            });
        }
    }
    let template = first.field;
    let mut out = PeriodicField::zeros(
        template.tau,
        template.n_t,
        template.k_m,
        n_samples,
        template.seed,
    );
    let mut chosen = vec![None; n_samples];
    let mut covered = 0usize;
    for s in 0..n_samples {
        let pick = levels
            .iter()
            .position(|lv| lv.c_lambda[s] < lv.cap_level);
        let idx = match pick {
            Some(i) => {
                covered += 1;
                chosen[s] = Some(i);
                i
            }
            None => levels.len() - 1,
        };
        for j in 0..template.n_t {
            let f = levels[idx].field.field_at(s, j);
            out.set_field(s, j, &f);
        }
    }
    Ok(Localized {
        field: out,
        chosen_level: chosen,
        coverage_fraction: covered as f64 / n_samples.max(1) as f64,
    })
}
