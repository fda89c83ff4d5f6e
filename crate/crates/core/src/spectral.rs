//! Dirichlet eigenbasis of `L = d²/dx² + c` on an interval, the heat
//! semigroup it generates, and the Nemytskii (superposition) operator.
//!
//! On the canonical domain `(0,1)` the eigenpairs are closed-form:
//! `mu_k = c - k² pi²` with `phi_k(x) = sqrt(2) sin(k pi x)`, so no
//! eigensolver is involved and both signs of spectrum are available through
//! the shift `c`. All spatial integrals use the composite trapezoid rule on
//! a uniform grid; the sampled sines are discretely orthonormal there, which
//! makes the projection/reconstruction pair exact on coefficients.

use crate::drift::Drift;
use crate::error::{Error, Result};

/// Interval domain and the spectral shift of `L = d²/dx² + c`.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize, PartialEq)]
pub struct DomainSpec {
    pub x_min: f64,
    pub x_max: f64,
    /// Grid point count, endpoints included.
    pub n_x: usize,
    /// Spectral shift `c`.
    pub c: f64,
}

impl DomainSpec {
    /// Canonical unit domain with Lebesgue measure one.
    pub fn unit(n_x: usize, c: f64) -> Self {
        DomainSpec { x_min: 0.0, x_max: 1.0, n_x, c }
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    fn validate(&self) -> Result<()> {
        if !(self.x_min < self.x_max) {
            return Err(Error::InvalidParameter(format!(
                "domain endpoints out of order: [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        if self.n_x < 8 {
            return Err(Error::InvalidParameter(format!(
                "n_x = {} below the minimum of 8",
                self.n_x
            )));
        }
        Ok(())
    }
}

/// Truncated eigenbasis: eigenvalues, sampled eigenfunctions, quadrature
/// weights, and the split index between positive and negative spectrum.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    pub domain: DomainSpec,
    /// `mu[k] = c - (k+1)² pi² / L²`, strictly descending.
    pub mu: Vec<f64>,
    /// Row-major eigenfunction samples, `phi[k * n_x + i]`.
    phi: Vec<f64>,
    /// Trapezoid weights on the grid.
    pub quad_weights: Vec<f64>,
    /// Number of positive eigenvalues; modes `0..split_index` are unstable.
    pub split_index: usize,
    /// Empirical constant: max over modes of |grad phi_k|_{L²} / sqrt(|mu_k|),
    /// gradient by centered differences.
    pub grad_constant: f64,
}

/// Spectral coefficient vector of a field in the truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub coeffs: Vec<f64>,
}

impl Field {
    pub fn zeros(k_m: usize) -> Self {
        Field { coeffs: vec![0.0; k_m] }
    }

    /// Unit vector along mode `k` (0-based).
    pub fn basis_vector(k_m: usize, k: usize) -> Self {
        let mut coeffs = vec![0.0; k_m];
        coeffs[k] = 1.0;
        Field { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// L² norm; equals the Euclidean coefficient norm by Parseval.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn scaled(&self, a: f64) -> Field {
        Field { coeffs: self.coeffs.iter().map(|c| a * c).collect() }
    }

    pub fn add(&self, other: &Field) -> Field {
        Field {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Field) -> Field {
        Field {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }
}

/// Tolerance below which an eigenvalue counts as zero (hyperbolicity fails).
pub const EIGENVALUE_GAP_TOL: f64 = 1e-9;

/// Build the truncated eigenbasis with `k_m` modes.
pub fn build_basis(domain: DomainSpec, k_m: usize) -> Result<SpectralBasis> {
    domain.validate()?;
    if k_m < 1 {
        return Err(Error::InvalidParameter("k_m must be at least 1".into()));
    }
    if domain.n_x < 4 * k_m {
        return Err(Error::GridTooCoarse {
            n_x: domain.n_x,
            required: 4 * k_m,
            modes: k_m,
        });
    }
    let len = domain.length();
    let n_x = domain.n_x;
    let h = len / (n_x - 1) as f64;

    let mut mu = Vec::with_capacity(k_m);
    for k in 1..=k_m {
        let val = domain.c - (k as f64 * std::f64::consts::PI / len).powi(2);
        if val.abs() < EIGENVALUE_GAP_TOL {
            return Err(Error::ZeroEigenvalue {
                index: k,
                value: val,
                tol: EIGENVALUE_GAP_TOL,
            });
        }
        mu.push(val);
    }
    let split_index = mu.iter().filter(|m| **m > 0.0).count();

    let amp = (2.0 / len).sqrt();
    let mut phi = vec![0.0; k_m * n_x];
    for k in 0..k_m {
        for i in 0..n_x {
            let x = domain.x_min + i as f64 * h;
            phi[k * n_x + i] =
                amp * ((k + 1) as f64 * std::f64::consts::PI * (x - domain.x_min) / len).sin();
        }
    }

    let mut quad_weights = vec![h; n_x];
    quad_weights[0] = 0.5 * h;
    quad_weights[n_x - 1] = 0.5 * h;

    // Centered-difference gradient norms; reported, not assumed (the
    // analytic value is k pi / L for each mode).
    let mut grad_constant: f64 = 0.0;
    for k in 0..k_m {
        let row = &phi[k * n_x..(k + 1) * n_x];
        let mut acc = 0.0;
        for i in 0..n_x {
            let g = if i == 0 {
                (row[1] - row[0]) / h
            } else if i == n_x - 1 {
                (row[n_x - 1] - row[n_x - 2]) / h
            } else {
                (row[i + 1] - row[i - 1]) / (2.0 * h)
            };
            acc += quad_weights[i] * g * g;
        }
        grad_constant = grad_constant.max(acc.sqrt() / mu[k].abs().sqrt());
    }

    Ok(SpectralBasis {
        domain,
        mu,
        phi,
        quad_weights,
        split_index,
        grad_constant,
    })
}

impl SpectralBasis {
    pub fn k_m(&self) -> usize {
        self.mu.len()
    }

    pub fn n_x(&self) -> usize {
        self.domain.n_x
    }

    /// Sampled eigenfunction `phi_k` (0-based mode index).
    pub fn phi_row(&self, k: usize) -> &[f64] {
        &self.phi[k * self.n_x()..(k + 1) * self.n_x()]
    }

    /// Smallest stable decay rate / unstable growth rate around the split:
    /// `min(-mu_{m+1}, mu_m)` in 1-based labels. When one side of the split
    /// is empty in the truncation, the gap is set by the other side alone.
    pub fn dichotomy_gap(&self) -> Result<f64> {
        let m = self.split_index;
        if m >= self.mu.len() {
            // all truncated modes unstable: the slowest growth rate binds
            return Ok(self.mu[m - 1]);
        }
        let stable = -self.mu[m];
        Ok(if m == 0 { stable } else { stable.min(self.mu[m - 1]) })
    }

    /// Discrete inner product with quadrature weights.
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n_x() {
            acc += self.quad_weights[i] * a[i] * b[i];
        }
        acc
    }
}

/// Project grid samples onto the basis.
pub fn project(grid_values: &[f64], basis: &SpectralBasis) -> Result<Field> {
    if grid_values.len() != basis.n_x() {
        return Err(Error::DimensionMismatch {
            expected: basis.n_x(),
            got: grid_values.len(),
            context: "project: grid values",
        });
    }
    let coeffs = (0..basis.k_m())
        .map(|k| basis.inner(grid_values, basis.phi_row(k)))
        .collect();
    Ok(Field { coeffs })
}

/// Evaluate a coefficient vector on the grid.
pub fn reconstruct(field: &Field, basis: &SpectralBasis) -> Result<Vec<f64>> {
    if field.len() != basis.k_m() {
        return Err(Error::DimensionMismatch {
            expected: basis.k_m(),
            got: field.len(),
            context: "reconstruct: field",
        });
    }
    let n_x = basis.n_x();
    let mut values = vec![0.0; n_x];
    for k in 0..basis.k_m() {
        let c = field.coeffs[k];
        if c == 0.0 {
            continue;
        }
        let row = basis.phi_row(k);
        for i in 0..n_x {
            values[i] += c * row[i];
        }
    }
    Ok(values)
}

/// Heat semigroup: multiply coefficient `k` by `exp(mu_k t)`.
pub fn heat_semigroup(basis: &SpectralBasis, t: f64, u: &Field) -> Result<Field> {
    if t < 0.0 {
        return Err(Error::NegativeTime { t });
    }
    if u.len() != basis.k_m() {
        return Err(Error::DimensionMismatch {
            expected: basis.k_m(),
            got: u.len(),
            context: "heat_semigroup: field",
        });
    }
    Ok(Field {
        coeffs: u
            .coeffs
            .iter()
            .zip(&basis.mu)
            .map(|(c, mu)| c * (mu * t).exp())
            .collect(),
    })
}

/// Nemytskii operator: apply the drift pointwise on the grid and project.
pub fn nemytskii(f: &dyn Drift, t: f64, u: &Field, basis: &SpectralBasis) -> Result<Field> {
    let values = reconstruct(u, basis)?;
    let mut fv = vec![0.0; values.len()];
    for (i, v) in values.iter().enumerate() {
        let y = f.eval(t, *v);
        if !y.is_finite() {
            return Err(Error::NonFiniteDrift { t, u: *v });
        }
        fv[i] = y;
    }
    project(&fv, basis)
}

/// Single mode of the Nemytskii image: `<F(t,u), phi_i>`.
pub fn nemytskii_mode(
    f: &dyn Drift,
    t: f64,
    u: &Field,
    basis: &SpectralBasis,
    i: usize,
) -> Result<f64> {
    let values = reconstruct(u, basis)?;
    let row = basis.phi_row(i);
    let mut acc = 0.0;
    for (j, v) in values.iter().enumerate() {
        let y = f.eval(t, *v);
        if !y.is_finite() {
            return Err(Error::NonFiniteDrift { t, u: *v });
        }
        acc += basis.quad_weights[j] * y * row[j];
    }
    Ok(acc)
}

/// Mercer-kernel application of the heat semigroup, by double quadrature.
///
/// Reference route for the kernel-consistency check; O(n_x²) and used only
/// in diagnostics/tests.
pub fn heat_semigroup_kernel(basis: &SpectralBasis, t: f64, u: &Field) -> Result<Vec<f64>> {
    if t < 0.0 {
        return Err(Error::NegativeTime { t });
    }
    let n_x = basis.n_x();
    let grid_u = reconstruct(u, basis)?;
    let mut out = vec![0.0; n_x];
    for i in 0..n_x {
        let mut acc = 0.0;
        for j in 0..n_x {
            let mut ker = 0.0;
            for k in 0..basis.k_m() {
                let row = basis.phi_row(k);
                ker += (basis.mu[k] * t).exp() * row[i] * row[j];
            }
            acc += basis.quad_weights[j] * ker * grid_u[j];
        }
        out[i] = acc;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drift::{ClosureDrift, ConstantDrift, ZeroDrift};
    use proptest::prelude::*;

    fn unit_basis(c: f64, k_m: usize) -> SpectralBasis {
        build_basis(DomainSpec::unit(128, c), k_m).unwrap()
    }

    #[test]
    fn dirichlet_laplacian_first_eigenvalue() {
        let basis = unit_basis(0.0, 4);
        assert!((basis.mu[0] + std::f64::consts::PI.powi(2)).abs() < 1e-12);
        assert!((basis.mu[0] + 9.8696).abs() < 1e-4);
        assert_eq!(basis.split_index, 0);
    }

    #[test]
    fn shifted_operator_split_index() {
        // c = 15: mu_1 = 15 - pi² > 0 > mu_2 = 15 - 4 pi².
        let basis = unit_basis(15.0, 4);
        assert_eq!(basis.split_index, 1);
        assert!((basis.mu[0] - 5.1304).abs() < 1e-4);
        assert!((basis.mu[1] + 24.478).abs() < 1e-3);
        for w in basis.mu.windows(2) {
            assert!(w[0] > w[1]);
        }
    }

    #[test]
    fn zero_eigenvalue_rejected() {
        let c = std::f64::consts::PI.powi(2); // mu_1 = 0 exactly
        let err = build_basis(DomainSpec::unit(128, c), 2).unwrap_err();
        assert!(matches!(err, Error::ZeroEigenvalue { index: 1, .. }));
    }

    #[test]
    fn coarse_grid_rejected() {
        let err = build_basis(DomainSpec::unit(32, 0.0), 16).unwrap_err();
        assert!(matches!(err, Error::GridTooCoarse { .. }));
    }

    #[test]
    fn eigenfunctions_orthonormal() {
        let basis = unit_basis(0.0, 16);
        for j in 0..16 {
            for k in 0..16 {
                let ip = basis.inner(basis.phi_row(j), basis.phi_row(k));
                let expect = if j == k { 1.0 } else { 0.0 };
                assert!(
                    (ip - expect).abs() < 1e-10,
                    "({j},{k}) inner product {ip}"
                );
            }
        }
    }

    #[test]
    fn gradient_norm_constant_reported() {
        let basis = unit_basis(0.0, 8);
        // Analytically |grad phi_k| = k pi = sqrt(|mu_k|) for c = 0, so the
        // centered-difference ratio sits just below 1.
        assert!(basis.grad_constant > 0.9 && basis.grad_constant <= 1.0 + 1e-9);
    }

    #[test]
    fn project_eigenfunction_gives_unit_vector() {
        let basis = unit_basis(0.0, 6);
        let f = project(basis.phi_row(0), &basis).unwrap();
        assert!((f.coeffs[0] - 1.0).abs() < 1e-12);
        for c in &f.coeffs[1..] {
            assert!(c.abs() < 1e-12);
        }
    }

    #[test]
    fn zero_field_reconstructs_to_zero() {
        let basis = unit_basis(0.0, 6);
        let values = reconstruct(&Field::zeros(6), &basis).unwrap();
        assert!(values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn heat_semigroup_identity_and_scalar_oracle() {
        let basis = unit_basis(0.0, 3);
        let u = Field::basis_vector(3, 0);
        let id = heat_semigroup(&basis, 0.0, &u).unwrap();
        assert_eq!(id.coeffs, u.coeffs);

        let v = heat_semigroup(&basis, 0.1, &u).unwrap();
        let oracle = (-0.1 * std::f64::consts::PI.powi(2)).exp();
        assert!((v.coeffs[0] - oracle).abs() < 1e-15);
        assert!((v.coeffs[0] - 0.372708).abs() < 1e-6);
    }

    #[test]
    fn semigroup_law() {
        let basis = unit_basis(3.0, 5);
        let u = Field { coeffs: vec![0.3, -1.2, 0.7, 0.01, 2.0] };
        let st = heat_semigroup(&basis, 0.25, &heat_semigroup(&basis, 0.5, &u).unwrap()).unwrap();
        let direct = heat_semigroup(&basis, 0.75, &u).unwrap();
        for (a, b) in st.coeffs.iter().zip(&direct.coeffs) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn negative_time_rejected() {
        let basis = unit_basis(0.0, 2);
        let err = heat_semigroup(&basis, -0.1, &Field::zeros(2)).unwrap_err();
        assert!(matches!(err, Error::NegativeTime { .. }));
    }

    #[test]
    fn stable_modes_contract() {
        let basis = unit_basis(0.0, 8);
        for k in 0..8 {
            for t in [0.0, 0.1, 1.0, 5.0] {
                assert!((basis.mu[k] * t).exp() <= 1.0);
            }
        }
    }

    #[test]
    fn nemytskii_zero_and_identity() {
        let basis = unit_basis(0.0, 8);
        let u = Field { coeffs: vec![0.4, -0.2, 0.1, 0.0, 0.3, -0.7, 0.05, 0.2] };
        let z = nemytskii(&ZeroDrift, 0.0, &u, &basis).unwrap();
        assert!(z.coeffs.iter().all(|c| *c == 0.0));

        let ident = ClosureDrift::new(|_, u| u, |_, _| 1.0);
        let v = nemytskii(&ident, 0.0, &u, &basis).unwrap();
        for (a, b) in v.coeffs.iter().zip(&u.coeffs) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn nemytskii_square_of_first_mode() {
        // F(u) = u² on u = phi_1: <2 sin²(pi x), sqrt(2) sin(pi x)> = 8 sqrt(2) / (3 pi).
        let basis = unit_basis(0.0, 4);
        let u = Field::basis_vector(4, 0);
        let sq = ClosureDrift::new(|_, u| u * u, |_, u| 2.0 * u);
        let mode = nemytskii_mode(&sq, 0.0, &u, &basis, 0).unwrap();
        let analytic = 8.0 * 2.0_f64.sqrt() / (3.0 * std::f64::consts::PI);
        assert!((analytic - 1.2004).abs() < 1e-4);
        // Endpoint derivatives of the integrand vanish, so trapezoid error is O(h^4).
        assert!((mode - analytic).abs() < 1e-7, "mode {mode} vs {analytic}");

        // High-resolution quadrature oracle on an 8x finer grid.
        let fine = build_basis(DomainSpec::unit(1025, 0.0), 4).unwrap();
        let oracle = nemytskii_mode(&sq, 0.0, &u, &fine, 0).unwrap();
        assert!((mode - oracle).abs() < 1e-7);
    }

    #[test]
    fn nemytskii_rejects_non_finite_drift() {
        let basis = unit_basis(0.0, 2);
        let u = Field { coeffs: vec![1.0, 0.0] };
        let bad = ClosureDrift::new(|_, u| 1.0 / (u - u), |_, _| 0.0);
        assert!(matches!(
            nemytskii(&bad, 0.0, &u, &basis),
            Err(Error::NonFiniteDrift { .. })
        ));
    }

    #[test]
    fn constant_drift_projects_onto_odd_modes() {
        let basis = unit_basis(0.0, 2);
        let f = nemytskii(&ConstantDrift(1.0), 0.0, &Field::zeros(2), &basis).unwrap();
        // <1, sqrt(2) sin(k pi x)> = sqrt(2) (1 - cos(k pi)) / (k pi)
        let expect0 = 2.0 * 2.0_f64.sqrt() / std::f64::consts::PI;
        assert!((f.coeffs[0] - expect0).abs() < 2e-4);
        assert!(f.coeffs[1].abs() < 1e-10);
    }

    #[test]
    fn kernel_route_matches_diagonal_route() {
        let basis = unit_basis(0.0, 8);
        let u = Field { coeffs: vec![0.5, -0.1, 0.2, 0.0, 0.05, 0.3, -0.2, 0.1] };
        let diag = reconstruct(&heat_semigroup(&basis, 0.05, &u).unwrap(), &basis).unwrap();
        let kernel = heat_semigroup_kernel(&basis, 0.05, &u).unwrap();
        for (a, b) in diag.iter().zip(&kernel) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn project_reconstruct_round_trip(coeffs in proptest::collection::vec(-10.0f64..10.0, 8)) {
            let basis = unit_basis(0.0, 8);
            let f = Field { coeffs };
            let back = project(&reconstruct(&f, &basis).unwrap(), &basis).unwrap();
            for (a, b) in back.coeffs.iter().zip(&f.coeffs) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn parseval(coeffs in proptest::collection::vec(-5.0f64..5.0, 8)) {
            let basis = build_basis(DomainSpec::unit(256, 0.0), 8).unwrap();
            let f = Field { coeffs };
            let values = reconstruct(&f, &basis).unwrap();
            let l2 = basis.inner(&values, &values).sqrt();
            prop_assert!((l2 - f.norm()).abs() < 1e-10);
        }
    }
}
