//! Drift nonlinearities `F(t, u)` applied through the Nemytskii operator.
//!
//! Implementations supply the value and the `u`-derivative in closed form;
//! the derivative feeds the chain-rule term of the Malliavin recursion and
//! the cutoff C¹ checks.

/// Scalar drift with its partial derivative in `u`.
pub trait Drift: Sync + Send {
    fn eval(&self, t: f64, u: f64) -> f64;
    fn grad_u(&self, t: f64, u: f64) -> f64;
}

/// `F = 0`.
pub struct ZeroDrift;

impl Drift for ZeroDrift {
    fn eval(&self, _t: f64, _u: f64) -> f64 {
        0.0
    }
    fn grad_u(&self, _t: f64, _u: f64) -> f64 {
        0.0
    }
}

/// `F = a`, independent of time and state.
pub struct ConstantDrift(pub f64);

impl Drift for ConstantDrift {
    fn eval(&self, _t: f64, _u: f64) -> f64 {
        self.0
    }
    fn grad_u(&self, _t: f64, _u: f64) -> f64 {
        0.0
    }
}

/// Pure periodic forcing `F = a sin(2 pi t / period)`.
pub struct SineForcing {
    pub amplitude: f64,
    pub period: f64,
}

impl Drift for SineForcing {
    fn eval(&self, t: f64, _u: f64) -> f64 {
        self.amplitude * (2.0 * std::f64::consts::PI * t / self.period).sin()
    }
    fn grad_u(&self, _t: f64, _u: f64) -> f64 {
        0.0
    }
}

/// `F = a tanh(u) + b sin(2 pi t / period)`: bounded with bounded gradient.
pub struct TanhPlusSine {
    pub tanh_amplitude: f64,
    pub sine_amplitude: f64,
    pub period: f64,
}

impl Drift for TanhPlusSine {
    fn eval(&self, t: f64, u: f64) -> f64 {
        self.tanh_amplitude * u.tanh()
            + self.sine_amplitude * (2.0 * std::f64::consts::PI * t / self.period).sin()
    }
    fn grad_u(&self, _t: f64, u: f64) -> f64 {
        let c = u.cosh();
        self.tanh_amplitude / (c * c)
    }
}

/// Allen-Cahn drift with periodic forcing: `F = u - u³ + sin t` (period 2 pi).
pub struct AllenCahnDrift;

impl Drift for AllenCahnDrift {
    fn eval(&self, t: f64, u: f64) -> f64 {
        u - u * u * u + t.sin()
    }
    fn grad_u(&self, _t: f64, u: f64) -> f64 {
        1.0 - 3.0 * u * u
    }
}

/// Drift from a pair of closures, for tests and one-off experiments.
pub struct ClosureDrift<F, G>
where
    F: Fn(f64, f64) -> f64 + Sync + Send,
    G: Fn(f64, f64) -> f64 + Sync + Send,
{
    f: F,
    g: G,
}

impl<F, G> ClosureDrift<F, G>
where
    F: Fn(f64, f64) -> f64 + Sync + Send,
    G: Fn(f64, f64) -> f64 + Sync + Send,
{
    pub fn new(f: F, g: G) -> Self {
        ClosureDrift { f, g }
    }
}

impl<F, G> Drift for ClosureDrift<F, G>
where
    F: Fn(f64, f64) -> f64 + Sync + Send,
    G: Fn(f64, f64) -> f64 + Sync + Send,
{
    fn eval(&self, t: f64, u: f64) -> f64 {
        (self.f)(t, u)
    }
    fn grad_u(&self, t: f64, u: f64) -> f64 {
        (self.g)(t, u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tanh_gradient_matches_finite_difference() {
        let d = TanhPlusSine { tanh_amplitude: 1.0, sine_amplitude: 0.5, period: 1.0 };
        let h = 1e-6;
        for u in [-2.0, -0.3, 0.0, 0.7, 1.9] {
            let fd = (d.eval(0.3, u + h) - d.eval(0.3, u - h)) / (2.0 * h);
            assert!((fd - d.grad_u(0.3, u)).abs() < 1e-8);
        }
    }

    #[test]
    fn allen_cahn_values() {
        let d = AllenCahnDrift;
        assert_eq!(d.eval(0.0, 2.0), 2.0 - 8.0);
        assert_eq!(d.grad_u(0.0, 1.0), -2.0);
    }
}
