//! Young's master equation for the transverse-traceless h₀₀ mode:
//! h'' + C h' + D h = −(λ̃/A) h.

use crate::error::{Result, SpectrumError};
use crate::field::{dd_sqrt, Dd, Field};
use crate::metric::{warp_a, MetricParams};
use crate::problem::{NormalForm, Problem};
use crate::singular::{Endpoint, KnownExponent, RobinBc};

/// The constants b, c, d and the auxiliary fields of the master equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorCoefficients {
    pub metric: MetricParams,
}

struct Constants<T> {
    nu2: T,
    k0: T,
    b: T,
    c: T,
    d: T,
}

impl TensorCoefficients {
    fn constants<T: Field>(&self) -> Constants<T> {
        let nu2: T = self.metric.nu2();
        let one = T::one();
        let three = T::from_f64(3.0);
        let k0 = three + nu2.scale(6.0) - nu2 * nu2;
        Constants {
            nu2,
            k0,
            b: -(three + nu2 * nu2) / k0,
            c: nu2 * (one + nu2) / k0,
            d: (three - nu2) / k0,
        }
    }

    pub fn b(&self) -> f64 {
        self.constants::<f64>().b
    }
    pub fn c(&self) -> f64 {
        self.constants::<f64>().c
    }
    pub fn d(&self) -> f64 {
        self.constants::<f64>().d
    }

    /// W(x) = cx⁴ + bx² + d.
    pub fn w_poly<T: Field>(&self, x: T) -> T {
        let k = self.constants::<T>();
        let x2 = x * x;
        (k.c * x2 + k.b) * x2 + k.d
    }

    /// E(x) = 2x(b + 2cx²)/W(x).
    pub fn e_field<T: Field>(&self, x: T) -> T {
        let k = self.constants::<T>();
        x.scale(2.0) * (k.b + k.c.scale(2.0) * x * x) / self.w_poly(x)
    }

    /// F(x) = 2x(3+ν²+x²)/(B W) · (−1+2ν²−ν⁴)/(3+6ν²−ν⁴)².
    pub fn f_field<T: Field>(&self, x: T) -> T {
        let k = self.constants::<T>();
        let bm = (T::one() - k.nu2 * x * x) / k.k0;
        let factor = (-T::one() + k.nu2.scale(2.0) - k.nu2 * k.nu2) / (k.k0 * k.k0);
        x.scale(2.0) * (T::from_f64(3.0) + k.nu2 + x * x) / (bm * self.w_poly(x)) * factor
    }

    /// ω(x) = [4B''/B + E² − 2(2b + 12cx²)/W] / F.
    pub fn omega_field<T: Field>(&self, x: T) -> T {
        self.all(x).omega
    }

    /// C(x) = 3E + B'/B + ω. Odd, with a simple pole at x = 0.
    pub fn c_field<T: Field>(&self, x: T) -> T {
        self.all(x).c
    }

    /// D(x) = E²/2 + 3EB'/(2B) − (B'/B)² + (2b + 12cx²)/W + 3Eω/2. Even.
    pub fn d_field<T: Field>(&self, x: T) -> T {
        self.all(x).d
    }

    fn all<T: Field>(&self, x: T) -> Fields<T> {
        let k = self.constants::<T>();
        let one = T::one();
        let x2 = x * x;
        let bm = (one - k.nu2 * x2) / k.k0;
        let bp = -(k.nu2 * x).scale(2.0) / k.k0;
        let bpp = -k.nu2.scale(2.0) / k.k0;
        let w = (k.c * x2 + k.b) * x2 + k.d;
        let e = x.scale(2.0) * (k.b + k.c.scale(2.0) * x2) / w;
        let factor = (-one + k.nu2.scale(2.0) - k.nu2 * k.nu2) / (k.k0 * k.k0);
        let f = x.scale(2.0) * (T::from_f64(3.0) + k.nu2 + x2) / (bm * w) * factor;
        let w2 = (k.b.scale(2.0) + k.c.scale(12.0) * x2) / w;
        let omega = (bpp.scale(4.0) / bm + e * e - w2.scale(2.0)) / f;
        let lb = bp / bm;
        let c = e.scale(3.0) + lb + omega;
        let d = e * e.scale(0.5) + e * lb.scale(1.5) - lb * lb + w2 + e * omega.scale(1.5);
        Fields { omega, c, d }
    }
}

struct Fields<T> {
    omega: T,
    c: T,
    d: T,
}

/// Frobenius exponents p± of h₀₀ ~ (1−x²)^{−p} at the poles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndicialData {
    pub p_minus: f64,
    pub p_plus: f64,
}

/// The master equation together with its metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorProblem {
    pub coefficients: TensorCoefficients,
}

pub fn build_tensor(metric: MetricParams) -> TensorProblem {
    TensorProblem { coefficients: TensorCoefficients { metric } }
}

impl TensorProblem {
    pub fn metric(&self) -> MetricParams {
        self.coefficients.metric
    }

    /// λ = Λλ̃/(3(1+ν²)).
    pub fn lambda_from_tilde(&self, lambda_tilde: f64) -> f64 {
        lambda_from_tilde(lambda_tilde, &self.metric())
    }
}

impl Problem for TensorProblem {
    fn normal_form<T: Field>(&self, x: T) -> NormalForm<T> {
        let f = self.coefficients.all(x);
        let nu2: T = self.metric().nu2();
        NormalForm { drift: f.c, potential: f.d, weight: -T::one() / warp_a(x, nu2) }
    }

    fn divergence_bound(&self) -> f64 {
        // finite energy requires h₀₀ to diverge no faster than 1/(1∓x)
        1.0
    }

    fn label(&self) -> String {
        "tensor h00".to_string()
    }

    fn interior_singular_points(&self) -> Vec<f64> {
        vec![0.0]
    }
}

impl KnownExponent for TensorProblem {
    fn kept_exponent(&self) -> Option<Dd> {
        Some(-indicial_exponents_tensor_dd(&self.metric()).0)
    }
}

/// p± = (11 + 3ν² ± √(17 + 8ν² + ν⁴)) / (2(4 + ν²)).
pub fn indicial_exponents_tensor(metric: &MetricParams) -> IndicialData {
    let (m, p) = indicial_exponents_tensor_dd(metric);
    IndicialData { p_minus: f64::from_dd(m), p_plus: f64::from_dd(p) }
}

pub(crate) fn indicial_exponents_tensor_dd(metric: &MetricParams) -> (Dd, Dd) {
    let nu2: Dd = metric.nu2();
    let root = dd_sqrt(nu2 * nu2 + nu2 * 8.0 + 17.0);
    let base = nu2 * 3.0 + 11.0;
    let den = (nu2 + 4.0) * 2.0;
    ((base - root) / den, (base + root) / den)
}

/// Closed-form Robin data u'(±1) = ±(c0 + λ̃ c_λ) u(±1) for the stripped
/// tensor function u = (1−x²)^{p₋} h₀₀.
///
/// The λ̃-free coefficient carries the opposite overall sign to the printed
/// display; the sign used here is the one fixed by the endpoint series and
/// reproduces the published spectrum.
pub fn robin_tensor(metric: &MetricParams) -> Result<(RobinBc, RobinBc)> {
    let nu = metric.nu();
    let nu2 = nu * nu;
    let pm = indicial_exponents_tensor(metric).p_minus;
    let den = (4.0 + nu2) * (-3.0 + 2.0 * nu2 + nu2 * nu2) * (15.0 + 4.0 * nu2 - 2.0 * pm * (4.0 + nu2));
    if den.abs() < 1e-14 {
        return Err(SpectrumError::VanishingDenominator("tensor Robin coefficient"));
    }
    let nu3 = nu2 * nu;
    let c0 = ((-35732.0 * nu3 + 53792.0 * nu2 - 81660.0 * nu + 19596.0) * pm + 50620.0 * nu3
        - 76217.0 * nu2
        + 115668.0 * nu
        - 27783.0)
        / den;
    let c_lambda = (71.0 - 360.0 * nu + 233.0 * nu2 - 152.0 * nu3) / (2.0 * den);
    Ok((
        RobinBc { endpoint: Endpoint::Left, c0, c_lambda },
        RobinBc { endpoint: Endpoint::Right, c0, c_lambda },
    ))
}

/// λ = Λλ̃/(3(1+ν²)).
pub fn lambda_from_tilde(lambda_tilde: f64, metric: &MetricParams) -> f64 {
    let nu = metric.nu();
    metric.lambda_cc() * lambda_tilde / (3.0 * (1.0 + nu * nu))
}
