//! Page metric constants and the warp functions A(x), B(x).

use crate::error::{Result, SpectrumError};
use crate::field::{Dd, Field};

/// Quartic whose root in (0,1) fixes the Page geometry.
pub fn page_quartic(nu: f64) -> f64 {
    (((nu + 4.0) * nu - 6.0) * nu + 12.0) * nu - 3.0
}

fn page_quartic_derivative(nu: f64) -> f64 {
    ((4.0 * nu + 12.0) * nu - 12.0) * nu + 12.0
}

/// Unique root of ν⁴ + 4ν³ − 6ν² + 12ν − 3 in (0,1).
///
/// Newton's method safeguarded by the bracket (0,1): the quartic is −3 at 0
/// and +8 at 1, and any step leaving the current bracket is replaced by
/// bisection.
pub fn solve_nu() -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut nu = 0.5;
    for _ in 0..200 {
        let f = page_quartic(nu);
        if f == 0.0 {
            return nu;
        }
        if f < 0.0 {
            lo = nu;
        } else {
            hi = nu;
        }
        let step = f / page_quartic_derivative(nu);
        let mut next = nu - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - nu).abs() <= 4.0 * f64::EPSILON * nu {
            return next;
        }
        nu = next;
    }
    nu
}

/// The Page root refined to double-double precision.
pub fn solve_nu_dd() -> Dd {
    let mut nu = Dd::from(solve_nu());
    for _ in 0..3 {
        let f = (((nu + 4.0) * nu - 6.0) * nu + 12.0) * nu - 3.0;
        let fp = ((nu * 4.0 + 12.0) * nu - 12.0) * nu + 12.0;
        nu -= f / fp;
    }
    nu
}

/// Metric parameters (ν, Λ) with the derived constants S and α.
///
/// S and α are computed from (ν, Λ) on construction and cannot be set
/// independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricParams {
    nu: f64,
    nu_dd: Dd,
    lambda_cc: f64,
    s_scale: f64,
    alpha: f64,
}

impl MetricParams {
    /// The Page metric with Λ = 1.
    pub fn page() -> Self {
        Self::from_nu_dd(solve_nu_dd(), 1.0)
    }

    /// The Page metric with a given cosmological constant.
    pub fn page_with_lambda(lambda_cc: f64) -> Result<Self> {
        if !(lambda_cc > 0.0 && lambda_cc.is_finite()) {
            return Err(SpectrumError::InvalidInput(format!(
                "cosmological constant must be positive, got {lambda_cc}"
            )));
        }
        Ok(Self::from_nu_dd(solve_nu_dd(), lambda_cc))
    }

    /// A member of the ν-family at fixed Λ, used when ν is an expansion
    /// parameter rather than the Page root.
    pub fn with_nu(nu: f64, lambda_cc: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&nu) {
            return Err(SpectrumError::InvalidInput(format!("nu must lie in [0,1), got {nu}")));
        }
        if !(lambda_cc > 0.0 && lambda_cc.is_finite()) {
            return Err(SpectrumError::InvalidInput(format!(
                "cosmological constant must be positive, got {lambda_cc}"
            )));
        }
        Ok(Self::from_nu_dd(Dd::from(nu), lambda_cc))
    }

    fn from_nu_dd(nu_dd: Dd, lambda_cc: f64) -> Self {
        let nu = nu_dd.hi() + nu_dd.lo();
        let nu2 = nu * nu;
        Self {
            nu,
            nu_dd,
            lambda_cc,
            s_scale: 3.0 * (1.0 + nu2) / lambda_cc,
            alpha: 1.0 / (2.0 * (3.0 + nu2)),
        }
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }
    pub fn nu_dd(&self) -> Dd {
        self.nu_dd
    }
    pub fn lambda_cc(&self) -> f64 {
        self.lambda_cc
    }
    /// S = 3(1+ν²)/Λ.
    pub fn s_scale(&self) -> f64 {
        self.s_scale
    }
    /// α = 1/(2(3+ν²)).
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// ν² in the requested arithmetic.
    pub fn nu2<T: Field>(&self) -> T {
        T::from_dd(self.nu_dd * self.nu_dd)
    }

    /// S in the requested arithmetic.
    pub fn s_scale_in<T: Field>(&self) -> T {
        let nu2: T = self.nu2();
        (T::one() + nu2).scale(3.0) / T::from_f64(self.lambda_cc)
    }

    /// α in the requested arithmetic.
    pub fn alpha_in<T: Field>(&self) -> T {
        let nu2: T = self.nu2();
        T::one() / (nu2 + T::from_f64(3.0)).scale(2.0)
    }
}

/// A(x) = (3 − ν² − ν²(1+ν²)x²)(1−x²)/(1 − ν²x²).
pub fn warp_a<T: Field>(x: T, nu2: T) -> T {
    let x2 = x * x;
    let num = T::from_f64(3.0) - nu2 - nu2 * (T::one() + nu2) * x2;
    num * (T::one() - x2) / (T::one() - nu2 * x2)
}

/// B(x) = (1 − ν²x²)/(3 + 6ν² − ν⁴).
pub fn warp_b<T: Field>(x: T, nu2: T) -> T {
    (T::one() - nu2 * x * x) / (T::from_f64(3.0) + nu2.scale(6.0) - nu2 * nu2)
}

pub fn metric_a(x: f64, params: &MetricParams) -> f64 {
    warp_a(x, params.nu2())
}

pub fn metric_b(x: f64, params: &MetricParams) -> f64 {
    warp_b(x, params.nu2())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn page_root_matches_printed_digits() {
        let nu = solve_nu();
        assert!((nu - 0.281702).abs() < 5e-7);
        assert!(page_quartic(nu).abs() < 1e-13);
    }

    #[test]
    fn root_agrees_with_plain_bisection() {
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if page_quartic(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((solve_nu() - lo).abs() < 1e-15);
    }

    #[test]
    fn dd_root_has_tiny_residual() {
        let nu = solve_nu_dd();
        let f = (((nu + 4.0) * nu - 6.0) * nu + 12.0) * nu - 3.0;
        assert!(f.hi().abs() < 1e-30);
    }

    #[test]
    fn derived_constants() {
        let p = MetricParams::page();
        let nu2 = p.nu() * p.nu();
        assert_eq!(p.s_scale(), 3.0 * (1.0 + nu2));
        assert_eq!(p.alpha(), 1.0 / (2.0 * (3.0 + nu2)));
        assert!(p.alpha() > 0.0 && p.alpha() < 1.0 / 6.0);
        let q = MetricParams::page_with_lambda(2.0).unwrap();
        assert!((q.s_scale() - p.s_scale() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(MetricParams::with_nu(1.2, 1.0).is_err());
        assert!(MetricParams::page_with_lambda(0.0).is_err());
    }
}
