//! The scalar Laplacian at fixed (n, k) as a singular Sturm–Liouville problem.

use crate::field::{Dd, Field};
use crate::metric::{warp_a, warp_b, MetricParams};
use crate::modes::ModeNumbers;
use crate::problem::{NormalForm, Problem, SturmLiouville};
use crate::singular::KnownExponent;

/// −(p u')' + q u = λ w u with p = A√B, q = [n²/(4α²SA) + μ/(4SB)]w, w = S√B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarProblem {
    pub modes: ModeNumbers,
    pub metric: MetricParams,
}

pub fn build_scalar(modes: ModeNumbers, metric: MetricParams) -> ScalarProblem {
    ScalarProblem { modes, metric }
}

impl SturmLiouville for ScalarProblem {
    fn p(&self, x: f64) -> f64 {
        let nu2 = self.metric.nu2();
        warp_a(x, nu2) * warp_b(x, nu2).sqrt()
    }
    fn q(&self, x: f64) -> f64 {
        let nu2 = self.metric.nu2();
        let (a, b) = (warp_a(x, nu2), warp_b(x, nu2));
        let s = self.metric.s_scale();
        let al = self.metric.alpha();
        let n = self.modes.n() as f64;
        let mu = self.modes.mu() as f64;
        (n * n / (4.0 * al * al * s * a) + mu / (4.0 * s * b)) * self.w(x)
    }
    fn w(&self, x: f64) -> f64 {
        self.metric.s_scale() * warp_b(x, self.metric.nu2()).sqrt()
    }
    fn p_reduced(&self, x: f64) -> f64 {
        let nu2: f64 = self.metric.nu2();
        let x2 = x * x;
        let big_n = 3.0 - nu2 - nu2 * (1.0 + nu2) * x2;
        big_n / (1.0 - nu2 * x2) * warp_b(x, nu2).sqrt()
    }
}

impl Problem for ScalarProblem {
    fn normal_form<T: Field>(&self, x: T) -> NormalForm<T> {
        // p'/p with p = A√B; A = N(1−x²)/M and B ∝ M, so
        // p'/p = N'/N − 2x/(1−x²) − M'/(2M).
        let nu2: T = self.metric.nu2();
        let one = T::one();
        let x2 = x * x;
        let big_n = T::from_f64(3.0) - nu2 - nu2 * (one + nu2) * x2;
        let big_n_prime = -(nu2 * (one + nu2) * x).scale(2.0);
        let big_m = one - nu2 * x2;
        let big_m_prime = -(nu2 * x).scale(2.0);
        let drift = big_n_prime / big_n - x.scale(2.0) / (one - x2) - big_m_prime / big_m.scale(2.0);

        let a = warp_a(x, nu2);
        let b = warp_b(x, nu2);
        let al: T = self.metric.alpha_in();
        let n = self.modes.n() as f64;
        let mu = self.modes.mu() as f64;
        let potential = -T::from_f64(n * n) / (al * al * a * a).scale(4.0) - T::from_f64(mu) / (a * b).scale(4.0);
        let weight = -self.metric.s_scale_in::<T>() / a;
        NormalForm { drift, potential, weight }
    }

    fn divergence_bound(&self) -> f64 {
        // square integrability against the weight w, which is finite and
        // nonzero at both poles
        0.5
    }

    fn label(&self) -> String {
        format!("scalar n={} k={}", self.modes.n(), self.modes.k())
    }
}

/// Regular solutions behave like (1−x²)^{|n|/2} at both poles.
impl KnownExponent for ScalarProblem {
    fn kept_exponent(&self) -> Option<Dd> {
        Some(Dd::from(self.modes.n() as f64 / 2.0))
    }
}

/// The ν = 0 reference problem
/// (1−x²)u'' − 2xu' + [λ − μ/4 − n²/(1−x²)]u = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceProblem {
    pub modes: ModeNumbers,
}

pub fn build_nu_zero_reference(modes: ModeNumbers) -> ReferenceProblem {
    ReferenceProblem { modes }
}

impl ReferenceProblem {
    /// Closed-form eigenvalue μ/4 + ℓ(ℓ+1), ℓ = n + N.
    pub fn exact_eigenvalue(&self, overtone: u32) -> f64 {
        let l = (self.modes.n() + overtone) as f64;
        self.modes.mu() as f64 / 4.0 + l * (l + 1.0)
    }
}

impl SturmLiouville for ReferenceProblem {
    fn p(&self, x: f64) -> f64 {
        1.0 - x * x
    }
    fn q(&self, x: f64) -> f64 {
        let n = self.modes.n() as f64;
        self.modes.mu() as f64 / 4.0 + n * n / (1.0 - x * x)
    }
    fn w(&self, _x: f64) -> f64 {
        1.0
    }
    fn p_reduced(&self, _x: f64) -> f64 {
        1.0
    }
}

impl Problem for ReferenceProblem {
    fn normal_form<T: Field>(&self, x: T) -> NormalForm<T> {
        let s = T::one() - x * x;
        let n = self.modes.n() as f64;
        let mu = self.modes.mu() as f64;
        NormalForm {
            drift: -x.scale(2.0) / s,
            potential: -T::from_f64(mu / 4.0) / s - T::from_f64(n * n) / (s * s),
            weight: -T::one() / s,
        }
    }

    fn divergence_bound(&self) -> f64 {
        0.5
    }

    fn label(&self) -> String {
        format!("reference n={} k={}", self.modes.n(), self.modes.k())
    }
}

impl KnownExponent for ReferenceProblem {
    fn kept_exponent(&self) -> Option<Dd> {
        Some(Dd::from(self.modes.n() as f64 / 2.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn page(n: i64, k: i64) -> ScalarProblem {
        build_scalar(ModeNumbers::family(n, k).unwrap(), MetricParams::page())
    }

    #[test]
    fn ground_family_has_no_potential() {
        let pr = page(0, 0);
        for i in 1..50 {
            let x = -1.0 + i as f64 / 25.0;
            assert_eq!(pr.q(x), 0.0);
        }
    }

    #[test]
    fn normal_form_matches_sturm_liouville_data() {
        let pr = page(2, 1);
        let h = 1e-5;
        for &x in &[-0.7, -0.2, 0.1, 0.55, 0.9] {
            let nf = pr.normal_form(x);
            let dp = (pr.p(x + h) - pr.p(x - h)) / (2.0 * h);
            assert!((nf.drift - dp / pr.p(x)).abs() < 1e-8);
            assert!((nf.potential + pr.q(x) / pr.p(x)).abs() < 1e-10 * (1.0 + nf.potential.abs()));
            assert!((nf.weight + pr.w(x) / pr.p(x)).abs() < 1e-12 * nf.weight.abs());
        }
    }

    #[test]
    fn coefficients_are_positive_and_even() {
        let pr = page(3, 2);
        for i in 1..400 {
            let x = -1.0 + i as f64 / 200.0;
            assert!(pr.p(x) > 0.0 && pr.w(x) > 0.0);
            assert!((pr.p(x) - pr.p(-x)).abs() < 1e-14);
            assert!((pr.q(x) - pr.q(-x)).abs() < 1e-10 * pr.q(x).abs());
        }
        assert_eq!(pr.p(1.0), 0.0);
        assert_eq!(pr.p(-1.0), 0.0);
    }

    #[test]
    fn q_over_w_blows_up_only_for_charged_modes() {
        let charged = page(1, 0);
        let neutral = page(0, 2);
        let xs = [0.9, 0.99, 0.999, 0.9999];
        let c: Vec<f64> = xs.iter().map(|&x| charged.q(x) / charged.w(x)).collect();
        assert!(c.windows(2).all(|p| p[1] > 5.0 * p[0]));
        let b: Vec<f64> = xs.iter().map(|&x| neutral.q(x) / neutral.w(x)).collect();
        assert!(b.iter().all(|v| v.is_finite() && *v < 10.0));
    }

    #[test]
    fn reference_eigenvalue_examples() {
        let r = build_nu_zero_reference(ModeNumbers::family(0, 0).unwrap());
        assert_eq!(r.exact_eigenvalue(1), 2.0);
        let r = build_nu_zero_reference(ModeNumbers::family(1, 1).unwrap());
        assert_eq!(r.exact_eigenvalue(0), 5.5);
    }
}
