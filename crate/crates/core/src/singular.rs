//! Regular singular endpoints: indicial exponents, removal of the singular
//! factor, and the eigenvalue-dependent Robin conditions that regularity of
//! the remaining factor imposes.
//!
//! Around a point x₀ write x = x₀ + s·t with s = ±1 chosen so that t ≥ 0 on
//! the domain. Multiplying h'' + P h' + (Q − λR) h = 0 by t² gives
//!
//!   t² h_tt + t P̂(t) h_t + (Q̂(t) + λ R̂(t)) h = 0,
//!   P̂ = s t P,  Q̂ = t² Q,  R̂ = −t² R,
//!
//! whose Taylor coefficients drive the usual Frobenius recursion. The
//! coefficients are obtained by sampling the closed-form fields on a circle
//! in the complex t-plane and applying an FFT.

use crate::error::{Result, SpectrumError};
use crate::field::{Dd, Field};
use crate::problem::{NormalForm, Problem};
use num_complex::Complex64;
use rustfft::FftPlanner;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Left,
    Right,
}

impl Endpoint {
    pub fn x(self) -> f64 {
        match self {
            Endpoint::Left => -1.0,
            Endpoint::Right => 1.0,
        }
    }

    /// Sign s in x = x₀ + s·t.
    pub fn direction(self) -> f64 {
        match self {
            Endpoint::Left => 1.0,
            Endpoint::Right => -1.0,
        }
    }
}

/// u'(±1) = ±(c0 + λ c_lambda) u(±1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobinBc {
    pub endpoint: Endpoint,
    pub c0: f64,
    pub c_lambda: f64,
}

impl RobinBc {
    /// The ratio u'/u at the endpoint for eigenvalue λ.
    pub fn log_derivative(&self, lambda: f64) -> f64 {
        let c = self.c0 + lambda * self.c_lambda;
        match self.endpoint {
            Endpoint::Right => c,
            Endpoint::Left => -c,
        }
    }
}

/// Radius of the sampling circle and number of samples for Taylor data.
pub const TAYLOR_RADIUS: f64 = 0.5;
pub const TAYLOR_SAMPLES: usize = 64;

/// Taylor coefficients of an analytic function from samples on |t| = r.
///
/// Returns the coefficients of t⁰ … t^{order} and the relative size of the
/// t⁻¹ Laurent coefficient, which is nonzero when f has a pole at t = 0.
pub fn taylor_coefficients(
    f: impl Fn(Complex64) -> Complex64,
    order: usize,
    radius: f64,
    samples: usize,
) -> (Vec<f64>, f64) {
    let mut buf: Vec<Complex64> = (0..samples)
        .map(|j| {
            let th = 2.0 * std::f64::consts::PI * j as f64 / samples as f64;
            f(Complex64::from_polar(radius, th))
        })
        .collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(samples).process(&mut buf);
    let scale = buf.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let pole = buf[samples - 1].norm() / scale;
    let coeffs = (0..=order)
        .map(|k| buf[k].re / samples as f64 / radius.powi(k as i32))
        .collect();
    (coeffs, pole)
}

/// Taylor data of P̂, Q̂, R̂ about a point.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalData {
    pub x0: f64,
    pub direction: f64,
    pub p_hat: Vec<f64>,
    pub q_hat: Vec<f64>,
    pub r_hat: Vec<f64>,
}

impl LocalData {
    pub fn collect(
        form: impl Fn(Complex64) -> NormalForm<Complex64>,
        x0: f64,
        direction: f64,
        order: usize,
        radius: f64,
    ) -> Result<Self> {
        let at = |t: Complex64| form(Complex64::new(x0, 0.0) + t * direction);
        let (p_hat, e1) = taylor_coefficients(|t| t * direction * at(t).drift, order, radius, TAYLOR_SAMPLES);
        let (q_hat, e2) = taylor_coefficients(|t| t * t * at(t).potential, order, radius, TAYLOR_SAMPLES);
        let (r_hat, e3) = taylor_coefficients(|t| -t * t * at(t).weight, order, radius, TAYLOR_SAMPLES);
        let worst = e1.max(e2).max(e3);
        if worst > 1e-9 {
            return Err(SpectrumError::IrregularSingularPoint {
                x: x0,
                detail: format!("pole of t-scaled coefficient survives (relative size {worst:.2e})"),
            });
        }
        if r_hat[0].abs() > 1e-9 * (1.0 + r_hat[1].abs()) {
            return Err(SpectrumError::IrregularSingularPoint {
                x: x0,
                detail: "eigenvalue enters the indicial equation".into(),
            });
        }
        Ok(Self { x0, direction, p_hat, q_hat, r_hat })
    }

    /// Indicial polynomial I(σ) = σ(σ−1) + P̂₀σ + Q̂₀.
    pub fn indicial(&self, sigma: f64) -> f64 {
        sigma * (sigma - 1.0) + self.p_hat[0] * sigma + self.q_hat[0]
    }

    /// Both roots of the indicial equation, ascending. A slightly negative
    /// discriminant from round-off is treated as a double root.
    pub fn exponents(&self) -> Result<[f64; 2]> {
        let b = self.p_hat[0] - 1.0;
        let c = self.q_hat[0];
        let disc = b * b - 4.0 * c;
        let scale = 1.0 + b * b + c.abs();
        if disc < -1e-10 * scale {
            return Err(SpectrumError::BranchSelection {
                x: self.x0,
                detail: format!("complex indicial exponents (discriminant {disc:.3e})"),
            });
        }
        let r = disc.max(0.0).sqrt();
        Ok([(-b - r) / 2.0, (-b + r) / 2.0])
    }

    /// Frobenius coefficients a₀ = 1, a₁, …, a_order of the branch t^σ.
    pub fn series(&self, sigma: f64, lambda: f64, order: usize) -> Result<Vec<f64>> {
        let order = order.min(self.p_hat.len() - 1);
        let mut a = vec![0.0; order + 1];
        a[0] = 1.0;
        for k in 1..=order {
            let den = self.indicial(sigma + k as f64);
            if den.abs() < 1e-10 {
                return Err(SpectrumError::ResonantSeries { x: self.x0 });
            }
            let mut acc = 0.0;
            for j in 0..k {
                let m = k - j;
                acc += ((sigma + j as f64) * self.p_hat[m] + self.q_hat[m] + lambda * self.r_hat[m]) * a[j];
            }
            a[k] = -acc / den;
        }
        Ok(a)
    }
}

/// Indicial exponents of `problem` at an endpoint, ascending.
pub fn indicial_exponents<P: Problem>(problem: &P, endpoint: Endpoint) -> Result<[f64; 2]> {
    LocalData::collect(|x| problem.normal_form(x), endpoint.x(), endpoint.direction(), 2, TAYLOR_RADIUS)?
        .exponents()
}

/// A problem after the singular factor has been removed:
/// h = u / ((1+x)^{p_left} (1−x)^{p_right}), with u regular at both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct StrippedProblem<P> {
    pub problem: P,
    pub p_left: f64,
    pub p_right: f64,
    p_left_dd: Dd,
    p_right_dd: Dd,
    pub exponents_left: [f64; 2],
    pub exponents_right: [f64; 2],
    pub robin_left: RobinBc,
    pub robin_right: RobinBc,
}

/// Problems whose kept endpoint exponent is known in closed form. The closed
/// value is used only after it agrees with the generic indicial solve.
pub trait KnownExponent {
    fn kept_exponent(&self) -> Option<Dd> {
        None
    }
}

fn select_branch<P: Problem>(problem: &P, endpoint: Endpoint, roots: [f64; 2]) -> Result<f64> {
    // strict inequality with a margin, so that a root sitting on the bound
    // up to round-off counts as inadmissible
    let bound = problem.divergence_bound() - 1e-9;
    let x = endpoint.x();
    if (roots[1] - roots[0]).abs() < 1e-7 {
        // double root: the second solution carries a logarithm and is
        // excluded by regularity
        let s = 0.5 * (roots[0] + roots[1]);
        if -s < bound {
            return Ok(s);
        }
        return Err(SpectrumError::BranchSelection { x, detail: "double root is not admissible".into() });
    }
    let ok: Vec<f64> = roots.iter().copied().filter(|s| -s < bound).collect();
    match ok.len() {
        1 => Ok(ok[0]),
        0 => Err(SpectrumError::BranchSelection { x, detail: format!("no admissible branch among {roots:?}") }),
        _ => Err(SpectrumError::BranchSelection { x, detail: format!("both branches {roots:?} admissible") }),
    }
}

/// Removes the singular factor selected by the normalizability criterion and
/// derives the Robin conditions for the regular factor.
pub fn strip<P: Problem + KnownExponent + Clone>(problem: &P) -> Result<StrippedProblem<P>> {
    let mut kept = [Dd::from(0.0); 2];
    let mut roots = [[0.0; 2]; 2];
    for (i, end) in [Endpoint::Left, Endpoint::Right].into_iter().enumerate() {
        roots[i] = indicial_exponents(problem, end)?;
        let s = select_branch(problem, end, roots[i])?;
        kept[i] = match problem.kept_exponent() {
            Some(exact) => {
                let e = f64::from_dd(exact);
                if (e - s).abs() > 1e-10 * (1.0 + e.abs()) {
                    return Err(SpectrumError::BranchSelection {
                        x: end.x(),
                        detail: format!("closed-form exponent {e} disagrees with series value {s}"),
                    });
                }
                exact
            }
            None => Dd::from(s),
        };
    }
    let mut sp = StrippedProblem {
        problem: problem.clone(),
        p_left: -f64::from_dd(kept[0]),
        p_right: -f64::from_dd(kept[1]),
        p_left_dd: -kept[0],
        p_right_dd: -kept[1],
        exponents_left: roots[0],
        exponents_right: roots[1],
        robin_left: RobinBc { endpoint: Endpoint::Left, c0: 0.0, c_lambda: 0.0 },
        robin_right: RobinBc { endpoint: Endpoint::Right, c0: 0.0, c_lambda: 0.0 },
    };
    sp.robin_left = robin_from_series(&sp, Endpoint::Left)?;
    sp.robin_right = robin_from_series(&sp, Endpoint::Right)?;
    Ok(sp)
}

impl<P: Problem> StrippedProblem<P> {
    /// Normal form of the equation satisfied by the regular factor u.
    pub fn u_form<T: Field>(&self, x: T) -> NormalForm<T> {
        let h = self.problem.normal_form(x);
        let one = T::one();
        let pl = T::from_dd(self.p_left_dd);
        let pr = T::from_dd(self.p_right_dd);
        let (xp, xm) = (one + x, one - x);
        let g = -pl / xp + pr / xm;
        let gp = pl / (xp * xp) + pr / (xm * xm);
        NormalForm {
            drift: g.scale(2.0) + h.drift,
            potential: gp + g * g + h.drift * g + h.potential,
            weight: h.weight,
        }
    }

    /// Taylor data of the u-equation about an endpoint or interior point.
    pub fn local_data(&self, x0: f64, direction: f64, order: usize) -> Result<LocalData> {
        LocalData::collect(|x| self.u_form(x), x0, direction, order, TAYLOR_RADIUS)
    }

    /// The multiplier (1+x)^{−p_left}(1−x)^{−p_right} that turns u into h.
    pub fn singular_factor(&self, x: f64) -> f64 {
        (1.0 + x).powf(-self.p_left) * (1.0 - x).powf(-self.p_right)
    }

    pub fn reconstruct(&self, x: f64, u: f64) -> f64 {
        u * self.singular_factor(x)
    }

    pub fn restrip(&self, x: f64, h: f64) -> f64 {
        h / self.singular_factor(x)
    }

    pub fn robin(&self, endpoint: Endpoint) -> RobinBc {
        match endpoint {
            Endpoint::Left => self.robin_left,
            Endpoint::Right => self.robin_right,
        }
    }
}

/// The regular branch exponent of the u-equation, which is zero up to
/// round-off after stripping.
fn regular_exponent(data: &LocalData) -> Result<f64> {
    let r = data.exponents()?;
    let s = if r[0].abs() < r[1].abs() { r[0] } else { r[1] };
    if s.abs() > 1e-8 {
        return Err(SpectrumError::BranchSelection {
            x: data.x0,
            detail: format!("stripped equation has no regular branch (exponents {r:?})"),
        });
    }
    Ok(s)
}

fn robin_at(data: &LocalData, endpoint: Endpoint) -> Result<RobinBc> {
    let sigma = regular_exponent(data)?;
    let den = data.indicial(sigma + 1.0);
    if den.abs() < 1e-10 {
        return Err(SpectrumError::ResonantSeries { x: data.x0 });
    }
    // a₁/a₀ = −(σP̂₁ + Q̂₁ + λR̂₁)/I(σ+1) and u'(x₀) = s·a₁/a₀·u(x₀), which is
    // ±(c0 + λ c_lambda) at x₀ = ±1 with the coefficients below
    Ok(RobinBc {
        endpoint,
        c0: (sigma * data.p_hat[1] + data.q_hat[1]) / den,
        c_lambda: data.r_hat[1] / den,
    })
}

/// Robin data from the first subleading term of the endpoint series of u.
///
/// The expansion is carried to third order at two sampling radii; a mismatch
/// between them beyond 1e-9 is reported as an irregular endpoint.
pub fn robin_from_series<P: Problem>(stripped: &StrippedProblem<P>, endpoint: Endpoint) -> Result<RobinBc> {
    let near = LocalData::collect(|x| stripped.u_form(x), endpoint.x(), endpoint.direction(), 3, TAYLOR_RADIUS)?;
    let nearer =
        LocalData::collect(|x| stripped.u_form(x), endpoint.x(), endpoint.direction(), 3, 0.5 * TAYLOR_RADIUS)?;
    let a = robin_at(&near, endpoint)?;
    let b = robin_at(&nearer, endpoint)?;
    let drift = (a.c0 - b.c0).abs() / (1.0 + a.c0.abs()) + (a.c_lambda - b.c_lambda).abs() / (1.0 + a.c_lambda.abs());
    if drift > 1e-9 {
        return Err(SpectrumError::IrregularSingularPoint {
            x: endpoint.x(),
            detail: format!("endpoint series inconsistent between sampling radii ({drift:.2e})"),
        });
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taylor_of_geometric_series() {
        let (c, pole) = taylor_coefficients(|t| 1.0 / (Complex64::new(2.0, 0.0) - t), 6, 0.5, 64);
        for (k, v) in c.iter().enumerate() {
            assert!((v - 0.5_f64.powi(k as i32 + 1)).abs() < 1e-15);
        }
        assert!(pole < 1e-15);
        let (_, pole) = taylor_coefficients(|t| 1.0 / t, 3, 0.5, 64);
        assert!(pole > 0.1);
    }

    #[test]
    fn log_derivative_signs() {
        let r = RobinBc { endpoint: Endpoint::Right, c0: 1.0, c_lambda: 0.5 };
        let l = RobinBc { endpoint: Endpoint::Left, ..r };
        assert_eq!(r.log_derivative(2.0), 2.0);
        assert_eq!(l.log_derivative(2.0), -2.0);
    }
}
