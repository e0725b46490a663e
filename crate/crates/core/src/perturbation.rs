//! Small-squashing expansion of the scalar spectrum about ν = 0, where the
//! problem reduces to associated Legendre functions, and the large-overtone
//! fit λ ≈ a·N(N+2n+1) + const.
//!
//! The expansion works in the Schrödinger variable s = ∫√(w/p) dx, in which
//! the equation reads −y'' + V(s) y = λ y with y = u (pw)^{1/4}.

use crate::error::{Result, SpectrumError};
use crate::metric::MetricParams;
use crate::modes::ModeNumbers;
use crate::problem::SturmLiouville;
use crate::spectral::{diff_matrix, diff_matrix2, gauss_lobatto, Spectrum};
use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::num::NonZeroUsize;

fn gauss_legendre(points: usize) -> GaussLegendre {
    GaussLegendre::new(NonZeroUsize::new(points).expect("positive node count"))
}

/// Numerical Liouville transform of a Sturm–Liouville problem, tabulated on
/// the interior Gauss–Lobatto nodes.
#[derive(Debug, Clone)]
pub struct SchrodingerForm {
    /// Interior nodes in x, descending.
    pub x: Vec<f64>,
    /// s(x) at those nodes.
    pub s: Vec<f64>,
    /// V(s) at those nodes.
    pub potential: Vec<f64>,
    /// m = (pw)^{−1/4} at those nodes.
    pub m: Vec<f64>,
    /// Total length s(1).
    pub s_max: f64,
    speed: Vec<(f64, f64)>,
    quad: Vec<(f64, f64)>,
}

impl SchrodingerForm {
    /// s as a function of x.
    pub fn s_of_x(&self, x: f64) -> f64 {
        let theta = (-x).clamp(-1.0, 1.0).acos();
        self.s_of_theta(theta)
    }

    fn s_of_theta(&self, theta: f64) -> f64 {
        // ds/dθ is tabulated through its Chebyshev interpolant in x
        0.5 * theta
            * self
                .quad
                .iter()
                .map(|&(t, w)| w * self.speed_at(-(0.5 * theta * (t + 1.0)).cos()))
                .sum::<f64>()
    }

    fn speed_at(&self, x: f64) -> f64 {
        barycentric(&self.speed, x)
    }

    /// x as a function of s, by Newton iteration on s(x).
    pub fn x_of_s(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, self.s_max);
        let mut theta = PI * s / self.s_max;
        for _ in 0..50 {
            let f = self.s_of_theta(theta) - s;
            let step = f / self.speed_at(-theta.cos());
            theta = (theta - step).clamp(0.0, PI);
            if step.abs() < 1e-15 {
                break;
            }
        }
        -theta.cos()
    }
}

/// Barycentric interpolation on Chebyshev–Gauss–Lobatto nodes.
fn barycentric(table: &[(f64, f64)], x: f64) -> f64 {
    let last = table.len() - 1;
    let mut num = 0.0;
    let mut den = 0.0;
    for (j, &(xj, fj)) in table.iter().enumerate() {
        let d = x - xj;
        if d == 0.0 {
            return fj;
        }
        let mut c = if j % 2 == 0 { 1.0 } else { -1.0 };
        if j == 0 || j == last {
            c *= 0.5;
        }
        num += c * fj / d;
        den += c / d;
    }
    num / den
}

/// Resolution of the Chebyshev tables used by the transform.
const TRANSFORM_RESOLUTION: usize = 64;

/// Builds the Schrödinger form of −(pu')' + qu = λwu.
///
/// With x = −cos θ, ds/dθ = √(w/p̃) where p̃ = p/(1−x²) is regular at the
/// poles, and ln(pw)/4 = ½ ln sin θ + ¼ ln(p̃w). Only the smooth pieces are
/// differentiated spectrally.
pub fn schrodinger_transform_numeric<P: SturmLiouville>(problem: &P) -> Result<SchrodingerForm> {
    for x in [-1.0, 1.0] {
        let (pr, w) = (problem.p_reduced(x), problem.w(x));
        if !(pr.is_finite() && w.is_finite() && pr > 0.0 && w > 0.0) {
            return Err(SpectrumError::InvalidInput(format!(
                "√(w/p) is not integrable at x = {x} (p/(1−x²) = {pr}, w = {w})"
            )));
        }
    }
    let grid = gauss_lobatto(TRANSFORM_RESOLUTION)?;
    let xs = grid.points().to_vec();
    let n = TRANSFORM_RESOLUTION;
    let d1 = diff_matrix(&grid);
    let d2 = diff_matrix2(&grid);
    let speed: Vec<f64> = xs.iter().map(|&x| (problem.w(x) / problem.p_reduced(x)).sqrt()).collect();
    let log_part: Vec<f64> = xs.iter().map(|&x| 0.25 * (problem.p_reduced(x) * problem.w(x)).ln()).collect();
    let apply = |d: &faer::Mat<f64>, f: &[f64], i: usize| (0..=n).map(|j| d[(i, j)] * f[j]).sum::<f64>();

    let quad: Vec<(f64, f64)> = gauss_legendre(64).as_node_weight_pairs().to_vec();
    let mut form = SchrodingerForm {
        x: Vec::new(),
        s: Vec::new(),
        potential: Vec::new(),
        m: Vec::new(),
        s_max: 0.0,
        speed: xs.iter().copied().zip(speed.iter().copied()).collect(),
        quad,
    };
    form.s_max = form.s_of_theta(PI);
    for i in 1..n {
        let x = xs[i];
        let theta = PI * (n - i) as f64 / n as f64;
        let (st, ct) = theta.sin_cos();
        // θ-derivatives from x-derivatives: f_θ = sinθ f_x, f_θθ = sin²θ f_xx + cosθ f_x
        let g = speed[i];
        let g_t = st * apply(&d1, &speed, i);
        let l_x = apply(&d1, &log_part, i);
        let l_t = st * l_x;
        let l_tt = st * st * apply(&d2, &log_part, i) + ct * l_x;
        let phi_t = 0.5 * ct / st + l_t;
        let phi_tt = -0.5 / (st * st) + l_tt;
        let phi_s = phi_t / g;
        let phi_ss = phi_tt / (g * g) - g_t * phi_t / (g * g * g);
        form.x.push(x);
        form.s.push(form.s_of_theta(theta));
        form.potential.push(problem.q(x) / problem.w(x) + phi_ss + phi_s * phi_s);
        form.m.push((problem.p(x) * problem.w(x)).powf(-0.25));
    }
    Ok(form)
}

/// Unperturbed potential ¼csc²s(μ + 4n² − (μ−1)cos²s − 2).
pub fn v0(s: f64, n: f64, mu: f64) -> f64 {
    let (sn, cs) = s.sin_cos();
    0.25 * (mu + 4.0 * n * n - (mu - 1.0) * cs * cs - 2.0) / (sn * sn)
}

/// First-order correction to the potential, proportional to ν².
pub fn delta_v(s: f64, n: f64, mu: f64, nu: f64) -> f64 {
    let (sn, cs) = s.sin_cos();
    let scot = s * cs / sn;
    let n2 = n * n;
    let bracket = 5.0 * mu - 4.0 * (mu + 4.0 * n2 + 1.0) * (2.0 * s).cos() + 32.0 * n2 * scot - 16.0 * n2
        - mu * (4.0 * s).cos()
        - 8.0 * scot
        + 12.0;
    nu * nu * bracket / (32.0 * sn * sn)
}

/// λ⁽⁰⁾ = μ/4 + ℓ(ℓ+1), ℓ = n + N.
pub fn lambda_zero(modes: &ModeNumbers) -> f64 {
    let l = modes.ell_legendre() as f64;
    modes.mu() as f64 / 4.0 + l * (l + 1.0)
}

/// First-order shift ∫δV y² ds in closed form.
///
/// The overall sign is negative: this is the sign fixed by the defining
/// integral and by the N = 0 and λ₁,₀,₀ = 2 − 2ν² reductions.
pub fn lambda_one(modes: &ModeNumbers, nu: f64) -> f64 {
    let n = modes.n() as f64;
    let k = modes.k() as f64;
    let big_n = modes.overtone() as f64;
    let kk = -6.0 * k * k - 6.0 * k * (n + 1.0);
    let bracket = 4.0 * big_n.powi(4)
        + (16.0 * n + 8.0) * big_n.powi(3)
        + (kk + 20.0 * n * n + 21.0 * n + 1.0) * big_n * big_n
        + (2.0 * n + 1.0) * (kk + 4.0 * n * n + 5.0 * n - 3.0) * big_n
        - (2.0 * n - 1.0) * (2.0 * k * k * (n + 2.0) + 2.0 * k * (n * n + 3.0 * n + 2.0) - n * (n + 1.0));
    -nu * nu * bracket / ((2.0 * n + 2.0 * big_n - 1.0) * (2.0 * n + 2.0 * big_n + 3.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbativeResult {
    pub lambda0: f64,
    pub lambda1: f64,
    pub total: f64,
    /// Highest power of ν retained.
    pub order: u32,
}

pub fn first_order(modes: &ModeNumbers, nu: f64) -> PerturbativeResult {
    let lambda0 = lambda_zero(modes);
    let lambda1 = lambda_one(modes, nu);
    PerturbativeResult { lambda0, lambda1, total: lambda0 + lambda1, order: 2 }
}

/// Fully normalized associated Legendre function P̄_ℓⁿ(cos θ), with
/// ∫₋₁¹ P̄² dx = 1, evaluated from cos θ and sin θ separately so that the
/// sinⁿθ factor keeps full relative accuracy near the poles.
pub fn normalized_legendre(ell: u32, n: u32, cos_t: f64, sin_t: f64) -> f64 {
    if n > ell {
        return 0.0;
    }
    let mut pmm = std::f64::consts::FRAC_1_SQRT_2;
    for m in 1..=n {
        let m = m as f64;
        pmm *= ((2.0 * m + 1.0) / (2.0 * m)).sqrt() * sin_t;
    }
    if ell == n {
        return pmm;
    }
    let nf = n as f64;
    let mut prev = pmm;
    let mut cur = (2.0 * nf + 3.0).sqrt() * cos_t * pmm;
    for l in (n + 2)..=ell {
        let lf = l as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - nf * nf)).sqrt();
        let lm = lf - 1.0;
        let b = ((lm * lm - nf * nf) / (4.0 * lm * lm - 1.0)).sqrt();
        let next = a * (cos_t * cur - b * prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// Unperturbed eigenfunction y_{ℓ,n}(s), unit-normalized on (0, π).
pub fn unperturbed_eigenfunction(ell: u32, n: u32, s: f64) -> f64 {
    let (sn, cs) = s.sin_cos();
    sn.abs().sqrt() * normalized_legendre(ell, n, cs, sn)
}

/// Number of Gauss–Legendre nodes for integrals over (0, π).
const S_QUADRATURE_NODES: usize = 400;

/// ∫₀^π f(s, sin s, cos s) ds through s = π(1 + cos t)/2.
///
/// Both s and π − s are formed without cancellation, so integrands with
/// csc² factors stay accurate up to the endpoints.
pub fn integrate_over_s(f: impl Fn(f64, f64, f64) -> f64) -> f64 {
    let rule = gauss_legendre(S_QUADRATURE_NODES);
    rule.integrate(0.0, PI, |t| {
        let (sh, ch) = (0.5 * t).sin_cos();
        let s = PI * ch * ch;
        let rest = PI * sh * sh;
        let (sin_s, cos_s) = if s <= rest {
            s.sin_cos()
        } else {
            let (a, b) = rest.sin_cos();
            (a, -b)
        };
        f(s, sin_s, cos_s) * 0.5 * PI * t.sin()
    })
}

/// The four y²-weighted integrals of csc²s, cos2s·csc²s, cos4s·csc²s and
/// s·cot s·csc²s, in closed form.
pub fn intermediate_integrals(ell: u32, n: u32) -> Result<[f64; 4]> {
    if n == 0 {
        return Err(SpectrumError::InvalidInput("the intermediate integrals diverge for n = 0".into()));
    }
    if ell < n {
        return Err(SpectrumError::InvalidInput(format!("need ℓ ≥ n, got ℓ = {ell}, n = {n}")));
    }
    let l = ell as f64;
    let n = n as f64;
    let c1 = (2.0 * l + 1.0) / (2.0 * n);
    let c2 = (2.0 * l + 1.0 - 4.0 * n) / (2.0 * n);
    let c3 = (32.0 * n.powi(3) - 32.0 * n * l * l - 32.0 * n * l + 16.0 * n + 8.0 * l.powi(3) + 12.0 * l * l
        - 2.0 * l
        - 3.0)
        / (2.0 * n * (2.0 * l - 1.0) * (2.0 * l + 3.0));
    let c4 = (2.0 * l + 1.0) * (4.0 * n * n - 4.0 * n * l - 2.0 * n - 1.0) / (2.0 * n * (2.0 * n - 1.0) * (2.0 * n + 1.0));
    Ok([c1, c2, c3, c4])
}

/// The same four integrals by quadrature.
pub fn intermediate_integrals_quadrature(ell: u32, n: u32) -> [f64; 4] {
    let y2 = |sn: f64, cs: f64| sn * normalized_legendre(ell, n, cs, sn).powi(2);
    [
        integrate_over_s(|_, sn, cs| y2(sn, cs) / (sn * sn)),
        integrate_over_s(|s, sn, cs| (2.0 * s).cos() * y2(sn, cs) / (sn * sn)),
        integrate_over_s(|s, sn, cs| (4.0 * s).cos() * y2(sn, cs) / (sn * sn)),
        integrate_over_s(|s, sn, cs| s * cs / sn * y2(sn, cs) / (sn * sn)),
    ]
}

/// ∫₀^π δV y² ds by quadrature. Finite only for n ≥ 1.
pub fn lambda_one_quadrature(modes: &ModeNumbers, nu: f64) -> Result<f64> {
    if modes.n() == 0 {
        return Err(SpectrumError::InvalidInput("the first-order integral diverges termwise for n = 0".into()));
    }
    let ell = modes.ell_legendre() as u32;
    let n = modes.n();
    let mu = modes.mu() as f64;
    let nf = n as f64;
    Ok(integrate_over_s(|s, sn, cs| {
        let scot = s * cs / sn;
        let n2 = nf * nf;
        let bracket = 5.0 * mu - 4.0 * (mu + 4.0 * n2 + 1.0) * (2.0 * s).cos() + 32.0 * n2 * scot - 16.0 * n2
            - mu * (4.0 * s).cos()
            - 8.0 * scot
            + 12.0;
        let y2 = sn * normalized_legendre(ell, n, cs, sn).powi(2);
        nu * nu * bracket / (32.0 * sn * sn) * y2
    }))
}

/// Coefficients of λ₁,₀,₀ in powers of ν².
#[derive(Debug, Clone, PartialEq)]
pub struct GroundSeries {
    /// coefficients[j] multiplies ν^{2j}.
    pub coefficients: Vec<f64>,
    pub nu: f64,
    /// Highest power of ν in the partial sum.
    pub order: u32,
    pub partial_sum: f64,
}

/// Size of the Legendre basis used by the high-order recursion.
pub const SERIES_BASIS: usize = 60;
const SERIES_QUADRATURE: usize = 300;
const SERIES_CONTOUR_RADIUS: f64 = 0.25;
const SERIES_CONTOUR_SAMPLES: usize = 64;

/// p and w of the (0,0) problem at complex ε = ν², Λ = 1, divided by √3 so
/// that the ε = 0 pencil is (diag ℓ(ℓ+1), I).
fn ground_coefficients(x: f64, eps: Complex64) -> (Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    let x2 = x * x;
    let big_n = 3.0 - eps - eps * (one + eps) * x2;
    let big_m = one - eps * x2;
    let a = big_n * (1.0 - x2) / big_m;
    let b = big_m / (3.0 + 6.0 * eps - eps * eps);
    let s = 3.0 * (one + eps);
    let root = b.sqrt();
    let norm = 3.0_f64.sqrt();
    (a * root / norm, s * root / norm)
}

/// Taylor coefficients in ε of the stiffness and mass matrices in the
/// normalized Legendre basis, from samples on a circle in the complex
/// ε-plane. The nearest singularity in ε sits at 3 − 2√3 ≈ −0.46.
fn pencil_taylor(max_power: usize, basis: usize) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let rule = gauss_legendre(SERIES_QUADRATURE);
    let nodes: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
    let q = nodes.len();
    // normalized Legendre values and derivatives at the nodes
    let mut val = vec![0.0; basis * q];
    let mut der = vec![0.0; basis * q];
    for (k, &(x, _)) in nodes.iter().enumerate() {
        let (mut p0, mut p1) = (1.0, x);
        let (mut d0, mut d1) = (0.0, 1.0);
        for r in 0..basis {
            let (p, d) = if r == 0 { (p0, d0) } else { (p1, d1) };
            let scale = (r as f64 + 0.5).sqrt();
            val[r * q + k] = scale * p;
            der[r * q + k] = scale * d;
            if r >= 1 {
                let rf = r as f64;
                let p2 = ((2.0 * rf + 1.0) * x * p1 - rf * p0) / (rf + 1.0);
                let d2 = d0 + (2.0 * rf + 1.0) * p1;
                p0 = p1;
                p1 = p2;
                d0 = d1;
                d1 = d2;
            }
        }
    }
    let samples = SERIES_CONTOUR_SAMPLES;
    let r = SERIES_CONTOUR_RADIUS;
    let mut stiff = vec![vec![0.0; basis * basis]; max_power + 1];
    let mut mass = vec![vec![0.0; basis * basis]; max_power + 1];
    for j in 0..samples {
        let theta = 2.0 * PI * j as f64 / samples as f64;
        let eps = Complex64::from_polar(r, theta);
        let pw: Vec<(Complex64, Complex64)> = nodes.iter().map(|&(x, w)| {
            let (p, wt) = ground_coefficients(x, eps);
            (p * w, wt * w)
        }).collect();
        // Taylor coefficient m is (1/M) Σ f(ε_j) e^{−imθ_j} / r^m
        let phases: Vec<Complex64> =
            (0..=max_power).map(|m| Complex64::from_polar(1.0 / (samples as f64 * r.powi(m as i32)), -(m as f64) * theta)).collect();
        for a in 0..basis {
            for b in a..basis {
                let mut ks = Complex64::new(0.0, 0.0);
                let mut ms = Complex64::new(0.0, 0.0);
                // parity: even coefficients couple only equal-parity modes
                if (a + b) % 2 == 0 {
                    for k in 0..q {
                        ks += pw[k].0 * (der[a * q + k] * der[b * q + k]);
                        ms += pw[k].1 * (val[a * q + k] * val[b * q + k]);
                    }
                }
                for (m, ph) in phases.iter().enumerate() {
                    let kv = (ks * ph).re;
                    let mv = (ms * ph).re;
                    stiff[m][a * basis + b] += kv;
                    mass[m][a * basis + b] += mv;
                    if a != b {
                        stiff[m][b * basis + a] += kv;
                        mass[m][b * basis + a] += mv;
                    }
                }
            }
        }
    }
    (stiff, mass)
}

/// Rayleigh–Schrödinger coefficients of λ₁,₀,₀ in powers of ε = ν², up to
/// ε^{max_power}, in a truncated Legendre basis.
pub fn ground_mode_coefficients(max_power: usize, basis: usize) -> Result<Vec<f64>> {
    let target = 1;
    if basis <= target + 1 {
        return Err(SpectrumError::InvalidInput("basis too small".into()));
    }
    let (stiff, mass) = pencil_taylor(max_power, basis);
    let gaps: Vec<f64> = (0..basis).map(|r| (r * (r + 1)) as f64 - 2.0).collect();
    let lambda0 = 2.0;
    let mut lambdas = vec![lambda0];
    let mut vecs: Vec<Vec<f64>> = vec![(0..basis).map(|r| if r == target { 1.0 } else { 0.0 }).collect()];
    let matvec = |m: &[f64], v: &[f64]| -> Vec<f64> {
        (0..basis).map(|i| (0..basis).map(|j| m[i * basis + j] * v[j]).sum()).collect()
    };
    for j in 1..=max_power {
        let mut rhs = vec![0.0; basis];
        for m in 1..=j {
            let kv = matvec(&stiff[m], &vecs[j - m]);
            for (r, v) in rhs.iter_mut().zip(kv) {
                *r -= v;
            }
        }
        for i in 0..=j {
            for m in 0..=(j - i) {
                let l = j - i - m;
                if (i == 0 && m == 0) || (i == j && m == 0) {
                    continue;
                }
                let mv = matvec(&mass[m], &vecs[l]);
                for (r, v) in rhs.iter_mut().zip(mv) {
                    *r += lambdas[i] * v;
                }
            }
        }
        let lj = -rhs[target];
        let mut c = vec![0.0; basis];
        for r in 0..basis {
            if r == target {
                continue;
            }
            if gaps[r].abs() < 1e-12 {
                return Err(SpectrumError::VanishingDenominator("unperturbed gap in the series recursion"));
            }
            c[r] = rhs[r] / gaps[r];
        }
        lambdas.push(lj);
        vecs.push(c);
    }
    Ok(lambdas)
}

/// Partial sum of λ₁,₀,₀ through ν^order, order ∈ {2, 4, 6, 8, 10}.
pub fn ground_mode_series(nu: f64, order: u32) -> Result<GroundSeries> {
    if !(2..=10).contains(&order) || !order.is_multiple_of(2) {
        return Err(SpectrumError::InvalidInput(format!("order must be an even integer in [2, 10], got {order}")));
    }
    let coefficients = ground_mode_coefficients(order as usize / 2, SERIES_BASIS)?;
    let eps = nu * nu;
    let partial_sum = coefficients.iter().rev().fold(0.0, |acc, c| acc * eps + c);
    Ok(GroundSeries { coefficients, nu, order, partial_sum })
}

/// Least-squares fit λ_N ≈ a·N(N+2n+1) + b over a window of overtones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticFit {
    pub a_coeff: f64,
    pub constant: f64,
    pub fit_window: (usize, usize),
    /// Root-mean-square deviation of the fitted values.
    pub residual: f64,
}

/// Fits eigenvalues indexed by overtone number.
pub fn fit_eigenvalues(values: &[f64], n: u32, window: (usize, usize)) -> Result<AsymptoticFit> {
    let (lo, hi) = window;
    if lo >= hi {
        return Err(SpectrumError::InvalidInput(format!("empty fit window {lo}:{hi}")));
    }
    if values.len() <= hi {
        return Err(SpectrumError::InsufficientOvertones { needed: hi + 1, available: values.len() });
    }
    let nf = n as f64;
    let pts: Vec<(f64, f64)> = (lo..=hi)
        .map(|k| {
            let kf = k as f64;
            (kf * (kf + 2.0 * nf + 1.0), values[k])
        })
        .collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let a = sxy / sxx;
    let b = my - a * mx;
    let residual = (pts.iter().map(|p| (p.1 - a * p.0 - b).powi(2)).sum::<f64>() / m).sqrt();
    Ok(AsymptoticFit { a_coeff: a, constant: b, fit_window: window, residual })
}

pub fn asymptotic_fit(spectrum: &Spectrum, modes: &ModeNumbers, window: (usize, usize)) -> Result<AsymptoticFit> {
    fit_eigenvalues(&spectrum.eigenvalues(), modes.n(), window)
}

/// The leading large-overtone prediction 1 − ν² of the first-order theory.
pub fn perturbative_slope(metric: &MetricParams) -> f64 {
    1.0 - metric.nu() * metric.nu()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v0_at_quarter_turn() {
        assert!((v0(PI / 2.0, 0.0, 0.0) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn delta_v_at_quarter_turn() {
        // bracket = 0 + 4 + 0 − 0 − 0 − 0 + 12 at s = π/2 with cot = 0
        let v = delta_v(PI / 2.0, 0.0, 0.0, 1.0);
        assert!((v - 0.5).abs() < 1e-14);
    }

    #[test]
    fn lambda_zero_examples() {
        let m = |n, k, big_n| ModeNumbers::new(n, k, big_n).unwrap();
        assert_eq!(lambda_zero(&m(0, 0, 0)), 0.0);
        assert_eq!(lambda_zero(&m(0, 0, 1)), 2.0);
        assert_eq!(lambda_zero(&m(1, 0, 0)), 2.5);
    }

    #[test]
    fn legendre_normalization() {
        for (l, n) in [(0, 0), (3, 0), (2, 1), (5, 3), (9, 9)] {
            let norm = integrate_over_s(|_, sn, cs| sn * normalized_legendre(l, n, cs, sn).powi(2));
            assert!((norm - 1.0).abs() < 1e-12, "({l},{n}) → {norm}");
        }
    }

    #[test]
    fn synthetic_fit_is_exact() {
        let v: Vec<f64> = (0..40).map(|k| 0.9 * (k * (k + 3)) as f64 + 5.0).collect();
        let f = fit_eigenvalues(&v, 1, (10, 39)).unwrap();
        assert!((f.a_coeff - 0.9).abs() < 1e-12 && (f.constant - 5.0).abs() < 1e-8);
        assert!(fit_eigenvalues(&v, 1, (10, 40)).is_err());
    }
}
