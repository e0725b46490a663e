//! Cross-check suites shared by the command-line `validate` command and the
//! acceptance harness. Each suite measures a set of residuals against fixed
//! thresholds.

use crate::error::Result;
use crate::metric::MetricParams;
use crate::modes::ModeNumbers;
use crate::perturbation::{
    first_order, fit_eigenvalues, ground_mode_series, intermediate_integrals, intermediate_integrals_quadrature, lambda_one,
    lambda_one_quadrature, AsymptoticFit,
};
use crate::scalar::{build_nu_zero_reference, build_scalar};
use crate::shooting::{refine, ShootingOptions};
use crate::singular::strip;
use crate::spectral::{converge, default_resolutions, resolution_ladder, spectrum_at, SolveOptions};
use crate::tensor::build_tensor;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    pub measured: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when measured ≤ threshold.
    pub fn at_most(label: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self { label: label.into(), measured, threshold, passed: measured <= threshold }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// ν = 0: collocated spectrum against μ/4 + ℓ(ℓ+1), 0 ≤ n,k ≤ 3, ten overtones.
pub fn nu_zero_suite(resolution: usize) -> Result<SuiteReport> {
    let mut worst: f64 = 0.0;
    for n in 0..=3 {
        for k in 0..=3 {
            let reference = build_nu_zero_reference(ModeNumbers::family(n, k)?);
            let sp = strip(&reference)?;
            let opts = SolveOptions { count: Some(10), ..Default::default() };
            let pairs = spectrum_at(&sp, resolution, &opts)?;
            for (big_n, p) in pairs.iter().enumerate().take(10) {
                worst = worst.max((p.eigenvalue - reference.exact_eigenvalue(big_n as u32)).abs());
            }
            if pairs.len() < 10 {
                worst = f64::INFINITY;
            }
        }
    }
    Ok(SuiteReport { name: "nu-zero", checks: vec![Check::at_most("max |λ − μ/4 − ℓ(ℓ+1)|", worst, 1e-10)] })
}

/// The four intermediate integrals, closed form against quadrature.
pub fn integrals_suite() -> Result<SuiteReport> {
    let mut checks = Vec::new();
    for (ell, n) in [(1, 1), (2, 1), (3, 2), (4, 3), (5, 1)] {
        let closed = intermediate_integrals(ell, n)?;
        let quad = intermediate_integrals_quadrature(ell, n);
        let d = closed.iter().zip(quad).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        checks.push(Check::at_most(format!("(ℓ,n) = ({ell},{n})"), d, 1e-10));
    }
    Ok(SuiteReport { name: "integrals", checks })
}

/// Largest relative error of the first-order spectrum and where it occurs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationScan {
    pub max_relative_error: f64,
    /// (N, n, k) of the maximum.
    pub location: (u32, u32, u32),
    /// Relative error of the first overtone of the (0,0) family.
    pub first_overtone_error: f64,
}

/// λ⁽⁰⁾ + λ⁽¹⁾ against collocation over 0 ≤ n,k ≤ max_nk and
/// 0 ≤ N ≤ max_overtone. The zero mode is skipped since its relative error
/// is undefined.
pub fn perturbation_scan(max_nk: u32, max_overtone: u32, resolution: usize) -> Result<PerturbationScan> {
    let metric = MetricParams::page();
    let mut scan = PerturbationScan { max_relative_error: 0.0, location: (0, 0, 0), first_overtone_error: f64::NAN };
    for n in 0..=max_nk {
        for k in 0..=max_nk {
            let family = ModeNumbers::family(n as i64, k as i64)?;
            let sp = strip(&build_scalar(family, metric))?;
            let opts = SolveOptions { count: Some(max_overtone as usize + 1), ..Default::default() };
            let spectrum = converge(&sp, &default_resolutions(resolution), &opts)?;
            for p in &spectrum.pairs {
                let big_n = p.overtone;
                if n == 0 && k == 0 && big_n == 0 {
                    continue;
                }
                let approx = first_order(&family.with_overtone(big_n as u32), metric.nu()).total;
                let e = (approx - p.eigenvalue).abs() / p.eigenvalue.abs();
                if n == 0 && k == 0 && big_n == 1 {
                    scan.first_overtone_error = e;
                }
                if e > scan.max_relative_error {
                    scan.max_relative_error = e;
                    scan.location = (big_n as u32, n, k);
                }
            }
        }
    }
    Ok(scan)
}

pub fn perturbation_suite(resolution: usize) -> Result<SuiteReport> {
    let scan = perturbation_scan(5, 50, resolution)?;
    let nu = MetricParams::page().nu();
    let mut quad: f64 = 0.0;
    for n in 1..=3 {
        for k in 1..=3 {
            for big_n in 1..=3 {
                let m = ModeNumbers::new(n, k, big_n)?;
                quad = quad.max((lambda_one(&m, nu) - lambda_one_quadrature(&m, nu)?).abs());
            }
        }
    }
    let (big_n, n, k) = scan.location;
    Ok(SuiteReport {
        name: "perturbation",
        checks: vec![
            Check::at_most("max relative error of λ⁽⁰⁾+λ⁽¹⁾", scan.max_relative_error, 0.007),
            Check {
                label: format!("maximum located at (N,n,k) = ({big_n},{n},{k})"),
                measured: (big_n + n + k) as f64,
                threshold: 1.0,
                passed: scan.location == (1, 0, 0),
            },
            Check::at_most(
                "(N,n,k) = (1,0,0) error within 0.05% of 0.6%",
                (scan.first_overtone_error - 0.006).abs(),
                5e-4,
            ),
            Check::at_most("closed-form λ⁽¹⁾ against ∫δV y² ds", quad, 1e-8),
        ],
    })
}

/// Shooting against collocation for the first five scalar (0,0) modes and the
/// tensor ground mode.
pub fn shooting_suite() -> Result<SuiteReport> {
    let metric = MetricParams::page();
    let mut checks = Vec::new();
    let sp = strip(&build_scalar(ModeNumbers::family(0, 0)?, metric))?;
    let spectral = spectrum_at(&sp, 250, &SolveOptions { count: Some(5), ..Default::default() })?;
    for (big_n, p) in spectral.iter().enumerate() {
        let delta = 1e-3 * (1.0 + p.eigenvalue.abs());
        let shot = refine(&sp, (p.eigenvalue - delta, p.eigenvalue + delta), 1e-13, ShootingOptions::default())?;
        checks.push(Check::at_most(
            format!("scalar (0,0) N = {big_n}"),
            (shot.eigenvalue - p.eigenvalue).abs() / (1.0 + p.eigenvalue.abs()),
            1e-8,
        ));
    }
    let st = strip(&build_tensor(metric))?;
    let base = resolution_ladder(&st.problem, 551)[0];
    let ground = spectrum_at(&st, base, &SolveOptions { count: Some(1), ..Default::default() })?[0].eigenvalue;
    let shot = refine(&st, (ground - 0.5, ground + 0.5), 1e-12, ShootingOptions::default())?;
    checks.push(Check::at_most(
        "tensor N = 0",
        (shot.eigenvalue - ground).abs() / (1.0 + ground.abs()),
        1e-8,
    ));
    Ok(SuiteReport { name: "shooting", checks })
}

/// Exact coefficients of λ₁,₀,₀ in powers of ν².
pub const GROUND_SERIES: [f64; 6] =
    [2.0, -2.0, 202.0 / 105.0, -362.0 / 189.0, 24500302.0 / 12733875.0, -105676778.0 / 55180125.0];

pub fn series_suite() -> Result<SuiteReport> {
    let metric = MetricParams::page();
    let series = ground_mode_series(metric.nu(), 10)?;
    let mut checks = Vec::new();
    for (j, (c, exact)) in series.coefficients.iter().zip(GROUND_SERIES).enumerate().skip(1) {
        checks.push(Check::at_most(format!("ν^{} coefficient", 2 * j), (c - exact).abs() / exact.abs(), 1e-8));
    }
    let sp = strip(&build_scalar(ModeNumbers::family(0, 0)?, metric))?;
    let numeric = spectrum_at(&sp, 250, &SolveOptions { count: Some(2), ..Default::default() })?[1].eigenvalue;
    checks.push(Check::at_most("order-10 partial sum against collocation", (series.partial_sum - numeric).abs(), 5e-7));
    Ok(SuiteReport { name: "series", checks })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Perturbation,
    Shooting,
    NuZero,
    Integrals,
    Series,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::NuZero, Suite::Integrals, Suite::Series, Suite::Shooting, Suite::Perturbation];

    pub fn run(self) -> Result<SuiteReport> {
        match self {
            Suite::Perturbation => perturbation_suite(250),
            Suite::Shooting => shooting_suite(),
            Suite::NuZero => nu_zero_suite(64),
            Suite::Integrals => integrals_suite(),
            Suite::Series => series_suite(),
        }
    }
}

/// Large-overtone fit of one (n,k) family. The overtones come from a single
/// resolution without refinement; at 𝒩 = 800 the values up to N = 500 are
/// stable to about 1e-10 against 𝒩 = 850.
pub fn family_fit(n: i64, k: i64, window: (usize, usize), resolution: usize) -> Result<AsymptoticFit> {
    let modes = ModeNumbers::family(n, k)?;
    let sp = strip(&build_scalar(modes, MetricParams::page()))?;
    let opts =
        SolveOptions { realness_tol: 1e-8, count: Some(window.1 + 1), refine: false, vectors: false, ..Default::default() };
    let values: Vec<f64> = spectrum_at(&sp, resolution, &opts)?.iter().map(|p| p.eigenvalue).collect();
    fit_eigenvalues(&values, modes.n(), window)
}
