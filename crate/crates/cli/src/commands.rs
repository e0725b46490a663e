use page_spectrum::perturbation::perturbative_slope;
use page_spectrum::spectral::{hits_singular_point, normalize_and_report};
use page_spectrum::validation::{family_fit, Suite, SuiteReport};
use page_spectrum::{
    build_nu_zero_reference, build_scalar, build_tensor, converge, resolution_ladder, strip,
    MetricParams, ModeNumbers, Problem, SolveOptions, Spectrum, StrippedProblem,
};
use serde::Serialize;

use crate::config::{Format, ProblemKind, RunConfig};
use crate::output::{eigenfunction_path, write_atomic, EigenRecord, EigenfunctionSample, SpectrumReport};
use crate::CliError;

fn normalization_name(n: page_spectrum::spectral::Normalization) -> &'static str {
    use page_spectrum::spectral::Normalization::*;
    match n {
        None => "none",
        RightEndpoint => "right-endpoint",
        MaxAbs => "max-abs",
    }
}

fn converged_spectrum<P: Problem>(stripped: &StrippedProblem<P>, cfg: &RunConfig) -> Result<Spectrum, CliError> {
    let resolutions = if cfg.resolutions.len() == 1 {
        resolution_ladder(&stripped.problem, cfg.resolutions[0])
    } else {
        if let Some(r) = cfg.resolutions.iter().find(|&&r| hits_singular_point(&stripped.problem, r)) {
            return Err(CliError::Invalid(format!(
                "resolution {r} places a grid point on an interior singular point of the {} problem",
                cfg.problem.name()
            )));
        }
        cfg.resolutions.clone()
    };
    let opts = SolveOptions {
        realness_tol: cfg.tolerances.realness,
        convergence_tol: cfg.tolerances.convergence,
        count: Some(cfg.overtones),
        vectors: cfg.eigenfunctions,
        ..Default::default()
    };
    Ok(converge(stripped, &resolutions, &opts)?)
}

fn records(
    spectrum: &Spectrum,
    cfg: &RunConfig,
    physical: impl Fn(f64) -> Option<f64>,
) -> Vec<EigenRecord> {
    let grid = page_spectrum::spectral::gauss_lobatto(spectrum.resolutions[0]).ok();
    spectrum
        .pairs
        .iter()
        .map(|p| {
            let (normalization, eigenfunction) = match (&grid, cfg.eigenfunctions) {
                (Some(g), true) => {
                    let q = normalize_and_report(p);
                    let samples =
                        g.points().iter().zip(&q.u_values).map(|(&x, &u)| EigenfunctionSample { x, u }).collect();
                    (Some(normalization_name(q.normalization)), Some(samples))
                }
                _ => (None, None),
            };
            EigenRecord {
                overtone: p.overtone,
                resolution: p.resolution,
                eigenvalue: p.eigenvalue,
                residual: p.convergence_residual,
                lambda: physical(p.eigenvalue),
                normalization,
                eigenfunction,
            }
        })
        .collect()
}

fn build_report(cfg: &RunConfig) -> Result<SpectrumReport, CliError> {
    let metric = MetricParams::page_with_lambda(cfg.lambda_cc)?;
    let (resolutions, eigenvalues) = match cfg.problem {
        ProblemKind::Scalar => {
            let s = strip(&build_scalar(ModeNumbers::family(cfg.n, cfg.k)?, metric))?;
            let sp = converged_spectrum(&s, cfg)?;
            (sp.resolutions.clone(), records(&sp, cfg, |_| None))
        }
        ProblemKind::NuZeroReference => {
            let s = strip(&build_nu_zero_reference(ModeNumbers::family(cfg.n, cfg.k)?))?;
            let sp = converged_spectrum(&s, cfg)?;
            (sp.resolutions.clone(), records(&sp, cfg, |_| None))
        }
        ProblemKind::Tensor => {
            let problem = build_tensor(metric);
            let s = strip(&problem)?;
            let sp = converged_spectrum(&s, cfg)?;
            (sp.resolutions.clone(), records(&sp, cfg, |v| Some(problem.lambda_from_tilde(v))))
        }
    };
    let (n, k) = match cfg.problem {
        ProblemKind::Tensor => (0, 0),
        _ => (cfg.n, cfg.k),
    };
    Ok(SpectrumReport {
        problem: cfg.problem.name(),
        n,
        k,
        units: format!("Lambda={}", cfg.lambda_cc),
        resolutions,
        eigenvalues,
    })
}

pub fn compute(cfg: &RunConfig) -> Result<(), CliError> {
    let report = build_report(cfg)?;
    if report.eigenvalues.len() < cfg.overtones {
        eprintln!(
            "warning: {} of {} requested overtones passed the convergence filter",
            report.eigenvalues.len(),
            cfg.overtones
        );
    }
    let body = match cfg.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    match &cfg.out {
        Some(path) => {
            if cfg.eigenfunctions && cfg.format == Format::Csv {
                write_atomic(&eigenfunction_path(path), &report.eigenfunctions_csv())?;
            }
            write_atomic(path, &body)
        }
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct CheckOut<'a> {
    label: &'a str,
    measured: f64,
    threshold: f64,
    passed: bool,
}

#[derive(Serialize)]
struct SuiteOut<'a> {
    suite: &'static str,
    passed: bool,
    checks: Vec<CheckOut<'a>>,
}

/// Runs the suites and reports whether all of them passed.
pub fn validate(suites: &[Suite], format: Format) -> Result<bool, CliError> {
    let mut reports: Vec<SuiteReport> = Vec::new();
    for &s in suites {
        let r = s.run()?;
        if format == Format::Csv {
            for c in &r.checks {
                println!("{},{},{},{},{}", r.name, c.label.replace(',', ";"), c.measured, c.threshold, c.passed);
            }
        } else {
            eprintln!("{}: {}", r.name, if r.passed() { "pass" } else { "FAIL" });
        }
        reports.push(r);
    }
    if format == Format::Json {
        let out: Vec<SuiteOut> = reports
            .iter()
            .map(|r| SuiteOut {
                suite: r.name,
                passed: r.passed(),
                checks: r
                    .checks
                    .iter()
                    .map(|c| CheckOut { label: &c.label, measured: c.measured, threshold: c.threshold, passed: c.passed })
                    .collect(),
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&out).expect("report serializes"));
    }
    Ok(reports.iter().all(SuiteReport::passed))
}

#[derive(Serialize)]
struct FitOut {
    n: i64,
    k: i64,
    resolution: usize,
    window: (usize, usize),
    a: f64,
    constant: f64,
    residual: f64,
}

pub fn fit(ns: &[i64], ks: &[i64], window: (usize, usize), resolution: usize, format: Format) -> Result<(), CliError> {
    let mut rows = Vec::new();
    for &n in ns {
        for &k in ks {
            let f = family_fit(n, k, window, resolution)?;
            rows.push(FitOut { n, k, resolution, window, a: f.a_coeff, constant: f.constant, residual: f.residual });
        }
    }
    let slope = perturbative_slope(&MetricParams::page());
    match format {
        Format::Csv => {
            println!("n,k,resolution,window,a,constant,residual");
            for r in &rows {
                println!("{},{},{},{}:{},{},{},{}", r.n, r.k, r.resolution, r.window.0, r.window.1, r.a, r.constant, r.residual);
            }
            println!("# perturbative prediction 1 - nu^2 = {slope}");
        }
        Format::Json => {
            let v = serde_json::json!({ "fits": rows, "perturbative_prediction": slope });
            println!("{}", serde_json::to_string_pretty(&v).expect("report serializes"));
        }
    }
    Ok(())
}
