use std::f64::consts::PI;

use page_spectrum::perturbation::{
    first_order, ground_mode_series, integrate_over_s, lambda_one, lambda_one_quadrature, lambda_zero,
    perturbative_slope, schrodinger_transform_numeric, unperturbed_eigenfunction, v0,
};
use page_spectrum::validation::{family_fit, integrals_suite, nu_zero_suite, GROUND_SERIES};
use page_spectrum::{
    build_nu_zero_reference, build_scalar, spectrum_at, strip, MetricParams, ModeNumbers, SolveOptions, SpectrumError,
};

#[test]
fn reference_transform_is_the_legendre_problem() {
    let modes = ModeNumbers::family(2, 1).unwrap();
    let form = schrodinger_transform_numeric(&build_nu_zero_reference(modes)).unwrap();
    assert!((form.s_max - PI).abs() < 1e-13);
    let (n, mu) = (modes.n() as f64, modes.mu() as f64);
    for ((&x, &s), &v) in form.x.iter().zip(&form.s).zip(&form.potential) {
        assert!((s - (-x).acos()).abs() < 1e-13, "x = {x}");
        let exact = v0(s, n, mu);
        assert!((v - exact).abs() < 1e-11 * (1.0 + exact.abs()), "x = {x}");
    }
}

#[test]
fn first_order_shift_is_the_small_squashing_slope() {
    // Richardson-extrapolated dλ/d(ν²) from collocation at ν = 0.01, 0.02
    for (n, k, big_n) in [(0, 5, 0), (0, 0, 1), (1, 0, 1), (2, 3, 2)] {
        let family = ModeNumbers::family(n, k).unwrap();
        let modes = family.with_overtone(big_n);
        let shift = |nu: f64| {
            let sp = strip(&build_scalar(family, MetricParams::with_nu(nu, 1.0).unwrap())).unwrap();
            let opts = SolveOptions { count: Some(big_n as usize + 1), ..Default::default() };
            (spectrum_at(&sp, 120, &opts).unwrap()[big_n as usize].eigenvalue - lambda_zero(&modes)) / (nu * nu)
        };
        let slope = (4.0 * shift(0.01) - shift(0.02)) / 3.0;
        assert!((slope - lambda_one(&modes, 1.0)).abs() < 1e-5 * (1.0 + slope.abs()), "({n},{k},{big_n}): {slope}");
    }
}

#[test]
fn transform_maps_are_inverse() {
    let form =
        schrodinger_transform_numeric(&build_scalar(ModeNumbers::family(0, 0).unwrap(), MetricParams::page())).unwrap();
    assert!((form.s_of_x(-1.0)).abs() < 1e-14);
    assert!((form.s_of_x(1.0) - form.s_max).abs() < 1e-13);
    for x in [-0.99, -0.5, 0.0, 0.3, 0.97] {
        assert!((form.x_of_s(form.s_of_x(x)) - x).abs() < 1e-12);
    }
    // the large-overtone prefactor is fixed by the length of the interval in s
    let a = (PI / form.s_max).powi(2);
    assert!((a - 0.925729074689523).abs() < 1e-11, "{a}");
}

#[test]
fn unperturbed_eigenfunctions_are_unit_normalized() {
    for (ell, n) in [(0, 0), (1, 0), (1, 1), (4, 2), (7, 7), (12, 3)] {
        let norm = integrate_over_s(|s, _, _| unperturbed_eigenfunction(ell, n, s).powi(2));
        assert!((norm - 1.0).abs() < 1e-10, "({ell},{n}): {norm}");
    }
}

#[test]
fn intermediate_integrals_match_quadrature() {
    let report = integrals_suite().unwrap();
    assert!(report.passed(), "{report:?}");
}

#[test]
fn first_order_shift_matches_its_defining_integral() {
    let nu = MetricParams::page().nu();
    for n in 1..=3 {
        for k in 1..=3 {
            for big_n in 1..=3 {
                let m = ModeNumbers::new(n, k, big_n).unwrap();
                let closed = lambda_one(&m, nu);
                let quad = lambda_one_quadrature(&m, nu).unwrap();
                assert!((closed - quad).abs() < 1e-8, "{m:?}: {closed} vs {quad}");
            }
        }
    }
    let m = ModeNumbers::new(0, 1, 1).unwrap();
    assert!(matches!(lambda_one_quadrature(&m, nu), Err(SpectrumError::InvalidInput(_))));
}

#[test]
fn uncharged_continuation_is_finite_and_matches_the_ground_series() {
    let nu = MetricParams::page().nu();
    let m = ModeNumbers::new(0, 0, 1).unwrap();
    assert_eq!(lambda_zero(&m), 2.0);
    assert!((lambda_one(&m, nu) - -2.0 * nu * nu).abs() < 1e-15);
    for k in 0..6 {
        for big_n in 0..6 {
            assert!(lambda_one(&ModeNumbers::new(0, k, big_n).unwrap(), nu).is_finite());
        }
    }
}

#[test]
fn first_overtone_error_is_six_tenths_of_a_percent() {
    let r = first_order(&ModeNumbers::new(0, 0, 1).unwrap(), MetricParams::page().nu());
    let err = (r.total - 1.85251690621979).abs() / 1.85251690621979;
    assert!((0.0055..0.0065).contains(&err), "{err}");
}

#[test]
fn ground_series_coefficients() {
    let nu = MetricParams::page().nu();
    let series = ground_mode_series(nu, 10).unwrap();
    assert_eq!(series.coefficients.len(), 6);
    for (c, exact) in series.coefficients.iter().zip(GROUND_SERIES) {
        assert!((c - exact).abs() <= 1e-8 * exact.abs(), "{c} vs {exact}");
    }
    assert!((series.partial_sum - 1.852516461).abs() < 1e-9);
    assert!((series.partial_sum - 1.85251690621979).abs() < 5e-7);
    // partial sums approach the numerical value
    let errs: Vec<f64> = [2, 4, 6, 8, 10]
        .iter()
        .map(|&o| (ground_mode_series(nu, o).unwrap().partial_sum - 1.85251690621979).abs())
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    assert!(ground_mode_series(nu, 3).is_err());
    assert!(ground_mode_series(nu, 12).is_err());
}

#[test]
fn reference_problem_is_exact() {
    let report = nu_zero_suite(64).unwrap();
    assert!(report.passed(), "{report:?}");
}

#[test]
fn large_overtone_fit() {
    let fit = family_fit(0, 0, (200, 500), 800).unwrap();
    assert!((0.9255..0.9260).contains(&fit.a_coeff), "{fit:?}");
    assert!((fit.a_coeff - 0.925729).abs() < 1e-6);
    let slope = perturbative_slope(&MetricParams::page());
    let nu = MetricParams::page().nu();
    assert_eq!(slope, 1.0 - nu * nu);
    assert!(fit.a_coeff > slope);
    assert!(matches!(family_fit(0, 0, (200, 500), 300), Err(SpectrumError::InsufficientOvertones { .. })));
}
