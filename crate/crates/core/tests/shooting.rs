use page_spectrum::shooting::{refine, shoot_residual, Branch, ShootingOptions};
use page_spectrum::validation::shooting_suite;
use page_spectrum::{build_nu_zero_reference, build_scalar, build_tensor, strip, MetricParams, ModeNumbers, SpectrumError};

#[test]
fn agrees_with_collocation() {
    let report = shooting_suite().unwrap();
    assert!(report.passed(), "{report:#?}");
    assert_eq!(report.checks.len(), 6);
}

#[test]
fn tensor_ground_mode_from_a_wide_bracket() {
    let st = strip(&build_tensor(MetricParams::page())).unwrap();
    let r = refine(&st, (-7.0, -6.0), 1e-12, ShootingOptions::default()).unwrap();
    assert!((r.eigenvalue - -6.441420).abs() < 1e-6);
    assert!((r.eigenvalue - -6.44142027579817).abs() < 1e-9);
}

#[test]
fn interior_branch_selects_the_family() {
    let st = strip(&build_tensor(MetricParams::page())).unwrap();
    let other = ShootingOptions { branch: Branch::Subdominant, ..Default::default() };
    // the non-analytic branch does not reproduce the ground mode
    let r = refine(&st, (-7.0, -6.0), 1e-12, other);
    assert!(r.map_or(true, |r| (r.eigenvalue - -6.44142027579817).abs() > 1e-3));
}

#[test]
fn reference_residual_vanishes_on_the_exact_spectrum() {
    let st = strip(&build_nu_zero_reference(ModeNumbers::family(0, 0).unwrap())).unwrap();
    assert!(shoot_residual(&st, 2.0, 0.0).unwrap().abs() < 1e-10);
    assert!(shoot_residual(&st, 2.5, 0.0).unwrap().abs() > 1e-2);
    // matching point does not move the root
    for x_match in [-0.4, 0.25, 0.6] {
        let opts = ShootingOptions { x_match, ..Default::default() };
        let r = refine(&st, (5.5, 6.5), 1e-13, opts).unwrap();
        assert!((r.eigenvalue - 6.0).abs() < 1e-10, "x_match {x_match}: {}", r.eigenvalue);
    }
}

#[test]
fn bracket_without_sign_change_is_an_error() {
    let st = strip(&build_scalar(ModeNumbers::family(0, 0).unwrap(), MetricParams::page())).unwrap();
    let err = refine(&st, (2.0, 3.0), 1e-12, ShootingOptions::default()).unwrap_err();
    assert!(matches!(err, SpectrumError::NoSignChange { .. }));
    let bad = ShootingOptions { x_match: 1.0, ..Default::default() };
    assert!(matches!(refine(&st, (1.0, 2.0), 1e-12, bad), Err(SpectrumError::InvalidInput(_))));
}
