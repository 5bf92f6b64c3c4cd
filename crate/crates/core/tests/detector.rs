use mft_core::cases::{case_sweep, CaseId, Errata, SweepSpec, SweepType};
use mft_core::detector::{classify_matrix, fit_family, matches_pattern, verify_theorem, AStructure, GridSpec, Pattern, TheoremId, Tolerances};
use mft_core::geometry::FormChoice;
use mft_core::mesh::build_mesh;
use mft_core::surfaces::{ChartPoint, ProfileTable, ProfileType, SurfaceFamily};
use mft_core::Error;

fn a3(a: &[f64; 9]) -> [[f64; 3]; 3] {
    [[a[0], a[1], a[2]], [a[3], a[4], a[5]], [a[6], a[7], a[8]]]
}

#[test]
fn third_form_fit_does_not_depend_on_radius() {
    for c in [0.5, 1.0, 3.0] {
        let fam = SurfaceFamily::pseudosphere_s21(c).unwrap();
        let (r, _, _) = fit_family(&fam, &GridSpec::over_default(&fam, 12), FormChoice::ThirdForm, &Tolerances::default()).unwrap();
        assert!(r.pass, "c = {c}: {r:?}");
        assert!((r.lambda.unwrap() - 2.0).abs() < 1e-8 && (r.mu.unwrap() - 2.0).abs() < 1e-8);
    }
}

// With the first form the pseudosphere still satisfies Δx = λx, with λ
// scaling like 1/c^2.
#[test]
fn first_form_fit_on_pseudosphere() {
    for c in [0.5, 2.0] {
        let fam = SurfaceFamily::pseudosphere_s21(c).unwrap();
        let (r, _, _) = fit_family(&fam, &GridSpec::over_default(&fam, 12), FormChoice::FirstForm, &Tolerances::default()).unwrap();
        assert!(r.residual_rms < 1e-8, "{r:?}");
        let (l, m) = matches_pattern(&a3(&r.a), Pattern::DiagI, 1e-6).unwrap();
        assert!((l - m).abs() < 1e-8);
        assert!((l.abs() * c * c - 2.0).abs() < 1e-8, "lambda {l} for c = {c}");
    }
}

#[test]
fn classification_examples() {
    assert_eq!(classify_matrix(&[[0.0; 3]; 3], 1e-9), AStructure::Zero);
    let a = [[3.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 3.0]];
    assert_eq!(classify_matrix(&a, 1e-9).lambda_mu(), Some((3.0, -1.0)));
    assert!(matches_pattern(&a, Pattern::DiagII, 1e-9).is_none());
    let null_form = [[1.0, 0.5, 0.0], [-0.5, 2.0, 0.0], [0.0, 0.0, 1.5]];
    let (l, m) = matches_pattern(&null_form, Pattern::NullAxisForm, 1e-12).unwrap();
    assert!((l - 1.0).abs() < 1e-12 && (m - 2.0).abs() < 1e-12);
}

#[test]
fn profile_csv_round_trip_gives_the_same_fit() {
    let fam = SurfaceFamily::minimal_profile_i().unwrap();
    let tab = fam.profile_table().unwrap();
    let mut buf = Vec::new();
    tab.write_csv(&mut buf).unwrap();
    let back = ProfileTable::read_csv(buf.as_slice(), ProfileType::I, tab.law()).unwrap();
    assert_eq!(back.nodes(), tab.nodes());
    let again = SurfaceFamily::revolution(back);
    let grid = GridSpec::over_default(&fam, 10);
    let p = ChartPoint::new(grid.s_at(3), 0.25);
    assert_eq!(fam.position(p).unwrap(), again.position(p).unwrap());
}

#[test]
fn every_theorem_passes_with_default_tolerances() {
    for id in [TheoremId::T1, TheoremId::T2, TheoremId::T3, TheoremId::T4] {
        let rep = verify_theorem(id, &Tolerances::default(), 0, 12).unwrap();
        assert!(rep.pass, "{id:?}: {rep:?}");
    }
}

#[test]
fn tolerance_names_are_checked() {
    let mut tol = Tolerances::default();
    tol.set("fit_residual", 1e-3).unwrap();
    assert_eq!(tol.fit_residual, 1e-3);
    assert!(matches!(tol.set("nope", 1.0), Err(Error::InvalidParameter(_))));
}

#[test]
fn null_axis_mesh_reports_the_singular_column() {
    let fam = SurfaceFamily::cubic_null_minimal(1.0, 0.0).unwrap();
    let grid: GridSpec = "-1:1:5,-1:1:3".parse().unwrap();
    let mesh = build_mesh(&fam, &grid).unwrap();
    let rep = mesh.hole_report();
    assert_eq!(rep.holes.len(), 3);
    assert!(rep.holes.iter().all(|h| h.s == 0.0));
    assert_eq!(rep.excluded_columns.len(), 1);
    assert_eq!(rep.vertices, 12);
}

#[test]
fn corrected_type_ii_case_iii_stays_away_from_zero() {
    let mut spec = SweepSpec::default_for(SweepType::II, CaseId::III);
    let printed = case_sweep(SweepType::II, CaseId::III, &spec).unwrap();
    spec.errata = Errata::Corrected;
    let corrected = case_sweep(SweepType::II, CaseId::III, &spec).unwrap();
    assert!(corrected.min_abs > 0.5, "{corrected:?}");
    assert!(printed.min_abs < corrected.min_abs);
}

#[test]
fn null_axis_sweep_detects_non_constant_lambda() {
    let spec = SweepSpec::default_for(SweepType::III, CaseId::V);
    let rep = case_sweep(SweepType::III, CaseId::V, &spec).unwrap();
    assert!(rep.witnessed);
    assert!(rep.lambda_stats.unwrap().cv > 0.1);
}
