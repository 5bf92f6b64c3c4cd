use std::collections::BTreeMap;

use proptest::prelude::*;

use mft_core::cases::{obstruction_poly, obstruction_poly_with, Errata};
use mft_core::geometry::{beltrami_closed_form, beltrami_generic, fundamental_forms, point_geometry, FormChoice};
use mft_core::surfaces::{ChartPoint, FamilyKind, NullProfile, ProfileType, SurfaceFamily};
use mft_core::Jet2;

fn family(index: usize) -> SurfaceFamily {
    SurfaceFamily::from_spec(FamilyKind::ALL[index].id(), &BTreeMap::new()).unwrap()
}

fn point_in(fam: &SurfaceFamily, u: f64, v: f64) -> ChartPoint {
    let d = fam.default_domain();
    ChartPoint::new(d.s.0 + u * (d.s.1 - d.s.0), d.theta.0 + v * (d.theta.1 - d.theta.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn third_form_two_ways(k in 0..FamilyKind::ALL.len(), u in 0.0..1.0f64, v in 0.0..1.0f64) {
        let fam = family(k);
        let p = point_in(&fam, u, v);
        if let Ok(fc) = fam.eval(p).and_then(|sj| fundamental_forms(&sj)) {
            let scale = fc.e11.abs().max(fc.e22.abs());
            prop_assert!((fc.e11 - fc.e11_normal).abs() <= 1e-9 * scale);
            prop_assert!((fc.e12 - fc.e12_normal).abs() <= 1e-9 * scale);
            prop_assert!((fc.e22 - fc.e22_normal).abs() <= 1e-9 * scale);
        }
    }

    // The closed forms hold for any profile, not only the exact solutions.
    #[test]
    fn closed_form_operator_on_every_family(k in 0..FamilyKind::ALL.len(), u in 0.0..1.0f64, v in 0.0..1.0f64) {
        let fam = family(k);
        let p = point_in(&fam, u, v);
        let Ok(sj) = fam.eval(p) else { return Ok(()) };
        let Ok(fc) = fundamental_forms(&sj) else { return Ok(()) };
        let state = fam.chart_state(p).unwrap();
        for x in &sj.x {
            let (Ok(a), Ok(b)) = (beltrami_generic(&fc, x, FormChoice::ThirdForm), beltrami_closed_form(&state, x)) else {
                continue;
            };
            prop_assert!((a - b).abs() <= 1e-8 * b.abs().max(1.0), "{} at {:?}: {} vs {}", fam.id(), p, a, b);
        }
    }

    #[test]
    fn unit_normal_is_unit_and_normal(k in 0..FamilyKind::ALL.len(), u in 0.0..1.0f64, v in 0.0..1.0f64) {
        let fam = family(k);
        let p = point_in(&fam, u, v);
        let Ok(sj) = fam.eval(p) else { return Ok(()) };
        let Ok(fc) = fundamental_forms(&sj) else { return Ok(()) };
        let sig = fam.sig();
        let n = fc.normal;
        prop_assert!((sig.inner(n, n).abs() - 1.0).abs() < 1e-12);
        let xs = mft_core::Vec3M::new(sj.x[0].partial(1, 0).unwrap(), sj.x[1].partial(1, 0).unwrap(), sj.x[2].partial(1, 0).unwrap());
        let xt = mft_core::Vec3M::new(sj.x[0].partial(0, 1).unwrap(), sj.x[1].partial(0, 1).unwrap(), sj.x[2].partial(0, 1).unwrap());
        prop_assert!(sig.inner(n, xs).abs() < 1e-12 * xs.flat_norm().max(1.0));
        prop_assert!(sig.inner(n, xt).abs() < 1e-12 * xt.flat_norm().max(1.0));
    }

    #[test]
    fn operator_kills_constants(k in 0..FamilyKind::ALL.len(), u in 0.0..1.0f64, v in 0.0..1.0f64, c in -5.0..5.0f64) {
        let fam = family(k);
        let p = point_in(&fam, u, v);
        let Ok(fc) = fam.eval(p).and_then(|sj| fundamental_forms(&sj)) else { return Ok(()) };
        for form in [FormChoice::FirstForm, FormChoice::SecondForm, FormChoice::ThirdForm] {
            if let Ok(d) = beltrami_generic(&fc, &Jet2::constant(c), form) {
                prop_assert!(d.abs() < 1e-12);
            }
        }
    }

    // Dilating by c scales K by 1/c^2 and H by 1/c; the third form only
    // sees the normal, so Δx = 2x for every radius.
    #[test]
    fn pseudosphere_scaling(c in 0.2..5.0f64, u in 0.05..0.95f64, v in 0.0..1.0f64) {
        let fam = SurfaceFamily::pseudosphere_s21(c).unwrap();
        let p = point_in(&fam, u, v);
        let g = point_geometry(&fam, p, FormChoice::ThirdForm).unwrap();
        prop_assert!((g.curvature.k * c * c - 1.0).abs() < 1e-10);
        prop_assert!((g.curvature.h * c + 1.0).abs() < 1e-10);
        let d = g.laplacian - g.position * 2.0;
        prop_assert!(d.flat_norm() < 1e-10 * c.max(1.0));
    }

    #[test]
    fn type_i_obstruction_vanishes_on_pseudosphere(c2 in 0.0..1.0f64) {
        prop_assert!(obstruction_poly(ProfileType::I, 2.0, 2.0, c2).abs() < 1e-12);
    }

    #[test]
    fn corrected_type_ii_obstruction_vanishes_on_hyperbolic_plane(x in 1.0..10.0f64) {
        prop_assert!(obstruction_poly_with(ProfileType::II, -2.0, -2.0, x, Errata::Corrected).abs() < 1e-12);
    }
}

#[test]
fn printed_type_ii_obstruction_misses_the_hyperbolic_plane() {
    // 8(l+1) at l = -2 is already -8, so the printed relation cannot hold.
    let v = obstruction_poly_with(ProfileType::II, -2.0, -2.0, 1.0, Errata::Printed);
    assert!(v.abs() > 1.0, "{v}");
}

#[test]
fn null_axis_reciprocal_is_on_unit_quadric() {
    for sign in [1.0, -1.0] {
        let fam = SurfaceFamily::rev_null_axis(NullProfile::Reciprocal { c: 1.0, sign }).unwrap();
        for i in 0..10 {
            let p = ChartPoint::new(0.2 + 0.15 * i as f64, -1.0 + 0.2 * i as f64);
            let x = fam.position(p).unwrap();
            assert!((fam.sig().inner(x, x) - sign).abs() < 1e-12, "sign {sign} at {p:?}");
        }
    }
}
