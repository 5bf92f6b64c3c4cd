//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mft_core::cases::{lambda_mu_null_axis, obstruction_poly, residual_reduced_system, PhiState};
use mft_core::detector::{consistency_check, fit_family, matches_pattern, GridSpec, Pattern, Tolerances, CONSISTENCY_POINTS};
use mft_core::geometry::{beltrami_closed_form, beltrami_generic, fundamental_forms, point_geometry, FormChoice};
use mft_core::mesh::build_mesh;
use mft_core::surfaces::ProfileType;
use mft_core::surfaces::{ChartPoint, ChartState, FamilyKind, NullAxisState, NullProfile, SurfaceFamily};

mod dd;
use dd::Dd;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn all_families() -> Vec<SurfaceFamily> {
    FamilyKind::ALL.iter().map(|k| SurfaceFamily::from_spec(k.id(), &BTreeMap::new()).unwrap()).collect()
}

fn null_reciprocal(sign: f64) -> SurfaceFamily {
    SurfaceFamily::rev_null_axis(NullProfile::Reciprocal { c: 1.0, sign }).unwrap()
}

fn random_point(fam: &SurfaceFamily, rng: &mut ChaCha8Rng, margin: f64) -> ChartPoint {
    let d = fam.default_domain();
    ChartPoint::new(rng.gen_range(d.s.0 + margin..d.s.1 - margin), rng.gen_range(d.theta.0 + margin..d.theta.1 - margin))
}

fn a3(a: &[f64; 9]) -> [[f64; 3]; 3] {
    [[a[0], a[1], a[2]], [a[3], a[4], a[5]], [a[6], a[7], a[8]]]
}

fn fit(fam: &SurfaceFamily) -> mft_core::detector::FitReport {
    let grid = GridSpec::over_default(fam, 20);
    fit_family(fam, &grid, FormChoice::ThirdForm, &Tolerances::default()).unwrap().0
}

fn criterion_1() -> Outcome {
    let mut worst = 0.0f64;
    let mut nodes = 0;
    for fam in [SurfaceFamily::pseudosphere_s21(1.0).unwrap(), SurfaceFamily::hyperbolic_h2(1.0).unwrap(), null_reciprocal(1.0)] {
        for p in GridSpec::over_default(&fam, 20).nodes() {
            let Ok(sj) = fam.eval(p) else { continue };
            let Ok(fc) = fundamental_forms(&sj) else { continue };
            let state = fam.chart_state(p).unwrap();
            let mut generic = [0.0; 3];
            let mut closed = [0.0; 3];
            for i in 0..3 {
                generic[i] = beltrami_generic(&fc, &sj.x[i], FormChoice::ThirdForm).unwrap();
                closed[i] = beltrami_closed_form(&state, &sj.x[i]).unwrap();
            }
            let scale = closed.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for i in 0..3 {
                worst = worst.max((generic[i] - closed[i]).abs() / scale);
            }
            nodes += 1;
        }
    }
    check(nodes == 1200 && worst < 1e-8, format!("{nodes} nodes, worst rel error {worst:.2e}"))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let families = all_families();
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut tries = 0;
    while count < 200 && tries < 10_000 {
        let fam = &families[tries % families.len()];
        tries += 1;
        let p = random_point(fam, &mut rng, 0.0);
        let Ok(fc) = fam.eval(p).and_then(|sj| fundamental_forms(&sj)) else { continue };
        let scale = fc.e11.abs().max(fc.e12.abs()).max(fc.e22.abs());
        for (a, b) in [(fc.e11, fc.e11_normal), (fc.e12, fc.e12_normal), (fc.e22, fc.e22_normal)] {
            worst = worst.max((a - b).abs() / scale);
        }
        count += 1;
    }
    check(count == 200 && worst < 1e-9, format!("{count} points, worst rel error {worst:.2e}"))
}

/// Position of `fam` at `(s, theta)` evaluated in double-double arithmetic.
fn dd_position(fam: &SurfaceFamily, s: Dd, th: Dd) -> [Dd; 3] {
    let chart = |ptype: ProfileType, f: Dd, g: Dd| match ptype {
        ProfileType::I => [f * th.cosh(), g, f * th.sinh()],
        ProfileType::II => [f * th.cos(), f * th.sin(), g],
    };
    match fam.kind() {
        FamilyKind::PseudosphereS21 => {
            let c = fam.params()["c"];
            let u = s / Dd::from(c);
            chart(ProfileType::I, u.cos() * c, u.sin() * c)
        }
        FamilyKind::HyperbolicH2 => {
            let c = fam.params()["c"];
            let u = s / Dd::from(c);
            chart(ProfileType::II, u.sinh() * c, u.cosh() * c)
        }
        FamilyKind::RevNullAxis | FamilyKind::CubicNullMinimal => {
            let k = match fam.null_profile().unwrap() {
                NullProfile::Reciprocal { c, sign } => Dd::from(sign * c * c / 4.0) / s,
                NullProfile::Polynomial(p) => p.iter().rev().fold(Dd::from(0.0), |acc, &c| acc * s + Dd::from(c)),
            };
            let st2 = s * th * th;
            [k - s - st2, k + s - st2, s * th * -2.0]
        }
        _ => {
            let tab = fam.profile_table().unwrap();
            let nodes = tab.nodes();
            let (lo, _) = tab.s_range();
            let i = (((s.hi - lo) / tab.ds()).floor().max(0.0) as usize).min(nodes.len() - 2);
            let (a, b) = (&nodes[i], &nodes[i + 1]);
            let h = b.s - a.s;
            let t = (s - Dd::from(a.s)) / Dd::from(h);
            let ([fa, ga], [fa2, ga2]) = tab.ptype().node_rates(a.phi, a.dphi);
            let ([fb, gb], [fb2, gb2]) = tab.ptype().node_rates(b.phi, b.dphi);
            let herm = |a: [f64; 3], b: [f64; 3]| {
                let (t2, t3) = (t * t, t * t * t);
                let (t4, t5) = (t3 * t, t3 * t2);
                let one = Dd::from(1.0);
                let h2 = Dd::from(h) * Dd::from(h);
                (one - t3 * 10.0 + t4 * 15.0 - t5 * 6.0) * a[0]
                    + (t - t3 * 6.0 + t4 * 8.0 - t5 * 3.0) * Dd::from(h) * a[1]
                    + (t2 - t3 * 3.0 + t4 * 3.0 - t5) * h2 * (0.5 * a[2])
                    + (t3 - t4 * 2.0 + t5) * h2 * (0.5 * b[2])
                    + (t4 * 7.0 - t3 * 4.0 - t5 * 3.0) * Dd::from(h) * b[1]
                    + (t3 * 10.0 - t4 * 15.0 + t5 * 6.0) * b[0]
            };
            chart(tab.ptype(), herm([a.f, fa, fa2], [b.f, fb, fb2]), herm([a.g, ga, ga2], [b.g, gb, gb2]))
        }
    }
}

fn criterion_3() -> Outcome {
    let h = 1e-5;
    let hd = Dd::from(h);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut worst_link = 0.0f64;
    let mut worst_at = String::new();
    let mut total = 0;
    for fam in all_families() {
        let mut n = 0;
        let mut tries = 0;
        while n < 100 && tries < 1000 {
            tries += 1;
            let p = random_point(&fam, &mut rng, 4.0 * h);
            let Ok(sj) = fam.eval(p) else { continue };
            let x = |ds: f64, dt: f64| dd_position(&fam, Dd::from(p.s) + Dd::from(ds), Dd::from(p.theta) + Dd::from(dt));
            let x0 = x(0.0, 0.0);
            for i in 0..3 {
                let v = sj.x[i].value();
                worst_link = worst_link.max((v - x0[i].hi).abs() / v.abs().max(1.0));
            }
            let (sp, sm, tp, tm) = (x(h, 0.0), x(-h, 0.0), x(0.0, h), x(0.0, -h));
            let (pp, pm, mp, mm) = (x(h, h), x(h, -h), x(-h, h), x(-h, -h));
            let fd = |i: usize| {
                [
                    ((sp[i] - sm[i]) / (hd * 2.0)).hi,
                    ((tp[i] - tm[i]) / (hd * 2.0)).hi,
                    ((sp[i] - x0[i] * 2.0 + sm[i]) / (hd * hd)).hi,
                    ((pp[i] - pm[i] - mp[i] + mm[i]) / (hd * hd * 4.0)).hi,
                    ((tp[i] - x0[i] * 2.0 + tm[i]) / (hd * hd)).hi,
                ]
            };
            let orders = [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];
            let fds: Vec<[f64; 5]> = (0..3).map(fd).collect();
            for (k, &(a, b)) in orders.iter().enumerate() {
                let reference = (0..3).fold(0.0f64, |m, i| m.max(fds[i][k].abs()));
                for i in 0..3 {
                    let jet = sj.x[i].partial(a, b).unwrap();
                    let rel = (jet - fds[i][k]).abs() / reference.max(1e-300);
                    if rel > worst {
                        worst = rel;
                        worst_at = format!("{} at ({:.6}, {:.6}) d{a}{b}", fam.id(), p.s, p.theta);
                    }
                }
            }
            n += 1;
        }
        total += n;
    }
    let ok = total == 100 * FamilyKind::ALL.len() && worst < 1e-6 && worst_link < 1e-13;
    check(ok, format!("{total} points, worst rel error {worst:.2e} ({worst_at}), f64/oracle link {worst_link:.2e}"))
}

fn criterion_4() -> Outcome {
    let r = fit(&SurfaceFamily::pseudosphere_s21(1.0).unwrap());
    let (l, m) = (r.lambda.unwrap_or(f64::NAN), r.mu.unwrap_or(f64::NAN));
    let ok = r.residual_rms < 1e-8 && r.classification == "DiagI" && (l - 2.0).abs() < 1e-6 && (m - 2.0).abs() < 1e-6;
    check(ok, format!("rms {:.2e}, {} lambda {l:.9} mu {m:.9}", r.residual_rms, r.classification))
}

fn criterion_5() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for fam in [SurfaceFamily::minimal_profile_i().unwrap(), SurfaceFamily::minimal_profile_ii().unwrap()] {
        let r = fit(&fam);
        let amax = r.a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let hmax = GridSpec::over_default(&fam, 20)
            .nodes()
            .into_iter()
            .filter_map(|p| point_geometry(&fam, p, FormChoice::ThirdForm).ok())
            .fold(0.0f64, |m, g| m.max(g.curvature.h.abs()));
        ok &= amax < 1e-6 && hmax < 1e-7;
        parts.push(format!("{}: max|a_ij| {amax:.2e}, max|H| {hmax:.2e}", fam.id()));
    }
    check(ok, parts.join("; "))
}

fn criterion_6() -> Outcome {
    let fam = SurfaceFamily::hyperbolic_h2(1.0).unwrap();
    let r = fit(&fam);
    let diag2 = matches_pattern(&a3(&r.a), Pattern::DiagII, Tolerances::default().classify);
    let quadric = GridSpec::over_default(&fam, 20)
        .nodes()
        .into_iter()
        .map(|p| {
            let x = fam.position(p).unwrap();
            (x.x3 * x.x3 - x.x1 * x.x1 - x.x2 * x.x2 - 1.0).abs()
        })
        .fold(0.0f64, f64::max);
    let ok = r.residual_rms < 1e-8 && matches!(diag2, Some((l, m)) if (l - m).abs() < 1e-6) && quadric < 1e-12;
    check(ok, format!("rms {:.2e}, DiagII fit {diag2:?}, quadric error {quadric:.2e}", r.residual_rms))
}

fn criterion_7() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for sign in [1.0, -1.0] {
        let fam = null_reciprocal(sign);
        let r = fit(&fam);
        let (l, m) = (r.lambda.unwrap_or(f64::NAN), r.mu.unwrap_or(f64::NAN));
        let mut dev = 0.0f64;
        for i in 0..10 {
            let s = 0.2 + 0.2 * i as f64;
            let ChartState::Null(ns) = fam.chart_state(ChartPoint::new(s, 0.0)).unwrap() else { unreachable!() };
            let (a, b) = lambda_mu_null_axis(&ns).unwrap();
            dev = dev.max((a + 2.0).abs()).max((b + 2.0).abs());
        }
        ok &= r.residual_rms < 1e-8 && (l - m).abs() < 1e-6 && dev < 1e-9;
        parts.push(format!("k={:+}/(4s): rms {:.2e}, fit lambda {l:.6} mu {m:.6}, closed-form dev from (-2,-2) {dev:.1e}", sign, r.residual_rms));
    }
    let cubic = SurfaceFamily::cubic_null_minimal(1.0, 0.0).unwrap();
    let mut dev = 0.0f64;
    for i in 0..10 {
        let s = 0.2 + 0.2 * i as f64;
        let ns = NullAxisState::new(s, cubic.null_profile().unwrap().derivatives(s));
        let (a, b) = lambda_mu_null_axis(&ns).unwrap();
        dev = dev.max(a.abs()).max(b.abs());
    }
    let r = fit(&cubic);
    let amax = r.a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    ok &= dev < 1e-10 && amax < 1e-6;
    parts.push(format!("cubic: closed-form |(lambda,mu)| {dev:.1e}, max|a_ij| {amax:.1e}"));
    check(ok, parts.join("; "))
}

fn criterion_8() -> Outcome {
    let fam = SurfaceFamily::perturbed(ProfileType::I).unwrap();
    let constraint = fam.profile_table().unwrap().constraint_residual();
    let r = fit(&fam);
    let status = Command::new(env!("CARGO_BIN_EXE_mft")).args(["fit", "--family", "rev-spacelike-axis"]).output().unwrap().status;
    let ok = constraint < 1e-8 && r.residual_rms > 1e-3 && !r.pass && status.code() == Some(1);
    check(ok, format!("constraint residual {constraint:.1e}, rms {:.3}, cli exit {:?}", r.residual_rms, status.code()))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let exact = [
        SurfaceFamily::pseudosphere_s21(1.0).unwrap(),
        SurfaceFamily::hyperbolic_h2(1.0).unwrap(),
        SurfaceFamily::minimal_profile_i().unwrap(),
        SurfaceFamily::minimal_profile_ii().unwrap(),
    ];
    let fitted: Vec<(f64, f64)> = exact.iter().map(|f| {
        let r = fit(f);
        (r.lambda.unwrap_or(0.0), r.mu.unwrap_or(0.0))
    }).collect();
    let mut worst = 0.0f64;
    let mut n = 0;
    while n < 50 {
        let k = n % exact.len();
        let p = random_point(&exact[k], &mut rng, 0.0);
        let ChartState::Profile(ps) = exact[k].chart_state(p).unwrap() else { unreachable!() };
        let st = PhiState::from_profile(&ps).unwrap();
        let (a, b) = residual_reduced_system(&st, ps.ptype, fitted[k].0, fitted[k].1);
        worst = worst.max(a.abs()).max(b.abs());
        n += 1;
    }
    let sweep = (0..100).map(|i| obstruction_poly(ProfileType::I, 2.0, 2.0, i as f64 / 99.0).abs()).fold(0.0f64, f64::max);
    let at = obstruction_poly(ProfileType::I, 2.0, 3.0, 0.5);
    let ok = worst < 1e-8 && sweep < 1e-12 && (at - 1.0).abs() < 1e-12;
    check(ok, format!("reduced-system residual {worst:.1e} over {n} points; P(2,2,.) max {sweep:.1e}; P(2,3,0.5) = {at}"))
}

fn criterion_10() -> Outcome {
    let families = [
        SurfaceFamily::pseudosphere_s21(1.0).unwrap(),
        SurfaceFamily::hyperbolic_h2(1.0).unwrap(),
        SurfaceFamily::minimal_profile_i().unwrap(),
        SurfaceFamily::minimal_profile_ii().unwrap(),
        null_reciprocal(1.0),
        null_reciprocal(-1.0),
        SurfaceFamily::cubic_null_minimal(1.0, 0.0).unwrap(),
    ];
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for fam in &families {
        let r = fit(fam);
        let (l, m) = (r.lambda.unwrap_or(0.0), r.mu.unwrap_or(0.0));
        let dev = consistency_check(fam, l, m, 10, CONSISTENCY_POINTS).unwrap();
        worst = worst.max(dev);
        parts.push(format!("{} {dev:.1e}", fam.id()));
    }
    check(worst < 1e-6, format!("worst disagreement {worst:.1e} ({})", parts.join(", ")))
}

fn criterion_11() -> Outcome {
    let mft = env!("CARGO_BIN_EXE_mft");
    // Each run works in its own directory with relative paths, so the
    // reports echo identical file names.
    let run = || -> Vec<Vec<u8>> {
        let dir = tempfile::tempdir().unwrap();
        let cmd = |args: &[&str]| Command::new(mft).current_dir(dir.path()).args(args).output().unwrap().stdout;
        vec![
            cmd(&["mesh", "--family", "rev-null-axis", "--grid", "-1:1:9,-1:1:7", "--force-domain", "--out", "m.obj"]),
            std::fs::read(dir.path().join("m.obj")).unwrap(),
            std::fs::read(dir.path().join("m.csv")).unwrap(),
            cmd(&["fit", "--family", "hyperbolic-h2"]),
            cmd(&["verify", "T4", "--seed", "7"]),
            cmd(&["sweep", "--type", "I", "--case", "V"]),
        ]
    };
    let (a, b) = (run(), run());
    let fam = null_reciprocal(1.0);
    let grid = GridSpec::over_default(&fam, 12);
    let bytes = |m: &mft_core::mesh::Mesh| {
        let mut buf = Vec::new();
        m.write_obj(&mut buf).unwrap();
        m.write_csv(&mut buf).unwrap();
        buf
    };
    let in_process = bytes(&build_mesh(&fam, &grid).unwrap()) == bytes(&build_mesh(&fam, &grid).unwrap());
    let same = a == b && a.iter().all(|o| !o.is_empty());
    let size: usize = a.iter().map(Vec::len).sum();
    check(same && in_process, format!("{} artifacts ({size} bytes) identical across two runs", a.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("operator cross-validation", criterion_1),
        ("third-form dual computation", criterion_2),
        ("jet oracle", criterion_3),
        ("pseudosphere fit", criterion_4),
        ("minimal branch", criterion_5),
        ("hyperbolic plane fit", criterion_6),
        ("null-axis pseudosphere and cubic", criterion_7),
        ("negative control", criterion_8),
        ("case machinery", criterion_9),
        ("consistency of characterizations", criterion_10),
        ("determinism", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
