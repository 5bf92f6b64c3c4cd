//! Reduced ODE systems, obstruction expressions and case sweeps for the
//! relation `Δ^III x = Ax` on surfaces of revolution.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{rprime_profile, DEFAULT_EPS_DEG};
use crate::report::SCHEMA_VERSION;
use crate::surfaces::{NullProfile, ProfileState, ProfileType};

pub use crate::surfaces::NullAxisState;

/// Tangent-angle data at one profile point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhiState {
    pub phi: f64,
    pub dphi: f64,
    pub ddphi: f64,
    pub f: f64,
    pub g: f64,
    pub r: f64,
    pub rprime: f64,
}

impl PhiState {
    /// Builds the state from profile data, computing `r = 2H/K` and `r'`.
    pub fn from_profile(ps: &ProfileState) -> Result<Self> {
        let (_, sn) = ps.trig();
        if ps.dphi.abs() < DEFAULT_EPS_DEG {
            return Err(Error::ParabolicPoint(0.0));
        }
        if sn.abs() < DEFAULT_EPS_DEG {
            return Err(Error::OutOfDomain { s: ps.s, theta: f64::NAN, locus: "sin(phi) = 0".into() });
        }
        let r = match ps.ptype {
            ProfileType::I => -(1.0 / ps.dphi + ps.f / sn),
            ProfileType::II => 1.0 / ps.dphi + ps.f / sn,
        };
        Ok(PhiState { phi: ps.phi, dphi: ps.dphi, ddphi: ps.ddphi, f: ps.f, g: ps.g, r, rprime: rprime_profile(ps) })
    }

    fn trig(&self, ptype: ProfileType) -> (f64, f64) {
        ptype.tangent(self.phi)
    }
}

/// Left-hand sides of the two reduced equations, whose right-hand sides
/// are `lambda f` and `mu g`.
fn reduced_lhs(st: &PhiState, ptype: ProfileType) -> (f64, f64) {
    let (c, sn) = st.trig(ptype);
    let (r, rp, w) = (st.r, st.rprime, st.dphi);
    match ptype {
        ProfileType::I => (-r * sn + rp * c / w, r * c + rp * sn / w),
        ProfileType::II => (-r * sn - rp * c / w, -r * c - rp * sn / w),
    }
}

/// `(LHS1 - lambda f, LHS2 - mu g)`.
pub fn residual_reduced_system(st: &PhiState, ptype: ProfileType, lambda: f64, mu: f64) -> (f64, f64) {
    let (a, b) = reduced_lhs(st, ptype);
    (a - lambda * st.f, b - mu * st.g)
}

/// The pointwise `(lambda, mu)` that make the reduced system hold exactly.
pub fn lambda_mu_reduced(st: &PhiState, ptype: ProfileType) -> Result<(f64, f64)> {
    if st.f.abs() < DEFAULT_EPS_DEG || st.g.abs() < DEFAULT_EPS_DEG {
        return Err(Error::DivisionNearZero(st.f.abs().min(st.g.abs())));
    }
    let (a, b) = reduced_lhs(st, ptype);
    Ok((a / st.f, b / st.g))
}

/// `r'` minus the value implied by the reduced system.
pub fn rprime_consistency(st: &PhiState, ptype: ProfileType, lambda: f64, mu: f64) -> f64 {
    let (c, sn) = st.trig(ptype);
    let implied = match ptype {
        ProfileType::I => st.dphi * (lambda * st.f * c + mu * st.g * sn),
        ProfileType::II => st.dphi * (-lambda * st.f * c + mu * st.g * sn),
    };
    st.rprime - implied
}

/// `r'` minus the value obtained by differentiating `r` expressed through
/// `lambda` and `mu`: `(mu-lambda)/2 cos sin` for type I and
/// `(lambda-mu)/2 cosh sinh` for type II.
pub fn rprime_from_derivative(st: &PhiState, ptype: ProfileType, lambda: f64, mu: f64) -> f64 {
    let (c, sn) = st.trig(ptype);
    let implied = match ptype {
        ProfileType::I => 0.5 * (mu - lambda) * c * sn,
        ProfileType::II => 0.5 * (lambda - mu) * c * sn,
    };
    st.rprime - implied
}

/// `phi''` predicted by the second reduced equation,
/// `(phi'^2 / S)(mu g phi' + 2 C)`.
pub fn ddphi_relation(st: &PhiState, ptype: ProfileType, mu: f64) -> f64 {
    let (c, sn) = st.trig(ptype);
    st.dphi * st.dphi / sn * (mu * st.g * st.dphi + 2.0 * c)
}

/// Whether an expression is evaluated as literally transcribed or in its re-derived form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Errata {
    Printed,
    Corrected,
}

/// Ascending coefficients of the final case-V relation in `x`, where `x`
/// is `cos^2 phi` (type I) or `cosh^2 phi` (type II).
///
/// The literal type II relation is a cubic that does not vanish on the
/// imaginary-radius pseudosphere (`lambda = mu = -2`). Re-deriving the
/// elimination gives the type I quadratic with `(lambda, mu)` negated,
/// which is what `Errata::Corrected` returns. Both variants agree for type I.
pub fn obstruction_coefficients(ptype: ProfileType, lambda: f64, mu: f64, errata: Errata) -> Vec<f64> {
    let type_i = |l: f64, m: f64| {
        let d = m - l;
        vec![6.0 * m * (l - 1.0) - 2.0 * l * (l + 1.0), d * (d * (l - 1.0) - 6.0 * l + 2.0), -l * d * d]
    };
    match (ptype, errata) {
        (ProfileType::I, _) => type_i(lambda, mu),
        (ProfileType::II, Errata::Corrected) => type_i(-lambda, -mu),
        (ProfileType::II, Errata::Printed) => {
            let (l, m) = (lambda, mu);
            let d = m - l;
            vec![
                8.0 * (l + 1.0),
                6.0 * l * l - 2.0 * l - 2.0 * m - 2.0 * l * m + 8.0,
                d * (d * (l - 1.0) + 4.0 * l),
                -l * d * d,
            ]
        }
    }
}

/// The literal case-V relation evaluated at `c2`.
pub fn obstruction_poly(ptype: ProfileType, lambda: f64, mu: f64, c2: f64) -> f64 {
    obstruction_poly_with(ptype, lambda, mu, c2, Errata::Printed)
}

pub fn obstruction_poly_with(ptype: ProfileType, lambda: f64, mu: f64, c2: f64, errata: Errata) -> f64 {
    obstruction_coefficients(ptype, lambda, mu, errata).iter().rev().fold(0.0, |acc, c| acc * c2 + c)
}

fn null_axis_guard(st: &NullAxisState) -> Result<()> {
    if st.s.abs() < DEFAULT_EPS_DEG {
        return Err(Error::OutOfDomain { s: st.s, theta: f64::NAN, locus: "s = 0".into() });
    }
    if st.ddk.abs() < DEFAULT_EPS_DEG {
        return Err(Error::DegenerateK(st.ddk));
    }
    Ok(())
}

/// `(lambda(s), mu(s))` from the closed-form solution of the reduced
/// null-axis system, evaluated literally.
pub fn lambda_mu_null_axis(st: &NullAxisState) -> Result<(f64, f64)> {
    null_axis_guard(st)?;
    let NullAxisState { s, k, dk, ddk, dddk } = *st;
    let factor = 2.0 * dk * dddk / (ddk * ddk) - 1.0;
    let tail = 2.0 * dk * dk / (s * ddk);
    let lambda = dk * (2.0 * s - k + s * dk) / (s * s * ddk) * factor - tail + dk;
    let mu = dk * (2.0 * s + k - s * dk) / (s * s * ddk) * factor + tail - dk;
    Ok((lambda, mu))
}

/// As [`lambda_mu_null_axis`], multiplied by `sign(k')`. The literal
/// formulas assume a spacelike surface (`k' > 0`); on the timelike branch
/// the operator, and with it `A`, changes sign.
pub fn lambda_mu_null_axis_oriented(st: &NullAxisState) -> Result<(f64, f64)> {
    let (l, m) = lambda_mu_null_axis(st)?;
    let sign = st.dk.signum();
    Ok((sign * l, sign * m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseId {
    III,
    IV,
    V,
}

impl std::str::FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "III" | "3" => Ok(CaseId::III),
            "IV" | "4" => Ok(CaseId::IV),
            "V" | "5" => Ok(CaseId::V),
            other => Err(Error::Parse(format!("case must be III, IV or V, got {other:?}"))),
        }
    }
}

/// Which chart a sweep refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepType {
    I,
    II,
    III,
}

impl std::str::FromStr for SweepType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "1" => Ok(SweepType::I),
            "II" | "2" => Ok(SweepType::II),
            "III" | "3" => Ok(SweepType::III),
            other => Err(Error::Parse(format!("type must be I, II or III, got {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub nx: usize,
    pub ny: usize,
    pub errata: Errata,
    /// Fixed profile radius used by the case III expression.
    pub f: f64,
    /// Relative margin around `lambda = 0`, `mu = 0`, `lambda = mu`
    /// excluded from case V sweeps.
    pub exclude: f64,
    /// `k(s)` for null-axis sweeps.
    pub k: NullProfile,
}

impl SweepSpec {
    /// Default boxes: `(phi, lambda)` for case III, `(phi, mu)` for case IV,
    /// `(lambda, mu)` for case V, and `s` for the null axis.
    pub fn default_for(t: SweepType, case: CaseId) -> Self {
        let (x, y) = match (t, case) {
            (SweepType::III, _) => ((0.5, 2.0), (0.0, 0.0)),
            (SweepType::I, CaseId::III) => ((0.05, std::f64::consts::PI - 0.05), (0.01, 5.0)),
            (SweepType::II, CaseId::III) => ((0.05, 3.0), (0.01, 5.0)),
            (SweepType::I, CaseId::IV) => ((0.05, std::f64::consts::PI - 0.05), (-5.0, 5.0)),
            (SweepType::II, CaseId::IV) => ((0.0, 2.0), (0.0, 5.0)),
            (_, CaseId::V) => ((-5.0, 5.0), (-5.0, 5.0)),
        };
        let (nx, ny) = if t == SweepType::III { (200, 1) } else { (200, 200) };
        SweepSpec {
            x,
            y,
            nx,
            ny,
            errata: Errata::Printed,
            f: 1.0,
            exclude: 1e-9,
            k: NullProfile::Polynomial(vec![0.0, 0.0, 1.0]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub max: f64,
    /// `std / |mean|`, or `std` when the mean vanishes.
    pub cv: f64,
}

impl Stats {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len().max(1) as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let std = var.sqrt();
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let cv = if mean.abs() > 1e-300 { std / mean.abs() } else { std };
        Stats { mean, std, min, max, cv }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridEcho {
    pub x_name: String,
    pub x: (f64, f64),
    pub nx: usize,
    pub y_name: String,
    pub y: (f64, f64),
    pub ny: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub report: String,
    #[serde(rename = "type")]
    pub sweep_type: SweepType,
    pub case: CaseId,
    pub expression_id: String,
    pub expression: String,
    pub errata: Errata,
    pub grid: GridEcho,
    pub evaluated: usize,
    pub excluded: usize,
    pub min_abs: f64,
    pub argmin: (f64, f64),
    pub lambda_stats: Option<Stats>,
    pub mu_stats: Option<Stats>,
    /// Whether the sweep witnesses the case's contradiction.
    pub witnessed: bool,
    pub note: String,
}

fn axis(range: (f64, f64), n: usize, i: usize) -> f64 {
    if n <= 1 {
        range.0
    } else {
        range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
    }
}

/// Threshold below which a swept expression counts as vanishing.
pub const SWEEP_ZERO: f64 = 1e-9;
/// `lambda(s)` counts as a genuine function of `s` above this variation.
pub const CONSTANCY_CV: f64 = 0.1;

/// Evaluates one case's contradiction expression over a grid.
pub fn case_sweep(t: SweepType, case: CaseId, spec: &SweepSpec) -> Result<SweepReport> {
    if spec.nx == 0 || spec.ny == 0 {
        return Err(Error::InvalidParameter("sweep needs at least one grid point per axis".into()));
    }
    if ![spec.x.0, spec.x.1, spec.y.0, spec.y.1, spec.f].iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidParameter("sweep bounds must be finite".into()));
    }
    if t == SweepType::III {
        return null_axis_sweep(case, spec);
    }
    let ptype = if t == SweepType::I { ProfileType::I } else { ProfileType::II };
    let errata = spec.errata;
    let f = spec.f;
    let (id, text, x_name, y_name): (&str, String, &str, &str) = match (ptype, case, errata) {
        (ProfileType::I, CaseId::III, _) => ("I.III", "f(1+lambda sin^2 phi)".into(), "phi", "lambda"),
        (ProfileType::II, CaseId::III, Errata::Printed) => ("II.III", "f(1-lambda sin^2 phi)".into(), "phi", "lambda"),
        (ProfileType::II, CaseId::III, Errata::Corrected) => ("II.III", "f(1+lambda sinh^2 phi)".into(), "phi", "lambda"),
        (ProfileType::I, CaseId::IV, _) => ("I.IV", "3+(mu/2-1)cos^2 phi".into(), "phi", "mu"),
        (ProfileType::II, CaseId::IV, _) => ("II.IV", "3-(mu/2+1)cosh^2 phi".into(), "phi", "mu"),
        (_, CaseId::V, _) => (
            if ptype == ProfileType::I { "I.V" } else { "II.V" },
            "max |coefficient| of the final relation in x".into(),
            "lambda",
            "mu",
        ),
    };
    let eval = |x: f64, y: f64| -> Option<f64> {
        match case {
            CaseId::III => Some(match (ptype, errata) {
                (ProfileType::I, _) => f * (1.0 + y * x.sin().powi(2)),
                (ProfileType::II, Errata::Printed) => f * (1.0 - y * x.sin().powi(2)),
                (ProfileType::II, Errata::Corrected) => f * (1.0 + y * x.sinh().powi(2)),
            }),
            CaseId::IV => Some(match ptype {
                ProfileType::I => 3.0 + (0.5 * y - 1.0) * x.cos().powi(2),
                ProfileType::II => 3.0 - (0.5 * y + 1.0) * x.cosh().powi(2),
            }),
            CaseId::V => {
                let scale = x.abs().max(y.abs()).max(1.0);
                let eps = spec.exclude * scale;
                if x.abs() < eps || y.abs() < eps || (x - y).abs() < eps {
                    return None;
                }
                let coeffs = obstruction_coefficients(ptype, x, y, errata);
                Some(coeffs.iter().fold(0.0f64, |a, c| a.max(c.abs())))
            }
        }
    };
    let rows: Vec<(usize, usize, f64, (f64, f64))> = (0..spec.ny)
        .into_par_iter()
        .map(|j| {
            let y = axis(spec.y, spec.ny, j);
            let mut best = (f64::INFINITY, (f64::NAN, f64::NAN));
            let (mut count, mut skipped) = (0, 0);
            for i in 0..spec.nx {
                let x = axis(spec.x, spec.nx, i);
                match eval(x, y) {
                    Some(v) => {
                        count += 1;
                        if v.abs() < best.0 {
                            best = (v.abs(), (x, y));
                        }
                    }
                    None => skipped += 1,
                }
            }
            (count, skipped, best.0, best.1)
        })
        .collect();
    let evaluated = rows.iter().map(|r| r.0).sum();
    let excluded = rows.iter().map(|r| r.1).sum();
    let (min_abs, argmin) = rows
        .iter()
        .fold((f64::INFINITY, (f64::NAN, f64::NAN)), |acc, r| if r.2 < acc.0 { (r.2, r.3) } else { acc });
    let witnessed = min_abs > SWEEP_ZERO;
    let note = match case {
        CaseId::III => format!(
            "sign region: lambda in [{}, {}]; the expression is bounded away from zero only where 1 + lambda*S^2 keeps one sign",
            spec.y.0, spec.y.1
        ),
        CaseId::IV => "the expression alone can vanish for some mu; the contradiction also uses the accompanying ODE constraints"
            .into(),
        CaseId::V => format!(
            "x = {}; points with lambda = 0, mu = 0 or lambda = mu are excluded",
            if ptype == ProfileType::I { "cos^2 phi" } else { "cosh^2 phi" }
        ),
    };
    Ok(SweepReport {
        schema_version: SCHEMA_VERSION,
        report: "case-sweep".into(),
        sweep_type: t,
        case,
        expression_id: id.into(),
        expression: text,
        errata,
        grid: GridEcho { x_name: x_name.into(), x: spec.x, nx: spec.nx, y_name: y_name.into(), y: spec.y, ny: spec.ny },
        evaluated,
        excluded,
        min_abs,
        argmin,
        lambda_stats: None,
        mu_stats: None,
        witnessed,
        note,
    })
}

fn null_axis_sweep(case: CaseId, spec: &SweepSpec) -> Result<SweepReport> {
    let pts: Vec<Option<(f64, f64)>> = (0..spec.nx)
        .into_par_iter()
        .map(|i| {
            let s = axis(spec.x, spec.nx, i);
            let st = NullAxisState::new(s, spec.k.derivatives(s));
            lambda_mu_null_axis(&st).ok()
        })
        .collect();
    let excluded = pts.iter().filter(|p| p.is_none()).count();
    let good: Vec<(f64, f64)> = pts.into_iter().flatten().collect();
    if good.is_empty() {
        return Err(Error::TooFewSamples { accepted: 0, required: 1 });
    }
    let lambdas: Vec<f64> = good.iter().map(|p| p.0).collect();
    let mus: Vec<f64> = good.iter().map(|p| p.1).collect();
    let (ls, ms) = (Stats::of(&lambdas), Stats::of(&mus));
    let varies = |st: &Stats| st.cv > CONSTANCY_CV;
    let (min_abs, witnessed, id, text) = match case {
        CaseId::III => {
            let m = mus.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            (m, m > SWEEP_ZERO || varies(&ls), "III.III", "mu(s) = 0 with constant lambda")
        }
        CaseId::IV => {
            let l = lambdas.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            (l, l > SWEEP_ZERO || varies(&ms), "III.IV", "lambda(s) = 0 with constant mu")
        }
        CaseId::V => (ls.std.max(ms.std), varies(&ls) || varies(&ms), "III.V", "lambda(s), mu(s) constant"),
    };
    Ok(SweepReport {
        schema_version: SCHEMA_VERSION,
        report: "case-sweep".into(),
        sweep_type: SweepType::III,
        case,
        expression_id: id.into(),
        expression: text.into(),
        errata: spec.errata,
        grid: GridEcho { x_name: "s".into(), x: spec.x, nx: spec.nx, y_name: "-".into(), y: (0.0, 0.0), ny: 1 },
        evaluated: good.len(),
        excluded,
        min_abs,
        argmin: (f64::NAN, f64::NAN),
        lambda_stats: Some(ls),
        mu_stats: Some(ms),
        witnessed,
        note: format!("k = {:?}; variation measured by the coefficient of variation, threshold {CONSTANCY_CV}", spec.k),
    })
}
