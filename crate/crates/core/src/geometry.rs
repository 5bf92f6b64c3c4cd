//! Fundamental forms, curvatures and Beltrami operators at a chart point.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::lorentz::{Signature, Vec3M};
use crate::surfaces::{ChartPoint, ChartState, NullAxisState, ProfileState, ProfileType, SurfaceFamily, SurfaceJet};

/// Default relative degeneracy threshold.
pub const DEFAULT_EPS_DEG: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormChoice {
    FirstForm,
    SecondForm,
    ThirdForm,
}

impl FormChoice {
    pub fn label(self) -> &'static str {
        match self {
            FormChoice::FirstForm => "I",
            FormChoice::SecondForm => "II",
            FormChoice::ThirdForm => "III",
        }
    }
}

impl fmt::Display for FormChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for FormChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "1" => Ok(FormChoice::FirstForm),
            "II" | "2" => Ok(FormChoice::SecondForm),
            "III" | "3" => Ok(FormChoice::ThirdForm),
            other => Err(Error::Parse(format!("form must be I, II or III, got {other:?}"))),
        }
    }
}

/// Coefficient jets; only the value and first partials are exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormJets {
    pub e: Jet2,
    pub f: Jet2,
    pub g: Jet2,
    pub l: Jet2,
    pub m: Jet2,
    pub n: Jet2,
    pub e11: Jet2,
    pub e12: Jet2,
    pub e22: Jet2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[allow(non_snake_case)]
pub struct FormCoefficients {
    pub E: f64,
    pub F: f64,
    pub G: f64,
    pub L: f64,
    pub M: f64,
    pub N: f64,
    /// Third form from the rational formulas in `E..N`.
    pub e11: f64,
    pub e12: f64,
    pub e22: f64,
    /// Third form as `<n_s, n_s>`, `<n_s, n_t>`, `<n_t, n_t>`.
    pub e11_normal: f64,
    pub e12_normal: f64,
    pub e22_normal: f64,
    pub normal: Vec3M,
    pub jets: FormJets,
    pub sig: Signature,
}

impl FormCoefficients {
    /// `(J11, J12, J22)` for the chosen form, as jets.
    fn form_jets(&self, form: FormChoice) -> (Jet2, Jet2, Jet2) {
        let j = &self.jets;
        match form {
            FormChoice::FirstForm => (j.e, j.f, j.g),
            FormChoice::SecondForm => (j.l, j.m, j.n),
            FormChoice::ThirdForm => (j.e11, j.e12, j.e22),
        }
    }

    pub fn metric_det(&self) -> f64 {
        self.E * self.G - self.F * self.F
    }

    pub fn second_det(&self) -> f64 {
        self.L * self.N - self.M * self.M
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryConfig {
    pub eps_deg: f64,
    /// Global sign applied to the normal.
    pub orientation: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        GeometryConfig { eps_deg: DEFAULT_EPS_DEG, orientation: 1.0 }
    }
}

pub fn fundamental_forms(sj: &SurfaceJet) -> Result<FormCoefficients> {
    fundamental_forms_with(sj, &GeometryConfig::default())
}

pub fn fundamental_forms_with(sj: &SurfaceJet, cfg: &GeometryConfig) -> Result<FormCoefficients> {
    let sig = sj.sig;
    let x = &sj.x;
    let xs = x.map(|c| c.d_ds());
    let xt = x.map(|c| c.d_dtheta());
    let xss = xs.map(|c| c.d_ds());
    let xst = xs.map(|c| c.d_dtheta());
    let xtt = xt.map(|c| c.d_dtheta());

    let e = sig.inner_with(&xs, &xs);
    let f = sig.inner_with(&xs, &xt);
    let g = sig.inner_with(&xt, &xt);
    let det = e * g - f * f;

    let scale_1 = e.value().abs().max(g.value().abs()).max(1.0);
    if det.value().abs() < cfg.eps_deg * scale_1 * scale_1 {
        return Err(Error::DegenerateMetric(det.value()));
    }

    let c = sig.cross_with(&xs, &xt).map(|v| v * cfg.orientation);
    let cc = sig.inner_with(&c, &c);
    if cc.value().abs() < cfg.eps_deg * scale_1 * scale_1 {
        return Err(Error::LightlikeNormal(cc.value()));
    }
    let inv_len = cc.abs().sqrt()?.recip()?;
    let n = c.map(|v| v * inv_len);

    let l = sig.inner_with(&xss, &n);
    let m = sig.inner_with(&xst, &n);
    let nn = sig.inner_with(&xtt, &n);

    let scale = [e, g, l, nn].iter().map(|j| j.value().abs()).fold(1.0, f64::max);
    let second = l * nn - m * m;
    if second.value().abs() < cfg.eps_deg * scale * scale {
        return Err(Error::ParabolicPoint(second.value()));
    }

    let inv_det = det.recip()?;
    let e11 = (e * m * m - f * l * m * 2.0 + g * l * l) * inv_det;
    let e12 = (e * m * nn - f * l * nn + g * l * m - f * m * m) * inv_det;
    let e22 = (e * nn * nn - f * m * nn * 2.0 + g * m * m) * inv_det;

    let ns = n.map(|c| c.d_ds());
    let nt = n.map(|c| c.d_dtheta());

    let jets = FormJets { e, f, g, l, m, n: nn, e11, e12, e22 };
    if ![e, f, g, l, m, nn, e11, e12, e22].iter().all(Jet2::is_finite) {
        return Err(Error::DegenerateMetric(det.value()));
    }
    Ok(FormCoefficients {
        E: e.value(),
        F: f.value(),
        G: g.value(),
        L: l.value(),
        M: m.value(),
        N: nn.value(),
        e11: e11.value(),
        e12: e12.value(),
        e22: e22.value(),
        e11_normal: sig.inner_with(&ns, &ns).value(),
        e12_normal: sig.inner_with(&ns, &nt).value(),
        e22_normal: sig.inner_with(&nt, &nt).value(),
        normal: Vec3M::new(n[0].value(), n[1].value(), n[2].value()),
        jets,
        sig,
    })
}

/// Curvature data at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureData {
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub r1: f64,
    pub r2: f64,
    pub r: f64,
    pub rprime: f64,
}

/// `2H/K` as a jet with exact first partials.
fn r_jet(fc: &FormCoefficients) -> Result<Jet2> {
    let j = &fc.jets;
    let det = j.e * j.g - j.f * j.f;
    let k = (j.l * j.n - j.m * j.m).checked_div(&det)?;
    let two_h = (j.e * j.n - j.f * j.m * 2.0 + j.g * j.l).checked_div(&det)?;
    two_h.checked_div(&k)
}

/// `K`, `H`, principal curvatures, `r = 2H/K` and `dr/ds`.
///
/// When `ctx` carries profile data for a non-null revolution chart, `r'`
/// uses the closed form in `phi`; otherwise it is the s-derivative of the
/// jet `2H/K`.
pub fn curvatures(fc: &FormCoefficients, ctx: Option<&ChartState>) -> Result<CurvatureData> {
    let det = fc.metric_det();
    let k = fc.second_det() / det;
    let h = (fc.E * fc.N - 2.0 * fc.F * fc.M + fc.G * fc.L) / (2.0 * det);
    if k.abs() < DEFAULT_EPS_DEG * h.abs().powi(2).max(1.0) {
        return Err(Error::FlatPoint(k));
    }

    let scale = [fc.E, fc.G, fc.L, fc.N].iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let diagonal = fc.F.abs() <= 1e-14 * scale && fc.M.abs() <= 1e-14 * scale;
    let (r1, r2) = if diagonal {
        (fc.L / fc.E, fc.N / fc.G)
    } else {
        let disc = h * h - k;
        if disc < -1e-12 * (h * h).max(k.abs()).max(1.0) {
            return Err(Error::NonRealPrincipal(disc));
        }
        let root = disc.max(0.0).sqrt();
        (h + root, h - root)
    };

    let r = 2.0 * h / k;
    let rprime = match ctx {
        Some(ChartState::Profile(ps)) => rprime_profile(ps),
        _ => r_jet(fc)?.partial(1, 0)?,
    };
    Ok(CurvatureData { k, h, r1, r2, r, rprime })
}

/// Closed form of `dr/ds` along a profile.
pub fn rprime_profile(ps: &ProfileState) -> f64 {
    let (c, sn) = ps.trig();
    let (w, a, f) = (ps.dphi, ps.ddphi, ps.f);
    match ps.ptype {
        ProfileType::I => a / (w * w) + f * w * c / (sn * sn) - c / sn,
        ProfileType::II => -a / (w * w) - f * w * c / (sn * sn) + c / sn,
    }
}

/// `Δ^J p = -(1/sqrt|det J|) d_m( sqrt|det J| J^{km} p_k )`.
pub fn beltrami_generic(fc: &FormCoefficients, p: &Jet2, form: FormChoice) -> Result<f64> {
    let (j11, j12, j22) = fc.form_jets(form);
    let det = j11 * j22 - j12 * j12;
    let scale = j11.value().abs().max(j22.value().abs()).max(1.0);
    if det.value().abs() < DEFAULT_EPS_DEG * scale * scale {
        return Err(match form {
            FormChoice::FirstForm => Error::DegenerateMetric(det.value()),
            _ => Error::ParabolicPoint(det.value()),
        });
    }
    let w = det.abs().sqrt()?;
    let inv = det.recip()?;
    let (ps, pt) = (p.d_ds(), p.d_dtheta());
    let v1 = w * (j22 * ps - j12 * pt) * inv;
    let v2 = w * (j11 * pt - j12 * ps) * inv;
    Ok(-(v1.partial(1, 0)? + v2.partial(0, 1)?) / w.value())
}

/// The per-chart closed form of `Δ^III p`.
///
/// For the null-axis chart the operator is written for `k' > 0`; when
/// `k' < 0` the surface is timelike and every term changes sign, so the
/// result is multiplied by `sign(k')`.
pub fn beltrami_closed_form(state: &ChartState, p: &Jet2) -> Result<f64> {
    let (p_s, p_ss, p_tt) = (p.partial(1, 0)?, p.partial(2, 0)?, p.partial(0, 2)?);
    match state {
        ChartState::Profile(ps) => {
            let (c, sn) = ps.trig();
            let (w, a) = (ps.dphi, ps.ddphi);
            let out = |locus: &str| Error::OutOfDomain { s: ps.s, theta: f64::NAN, locus: locus.into() };
            if w.abs() < DEFAULT_EPS_DEG {
                return Err(out("phi' = 0"));
            }
            if sn.abs() < DEFAULT_EPS_DEG {
                return Err(out(if ps.ptype == ProfileType::I { "sin(phi) = 0" } else { "sinh(phi) = 0" }));
            }
            let theta_term = match ps.ptype {
                ProfileType::I => p_tt / (sn * sn),
                ProfileType::II => -p_tt / (sn * sn),
            };
            Ok(-p_ss / (w * w) + theta_term + (a / (w * w * w) - c / (w * sn)) * p_s)
        }
        ChartState::Null(ns) => null_axis_closed_form(ns, p_s, p_ss, p_tt),
    }
}

fn null_axis_closed_form(ns: &NullAxisState, p_s: f64, p_ss: f64, p_tt: f64) -> Result<f64> {
    let NullAxisState { s, dk, ddk, dddk, .. } = *ns;
    if ddk.abs() < DEFAULT_EPS_DEG {
        return Err(Error::OutOfDomain { s, theta: f64::NAN, locus: "k'' = 0".into() });
    }
    if dk.abs() < DEFAULT_EPS_DEG {
        return Err(Error::OutOfDomain { s, theta: f64::NAN, locus: "k' = 0".into() });
    }
    let base = -4.0 * dk * dk / (ddk * ddk) * p_ss - dk * p_tt
        + 2.0 * dk / ddk.powi(3) * (2.0 * dk * dddk - ddk * ddk) * p_s;
    Ok(dk.signum() * base)
}

/// Componentwise `Δ^J x`.
pub fn laplacian_position(fam: &SurfaceFamily, p: ChartPoint, form: FormChoice) -> Result<Vec3M> {
    let sj = fam.eval(p)?;
    let cfg = GeometryConfig { orientation: fam.normal_orientation(), ..GeometryConfig::default() };
    let fc = fundamental_forms_with(&sj, &cfg)?;
    laplacian_from_forms(&sj, &fc, form)
}

pub fn laplacian_from_forms(sj: &SurfaceJet, fc: &FormCoefficients, form: FormChoice) -> Result<Vec3M> {
    let mut out = [0.0; 3];
    for (o, x) in out.iter_mut().zip(sj.x.iter()) {
        *o = beltrami_generic(fc, x, form)?;
    }
    Ok(Vec3M::from_array(out))
}

/// Everything `describe` reports at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointGeometry {
    pub point: ChartPoint,
    pub position: Vec3M,
    pub forms: FormCoefficients,
    pub curvature: CurvatureData,
    pub laplacian: Vec3M,
}

pub fn point_geometry(fam: &SurfaceFamily, p: ChartPoint, form: FormChoice) -> Result<PointGeometry> {
    let state = fam.chart_state(p)?;
    let sj = fam.eval(p)?;
    let cfg = GeometryConfig { orientation: fam.normal_orientation(), ..GeometryConfig::default() };
    let forms = fundamental_forms_with(&sj, &cfg)?;
    let curvature = curvatures(&forms, Some(&state))?;
    let laplacian = laplacian_from_forms(&sj, &forms, form)?;
    Ok(PointGeometry { point: p, position: sj.position(), forms, curvature, laplacian })
}
