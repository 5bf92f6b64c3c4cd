//! Built-in surface families and their chart maps `(s, theta) -> x`.

mod profile;

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use profile::{
    quintic_hermite, solve_minimal_profile, ProfileLaw, ProfileNode, ProfileStart, ProfileState, ProfileTable, ProfileType, EPS_PROFILE,
};

use crate::error::{Error, Result};
use crate::jet::{Jet2, Seed};
use crate::lorentz::{Signature, Vec3M};

/// A chart coordinate pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub s: f64,
    pub theta: f64,
}

impl ChartPoint {
    pub const fn new(s: f64, theta: f64) -> Self {
        ChartPoint { s, theta }
    }
}

/// Position jets at one chart point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceJet {
    pub x: [Jet2; 3],
    pub sig: Signature,
}

impl SurfaceJet {
    pub fn position(&self) -> Vec3M {
        Vec3M::new(self.x[0].value(), self.x[1].value(), self.x[2].value())
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().all(Jet2::is_finite)
    }
}

/// The function `k(s)` of a null-axis surface, `k = g - s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NullProfile {
    /// `k = sign * c^2 / (4 s)`.
    Reciprocal { c: f64, sign: f64 },
    /// `k = sum p_i s^i`, ascending coefficients.
    Polynomial(Vec<f64>),
}

impl NullProfile {
    /// `[k, k', k'', k''']` at `s`.
    pub fn derivatives(&self, s: f64) -> [f64; 4] {
        match self {
            NullProfile::Reciprocal { c, sign } => {
                let a = sign * c * c / 4.0;
                let (s2, s3) = (s * s, s * s * s);
                [a / s, -a / s2, 2.0 * a / s3, -6.0 * a / (s3 * s)]
            }
            NullProfile::Polynomial(p) => {
                let mut out = [0.0; 4];
                for (d, slot) in out.iter_mut().enumerate() {
                    // Horner on the d-th derivative.
                    let mut acc = 0.0;
                    for i in (d..p.len()).rev() {
                        let falling: f64 = (0..d).map(|j| (i - j) as f64).product();
                        acc = acc * s + falling * p[i];
                    }
                    *slot = acc;
                }
                out
            }
        }
    }
}

/// `k` and its derivatives at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NullAxisState {
    pub s: f64,
    pub k: f64,
    pub dk: f64,
    pub ddk: f64,
    pub dddk: f64,
}

impl NullAxisState {
    pub fn new(s: f64, d: [f64; 4]) -> Self {
        NullAxisState { s, k: d[0], dk: d[1], ddk: d[2], dddk: d[3] }
    }
}

/// Profile-level data behind a chart point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChartState {
    Profile(ProfileState),
    Null(NullAxisState),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    RevSpacelikeAxis,
    RevTimelikeAxis,
    RevNullAxis,
    PseudosphereS21,
    HyperbolicH2,
    MinimalProfileI,
    MinimalProfileII,
    CubicNullMinimal,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 8] = [
        FamilyKind::RevSpacelikeAxis,
        FamilyKind::RevTimelikeAxis,
        FamilyKind::RevNullAxis,
        FamilyKind::PseudosphereS21,
        FamilyKind::HyperbolicH2,
        FamilyKind::MinimalProfileI,
        FamilyKind::MinimalProfileII,
        FamilyKind::CubicNullMinimal,
    ];

    pub fn id(self) -> &'static str {
        match self {
            FamilyKind::RevSpacelikeAxis => "rev-spacelike-axis",
            FamilyKind::RevTimelikeAxis => "rev-timelike-axis",
            FamilyKind::RevNullAxis => "rev-null-axis",
            FamilyKind::PseudosphereS21 => "pseudosphere-s21",
            FamilyKind::HyperbolicH2 => "hyperbolic-h2",
            FamilyKind::MinimalProfileI => "minimal-profile-i",
            FamilyKind::MinimalProfileII => "minimal-profile-ii",
            FamilyKind::CubicNullMinimal => "cubic-null-minimal",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.id() == id)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown family {id:?}")))
    }

    /// Short parameter schema shown by `mft list`.
    pub fn param_schema(self) -> &'static str {
        match self {
            FamilyKind::RevSpacelikeAxis | FamilyKind::RevTimelikeAxis => "profile-spec",
            FamilyKind::RevNullAxis => "k-spec",
            FamilyKind::PseudosphereS21 | FamilyKind::HyperbolicH2 => "c>0",
            FamilyKind::MinimalProfileI | FamilyKind::MinimalProfileII => "f0>0, phi0",
            FamilyKind::CubicNullMinimal => "a>0, b",
        }
    }

    /// Parameter names with their defaults.
    pub fn param_defaults(self) -> &'static [(&'static str, f64)] {
        match self {
            FamilyKind::RevSpacelikeAxis | FamilyKind::RevTimelikeAxis => &[
                ("offset", 0.0),
                ("slope", 1.0),
                ("amp", 0.3),
                ("freq", 1.0),
                ("f0", 1.0),
                ("s0", 0.2),
                ("s1", 1.7),
                ("ds", 1e-3),
            ],
            FamilyKind::RevNullAxis => &[("c", 1.0), ("sign", 1.0), ("p0", 0.0), ("p1", 0.0), ("p2", 0.0), ("p3", 0.0)],
            FamilyKind::PseudosphereS21 | FamilyKind::HyperbolicH2 => &[("c", 1.0)],
            FamilyKind::MinimalProfileI => &[("f0", 1.0), ("phi0", FRAC_PI_2), ("ds", 1e-3), ("n", 1000.0)],
            FamilyKind::MinimalProfileII => &[("f0", 1.0), ("phi0", 0.5), ("ds", 1e-3), ("n", 1000.0)],
            FamilyKind::CubicNullMinimal => &[("a", 1.0), ("b", 0.0)],
        }
    }

    pub fn signature(self) -> Signature {
        match self {
            FamilyKind::RevNullAxis | FamilyKind::CubicNullMinimal => Signature::TIME_FIRST,
            _ => Signature::TIME_LAST,
        }
    }

    /// Which revolution chart the family lives in.
    pub fn chart(self) -> Chart {
        match self {
            FamilyKind::RevSpacelikeAxis | FamilyKind::PseudosphereS21 | FamilyKind::MinimalProfileI => Chart::SpacelikeAxis,
            FamilyKind::RevTimelikeAxis | FamilyKind::HyperbolicH2 | FamilyKind::MinimalProfileII => Chart::TimelikeAxis,
            FamilyKind::RevNullAxis | FamilyKind::CubicNullMinimal => Chart::NullAxis,
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// The three revolution charts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chart {
    /// `(f cosh t, g, f sinh t)`.
    SpacelikeAxis,
    /// `(f cos t, f sin t, g)`.
    TimelikeAxis,
    /// `(k - s - t^2 s, k + s - t^2 s, -2 s t)`.
    NullAxis,
}

impl Chart {
    pub fn profile_type(self) -> Option<ProfileType> {
        match self {
            Chart::SpacelikeAxis => Some(ProfileType::I),
            Chart::TimelikeAxis => Some(ProfileType::II),
            Chart::NullAxis => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Chart::SpacelikeAxis => "I",
            Chart::TimelikeAxis => "II",
            Chart::NullAxis => "III",
        }
    }
}

/// Rectangular chart domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub s: (f64, f64),
    pub theta: (f64, f64),
}

impl Domain {
    pub fn contains(&self, p: ChartPoint) -> bool {
        p.s >= self.s.0 && p.s <= self.s.1 && p.theta >= self.theta.0 && p.theta <= self.theta.1
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Table(Arc<ProfileTable>),
    Circle { c: f64 },
    Hyperbola { c: f64 },
    Null(NullProfile),
}

/// An immutable surface family with a fixed chart signature.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceFamily {
    kind: FamilyKind,
    shape: Shape,
    params: BTreeMap<String, f64>,
    domain: Domain,
}

const THETA_RANGE: (f64, f64) = (-1.0, 1.0);

fn trimmed(tab: &ProfileTable) -> (f64, f64) {
    let (lo, hi) = tab.s_range();
    let pad = 0.1 * (hi - lo);
    (lo + pad, hi - pad)
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}

impl SurfaceFamily {
    /// Circular profile `f = c cos(s/c)`, `g = c sin(s/c)` in the spacelike-axis chart.
    pub fn pseudosphere_s21(c: f64) -> Result<Self> {
        let c = positive("c", c)?;
        Ok(SurfaceFamily {
            kind: FamilyKind::PseudosphereS21,
            shape: Shape::Circle { c },
            params: [("c".to_string(), c)].into(),
            domain: Domain { s: (0.1 * c, 1.4 * c), theta: THETA_RANGE },
        })
    }

    /// Hyperbolic profile `f = c sinh(s/c)`, `g = c cosh(s/c)` in the timelike-axis chart.
    pub fn hyperbolic_h2(c: f64) -> Result<Self> {
        let c = positive("c", c)?;
        Ok(SurfaceFamily {
            kind: FamilyKind::HyperbolicH2,
            shape: Shape::Hyperbola { c },
            params: [("c".to_string(), c)].into(),
            domain: Domain { s: (0.2 * c, 1.4 * c), theta: THETA_RANGE },
        })
    }

    /// Surface of revolution about a spacelike (`ProfileType::I`) or
    /// timelike (`ProfileType::II`) axis with a tabulated profile.
    pub fn revolution(table: ProfileTable) -> Self {
        let kind = match table.ptype() {
            ProfileType::I => FamilyKind::RevSpacelikeAxis,
            ProfileType::II => FamilyKind::RevTimelikeAxis,
        };
        let domain = Domain { s: trimmed(&table), theta: THETA_RANGE };
        SurfaceFamily { kind, shape: Shape::Table(Arc::new(table)), params: BTreeMap::new(), domain }
    }

    /// Revolution surface whose tangent angle is `offset + slope s + amp sin(freq s)`.
    pub fn trig_profile(ptype: ProfileType, law: ProfileLaw, start: ProfileStart, s1: f64, ds: f64) -> Result<Self> {
        let ds = positive("ds", ds)?;
        if !(s1 > start.s0) {
            return Err(Error::InvalidParameter("s1 must exceed s0".into()));
        }
        let n = ((s1 - start.s0) / ds).round() as usize;
        let table = ProfileTable::integrate(ptype, law, start, ds, n)?;
        let mut fam = SurfaceFamily::revolution(table);
        if let ProfileLaw::Trig { offset, slope, amp, freq } = law {
            fam.params = [
                ("offset", offset),
                ("slope", slope),
                ("amp", amp),
                ("freq", freq),
                ("f0", start.f0),
                ("s0", start.s0),
                ("s1", s1),
                ("ds", ds),
            ]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        }
        Ok(fam)
    }

    /// The perturbed profile `phi = s + 0.3 sin s` on `[0.2, 1.7]`, used as
    /// a non-solution control.
    pub fn perturbed(ptype: ProfileType) -> Result<Self> {
        let law = ProfileLaw::Trig { offset: 0.0, slope: 1.0, amp: 0.3, freq: 1.0 };
        let start = ProfileStart { s0: 0.2, f0: 1.0, g0: 0.0, phi0: 0.0 };
        SurfaceFamily::trig_profile(ptype, law, start, 1.7, 1e-3)
    }

    /// Zero-mean-curvature profile integrated from `(f0, phi0)`.
    pub fn minimal_profile(ptype: ProfileType, f0: f64, phi0: f64, ds: f64, n: usize) -> Result<Self> {
        let table = solve_minimal_profile(ptype, f0, phi0, ds, n)?;
        let mut fam = SurfaceFamily::revolution(table);
        fam.kind = match ptype {
            ProfileType::I => FamilyKind::MinimalProfileI,
            ProfileType::II => FamilyKind::MinimalProfileII,
        };
        fam.params = [("f0", f0), ("phi0", phi0), ("ds", ds), ("n", n as f64)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        Ok(fam)
    }

    pub fn minimal_profile_i() -> Result<Self> {
        SurfaceFamily::minimal_profile(ProfileType::I, 1.0, FRAC_PI_2, 1e-3, 1000)
    }

    pub fn minimal_profile_ii() -> Result<Self> {
        SurfaceFamily::minimal_profile(ProfileType::II, 1.0, 0.5, 1e-3, 1000)
    }

    /// Null-axis surface with an arbitrary `k(s)`.
    pub fn rev_null_axis(k: NullProfile) -> Result<Self> {
        let params = match &k {
            NullProfile::Reciprocal { c, sign } => {
                positive("c", *c)?;
                if *sign != 1.0 && *sign != -1.0 {
                    return Err(Error::InvalidParameter(format!("sign must be +1 or -1, got {sign}")));
                }
                [("c".to_string(), *c), ("sign".to_string(), *sign)].into()
            }
            NullProfile::Polynomial(p) => {
                if p.is_empty() || p.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidParameter("polynomial k needs finite coefficients".into()));
                }
                p.iter().enumerate().map(|(i, v)| (format!("p{i}"), *v)).collect()
            }
        };
        Ok(SurfaceFamily {
            kind: FamilyKind::RevNullAxis,
            shape: Shape::Null(k),
            params,
            domain: Domain { s: (0.2, 2.0), theta: THETA_RANGE },
        })
    }

    /// `k = a s^3 + b`, a minimal null-axis surface.
    pub fn cubic_null_minimal(a: f64, b: f64) -> Result<Self> {
        let a = positive("a", a)?;
        if !b.is_finite() {
            return Err(Error::InvalidParameter("b must be finite".into()));
        }
        let mut fam = SurfaceFamily::rev_null_axis(NullProfile::Polynomial(vec![b, 0.0, 0.0, a]))?;
        fam.kind = FamilyKind::CubicNullMinimal;
        fam.params = [("a".to_string(), a), ("b".to_string(), b)].into();
        Ok(fam)
    }

    /// Builds a family from its id and `name=value` parameters; missing
    /// parameters take the defaults of [`FamilyKind::param_defaults`].
    pub fn from_spec(id: &str, overrides: &BTreeMap<String, f64>) -> Result<Self> {
        let kind = FamilyKind::from_id(id)?;
        let defaults = kind.param_defaults();
        for key in overrides.keys() {
            if !defaults.iter().any(|(k, _)| k == key) {
                return Err(Error::InvalidParameter(format!("family {id} has no parameter {key:?}")));
            }
        }
        let get = |name: &str| {
            overrides
                .get(name)
                .copied()
                .unwrap_or_else(|| defaults.iter().find(|(k, _)| *k == name).map(|(_, v)| *v).unwrap_or(f64::NAN))
        };
        match kind {
            FamilyKind::PseudosphereS21 => SurfaceFamily::pseudosphere_s21(get("c")),
            FamilyKind::HyperbolicH2 => SurfaceFamily::hyperbolic_h2(get("c")),
            FamilyKind::MinimalProfileI | FamilyKind::MinimalProfileII => {
                let ptype = kind.chart().profile_type().expect("revolution chart");
                let n = get("n");
                if !(n >= 1.0) || n.fract() != 0.0 {
                    return Err(Error::InvalidParameter(format!("n must be a positive integer, got {n}")));
                }
                SurfaceFamily::minimal_profile(ptype, get("f0"), get("phi0"), get("ds"), n as usize)
            }
            FamilyKind::RevSpacelikeAxis | FamilyKind::RevTimelikeAxis => {
                let ptype = kind.chart().profile_type().expect("revolution chart");
                let law = ProfileLaw::Trig { offset: get("offset"), slope: get("slope"), amp: get("amp"), freq: get("freq") };
                let start = ProfileStart { s0: get("s0"), f0: get("f0"), g0: 0.0, phi0: 0.0 };
                SurfaceFamily::trig_profile(ptype, law, start, get("s1"), get("ds"))
            }
            FamilyKind::RevNullAxis => {
                let poly: Vec<f64> = ["p0", "p1", "p2", "p3"].iter().map(|k| get(k)).collect();
                let uses_poly = overrides.keys().any(|k| k.starts_with('p'));
                if uses_poly {
                    if overrides.contains_key("c") || overrides.contains_key("sign") {
                        return Err(Error::InvalidParameter("give either c/sign or p0..p3, not both".into()));
                    }
                    SurfaceFamily::rev_null_axis(NullProfile::Polynomial(poly))
                } else {
                    SurfaceFamily::rev_null_axis(NullProfile::Reciprocal { c: get("c"), sign: get("sign") })
                }
            }
            FamilyKind::CubicNullMinimal => SurfaceFamily::cubic_null_minimal(get("a"), get("b")),
        }
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn id(&self) -> &'static str {
        self.kind.id()
    }

    pub fn sig(&self) -> Signature {
        self.kind.signature()
    }

    pub fn chart(&self) -> Chart {
        self.kind.chart()
    }

    /// Effective parameters, for reports.
    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn default_domain(&self) -> Domain {
        self.domain
    }

    /// Global sign applied to `x_s x x_theta` before normalizing. With the
    /// chart orderings used here no flip is needed for any family.
    pub fn normal_orientation(&self) -> f64 {
        1.0
    }

    pub fn profile_table(&self) -> Option<&ProfileTable> {
        match &self.shape {
            Shape::Table(t) => Some(t),
            _ => None,
        }
    }

    pub fn null_profile(&self) -> Option<&NullProfile> {
        match &self.shape {
            Shape::Null(k) => Some(k),
            _ => None,
        }
    }

    /// Profile data at parameter `s`, with per-family exclusions applied.
    pub fn chart_state(&self, p: ChartPoint) -> Result<ChartState> {
        let out = |locus: &str| Error::OutOfDomain { s: p.s, theta: p.theta, locus: locus.to_string() };
        if !p.s.is_finite() || !p.theta.is_finite() {
            return Err(out("non-finite coordinate"));
        }
        let state = match &self.shape {
            Shape::Circle { c } => {
                let u = p.s / c;
                ProfileState { ptype: ProfileType::I, s: p.s, f: c * u.cos(), g: c * u.sin(), phi: u + FRAC_PI_2, dphi: 1.0 / c, ddphi: 0.0 }
            }
            Shape::Hyperbola { c } => {
                let u = p.s / c;
                ProfileState { ptype: ProfileType::II, s: p.s, f: c * u.sinh(), g: c * u.cosh(), phi: u, dphi: 1.0 / c, ddphi: 0.0 }
            }
            Shape::Table(t) => t.state_at(p.s).map_err(|e| match e {
                Error::OutOfDomain { locus, .. } => out(&locus),
                other => other,
            })?,
            Shape::Null(k) => {
                if p.s.abs() < EPS_PROFILE {
                    return Err(out("s = 0 (null-axis chart singularity)"));
                }
                return Ok(ChartState::Null(NullAxisState::new(p.s, k.derivatives(p.s))));
            }
        };
        if !(state.f > 0.0) {
            return Err(out("f <= 0"));
        }
        match state.ptype {
            ProfileType::I if state.phi.sin().abs() < EPS_PROFILE => return Err(out("sin(phi) = 0")),
            ProfileType::II if state.phi.sinh().abs() < EPS_PROFILE => return Err(out("sinh(phi) = 0")),
            _ => {}
        }
        Ok(ChartState::Profile(state))
    }

    /// Position jets to total order three at `p`.
    pub fn eval(&self, p: ChartPoint) -> Result<SurfaceJet> {
        let st = self.chart_state(p)?;
        let th = Jet2::seed(p.theta, Seed::VarTheta);
        let x = match st {
            ChartState::Profile(ps) => {
                let f = Jet2::from_s_derivatives(ps.f_derivatives());
                let g = Jet2::from_s_derivatives(ps.g_derivatives());
                match ps.ptype {
                    ProfileType::I => [f * th.cosh(), g, f * th.sinh()],
                    ProfileType::II => [f * th.cos(), f * th.sin(), g],
                }
            }
            ChartState::Null(ns) => {
                let k = Jet2::from_s_derivatives([ns.k, ns.dk, ns.ddk, ns.dddk]);
                let s = Jet2::seed(p.s, Seed::VarS);
                let st2 = s * th * th;
                [k - s - st2, k + s - st2, s * th * -2.0]
            }
        };
        let jet = SurfaceJet { x, sig: self.sig() };
        if !jet.is_finite() {
            return Err(Error::OutOfDomain { s: p.s, theta: p.theta, locus: "non-finite position".into() });
        }
        Ok(jet)
    }

    /// Position value only.
    pub fn position(&self, p: ChartPoint) -> Result<Vec3M> {
        Ok(self.eval(p)?.position())
    }
}
