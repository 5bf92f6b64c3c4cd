//! Profile curves `(f(s), g(s))` of surfaces of revolution with a
//! non-null axis, stored as uniformly sampled tables.
//!
//! Type I profiles are unit speed in the Euclidean sense, `f' = cos(phi)`,
//! `g' = sin(phi)`. Type II profiles satisfy `f'^2 - g'^2 = 1`, so
//! `f' = cosh(phi)`, `g' = sinh(phi)`.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::rk4_step;

/// Threshold for `|sin(phi)|` and friends along a profile.
pub const EPS_PROFILE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProfileType {
    /// Spacelike axis, Euclidean-unit-speed profile.
    I,
    /// Timelike axis, Lorentzian-unit-speed profile.
    II,
}

impl ProfileType {
    /// `(f', g')` for tangent angle `phi`.
    #[inline]
    pub fn tangent(self, phi: f64) -> (f64, f64) {
        match self {
            ProfileType::I => (phi.cos(), phi.sin()),
            ProfileType::II => (phi.cosh(), phi.sinh()),
        }
    }

    /// `([f', g'], [f'', g''])` at a node with tangent angle `phi`.
    pub fn node_rates(self, phi: f64, dphi: f64) -> ([f64; 2], [f64; 2]) {
        let (c, sn) = self.tangent(phi);
        match self {
            ProfileType::I => ([c, sn], [-sn * dphi, c * dphi]),
            ProfileType::II => ([c, sn], [sn * dphi, c * dphi]),
        }
    }

    /// `f'^2 + g'^2` for type I, `f'^2 - g'^2` for type II.
    #[inline]
    pub fn speed_squared(self, fp: f64, gp: f64) -> f64 {
        match self {
            ProfileType::I => fp * fp + gp * gp,
            ProfileType::II => fp * fp - gp * gp,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ProfileType::I => "I",
            ProfileType::II => "II",
        }
    }
}

/// How the tangent angle `phi` evolves along the profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum ProfileLaw {
    /// Zero mean curvature: `phi' = -sin(phi)/f` (I) or `-sinh(phi)/f` (II).
    Minimal,
    /// Explicit `phi(s) = offset + slope*s + amp*sin(freq*s)`.
    Trig { offset: f64, slope: f64, amp: f64, freq: f64 },
    /// `phi` and `phi'` come from the table; off-node values are interpolated.
    Tabulated,
}

impl ProfileLaw {
    fn explicit_phi(&self, s: f64) -> Option<[f64; 3]> {
        match *self {
            ProfileLaw::Trig { offset, slope, amp, freq } => {
                let (sn, cs) = (freq * s).sin_cos();
                Some([offset + slope * s + amp * sn, slope + amp * freq * cs, -amp * freq * freq * sn])
            }
            _ => None,
        }
    }

    /// `(phi', phi'')` for the minimal law at `(f, phi)`.
    fn minimal_rates(ptype: ProfileType, f: f64, phi: f64) -> (f64, f64) {
        let (c, sn) = ptype.tangent(phi);
        let dphi = -sn / f;
        (dphi, -c * dphi / f + sn * c / (f * f))
    }
}

/// One sample of a profile table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileNode {
    pub s: f64,
    pub f: f64,
    pub g: f64,
    pub phi: f64,
    pub dphi: f64,
}

/// Profile data at one parameter value, enough for jets to order three.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileState {
    pub ptype: ProfileType,
    pub s: f64,
    pub f: f64,
    pub g: f64,
    pub phi: f64,
    pub dphi: f64,
    pub ddphi: f64,
}

impl ProfileState {
    /// `(cos phi, sin phi)` or `(cosh phi, sinh phi)`.
    pub fn trig(&self) -> (f64, f64) {
        self.ptype.tangent(self.phi)
    }

    /// `[f, f', f'', f''']` from the tangent-angle kinematics.
    pub fn f_derivatives(&self) -> [f64; 4] {
        let (c, sn) = self.trig();
        let (w, a) = (self.dphi, self.ddphi);
        match self.ptype {
            ProfileType::I => [self.f, c, -sn * w, -c * w * w - sn * a],
            ProfileType::II => [self.f, c, sn * w, c * w * w + sn * a],
        }
    }

    /// `[g, g', g'', g''']`.
    pub fn g_derivatives(&self) -> [f64; 4] {
        let (c, sn) = self.trig();
        let (w, a) = (self.dphi, self.ddphi);
        match self.ptype {
            ProfileType::I => [self.g, sn, c * w, -sn * w * w + c * a],
            ProfileType::II => [self.g, sn, c * w, sn * w * w + c * a],
        }
    }
}

/// Initial point of an integrated profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileStart {
    pub s0: f64,
    pub f0: f64,
    pub g0: f64,
    /// Ignored when the law prescribes `phi` explicitly.
    pub phi0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileTable {
    ptype: ProfileType,
    law: ProfileLaw,
    ds: f64,
    nodes: Vec<ProfileNode>,
}

impl ProfileTable {
    /// Builds a table from explicit samples. Nodes must be uniformly spaced
    /// and have `f > 0`.
    pub fn from_nodes(ptype: ProfileType, law: ProfileLaw, nodes: Vec<ProfileNode>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidParameter("profile table needs at least two nodes".into()));
        }
        let ds = nodes[1].s - nodes[0].s;
        if !(ds > 0.0) {
            return Err(Error::InvalidParameter("profile nodes must increase in s".into()));
        }
        for (i, w) in nodes.windows(2).enumerate() {
            let step = w[1].s - w[0].s;
            if (step - ds).abs() > 1e-9 * ds.max(w[1].s.abs()) {
                return Err(Error::InvalidParameter(format!("non-uniform spacing at node {}", i + 1)));
            }
        }
        for n in &nodes {
            let finite = [n.s, n.f, n.g, n.phi, n.dphi].iter().all(|v| v.is_finite());
            if !finite {
                return Err(Error::InvalidParameter(format!("non-finite profile sample at s={}", n.s)));
            }
            if n.f <= 0.0 {
                return Err(Error::ProfileDegenerate { s: n.s, reason: "f <= 0".into() });
            }
        }
        Ok(ProfileTable { ptype, law, ds, nodes })
    }

    /// Integrates `f' = C(phi)`, `g' = S(phi)` together with the law for
    /// `phi` using `n` RK4 steps of size `ds`.
    pub fn integrate(ptype: ProfileType, law: ProfileLaw, start: ProfileStart, ds: f64, n: usize) -> Result<Self> {
        if !(start.f0 > 0.0) {
            return Err(Error::ProfileDegenerate { s: start.s0, reason: "f <= 0".into() });
        }
        if !(ds > 0.0) || n == 0 {
            return Err(Error::InvalidParameter("profile needs ds > 0 and n >= 1".into()));
        }
        if law == ProfileLaw::Tabulated {
            return Err(Error::InvalidParameter("a tabulated law cannot be integrated".into()));
        }
        let rhs = |s: f64, y: &[f64; 3]| {
            let phi = law.explicit_phi(s).map_or(y[2], |p| p[0]);
            let (fp, gp) = ptype.tangent(phi);
            let dphi = match law.explicit_phi(s) {
                Some(p) => p[1],
                None => -ptype.tangent(phi).1 / y[0],
            };
            [fp, gp, dphi]
        };
        let phi0 = law.explicit_phi(start.s0).map_or(start.phi0, |p| p[0]);
        let mut y = [start.f0, start.g0, phi0];
        let mut nodes = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let s = start.s0 + i as f64 * ds;
            if i > 0 {
                let s_prev = start.s0 + (i - 1) as f64 * ds;
                y = rk4_step(&rhs, s_prev, &y, ds);
                if let Some(p) = law.explicit_phi(s) {
                    y[2] = p[0];
                }
            }
            let node = ProfileNode { s, f: y[0], g: y[1], phi: y[2], dphi: rhs(s, &y)[2] };
            check_node(ptype, &node)?;
            nodes.push(node);
        }
        Ok(ProfileTable { ptype, law, ds, nodes })
    }

    pub fn ptype(&self) -> ProfileType {
        self.ptype
    }

    pub fn law(&self) -> ProfileLaw {
        self.law
    }

    pub fn ds(&self) -> f64 {
        self.ds
    }

    pub fn nodes(&self) -> &[ProfileNode] {
        &self.nodes
    }

    pub fn s_range(&self) -> (f64, f64) {
        (self.nodes[0].s, self.nodes[self.nodes.len() - 1].s)
    }

    /// Max over nodes of `|f'^2 +- g'^2 - 1|`, with `f'`, `g'` taken from
    /// fourth-order finite differences of the tabulated values.
    pub fn constraint_residual(&self) -> f64 {
        let n = self.nodes.len();
        let f: Vec<f64> = self.nodes.iter().map(|p| p.f).collect();
        let g: Vec<f64> = self.nodes.iter().map(|p| p.g).collect();
        (0..n)
            .map(|i| {
                let fp = fd_first(&f, i, self.ds);
                let gp = fd_first(&g, i, self.ds);
                (self.ptype.speed_squared(fp, gp) - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Profile state at an arbitrary `s` inside the table. Off-node values
    /// of `f`, `g` (and `phi` unless the law is explicit) use cubic Hermite
    /// interpolation; derivatives of `phi` come from the law.
    pub fn state_at(&self, s: f64) -> Result<ProfileState> {
        let (lo, hi) = self.s_range();
        let slack = 1e-12 * (hi - lo);
        if !(s >= lo - slack && s <= hi + slack) {
            return Err(Error::OutOfDomain {
                s,
                theta: f64::NAN,
                locus: format!("outside profile table range [{lo}, {hi}]"),
            });
        }
        let last = self.nodes.len() - 2;
        let i = (((s - lo) / self.ds).floor().max(0.0) as usize).min(last);
        let (a, b) = (&self.nodes[i], &self.nodes[i + 1]);
        // Actual node spacing rather than `ds`: accumulated abscissae differ
        // from `i * ds` in the last bits, and using the nominal step would
        // leave the interpolant discontinuous at that level.
        let h = b.s - a.s;
        let t = ((s - a.s) / h).clamp(0.0, 1.0);
        // Quintic in position so that the interpolant's second derivative
        // agrees with the angle kinematics to O(ds^4).
        let ([fa, ga], [fa2, ga2]) = self.ptype.node_rates(a.phi, a.dphi);
        let ([fb, gb], [fb2, gb2]) = self.ptype.node_rates(b.phi, b.dphi);
        let f = quintic_hermite([a.f, fa, fa2], [b.f, fb, fb2], h, t);
        let g = quintic_hermite([a.g, ga, ga2], [b.g, gb, gb2], h, t);

        let (phi, dphi, ddphi) = match self.law {
            ProfileLaw::Trig { .. } => {
                let p = self.law.explicit_phi(s).expect("explicit law");
                (p[0], p[1], p[2])
            }
            ProfileLaw::Minimal => {
                let phi = hermite(a.phi, a.dphi, b.phi, b.dphi, h, t)[0];
                let (d1, d2) = ProfileLaw::minimal_rates(self.ptype, f, phi);
                (phi, d1, d2)
            }
            ProfileLaw::Tabulated => {
                let p = hermite(a.phi, a.dphi, b.phi, b.dphi, h, t);
                (p[0], p[1], p[2])
            }
        };
        Ok(ProfileState { ptype: self.ptype, s, f, g, phi, dphi, ddphi })
    }

    /// Writes `s,f,g,phi,dphi` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "s,f,g,phi,dphi")?;
        for n in &self.nodes {
            writeln!(w, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", n.s, n.f, n.g, n.phi, n.dphi)?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R, ptype: ProfileType, law: ProfileLaw) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty profile csv".into()))??;
        if header.trim() != "s,f,g,phi,dphi" {
            return Err(Error::Parse(format!("unexpected profile csv header {header:?}")));
        }
        let mut nodes = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let vals: Vec<f64> = line
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 2)))?;
            if vals.len() != 5 {
                return Err(Error::Parse(format!("line {}: expected 5 fields", lineno + 2)));
            }
            nodes.push(ProfileNode { s: vals[0], f: vals[1], g: vals[2], phi: vals[3], dphi: vals[4] });
        }
        ProfileTable::from_nodes(ptype, law, nodes)
    }
}

/// Solves the zero-mean-curvature profile ODE from `s = 0`, `g = 0`.
pub fn solve_minimal_profile(ptype: ProfileType, f0: f64, phi0: f64, ds: f64, n: usize) -> Result<ProfileTable> {
    ProfileTable::integrate(ptype, ProfileLaw::Minimal, ProfileStart { s0: 0.0, f0, g0: 0.0, phi0 }, ds, n)
}

fn check_node(ptype: ProfileType, node: &ProfileNode) -> Result<()> {
    if !(node.f > 0.0) {
        return Err(Error::ProfileDegenerate { s: node.s, reason: "f <= 0".into() });
    }
    if ptype == ProfileType::I && node.phi.sin().abs() < EPS_PROFILE {
        return Err(Error::ProfileDegenerate { s: node.s, reason: "sin(phi) = 0".into() });
    }
    Ok(())
}

/// Value, first and second derivative of the cubic Hermite interpolant on
/// `[0, 1]` scaled to step `h`.
fn hermite(p0: f64, m0: f64, p1: f64, m1: f64, h: f64, t: f64) -> [f64; 3] {
    let (t2, t3) = (t * t, t * t * t);
    let value = (2.0 * t3 - 3.0 * t2 + 1.0) * p0
        + (t3 - 2.0 * t2 + t) * h * m0
        + (-2.0 * t3 + 3.0 * t2) * p1
        + (t3 - t2) * h * m1;
    let d1 = ((6.0 * t2 - 6.0 * t) * p0 + (-6.0 * t2 + 6.0 * t) * p1) / h
        + (3.0 * t2 - 4.0 * t + 1.0) * m0
        + (3.0 * t2 - 2.0 * t) * m1;
    let d2 = ((12.0 * t - 6.0) * p0 + (6.0 - 12.0 * t) * p1) / (h * h) + ((6.0 * t - 4.0) * m0 + (6.0 * t - 2.0) * m1) / h;
    [value, d1, d2]
}

/// Value of the quintic matching `[p, p', p'']` at both ends of a segment
/// of length `h`, at fraction `t`.
pub fn quintic_hermite(a: [f64; 3], b: [f64; 3], h: f64, t: f64) -> f64 {
    let (t2, t3) = (t * t, t * t * t);
    let (t4, t5) = (t3 * t, t3 * t2);
    let h2 = h * h;
    (1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5) * a[0]
        + (t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5) * h * a[1]
        + 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5) * h2 * a[2]
        + 0.5 * (t3 - 2.0 * t4 + t5) * h2 * b[2]
        + (-4.0 * t3 + 7.0 * t4 - 3.0 * t5) * h * b[1]
        + (10.0 * t3 - 15.0 * t4 + 6.0 * t5) * b[0]
}

/// Five-point first derivative, one-sided near the ends.
fn fd_first(v: &[f64], i: usize, h: f64) -> f64 {
    let n = v.len();
    if n < 5 {
        return if i + 1 < n { (v[i + 1] - v[i]) / h } else { (v[i] - v[i - 1]) / h };
    }
    if i >= 2 && i + 2 < n {
        (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h)
    } else if i < 2 {
        let w = &v[i..i + 5];
        (-25.0 * w[0] + 48.0 * w[1] - 36.0 * w[2] + 16.0 * w[3] - 3.0 * w[4]) / (12.0 * h)
    } else {
        let w = &v[i - 4..=i];
        (25.0 * w[4] - 48.0 * w[3] + 36.0 * w[2] - 16.0 * w[1] + 3.0 * w[0]) / (12.0 * h)
    }
}
