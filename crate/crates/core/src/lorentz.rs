//! Vector algebra in Minkowski 3-space under a diagonal signature.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default threshold below which `|<v,v>|` counts as lightlike.
pub const DEFAULT_EPS_LIGHT: f64 = 1e-10;

/// A diagonal metric signature `(e1, e2, e3)` with exactly one `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[i8; 3]", into = "[i8; 3]")]
pub struct Signature([i8; 3]);

impl Signature {
    /// `(-,+,+)`: the first coordinate is timelike.
    pub const TIME_FIRST: Signature = Signature([-1, 1, 1]);
    /// `(+,+,-)`: the third coordinate is timelike.
    pub const TIME_LAST: Signature = Signature([1, 1, -1]);

    pub fn new(eps: [i8; 3]) -> Result<Self> {
        let minus = eps.iter().filter(|&&e| e == -1).count();
        let plus = eps.iter().filter(|&&e| e == 1).count();
        if minus == 1 && plus == 2 {
            Ok(Signature(eps))
        } else {
            Err(Error::InvalidSignature(eps))
        }
    }

    pub fn eps(&self) -> [i8; 3] {
        self.0
    }

    #[inline]
    pub fn eps_f64(&self, i: usize) -> f64 {
        f64::from(self.0[i])
    }

    /// `e1 u1 v1 + e2 u2 v2 + e3 u3 v3` over any ring-like scalar.
    #[inline]
    pub fn inner_with<T>(&self, u: &[T; 3], v: &[T; 3]) -> T
    where
        T: Copy + Add<Output = T> + Mul<Output = T> + Mul<f64, Output = T>,
    {
        u[0] * v[0] * self.eps_f64(0) + u[1] * v[1] * self.eps_f64(1) + u[2] * v[2] * self.eps_f64(2)
    }

    /// Lorentzian cross product, characterised by `<u x v, w> = det[u v w]`.
    #[inline]
    pub fn cross_with<T>(&self, u: &[T; 3], v: &[T; 3]) -> [T; 3]
    where
        T: Copy + Sub<Output = T> + Mul<Output = T> + Mul<f64, Output = T>,
    {
        [
            (u[1] * v[2] - u[2] * v[1]) * self.eps_f64(0),
            (u[2] * v[0] - u[0] * v[2]) * self.eps_f64(1),
            (u[0] * v[1] - u[1] * v[0]) * self.eps_f64(2),
        ]
    }

    pub fn inner(&self, u: Vec3M, v: Vec3M) -> f64 {
        self.inner_with(&u.to_array(), &v.to_array())
    }

    pub fn cross(&self, u: Vec3M, v: Vec3M) -> Vec3M {
        Vec3M::from_array(self.cross_with(&u.to_array(), &v.to_array()))
    }

    pub fn causal_character(&self, v: Vec3M, eps_light: f64) -> Result<CausalCharacter> {
        if v.x1 == 0.0 && v.x2 == 0.0 && v.x3 == 0.0 {
            return Err(Error::ZeroVector);
        }
        let q = self.inner(v, v);
        Ok(if q < -eps_light {
            CausalCharacter::Timelike
        } else if q > eps_light {
            CausalCharacter::Spacelike
        } else {
            CausalCharacter::Lightlike
        })
    }

    /// Scales `v` to unit Lorentzian length, keeping its causal character.
    pub fn normalize(&self, v: Vec3M, eps_light: f64) -> Result<Vec3M> {
        let q = self.inner(v, v);
        if q.abs() <= eps_light {
            return Err(Error::LightlikeNormalize(q));
        }
        Ok(v * (1.0 / q.abs().sqrt()))
    }
}

impl TryFrom<[i8; 3]> for Signature {
    type Error = Error;

    fn try_from(eps: [i8; 3]) -> Result<Self> {
        Signature::new(eps)
    }
}

impl From<Signature> for [i8; 3] {
    fn from(sig: Signature) -> Self {
        sig.0
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |e: i8| if e < 0 { '-' } else { '+' };
        write!(f, "({},{},{})", c(self.0[0]), c(self.0[1]), c(self.0[2]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CausalCharacter {
    Spacelike,
    Timelike,
    Lightlike,
}

/// A point or vector of Minkowski 3-space in model units.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3M {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl Vec3M {
    pub const ZERO: Vec3M = Vec3M { x1: 0.0, x2: 0.0, x3: 0.0 };

    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Vec3M { x1, x2, x3 }
    }

    pub const fn from_array(a: [f64; 3]) -> Self {
        Vec3M { x1: a[0], x2: a[1], x3: a[2] }
    }

    pub const fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    /// Flat (Euclidean) norm, used only for numerical objectives.
    pub fn flat_norm(&self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3).sqrt()
    }
}

impl Add for Vec3M {
    type Output = Vec3M;
    fn add(self, o: Vec3M) -> Vec3M {
        Vec3M::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl Sub for Vec3M {
    type Output = Vec3M;
    fn sub(self, o: Vec3M) -> Vec3M {
        Vec3M::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl Mul<f64> for Vec3M {
    type Output = Vec3M;
    fn mul(self, k: f64) -> Vec3M {
        Vec3M::new(self.x1 * k, self.x2 * k, self.x3 * k)
    }
}

impl Neg for Vec3M {
    type Output = Vec3M;
    fn neg(self) -> Vec3M {
        self * -1.0
    }
}
