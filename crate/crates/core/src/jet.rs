//! Bivariate truncated Taylor arithmetic in chart coordinates `(s, theta)`.
//!
//! A [`Jet2`] carries a function value and every partial derivative up to
//! total order three. Arithmetic follows the truncated Leibniz rule and
//! elementary functions compose through their univariate Taylor expansion,
//! so a chart built from jets yields exact partials of the position.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Truncation order (total degree).
pub const ORDER: usize = 3;
/// Number of stored coefficients for `ORDER = 3`.
pub const LEN: usize = 10;
/// Guard for division and square roots.
pub const EPS_DIV: f64 = 1e-12;

/// `(i, j)` exponents in storage order, grouped by total degree.
const EXPONENTS: [(usize, usize); LEN] =
    [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)];

const fn index(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

const FACTORIAL: [f64; 4] = [1.0, 1.0, 2.0, 6.0];

/// Number of (out, lhs, rhs) products in a truncated multiplication.
const N_PRODUCTS: usize = 35;

const fn product_table() -> [(u8, u8, u8); N_PRODUCTS] {
    let mut table = [(0u8, 0u8, 0u8); N_PRODUCTS];
    let mut n = 0;
    let mut out = 0;
    while out < LEN {
        let (i, j) = EXPONENTS[out];
        let mut a = 0;
        while a <= i {
            let mut b = 0;
            while b <= j {
                table[n] = (out as u8, index(a, b) as u8, index(i - a, j - b) as u8);
                n += 1;
                b += 1;
            }
            a += 1;
        }
        out += 1;
    }
    table
}

const PRODUCTS: [(u8, u8, u8); N_PRODUCTS] = product_table();

/// Which chart coordinate a seeded jet tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Seed {
    Const,
    VarS,
    VarTheta,
}

/// Truncated bivariate Taylor expansion. Coefficients are stored in Taylor
/// form `t_ij = d^(i+j) p / ds^i dtheta^j / (i! j!)`; use [`Jet2::partial`]
/// to read derivatives.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Jet2 {
    t: [f64; LEN],
}

impl Jet2 {
    pub const ZERO: Jet2 = Jet2 { t: [0.0; LEN] };

    pub fn constant(value: f64) -> Self {
        let mut t = [0.0; LEN];
        t[0] = value;
        Jet2 { t }
    }

    pub fn seed(value: f64, which: Seed) -> Self {
        let mut jet = Jet2::constant(value);
        match which {
            Seed::Const => {}
            Seed::VarS => jet.t[index(1, 0)] = 1.0,
            Seed::VarTheta => jet.t[index(0, 1)] = 1.0,
        }
        jet
    }

    /// Jet of a function of `s` alone from its derivatives `[p, p', p'', p''']`.
    pub fn from_s_derivatives(d: [f64; 4]) -> Self {
        let mut jet = Jet2::ZERO;
        for (k, dk) in d.iter().enumerate() {
            jet.t[index(k, 0)] = dk / FACTORIAL[k];
        }
        jet
    }

    /// Jet of a function of `theta` alone from its derivatives.
    pub fn from_theta_derivatives(d: [f64; 4]) -> Self {
        let mut jet = Jet2::ZERO;
        for (k, dk) in d.iter().enumerate() {
            jet.t[index(0, k)] = dk / FACTORIAL[k];
        }
        jet
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.t[0]
    }

    /// `d^(i+j) p / ds^i dtheta^j` at the base point.
    pub fn partial(&self, i: usize, j: usize) -> Result<f64> {
        if i + j > ORDER {
            return Err(Error::OrderOutOfRange(i, j));
        }
        Ok(self.t[index(i, j)] * FACTORIAL[i] * FACTORIAL[j])
    }

    pub fn is_finite(&self) -> bool {
        self.t.iter().all(|c| c.is_finite())
    }

    /// Partial derivative in `s`. The result is exact to total order two;
    /// its third-order coefficients are zero.
    pub fn d_ds(&self) -> Jet2 {
        let mut out = Jet2::ZERO;
        for (k, &(i, j)) in EXPONENTS.iter().enumerate() {
            if i + j < ORDER {
                out.t[k] = (i + 1) as f64 * self.t[index(i + 1, j)];
            }
        }
        out
    }

    /// Partial derivative in `theta`, exact to total order two.
    pub fn d_dtheta(&self) -> Jet2 {
        let mut out = Jet2::ZERO;
        for (k, &(i, j)) in EXPONENTS.iter().enumerate() {
            if i + j < ORDER {
                out.t[k] = (j + 1) as f64 * self.t[index(i, j + 1)];
            }
        }
        out
    }

    /// `g(self)` given `g` and its first three derivatives at `self.value()`.
    pub fn compose(&self, g: [f64; 4]) -> Jet2 {
        let mut delta = *self;
        delta.t[0] = 0.0;
        let d2 = delta * delta;
        let d3 = d2 * delta;
        let mut out = delta * g[1] + d2 * (g[2] / 2.0) + d3 * (g[3] / 6.0);
        out.t[0] = g[0];
        out
    }

    pub fn sin(&self) -> Jet2 {
        let (s, c) = self.value().sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Jet2 {
        let (s, c) = self.value().sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn sinh(&self) -> Jet2 {
        let (sh, ch) = (self.value().sinh(), self.value().cosh());
        self.compose([sh, ch, sh, ch])
    }

    pub fn cosh(&self) -> Jet2 {
        let (sh, ch) = (self.value().sinh(), self.value().cosh());
        self.compose([ch, sh, ch, sh])
    }

    pub fn sqrt(&self) -> Result<Jet2> {
        let x = self.value();
        if !(x > EPS_DIV) {
            return Err(Error::DomainError { op: "sqrt", value: x });
        }
        let r = x.sqrt();
        Ok(self.compose([r, 0.5 / r, -0.25 / (x * r), 0.375 / (x * x * r)]))
    }

    /// Flips the sign so the value is non-negative. Smooth away from zero.
    pub fn abs(&self) -> Jet2 {
        if self.value() < 0.0 {
            -*self
        } else {
            *self
        }
    }

    pub fn recip(&self) -> Result<Jet2> {
        let x = self.value();
        if !(x.abs() > EPS_DIV) {
            return Err(Error::DivisionNearZero(x));
        }
        let r = 1.0 / x;
        Ok(self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r]))
    }

    pub fn checked_div(&self, rhs: &Jet2) -> Result<Jet2> {
        Ok(*self * rhs.recip()?)
    }

    pub fn powi(&self, n: i32) -> Result<Jet2> {
        let x = self.value();
        if n < 0 && !(x.abs() > EPS_DIV) {
            return Err(Error::DivisionNearZero(x));
        }
        let nf = f64::from(n);
        let pw = |k: i32| if n - k == 0 { 1.0 } else { x.powi(n - k) };
        Ok(self.compose([
            pw(0),
            nf * pw(1),
            nf * (nf - 1.0) * pw(2),
            nf * (nf - 1.0) * (nf - 2.0) * pw(3),
        ]))
    }
}

impl fmt::Debug for Jet2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_map();
        for &(i, j) in EXPONENTS.iter() {
            list.entry(&format_args!("d{i}{j}"), &(self.t[index(i, j)] * FACTORIAL[i] * FACTORIAL[j]));
        }
        list.finish()
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    #[inline]
    fn add(mut self, rhs: Jet2) -> Jet2 {
        for k in 0..LEN {
            self.t[k] += rhs.t[k];
        }
        self
    }
}

impl AddAssign for Jet2 {
    #[inline]
    fn add_assign(&mut self, rhs: Jet2) {
        *self = *self + rhs;
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    #[inline]
    fn sub(mut self, rhs: Jet2) -> Jet2 {
        for k in 0..LEN {
            self.t[k] -= rhs.t[k];
        }
        self
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    #[inline]
    fn neg(mut self) -> Jet2 {
        for c in self.t.iter_mut() {
            *c = -*c;
        }
        self
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    #[inline]
    fn mul(self, rhs: Jet2) -> Jet2 {
        let mut out = Jet2::ZERO;
        for &(o, a, b) in PRODUCTS.iter() {
            out.t[o as usize] += self.t[a as usize] * rhs.t[b as usize];
        }
        out
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    #[inline]
    fn mul(mut self, k: f64) -> Jet2 {
        for c in self.t.iter_mut() {
            *c *= k;
        }
        self
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    #[inline]
    fn add(mut self, k: f64) -> Jet2 {
        self.t[0] += k;
        self
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    #[inline]
    fn sub(mut self, k: f64) -> Jet2 {
        self.t[0] -= k;
        self
    }
}
