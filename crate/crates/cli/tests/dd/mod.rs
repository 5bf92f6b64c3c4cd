//! Double-double arithmetic (about 32 significant digits), just enough to
//! evaluate chart positions for finite-difference reference values whose
//! rounding error stays far below the truncation error.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl From<f64> for Dd {
    fn from(hi: f64) -> Self {
        Dd { hi, lo: 0.0 }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + -o
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let (hi, lo) = quick_two_sum(p, e + self.hi * o.lo + self.lo * o.hi);
        Dd { hi, lo }
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    fn mul(self, o: f64) -> Dd {
        self * Dd::from(o)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * q1;
        let q2 = r.hi / o.hi;
        let r = r - o * q2;
        let q3 = r.hi / o.hi;
        Dd::from(q1) + Dd::from(q2) + Dd::from(q3)
    }
}

impl Dd {
    /// Taylor series; arguments here stay within a few units.
    fn series(self, start: Dd, first: usize, step: usize, alternate: bool) -> Dd {
        let x2 = self * self;
        let mut term = start;
        let mut sum = start;
        let mut n = first;
        for _ in 0..40 {
            let denom = ((n + 1) * (n + 2)) as f64;
            term = term * x2 / Dd::from(denom);
            if alternate {
                term = -term;
            }
            sum = sum + term;
            n += step;
            if term.hi.abs() < 1e-40 * sum.hi.abs().max(1e-300) {
                break;
            }
        }
        sum
    }

    pub fn sin(self) -> Dd {
        self.series(self, 1, 2, true)
    }

    pub fn cos(self) -> Dd {
        self.series(Dd::from(1.0), 0, 2, true)
    }

    pub fn sinh(self) -> Dd {
        self.series(self, 1, 2, false)
    }

    pub fn cosh(self) -> Dd {
        self.series(Dd::from(1.0), 0, 2, false)
    }
}
