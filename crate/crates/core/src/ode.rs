//! Classical fourth-order Runge-Kutta stepping for small fixed-size systems.

/// One RK4 step of `y' = rhs(s, y)` from `s` to `s + h`.
pub fn rk4_step<const N: usize, F>(rhs: &F, s: f64, y: &[f64; N], h: f64) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let axpy = |y: &[f64; N], k: &[f64; N], a: f64| {
        let mut out = *y;
        for i in 0..N {
            out[i] += a * k[i];
        }
        out
    };
    let k1 = rhs(s, y);
    let k2 = rhs(s + 0.5 * h, &axpy(y, &k1, 0.5 * h));
    let k3 = rhs(s + 0.5 * h, &axpy(y, &k2, 0.5 * h));
    let k4 = rhs(s + h, &axpy(y, &k3, h));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}
