//! Numerical values of cross-ratio units through Weierstrass ℘-values,
//! used as an independent check of the Siegel-unit formulas.

use num_complex::Complex64;
use std::f64::consts::PI;

/// `℘(z; τ) / (2πi)^2` minus its z-independent part, from
/// `Σ_{n∈Z} x_n/(1-x_n)^2` with `x_n = q^n e^{2πiz}`. The dropped constant
/// cancels in every ℘-difference.
fn wp_normalised(z: Complex64, tau: Complex64) -> Complex64 {
    let i2pi = Complex64::new(0.0, 2.0 * PI);
    let q = (i2pi * tau).exp();
    let u = (i2pi * z).exp();
    let f = |x: Complex64| x / ((Complex64::new(1.0, 0.0) - x) * (Complex64::new(1.0, 0.0) - x));
    let mut s = f(u);
    let mut qn = q;
    for _ in 0..60 {
        s += f(qn * u) + f(qn / u);
        qn *= q;
    }
    s
}

/// `℘` at the N-torsion point `(x1 τ + x2)/N`, with `0 <= x1 < N`.
fn wp_torsion(level: i64, x1: i64, x2: i64, tau: Complex64) -> Complex64 {
    let x1 = x1.rem_euclid(level);
    let z = (tau * x1 as f64 + x2 as f64) / level as f64;
    wp_normalised(z, tau)
}

/// Numeric value of `u1(a,b,c,d)|(1 0; k 1)` at `τ`, through ℘-values.
/// A parameter in the zero class sits at the pole of ℘ and its two
/// factors cancel in the cross-ratio.
pub fn slashed_u1(level: i64, p: [i64; 4], k: i64, tau: Complex64) -> Complex64 {
    let w = |x: i64| (x.rem_euclid(level) != 0).then(|| wp_torsion(level, k * x, x, tau));
    let diff = |x: Option<Complex64>, y: Option<Complex64>| match (x, y) {
        (Some(x), Some(y)) => x - y,
        _ => Complex64::new(1.0, 0.0),
    };
    let [a, b, c, d] = p.map(w);
    diff(a, c) * diff(b, d) / (diff(a, d) * diff(b, c))
}
