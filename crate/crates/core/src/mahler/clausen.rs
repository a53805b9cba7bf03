use std::f64::consts::PI;
use std::sync::OnceLock;

const SERIES_TERMS: usize = 30;

/// `ζ(2k)` for `k = 1..=SERIES_TERMS`, by Euler–Maclaurin.
fn zeta_even() -> &'static [f64; SERIES_TERMS] {
    static TABLE: OnceLock<[f64; SERIES_TERMS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = [0.0; SERIES_TERMS];
        out[0] = PI * PI / 6.0;
        for (k, z) in out.iter_mut().enumerate().skip(1) {
            let s = 2.0 * (k + 1) as f64;
            let n = 50.0f64;
            let mut sum = 0.0;
            for m in (1..50).rev() {
                sum += (m as f64).powf(-s);
            }
            sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s) + s * n.powf(-s - 1.0) / 12.0
                - s * (s + 1.0) * (s + 2.0) * n.powf(-s - 3.0) / 720.0;
            *z = sum;
        }
        out
    })
}

/// Clausen function `Cl2(θ) = Σ sin(kθ)/k²`.
pub fn cl2(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    if t == 0.0 {
        return 0.0;
    }
    // Cl2(t) = t - t log|t| + Σ ζ(2k) t (t/2π)^{2k} / (k(2k+1)), |t| ≤ π.
    let u = (t / (2.0 * PI)).powi(2);
    let mut pow = 1.0;
    let mut sum = 0.0;
    for (i, z) in zeta_even().iter().enumerate() {
        let k = (i + 1) as f64;
        pow *= u;
        let term = z * pow / (k * (2.0 * k + 1.0));
        sum += term;
        if term < 1e-18 {
            break;
        }
    }
    t - t * t.abs().ln() + t * sum
}

/// `Im Li2(r e^{iθ})` for `0 ≤ r ≤ 1`.
pub fn im_li2_polar(r: f64, theta: f64) -> f64 {
    debug_assert!((0.0..=1.0 + 1e-12).contains(&r));
    if r == 0.0 {
        return 0.0;
    }
    let r = r.min(1.0);
    let omega = (r * theta.sin()).atan2(1.0 - r * theta.cos());
    let log_term = if r == 1.0 { 0.0 } else { omega * r.ln() };
    log_term + 0.5 * (cl2(2.0 * theta) + cl2(2.0 * omega) - cl2(2.0 * theta + 2.0 * omega))
}

/// `∫_{φ1}^{φ2} log|e^{iφ} - ρ| dφ` for `ρ = r e^{iα}`, in closed form.
pub fn arc_log_integral(r: f64, alpha: f64, phi1: f64, phi2: f64) -> f64 {
    if r <= 1.0 {
        im_li2_polar(r, alpha - phi2) - im_li2_polar(r, alpha - phi1)
    } else {
        let s = 1.0 / r;
        r.ln() * (phi2 - phi1) + im_li2_polar(s, phi1 - alpha) - im_li2_polar(s, phi2 - alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cl2_direct(theta: f64) -> f64 {
        // Fourier series summed with an Euler–Maclaurin-free long cutoff;
        // good to ~1e-9 away from 0.
        (1..2_000_000)
            .map(|k| (k as f64 * theta).sin() / (k as f64).powi(2))
            .sum()
    }

    #[test]
    fn known_values() {
        // Cl2(π/2) = Catalan's constant; Cl2(π/3) = 1.0149416064096536...
        assert!((cl2(PI / 2.0) - 0.915_965_594_177_219).abs() < 1e-14);
        assert!((cl2(PI / 3.0) - 1.014_941_606_409_653_6).abs() < 1e-14);
        assert!(cl2(PI).abs() < 1e-15);
        assert!((cl2(-1.0) + cl2(1.0)).abs() < 1e-15);
    }

    #[test]
    fn against_fourier_series() {
        for th in [0.3, 1.7, 2.9, 4.0, 5.5] {
            assert!((cl2(th) - cl2_direct(th)).abs() < 1e-9, "{th}");
        }
    }

    fn brute_log_arc(r: f64, alpha: f64, a: f64, b: f64) -> f64 {
        // Midpoint rule; the integrand is smooth for r ≠ 1.
        let n = 200_000;
        let h = (b - a) / n as f64;
        (0..n)
            .map(|i| {
                let phi = a + (i as f64 + 0.5) * h;
                let w = num_complex::Complex64::from_polar(1.0, phi)
                    - num_complex::Complex64::from_polar(r, alpha);
                w.norm().ln() * h
            })
            .sum()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn arc_integral_matches_quadrature(r in 0.05f64..3.0, alpha in -3.0f64..3.0, a in -3.0f64..3.0, len in 0.1f64..5.0) {
            prop_assume!((r - 1.0).abs() > 0.05);
            let exact = arc_log_integral(r, alpha, a, a + len);
            let brute = brute_log_arc(r, alpha, a, a + len);
            prop_assert!((exact - brute).abs() < 1e-8, "{} vs {}", exact, brute);
        }

        #[test]
        fn im_li2_small_r(theta in -3.0f64..3.0) {
            let r = 1e-3;
            // Li2(z) = z + z²/4 + z³/9 + ...
            let z = num_complex::Complex64::from_polar(r, theta);
            let series = z + z * z / 4.0 + z * z * z / 9.0;
            prop_assert!((im_li2_polar(r, theta) - series.im).abs() < 1e-12);
        }
    }

    #[test]
    fn full_circle_is_jensen() {
        for (r, a) in [(0.3, 1.0), (2.5, -0.4), (1.0, 0.7)] {
            let v = arc_log_integral(r, a, 0.0, 2.0 * PI);
            let expect = 2.0 * PI * f64::max(0.0, f64::ln(r));
            assert!((v - expect).abs() < 1e-12, "{r}");
        }
    }
}
