use super::quad::{adaptive_gk, tanh_sinh, QuadratureResult};

fn upper_endpoint() -> f64 {
    2.0 * (0.25f64).acos()
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `16 cos²(θ/2) - 1` written through `δ`, the distance to the upper endpoint.
fn radicand(delta: f64) -> f64 {
    let s = (0.5 * delta).sin();
    14.0 * s * s + 15f64.sqrt() * delta.sin()
}

/// `4 ∫_0^{2 arccos(1/4)} dθ / √(16 cos²(θ/2) - 1)` by tanh–sinh quadrature.
pub fn elliptic_integral_gamma_e() -> QuadratureResult {
    let r = tanh_sinh(
        |_, _, delta| 1.0 / radicand(delta).sqrt(),
        0.0,
        upper_endpoint(),
        1e-14,
    );
    QuadratureResult {
        value: 4.0 * r.value,
        error_estimate: 4.0 * r.error_estimate,
        evaluations: r.evaluations,
    }
}

/// The same integral after `δ = s²`, by adaptive Gauss–Kronrod.
pub fn elliptic_integral_gamma_e_substituted() -> QuadratureResult {
    // 2s / √g(s²) with g(s²)/s² expanded to stay regular at s = 0.
    let f = |s: f64| {
        let d = s * s;
        let half = sinc(0.5 * d);
        let g_over = 3.5 * d * half * half + 15f64.sqrt() * sinc(d);
        2.0 / g_over.sqrt()
    };
    let r = adaptive_gk(f, 0.0, upper_endpoint().sqrt(), 4, 1e-14, 1_000_000, false)
        .unwrap_or_else(|e| e);
    QuadratureResult {
        value: 4.0 * r.value,
        error_estimate: 4.0 * r.error_estimate,
        evaluations: r.evaluations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_and_schemes_agree() {
        let a = elliptic_integral_gamma_e();
        let b = elliptic_integral_gamma_e_substituted();
        assert!(a.value > 0.0);
        assert!((a.value - b.value).abs() < 1e-10, "{} {}", a.value, b.value);
    }

    #[test]
    fn radicand_matches_definition() {
        let t1 = upper_endpoint();
        for d in [0.01, 0.4, 1.3, 2.0] {
            let th: f64 = t1 - d;
            let direct = 16.0 * (0.5 * th).cos().powi(2) - 1.0;
            assert!((radicand(d) - direct).abs() < 1e-13);
        }
    }
}
