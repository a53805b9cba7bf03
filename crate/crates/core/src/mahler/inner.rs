use std::f64::consts::PI;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use super::clausen::arc_log_integral;
use super::quad::adaptive_gk;

/// Distance from the unit circle below which a root of the crossing
/// polynomial is treated as a crossing angle. Spurious extra angles only
/// split an arc, so the threshold can be generous.
const CIRCLE_TOL: f64 = 1e-5;

fn horner(c: &[Complex64], w: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, x| acc * w + x)
}

fn trim(c: &[Complex64]) -> &[Complex64] {
    let scale = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut n = c.len();
    while n > 0 && c[n - 1].norm() <= 1e-14 * scale {
        n -= 1;
    }
    &c[..n]
}

/// Roots of `Σ c_i w^i` (ascending coefficients), polished by Newton steps.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let c = trim(coeffs);
    if c.len() <= 1 {
        return Vec::new();
    }
    let d = c.len() - 1;
    let lead = c[d];
    let mut roots = match d {
        1 => vec![-c[0] / c[1]],
        2 => {
            let (a, b, cc) = (c[2], c[1], c[0]);
            let disc = (b * b - 4.0 * a * cc).sqrt();
            let q = if (b.conj() * disc).re >= 0.0 {
                -(b + disc) / 2.0
            } else {
                -(b - disc) / 2.0
            };
            if q.norm() == 0.0 {
                vec![Complex64::new(0.0, 0.0); 2]
            } else {
                vec![q / a, cc / q]
            }
        }
        _ => {
            let mut m = DMatrix::<Complex64>::zeros(d, d);
            for i in 1..d {
                m[(i, i - 1)] = Complex64::new(1.0, 0.0);
            }
            for i in 0..d {
                m[(i, d - 1)] = -c[i] / lead;
            }
            // The unshifted fallback covers companion matrices on which the
            // shifted QR iteration stalls (e.g. w^4 + w^2 + 1).
            match Schur::try_new(m, f64::EPSILON, 2000).and_then(|s| s.eigenvalues()) {
                Some(ev) => ev.iter().copied().collect(),
                None => aberth(c),
            }
        }
    };
    let deriv: Vec<Complex64> = (1..=d).map(|i| c[i] * i as f64).collect();
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let dv = horner(&deriv, *r);
            if dv.norm() == 0.0 {
                break;
            }
            let step = horner(c, *r) / dv;
            if !step.is_finite() {
                break;
            }
            let next = *r - step;
            if horner(c, next).norm() <= horner(c, *r).norm() {
                *r = next;
            } else {
                break;
            }
        }
    }
    roots
}

/// Aberth–Ehrlich simultaneous iteration.
fn aberth(c: &[Complex64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    let deriv: Vec<Complex64> = (1..=d).map(|i| c[i] * i as f64).collect();
    // Cauchy bound for the starting radius.
    let radius = 1.0 + c[..d].iter().map(|x| (x / c[d]).norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / d as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..d {
            let ratio = horner(c, z[k]) / horner(&deriv, z[k]);
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != k)
                .map(|j| 1.0 / (z[k] - z[j]))
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// `log|f|` on the unit circle in factored form.
#[derive(Clone, Debug)]
struct Factored {
    log_lead: f64,
    roots: Vec<(f64, f64)>,
}

impl Factored {
    fn new(c: &[Complex64]) -> Option<Self> {
        let c = trim(c);
        if c.is_empty() {
            return None;
        }
        Some(Factored {
            log_lead: c[c.len() - 1].norm().ln(),
            roots: poly_roots(c)
                .into_iter()
                .map(|r| (r.norm(), r.arg()))
                .collect(),
        })
    }

    /// `(1/2π) ∫_0^{2π} log|f|`.
    fn jensen(&self) -> f64 {
        self.log_lead + self.roots.iter().map(|(r, _)| r.ln().max(0.0)).sum::<f64>()
    }

    fn arc(&self, phi1: f64, phi2: f64) -> f64 {
        self.log_lead * (phi2 - phi1)
            + self
                .roots
                .iter()
                .map(|&(r, a)| arc_log_integral(r, a, phi1, phi2))
                .sum::<f64>()
    }
}

/// `(1/2π) ∫ log|f(e^{iφ})| dφ` by Jensen's formula.
pub fn jensen_mean(coeffs: &[Complex64]) -> f64 {
    match Factored::new(coeffs) {
        Some(f) => f.jensen(),
        None => f64::NEG_INFINITY,
    }
}

/// `(1/2π) ∫_0^{2π} max(log|A(e^{iφ})|, log|B(e^{iφ})|) dφ` for polynomials
/// with ascending complex coefficients.
pub fn inner_max_log(a: &[Complex64], b: &[Complex64]) -> f64 {
    let (fa, fb) = match (Factored::new(a), Factored::new(b)) {
        (None, None) => return f64::NEG_INFINITY,
        (Some(f), None) | (None, Some(f)) => return f.jensen(),
        (Some(fa), Some(fb)) => (fa, fb),
    };
    let a = trim(a);
    let b = trim(b);
    let d = a.len().max(b.len()) - 1;
    // w^d (A(w) Ā(1/w) - B(w) B̄(1/w)) vanishes on the circle exactly where |A| = |B|.
    let mut h = vec![Complex64::new(0.0, 0.0); 2 * d + 1];
    for (j, x) in a.iter().enumerate() {
        for (k, y) in a.iter().enumerate() {
            h[j + d - k] += x * y.conj();
        }
    }
    for (j, x) in b.iter().enumerate() {
        for (k, y) in b.iter().enumerate() {
            h[j + d - k] -= x * y.conj();
        }
    }
    let scale = a.iter().chain(b.iter()).map(|x| x.norm_sqr()).sum::<f64>();
    if h.iter().all(|x| x.norm() <= 1e-13 * scale) {
        return fa.jensen();
    }
    let roots = poly_roots(&h);
    if roots.iter().any(|r| !r.is_finite()) || (trim(&h).len() > 1 && roots.is_empty()) {
        return inner_max_log_quadrature(a, b);
    }
    let mut angles: Vec<f64> = roots
        .iter()
        .filter(|r| (r.norm() - 1.0).abs() < CIRCLE_TOL)
        .map(|r| r.arg().rem_euclid(2.0 * PI))
        .collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    let larger_a = |phi: f64| {
        let w = Complex64::from_polar(1.0, phi);
        horner(a, w).norm() >= horner(b, w).norm()
    };
    if angles.is_empty() {
        return if larger_a(0.5) {
            fa.jensen()
        } else {
            fb.jensen()
        };
    }
    let mut total = 0.0;
    for i in 0..angles.len() {
        let p1 = angles[i];
        let p2 = if i + 1 < angles.len() {
            angles[i + 1]
        } else {
            angles[0] + 2.0 * PI
        };
        if p2 - p1 <= 0.0 {
            continue;
        }
        let f = if larger_a(0.5 * (p1 + p2)) { &fa } else { &fb };
        total += f.arc(p1, p2);
    }
    total / (2.0 * PI)
}

/// Quadrature fallback for [`inner_max_log`]. Crossings of `|A| = |B|` are
/// located by sign changes on a fine grid and refined by bisection; each
/// smooth piece then goes to adaptive quadrature.
pub fn inner_max_log_quadrature(a: &[Complex64], b: &[Complex64]) -> f64 {
    let log_abs =
        |c: &[Complex64], phi: f64| horner(c, Complex64::from_polar(1.0, phi)).norm().ln();
    let gap = |phi: f64| log_abs(a, phi) - log_abs(b, phi);
    let f = |phi: f64| log_abs(a, phi).max(log_abs(b, phi));
    const GRID: usize = 4096;
    let step = 2.0 * PI / GRID as f64;
    let mut cuts = vec![0.0];
    for i in 0..GRID {
        let (mut lo, mut hi) = (i as f64 * step, (i + 1) as f64 * step);
        let (glo, ghi) = (gap(lo), gap(hi));
        if glo.is_finite() && ghi.is_finite() && (glo > 0.0) != (ghi > 0.0) {
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if (gap(mid) > 0.0) == (glo > 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            cuts.push(0.5 * (lo + hi));
        }
    }
    cuts.push(2.0 * PI);
    let total: f64 = cuts
        .windows(2)
        .map(|w| {
            let r = adaptive_gk(f, w[0], w[1], 4, 1e-15, 1_000_000, false).unwrap_or_else(|e| e);
            r.value
        })
        .sum();
    total / (2.0 * PI)
}

/// `(1/2π) ∫ max(c, log|a + b e^{iφ}|) dφ`.
pub fn inner_jensen_max(a: Complex64, b: Complex64, c: f64) -> f64 {
    inner_max_log(&[a, b], &[Complex64::new(c.exp(), 0.0)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn roots_of_cubic() {
        let c = [cx(-6.0, 0.0), cx(11.0, 0.0), cx(-6.0, 0.0), cx(1.0, 0.0)];
        let mut r: Vec<f64> = poly_roots(&c).iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        for (x, y) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn stalled_companion_matrix() {
        // Roots of w^4 + w^2 + 1 are the primitive 3rd and 6th roots of unity.
        let c = [
            cx(1.0, 0.0),
            cx(0.0, 0.0),
            cx(1.0, 0.0),
            cx(0.0, 0.0),
            cx(1.0, 0.0),
        ];
        let r = poly_roots(&c);
        assert_eq!(r.len(), 4);
        for z in r {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!((z.powu(6) - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn plain_jensen_limit() {
        let (a, b) = (cx(0.3, 0.4), cx(-1.2, 0.7));
        let v = inner_jensen_max(a, b, f64::NEG_INFINITY);
        assert!((v - a.norm().ln().max(b.norm().ln())).abs() < 1e-14);
    }

    #[test]
    fn zero_a() {
        let b = cx(0.0, 2.0);
        assert!((inner_jensen_max(cx(0.0, 0.0), b, 0.1) - 2f64.ln()).abs() < 1e-14);
        assert!((inner_jensen_max(cx(0.0, 0.0), b, 1.5) - 1.5).abs() < 1e-14);
    }

    #[test]
    fn equal_moduli_on_circle() {
        // |1 + w| = |w + 1|: identical moduli, no crossings.
        let a = [cx(1.0, 0.0), cx(1.0, 0.0)];
        assert!(inner_max_log(&a, &a).abs() < 1e-14);
    }

    #[test]
    fn higher_degree_against_quadrature() {
        let a = [cx(1.0, 0.0), cx(-0.5, 0.2), cx(0.0, 0.0), cx(2.0, -1.0)];
        let b = [cx(0.7, 0.1), cx(1.5, 0.0)];
        let closed = inner_max_log(&a, &b);
        let brute = inner_max_log_quadrature(&a, &b);
        assert!((closed - brute).abs() < 1e-11, "{closed} {brute}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn closed_form_matches_quadrature(ar in -2.0f64..2.0, ai in -2.0f64..2.0, br in -2.0f64..2.0, bi in -2.0f64..2.0, c in -1.5f64..1.5) {
            let (a, b) = (cx(ar, ai), cx(br, bi));
            prop_assume!(a.norm() + b.norm() > 1e-3);
            let closed = inner_jensen_max(a, b, c);
            let brute = inner_max_log_quadrature(&[a, b], &[cx(c.exp(), 0.0)]);
            prop_assert!((closed - brute).abs() < 1e-12, "{} vs {}", closed, brute);
        }

        #[test]
        fn monotone_in_c(ar in -2.0f64..2.0, ai in -2.0f64..2.0, br in -2.0f64..2.0, bi in -2.0f64..2.0, c in -1.5f64..1.5, dc in 0.0f64..1.0) {
            let (a, b) = (cx(ar, ai), cx(br, bi));
            prop_assume!(a.norm() + b.norm() > 1e-3);
            prop_assert!(inner_jensen_max(a, b, c + dc) >= inner_jensen_max(a, b, c) - 1e-13);
        }
    }
}
