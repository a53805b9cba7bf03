//! L-functions of weight-k newforms via the smoothed completed function
//! `Λ(s) = A^s Γ(s) L(s)`, `A = √N / 2π`, with `Λ(s) = ε Λ(k - s)`.

use std::f64::consts::PI;

use statrs::function::gamma::{gamma, gamma_ur};

use crate::eis::curves::CurveModel;
use crate::error::EisError;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Exponential integral `E1(x) = Γ(0, x)` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> f64 {
    assert!(x > 0.0, "E1 needs x > 0");
    if x <= 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..60 {
            term *= -x / k as f64;
            let t = term / k as f64;
            sum += t;
            if t.abs() < 1e-18 * sum.abs().max(1e-300) {
                break;
            }
        }
        -EULER_GAMMA - x.ln() - sum
    } else {
        // Modified Lentz for e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...))).
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-x).exp()
    }
}

/// Upper incomplete gamma `Γ(s, x)` for real `s` and `x > 0`.
pub fn upper_gamma(s: f64, x: f64) -> f64 {
    if s > 0.0 {
        return gamma_ur(s, x) * gamma(s);
    }
    if s == 0.0 {
        return exp_integral_e1(x);
    }
    // Γ(s, x) = (Γ(s + 1, x) - x^s e^{-x}) / s.
    (upper_gamma(s + 1.0, x) - x.powf(s) * (-x).exp()) / s
}

/// Residue of `Γ` at the non-positive integer `-m`.
fn gamma_residue(m: u32) -> f64 {
    let fact: f64 = (1..=m).map(|i| i as f64).product();
    if m.is_multiple_of(2) {
        1.0 / fact
    } else {
        -1.0 / fact
    }
}

#[derive(Clone, Debug)]
pub struct LSeries {
    /// `a_0 .. a_M` (`a_0` unused).
    pub coeffs: Vec<f64>,
    pub weight: u32,
    pub conductor: u64,
}

/// A value with its truncation bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LValue {
    pub value: f64,
    pub tail_bound: f64,
}

/// Split point used to test the functional equation.
const SPLIT: f64 = 1.15;

impl LSeries {
    pub fn new(coeffs: Vec<f64>, weight: u32, conductor: u64) -> Self {
        LSeries {
            coeffs,
            weight,
            conductor,
        }
    }

    pub fn from_curve(curve: &CurveModel) -> Result<Self, EisError> {
        let n = Self::terms_needed(curve.conductor, 2);
        let a = curve.newform_coeffs(n)?;
        Ok(LSeries::new(
            a.into_iter().map(|x| x as f64).collect(),
            2,
            curve.conductor,
        ))
    }

    fn a_scale(&self) -> f64 {
        (self.conductor as f64).sqrt() / (2.0 * PI)
    }

    /// Coefficients needed so that `e^{-x_n / SPLIT}` falls below `1e-22`.
    pub fn terms_needed(conductor: u64, weight: u32) -> usize {
        let step = 2.0 * PI / (conductor as f64).sqrt() / SPLIT;
        ((52.0 + 2.0 * weight as f64) / step).ceil() as usize + 1
    }

    fn check_length(&self) -> Result<(), EisError> {
        let need = Self::terms_needed(self.conductor, self.weight);
        if self.coeffs.len() <= need {
            return Err(EisError::Unreachable {
                want: 1e-22,
                best: (-(2.0 * PI / (self.conductor as f64).sqrt() / SPLIT)
                    * self.coeffs.len() as f64)
                    .exp(),
            });
        }
        Ok(())
    }

    /// `Λ(s)` from the Mellin integral split at `t0`:
    /// `Σ a_n [x_n^{-s} Γ(s, x_n t0) + ε x_n^{s-k} Γ(k-s, x_n/t0)]`.
    pub fn lambda_split(&self, s: f64, eps: f64, t0: f64) -> f64 {
        let k = self.weight as f64;
        let c = 1.0 / self.a_scale();
        let mut sum = 0.0;
        for (n, a) in self.coeffs.iter().enumerate().skip(1).rev() {
            if *a == 0.0 {
                continue;
            }
            let x = c * n as f64;
            sum += a
                * (x.powf(-s) * upper_gamma(s, x * t0)
                    + eps * x.powf(s - k) * upper_gamma(k - s, x / t0));
        }
        sum
    }

    pub fn lambda(&self, s: f64, eps: f64) -> f64 {
        self.lambda_split(s, eps, 1.0)
    }

    /// Relative discrepancy of the functional equation at two points for sign `eps`.
    pub fn functional_equation_residual(&self, eps: f64) -> f64 {
        let k = self.weight as f64;
        [k / 2.0 + 0.37, k / 2.0 + 1.21]
            .iter()
            .map(|&s| {
                let a = self.lambda_split(s, eps, SPLIT);
                let b = eps * self.lambda_split(k - s, eps, SPLIT);
                (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
            })
            .fold(0.0, f64::max)
    }

    /// The sign ε, chosen by self-consistency of the functional equation.
    pub fn detect_sign(&self) -> Result<f64, EisError> {
        self.check_length()?;
        let plus = self.functional_equation_residual(1.0);
        let minus = self.functional_equation_residual(-1.0);
        match (plus < 1e-10, minus < 1e-10) {
            (true, false) => Ok(1.0),
            (false, true) => Ok(-1.0),
            _ => Err(EisError::UnknownSign { plus, minus }),
        }
    }

    /// `L(s)` for `s > 0`.
    pub fn value(&self, s: f64) -> Result<f64, EisError> {
        let eps = self.detect_sign()?;
        Ok(self.lambda(s, eps) / (self.a_scale().powf(s) * gamma(s)))
    }

    /// `L'(s0)` for `s0 ∈ {0, -1, ...}`, from `Λ(s0) = ε Λ(k - s0)` and the pole of `Γ` at `s0`.
    pub fn derivative_at_left_edge(&self, s0: i32) -> Result<f64, EisError> {
        assert!(s0 <= 0, "left-edge points are non-positive integers");
        let eps = self.detect_sign()?;
        let k = self.weight as f64;
        let s = s0 as f64;
        let big_lambda = eps * self.lambda(k - s, eps);
        Ok(big_lambda / (self.a_scale().powf(s) * gamma_residue((-s0) as u32)))
    }
}

/// `L(f, 1) = 2 Σ a_n e^{-2πn/√N} / n` for a weight-2 form with ε = +1,
/// truncated after `terms` with the tail bounded through `|a_n| ≤ n`.
pub fn lvalue_weight2_at1(
    coeffs: &[i64],
    conductor: u64,
    terms: usize,
) -> Result<LValue, EisError> {
    let c = 2.0 * PI / (conductor as f64).sqrt();
    let m = terms.min(coeffs.len().saturating_sub(1));
    let mut value = 0.0;
    for n in (1..=m).rev() {
        if coeffs[n].unsigned_abs() as usize > n {
            return Err(EisError::CoefficientBound(n));
        }
        value += 2.0 * coeffs[n] as f64 * (-c * n as f64).exp() / n as f64;
    }
    let tail_bound = 2.0 * (-c * (m + 1) as f64).exp() / (1.0 - (-c).exp());
    Ok(LValue { value, tail_bound })
}

/// Smallest truncation meeting `target` under the `|a_n| ≤ n` bound.
pub fn terms_for_tail(conductor: u64, target: f64) -> usize {
    let c = 2.0 * PI / (conductor as f64).sqrt();
    let mut m = 1;
    while 2.0 * (-c * (m + 1) as f64).exp() / (1.0 - (-c).exp()) > target {
        m += 1;
    }
    m
}

/// `ζ(3) = (5/2) Σ (-1)^{n+1} / (n³ C(2n, n))`.
pub fn zeta3() -> f64 {
    let mut sum = 0.0;
    let mut binom = 1.0;
    for n in 1..40 {
        let nf = n as f64;
        binom *= (2.0 * nf - 1.0) * 2.0 / nf;
        let t = 1.0 / (nf * nf * nf * binom);
        sum += if n % 2 == 1 { t } else { -t };
    }
    2.5 * sum
}

/// `ζ'(-2) = -ζ(3) / (4π²)`.
pub fn zeta_prime_minus2() -> f64 {
    -zeta3() / (4.0 * PI * PI)
}

/// `L(χ_{-3}, 2) = Σ_k [(3k+1)^{-2} - (3k+2)^{-2}]` with a midpoint tail.
pub fn l_chi_minus3_at_2() -> f64 {
    let k_max = 200_000u64;
    let mut sum = 0.0;
    for k in (0..=k_max).rev() {
        let a = 3.0 * k as f64;
        sum += 1.0 / ((a + 1.0) * (a + 1.0)) - 1.0 / ((a + 2.0) * (a + 2.0));
    }
    let t = 3.0 * (k_max as f64 + 0.5);
    sum + 1.0 / (3.0 * (t + 1.0)) - 1.0 / (3.0 * (t + 2.0))
}

/// `a_0 .. a_nmax` of `η(τ)³ η(7τ)³ = q Π (1-q^n)³ (1-q^{7n})³`.
pub fn eta_product_f7(nmax: usize) -> Vec<i64> {
    let mut out = vec![0i64; nmax + 1];
    if nmax == 0 {
        return out;
    }
    // Jacobi: Π (1-q^n)³ = Σ (-1)^k (2k+1) q^{k(k+1)/2}.
    let len = nmax;
    let mut j = vec![0i64; len];
    let mut k = 0usize;
    while k * (k + 1) / 2 < len {
        j[k * (k + 1) / 2] = if k.is_multiple_of(2) {
            2 * k as i64 + 1
        } else {
            -(2 * k as i64 + 1)
        };
        k += 1;
    }
    for (e1, c1) in j.iter().enumerate() {
        if *c1 == 0 {
            continue;
        }
        for (e2, c2) in j.iter().enumerate() {
            let e = e1 + 7 * e2;
            if e >= len {
                break;
            }
            out[e + 1] += c1 * c2;
        }
    }
    out
}
