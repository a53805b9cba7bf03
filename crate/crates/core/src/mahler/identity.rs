use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::ToPrimitive;

use super::measure::mahler_measure;
use super::poly::LaurentPoly;
use super::quad::QuadratureResult;
use crate::eis::{eta_product_f7, zeta_prime_minus2, CurveModel, LSeries};
use crate::error::MahlerError;

/// Label resolving to the weight-3 form `η(τ)³η(7τ)³` instead of a curve.
pub const F7_LABEL: &str = "f7";

/// `r · L'(f, -1) + s · ζ'(-2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityFormula {
    pub r: Rational64,
    pub label: String,
    pub s: Rational64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub lhs: QuadratureResult,
    pub rhs: f64,
    pub rhs_error: f64,
    pub l_derivative: f64,
    pub abs_diff: f64,
    pub rel_diff: f64,
}

impl IdentityReport {
    pub fn matches(&self, tol: f64) -> bool {
        self.abs_diff <= tol
    }
}

/// The L-series attached to `label`.
pub fn lseries_for(
    label: &str,
    curves: &BTreeMap<String, CurveModel>,
) -> Result<LSeries, MahlerError> {
    if label == F7_LABEL {
        let n = LSeries::terms_needed(7, 3) + 8;
        let a = eta_product_f7(n);
        return Ok(LSeries::new(
            a.into_iter().map(|x| x as f64).collect(),
            3,
            7,
        ));
    }
    let curve = curves
        .get(label)
        .ok_or_else(|| MahlerError::MissingCurve(label.to_string()))?;
    Ok(LSeries::from_curve(curve)?)
}

pub fn verify_identity(
    p: &LaurentPoly,
    formula: &IdentityFormula,
    curves: &BTreeMap<String, CurveModel>,
    target: f64,
) -> Result<IdentityReport, MahlerError> {
    let ls = lseries_for(&formula.label, curves)?;
    let eps = ls.detect_sign()?;
    let l_derivative = ls.derivative_at_left_edge(-1)?;
    let r = formula.r.to_f64().unwrap_or(f64::NAN);
    let s = formula.s.to_f64().unwrap_or(f64::NAN);
    let rhs = r * l_derivative + s * zeta_prime_minus2();
    let rhs_error = (ls.functional_equation_residual(eps) * (r * l_derivative).abs()).max(1e-14);
    let lhs = mahler_measure(p, target)?;
    let abs_diff = (lhs.value - rhs).abs();
    Ok(IdentityReport {
        lhs,
        rhs,
        rhs_error,
        l_derivative,
        abs_diff,
        rel_diff: abs_diff / rhs.abs().max(f64::MIN_POSITIVE),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eis::parse_curves;

    #[test]
    fn missing_curve() {
        let p = LaurentPoly::parse("1+x+y+z").unwrap();
        let f = IdentityFormula {
            r: Rational64::from_integer(1),
            label: "11a1".into(),
            s: Rational64::from_integer(0),
        };
        assert_eq!(
            verify_identity(&p, &f, &BTreeMap::new(), 1e-6),
            Err(MahlerError::MissingCurve("11a1".into()))
        );
    }

    #[test]
    fn main_identity() {
        let curves = parse_curves("15a8 1 1 1 0 0 15\n").unwrap();
        let p = LaurentPoly::parse("(1+x)(1+y)+z").unwrap();
        let f = IdentityFormula {
            r: Rational64::from_integer(-2),
            label: "15a8".into(),
            s: Rational64::from_integer(0),
        };
        let rep = verify_identity(&p, &f, &curves, 1e-8).unwrap();
        assert!(rep.l_derivative < 0.0);
        assert!(rep.matches(1e-6), "{rep:?}");
    }
}
