//! Siegel units, cross-ratio units `u1(a,b,c,d)`, cusps of X_1(N) and
//! divisors of units.

pub mod cusps;
pub mod divisor;
#[cfg(test)]
pub(crate) mod oracle;
pub mod siegel;

use std::collections::BTreeMap;

use num_rational::{BigRational, Rational64};
use num_traits::One;

pub use cusps::{cusp_label, enumerate_cusps, CuspOrbit, CuspRep, CuspTable};
pub use divisor::{divisor_u1, slashed_leading_exponent, UnitDivisor};
pub use siegel::{
    reduce_class, siegel_fricke_qexp, siegel_leading_exponent, u1_as_siegel, UnitVector,
};

use crate::error::UnitsError;
use crate::qexp::FracSeries;

/// Parameters of `u = -u1(1,2,3,7)` at level 15.
pub const U_PARAMS: [i64; 4] = [1, 2, 3, 7];
/// Parameters of `v = -u1(2,4,6,1)` at level 15.
pub const V_PARAMS: [i64; 4] = [2, 4, 6, 1];

#[derive(Clone, Debug)]
pub struct ParametrisationReport {
    pub level: u32,
    /// `F = (1+ũ)²(1+ṽ)² - ũṽ` is zero below this exponent.
    pub zero_below: Rational64,
    pub u_tilde: FracSeries,
    pub v_tilde: FracSeries,
    pub divisor_u: UnitDivisor,
    pub divisor_v: UnitDivisor,
    /// Upper bound for the pole order of F at each cusp `1/k` (keyed by `k`).
    pub pole_bound: BTreeMap<u32, i64>,
}

/// Checks `(1+ũ)²(1+ṽ)² = ũṽ` for `ũ = -u1(u_params)`, `ṽ = -u1(v_params)`
/// on the Fricke side, coefficient by coefficient below `prec`.
pub fn verify_parametrisation_with(
    level: u32,
    u_params: [i64; 4],
    v_params: [i64; 4],
    prec: i64,
) -> Result<ParametrisationReport, UnitsError> {
    if prec < 8 {
        return Err(UnitsError::PrecisionTooLow(prec, 8));
    }
    let u = u1_as_siegel(level, u_params)?.with_sign(-1);
    let v = u1_as_siegel(level, v_params)?.with_sign(-1);
    let target = Rational64::from_integer(prec);
    // F has valuation at least 2·val(ṽ) + 2·val(ũ); widen the inputs so the
    // product window still covers `prec`.
    let slack = Rational64::from_integer(12);
    let us = u.fricke_qexp(target + slack)?;
    let vs = v.fricke_qexp(target + slack)?;
    let one = BigRational::one();
    let a = us.add_constant(&one)?;
    let b = vs.add_constant(&one)?;
    let lhs = a.mul(&a)?.mul(&b.mul(&b)?)?;
    let f = lhs.sub(&us.mul(&vs)?)?;
    let window = f.prec().unwrap_or(target);
    if window < target {
        return Err(UnitsError::PrecisionTooLow(
            *window.numer() / *window.denom(),
            prec,
        ));
    }
    if let Some((e, c)) = f.terms().find(|(e, _)| *e < target) {
        return Err(UnitsError::ParametrisationFailure {
            exponent: e.to_string(),
            coefficient: c.to_string(),
        });
    }
    let divisor_u = divisor_u1(level, u_params)?;
    let divisor_v = divisor_u1(level, v_params)?;
    let mut pole_bound = BTreeMap::new();
    for k in 0..=level / 2 {
        let p = 2 * (-divisor_u.order_at(k)).max(0) + 2 * (-divisor_v.order_at(k)).max(0);
        if p > 0 {
            pole_bound.insert(k, p);
        }
    }
    Ok(ParametrisationReport {
        level,
        zero_below: target,
        u_tilde: us.truncate(Rational64::from_integer(8))?,
        v_tilde: vs.truncate(Rational64::from_integer(8))?,
        divisor_u,
        divisor_v,
        pole_bound,
    })
}

/// The level-15 parametrisation check.
pub fn verify_parametrisation(prec: i64) -> Result<ParametrisationReport, UnitsError> {
    verify_parametrisation_with(15, U_PARAMS, V_PARAMS, prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parametrisation_holds_at_low_precision() {
        let r = verify_parametrisation(8).unwrap();
        assert_eq!(r.pole_bound, BTreeMap::from([(1, 4), (2, 4)]));
    }

    #[test]
    fn perturbed_unit_fails() {
        let err = verify_parametrisation_with(15, [1, 2, 3, 4], V_PARAMS, 8).unwrap_err();
        assert!(matches!(err, UnitsError::ParametrisationFailure { .. }));
    }

    #[test]
    fn precision_floor() {
        assert!(matches!(
            verify_parametrisation(5),
            Err(UnitsError::PrecisionTooLow(5, 8))
        ));
    }
}
