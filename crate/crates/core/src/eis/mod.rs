//! Eisenstein series `G_{a,b}` and their products, newform coefficients by
//! point counting, Sturm-bound identification, and L-values.

pub mod curves;
pub mod eisenstein;
pub mod lfun;

pub use curves::{hasse_holds, multiplicative_extension, parse_curves, primes_up_to, CurveModel};
pub use eisenstein::{
    eisenstein_g, gamma1_index, identify_multiple, sturm_bound, EisensteinCombination, EisensteinG,
    EisensteinProduct, MIN_ASSEMBLY_PREC,
};
pub use lfun::{
    eta_product_f7, l_chi_minus3_at_2, lvalue_weight2_at1, terms_for_tail, upper_gamma, zeta3,
    zeta_prime_minus2, LSeries, LValue,
};
