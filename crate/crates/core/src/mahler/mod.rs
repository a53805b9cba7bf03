//! Mahler measures of Laurent polynomials in up to four variables.
//!
//! Jensen's formula removes one variable; a second is integrated in closed
//! form through Clausen's function; the rest go to adaptive Gauss–Kronrod
//! quadrature.

pub mod clausen;
pub mod elliptic;
pub mod identity;
pub mod inner;
pub mod measure;
pub mod poly;
pub mod quad;

pub use clausen::{arc_log_integral, cl2, im_li2_polar};
pub use elliptic::{elliptic_integral_gamma_e, elliptic_integral_gamma_e_substituted};
pub use identity::{lseries_for, verify_identity, IdentityFormula, IdentityReport, F7_LABEL};
pub use inner::{inner_jensen_max, inner_max_log, jensen_mean, poly_roots};
pub use measure::{mahler_measure, mahler_measure_with_budget, DEFAULT_MAX_EVALS};
pub use poly::LaurentPoly;
pub use quad::{adaptive_gk, pairwise_sum, tanh_sinh, QuadratureResult};
