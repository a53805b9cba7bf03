//! Modular units, the weight-3 modular complex, Manin symbols, Eisenstein
//! series, L-values and Mahler measures for the level-15 regulator
//! computation of `m((1+x)(1+y)+z)`.

pub mod eis;
pub mod error;
pub mod goncharov;
pub mod linalg;
pub mod mahler;
pub mod msym;
pub mod qexp;
pub mod units;

pub use error::{EisError, GoncharovError, MahlerError, MsymError, QexpError, UnitsError};
pub use qexp::FracSeries;
pub use units::{CuspRep, UnitDivisor, UnitVector};
