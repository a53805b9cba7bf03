use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QexpError {
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),
    #[error("exponent {exponent} does not lie on the lattice (1/{lattice})Z")]
    IncompatibleDenominator { exponent: String, lattice: i64 },
    #[error("lattice denominator {have} does not divide {want}")]
    IncompatibleLattice { have: i64, want: i64 },
    #[error("series is zero up to q^{prec}")]
    ZeroToPrecision { prec: String },
    #[error("cannot invert the zero series")]
    ZeroSeries,
    #[error("inverse of an exact non-monomial series needs a finite precision")]
    InfinitePrecisionInverse,
    #[error("series has a fractional exponent where an integral one is required")]
    FractionalExponent,
    #[error("cannot parse series text: {0}")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnitsError {
    #[error(transparent)]
    Qexp(#[from] QexpError),
    #[error("residue {0} is zero modulo {1}")]
    ZeroResidue(i64, u32),
    #[error("parameters {0:?} are not distinct classes in (Z/{1}Z)/±1")]
    RepeatedParameters([i64; 4], u32),
    #[error("degenerate cross-ratio: {what} vanishes mod {level}")]
    DegenerateCrossRatio { what: String, level: u32 },
    #[error("order at cusp {cusp} is not an integer ({value})")]
    NonIntegralOrder { cusp: String, value: String },
    #[error("unit has non-integral exponents and no q-expansion")]
    NonIntegralUnit,
    #[error("parametrisation check failed: coefficient of q^{exponent} is {coefficient}")]
    ParametrisationFailure {
        exponent: String,
        coefficient: String,
    },
    #[error("precision {0} is below the minimum of {1}")]
    PrecisionTooLow(i64, i64),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GoncharovError {
    #[error(transparent)]
    Units(#[from] UnitsError),
    #[error(transparent)]
    Qexp(#[from] QexpError),
    #[error("level {0} is too small for U2")]
    LevelTooSmall(u32),
    #[error("1 - u is not a permuted cross-ratio unit for {0:?}")]
    OneMinusValidation([u32; 4]),
    #[error("unit {0:?} is not an element of U2 at this level")]
    NotInU2([i64; 4]),
    #[error("basis index {0} is outside 1..={1}")]
    BasisIndex(u32, u32),
    #[error("linear system of {rows} x {cols} exceeds the cap of {cap} entries")]
    DimensionOverflow {
        rows: usize,
        cols: usize,
        cap: usize,
    },
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),
    #[error("cocycle `{0}` is not present in the cocycle data")]
    MissingCocycle(String),
    #[error("cocycle data line {line}: {msg}")]
    CocycleData { line: usize, msg: String },
    #[error("certificate replay failed: {0}")]
    CertificateReplay(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MsymError {
    #[error("prime {p} divides the level {n}")]
    BadPrime { p: u64, n: u32 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("plus space of ker(boundary) has rank {0}, expected 1")]
    PlusRank(usize),
    #[error("vector is not primitive in the integral lattice (content {0})")]
    NotPrimitive(String),
    #[error("cuspidal subspace is not a single Hecke eigenspace for T_{0}")]
    NotEigen(u64),
    #[error("no prime in {tried:?} separates the cuspidal part from the boundary")]
    NoSeparatingPrime { tried: Vec<u64> },
    #[error("Manin symbol ({0}, {1}) is not a valid coset label")]
    BadSymbol(i64, i64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EisError {
    #[error(transparent)]
    Qexp(#[from] QexpError),
    #[error("G_({a},{b}) with a zero index has an unknown constant term; unsupported")]
    ZeroIndex { a: i64, b: i64 },
    #[error("fractional exponent in Eisenstein product at index pair {0}")]
    FractionalProduct(String),
    #[error("precision {0} below the minimum {1}")]
    PrecisionTooLow(i64, i64),
    #[error("singular Weierstrass model for {0}")]
    Singular(String),
    #[error("curve {label}: {msg}")]
    BadModel { label: String, msg: String },
    #[error("unknown curve label {0}")]
    UnknownCurve(String),
    #[error("curve data line {line}: {msg}")]
    CurveData { line: usize, msg: String },
    #[error("unknown reduction type at p = {p} for {label}")]
    ReductionType { p: u64, label: String },
    #[error("not proportional: coefficient of q^{n} is {lhs} vs {rhs} times {c}")]
    NotProportional {
        n: usize,
        lhs: String,
        rhs: String,
        c: String,
    },
    #[error("reference stream is zero within the Sturm bound")]
    ZeroReference,
    #[error("no sign satisfies the functional equation (errors {plus:e}, {minus:e})")]
    UnknownSign { plus: f64, minus: f64 },
    #[error("requested precision {want:e} unreachable; best achievable {best:e}")]
    Unreachable { want: f64, best: f64 },
    #[error("coefficient bound |a_n| <= n violated at n = {0}")]
    CoefficientBound(usize),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MahlerError {
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("polynomial has {0} variables; at most 4 are supported")]
    TooManyVariables(usize),
    #[error("degree {0} in the Jensen variable; at most 2 is supported")]
    JensenDegree(i32),
    #[error("polynomial vanishes identically")]
    ZeroPolynomial,
    #[error("target {target:e} not reached within {evals} evaluations (estimate {estimate:e})")]
    Unreachable {
        target: f64,
        estimate: f64,
        evals: usize,
    },
    #[error("coefficient overflow while expanding polynomial")]
    Overflow,
    #[error("no curve model for label {0}")]
    MissingCurve(String),
    #[error(transparent)]
    Eis(#[from] EisError),
}
