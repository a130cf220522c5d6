use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    NotPrime(u64),
    InvalidArgument(String),
    FieldMismatch,
    PrimeMismatch(u64, u64),
    DivisionByZero,
    /// The value is zero at working precision, so the request cannot be answered.
    PrecisionZero,
    /// Known digits do not suffice to decide the question.
    PrecisionInsufficient,
    /// Requested precision does not fit the machine representation.
    PrecisionOverflow,
    TowerMismatch,
    InvalidTower(String),
    InvalidPrecision(String),
    OutOfRange(String),
    NegativeValuation,
    NotIntegral,
    NonSimpleRoot,
    NoRoot,
    NotDivisible(String),
    CharDividesDegree,
    ShapeMismatch(String),
    Unsupported(String),
    NonLocal,
    Unstable(i64),
    NoConvergence,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::InvalidArgument(s) => write!(f, "invalid argument: {s}"),
            Error::FieldMismatch => f.write_str("finite fields differ"),
            Error::PrimeMismatch(a, b) => write!(f, "mismatched primes {a} and {b}"),
            Error::DivisionByZero => f.write_str("division by zero"),
            Error::PrecisionZero => f.write_str("zero at working precision"),
            Error::PrecisionInsufficient => f.write_str("precision insufficient to decide"),
            Error::PrecisionOverflow => f.write_str("precision exceeds machine range"),
            Error::TowerMismatch => f.write_str("tower mismatch"),
            Error::InvalidTower(s) => write!(f, "invalid tower: {s}"),
            Error::InvalidPrecision(s) => write!(f, "invalid precision: {s}"),
            Error::OutOfRange(s) => write!(f, "out of range: {s}"),
            Error::NegativeValuation => f.write_str("negative valuation"),
            Error::NotIntegral => f.write_str("non-integral coefficient"),
            Error::NonSimpleRoot => f.write_str("residue root is not simple"),
            Error::NoRoot => f.write_str("no residue root"),
            Error::NotDivisible(s) => write!(f, "{s}"),
            Error::CharDividesDegree => {
                f.write_str("degree divisible by residue characteristic")
            }
            Error::ShapeMismatch(s) => write!(f, "shape mismatch: {s}"),
            Error::Unsupported(s) => write!(f, "unsupported: {s}"),
            Error::NonLocal => f.write_str("last residue field is not finite"),
            Error::Unstable(t) => write!(f, "result not stable up to window {t}"),
            Error::NoConvergence => f.write_str("iteration did not converge"),
        }
    }
}
