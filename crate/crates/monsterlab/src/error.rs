use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Difference quotient requested on the diagonal.
    Diagonal,
    /// The bracket passed to a monotone inversion does not straddle the target.
    NoBracket,
    /// Bisection stopped shrinking before reaching the tolerance.
    Stall,
    /// Automatic bracket growth hit its cap.
    BracketGrowth,
    /// A point outside the hull of a gap set.
    OutsideHull,
    /// Scales or deltas not strictly decreasing and positive.
    BadScales,
    /// Interval with `a >= b`.
    EmptyInterval,
    /// Lipschitz constant not above the secant slope.
    LipschitzTooSmall,
    /// Sampled function is not monotone where monotonicity is required.
    NotMonotone,
    /// A gap endpoint without a jet, or jets of mixed order.
    MissingJet(String),
    /// Adjustor width could not be validated against the sampled carrier.
    Epsilon(usize),
    /// Malformed input data.
    Invalid(String),
    /// Fewer samples than the operation needs.
    TooFewSamples,
    /// A ball that should have been sign-definite contains zero.
    Indeterminate,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Diagonal => write!(f, "difference quotient on the diagonal x = y"),
            Error::NoBracket => write!(f, "no bracket"),
            Error::Stall => write!(f, "stall"),
            Error::BracketGrowth => write!(f, "bracket growth cap exceeded"),
            Error::OutsideHull => write!(f, "point outside the hull"),
            Error::BadScales => write!(f, "scales must be positive and strictly decreasing"),
            Error::EmptyInterval => write!(f, "interval endpoints must satisfy a < b"),
            Error::LipschitzTooSmall => write!(f, "Lipschitz constant does not exceed the secant slope"),
            Error::NotMonotone => write!(f, "function not monotone at sample resolution"),
            Error::MissingJet(s) => write!(f, "missing or inconsistent jet: {s}"),
            Error::Epsilon(i) => write!(f, "adjustor width unverifiable on gap {i}"),
            Error::Invalid(s) => write!(f, "invalid input: {s}"),
            Error::TooFewSamples => write!(f, "fewer than two samples"),
            Error::Indeterminate => write!(f, "ball contains zero"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
