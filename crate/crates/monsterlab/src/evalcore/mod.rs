//! Certified evaluation primitives: balls, exact rationals, difference quotients,
//! monotone inversion, derivative estimates and sampled oscillation.

mod ball;
mod ops;
mod rational;

pub use ball::{f64_to_rational, rational_to_f64, Ball};
pub(crate) use ball::{down, up};
pub use ops::{derivative_estimate, diff_quotient, invert_monotone, ivp_probe, oscillation, Inverse, QuotientSample};
pub use rational::{format_rational, int, parse_rational, pow_int, rabs, rat, rpow, RatPoly, Rational};
