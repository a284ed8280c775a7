//! Certified and exact evaluation of pathological real functions.
//!
//! The crate is `no_std` (with `alloc`). Floating-point values are carried as
//! [`Ball`]s with outward rounding; lattice and Cantor-set computations use exact
//! rationals or exact integer encodings.
//!
//! Modules:
//! - [`evalcore`]: balls, rationals, difference quotients, monotone inversion.
//! - [`monsters`]: Volterra-type functions, the Pompeiu function and its inverse,
//!   the differentiable monster, Takagi-type and Weierstrass sums.
//! - [`perfectsets`]: gap-set representation of closed sets, the odometer and
//!   the Cantor embedding that conjugates it.
//! - [`restrict`]: rising sun components, Lipschitz and monotone restrictions.
//! - [`extend`]: Jarník and Whitney extensions, the C¹ criterion and the
//!   nowhere-monotone twisted extension.
#![cfg_attr(not(any(test, feature = "std")), no_std)]
#![forbid(unsafe_code)]
// `!(a < b)` is used on purpose: it is also true when either side is NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod error;
pub mod evalcore;
pub mod extend;
pub mod monsters;
pub mod perfectsets;
pub mod restrict;

pub use error::{Error, Result};
pub use evalcore::{Ball, RatPoly, Rational};
