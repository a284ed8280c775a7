//! Restrictions of sampled functions to closed sets.
//!
//! Every function is read through its piecewise-linear model over exact rational
//! samples, so the rising sun components, the Lipschitz set and the monotone tree
//! are exact for that model. Statements about the underlying function hold at
//! sample resolution only.

mod lipschitz;
mod modulus;
mod monotone;
mod rising;
mod sampled;

pub use lipschitz::{
    covers, interval_cover_check, interval_disjoint_sum, length_sum, lipschitz_restriction, pairwise_lipschitz,
    LipschitzBranch, LipschitzCertificate,
};
pub use modulus::{
    differentiable_restriction, modulus_of_points, quotient_uc_scan, Budget, CarrierBranch, DifferentiableRestriction,
    ModulusReport,
};
pub use monotone::{monotone_restriction, MonotoneBranch, MonotoneRestriction, MIN_RUN};
pub use rising::{rising_sun, rising_sun_points};
pub use sampled::{monotonicity, Interpolation, Monotonicity, Sample, SampledFunction};

use alloc::vec::Vec;

use crate::evalcore::Rational;
use crate::perfectsets::{GapSet, Generator};
use crate::{Error, Result};

/// Closed set from sorted, pairwise disjoint closed components (degenerate ones allowed).
pub(crate) fn from_components(comps: &[(Rational, Rational)]) -> Result<GapSet> {
    let (Some(first), Some(last)) = (comps.first(), comps.last()) else {
        return Err(Error::Invalid("empty set".into()));
    };
    let mut gaps = Vec::new();
    for w in comps.windows(2) {
        if w[0].1 < w[1].0 {
            gaps.push((w[0].1.clone(), w[1].0.clone()));
        } else if w[0].1 > w[1].0 {
            return Err(Error::Invalid("components overlap".into()));
        }
    }
    GapSet::new(first.0.clone(), last.1.clone(), gaps, Generator::Explicit)
}

/// `P ∩ ⋃ [l, r]` for sorted disjoint closed intervals.
pub(crate) fn intersect_intervals(p: &GapSet, ivs: &[(Rational, Rational)]) -> Result<GapSet> {
    let mut sorted: Vec<&(Rational, Rational)> = ivs.iter().collect();
    sorted.sort();
    let pc = p.components();
    let mut comps = Vec::new();
    for (l, r) in sorted {
        for (c, d) in &pc {
            let lo = if c > l { c } else { l };
            let hi = if d < r { d } else { r };
            if lo <= hi {
                comps.push((lo.clone(), hi.clone()));
            }
        }
    }
    comps.sort();
    comps.dedup();
    from_components(&comps)
}
