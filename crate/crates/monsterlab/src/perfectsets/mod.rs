//! Cantor-type sets, the hat construction and the odometer embedding.

mod embed;
mod gapset;
mod prefix;
mod ternary;

pub use embed::{
    contraction_eligible, embed_h, frak_f, merge_reports, sweep_containment, sweep_contraction, sweep_injectivity,
    sweep_odometer, sweep_property_a, sweep_property_b, sweep_property_b_slow, verify_property_a, verify_property_b,
    Embedding, PropertyAReport, PropertyBReport, SweepReport,
};
pub use gapset::{cantor_ternary, gapset_from_strings, hat, GapSet, Generator};
pub use prefix::{adding_machine, code_index, code_n, BitPrefix};
pub use ternary::{signum_terms, Ternary};
