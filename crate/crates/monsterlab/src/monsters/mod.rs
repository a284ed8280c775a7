//! Explicit pathological functions as certified evaluators.

mod andy;
mod monster;
mod pompeiu;
mod takagi;
mod volterra;
mod weierstrass;

pub use andy::{andy_gamma, andy_oscillation, andy_phi, andy_psi, AndySpec};
pub use monster::{
    monster, monster_eval, monster_quotients, search_monster, signs_hold, AnchoredSide, MonsterSearch, MonsterSpec,
    WitnessCert,
};
pub use pompeiu::{
    diagonal_enumeration, g_prime_lower_on, g_prime_partial, pompeiu_g, pompeiu_g_prime_lower, pompeiu_h,
    pompeiu_h_ball, PompeiuSpec,
};
pub use takagi::{anchor_quotient, lattice_distance, sweep_takagi_anchor, takagi, TakagiSpec, TakagiValue};
pub use volterra::{
    discont_on_g, eta, eta_prime, phi, psi, volterra_h, volterra_h_ball, volterra_h_prime, volterra_on_set,
    volterra_zero, SeriesValue, VolterraOnSet,
};
pub use weierstrass::weierstrass_w;
