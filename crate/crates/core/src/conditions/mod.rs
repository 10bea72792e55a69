//! Structural conditions on markets and economies. All checks are ordinal.

pub mod augmented;
pub mod cycles;
pub mod spc;

pub use augmented::{validate_augmented, AugmentationReport};
pub use cycles::{find_preference_cycles, has_preference_cycle, PreferenceCycle};
pub use spc::{
    check_assortative, check_spc, check_spc_bounded, check_spc_economy, check_spc_star,
    spc_ordering, top_top_pairs, SpcOrdering, SpcStarReport,
};
