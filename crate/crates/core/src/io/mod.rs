//! File formats (economy, profile, manifest) and JSON views of results.
//!
//! Files are JSON with a fixed key order. Utilities are written as JSON
//! integers when integral and as `"p/q"` strings otherwise; probabilities are
//! always `"p/q"` strings (`"1"` for one). Matrices have one row per firm and
//! one column per worker.

mod format;
pub mod views;

pub use format::{
    economy_from_json, economy_to_json, load_economy, load_profile, profile_from_json, profile_to_json,
    save_economy, save_profile, EconomyFile, ProfileEntry, ProfileFile, StateFile, FORMAT_VERSION,
};
pub use format::{rational_from_str, Number, Probability};
pub use views::{manifest, outcome_json, EnumerationView, Manifest, StateOutcome};
