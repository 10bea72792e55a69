//! C ABI for matchlab.
//!
//! Objects are opaque handles created by `matchlab_*` constructors and
//! released with the matching `_free` function. Every function returns a
//! [`MatchlabStatus`]; on failure, [`matchlab_last_error`] describes the
//! problem until the next call on the same thread. Strings returned through
//! `char **` out-parameters are owned by the caller and released with
//! [`matchlab_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use matchlab::constructions::{self, ConstructionBundle};
use matchlab::economy::Economy;
use matchlab::game::{self, EnumerateOptions, StrategyClass, StrategyProfile};
use matchlab::io::{self, EnumerationView};
use matchlab::{Error, WorkerId};

/// Written by [`matchlab_play`] for an unmatched worker.
pub const MATCHLAB_UNMATCHED: usize = usize::MAX;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchlabStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed input, failed validation or an out-of-range argument.
    Invalid = 3,
    /// A construction's own consistency checks failed.
    Construction = 4,
    /// An enumeration would exceed its profile budget.
    BudgetExceeded = 5,
    /// A caller-provided buffer is too small.
    BufferTooSmall = 6,
    /// An internal panic was caught at the boundary.
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchlabClass {
    Truthful = 0,
    Truncation = 1,
    Dropping = 2,
    Full = 3,
}

impl From<MatchlabClass> for StrategyClass {
    fn from(c: MatchlabClass) -> Self {
        match c {
            MatchlabClass::Truthful => StrategyClass::Truthful,
            MatchlabClass::Truncation => StrategyClass::Truncation,
            MatchlabClass::Dropping => StrategyClass::Dropping,
            MatchlabClass::Full => StrategyClass::Full,
        }
    }
}

/// An economy: agents, states, beliefs and utilities.
pub struct MatchlabEconomy(Economy);

/// One report per worker.
pub struct MatchlabProfile(StrategyProfile);

/// A generated economy with its named profiles and expectations.
pub struct MatchlabBundle(ConstructionBundle);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: MatchlabStatus, message: impl Into<String>) -> MatchlabStatus {
    set_error(message.into());
    status
}

fn from_error(err: Error) -> MatchlabStatus {
    let status = match err {
        Error::Construction(_) => MatchlabStatus::Construction,
        Error::BudgetExceeded { .. } => MatchlabStatus::BudgetExceeded,
        _ => MatchlabStatus::Invalid,
    };
    fail(status, err.to_string())
}

type Outcome<T> = Result<T, MatchlabStatus>;

/// Runs `body`, converting errors and panics into a status.
fn guard(body: impl FnOnce() -> Outcome<()>) -> MatchlabStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::default());
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => MatchlabStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(MatchlabStatus::Panic, format!("internal panic: {message}"))
        }
    }
}

fn lib<T>(r: matchlab::Result<T>) -> Outcome<T> {
    r.map_err(from_error)
}

unsafe fn get<'a, T>(p: *const T, name: &str) -> Outcome<&'a T> {
    p.as_ref()
        .ok_or_else(|| fail(MatchlabStatus::NullArgument, format!("`{name}` is null")))
}

unsafe fn out<'a, T>(p: *mut T, name: &str) -> Outcome<&'a mut T> {
    p.as_mut()
        .ok_or_else(|| fail(MatchlabStatus::NullArgument, format!("`{name}` is null")))
}

unsafe fn text<'a>(p: *const c_char, name: &str) -> Outcome<&'a str> {
    if p.is_null() {
        return Err(fail(MatchlabStatus::NullArgument, format!("`{name}` is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(MatchlabStatus::InvalidUtf8, format!("`{name}` is not UTF-8")))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("interior nuls removed").into_raw()
}

/// Message for the last failed call on this thread; empty after success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn matchlab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn matchlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an economy file.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matchlab_economy_from_json(
    json: *const c_char,
    out_economy: *mut *mut MatchlabEconomy,
) -> MatchlabStatus {
    guard(|| {
        let slot = out(out_economy, "out_economy")?;
        let economy = lib(io::economy_from_json(text(json, "json")?))?;
        *slot = Box::into_raw(Box::new(MatchlabEconomy(economy)));
        Ok(())
    })
}

/// # Safety
/// `economy` must be a live handle; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matchlab_economy_to_json(
    economy: *const MatchlabEconomy,
    out_json: *mut *mut c_char,
) -> MatchlabStatus {
    guard(|| {
        let e = get(economy, "economy")?;
        *out(out_json, "out_json")? = c_string(io::economy_to_json(&e.0));
        Ok(())
    })
}

/// # Safety
/// Any out-pointer may be null; non-null ones must be writable.
#[no_mangle]
pub unsafe extern "C" fn matchlab_economy_dimensions(
    economy: *const MatchlabEconomy,
    out_firms: *mut usize,
    out_workers: *mut usize,
    out_states: *mut usize,
) -> MatchlabStatus {
    guard(|| {
        let e = &get(economy, "economy")?.0;
        for (p, v) in [
            (out_firms, e.num_firms()),
            (out_workers, e.num_workers()),
            (out_states, e.num_states()),
        ] {
            if let Some(p) = p.as_mut() {
                *p = v;
            }
        }
        Ok(())
    })
}

/// # Safety
/// `economy` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn matchlab_economy_free(economy: *mut MatchlabEconomy) {
    if !economy.is_null() {
        drop(Box::from_raw(economy));
    }
}

/// # Safety
/// `economy` and `json` must be valid; `out_profile` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matchlab_profile_from_json(
    economy: *const MatchlabEconomy,
    json: *const c_char,
    out_profile: *mut *mut MatchlabProfile,
) -> MatchlabStatus {
    guard(|| {
        let e = get(economy, "economy")?;
        let slot = out(out_profile, "out_profile")?;
        let profile = lib(io::profile_from_json(&e.0, text(json, "json")?))?;
        *slot = Box::into_raw(Box::new(MatchlabProfile(profile)));
        Ok(())
    })
}

/// Every worker reports its true list.
///
/// # Safety
/// `economy` must be a live handle; `out_profile` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matchlab_profile_truthful(
    economy: *const MatchlabEconomy,
    out_profile: *mut *mut MatchlabProfile,
) -> MatchlabStatus {
    guard(|| {
        let e = get(economy, "economy")?;
        *out(out_profile, "out_profile")? =
            Box::into_raw(Box::new(MatchlabProfile(StrategyProfile::truthful(&e.0))));
        Ok(())
    })
}

fn check_profile(e: &Economy, p: &StrategyProfile) -> Outcome<()> {
    if p.num_workers() != e.num_workers() || p.reports().iter().flatten().any(|f| f.0 >= e.num_firms()) {
        return Err(fail(
            MatchlabStatus::Invalid,
            "profile does not belong to this economy",
        ));
    }
    Ok(())
}

/// # Safety
/// Handles must be live; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matchlab_profile_to_json(
    economy: *const MatchlabEconomy,
    profile: *const MatchlabProfile,
    out_json: *mut *mut c_char,
) -> MatchlabStatus {
    guard(|| {
        let e = &get(economy, "economy")?.0;
        let p = &get(profile, "profile")?.0;
        check_profile(e, p)?;
        *out(out_json, "out_json")? = c_string(io::profile_to_json(e, p));
        Ok(())
    })
}

/// # Safety
/// `profile` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn matchlab_profile_free(profile: *mut MatchlabProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

/// Runs firm-proposing DA in every state. Writes `states x workers` firm
/// indices (state-major, zero-based) to `out_partners`, with
/// `MATCHLAB_UNMATCHED` for unmatched workers.
///
/// # Safety
/// Handles must be live; `out_partners` must hold `len` elements.
#[no_mangle]
pub unsafe extern "C" fn matchlab_play(
    economy: *const MatchlabEconomy,
    profile: *const MatchlabProfile,
    out_partners: *mut usize,
    len: usize,
) -> MatchlabStatus {
    guard(|| {
        let e = &get(economy, "economy")?.0;
        let p = &get(profile, "profile")?.0;
        check_profile(e, p)?;
        if out_partners.is_null() {
            return Err(fail(MatchlabStatus::NullArgument, "`out_partners` is null"));
        }
        let needed = e.num_states() * e.num_workers();
        if len < needed {
            return Err(fail(
                MatchlabStatus::BufferTooSmall,
                format!("need {needed} entries, got {len}"),
            ));
        }
        let outcome = game::play(e, p);
        let buf = std::slice::from_raw_parts_mut(out_partners, needed);
        for (t, m) in outcome.matchings().iter().enumerate() {
            for j in 0..e.num_workers() {
                buf[t * e.num_workers() + j] = m.worker_partner(WorkerId(j)).map_or(MATCHLAB_UNMATCHED, |f| f.0);
            }
        }
        Ok(())
    })
}

/// Expected utility of `worker` as an exact fraction.
///
/// # Safety
/// Handles must be live; out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn matchlab_expected_utility(
    economy: *const MatchlabEconomy,
    profile: *const MatchlabProfile,
    worker: usize,
    out_numerator: *mut i64,
    out_denominator: *mut i64,
) -> MatchlabStatus {
    guard(|| {
        let e = &get(economy, "economy")?.0;
        let p = &get(profile, "profile")?.0;
        check_profile(e, p)?;
        if worker >= e.num_workers() {
            return Err(fail(MatchlabStatus::Invalid, format!("worker {worker} out of range")));
        }
        let (num, den) = (out(out_numerator, "out_numerator")?, out(out_denominator, "out_denominator")?);
        let eu = game::expected_utility(e, p, WorkerId(worker));
        *num = *eu.numer();
        *den = *eu.denom();
        Ok(())
    })
}

/// Whether no worker gains by deviating within `class`.
///
/// # Safety
/// Handles must be live; `out_is_bne` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matchlab_is_bne(
    economy: *const MatchlabEconomy,
    profile: *const MatchlabProfile,
    class: MatchlabClass,
    out_is_bne: *mut bool,
) -> MatchlabStatus {
    guard(|| {
        let e = &get(economy, "economy")?.0;
        let p = &get(profile, "profile")?.0;
        check_profile(e, p)?;
        *out(out_is_bne, "out_is_bne")? = game::is_bne(e, p, class.into()).is_bne;
        Ok(())
    })
}

/// Enumerates equilibria of `class` and writes the grouped result as JSON.
/// A `budget` of 0 selects the default.
///
/// # Safety
/// `economy` must be live; out-pointers must be writable (`out_groups` may
/// be null).
#[no_mangle]
pub unsafe extern "C" fn matchlab_enumerate_bne(
    economy: *const MatchlabEconomy,
    class: MatchlabClass,
    undominated_only: bool,
    budget: u64,
    out_groups: *mut usize,
    out_json: *mut *mut c_char,
) -> MatchlabStatus {
    guard(|| {
        let e = &get(economy, "economy")?.0;
        let slot = out(out_json, "out_json")?;
        let mut options = EnumerateOptions::new(class.into()).undominated_only(undominated_only);
        if budget > 0 {
            options = options.budget(budget as u128);
        }
        let result = lib(game::enumerate_bne_with(e, &options))?;
        if let Some(g) = out_groups.as_mut() {
            *g = result.groups.len();
        }
        *slot = c_string(EnumerationView::new(e, class.into(), undominated_only, &result).to_json());
        Ok(())
    })
}

/// Whether the economy satisfies SPC*.
///
/// # Safety
/// `economy` must be live; `out_holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matchlab_check_spc_star(
    economy: *const MatchlabEconomy,
    out_holds: *mut bool,
) -> MatchlabStatus {
    guard(|| {
        let e = &get(economy, "economy")?.0;
        *out(out_holds, "out_holds")? = matchlab::conditions::check_spc_star(e).holds;
        Ok(())
    })
}

fn bundle_out(slot: *mut *mut MatchlabBundle, make: impl FnOnce() -> matchlab::Result<ConstructionBundle>) -> MatchlabStatus {
    guard(|| {
        let slot = unsafe { out(slot, "out_bundle")? };
        *slot = Box::into_raw(Box::new(MatchlabBundle(lib(make())?)));
        Ok(())
    })
}

/// # Safety
/// `out_bundle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matchlab_bundle_motivating(out_bundle: *mut *mut MatchlabBundle) -> MatchlabStatus {
    bundle_out(out_bundle, || Ok(constructions::motivating_example()))
}

/// # Safety
/// `out_bundle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matchlab_bundle_example2(n: usize, out_bundle: *mut *mut MatchlabBundle) -> MatchlabStatus {
    bundle_out(out_bundle, || constructions::example2(n))
}

/// # Safety
/// `out_bundle` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matchlab_bundle_prop4(
    n: usize,
    k: usize,
    out_bundle: *mut *mut MatchlabBundle,
) -> MatchlabStatus {
    bundle_out(out_bundle, || constructions::prop4(n, k))
}

/// A new economy handle copied from the bundle.
///
/// # Safety
/// `bundle` must be live; `out_economy` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matchlab_bundle_economy(
    bundle: *const MatchlabBundle,
    out_economy: *mut *mut MatchlabEconomy,
) -> MatchlabStatus {
    guard(|| {
        let b = get(bundle, "bundle")?;
        *out(out_economy, "out_economy")? = Box::into_raw(Box::new(MatchlabEconomy(b.0.economy.clone())));
        Ok(())
    })
}

/// A new profile handle for the bundle's profile called `name`.
///
/// # Safety
/// `bundle` and `name` must be valid; `out_profile` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matchlab_bundle_profile(
    bundle: *const MatchlabBundle,
    name: *const c_char,
    out_profile: *mut *mut MatchlabProfile,
) -> MatchlabStatus {
    guard(|| {
        let b = get(bundle, "bundle")?;
        let name = text(name, "name")?;
        let slot = out(out_profile, "out_profile")?;
        let p = b
            .0
            .profile(name)
            .ok_or_else(|| fail(MatchlabStatus::Invalid, format!("no profile named `{name}`")))?;
        *slot = Box::into_raw(Box::new(MatchlabProfile(p.profile.clone())));
        Ok(())
    })
}

/// The bundle's expectations manifest, with profile `p` named
/// `profile-p.json`.
///
/// # Safety
/// `bundle` must be live; `out_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn matchlab_bundle_manifest(
    bundle: *const MatchlabBundle,
    out_json: *mut *mut c_char,
) -> MatchlabStatus {
    guard(|| {
        let b = get(bundle, "bundle")?;
        let slot = out(out_json, "out_json")?;
        let original = b.0.original.as_ref().map(|_| "original.json");
        let m = lib(io::manifest(&b.0, "economy.json", original, |p| format!("profile-{p}.json")))?;
        *slot = c_string(m.to_json());
        Ok(())
    })
}

/// # Safety
/// `bundle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn matchlab_bundle_free(bundle: *mut MatchlabBundle) {
    if !bundle.is_null() {
        drop(Box::from_raw(bundle));
    }
}
