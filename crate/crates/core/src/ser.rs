//! Serialization helpers shared by report types.

use serde::Serializer;

/// Non-finite values become `null`.
pub(crate) fn finite_or_null<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_some(x)
    } else {
        s.serialize_none()
    }
}

/// Internal 0-based indices are reported 1-based.
pub(crate) fn one_based<S: Serializer>(j: &usize, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u64(*j as u64 + 1)
}
