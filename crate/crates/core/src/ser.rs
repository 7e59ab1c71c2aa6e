//! Serde helpers for values that serialize through their `Display` form.

use std::fmt::Display;

use serde::Serializer;

pub fn display<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}
