use std::fmt::Display;

use serde::Serializer;

pub(crate) fn as_string<T: Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}
