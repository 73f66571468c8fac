//! JSON report emission with 17-significant-digit float formatting and
//! stable key order (struct declaration order).

use crate::error::{Error, Result};
use crate::util::fmt_g17;
use serde::Serialize;

struct G17Formatter;

impl serde_json::ser::Formatter for G17Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        writer.write_all(fmt_g17(value).as_bytes())
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        writer.write_all(fmt_g17(value as f64).as_bytes())
    }
}

pub fn to_json_g17<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, G17Formatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::ValidationError(format!("report serialization failed: {e}")))?;
    String::from_utf8(buf).map_err(|e| Error::ValidationError(e.to_string()))
}
