//! Compact JSON with every float written to 17 significant digits.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;

pub const SCHEMA_VERSION: u32 = 1;

/// Compact output, floats as `{:.16e}`. Non-finite floats never reach it:
/// `serde_json` writes them as `null`.
struct FixedDigits;

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_string<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedDigits);
    value
        .serialize(&mut ser)
        .expect("report types serialize infallibly");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// A report document: `schema_version`, `kind`, then the payload fields.
#[derive(Serialize)]
pub struct Document<T: Serialize> {
    pub schema_version: u32,
    pub kind: &'static str,
    #[serde(flatten)]
    pub body: T,
}

pub fn document<T: Serialize>(kind: &'static str, body: T) -> String {
    to_string(&Document {
        schema_version: SCHEMA_VERSION,
        kind,
        body,
    })
}
