//! Report assembly and byte-stable JSON output.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::Value;
use sha2::{Digest, Sha256};

use realsim::Check;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
}

impl From<&Check> for Assertion {
    fn from(c: &Check) -> Self {
        Self {
            name: c.name.clone(),
            passed: c.passed,
            measured: c.measured,
            tolerance: c.tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub results: Value,
    pub assertions: Vec<Assertion>,
    pub version: String,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn to_json(&self) -> String {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedDigits::default());
        self.serialize(&mut ser).expect("reports serialize");
        out.push(b'\n');
        String::from_utf8(out).expect("JSON is UTF-8")
    }

    /// Plain-text summary for standard error.
    pub fn table(&self) -> String {
        let mut s = format!("{} ({})\n", self.command, self.version);
        for a in &self.assertions {
            let tag = if a.passed { "PASS" } else { "FAIL" };
            s.push_str(&format!(
                "  [{tag}] {:<50} measured {:>12.4e}  tolerance {:>10.3e}\n",
                a.name, a.measured, a.tolerance
            ));
        }
        s
    }
}

/// SHA-256 over the command, the options and each input file's bytes,
/// with length prefixes so that boundaries are unambiguous.
pub fn digest(command: &str, options: &[(&str, String)], inputs: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    let mut feed = |bytes: &[u8]| {
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    };
    feed(command.as_bytes());
    for (k, v) in options {
        feed(format!("{k}={v}").as_bytes());
    }
    for bytes in inputs {
        feed(bytes);
    }
    hex::encode(h.finalize())
}

/// Pretty-printed JSON whose floats carry 17 significant digits.
#[derive(Default)]
struct FixedDigits {
    inner: serde_json::ser::PrettyFormatter<'static>,
}

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn end_object_key<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object_key(writer)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn report(results: Value) -> Report {
        Report {
            command: "encode".into(),
            inputs_digest: digest("encode", &[], &[]),
            results,
            assertions: vec![],
            version: "test".into(),
        }
    }

    #[test]
    fn floats_round_trip_exactly() {
        let x = 0.1f64 + 0.2;
        let text = report(json!({ "x": x })).to_json();
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["results"]["x"].as_f64().unwrap(), x);
        assert!(text.contains("3.0000000000000004e-1"), "{text}");
    }

    #[test]
    fn integers_stay_integers() {
        let text = report(json!({ "n": 4 })).to_json();
        assert!(text.contains("\"n\": 4"));
    }

    #[test]
    fn digest_depends_on_every_part() {
        let a = digest("encode", &[("tol", "1e-10".into())], &[b"x"]);
        assert_ne!(a, digest("evolve", &[("tol", "1e-10".into())], &[b"x"]));
        assert_ne!(a, digest("encode", &[("tol", "1e-9".into())], &[b"x"]));
        assert_ne!(a, digest("encode", &[("tol", "1e-10".into())], &[b"y"]));
        assert_eq!(a.len(), 64);
    }
}
