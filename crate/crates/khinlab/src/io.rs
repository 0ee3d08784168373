//! File formats for the command line: tensor JSON files, report JSON
//! documents, RFC 4180 CSV sweeps, and run manifests.
//!
//! Every floating-point number is serialized with 17 significant digits,
//! which round-trips binary64 exactly. Parsing accepts anything
//! serde_json accepts; emission goes through a small writer that keeps
//! object key order stable so byte-level output comparison is meaningful.

use std::fs;
use std::path::Path;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::tensor::CoefficientTensor;
use crate::witness::WitnessReport;

/// 17-significant-digit decimal form of a finite f64; parses back to the
/// identical bit pattern.
pub fn format_f64(x: f64) -> String {
    debug_assert!(x.is_finite());
    format!("{x:.16e}")
}

/// A JSON value with ordered object keys.
#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    UInt(u64),
    Float(f64),
    Str(String),
    Array(Vec<Json>),
    Object(Vec<(String, Json)>),
}

impl Json {
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write(&self, out: &mut String) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(v) => out.push_str(&v.to_string()),
            Json::UInt(v) => out.push_str(&v.to_string()),
            Json::Float(v) => out.push_str(&format_f64(*v)),
            Json::Str(s) => write_escaped(s, out),
            Json::Array(items) => {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            Json::Object(pairs) => {
                out.push('{');
                for (k, (key, value)) in pairs.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    write_escaped(key, out);
                    out.push(':');
                    value.write(out);
                }
                out.push('}');
            }
        }
    }
}

fn write_escaped(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                out.push_str(&format!("\\u{:04x}", c as u32));
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

#[derive(Deserialize)]
struct TensorFile {
    shape: Vec<usize>,
    entries: Vec<f64>,
}

/// Parses a tensor from the JSON object {"shape": [...], "entries": [...]}
/// with row-major flattening. Any structural defect is a parse error.
pub fn parse_tensor(text: &str) -> Result<CoefficientTensor> {
    let file: TensorFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("tensor file: {e}")))?;
    CoefficientTensor::new(file.shape, file.entries)
        .map_err(|e| Error::Parse(format!("tensor file: {e}")))
}

pub fn read_tensor(path: &Path) -> Result<CoefficientTensor> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_tensor(&text)
}

pub fn tensor_to_json(t: &CoefficientTensor) -> Json {
    Json::Object(vec![
        (
            "shape".into(),
            Json::Array(t.shape().iter().map(|&n| Json::UInt(n as u64)).collect()),
        ),
        (
            "entries".into(),
            Json::Array(t.entries().iter().map(|&v| Json::Float(v)).collect()),
        ),
    ])
}

pub fn write_tensor(path: &Path, t: &CoefficientTensor) -> Result<()> {
    fs::write(path, tensor_to_json(t).render() + "\n")?;
    Ok(())
}

/// Hex SHA-256 of raw bytes, used to fingerprint input files.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// CSV sweep table with columns N,l2,moment,ratio,bound (RFC 4180, CRLF).
pub fn witness_csv(reports: &[WitnessReport]) -> Result<String> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    writer
        .write_record(["N", "l2", "moment", "ratio", "bound"])
        .map_err(|e| Error::Parse(format!("csv: {e}")))?;
    for rep in reports {
        writer
            .write_record([
                rep.n.to_string(),
                format_f64(rep.l2),
                format_f64(rep.moment),
                format_f64(rep.ratio),
                format_f64(rep.theoretical_bound),
            ])
            .map_err(|e| Error::Parse(format!("csv: {e}")))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Parse(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(format!("csv: {e}")))
}

/// Record of one CLI invocation; every file the run emitted is listed.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Vec<(String, String)>,
    pub bit_budget: u32,
    pub outputs: Vec<String>,
    pub wall_time_ms: u64,
}

impl RunManifest {
    pub fn to_json(&self) -> Json {
        Json::Object(vec![
            ("command".into(), Json::Str(self.command.clone())),
            (
                "parameters".into(),
                Json::Object(
                    self.parameters
                        .iter()
                        .map(|(k, v)| (k.clone(), Json::Str(v.clone())))
                        .collect(),
                ),
            ),
            ("bit_budget".into(), Json::UInt(self.bit_budget as u64)),
            (
                "outputs".into(),
                Json::Array(self.outputs.iter().map(|p| Json::Str(p.clone())).collect()),
            ),
            ("wall_time_ms".into(), Json::UInt(self.wall_time_ms)),
        ])
    }
}

#[cfg(test)]
// Oracle digits below are kept past f64 precision on purpose.
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        let samples = [
            0.0,
            -0.0,
            1.0,
            -2.5,
            0.1,
            1.0 / 3.0,
            std::f64::consts::PI,
            1e300,
            -1e-300,
            f64::MIN_POSITIVE,
            2.0f64.powi(-1074),
            1.8474163360763421,
        ];
        for &x in &samples {
            let s = format_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "round trip failed for {s}");
        }
    }

    #[test]
    fn json_rendering_and_escaping() {
        let doc = Json::Object(vec![
            ("a".into(), Json::UInt(3)),
            ("b".into(), Json::Array(vec![Json::Null, Json::Bool(true)])),
            ("text".into(), Json::Str("quote \" slash \\ tab\t".into())),
            ("x".into(), Json::Float(0.5)),
            ("neg".into(), Json::Int(-7)),
        ]);
        let rendered = doc.render();
        let parsed: serde_json::Value = serde_json::from_str(&rendered).unwrap();
        assert_eq!(parsed["a"], 3);
        assert_eq!(parsed["b"][0], serde_json::Value::Null);
        assert_eq!(parsed["text"], "quote \" slash \\ tab\t");
        assert_eq!(parsed["x"], 0.5);
        assert_eq!(parsed["neg"], -7);
    }

    #[test]
    fn tensor_parse_accepts_valid_and_rejects_invalid() {
        let t = parse_tensor(r#"{"shape":[2,2],"entries":[1.0,2.0,3.0,4.0]}"#).unwrap();
        assert_eq!(t.shape(), &[2, 2]);
        assert_eq!(t.entries(), &[1.0, 2.0, 3.0, 4.0]);
        assert!(parse_tensor("not json").is_err());
        assert!(parse_tensor(r#"{"shape":[2],"entries":[1.0]}"#).is_err());
        assert!(parse_tensor(r#"{"shape":[2,2]}"#).is_err());
        assert!(parse_tensor(r#"{"shape":[],"entries":[]}"#).is_err());
        let e = parse_tensor(r#"{"shape":[1],"entries":[1e999]}"#);
        assert!(matches!(e, Err(Error::Parse(_))));
    }

    #[test]
    fn tensor_json_round_trips() {
        let t = CoefficientTensor::new(vec![2, 3], vec![0.1, -0.2, 0.3, 1.0 / 3.0, 5.0, -6.25])
            .unwrap();
        let text = tensor_to_json(&t).render();
        let back = parse_tensor(&text).unwrap();
        assert_eq!(back.shape(), t.shape());
        for (a, b) in back.entries().iter().zip(t.entries()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn sha256_known_vector() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn csv_is_crlf_terminated_with_header() {
        use crate::witness::{WitnessKind, WitnessReport};
        let rep = WitnessReport {
            m: 2,
            r: 1.0,
            n: 4,
            l2: 2.0,
            moment: 1.0,
            ratio: 2.0,
            theoretical_bound: 2.0,
            kind: WitnessKind::BlockOnes,
        };
        let text = witness_csv(&[rep]).unwrap();
        let mut lines = text.split("\r\n");
        assert_eq!(lines.next().unwrap(), "N,l2,moment,ratio,bound");
        let row = lines.next().unwrap();
        assert!(row.starts_with("4,"));
        assert_eq!(lines.next().unwrap(), "");
        let empty = witness_csv(&[]).unwrap();
        assert_eq!(empty, "N,l2,moment,ratio,bound\r\n");
    }

    #[test]
    fn manifest_is_valid_json() {
        let manifest = RunManifest {
            command: "witness".into(),
            parameters: vec![("m".into(), "2".into()), ("r".into(), "1".into())],
            bit_budget: 26,
            outputs: vec!["witness.json".into(), "witness.csv".into()],
            wall_time_ms: 12,
        };
        let parsed: serde_json::Value =
            serde_json::from_str(&manifest.to_json().render()).unwrap();
        assert_eq!(parsed["command"], "witness");
        assert_eq!(parsed["parameters"]["m"], "2");
        assert_eq!(parsed["bit_budget"], 26);
        assert_eq!(parsed["outputs"].as_array().unwrap().len(), 2);
    }
}
