use std::collections::BTreeMap;

use num_rational::BigRational;
use reebcone_core::{ErrorClass, Scalar};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_MATH_DOMAIN: i32 = 3;
pub const EXIT_NON_CONVERGENCE: i32 = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    pub spec: String,
    /// Flags as given on the command line, by long name.
    pub flags: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub library: String,
    pub version: String,
    /// `exact-rational` or `binary64`.
    pub arithmetic: String,
    pub requested_precision_bits: u32,
    pub working_precision_bits: Option<u32>,
    pub tolerance: f64,
    pub max_order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub name: String,
    pub message: String,
    pub exit_code: i32,
}

/// One machine-readable result document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: CommandEcho,
    /// SHA-256 of the spec file bytes.
    pub input_hash: String,
    pub results: Option<Value>,
    pub provenance: Provenance,
    pub warnings: Vec<String>,
    pub error: Option<ErrorInfo>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.error.as_ref().map_or(EXIT_OK, |e| e.exit_code)
    }

    /// Pretty JSON with a trailing newline. Object keys inside `results` are
    /// sorted, so equal reports serialize to equal bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }
}

pub fn input_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn exit_code_for(class: ErrorClass) -> i32 {
    match class {
        ErrorClass::Input => EXIT_INPUT,
        ErrorClass::MathDomain => EXIT_MATH_DOMAIN,
        ErrorClass::NonConvergence => EXIT_NON_CONVERGENCE,
    }
}

/// Exact values as `"p/q"` strings, binary64 values as JSON numbers.
pub fn num<S: Scalar>(x: &S) -> Value {
    match x.to_ratio() {
        Some(r) => rational(&r),
        None => float(x.to_f64()),
    }
}

pub fn nums<S: Scalar>(xs: &[S]) -> Value {
    Value::Array(xs.iter().map(num).collect())
}

pub fn rational(r: &BigRational) -> Value {
    Value::String(r.to_string())
}

pub fn rationals(rs: &[BigRational]) -> Value {
    Value::Array(rs.iter().map(rational).collect())
}

/// Non-finite values have no JSON number form and are written as strings.
pub fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(format!("{x}")))
}

pub fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| float(x)).collect())
}

pub fn int_vectors(vs: &[Vec<i64>]) -> Value {
    Value::Array(
        vs.iter()
            .map(|v| Value::Array(v.iter().map(|&x| Value::from(x)).collect()))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn rationals_are_strings() {
        let r = BigRational::new(BigInt::from(-6), BigInt::from(4));
        assert_eq!(num(&r), Value::String("-3/2".into()));
        assert_eq!(
            num(&BigRational::from_integer(BigInt::from(1))),
            Value::String("1".into())
        );
        assert_eq!(num(&0.25f64), serde_json::json!(0.25));
        assert_eq!(float(f64::NAN), Value::String("NaN".into()));
    }

    #[test]
    fn hash_is_sha256_hex() {
        assert_eq!(
            input_hash(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
