//! Cone spec files.
//!
//! A spec is a JSON object:
//!
//! ```json
//! {
//!   "name": "conifold",
//!   "dim": 3,
//!   "rays": [[1,0,0],[1,1,0],[1,1,1],[1,0,1]],
//!   "xi": ["1", "1/2", "1/2"],
//!   "eta": [0, 1, 0],
//!   "comment": "free text, ignored"
//! }
//! ```
//!
//! Vector entries may be integers, `[num, den]` pairs, `"p/q"` strings or
//! decimal strings (all exact), or JSON floats (which switch the run to
//! binary64 arithmetic).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{Map, Value};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("schema error at {location}: {message}")]
    SchemaError { location: String, message: String },

    #[error("dimension mismatch at {field}: expected length {expected}, found {found}")]
    DimensionMismatch {
        field: String,
        expected: usize,
        found: usize,
    },

    #[error("ray entry {field} is not an integer")]
    NonIntegerRay { field: String },
}

impl SpecError {
    pub fn kind(&self) -> &'static str {
        match self {
            SpecError::SchemaError { .. } => "SchemaError",
            SpecError::DimensionMismatch { .. } => "DimensionMismatch",
            SpecError::NonIntegerRay { .. } => "NonIntegerRay",
        }
    }

    fn schema(location: impl Into<String>, message: impl Into<String>) -> Self {
        SpecError::SchemaError {
            location: location.into(),
            message: message.into(),
        }
    }
}

/// A coordinate as written in the input.
#[derive(Debug, Clone, PartialEq)]
pub enum Number {
    Exact(BigRational),
    Real(f64),
}

impl Number {
    pub fn is_exact(&self) -> bool {
        matches!(self, Number::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(r) => reebcone_core::scalar::ratio_to_f64(r),
            Number::Real(x) => *x,
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(r) => write!(f, "{r}"),
            Number::Real(x) => write!(f, "{x:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeSpec {
    pub name: String,
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    pub xi: Option<Vec<Number>>,
    pub eta: Option<Vec<Number>>,
    pub boundary_coeffs: Option<Vec<BigRational>>,
}

const KNOWN_FIELDS: [&str; 8] = [
    "name",
    "dim",
    "rays",
    "xi",
    "eta",
    "boundary_coeffs",
    "comment",
    "source",
];

pub fn parse_cone_spec(text: &str) -> Result<ConeSpec, SpecError> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        SpecError::schema(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    let obj = value
        .as_object()
        .ok_or_else(|| SpecError::schema("top level", "expected a JSON object"))?;
    for key in obj.keys() {
        if !KNOWN_FIELDS.contains(&key.as_str()) {
            return Err(SpecError::schema(key.clone(), "unknown field"));
        }
    }
    for key in ["comment", "source"] {
        if let Some(v) = obj.get(key) {
            if !v.is_string() {
                return Err(SpecError::schema(key, "expected a string"));
            }
        }
    }

    let name = match obj.get("name") {
        None => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(SpecError::schema("name", "expected a string")),
    };
    let dim = obj
        .get("dim")
        .ok_or_else(|| SpecError::schema("dim", "missing required field"))?
        .as_u64()
        .filter(|&d| d >= 1)
        .ok_or_else(|| SpecError::schema("dim", "expected a positive integer"))?
        as usize;
    let rays = parse_rays(obj, dim)?;
    let xi = optional_vector(obj, "xi", dim)?;
    let eta = optional_vector(obj, "eta", dim)?;
    let boundary_coeffs = match obj.get("boundary_coeffs") {
        None => None,
        Some(v) => {
            let items = parse_vector(v, "boundary_coeffs")?;
            if items.len() != rays.len() {
                return Err(SpecError::DimensionMismatch {
                    field: "boundary_coeffs".into(),
                    expected: rays.len(),
                    found: items.len(),
                });
            }
            let exact = items
                .into_iter()
                .enumerate()
                .map(|(i, x)| match x {
                    Number::Exact(r) => Ok(r),
                    Number::Real(_) => Err(SpecError::schema(
                        format!("boundary_coeffs[{i}]"),
                        "boundary coefficients must be exact rationals",
                    )),
                })
                .collect::<Result<_, _>>()?;
            Some(exact)
        }
    };

    Ok(ConeSpec {
        name,
        dim,
        rays,
        xi,
        eta,
        boundary_coeffs,
    })
}

fn parse_rays(obj: &Map<String, Value>, dim: usize) -> Result<Vec<Vec<i64>>, SpecError> {
    let list = obj
        .get("rays")
        .ok_or_else(|| SpecError::schema("rays", "missing required field"))?
        .as_array()
        .ok_or_else(|| SpecError::schema("rays", "expected an array of integer vectors"))?;
    if list.is_empty() {
        return Err(SpecError::schema("rays", "at least one ray is required"));
    }
    list.iter()
        .enumerate()
        .map(|(i, ray)| {
            let entries = ray
                .as_array()
                .ok_or_else(|| SpecError::schema(format!("rays[{i}]"), "expected an array"))?;
            if entries.len() != dim {
                return Err(SpecError::DimensionMismatch {
                    field: format!("rays[{i}]"),
                    expected: dim,
                    found: entries.len(),
                });
            }
            entries
                .iter()
                .enumerate()
                .map(|(k, x)| {
                    x.as_i64().ok_or_else(|| SpecError::NonIntegerRay {
                        field: format!("rays[{i}][{k}]"),
                    })
                })
                .collect()
        })
        .collect()
}

fn optional_vector(
    obj: &Map<String, Value>,
    field: &str,
    dim: usize,
) -> Result<Option<Vec<Number>>, SpecError> {
    let Some(v) = obj.get(field) else {
        return Ok(None);
    };
    let items = parse_vector(v, field)?;
    if items.len() != dim {
        return Err(SpecError::DimensionMismatch {
            field: field.into(),
            expected: dim,
            found: items.len(),
        });
    }
    Ok(Some(items))
}

fn parse_vector(v: &Value, field: &str) -> Result<Vec<Number>, SpecError> {
    let items = v
        .as_array()
        .ok_or_else(|| SpecError::schema(field, "expected an array"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| parse_number(x).map_err(|m| SpecError::schema(format!("{field}[{i}]"), m)))
        .collect()
}

fn parse_number(v: &Value) -> Result<Number, String> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Number::Exact(BigRational::from_integer(BigInt::from(i))))
            } else if let Some(u) = n.as_u64() {
                Ok(Number::Exact(BigRational::from_integer(BigInt::from(u))))
            } else {
                let x = n.as_f64().ok_or("number out of range")?;
                Ok(Number::Real(x))
            }
        }
        Value::String(s) => parse_token(s, false),
        Value::Array(pair) if pair.len() == 2 => {
            let num = pair[0].as_i64().ok_or("numerator must be an integer")?;
            let den = pair[1].as_i64().ok_or("denominator must be an integer")?;
            if den == 0 {
                return Err("zero denominator".into());
            }
            Ok(Number::Exact(BigRational::new(num.into(), den.into())))
        }
        _ => Err("expected a number, a [num, den] pair or a rational string".into()),
    }
}

/// Parses `"p"`, `"p/q"` or a decimal literal such as `"-0.125"` or
/// `"1e-3"`. Decimals are read exactly unless `real` is set.
pub fn parse_token(s: &str, real: bool) -> Result<Number, String> {
    let s = s.trim();
    if real {
        if let Some((p, q)) = s.split_once('/') {
            let r = parse_fraction(p, q)?;
            return Ok(Number::Real(reebcone_core::scalar::ratio_to_f64(&r)));
        }
        return s
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(Number::Real)
            .ok_or_else(|| format!("cannot parse {s:?} as a number"));
    }
    if let Some((p, q)) = s.split_once('/') {
        return parse_fraction(p, q).map(Number::Exact);
    }
    parse_decimal(s).map(Number::Exact)
}

fn parse_fraction(p: &str, q: &str) -> Result<BigRational, String> {
    let p: BigInt = p
        .trim()
        .parse()
        .map_err(|_| format!("bad numerator {p:?}"))?;
    let q: BigInt = q
        .trim()
        .parse()
        .map_err(|_| format!("bad denominator {q:?}"))?;
    if q.is_zero() {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(p, q))
}

fn parse_decimal(s: &str) -> Result<BigRational, String> {
    let err = || format!("cannot parse {s:?} as a rational number");
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part
            .chars()
            .chain(frac_part.chars())
            .all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    if exponent.unsigned_abs() > 4096 {
        return Err(err());
    }
    let all: BigInt = format!("0{int_part}{frac_part}")
        .parse()
        .map_err(|_| err())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(all);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, scale.unsigned_abs() as usize));
    }
    Ok(if neg && !r.is_negative() { -r } else { r })
}
