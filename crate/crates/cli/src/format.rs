//! The spec file format: a JSON document with fixed field names; unknown
//! fields are rejected.
//!
//! ```json
//! {
//!   "type": "T0",
//!   "pieces": [[3, 1], [1, 2]],
//!   "tail": 0,
//!   "residues": {"2": "1"},
//!   "extras": {},
//!   "depth": 32
//! }
//! ```
//!
//! `extras` depends on the type: `T1` takes `{"repeat": [[...], ...]}`
//! (piece templates cycling forever), `T2` takes `{"period": [...]}`
//! (the segment continuation of the last piece), `T4_1` takes
//! `{"exponents": [...]}`, `T4_2` takes `{"n": <integer>}`; `T0` and `T3`
//! take none. Residue values are rational strings keyed by the index of the
//! piece the z-blowup enters.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use valgraph_core::spec::{TypeExtras, ValuationSpec, ValuationType};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    #[serde(rename = "type")]
    pub type_tag: String,
    pub pieces: Vec<Vec<u64>>,
    #[serde(default)]
    pub tail: u64,
    #[serde(default)]
    pub residues: BTreeMap<String, String>,
    #[serde(default)]
    pub extras: ExtrasFile,
    #[serde(default)]
    pub depth: Option<usize>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtrasFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repeat: Option<Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
}

#[derive(Debug)]
pub struct FormatError {
    pub message: String,
}

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for FormatError {}

fn err(message: impl Into<String>) -> FormatError {
    FormatError {
        message: message.into(),
    }
}

pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => {
            let n: BigInt = text.parse().ok()?;
            Some(BigRational::from(n))
        }
    }
}

impl SpecFile {
    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        serde_json::from_str(text).map_err(|e| err(format!("bad spec file: {e}")))
    }

    /// Build and validate the engine spec.
    pub fn to_spec(&self) -> Result<ValuationSpec, FormatError> {
        let type_tag = match self.type_tag.as_str() {
            "T0" => ValuationType::T0,
            "T1" => ValuationType::T1,
            "T2" => ValuationType::T2,
            "T3" => ValuationType::T3,
            "T4_1" => ValuationType::T4_1,
            "T4_2" => ValuationType::T4_2,
            other => {
                return Err(err(format!(
                    "unknown type '{other}': expected T0, T1, T2, T3, T4_1 or T4_2"
                )))
            }
        };
        let extras = self.extras_for(type_tag)?;
        let mut residues = BTreeMap::new();
        for (key, value) in &self.residues {
            let index: u32 = key
                .parse()
                .map_err(|_| err(format!("residue key '{key}' is not a piece index")))?;
            let value = parse_rational(value)
                .ok_or_else(|| err(format!("residue '{value}' is not a rational")))?;
            residues.insert(index, value);
        }
        let spec = ValuationSpec {
            type_tag,
            pieces: self.pieces.clone(),
            tail: self.tail,
            residues,
            extras,
            depth: self.depth.unwrap_or(32),
        };
        if let Err(violations) = spec.validate() {
            let mut message = String::from("spec validation failed:");
            for v in violations {
                message.push_str("\n  - ");
                message.push_str(&v.message);
            }
            return Err(err(message));
        }
        Ok(spec)
    }

    fn extras_for(&self, type_tag: ValuationType) -> Result<TypeExtras, FormatError> {
        let ExtrasFile {
            repeat,
            period,
            exponents,
            n,
        } = self.extras.clone();
        let reject = |field: &str, tag: ValuationType| {
            Err(err(format!(
                "extras field '{field}' does not apply to type {tag}"
            )))
        };
        match type_tag {
            ValuationType::T0 | ValuationType::T3 => {
                if repeat.is_some() {
                    return reject("repeat", type_tag);
                }
                if period.is_some() {
                    return reject("period", type_tag);
                }
                if exponents.is_some() {
                    return reject("exponents", type_tag);
                }
                if n.is_some() {
                    return reject("n", type_tag);
                }
                Ok(TypeExtras::None)
            }
            ValuationType::T1 => {
                if period.is_some() || exponents.is_some() || n.is_some() {
                    return Err(err("type T1 takes only the 'repeat' extras field"));
                }
                let repeat = repeat.ok_or_else(|| err("type T1 requires extras.repeat"))?;
                Ok(TypeExtras::RepeatPieces { repeat })
            }
            ValuationType::T2 => {
                if repeat.is_some() || exponents.is_some() || n.is_some() {
                    return Err(err("type T2 takes only the 'period' extras field"));
                }
                let period = period.ok_or_else(|| err("type T2 requires extras.period"))?;
                Ok(TypeExtras::PeriodicSegments { period })
            }
            ValuationType::T4_1 => {
                if repeat.is_some() || period.is_some() || n.is_some() {
                    return Err(err("type T4_1 takes only the 'exponents' extras field"));
                }
                let exponents =
                    exponents.ok_or_else(|| err("type T4_1 requires extras.exponents"))?;
                Ok(TypeExtras::Exponents { exponents })
            }
            ValuationType::T4_2 => {
                if repeat.is_some() || period.is_some() || exponents.is_some() {
                    return Err(err("type T4_2 takes only the 'n' extras field"));
                }
                let n = n.ok_or_else(|| err("type T4_2 requires extras.n"))?;
                Ok(TypeExtras::RankJump { n: BigInt::from(n) })
            }
        }
    }
}
