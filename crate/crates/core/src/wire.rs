//! JSON documents exchanged by the command-line tool.
//!
//! Exact scalars travel as strings (`"p/q"`, `"p"` or a decimal literal,
//! all parsed exactly); floating scalars travel as JSON numbers.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::convolution::FiniteSequence;
use crate::error::{Error, Result};
use crate::functional::{MomentFunctional, Verdict};
use crate::scalar::{format_exact, parse_exact, ExactScalar, RealScalar};

pub use crate::family::FamilyDoc;
pub use crate::spectral::MeasureDoc;
pub use crate::transforms::SampleDoc;

/// A list of real scalars, exact when every entry is a string.
#[derive(Clone, Debug, PartialEq)]
pub enum RealValues {
    Exact(Vec<ExactScalar>),
    Float(Vec<f64>),
}

impl RealValues {
    pub fn from_json(values: &[Value]) -> Result<Self> {
        if values.iter().all(Value::is_string) {
            return values
                .iter()
                .map(|v| parse_exact(v.as_str().expect("checked")))
                .collect::<Result<_>>()
                .map(RealValues::Exact);
        }
        values
            .iter()
            .map(|v| match v {
                Value::Number(n) => n
                    .as_f64()
                    .ok_or_else(|| Error::InvalidInput(format!("unrepresentable number {n}"))),
                Value::String(s) => parse_exact(s).map(|q| q.to_f64()),
                other => Err(Error::InvalidInput(format!("expected a real scalar, got {other}"))),
            })
            .collect::<Result<_>>()
            .map(RealValues::Float)
    }

    pub fn len(&self) -> usize {
        match self {
            RealValues::Exact(v) => v.len(),
            RealValues::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn exact_to_json(v: &[ExactScalar]) -> Vec<Value> {
    v.iter().map(|q| Value::String(format_exact(q))).collect()
}

pub fn float_to_json(v: &[f64]) -> Vec<Value> {
    v.iter().map(|&x| Value::from(x)).collect()
}

/// Serializes a real-scalar list the way its field demands.
pub trait JsonReal: RealScalar {
    fn to_json(values: &[Self]) -> Vec<Value>;
}

impl JsonReal for ExactScalar {
    fn to_json(values: &[Self]) -> Vec<Value> {
        exact_to_json(values)
    }
}

impl JsonReal for f64 {
    fn to_json(values: &[Self]) -> Vec<Value> {
        float_to_json(values)
    }
}

/// `{"coeffs": [...]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceDoc {
    pub coeffs: Vec<Value>,
}

impl SequenceDoc {
    pub fn from_sequence<R: JsonReal>(f: &FiniteSequence<R>) -> Self {
        SequenceDoc {
            coeffs: R::to_json(f.coeffs()),
        }
    }

    pub fn values(&self) -> Result<RealValues> {
        RealValues::from_json(&self.coeffs)
    }
}

/// `{"family": kind, "values": [...]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub values: Vec<Value>,
}

/// A functional parsed from JSON, exact or floating.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyFunctional {
    Exact(MomentFunctional<ExactScalar>),
    Float(MomentFunctional<f64>),
}

impl FunctionalDoc {
    pub fn from_functional<R: JsonReal>(tau: &MomentFunctional<R>) -> Self {
        FunctionalDoc {
            family: tau.family().map(str::to_string),
            values: R::to_json(tau.values()),
        }
    }

    pub fn parse(&self) -> Result<AnyFunctional> {
        if let Some(kind) = &self.family {
            if !matches!(kind.as_str(), "monomial" | "newton" | "sheffer") {
                return Err(Error::InvalidInput(format!("unknown family kind {kind:?}")));
            }
        }
        Ok(match RealValues::from_json(&self.values)? {
            RealValues::Exact(v) => AnyFunctional::Exact(tagged(MomentFunctional::new(v)?, &self.family)),
            RealValues::Float(v) => AnyFunctional::Float(tagged(MomentFunctional::new(v)?, &self.family)),
        })
    }
}

fn tagged<R: RealScalar>(tau: MomentFunctional<R>, kind: &Option<String>) -> MomentFunctional<R> {
    match kind {
        Some(k) => tau.with_family(k.clone()),
        None => tau,
    }
}

/// `{"verdict": "...", "witness": [...]?, "lambda_min": number?, "rank": n?}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictDoc {
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
}

impl VerdictDoc {
    pub fn from_verdict<R: JsonReal>(v: &Verdict<R>) -> Self {
        let name = v.name().to_string();
        match v {
            Verdict::Positive { rank, lambda_min } => VerdictDoc {
                verdict: name,
                witness: None,
                lambda_min: *lambda_min,
                rank: *rank,
            },
            Verdict::Indefinite { witness, lambda_min } => VerdictDoc {
                verdict: name,
                witness: Some(R::to_json(witness)),
                lambda_min: *lambda_min,
                rank: None,
            },
            Verdict::Borderline { lambda_min } => VerdictDoc {
                verdict: name,
                witness: None,
                lambda_min: Some(*lambda_min),
                rank: None,
            },
        }
    }
}
