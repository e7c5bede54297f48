use std::fmt;

use thiserror::Error;

use crate::value::{QValue, QuantaleId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("quantale mismatch: expected {expected}, found {found}")]
    QuantaleMismatch {
        expected: QuantaleId,
        found: QuantaleId,
    },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("duplicate object name `{0}`")]
    DuplicateObject(String),
    #[error("invalid value: {0}")]
    InvalidValue(String),
    #[error("step function is not canonical: {reason} (canonical form: {hint})")]
    NonCanonical { reason: String, hint: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0}")]
    Violation(Box<Violation>),
    /// An input structure breaks a defining law; an input error, not a verdict.
    #[error("input is not a valid {kind}: {violation}")]
    Invalid {
        kind: &'static str,
        violation: Box<Violation>,
    },
    #[error("closure did not stabilise within {0} rounds")]
    IterationCap(usize),
    #[error("internal invariant broken (library bug): {0}")]
    Bug(String),
}

impl Error {
    /// True when the error is a negative mathematical verdict rather than bad input.
    pub fn is_verdict(&self) -> bool {
        matches!(self, Error::Violation(_))
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            Error::Violation(v) | Error::Invalid { violation: v, .. } => Some(v),
            _ => None,
        }
    }
}

impl Violation {
    pub fn invalid(self, kind: &'static str) -> Error {
        Error::Invalid {
            kind,
            violation: Box::new(self),
        }
    }
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::Violation(Box::new(v))
    }
}

/// A concrete instance of a failed inequality `lhs ≤ rhs`, with both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub law: String,
    /// Human-readable location, e.g. `(x,y,z)`.
    pub at: String,
    pub lhs_expr: String,
    pub lhs: QValue,
    pub rhs_expr: String,
    pub rhs: QValue,
}

impl Violation {
    pub fn new(
        law: impl Into<String>,
        at: impl Into<String>,
        lhs_expr: impl Into<String>,
        lhs: QValue,
        rhs_expr: impl Into<String>,
        rhs: QValue,
    ) -> Self {
        Violation {
            law: law.into(),
            at: at.into(),
            lhs_expr: lhs_expr.into(),
            lhs,
            rhs_expr: rhs_expr.into(),
            rhs,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "law": self.law,
            "at": self.at,
            "lhs": { "expr": self.lhs_expr, "value": self.lhs.to_json() },
            "rhs": { "expr": self.rhs_expr, "value": self.rhs.to_json() },
        })
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails at {}: {} = {} is not below {} = {}",
            self.law, self.at, self.lhs_expr, self.lhs, self.rhs_expr, self.rhs
        )
    }
}
