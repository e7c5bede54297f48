//! Runtime-tagged quantale values, used at the JSON, CLI and FFI boundaries.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::delta::{Delta, StepFn};
use crate::error::{Error, Result};
use crate::quantale::{Bool2, Cost, Lawvere, Prob, Quantale, UnitInterval};
use crate::rational::{self, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuantaleId {
    Bool2,
    Cost,
    Unit,
    Delta,
}

impl QuantaleId {
    pub const ALL: [QuantaleId; 4] = [
        QuantaleId::Bool2,
        QuantaleId::Cost,
        QuantaleId::Unit,
        QuantaleId::Delta,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            QuantaleId::Bool2 => "bool2",
            QuantaleId::Cost => "cost",
            QuantaleId::Unit => "unit",
            QuantaleId::Delta => "delta",
        }
    }
}

impl fmt::Display for QuantaleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for QuantaleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        QuantaleId::ALL
            .into_iter()
            .find(|q| q.tag() == s)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown quantale `{s}` (expected bool2, cost, unit or delta)"
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QValue {
    Bool2(bool),
    Cost(Cost),
    Unit(Prob),
    Delta(StepFn),
}

/// Applies a binary `Quantale` method to two values of the same instance.
/// `value` re-wraps the native result as a `QValue`; `raw` returns it as is.
macro_rules! binary {
    (value, $u:expr, $v:expr, $method:ident) => {
        binary!(@go $u, $v, |q, r| q(&r), $method)
    };
    (raw, $u:expr, $v:expr, $method:ident) => {
        binary!(@go $u, $v, |_q, r| r, $method)
    };
    (@go $u:expr, $v:expr, |$q:ident, $r:ident| $wrap:expr, $method:ident) => {
        match ($u, $v) {
            (QValue::Bool2(a), QValue::Bool2(b)) => {
                let ($q, $r) = (Bool2::to_qvalue, Bool2::$method(a, b));
                Ok($wrap)
            }
            (QValue::Cost(a), QValue::Cost(b)) => {
                let ($q, $r) = (Lawvere::to_qvalue, Lawvere::$method(a, b));
                Ok($wrap)
            }
            (QValue::Unit(a), QValue::Unit(b)) => {
                let ($q, $r) = (UnitInterval::to_qvalue, UnitInterval::$method(a, b));
                Ok($wrap)
            }
            (QValue::Delta(a), QValue::Delta(b)) => {
                let ($q, $r) = (Delta::to_qvalue, Delta::$method(a, b));
                Ok($wrap)
            }
            (a, b) => Err(Error::QuantaleMismatch {
                expected: a.quantale(),
                found: b.quantale(),
            }),
        }
    };
}

impl QValue {
    pub fn quantale(&self) -> QuantaleId {
        match self {
            QValue::Bool2(_) => QuantaleId::Bool2,
            QValue::Cost(_) => QuantaleId::Cost,
            QValue::Unit(_) => QuantaleId::Unit,
            QValue::Delta(_) => QuantaleId::Delta,
        }
    }

    pub fn unit(q: QuantaleId) -> QValue {
        match q {
            QuantaleId::Bool2 => Bool2::to_qvalue(&Bool2::unit()),
            QuantaleId::Cost => Lawvere::to_qvalue(&Lawvere::unit()),
            QuantaleId::Unit => UnitInterval::to_qvalue(&UnitInterval::unit()),
            QuantaleId::Delta => Delta::to_qvalue(&Delta::unit()),
        }
    }

    pub fn bottom(q: QuantaleId) -> QValue {
        match q {
            QuantaleId::Bool2 => Bool2::to_qvalue(&Bool2::bottom()),
            QuantaleId::Cost => Lawvere::to_qvalue(&Lawvere::bottom()),
            QuantaleId::Unit => UnitInterval::to_qvalue(&UnitInterval::bottom()),
            QuantaleId::Delta => Delta::to_qvalue(&Delta::bottom()),
        }
    }

    pub fn top(q: QuantaleId) -> QValue {
        match q {
            QuantaleId::Bool2 => Bool2::to_qvalue(&Bool2::top()),
            QuantaleId::Cost => Lawvere::to_qvalue(&Lawvere::top()),
            QuantaleId::Unit => UnitInterval::to_qvalue(&UnitInterval::top()),
            QuantaleId::Delta => Delta::to_qvalue(&Delta::top()),
        }
    }

    pub fn leq(&self, other: &QValue) -> Result<bool> {
        binary!(raw, self, other, leq)
    }

    pub fn join(&self, other: &QValue) -> Result<QValue> {
        binary!(value, self, other, join2)
    }

    pub fn meet(&self, other: &QValue) -> Result<QValue> {
        binary!(value, self, other, meet2)
    }

    pub fn tensor(&self, other: &QValue) -> Result<QValue> {
        binary!(value, self, other, tensor)
    }

    pub fn hom(&self, other: &QValue) -> Result<QValue> {
        binary!(value, self, other, hom)
    }

    pub fn heyting(&self, other: &QValue) -> Result<QValue> {
        binary!(value, self, other, heyting)
    }

    /// `Ok(None)` means the instance does not decide `≪`.
    pub fn totally_below(&self, other: &QValue) -> Result<Option<bool>> {
        binary!(raw, self, other, totally_below)
    }

    pub fn join_all(q: QuantaleId, values: &[QValue]) -> Result<QValue> {
        values
            .iter()
            .try_fold(QValue::bottom(q), |acc, v| acc.join(v))
    }

    pub fn meet_all(q: QuantaleId, values: &[QValue]) -> Result<QValue> {
        values.iter().try_fold(QValue::top(q), |acc, v| acc.meet(v))
    }

    /// Canonical JSON encoding: booleans, integers as numbers, other
    /// rationals as `"p/q"` strings, infinity as `"inf"`, step functions as
    /// `[[δ,u],...]`.
    pub fn to_json(&self) -> Json {
        match self {
            QValue::Bool2(b) => Json::Bool(*b),
            QValue::Cost(Cost::Infinite) => Json::String("inf".into()),
            QValue::Cost(Cost::Finite(r)) => rational_to_json(r),
            QValue::Unit(p) => rational_to_json(p.value()),
            QValue::Delta(f) => Json::Array(
                f.pairs()
                    .iter()
                    .map(|(d, u)| Json::Array(vec![rational_to_json(d), rational_to_json(u)]))
                    .collect(),
            ),
        }
    }

    pub fn from_json(q: QuantaleId, json: &Json, allow_float: bool) -> Result<QValue> {
        match q {
            QuantaleId::Bool2 => match json {
                Json::Bool(b) => Ok(QValue::Bool2(*b)),
                other => Err(Error::Parse(format!("expected true/false, found {other}"))),
            },
            QuantaleId::Cost => {
                if json.as_str() == Some("inf") {
                    return Ok(QValue::Cost(Cost::Infinite));
                }
                Cost::finite(rational_from_json(json, allow_float)?).map(QValue::Cost)
            }
            QuantaleId::Unit => Prob::new(rational_from_json(json, allow_float)?).map(QValue::Unit),
            QuantaleId::Delta => {
                let items = json.as_array().ok_or_else(|| {
                    Error::Parse(format!("expected a step function [[δ,u],...], found {json}"))
                })?;
                let pairs = items
                    .iter()
                    .map(|item| match item.as_array().map(Vec::as_slice) {
                        Some([d, u]) => Ok((
                            rational_from_json(d, allow_float)?,
                            rational_from_json(u, allow_float)?,
                        )),
                        _ => Err(Error::Parse(format!("expected a pair [δ,u], found {item}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                StepFn::from_canonical(pairs).map(QValue::Delta)
            }
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            QValue::Bool2(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_step(&self) -> Option<&StepFn> {
        match self {
            QValue::Delta(f) => Some(f),
            _ => None,
        }
    }
}

impl From<bool> for QValue {
    fn from(b: bool) -> Self {
        QValue::Bool2(b)
    }
}

impl fmt::Display for QValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QValue::Bool2(b) => write!(f, "{b}"),
            QValue::Cost(c) => write!(f, "{c}"),
            QValue::Unit(p) => write!(f, "{p}"),
            QValue::Delta(s) => write!(f, "{s}"),
        }
    }
}

pub fn rational_to_json(r: &Rat) -> Json {
    if r.is_integer() {
        if let Ok(n) = r.numer().to_string().parse::<i64>() {
            return Json::from(n);
        }
    }
    Json::String(rational::format_rational(r))
}

/// Reads a number or a `"p/q"` string exactly. Decimal literals are refused
/// unless `allow_float` is set, in which case they are read as exact decimals.
pub fn rational_from_json(json: &Json, allow_float: bool) -> Result<Rat> {
    match json {
        // with arbitrary_precision the number keeps its source text
        Json::Number(n) => rational::parse_rational(&n.to_string(), allow_float),
        Json::String(s) => rational::parse_rational(s, allow_float),
        other => Err(Error::Parse(format!("expected a rational, found {other}"))),
    }
}
