//! The quantale interface and the three scalar instances `2`, `[0,∞]` and `[0,1]`.
//!
//! A quantale is a complete lattice with a commutative, associative tensor that
//! preserves joins in each variable. Every instance here is also a frame, so
//! besides the residuation `hom` there is a Heyting implication `heyting`.
//! Only finite joins and meets are ever computed; each instance is closed under
//! them, so every result is exact.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rat};
use crate::value::{QValue, QuantaleId};

pub trait Quantale: Copy + Default + fmt::Debug + PartialEq + Eq + Send + Sync + 'static {
    type Value: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    const ID: QuantaleId;

    fn leq(u: &Self::Value, v: &Self::Value) -> bool;
    fn join2(u: &Self::Value, v: &Self::Value) -> Self::Value;
    fn meet2(u: &Self::Value, v: &Self::Value) -> Self::Value;
    fn tensor(u: &Self::Value, v: &Self::Value) -> Self::Value;
    /// Right adjoint of `u ⊗ -`: `u ⊗ w ≤ v ⟺ w ≤ hom(u, v)`.
    fn hom(u: &Self::Value, v: &Self::Value) -> Self::Value;
    /// Right adjoint of `u ∧ -`: `u ∧ v ≤ w ⟺ v ≤ heyting(u, w)`.
    fn heyting(u: &Self::Value, w: &Self::Value) -> Self::Value;
    /// The tensor unit `k`.
    fn unit() -> Self::Value;
    fn bottom() -> Self::Value;
    fn top() -> Self::Value;
    /// `None` when the relation is not decided by this instance.
    fn totally_below(_u: &Self::Value, _v: &Self::Value) -> Option<bool> {
        None
    }
    /// Some `y` with `u ≪ y ≪ v`, given `u ≪ v`.
    fn interpolant(_u: &Self::Value, _v: &Self::Value) -> Option<Self::Value> {
        None
    }
    /// An increasing sequence `u_1 ≤ u_2 ≤ …` with `u_n ≪ k` and `⋁ u_n = k`
    /// (for `2`, where `k ≪ k`, the constant sequence `k`).
    fn approximant(n: u32) -> Self::Value;

    fn to_qvalue(v: &Self::Value) -> QValue;
    fn from_qvalue(q: &QValue) -> Result<Self::Value>;

    fn join<'a, I>(values: I) -> Self::Value
    where
        I: IntoIterator<Item = &'a Self::Value>,
        Self::Value: 'a,
    {
        values
            .into_iter()
            .fold(Self::bottom(), |acc, v| Self::join2(&acc, v))
    }

    fn meet<'a, I>(values: I) -> Self::Value
    where
        I: IntoIterator<Item = &'a Self::Value>,
        Self::Value: 'a,
    {
        values
            .into_iter()
            .fold(Self::top(), |acc, v| Self::meet2(&acc, v))
    }

    fn is_bottom(v: &Self::Value) -> bool {
        *v == Self::bottom()
    }
}

fn mismatch<Q: Quantale>(q: &QValue) -> Error {
    Error::QuantaleMismatch {
        expected: Q::ID,
        found: q.quantale(),
    }
}

/// The two-element frame `{false ≤ true}` with `⊗ = &`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Bool2;

impl Quantale for Bool2 {
    type Value = bool;
    const ID: QuantaleId = QuantaleId::Bool2;

    fn leq(u: &bool, v: &bool) -> bool {
        !*u || *v
    }
    fn join2(u: &bool, v: &bool) -> bool {
        *u || *v
    }
    fn meet2(u: &bool, v: &bool) -> bool {
        *u && *v
    }
    fn tensor(u: &bool, v: &bool) -> bool {
        *u && *v
    }
    fn hom(u: &bool, v: &bool) -> bool {
        !*u || *v
    }
    fn heyting(u: &bool, w: &bool) -> bool {
        !*u || *w
    }
    fn unit() -> bool {
        true
    }
    fn bottom() -> bool {
        false
    }
    fn top() -> bool {
        true
    }
    fn totally_below(u: &bool, v: &bool) -> Option<bool> {
        Some(!*u || *v)
    }
    fn interpolant(u: &bool, v: &bool) -> Option<bool> {
        (!*u || *v).then_some(*u)
    }
    fn approximant(_n: u32) -> bool {
        true
    }
    fn to_qvalue(v: &bool) -> QValue {
        QValue::Bool2(*v)
    }
    fn from_qvalue(q: &QValue) -> Result<bool> {
        match q {
            QValue::Bool2(b) => Ok(*b),
            other => Err(mismatch::<Self>(other)),
        }
    }
}

/// A point of `[0,∞]`.
///
/// `Ord` is the *numerical* order; the quantale order of [`Lawvere`] is its
/// reverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Cost {
    Finite(Rat),
    Infinite,
}

impl Cost {
    pub fn finite(r: Rat) -> Result<Cost> {
        if rational::is_nonnegative(&r) {
            Ok(Cost::Finite(r))
        } else {
            Err(Error::InvalidValue(format!(
                "cost {} is negative",
                rational::format_rational(&r)
            )))
        }
    }

    pub fn zero() -> Cost {
        Cost::Finite(Rat::zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Cost::Infinite)
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            Cost::Finite(r) => Some(r),
            Cost::Infinite => None,
        }
    }

    pub fn add(&self, other: &Cost) -> Cost {
        match (self, other) {
            (Cost::Finite(a), Cost::Finite(b)) => Cost::Finite(a + b),
            _ => Cost::Infinite,
        }
    }

    /// `self ⊖ other`, with `∞ ⊖ x = ∞` for finite `x` and `y ⊖ ∞ = 0`.
    pub fn monus(&self, other: &Cost) -> Cost {
        match (self, other) {
            (_, Cost::Infinite) => Cost::zero(),
            (Cost::Infinite, Cost::Finite(_)) => Cost::Infinite,
            (Cost::Finite(a), Cost::Finite(b)) => Cost::Finite(rational::monus(a, b)),
        }
    }
}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Cost::Finite(a), Cost::Finite(b)) => a.cmp(b),
            (Cost::Finite(_), Cost::Infinite) => Ordering::Less,
            (Cost::Infinite, Cost::Finite(_)) => Ordering::Greater,
            (Cost::Infinite, Cost::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(r) => f.write_str(&rational::format_rational(r)),
            Cost::Infinite => f.write_str("inf"),
        }
    }
}

/// Lawvere's quantale `[0,∞]` ordered by `≥`, with `⊗ = +` and `k = 0`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Lawvere;

impl Quantale for Lawvere {
    type Value = Cost;
    const ID: QuantaleId = QuantaleId::Cost;

    fn leq(u: &Cost, v: &Cost) -> bool {
        u >= v
    }
    fn join2(u: &Cost, v: &Cost) -> Cost {
        u.min(v).clone()
    }
    fn meet2(u: &Cost, v: &Cost) -> Cost {
        u.max(v).clone()
    }
    fn tensor(u: &Cost, v: &Cost) -> Cost {
        u.add(v)
    }
    fn hom(u: &Cost, v: &Cost) -> Cost {
        v.monus(u)
    }
    fn heyting(u: &Cost, w: &Cost) -> Cost {
        if Self::leq(u, w) {
            Self::top()
        } else {
            w.clone()
        }
    }
    fn unit() -> Cost {
        Cost::zero()
    }
    fn bottom() -> Cost {
        Cost::Infinite
    }
    fn top() -> Cost {
        Cost::zero()
    }
    fn totally_below(u: &Cost, v: &Cost) -> Option<bool> {
        Some(u.is_infinite() || u > v)
    }
    fn interpolant(u: &Cost, v: &Cost) -> Option<Cost> {
        match (u, v) {
            (Cost::Infinite, _) => Some(Cost::Infinite),
            (Cost::Finite(a), Cost::Finite(b)) if a > b => {
                Some(Cost::Finite((a + b) / rational::int(2)))
            }
            _ => None,
        }
    }
    fn approximant(n: u32) -> Cost {
        Cost::Finite(rational::rat(1, i64::from(n.max(1))))
    }
    fn to_qvalue(v: &Cost) -> QValue {
        QValue::Cost(v.clone())
    }
    fn from_qvalue(q: &QValue) -> Result<Cost> {
        match q {
            QValue::Cost(c) => Ok(c.clone()),
            other => Err(mismatch::<Self>(other)),
        }
    }
}

/// A rational probability in `[0,1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prob(Rat);

impl Prob {
    pub fn new(r: Rat) -> Result<Prob> {
        if rational::is_nonnegative(&r) && r <= Rat::one() {
            Ok(Prob(r))
        } else {
            Err(Error::InvalidValue(format!(
                "{} is outside [0,1]",
                rational::format_rational(&r)
            )))
        }
    }

    pub fn zero() -> Prob {
        Prob(Rat::zero())
    }

    pub fn one() -> Prob {
        Prob(Rat::one())
    }

    pub fn value(&self) -> &Rat {
        &self.0
    }

    pub fn into_inner(self) -> Rat {
        self.0
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&rational::format_rational(&self.0))
    }
}

/// The unit interval with its usual order, `⊗ = ·` and `k = 1`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct UnitInterval;

impl Quantale for UnitInterval {
    type Value = Prob;
    const ID: QuantaleId = QuantaleId::Unit;

    fn leq(u: &Prob, v: &Prob) -> bool {
        u <= v
    }
    fn join2(u: &Prob, v: &Prob) -> Prob {
        u.max(v).clone()
    }
    fn meet2(u: &Prob, v: &Prob) -> Prob {
        u.min(v).clone()
    }
    fn tensor(u: &Prob, v: &Prob) -> Prob {
        Prob(&u.0 * &v.0)
    }
    fn hom(u: &Prob, v: &Prob) -> Prob {
        Prob(rational::div_clamped(&v.0, &u.0))
    }
    fn heyting(u: &Prob, w: &Prob) -> Prob {
        if u <= w {
            Prob::one()
        } else {
            w.clone()
        }
    }
    fn unit() -> Prob {
        Prob::one()
    }
    fn bottom() -> Prob {
        Prob::zero()
    }
    fn top() -> Prob {
        Prob::one()
    }
    fn totally_below(u: &Prob, v: &Prob) -> Option<bool> {
        Some(u.0.is_zero() || u < v)
    }
    fn interpolant(u: &Prob, v: &Prob) -> Option<Prob> {
        if u.0.is_zero() {
            Some(Prob::zero())
        } else if u < v {
            Some(Prob((&u.0 + &v.0) / rational::int(2)))
        } else {
            None
        }
    }
    fn approximant(n: u32) -> Prob {
        let n = i64::from(n.max(1));
        Prob(rational::rat(n - 1, n))
    }
    fn to_qvalue(v: &Prob) -> QValue {
        QValue::Unit(v.clone())
    }
    fn from_qvalue(q: &QValue) -> Result<Prob> {
        match q {
            QValue::Unit(p) => Ok(p.clone()),
            other => Err(mismatch::<Self>(other)),
        }
    }
}
