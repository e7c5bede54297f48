//! The quantale Δ of left-continuous distribution functions `[0,∞] → [0,1]`,
//! restricted to finite step functions with rational breakpoints and values.
//!
//! A step function is stored as the join of generators `f_{δ,u}`, where
//! `f_{δ,u}(t) = 0` for `t ≤ δ` and `u` for `t > δ`. In canonical form the
//! breakpoints and the values are both strictly increasing and every value is
//! positive, so two step functions are equal exactly when their generator
//! lists are.
//!
//! All lattice and quantale operations reduce to finite computations on the
//! merged breakpoint grid of the operands:
//!
//! * `f ⊗ g = ⋁ f_{δ_i+δ'_j, u_i·u'_j}` (the generator law plus distributivity),
//! * `hom(f, g) = ⋀_i hom(f_{δ_i,u_i}, g)`, where
//!   `hom(f_{δ,u}, g) = ⋁_j f_{δ'_j ⊖ δ, u'_j ⊘ u}` shifts `g` left by `δ`,
//! * the Heyting implication is the left-continuous envelope of the pointwise
//!   bound `1 if f(t) ≤ g(t) else g(t)`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::quantale::{Cost, Quantale};
use crate::rational::{self, Rat};
use crate::value::{QValue, QuantaleId};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct StepFn {
    /// `(δ_i, u_i)` with both coordinates strictly increasing and `0 < u_i ≤ 1`.
    pairs: Vec<(Rat, Rat)>,
}

impl StepFn {
    /// The constant-zero function, bottom of Δ.
    pub fn bottom() -> StepFn {
        StepFn { pairs: Vec::new() }
    }

    /// `ε = f_{0,1}`, the tensor unit and top of Δ.
    pub fn epsilon() -> StepFn {
        StepFn {
            pairs: vec![(Rat::zero(), Rat::one())],
        }
    }

    /// The generator `f_{δ,u}`; `u = 0` gives bottom.
    pub fn generator(delta: Rat, value: Rat) -> Result<StepFn> {
        check_point(&delta, &value)?;
        if value.is_zero() {
            Ok(StepFn::bottom())
        } else {
            Ok(StepFn {
                pairs: vec![(delta, value)],
            })
        }
    }

    /// Builds a step function from an already-canonical generator list,
    /// rejecting anything else with the canonical form as a repair hint.
    pub fn from_canonical(pairs: Vec<(Rat, Rat)>) -> Result<StepFn> {
        for (d, u) in &pairs {
            check_point(d, u)?;
        }
        let canonical = StepFn::from_generators(pairs.iter().cloned());
        if canonical.pairs == pairs {
            return Ok(canonical);
        }
        let reason = if pairs.iter().any(|(_, u)| u.is_zero()) {
            "zero-valued generator"
        } else if pairs.windows(2).any(|w| w[0].0 >= w[1].0) {
            "breakpoints not strictly increasing"
        } else {
            "values not strictly increasing"
        };
        Err(Error::NonCanonical {
            reason: reason.to_string(),
            hint: canonical.to_string_pairs(),
        })
    }

    /// Join of arbitrary generators, canonicalised. Generators with value 0 are dropped.
    pub fn from_generators<I: IntoIterator<Item = (Rat, Rat)>>(gens: I) -> StepFn {
        let mut gens: Vec<(Rat, Rat)> = gens.into_iter().filter(|(_, u)| !u.is_zero()).collect();
        gens.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)));
        let mut pairs: Vec<(Rat, Rat)> = Vec::with_capacity(gens.len());
        for (d, u) in gens {
            // dominated by an earlier breakpoint with a value at least as large
            if pairs.last().is_some_and(|(_, best)| *best >= u) {
                continue;
            }
            pairs.push((d, u));
        }
        StepFn { pairs }
    }

    pub fn pairs(&self) -> &[(Rat, Rat)] {
        &self.pairs
    }

    pub fn is_bottom(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn is_generator(&self) -> bool {
        self.pairs.len() == 1
    }

    /// `f(t) = max{u_i : δ_i < t}`; `f(∞)` is the last value.
    pub fn eval(&self, t: &Cost) -> Rat {
        match t {
            Cost::Infinite => self.value_at_infinity(),
            Cost::Finite(t) => self.eval_finite(t),
        }
    }

    pub fn eval_finite(&self, t: &Rat) -> Rat {
        self.pairs
            .iter()
            .take_while(|(d, _)| d < t)
            .last()
            .map_or_else(Rat::zero, |(_, u)| u.clone())
    }

    /// `lim_{s↓t} f(s) = max{u_i : δ_i ≤ t}`.
    pub fn right_limit(&self, t: &Rat) -> Rat {
        self.pairs
            .iter()
            .take_while(|(d, _)| d <= t)
            .last()
            .map_or_else(Rat::zero, |(_, u)| u.clone())
    }

    pub fn value_at_infinity(&self) -> Rat {
        self.pairs.last().map_or_else(Rat::zero, |(_, u)| u.clone())
    }

    /// `f(∞) = 1`.
    pub fn is_finite_distribution(&self) -> bool {
        self.value_at_infinity().is_one()
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = &Rat> {
        self.pairs.iter().map(|(d, _)| d)
    }

    /// Pointwise order: every generator of `self` lies below `other`.
    pub fn leq(&self, other: &StepFn) -> bool {
        self.pairs.iter().all(|(d, u)| *u <= other.right_limit(d))
    }

    pub fn join(&self, other: &StepFn) -> StepFn {
        StepFn::from_generators(self.pairs.iter().chain(other.pairs.iter()).cloned())
    }

    /// Pointwise minimum.
    pub fn meet(&self, other: &StepFn) -> StepFn {
        let grid = merged_breakpoints(self, other);
        StepFn::from_generators(grid.into_iter().map(|b| {
            let v = self.right_limit(&b).min(other.right_limit(&b));
            (b, v)
        }))
    }

    pub fn tensor(&self, other: &StepFn) -> StepFn {
        let mut gens = Vec::with_capacity(self.pairs.len() * other.pairs.len());
        for (d1, u1) in &self.pairs {
            for (d2, u2) in &other.pairs {
                gens.push((d1 + d2, u1 * u2));
            }
        }
        StepFn::from_generators(gens)
    }

    /// `hom(f_{δ,u}, self)`: shift left by `δ` and divide by `u`.
    fn shift_div(&self, delta: &Rat, value: &Rat) -> StepFn {
        StepFn::from_generators(
            self.pairs
                .iter()
                .map(|(d, u)| (rational::monus(d, delta), rational::div_clamped(u, value))),
        )
    }

    /// Residuation: the largest `h` with `self ⊗ h ≤ g`.
    pub fn hom(&self, g: &StepFn) -> StepFn {
        self.pairs
            .iter()
            .map(|(d, u)| g.shift_div(d, u))
            .fold(StepFn::epsilon(), |acc, h| acc.meet(&h))
    }

    /// Heyting implication: the largest `h` with `self ∧ h ≤ g`.
    pub fn heyting(&self, g: &StepFn) -> StepFn {
        let grid = merged_breakpoints(self, g);
        // bound on (b_k, b_{k+1}], with the last interval running to ∞
        let bounds: Vec<Rat> = grid
            .iter()
            .map(|b| {
                let (fv, gv) = (self.right_limit(b), g.right_limit(b));
                if fv <= gv {
                    Rat::one()
                } else {
                    gv
                }
            })
            .collect();
        let mut suffix_min = Rat::one();
        let mut gens = Vec::with_capacity(grid.len() + 1);
        for (b, bound) in grid.iter().zip(bounds.iter()).rev() {
            if *bound < suffix_min {
                suffix_min = bound.clone();
            }
            gens.push((b.clone(), suffix_min.clone()));
        }
        // on (0, b_0] both functions vanish, so the bound there is 1
        gens.push((Rat::zero(), suffix_min));
        StepFn::from_generators(gens)
    }

    /// `self ≪ g`. A step function lies totally below `g` exactly when it is
    /// dominated by a single generator `f_{δ,u}` with `u < g(δ)`; the best
    /// candidate is `δ = δ_1`, `u = u_n`. Bottom is totally below everything.
    pub fn totally_below(&self, g: &StepFn) -> bool {
        match (self.pairs.first(), self.pairs.last()) {
            (Some((first, _)), Some((_, last))) => *last < g.eval_finite(first),
            _ => true,
        }
    }

    /// A generator `y` with `self ≪ y ≪ g`, or `None` when `self ≪ g` fails.
    pub fn interpolant(&self, g: &StepFn) -> Option<StepFn> {
        let (Some((first, _)), Some((_, last))) = (self.pairs.first(), self.pairs.last()) else {
            return Some(StepFn::bottom());
        };
        let target = g.eval_finite(first);
        if *last >= target {
            return None;
        }
        // g is constant on (d, first] where d is the breakpoint attaining g(first)
        let start = g
            .pairs
            .iter()
            .take_while(|(d, _)| d < first)
            .last()
            .map(|(d, _)| d.clone())?;
        let two = rational::int(2);
        StepFn::generator((start + first) / &two, (last + target) / two).ok()
    }

    /// Smallest breakpoint `δ_1` (`None` for bottom).
    pub fn first_breakpoint(&self) -> Option<&Rat> {
        self.pairs.first().map(|(d, _)| d)
    }

    /// Breakpoint at which the value 1 is attained (`None` if never).
    pub fn certainty_breakpoint(&self) -> Option<&Rat> {
        self.pairs
            .last()
            .filter(|(_, u)| u.is_one())
            .map(|(d, _)| d)
    }

    fn to_string_pairs(&self) -> String {
        let inner: Vec<String> = self
            .pairs
            .iter()
            .map(|(d, u)| {
                format!(
                    "[{},{}]",
                    rational::format_rational(d),
                    rational::format_rational(u)
                )
            })
            .collect();
        format!("[{}]", inner.join(","))
    }

    /// Breakpoint-table rendering, e.g. `f(t)=0 for t<=1; 1/2 for t>1`.
    pub fn to_text(&self) -> String {
        if self.pairs.is_empty() {
            return "f(t)=0".to_string();
        }
        let mut parts = Vec::new();
        let (first, _) = &self.pairs[0];
        if !first.is_zero() {
            parts.push(format!("0 for t<={}", rational::format_rational(first)));
        }
        for (i, (d, u)) in self.pairs.iter().enumerate() {
            let (d, u) = (rational::format_rational(d), rational::format_rational(u));
            match self.pairs.get(i + 1) {
                Some((next, _)) => parts.push(format!(
                    "{u} for {d}<t<={}",
                    rational::format_rational(next)
                )),
                None => parts.push(format!("{u} for t>{d}")),
            }
        }
        format!("f(t)={}", parts.join("; "))
    }
}

impl fmt::Display for StepFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl PartialOrd for StepFn {
    /// The pointwise (partial) order.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.leq(other), other.leq(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}

fn check_point(delta: &Rat, value: &Rat) -> Result<()> {
    if !rational::is_nonnegative(delta) {
        return Err(Error::InvalidValue(format!(
            "breakpoint {} is negative",
            rational::format_rational(delta)
        )));
    }
    if !rational::is_nonnegative(value) || *value > Rat::one() {
        return Err(Error::InvalidValue(format!(
            "step value {} is outside [0,1]",
            rational::format_rational(value)
        )));
    }
    Ok(())
}

/// Sorted union of the breakpoints of `f` and `g`.
pub fn merged_breakpoints(f: &StepFn, g: &StepFn) -> Vec<Rat> {
    let mut grid: Vec<Rat> = f.breakpoints().chain(g.breakpoints()).cloned().collect();
    grid.sort();
    grid.dedup();
    grid
}

/// The quantale Δ with pointwise order, `ε` as unit and top.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Delta;

impl Quantale for Delta {
    type Value = StepFn;
    const ID: QuantaleId = QuantaleId::Delta;

    fn leq(u: &StepFn, v: &StepFn) -> bool {
        u.leq(v)
    }
    fn join2(u: &StepFn, v: &StepFn) -> StepFn {
        u.join(v)
    }
    fn meet2(u: &StepFn, v: &StepFn) -> StepFn {
        u.meet(v)
    }
    fn tensor(u: &StepFn, v: &StepFn) -> StepFn {
        u.tensor(v)
    }
    fn hom(u: &StepFn, v: &StepFn) -> StepFn {
        u.hom(v)
    }
    fn heyting(u: &StepFn, w: &StepFn) -> StepFn {
        u.heyting(w)
    }
    fn unit() -> StepFn {
        StepFn::epsilon()
    }
    fn bottom() -> StepFn {
        StepFn::bottom()
    }
    fn top() -> StepFn {
        StepFn::epsilon()
    }
    fn totally_below(u: &StepFn, v: &StepFn) -> Option<bool> {
        Some(u.totally_below(v))
    }
    fn interpolant(u: &StepFn, v: &StepFn) -> Option<StepFn> {
        u.interpolant(v)
    }
    /// `f_{1/n, 1-1/n}`.
    fn approximant(n: u32) -> StepFn {
        let n = i64::from(n.max(1));
        StepFn::generator(rational::rat(1, n), rational::rat(n - 1, n))
            .expect("approximant lies in Δ")
    }
    fn to_qvalue(v: &StepFn) -> QValue {
        QValue::Delta(v.clone())
    }
    fn from_qvalue(q: &QValue) -> Result<StepFn> {
        match q {
            QValue::Delta(f) => Ok(f.clone()),
            other => Err(Error::QuantaleMismatch {
                expected: QuantaleId::Delta,
                found: other.quantale(),
            }),
        }
    }
}
