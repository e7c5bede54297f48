//! Quantale morphisms and change of base for categories, functors and modules.
//!
//! | name  | map             | formula                                  | kind    |
//! |-------|-----------------|------------------------------------------|---------|
//! | I     | 2 → V           | false ↦ ⊥, true ↦ k                      | strict  |
//! | O     | V → 2           | v ↦ (v ≠ ⊥)                              | strict  |
//! | P     | V → 2           | v ↦ (k ≤ v)                              | lax     |
//! | I_inf | [0,∞] → Δ       | x ↦ f_{x,1}, ∞ ↦ 0                       | strict  |
//! | O_inf | Δ → [0,∞]       | f ↦ sup{x : f(x) = 0}                    | strict  |
//! | P_inf | Δ → [0,∞]       | f ↦ inf{x : f(x) = 1}                    | lax     |
//! | E     | [0,∞] → [0,1]   | x ↦ exp(-x)                              | inexact |
//! | L     | [0,1] → [0,∞]   | u ↦ -ln(u)                               | inexact |
//!
//! `O` is strict here because none of the four instances has zero divisors.
//! `E` and `L` are evaluated in floating point and are never used by the exact
//! checks.

use std::marker::PhantomData;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::json;

use crate::delta::{Delta, StepFn};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::quantale::{Bool2, Cost, Lawvere, Prob, Quantale, UnitInterval};
use crate::rational::{self, Rat};
use crate::report::Check;
use crate::vcat::{VCategory, VFunctor};
use crate::vmod::VModule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphismKind {
    Strict,
    Lax,
    Inexact,
}

impl MorphismKind {
    pub fn tag(self) -> &'static str {
        match self {
            MorphismKind::Strict => "strict",
            MorphismKind::Lax => "lax",
            MorphismKind::Inexact => "inexact",
        }
    }
}

type SV<M> = <<M as QMorphism>::Source as Quantale>::Value;
type TV<M> = <<M as QMorphism>::Target as Quantale>::Value;

pub trait QMorphism {
    type Source: Quantale;
    type Target: Quantale;
    const NAME: &'static str;
    const KIND: MorphismKind;

    fn apply(v: &SV<Self>) -> TV<Self>;
}

/// `I: 2 → V`.
pub struct Embed<Q>(PhantomData<Q>);
/// `O: V → 2`.
pub struct Support<Q>(PhantomData<Q>);
/// `P: V → 2`.
pub struct Certain<Q>(PhantomData<Q>);
pub struct IInf;
pub struct OInf;
pub struct PInf;
pub struct ExpNeg;
pub struct NegLog;

impl<Q: Quantale> QMorphism for Embed<Q> {
    type Source = Bool2;
    type Target = Q;
    const NAME: &'static str = "I";
    const KIND: MorphismKind = MorphismKind::Strict;

    fn apply(v: &bool) -> Q::Value {
        if *v {
            Q::unit()
        } else {
            Q::bottom()
        }
    }
}

impl<Q: Quantale> QMorphism for Support<Q> {
    type Source = Q;
    type Target = Bool2;
    const NAME: &'static str = "O";
    const KIND: MorphismKind = MorphismKind::Strict;

    fn apply(v: &Q::Value) -> bool {
        !Q::is_bottom(v)
    }
}

impl<Q: Quantale> QMorphism for Certain<Q> {
    type Source = Q;
    type Target = Bool2;
    const NAME: &'static str = "P";
    const KIND: MorphismKind = MorphismKind::Lax;

    fn apply(v: &Q::Value) -> bool {
        Q::leq(&Q::unit(), v)
    }
}

impl QMorphism for IInf {
    type Source = Lawvere;
    type Target = Delta;
    const NAME: &'static str = "I_inf";
    const KIND: MorphismKind = MorphismKind::Strict;

    fn apply(v: &Cost) -> StepFn {
        match v {
            // f_{∞,1} vanishes on [0,∞)
            Cost::Infinite => StepFn::bottom(),
            Cost::Finite(x) => StepFn::generator(x.clone(), Rat::one()).expect("x ≥ 0"),
        }
    }
}

impl QMorphism for OInf {
    type Source = Delta;
    type Target = Lawvere;
    const NAME: &'static str = "O_inf";
    const KIND: MorphismKind = MorphismKind::Strict;

    fn apply(f: &StepFn) -> Cost {
        f.first_breakpoint()
            .map_or(Cost::Infinite, |d| Cost::Finite(d.clone()))
    }
}

impl QMorphism for PInf {
    type Source = Delta;
    type Target = Lawvere;
    const NAME: &'static str = "P_inf";
    const KIND: MorphismKind = MorphismKind::Lax;

    fn apply(f: &StepFn) -> Cost {
        f.certainty_breakpoint()
            .map_or(Cost::Infinite, |d| Cost::Finite(d.clone()))
    }
}

fn rat_from_f64(x: f64) -> Rat {
    Rat::from_float(x).unwrap_or_else(Rat::zero)
}

fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::INFINITY)
}

impl QMorphism for ExpNeg {
    type Source = Lawvere;
    type Target = UnitInterval;
    const NAME: &'static str = "E";
    const KIND: MorphismKind = MorphismKind::Inexact;

    fn apply(v: &Cost) -> Prob {
        match v {
            Cost::Infinite => Prob::zero(),
            Cost::Finite(x) => {
                let y = (-rat_to_f64(x)).exp().clamp(0.0, 1.0);
                Prob::new(rat_from_f64(y)).expect("clamped into [0,1]")
            }
        }
    }
}

impl QMorphism for NegLog {
    type Source = UnitInterval;
    type Target = Lawvere;
    const NAME: &'static str = "L";
    const KIND: MorphismKind = MorphismKind::Inexact;

    fn apply(v: &Prob) -> Cost {
        if v.value().is_zero() {
            return Cost::Infinite;
        }
        let y = (-rat_to_f64(v.value()).ln()).max(0.0);
        Cost::Finite(rat_from_f64(y))
    }
}

/// `F X`: the same objects with `F · a` as hom. Exact morphisms always send
/// categories to categories, so a failed validation there is a library bug.
pub fn apply_category<M: QMorphism>(x: &VCategory<M::Source>) -> Result<VCategory<M::Target>> {
    let hom = x.hom().map(M::apply);
    match VCategory::new(x.objects().to_vec(), hom) {
        Err(Error::Violation(v)) if M::KIND != MorphismKind::Inexact => Err(Error::Bug(format!(
            "{} image is not a category: {v}",
            M::NAME
        ))),
        other => other,
    }
}

/// `F f`: the same object map between the image categories.
pub fn apply_functor<M: QMorphism>(
    f: &VFunctor<M::Source>,
    source: Arc<VCategory<M::Target>>,
    target: Arc<VCategory<M::Target>>,
) -> Result<VFunctor<M::Target>> {
    VFunctor::new(source, target, f.map().to_vec())
}

pub fn apply_module<M: QMorphism>(
    phi: &VModule<M::Source>,
    source: Arc<VCategory<M::Target>>,
    target: Arc<VCategory<M::Target>>,
) -> Result<VModule<M::Target>> {
    let m: Matrix<TV<M>> = phi.matrix().map(M::apply);
    match VModule::new(source, target, m) {
        Err(Error::Violation(v)) if M::KIND != MorphismKind::Inexact => Err(Error::Bug(format!(
            "{} image is not a module: {v}",
            M::NAME
        ))),
        other => other,
    }
}

fn first_failure<'a, T: 'a>(
    items: impl IntoIterator<Item = T>,
    mut holds: impl FnMut(&T) -> bool,
) -> (usize, Option<T>) {
    let mut count = 0;
    for item in items {
        count += 1;
        if !holds(&item) {
            return (count, Some(item));
        }
    }
    (count, None)
}

fn check_from<M: QMorphism>(name: &str, tested: usize, bad: Option<Vec<&SV<M>>>) -> Check {
    match bad {
        None => Check::pass(name, format!("{tested} instances")),
        Some(vals) => {
            let shown: Vec<_> = vals
                .iter()
                .map(|v| <M::Source as Quantale>::to_qvalue(v))
                .collect();
            let text: Vec<String> = shown.iter().map(ToString::to_string).collect();
            Check::fail(
                name,
                format!("fails at ({})", text.join(", ")),
                Some(json!({
                    "morphism": M::NAME,
                    "law": name,
                    "values": shown.iter().map(|q| q.to_json()).collect::<Vec<_>>(),
                })),
            )
        }
    }
}

/// Monotonicity, (lax) preservation of tensor and unit, and preservation of
/// finite joins, on all samples and pairs of samples.
pub fn morphism_law_suite<M: QMorphism>(samples: &[SV<M>]) -> Vec<Check> {
    type S<M> = <M as QMorphism>::Source;
    type T<M> = <M as QMorphism>::Target;
    let strict = M::KIND == MorphismKind::Strict;
    let pairs = || {
        samples
            .iter()
            .flat_map(|u| samples.iter().map(move |v| (u, v)))
    };
    let mut checks = Vec::new();

    let (n, bad) = first_failure(pairs(), |(u, v)| {
        !S::<M>::leq(u, v) || T::<M>::leq(&M::apply(u), &M::apply(v))
    });
    checks.push(check_from::<M>("monotone", n, bad.map(|(u, v)| vec![u, v])));

    let tensor_name = if strict {
        "F(u) ⊗ F(v) = F(u ⊗ v)"
    } else {
        "F(u) ⊗ F(v) ≤ F(u ⊗ v)"
    };
    let (n, bad) = first_failure(pairs(), |(u, v)| {
        let lhs = T::<M>::tensor(&M::apply(u), &M::apply(v));
        let rhs = M::apply(&S::<M>::tensor(u, v));
        if strict {
            lhs == rhs
        } else {
            T::<M>::leq(&lhs, &rhs)
        }
    });
    checks.push(check_from::<M>(tensor_name, n, bad.map(|(u, v)| vec![u, v])));

    let image_unit = M::apply(&S::<M>::unit());
    let unit_ok = if strict {
        image_unit == T::<M>::unit()
    } else {
        T::<M>::leq(&T::<M>::unit(), &image_unit)
    };
    checks.push(Check::from_bool(
        if strict { "F(k) = l" } else { "l ≤ F(k)" },
        unit_ok,
        format!("F(k) = {}", T::<M>::to_qvalue(&image_unit)),
    ));

    let (n, bad) = first_failure(pairs(), |(u, v)| {
        M::apply(&S::<M>::join2(u, v)) == T::<M>::join2(&M::apply(u), &M::apply(v))
    });
    checks.push(check_from::<M>("preserves binary joins", n, bad.map(|(u, v)| vec![u, v])));
    checks.push(Check::from_bool(
        "preserves the empty join",
        M::apply(&S::<M>::bottom()) == T::<M>::bottom(),
        "",
    ));
    checks
}

/// `L ⊣ R` on samples: `L(u) ≤ v ⟺ u ≤ R(v)`.
pub fn adjunction_law<L, R>(left_samples: &[SV<L>], right_samples: &[SV<R>]) -> Check
where
    L: QMorphism,
    R: QMorphism<Source = L::Target, Target = L::Source>,
{
    let name = format!("{} ⊣ {}", L::NAME, R::NAME);
    let mut tested = 0;
    for u in left_samples {
        for v in right_samples {
            tested += 1;
            let lhs = <L::Target as Quantale>::leq(&L::apply(u), v);
            let rhs = <L::Source as Quantale>::leq(u, &R::apply(v));
            if lhs != rhs {
                let (u, v) = (
                    <L::Source as Quantale>::to_qvalue(u),
                    <L::Target as Quantale>::to_qvalue(v),
                );
                return Check::fail(
                    name,
                    format!("fails at u = {u}, v = {v}"),
                    Some(json!({"u": u.to_json(), "v": v.to_json()})),
                );
            }
        }
    }
    Check::pass(name, format!("{tested} pairs"))
}

/// The family `f_n = f_{0, 1-1/n}` whose supremum is `ε`: every `P_inf(f_n)`
/// is `∞`, so the join of the images is `∞`, while `P_inf(ε) = 0`.
pub fn p_inf_join_counterexample(members: u32) -> Vec<StepFn> {
    (1..=members)
        .map(|n| {
            let n = i64::from(n);
            StepFn::generator(Rat::zero(), rational::rat(n - 1, n)).expect("value in [0,1]")
        })
        .collect()
}

/// For `h` strictly below `ε`, the index of a family member not below `h`;
/// this is what makes `ε` the least upper bound of the family.
pub fn member_escaping(h: &StepFn) -> Option<u32> {
    if *h == StepFn::epsilon() {
        return None;
    }
    let r = h.right_limit(&Rat::zero());
    // 1 - 1/n > r  ⟺  n > 1/(1 - r)
    let bound = Rat::one() / (Rat::one() - r);
    let n = bound.floor() + Rat::one();
    n.to_integer().try_into().ok()
}

/// Checks the stored counterexample: the first `members` images are `∞`,
/// every member lies below `ε` and `P_inf(ε) = 0`.
pub fn p_inf_join_failure_check(members: u32) -> Check {
    let family = p_inf_join_counterexample(members);
    let images_bottom = family.iter().all(|f| PInf::apply(f) == Cost::Infinite);
    let below = family.iter().all(|f| f.leq(&StepFn::epsilon()));
    let sup_image = PInf::apply(&StepFn::epsilon());
    let fails = images_bottom && below && sup_image == Cost::zero();
    Check::from_bool(
        "P_inf does not preserve infinite joins",
        fails,
        format!(
            "⋁ P_inf(f_{{0,1-1/n}}) = inf but P_inf(⋁ f_{{0,1-1/n}}) = P_inf(ε) = {sup_image}"
        ),
    )
}
