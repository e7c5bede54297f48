//! Exponentiability and interpolation.
//!
//! A `V`-category `X` is tested against the inequality
//!
//! ```text
//! ⋁_x (a(x0,x) ∧ v0) ⊗ (a(x,x2) ∧ v1)  ≥  a(x0,x2) ∧ (v0 ⊗ v1)
//! ```
//!
//! for all objects `x0, x2` and all `v0, v1` in a test family. Over `2` the
//! family is all of `2`. Elsewhere it is generated from the hom entries and is
//! only a certificate relative to that family. For `[0,∞]` an exact decision
//! is available through [`check_exponentiable_metric`].

use num_traits::Zero;
use serde_json::{json, Value as Json};

use crate::delta::{Delta, StepFn};
use crate::error::{Error, Result};
use crate::quantale::{Bool2, Cost, Lawvere, Prob, Quantale, UnitInterval};
use crate::rational::{self, Rat};
use crate::report::Check;
use crate::value::QValue;
use crate::vcat::VCategory;

/// Closure rounds stop adding values once the family has this many members.
pub const FAMILY_CAP: usize = 48;
pub const DEFAULT_DEPTH: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpStatus {
    Counterexample,
    PassedOnFamily,
    PassedExhaustively,
}

impl ExpStatus {
    pub fn tag(self) -> &'static str {
        match self {
            ExpStatus::Counterexample => "counterexample",
            ExpStatus::PassedOnFamily => "passed-on-family",
            ExpStatus::PassedExhaustively => "passed-exhaustively",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpWitness {
    pub x0: String,
    pub x2: String,
    pub v0: QValue,
    pub v1: QValue,
    pub lhs: QValue,
    pub rhs: QValue,
}

impl ExpWitness {
    pub fn to_json(&self) -> Json {
        json!({
            "x0": self.x0,
            "x2": self.x2,
            "v0": self.v0.to_json(),
            "v1": self.v1.to_json(),
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpVerdict {
    pub status: ExpStatus,
    pub witness: Option<ExpWitness>,
    pub family: String,
    pub family_size: usize,
}

impl ExpVerdict {
    pub fn is_counterexample(&self) -> bool {
        self.status == ExpStatus::Counterexample
    }
}

/// Per-quantale test-family seeds and two-point interpolation.
pub trait ExpQuantale: Quantale {
    /// True when the family is all of `V`.
    const EXHAUSTIVE: bool = false;

    fn seeds(x: &VCategory<Self>) -> Vec<Self::Value>;

    /// Pairs `(u', v', case)` with `u' ≤ u`, `v' ≤ v` whose tensors join to
    /// `w ∧ (u ⊗ v)`.
    fn interpolate(u: &Self::Value, v: &Self::Value, w: &Self::Value) -> Vec<Interpolant<Self::Value>>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct Interpolant<T> {
    pub u: T,
    pub v: T,
    /// Which of the four generator cases produced the pair (Δ only).
    pub case: Option<u8>,
}

fn push_unique<T: PartialEq>(family: &mut Vec<T>, v: T) -> bool {
    if family.contains(&v) {
        false
    } else {
        family.push(v);
        true
    }
}

fn distinct_entries<Q: Quantale>(x: &VCategory<Q>) -> Vec<Q::Value> {
    let mut out = Vec::new();
    for v in x.hom().iter() {
        push_unique(&mut out, v.clone());
    }
    out
}

/// The test family: `k`, `⊥`, the quantale seeds, then `depth` rounds of
/// closure under `⊗`, `∧` and `hom`. Insertion order is stable, so the family
/// at depth `d` is a prefix of the family at depth `d + 1`.
pub fn exp_family<Q: ExpQuantale>(x: &VCategory<Q>, depth: usize) -> Vec<Q::Value> {
    let mut family = vec![Q::unit()];
    push_unique(&mut family, Q::bottom());
    for s in Q::seeds(x) {
        push_unique(&mut family, s);
    }
    if Q::EXHAUSTIVE {
        return family;
    }
    for _ in 0..depth {
        let snapshot = family.clone();
        'round: for a in &snapshot {
            for b in &snapshot {
                for c in [Q::tensor(a, b), Q::meet2(a, b), Q::hom(a, b)] {
                    if family.len() >= FAMILY_CAP {
                        break 'round;
                    }
                    push_unique(&mut family, c);
                }
            }
        }
    }
    family
}

/// Both sides of the inequality at `(x0, x2, v0, v1)`.
pub fn theorem_sides<Q: Quantale>(
    x: &VCategory<Q>,
    x0: usize,
    x2: usize,
    v0: &Q::Value,
    v1: &Q::Value,
) -> (Q::Value, Q::Value) {
    let lhs = Q::join(
        (0..x.len())
            .map(|m| Q::tensor(&Q::meet2(x.a(x0, m), v0), &Q::meet2(x.a(m, x2), v1)))
            .collect::<Vec<_>>()
            .iter(),
    );
    let rhs = Q::meet2(x.a(x0, x2), &Q::tensor(v0, v1));
    (lhs, rhs)
}

fn witness<Q: Quantale>(x: &VCategory<Q>, x0: usize, x2: usize, v0: &Q::Value, v1: &Q::Value) -> Option<ExpWitness> {
    let (lhs, rhs) = theorem_sides(x, x0, x2, v0, v1);
    (!Q::leq(&rhs, &lhs)).then(|| ExpWitness {
        x0: x.name(x0).to_string(),
        x2: x.name(x2).to_string(),
        v0: Q::to_qvalue(v0),
        v1: Q::to_qvalue(v1),
        lhs: Q::to_qvalue(&lhs),
        rhs: Q::to_qvalue(&rhs),
    })
}

pub fn check_exponentiable_on<Q: Quantale>(x: &VCategory<Q>, family: &[Q::Value], exhaustive: bool) -> ExpVerdict {
    let n = x.len();
    for x0 in 0..n {
        for x2 in 0..n {
            for v0 in family {
                for v1 in family {
                    if let Some(w) = witness(x, x0, x2, v0, v1) {
                        return ExpVerdict {
                            status: ExpStatus::Counterexample,
                            witness: Some(w),
                            family: describe_family::<Q>(exhaustive),
                            family_size: family.len(),
                        };
                    }
                }
            }
        }
    }
    ExpVerdict {
        status: if exhaustive {
            ExpStatus::PassedExhaustively
        } else {
            ExpStatus::PassedOnFamily
        },
        witness: None,
        family: describe_family::<Q>(exhaustive),
        family_size: family.len(),
    }
}

fn describe_family<Q: Quantale>(exhaustive: bool) -> String {
    if exhaustive {
        format!("all of {}", Q::ID)
    } else {
        "hom entries with k and bottom, quantale seeds, closed under tensor, meet and hom".into()
    }
}

pub fn check_exponentiable<Q: ExpQuantale>(x: &VCategory<Q>, depth: usize) -> ExpVerdict {
    let family = exp_family(x, depth);
    check_exponentiable_on(x, &family, Q::EXHAUSTIVE)
}

/// First split `u0` of `a(x0,x2)` that no `x1` covers, i.e. with no `x1`
/// satisfying `a(x0,x1) ≤ u0` and `a(x1,x2) ≤ a(x0,x2) - u0`.
pub fn uncovered_split(x: &VCategory<Lawvere>, x0: usize, x2: usize) -> Option<Rat> {
    let total = x.a(x0, x2).as_finite()?.clone();
    let mut intervals: Vec<(Rat, Rat)> = (0..x.len())
        .filter_map(|m| {
            let l = x.a(x0, m).as_finite()?.clone();
            let r = &total - x.a(m, x2).as_finite()?;
            (l <= r).then_some((l, r))
        })
        .collect();
    intervals.sort();
    let mut reach: Option<Rat> = None;
    for (l, r) in intervals {
        match &reach {
            None if l > Rat::zero() => return Some(l / rational::int(2)),
            Some(cur) if &l > cur => return Some((cur + l) / rational::int(2)),
            _ => {}
        }
        if reach.as_ref().is_none_or(|cur| &r > cur) {
            reach = Some(r);
        }
    }
    match reach {
        Some(cur) if cur >= total => None,
        Some(cur) => Some((cur + total) / rational::int(2)),
        None => Some(total / rational::int(2)),
    }
}

/// Exact decision for `[0,∞]`-categories: exponentiable iff every split of
/// every finite distance is covered by some intermediate object.
pub fn check_exponentiable_metric(x: &VCategory<Lawvere>) -> ExpVerdict {
    let n = x.len();
    for x0 in 0..n {
        for x2 in 0..n {
            if let Some(u0) = uncovered_split(x, x0, x2) {
                let total = x.a(x0, x2).as_finite().expect("finite").clone();
                let v0 = Cost::Finite(u0.clone());
                let v1 = Cost::Finite(total - u0);
                let w = witness(x, x0, x2, &v0, &v1).expect("uncovered split violates the inequality");
                return ExpVerdict {
                    status: ExpStatus::Counterexample,
                    witness: Some(w),
                    family: "critical splits of finite distances".into(),
                    family_size: 0,
                };
            }
        }
    }
    ExpVerdict {
        status: ExpStatus::PassedExhaustively,
        witness: None,
        family: "critical splits of finite distances".into(),
        family_size: 0,
    }
}

impl ExpQuantale for Bool2 {
    const EXHAUSTIVE: bool = true;

    fn seeds(_x: &VCategory<Self>) -> Vec<bool> {
        Vec::new()
    }

    fn interpolate(u: &bool, v: &bool, w: &bool) -> Vec<Interpolant<bool>> {
        vec![Interpolant {
            u: *u && *w,
            v: *v,
            case: None,
        }]
    }
}

impl ExpQuantale for Lawvere {
    fn seeds(x: &VCategory<Self>) -> Vec<Cost> {
        let mut out = Vec::new();
        for x0 in 0..x.len() {
            for x2 in 0..x.len() {
                if let Some(u0) = uncovered_split(x, x0, x2) {
                    let total = x.a(x0, x2).as_finite().expect("finite").clone();
                    push_unique(&mut out, Cost::Finite(&total - &u0));
                    push_unique(&mut out, Cost::Finite(u0));
                }
            }
        }
        let finite: Vec<Rat> = distinct_entries(x)
            .iter()
            .filter_map(|c| c.as_finite().cloned())
            .collect();
        for r in &finite {
            push_unique(&mut out, Cost::Finite(r.clone()));
        }
        for a in &finite {
            for b in &finite {
                if a > b {
                    push_unique(&mut out, Cost::Finite(a - b));
                }
            }
        }
        for (i, a) in finite.iter().enumerate() {
            for b in &finite[i..] {
                push_unique(&mut out, Cost::Finite((a + b) / rational::int(2)));
            }
        }
        out
    }

    fn interpolate(u: &Cost, v: &Cost, w: &Cost) -> Vec<Interpolant<Cost>> {
        // numerically: w ∧ (u + v) = max(w, u + v)
        let pair = if u.add(v) >= *w {
            (u.clone(), v.clone())
        } else {
            // u + v < w forces u, v finite and w - v > u
            (w.monus(v), v.clone())
        };
        vec![Interpolant {
            u: pair.0,
            v: pair.1,
            case: None,
        }]
    }
}

impl ExpQuantale for UnitInterval {
    fn seeds(x: &VCategory<Self>) -> Vec<Prob> {
        let entries = distinct_entries(x);
        let mut out = entries.clone();
        for a in &entries {
            for b in &entries {
                push_unique(&mut out, Self::tensor(a, b));
                push_unique(&mut out, Self::hom(a, b));
            }
        }
        out
    }

    fn interpolate(u: &Prob, v: &Prob, w: &Prob) -> Vec<Interpolant<Prob>> {
        let uv = Self::tensor(u, v);
        let u2 = if Self::leq(&uv, w) {
            u.clone()
        } else {
            // uv > w ≥ 0 so v > 0 and w / v < u
            Prob::new(w.value() / v.value()).expect("w / v < u ≤ 1")
        };
        vec![Interpolant {
            u: u2,
            v: v.clone(),
            case: None,
        }]
    }
}

/// Generator `f_{δ,α}` as a pair.
pub type Gen = (Rat, Rat);

/// The four-case construction on generators with positive values. Returns
/// `(u', v', case)`.
pub fn delta_generator_case(u: &Gen, v: &Gen, w: &Gen) -> (Gen, Gen, u8) {
    let d = &u.0 + &v.0;
    let a = &u.1 * &v.1;
    let case = match (d >= w.0, a <= w.1) {
        (true, true) => 1,
        (true, false) => 2,
        (false, true) => 3,
        (false, false) => 4,
    };
    let (ud, uv) = delta_case_formula(case, u, v, w);
    ((ud, uv), v.clone(), case)
}

/// The `u'` of a given case, evaluated whether or not its condition holds.
pub fn delta_case_formula(case: u8, u: &Gen, v: &Gen, w: &Gen) -> Gen {
    match case {
        1 => u.clone(),
        2 => (u.0.clone(), &w.1 / &v.1),
        3 => (&w.0 - &v.0, u.1.clone()),
        _ => (&w.0 - &v.0, &w.1 / &v.1),
    }
}

fn gen_to_step(g: &Gen) -> StepFn {
    StepFn::generator(g.0.clone(), g.1.clone()).expect("valid generator")
}

impl ExpQuantale for Delta {
    fn seeds(x: &VCategory<Self>) -> Vec<StepFn> {
        let entries = distinct_entries(x);
        let mut points: Vec<Rat> = Vec::new();
        let mut values: Vec<Rat> = Vec::new();
        for f in &entries {
            for (d, u) in f.pairs() {
                push_unique(&mut points, d.clone());
                push_unique(&mut values, u.clone());
            }
        }
        let mut deltas = points.clone();
        let mut us = values.clone();
        for a in &points {
            for b in &points {
                push_unique(&mut deltas, a + b);
                if a > b {
                    push_unique(&mut deltas, a - b);
                }
            }
        }
        for a in &values {
            for b in &values {
                push_unique(&mut us, a * b);
                if a < b {
                    push_unique(&mut us, a / b);
                }
            }
        }
        let mut out = entries;
        'outer: for d in &deltas {
            for u in &us {
                if out.len() >= FAMILY_CAP {
                    break 'outer;
                }
                if !u.is_zero() {
                    push_unique(&mut out, gen_to_step(&(d.clone(), u.clone())));
                }
            }
        }
        out
    }

    fn interpolate(u: &StepFn, v: &StepFn, w: &StepFn) -> Vec<Interpolant<StepFn>> {
        let mut out = Vec::new();
        for gu in u.pairs() {
            for gv in v.pairs() {
                for gw in w.pairs() {
                    let (u2, v2, case) = delta_generator_case(gu, gv, gw);
                    out.push(Interpolant {
                        u: gen_to_step(&u2),
                        v: gen_to_step(&v2),
                        case: Some(case),
                    });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationWitness<Q: Quantale> {
    pub u: Q::Value,
    pub v: Q::Value,
    pub w: Q::Value,
    pub pairs: Vec<Interpolant<Q::Value>>,
}

impl<Q: Quantale> InterpolationWitness<Q> {
    pub fn target(&self) -> Q::Value {
        Q::meet2(&self.w, &Q::tensor(&self.u, &self.v))
    }

    pub fn product(&self) -> Q::Value {
        Q::join(
            self.pairs
                .iter()
                .map(|p| Q::tensor(&p.u, &p.v))
                .collect::<Vec<_>>()
                .iter(),
        )
    }

    /// `u' ≤ u`, `v' ≤ v` and `u' ⊗ v' ≤ w` for every pair, and the join of
    /// the products equals `w ∧ (u ⊗ v)`.
    pub fn verify(&self) -> std::result::Result<(), String> {
        for p in &self.pairs {
            if !Q::leq(&p.u, &self.u) {
                return Err(format!("u' = {} is not below u", Q::to_qvalue(&p.u)));
            }
            if !Q::leq(&p.v, &self.v) {
                return Err(format!("v' = {} is not below v", Q::to_qvalue(&p.v)));
            }
            if !Q::leq(&Q::tensor(&p.u, &p.v), &self.w) {
                return Err("u' ⊗ v' is not below w".into());
            }
        }
        let (got, want) = (self.product(), self.target());
        if got != want {
            return Err(format!(
                "join of u' ⊗ v' is {} but w ∧ (u ⊗ v) is {}",
                Q::to_qvalue(&got),
                Q::to_qvalue(&want)
            ));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Json {
        let pairs: Vec<Json> = self
            .pairs
            .iter()
            .map(|p| {
                let mut o = json!({
                    "u'": Q::to_qvalue(&p.u).to_json(),
                    "v'": Q::to_qvalue(&p.v).to_json(),
                    "u'⊗v'": Q::to_qvalue(&Q::tensor(&p.u, &p.v)).to_json(),
                });
                if let Some(c) = p.case {
                    o["case"] = json!(c);
                }
                o
            })
            .collect();
        json!({
            "u": Q::to_qvalue(&self.u).to_json(),
            "v": Q::to_qvalue(&self.v).to_json(),
            "w": Q::to_qvalue(&self.w).to_json(),
            "meet": Q::to_qvalue(&self.target()).to_json(),
            "pairs": pairs,
        })
    }
}

pub fn quantale_interpolation<Q: ExpQuantale>(u: &Q::Value, v: &Q::Value, w: &Q::Value) -> InterpolationWitness<Q> {
    InterpolationWitness {
        u: u.clone(),
        v: v.clone(),
        w: w.clone(),
        pairs: Q::interpolate(u, v, w),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaSuite {
    pub case_counts: [usize; 4],
    pub checks: Vec<Check>,
}

impl DeltaSuite {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Runs the four-case construction on generator triples and re-verifies each
/// witness against the meet computed by the general step-function code.
pub fn delta_exponentiability_suite(triples: &[(Gen, Gen, Gen)]) -> Result<DeltaSuite> {
    let mut counts = [0usize; 4];
    let mut first_failure: Option<Check> = None;
    for (u, v, w) in triples {
        for g in [u, v, w] {
            if g.1.is_zero() {
                return Err(Error::InvalidValue(format!(
                    "generator f_{{{},0}} is bottom",
                    rational::format_rational(&g.0)
                )));
            }
        }
        let (u2, v2, case) = delta_generator_case(u, v, w);
        counts[case as usize - 1] += 1;
        let witness = InterpolationWitness::<Delta> {
            u: gen_to_step(u),
            v: gen_to_step(v),
            w: gen_to_step(w),
            pairs: vec![Interpolant {
                u: gen_to_step(&u2),
                v: gen_to_step(&v2),
                case: Some(case),
            }],
        };
        if let Err(e) = witness.verify() {
            first_failure.get_or_insert_with(|| Check::fail("witness identity", e, Some(witness.to_json())));
        }
    }
    let mut checks = vec![first_failure.unwrap_or_else(|| {
        Check::pass("witness identity", format!("{} generator triples", triples.len()))
    })];
    let missing: Vec<String> = (0..4)
        .filter(|&i| counts[i] == 0)
        .map(|i| (i + 1).to_string())
        .collect();
    checks.push(Check::from_bool(
        "all four cases exercised",
        missing.is_empty(),
        format!(
            "case counts {counts:?}{}",
            if missing.is_empty() {
                String::new()
            } else {
                format!(", missing {}", missing.join(", "))
            }
        ),
    ));
    Ok(DeltaSuite {
        case_counts: counts,
        checks,
    })
}

/// `δ3 = δ1 + δ2` or `α3 = α1 α2`: the adjacent case formulas must produce
/// the same product.
pub fn boundary_consistent(u: &Gen, v: &Gen, w: &Gen) -> bool {
    let d = &u.0 + &v.0;
    let a = &u.1 * &v.1;
    let prod = |case| {
        let u2 = delta_case_formula(case, u, v, w);
        gen_to_step(&u2).tensor(&gen_to_step(v))
    };
    let mut ok = true;
    if d == w.0 {
        ok &= prod(1) == prod(3) && prod(2) == prod(4);
    }
    if a == w.1 {
        ok &= prod(1) == prod(2) && prod(3) == prod(4);
    }
    ok
}
