//! Acceptance criteria 1 to 9, one PASS/FAIL line each.
//!
//! Run a subset with `cargo test --test acceptance -- 2 7`.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use common::*;
use qcat::basechange::{
    adjunction_law, apply_category, apply_functor, apply_module, member_escaping, morphism_law_suite,
    p_inf_join_counterexample, p_inf_join_failure_check, Certain, Embed, IInf, OInf, PInf, QMorphism,
    Support,
};
use qcat::cauchy::{
    self, candidate_left_adjoint, check_point_adjoint, converges_module, is_cauchy, is_cauchy_complete_bool2,
    is_representable, is_right_adjoint, presheaf_dist, sequence_modules, yoneda, EPSequence, Presheaf,
};
use qcat::expinj::{
    check_exponentiable, check_exponentiable_metric, delta_exponentiability_suite, delta_generator_case, ExpStatus,
    Gen, DEFAULT_DEPTH,
};
use qcat::json::{self, AnyDoc, Doc, NoResolver, ParseContext};
use qcat::laws::quantale_law_suite;
use qcat::rational::{int, one, rat, zero, Rat};
use qcat::vcat::{all_functors, VCategory, VFunctor};
use qcat::vmod::{check_adjoint, compose, eq_adj_mod_check, extension, functor_graph, lifting, EqAdjVerdict, VModule};
use qcat::{Bool2, Cost, Delta, Lawvere, Quantale, QuantaleId, StepFn, UnitInterval};
use rand::Rng;
use serde_json::Value as Json;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 9] = [
        (1, "quantale law suites", criterion_1),
        (2, "Δ generator laws and pointwise oracles", criterion_2),
        (3, "Yoneda", criterion_3),
        (4, "bool2 relation-algebra oracle", criterion_4),
        (5, "adjunction battery", criterion_5),
        (6, "Cauchy machinery", criterion_6),
        (7, "base change", criterion_7),
        (8, "exponentiability", criterion_8),
        (9, "CLI determinism and round trip", criterion_9),
    ];
    let wanted: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (n, name, run) in criteria {
        if !wanted.is_empty() && !wanted.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {n}: PASS  {name} ({detail}) [{secs:.1}s]"),
            Err(e) => {
                failed += 1;
                println!("criterion {n}: FAIL  {name}: {e} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

// ---------------------------------------------------------------- criterion 1

fn suite<Q: Quantale>(samples: &[Q::Value], exhaustive: bool) -> Outcome {
    let report = quantale_law_suite::<Q>(samples);
    if let Some(bad) = report.failures().next() {
        return Err(format!("{}: {} {}", Q::ID, bad.name, bad.detail));
    }
    ensure!(report.exhaustive == exhaustive, "{}: unexpected exhaustiveness", Q::ID);
    Ok(format!("{} {} samples/{} triples", Q::ID, report.samples, report.triples))
}

fn criterion_1() -> Outcome {
    let mut rng = rng(1);
    let cost = distinct_samples::<Lawvere>(&mut rng, 200);
    let unit = distinct_samples::<UnitInterval>(&mut rng, 200);
    let delta = distinct_samples::<Delta>(&mut rng, 200);
    ensure!(cost.len() == 200 && unit.len() == 200 && delta.len() == 200, "too few distinct samples");
    let parts = [
        suite::<Bool2>(&[false, true], true)?,
        suite::<Lawvere>(&cost, false)?,
        suite::<UnitInterval>(&unit, false)?,
        suite::<Delta>(&delta, false)?,
    ];
    Ok(parts.join(", "))
}

// ---------------------------------------------------------------- criterion 2

/// Pointwise value of a left-continuous step function, from its pairs alone.
fn ev(f: &StepFn, t: &Rat) -> Rat {
    f.pairs()
        .iter()
        .filter(|(d, _)| d < t)
        .map(|(_, u)| u.clone())
        .max()
        .unwrap_or_else(zero)
}

/// `y ⊘ x`, the residual of multiplication on `[0,1]`.
fn residual(y: &Rat, x: &Rat) -> Rat {
    if *x == zero() || y >= x {
        one()
    } else {
        y / x
    }
}

/// Smaller than every gap between the grid points used below (breakpoints
/// have denominator at most 2, test points at most 4).
fn eta() -> Rat {
    rat(1, 1_000_000)
}

/// `sup_{r ≤ t} f(r) g(t - r)`, over the points just after each breakpoint of
/// `f` and a uniform grid.
fn tensor_oracle(f: &StepFn, g: &StepFn, t: &Rat) -> Rat {
    let mut rs: Vec<Rat> = f.pairs().iter().map(|(d, _)| d + eta()).filter(|r| r <= t).collect();
    rs.extend((0..=64).map(|j| t * rat(j, 64)));
    rs.iter().map(|r| ev(f, r) * ev(g, &(t - r))).max().unwrap_or_else(zero)
}

/// The largest `h(s)` with `f(r) h(s) ≤ g(r + s)` for all `r`, made
/// left-continuous by evaluating just below `s`.
fn hom_oracle(f: &StepFn, g: &StepFn, s: &Rat) -> Rat {
    if *s == zero() {
        return zero();
    }
    let s = s - eta();
    let mut rs: Vec<Rat> = f.pairs().iter().map(|(d, _)| d + eta()).collect();
    rs.extend((0..=64).map(|j| rat(j, 8)));
    rs.iter()
        .map(|r| residual(&ev(g, &(r + &s)), &ev(f, r)))
        .min()
        .unwrap_or_else(one)
}

fn test_points(fs: &[&StepFn]) -> Vec<Rat> {
    let bps: BTreeSet<Rat> = fs.iter().flat_map(|f| f.pairs().iter().map(|(d, _)| d.clone())).collect();
    let mut grid: BTreeSet<Rat> = bps.clone();
    grid.insert(zero());
    for a in &bps {
        for b in &bps {
            grid.insert(a + b);
            if a >= b {
                grid.insert(a - b);
            }
        }
    }
    let grid: Vec<Rat> = grid.into_iter().collect();
    let mut points = grid.clone();
    points.extend(grid.windows(2).map(|w| (&w[0] + &w[1]) / int(2)));
    points.push(grid.last().expect("contains 0") + one());
    points
}

fn criterion_2() -> Outcome {
    let mut rng = rng(2);
    for i in 0..500 {
        let (d1, u1) = (rat(rng.gen_range(0..=40), rng.gen_range(1..=4)), positive_value(&mut rng));
        let (d2, u2) = (rat(rng.gen_range(0..=40), rng.gen_range(1..=4)), positive_value(&mut rng));
        let f = StepFn::generator(d1.clone(), u1.clone()).map_err(err)?;
        let g = StepFn::generator(d2.clone(), u2.clone()).map_err(err)?;
        let tensor = StepFn::generator(&d1 + &d2, &u1 * &u2).map_err(err)?;
        ensure!(f.tensor(&g) == tensor, "pair {i}: {f} ⊗ {g} = {}", f.tensor(&g));
        let dd = if d2 > d1 { &d2 - &d1 } else { zero() };
        let hom = StepFn::generator(dd, residual(&u2, &u1)).map_err(err)?;
        ensure!(f.hom(&g) == hom, "pair {i}: hom({f}, {g}) = {}", f.hom(&g));
    }
    let mut points = 0;
    for i in 0..100 {
        let f = step_fn_exact(&mut rng, 3);
        let g = step_fn_exact(&mut rng, 3);
        let t = f.tensor(&g);
        let h = f.hom(&g);
        for p in test_points(&[&f, &g, &t, &h]) {
            points += 1;
            ensure!(ev(&t, &p) == tensor_oracle(&f, &g, &p), "pair {i}: ({f} ⊗ {g})({p}) differs");
            ensure!(ev(&h, &p) == hom_oracle(&f, &g, &p), "pair {i}: hom({f}, {g})({p}) differs");
        }
    }
    Ok(format!("500 generator pairs, 100 three-step pairs at {points} points"))
}

// ---------------------------------------------------------------- criterion 3

fn yoneda_for<Q: Sample>(rng: &mut TestRng) -> Result<usize, String> {
    let mut checked = 0;
    for _ in 0..100 {
        let x = category::<Q>(rng, 5);
        for _ in 0..3 {
            let psi = presheaf::<Q>(rng, &x);
            for o in 0..x.len() {
                let d = presheaf_dist(&yoneda(&x, o), &psi).map_err(err)?;
                ensure!(d == *psi.get(o), "{}: [y({o}), ψ] = {d:?}, ψ({o}) = {:?}", Q::ID, psi.get(o));
                checked += 1;
            }
        }
    }
    Ok(checked)
}

fn criterion_3() -> Outcome {
    let mut rng = rng(3);
    let n = yoneda_for::<Bool2>(&mut rng)?
        + yoneda_for::<Lawvere>(&mut rng)?
        + yoneda_for::<UnitInterval>(&mut rng)?
        + yoneda_for::<Delta>(&mut rng)?;
    Ok(format!("400 categories, {n} identities"))
}

// ---------------------------------------------------------------- criterion 4

type Rel = Vec<Vec<bool>>;

fn rel(m: &VModule<Bool2>) -> Rel {
    m.matrix().to_rows()
}

fn hom_rel(x: &VCategory<Bool2>) -> Rel {
    x.hom().to_rows()
}

fn rel_compose(r: &Rel, s: &Rel, mid: usize) -> Rel {
    let cols = s.first().map_or(0, Vec::len);
    r.iter()
        .map(|row| (0..cols).map(|j| (0..mid).any(|k| row[k] && s[k][j])).collect())
        .collect()
}

fn rel_leq(r: &Rel, s: &Rel) -> bool {
    r.iter().zip(s).all(|(a, b)| a.iter().zip(b).all(|(x, y)| !x || *y))
}

fn rel_from_bits(rows: usize, cols: usize, bits: u32) -> Rel {
    (0..rows)
        .map(|i| (0..cols).map(|j| bits & (1 << (i * cols + j)) != 0).collect())
        .collect()
}

/// Union of every `rows × cols` relation satisfying `ok`, which must itself
/// satisfy `ok` for the largest solution to exist.
fn largest(rows: usize, cols: usize, ok: impl Fn(&Rel) -> bool) -> Result<Rel, String> {
    let mut union = vec![vec![false; cols]; rows];
    for bits in 0u32..(1 << (rows * cols)) {
        let r = rel_from_bits(rows, cols, bits);
        if ok(&r) {
            for i in 0..rows {
                for j in 0..cols {
                    union[i][j] |= r[i][j];
                }
            }
        }
    }
    ensure!(ok(&union), "the union of all solutions is not a solution");
    Ok(union)
}

/// Presheaves of a Boolean category by direct enumeration, each with every
/// left adjoint found by enumerating copresheaves.
fn enumerate_adjoints(x: &VCategory<Bool2>) -> Vec<(Vec<bool>, Vec<Vec<bool>>)> {
    let n = x.len();
    let a = hom_rel(x);
    let vectors: Vec<Vec<bool>> = (0..1u32 << n).map(|b| (0..n).map(|i| b & (1 << i) != 0).collect()).collect();
    let is_presheaf = |p: &Vec<bool>| (0..n).all(|y| (0..n).all(|z| !(a[y][z] && p[z]) || p[y]));
    let is_copresheaf = |p: &Vec<bool>| (0..n).all(|y| (0..n).all(|z| !(p[y] && a[y][z]) || p[z]));
    vectors
        .iter()
        .filter(|p| is_presheaf(p))
        .map(|psi| {
            let lefts = vectors
                .iter()
                .filter(|phi| is_copresheaf(phi))
                .filter(|phi| (0..n).any(|y| phi[y] && psi[y]))
                .filter(|phi| (0..n).all(|y| (0..n).all(|z| !(psi[y] && phi[z]) || a[y][z])))
                .cloned()
                .collect();
            (psi.clone(), lefts)
        })
        .collect()
}

/// Compares right-adjointness, the candidate and completeness with the
/// enumeration. Returns the number of presheaves examined.
fn bool2_adjoint_oracle(x: &Arc<VCategory<Bool2>>) -> Result<usize, String> {
    let n = x.len();
    let a = hom_rel(x);
    let found = enumerate_adjoints(x);
    let mut complete = true;
    let mut adjoint = 0;
    for (psi_v, lefts) in &found {
        let psi = Presheaf::new(x.clone(), psi_v.clone()).map_err(err)?;
        let lib = is_right_adjoint(&psi).is_ok();
        ensure!(lib == !lefts.is_empty(), "right adjointness of {psi_v:?} on {:?}", a);
        ensure!(lefts.len() <= 1, "{} left adjoints of {psi_v:?}", lefts.len());
        if let Some(left) = lefts.first() {
            adjoint += 1;
            ensure!(candidate_left_adjoint(&psi).values() == left.as_slice(), "candidate of {psi_v:?}");
            let representable = (0..n).any(|o| (0..n).all(|y| psi_v[y] == a[y][o]));
            ensure!(representable == is_representable(&psi).is_some(), "representability of {psi_v:?}");
            complete &= representable;
        }
    }
    let verdict = is_cauchy_complete_bool2(x).map_err(err)?;
    ensure!(verdict.complete == complete, "completeness of {:?}", a);
    ensure!(verdict.presheaves == found.len() && verdict.adjoint == adjoint, "presheaf counts of {:?}", a);
    Ok(found.len())
}

fn criterion_4() -> Outcome {
    let mut rng = rng(4);
    let preorders: Vec<_> = (1..=3).flat_map(all_preorders).collect();
    ensure!(preorders.len() == 34, "{} preorders on at most 3 points", preorders.len());
    let mut presheaves = 0;
    for x in &preorders {
        presheaves += bool2_adjoint_oracle(x)?;
    }
    let pick = |rng: &mut TestRng| preorders[rng.gen_range(0..preorders.len())].clone();
    let instances = 1200;
    for i in 0..instances {
        let (x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let (n, m, p) = (x.len(), y.len(), z.len());
        let phi = module::<Bool2>(&mut rng, &x, &y);
        let psi = module::<Bool2>(&mut rng, &y, &z);
        let chi = module::<Bool2>(&mut rng, &x, &z);
        let omega = module::<Bool2>(&mut rng, &z, &y);
        let composite = compose(&psi, &phi).map_err(err)?;
        ensure!(rel(&composite) == rel_compose(&rel(&phi), &rel(&psi), m), "instance {i}: composite");
        let ext = extension(&chi, &phi).map_err(err)?;
        let ext_oracle = largest(m, p, |eta| rel_leq(&rel_compose(&rel(&phi), eta, m), &rel(&chi)))?;
        ensure!(rel(&ext) == ext_oracle, "instance {i}: extension");
        let lift = lifting(&phi, &omega).map_err(err)?;
        let lift_oracle = largest(p, n, |eta| rel_leq(&rel_compose(eta, &rel(&phi), n), &rel(&omega)))?;
        ensure!(rel(&lift) == lift_oracle, "instance {i}: lifting");
    }
    Ok(format!(
        "{} instances: 34 preorders with {presheaves} presheaves, {instances} module triples",
        34 + instances
    ))
}

// ---------------------------------------------------------------- criterion 5

fn graph_adjoint<Q: Sample>(rng: &mut TestRng, count: usize) -> Result<(usize, usize), String> {
    let mut applicable = 0;
    let mut compared = 0;
    for _ in 0..count {
        let f = functor::<Q>(rng, 4);
        let (lower, upper) = functor_graph(&f);
        ensure!(check_adjoint(&lower, &upper).map_err(err)?.is_ok(), "{}: f_* ⊣ f^* fails for {:?}", Q::ID, f.map());
        let others = all_functors(f.source(), f.target(), 256).unwrap_or_default();
        for g in others.iter().take(12) {
            let (g_lower, g_upper) = functor_graph(g);
            compared += 1;
            match eq_adj_mod_check(&lower, &g_lower, &upper, &g_upper).map_err(err)? {
                EqAdjVerdict::Refuted(why) => return Err(format!("{}: lemma refuted: {why}", Q::ID)),
                EqAdjVerdict::Equal => applicable += 1,
                EqAdjVerdict::NotApplicable(_) => {}
            }
        }
        let x = f.source();
        for o in 0..x.len() {
            for o2 in 0..x.len() {
                let (l1, u1) = functor_graph(&VFunctor::new(Arc::new(VCategory::unit()), x.clone(), vec![o]).map_err(err)?);
                let (l2, u2) = functor_graph(&VFunctor::new(Arc::new(VCategory::unit()), x.clone(), vec![o2]).map_err(err)?);
                compared += 1;
                match eq_adj_mod_check(&l1, &l2, &u1, &u2).map_err(err)? {
                    EqAdjVerdict::Refuted(why) => return Err(format!("{}: lemma refuted: {why}", Q::ID)),
                    EqAdjVerdict::Equal => applicable += 1,
                    EqAdjVerdict::NotApplicable(_) => {}
                }
            }
        }
    }
    Ok((applicable, compared))
}

fn criterion_5() -> Outcome {
    let mut rng = rng(5);
    let mut applicable = 0;
    let mut compared = 0;
    for (a, c) in [
        graph_adjoint::<Bool2>(&mut rng, 125)?,
        graph_adjoint::<Lawvere>(&mut rng, 125)?,
        graph_adjoint::<UnitInterval>(&mut rng, 125)?,
        graph_adjoint::<Delta>(&mut rng, 125)?,
    ] {
        applicable += a;
        compared += c;
    }
    ensure!(applicable > 0, "the lemma was never applicable");
    let mut presheaves = 0;
    for _ in 0..200 {
        let x = category::<Bool2>(&mut rng, 4);
        presheaves += bool2_adjoint_oracle(&x)?;
    }
    Ok(format!(
        "500 functors, lemma applicable in {applicable} of {compared} comparisons, \
         uniqueness over {presheaves} Boolean presheaves"
    ))
}

// ---------------------------------------------------------------- criterion 6

fn term<Q: Quantale>(s: &EPSequence<Q>, n: usize) -> usize {
    let p = s.preamble();
    if n < p.len() {
        p[n]
    } else {
        s.cycle()[(n - p.len()) % s.cycle().len()]
    }
}

/// `⋁_{N ≤ 50} ⋀_{N ≤ n, m ≤ N + 50} a(x_n, x_m)`.
fn truncated_measure<Q: Quantale>(s: &EPSequence<Q>) -> Q::Value {
    let x = s.base();
    let tails: Vec<Q::Value> = (0..=50)
        .map(|big_n| {
            let terms: Vec<_> = (big_n..=big_n + 50)
                .flat_map(|n| (big_n..=big_n + 50).map(move |m| (n, m)))
                .map(|(n, m)| x.a(term(s, n), term(s, m)).clone())
                .collect();
            Q::meet(terms.iter())
        })
        .collect();
    Q::join(tails.iter())
}

#[derive(Default)]
struct SeqStats {
    sequences: usize,
    cauchy: usize,
    representable: usize,
    module_limits: usize,
}

fn sequences_for<Q: Sample>(rng: &mut TestRng, stats: &mut SeqStats) -> Result<(), String> {
    for i in 0..50 {
        let x = category::<Q>(rng, 5);
        let s = sequence(rng, &x);
        stats.sequences += 1;
        ensure!(cauchy::cauchy_measure(&s) == truncated_measure(&s), "{} sequence {i}: measure", Q::ID);
        let (phi, psi) = sequence_modules(&s);
        let adjoint = check_point_adjoint(&phi, &psi).map_err(err)?.is_ok();
        ensure!(adjoint == is_cauchy(&s), "{} sequence {i}: Cauchy but φ_s ⊣ ψ_s is {adjoint}", Q::ID);
        if !is_cauchy(&s) {
            continue;
        }
        stats.cauchy += 1;
        if let Some(o) = is_representable(&psi) {
            stats.representable += 1;
            ensure!(converges_module(&s, o).map_err(err)?.converges, "{} sequence {i}: representable, no module limit", Q::ID);
        }
        for o in 0..x.len() {
            if converges_module(&s, o).map_err(err)?.converges {
                stats.module_limits += 1;
                ensure!(
                    x.sequence_converges_topologically(&s, o).map_err(err)?,
                    "{} sequence {i}: module limit {o} is not a topological limit",
                    Q::ID
                );
            }
        }
    }
    for i in 0..25 {
        let x = symmetric_category::<Q>(rng, 5);
        ensure!(x.is_symmetric(), "{}: generated category is not symmetric", Q::ID);
        let s = sequence(rng, &x);
        let (phi, psi) = sequence_modules(&s);
        ensure!(phi.values() == psi.values(), "{} symmetric sequence {i}: φ_s ≠ ψ_s", Q::ID);
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let mut rng = rng(6);
    let mut stats = SeqStats::default();
    sequences_for::<Bool2>(&mut rng, &mut stats)?;
    sequences_for::<Lawvere>(&mut rng, &mut stats)?;
    sequences_for::<UnitInterval>(&mut rng, &mut stats)?;
    sequences_for::<Delta>(&mut rng, &mut stats)?;
    ensure!(stats.cauchy > 0 && stats.cauchy < stats.sequences, "corpus lacks Cauchy or non-Cauchy sequences");
    Ok(format!(
        "{} sequences, {} Cauchy, {} representable, {} module limits, 100 symmetric",
        stats.sequences, stats.cauchy, stats.representable, stats.module_limits
    ))
}

// ---------------------------------------------------------------- criterion 7

fn laws_pass(checks: Vec<qcat::report::Check>, what: &str) -> Result<usize, String> {
    if let Some(bad) = checks.iter().find(|c| !c.passed) {
        return Err(format!("{what}: {} {}", bad.name, bad.detail));
    }
    Ok(checks.len())
}

fn preserved<M: QMorphism>(phi: &VModule<M::Source>, psi: &VModule<M::Source>) -> Result<(), String> {
    let x = Arc::new(apply_category::<M>(phi.source()).map_err(err)?);
    let y = Arc::new(apply_category::<M>(phi.target()).map_err(err)?);
    let fphi = apply_module::<M>(phi, x.clone(), y.clone()).map_err(err)?;
    let fpsi = apply_module::<M>(psi, y, x).map_err(err)?;
    ensure!(check_adjoint(&fphi, &fpsi).map_err(err)?.is_ok(), "{} breaks an adjunction", M::NAME);
    Ok(())
}

fn commutes<M: QMorphism>(f: &VFunctor<M::Source>) -> Result<(), String> {
    let x = Arc::new(apply_category::<M>(f.source()).map_err(err)?);
    let y = Arc::new(apply_category::<M>(f.target()).map_err(err)?);
    let ff = apply_functor::<M>(f, x.clone(), y.clone()).map_err(err)?;
    let (lower, upper) = functor_graph(f);
    let (f_lower, f_upper) = functor_graph(&ff);
    ensure!(apply_module::<M>(&lower, x.clone(), y.clone()).map_err(err)? == f_lower, "{}: F(f_*) ≠ (Ff)_*", M::NAME);
    ensure!(apply_module::<M>(&upper, y, x).map_err(err)? == f_upper, "{}: F(f^*) ≠ (Ff)^*", M::NAME);
    Ok(())
}

/// Adjoint pairs from functor graphs and from right adjoint presheaves.
fn adjoint_pairs<Q: Sample>(rng: &mut TestRng, count: usize) -> Vec<(VModule<Q>, VModule<Q>)> {
    let mut out = Vec::new();
    while out.len() < count {
        if rng.gen_bool(0.5) {
            let (l, u) = functor_graph(&functor::<Q>(rng, 4));
            out.push((l, u));
        } else {
            let x = category::<Q>(rng, 4);
            let psi = presheaf::<Q>(rng, &x);
            if let Ok(pair) = is_right_adjoint(&psi) {
                out.push((pair.left, pair.right));
            }
        }
    }
    out
}

fn criterion_7() -> Outcome {
    let mut rng = rng(7);
    let costs = distinct_samples::<Lawvere>(&mut rng, 200);
    let deltas = distinct_samples::<Delta>(&mut rng, 200);
    let mut laws = laws_pass(morphism_law_suite::<IInf>(&costs), "I_inf")?;
    laws += laws_pass(morphism_law_suite::<OInf>(&deltas), "O_inf")?;
    laws += laws_pass(morphism_law_suite::<PInf>(&deltas), "P_inf")?;
    laws += laws_pass(vec![adjunction_law::<OInf, IInf>(&deltas, &costs)], "O_inf ⊣ I_inf")?;
    laws += laws_pass(vec![adjunction_law::<IInf, PInf>(&costs, &deltas)], "I_inf ⊣ P_inf")?;
    for c in &costs {
        ensure!(PInf::apply(&IInf::apply(c)) == *c, "P_inf I_inf({c}) ≠ {c}");
        ensure!(OInf::apply(&IInf::apply(c)) == *c, "O_inf I_inf({c}) ≠ {c}");
    }
    for f in &deltas {
        for g in deltas.iter().take(50) {
            let sum = PInf::apply(f).add(&PInf::apply(g));
            ensure!(PInf::apply(&f.tensor(g)) == sum, "P_inf({f} ⊗ {g}) ≠ P_inf({f}) + P_inf({g})");
        }
    }

    ensure!(p_inf_join_failure_check(64).passed, "stored P_inf counterexample not exhibited");
    let family = p_inf_join_counterexample(64);
    ensure!(family.iter().all(|f| PInf::apply(f) == Cost::Infinite), "a family member has a finite image");
    ensure!(PInf::apply(&StepFn::epsilon()) == Cost::zero(), "P_inf(ε) ≠ 0");
    for h in deltas.iter().filter(|h| **h != StepFn::epsilon()) {
        let n = member_escaping(h).ok_or("no member escapes a function below ε")?;
        let member = StepFn::generator(zero(), one() - rat(1, n.into())).map_err(err)?;
        ensure!(!member.leq(h), "f_{{0,1-1/{n}}} ≤ {h}: ε is not the least upper bound");
    }

    let mut pairs = 0;
    for (l, r) in adjoint_pairs::<Bool2>(&mut rng, 25) {
        preserved::<Embed<Lawvere>>(&l, &r)?;
        preserved::<Embed<UnitInterval>>(&l, &r)?;
        preserved::<Embed<Delta>>(&l, &r)?;
        pairs += 1;
    }
    for (l, r) in adjoint_pairs::<Lawvere>(&mut rng, 25) {
        preserved::<Support<Lawvere>>(&l, &r)?;
        preserved::<Certain<Lawvere>>(&l, &r)?;
        preserved::<IInf>(&l, &r)?;
        pairs += 1;
    }
    for (l, r) in adjoint_pairs::<UnitInterval>(&mut rng, 25) {
        preserved::<Support<UnitInterval>>(&l, &r)?;
        preserved::<Certain<UnitInterval>>(&l, &r)?;
        pairs += 1;
    }
    for (l, r) in adjoint_pairs::<Delta>(&mut rng, 25) {
        preserved::<Support<Delta>>(&l, &r)?;
        preserved::<Certain<Delta>>(&l, &r)?;
        preserved::<OInf>(&l, &r)?;
        preserved::<PInf>(&l, &r)?;
        pairs += 1;
    }

    let mut functors = 0;
    for _ in 0..25 {
        let f = functor::<Bool2>(&mut rng, 4);
        commutes::<Embed<Lawvere>>(&f)?;
        commutes::<Embed<UnitInterval>>(&f)?;
        commutes::<Embed<Delta>>(&f)?;
        let f = functor::<Lawvere>(&mut rng, 4);
        commutes::<IInf>(&f)?;
        commutes::<Support<Lawvere>>(&f)?;
        commutes::<Certain<Lawvere>>(&f)?;
        let f = functor::<UnitInterval>(&mut rng, 4);
        commutes::<Support<UnitInterval>>(&f)?;
        commutes::<Certain<UnitInterval>>(&f)?;
        let f = functor::<Delta>(&mut rng, 4);
        commutes::<OInf>(&f)?;
        commutes::<PInf>(&f)?;
        commutes::<Support<Delta>>(&f)?;
        functors += 4;
    }
    Ok(format!(
        "{laws} law checks on 200 samples, 64-member join counterexample, \
         {pairs} adjoint pairs preserved, {functors} functors commute"
    ))
}

// ---------------------------------------------------------------- criterion 8

fn cost(r: Rat) -> Cost {
    Cost::Finite(r)
}

/// Numerical value of a cost; `None` for `∞`.
fn num(c: &Cost) -> Option<Rat> {
    c.as_finite().cloned()
}

fn cost_max(a: &Cost, b: &Cost) -> Cost {
    match (num(a), num(b)) {
        (Some(x), Some(y)) => cost(x.max(y)),
        _ => Cost::Infinite,
    }
}

/// The gap between the two sides, recomputed with plain `min`, `max` and `+`.
fn metric_sides(x: &VCategory<Lawvere>, x0: usize, x2: usize, v0: &Cost, v1: &Cost) -> (Cost, Cost) {
    let lhs = (0..x.len())
        .map(|x1| cost_max(x.a(x0, x1), v0).add(&cost_max(x.a(x1, x2), v1)))
        .min_by(|a, b| a.cmp(b))
        .expect("nonempty");
    let rhs = cost_max(x.a(x0, x2), &v0.add(v1));
    (lhs, rhs)
}

fn case_of(u: &Gen, v: &Gen, w: &Gen) -> u8 {
    let d = &u.0 + &v.0;
    let a = &u.1 * &v.1;
    match (d >= w.0, a <= w.1) {
        (true, true) => 1,
        (true, false) => 2,
        (false, true) => 3,
        (false, false) => 4,
    }
}

fn gen_step(g: &Gen) -> StepFn {
    StepFn::generator(g.0.clone(), g.1.clone()).expect("valid generator")
}

fn criterion_8() -> Outcome {
    let mut rng = rng(8);
    let preorders: Vec<_> = (1..=3).flat_map(all_preorders).collect();
    for x in &preorders {
        let n = x.len();
        let holds = (0..n).all(|x0| {
            (0..n).all(|x2| {
                [false, true].iter().all(|&v0| {
                    [false, true].iter().all(|&v1| {
                        let rhs = *x.a(x0, x2) && v0 && v1;
                        !rhs || (0..n).any(|x1| *x.a(x0, x1) && v0 && *x.a(x1, x2) && v1)
                    })
                })
            })
        });
        ensure!(holds, "inequality fails by enumeration");
        let verdict = check_exponentiable(x, DEFAULT_DEPTH);
        ensure!(verdict.status == ExpStatus::PassedExhaustively, "preorder {:?}: {:?}", x.hom().to_rows(), verdict.status);
    }

    let two = VCategory::<Lawvere>::from_rows(
        vec!["p".into(), "q".into()],
        vec![vec![cost(zero()), cost(int(2))], vec![cost(int(2)), cost(zero())]],
    )
    .map_err(err)?;
    let verdict = check_exponentiable(&two, DEFAULT_DEPTH);
    let w = verdict.witness.as_ref().ok_or("no witness for the two-point space")?;
    let v0 = Lawvere::from_qvalue(&w.v0).map_err(err)?;
    let v1 = Lawvere::from_qvalue(&w.v1).map_err(err)?;
    let (x0, x2) = (two.index_of(&w.x0).map_err(err)?, two.index_of(&w.x2).map_err(err)?);
    let (lhs, rhs) = metric_sides(&two, x0, x2, &v0, &v1);
    ensure!(lhs > rhs, "witness does not violate the inequality: {lhs} vs {rhs}");
    ensure!(check_exponentiable_metric(&two).is_counterexample(), "metric checker disagrees on the two-point space");

    let mut agree = 0;
    for _ in 0..100 {
        let x = category::<Lawvere>(&mut rng, 4);
        let family = check_exponentiable(&x, DEFAULT_DEPTH).is_counterexample();
        let metric = check_exponentiable_metric(&x).is_counterexample();
        ensure!(family == metric, "family and metric verdicts differ on {:?}", x.hom().to_rows());
        agree += 1;
    }

    let mut triples: Vec<(Gen, Gen, Gen)> = Vec::new();
    let mut per_case = [0usize; 4];
    while triples.len() < 200 {
        let g = |rng: &mut TestRng| (breakpoint(rng), positive_value(rng));
        let t = (g(&mut rng), g(&mut rng), g(&mut rng));
        let c = case_of(&t.0, &t.1, &t.2) as usize - 1;
        if per_case[c] < 50 {
            per_case[c] += 1;
            triples.push(t);
        }
    }
    let suite = delta_exponentiability_suite(&triples).map_err(err)?;
    if let Some(bad) = suite.checks.iter().find(|c| !c.passed) {
        return Err(format!("{}: {}", bad.name, bad.detail));
    }
    ensure!(suite.case_counts == [50; 4], "case counts {:?}", suite.case_counts);
    for (u, v, w) in &triples {
        let (u2, v2, case) = delta_generator_case(u, v, w);
        ensure!(case == case_of(u, v, w), "case {case} for a case {} triple", case_of(u, v, w));
        ensure!(u2.0 >= u.0 && u2.1 <= u.1 && v2.0 >= v.0 && v2.1 <= v.1, "interpolant not below (u, v)");
        let product = gen_step(&(&u2.0 + &v2.0, &u2.1 * &v2.1));
        let uv = gen_step(&(&u.0 + &v.0, &u.1 * &v.1));
        let ws = gen_step(w);
        for p in test_points(&[&product, &uv, &ws]) {
            ensure!(ev(&product, &p) == ev(&uv, &p).min(ev(&ws, &p)), "product ≠ meet at {p}");
        }
    }
    Ok(format!(
        "{} preorders, two-point counterexample, {agree} metric agreements, 200 Δ triples {:?}",
        preorders.len(),
        suite.case_counts
    ))
}

// ---------------------------------------------------------------- criterion 9

fn corpus_for<Q: Sample>(rng: &mut TestRng, wrap: fn(Doc<Q>) -> AnyDoc) -> Vec<AnyDoc> {
    let mut docs = Vec::new();
    for _ in 0..5 {
        let x = category::<Q>(rng, 4);
        let y = category::<Q>(rng, 3);
        docs.push(wrap(Doc::Module(module::<Q>(rng, &x, &y))));
        docs.push(wrap(Doc::Presheaf(presheaf::<Q>(rng, &x))));
        docs.push(wrap(Doc::Sequence(sequence(rng, &x))));
        docs.push(wrap(Doc::Functor(functor::<Q>(rng, 3))));
        docs.push(wrap(Doc::ValueList((0..4).map(|_| Q::sample(rng)).collect())));
        docs.push(wrap(Doc::Category(x)));
    }
    docs
}

fn corpus() -> Vec<AnyDoc> {
    let mut rng = rng(9);
    let mut docs = corpus_for::<Bool2>(&mut rng, AnyDoc::Bool2);
    docs.extend(corpus_for::<Lawvere>(&mut rng, AnyDoc::Cost));
    docs.extend(corpus_for::<UnitInterval>(&mut rng, AnyDoc::Unit));
    docs.extend(corpus_for::<Delta>(&mut rng, AnyDoc::Delta));
    docs
}

fn run_cli(args: &[&str], dir: &Path) -> Result<(Vec<u8>, i32), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qcat"))
        .args(args)
        .current_dir(dir)
        .output()
        .map_err(err)?;
    Ok((out.stdout, out.status.code().unwrap_or(-1)))
}

/// Commands run twice on each document to compare their bytes.
fn commands_for(doc: &AnyDoc) -> Vec<Vec<&'static str>> {
    use qcat::json::DocKind;
    let mut cmds = vec![vec!["validate"]];
    match doc.kind() {
        DocKind::Category => {
            cmds.push(vec!["complete-check"]);
            cmds.push(vec!["exp-check"]);
            cmds.push(vec!["--text", "dual"]);
        }
        DocKind::Presheaf => cmds.push(vec!["right-adjoint"]),
        DocKind::Sequence => cmds.push(vec!["seq-converges"]),
        DocKind::Functor => cmds.push(vec!["graph"]),
        DocKind::ValueList => cmds.push(vec!["quantale-test"]),
        DocKind::Module => cmds.push(vec!["--text", "validate"]),
    }
    cmds
}

fn criterion_9() -> Outcome {
    let docs = corpus();
    let dir = tempfile::tempdir().map_err(err)?;
    let ctx_resolver = NoResolver;
    let ctx = ParseContext::new(false, &ctx_resolver);
    let mut runs = 0;
    for (i, doc) in docs.iter().enumerate() {
        let printed = json::to_pretty(&doc.to_json());
        let reparsed = json::parse_str(&printed, &ctx).map_err(|e| format!("document {i}: {e}"))?;
        ensure!(reparsed == *doc, "document {i}: parse(print(d)) ≠ d");
        ensure!(json::to_pretty(&reparsed.to_json()) == printed, "document {i}: print is not stable");

        let file = format!("doc{i}.json");
        std::fs::write(dir.path().join(&file), &printed).map_err(err)?;
        let (out, code) = run_cli(&["validate", &file], dir.path())?;
        ensure!(code == 0, "document {i}: validate exited {code}");
        let report: Json = serde_json::from_slice(&out).map_err(err)?;
        ensure!(report["output"] == doc.to_json(), "document {i}: validate output differs from the document");

        for cmd in commands_for(doc) {
            let mut args = cmd.clone();
            args.push(&file);
            let first = run_cli(&args, dir.path())?;
            let second = run_cli(&args, dir.path())?;
            runs += 2;
            ensure!(first == second, "document {i}: `qcat {}` differs between runs", args.join(" "));
            ensure!(first.1 != 2, "document {i}: `qcat {}` rejected its input", args.join(" "));
        }
    }
    let quantales: BTreeSet<QuantaleId> = docs.iter().map(AnyDoc::quantale).collect();
    ensure!(quantales.len() == 4, "corpus misses a quantale");
    Ok(format!("{} documents round-trip, {runs} CLI runs byte-identical in pairs", docs.len()))
}
