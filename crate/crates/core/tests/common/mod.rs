//! Seeded random generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;
use std::sync::Arc;

use qcat::cauchy::{Copresheaf, EPSequence, Presheaf};
use qcat::matrix::Matrix;
use qcat::rational::{rat, Rat};
use qcat::vcat::{VCategory, VFunctor};
use qcat::vmod::VModule;
use qcat::{Bool2, Cost, Delta, Lawvere, Quantale, StepFn, UnitInterval};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub trait Sample: Quantale {
    /// Small values, suitable as category entries.
    fn sample(rng: &mut TestRng) -> Self::Value;
    /// A wider range, used when many distinct values are wanted.
    fn sample_wide(rng: &mut TestRng) -> Self::Value {
        Self::sample(rng)
    }
}

impl Sample for Bool2 {
    fn sample(rng: &mut TestRng) -> bool {
        rng.gen_bool(0.5)
    }
}

impl Sample for Lawvere {
    fn sample(rng: &mut TestRng) -> Cost {
        if rng.gen_bool(0.15) {
            Cost::Infinite
        } else {
            Cost::Finite(rat(rng.gen_range(0..=12), rng.gen_range(1..=4)))
        }
    }

    fn sample_wide(rng: &mut TestRng) -> Cost {
        if rng.gen_bool(0.02) {
            Cost::Infinite
        } else {
            Cost::Finite(rat(rng.gen_range(0..=80), rng.gen_range(1..=7)))
        }
    }
}

impl Sample for UnitInterval {
    fn sample(rng: &mut TestRng) -> qcat::Prob {
        let d = rng.gen_range(1..=6);
        prob(rat(rng.gen_range(0..=d), d))
    }

    fn sample_wide(rng: &mut TestRng) -> qcat::Prob {
        let d = rng.gen_range(1..=40);
        prob(rat(rng.gen_range(0..=d), d))
    }
}

impl Sample for Delta {
    fn sample(rng: &mut TestRng) -> StepFn {
        let gens = rng.gen_range(0..=2);
        step_fn(rng, gens, 2)
    }

    fn sample_wide(rng: &mut TestRng) -> StepFn {
        let gens = rng.gen_range(0..=4);
        step_fn(rng, gens, 4)
    }
}

pub fn prob(r: Rat) -> qcat::Prob {
    qcat::Prob::new(r).expect("value in [0,1]")
}

/// A breakpoint in `[0, 6]` with denominator at most 2.
pub fn breakpoint(rng: &mut TestRng) -> Rat {
    rat(rng.gen_range(0..=12), 2)
}

/// A value in `(0, 1]` with denominator at most 5.
pub fn positive_value(rng: &mut TestRng) -> Rat {
    let d = rng.gen_range(1..=5);
    rat(rng.gen_range(1..=d), d)
}

/// Join of `gens` random generators whose breakpoints have denominator `den`.
pub fn step_fn(rng: &mut TestRng, gens: usize, den: i64) -> StepFn {
    StepFn::from_generators(
        (0..gens).map(|_| (rat(rng.gen_range(0..=6 * den), den), positive_value(rng))),
    )
}

/// A step function with exactly `steps` steps.
pub fn step_fn_exact(rng: &mut TestRng, steps: usize) -> StepFn {
    loop {
        let f = step_fn(rng, steps + 2, 2);
        if f.pairs().len() == steps {
            return f;
        }
    }
}

/// `count` distinct values from `Q::sample_wide`.
pub fn distinct_samples<Q: Sample>(rng: &mut TestRng, count: usize) -> Vec<Q::Value> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 100 * count {
        attempts += 1;
        let v = Q::sample_wide(rng);
        if seen.insert(v.clone()) {
            out.push(v);
        }
    }
    out
}

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

fn raw_matrix<Q: Sample>(rng: &mut TestRng, n: usize, symmetric: bool) -> Matrix<Q::Value> {
    let mut m = Matrix::filled(n, n, Q::bottom());
    for i in 0..n {
        m.set(i, i, Q::unit());
        for j in 0..n {
            if i == j || (symmetric && j < i) {
                continue;
            }
            let v = if rng.gen_bool(0.25) { Q::bottom() } else { Q::sample(rng) };
            if symmetric {
                m.set(j, i, v.clone());
            }
            m.set(i, j, v);
        }
    }
    m
}

/// Adds an isomorphic copy of object `j`.
pub fn with_copy<Q: Quantale>(x: &VCategory<Q>, j: usize) -> VCategory<Q> {
    let n = x.len();
    let src = |i: usize| if i == n { j } else { i };
    let hom = Matrix::from_fn(n + 1, n + 1, |a, b| x.a(src(a), src(b)).clone());
    VCategory::new(names(n + 1), hom).expect("a copy of an object keeps the laws")
}

/// A random category with between 1 and `max_n` objects: the least category
/// above a random matrix, sometimes with an isomorphic copy of one object.
pub fn category<Q: Sample>(rng: &mut TestRng, max_n: usize) -> Arc<VCategory<Q>> {
    category_with(rng, max_n, false)
}

pub fn symmetric_category<Q: Sample>(rng: &mut TestRng, max_n: usize) -> Arc<VCategory<Q>> {
    category_with(rng, max_n, true)
}

fn category_with<Q: Sample>(rng: &mut TestRng, max_n: usize, symmetric: bool) -> Arc<VCategory<Q>> {
    let copy = max_n > 1 && rng.gen_bool(0.3);
    let n = rng.gen_range(1..=if copy { max_n - 1 } else { max_n });
    let raw = raw_matrix::<Q>(rng, n, symmetric);
    let x = VCategory::path_closure(names(n), raw).expect("closure is a category");
    if copy {
        let j = rng.gen_range(0..n);
        Arc::new(with_copy(&x, j))
    } else {
        Arc::new(x)
    }
}

/// `ψ(y) = ⋁_x a(y,x) ⊗ r(x)` for a random `r`.
pub fn presheaf<Q: Sample>(rng: &mut TestRng, x: &Arc<VCategory<Q>>) -> Presheaf<Q> {
    let n = x.len();
    let r: Vec<Q::Value> = (0..n).map(|_| weight::<Q>(rng)).collect();
    let values = (0..n)
        .map(|y| {
            let terms: Vec<_> = (0..n).map(|i| Q::tensor(x.a(y, i), &r[i])).collect();
            Q::join(terms.iter())
        })
        .collect();
    Presheaf::new(x.clone(), values).expect("weighted join of representables")
}

pub fn copresheaf<Q: Sample>(rng: &mut TestRng, x: &Arc<VCategory<Q>>) -> Copresheaf<Q> {
    let n = x.len();
    let r: Vec<Q::Value> = (0..n).map(|_| weight::<Q>(rng)).collect();
    let values = (0..n)
        .map(|y| {
            let terms: Vec<_> = (0..n).map(|i| Q::tensor(&r[i], x.a(i, y))).collect();
            Q::join(terms.iter())
        })
        .collect();
    Copresheaf::new(x.clone(), values).expect("weighted join of corepresentables")
}

fn weight<Q: Sample>(rng: &mut TestRng) -> Q::Value {
    match rng.gen_range(0..5) {
        0 => Q::bottom(),
        1 => Q::unit(),
        _ => Q::sample(rng),
    }
}

/// `φ(x,y) = ⋁ a(x,x') ⊗ r(x',y') ⊗ b(y',y)` for a random `r`.
pub fn module<Q: Sample>(
    rng: &mut TestRng,
    x: &Arc<VCategory<Q>>,
    y: &Arc<VCategory<Q>>,
) -> VModule<Q> {
    let (n, m) = (x.len(), y.len());
    let r = Matrix::from_fn(n, m, |_, _| weight::<Q>(rng));
    let phi = Matrix::from_fn(n, m, |i, j| {
        let mut terms = Vec::new();
        for i2 in 0..n {
            for j2 in 0..m {
                terms.push(Q::tensor(&Q::tensor(x.a(i, i2), r.get(i2, j2)), y.a(j2, j)));
            }
        }
        Q::join(terms.iter())
    });
    VModule::new(x.clone(), y.clone(), phi).expect("closed under both actions")
}

/// A random functor into a random category. The source is the least category
/// above a random matrix bounded by the pulled-back hom, so the map is a
/// functor by construction; sometimes the source is the full pullback.
pub fn functor<Q: Sample>(rng: &mut TestRng, max_n: usize) -> VFunctor<Q> {
    let y = category::<Q>(rng, max_n);
    let n = rng.gen_range(1..=max_n);
    let map: Vec<usize> = (0..n).map(|_| rng.gen_range(0..y.len())).collect();
    let full = rng.gen_bool(0.3);
    let raw = Matrix::from_fn(n, n, |i, j| {
        let b = y.a(map[i], map[j]).clone();
        if i == j || full {
            b
        } else {
            Q::meet2(&b, &Q::sample(rng))
        }
    });
    let x = Arc::new(VCategory::path_closure(names(n), raw).expect("closure is a category"));
    VFunctor::new(x, y, map).expect("bounded by the pulled-back hom")
}

/// Objects isomorphic to `x` (including `x`).
pub fn iso_class<Q: Quantale>(c: &VCategory<Q>, x: usize) -> Vec<usize> {
    let k = Q::unit();
    (0..c.len())
        .filter(|&y| Q::leq(&k, c.a(x, y)) && Q::leq(&k, c.a(y, x)))
        .collect()
}

/// A random eventually periodic sequence; about half the time the cycle
/// stays inside one isomorphism class, which makes it Cauchy.
pub fn sequence<Q: Quantale>(rng: &mut TestRng, x: &Arc<VCategory<Q>>) -> EPSequence<Q> {
    let n = x.len();
    let pre_len = rng.gen_range(0..=3);
    let preamble = (0..pre_len).map(|_| rng.gen_range(0..n)).collect();
    let cyc_len = rng.gen_range(1..=3);
    let cycle = if rng.gen_bool(0.5) {
        let class = iso_class(x, rng.gen_range(0..n));
        (0..cyc_len).map(|_| *class.choose(rng).expect("class contains x")).collect()
    } else {
        (0..cyc_len).map(|_| rng.gen_range(0..n)).collect()
    };
    EPSequence::new(x.clone(), preamble, cycle).expect("indices in range")
}

/// Every reflexive transitive relation on `n` points, as Boolean categories.
pub fn all_preorders(n: usize) -> Vec<Arc<VCategory<Bool2>>> {
    let off: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for bits in 0u32..(1 << off.len()) {
        let mut m = vec![vec![false; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = true;
        }
        for (b, &(i, j)) in off.iter().enumerate() {
            m[i][j] = bits & (1 << b) != 0;
        }
        let transitive =
            (0..n).all(|i| (0..n).all(|j| (0..n).all(|l| !(m[i][j] && m[j][l]) || m[i][l])));
        if transitive {
            out.push(Arc::new(VCategory::from_rows(names(n), m).expect("preorder")));
        }
    }
    out
}
