//! A reusable battery of quantale laws, evaluated on a finite sample set.
//!
//! Unary and binary laws run over all samples and pairs. Ternary laws run over
//! all triples when that is cheap, and otherwise over every pair combined with
//! a deterministically chosen third sample.

use serde_json::json;

use crate::quantale::Quantale;
use crate::report::Check;
use crate::value::QuantaleId;

/// Above this many samples the ternary laws stop being exhaustive.
pub const EXHAUSTIVE_LIMIT: usize = 30;

#[derive(Debug, Clone)]
pub struct LawReport {
    pub quantale: QuantaleId,
    pub samples: usize,
    pub triples: usize,
    pub exhaustive: bool,
    pub checks: Vec<Check>,
}

impl LawReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Law<'a, Q: Quantale> {
    name: &'static str,
    samples: &'a [Q::Value],
    counterexample: Option<Vec<usize>>,
    tested: usize,
}

impl<'a, Q: Quantale> Law<'a, Q> {
    fn new(name: &'static str, samples: &'a [Q::Value]) -> Self {
        Law {
            name,
            samples,
            counterexample: None,
            tested: 0,
        }
    }

    fn record(&mut self, holds: bool, at: &[usize]) {
        self.tested += 1;
        if !holds && self.counterexample.is_none() {
            self.counterexample = Some(at.to_vec());
        }
    }

    fn finish(self) -> Check {
        match self.counterexample {
            None => Check::pass(self.name, format!("{} instances", self.tested)),
            Some(at) => {
                let values: Vec<_> = at
                    .iter()
                    .map(|&i| Q::to_qvalue(&self.samples[i]).to_json())
                    .collect();
                let shown: Vec<String> = at
                    .iter()
                    .map(|&i| Q::to_qvalue(&self.samples[i]).to_string())
                    .collect();
                Check::fail(
                    self.name,
                    format!("fails at ({})", shown.join(", ")),
                    Some(json!({ "law": self.name, "values": values })),
                )
            }
        }
    }
}

fn triples(n: usize) -> Vec<[usize; 3]> {
    if n <= EXHAUSTIVE_LIMIT {
        let mut out = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    out.push([i, j, k]);
                }
            }
        }
        out
    } else {
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push([i, j, (i * 31 + j * 17 + 7) % n]);
            }
        }
        out
    }
}

/// Runs every law on `samples`.
pub fn quantale_law_suite<Q: Quantale>(samples: &[Q::Value]) -> LawReport {
    let n = samples.len();
    let s = samples;
    let ts = triples(n);
    let mut checks = Vec::new();

    let eq = |a: &Q::Value, b: &Q::Value| a == b;
    let leq = Q::leq;

    // order
    let mut refl = Law::<Q>::new("order reflexive", s);
    let mut bounds = Law::<Q>::new("bottom <= u <= top", s);
    let mut unit = Law::<Q>::new("tensor unit", s);
    let mut absorbing = Law::<Q>::new("tensor with bottom", s);
    let mut idem = Law::<Q>::new("join/meet idempotent", s);
    for i in 0..n {
        let u = &s[i];
        refl.record(leq(u, u), &[i]);
        bounds.record(leq(&Q::bottom(), u) && leq(u, &Q::top()), &[i]);
        unit.record(eq(&Q::tensor(&Q::unit(), u), u) && eq(&Q::tensor(u, &Q::unit()), u), &[i]);
        absorbing.record(eq(&Q::tensor(u, &Q::bottom()), &Q::bottom()), &[i]);
        idem.record(eq(&Q::join2(u, u), u) && eq(&Q::meet2(u, u), u), &[i]);
    }

    let mut antisym = Law::<Q>::new("order antisymmetric", s);
    let mut comm = Law::<Q>::new("tensor commutative", s);
    let mut lattice_comm = Law::<Q>::new("join/meet commutative", s);
    let mut absorption = Law::<Q>::new("absorption", s);
    let mut bound_laws = Law::<Q>::new("join is least upper bound, meet greatest lower bound", s);
    let mut order_join = Law::<Q>::new("u <= v iff u v v = v", s);
    let mut monotone = Law::<Q>::new("tensor monotone", s);
    let mut tb_leq = Law::<Q>::new("totally below implies below", s);
    let mut tb_interp = Law::<Q>::new("totally below interpolates", s);
    let mut decided = true;
    for i in 0..n {
        for j in 0..n {
            let (u, v) = (&s[i], &s[j]);
            let at = [i, j];
            antisym.record(!(leq(u, v) && leq(v, u)) || eq(u, v), &at);
            comm.record(eq(&Q::tensor(u, v), &Q::tensor(v, u)), &at);
            let (join, meet) = (Q::join2(u, v), Q::meet2(u, v));
            lattice_comm.record(eq(&join, &Q::join2(v, u)) && eq(&meet, &Q::meet2(v, u)), &at);
            absorption.record(
                eq(&Q::join2(u, &Q::meet2(u, v)), u) && eq(&Q::meet2(u, &Q::join2(u, v)), u),
                &at,
            );
            bound_laws.record(
                leq(u, &join) && leq(v, &join) && leq(&meet, u) && leq(&meet, v),
                &at,
            );
            order_join.record(leq(u, v) == eq(&join, v), &at);
            if leq(u, v) {
                monotone.record(leq(&Q::tensor(u, u), &Q::tensor(v, v)), &at);
            }
            match Q::totally_below(u, v) {
                None => decided = false,
                Some(tb) => {
                    tb_leq.record(!tb || leq(u, v), &at);
                    if tb {
                        let ok = Q::interpolant(u, v).is_some_and(|y| {
                            Q::totally_below(u, &y) == Some(true)
                                && Q::totally_below(&y, v) == Some(true)
                        });
                        tb_interp.record(ok, &at);
                    }
                }
            }
        }
    }

    let mut trans = Law::<Q>::new("order transitive", s);
    let mut assoc = Law::<Q>::new("tensor associative", s);
    let mut lattice_assoc = Law::<Q>::new("join/meet associative", s);
    let mut distrib = Law::<Q>::new("tensor distributes over joins", s);
    let mut residuation = Law::<Q>::new("residuation (hom)", s);
    let mut heyting = Law::<Q>::new("heyting contract", s);
    let mut frame = Law::<Q>::new("frame law", s);
    let mut tb_compose = Law::<Q>::new("totally below composes with order", s);
    for &[i, j, k] in &ts {
        let (u, v, w) = (&s[i], &s[j], &s[k]);
        let at = [i, j, k];
        trans.record(!(leq(u, v) && leq(v, w)) || leq(u, w), &at);
        assoc.record(
            eq(&Q::tensor(&Q::tensor(u, v), w), &Q::tensor(u, &Q::tensor(v, w))),
            &at,
        );
        lattice_assoc.record(
            eq(&Q::join2(&Q::join2(u, v), w), &Q::join2(u, &Q::join2(v, w)))
                && eq(&Q::meet2(&Q::meet2(u, v), w), &Q::meet2(u, &Q::meet2(v, w))),
            &at,
        );
        distrib.record(
            eq(
                &Q::tensor(u, &Q::join2(v, w)),
                &Q::join2(&Q::tensor(u, v), &Q::tensor(u, w)),
            ),
            &at,
        );
        // u ⊗ w ≤ v  ⟺  w ≤ hom(u, v)
        residuation.record(leq(&Q::tensor(u, w), v) == leq(w, &Q::hom(u, v)), &at);
        // u ∧ v ≤ w  ⟺  v ≤ (u → w)
        heyting.record(leq(&Q::meet2(u, v), w) == leq(v, &Q::heyting(u, w)), &at);
        frame.record(
            eq(
                &Q::meet2(u, &Q::join2(v, w)),
                &Q::join2(&Q::meet2(u, v), &Q::meet2(u, w)),
            ),
            &at,
        );
        if let (Some(uv), Some(vw)) = (Q::totally_below(u, v), Q::totally_below(v, w)) {
            let uw = Q::totally_below(u, w) == Some(true);
            let left = !(leq(u, v) && vw) || uw;
            let right = !(uv && leq(v, w)) || uw;
            tb_compose.record(left && right, &at);
        }
    }

    checks.extend([
        refl.finish(),
        antisym.finish(),
        trans.finish(),
        bounds.finish(),
        idem.finish(),
        lattice_comm.finish(),
        lattice_assoc.finish(),
        absorption.finish(),
        bound_laws.finish(),
        order_join.finish(),
        assoc.finish(),
        comm.finish(),
        unit.finish(),
        monotone.finish(),
        distrib.finish(),
        absorbing.finish(),
        residuation.finish(),
        heyting.finish(),
        frame.finish(),
    ]);
    if decided {
        checks.extend([tb_leq.finish(), tb_compose.finish(), tb_interp.finish()]);
    }

    LawReport {
        quantale: Q::ID,
        samples: n,
        triples: ts.len(),
        exhaustive: n <= EXHAUSTIVE_LIMIT,
        checks,
    }
}
