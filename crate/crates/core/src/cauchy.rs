//! Presheaves, adjoint presheaves and Cauchy sequences.
//!
//! A presheaf `ψ: X ⇸ E` is a vector with `a(x',x) ⊗ ψ(x) ≤ ψ(x')`, a copresheaf
//! `φ: E ⇸ X` one with `φ(x) ⊗ a(x,x') ≤ φ(x')`. Since a left adjoint of `ψ`
//! must be `φ(x) = [ψ, x^*]`, deciding whether `ψ` is a right adjoint takes a
//! single adjunction check.
//!
//! In all four quantales `k` is the top element and cannot be a finite join of
//! strictly smaller elements, so over a finite category every adjoint presheaf
//! turns out to be representable. The procedures here do not assume that; they
//! report what they compute.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::delta::{Delta, StepFn};
use crate::error::{Error, Result, Violation};
use crate::matrix::Matrix;
use crate::quantale::{Bool2, Quantale};
use crate::rational::Rat;
use crate::value::QuantaleId;
use crate::vcat::VCategory;
use crate::vmod::{self, AdjointPair, VModule};

/// `ψ: X ⇸ E`, a contravariant functor `X → V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presheaf<Q: Quantale> {
    base: Arc<VCategory<Q>>,
    values: Vec<Q::Value>,
}

/// `φ: E ⇸ X`, a covariant functor `X → V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Copresheaf<Q: Quantale> {
    base: Arc<VCategory<Q>>,
    values: Vec<Q::Value>,
}

fn check_len<Q: Quantale>(base: &VCategory<Q>, values: &[Q::Value]) -> Result<()> {
    if values.len() != base.len() {
        return Err(Error::Shape(format!(
            "{} values for {} objects",
            values.len(),
            base.len()
        )));
    }
    Ok(())
}

impl<Q: Quantale> Presheaf<Q> {
    pub fn new(base: Arc<VCategory<Q>>, values: Vec<Q::Value>) -> Result<Self> {
        check_len(&base, &values)?;
        let n = base.len();
        for x2 in 0..n {
            for x in 0..n {
                let lhs = Q::tensor(base.a(x2, x), &values[x]);
                if !Q::leq(&lhs, &values[x2]) {
                    let (o2, o) = (base.name(x2), base.name(x));
                    return Err(Violation::new(
                        "presheaf action",
                        format!("({o2},{o})"),
                        format!("a({o2},{o}) ⊗ ψ({o})"),
                        Q::to_qvalue(&lhs),
                        format!("ψ({o2})"),
                        Q::to_qvalue(&values[x2]),
                    )
                    .into());
                }
            }
        }
        Ok(Presheaf { base, values })
    }

    pub fn base(&self) -> &Arc<VCategory<Q>> {
        &self.base
    }

    pub fn values(&self) -> &[Q::Value] {
        &self.values
    }

    pub fn get(&self, x: usize) -> &Q::Value {
        &self.values[x]
    }

    /// As a module `X ⇸ E`.
    pub fn to_module(&self) -> VModule<Q> {
        let m = Matrix::from_fn(self.base.len(), 1, |x, _| self.values[x].clone());
        VModule::new_unchecked(self.base.clone(), Arc::new(VCategory::unit()), m)
    }
}

impl<Q: Quantale> Copresheaf<Q> {
    pub fn new(base: Arc<VCategory<Q>>, values: Vec<Q::Value>) -> Result<Self> {
        check_len(&base, &values)?;
        let n = base.len();
        for x in 0..n {
            for x2 in 0..n {
                let lhs = Q::tensor(&values[x], base.a(x, x2));
                if !Q::leq(&lhs, &values[x2]) {
                    let (o, o2) = (base.name(x), base.name(x2));
                    return Err(Violation::new(
                        "copresheaf action",
                        format!("({o},{o2})"),
                        format!("φ({o}) ⊗ a({o},{o2})"),
                        Q::to_qvalue(&lhs),
                        format!("φ({o2})"),
                        Q::to_qvalue(&values[x2]),
                    )
                    .into());
                }
            }
        }
        Ok(Copresheaf { base, values })
    }

    pub fn base(&self) -> &Arc<VCategory<Q>> {
        &self.base
    }

    pub fn values(&self) -> &[Q::Value] {
        &self.values
    }

    pub fn get(&self, x: usize) -> &Q::Value {
        &self.values[x]
    }

    /// As a module `E ⇸ X`.
    pub fn to_module(&self) -> VModule<Q> {
        let m = Matrix::from_fn(1, self.base.len(), |_, x| self.values[x].clone());
        VModule::new_unchecked(Arc::new(VCategory::unit()), self.base.clone(), m)
    }
}

/// `x^* = a(-, x)`.
pub fn yoneda<Q: Quantale>(base: &Arc<VCategory<Q>>, x: usize) -> Presheaf<Q> {
    let values = (0..base.len()).map(|y| base.a(y, x).clone()).collect();
    Presheaf {
        base: base.clone(),
        values,
    }
}

/// `x_* = a(x, -)`.
pub fn coyoneda<Q: Quantale>(base: &Arc<VCategory<Q>>, x: usize) -> Copresheaf<Q> {
    let values = (0..base.len()).map(|y| base.a(x, y).clone()).collect();
    Copresheaf {
        base: base.clone(),
        values,
    }
}

/// `[ψ, ψ'] = ⋀_x hom(ψ(x), ψ'(x))`.
pub fn presheaf_dist<Q: Quantale>(psi: &Presheaf<Q>, psi2: &Presheaf<Q>) -> Result<Q::Value> {
    if *psi.base != *psi2.base {
        return Err(Error::Shape("presheaves over different categories".into()));
    }
    let terms: Vec<_> = psi
        .values
        .iter()
        .zip(&psi2.values)
        .map(|(u, v)| Q::hom(u, v))
        .collect();
    Ok(Q::meet(terms.iter()))
}

/// The only possible left adjoint: `φ(x) = [ψ, x^*] = ⋀_y hom(ψ(y), a(y,x))`.
pub fn candidate_left_adjoint<Q: Quantale>(psi: &Presheaf<Q>) -> Copresheaf<Q> {
    let base = &psi.base;
    let values = (0..base.len())
        .map(|x| {
            let terms: Vec<_> = (0..base.len())
                .map(|y| Q::hom(&psi.values[y], base.a(y, x)))
                .collect();
            Q::meet(terms.iter())
        })
        .collect();
    Copresheaf {
        base: base.clone(),
        values,
    }
}

/// Adjunction check `φ ⊣ ψ` between a copresheaf and a presheaf.
pub fn check_point_adjoint<Q: Quantale>(
    phi: &Copresheaf<Q>,
    psi: &Presheaf<Q>,
) -> Result<std::result::Result<AdjointPair<Q>, Violation>> {
    if *phi.base != *psi.base {
        return Err(Error::Shape("copresheaf and presheaf over different categories".into()));
    }
    vmod::check_adjoint(&phi.to_module(), &psi.to_module())
}

/// `Ok(pair)` when `ψ` has a left adjoint (the candidate), `Err` with the
/// failing inequality otherwise.
pub fn is_right_adjoint<Q: Quantale>(
    psi: &Presheaf<Q>,
) -> std::result::Result<AdjointPair<Q>, Violation> {
    let phi = candidate_left_adjoint(psi);
    check_point_adjoint(&phi, psi).expect("candidate shares the base")
}

/// Some `x` with `ψ = x^*`.
pub fn is_representable<Q: Quantale>(psi: &Presheaf<Q>) -> Option<usize> {
    (0..psi.base.len()).find(|&x| yoneda(&psi.base, x).values == psi.values)
}

#[derive(Debug, Clone)]
pub struct CompletenessVerdict<Q: Quantale> {
    pub complete: bool,
    pub presheaves: usize,
    pub adjoint: usize,
    pub unrepresentable: Vec<Presheaf<Q>>,
}

/// Enumerates all `2^|X|` Boolean presheaves.
pub fn is_cauchy_complete_bool2(x: &Arc<VCategory<Bool2>>) -> Result<CompletenessVerdict<Bool2>> {
    let n = x.len();
    if n > 20 {
        return Err(Error::Unsupported(format!(
            "enumerating 2^{n} presheaves is too large"
        )));
    }
    let mut presheaves = 0;
    let mut adjoint = 0;
    let mut unrepresentable = Vec::new();
    for bits in 0u32..(1u32 << n) {
        let values = (0..n).map(|i| bits & (1 << i) != 0).collect();
        let Ok(psi) = Presheaf::new(x.clone(), values) else {
            continue;
        };
        presheaves += 1;
        if is_right_adjoint(&psi).is_ok() {
            adjoint += 1;
            if is_representable(&psi).is_none() {
                unrepresentable.push(psi);
            }
        }
    }
    Ok(CompletenessVerdict {
        complete: unrepresentable.is_empty(),
        presheaves,
        adjoint,
        unrepresentable,
    })
}

/// `x_n`: the preamble, then the cycle repeated forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EPSequence<Q: Quantale> {
    base: Arc<VCategory<Q>>,
    preamble: Vec<usize>,
    cycle: Vec<usize>,
}

impl<Q: Quantale> EPSequence<Q> {
    pub fn new(base: Arc<VCategory<Q>>, preamble: Vec<usize>, cycle: Vec<usize>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::Shape("sequence cycle must be nonempty".into()));
        }
        if let Some(&bad) = preamble.iter().chain(&cycle).find(|&&i| i >= base.len()) {
            return Err(Error::UnknownObject(format!("object index {bad}")));
        }
        Ok(EPSequence {
            base,
            preamble,
            cycle,
        })
    }

    pub fn from_names(base: Arc<VCategory<Q>>, preamble: &[&str], cycle: &[&str]) -> Result<Self> {
        let p = preamble.iter().map(|n| base.index_of(n)).collect::<Result<_>>()?;
        let c = cycle.iter().map(|n| base.index_of(n)).collect::<Result<_>>()?;
        EPSequence::new(base, p, c)
    }

    pub fn constant(base: Arc<VCategory<Q>>, x: usize) -> Result<Self> {
        EPSequence::new(base, Vec::new(), vec![x])
    }

    pub fn base(&self) -> &Arc<VCategory<Q>> {
        &self.base
    }

    pub fn preamble(&self) -> &[usize] {
        &self.preamble
    }

    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    /// `x_n`, counting from 0.
    pub fn term(&self, n: usize) -> usize {
        match self.preamble.get(n) {
            Some(&x) => x,
            None => self.cycle[(n - self.preamble.len()) % self.cycle.len()],
        }
    }

    /// The distinct values taken infinitely often.
    pub fn cycle_values(&self) -> Vec<usize> {
        self.cycle.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
    }

    /// The subsequence from index `skip` on.
    pub fn drop_prefix(&self, skip: usize) -> EPSequence<Q> {
        let p = self.preamble.len();
        if skip <= p {
            EPSequence {
                base: self.base.clone(),
                preamble: self.preamble[skip..].to_vec(),
                cycle: self.cycle.clone(),
            }
        } else {
            let r = (skip - p) % self.cycle.len();
            let mut cycle = self.cycle[r..].to_vec();
            cycle.extend_from_slice(&self.cycle[..r]);
            EPSequence {
                base: self.base.clone(),
                preamble: Vec::new(),
                cycle,
            }
        }
    }
}

/// `⋁_N ⋀_{n,m≥N} a(x_n, x_m)`; the tail of an eventually periodic sequence
/// is its cycle, so this is the meet over ordered pairs of cycle entries.
pub fn cauchy_measure<Q: Quantale>(s: &EPSequence<Q>) -> Q::Value {
    let vals = s.cycle_values();
    let terms: Vec<_> = vals
        .iter()
        .flat_map(|&c| vals.iter().map(move |&d| (c, d)))
        .map(|(c, d)| s.base.a(c, d).clone())
        .collect();
    Q::meet(terms.iter())
}

pub fn is_cauchy<Q: Quantale>(s: &EPSequence<Q>) -> bool {
    Q::leq(&Q::unit(), &cauchy_measure(s))
}

/// `φ_s(x) = ⋀_c a(c, x)` and `ψ_s(x) = ⋀_c a(x, c)` over cycle values `c`.
pub fn sequence_modules<Q: Quantale>(s: &EPSequence<Q>) -> (Copresheaf<Q>, Presheaf<Q>) {
    let base = &s.base;
    let vals = s.cycle_values();
    let n = base.len();
    let meet_over = |f: &dyn Fn(usize) -> Q::Value| {
        let terms: Vec<_> = vals.iter().map(|&c| f(c)).collect();
        Q::meet(terms.iter())
    };
    let phi = (0..n).map(|x| meet_over(&|c| base.a(c, x).clone())).collect();
    let psi = (0..n).map(|x| meet_over(&|c| base.a(x, c).clone())).collect();
    (
        Copresheaf {
            base: base.clone(),
            values: phi,
        },
        Presheaf {
            base: base.clone(),
            values: psi,
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModuleConvergence {
    pub converges: bool,
    /// Only for Cauchy sequences is module convergence known to match
    /// topological convergence.
    pub cauchy: bool,
}

/// `s → x` in the module sense: `φ_s = x_*` and `ψ_s = x^*`.
pub fn converges_module<Q: Quantale>(s: &EPSequence<Q>, x: usize) -> Result<ModuleConvergence> {
    if x >= s.base.len() {
        return Err(Error::UnknownObject(format!("object index {x}")));
    }
    let (phi, psi) = sequence_modules(s);
    let converges =
        phi.values == coyoneda(&s.base, x).values && psi.values == yoneda(&s.base, x).values;
    Ok(ModuleConvergence {
        converges,
        cauchy: is_cauchy(s),
    })
}

/// The longest preamble `sequence_from_adjoint` will build.
pub const MAX_PREAMBLE: usize = 10_000;

/// A Cauchy sequence inducing a given adjunction `φ ⊣ ψ`: `x_n` is the first
/// object with `u_n ≤ φ(x_n) ⊗ ψ(x_n)`, where `u_n` is the instance's
/// approximating sequence of `k`. Over a finite category the choice becomes
/// constant once `u_n` exceeds every value below `k`.
pub fn sequence_from_adjoint<Q: Quantale>(
    phi: &Copresheaf<Q>,
    psi: &Presheaf<Q>,
) -> Result<EPSequence<Q>> {
    if check_point_adjoint(phi, psi)?.is_err() {
        return Err(Error::Unsupported("φ is not left adjoint to ψ".into()));
    }
    let base = &psi.base;
    let n = base.len();
    let weights: Vec<_> = (0..n).map(|x| Q::tensor(&phi.values[x], &psi.values[x])).collect();
    let k = Q::unit();
    let limit = weights
        .iter()
        .position(|w| Q::leq(&k, w))
        .ok_or_else(|| Error::Bug("adjoint pair without an object of weight k".into()))?;
    // {x : u_n ≤ w_x} shrinks as n grows and always contains `limit`, so
    // once the first qualifying object is `limit` it stays so
    let mut preamble = Vec::new();
    for i in 1..=MAX_PREAMBLE as u32 {
        let u = Q::approximant(i);
        let choice = weights
            .iter()
            .position(|w| Q::leq(&u, w))
            .ok_or_else(|| Error::Bug("approximant below no weight".into()))?;
        if choice == limit {
            return EPSequence::new(base.clone(), preamble, vec![limit]);
        }
        preamble.push(choice);
    }
    Err(Error::IterationCap(MAX_PREAMBLE))
}

#[derive(Debug, Clone)]
pub struct CandidateVerdict<Q: Quantale> {
    pub adjoint: bool,
    pub representable_by: Option<usize>,
    pub left_adjoint: Copresheaf<Q>,
    pub failure: Option<Violation>,
}

#[derive(Debug, Clone)]
pub struct CompletionCertificate<Q: Quantale> {
    pub verdicts: Vec<CandidateVerdict<Q>>,
    /// Yoneda images first, then the adjoint candidates, with the distance
    /// `[ψ, ψ']` between them: a finite piece of the completion.
    pub members: VCategory<Q>,
    pub yoneda_dense: bool,
    pub symmetric: bool,
    /// Delta only: every distance is a finite distribution function.
    pub finitary: Option<bool>,
}

pub fn completion_certificate<Q: Quantale>(
    base: &Arc<VCategory<Q>>,
    candidates: &[Presheaf<Q>],
) -> Result<CompletionCertificate<Q>> {
    let mut verdicts = Vec::with_capacity(candidates.len());
    let mut members: Vec<(String, Presheaf<Q>)> = (0..base.len())
        .map(|x| (format!("y({})", base.name(x)), yoneda(base, x)))
        .collect();
    for (i, psi) in candidates.iter().enumerate() {
        if *psi.base != **base {
            return Err(Error::Shape(format!("candidate {i} is over another category")));
        }
        let left_adjoint = candidate_left_adjoint(psi);
        let (adjoint, failure) = match is_right_adjoint(psi) {
            Ok(_) => (true, None),
            Err(v) => (false, Some(v)),
        };
        if adjoint {
            members.push((format!("candidate {i}"), psi.clone()));
        }
        verdicts.push(CandidateVerdict {
            adjoint,
            representable_by: is_representable(psi),
            left_adjoint,
            failure,
        });
    }
    let m = members.len();
    let mut rows = Vec::with_capacity(m);
    for (_, p) in &members {
        let row = members
            .iter()
            .map(|(_, q)| presheaf_dist(p, q))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let names = members.iter().map(|(n, _)| n.clone()).collect();
    let members_cat = VCategory::from_rows(names, rows)
        .map_err(|e| Error::Bug(format!("presheaf distances do not form a category: {e}")))?;
    let yoneda_part: BTreeSet<usize> = (0..base.len()).collect();
    let yoneda_dense = members_cat.closure(&yoneda_part).len() == m;
    let symmetric = members_cat.is_symmetric();
    let finitary = (Q::ID == QuantaleId::Delta).then(|| {
        members_cat.hom().iter().all(|v| {
            Q::to_qvalue(v)
                .as_step()
                .is_some_and(StepFn::is_finite_distribution)
        })
    });
    Ok(CompletionCertificate {
        verdicts,
        members: members_cat,
        yoneda_dense,
        symmetric,
        finitary,
    })
}

/// `B_{δ,u}(x) = {y : a(x,y)(δ) > u and a(y,x)(δ) > u}`.
pub fn basic_open(x: &VCategory<Delta>, center: usize, delta: &Rat, u: &Rat) -> BTreeSet<usize> {
    (0..x.len())
        .filter(|&y| {
            x.a(center, y).eval_finite(delta) > *u && x.a(y, center).eval_finite(delta) > *u
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantale::{Cost, Lawvere};
    use crate::rational::{int, rat};

    fn names(n: usize) -> Vec<String> {
        ["p", "q", "r"][..n].iter().map(|s| s.to_string()).collect()
    }

    fn c(n: i64, d: i64) -> Cost {
        Cost::Finite(rat(n, d))
    }

    fn two_point(d: Cost) -> Arc<VCategory<Lawvere>> {
        Arc::new(
            VCategory::from_rows(names(2), vec![vec![c(0, 1), d.clone()], vec![d, c(0, 1)]])
                .unwrap(),
        )
    }

    #[test]
    fn yoneda_lemma_on_a_chain() {
        let x = Arc::new(
            VCategory::<Bool2>::from_rows(names(2), vec![vec![true, true], vec![false, true]])
                .unwrap(),
        );
        assert_eq!(yoneda(&x, 1).values(), &[true, true]);
        let psi = Presheaf::new(x.clone(), vec![true, false]).unwrap();
        for i in 0..2 {
            assert_eq!(presheaf_dist(&yoneda(&x, i), &psi).unwrap(), *psi.get(i));
        }
    }

    #[test]
    fn representable_metric_presheaf() {
        let x = two_point(c(1, 1));
        let psi = Presheaf::new(x.clone(), vec![c(0, 1), c(1, 1)]).unwrap();
        assert_eq!(is_representable(&psi), Some(0));
        assert!(is_right_adjoint(&psi).is_ok());
    }

    #[test]
    fn midpoint_presheaf_is_not_adjoint() {
        // k = 0 is not a finite join of positive distances, so no midpoint
        // presheaf can have a left adjoint
        let x = two_point(c(1, 1));
        let psi = Presheaf::new(x.clone(), vec![c(1, 2), c(1, 2)]).unwrap();
        let phi = candidate_left_adjoint(&psi);
        assert_eq!(phi.values(), &[c(1, 2), c(1, 2)]);
        assert!(is_right_adjoint(&psi).is_err());
        assert_eq!(is_representable(&psi), None);
    }

    #[test]
    fn discrete_top_presheaf_has_no_adjoint() {
        let x = Arc::new(VCategory::<Bool2>::discrete(names(2)).unwrap());
        let psi = Presheaf::new(x, vec![true, true]).unwrap();
        assert_eq!(candidate_left_adjoint(&psi).values(), &[false, false]);
        assert!(is_right_adjoint(&psi).is_err());
    }

    #[test]
    fn complete_small_orders() {
        let x = Arc::new(VCategory::<Bool2>::discrete(names(2)).unwrap());
        let v = is_cauchy_complete_bool2(&x).unwrap();
        assert!(v.complete);
        assert_eq!(v.presheaves, 4);
        assert_eq!(v.adjoint, 2);
    }

    #[test]
    fn sequences_and_measures() {
        let f = StepFn::generator(int(1), rat(1, 2)).unwrap();
        let eps = StepFn::epsilon();
        let x = Arc::new(
            VCategory::<Delta>::from_rows(
                names(2),
                vec![vec![eps.clone(), f.clone()], vec![f.clone(), eps.clone()]],
            )
            .unwrap(),
        );
        let s = EPSequence::from_names(x.clone(), &["p"], &["p", "q"]).unwrap();
        assert_eq!(cauchy_measure(&s), f);
        assert!(!is_cauchy(&s));
        let constant = EPSequence::constant(x.clone(), 1).unwrap();
        assert!(is_cauchy(&constant));
        assert!(converges_module(&constant, 1).unwrap().converges);
        assert!(!converges_module(&constant, 0).unwrap().converges);
        assert_eq!(s.term(0), 0);
        assert_eq!(s.term(2), 1);
        assert_eq!(s.drop_prefix(2).cycle(), &[1, 0]);
    }

    #[test]
    fn sequence_from_representable_adjunction() {
        let x = two_point(c(1, 100));
        let psi = yoneda(&x, 1);
        let phi = candidate_left_adjoint(&psi);
        let s = sequence_from_adjoint(&phi, &psi).unwrap();
        // u_n = 1/n is below the weight 1/50 of p for n ≤ 50
        assert_eq!(s.preamble().len(), 50);
        assert_eq!(s.cycle(), &[1]);
        assert!(s.preamble().iter().all(|&i| i == 0));
        assert!(converges_module(&s, 1).unwrap().converges);
    }

    #[test]
    fn certificate_for_yoneda_candidates() {
        let x = two_point(c(1, 1));
        let cands = vec![yoneda(&x, 0), yoneda(&x, 1)];
        let cert = completion_certificate(&x, &cands).unwrap();
        assert!(cert.verdicts.iter().all(|v| v.adjoint && v.representable_by.is_some()));
        assert!(cert.yoneda_dense);
        assert!(cert.symmetric);
        assert_eq!(cert.finitary, None);
    }

    #[test]
    fn basic_opens() {
        let f = StepFn::generator(int(1), rat(1, 2)).unwrap();
        let eps = StepFn::epsilon();
        let x = VCategory::<Delta>::from_rows(
            names(2),
            vec![vec![eps.clone(), f.clone()], vec![f, eps]],
        )
        .unwrap();
        assert_eq!(basic_open(&x, 0, &int(2), &rat(1, 4)), [0, 1].into());
        assert_eq!(basic_open(&x, 0, &int(1), &rat(1, 4)), [0].into());
    }
}
