//! Finite `V`-categories and `V`-functors.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::cauchy::EPSequence;
use crate::delta::Delta;
use crate::error::{Error, Result, Violation};
use crate::matrix::{self, Matrix};
use crate::quantale::{Bool2, Quantale};

/// A finite set of named objects with a hom matrix `a(x, y)` satisfying
/// `k ≤ a(x,x)` and `a(x,y) ⊗ a(y,z) ≤ a(x,z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VCategory<Q: Quantale> {
    objects: Vec<String>,
    hom: Matrix<Q::Value>,
}

impl<Q: Quantale> VCategory<Q> {
    /// Validates the enrichment laws; a failure is reported as a verdict.
    pub fn new(objects: Vec<String>, hom: Matrix<Q::Value>) -> Result<Self> {
        check_shape(&objects, &hom)?;
        if let Some(v) = first_violation::<Q>(&objects, &hom) {
            return Err(v.into());
        }
        Ok(VCategory { objects, hom })
    }

    /// Structural checks only; the caller guarantees the laws.
    pub(crate) fn new_unchecked(objects: Vec<String>, hom: Matrix<Q::Value>) -> Self {
        debug_assert!(first_violation::<Q>(&objects, &hom).is_none());
        VCategory { objects, hom }
    }

    pub fn from_rows(objects: Vec<String>, rows: Vec<Vec<Q::Value>>) -> Result<Self> {
        let n = objects.len();
        if rows.len() != n {
            return Err(Error::Shape(format!(
                "{} objects but {} matrix rows",
                n,
                rows.len()
            )));
        }
        VCategory::new(objects, Matrix::from_rows(rows, n)?)
    }

    /// Discrete category: `k` on the diagonal, `⊥` elsewhere.
    pub fn discrete(objects: Vec<String>) -> Result<Self> {
        let n = objects.len();
        let hom = Matrix::from_fn(n, n, |i, j| if i == j { Q::unit() } else { Q::bottom() });
        check_shape(&objects, &hom)?;
        Ok(VCategory { objects, hom })
    }

    /// `E`: one object with `a(*,*) = k`.
    pub fn unit() -> Self {
        VCategory {
            objects: vec!["*".to_string()],
            hom: Matrix::filled(1, 1, Q::unit()),
        }
    }

    /// One object with `a(*,*) = ⊤`, the terminal category.
    pub fn terminal() -> Self {
        VCategory {
            objects: vec!["*".to_string()],
            hom: Matrix::filled(1, 1, Q::top()),
        }
    }

    /// The least `V`-category structure above a raw generator matrix.
    pub fn path_closure(objects: Vec<String>, raw: Matrix<Q::Value>) -> Result<Self> {
        check_shape(&objects, &raw)?;
        let n = objects.len();
        let mut r = Matrix::from_fn(n, n, |i, j| {
            if i == j {
                Q::join2(raw.get(i, j), &Q::unit())
            } else {
                raw.get(i, j).clone()
            }
        });
        // squaring doubles the path length covered; simple paths suffice since
        // the diagonal carries k, so this settles after about log2(n) rounds
        let cap = (n * n).max(1);
        for _ in 0..cap {
            let next = matrix::join::<Q>(&r, &matrix::product::<Q>(&r, &r));
            if next == r {
                let cat = VCategory { objects, hom: r };
                if let Some(v) = first_violation::<Q>(&cat.objects, &cat.hom) {
                    return Err(Error::Bug(format!("path closure is not a category: {v}")));
                }
                return Ok(cat);
            }
            r = next;
        }
        Err(Error::IterationCap(cap))
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn hom(&self) -> &Matrix<Q::Value> {
        &self.hom
    }

    pub fn a(&self, x: usize, y: usize) -> &Q::Value {
        self.hom.get(x, y)
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn name(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn dual(&self) -> Self {
        VCategory {
            objects: self.objects.clone(),
            hom: self.hom.transpose(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.hom == self.hom.transpose()
    }

    /// `k ≤ a(x,y)` and `k ≤ a(y,x)` only when `x = y`.
    pub fn is_separated(&self) -> bool {
        let k = Q::unit();
        let n = self.len();
        (0..n).all(|x| {
            (0..n).all(|y| x == y || !(Q::leq(&k, self.a(x, y)) && Q::leq(&k, self.a(y, x))))
        })
    }

    /// `x ≤ y` iff `k ≤ a(x, y)`.
    pub fn underlying_order(&self) -> VCategory<Bool2> {
        let k = Q::unit();
        VCategory::new_unchecked(
            self.objects.clone(),
            self.hom.map(|v| Q::leq(&k, v)),
        )
    }

    /// Cartesian product: `a(x,x') ∧ b(y,y')`.
    pub fn product(&self, other: &Self) -> Self {
        self.pairwise(other, Q::meet2)
    }

    /// Tensor product: `a(x,x') ⊗ b(y,y')`.
    pub fn tensor(&self, other: &Self) -> Self {
        self.pairwise(other, Q::tensor)
    }

    fn pairwise(&self, other: &Self, op: fn(&Q::Value, &Q::Value) -> Q::Value) -> Self {
        let (n, m) = (self.len(), other.len());
        let objects = (0..n)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| format!("({},{})", self.objects[i], other.objects[j]))
            .collect();
        let hom = Matrix::from_fn(n * m, n * m, |p, q| {
            op(self.a(p / m, q / m), other.a(p % m, q % m))
        });
        VCategory::new_unchecked(objects, hom)
    }

    /// The full subcategory on `indices`, in the given order.
    pub fn full_subcategory(&self, indices: &[usize]) -> Result<Self> {
        for &i in indices {
            if i >= self.len() {
                return Err(Error::Shape(format!("object index {i} out of range")));
            }
        }
        let objects: Vec<String> = indices.iter().map(|&i| self.objects[i].clone()).collect();
        let hom = Matrix::from_fn(indices.len(), indices.len(), |p, q| {
            self.a(indices[p], indices[q]).clone()
        });
        check_shape(&objects, &hom)?;
        Ok(VCategory::new_unchecked(objects, hom))
    }

    /// `M̄ = {x : k ≤ ⋁_{y∈M} a(x,y) ⊗ a(y,x)}`.
    pub fn closure(&self, m: &BTreeSet<usize>) -> BTreeSet<usize> {
        let k = Q::unit();
        (0..self.len())
            .filter(|&x| {
                let reach = Q::join(
                    m.iter()
                        .map(|&y| Q::tensor(self.a(x, y), self.a(y, x)))
                        .collect::<Vec<_>>()
                        .iter(),
                );
                Q::leq(&k, &reach)
            })
            .collect()
    }

    /// Topological convergence of an eventually periodic sequence to `x`:
    /// `x` lies in the closure of the values along every infinite index set.
    ///
    /// Every such value set contains a cycle value, and closure is monotone,
    /// so it suffices to test the singletons of cycle values.
    pub fn sequence_converges_topologically(&self, s: &EPSequence<Q>, x: usize) -> Result<bool> {
        if x >= self.len() {
            return Err(Error::UnknownObject(format!("#{x}")));
        }
        let k = Q::unit();
        Ok(s.cycle_values()
            .iter()
            .all(|&c| Q::leq(&k, &Q::tensor(self.a(x, c), self.a(c, x)))))
    }
}

impl VCategory<Delta> {
    /// Every distance is a finite distribution function.
    pub fn is_finitary(&self) -> bool {
        self.hom.iter().all(|f| f.is_finite_distribution())
    }
}

fn check_shape<T: Clone>(objects: &[String], hom: &Matrix<T>) -> Result<()> {
    let n = objects.len();
    if hom.rows() != n || hom.cols() != n {
        return Err(Error::Shape(format!(
            "{n} objects but a {}x{} matrix",
            hom.rows(),
            hom.cols()
        )));
    }
    let mut seen = BTreeSet::new();
    for o in objects {
        if !seen.insert(o.as_str()) {
            return Err(Error::DuplicateObject(o.clone()));
        }
    }
    Ok(())
}

/// The first reflexivity or transitivity failure, if any.
pub fn first_violation<Q: Quantale>(objects: &[String], hom: &Matrix<Q::Value>) -> Option<Violation> {
    let n = objects.len();
    let k = Q::unit();
    for x in 0..n {
        if !Q::leq(&k, hom.get(x, x)) {
            return Some(Violation::new(
                "reflexivity",
                format!("({})", objects[x]),
                "k",
                Q::to_qvalue(&k),
                format!("a({0},{0})", objects[x]),
                Q::to_qvalue(hom.get(x, x)),
            ));
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let lhs = Q::tensor(hom.get(x, y), hom.get(y, z));
                if !Q::leq(&lhs, hom.get(x, z)) {
                    let (ox, oy, oz) = (&objects[x], &objects[y], &objects[z]);
                    return Some(Violation::new(
                        "transitivity",
                        format!("({ox},{oy},{oz})"),
                        format!("a({ox},{oy}) ⊗ a({oy},{oz})"),
                        Q::to_qvalue(&lhs),
                        format!("a({ox},{oz})"),
                        Q::to_qvalue(hom.get(x, z)),
                    ));
                }
            }
        }
    }
    None
}

/// A map of objects with `a(x,y) ≤ b(f(x),f(y))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VFunctor<Q: Quantale> {
    source: Arc<VCategory<Q>>,
    target: Arc<VCategory<Q>>,
    map: Vec<usize>,
}

impl<Q: Quantale> VFunctor<Q> {
    pub fn new(source: Arc<VCategory<Q>>, target: Arc<VCategory<Q>>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::Shape(format!(
                "functor maps {} objects but the source has {}",
                map.len(),
                source.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= target.len()) {
            return Err(Error::UnknownObject(format!("target index {bad}")));
        }
        let f = VFunctor {
            source,
            target,
            map,
        };
        match f.first_violation() {
            Some(v) => Err(v.into()),
            None => Ok(f),
        }
    }

    pub fn from_names(
        source: Arc<VCategory<Q>>,
        target: Arc<VCategory<Q>>,
        images: &[&str],
    ) -> Result<Self> {
        let map = images
            .iter()
            .map(|n| target.index_of(n))
            .collect::<Result<Vec<_>>>()?;
        VFunctor::new(source, target, map)
    }

    pub fn identity(x: Arc<VCategory<Q>>) -> Self {
        let map = (0..x.len()).collect();
        VFunctor {
            source: x.clone(),
            target: x,
            map,
        }
    }

    /// Inclusion of a full subcategory, listed by object index.
    pub fn inclusion(x: Arc<VCategory<Q>>, indices: &[usize]) -> Result<Self> {
        let sub = Arc::new(x.full_subcategory(indices)?);
        Ok(VFunctor {
            source: sub,
            target: x,
            map: indices.to_vec(),
        })
    }

    fn first_violation(&self) -> Option<Violation> {
        let (a, b) = (&self.source, &self.target);
        for x in 0..a.len() {
            for y in 0..a.len() {
                let (fx, fy) = (self.map[x], self.map[y]);
                if !Q::leq(a.a(x, y), b.a(fx, fy)) {
                    let (ox, oy) = (a.name(x), a.name(y));
                    return Some(Violation::new(
                        "functoriality",
                        format!("({ox},{oy})"),
                        format!("a({ox},{oy})"),
                        Q::to_qvalue(a.a(x, y)),
                        format!("b({},{})", b.name(fx), b.name(fy)),
                        Q::to_qvalue(b.a(fx, fy)),
                    ));
                }
            }
        }
        None
    }

    pub fn source(&self) -> &Arc<VCategory<Q>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<VCategory<Q>> {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &VFunctor<Q>) -> Result<VFunctor<Q>> {
        if *self.target != *g.source {
            return Err(Error::Shape("functors are not composable".into()));
        }
        Ok(VFunctor {
            source: self.source.clone(),
            target: g.target.clone(),
            map: self.map.iter().map(|&y| g.map[y]).collect(),
        })
    }

    /// `a(x,y) = b(f(x),f(y))` for all `x, y`.
    pub fn is_fully_faithful(&self) -> bool {
        let n = self.source.len();
        (0..n).all(|x| {
            (0..n).all(|y| *self.source.a(x, y) == *self.target.a(self.map[x], self.map[y]))
        })
    }

    pub fn image(&self, m: &BTreeSet<usize>) -> BTreeSet<usize> {
        m.iter().map(|&x| self.map[x]).collect()
    }
}

fn same_endpoints<Q: Quantale>(h: &VFunctor<Q>, l: &VFunctor<Q>) -> Result<()> {
    if *h.source != *l.source || *h.target != *l.target {
        return Err(Error::Shape("functors have different endpoints".into()));
    }
    Ok(())
}

/// `[a,b](h,l) = ⋀_x b(h(x), l(x))`.
pub fn functor_distance<Q: Quantale>(h: &VFunctor<Q>, l: &VFunctor<Q>) -> Result<Q::Value> {
    same_endpoints(h, l)?;
    let b = &h.target;
    let terms: Vec<_> = (0..h.source.len())
        .map(|x| b.a(h.map[x], l.map[x]).clone())
        .collect();
    Ok(Q::meet(terms.iter()))
}

/// `d(h,l) = ⋀_{x1,x2} (a(x1,x2) → c(h(x1), l(x2)))`, the structure on the
/// candidate exponential.
pub fn exp_distance<Q: Quantale>(h: &VFunctor<Q>, l: &VFunctor<Q>) -> Result<Q::Value> {
    same_endpoints(h, l)?;
    let (a, c) = (&h.source, &h.target);
    let n = a.len();
    let mut terms = Vec::with_capacity(n * n);
    for x1 in 0..n {
        for x2 in 0..n {
            terms.push(Q::heyting(a.a(x1, x2), c.a(h.map[x1], l.map[x2])));
        }
    }
    Ok(Q::meet(terms.iter()))
}

/// All functors `X → Z`, when there are at most `limit` maps to try.
pub fn all_functors<Q: Quantale>(
    x: &Arc<VCategory<Q>>,
    z: &Arc<VCategory<Q>>,
    limit: usize,
) -> Result<Vec<VFunctor<Q>>> {
    let (n, m) = (x.len(), z.len());
    let total = (0..n).try_fold(1usize, |acc, _| acc.checked_mul(m));
    match total {
        Some(t) if t <= limit => {}
        _ => {
            return Err(Error::Unsupported(format!(
                "{m}^{n} maps exceed the enumeration limit {limit}"
            )))
        }
    }
    let mut out = Vec::new();
    let mut map = vec![0usize; n];
    loop {
        if let Ok(f) = VFunctor::new(x.clone(), z.clone(), map.clone()) {
            out.push(f);
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == n {
                return Ok(out);
            }
            map[i] += 1;
            if map[i] < m {
                break;
            }
            map[i] = 0;
            i += 1;
        }
    }
}
