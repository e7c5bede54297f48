//! `V`-modules (distributors) between finite `V`-categories.

use std::sync::Arc;

use crate::error::{Error, Result, Violation};
use crate::matrix::{self, Matrix};
use crate::quantale::Quantale;
use crate::vcat::{VCategory, VFunctor};

/// `φ: X ⇸ Y`, a matrix `φ(x, y)` compatible with both hom actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VModule<Q: Quantale> {
    source: Arc<VCategory<Q>>,
    target: Arc<VCategory<Q>>,
    phi: Matrix<Q::Value>,
}

impl<Q: Quantale> VModule<Q> {
    pub fn new(
        source: Arc<VCategory<Q>>,
        target: Arc<VCategory<Q>>,
        phi: Matrix<Q::Value>,
    ) -> Result<Self> {
        if phi.rows() != source.len() || phi.cols() != target.len() {
            return Err(Error::Shape(format!(
                "module matrix is {}x{}, expected {}x{}",
                phi.rows(),
                phi.cols(),
                source.len(),
                target.len()
            )));
        }
        let m = VModule {
            source,
            target,
            phi,
        };
        match m.first_violation() {
            Some(v) => Err(v.into()),
            None => Ok(m),
        }
    }

    pub(crate) fn new_unchecked(
        source: Arc<VCategory<Q>>,
        target: Arc<VCategory<Q>>,
        phi: Matrix<Q::Value>,
    ) -> Self {
        let m = VModule {
            source,
            target,
            phi,
        };
        debug_assert!(m.first_violation().is_none());
        m
    }

    pub fn from_rows(
        source: Arc<VCategory<Q>>,
        target: Arc<VCategory<Q>>,
        rows: Vec<Vec<Q::Value>>,
    ) -> Result<Self> {
        if rows.len() != source.len() {
            return Err(Error::Shape(format!(
                "module has {} rows, expected {}",
                rows.len(),
                source.len()
            )));
        }
        let cols = target.len();
        VModule::new(source, target, Matrix::from_rows(rows, cols)?)
    }

    /// The identity module `a: X ⇸ X`.
    pub fn identity(x: Arc<VCategory<Q>>) -> Self {
        let phi = x.hom().clone();
        VModule {
            source: x.clone(),
            target: x,
            phi,
        }
    }

    fn first_violation(&self) -> Option<Violation> {
        let (a, b, phi) = (&self.source, &self.target, &self.phi);
        let (n, m) = (a.len(), b.len());
        for x in 0..n {
            for x2 in 0..n {
                for y in 0..m {
                    let lhs = Q::tensor(a.a(x, x2), phi.get(x2, y));
                    if !Q::leq(&lhs, phi.get(x, y)) {
                        let (ox, ox2, oy) = (a.name(x), a.name(x2), b.name(y));
                        return Some(Violation::new(
                            "left action",
                            format!("({ox},{ox2},{oy})"),
                            format!("a({ox},{ox2}) ⊗ φ({ox2},{oy})"),
                            Q::to_qvalue(&lhs),
                            format!("φ({ox},{oy})"),
                            Q::to_qvalue(phi.get(x, y)),
                        ));
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..m {
                for y2 in 0..m {
                    let lhs = Q::tensor(phi.get(x, y), b.a(y, y2));
                    if !Q::leq(&lhs, phi.get(x, y2)) {
                        let (ox, oy, oy2) = (a.name(x), b.name(y), b.name(y2));
                        return Some(Violation::new(
                            "right action",
                            format!("({ox},{oy},{oy2})"),
                            format!("φ({ox},{oy}) ⊗ b({oy},{oy2})"),
                            Q::to_qvalue(&lhs),
                            format!("φ({ox},{oy2})"),
                            Q::to_qvalue(phi.get(x, y2)),
                        ));
                    }
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

    pub fn matrix(&self) -> &Matrix<Q::Value> {
        &self.phi
    }

    pub fn get(&self, x: usize, y: usize) -> &Q::Value {
        self.phi.get(x, y)
    }

    /// `ψ · φ` for `φ = self: X ⇸ Y` and `ψ: Y ⇸ Z`:
    /// `(ψ·φ)(x,z) = ⋁_y φ(x,y) ⊗ ψ(y,z)`.
    pub fn then(&self, psi: &VModule<Q>) -> Result<VModule<Q>> {
        if *self.target != *psi.source {
            return Err(Error::Shape("modules are not composable".into()));
        }
        Ok(VModule::new_unchecked(
            self.source.clone(),
            psi.target.clone(),
            matrix::product::<Q>(&self.phi, &psi.phi),
        ))
    }

    pub fn leq(&self, other: &VModule<Q>) -> Result<bool> {
        self.same_shape(other)?;
        Ok(matrix::leq::<Q>(&self.phi, &other.phi))
    }

    fn same_shape(&self, other: &VModule<Q>) -> Result<()> {
        if *self.source != *other.source || *self.target != *other.target {
            return Err(Error::Shape("modules have different endpoints".into()));
        }
        Ok(())
    }

    fn compare(&self, other: &VModule<Q>, law: &str, lhs: &str, rhs: &str) -> Option<Violation> {
        matrix::first_not_leq::<Q>(&self.phi, &other.phi).map(|(i, j)| {
            let at = format!("({},{})", self.source.name(i), self.target.name(j));
            Violation::new(
                law,
                at.clone(),
                format!("{lhs}{at}"),
                Q::to_qvalue(self.phi.get(i, j)),
                format!("{rhs}{at}"),
                Q::to_qvalue(other.phi.get(i, j)),
            )
        })
    }
}

/// `ψ · φ`.
pub fn compose<Q: Quantale>(psi: &VModule<Q>, phi: &VModule<Q>) -> Result<VModule<Q>> {
    phi.then(psi)
}

/// Extension of `ψ: X ⇸ Z` along `φ: X ⇸ Y`, a module `Y ⇸ Z`:
/// `(ψ •− φ)(y,z) = ⋀_x hom(φ(x,y), ψ(x,z))`, the largest `χ` with `χ·φ ≤ ψ`.
pub fn extension<Q: Quantale>(psi: &VModule<Q>, phi: &VModule<Q>) -> Result<VModule<Q>> {
    if *psi.source != *phi.source {
        return Err(Error::Shape("extension needs modules with a common source".into()));
    }
    let n = phi.source.len();
    let m = Matrix::from_fn(phi.target.len(), psi.target.len(), |y, z| {
        let terms: Vec<_> = (0..n).map(|x| Q::hom(phi.get(x, y), psi.get(x, z))).collect();
        Q::meet(terms.iter())
    });
    Ok(VModule::new_unchecked(phi.target.clone(), psi.target.clone(), m))
}

/// Lifting of `ψ: Z ⇸ Y` through `φ: X ⇸ Y`, a module `Z ⇸ X`:
/// `(φ −• ψ)(z,x) = ⋀_y hom(φ(x,y), ψ(z,y))`, the largest `χ` with `φ·χ ≤ ψ`.
pub fn lifting<Q: Quantale>(phi: &VModule<Q>, psi: &VModule<Q>) -> Result<VModule<Q>> {
    if *psi.target != *phi.target {
        return Err(Error::Shape("lifting needs modules with a common target".into()));
    }
    let m = phi.target.len();
    let out = Matrix::from_fn(psi.source.len(), phi.source.len(), |z, x| {
        let terms: Vec<_> = (0..m).map(|y| Q::hom(phi.get(x, y), psi.get(z, y))).collect();
        Q::meet(terms.iter())
    });
    Ok(VModule::new_unchecked(psi.source.clone(), phi.source.clone(), out))
}

/// `f_*(x,y) = b(f(x),y)` and `f^*(y,x) = b(y,f(x))`.
pub fn functor_graph<Q: Quantale>(f: &VFunctor<Q>) -> (VModule<Q>, VModule<Q>) {
    let (x, y) = (f.source(), f.target());
    let lower = Matrix::from_fn(x.len(), y.len(), |i, j| y.a(f.apply(i), j).clone());
    let upper = Matrix::from_fn(y.len(), x.len(), |j, i| y.a(j, f.apply(i)).clone());
    (
        VModule::new_unchecked(x.clone(), y.clone(), lower),
        VModule::new_unchecked(y.clone(), x.clone(), upper),
    )
}

/// A certified adjunction `φ ⊣ ψ` with its unit `ψ·φ ≥ a` and counit `φ·ψ ≤ b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjointPair<Q: Quantale> {
    pub left: VModule<Q>,
    pub right: VModule<Q>,
    pub unit: VModule<Q>,
    pub counit: VModule<Q>,
}

/// Checks `a ≤ ψ·φ` and `φ·ψ ≤ b` entrywise for `φ: X ⇸ Y`, `ψ: Y ⇸ X`.
pub fn check_adjoint<Q: Quantale>(
    phi: &VModule<Q>,
    psi: &VModule<Q>,
) -> Result<std::result::Result<AdjointPair<Q>, Violation>> {
    if *phi.source != *psi.target || *phi.target != *psi.source {
        return Err(Error::Shape(
            "adjunction needs modules X ⇸ Y and Y ⇸ X".into(),
        ));
    }
    let unit = phi.then(psi)?;
    let counit = psi.then(phi)?;
    let id_x = VModule::identity(phi.source.clone());
    let id_y = VModule::identity(phi.target.clone());
    if let Some(v) = id_x.compare(&unit, "adjunction unit", "a", "(ψ·φ)") {
        return Ok(Err(v));
    }
    if let Some(v) = counit.compare(&id_y, "adjunction counit", "(φ·ψ)", "b") {
        return Ok(Err(v));
    }
    Ok(Ok(AdjointPair {
        left: phi.clone(),
        right: psi.clone(),
        unit,
        counit,
    }))
}

/// `a = f^* · f_*`.
pub fn is_fully_faithful_mod<Q: Quantale>(f: &VFunctor<Q>) -> bool {
    let (lower, upper) = functor_graph(f);
    lower.then(&upper).expect("graph modules compose").phi == *f.source().hom()
}

/// `f_* · f^* = b`.
pub fn is_fully_dense_mod<Q: Quantale>(f: &VFunctor<Q>) -> bool {
    let (lower, upper) = functor_graph(f);
    upper.then(&lower).expect("graph modules compose").phi == *f.target().hom()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EqAdjVerdict {
    /// `φ = φ'` and `ψ = ψ'`, as the lemma predicts.
    Equal,
    NotApplicable(String),
    /// The hypotheses hold but the conclusion fails: a bug in this library.
    Refuted(String),
}

/// Two adjunctions `φ ⊣ ψ`, `φ' ⊣ ψ'` with `φ ≤ φ'` and `ψ ≤ ψ'` must coincide.
pub fn eq_adj_mod_check<Q: Quantale>(
    phi: &VModule<Q>,
    phi2: &VModule<Q>,
    psi: &VModule<Q>,
    psi2: &VModule<Q>,
) -> Result<EqAdjVerdict> {
    if check_adjoint(phi, psi)?.is_err() {
        return Ok(EqAdjVerdict::NotApplicable("φ is not left adjoint to ψ".into()));
    }
    if check_adjoint(phi2, psi2)?.is_err() {
        return Ok(EqAdjVerdict::NotApplicable("φ' is not left adjoint to ψ'".into()));
    }
    if !phi.leq(phi2)? || !psi.leq(psi2)? {
        return Ok(EqAdjVerdict::NotApplicable("the pairs are not ordered".into()));
    }
    if phi == phi2 && psi == psi2 {
        Ok(EqAdjVerdict::Equal)
    } else {
        Ok(EqAdjVerdict::Refuted(
            "ordered adjoint pairs differ (library bug)".into(),
        ))
    }
}
