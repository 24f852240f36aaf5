//! H-sets: a carrier with an `H`-valued equality, and functional relations
//! between them.

mod bridge;
mod text;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::lattice::{ElementId, HeytingAlgebra};
use crate::names::NameError;
use crate::valuation::EvalError;

pub use bridge::{
    dagger_hset, dagger_morphism, dagger_points, dagger_roundtrip, delta_name_simplified,
    from_name, lambda_f, lambda_iso,
};
pub use text::{parse_hsets, HSetDocument};

/// Largest `|H|^|X|` searched when enumerating singletons.
pub const SINGLETON_BUDGET: u128 = 1 << 16;

/// Largest carrier a product may have.
pub const MAX_PRODUCT_POINTS: usize = 4096;

/// The first law an H-set or a morphism table breaks. Points are carrier
/// labels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HSetViolation {
    #[error("delta({x},{y}) differs from delta({y},{x})")]
    NotSymmetric { x: String, y: String },
    #[error("delta({x},{y}) /\\ delta({y},{z}) is not below delta({x},{z})")]
    NotTransitive { x: String, y: String, z: String },
    /// `delta'(x',y') /\ phi(x,y') <= phi(x,x')`
    #[error("condition 1 fails at x={x}, x'={x1}, y'={y1}")]
    Condition1 { x: String, x1: String, y1: String },
    /// `delta(x,y) /\ phi(x,y') <= phi(y,y')`
    #[error("condition 2 fails at x={x}, y={y}, y'={y1}")]
    Condition2 { x: String, y: String, y1: String },
    /// `phi(x,x') /\ phi(x,y') <= delta'(x',y')`
    #[error("condition 3 fails at x={x}, x'={x1}, y'={y1}")]
    Condition3 { x: String, x1: String, y1: String },
    /// `join over z' of phi(x,z') = delta(x,x)`
    #[error("condition 4 fails at x={x}")]
    Condition4 { x: String },
    #[error("singleton condition fails at {x}, {y}")]
    NotASingleton { x: String, y: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HSetError {
    #[error("invalid: {0}")]
    Invalid(#[from] HSetViolation),
    #[error("table has {found} entries, expected {expected}")]
    Shape { expected: usize, found: usize },
    #[error("element or H-set belongs to a different algebra")]
    CrossAlgebra,
    #[error("morphisms do not compose")]
    NotComposable,
    #[error("search space {predicted} exceeds the budget {limit}")]
    BudgetExceeded { predicted: u128, limit: u128 },
    #[error("the names are not equal with value top")]
    NotEquivalent,
    #[error("not a function name")]
    NotAFunctionName,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("no point named `{0}`")]
    UnknownPoint(String),
    #[error("`{0}` is not an element label")]
    UnknownLabel(String),
    #[error("no algebra named `{0}`")]
    UnknownAlgebra(String),
    #[error("no H-set named `{0}`")]
    UnknownHSet(String),
    #[error("delta({0},{0}) is not given")]
    MissingDiagonal(String),
    #[error(transparent)]
    Name(#[from] NameError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A finite carrier of opaque labelled points with `delta: X x X -> H`.
#[derive(Clone)]
pub struct HSet {
    algebra: Arc<HeytingAlgebra>,
    points: Vec<String>,
    delta: Vec<ElementId>,
}

impl PartialEq for HSet {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.tag() == other.algebra.tag()
            && self.points == other.points
            && self.delta == other.delta
    }
}

impl Eq for HSet {}

impl fmt::Debug for HSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HSet[")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<&str> = (0..self.len())
                .map(|j| self.algebra.label(self.delta(i, j)))
                .collect();
            write!(f, "{p}: {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

fn check_len(expected: usize, found: usize) -> Result<(), HSetError> {
    if expected == found {
        Ok(())
    } else {
        Err(HSetError::Shape { expected, found })
    }
}

impl HSet {
    /// Validated construction. `delta` is row-major, `n * n` entries.
    pub fn new(
        algebra: Arc<HeytingAlgebra>,
        points: Vec<String>,
        delta: Vec<ElementId>,
    ) -> Result<Self, HSetError> {
        let x = Self::unchecked(algebra, points, delta)?;
        x.validate()?;
        Ok(x)
    }

    /// Checks only the shape and the algebra of the entries.
    pub fn unchecked(
        algebra: Arc<HeytingAlgebra>,
        points: Vec<String>,
        delta: Vec<ElementId>,
    ) -> Result<Self, HSetError> {
        check_len(points.len() * points.len(), delta.len())?;
        if delta.iter().any(|&e| !algebra.contains(e)) {
            return Err(HSetError::CrossAlgebra);
        }
        Ok(HSet {
            algebra,
            points,
            delta,
        })
    }

    /// Builds the table from a function of point indices and validates it.
    pub fn from_fn(
        algebra: Arc<HeytingAlgebra>,
        points: Vec<String>,
        mut delta: impl FnMut(usize, usize) -> ElementId,
    ) -> Result<Self, HSetError> {
        let n = points.len();
        let table = (0..n * n).map(|k| delta(k / n, k % n)).collect();
        Self::new(algebra, points, table)
    }

    pub fn empty(algebra: Arc<HeytingAlgebra>) -> Self {
        HSet {
            algebra,
            points: Vec::new(),
            delta: Vec::new(),
        }
    }

    pub fn algebra(&self) -> &Arc<HeytingAlgebra> {
        &self.algebra
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn point_index(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|p| p == label)
    }

    pub fn delta(&self, i: usize, j: usize) -> ElementId {
        self.delta[i * self.len() + j]
    }

    /// Symmetry and transitivity, checked exhaustively.
    pub fn validate(&self) -> Result<(), HSetViolation> {
        let h = &*self.algebra;
        let n = self.len();
        let p = |i: usize| self.points[i].clone();
        for i in 0..n {
            for j in 0..n {
                if self.delta(i, j) != self.delta(j, i) {
                    return Err(HSetViolation::NotSymmetric { x: p(i), y: p(j) });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !h.leq(h.meet(self.delta(i, j), self.delta(j, k)), self.delta(i, k)) {
                        return Err(HSetViolation::NotTransitive {
                            x: p(i),
                            y: p(j),
                            z: p(k),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// The singleton `sigma_x = delta(x, -)`.
    pub fn principal(&self, i: usize) -> Vec<ElementId> {
        (0..self.len()).map(|j| self.delta(i, j)).collect()
    }

    /// Checks both singleton conditions for `sigma`.
    pub fn check_singleton(&self, sigma: &[ElementId]) -> Result<(), HSetViolation> {
        let h = &*self.algebra;
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                let d = self.delta(i, j);
                if !h.leq(h.meet(sigma[i], sigma[j]), d) || !h.leq(h.meet(sigma[i], d), sigma[j]) {
                    return Err(HSetViolation::NotASingleton {
                        x: self.points[i].clone(),
                        y: self.points[j].clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Every singleton, in the lexicographic order of element indices.
    pub fn singletons(&self) -> Result<Vec<Vec<ElementId>>, HSetError> {
        let h = &*self.algebra;
        let predicted = (h.len() as u128)
            .checked_pow(self.len() as u32)
            .unwrap_or(u128::MAX);
        if predicted > SINGLETON_BUDGET {
            return Err(HSetError::BudgetExceeded {
                predicted,
                limit: SINGLETON_BUDGET,
            });
        }
        let mut out = Vec::new();
        let mut sigma = Vec::with_capacity(self.len());
        self.extend_singletons(&mut sigma, &mut out);
        Ok(out)
    }

    // Both conditions only involve pairs, so partial vectors can be pruned.
    fn extend_singletons(&self, sigma: &mut Vec<ElementId>, out: &mut Vec<Vec<ElementId>>) {
        let h = &*self.algebra;
        let i = sigma.len();
        if i == self.len() {
            out.push(sigma.clone());
            return;
        }
        for s in h.elements() {
            let fits = |j: usize, sj: ElementId| {
                let d = self.delta(i, j);
                h.leq(h.meet(s, sj), d) && h.leq(h.meet(s, d), sj) && h.leq(h.meet(sj, d), s)
            };
            if !h.leq(s, self.delta(i, i)) || !sigma.iter().enumerate().all(|(j, &sj)| fits(j, sj))
            {
                continue;
            }
            sigma.push(s);
            self.extend_singletons(sigma, out);
            sigma.pop();
        }
    }

    /// Every singleton is `sigma_x` for exactly one `x`.
    pub fn is_complete(&self) -> Result<bool, HSetError> {
        let all = self.singletons()?;
        let principal: Vec<Vec<ElementId>> = (0..self.len()).map(|i| self.principal(i)).collect();
        let mut distinct = principal.clone();
        distinct.sort();
        distinct.dedup();
        Ok(distinct.len() == principal.len() && all.iter().all(|s| principal.contains(s)))
    }

    /// The H-set of singletons with `delta(rho, tau) = join_x rho(x) /\ tau(x)`,
    /// with the isomorphisms in both directions.
    pub fn completion(&self) -> Result<Completion, HSetError> {
        let h = &*self.algebra;
        let all = self.singletons()?;
        let points = all
            .iter()
            .map(|s| {
                let labels: Vec<&str> = s.iter().map(|&e| h.label(e)).collect();
                format!("<{}>", labels.join(","))
            })
            .collect();
        let completed = HSet::from_fn(self.algebra.clone(), points, |a, b| {
            h.big_join((0..self.len()).map(|x| h.meet(all[a][x], all[b][x])))
        })?;
        let (src, tgt) = (Arc::new(self.clone()), Arc::new(completed.clone()));
        let to = HSetMorphism::from_fn(src.clone(), tgt.clone(), |x, r| all[r][x])?;
        let from = HSetMorphism::from_fn(tgt, src, |r, x| all[r][x])?;
        Ok(Completion {
            hset: completed,
            to,
            from,
        })
    }

    /// Product of a family over one algebra. `delta` is the meet of the
    /// component values; the projections are
    /// `pi_j(p, x') = delta(p, p) /\ delta_j(p_j, x')`.
    pub fn product(algebra: &Arc<HeytingAlgebra>, family: &[HSet]) -> Result<Product, HSetError> {
        if family.iter().any(|x| x.algebra.tag() != algebra.tag()) {
            return Err(HSetError::CrossAlgebra);
        }
        let size = family
            .iter()
            .try_fold(1usize, |acc, x| acc.checked_mul(x.len()))
            .filter(|&s| s <= MAX_PRODUCT_POINTS)
            .ok_or(HSetError::BudgetExceeded {
                predicted: family.iter().map(|x| x.len() as u128).product(),
                limit: MAX_PRODUCT_POINTS as u128,
            })?;
        let h = &**algebra;
        let tuples: Vec<Vec<usize>> = (0..size)
            .map(|mut k| {
                let mut t = vec![0; family.len()];
                for (c, x) in family.iter().enumerate().rev() {
                    t[c] = k % x.len();
                    k /= x.len();
                }
                t
            })
            .collect();
        let points = tuples
            .iter()
            .map(|t| {
                let parts: Vec<&str> = t
                    .iter()
                    .zip(family)
                    .map(|(&i, x)| x.points[i].as_str())
                    .collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let hset = HSet::from_fn(algebra.clone(), points, |a, b| {
            h.big_meet(
                family
                    .iter()
                    .enumerate()
                    .map(|(c, x)| x.delta(tuples[a][c], tuples[b][c])),
            )
        })?;
        let p = Arc::new(hset.clone());
        let projections = family
            .iter()
            .enumerate()
            .map(|(c, x)| {
                HSetMorphism::from_fn(p.clone(), Arc::new(x.clone()), |a, y| {
                    h.meet(hset.delta(a, a), x.delta(tuples[a][c], y))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Product {
            hset,
            projections,
            tuples,
        })
    }

    /// `hset X over A` text form, listing every non-bottom `delta` entry once.
    pub fn to_text(&self, name: &str, algebra_name: &str) -> String {
        let h = &*self.algebra;
        let mut s = format!(
            "hset {name} over {algebra_name}\npoints: {}\n",
            self.points.join(", ")
        );
        for i in 0..self.len() {
            for j in i..self.len() {
                let d = self.delta(i, j);
                if i == j || d != h.bottom() {
                    s.push_str(&format!(
                        "delta: {}, {} = {}\n",
                        self.points[i],
                        self.points[j],
                        h.label(d)
                    ));
                }
            }
        }
        s
    }
}

/// The completion of an H-set and the two inverse isomorphisms.
#[derive(Debug, Clone)]
pub struct Completion {
    pub hset: HSet,
    /// `X -> sigma(X)`, `(x, rho) |-> rho(x)`.
    pub to: HSetMorphism,
    /// `sigma(X) -> X`, `(rho, x) |-> rho(x)`.
    pub from: HSetMorphism,
}

#[derive(Debug, Clone)]
pub struct Product {
    pub hset: HSet,
    pub projections: Vec<HSetMorphism>,
    /// Component indices of each product point.
    pub tuples: Vec<Vec<usize>>,
}

impl Product {
    /// The morphism `Z -> P` with `(z, p) |-> meet_i phi_i(z, p_i)`.
    pub fn pairing(&self, legs: &[HSetMorphism]) -> Result<HSetMorphism, HSetError> {
        if legs.len() != self.projections.len() {
            return Err(HSetError::NotComposable);
        }
        // with no legs the source is unknown
        let Some(first) = legs.first() else {
            return Err(HSetError::NotComposable);
        };
        let z = first.source.clone();
        for (leg, pi) in legs.iter().zip(&self.projections) {
            if *leg.source != *z || *leg.target != *pi.target {
                return Err(HSetError::NotComposable);
            }
        }
        let h = z.algebra.clone();
        HSetMorphism::from_fn(z, Arc::new(self.hset.clone()), |a, p| {
            h.big_meet(
                legs.iter()
                    .enumerate()
                    .map(|(c, leg)| leg.phi(a, self.tuples[p][c])),
            )
        })
    }
}

/// The equalizer of two parallel morphisms.
#[derive(Debug, Clone)]
pub struct Equalizer {
    pub hset: HSet,
    pub inclusion: HSetMorphism,
}

/// `(X, delta_E)` with `tau(x, y) = join_x' phi(x, x') /\ psi(y, x')` and
/// `delta_E(x, y) = delta(x, y) /\ tau(x, x)`; the inclusion has table
/// `delta_E`.
pub fn equalizer(phi: &HSetMorphism, psi: &HSetMorphism) -> Result<Equalizer, HSetError> {
    if *phi.source != *psi.source || *phi.target != *psi.target {
        return Err(HSetError::NotComposable);
    }
    let x = &phi.source;
    let h = &*x.algebra;
    let m = phi.target.len();
    let tau = |a: usize, b: usize| h.big_join((0..m).map(|t| h.meet(phi.phi(a, t), psi.phi(b, t))));
    let diag: Vec<ElementId> = (0..x.len()).map(|a| tau(a, a)).collect();
    let hset = HSet::from_fn(x.algebra.clone(), x.points.clone(), |a, b| {
        h.meet(x.delta(a, b), diag[a])
    })?;
    let inclusion =
        HSetMorphism::from_fn(Arc::new(hset.clone()), x.clone(), |a, b| hset.delta(a, b))?;
    Ok(Equalizer { hset, inclusion })
}

/// The raw `tau` table of the equalizer formula, row-major.
pub fn equalizer_tau(phi: &HSetMorphism, psi: &HSetMorphism) -> Vec<ElementId> {
    let h = &*phi.source.algebra;
    let (n, m) = (phi.source.len(), phi.target.len());
    (0..n * n)
        .map(|k| h.big_join((0..m).map(|t| h.meet(phi.phi(k / n, t), psi.phi(k % n, t)))))
        .collect()
}

/// An `H`-valued functional relation `phi: X x X' -> H`.
#[derive(Clone)]
pub struct HSetMorphism {
    source: Arc<HSet>,
    target: Arc<HSet>,
    phi: Vec<ElementId>,
}

impl fmt::Debug for HSetMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = &self.source.algebra;
        let labels: Vec<&str> = self.phi.iter().map(|&e| h.label(e)).collect();
        write!(
            f,
            "HSetMorphism({} -> {}: {})",
            self.source.len(),
            self.target.len(),
            labels.join(" ")
        )
    }
}

impl PartialEq for HSetMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.phi == other.phi
    }
}

impl HSetMorphism {
    /// Validated construction; `phi` is row-major over source x target.
    pub fn new(
        source: Arc<HSet>,
        target: Arc<HSet>,
        phi: Vec<ElementId>,
    ) -> Result<Self, HSetError> {
        let m = Self::unchecked(source, target, phi)?;
        m.validate()?;
        Ok(m)
    }

    /// Checks only the shape and algebra.
    pub fn unchecked(
        source: Arc<HSet>,
        target: Arc<HSet>,
        phi: Vec<ElementId>,
    ) -> Result<Self, HSetError> {
        if source.algebra.tag() != target.algebra.tag() {
            return Err(HSetError::CrossAlgebra);
        }
        check_len(source.len() * target.len(), phi.len())?;
        if phi.iter().any(|&e| !source.algebra.contains(e)) {
            return Err(HSetError::CrossAlgebra);
        }
        Ok(HSetMorphism {
            source,
            target,
            phi,
        })
    }

    pub fn from_fn(
        source: Arc<HSet>,
        target: Arc<HSet>,
        mut phi: impl FnMut(usize, usize) -> ElementId,
    ) -> Result<Self, HSetError> {
        let m = target.len();
        let table = (0..source.len() * m).map(|k| phi(k / m, k % m)).collect();
        Self::new(source, target, table)
    }

    /// `id(x, y) = delta(x, y)`.
    pub fn identity(x: Arc<HSet>) -> Self {
        HSetMorphism {
            phi: x.delta.clone(),
            source: x.clone(),
            target: x,
        }
    }

    pub fn source(&self) -> &Arc<HSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<HSet> {
        &self.target
    }

    pub fn phi(&self, x: usize, y: usize) -> ElementId {
        self.phi[x * self.target.len() + y]
    }

    pub fn table(&self) -> &[ElementId] {
        &self.phi
    }

    /// The four functional-relation conditions, checked exhaustively.
    pub fn validate(&self) -> Result<(), HSetViolation> {
        let (x, y) = (&*self.source, &*self.target);
        let h = &*x.algebra;
        let (n, m) = (x.len(), y.len());
        let p = |i: usize| x.points[i].clone();
        let q = |i: usize| y.points[i].clone();
        for a in 0..n {
            for a1 in 0..m {
                for b1 in 0..m {
                    if !h.leq(h.meet(y.delta(a1, b1), self.phi(a, b1)), self.phi(a, a1)) {
                        return Err(HSetViolation::Condition1 {
                            x: p(a),
                            x1: q(a1),
                            y1: q(b1),
                        });
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for b1 in 0..m {
                    if !h.leq(h.meet(x.delta(a, b), self.phi(a, b1)), self.phi(b, b1)) {
                        return Err(HSetViolation::Condition2 {
                            x: p(a),
                            y: p(b),
                            y1: q(b1),
                        });
                    }
                }
            }
        }
        for a in 0..n {
            for a1 in 0..m {
                for b1 in 0..m {
                    if !h.leq(h.meet(self.phi(a, a1), self.phi(a, b1)), y.delta(a1, b1)) {
                        return Err(HSetViolation::Condition3 {
                            x: p(a),
                            x1: q(a1),
                            y1: q(b1),
                        });
                    }
                }
            }
        }
        for a in 0..n {
            if h.big_join((0..m).map(|c| self.phi(a, c))) != x.delta(a, a) {
                return Err(HSetViolation::Condition4 { x: p(a) });
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// `self` followed by `next`: `(next . self)(x, x'') = join_x' self(x, x') /\ next(x', x'')`.
    pub fn then(&self, next: &HSetMorphism) -> Result<HSetMorphism, HSetError> {
        if *self.target != *next.source {
            return Err(HSetError::NotComposable);
        }
        let h = &*self.source.algebra;
        let (n, k, m) = (self.source.len(), self.target.len(), next.target.len());
        let phi = (0..n * m)
            .map(|c| h.big_join((0..k).map(|t| h.meet(self.phi(c / m, t), next.phi(t, c % m)))))
            .collect();
        Ok(HSetMorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            phi,
        })
    }

    /// `self <= other` pointwise, which for two morphisms with the same
    /// endpoints already forces equality.
    pub fn leq(&self, other: &HSetMorphism) -> bool {
        let h = &*self.source.algebra;
        self.source == other.source
            && self.target == other.target
            && self.phi.iter().zip(&other.phi).all(|(&a, &b)| h.leq(a, b))
    }

    /// `source --> target` text form listing every non-bottom entry.
    pub fn to_text(&self, name: &str, source_name: &str, target_name: &str) -> String {
        let h = &*self.source.algebra;
        let mut s = format!("hmorphism {name} : {source_name} -> {target_name}\n");
        for a in 0..self.source.len() {
            for b in 0..self.target.len() {
                let v = self.phi(a, b);
                if v != h.bottom() {
                    s.push_str(&format!(
                        "phi: {}, {} = {}\n",
                        self.source.points[a],
                        self.target.points[b],
                        h.label(v)
                    ));
                }
            }
        }
        s
    }
}

/// `psi . phi`.
pub fn compose(psi: &HSetMorphism, phi: &HSetMorphism) -> Result<HSetMorphism, HSetError> {
    phi.then(psi)
}

/// Equality of morphisms decided by the one-sided pointwise comparison.
pub fn morphisms_equal(phi: &HSetMorphism, psi: &HSetMorphism) -> bool {
    phi.leq(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_chain;

    fn chain3() -> Arc<HeytingAlgebra> {
        Arc::new(make_chain(3).unwrap())
    }

    #[test]
    fn one_point_top_is_valid() {
        let h = chain3();
        let x = HSet::new(h.clone(), vec!["p".into()], vec![h.top()]).unwrap();
        assert!(x.is_valid());
        let id = HSetMorphism::identity(Arc::new(x));
        assert!(id.is_valid());
    }

    #[test]
    fn asymmetric_table_is_rejected() {
        let h = chain3();
        let m = h.element("m").unwrap();
        let err = HSet::new(
            h.clone(),
            vec!["p".into(), "q".into()],
            vec![h.top(), m, h.bottom(), h.top()],
        );
        assert_eq!(
            err.unwrap_err(),
            HSetError::Invalid(HSetViolation::NotSymmetric {
                x: "p".into(),
                y: "q".into()
            })
        );
    }

    #[test]
    fn all_bottom_table_breaks_condition_4() {
        let h = chain3();
        let x = Arc::new(HSet::new(h.clone(), vec!["p".into()], vec![h.top()]).unwrap());
        let err = HSetMorphism::new(x.clone(), x, vec![h.bottom()]).unwrap_err();
        assert_eq!(
            err,
            HSetError::Invalid(HSetViolation::Condition4 { x: "p".into() })
        );
    }

    #[test]
    fn one_point_singletons_over_chain3() {
        let h = chain3();
        let x = HSet::new(h.clone(), vec!["p".into()], vec![h.top()]).unwrap();
        assert_eq!(x.singletons().unwrap().len(), 3);
        assert!(!x.is_complete().unwrap());
        let c = x.completion().unwrap();
        assert_eq!(c.hset.len(), 3);
        assert!(c.hset.is_complete().unwrap());
    }

    #[test]
    fn empty_hset_is_complete() {
        let x = HSet::empty(chain3());
        assert_eq!(x.singletons().unwrap(), vec![Vec::<ElementId>::new()]);
        // the empty vector is a singleton not hit by any point
        assert!(!x.is_complete().unwrap());
    }

    #[test]
    fn binary_product_delta_is_meet() {
        let h = chain3();
        let m = h.element("m").unwrap();
        let a = HSet::new(h.clone(), vec!["p".into()], vec![m]).unwrap();
        let b = HSet::new(h.clone(), vec!["q".into()], vec![h.top()]).unwrap();
        let p = HSet::product(&h, &[a, b]).unwrap();
        assert_eq!(p.hset.delta(0, 0), m);
        assert_eq!(p.hset.points()[0], "(p,q)");
        let e = HSet::product(&h, &[]).unwrap();
        assert_eq!(e.hset.len(), 1);
        assert_eq!(e.hset.delta(0, 0), h.top());
    }
}
