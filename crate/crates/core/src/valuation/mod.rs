//! Heyting-valued truth of atomic and compound formulas.
//!
//! Atomic values follow the simultaneous recursion
//!
//! ```text
//! [[x in y]] = join over u in dom y of  y(u) /\ [[x = u]]
//! [[x ni u]] = join over v in dom x of  x(v) /\ [[v = u]]
//! [[x = y]]  = meet over u in dom y of (y(u) -> [[x ni u]])
//!           /\ meet over v in dom x of (x(v) -> [[v in y]])
//! ```
//!
//! Every equality value depends only on equalities between domain elements,
//! so [`EvalContext`] memoizes equality and fills the table with an explicit
//! work stack instead of native recursion.

mod formula;
pub mod laws;
mod parse;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::lattice::{ElementId, HeytingAlgebra};
use crate::names::{NameError, NameId, NameStore};

pub use formula::{Formula, Term};
pub use parse::{parse_formula, parse_formula_with_free, ParseError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("variable `{0}` is not bound")]
    UnboundVariable(String),
    #[error("unbounded quantifier evaluated with an empty fragment")]
    EmptyFragment,
    #[error("{0:?} is a name over a different algebra")]
    CrossAlgebra(NameId),
    #[error("{0:?} is not a name in this store")]
    UnknownName(NameId),
    #[error("the pair <{0:?}, {1:?}> was never interned")]
    PairNotInterned(NameId, NameId),
}

/// A finite map from variables to names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<String, NameId>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: &str) -> Option<NameId> {
        self.0.get(var).copied()
    }

    pub fn bind(&mut self, var: &str, name: NameId) {
        self.0.insert(var.to_string(), name);
    }

    /// A copy of `self` that sends `var` to `name`.
    pub fn rebind(&self, var: &str, name: NameId) -> Self {
        let mut out = self.clone();
        out.bind(var, name);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, NameId)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl<'a> FromIterator<(&'a str, NameId)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (&'a str, NameId)>>(iter: I) -> Self {
        Assignment(iter.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }
}

/// `rebind(σ, var, name)`
pub fn rebind(sigma: &Assignment, var: &str, name: NameId) -> Assignment {
    sigma.rebind(var, name)
}

/// Evaluation state: the algebra, the store, memo tables, and the finite
/// fragment that unbounded quantifiers range over.
///
/// Unbounded `exists` over a fragment is a lower bound for the true value and
/// unbounded `forall` an upper bound.
pub struct EvalContext<'a> {
    algebra: &'a HeytingAlgebra,
    store: &'a NameStore,
    symmetric: bool,
    eq_memo: HashMap<(NameId, NameId), ElementId>,
    mem_memo: HashMap<(NameId, NameId), ElementId>,
    ni_memo: HashMap<(NameId, NameId), ElementId>,
    fragment: Vec<NameId>,
}

impl<'a> EvalContext<'a> {
    /// A context whose equality memo is keyed by unordered pairs.
    pub fn new(algebra: &'a HeytingAlgebra, store: &'a NameStore) -> Self {
        EvalContext {
            algebra,
            store,
            symmetric: true,
            eq_memo: HashMap::new(),
            mem_memo: HashMap::new(),
            ni_memo: HashMap::new(),
            fragment: Vec::new(),
        }
    }

    /// A context that computes `[[x = y]]` and `[[y = x]]` independently and
    /// derives `[[x = x]]` from the recursion. Used to check the laws that the
    /// default context takes as shortcuts.
    pub fn with_ordered_memo(algebra: &'a HeytingAlgebra, store: &'a NameStore) -> Self {
        EvalContext {
            symmetric: false,
            ..Self::new(algebra, store)
        }
    }

    pub fn with_fragment(mut self, fragment: Vec<NameId>) -> Self {
        self.fragment = fragment;
        self
    }

    pub fn set_fragment(&mut self, fragment: Vec<NameId>) {
        self.fragment = fragment;
    }

    pub fn fragment(&self) -> &[NameId] {
        &self.fragment
    }

    pub fn algebra(&self) -> &'a HeytingAlgebra {
        self.algebra
    }

    pub fn store(&self) -> &'a NameStore {
        self.store
    }

    fn require(&self, x: NameId) -> Result<(), EvalError> {
        if !self.store.contains(x) {
            Err(EvalError::UnknownName(x))
        } else if !self.store.belongs_to(x, self.algebra) {
            Err(EvalError::CrossAlgebra(x))
        } else {
            Ok(())
        }
    }

    pub fn atomic_eq(&mut self, x: NameId, y: NameId) -> Result<ElementId, EvalError> {
        self.require(x)?;
        self.require(y)?;
        Ok(self.eq(x, y))
    }

    pub fn atomic_mem(&mut self, x: NameId, y: NameId) -> Result<ElementId, EvalError> {
        self.require(x)?;
        self.require(y)?;
        Ok(self.mem(x, y))
    }

    pub fn atomic_ni(&mut self, x: NameId, u: NameId) -> Result<ElementId, EvalError> {
        self.require(x)?;
        self.require(u)?;
        Ok(self.ni(x, u))
    }

    fn key(&self, x: NameId, y: NameId) -> (NameId, NameId) {
        if self.symmetric && y < x {
            (y, x)
        } else {
            (x, y)
        }
    }

    /// `[[x = x]] = 1` is taken for granted, except in ordered mode.
    fn shortcut(&self, x: NameId, y: NameId) -> bool {
        self.symmetric && x == y
    }

    /// `[[x = y]]` for names already known to be valid.
    pub(crate) fn eq(&mut self, x: NameId, y: NameId) -> ElementId {
        if self.shortcut(x, y) {
            return self.algebra.top();
        }
        if let Some(&v) = self.eq_memo.get(&self.key(x, y)) {
            return v;
        }
        let mut stack = vec![(x, y)];
        while let Some(&(a, b)) = stack.last() {
            if self.eq_memo.contains_key(&self.key(a, b)) {
                stack.pop();
                continue;
            }
            let before = stack.len();
            for &(v, _) in self.store.entries(a) {
                for &(u, _) in self.store.entries(b) {
                    if !self.shortcut(v, u) && !self.eq_memo.contains_key(&self.key(v, u)) {
                        stack.push((v, u));
                    }
                }
            }
            if stack.len() == before {
                stack.pop();
                let value = self.eq_from_children(a, b);
                let k = self.key(a, b);
                self.eq_memo.insert(k, value);
            }
        }
        self.eq_memo[&self.key(x, y)]
    }

    fn eq_child(&self, v: NameId, u: NameId) -> ElementId {
        if self.shortcut(v, u) {
            self.algebra.top()
        } else {
            self.eq_memo[&self.key(v, u)]
        }
    }

    /// Combines memoized child equalities into `[[x = y]]`.
    fn eq_from_children(&self, x: NameId, y: NameId) -> ElementId {
        let h = self.algebra;
        let xs = self.store.entries(x);
        let ys = self.store.entries(y);
        let mut acc = h.top();
        for &(u, yu) in ys {
            let ni = h.big_join(xs.iter().map(|&(v, xv)| h.meet(xv, self.eq_child(v, u))));
            acc = h.meet(acc, h.implies(yu, ni));
        }
        for &(v, xv) in xs {
            let mem = h.big_join(ys.iter().map(|&(u, yu)| h.meet(yu, self.eq_child(v, u))));
            acc = h.meet(acc, h.implies(xv, mem));
        }
        acc
    }

    pub(crate) fn mem(&mut self, x: NameId, y: NameId) -> ElementId {
        if let Some(&v) = self.mem_memo.get(&(x, y)) {
            return v;
        }
        let mut acc = self.algebra.bottom();
        for &(u, yu) in self.store.entries(y) {
            let e = self.eq(x, u);
            acc = self.algebra.join(acc, self.algebra.meet(yu, e));
        }
        self.mem_memo.insert((x, y), acc);
        acc
    }

    pub(crate) fn ni(&mut self, x: NameId, u: NameId) -> ElementId {
        if let Some(&v) = self.ni_memo.get(&(x, u)) {
            return v;
        }
        let mut acc = self.algebra.bottom();
        for &(v, xv) in self.store.entries(x) {
            let e = self.eq(v, u);
            acc = self.algebra.join(acc, self.algebra.meet(xv, e));
        }
        self.ni_memo.insert((x, u), acc);
        acc
    }

    /// `[[φ]]` under `sigma`.
    pub fn eval(&mut self, phi: &Formula, sigma: &Assignment) -> Result<ElementId, EvalError> {
        let mut scope = Vec::new();
        self.eval_in(phi, sigma, &mut scope)
    }

    /// `[[φ]] = top`
    pub fn models(&mut self, phi: &Formula, sigma: &Assignment) -> Result<bool, EvalError> {
        Ok(self.eval(phi, sigma)? == self.algebra.top())
    }

    fn resolve(
        &self,
        t: &Term,
        sigma: &Assignment,
        scope: &[(String, NameId)],
    ) -> Result<NameId, EvalError> {
        match t {
            Term::Var(v) => scope
                .iter()
                .rev()
                .find(|(name, _)| name == v)
                .map(|(_, id)| *id)
                .or_else(|| sigma.get(v))
                .ok_or_else(|| EvalError::UnboundVariable(v.clone())),
            Term::Const(c) => {
                self.require(*c)?;
                Ok(*c)
            }
            Term::Pair(a, b) => {
                let a = self.resolve(a, sigma, scope)?;
                let b = self.resolve(b, sigma, scope)?;
                self.store
                    .find_ordered_pair(self.algebra, a, b)
                    .ok_or(EvalError::PairNotInterned(a, b))
            }
        }
    }

    fn eval_in(
        &mut self,
        phi: &Formula,
        sigma: &Assignment,
        scope: &mut Vec<(String, NameId)>,
    ) -> Result<ElementId, EvalError> {
        let h = self.algebra;
        Ok(match phi {
            Formula::Member(a, b) => {
                let a = self.resolve(a, sigma, scope)?;
                let b = self.resolve(b, sigma, scope)?;
                self.mem(a, b)
            }
            Formula::Eq(a, b) => {
                let a = self.resolve(a, sigma, scope)?;
                let b = self.resolve(b, sigma, scope)?;
                self.eq(a, b)
            }
            Formula::Not(f) => {
                let v = self.eval_in(f, sigma, scope)?;
                h.implies(v, h.bottom())
            }
            Formula::And(a, b) => {
                let a = self.eval_in(a, sigma, scope)?;
                h.meet(a, self.eval_in(b, sigma, scope)?)
            }
            Formula::Or(a, b) => {
                let a = self.eval_in(a, sigma, scope)?;
                h.join(a, self.eval_in(b, sigma, scope)?)
            }
            Formula::Implies(a, b) => {
                let a = self.eval_in(a, sigma, scope)?;
                h.implies(a, self.eval_in(b, sigma, scope)?)
            }
            Formula::BForall { var, bound, body } => {
                let x = self.resolve(bound, sigma, scope)?;
                let mut acc = h.top();
                for &(u, xu) in self.store.entries(x) {
                    scope.push((var.clone(), u));
                    let v = self.eval_in(body, sigma, scope);
                    scope.pop();
                    acc = h.meet(acc, h.implies(xu, v?));
                }
                acc
            }
            Formula::BExists { var, bound, body } => {
                let x = self.resolve(bound, sigma, scope)?;
                let mut acc = h.bottom();
                for &(u, xu) in self.store.entries(x) {
                    scope.push((var.clone(), u));
                    let v = self.eval_in(body, sigma, scope);
                    scope.pop();
                    acc = h.join(acc, h.meet(xu, v?));
                }
                acc
            }
            Formula::UForall { var, body } | Formula::UExists { var, body } => {
                if self.fragment.is_empty() {
                    return Err(EvalError::EmptyFragment);
                }
                let universal = matches!(phi, Formula::UForall { .. });
                let mut acc = if universal { h.top() } else { h.bottom() };
                for i in 0..self.fragment.len() {
                    let u = self.fragment[i];
                    self.require(u)?;
                    scope.push((var.clone(), u));
                    let v = self.eval_in(body, sigma, scope);
                    scope.pop();
                    acc = if universal {
                        h.meet(acc, v?)
                    } else {
                        h.join(acc, v?)
                    };
                }
                acc
            }
        })
    }
}

/// `eval(ctx, φ, σ)`
pub fn eval(
    ctx: &mut EvalContext<'_>,
    phi: &Formula,
    sigma: &Assignment,
) -> Result<ElementId, EvalError> {
    ctx.eval(phi, sigma)
}

/// `models(ctx, φ, σ)`
pub fn models(
    ctx: &mut EvalContext<'_>,
    phi: &Formula,
    sigma: &Assignment,
) -> Result<bool, EvalError> {
    ctx.models(phi, sigma)
}

/// A bounded formula saying that `h` is a function from `x` to `y`:
///
/// ```text
/// (forall a in x . exists b in y . <a, b> in h)
/// /\ (forall p in h . exists a in x . exists b in y . p = <a, b>)
/// /\ (forall a in x . forall b in y . forall c in y .
///         (<a, b> in h /\ <a, c> in h) -> b = c)
/// ```
///
/// Every pair `<a, b>` with `a` in `dom x` and `b` in `dom y` is interned here
/// so that the formula can be evaluated against a shared store.
pub fn make_function_predicate(
    store: &mut NameStore,
    algebra: &HeytingAlgebra,
    h: NameId,
    x: NameId,
    y: NameId,
) -> Result<Formula, NameError> {
    for id in [h, x, y] {
        if !store.contains(id) {
            return Err(NameError::UnknownId(id));
        }
        if !store.belongs_to(id, algebra) {
            return Err(NameError::CrossAlgebra);
        }
    }
    let xs: Vec<NameId> = store.domain(x).collect();
    let ys: Vec<NameId> = store.domain(y).collect();
    for &a in &xs {
        for &b in &ys {
            store.ordered_pair_h(algebra, a, b)?;
        }
    }
    let pair = |a: &str, b: &str| Term::pair(Term::var(a), Term::var(b));
    let total = Formula::forall_in(
        "a",
        x,
        Formula::exists_in("b", y, Formula::Member(pair("a", "b"), Term::Const(h))),
    );
    let graph = Formula::forall_in(
        "p",
        h,
        Formula::exists_in(
            "a",
            x,
            Formula::exists_in("b", y, Formula::Eq(Term::var("p"), pair("a", "b"))),
        ),
    );
    let unique = Formula::forall_in(
        "a",
        x,
        Formula::forall_in(
            "b",
            y,
            Formula::forall_in(
                "c",
                y,
                Formula::implies(
                    Formula::and(
                        Formula::Member(pair("a", "b"), Term::Const(h)),
                        Formula::Member(pair("a", "c"), Term::Const(h)),
                    ),
                    Formula::eq("b", "c"),
                ),
            ),
        ),
    );
    Ok(Formula::and(Formula::and(total, graph), unique))
}
