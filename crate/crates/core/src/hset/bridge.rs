use std::sync::Arc;

use super::{HSet, HSetError, HSetMorphism};
use crate::lattice::{ElementId, HeytingAlgebra};
use crate::names::{HFSet, NameId, NameStore};
use crate::valuation::{make_function_predicate, Assignment, EvalContext};

fn keys(store: &NameStore, u: NameId) -> Vec<NameId> {
    store.domain(u).collect()
}

fn labels(store: &NameStore, algebra: &HeytingAlgebra, keys: &[NameId]) -> Vec<String> {
    keys.iter().map(|&k| store.render(algebra, k)).collect()
}

fn require(store: &NameStore, algebra: &HeytingAlgebra, ids: &[NameId]) -> Result<(), HSetError> {
    for &id in ids {
        if !store.contains(id) {
            return Err(crate::names::NameError::UnknownId(id).into());
        }
        if !store.belongs_to(id, algebra) {
            return Err(HSetError::CrossAlgebra);
        }
    }
    Ok(())
}

/// `(dom u, delta_u)` with `delta_u(x, y) = [[x in u]] /\ [[x = y]] /\ [[y in u]]`.
/// Points are the rendered keys.
pub fn from_name(
    store: &NameStore,
    algebra: &Arc<HeytingAlgebra>,
    u: NameId,
) -> Result<HSet, HSetError> {
    require(store, algebra, &[u])?;
    let h = &**algebra;
    let ks = keys(store, u);
    let mut ctx = EvalContext::new(h, store);
    let mem = ks
        .iter()
        .map(|&k| ctx.atomic_mem(k, u))
        .collect::<Result<Vec<_>, _>>()?;
    let n = ks.len();
    let mut delta = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            delta.push(h.meet(h.meet(mem[i], ctx.atomic_eq(ks[i], ks[j])?), mem[j]));
        }
    }
    HSet::new(algebra.clone(), labels(store, h, &ks), delta)
}

/// The two-factor form `[[x in u]] /\ [[x = y]]`, row-major over `dom u`.
pub fn delta_name_simplified(
    store: &NameStore,
    algebra: &HeytingAlgebra,
    u: NameId,
) -> Result<Vec<ElementId>, HSetError> {
    require(store, algebra, &[u])?;
    let ks = keys(store, u);
    let mut ctx = EvalContext::new(algebra, store);
    let mut out = Vec::with_capacity(ks.len() * ks.len());
    for &x in &ks {
        let m = ctx.atomic_mem(x, u)?;
        for &y in &ks {
            out.push(algebra.meet(m, ctx.atomic_eq(x, y)?));
        }
    }
    Ok(out)
}

/// `lambda(x, x') = [[x in u]] /\ [[x = x']] /\ [[x' in u']]`, an isomorphism
/// `from_name(u) -> from_name(u')` when `[[u = u']] = 1`.
pub fn lambda_iso(
    store: &NameStore,
    algebra: &Arc<HeytingAlgebra>,
    u: NameId,
    u1: NameId,
) -> Result<HSetMorphism, HSetError> {
    require(store, algebra, &[u, u1])?;
    let h = &**algebra;
    let mut ctx = EvalContext::new(h, store);
    if ctx.atomic_eq(u, u1)? != h.top() {
        return Err(HSetError::NotEquivalent);
    }
    let source = Arc::new(from_name(store, algebra, u)?);
    let target = Arc::new(from_name(store, algebra, u1)?);
    let (xs, ys) = (keys(store, u), keys(store, u1));
    let mut table = Vec::with_capacity(xs.len() * ys.len());
    for &x in &xs {
        let a = ctx.atomic_mem(x, u)?;
        for &y in &ys {
            let b = h.meet(ctx.atomic_eq(x, y)?, ctx.atomic_mem(y, u1)?);
            table.push(h.meet(a, b));
        }
    }
    HSetMorphism::new(source, target, table)
}

/// `lambda_h(a, b) = [[a in x]] /\ [[<a, b> in h]] /\ [[b in y]]`, defined
/// when `h` is a function name from `x` to `y`.
pub fn lambda_f(
    store: &mut NameStore,
    algebra: &Arc<HeytingAlgebra>,
    h: NameId,
    x: NameId,
    y: NameId,
) -> Result<HSetMorphism, HSetError> {
    require(store, algebra, &[h, x, y])?;
    let alg = &**algebra;
    let fun = make_function_predicate(store, alg, h, x, y)?;
    let (xs, ys) = (keys(store, x), keys(store, y));
    let mut pairs = Vec::with_capacity(xs.len() * ys.len());
    for &a in &xs {
        for &b in &ys {
            pairs.push(store.ordered_pair_h(alg, a, b)?);
        }
    }
    let store = &*store;
    let mut ctx = EvalContext::new(alg, store);
    if !ctx.models(&fun, &Assignment::new())? {
        return Err(HSetError::NotAFunctionName);
    }
    let mut table = Vec::with_capacity(pairs.len());
    for (i, &a) in xs.iter().enumerate() {
        let ma = ctx.atomic_mem(a, x)?;
        for (j, &b) in ys.iter().enumerate() {
            let p = ctx.atomic_mem(pairs[i * ys.len() + j], h)?;
            table.push(alg.meet(alg.meet(ma, p), ctx.atomic_mem(b, y)?));
        }
    }
    let source = Arc::new(from_name(store, algebra, x)?);
    let target = Arc::new(from_name(store, algebra, y)?);
    HSetMorphism::new(source, target, table)
}

/// The names `x-dot = {(hat(z), delta(x, z)) | z in X}`, where point `z` is
/// represented by the ordinal of its index.
pub fn dagger_points(store: &mut NameStore, x: &HSet) -> Result<Vec<NameId>, HSetError> {
    let h = &**x.algebra();
    let hats: Vec<NameId> = (0..x.len())
        .map(|i| store.hat_embed(h, &HFSet::ordinal(i)))
        .collect();
    (0..x.len())
        .map(|i| Ok(store.make_name(h, hats.iter().enumerate().map(|(j, &z)| (z, x.delta(i, j))))?))
        .collect()
}

/// `X-dagger = {(x-dot, delta(x, x)) | x in X}`.
pub fn dagger_hset(store: &mut NameStore, x: &HSet) -> Result<NameId, HSetError> {
    let dots = dagger_points(store, x)?;
    let h = &**x.algebra();
    Ok(store.make_name(h, dots.iter().enumerate().map(|(i, &d)| (d, x.delta(i, i))))?)
}

/// `phi-dagger = {(<x-dot, y-dot>, phi(x, y))}`.
pub fn dagger_morphism(store: &mut NameStore, phi: &HSetMorphism) -> Result<NameId, HSetError> {
    let h = phi.source().algebra().clone();
    let xs = dagger_points(store, phi.source())?;
    let ys = dagger_points(store, phi.target())?;
    let mut entries = Vec::with_capacity(xs.len() * ys.len());
    for (i, &a) in xs.iter().enumerate() {
        for (j, &b) in ys.iter().enumerate() {
            entries.push((store.ordered_pair_h(&h, a, b)?, phi.phi(i, j)));
        }
    }
    Ok(store.make_name(&h, entries)?)
}

/// The isomorphism `X -> from_name(X-dagger)` with `theta(x, y-dot) = delta(x, y)`.
pub fn dagger_roundtrip(store: &mut NameStore, x: &HSet) -> Result<HSetMorphism, HSetError> {
    let dots = dagger_points(store, x)?;
    let dagger = dagger_hset(store, x)?;
    let target = Arc::new(from_name(store, x.algebra(), dagger)?);
    let ks = keys(store, dagger);
    let owner: Vec<usize> = ks
        .iter()
        .map(|k| dots.iter().position(|d| d == k).expect("key of the dagger"))
        .collect();
    HSetMorphism::from_fn(Arc::new(x.clone()), target, |a, k| x.delta(a, owner[k]))
}
