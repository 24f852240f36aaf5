use std::sync::Arc;

use super::{LocaleMorphism, TransferError, WitnessPair, WitnessedLift};
use crate::hset::{from_name, HSet, HSetMorphism};
use crate::names::{NameId, NameStore};
use crate::valuation::EvalContext;

/// `(dom x, f . delta_x)` over the target algebra, where
/// `delta_x(u, v) = [[u in x]] /\ [[u = v]]`.
pub fn pushed_domain(
    f: &LocaleMorphism,
    store: &NameStore,
    x: NameId,
) -> Result<HSet, TransferError> {
    let a = &**f.source();
    let keys: Vec<NameId> = store.domain(x).collect();
    let mut ctx = EvalContext::new(a, store);
    let mut delta = Vec::with_capacity(keys.len() * keys.len());
    for &u in &keys {
        let m = ctx.atomic_mem(u, x)?;
        for &v in &keys {
            delta.push(f.apply(a.meet(m, ctx.atomic_eq(u, v)?)));
        }
    }
    let points = keys.iter().map(|&k| store.render(a, k)).collect();
    Ok(HSet::new(f.target().clone(), points, delta)?)
}

/// The morphism `(dom x, f . delta_x) -> (dom x', delta_x')` with
/// `e(u, v') = f([[u in x]]) /\ [[w(u) = v']] /\ [[v' in x']]` for the
/// witness `w`.
pub fn epsilon_for_witness(
    f: &LocaleMorphism,
    store: &NameStore,
    x: NameId,
    image: NameId,
    witness: &[WitnessPair],
) -> Result<HSetMorphism, TransferError> {
    let (a, b) = (&**f.source(), f.target());
    let source = Arc::new(pushed_domain(f, store, x)?);
    let target = Arc::new(from_name(store, b, image)?);
    let keys: Vec<NameId> = store.domain(x).collect();
    let image_keys: Vec<NameId> = store.domain(image).collect();
    let mut ca = EvalContext::new(a, store);
    let mut cb = EvalContext::new(b, store);
    let mut table = Vec::with_capacity(keys.len() * image_keys.len());
    for &u in &keys {
        let w = witness
            .iter()
            .find(|p| p.source_key == u)
            .ok_or_else(|| TransferError::NotTotal(store.render(a, u)))?;
        let fu = f.apply(ca.atomic_mem(u, x)?);
        for &v in &image_keys {
            let e = b.meet(cb.atomic_eq(w.image_key, v)?, cb.atomic_mem(v, image)?);
            table.push(b.meet(fu, e));
        }
    }
    Ok(HSetMorphism::new(source, target, table)?)
}

/// [`epsilon_for_witness`] for the witness recorded in a lift.
pub fn epsilon_hset_morphism(
    f: &LocaleMorphism,
    store: &NameStore,
    lifted: &WitnessedLift,
) -> Result<HSetMorphism, TransferError> {
    epsilon_for_witness(f, store, lifted.source, lifted.image, &lifted.witness)
}
