use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{LocaleMorphism, TransferError};
use crate::names::{NameId, NameStore};
use crate::valuation::EvalContext;

/// Largest domain for which surjections are searched exhaustively.
pub const MAX_SURJECTION_DOMAIN: usize = 4;

/// One key of the source and the key it is sent to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WitnessPair {
    pub source_key: NameId,
    pub image_key: NameId,
    /// `false` when the image key is a padded copy of the key's own lift,
    /// introduced because another key already took that lift.
    pub canonical: bool,
}

/// A name `x` over the source, its canonical lift over the target, and the
/// bijection `dom x -> dom image` witnessing the relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessedLift {
    pub source: NameId,
    pub image: NameId,
    pub witness: Vec<WitnessPair>,
}

impl WitnessedLift {
    /// Checks `image(witness(u)) = f(x(u))` for every key and that the witness
    /// is a bijection onto `dom image`.
    pub fn recheck(&self, f: &LocaleMorphism, store: &NameStore) -> bool {
        let entries = store.entries(self.source);
        let image_entries = store.entries(self.image);
        if self.witness.len() != entries.len() || image_entries.len() != entries.len() {
            return false;
        }
        let mut hit = HashSet::new();
        self.witness.iter().zip(entries).all(|(w, &(u, xu))| {
            w.source_key == u
                && hit.insert(w.image_key)
                && store.value(self.image, w.image_key) == Some(f.apply(xu))
        })
    }
}

/// Computes canonical lifts along one morphism, memoized by source name.
///
/// Keys of `x` are visited in `NameId` order. Each key `u` is sent to the
/// image of its own lift, unless an earlier key already took that name; then
/// it is sent to `pad(lift(u), k)` for the least `k` giving an unused name.
/// The image is `f . x . witness^-1`.
pub struct Lifter<'m> {
    f: &'m LocaleMorphism,
    memo: HashMap<NameId, WitnessedLift>,
}

impl<'m> Lifter<'m> {
    pub fn new(f: &'m LocaleMorphism) -> Self {
        Lifter {
            f,
            memo: HashMap::new(),
        }
    }

    pub fn morphism(&self) -> &'m LocaleMorphism {
        self.f
    }

    pub fn lift(
        &mut self,
        store: &mut NameStore,
        x: NameId,
    ) -> Result<WitnessedLift, TransferError> {
        if !store.contains(x) {
            return Err(TransferError::Name(crate::names::NameError::UnknownId(x)));
        }
        if !store.belongs_to(x, self.f.source()) {
            return Err(TransferError::CrossAlgebra);
        }
        let mut stack = vec![x];
        while let Some(&top) = stack.last() {
            if self.memo.contains_key(&top) {
                stack.pop();
                continue;
            }
            let pending: Vec<NameId> = store
                .domain(top)
                .filter(|u| !self.memo.contains_key(u))
                .collect();
            if pending.is_empty() {
                stack.pop();
                let lifted = self.build(store, top)?;
                self.memo.insert(top, lifted);
            } else {
                stack.extend(pending);
            }
        }
        Ok(self.memo[&x].clone())
    }

    /// Image name only.
    pub fn image(&mut self, store: &mut NameStore, x: NameId) -> Result<NameId, TransferError> {
        Ok(self.lift(store, x)?.image)
    }

    fn build(&self, store: &mut NameStore, x: NameId) -> Result<WitnessedLift, TransferError> {
        let target = self.f.target();
        let entries = store.entries(x).to_vec();
        let mut used = HashSet::new();
        let mut witness = Vec::with_capacity(entries.len());
        let mut image_entries = Vec::with_capacity(entries.len());
        for (u, xu) in entries {
            let base = self.memo[&u].image;
            let mut key = base;
            let mut k = 0;
            while used.contains(&key) {
                k += 1;
                key = store.pad_equivalent(target, base, k)?;
            }
            used.insert(key);
            witness.push(WitnessPair {
                source_key: u,
                image_key: key,
                canonical: k == 0,
            });
            image_entries.push((key, self.f.apply(xu)));
        }
        let image = store.make_name(target, image_entries)?;
        // make_name sorts by key; keep the witness in source order.
        Ok(WitnessedLift {
            source: x,
            image,
            witness,
        })
    }
}

/// Canonical lift with a throwaway memo.
pub fn lift(
    f: &LocaleMorphism,
    store: &mut NameStore,
    x: NameId,
) -> Result<WitnessedLift, TransferError> {
    Lifter::new(f).lift(store, x)
}

/// Surjections `0..n ->> 0..m` that respect `allowed(i, j)`, reported through
/// `visit` until it returns `true`.
fn search_surjections(
    n: usize,
    m: usize,
    allowed: &dyn Fn(usize, usize) -> bool,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    fn go(
        i: usize,
        n: usize,
        m: usize,
        assign: &mut Vec<usize>,
        hits: &mut Vec<usize>,
        allowed: &dyn Fn(usize, usize) -> bool,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let missing = hits.iter().filter(|&&h| h == 0).count();
        if missing > n - i {
            return false;
        }
        if i == n {
            return visit(assign);
        }
        for j in 0..m {
            if !allowed(i, j) {
                continue;
            }
            assign.push(j);
            hits[j] += 1;
            let done = go(i + 1, n, m, assign, hits, allowed, visit);
            hits[j] -= 1;
            assign.pop();
            if done {
                return true;
            }
        }
        false
    }
    go(0, n, m, &mut Vec::new(), &mut vec![0; m], allowed, visit)
}

/// The strict relation: `x` relates to `x'` when some surjection
/// `e: dom x ->> dom x'` has `x'(e(u)) = f(x(u))` and relates every `u` to
/// `e(u)` strictly. No closure under equality-one equivalence.
pub struct StrictRelation<'m> {
    f: &'m LocaleMorphism,
    memo: HashMap<(NameId, NameId), bool>,
}

impl<'m> StrictRelation<'m> {
    pub fn new(f: &'m LocaleMorphism) -> Self {
        StrictRelation {
            f,
            memo: HashMap::new(),
        }
    }

    pub fn related(
        &mut self,
        store: &NameStore,
        x: NameId,
        y: NameId,
    ) -> Result<bool, TransferError> {
        if let Some(&r) = self.memo.get(&(x, y)) {
            return Ok(r);
        }
        if !store.belongs_to(x, self.f.source()) || !store.belongs_to(y, self.f.target()) {
            return Err(TransferError::CrossAlgebra);
        }
        let xs = store.entries(x);
        let ys = store.entries(y);
        if xs.len() > MAX_SURJECTION_DOMAIN {
            return Err(TransferError::BudgetExceeded {
                domain: xs.len(),
                limit: MAX_SURJECTION_DOMAIN,
            });
        }
        let result = if ys.len() > xs.len() {
            false
        } else {
            let mut ok = vec![vec![false; ys.len()]; xs.len()];
            for (i, &(u, xu)) in xs.iter().enumerate() {
                for (j, &(v, yv)) in ys.iter().enumerate() {
                    ok[i][j] = yv == self.f.apply(xu) && self.related(store, u, v)?;
                }
            }
            search_surjections(xs.len(), ys.len(), &|i, j| ok[i][j], &mut |_| true)
        };
        self.memo.insert((x, y), result);
        Ok(result)
    }
}

/// The candidates strictly related to `x`, in the order given.
pub fn first_proposal_images(
    f: &LocaleMorphism,
    store: &NameStore,
    x: NameId,
    candidates: &[NameId],
) -> Result<Vec<NameId>, TransferError> {
    let mut rel = StrictRelation::new(f);
    let mut out = Vec::new();
    for &c in candidates {
        if rel.related(store, x, c)? {
            out.push(c);
        }
    }
    Ok(out)
}

/// Decides `x ~ y` for the relation closed under equality-one equivalence.
///
/// `y` qualifies when `[[y = lift(x)]] = 1`, or when some surjection
/// `e: dom x ->> dom y` commutes with `f` and has `[[e(u) = lift(u)]] = 1` for
/// every key. The canonical lift stands in for the class of all related names
/// at each level.
pub fn is_generalized_related(
    lifter: &mut Lifter<'_>,
    store: &mut NameStore,
    x: NameId,
    y: NameId,
) -> Result<bool, TransferError> {
    let f = lifter.morphism();
    if !store.belongs_to(y, f.target()) {
        return Err(TransferError::CrossAlgebra);
    }
    let lx = lifter.lift(store, x)?;
    let key_images: Vec<NameId> = lx
        .witness
        .iter()
        .map(|w| lifter.memo[&w.source_key].image)
        .collect();
    let target = f.target().clone();
    let mut ctx = EvalContext::new(&target, store);
    let top = target.top();
    if ctx.eq(y, lx.image) == top {
        return Ok(true);
    }
    let xs = store.entries(x);
    let ys = store.entries(y);
    if xs.len() > MAX_SURJECTION_DOMAIN {
        return Err(TransferError::BudgetExceeded {
            domain: xs.len(),
            limit: MAX_SURJECTION_DOMAIN,
        });
    }
    if ys.len() > xs.len() {
        return Ok(false);
    }
    let mut ok = vec![vec![false; ys.len()]; xs.len()];
    for (i, &(_, xu)) in xs.iter().enumerate() {
        for (j, &(v, yv)) in ys.iter().enumerate() {
            ok[i][j] = yv == f.apply(xu) && ctx.eq(v, key_images[i]) == top;
        }
    }
    Ok(search_surjections(
        xs.len(),
        ys.len(),
        &|i, j| ok[i][j],
        &mut |_| true,
    ))
}

/// Every bijection `dom x -> dom y` that commutes with `f` and relates each
/// key to an image key with `[[image key = lift(key)]] = 1`. Used to compare
/// the morphisms induced by different witnesses.
pub fn all_witnesses(
    lifter: &mut Lifter<'_>,
    store: &mut NameStore,
    x: NameId,
    y: NameId,
) -> Result<Vec<Vec<WitnessPair>>, TransferError> {
    let f = lifter.morphism();
    let lx = lifter.lift(store, x)?;
    let key_images: Vec<NameId> = lx
        .witness
        .iter()
        .map(|w| lifter.memo[&w.source_key].image)
        .collect();
    let target = f.target().clone();
    let mut ctx = EvalContext::new(&target, store);
    let xs = store.entries(x);
    let ys = store.entries(y);
    if xs.len() > MAX_SURJECTION_DOMAIN {
        return Err(TransferError::BudgetExceeded {
            domain: xs.len(),
            limit: MAX_SURJECTION_DOMAIN,
        });
    }
    if xs.len() != ys.len() {
        return Ok(Vec::new());
    }
    let top = target.top();
    let mut ok = vec![vec![false; ys.len()]; xs.len()];
    for (i, &(_, xu)) in xs.iter().enumerate() {
        for (j, &(v, yv)) in ys.iter().enumerate() {
            ok[i][j] = yv == f.apply(xu) && ctx.eq(v, key_images[i]) == top;
        }
    }
    let mut out = Vec::new();
    search_surjections(xs.len(), ys.len(), &|i, j| ok[i][j], &mut |assign| {
        out.push(
            assign
                .iter()
                .enumerate()
                .map(|(i, &j)| WitnessPair {
                    source_key: xs[i].0,
                    image_key: ys[j].0,
                    canonical: ys[j].0 == key_images[i],
                })
                .collect(),
        );
        false
    });
    Ok(out)
}
