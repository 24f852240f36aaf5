//! The universe of H-names, built bottom-up and hash-consed.
//!
//! A name over an algebra `H` is a finite function from previously built names
//! to elements of `H`. Names live in a [`NameStore`], an append-only DAG in
//! which structurally equal names always get the same [`NameId`]. One store can
//! hold names over several algebras; every name remembers its algebra and
//! names over different algebras are never mixed.
//!
//! Ranks are 0-based: the empty name has rank 0 and a non-empty name has rank
//! one more than its highest key. The stage `V_α` is `{x : rank x < α}`.

mod hf;
mod literal;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::lattice::{AlgebraTag, ElementId, HeytingAlgebra};

pub use hf::{HFParseError, HFSet};
pub use literal::{parse_bindings, parse_name};

/// Enumeration refuses to build more names than this unless told otherwise.
pub const DEFAULT_ENUMERATION_CEILING: u128 = 1_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(transparent)]
pub struct NameId(u32);

impl NameId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for NameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum NameError {
    #[error("key {0:?} is not a name in this store")]
    UnknownKey(NameId),
    #[error("{0:?} is not a name in this store")]
    UnknownId(NameId),
    #[error("name or value belongs to a different algebra")]
    CrossAlgebra,
    #[error("key {0:?} is given two different values")]
    ConflictingEntry(NameId),
    #[error("enumeration would produce {predicted} names, ceiling is {ceiling}")]
    BudgetExceeded { predicted: u128, ceiling: u128 },
    #[error("projection to sets needs names over the two-element algebra")]
    WrongAlgebra,
    #[error("at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("`{0}` is not bound")]
    UnknownBinding(String),
    #[error("`{0}` is not an element of the algebra")]
    UnknownLabel(String),
}

type Entries = Box<[(NameId, ElementId)]>;

#[derive(Debug)]
struct Node {
    tag: AlgebraTag,
    entries: Entries,
    rank: u32,
}

/// Append-only, hash-consed store of names.
#[derive(Debug, Default)]
pub struct NameStore {
    nodes: Vec<Node>,
    index: HashMap<(AlgebraTag, Entries), NameId>,
}

impl NameStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, id: NameId) -> bool {
        id.index() < self.nodes.len()
    }

    fn node(&self, id: NameId) -> &Node {
        self.nodes
            .get(id.index())
            .unwrap_or_else(|| panic!("{id:?} is not a name in this store"))
    }

    /// Sorts and validates an entry list, collapsing repeated equal entries.
    fn normalize(
        &self,
        algebra: &HeytingAlgebra,
        entries: impl IntoIterator<Item = (NameId, ElementId)>,
    ) -> Result<Entries, NameError> {
        let mut entries: Vec<(NameId, ElementId)> = entries.into_iter().collect();
        for &(key, value) in &entries {
            let node = self
                .nodes
                .get(key.index())
                .ok_or(NameError::UnknownKey(key))?;
            if node.tag != algebra.tag() || !algebra.contains(value) {
                return Err(NameError::CrossAlgebra);
            }
        }
        entries.sort();
        entries.dedup();
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(NameError::ConflictingEntry(w[0].0));
        }
        Ok(entries.into_boxed_slice())
    }

    /// Interns the name with the given entries.
    pub fn make_name(
        &mut self,
        algebra: &HeytingAlgebra,
        entries: impl IntoIterator<Item = (NameId, ElementId)>,
    ) -> Result<NameId, NameError> {
        let entries = self.normalize(algebra, entries)?;
        Ok(self.intern(algebra.tag(), entries))
    }

    fn intern(&mut self, tag: AlgebraTag, entries: Entries) -> NameId {
        if let Some(&id) = self.index.get(&(tag, entries.clone())) {
            return id;
        }
        let rank = entries
            .iter()
            .map(|(k, _)| self.nodes[k.index()].rank + 1)
            .max()
            .unwrap_or(0);
        let id = NameId(u32::try_from(self.nodes.len()).expect("name store is full"));
        self.nodes.push(Node {
            tag,
            entries: entries.clone(),
            rank,
        });
        self.index.insert((tag, entries), id);
        id
    }

    /// Finds an already interned name without inserting.
    pub fn lookup(
        &self,
        algebra: &HeytingAlgebra,
        entries: impl IntoIterator<Item = (NameId, ElementId)>,
    ) -> Option<NameId> {
        let entries = self.normalize(algebra, entries).ok()?;
        self.index.get(&(algebra.tag(), entries)).copied()
    }

    pub fn empty(&mut self, algebra: &HeytingAlgebra) -> NameId {
        self.intern(algebra.tag(), Box::new([]))
    }

    /// The entries `(key, value)` of a name, sorted by key. Panics on an id
    /// from another store.
    pub fn entries(&self, id: NameId) -> &[(NameId, ElementId)] {
        &self.node(id).entries
    }

    pub fn domain(&self, id: NameId) -> impl ExactSizeIterator<Item = NameId> + '_ {
        self.entries(id).iter().map(|&(k, _)| k)
    }

    /// `x(key)`, if `key ∈ dom x`.
    pub fn value(&self, x: NameId, key: NameId) -> Option<ElementId> {
        let entries = self.entries(x);
        entries
            .binary_search_by_key(&key, |&(k, _)| k)
            .ok()
            .map(|i| entries[i].1)
    }

    pub fn rank(&self, id: NameId) -> Result<u32, NameError> {
        self.nodes
            .get(id.index())
            .map(|n| n.rank)
            .ok_or(NameError::UnknownId(id))
    }

    pub fn algebra_tag(&self, id: NameId) -> AlgebraTag {
        self.node(id).tag
    }

    pub fn belongs_to(&self, id: NameId, algebra: &HeytingAlgebra) -> bool {
        self.contains(id) && self.node(id).tag == algebra.tag()
    }

    fn require(&self, algebra: &HeytingAlgebra, id: NameId) -> Result<(), NameError> {
        if !self.contains(id) {
            Err(NameError::UnknownId(id))
        } else if self.node(id).tag != algebra.tag() {
            Err(NameError::CrossAlgebra)
        } else {
            Ok(())
        }
    }

    /// Predicted number of names produced by [`Self::enumerate_names`].
    pub fn predicted_count(algebra_len: usize, max_rank: u32, max_domain: usize) -> u128 {
        let mut count: u128 = 1;
        for _ in 0..max_rank {
            let prev = count;
            let mut next: u128 = 0;
            let mut binom: u128 = 1;
            let mut power: u128 = 1;
            for k in 0..=max_domain {
                if (k as u128) > prev {
                    break;
                }
                next = next.saturating_add(binom.saturating_mul(power));
                binom = binom.saturating_mul(prev - k as u128) / (k as u128 + 1);
                power = power.saturating_mul(algebra_len as u128);
            }
            count = next;
        }
        count
    }

    /// Every name of rank at most `max_rank` whose domain, at every level, has
    /// at most `max_domain` keys. Order is deterministic: by domain size, then
    /// by key combination, then by value assignment.
    pub fn enumerate_names(
        &mut self,
        algebra: &HeytingAlgebra,
        max_rank: u32,
        max_domain: usize,
        ceiling: u128,
    ) -> Result<Vec<NameId>, NameError> {
        let predicted = Self::predicted_count(algebra.len(), max_rank, max_domain);
        if predicted > ceiling {
            return Err(NameError::BudgetExceeded { predicted, ceiling });
        }
        let values: Vec<ElementId> = algebra.elements().collect();
        let mut level = vec![self.empty(algebra)];
        for _ in 0..max_rank {
            let mut next = Vec::new();
            let mut keys = Vec::new();
            for k in 0..=max_domain.min(level.len()) {
                self.enumerate_level(algebra, &level, &values, k, 0, &mut keys, &mut next);
            }
            level = next;
        }
        Ok(level)
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate_level(
        &mut self,
        algebra: &HeytingAlgebra,
        previous: &[NameId],
        values: &[ElementId],
        k: usize,
        start: usize,
        keys: &mut Vec<NameId>,
        out: &mut Vec<NameId>,
    ) {
        if keys.len() == k {
            let mut digits = vec![0usize; k];
            loop {
                let entries: Vec<_> = keys
                    .iter()
                    .zip(&digits)
                    .map(|(&key, &d)| (key, values[d]))
                    .collect();
                let id = self
                    .make_name(algebra, entries)
                    .expect("enumerated keys are valid");
                out.push(id);
                // odometer over value assignments, last key fastest
                let mut pos = k;
                loop {
                    if pos == 0 {
                        return;
                    }
                    pos -= 1;
                    digits[pos] += 1;
                    if digits[pos] < values.len() {
                        break;
                    }
                    digits[pos] = 0;
                }
            }
        }
        for i in start..previous.len() {
            keys.push(previous[i]);
            self.enumerate_level(algebra, previous, values, k, i + 1, keys, out);
            keys.pop();
        }
    }

    /// The canonical name `x̂ = {(ŷ, 1) | y ∈ x}`.
    pub fn hat_embed(&mut self, algebra: &HeytingAlgebra, x: &HFSet) -> NameId {
        let top = algebra.top();
        let keys: Vec<NameId> = x.elements().map(|y| self.hat_embed(algebra, y)).collect();
        self.make_name(algebra, keys.into_iter().map(|k| (k, top)))
            .expect("hat images are well formed")
    }

    /// The set `x̌ = {y̌ | y ∈ dom x, x(y) = 1}` of a name over the two-element
    /// algebra.
    pub fn check_project(&self, algebra: &HeytingAlgebra, x: NameId) -> Result<HFSet, NameError> {
        if !algebra.is_two() {
            return Err(NameError::WrongAlgebra);
        }
        self.require(algebra, x)?;
        let mut memo: HashMap<NameId, HFSet> = HashMap::new();
        Ok(self.check_rec(algebra, x, &mut memo))
    }

    fn check_rec(
        &self,
        algebra: &HeytingAlgebra,
        x: NameId,
        memo: &mut HashMap<NameId, HFSet>,
    ) -> HFSet {
        if let Some(s) = memo.get(&x) {
            return s.clone();
        }
        let set: HFSet = self
            .entries(x)
            .iter()
            .filter(|&&(_, v)| v == algebra.top())
            .map(|&(k, _)| self.check_rec(algebra, k, memo))
            .collect();
        memo.insert(x, set.clone());
        set
    }

    /// `{u}^(H) = {(u, 1)}`
    pub fn singleton_h(
        &mut self,
        algebra: &HeytingAlgebra,
        u: NameId,
    ) -> Result<NameId, NameError> {
        self.require(algebra, u)?;
        self.make_name(algebra, [(u, algebra.top())])
    }

    /// `{u, v}^(H) = {(u, 1), (v, 1)}`
    pub fn unordered_pair_h(
        &mut self,
        algebra: &HeytingAlgebra,
        u: NameId,
        v: NameId,
    ) -> Result<NameId, NameError> {
        self.require(algebra, u)?;
        self.require(algebra, v)?;
        let top = algebra.top();
        self.make_name(algebra, [(u, top), (v, top)])
    }

    /// Kuratowski pair `⟨u, v⟩ = {{u}, {u, v}}` built with the operations above.
    pub fn ordered_pair_h(
        &mut self,
        algebra: &HeytingAlgebra,
        u: NameId,
        v: NameId,
    ) -> Result<NameId, NameError> {
        let single = self.singleton_h(algebra, u)?;
        let double = self.unordered_pair_h(algebra, u, v)?;
        self.unordered_pair_h(algebra, single, double)
    }

    /// Looks up `⟨u, v⟩` without interning it.
    pub fn find_ordered_pair(
        &self,
        algebra: &HeytingAlgebra,
        u: NameId,
        v: NameId,
    ) -> Option<NameId> {
        let top = algebra.top();
        let single = self.lookup(algebra, [(u, top)])?;
        let double = self.lookup(algebra, [(u, top), (v, top)])?;
        self.lookup(algebra, [(single, top), (double, top)])
    }

    /// The `j`-th reserved padding marker (`j ≥ 1`): the image of the Zermelo
    /// numeral `j`.
    pub fn padding_marker(&mut self, algebra: &HeytingAlgebra, j: usize) -> NameId {
        self.hat_embed(algebra, &HFSet::zermelo(j))
    }

    /// Extends `x` by `fresh_count` reserved markers, each with value bottom.
    ///
    /// The result has a strictly larger domain, so it is a different name, yet
    /// its equality value with `x` is top. Markers already in `dom x` are
    /// skipped, which keeps the result deterministic.
    ///
    /// Panics if `fresh_count` is zero.
    pub fn pad_equivalent(
        &mut self,
        algebra: &HeytingAlgebra,
        x: NameId,
        fresh_count: usize,
    ) -> Result<NameId, NameError> {
        assert!(fresh_count >= 1, "padding needs at least one fresh key");
        self.require(algebra, x)?;
        let mut entries: Vec<(NameId, ElementId)> = self.entries(x).to_vec();
        let mut added = 0;
        let mut j = 1;
        while added < fresh_count {
            let marker = self.padding_marker(algebra, j);
            j += 1;
            if self.value(x, marker).is_none() {
                entries.push((marker, algebra.bottom()));
                added += 1;
            }
        }
        self.make_name(algebra, entries)
    }

    /// Renders a name in literal syntax, e.g. `{({}, a)}`.
    pub fn render(&self, algebra: &HeytingAlgebra, id: NameId) -> String {
        let mut out = String::new();
        self.render_into(algebra, id, &mut out);
        out
    }

    fn render_into(&self, algebra: &HeytingAlgebra, id: NameId, out: &mut String) {
        out.push('{');
        for (i, &(k, v)) in self.entries(id).iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push('(');
            self.render_into(algebra, k, out);
            out.push_str(", ");
            out.push_str(algebra.label(v));
            out.push(')');
        }
        out.push('}');
    }
}

/// Free-function form of [`NameStore::enumerate_names`] with the default ceiling.
pub fn enumerate_names(
    store: &mut NameStore,
    algebra: &HeytingAlgebra,
    max_rank: u32,
    max_domain: usize,
) -> Result<Vec<NameId>, NameError> {
    store.enumerate_names(algebra, max_rank, max_domain, DEFAULT_ENUMERATION_CEILING)
}
