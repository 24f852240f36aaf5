//! Finite complete Heyting algebras.
//!
//! Every finite distributive lattice is a complete Heyting algebra (a frame), so
//! an algebra here is a finite poset that happens to be a distributive lattice.
//! All operations are table lookups: meet, join and implication are precomputed
//! when the algebra is built.
//!
//! Elements are handed out as [`ElementId`]s, which remember the algebra that
//! produced them. The plain operations ([`HeytingAlgebra::meet`] and friends)
//! panic when given an element of another algebra; the `try_` variants report
//! [`LatticeError::CrossAlgebra`] instead.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};

use sha2::{Digest, Sha256};
use thiserror::Error;

/// Largest number of elements an algebra may have.
pub const MAX_ELEMENTS: usize = 1 << 16;

/// Largest number of cells in one operation table. Tables are dense `n × n`,
/// so this bounds memory well before [`MAX_ELEMENTS`] is reached.
pub const MAX_TABLE_CELLS: usize = 1 << 24;

static NEXT_TAG: AtomicU32 = AtomicU32::new(1);

/// Identity of one constructed algebra. Clones share the tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraTag(u32);

impl AlgebraTag {
    fn fresh() -> Self {
        AlgebraTag(NEXT_TAG.fetch_add(1, Ordering::Relaxed))
    }
}

/// An element of a particular [`HeytingAlgebra`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementId {
    tag: AlgebraTag,
    index: u32,
}

impl ElementId {
    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn tag(self) -> AlgebraTag {
        self.tag
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("not a partial order: {0}")]
    NotAPoset(String),
    #[error("not a lattice: {a} and {b} have no {bound}")]
    NotALattice {
        a: String,
        b: String,
        bound: &'static str,
    },
    #[error("not a frame: {a} /\\ ({b} \\/ {c}) differs from ({a} /\\ {b}) \\/ ({a} /\\ {c})")]
    NotAFrame { a: String, b: String, c: String },
    #[error("element {0:?} does not belong to this algebra")]
    CrossAlgebra(ElementId),
    #[error("algebra with {0} elements exceeds the size limit")]
    TooLarge(usize),
}

/// A finite complete Heyting algebra with precomputed operation tables.
#[derive(Clone)]
pub struct HeytingAlgebra {
    tag: AlgebraTag,
    labels: Vec<String>,
    by_label: HashMap<String, u32>,
    leq: Vec<bool>,
    meet: Vec<u32>,
    join: Vec<u32>,
    imp: Vec<u32>,
    bottom: u32,
    top: u32,
}

impl fmt::Debug for HeytingAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HeytingAlgebra")
            .field("tag", &self.tag)
            .field("labels", &self.labels)
            .finish()
    }
}

fn check_size(n: usize) -> Result<(), LatticeError> {
    if n == 0 || n > MAX_ELEMENTS || n.saturating_mul(n) > MAX_TABLE_CELLS {
        return Err(LatticeError::TooLarge(n));
    }
    Ok(())
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

impl HeytingAlgebra {
    /// Builds an algebra from a full order relation, given row-major as
    /// `leq[a * n + b]`. Reflexivity is added; everything else is checked.
    pub fn from_order(labels: Vec<String>, mut leq: Vec<bool>) -> Result<Self, LatticeError> {
        let n = labels.len();
        check_size(n)?;
        assert_eq!(leq.len(), n * n, "order table must be n x n");
        let mut by_label = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if by_label.insert(l.clone(), i as u32).is_some() {
                return Err(LatticeError::Parse {
                    line: 0,
                    message: format!("duplicate element label `{l}`"),
                });
            }
        }
        for a in 0..n {
            leq[a * n + a] = true;
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if leq[a * n + b] && leq[b * n + a] {
                    return Err(LatticeError::NotAPoset(format!(
                        "{} <= {} and {} <= {}",
                        labels[a], labels[b], labels[b], labels[a]
                    )));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !leq[a * n + b] {
                    continue;
                }
                for c in 0..n {
                    if leq[b * n + c] && !leq[a * n + c] {
                        return Err(LatticeError::NotAPoset(format!(
                            "{} <= {} <= {} but not {} <= {}",
                            labels[a], labels[b], labels[c], labels[a], labels[c]
                        )));
                    }
                }
            }
        }

        let le = |a: usize, b: usize| leq[a * n + b];
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for a in 0..n {
            for b in a..n {
                let m = extremal_bound(n, |c| le(c, a) && le(c, b), le).ok_or_else(|| {
                    LatticeError::NotALattice {
                        a: labels[a].clone(),
                        b: labels[b].clone(),
                        bound: "meet",
                    }
                })?;
                let j = extremal_bound(n, |c| le(a, c) && le(b, c), |x, y| le(y, x)).ok_or_else(
                    || LatticeError::NotALattice {
                        a: labels[a].clone(),
                        b: labels[b].clone(),
                        bound: "join",
                    },
                )?;
                meet[a * n + b] = m as u32;
                meet[b * n + a] = m as u32;
                join[a * n + b] = j as u32;
                join[b * n + a] = j as u32;
            }
        }
        let bottom = (0..n).fold(0, |acc, x| meet[acc * n + x] as usize);
        let top = (0..n).fold(0, |acc, x| join[acc * n + x] as usize);

        for a in 0..n {
            for b in 0..n {
                for c in (b + 1)..n {
                    let lhs = meet[a * n + join[b * n + c] as usize];
                    let ab = meet[a * n + b] as usize;
                    let ac = meet[a * n + c] as usize;
                    if lhs != join[ab * n + ac] {
                        return Err(LatticeError::NotAFrame {
                            a: labels[a].clone(),
                            b: labels[b].clone(),
                            c: labels[c].clone(),
                        });
                    }
                }
            }
        }

        let mut imp = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let mut acc = bottom;
                for c in 0..n {
                    if le(meet[a * n + c] as usize, b) {
                        acc = join[acc * n + c] as usize;
                    }
                }
                imp[a * n + b] = acc as u32;
            }
        }

        Ok(HeytingAlgebra {
            tag: AlgebraTag::fresh(),
            labels,
            by_label,
            leq,
            meet,
            join,
            imp,
            bottom: bottom as u32,
            top: top as u32,
        })
    }

    /// Parses the line-based algebra format and validates the result.
    ///
    /// ```text
    /// elements: 0, m, 1
    /// hasse: 0<m, m<1
    /// ```
    ///
    /// `order: a<=b` lines give the full relation instead (reflexivity implied).
    /// Blank lines and `#` comments are ignored.
    pub fn parse(source: &str) -> Result<Self, LatticeError> {
        let mut labels: Option<Vec<String>> = None;
        let mut order_pairs = Vec::new();
        let mut hasse_pairs = Vec::new();
        for (i, raw) in source.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| LatticeError::Parse {
                line: line_no,
                message,
            };
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| err(format!("expected `key: value`, found `{line}`")))?;
            match key.trim() {
                "elements" => {
                    if labels.is_some() {
                        return Err(err("`elements` given twice".into()));
                    }
                    let ls: Vec<String> = rest
                        .split(',')
                        .map(|s| s.trim().to_string())
                        .filter(|s| !s.is_empty())
                        .collect();
                    if let Some(bad) = ls.iter().find(|l| !is_identifier(l)) {
                        return Err(err(format!("`{bad}` is not a valid element label")));
                    }
                    if ls.is_empty() {
                        return Err(err("no elements listed".into()));
                    }
                    labels = Some(ls);
                }
                "order" | "hasse" => {
                    let is_order = key.trim() == "order";
                    let sep = if is_order { "<=" } else { "<" };
                    for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        let (a, b) = item
                            .split_once(sep)
                            .ok_or_else(|| err(format!("expected `a{sep}b`, found `{item}`")))?;
                        let pair = (a.trim().to_string(), b.trim().to_string(), line_no);
                        if is_order {
                            order_pairs.push(pair);
                        } else {
                            hasse_pairs.push(pair);
                        }
                    }
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        let labels = labels.ok_or(LatticeError::Parse {
            line: 0,
            message: "missing `elements:` line".into(),
        })?;
        if !order_pairs.is_empty() && !hasse_pairs.is_empty() {
            return Err(LatticeError::Parse {
                line: 0,
                message: "mixes `order:` and `hasse:` lines".into(),
            });
        }
        let n = labels.len();
        check_size(n)?;
        let index: HashMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let mut leq = vec![false; n * n];
        let closure = !hasse_pairs.is_empty();
        for (a, b, line) in order_pairs.iter().chain(hasse_pairs.iter()) {
            let lookup = |l: &str| {
                index.get(l).copied().ok_or_else(|| LatticeError::Parse {
                    line: *line,
                    message: format!("unknown element `{l}`"),
                })
            };
            let (a, b) = (lookup(a)?, lookup(b)?);
            leq[a * n + b] = true;
        }
        if closure {
            for a in 0..n {
                leq[a * n + a] = true;
            }
            // Warshall
            for k in 0..n {
                for a in 0..n {
                    if leq[a * n + k] {
                        for b in 0..n {
                            if leq[k * n + b] {
                                leq[a * n + b] = true;
                            }
                        }
                    }
                }
            }
        }
        HeytingAlgebra::from_order(labels, leq)
    }

    /// Trusted constructor for algebras whose tables are known in closed form.
    fn from_tables(
        labels: Vec<String>,
        leq: Vec<bool>,
        meet: Vec<u32>,
        join: Vec<u32>,
        imp: Vec<u32>,
        bottom: u32,
        top: u32,
    ) -> Self {
        let by_label = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i as u32))
            .collect();
        HeytingAlgebra {
            tag: AlgebraTag::fresh(),
            labels,
            by_label,
            leq,
            meet,
            join,
            imp,
            bottom,
            top,
        }
    }

    /// The linear order `0 < c1 < ... < 1` with `length` elements.
    ///
    /// Lengths 1, 2 and 3 are labelled `0`, `0 1` and `0 m 1`; longer chains
    /// use `c1`, `c2`, ... for the interior.
    pub fn chain(length: usize) -> Result<Self, LatticeError> {
        check_size(length)?;
        let n = length;
        let labels: Vec<String> = (0..n)
            .map(|i| match (i, n) {
                (0, _) => "0".to_string(),
                (i, n) if i == n - 1 => "1".to_string(),
                (_, 3) => "m".to_string(),
                (i, _) => format!("c{i}"),
            })
            .collect();
        let mut leq = vec![false; n * n];
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        let mut imp = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = a <= b;
                meet[a * n + b] = a.min(b) as u32;
                join[a * n + b] = a.max(b) as u32;
                imp[a * n + b] = if a <= b { (n - 1) as u32 } else { b as u32 };
            }
        }
        Ok(Self::from_tables(
            labels,
            leq,
            meet,
            join,
            imp,
            0,
            (n - 1) as u32,
        ))
    }

    /// The powerset algebra on `atom_count` atoms.
    ///
    /// Element `i` is the subset with bitmask `i`; labels are `0`, `1` and the
    /// atom letters (`a`, `b`, `ab`, ...) for the rest.
    pub fn boolean(atom_count: usize) -> Result<Self, LatticeError> {
        if atom_count >= usize::BITS as usize {
            return Err(LatticeError::TooLarge(usize::MAX));
        }
        let n = 1usize << atom_count;
        check_size(n)?;
        let full = n - 1;
        let labels: Vec<String> = (0..n)
            .map(|mask| {
                if mask == 0 {
                    "0".to_string()
                } else if mask == full {
                    "1".to_string()
                } else {
                    (0..atom_count)
                        .filter(|bit| mask & (1 << bit) != 0)
                        .map(atom_name)
                        .collect()
                }
            })
            .collect();
        let mut leq = vec![false; n * n];
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        let mut imp = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = a & b == a;
                meet[a * n + b] = (a & b) as u32;
                join[a * n + b] = (a | b) as u32;
                imp[a * n + b] = ((!a & full) | b) as u32;
            }
        }
        Ok(Self::from_tables(
            labels,
            leq,
            meet,
            join,
            imp,
            0,
            full as u32,
        ))
    }

    /// A copy with new element labels. The copy is a distinct algebra.
    pub fn relabel(&self, labels: &[&str]) -> Result<Self, LatticeError> {
        if labels.len() != self.len() {
            return Err(LatticeError::Parse {
                line: 0,
                message: format!("expected {} labels, got {}", self.len(), labels.len()),
            });
        }
        let mut seen = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if !is_identifier(l) || seen.insert(*l, i).is_some() {
                return Err(LatticeError::Parse {
                    line: 0,
                    message: format!("bad or duplicate label `{l}`"),
                });
            }
        }
        Ok(Self::from_tables(
            labels.iter().map(|s| s.to_string()).collect(),
            self.leq.clone(),
            self.meet.clone(),
            self.join.clone(),
            self.imp.clone(),
            self.bottom,
            self.top,
        ))
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false: an algebra has at least one element.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, e: ElementId) -> &str {
        &self.labels[self.own(e)]
    }

    pub fn element(&self, label: &str) -> Option<ElementId> {
        self.by_label.get(label).map(|&index| self.id(index))
    }

    /// The element at a dense index. Panics when out of range.
    pub fn element_at(&self, index: usize) -> ElementId {
        assert!(index < self.len(), "element index {index} out of range");
        self.id(index as u32)
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = ElementId> + '_ {
        (0..self.len() as u32).map(|i| self.id(i))
    }

    pub fn bottom(&self) -> ElementId {
        self.id(self.bottom)
    }

    pub fn top(&self) -> ElementId {
        self.id(self.top)
    }

    pub fn contains(&self, e: ElementId) -> bool {
        e.tag == self.tag && e.index() < self.len()
    }

    pub fn check(&self, e: ElementId) -> Result<ElementId, LatticeError> {
        if self.contains(e) {
            Ok(e)
        } else {
            Err(LatticeError::CrossAlgebra(e))
        }
    }

    #[inline]
    fn id(&self, index: u32) -> ElementId {
        ElementId {
            tag: self.tag,
            index,
        }
    }

    #[inline]
    fn own(&self, e: ElementId) -> usize {
        assert!(
            e.tag == self.tag,
            "element {e:?} used with an algebra it does not belong to"
        );
        e.index()
    }

    #[inline]
    fn cell(&self, a: ElementId, b: ElementId) -> usize {
        self.own(a) * self.len() + self.own(b)
    }

    #[inline]
    pub fn leq(&self, a: ElementId, b: ElementId) -> bool {
        self.leq[self.cell(a, b)]
    }

    #[inline]
    pub fn meet(&self, a: ElementId, b: ElementId) -> ElementId {
        self.id(self.meet[self.cell(a, b)])
    }

    #[inline]
    pub fn join(&self, a: ElementId, b: ElementId) -> ElementId {
        self.id(self.join[self.cell(a, b)])
    }

    /// Relative pseudo-complement `a → b`, the largest `c` with `a ∧ c ≤ b`.
    #[inline]
    pub fn implies(&self, a: ElementId, b: ElementId) -> ElementId {
        self.id(self.imp[self.cell(a, b)])
    }

    /// Pseudo-complement `a → 0`.
    #[inline]
    pub fn neg(&self, a: ElementId) -> ElementId {
        self.implies(a, self.bottom())
    }

    /// `(a → b) ∧ (b → a)`
    pub fn iff(&self, a: ElementId, b: ElementId) -> ElementId {
        self.meet(self.implies(a, b), self.implies(b, a))
    }

    /// Infimum of a finite family; the empty meet is top.
    pub fn big_meet<I: IntoIterator<Item = ElementId>>(&self, items: I) -> ElementId {
        items
            .into_iter()
            .fold(self.top(), |acc, e| self.meet(acc, e))
    }

    /// Supremum of a finite family; the empty join is bottom.
    pub fn big_join<I: IntoIterator<Item = ElementId>>(&self, items: I) -> ElementId {
        items
            .into_iter()
            .fold(self.bottom(), |acc, e| self.join(acc, e))
    }

    pub fn try_leq(&self, a: ElementId, b: ElementId) -> Result<bool, LatticeError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.leq(a, b))
    }

    pub fn try_meet(&self, a: ElementId, b: ElementId) -> Result<ElementId, LatticeError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.meet(a, b))
    }

    pub fn try_join(&self, a: ElementId, b: ElementId) -> Result<ElementId, LatticeError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.join(a, b))
    }

    pub fn try_implies(&self, a: ElementId, b: ElementId) -> Result<ElementId, LatticeError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.implies(a, b))
    }

    pub fn try_neg(&self, a: ElementId) -> Result<ElementId, LatticeError> {
        self.check(a)?;
        Ok(self.neg(a))
    }

    pub fn try_big_meet<I: IntoIterator<Item = ElementId>>(
        &self,
        items: I,
    ) -> Result<ElementId, LatticeError> {
        items
            .into_iter()
            .try_fold(self.top(), |acc, e| self.try_meet(acc, e))
    }

    pub fn try_big_join<I: IntoIterator<Item = ElementId>>(
        &self,
        items: I,
    ) -> Result<ElementId, LatticeError> {
        items
            .into_iter()
            .try_fold(self.bottom(), |acc, e| self.try_join(acc, e))
    }

    /// True iff `a ∨ ¬a = 1` for every `a`.
    pub fn is_boolean(&self) -> bool {
        self.elements()
            .all(|a| self.join(a, self.neg(a)) == self.top())
    }

    /// True for the two-element algebra `{0 < 1}`.
    pub fn is_two(&self) -> bool {
        self.len() == 2
    }

    /// Same labels and same order (tags are ignored).
    pub fn same_structure(&self, other: &HeytingAlgebra) -> bool {
        self.labels == other.labels && self.leq == other.leq
    }

    /// Covering pairs `(a, b)`: `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(ElementId, ElementId)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.elements() {
                if a == b || !self.leq(a, b) {
                    continue;
                }
                let between = self
                    .elements()
                    .any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b));
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Serializes to the `elements:` / `hasse:` text format.
    pub fn to_text(&self) -> String {
        let mut s = format!("elements: {}\n", self.labels.join(", "));
        let covers: Vec<String> = self
            .covers()
            .into_iter()
            .map(|(a, b)| format!("{}<{}", self.label(a), self.label(b)))
            .collect();
        if !covers.is_empty() {
            s.push_str(&format!("hasse: {}\n", covers.join(", ")));
        }
        s
    }

    /// SHA-256 of the canonical text form, hex encoded.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Finds the unique element satisfying `member` that dominates every other
/// member under `below(x, best)`; `None` when no such element exists.
fn extremal_bound(
    n: usize,
    member: impl Fn(usize) -> bool,
    below: impl Fn(usize, usize) -> bool,
) -> Option<usize> {
    let mut best: Option<usize> = None;
    for c in (0..n).filter(|&c| member(c)) {
        match best {
            None => best = Some(c),
            Some(b) if below(b, c) => best = Some(c),
            _ => {}
        }
    }
    let best = best?;
    (0..n)
        .filter(|&c| member(c))
        .all(|c| below(c, best))
        .then_some(best)
}

fn atom_name(bit: usize) -> String {
    let letter = (b'a' + (bit % 26) as u8) as char;
    if bit < 26 {
        letter.to_string()
    } else {
        format!("{letter}{}", bit / 26)
    }
}

/// Parses an algebra description; see [`HeytingAlgebra::parse`].
pub fn load_algebra(source: &str) -> Result<HeytingAlgebra, LatticeError> {
    HeytingAlgebra::parse(source)
}

/// See [`HeytingAlgebra::boolean`].
pub fn make_boolean(atom_count: usize) -> Result<HeytingAlgebra, LatticeError> {
    HeytingAlgebra::boolean(atom_count)
}

/// See [`HeytingAlgebra::chain`].
pub fn make_chain(length: usize) -> Result<HeytingAlgebra, LatticeError> {
    HeytingAlgebra::chain(length)
}
