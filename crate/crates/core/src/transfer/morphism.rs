use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::TransferError;
use crate::lattice::{ElementId, HeytingAlgebra};

/// Why a table fails to be a locale morphism. Witnesses are element labels.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MorphismViolation {
    #[error("top is sent to `{image}`")]
    TopNotPreserved { image: String },
    #[error("bottom is sent to `{image}`")]
    BottomNotPreserved { image: String },
    #[error("f({a} /\\ {b}) differs from f({a}) /\\ f({b})")]
    NotMeetPreserving { a: String, b: String },
    #[error("f({a} \\/ {b}) differs from f({a}) \\/ f({b})")]
    NotJoinPreserving { a: String, b: String },
}

/// A map `A -> B` preserving finite meets and all joins. On finite algebras
/// "all joins" reduces to bottom plus binary joins.
#[derive(Clone)]
pub struct LocaleMorphism {
    name: String,
    source: Arc<HeytingAlgebra>,
    target: Arc<HeytingAlgebra>,
    table: Vec<ElementId>,
}

impl fmt::Debug for LocaleMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .source
            .elements()
            .map(|a| {
                format!(
                    "{}->{}",
                    self.source.label(a),
                    self.target.label(self.apply(a))
                )
            })
            .collect();
        write!(f, "LocaleMorphism({}: {})", self.name, pairs.join(", "))
    }
}

/// Checks the locale-morphism laws on `table` (indexed by source element
/// index) in the order top, bottom, meets, joins, and reports the first
/// failure.
pub fn check_locale_laws(
    source: &HeytingAlgebra,
    target: &HeytingAlgebra,
    table: &[ElementId],
) -> Result<(), MorphismViolation> {
    let f = |a: ElementId| table[a.index()];
    let lab = |a: ElementId| source.label(a).to_string();
    if f(source.top()) != target.top() {
        return Err(MorphismViolation::TopNotPreserved {
            image: target.label(f(source.top())).to_string(),
        });
    }
    if f(source.bottom()) != target.bottom() {
        return Err(MorphismViolation::BottomNotPreserved {
            image: target.label(f(source.bottom())).to_string(),
        });
    }
    let pairs = || {
        source.elements().flat_map(move |a| {
            source
                .elements()
                .filter(move |b| a < *b)
                .map(move |b| (a, b))
        })
    };
    for (a, b) in pairs() {
        if f(source.meet(a, b)) != target.meet(f(a), f(b)) {
            return Err(MorphismViolation::NotMeetPreserving {
                a: lab(a),
                b: lab(b),
            });
        }
    }
    for (a, b) in pairs() {
        if f(source.join(a, b)) != target.join(f(a), f(b)) {
            return Err(MorphismViolation::NotJoinPreserving {
                a: lab(a),
                b: lab(b),
            });
        }
    }
    Ok(())
}

impl LocaleMorphism {
    /// Validates `table`, which lists `f(a)` for every source element in
    /// index order.
    pub fn new(
        name: &str,
        source: Arc<HeytingAlgebra>,
        target: Arc<HeytingAlgebra>,
        table: Vec<ElementId>,
    ) -> Result<Self, TransferError> {
        if table.len() != source.len() {
            return Err(TransferError::Syntax {
                line: 0,
                message: format!(
                    "table has {} entries, source has {}",
                    table.len(),
                    source.len()
                ),
            });
        }
        for &b in &table {
            if !target.contains(b) {
                return Err(TransferError::CrossAlgebra);
            }
        }
        check_locale_laws(&source, &target, &table)?;
        Ok(LocaleMorphism {
            name: name.to_string(),
            source,
            target,
            table,
        })
    }

    /// Builds a morphism from `(source label, target label)` pairs.
    pub fn from_labels(
        name: &str,
        source: Arc<HeytingAlgebra>,
        target: Arc<HeytingAlgebra>,
        pairs: &[(&str, &str)],
    ) -> Result<Self, TransferError> {
        let mut table: Vec<Option<ElementId>> = vec![None; source.len()];
        for &(a, b) in pairs {
            let ea = source
                .element(a)
                .ok_or_else(|| TransferError::UnknownLabel(a.into()))?;
            let eb = target
                .element(b)
                .ok_or_else(|| TransferError::UnknownLabel(b.into()))?;
            if table[ea.index()].replace(eb).is_some_and(|old| old != eb) {
                return Err(TransferError::Syntax {
                    line: 0,
                    message: format!("`{a}` is mapped twice"),
                });
            }
        }
        let table = table
            .iter()
            .enumerate()
            .map(|(i, e)| {
                e.ok_or_else(|| TransferError::NotTotal(source.label(source.element_at(i)).into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(name, source, target, table)
    }

    pub fn identity(algebra: Arc<HeytingAlgebra>) -> Self {
        LocaleMorphism {
            name: "id".into(),
            table: algebra.elements().collect(),
            source: algebra.clone(),
            target: algebra,
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &LocaleMorphism) -> Result<Self, TransferError> {
        if self.target.tag() != next.source.tag() {
            return Err(TransferError::NotComposable);
        }
        Ok(LocaleMorphism {
            name: format!("{} . {}", next.name, self.name),
            source: self.source.clone(),
            target: next.target.clone(),
            table: self.table.iter().map(|&b| next.apply(b)).collect(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<HeytingAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<HeytingAlgebra> {
        &self.target
    }

    /// Panics on an element of a different algebra.
    pub fn apply(&self, a: ElementId) -> ElementId {
        assert!(self.source.contains(a), "element of a different algebra");
        self.table[a.index()]
    }

    pub fn try_apply(&self, a: ElementId) -> Result<ElementId, TransferError> {
        if self.source.contains(a) {
            Ok(self.table[a.index()])
        } else {
            Err(TransferError::CrossAlgebra)
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.table
            .iter()
            .all(|b| !std::mem::replace(&mut seen[b.index()], true))
    }

    /// `f(a -> b) = f(a) -> f(b)` for all `a, b`.
    pub fn preserves_implication(&self) -> bool {
        let (s, t) = (&*self.source, &*self.target);
        s.elements().all(|a| {
            s.elements()
                .all(|b| self.apply(s.implies(a, b)) == t.implies(self.apply(a), self.apply(b)))
        })
    }

    /// Meets, joins and implication are all preserved exactly.
    pub fn is_strict(&self) -> bool {
        self.preserves_implication()
    }

    /// The `morphism f : A -> B` text form.
    pub fn to_text(&self, source_name: &str, target_name: &str) -> String {
        let mut s = format!("morphism {} : {source_name} -> {target_name}\n", self.name);
        for a in self.source.elements() {
            s.push_str(&format!(
                "map: {} -> {}\n",
                self.source.label(a),
                self.target.label(self.apply(a))
            ));
        }
        s
    }
}

/// Parses
///
/// ```text
/// morphism f : four -> two
/// map: 0 -> 0
/// map: a -> 0
/// ...
/// ```
///
/// `resolve` maps algebra names to algebras. `#` starts a comment.
pub fn parse_morphism(
    text: &str,
    resolve: impl Fn(&str) -> Option<Arc<HeytingAlgebra>>,
) -> Result<LocaleMorphism, TransferError> {
    let mut header: Option<(String, Arc<HeytingAlgebra>, Arc<HeytingAlgebra>)> = None;
    let mut pairs: Vec<(String, String)> = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        let lineno = i + 1;
        let syntax = |m: &str| TransferError::Syntax {
            line: lineno,
            message: m.to_string(),
        };
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("morphism ") {
            if header.is_some() {
                return Err(syntax("second header"));
            }
            let (name, sig) = rest.split_once(':').ok_or_else(|| syntax("expected `:`"))?;
            let (a, b) = sig
                .split_once("->")
                .ok_or_else(|| syntax("expected `->`"))?;
            let (a, b) = (a.trim(), b.trim());
            let sa = resolve(a).ok_or_else(|| TransferError::UnknownAlgebra(a.into()))?;
            let sb = resolve(b).ok_or_else(|| TransferError::UnknownAlgebra(b.into()))?;
            header = Some((name.trim().to_string(), sa, sb));
        } else if let Some(rest) = line.strip_prefix("map:") {
            if header.is_none() {
                return Err(syntax("`map:` before the header"));
            }
            let (a, b) = rest
                .split_once("->")
                .ok_or_else(|| syntax("expected `->`"))?;
            let a = a.trim().to_string();
            if seen.insert(a.clone(), lineno).is_some() {
                return Err(syntax(&format!("`{a}` is mapped twice")));
            }
            pairs.push((a, b.trim().to_string()));
        } else {
            return Err(syntax("expected `morphism` or `map:`"));
        }
    }
    let (name, source, target) = header.ok_or(TransferError::Syntax {
        line: 0,
        message: "missing `morphism` header".into(),
    })?;
    let refs: Vec<(&str, &str)> = pairs
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    LocaleMorphism::from_labels(&name, source, target, &refs)
}
