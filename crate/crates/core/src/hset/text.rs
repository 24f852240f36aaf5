use std::sync::Arc;

use super::{HSet, HSetError, HSetMorphism};
use crate::lattice::{ElementId, HeytingAlgebra};

/// The H-sets and morphisms of one file, in file order.
#[derive(Debug, Clone, Default)]
pub struct HSetDocument {
    pub hsets: Vec<(String, Arc<HSet>)>,
    pub morphisms: Vec<(String, HSetMorphism)>,
}

impl HSetDocument {
    pub fn hset(&self, name: &str) -> Option<&Arc<HSet>> {
        self.hsets.iter().find(|(n, _)| n == name).map(|(_, x)| x)
    }

    pub fn morphism(&self, name: &str) -> Option<&HSetMorphism> {
        self.morphisms
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
    }
}

enum Block {
    HSet {
        name: String,
        algebra: Arc<HeytingAlgebra>,
        points: Option<Vec<String>>,
        entries: Vec<(String, String, ElementId, usize)>,
    },
    Morphism {
        name: String,
        source: Arc<HSet>,
        target: Arc<HSet>,
        entries: Vec<(String, String, ElementId, usize)>,
    },
}

/// Parses
///
/// ```text
/// hset X over four
/// points: p, q
/// delta: p, p = 1
/// delta: p, q = a
/// delta: q, q = 1
///
/// hmorphism f : X -> X
/// phi: p, p = 1
/// ...
/// ```
///
/// `delta:` entries are mirrored, every diagonal entry must be given, and
/// missing entries are bottom. Morphisms may only refer to H-sets defined
/// earlier in the file. `#` starts a comment.
pub fn parse_hsets(
    text: &str,
    resolve: impl Fn(&str) -> Option<Arc<HeytingAlgebra>>,
) -> Result<HSetDocument, HSetError> {
    let mut doc = HSetDocument::default();
    let mut block: Option<Block> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        let lineno = i + 1;
        let syntax = |m: &str| HSetError::Syntax {
            line: lineno,
            message: m.to_string(),
        };
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("hset ") {
            finish(&mut doc, block.take())?;
            let (name, alg) = rest
                .split_once(" over ")
                .ok_or_else(|| syntax("expected `over`"))?;
            let alg = alg.trim();
            let algebra = resolve(alg).ok_or_else(|| HSetError::UnknownAlgebra(alg.into()))?;
            block = Some(Block::HSet {
                name: name.trim().to_string(),
                algebra,
                points: None,
                entries: Vec::new(),
            });
        } else if let Some(rest) = line.strip_prefix("hmorphism ") {
            finish(&mut doc, block.take())?;
            let (name, sig) = rest.split_once(':').ok_or_else(|| syntax("expected `:`"))?;
            let (a, b) = sig
                .split_once("->")
                .ok_or_else(|| syntax("expected `->`"))?;
            let look = |n: &str| {
                doc.hset(n.trim())
                    .cloned()
                    .ok_or_else(|| HSetError::UnknownHSet(n.trim().into()))
            };
            block = Some(Block::Morphism {
                name: name.trim().to_string(),
                source: look(a)?,
                target: look(b)?,
                entries: Vec::new(),
            });
        } else if let Some(rest) = line.strip_prefix("points:") {
            match &mut block {
                Some(Block::HSet {
                    points: p @ None, ..
                }) => {
                    *p = Some(
                        rest.split(',')
                            .map(|s| s.trim().to_string())
                            .filter(|s| !s.is_empty())
                            .collect(),
                    );
                }
                _ => return Err(syntax("unexpected `points:`")),
            }
        } else if let Some((key, rest)) = line.split_once(':') {
            let (pair, value) = rest.split_once('=').ok_or_else(|| syntax("expected `=`"))?;
            let (a, b) = pair
                .split_once(',')
                .ok_or_else(|| syntax("expected `p, q`"))?;
            let (a, b, value) = (a.trim().to_string(), b.trim().to_string(), value.trim());
            match (key.trim(), &mut block) {
                (
                    "delta",
                    Some(Block::HSet {
                        algebra, entries, ..
                    }),
                ) => {
                    let v = algebra
                        .element(value)
                        .ok_or_else(|| HSetError::UnknownLabel(value.into()))?;
                    entries.push((a, b, v, lineno));
                }
                (
                    "phi",
                    Some(Block::Morphism {
                        source, entries, ..
                    }),
                ) => {
                    let h = source.algebra();
                    let v = h
                        .element(value)
                        .ok_or_else(|| HSetError::UnknownLabel(value.into()))?;
                    entries.push((a, b, v, lineno));
                }
                _ => return Err(syntax(&format!("unexpected `{}:`", key.trim()))),
            }
        } else {
            return Err(syntax("expected `hset`, `hmorphism` or an entry line"));
        }
    }
    finish(&mut doc, block)?;
    Ok(doc)
}

fn index_of(points: &[String], p: &str) -> Result<usize, HSetError> {
    points
        .iter()
        .position(|q| q == p)
        .ok_or_else(|| HSetError::UnknownPoint(p.into()))
}

fn conflict(line: usize) -> HSetError {
    HSetError::Syntax {
        line,
        message: "entry given twice with different values".into(),
    }
}

fn finish(doc: &mut HSetDocument, block: Option<Block>) -> Result<(), HSetError> {
    match block {
        None => Ok(()),
        Some(Block::HSet {
            name,
            algebra,
            points,
            entries,
        }) => {
            let points = points.unwrap_or_default();
            let n = points.len();
            let mut table: Vec<Option<ElementId>> = vec![None; n * n];
            for (a, b, v, line) in entries {
                let (i, j) = (index_of(&points, &a)?, index_of(&points, &b)?);
                for k in [i * n + j, j * n + i] {
                    if table[k].replace(v).is_some_and(|old| old != v) {
                        return Err(conflict(line));
                    }
                }
            }
            for (i, p) in points.iter().enumerate() {
                if table[i * n + i].is_none() {
                    return Err(HSetError::MissingDiagonal(p.clone()));
                }
            }
            let bottom = algebra.bottom();
            let delta = table.into_iter().map(|e| e.unwrap_or(bottom)).collect();
            let x = HSet::new(algebra, points, delta)?;
            doc.hsets.push((name, Arc::new(x)));
            Ok(())
        }
        Some(Block::Morphism {
            name,
            source,
            target,
            entries,
        }) => {
            let m = target.len();
            let mut table: Vec<Option<ElementId>> = vec![None; source.len() * m];
            for (a, b, v, line) in entries {
                let (i, j) = (
                    index_of(source.points(), &a)?,
                    index_of(target.points(), &b)?,
                );
                if table[i * m + j].replace(v).is_some_and(|old| old != v) {
                    return Err(conflict(line));
                }
            }
            let bottom = source.algebra().bottom();
            let phi = table.into_iter().map(|e| e.unwrap_or(bottom)).collect();
            let morphism = HSetMorphism::new(source, target, phi)?;
            doc.morphisms.push((name, morphism));
            Ok(())
        }
    }
}
