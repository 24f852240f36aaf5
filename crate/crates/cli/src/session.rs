use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, Context, Result};
use hvalued::catalog::Catalog;
use hvalued::lattice::{load_algebra, HeytingAlgebra};
use hvalued::transfer::{parse_morphism, LocaleMorphism};
use serde::Serialize;

/// Sweep caps shared by every command.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Config {
    pub rank: u32,
    pub max_domain: usize,
    pub budget: u64,
    pub seed: u64,
}

/// Resolves algebra and morphism references. A reference is a catalog name
/// (`two`, `chain3`, `four`, or `2`, `3`, `4`) or a file path. Every algebra
/// loaded is remembered with its fingerprint for the report.
pub struct Session {
    catalog: Catalog,
    loaded: RefCell<BTreeMap<String, Arc<HeytingAlgebra>>>,
    used: RefCell<BTreeMap<String, String>>,
}

impl Session {
    pub fn new() -> Self {
        Session {
            catalog: Catalog::new(),
            loaded: RefCell::new(BTreeMap::new()),
            used: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    fn remember(&self, name: &str, h: Arc<HeytingAlgebra>) -> Arc<HeytingAlgebra> {
        self.note(name, &h);
        self.loaded
            .borrow_mut()
            .entry(name.to_string())
            .or_insert(h)
            .clone()
    }

    /// Records an algebra for the provenance section of the report.
    pub fn note(&self, name: &str, h: &HeytingAlgebra) {
        self.used
            .borrow_mut()
            .insert(name.to_string(), h.fingerprint());
    }

    /// Like [`Session::algebra`] but never reads files.
    pub fn known(&self, name: &str) -> Option<Arc<HeytingAlgebra>> {
        if let Some(h) = self.loaded.borrow().get(name) {
            return Some(h.clone());
        }
        self.catalog.algebra(name).map(|h| self.remember(name, h))
    }

    pub fn algebra(&self, reference: &str) -> Result<Arc<HeytingAlgebra>> {
        if let Some(h) = self.known(reference) {
            return Ok(h);
        }
        let text = read(Path::new(reference))?;
        let h = load_algebra(&text).with_context(|| format!("loading {reference}"))?;
        let stem = Path::new(reference)
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or(reference);
        // files may refer to the algebra by its stem
        let h = Arc::new(h);
        self.remember(stem, h.clone());
        Ok(self.remember(reference, h))
    }

    /// A known algebra, or `<name>.alg` next to `file`.
    pub fn sibling(&self, file: &Path, name: &str) -> Option<Arc<HeytingAlgebra>> {
        self.known(name).or_else(|| {
            let path = file.with_file_name(format!("{name}.alg"));
            let h = Arc::new(load_algebra(&read(&path).ok()?).ok()?);
            Some(self.remember(name, h))
        })
    }

    /// Catalog morphisms: `f`, `i`, `collapse_low`, `collapse_high`, or a
    /// morphism file.
    pub fn morphism(&self, reference: &str) -> Result<LocaleMorphism> {
        let c = &self.catalog;
        let found = match reference {
            "f" => Some(c.f()),
            "i" => Some(c.i()),
            "collapse_low" => Some(c.collapse_low()),
            "collapse_high" => Some(c.collapse_high()),
            _ => None,
        };
        let f = match found {
            Some(f) => f,
            None => {
                let path = Path::new(reference);
                let text = read(path)?;
                parse_morphism(&text, |n| self.sibling(path, n))
                    .with_context(|| format!("loading {reference}"))?
            }
        };
        self.note(&format!("{}.source", f.name()), f.source());
        self.note(&format!("{}.target", f.name()), f.target());
        Ok(f)
    }

    /// `(name, fingerprint)` of every algebra used, sorted by name.
    pub fn fingerprints(&self) -> BTreeMap<String, String> {
        self.used.borrow().clone()
    }
}

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| anyhow!("cannot read {}: {e}", path.display()))
}
