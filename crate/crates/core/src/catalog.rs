//! The small algebras and morphisms used throughout the tests and the CLI.

use std::sync::Arc;

use crate::lattice::{make_boolean, make_chain, HeytingAlgebra};
use crate::transfer::{LocaleMorphism, TransferError};

/// The diamond: three pairwise incomparable atoms. A lattice, not a frame.
pub const M3_TEXT: &str = "elements: 0, p, q, r, 1\nhasse: 0<p, 0<q, 0<r, p<1, q<1, r<1\n";

/// The two-element chain, the three-element chain `0 < m < 1`, and the
/// four-element Boolean algebra with atoms `a` and `na`.
#[derive(Clone)]
pub struct Catalog {
    pub two: Arc<HeytingAlgebra>,
    pub chain3: Arc<HeytingAlgebra>,
    pub four: Arc<HeytingAlgebra>,
}

impl Default for Catalog {
    fn default() -> Self {
        Self::new()
    }
}

impl Catalog {
    pub fn new() -> Self {
        let four = make_boolean(2)
            .and_then(|b| b.relabel(&["0", "a", "na", "1"]))
            .expect("fixed algebra");
        Catalog {
            two: Arc::new(make_chain(2).expect("fixed algebra")),
            chain3: Arc::new(make_chain(3).expect("fixed algebra")),
            four: Arc::new(four),
        }
    }

    pub fn algebra(&self, name: &str) -> Option<Arc<HeytingAlgebra>> {
        match name {
            "two" | "2" => Some(self.two.clone()),
            "chain3" | "3" => Some(self.chain3.clone()),
            "four" | "4" => Some(self.four.clone()),
            _ => None,
        }
    }

    /// `f: 4 -> 2` with `f(a) = 0`, `f(na) = 1`.
    pub fn f(&self) -> LocaleMorphism {
        self.morphism(
            "f",
            &self.four,
            &self.two,
            &[("0", "0"), ("a", "0"), ("na", "1"), ("1", "1")],
        )
    }

    /// The inclusion `i: 2 -> 4`.
    pub fn i(&self) -> LocaleMorphism {
        self.morphism("i", &self.two, &self.four, &[("0", "0"), ("1", "1")])
    }

    /// `3 -> 2` sending `m` to 0.
    pub fn collapse_low(&self) -> LocaleMorphism {
        self.morphism(
            "collapse_low",
            &self.chain3,
            &self.two,
            &[("0", "0"), ("m", "0"), ("1", "1")],
        )
    }

    /// `3 -> 2` sending `m` to 1.
    pub fn collapse_high(&self) -> LocaleMorphism {
        self.morphism(
            "collapse_high",
            &self.chain3,
            &self.two,
            &[("0", "0"), ("m", "1"), ("1", "1")],
        )
    }

    /// The table of `l: 4 -> 2`, `l(x) = 0` only for `x = 0`. Preserves joins
    /// but not meets.
    pub fn l_table(&self) -> Result<LocaleMorphism, TransferError> {
        LocaleMorphism::from_labels(
            "l",
            self.four.clone(),
            self.two.clone(),
            &[("0", "0"), ("a", "1"), ("na", "1"), ("1", "1")],
        )
    }

    /// The table of `r: 4 -> 2`, `r(x) = 1` only for `x = 1`. Preserves meets
    /// but not joins.
    pub fn r_table(&self) -> Result<LocaleMorphism, TransferError> {
        LocaleMorphism::from_labels(
            "r",
            self.four.clone(),
            self.two.clone(),
            &[("0", "0"), ("a", "0"), ("na", "0"), ("1", "1")],
        )
    }

    fn morphism(
        &self,
        name: &str,
        source: &Arc<HeytingAlgebra>,
        target: &Arc<HeytingAlgebra>,
        pairs: &[(&str, &str)],
    ) -> LocaleMorphism {
        LocaleMorphism::from_labels(name, source.clone(), target.clone(), pairs)
            .expect("fixed morphism")
    }
}
