use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::{Lifter, LocaleMorphism, TransferError};
use crate::lattice::{ElementId, HeytingAlgebra};
use crate::names::{NameId, NameStore};
use crate::valuation::{parse_formula_with_free, Assignment, EvalContext, Formula};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// `f([[y in x]]) <= [[y' in x']]`, args `[y, x]`.
    Member,
    /// `f([[x = z]]) <= [[x' = z']]`, args `[x, z]`.
    Equal,
    /// `f([[phi(a..)]]) <= [[phi(a'..)]]` for formula number `n`.
    Formula(usize),
    /// `[[lift(id, x) = x]] = 1`, args `[x]`.
    IdentityLift,
    /// `[[lift(g, lift(f, x)) = lift(g . f, x)]] = 1`, args `[x]`.
    Composite,
}

/// One comparison. Values are element labels so a report can be rechecked
/// from its JSON form.
#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub check: Check,
    /// Indices into [`LiftReport::names`].
    pub args: Vec<usize>,
    /// The value pushed through the morphism, or the required value for the
    /// functoriality checks.
    pub mapped: String,
    pub target_value: String,
    /// Equality is required rather than `<=`.
    pub strict: bool,
    /// Labels refer to the source algebra rather than the target.
    pub in_source: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LiftReport {
    pub morphism: String,
    pub source_fingerprint: String,
    pub target_fingerprint: String,
    /// Rendered source names.
    pub names: Vec<String>,
    /// Rendered canonical images, parallel to `names`.
    pub images: Vec<String>,
    pub formulas: Vec<String>,
    pub records: Vec<Record>,
    pub checked: u64,
    pub violations: u64,
}

impl LiftReport {
    fn new(f: &LocaleMorphism) -> Self {
        LiftReport {
            morphism: f.name().to_string(),
            source_fingerprint: f.source().fingerprint(),
            target_fingerprint: f.target().fingerprint(),
            names: Vec::new(),
            images: Vec::new(),
            formulas: Vec::new(),
            records: Vec::new(),
            checked: 0,
            violations: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn violating(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.holds)
    }

    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        algebra: &HeytingAlgebra,
        in_source: bool,
        check: Check,
        args: Vec<usize>,
        mapped: ElementId,
        value: ElementId,
        strict: bool,
    ) {
        let holds = if strict {
            mapped == value
        } else {
            algebra.leq(mapped, value)
        };
        self.checked += 1;
        if !holds {
            self.violations += 1;
        }
        self.records.push(Record {
            check,
            args,
            mapped: algebra.label(mapped).to_string(),
            target_value: algebra.label(value).to_string(),
            strict,
            in_source,
            holds,
        });
    }

    /// Recomputes every verdict from the stored labels.
    pub fn recheck(&self, source: &HeytingAlgebra, target: &HeytingAlgebra) -> bool {
        self.records.iter().all(|r| {
            let h = if r.in_source { source } else { target };
            let (Some(m), Some(v)) = (h.element(&r.mapped), h.element(&r.target_value)) else {
                return false;
            };
            let holds = if r.strict { m == v } else { h.leq(m, v) };
            holds == r.holds
        }) && self.violations == self.records.iter().filter(|r| !r.holds).count() as u64
    }

    /// Appends the records of `other`, which must describe the same names.
    pub fn merge(&mut self, other: LiftReport) {
        let offset = self.formulas.len();
        self.formulas.extend(other.formulas);
        self.records.extend(other.records.into_iter().map(|mut r| {
            if let Check::Formula(n) = r.check {
                r.check = Check::Formula(n + offset);
            }
            r
        }));
        self.checked += other.checked;
        self.violations += other.violations;
    }
}

fn lift_all(
    lifter: &mut Lifter<'_>,
    store: &mut NameStore,
    names: &[NameId],
) -> Result<Vec<NameId>, TransferError> {
    names.iter().map(|&x| lifter.image(store, x)).collect()
}

fn render_all(
    report: &mut LiftReport,
    f: &LocaleMorphism,
    store: &NameStore,
    names: &[NameId],
    images: &[NameId],
) {
    report.names = names.iter().map(|&x| store.render(f.source(), x)).collect();
    report.images = images
        .iter()
        .map(|&x| store.render(f.target(), x))
        .collect();
}

/// Membership and equality values of all pairs from `names`, before and
/// after lifting. When `f` also preserves implication, equality is required.
pub fn check_atomic_preservation(
    f: &LocaleMorphism,
    store: &mut NameStore,
    names: &[NameId],
) -> Result<LiftReport, TransferError> {
    let mut lifter = Lifter::new(f);
    let images = lift_all(&mut lifter, store, names)?;
    let mut report = LiftReport::new(f);
    render_all(&mut report, f, store, names, &images);
    let strict = f.is_strict();
    let (a, b) = (f.source(), f.target());
    let mut ca = EvalContext::new(a, store);
    let mut cb = EvalContext::new(b, store);
    for (i, &x) in names.iter().enumerate() {
        for (j, &y) in names.iter().enumerate() {
            let mapped = f.apply(ca.atomic_mem(y, x)?);
            let value = cb.atomic_mem(images[j], images[i])?;
            report.push(b, false, Check::Member, vec![j, i], mapped, value, strict);
        }
    }
    for (i, &x) in names.iter().enumerate() {
        for (k, &z) in names.iter().enumerate() {
            let mapped = f.apply(ca.atomic_eq(x, z)?);
            let value = cb.atomic_eq(images[i], images[k])?;
            report.push(b, false, Check::Equal, vec![i, k], mapped, value, strict);
        }
    }
    Ok(report)
}

/// Six positive bounded formulas in the free variables `x` and `y`.
pub fn positive_family() -> Vec<Formula> {
    [
        "exists u in x . u = y",
        "forall u in x . u in y",
        "x in y \\/ y in x",
        "forall u in x . exists w in y . u = w",
        "exists u in x . exists w in u . w in y",
        "forall u in x . (u in y \\/ u = y) /\\ x = x",
    ]
    .iter()
    .map(|s| parse_formula_with_free(s, &HashMap::new(), &["x", "y"]).expect("fixed formula"))
    .collect()
}

/// `f([[phi(a..)]]) <= [[phi(a'..)]]` for every tuple. Tuple entries bind the
/// free variables of `phi` in sorted order; constants in `phi` are lifted too.
pub fn check_positive_bounded_preservation(
    f: &LocaleMorphism,
    phi: &Formula,
    store: &mut NameStore,
    names: &[NameId],
    tuples: &[Vec<usize>],
) -> Result<LiftReport, TransferError> {
    if !phi.is_positive_bounded() {
        return Err(TransferError::NotPositiveBounded);
    }
    let vars: Vec<String> = phi.free_vars().into_iter().collect();
    let mut lifter = Lifter::new(f);
    let images = lift_all(&mut lifter, store, names)?;
    let mut lifted_consts = HashMap::new();
    for c in phi.constants() {
        lifted_consts.insert(c, lifter.image(store, c)?);
    }
    let phi_b = phi.map_constants(&mut |c| lifted_consts[&c]);
    let mut report = LiftReport::new(f);
    render_all(&mut report, f, store, names, &images);
    report.formulas.push(phi.to_string());
    let strict = f.is_strict();
    let (a, b) = (f.source(), f.target());
    let mut ca = EvalContext::new(a, store);
    let mut cb = EvalContext::new(b, store);
    for t in tuples {
        if t.len() != vars.len() {
            return Err(TransferError::Eval(
                crate::valuation::EvalError::UnboundVariable(
                    vars.get(t.len()).cloned().unwrap_or_default(),
                ),
            ));
        }
        let sa: Assignment = vars
            .iter()
            .zip(t)
            .map(|(v, &i)| (v.as_str(), names[i]))
            .collect();
        let sb: Assignment = vars
            .iter()
            .zip(t)
            .map(|(v, &i)| (v.as_str(), images[i]))
            .collect();
        let mapped = f.apply(ca.eval(phi, &sa)?);
        let value = cb.eval(&phi_b, &sb)?;
        report.push(
            b,
            false,
            Check::Formula(0),
            t.clone(),
            mapped,
            value,
            strict,
        );
    }
    Ok(report)
}

/// `[[lift(id, x) = x]] = 1` for every name.
pub fn check_identity_lift(
    algebra: &Arc<HeytingAlgebra>,
    store: &mut NameStore,
    names: &[NameId],
) -> Result<LiftReport, TransferError> {
    let id = LocaleMorphism::identity(algebra.clone());
    let mut lifter = Lifter::new(&id);
    let images = lift_all(&mut lifter, store, names)?;
    let mut report = LiftReport::new(&id);
    render_all(&mut report, &id, store, names, &images);
    let mut ctx = EvalContext::new(algebra, store);
    for (i, (&x, &x1)) in names.iter().zip(&images).enumerate() {
        let v = ctx.atomic_eq(x1, x)?;
        report.push(
            algebra,
            true,
            Check::IdentityLift,
            vec![i],
            algebra.top(),
            v,
            true,
        );
    }
    Ok(report)
}

/// Identity lifts over the source of `f`, then
/// `[[lift(g, lift(f, x)) = lift(g . f, x)]] = 1` for every name.
pub fn check_functoriality(
    f: &LocaleMorphism,
    g: &LocaleMorphism,
    store: &mut NameStore,
    names: &[NameId],
) -> Result<LiftReport, TransferError> {
    let gf = f.then(g)?;
    let mut report = check_identity_lift(f.source(), store, names)?;
    report.morphism = gf.name().to_string();
    report.target_fingerprint = gf.target().fingerprint();
    let mut lf = Lifter::new(f);
    let mut lg = Lifter::new(g);
    let mut lgf = Lifter::new(&gf);
    let mut pairs = Vec::with_capacity(names.len());
    for &x in names {
        let mid = lf.image(store, x)?;
        pairs.push((lg.image(store, mid)?, lgf.image(store, x)?));
    }
    report.images = pairs
        .iter()
        .map(|&(p, _)| store.render(gf.target(), p))
        .collect();
    let c = gf.target();
    let mut ctx = EvalContext::new(c, store);
    for (i, &(p, q)) in pairs.iter().enumerate() {
        let v = ctx.atomic_eq(p, q)?;
        report.push(c, false, Check::Composite, vec![i], c.top(), v, true);
    }
    Ok(report)
}
