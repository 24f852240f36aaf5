//! The structural laws of atomic and bounded valuation, checked over a finite
//! list of names.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Assignment, EvalContext, Formula, Term};
use crate::lattice::{ElementId, HeytingAlgebra};
use crate::names::{NameId, NameStore};

/// How many instances a single law may visit before it switches to seeded
/// sampling.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepConfig {
    pub budget: u64,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            budget: 10_000_000,
            seed: 0,
        }
    }
}

/// Outcome of one law.
#[derive(Debug, Clone, Serialize)]
pub struct LawOutcome {
    pub number: u8,
    pub statement: &'static str,
    pub checked: u64,
    pub sampled: bool,
    pub violation_count: u64,
    /// The first few violations, rendered.
    pub violations: Vec<String>,
}

impl LawOutcome {
    fn new(number: u8, statement: &'static str) -> Self {
        LawOutcome {
            number,
            statement,
            checked: 0,
            sampled: false,
            violation_count: 0,
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violation_count += 1;
            if self.violations.len() < 10 {
                self.violations.push(detail());
            }
        }
    }
}

pub const STATEMENTS: [&str; 11] = [
    "[[x = x]] = 1",
    "x in dom y implies y(x) <= [[x in y]]",
    "[[x = y]] = [[y = x]]",
    "[[x in y]] = [[y ni x]]",
    "[[x = y]] /\\ [[y = z]] <= [[x = z]]",
    "[[x = y]] /\\ [[y in z]] <= [[x in z]]",
    "[[x in y]] /\\ [[y = z]] <= [[x in z]]",
    "[[x = y]] /\\ x(u) <= [[u in y]]",
    "[[x = y]] /\\ [[phi(x)]] = [[y = x]] /\\ [[phi(y)]]",
    "[[exists v in x . phi(v)]] = join over u in dom x of x(u) /\\ [[phi(u)]]",
    "[[forall v in x . phi(v)]] = meet over u in dom x of x(u) -> [[phi(u)]]",
];

/// A fixed family of bounded formulas in the free variable `v`, with the
/// given names as parameters.
pub fn standard_family(params: &[NameId]) -> Vec<Formula> {
    let mut out = vec![
        Formula::exists_in("w", "v", Formula::eq("w", "w")),
        Formula::forall_in(
            "w",
            "v",
            Formula::exists_in("t", "v", Formula::eq("w", "t")),
        ),
        Formula::not(Formula::exists_in("w", "v", Formula::member("w", "v"))),
    ];
    for &c in params {
        out.push(Formula::member(Term::Const(c), "v"));
        out.push(Formula::member("v", Term::Const(c)));
        out.push(Formula::forall_in(
            "w",
            "v",
            Formula::member("w", Term::Const(c)),
        ));
        out.push(Formula::implies(
            Formula::eq("v", Term::Const(c)),
            Formula::exists_in("w", Term::Const(c), Formula::not(Formula::member("w", "v"))),
        ));
    }
    out
}

/// Index tuples for a sweep of `arity` over `n` items: exhaustive when it fits
/// the budget, otherwise `budget` seeded samples.
fn tuples(
    n: usize,
    arity: u32,
    config: &SweepConfig,
) -> (bool, Box<dyn Iterator<Item = Vec<usize>>>) {
    let total = (n as u128).pow(arity);
    if total <= config.budget as u128 {
        let it = (0..total as u64).map(move |mut k| {
            let mut t = vec![0; arity as usize];
            for slot in t.iter_mut().rev() {
                *slot = (k % n as u64) as usize;
                k /= n as u64;
            }
            t
        });
        (false, Box::new(it))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let it = (0..config.budget).map(move |_| (0..arity).map(|_| rng.gen_range(0..n)).collect());
        (true, Box::new(it))
    }
}

/// Checks the eleven laws over `names`.
///
/// Laws 1, 3 and 4 run in a context with an ordered equality memo, so symmetry
/// is computed rather than assumed. Laws 10 and 11 also compare the bounded
/// quantifiers with their unbounded forms `exists v . v in x /\ phi(v)` and
/// `forall v . v in x -> phi(v)` evaluated over `names` as the fragment; the
/// two agree exactly whenever the fragment contains `dom x`.
pub fn check_valuation_laws(
    algebra: &HeytingAlgebra,
    store: &NameStore,
    names: &[NameId],
    family: &[Formula],
    config: &SweepConfig,
) -> Vec<LawOutcome> {
    let h = algebra;
    let mut ctx = EvalContext::new(algebra, store).with_fragment(names.to_vec());
    let mut ordered = EvalContext::with_ordered_memo(algebra, store);
    let mut out: Vec<LawOutcome> = STATEMENTS
        .iter()
        .enumerate()
        .map(|(i, s)| LawOutcome::new(i as u8 + 1, s))
        .collect();
    let show = |id: NameId| store.render(algebra, id);
    let lab = |e: ElementId| algebra.label(e).to_string();

    for &x in names {
        let v = ordered.eq(x, x);
        out[0].record(v == h.top(), || format!("x = {}: {}", show(x), lab(v)));
    }

    for &y in names {
        for &(x, yx) in store.entries(y) {
            let m = ctx.mem(x, y);
            out[1].record(h.leq(yx, m), || {
                format!(
                    "x = {}, y = {}: {} vs {}",
                    show(x),
                    show(y),
                    lab(yx),
                    lab(m)
                )
            });
        }
    }

    let (sampled, pairs) = tuples(names.len(), 2, config);
    out[2].sampled = sampled;
    out[3].sampled = sampled;
    for t in pairs {
        let (x, y) = (names[t[0]], names[t[1]]);
        let (a, b) = (ordered.eq(x, y), ordered.eq(y, x));
        out[2].record(a == b, || format!("x = {}, y = {}", show(x), show(y)));
        let (m, n) = (ordered.mem(x, y), ordered.ni(y, x));
        out[3].record(m == n, || format!("x = {}, y = {}", show(x), show(y)));
    }

    let (sampled, triples) = tuples(names.len(), 3, config);
    for law in &mut out[4..7] {
        law.sampled = sampled;
    }
    for t in triples {
        let (x, y, z) = (names[t[0]], names[t[1]], names[t[2]]);
        let xy = ctx.eq(x, y);
        let detail = || format!("x = {}, y = {}, z = {}", show(x), show(y), show(z));
        let lhs = h.meet(xy, ctx.eq(y, z));
        out[4].record(h.leq(lhs, ctx.eq(x, z)), detail);
        let lhs = h.meet(xy, ctx.mem(y, z));
        out[5].record(h.leq(lhs, ctx.mem(x, z)), detail);
        let lhs = h.meet(ctx.mem(x, y), ctx.eq(y, z));
        out[6].record(h.leq(lhs, ctx.mem(x, z)), detail);
    }

    for &x in names {
        for &y in names {
            let xy = ctx.eq(x, y);
            for &(u, xu) in store.entries(x) {
                let m = ctx.mem(u, y);
                out[7].record(h.leq(h.meet(xy, xu), m), || {
                    format!("x = {}, y = {}, u = {}", show(x), show(y), show(u))
                });
            }
        }
    }

    let (sampled, pairs) = tuples(names.len(), 2, config);
    out[8].sampled = sampled;
    for t in pairs {
        let (x, y) = (names[t[0]], names[t[1]]);
        let xy = ctx.eq(x, y);
        let yx = ctx.eq(y, x);
        for phi in family {
            let px = ctx.eval(phi, &Assignment::from_iter([("v", x)]));
            let py = ctx.eval(phi, &Assignment::from_iter([("v", y)]));
            let ok = match (px, py) {
                (Ok(px), Ok(py)) => h.meet(xy, px) == h.meet(yx, py),
                _ => false,
            };
            out[8].record(ok, || {
                format!("x = {}, y = {}, phi = {phi}", show(x), show(y))
            });
        }
    }

    for &x in names {
        let sigma = Assignment::from_iter([("x", x)]);
        for phi in family {
            let mut direct_exists = h.bottom();
            let mut direct_forall = h.top();
            let mut failed = false;
            for &(u, xu) in store.entries(x) {
                match ctx.eval(phi, &Assignment::from_iter([("v", u)])) {
                    Ok(p) => {
                        direct_exists = h.join(direct_exists, h.meet(xu, p));
                        direct_forall = h.meet(direct_forall, h.implies(xu, p));
                    }
                    Err(_) => failed = true,
                }
            }
            let body = Box::new(phi.clone());
            let bex = Formula::BExists {
                var: "v".into(),
                bound: Term::var("x"),
                body: body.clone(),
            };
            let bfa = Formula::BForall {
                var: "v".into(),
                bound: Term::var("x"),
                body,
            };
            let uex = Formula::exists("v", Formula::and(Formula::member("v", "x"), phi.clone()));
            let ufa = Formula::forall(
                "v",
                Formula::implies(Formula::member("v", "x"), phi.clone()),
            );
            let covered = store.domain(x).all(|u| names.contains(&u));
            let detail = || format!("x = {}, phi = {phi}", show(x));

            let b = ctx.eval(&bex, &sigma).ok();
            let u = if covered {
                ctx.eval(&uex, &sigma).ok()
            } else {
                b
            };
            out[9].record(!failed && b == Some(direct_exists) && u == b, detail);

            let b = ctx.eval(&bfa, &sigma).ok();
            let u = if covered {
                ctx.eval(&ufa, &sigma).ok()
            } else {
                b
            };
            out[10].record(!failed && b == Some(direct_forall) && u == b, detail);
        }
    }

    out
}
