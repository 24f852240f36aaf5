use std::collections::HashMap;

use hvalued::lattice::{make_boolean, make_chain, ElementId, HeytingAlgebra};
use hvalued::names::{HFSet, NameId, NameStore};
use hvalued::valuation::laws::{check_valuation_laws, standard_family, SweepConfig};
use hvalued::valuation::{parse_formula_with_free, Assignment, EvalContext, Formula, Term};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Atomic values straight from the defining recursion, no memo and no
/// shortcuts.
struct Naive<'a> {
    h: &'a HeytingAlgebra,
    s: &'a NameStore,
}

impl Naive<'_> {
    fn eq(&self, x: NameId, y: NameId) -> ElementId {
        let h = self.h;
        let a = h.big_meet(
            self.s
                .entries(y)
                .iter()
                .map(|&(u, yu)| h.implies(yu, self.ni(x, u))),
        );
        let b = h.big_meet(
            self.s
                .entries(x)
                .iter()
                .map(|&(v, xv)| h.implies(xv, self.mem(v, y))),
        );
        h.meet(a, b)
    }

    fn mem(&self, x: NameId, y: NameId) -> ElementId {
        let h = self.h;
        h.big_join(
            self.s
                .entries(y)
                .iter()
                .map(|&(u, yu)| h.meet(yu, self.eq(x, u))),
        )
    }

    fn ni(&self, x: NameId, u: NameId) -> ElementId {
        let h = self.h;
        h.big_join(
            self.s
                .entries(x)
                .iter()
                .map(|&(v, xv)| h.meet(xv, self.eq(v, u))),
        )
    }
}

fn algebras() -> Vec<(&'static str, HeytingAlgebra)> {
    vec![
        ("2-chain", make_chain(2).unwrap()),
        ("3-chain", make_chain(3).unwrap()),
        ("4-Boolean", make_boolean(2).unwrap()),
    ]
}

#[test]
fn memoized_values_match_naive_recursion() {
    for (label, h) in algebras() {
        let mut store = NameStore::new();
        let names = store.enumerate_names(&h, 2, 2, 10_000).unwrap();
        let naive = Naive { h: &h, s: &store };
        let mut ctx = EvalContext::new(&h, &store);
        for &x in &names {
            for &y in &names {
                assert_eq!(ctx.atomic_eq(x, y).unwrap(), naive.eq(x, y), "{label}");
                assert_eq!(ctx.atomic_mem(x, y).unwrap(), naive.mem(x, y), "{label}");
                assert_eq!(ctx.atomic_ni(x, y).unwrap(), naive.ni(x, y), "{label}");
            }
        }
    }
}

#[test]
fn naive_equality_is_symmetric_on_rank_one() {
    // The shared memo keys equality by unordered pairs; this is the check
    // that makes that sound.
    for (_, h) in algebras() {
        let mut store = NameStore::new();
        let names = store.enumerate_names(&h, 1, 4, 10_000).unwrap();
        let naive = Naive { h: &h, s: &store };
        for &x in &names {
            assert_eq!(naive.eq(x, x), h.top());
            for &y in &names {
                assert_eq!(naive.eq(x, y), naive.eq(y, x));
            }
        }
    }
}

#[test]
fn eleven_laws_exhaustive_rank_two() {
    for (label, h) in algebras() {
        let mut store = NameStore::new();
        let names = store.enumerate_names(&h, 2, 2, 10_000).unwrap();
        let family = standard_family(&names[1..3]);
        let report = check_valuation_laws(&h, &store, &names, &family, &SweepConfig::default());
        for law in &report {
            assert!(!law.sampled, "{label}: law {} was sampled", law.number);
            assert!(law.passed(), "{label}: {law:?}");
        }
    }
}

#[test]
fn excluded_middle_and_peirce() {
    let c3 = make_chain(3).unwrap();
    let mut store = NameStore::new();
    let e = store.empty(&c3);
    let m = c3.element("m").unwrap();
    let x = store.make_name(&c3, [(e, m)]).unwrap();
    let mut ctx = EvalContext::new(&c3, &store);
    let p = Formula::member(e, x);
    let q = Formula::member(e, e);
    let peirce = Formula::implies(
        Formula::implies(Formula::implies(p.clone(), q.clone()), p.clone()),
        p.clone(),
    );
    let s = Assignment::new();
    assert_eq!(
        ctx.eval(&Formula::or(p.clone(), Formula::not(p)), &s),
        Ok(m)
    );
    assert_eq!(ctx.eval(&peirce, &s), Ok(m));
}

/// Twelve propositional axiom schemes of intuitionistic logic.
fn axioms(p: &Formula, q: &Formula, r: &Formula) -> Vec<Formula> {
    let imp = |a: &Formula, b: &Formula| Formula::implies(a.clone(), b.clone());
    let and = |a: &Formula, b: &Formula| Formula::and(a.clone(), b.clone());
    let or = |a: &Formula, b: &Formula| Formula::or(a.clone(), b.clone());
    let bot = Formula::not(Formula::eq("p", "p"));
    vec![
        imp(p, &imp(q, p)),
        imp(&imp(p, &imp(q, r)), &imp(&imp(p, q), &imp(p, r))),
        imp(&and(p, q), p),
        imp(&and(p, q), q),
        imp(p, &imp(q, &and(p, q))),
        imp(p, &or(p, q)),
        imp(q, &or(p, q)),
        imp(&imp(p, r), &imp(&imp(q, r), &imp(&or(p, q), r))),
        imp(&bot, p),
        imp(
            &imp(p, q),
            &imp(&imp(p, &Formula::not(q.clone())), &Formula::not(p.clone())),
        ),
        imp(&and(p, &Formula::not(p.clone())), q),
        imp(
            &imp(p, q),
            &imp(&Formula::not(q.clone()), &Formula::not(p.clone())),
        ),
    ]
}

#[test]
fn intuitionistic_axioms_are_valid_and_peirce_is_classical() {
    for (label, h) in algebras() {
        let mut store = NameStore::new();
        let names = store.enumerate_names(&h, 1, 2, 10_000).unwrap();
        let p = Formula::member("p", "q");
        let q = Formula::eq("q", "r");
        let r = Formula::exists_in("w", "r", Formula::member("p", "w"));
        let ax = axioms(&p, &q, &r);
        assert_eq!(ax.len(), 12);
        let peirce = Formula::implies(
            Formula::implies(Formula::implies(p.clone(), q.clone()), p.clone()),
            p.clone(),
        );
        let mut ctx = EvalContext::new(&h, &store);
        let mut peirce_fails = false;
        for &a in &names {
            for &b in &names {
                for &c in &names {
                    let s: Assignment = [("p", a), ("q", b), ("r", c)].into_iter().collect();
                    for f in &ax {
                        assert!(ctx.models(f, &s).unwrap(), "{label}: {f}");
                    }
                    peirce_fails |= !ctx.models(&peirce, &s).unwrap();
                }
            }
        }
        assert_eq!(peirce_fails, !h.is_boolean(), "{label}");
    }
}

#[test]
fn localic_models_properties() {
    for (label, h) in algebras() {
        let mut store = NameStore::new();
        let names = store.enumerate_names(&h, 2, 1, 10_000).unwrap();
        let consts = HashMap::new();
        let pool: Vec<Formula> = [
            "x in y",
            "x = y",
            "~ x in y",
            "exists u in y . u = x",
            "forall u in x . u in y",
            "x in y -> y in x",
            "x = y \\/ ~ x = y",
        ]
        .iter()
        .map(|s| parse_formula_with_free(s, &consts, &["x", "y"]).unwrap())
        .collect();
        let mut ctx = EvalContext::new(&h, &store).with_fragment(names.clone());
        for &a in &names {
            for &b in &names {
                let s: Assignment = [("x", a), ("y", b)].into_iter().collect();
                for f in &pool {
                    let mf = ctx.models(f, &s).unwrap();
                    // item 4
                    if ctx.models(&Formula::not(f.clone()), &s).unwrap() {
                        assert!(!mf, "{label}");
                    }
                    for g in &pool {
                        let mg = ctx.models(g, &s).unwrap();
                        // item 1, both directions
                        let conj = ctx.models(&Formula::and(f.clone(), g.clone()), &s).unwrap();
                        assert_eq!(mf && mg, conj, "{label}");
                        // item 5
                        if mf || mg {
                            assert!(ctx.models(&Formula::or(f.clone(), g.clone()), &s).unwrap());
                        }
                        // item 6
                        let not_f = ctx.models(&Formula::not(f.clone()), &s).unwrap();
                        if mg || not_f {
                            assert!(ctx
                                .models(&Formula::implies(f.clone(), g.clone()), &s)
                                .unwrap());
                        }
                    }
                }
            }
        }
        // items 2 and 3 over the fragment: universal is exact, existential
        // only in the witness direction
        for f in &pool {
            for &b in &names {
                let s: Assignment = [("y", b)].into_iter().collect();
                let all = Formula::forall("x", f.clone());
                let each = names
                    .iter()
                    .all(|&a| ctx.models(f, &s.rebind("x", a)).unwrap());
                assert_eq!(ctx.models(&all, &s).unwrap(), each);
                let some = Formula::exists("x", f.clone());
                if names
                    .iter()
                    .any(|&a| ctx.models(f, &s.rebind("x", a)).unwrap())
                {
                    assert!(ctx.models(&some, &s).unwrap());
                }
            }
        }
    }
}

#[test]
fn valuation_ignores_variables_outside_free_set() {
    let h = make_chain(3).unwrap();
    let mut store = NameStore::new();
    let names = store.enumerate_names(&h, 2, 2, 10_000).unwrap();
    let f = Formula::exists_in("u", "x", Formula::member("u", "y"));
    let mut ctx = EvalContext::new(&h, &store);
    for &a in &names[..10] {
        for &b in &names[..10] {
            let s: Assignment = [("x", a), ("y", b)].into_iter().collect();
            let base = ctx.eval(&f, &s).unwrap();
            for &c in &names[..10] {
                assert_eq!(
                    ctx.eval(&f, &s.rebind("z", c).rebind("u", c)).unwrap(),
                    base
                );
            }
        }
    }
}

/// Two-valued truth of a formula over hereditarily finite sets.
fn hf_truth(f: &Formula, env: &mut Vec<(String, HFSet)>) -> bool {
    fn term<'e>(t: &Term, env: &'e [(String, HFSet)]) -> &'e HFSet {
        match t {
            Term::Var(v) => &env.iter().rev().find(|(n, _)| n == v).unwrap().1,
            _ => panic!("only variables in this oracle"),
        }
    }
    match f {
        Formula::Member(a, b) => term(b, env).contains(term(a, env)),
        Formula::Eq(a, b) => term(a, env) == term(b, env),
        Formula::Not(g) => !hf_truth(g, env),
        Formula::And(a, b) => hf_truth(a, env) && hf_truth(b, env),
        Formula::Or(a, b) => hf_truth(a, env) || hf_truth(b, env),
        Formula::Implies(a, b) => !hf_truth(a, env) || hf_truth(b, env),
        Formula::BForall { var, bound, body } | Formula::BExists { var, bound, body } => {
            let elems: Vec<HFSet> = term(bound, env).elements().cloned().collect();
            let universal = matches!(f, Formula::BForall { .. });
            let mut result = universal;
            for e in elems {
                env.push((var.clone(), e));
                let t = hf_truth(body, env);
                env.pop();
                if t != universal {
                    result = t;
                    break;
                }
            }
            result
        }
        _ => panic!("bounded formulas only"),
    }
}

#[test]
fn bounded_truth_transfers_along_hat() {
    let consts = HashMap::new();
    let family: Vec<Formula> = [
        "x in y",
        "x = y",
        "forall u in x . u in y",
        "exists u in y . forall w in u . w in x",
        "~ x in y -> exists u in x . ~ u in y",
        "forall u in x . exists w in y . u = w \\/ u in w",
        "exists u in x . exists w in u . w in y",
    ]
    .iter()
    .map(|s| parse_formula_with_free(s, &consts, &["x", "y"]).unwrap())
    .collect();
    let sets = HFSet::small_sets(5, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let small = HFSet::small_sets(4, 3).len();
    for i in 0..small {
        for j in 0..small {
            pairs.push((i, j));
        }
    }
    let all: Vec<(usize, usize)> = (0..sets.len())
        .flat_map(|i| (0..sets.len()).map(move |j| (i, j)))
        .collect();
    pairs.extend(all.choose_multiple(&mut rng, 3000).copied());

    for (label, h) in algebras() {
        let mut store = NameStore::new();
        let hats: Vec<NameId> = sets.iter().map(|x| store.hat_embed(&h, x)).collect();
        let mut ctx = EvalContext::new(&h, &store);
        for &(i, j) in &pairs {
            let s: Assignment = [("x", hats[i]), ("y", hats[j])].into_iter().collect();
            for f in &family {
                let mut env = vec![
                    ("x".to_string(), sets[i].clone()),
                    ("y".to_string(), sets[j].clone()),
                ];
                let truth = hf_truth(f, &mut env);
                assert_eq!(
                    ctx.models(f, &s).unwrap(),
                    truth,
                    "{label}: {f} at {} {}",
                    sets[i],
                    sets[j]
                );
            }
        }
    }
}
