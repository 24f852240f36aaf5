use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use hvalued::catalog::Catalog;
use hvalued::lattice::{ElementId, HeytingAlgebra};
use hvalued::names::{parse_name, HFSet, NameId, NameStore};
use hvalued::transfer::{
    all_witnesses, check_atomic_preservation, check_functoriality, check_identity_lift,
    check_positive_bounded_preservation, first_proposal_images, is_generalized_related, lift,
    parse_morphism, positive_family, Check, Lifter, LocaleMorphism, MorphismViolation,
    StrictRelation, TransferError,
};
use hvalued::valuation::{
    make_function_predicate, parse_formula_with_free, Assignment, EvalContext,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn name(store: &mut NameStore, h: &HeytingAlgebra, text: &str) -> NameId {
    parse_name(store, h, text, &HashMap::new()).unwrap()
}

fn counterexample(store: &mut NameStore, c: &Catalog) -> NameId {
    name(store, &c.four, "{({({}, 0)}, 0), ({({}, a)}, 1)}")
}

fn pairs(n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .flat_map(|i| (0..n).map(move |j| vec![i, j]))
        .collect()
}

#[test]
fn validator_accepts_f_and_rejects_l_and_r() {
    let c = Catalog::new();
    assert!(c.f().is_strict());
    assert_eq!(
        c.l_table().unwrap_err(),
        TransferError::Violation(MorphismViolation::NotMeetPreserving {
            a: "a".into(),
            b: "na".into()
        })
    );
    assert_eq!(
        c.r_table().unwrap_err(),
        TransferError::Violation(MorphismViolation::NotJoinPreserving {
            a: "a".into(),
            b: "na".into()
        })
    );
    let top_bad =
        LocaleMorphism::from_labels("t", c.two.clone(), c.two.clone(), &[("0", "0"), ("1", "0")]);
    assert!(matches!(
        top_bad,
        Err(TransferError::Violation(
            MorphismViolation::TopNotPreserved { .. }
        ))
    ));
    let bottom_bad =
        LocaleMorphism::from_labels("b", c.two.clone(), c.two.clone(), &[("0", "1"), ("1", "1")]);
    assert!(matches!(
        bottom_bad,
        Err(TransferError::Violation(
            MorphismViolation::BottomNotPreserved { .. }
        ))
    ));
}

#[test]
fn strictness_of_the_catalog_morphisms() {
    let c = Catalog::new();
    assert!(c.i().is_strict());
    assert!(c.i().is_injective());
    assert!(c.collapse_high().is_strict());
    assert!(!c.collapse_low().is_strict());
    assert!(!c.f().is_injective());
}

/// Brute-force locale-law check over all tables `two -> two`, `chain3 -> two`
/// and `four -> two`.
#[test]
fn validator_agrees_with_brute_force() {
    let c = Catalog::new();
    for src in [&c.two, &c.chain3, &c.four] {
        let n = src.len();
        for code in 0..(1usize << n) {
            let table: Vec<ElementId> = (0..n).map(|i| c.two.element_at((code >> i) & 1)).collect();
            let f = |a: ElementId| table[a.index()];
            let t = &c.two;
            let expected = f(src.top()) == t.top()
                && f(src.bottom()) == t.bottom()
                && src.elements().all(|a| {
                    src.elements().all(|b| {
                        f(src.meet(a, b)) == t.meet(f(a), f(b))
                            && f(src.join(a, b)) == t.join(f(a), f(b))
                    })
                });
            let got = LocaleMorphism::new("t", src.clone(), c.two.clone(), table.clone()).is_ok();
            assert_eq!(got, expected, "table {code:b}");
        }
    }
}

#[test]
fn morphism_text_roundtrip_and_errors() {
    let c = Catalog::new();
    let text = c.f().to_text("four", "two");
    let g = parse_morphism(&text, |n| c.algebra(n)).unwrap();
    for a in c.four.elements() {
        assert_eq!(g.apply(a), c.f().apply(a));
    }
    assert_eq!(g.name(), "f");
    let missing = "morphism g : four -> two\nmap: 0 -> 0\nmap: 1 -> 1\n";
    assert!(matches!(
        parse_morphism(missing, |n| c.algebra(n)),
        Err(TransferError::NotTotal(_))
    ));
    let twice = "morphism g : two -> two\nmap: 0 -> 0\nmap: 0 -> 0\nmap: 1 -> 1\n";
    assert!(matches!(
        parse_morphism(twice, |n| c.algebra(n)),
        Err(TransferError::Syntax { line: 3, .. })
    ));
    assert!(matches!(
        parse_morphism("morphism g : five -> two\n", |n| c.algebra(n)),
        Err(TransferError::UnknownAlgebra(_))
    ));
    assert!(matches!(
        parse_morphism("morphism g : two -> two\nmap: 0 -> z\nmap: 1 -> 1\n", |n| c
            .algebra(n)),
        Err(TransferError::UnknownLabel(_))
    ));
}

#[test]
fn composition_and_identity() {
    let c = Catalog::new();
    let fi = c.i().then(&c.f()).unwrap();
    for a in c.two.elements() {
        assert_eq!(fi.apply(a), a);
    }
    assert_eq!(fi.name(), "f . i");
    assert_eq!(
        c.f().then(&c.f()).unwrap_err(),
        TransferError::NotComposable
    );
    let id = LocaleMorphism::identity(c.chain3.clone());
    assert!(id.is_strict());
    assert!(c.two.element_at(0) != c.four.element_at(0) || c.two.tag() != c.four.tag());
    assert_eq!(
        c.f().try_apply(c.two.top()),
        Err(TransferError::CrossAlgebra)
    );
}

#[test]
fn counterexample_has_no_strict_image() {
    let c = Catalog::new();
    let f = c.f();
    let mut store = NameStore::new();
    let x = counterexample(&mut store, &c);
    let candidates = store.enumerate_names(&c.two, 2, 3, 10_000).unwrap();
    assert_eq!(candidates.len(), 27);
    assert!(first_proposal_images(&f, &store, x, &candidates)
        .unwrap()
        .is_empty());

    let wl = lift(&f, &mut store, x).unwrap();
    assert!(wl.recheck(&f, &store));
    let u1 = name(&mut store, &c.two, "{({}, 0)}");
    let u2 = store.pad_equivalent(&c.two, u1, 1).unwrap();
    let expected = store
        .make_name(&c.two, [(u1, c.two.bottom()), (u2, c.two.top())])
        .unwrap();
    assert_eq!(wl.image, expected);
    assert_eq!(wl.witness.iter().filter(|w| !w.canonical).count(), 1);
    assert_eq!(wl.witness[1].image_key, u2);
    let mut ctx = EvalContext::new(&c.two, &store);
    assert_eq!(ctx.atomic_eq(u1, u2).unwrap(), c.two.top());

    let mut lifter = Lifter::new(&f);
    assert!(is_generalized_related(&mut lifter, &mut store, x, wl.image).unwrap());
}

#[test]
fn strict_relation_small_cases() {
    let c = Catalog::new();
    let f = c.f();
    let mut store = NameStore::new();
    let e4 = store.empty(&c.four);
    let e2 = store.empty(&c.two);
    let candidates = store.enumerate_names(&c.two, 2, 3, 10_000).unwrap();
    assert_eq!(
        first_proposal_images(&f, &store, e4, &candidates).unwrap(),
        vec![e2]
    );

    let big = name(
        &mut store,
        &c.four,
        "{({}, 1), ({({}, 1)}, 1), ({({}, 0)}, 1), ({({}, a)}, 1), ({({}, na)}, 1)}",
    );
    let mut rel = StrictRelation::new(&f);
    assert!(matches!(
        rel.related(&store, big, e2),
        Err(TransferError::BudgetExceeded {
            domain: 5,
            limit: 4
        })
    ));
}

/// Keys with different `f`-values have disjoint strict images, and every key
/// has one.
fn f_separated(
    f: &LocaleMorphism,
    store: &NameStore,
    rel: &mut StrictRelation<'_>,
    x: NameId,
    pool: &[NameId],
) -> bool {
    let images: Vec<HashSet<NameId>> = store
        .entries(x)
        .iter()
        .map(|&(u, _)| {
            pool.iter()
                .copied()
                .filter(|&y| rel.related(store, u, y).unwrap())
                .collect()
        })
        .collect();
    let entries = store.entries(x);
    images.iter().all(|s| !s.is_empty())
        && (0..entries.len()).all(|i| {
            (0..entries.len()).all(|j| {
                f.apply(entries[i].1) == f.apply(entries[j].1) || images[i].is_disjoint(&images[j])
            })
        })
}

#[test]
fn strict_images_exist_exactly_for_f_separated_names() {
    let c = Catalog::new();
    let f = c.f();
    let mut store = NameStore::new();
    let x0 = counterexample(&mut store, &c);
    let names = store.enumerate_names(&c.four, 2, 2, 10_000).unwrap();
    assert_eq!(names.len(), 181);
    assert!(names.contains(&x0));
    let candidates = store.enumerate_names(&c.two, 2, 3, 10_000).unwrap();
    let mut rel = StrictRelation::new(&f);
    let mut empty = 0;
    for &x in &names {
        let images = first_proposal_images(&f, &store, x, &candidates).unwrap();
        let sep = f_separated(&f, &store, &mut rel, x, &candidates);
        assert_eq!(!images.is_empty(), sep, "{}", store.render(&c.four, x));
        if images.is_empty() {
            empty += 1;
        }
    }
    assert!(empty >= 1);
}

#[test]
fn injective_morphism_gives_a_unique_strict_image() {
    let c = Catalog::new();
    let i = c.i();
    let mut store = NameStore::new();
    let names = store.enumerate_names(&c.two, 2, 3, 10_000).unwrap();
    assert_eq!(names.len(), 27);
    let candidates = store.enumerate_names(&c.four, 2, 3, 10_000).unwrap();
    assert_eq!(candidates.len(), 821);
    let mut seen = HashSet::new();
    for &x in &names {
        let images = first_proposal_images(&i, &store, x, &candidates).unwrap();
        let wl = lift(&i, &mut store, x).unwrap();
        assert!(wl.witness.iter().all(|w| w.canonical));
        assert_eq!(images, vec![wl.image]);
        assert!(seen.insert(wl.image));
    }
}

#[test]
fn generalized_relation_examples() {
    let c = Catalog::new();
    let f = c.f();
    let mut store = NameStore::new();
    let mut lifter = Lifter::new(&f);
    let e4 = store.empty(&c.four);
    let low = name(&mut store, &c.two, "{({}, 0)}");
    let high = name(&mut store, &c.two, "{({}, 1)}");
    assert!(is_generalized_related(&mut lifter, &mut store, e4, low).unwrap());
    assert!(!is_generalized_related(&mut lifter, &mut store, e4, high).unwrap());
    assert_eq!(
        is_generalized_related(&mut lifter, &mut store, e4, e4),
        Err(TransferError::CrossAlgebra)
    );
}

/// The relation by brute force over a pool of target names. `D(x)` holds the
/// pool names reached by a commuting surjection whose keys are equal (value
/// top) to some member of `D(u)`; `y` is related to `x` when it is equal to
/// some member of `D(x)`.
#[test]
fn generalized_relation_matches_pool_oracle() {
    let c = Catalog::new();
    for f in [c.f(), c.collapse_low(), c.collapse_high(), c.i()] {
        let (a, b) = (f.source().clone(), f.target().clone());
        let mut store = NameStore::new();
        let xs = store.enumerate_names(&a, 2, 2, 10_000).unwrap();
        let pool = store.enumerate_names(&b, 3, 2, 1_000_000).unwrap();
        let small: Vec<NameId> = if b.len() == 2 {
            store.enumerate_names(&b, 2, 3, 10_000).unwrap()
        } else {
            store.enumerate_names(&b, 1, 4, 10_000).unwrap()
        };
        let mut ctx = EvalContext::new(&b, &store);
        let top = b.top();
        let mut r: HashMap<NameId, Vec<NameId>> = HashMap::new();
        // keys before names: rank order
        let mut order = xs.clone();
        order.sort_by_key(|&x| store.rank(x).unwrap());
        let mut all_keys: Vec<NameId> = Vec::new();
        for &x in &order {
            for u in store.domain(x) {
                if !all_keys.contains(&u) {
                    all_keys.push(u);
                }
            }
        }
        all_keys.sort_by_key(|&x| store.rank(x).unwrap());
        let mut todo: Vec<NameId> = all_keys;
        todo.extend(order.iter().copied());
        for x in todo {
            if r.contains_key(&x) {
                continue;
            }
            let entries = store.entries(x).to_vec();
            let mut d = Vec::new();
            for &z in &pool {
                let zs = store.entries(z);
                if zs.len() > entries.len() {
                    continue;
                }
                let ok: Vec<Vec<bool>> = entries
                    .iter()
                    .map(|&(u, xu)| {
                        zs.iter()
                            .map(|&(v, zv)| {
                                zv == f.apply(xu)
                                    && r[&u].iter().any(|&w| ctx.atomic_eq(w, v).unwrap() == top)
                            })
                            .collect()
                    })
                    .collect();
                if surjection_exists(&ok, entries.len(), zs.len()) {
                    d.push(z);
                }
            }
            r.insert(x, d);
        }
        let expected: Vec<Vec<bool>> = xs
            .iter()
            .map(|x| {
                small
                    .iter()
                    .map(|&y| r[x].iter().any(|&z| ctx.atomic_eq(y, z).unwrap() == top))
                    .collect()
            })
            .collect();
        drop(ctx);
        let mut lifter = Lifter::new(&f);
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in small.iter().enumerate() {
                let got = is_generalized_related(&mut lifter, &mut store, x, y).unwrap();
                assert_eq!(got, expected[i][j], "{} {}", f.name(), store.render(&a, x));
            }
        }
    }
}

fn surjection_exists(ok: &[Vec<bool>], n: usize, m: usize) -> bool {
    if m == 0 {
        return n == 0;
    }
    let mut assign = vec![0usize; n];
    loop {
        if (0..n).all(|i| ok[i][assign[i]]) {
            let hit: HashSet<usize> = assign.iter().copied().collect();
            if hit.len() == m {
                return true;
            }
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return false;
            }
            assign[pos] += 1;
            if assign[pos] < m {
                break;
            }
            assign[pos] = 0;
            pos += 1;
        }
    }
}

#[test]
fn atomic_preservation_on_sweeps() {
    let c = Catalog::new();
    for f in [c.f(), c.i(), c.collapse_high(), c.collapse_low()] {
        let mut store = NameStore::new();
        let names = store.enumerate_names(f.source(), 2, 2, 10_000).unwrap();
        let report = check_atomic_preservation(&f, &mut store, &names).unwrap();
        assert!(
            report.passed(),
            "{}: {:?}",
            f.name(),
            report.violating().next()
        );
        assert_eq!(report.checked, 2 * (names.len() * names.len()) as u64);
        assert!(report.recheck(f.source(), f.target()));
        assert_eq!(report.records[0].strict, f.is_strict());
    }
}

#[test]
fn equality_one_is_preserved() {
    let c = Catalog::new();
    for f in [c.f(), c.collapse_low()] {
        let (a, b) = (f.source().clone(), f.target().clone());
        let mut store = NameStore::new();
        let names = store.enumerate_names(&a, 2, 2, 10_000).unwrap();
        let mut lifter = Lifter::new(&f);
        let images: Vec<NameId> = names
            .iter()
            .map(|&x| lifter.image(&mut store, x).unwrap())
            .collect();
        let mut ca = EvalContext::new(&a, &store);
        let mut cb = EvalContext::new(&b, &store);
        for i in 0..names.len() {
            for j in 0..names.len() {
                if ca.atomic_eq(names[i], names[j]).unwrap() == a.top() {
                    assert_eq!(cb.atomic_eq(images[i], images[j]).unwrap(), b.top());
                }
            }
        }
    }
}

#[test]
fn spot_check_membership_value() {
    let c = Catalog::new();
    let f = c.f();
    let mut store = NameStore::new();
    let x = name(&mut store, &c.four, "{({}, a)}");
    let e4 = store.empty(&c.four);
    let report = check_atomic_preservation(&f, &mut store, &[x, e4]).unwrap();
    let rec = report
        .records
        .iter()
        .find(|r| r.check == Check::Member && r.args == vec![1, 0])
        .unwrap();
    assert_eq!(rec.mapped, "0");
    assert_eq!(rec.target_value, "0");
}

#[test]
fn identity_preservation_is_exact() {
    let c = Catalog::new();
    let id = LocaleMorphism::identity(c.four.clone());
    let mut store = NameStore::new();
    let names = store.enumerate_names(&c.four, 2, 2, 10_000).unwrap();
    let report = check_atomic_preservation(&id, &mut store, &names).unwrap();
    assert!(report.passed());
    assert!(report
        .records
        .iter()
        .all(|r| r.strict && r.mapped == r.target_value));
}

#[test]
fn positive_family_is_preserved() {
    let c = Catalog::new();
    let family = positive_family();
    assert_eq!(family.len(), 6);
    for f in [c.f(), c.i(), c.collapse_high(), c.collapse_low()] {
        let mut store = NameStore::new();
        let names = store.enumerate_names(f.source(), 2, 2, 10_000).unwrap();
        let tuples = pairs(names.len());
        for phi in &family {
            assert!(phi.is_positive_bounded());
            let report =
                check_positive_bounded_preservation(&f, phi, &mut store, &names, &tuples).unwrap();
            assert!(
                report.passed(),
                "{} {phi}: {:?}",
                f.name(),
                report.violating().next()
            );
            assert!(report.recheck(f.source(), f.target()));
        }
    }
}

#[test]
fn positive_check_rejects_negation_and_unbounded() {
    let c = Catalog::new();
    let f = c.f();
    let mut store = NameStore::new();
    let names = vec![store.empty(&c.four)];
    for text in ["~ x in y", "forall u . u in x", "x in y -> y in x"] {
        let phi = parse_formula_with_free(text, &HashMap::new(), &["x", "y"]).unwrap();
        assert_eq!(
            check_positive_bounded_preservation(&f, &phi, &mut store, &names, &[vec![0, 0]])
                .unwrap_err(),
            TransferError::NotPositiveBounded
        );
    }
}

#[test]
fn functoriality_on_sweeps() {
    let c = Catalog::new();
    let cases: Vec<(LocaleMorphism, LocaleMorphism)> = vec![
        (c.i(), c.f()),
        (c.f(), LocaleMorphism::identity(c.two.clone())),
        (LocaleMorphism::identity(c.chain3.clone()), c.collapse_low()),
        (c.collapse_high(), c.i()),
    ];
    for (f, g) in cases {
        let mut store = NameStore::new();
        let names = store.enumerate_names(f.source(), 2, 2, 10_000).unwrap();
        let report = check_functoriality(&f, &g, &mut store, &names).unwrap();
        assert!(report.passed(), "{} then {}", f.name(), g.name());
        assert_eq!(report.checked, 2 * names.len() as u64);
        assert!(report.recheck(f.source(), g.target()));
    }
    let mut store = NameStore::new();
    let names = store.enumerate_names(&c.chain3, 2, 2, 10_000).unwrap();
    assert!(check_identity_lift(&c.chain3, &mut store, &names)
        .unwrap()
        .passed());
}

#[test]
fn lift_of_i_on_hat_names_matches_hat() {
    let c = Catalog::new();
    let i = c.i();
    let mut store = NameStore::new();
    for x in HFSet::small_sets(5, 3) {
        let x2 = store.hat_embed(&c.two, &x);
        let x4 = store.hat_embed(&c.four, &x);
        let img = lift(&i, &mut store, x2).unwrap().image;
        let mut ctx = EvalContext::new(&c.four, &store);
        assert_eq!(ctx.atomic_eq(img, x4).unwrap(), c.four.top(), "{x:?}");
    }
}

#[test]
fn lift_is_total_and_deterministic() {
    let c = Catalog::new();
    for (f, cap) in [
        (c.f(), 1),
        (c.i(), 2),
        (c.collapse_low(), 2),
        (c.collapse_high(), 2),
    ] {
        let mut store = NameStore::new();
        let names = store
            .enumerate_names(f.source(), 3, cap, 1_000_000)
            .unwrap();
        let mut lifter = Lifter::new(&f);
        let mut images = Vec::with_capacity(names.len());
        for &x in &names {
            let wl = lifter.lift(&mut store, x).unwrap();
            assert!(wl.recheck(&f, &store));
            images.push(wl.image);
        }
        // replaying in a fresh store gives the same images
        let mut fresh = NameStore::new();
        let again = fresh
            .enumerate_names(f.source(), 3, cap, 1_000_000)
            .unwrap();
        let mut lifter2 = Lifter::new(&f);
        for (k, &x) in again.iter().enumerate() {
            let img = lifter2.image(&mut fresh, x).unwrap();
            if k % 97 == 0 {
                assert_eq!(
                    fresh.render(f.target(), img),
                    store.render(f.target(), images[k])
                );
            }
        }
    }
    // cap 2 at rank 3 for the four-element source on a sample
    let f = c.f();
    let mut store = NameStore::new();
    let rank2 = store.enumerate_names(&c.four, 2, 2, 10_000).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut lifter = Lifter::new(&f);
    for _ in 0..2000 {
        let k1 = rank2[rng.gen_range(0..rank2.len())];
        let k2 = rank2[rng.gen_range(0..rank2.len())];
        let v1 = c.four.element_at(rng.gen_range(0..4));
        let v2 = c.four.element_at(rng.gen_range(0..4));
        if k1 == k2 {
            continue;
        }
        let x = store.make_name(&c.four, [(k1, v1), (k2, v2)]).unwrap();
        let wl = lifter.lift(&mut store, x).unwrap();
        assert!(wl.recheck(&f, &store));
    }
}

#[test]
fn lift_rejects_foreign_names() {
    let c = Catalog::new();
    let mut store = NameStore::new();
    let e2 = store.empty(&c.two);
    assert_eq!(
        lift(&c.f(), &mut store, e2).unwrap_err(),
        TransferError::CrossAlgebra
    );
}

fn function_instances(
    store: &mut NameStore,
    h: &Arc<HeytingAlgebra>,
) -> Vec<(NameId, NameId, NameId)> {
    let zero = store.hat_embed(h, &HFSet::ordinal(0));
    let one = store.hat_embed(h, &HFSet::ordinal(1));
    let p00 = store.ordered_pair_h(h, zero, zero).unwrap();
    let p10 = store.ordered_pair_h(h, one, zero).unwrap();
    let p01 = store.ordered_pair_h(h, zero, one).unwrap();
    let values: Vec<ElementId> = h.elements().collect();
    let mut out = Vec::new();
    for &v in &values {
        for &w in &values {
            let x = store.make_name(h, [(zero, v)]).unwrap();
            let y = store.make_name(h, [(zero, w)]).unwrap();
            let g = store.make_name(h, [(p00, v)]).unwrap();
            out.push((g, x, y));
            let x2 = store.make_name(h, [(zero, h.top()), (one, v)]).unwrap();
            let y2 = store.make_name(h, [(zero, h.top()), (one, w)]).unwrap();
            let g2 = store.make_name(h, [(p00, h.top()), (p10, v)]).unwrap();
            out.push((g2, x2, y2));
            let g3 = store.make_name(h, [(p01, v)]).unwrap();
            out.push((g3, x, y2));
        }
    }
    out
}

#[test]
fn function_names_are_preserved() {
    let c = Catalog::new();
    let mut models_seen = 0;
    for f in [c.f(), c.i(), c.collapse_low(), c.collapse_high()] {
        let (a, b) = (f.source().clone(), f.target().clone());
        let mut store = NameStore::new();
        let instances = function_instances(&mut store, &a);
        let mut lifter = Lifter::new(&f);
        for (g, x, y) in instances {
            let phi = make_function_predicate(&mut store, &a, g, x, y).unwrap();
            let holds = EvalContext::new(&a, &store)
                .models(&phi, &Assignment::new())
                .unwrap();
            if !holds {
                continue;
            }
            models_seen += 1;
            let (g1, x1, y1) = (
                lifter.image(&mut store, g).unwrap(),
                lifter.image(&mut store, x).unwrap(),
                lifter.image(&mut store, y).unwrap(),
            );
            let psi = make_function_predicate(&mut store, &b, g1, x1, y1).unwrap();
            let lifted = EvalContext::new(&b, &store)
                .models(&psi, &Assignment::new())
                .unwrap();
            assert!(lifted, "{} {}", f.name(), store.render(&a, g));
        }
    }
    assert!(models_seen >= 10);
}

#[test]
fn witnesses_enumerate_bijections() {
    let c = Catalog::new();
    let f = c.f();
    let mut store = NameStore::new();
    let x = counterexample(&mut store, &c);
    let mut lifter = Lifter::new(&f);
    let wl = lifter.lift(&mut store, x).unwrap();
    let ws = all_witnesses(&mut lifter, &mut store, x, wl.image).unwrap();
    assert!(ws.contains(&wl.witness));
    // both keys of x lift to names equal to both image keys, but values force
    // one bijection
    assert_eq!(ws.len(), 1);

    let y = name(&mut store, &c.four, "{({({}, a)}, 1), ({({}, 0)}, 1)}");
    let wl = lifter.lift(&mut store, y).unwrap();
    let ws = all_witnesses(&mut lifter, &mut store, y, wl.image).unwrap();
    assert_eq!(ws.len(), 2);
}
