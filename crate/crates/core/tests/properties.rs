use std::sync::Arc;

use proptest::prelude::*;

use hvalued::catalog::Catalog;
use hvalued::hset::{from_name, HSet, HSetMorphism};
use hvalued::lattice::{make_boolean, make_chain, ElementId, HeytingAlgebra};
use hvalued::names::{HFSet, NameId, NameStore};
use hvalued::transfer::{Lifter, LocaleMorphism};
use hvalued::valuation::EvalContext;

/// The downsets of a random order on `n` points, ordered by inclusion.
fn downset_algebra(n: usize, rel: &[bool]) -> HeytingAlgebra {
    // transitive closure of the strict upper triangle gives a partial order
    let mut below = vec![false; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            below[i * n + j] = rel[i * n + j];
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if below[i * n + k] && below[k * n + j] {
                    below[i * n + j] = true;
                }
            }
        }
    }
    let downsets: Vec<u32> = (0u32..(1 << n))
        .filter(|&s| {
            (0..n).all(|j| {
                s & (1 << j) == 0 || (0..n).all(|i| !below[i * n + j] || s & (1 << i) != 0)
            })
        })
        .collect();
    let m = downsets.len();
    let labels = downsets.iter().map(|s| format!("d{s}")).collect();
    let leq = (0..m * m)
        .map(|k| downsets[k / m] & !downsets[k % m] == 0)
        .collect();
    HeytingAlgebra::from_order(labels, leq).expect("downsets form a frame")
}

fn algebra() -> impl Strategy<Value = HeytingAlgebra> {
    prop_oneof![
        (1usize..=5).prop_map(|n| make_chain(n).unwrap()),
        (0usize..=3).prop_map(|k| make_boolean(k).unwrap()),
        (1usize..=4)
            .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n * n)))
            .prop_map(|(n, rel)| downset_algebra(n, &rel)),
    ]
}

fn pick(h: &HeytingAlgebra, i: usize) -> ElementId {
    h.element_at(i % h.len())
}

fn hf_set() -> impl Strategy<Value = HFSet> {
    Just(HFSet::empty()).prop_recursive(4, 16, 3, |inner| {
        proptest::collection::vec(inner, 0..3).prop_map(|v| v.into_iter().collect())
    })
}

proptest! {
    #[test]
    fn lattice_adjunction_and_frame_law(h in algebra(), i in 0usize..64, j in 0usize..64, k in 0usize..64) {
        let (a, b, c) = (pick(&h, i), pick(&h, j), pick(&h, k));
        prop_assert_eq!(h.leq(h.meet(c, a), b), h.leq(c, h.implies(a, b)));
        prop_assert_eq!(h.meet(a, h.join(b, c)), h.join(h.meet(a, b), h.meet(a, c)));
        prop_assert_eq!(h.meet(a, h.join(a, b)), a);
        prop_assert_eq!(h.join(a, h.meet(a, b)), a);
        prop_assert_eq!(h.neg(a), h.implies(a, h.bottom()));
        prop_assert!(h.leq(h.meet(a, h.neg(a)), h.bottom()));
        prop_assert_eq!(h.implies(a, a), h.top());
    }

    #[test]
    fn text_form_roundtrips(h in algebra()) {
        let g = HeytingAlgebra::parse(&h.to_text()).unwrap();
        prop_assert!(g.same_structure(&h));
        prop_assert_eq!(g.fingerprint(), h.fingerprint());
    }

    #[test]
    fn check_of_hat_is_identity(x in hf_set()) {
        let c = Catalog::new();
        let mut store = NameStore::new();
        let u = store.hat_embed(&c.two, &x);
        prop_assert_eq!(store.check_project(&c.two, u).unwrap(), x);
    }

    #[test]
    fn make_name_ignores_entry_order(picks in proptest::collection::vec((0usize..27, 0usize..4), 0..5)) {
        let c = Catalog::new();
        let mut store = NameStore::new();
        let pool = store.enumerate_names(&c.four, 2, 3, 100_000).unwrap();
        let mut entries: Vec<(NameId, ElementId)> = Vec::new();
        for (k, v) in picks {
            let key = pool[k % pool.len()];
            if entries.iter().all(|&(q, _)| q != key) {
                entries.push((key, pick(&c.four, v)));
            }
        }
        let a = store.make_name(&c.four, entries.clone()).unwrap();
        entries.reverse();
        let b = store.make_name(&c.four, entries).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn atomic_values_obey_the_equality_laws(i in 0usize..181, j in 0usize..181, k in 0usize..181) {
        let c = Catalog::new();
        let h = &c.four;
        let mut store = NameStore::new();
        let names = store.enumerate_names(h, 2, 2, 10_000).unwrap();
        let (x, y, z) = (names[i], names[j], names[k]);
        let mut ctx = EvalContext::with_ordered_memo(h, &store);
        let xy = ctx.atomic_eq(x, y).unwrap();
        prop_assert_eq!(ctx.atomic_eq(x, x).unwrap(), h.top());
        prop_assert_eq!(xy, ctx.atomic_eq(y, x).unwrap());
        prop_assert!(h.leq(h.meet(xy, ctx.atomic_eq(y, z).unwrap()), ctx.atomic_eq(x, z).unwrap()));
        prop_assert!(h.leq(h.meet(xy, ctx.atomic_mem(y, z).unwrap()), ctx.atomic_mem(x, z).unwrap()));
        prop_assert!(h.leq(h.meet(ctx.atomic_mem(z, x).unwrap(), xy), ctx.atomic_mem(z, y).unwrap()));
    }

    #[test]
    fn lifting_commutes_and_preserves_membership(m in 0usize..4, i in 0usize..400, j in 0usize..400) {
        let c = Catalog::new();
        let f: LocaleMorphism = [c.f(), c.i(), c.collapse_low(), c.collapse_high()][m].clone();
        let mut store = NameStore::new();
        let names = store.enumerate_names(f.source(), 2, 2, 10_000).unwrap();
        let (x, y) = (names[i % names.len()], names[j % names.len()]);
        let mut lifter = Lifter::new(&f);
        let lx = lifter.lift(&mut store, x).unwrap();
        prop_assert!(lx.recheck(&f, &store));
        let ly = lifter.image(&mut store, y).unwrap();
        let before = EvalContext::new(f.source(), &store).atomic_mem(y, x).unwrap();
        let after = EvalContext::new(f.target(), &store).atomic_mem(ly, lx.image).unwrap();
        prop_assert!(f.target().leq(f.apply(before), after));
    }

    #[test]
    fn hset_tables_validate_with_identity_and_products(
        n in 1usize..=3,
        cells in proptest::collection::vec(0usize..4, 6),
    ) {
        let c = Catalog::new();
        let h = c.four.clone();
        let mut delta = vec![h.bottom(); n * n];
        let mut it = cells.into_iter();
        for a in 0..n {
            for b in a..n {
                let e = pick(&h, it.next().unwrap());
                delta[a * n + b] = e;
                delta[b * n + a] = e;
            }
        }
        let points: Vec<String> = (0..n).map(|a| format!("p{a}")).collect();
        let Ok(x) = HSet::new(h.clone(), points, delta) else { return Ok(()) };
        let x = Arc::new(x);
        let id = HSetMorphism::identity(x.clone());
        prop_assert!(id.is_valid());
        prop_assert_eq!(&id.then(&id).unwrap(), &id);
        let product = HSet::product(&h, &[(*x).clone(), (*x).clone()]).unwrap();
        prop_assert!(product.hset.is_valid());
        for p in &product.projections {
            prop_assert!(p.is_valid());
        }
        let pair = product.pairing(&[id.clone(), id.clone()]).unwrap();
        prop_assert!(pair.is_valid());
    }

    #[test]
    fn names_give_valid_hsets(i in 0usize..181) {
        let c = Catalog::new();
        let mut store = NameStore::new();
        let names = store.enumerate_names(&c.four, 2, 2, 10_000).unwrap();
        let x = from_name(&store, &c.four, names[i]).unwrap();
        prop_assert!(x.is_valid());
    }
}
