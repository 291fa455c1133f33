use std::collections::BTreeMap;

use nakayama_core::catalog::CatalogId;
use nakayama_core::exactlin::Field;
use nakayama_core::pathalg::Algebra;
use nakayama_core::pseudofunctor::*;
use nakayama_core::spanmorph::Family;
use nakayama_core::verify::{Context, Verdict};

fn ctx(r: usize, n: usize) -> Context {
    Context::new(Algebra::arn(r, n, Field::new(32003).unwrap()).unwrap())
}

#[test]
fn ones_and_coboundaries_are_consistent() {
    for (r, n) in [(1, 2), (2, 3)] {
        let c = ctx(r, n);
        let rels = Relations::extract(&c, -2, 2).unwrap();
        assert!(!rels.relations.is_empty());
        let ones = ScalarSystem::ones(r, n, -2, 2);
        assert_eq!(check_consistency(&c.alg, &rels, &ones).unwrap().verdict, Verdict::Pass);
        match trivialize(&c.alg, &rels, &ones).unwrap() {
            TrivializeOutcome::Trivialized(t) => assert!(t.scalars.values().all(|&v| v == 1)),
            other => panic!("{other:?}"),
        }
        let mut rng = seeded_rng(11);
        let cochain = random_cochain(&c.alg, -2, 2, &mut rng);
        let sys = ScalarSystem::coboundary(&c.alg, -2, 2, &cochain).unwrap();
        assert_eq!(check_consistency(&c.alg, &rels, &sys).unwrap().verdict, Verdict::Pass);
        let TrivializeOutcome::Trivialized(t) = trivialize(&c.alg, &rels, &sys).unwrap() else {
            panic!("coboundary must trivialize")
        };
        // delta * c is constant on each component of the generator graph
        let f = c.alg.field;
        let products: BTreeMap<CatalogId, u32> =
            t.scalars.iter().map(|(u, &d)| (*u, f.mul(d, cochain[u]))).collect();
        let mut distinct: Vec<u32> = products.values().copied().collect();
        distinct.sort_unstable();
        distinct.dedup();
        assert!(distinct.len() <= t.components);
    }
}

#[test]
fn one_connection_scaled_is_inconsistent() {
    let c = ctx(1, 2);
    let rels = Relations::extract(&c, -2, 2).unwrap();
    let mut sys = ScalarSystem::ones(1, 2, -2, 2);
    let k = *sys.scalars.keys().find(|m| m.family == Family::C).unwrap();
    sys.scalars.insert(k, 2);
    let rep = check_consistency(&c.alg, &rels, &sys).unwrap();
    assert_eq!(rep.verdict, Verdict::Fail);
    assert!(rep.violations[0].0.contains_key(&k));
}

#[test]
fn obstruction_is_a_closed_walk() {
    let c = ctx(2, 3);
    let rels = Relations::extract(&c, -2, 2).unwrap();
    let mut sys = ScalarSystem::ones(2, 3, -2, 2);
    let mut rng = seeded_rng(3);
    perturb(&c.alg, &rels, &mut sys, &mut rng).unwrap();
    assert_eq!(check_consistency(&c.alg, &rels, &sys).unwrap().verdict, Verdict::Fail);
    let TrivializeOutcome::Obstructed { cycle, product } = trivialize(&c.alg, &rels, &sys).unwrap() else {
        panic!("perturbed system must not trivialize")
    };
    assert_ne!(product, 1);
    // consecutive steps share endpoints and the walk closes up
    let ends = |(id, back): (nakayama_core::spanmorph::MorphId, bool)| {
        let (s, t) = id.check(2, 3).unwrap();
        if back { (t, s) } else { (s, t) }
    };
    let steps: Vec<_> = cycle.iter().map(|&e| ends(e)).collect();
    for w in steps.windows(2) {
        assert_eq!(w[0].1, w[1].0);
    }
    assert_eq!(steps.last().unwrap().1, steps[0].0);
}

#[test]
fn normalize_connecting_examples() {
    let a = Algebra::arn(1, 3, Field::new(32003).unwrap()).unwrap();
    let one = a.one_full();
    let all_one: BTreeMap<i64, Vec<u32>> = (-2..3).map(|n| (n, one.clone())).collect();
    let out = normalize_connecting(&a, &all_one).unwrap();
    assert!(out.values().all(|v| *v == one));
    let c: Vec<u32> = one.iter().map(|&x| a.field.mul(x, 5)).collect();
    let mut l = all_one.clone();
    l.insert(0, c.clone());
    let out = normalize_connecting(&a, &l).unwrap();
    for (n, v) in &out {
        assert_eq!(*v, if *n >= 1 { c.clone() } else { one.clone() }, "a_{n}");
    }
    // 1 + d z with z the nilpotent central generator
    let basis = a.center_basis();
    assert_eq!(basis.len(), 2);
    let z = basis.iter().find(|v| a.mul_full(v, v).iter().all(|&x| x == 0)).unwrap();
    let mut l = BTreeMap::new();
    for n in 0..3 {
        let v: Vec<u32> = one.iter().zip(z).map(|(&o, &zz)| a.field.add(o, a.field.mul(zz, n as u32 + 1))).collect();
        l.insert(n, v);
    }
    let out = normalize_connecting(&a, &l).unwrap();
    // a_3 = 1 + (1 + 2 + 3) z
    let want: Vec<u32> = one.iter().zip(z).map(|(&o, &zz)| a.field.add(o, a.field.mul(zz, 6))).collect();
    assert_eq!(out[&3], want);
    let mut bad = BTreeMap::new();
    bad.insert(0, z.clone());
    assert!(normalize_connecting(&a, &bad).is_err());
}

#[test]
fn eta_examples() {
    let c = ctx(1, 2);
    let zero = BTreeMap::new();
    let rep = eta_from_differences(&c, -2, 2, &zero).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    assert!(rep.phi.values().all(|&v| v == 0));
    // b supported on the length-1 orbit segment
    let mut b = BTreeMap::new();
    for m in -2..2 {
        b.insert(CatalogId::X { s: None, m, n: m + 1 }, 1 + (m + 2) as u32);
    }
    let rep = eta_from_differences(&c, -2, 2, &b).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass, "{:?}", rep.failures);
    let seg: Vec<u32> = (-2..2).map(|m| rep.phi[&CatalogId::X { s: None, m, n: m + 1 }]).collect();
    assert_eq!(seg, vec![0, 2, 5, 9]);
    let mut wrong = rep.phi.clone();
    *wrong.get_mut(&CatalogId::X { s: None, m: 0, n: 1 }).unwrap() += 1;
    let fails = verify_eta(&c, -2, 2, &b, &wrong).unwrap();
    assert!(!fails.is_empty());
}

mod props {
    use std::sync::OnceLock;

    use proptest::prelude::*;

    use super::*;

    fn fixture() -> &'static (Context, Relations) {
        static F: OnceLock<(Context, Relations)> = OnceLock::new();
        F.get_or_init(|| {
            let c = ctx(2, 4);
            let rels = Relations::extract(&c, -1, 1).unwrap();
            (c, rels)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn coboundaries_trivialize_to_their_cochain(seed in any::<u64>()) {
            let (c, rels) = fixture();
            let f = c.alg.field;
            let cochain = random_cochain(&c.alg, -1, 1, &mut seeded_rng(seed));
            let sys = ScalarSystem::coboundary(&c.alg, -1, 1, &cochain).unwrap();
            prop_assert_eq!(check_consistency(&c.alg, rels, &sys).unwrap().verdict, Verdict::Pass);
            let TrivializeOutcome::Trivialized(t) = trivialize(&c.alg, rels, &sys).unwrap() else {
                return Err(TestCaseError::fail("no trivialization"));
            };
            // conjugating by delta gives 1 on every non-null generator
            for (g, m) in rels.generators.iter().enumerate() {
                if rels.null[g] {
                    continue;
                }
                let (s, tt) = rels.endpoints[g];
                let v = f.mul(f.mul(t.scalars[&tt], sys.scalars[m]), f.inv(t.scalars[&s]).unwrap());
                prop_assert_eq!(v, 1);
            }
        }

        #[test]
        fn telescope_satisfies_recurrence(vals in prop::collection::btree_map(-4i64..4, 1u32..32003, 0..6)) {
            let a = Algebra::arn(2, 3, Field::new(32003).unwrap()).unwrap();
            let one = a.one_full();
            let lambda: BTreeMap<i64, Vec<u32>> = vals
                .iter()
                .map(|(&n, &c)| (n, one.iter().map(|&x| a.field.mul(x, c)).collect()))
                .collect();
            let out = normalize_connecting(&a, &lambda).unwrap();
            prop_assert_eq!(&out[&0], &one);
            for (n, l) in &lambda {
                let inv = a.inverse_full(&out[n]).unwrap();
                prop_assert_eq!(&a.mul_full(&inv, &out[&(n + 1)]), l);
            }
        }
    }
}
