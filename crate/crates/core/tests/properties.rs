mod common;

use std::sync::Arc;

use proptest::prelude::*;

use coend_optics::atom::{Atom, FinSet, Func};
use coend_optics::coend::{coend, coyoneda_check, FinBifunctor};
use coend_optics::fincat::{enumerate_nats, CoPresheaf, FinCategory, FinFunctor};
use coend_optics::kan::left_kan;
use coend_optics::oracle::{quotient_partition, zigzag_classes};
use coend_optics::poly::{
    compose_polylens, enumerate_polylenses, polylens_count, polylens_to_nat, Ommatidium,
    PolyFunctor,
};
use coend_optics::prof::{associativity_check, prof_action, prof_compose, unit_check};
use coend_optics::simple_optics::{
    lens_abstract, lens_concretize, prism_abstract, prism_concretize, ConcreteLens, ConcretePrism,
    SetAction, SetEndpoints, SetOptic,
};

fn n(i: usize) -> Atom {
    Atom::from(i)
}

/// The function `dom → cod` picking `cod[seed mod |cod|]` for each element.
fn pick(dom: &FinSet, cod: &FinSet, seeds: &[usize]) -> Func {
    Func::from_pairs(
        dom.iter()
            .zip(seeds.iter().cycle())
            .map(|(x, s)| (x.clone(), cod.as_slice()[s % cod.len()].clone())),
    )
}

fn seeds() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..1000, 1..40)
}

fn atom() -> impl Strategy<Value = Atom> {
    let leaf = "[a-z0-9]{1,3}".prop_map(Atom::sym);
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Atom::pair(a, b)),
            (inner.clone(), inner.clone(), inner).prop_map(|(a, b, c)| Atom::triple(a, b, c)),
        ]
    })
}

fn discrete(k: usize, prefix: &str) -> Arc<FinCategory> {
    Arc::new(FinCategory::discrete((0..k).map(|i| Atom::sym(format!("{prefix}{i}")))).unwrap())
}

/// A profunctor between discrete categories with the given fiber sizes.
fn matrix(rows: &Arc<FinCategory>, cols: &Arc<FinCategory>, sizes: &[usize]) -> FinBifunctor {
    let (r, c) = (rows.objects().to_vec(), cols.objects().to_vec());
    FinBifunctor::tabulate(
        rows.clone(),
        cols.clone(),
        |x, y| {
            let i = r.iter().position(|a| a == x).unwrap();
            let j = c.iter().position(|a| a == y).unwrap();
            Ok(FinSet::range(sizes[(i * c.len() + j) % sizes.len()]))
        },
        |_, _, e| Ok(e.clone()),
        |_, _, e| Ok(e.clone()),
    )
    .unwrap()
}

/// A co-presheaf on the walking arrow with fibers of the given sizes.
fn arrow_copresheaf(s0: usize, s1: usize, seeds: &[usize]) -> CoPresheaf {
    let base = Arc::new(FinCategory::walking_arrow());
    let (f0, f1) = (FinSet::range(s0), FinSet::range(s1));
    let table = pick(&f0, &f1, seeds);
    CoPresheaf::tabulate(
        base,
        |a| Ok(if *a == n(0) { f0.clone() } else { f1.clone() }),
        |m, x| {
            if m.as_pair()?.0 == m.as_pair()?.1 {
                Ok(x.clone())
            } else {
                table.apply(x).cloned()
            }
        },
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn atoms_print_and_parse(a in atom()) {
        let back: Atom = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn function_codes_round_trip(d in 0usize..4, c in 1usize..4, s in seeds()) {
        let (dom, cod) = (FinSet::range(d), FinSet::range(c));
        let f = pick(&dom, &cod, &s);
        let code = f.encode(&dom).unwrap();
        prop_assert_eq!(Func::decode(&dom, &code).unwrap(), f);
    }

    #[test]
    fn preorders_are_categories(rel in prop::collection::vec((0usize..4, 0usize..4), 0..6)) {
        let cat = FinCategory::thin((0..4).map(n), rel.iter().map(|&(a, b)| (n(a), n(b)))).unwrap();
        prop_assert!(cat.validate().is_valid());
        prop_assert_eq!(cat.opposite().opposite(), cat.clone());
        let sq = cat.product(&cat.opposite());
        prop_assert!(sq.validate().is_valid());
        // |(C^op × C)(⟨a,b⟩,⟨c,d⟩)| = |C(c,a)|·|C(b,d)|.
        for a in 0..4 {
            for d in 0..4 {
                let (x, y) = (Atom::pair(n(a), n(0)), Atom::pair(n(1), n(d)));
                let expected = cat.hom(&n(1), &n(a)).len() * cat.hom(&n(0), &n(d)).len();
                prop_assert_eq!(sq.opposite().hom(&x, &y).len(), expected);
            }
        }
    }

    #[test]
    fn yoneda_counts_and_coyoneda(s0 in 0usize..4, s1 in 1usize..4, s in seeds()) {
        let f = arrow_copresheaf(s0, s1, &s);
        prop_assert!(f.validate().is_empty());
        for a in [n(0), n(1)] {
            let y = CoPresheaf::yoneda(f.base().clone(), &a).unwrap();
            prop_assert_eq!(enumerate_nats(&y, &f).unwrap().len(), f.fiber(&a).unwrap().len());
            let w = coyoneda_check(&f, &a).unwrap();
            prop_assert_eq!(w.codomain(), f.fiber(&a).unwrap());
        }
    }

    #[test]
    fn lan_to_a_point_is_the_terminal_fiber(s0 in 0usize..4, s1 in 1usize..4, s in seeds()) {
        let f = arrow_copresheaf(s0, s1, &s);
        let point = Arc::new(FinCategory::discrete([Atom::sym("*")]).unwrap());
        let bang = FinFunctor::tabulate(f.base().clone(), point, |_| Atom::sym("*"), |_| Atom::pair(Atom::sym("*"), Atom::sym("*"))).unwrap();
        let lan = left_kan(&f, &bang).unwrap();
        // 1 is terminal in the walking arrow, so the colimit is F(1).
        prop_assert_eq!(lan.copresheaf.fiber(&Atom::sym("*")).unwrap().len(), s1);
    }

    /// `∫^c H(c) × F(c)` against breadth-first search over the explicit
    /// relation, with `H` contravariant and `F` covariant on the arrow.
    #[test]
    fn tensor_product_coend_matches_search(
        h0 in 1usize..4, h1 in 0usize..4, f0 in 0usize..4, f1 in 1usize..4,
        sh in seeds(), sf in seeds(),
    ) {
        let base = Arc::new(FinCategory::walking_arrow());
        let u = Atom::pair(n(0), n(1));
        let (hs, fs) = ([FinSet::range(h0), FinSet::range(h1)], [FinSet::range(f0), FinSet::range(f1)]);
        let hu = pick(&hs[1], &hs[0], &sh);
        let fu = pick(&fs[0], &fs[1], &sf);
        let ix = |a: &Atom| usize::from(*a == n(1));
        let d = FinBifunctor::tabulate(
            base.clone(),
            base,
            |x, y| Ok(hs[ix(x)].product(&fs[ix(y)])),
            |m, _, e| {
                let (h, z) = e.as_pair()?;
                let h = if *m == u { hu.apply(h)?.clone() } else { h.clone() };
                Ok(Atom::pair(h, z.clone()))
            },
            |_, g, e| {
                let (h, z) = e.as_pair()?;
                let z = if *g == u { fu.apply(z)?.clone() } else { z.clone() };
                Ok(Atom::pair(h.clone(), z))
            },
        )
        .unwrap();
        let q = coend(&d).unwrap();
        let mut nodes = Vec::new();
        for c in 0..2 {
            for h in 0..[h0, h1][c] {
                for z in 0..[f0, f1][c] {
                    nodes.push((c, h, z));
                }
            }
        }
        let mut edges = Vec::new();
        for h in 0..h1 {
            for z in 0..f0 {
                let hl: usize = hu.apply(&n(h)).unwrap().to_string().parse().unwrap();
                let zr: usize = fu.apply(&n(z)).unwrap().to_string().parse().unwrap();
                edges.push(((0, hl, z), (1, h, zr)));
            }
        }
        prop_assert_eq!(q.len(), common::components(&nodes, &edges));
        prop_assert_eq!(quotient_partition(&q), zigzag_classes(&d).unwrap());
    }

    #[test]
    fn discrete_profunctors_multiply(
        p in prop::collection::vec(0usize..3, 4),
        q in prop::collection::vec(0usize..3, 4),
        r in prop::collection::vec(0usize..3, 4),
        a in prop::collection::vec(0usize..3, 2),
    ) {
        let (x, y, z, w) = (discrete(2, "x"), discrete(2, "y"), discrete(2, "z"), discrete(2, "w"));
        let (pp, qq, rr) = (matrix(&x, &y, &p), matrix(&y, &z, &q), matrix(&z, &w, &r));
        let pq = prof_compose(&pp, &qq).unwrap().profunctor;
        for i in 0..2 {
            for k in 0..2 {
                let expected: usize = (0..2).map(|j| p[i * 2 + j] * q[j * 2 + k]).sum();
                let got = pq.fiber(&x.objects()[i], &z.objects()[k]).unwrap().len();
                prop_assert_eq!(got, expected);
            }
        }
        let ap = CoPresheaf::tabulate(
            x.clone(),
            |o| Ok(FinSet::range(a[x.objects().iter().position(|b| b == o).unwrap()])),
            |_, e| Ok(e.clone()),
        )
        .unwrap();
        let act = prof_action(&pp, &ap).unwrap().copresheaf;
        for k in 0..2 {
            let expected: usize = (0..2).map(|i| a[i] * p[i * 2 + k]).sum();
            prop_assert_eq!(act.fiber(&y.objects()[k]).unwrap().len(), expected);
        }
        prop_assert!(associativity_check(&pp, &qq, &rr).is_ok());
        prop_assert!(unit_check(&pq).is_ok());
    }

    #[test]
    fn lens_tables_round_trip(
        sizes in (1usize..4, 1usize..4, 0usize..4, 1usize..4),
        sg in seeds(), sp in seeds(),
    ) {
        let (s, a, b, t) = sizes;
        let e = SetEndpoints { a: FinSet::range(a), b: FinSet::range(b), s: FinSet::range(s), t: FinSet::range(t) };
        let get = pick(&e.s, &e.a, &sg);
        let put = pick(&e.s.product(&e.b), &e.t, &sp);
        let l = ConcreteLens::new(e, get, put).unwrap();
        prop_assert_eq!(lens_concretize(&lens_abstract(&l).unwrap()).unwrap(), l);
    }

    #[test]
    fn prism_tables_round_trip(
        sizes in (1usize..4, 1usize..4, 0usize..4, 1usize..4),
        sm in seeds(), sb in seeds(),
    ) {
        let (s, a, b, t) = sizes;
        let e = SetEndpoints { a: FinSet::range(a), b: FinSet::range(b), s: FinSet::range(s), t: FinSet::range(t) };
        let matcher = pick(&e.s, &e.t.sum(&e.a), &sm);
        let build = pick(&e.b, &e.t, &sb);
        let p = ConcretePrism::new(e, matcher, build).unwrap();
        prop_assert_eq!(prism_concretize(&prism_abstract(&p).unwrap()).unwrap(), p);
    }

    #[test]
    fn set_optics_slide_and_compose(
        coproduct in any::<bool>(),
        m in 1usize..3, m2 in 1usize..3,
        ends in prop::collection::vec(1usize..3, 6),
        s1 in seeds(), s2 in seeds(), s3 in seeds(), s4 in seeds(), s5 in seeds(),
    ) {
        let act = if coproduct { SetAction::Coproduct } else { SetAction::Product };
        let sets: Vec<FinSet> = ends.iter().map(|&k| FinSet::range(k)).collect();
        let e1 = SetEndpoints { a: sets[0].clone(), b: sets[1].clone(), s: sets[2].clone(), t: sets[3].clone() };
        let e2 = SetEndpoints { a: sets[2].clone(), b: sets[3].clone(), s: sets[4].clone(), t: sets[5].clone() };
        let make = |e: &SetEndpoints, m: &FinSet, fs: &[usize], bs: &[usize]| {
            let fwd = pick(&e.s, &act.apply(m, &e.a), fs);
            let bwd = pick(&act.apply(m, &e.b), &e.t, bs);
            SetOptic::new(act, e.clone(), m.clone(), fwd, bwd).unwrap()
        };
        let (mm, mm2) = (FinSet::range(m), FinSet::range(m2));
        let o1 = make(&e1, &mm, &s1, &s2);
        let o2 = make(&e2, &mm2, &s3, &s4);
        // Slide o1 along a random residual map.
        let target = FinSet::range(m2);
        let h = pick(&mm, &target, &s5);
        let g = pick(&act.apply(&target, &e1.b), &e1.t, &s2);
        let (orig, moved) = o1.slide(&target, &h, &g).unwrap();
        prop_assert!(orig.equivalent(&moved).unwrap());
        // Units and a composite whose normal form is independent of the
        // representative.
        let id = SetOptic::identity(act, &e1.a, &e1.b);
        prop_assert!(id.compose(&o1).unwrap().equivalent(&o1).unwrap());
        let c1 = o1.compose(&o2).unwrap();
        let c2 = moved.compose(&o2).unwrap();
        prop_assert!(orig.compose(&o2).unwrap().equivalent(&c2).unwrap());
        let id2 = SetOptic::identity(act, &e2.s, &e2.t);
        prop_assert!(c1.compose(&id2).unwrap().equivalent(&o1.compose(&o2.compose(&id2).unwrap()).unwrap()).unwrap());
    }

    #[test]
    fn poly_counts_and_pointwise_composition(
        p in prop::collection::vec((1usize..3, 0usize..3), 1..3),
        q in prop::collection::vec((1usize..3, 0usize..3), 1..3),
        r in prop::collection::vec((1usize..3, 0usize..3), 1..2),
        choice in 0usize..1000,
    ) {
        let (pp, qq, rr) = (PolyFunctor::from_terms(&p), PolyFunctor::from_terms(&q), PolyFunctor::from_terms(&r));
        let l1s = enumerate_polylenses(&pp, &qq).unwrap();
        let l2s = enumerate_polylenses(&qq, &rr).unwrap();
        prop_assert_eq!(polylens_count(&pp, &qq).unwrap(), Some(l1s.len() as u128));
        prop_assume!(!l1s.is_empty() && !l2s.is_empty());
        let (l1, l2) = (&l1s[choice % l1s.len()], &l2s[(choice / 7) % l2s.len()]);
        let lc = compose_polylens(&pp, &qq, &rr, l1, l2).unwrap();
        for k in 0..3 {
            let y = FinSet::range(k);
            let lhs = polylens_to_nat(&pp, &rr, &lc, &y).unwrap();
            let rhs = polylens_to_nat(&qq, &rr, l2, &y).unwrap().after(&polylens_to_nat(&pp, &qq, l1, &y).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
        let o = Ommatidium::from_polylens(&pp, &qq, l1).unwrap();
        prop_assert_eq!(&o.normal_form(&pp, &qq).unwrap(), l1);
    }
}

/// Pairs of one- and two-term polynomials small enough for the test-side
/// brute force.
#[test]
fn poly_counts_match_test_brute_force() {
    let terms: [&[(usize, usize)]; 6] = [
        &[(1, 0)],
        &[(1, 1)],
        &[(2, 0)],
        &[(1, 2)],
        &[(1, 1), (1, 0)],
        &[(2, 1)],
    ];
    let mut checked = 0;
    for p in terms {
        for q in terms {
            let bound = p.iter().chain(q).map(|t| t.1).max().unwrap() + 1;
            let size = |ts: &[(usize, usize)], k: usize| -> usize {
                ts.iter().map(|&(s, t)| s * k.pow(t as u32)).sum()
            };
            let work: f64 = (0..=bound)
                .map(|k| (size(q, k) as f64).powi(size(p, k) as i32))
                .sum();
            if work > 1e6 {
                continue;
            }
            let formula =
                polylens_count(&PolyFunctor::from_terms(p), &PolyFunctor::from_terms(q)).unwrap();
            assert_eq!(
                formula,
                Some(common::poly_nat_count(p, q, bound) as u128),
                "{p:?} → {q:?}"
            );
            checked += 1;
        }
    }
    assert!(checked >= 20, "{checked}");
}
